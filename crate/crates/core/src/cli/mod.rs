//! Command-line front end: `solve`, `eval`, `brute`, `saa`, `lb-gen` and
//! `bench`.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::edgecover::GraphInstance;
use crate::error::{invalid, Error, Result};
use crate::facility::FlInstance;
use crate::model::{Distribution, Instance};
use crate::multicut::{McTreeInstance, Pair};
use crate::rng;
use crate::setcover::{saa_sample_count, saa_solve, Inner, VertexCoverGraph};
use crate::verify::{self, random, Algorithm, Case, Solution};

const MATRIX: &str = "\
Algorithms per problem (first is the default):
  setcover       lp-round, greedy, freq-round
  multicover     greedy
  vertexcover    freq-round, lp-round, greedy
  edgecover      exact
  nmfl           lp-round
  facility       pd-round
  multicut-tree  pd-round

Exit codes: 0 success, 1 usage or input error, 2 infeasible, 3 solver failure.";

const FL_SCENARIO: &str = "metric facility location under a scenario distribution has no known constant-factor rounding \
(open problem); supply an independent activation distribution";

#[derive(Parser)]
#[command(name = "unicover", version, about = "Universal stochastic covering solvers", after_help = MATRIX)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a universal mapping and print its expected cost.
    Solve(SolveArgs),
    /// Expected cost of a mapping file.
    Eval(EvalArgs),
    /// Optimal universal mapping by exhaustive search.
    Brute(BruteArgs),
    /// Solve against an empirical distribution built from sampler draws.
    Saa(SaaArgs),
    /// Emit the two-branch lower-bound instance.
    LbGen(LbGenArgs),
    /// Ratio report (CSV) over instance files or random instances.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Setcover,
    Multicover,
    Vertexcover,
    Edgecover,
    Nmfl,
    Facility,
    MulticutTree,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl Kind {
    fn algorithms(self) -> &'static [Algorithm] {
        use Algorithm::*;
        match self {
            Kind::Setcover => &[LpRound, Greedy, FreqRound],
            Kind::Multicover => &[Greedy],
            Kind::Vertexcover => &[FreqRound, LpRound, Greedy],
            Kind::Edgecover => &[Exact],
            Kind::Nmfl => &[LpRound],
            Kind::Facility | Kind::MulticutTree => &[PdRound],
        }
    }

    fn algorithm(self, requested: Option<Algorithm>) -> Result<Algorithm> {
        let allowed = self.algorithms();
        match requested {
            None => Ok(allowed[0]),
            Some(a) if allowed.contains(&a) => Ok(a),
            Some(a) => Err(Error::Unsupported(format!("algorithm {a} does not apply to --problem {self} (see --help)"))),
        }
    }
}

#[derive(Args)]
struct Input {
    #[arg(long, value_enum)]
    problem: Kind,
    #[arg(long)]
    instance: PathBuf,
    /// Distribution file; facility, nmfl and multicut-tree default to the
    /// probabilities in the instance.
    #[arg(long)]
    dist: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_parser = parse_algorithm)]
    algo: Option<Algorithm>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the fractional cover (set cover kinds only).
    #[arg(long)]
    emit_lp: Option<PathBuf>,
    /// Mapping file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    mapping: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BruteArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy)]
enum Samples {
    Auto,
    Count(usize),
}

fn parse_samples(s: &str) -> std::result::Result<Samples, String> {
    if s == "auto" {
        return Ok(Samples::Auto);
    }
    s.parse().map(Samples::Count).map_err(|_| format!("expected a sample count or \"auto\", got {s:?}"))
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct SaaArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_parser = parse_algorithm)]
    algo: Option<Algorithm>,
    /// Number of draws, or `auto` for the uniform-accuracy bound.
    #[arg(long, value_parser = parse_samples)]
    samples: Samples,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LbGenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "big-m")]
    big_m: f64,
    /// Also write instance, branch distributions and both mappings here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    problem: Kind,
    /// Comma-separated; defaults to every algorithm of the problem.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algo: Vec<Algorithm>,
    /// Instance files; random instances are generated when none are given.
    #[arg(long)]
    instance: Vec<PathBuf>,
    /// Distribution files, paired with --instance in order.
    #[arg(long)]
    dist: Vec<PathBuf>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certify against brute-force optima.
    #[arg(long)]
    brute: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn with_probs_fl(fl: FlInstance, dist: Option<Distribution>) -> Result<FlInstance> {
    match dist {
        None => Ok(fl),
        Some(Distribution::Independent(p)) => {
            if p.len() != fl.clients() {
                return Err(invalid(format!("distribution has {} probabilities for {} clients", p.len(), fl.clients())));
            }
            FlInstance::with_ids(p, fl.facility_ids, fl.open_cost, fl.dist, fl.metric)
        }
        Some(_) => Err(Error::Unsupported(FL_SCENARIO.into())),
    }
}

fn with_probs_mc(mc: McTreeInstance, dist: Option<Distribution>) -> Result<McTreeInstance> {
    match dist {
        None => Ok(mc),
        Some(Distribution::Independent(p)) => {
            if p.len() != mc.pairs().len() {
                return Err(invalid(format!("distribution has {} probabilities for {} pairs", p.len(), mc.pairs().len())));
            }
            let pairs = mc.pairs().iter().zip(p).map(|(pr, p)| Pair { p, ..*pr }).collect();
            McTreeInstance::new(mc.nodes(), mc.edges().to_vec(), pairs)
        }
        Some(_) => Err(Error::Unsupported("tree multicut supports independently activated pairs only".into())),
    }
}

fn build_case(kind: Kind, name: String, text: &str, dist: Option<Distribution>) -> Result<Case> {
    let need = |d: Option<Distribution>| d.ok_or_else(|| invalid(format!("--problem {kind} requires --dist")));
    Ok(match kind {
        Kind::Setcover | Kind::Multicover => {
            let inst = Instance::from_json(text)?;
            if kind == Kind::Setcover && inst.is_multicover() {
                return Err(invalid("the instance has requirements above 1; use --problem multicover"));
            }
            Case::Cover { name, inst, dist: need(dist)?, conn: None }
        }
        Kind::Vertexcover => Case::Cover { name, inst: VertexCoverGraph::from_json(text)?.to_instance()?, dist: need(dist)?, conn: None },
        Kind::Edgecover => Case::EdgeCover { name, graph: GraphInstance::from_json(text)?, dist: need(dist)? },
        Kind::Nmfl => {
            let fl = FlInstance::from_json(text)?;
            let dist = match dist {
                Some(d) => d,
                None => fl.distribution()?,
            };
            let (inst, conn) = fl.to_set_cover()?;
            Case::Cover { name, inst, dist, conn: Some(conn) }
        }
        Kind::Facility => {
            let fl = FlInstance::from_json(text)?;
            if matches!(dist, Some(Distribution::Scenario(_))) {
                return Err(Error::Unsupported(FL_SCENARIO.into()));
            }
            if !fl.metric {
                return Err(invalid("the instance is not marked metric; use --problem nmfl for arbitrary connection costs"));
            }
            Case::Facility { name, inst: with_probs_fl(fl, dist)? }
        }
        Kind::MulticutTree => Case::Multicut { name, inst: with_probs_mc(McTreeInstance::from_json(text)?, dist)? },
    })
}

fn load(input: &Input) -> Result<Case> {
    let dist = input.dist.as_deref().map(|p| Distribution::from_json(&read(p)?)).transpose()?;
    build_case(input.problem, input.instance.display().to_string(), &read(&input.instance)?, dist)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write(p, &format!("{text}\n")),
        None => Ok(writeln!(out, "{text}")?),
    }
}

fn cover_instance(case: &Case) -> Option<&Instance> {
    match case {
        Case::Cover { inst, .. } => Some(inst),
        _ => None,
    }
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let case = load(&a.input)?;
    let algo = a.input.problem.algorithm(a.algo)?;
    if a.emit_lp.is_some() && cover_instance(&case).is_none() {
        return Err(invalid("--emit-lp applies to set cover problem kinds only"));
    }
    let run = verify::run_algorithm(&case, algo, rng::stream_seed(a.seed, "solve"))?;
    if let (Some(path), Some(frac), Some(inst)) = (&a.emit_lp, &run.fractional, cover_instance(&case)) {
        write(path, &format!("{}\n", frac.to_json(inst)?))?;
    }
    emit(out, a.out.as_deref(), &case.problem().solution_to_json(&run.solution))?;
    writeln!(out, "expected_cost: {}", run.cost)?;
    if let Some(lp) = run.lp_value {
        writeln!(out, "lp_value: {lp}")?;
    }
    Ok(())
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let case = load(&a.input)?;
    let problem = case.problem();
    let sol = problem.solution_from_json(&read(&a.mapping)?)?;
    let est = verify::expected_cost(&problem, &sol, &case.distribution()?, rng::stream_seed(a.seed, "eval"))?;
    writeln!(out, "expected_cost: {}", est.mean)?;
    if est.samples > 0 {
        writeln!(out, "std_error: {}", est.std_error)?;
        writeln!(out, "samples: {}", est.samples)?;
    }
    Ok(())
}

fn brute(a: &BruteArgs, out: &mut dyn Write) -> Result<()> {
    let case = load(&a.input)?;
    let problem = case.problem();
    let (sol, cost) = verify::brute_universal(&problem, &case.distribution()?)?;
    emit(out, a.out.as_deref(), &problem.solution_to_json(&sol))?;
    writeln!(out, "expected_cost: {cost}")?;
    Ok(())
}

fn saa(a: &SaaArgs, out: &mut dyn Write) -> Result<()> {
    let case = load(&a.input)?;
    let Case::Cover { inst, dist, conn, .. } = &case else {
        return Err(Error::Unsupported(format!("saa applies to set cover problem kinds, not {}", a.input.problem)));
    };
    let requested = a.algo.or_else(|| a.input.problem.algorithms().iter().copied().find(|x| matches!(x, Algorithm::LpRound | Algorithm::Greedy)));
    let inner = match a.input.problem.algorithm(requested)? {
        Algorithm::LpRound => Inner::LpRound,
        Algorithm::Greedy => Inner::Greedy,
        other => return Err(Error::Unsupported(format!("saa supports lp-round and greedy inner solvers, not {other}"))),
    };
    let samples = match a.samples {
        Samples::Count(k) => k,
        Samples::Auto => saa_sample_count(inst.n(), inst.m(), a.epsilon, None)?.samples,
    };
    let hidden = dist.as_sampler(inst.n());
    let result = saa_solve(inst, &hidden, samples, inner, a.seed, conn.as_ref())?;
    let problem = case.problem();
    let sol = Solution::Cover(result.mapping);
    emit(out, a.out.as_deref(), &problem.solution_to_json(&sol))?;
    writeln!(out, "samples: {samples}")?;
    writeln!(out, "empirical_cost: {}", problem.exact_cost(&sol, &result.empirical)?)?;
    writeln!(out, "expected_cost: {}", problem.exact_cost(&sol, dist)?)?;
    Ok(())
}

fn lb_gen(a: &LbGenArgs, out: &mut dyn Write) -> Result<()> {
    let lb = verify::lb_instance(a.n, a.big_m)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| invalid(format!("cannot create {}: {e}", dir.display())))?;
        write(&dir.join("instance.json"), &lb.instance.to_json())?;
        write(&dir.join("single_branch.json"), &lb.single_branch.to_json()?)?;
        write(&dir.join("whole_branch.json"), &lb.whole_branch.to_json()?)?;
        write(&dir.join("phi_singleton.json"), &lb.phi_singleton.to_json(&lb.instance))?;
        write(&dir.join("phi_big.json"), &lb.phi_big.to_json(&lb.instance))?;
    }
    let summary = json!({
        "n": lb.n,
        "M": lb.big_m,
        "singleton_cost": lb.singleton_cost,
        "big_cost": lb.big_cost,
        "single_branch_ratio": lb.single_branch_ratio()?,
        "whole_branch_ratio": lb.whole_branch_ratio()?,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

fn random_case(kind: Kind, rng: &mut ChaCha8Rng, size: usize, name: String) -> Result<Case> {
    let s = size.max(2);
    Ok(match kind {
        Kind::Setcover | Kind::Multicover => {
            let inst = random::set_cover(rng, s, s, if kind == Kind::Multicover { 2 } else { 1 })?;
            Case::Cover { name, inst, dist: random::scenarios(rng, s, 4)?, conn: None }
        }
        Kind::Vertexcover => {
            let inst = random::vertex_cover_graph(rng, s, 2 * s).to_instance()?;
            let dist = random::independent(rng, inst.n())?;
            Case::Cover { name, inst, dist, conn: None }
        }
        Kind::Edgecover => Case::EdgeCover { name, graph: random::graph(rng, s, 2 * s)?, dist: random::independent(rng, s)? },
        Kind::Nmfl => {
            let fl = random::metric_facility(rng, s, s)?;
            let (inst, conn) = fl.to_set_cover()?;
            Case::Cover { name, inst, dist: fl.distribution()?, conn: Some(conn) }
        }
        Kind::Facility => Case::Facility { name, inst: random::metric_facility(rng, s, s)? },
        Kind::MulticutTree => Case::Multicut { name, inst: random::tree(rng, s + 2, s)? },
    })
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let algorithms = if a.algo.is_empty() { a.problem.algorithms().to_vec() } else { a.algo.clone() };
    for &algo in &algorithms {
        a.problem.algorithm(Some(algo))?;
    }
    let cases = if a.instance.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(rng::stream_seed(a.seed, "bench-instances"));
        (0..a.count).map(|i| random_case(a.problem, &mut rng, a.size, format!("{}-{i}", a.problem))).collect::<Result<Vec<_>>>()?
    } else {
        if !a.dist.is_empty() && a.dist.len() != a.instance.len() {
            return Err(invalid(format!("{} --dist files for {} --instance files", a.dist.len(), a.instance.len())));
        }
        a.instance
            .iter()
            .enumerate()
            .map(|(i, path)| {
                let dist = a.dist.get(i).map(|p| Distribution::from_json(&read(p)?)).transpose()?;
                build_case(a.problem, path.display().to_string(), &read(path)?, dist)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let report = verify::ratio_report(&cases, &algorithms, a.seed, a.brute);
    if let Some(path) = &a.json {
        write(path, &format!("{}\n", report.to_json()))?;
    }
    let csv = report.to_csv()?;
    match &a.out {
        Some(p) => write(p, &csv),
        None => Ok(out.write_all(csv.as_bytes())?),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Unsupported(_) | Error::NotExactlyEvaluable | Error::Io(_) | Error::Json(_) => 1,
        Error::Infeasible(_) => 2,
        _ => 3,
    }
}

/// Runs the command line `argv` (program name first), writing results to
/// `out` and a one-line diagnostic to `err` on failure. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let _ = writeln!(err, "{}", text.lines().next().unwrap_or("usage error"));
            return 1;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Brute(a) => brute(a, out),
        Command::Saa(a) => saa(a, out),
        Command::LbGen(a) => lb_gen(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.to_string().replace('\n', " "));
            exit_code(&e)
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .format_target(false)
        .try_init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("unicover").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = call(&["solve", "--problem", "setcover"]);
        assert_eq!(code, 1);
        assert_eq!(err.lines().count(), 1);
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_lists_the_matrix() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("multicut-tree  pd-round"));
    }

    #[test]
    fn algorithm_matrix() {
        assert_eq!(Kind::Vertexcover.algorithm(None).unwrap(), Algorithm::FreqRound);
        assert!(matches!(Kind::Multicover.algorithm(Some(Algorithm::LpRound)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lb_gen_prints_closed_forms() {
        let (code, out, _) = call(&["lb-gen", "--n", "4", "--big-m", "100"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["singleton_cost"].as_f64().unwrap() - 5.9).abs() < 1e-12);
        assert!((v["big_cost"].as_f64().unwrap() - 10.9).abs() < 1e-12);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Infeasible("x".into())), 2);
        assert_eq!(exit_code(&Error::RetryLimit { attempts: 3 }), 3);
        assert_eq!(exit_code(&Error::Unsupported("x".into())), 1);
    }
}
