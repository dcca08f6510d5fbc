mod common;

use std::f64::consts::E;
use std::fs;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unicover::edgecover::universal_edge_cover;
use unicover::facility::{round_fl, solve_fl, solve_lp_fl};
use unicover::model::{empirical_dist, eval_g, sample_scenario, Distribution, ElementSet};
use unicover::multicut::{round_mc_tree, solve_lp_mc_tree, solve_mc_tree};
use unicover::rng;
use unicover::setcover::{
    greedy_multicover, harmonic, round_frequency, round_randomized, saa_sample_count, saa_solve, solve_conf_lp, Inner,
    SAA_DEFAULT_EPSILON,
};
use unicover::submodular::{minimize, minimize_ratio, SubmodularOracle};
use unicover::verify::{brute_universal, lb_instance, random, Problem};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cover_suite(seed: u64, count: usize, max_n: usize, max_m: usize, max_req: u32, min_n: usize) -> Vec<(unicover::model::Instance, Distribution)> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(min_n..=max_n);
            let m = r.gen_range(1..=max_m);
            let inst = random::set_cover(&mut r, n, m, max_req).unwrap();
            let k = r.gen_range(1..=5);
            (inst, random::scenarios(&mut r, n, k).unwrap())
        })
        .collect()
}

fn relaxation_soundness() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (i, (inst, dist)) in cover_suite(1, 200, 6, 5, 1, 1).iter().enumerate() {
        let lp = solve_conf_lp(inst, dist, None).map_err(|e| format!("instance {i}: {e}"))?.value;
        let (_, opt) = brute_universal(&Problem::Cover { inst: inst.clone(), conn: None }, dist).map_err(|e| e.to_string())?;
        let oracle = common::brute_cover(inst, dist);
        check((opt - oracle).abs() <= 1e-9, || format!("instance {i}: brute force {opt} but enumeration oracle {oracle}"))?;
        check(lp <= opt + 1e-6, || format!("instance {i}: LP {lp} exceeds OPT {opt}"))?;
        if opt > 0.0 {
            worst = worst.max(lp / opt);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("200 instances, max LP/OPT {worst:.4}, {secs:.1} s"))
}

fn column_generation_exactness() -> Outcome {
    let mut worst = 0.0f64;
    for (i, (inst, dist)) in cover_suite(2, 50, 5, 5, 1, 1).iter().enumerate() {
        let frac = solve_conf_lp(inst, dist, None).map_err(|e| format!("instance {i}: {e}"))?;
        let full = common::full_conf_lp(inst, dist);
        let rel = (frac.value - full).abs() / full.abs().max(1e-12);
        check(rel <= 1e-6 || (frac.value - full).abs() <= 1e-12, || format!("instance {i}: cutting plane {} vs full {full}", frac.value))?;
        worst = worst.max(rel);
    }
    Ok(format!("50 instances, max relative gap {worst:.1e}"))
}

fn randomized_rounding_bound() -> Outcome {
    let suite = cover_suite(3, 50, 6, 5, 1, 2);
    let mut retries = 0usize;
    let mut worst = 0.0f64;
    for (i, (inst, dist)) in suite.iter().enumerate() {
        let frac = solve_conf_lp(inst, dist, None).map_err(|e| e.to_string())?;
        let bound = 4.0 * (inst.n() as f64).ln();
        for s in 0..10u64 {
            let out = round_randomized(&frac, inst, dist, None, 1000 * i as u64 + s).map_err(|e| format!("instance {i} seed {s}: {e}"))?;
            check(common::feasible(inst, &out.mapping), || format!("instance {i} seed {s}: infeasible mapping"))?;
            let cost = common::mapping_cost(inst, dist, &out.mapping.assignment);
            check(cost <= bound * frac.value + 1e-9, || format!("instance {i} seed {s}: cost {cost} > {bound} x {}", frac.value))?;
            retries += out.retries();
            if frac.value > 0.0 {
                worst = worst.max(cost / (bound * frac.value));
            }
        }
    }
    let mean = retries as f64 / 500.0;
    check(mean <= 2.0, || format!("mean retries {mean}"))?;
    Ok(format!("500 runs, mean retries {mean:.3}, max cost/(4 ln n LP) {worst:.3}"))
}

fn greedy_harmonic_bound() -> Outcome {
    let mut worst = 0.0f64;
    for (i, (inst, dist)) in cover_suite(4, 200, 6, 5, 2, 1).iter().enumerate() {
        let out = greedy_multicover(inst, dist).map_err(|e| format!("instance {i}: {e}"))?;
        let lp = solve_conf_lp(inst, dist, None).map_err(|e| e.to_string())?.value;
        let h = harmonic(inst.n());
        check(common::feasible(inst, &out.mapping), || format!("instance {i}: infeasible"))?;
        let cost = common::mapping_cost(inst, dist, &out.mapping.assignment);
        check(cost <= h * lp + 1e-9, || format!("instance {i}: cost {cost} > H_n {h} x LP {lp}"))?;
        // Scaled duals against every (S, B) with the oracle g.
        for (s, set) in inst.sets().iter().enumerate() {
            for b in common::subsets(&set.elements.to_vec()) {
                let lhs = (b.iter().map(|&u| out.certificate.alpha[u]).sum::<f64>() - out.certificate.beta[s]) / h;
                let rhs = set.cost * common::g(dist, &b);
                check(lhs <= rhs + 1e-9, || format!("instance {i}: dual constraint ({s}, {b:?}) violated by {}", lhs - rhs))?;
            }
        }
        if lp > 0.0 {
            worst = worst.max(cost / lp);
        }
    }
    Ok(format!("200 instances, max cost/LP {worst:.4}"))
}

fn vertex_cover_factor_two() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let nodes = r.gen_range(2..=6);
        let graph = random::vertex_cover_graph(&mut r, nodes, 8);
        let inst = graph.to_instance().map_err(|e| e.to_string())?;
        let dist = if i % 2 == 0 {
            random::independent(&mut r, inst.n()).unwrap()
        } else {
            random::scenarios(&mut r, inst.n(), 4).unwrap()
        };
        check(inst.max_frequency() == 2, || format!("graph {i}: frequency {}", inst.max_frequency()))?;
        let frac = solve_conf_lp(&inst, &dist, None).map_err(|e| e.to_string())?;
        let phi = round_frequency(&frac, &inst).map_err(|e| format!("graph {i}: {e}"))?;
        check(common::feasible(&inst, &phi), || format!("graph {i}: infeasible"))?;
        let cost = common::mapping_cost(&inst, &dist, &phi.assignment);
        check(cost <= 2.0 * frac.value + 1e-9, || format!("graph {i}: cost {cost} > 2 x {}", frac.value))?;
        if frac.value > 0.0 {
            worst = worst.max(cost / frac.value);
        }
    }
    Ok(format!("100 graphs, max cost/LP {worst:.4}"))
}

fn edge_cover_exactness() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        let v = r.gen_range(2..=6);
        let graph = random::graph(&mut r, v, 2 * v).unwrap();
        let dist = if i % 2 == 0 { random::independent(&mut r, v).unwrap() } else { random::scenarios(&mut r, v, 4).unwrap() };
        let sol = universal_edge_cover(&graph, &dist).map_err(|e| format!("graph {i}: {e}"))?;
        let (_, opt) = brute_universal(&Problem::EdgeCover(graph), &dist).map_err(|e| e.to_string())?;
        check((sol.cost - opt).abs() <= 1e-9, || format!("graph {i}: {} vs brute {opt}", sol.cost))?;
    }
    Ok("50 graphs, all equal to brute force".into())
}

fn facility_constant() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let factor = 4.0 * E / (E - 1.0);
    let (mut worst_opt, mut worst_lp) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let (c, f) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let inst = random::metric_facility(&mut r, c, f).unwrap();
        let dist = inst.distribution().unwrap();
        let (phi, _) = solve_fl(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        let cost = phi.expected_cost(&inst).map_err(|e| e.to_string())?;
        let (_, opt) = brute_universal(&Problem::Facility(inst.clone()), &dist).map_err(|e| e.to_string())?;
        check(cost <= factor * opt + 1e-9, || format!("instance {i}: cost {cost} > {factor:.4} x OPT {opt}"))?;
        let frac = solve_lp_fl(&inst).map_err(|e| e.to_string())?;
        let rounded = round_fl(&inst, &frac).map_err(|e| e.to_string())?.expected_cost(&inst).map_err(|e| e.to_string())?;
        check(rounded <= 4.0 * frac.value + 1e-9, || format!("instance {i}: rounding {rounded} > 4 x LP {}", frac.value))?;
        if opt > 0.0 {
            worst_opt = worst_opt.max(cost / opt);
        }
        if frac.value > 0.0 {
            worst_lp = worst_lp.max(rounded / frac.value);
        }
    }
    Ok(format!("100 instances, max cost/OPT {worst_opt:.4}, max cost/LP {worst_lp:.4}"))
}

fn multicut_constant() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let factor = 3.0 * E / (E - 1.0);
    let (mut worst_opt, mut worst_lp) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let (nodes, pairs) = (r.gen_range(2..=7), r.gen_range(1..=4));
        let inst = random::tree(&mut r, nodes, pairs).unwrap();
        let dist = inst.distribution().unwrap();
        let (phi, _) = solve_mc_tree(&inst).map_err(|e| format!("tree {i}: {e}"))?;
        let cost = phi.expected_cost(&inst).map_err(|e| e.to_string())?;
        let (_, opt) = brute_universal(&Problem::Multicut(inst.clone()), &dist).map_err(|e| e.to_string())?;
        check(cost <= factor * opt + 1e-9, || format!("tree {i}: cost {cost} > {factor:.4} x OPT {opt}"))?;
        let frac = solve_lp_mc_tree(&inst).map_err(|e| e.to_string())?;
        let rounded = round_mc_tree(&inst, &frac).expected_cost(&inst).map_err(|e| e.to_string())?;
        check(rounded <= 3.0 * frac.value + 1e-9, || format!("tree {i}: rounding {rounded} > 3 x LP {}", frac.value))?;
        if opt > 0.0 {
            worst_opt = worst_opt.max(cost / opt);
        }
        if frac.value > 0.0 {
            worst_lp = worst_lp.max(rounded / frac.value);
        }
    }
    Ok(format!("100 trees, max cost/OPT {worst_opt:.4}, max cost/LP {worst_lp:.4}"))
}

fn random_dist(r: &mut ChaCha8Rng, n: usize) -> Distribution {
    if r.gen_bool(0.5) {
        random::independent(r, n).unwrap()
    } else {
        let k = r.gen_range(1..=5);
        random::scenarios(r, n, k).unwrap()
    }
}

fn oracle_equivalence() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let (mut worst_min, mut worst_ratio) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let n = r.gen_range(1..=12);
        let dist = random_dist(&mut r, n);
        let c = r.gen_range(0.1..5.0);
        let w: Vec<f64> = (0..n).map(|_| r.gen_range(-1.5..1.0)).collect();
        let value = |b: &ElementSet| c * eval_g(&dist, b).unwrap() + b.iter().map(|u| w[u]).sum::<f64>();
        let f = SubmodularOracle::new(ElementSet::full(n), value);
        let all: Vec<Vec<usize>> = common::subsets(&(0..n).collect::<Vec<_>>());
        let brute_value = |b: &Vec<usize>| c * common::g(&dist, b) + b.iter().map(|&u| w[u]).sum::<f64>();

        let best = all.iter().map(brute_value).fold(f64::INFINITY, f64::min);
        let got = minimize(&f).map_err(|e| format!("function {i}: {e}"))?.value;
        check((got - best).abs() <= 1e-7, || format!("function {i}: minimize {got} vs enumeration {best}"))?;
        worst_min = worst_min.max((got - best).abs());

        let best_ratio = all.iter().filter(|b| !b.is_empty()).map(|b| brute_value(b) / b.len() as f64).fold(f64::INFINITY, f64::min);
        let got_ratio = minimize_ratio(&f).map_err(|e| format!("function {i}: {e}"))?.ratio;
        check((got_ratio - best_ratio).abs() <= 1e-7, || format!("function {i}: minimize_ratio {got_ratio} vs enumeration {best_ratio}"))?;
        worst_ratio = worst_ratio.max((got_ratio - best_ratio).abs());
    }
    Ok(format!("500 functions, max error {worst_min:.1e} (minimum), {worst_ratio:.1e} (ratio)"))
}

/// Empirical `ĝ(B)` for every `B ⊆ {0..n-1}` from scenario weights:
/// `1 - P[X ⊆ complement of B]`, by a subset-sum transform.
fn all_empirical(dist: &Distribution, n: usize) -> Vec<f64> {
    let Distribution::Scenario(list) = dist else { panic!("empirical distributions are scenario lists") };
    let full = (1usize << n) - 1;
    let mut inside = vec![0.0; 1 << n];
    for s in list {
        inside[s.elements.low_bits() as usize] += s.prob;
    }
    for bit in 0..n {
        for mask in 0..=full {
            if mask >> bit & 1 == 1 {
                inside[mask] += inside[mask ^ (1 << bit)];
            }
        }
    }
    (0..=full).map(|b| 1.0 - inside[full ^ b]).collect()
}

fn saa_accuracy() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(10);
    let eps = SAA_DEFAULT_EPSILON;
    let mut report = Vec::new();
    for (f, &n) in [4usize, 7, 10].iter().enumerate() {
        let m = n;
        let inst = random::set_cover(&mut r, n, m, 1).unwrap();
        let dist = if f == 1 { random::scenarios(&mut r, n, 5).unwrap() } else { random::independent(&mut r, n).unwrap() };
        let count = saa_sample_count(n, m, eps, None).map_err(|e| e.to_string())?;
        let truth: Vec<f64> = (0..1usize << n).map(|b| common::g(&dist, &(0..n).filter(|u| b >> u & 1 == 1).collect::<Vec<_>>())).collect();
        let floor = 1.0 / n as f64;
        let mut good = 0;
        for rerun in 0..100u64 {
            let root = rng::stream_seed(rerun, "acceptance-saa");
            let draws: Vec<ElementSet> = (0..count.samples as u64).map(|i| sample_scenario(&dist, rng::child_seed(root, i))).collect();
            let est = all_empirical(&empirical_dist(&draws).map_err(|e| e.to_string())?, n);
            if est.iter().zip(&truth).all(|(e, g)| (e - g).abs() <= eps * g.max(floor)) {
                good += 1;
            }
        }
        check(good >= 99, || format!("n = {n}: Chernoff check held in {good}/100 reruns"))?;

        let sampler = dist.as_sampler(n);
        let solves = if n <= 7 { 5 } else { 2 };
        for seed in 0..solves {
            let out = saa_solve(&inst, &sampler, count.samples, Inner::LpRound, seed, None).map_err(|e| format!("n = {n} seed {seed}: {e}"))?;
            check(common::feasible(&inst, &out.mapping), || format!("n = {n} seed {seed}: infeasible mapping"))?;
        }
        report.push(format!("n={n}: N={} {good}/100", count.samples));
    }
    Ok(report.join(", "))
}

fn lower_bound_generator() -> Outcome {
    let lb = lb_instance(4, 100.0).map_err(|e| e.to_string())?;
    check(lb.singleton_cost == 5.9, || format!("singleton closed form {}", lb.singleton_cost))?;
    check(lb.big_cost == 10.9, || format!("big closed form {}", lb.big_cost))?;
    let single = common::mapping_cost(&lb.instance, &lb.single_branch, &lb.phi_singleton.assignment);
    let big = common::mapping_cost(&lb.instance, &lb.whole_branch, &lb.phi_big.assignment);
    let eval_single = lb.phi_singleton.expected_cost(&lb.instance, &lb.single_branch.evaluator().unwrap(), None).unwrap();
    let eval_big = lb.phi_big.expected_cost(&lb.instance, &lb.whole_branch.evaluator().unwrap(), None).unwrap();
    for (got, want) in [(single, 5.9), (big, 10.9), (eval_single, 5.9), (eval_big, 10.9)] {
        check((got - want).abs() <= 1e-9, || format!("evaluated {got}, closed form {want}"))?;
    }
    let mut ratios = Vec::new();
    for n in [4, 16, 64] {
        let lb = lb_instance(n, 100.0).map_err(|e| e.to_string())?;
        ratios.push((lb.single_branch_ratio().unwrap(), lb.whole_branch_ratio().unwrap()));
    }
    for w in ratios.windows(2) {
        check(w[1].0 > w[0].0 && w[1].1 > w[0].1, || format!("ratios not increasing: {ratios:?}"))?;
    }
    let shown: Vec<String> = ratios.iter().map(|(a, b)| format!("{a:.3}/{b:.3}")).collect();
    Ok(format!("5.9 and 10.9 reproduced; cross-branch ratios over n=4,16,64: {}", shown.join(", ")))
}

fn coverage_function_properties() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(12);
    for i in 0..500 {
        let n = r.gen_range(1..=12);
        let dist = random_dist(&mut r, n);
        let a: ElementSet = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        let b: ElementSet = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        let g = |s: &ElementSet| eval_g(&dist, s).unwrap();
        let (ga, gb, gu, gi) = (g(&a), g(&b), g(&a.union(&b)), g(&a.intersection(&b)));
        check((ga - common::g(&dist, &a.to_vec())).abs() <= 1e-12, || format!("triple {i}: g disagrees with its definition"))?;
        check(ga + gb >= gu + gi - 1e-12, || format!("triple {i}: submodularity fails"))?;
        check(gi <= ga + 1e-12 && ga <= gu + 1e-12 && gb <= gu + 1e-12, || format!("triple {i}: monotonicity fails"))?;
        check(gu <= ga + gb + 1e-12, || format!("triple {i}: subadditivity fails"))?;
    }
    Ok("500 triples".into())
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut r = ChaCha8Rng::seed_from_u64(13);
    let cover = random::set_cover(&mut r, 5, 4, 1).unwrap();
    let multi = random::set_cover(&mut r, 4, 4, 2).unwrap();
    let vc = random::vertex_cover_graph(&mut r, 5, 6);
    let graph = random::graph(&mut r, 5, 7).unwrap();
    let fl = random::metric_facility(&mut r, 3, 3).unwrap();
    let tree = random::tree(&mut r, 6, 3).unwrap();
    let vc_edges = vc.edges.len();
    let scen = |r: &mut ChaCha8Rng, n| random::scenarios(r, n, 4).unwrap().to_json().unwrap();
    let files = [
        ("cover.json", cover.to_json()),
        ("cover_dist.json", scen(&mut r, 5)),
        ("multi.json", multi.to_json()),
        ("multi_dist.json", scen(&mut r, 4)),
        ("vc.json", vc.to_json()),
        ("vc_dist.json", random::independent(&mut r, vc_edges).unwrap().to_json().unwrap()),
        ("graph.json", graph.to_json()),
        ("graph_dist.json", random::independent(&mut r, 5).unwrap().to_json().unwrap()),
        ("fl.json", fl.to_json()),
        ("tree.json", tree.to_json()),
    ];
    for (name, text) in &files {
        fs::write(dir.path().join(name), text).map_err(|e| e.to_string())?;
    }
    let inputs: [(&str, &str, Option<&str>, &[&str]); 7] = [
        ("setcover", "cover.json", Some("cover_dist.json"), &["lp-round", "greedy", "freq-round"]),
        ("multicover", "multi.json", Some("multi_dist.json"), &["greedy"]),
        ("vertexcover", "vc.json", Some("vc_dist.json"), &["freq-round", "lp-round", "greedy"]),
        ("edgecover", "graph.json", Some("graph_dist.json"), &["exact"]),
        ("nmfl", "fl.json", None, &["lp-round"]),
        ("facility", "fl.json", None, &["pd-round"]),
        ("multicut-tree", "tree.json", None, &["pd-round"]),
    ];
    let mut invocations: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for (k, (problem, inst, dist, algos)) in inputs.iter().enumerate() {
        let mut base = vec!["--problem", problem, "--instance", inst];
        if let Some(d) = dist {
            base.extend(["--dist", d]);
        }
        for algo in algos.iter() {
            let out = format!("solve_{k}_{algo}.json");
            let mut args = vec!["solve"];
            args.extend(&base);
            args.extend(["--algo", algo, "--seed", "42", "--out", &out]);
            let mut produced = vec![out.clone()];
            if problem.contains("cover") && *problem != "edgecover" || *problem == "nmfl" {
                args.extend(["--emit-lp", "lp.json"]);
                produced.push("lp.json".into());
            }
            invocations.push((owned(&args), produced));
            let mut args = vec!["eval"];
            args.extend(&base);
            args.extend(["--mapping", &out, "--seed", "42"]);
            invocations.push((owned(&args), vec![]));
        }
        let mut args = vec!["brute"];
        args.extend(&base);
        invocations.push((owned(&args), vec![]));
        if ["setcover", "multicover", "vertexcover", "nmfl"].contains(problem) {
            let mut args = vec!["saa"];
            args.extend(&base);
            args.extend(["--samples", "300", "--seed", "42"]);
            invocations.push((owned(&args), vec![]));
        }
        let mut args = vec!["bench", "--problem", problem, "--count", "3", "--seed", "42", "--brute", "--json", "bench.json"];
        args.extend(["--size", "4"]);
        invocations.push((owned(&args), vec!["bench.json".into()]));
    }
    invocations.push((owned(&["lb-gen", "--n", "9", "--big-m", "64", "--out-dir", "lb"]), owned(&["lb/instance.json", "lb/phi_big.json"])));
    invocations.push((owned(&["solve", "--problem", "setcover", "--instance", "missing.json", "--dist", "cover_dist.json"]), vec![]));

    let run = |args: &[String], files: &[String]| -> (Option<i32>, Vec<u8>, Vec<u8>, Vec<Vec<u8>>) {
        let o = Command::new(env!("CARGO_BIN_EXE_unicover")).current_dir(dir.path()).args(args).output().unwrap();
        let contents = files.iter().map(|f| fs::read(dir.path().join(f)).unwrap_or_default()).collect();
        (o.status.code(), o.stdout, o.stderr, contents)
    };
    for (args, files) in &invocations {
        let first = run(args, files);
        let second = run(args, files);
        check(first == second, || format!("`{}` differs between runs", args.join(" ")))?;
        let expect_ok = !args.contains(&"missing.json".to_string());
        check((first.0 == Some(0)) == expect_ok, || format!("`{}` exited {:?}: {}", args.join(" "), first.0, String::from_utf8_lossy(&first.2)))?;
    }
    Ok(format!("{} invocations byte-identical", invocations.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("relaxation soundness", relaxation_soundness),
        ("column-generation exactness", column_generation_exactness),
        ("randomized rounding bound", randomized_rounding_bound),
        ("greedy harmonic bound", greedy_harmonic_bound),
        ("vertex cover factor 2", vertex_cover_factor_two),
        ("edge cover exactness", edge_cover_exactness),
        ("facility location constant", facility_constant),
        ("tree multicut constant", multicut_constant),
        ("submodular oracle equivalence", oracle_equivalence),
        ("SAA uniform accuracy", saa_accuracy),
        ("lower-bound generator", lower_bound_generator),
        ("coverage function properties", coverage_function_properties),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1} s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1} s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

