use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{brute_universal, Problem, Solution};
use crate::edgecover::{universal_edge_cover, GraphInstance};
use crate::error::{invalid, Error, Result};
use crate::facility::{solve_fl, FlInstance};
use crate::model::{Distribution, Instance};
use crate::multicut::{solve_mc_tree, McTreeInstance};
use crate::rng;
use crate::setcover::{greedy_multicover, round_frequency, round_randomized, solve_conf_lp, ConnectionCosts, FractionalCover};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    LpRound,
    Greedy,
    FreqRound,
    Exact,
    PdRound,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::LpRound, Algorithm::Greedy, Algorithm::FreqRound, Algorithm::Exact, Algorithm::PdRound];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LpRound => "lp-round",
            Algorithm::Greedy => "greedy",
            Algorithm::FreqRound => "freq-round",
            Algorithm::Exact => "exact",
            Algorithm::PdRound => "pd-round",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| invalid(format!("unknown algorithm {s:?} (expected lp-round, greedy, freq-round, exact or pd-round)")))
    }
}

/// One benchmark instance together with its request distribution.
#[derive(Debug, Clone)]
pub enum Case {
    Cover { name: String, inst: Instance, dist: Distribution, conn: Option<ConnectionCosts> },
    Facility { name: String, inst: FlInstance },
    Multicut { name: String, inst: McTreeInstance },
    EdgeCover { name: String, graph: GraphInstance, dist: Distribution },
}

impl Case {
    pub fn name(&self) -> &str {
        match self {
            Case::Cover { name, .. } | Case::Facility { name, .. } | Case::Multicut { name, .. } | Case::EdgeCover { name, .. } => name,
        }
    }

    pub fn problem(&self) -> Problem {
        match self {
            Case::Cover { inst, conn, .. } => Problem::Cover { inst: inst.clone(), conn: conn.clone() },
            Case::Facility { inst, .. } => Problem::Facility(inst.clone()),
            Case::Multicut { inst, .. } => Problem::Multicut(inst.clone()),
            Case::EdgeCover { graph, .. } => Problem::EdgeCover(graph.clone()),
        }
    }

    pub fn distribution(&self) -> Result<Distribution> {
        match self {
            Case::Cover { dist, .. } | Case::EdgeCover { dist, .. } => Ok(dist.clone()),
            Case::Facility { inst, .. } => inst.distribution(),
            Case::Multicut { inst, .. } => inst.distribution(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlgorithmRun {
    pub solution: Solution,
    pub cost: f64,
    /// Value of the relaxation the algorithm is analysed against, if any.
    pub lp_value: Option<f64>,
    pub fractional: Option<FractionalCover>,
}

fn unsupported(case: &Case, algo: Algorithm) -> Error {
    let kind = match case {
        Case::Cover { .. } => "set cover",
        Case::Facility { .. } => "facility location",
        Case::Multicut { .. } => "tree multicut",
        Case::EdgeCover { .. } => "edge cover",
    };
    Error::Unsupported(format!("algorithm {algo} does not apply to {kind}"))
}

pub fn run_algorithm(case: &Case, algo: Algorithm, seed: u64) -> Result<AlgorithmRun> {
    match (case, algo) {
        (Case::Cover { inst, dist, conn, .. }, Algorithm::LpRound | Algorithm::FreqRound | Algorithm::Greedy) => {
            let conn = conn.as_ref();
            if algo == Algorithm::Greedy && conn.is_some() {
                return Err(Error::Unsupported("greedy does not handle connection costs; use lp-round".into()));
            }
            let frac = solve_conf_lp(inst, dist, conn)?;
            let (mapping, cost) = match algo {
                Algorithm::LpRound => {
                    let r = round_randomized(&frac, inst, dist, conn, seed)?;
                    (r.mapping, r.cost)
                }
                Algorithm::FreqRound => {
                    let m = round_frequency(&frac, inst)?;
                    let cost = m.expected_cost(inst, &dist.evaluator()?, conn)?;
                    (m, cost)
                }
                _ => {
                    let g = greedy_multicover(inst, dist)?;
                    (g.mapping, g.cost)
                }
            };
            let lp_value = Some(frac.value);
            Ok(AlgorithmRun { solution: Solution::Cover(mapping), cost, lp_value, fractional: Some(frac) })
        }
        (Case::EdgeCover { graph, dist, .. }, Algorithm::Exact) => {
            let sol = universal_edge_cover(graph, dist)?;
            Ok(AlgorithmRun { solution: Solution::EdgeCover(sol.mapping), cost: sol.cost, lp_value: None, fractional: None })
        }
        (Case::Facility { inst, .. }, Algorithm::PdRound) => {
            let (mapping, frac) = solve_fl(inst)?;
            let cost = mapping.expected_cost(inst)?;
            Ok(AlgorithmRun { solution: Solution::Facility(mapping), cost, lp_value: Some(frac.value), fractional: None })
        }
        (Case::Multicut { inst, .. }, Algorithm::PdRound) => {
            let (mapping, frac) = solve_mc_tree(inst)?;
            let cost = mapping.expected_cost(inst)?;
            Ok(AlgorithmRun { solution: Solution::Multicut(mapping), cost, lp_value: Some(frac.value), fractional: None })
        }
        _ => Err(unsupported(case, algo)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub cost: Option<f64>,
    pub lp_value: Option<f64>,
    pub brute_opt: Option<f64>,
    pub ratio_vs_lp: Option<f64>,
    pub ratio_vs_opt: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub algorithm: Algorithm,
    pub rows: usize,
    pub failed: usize,
    pub max_ratio_vs_lp: Option<f64>,
    pub mean_ratio_vs_lp: Option<f64>,
    pub max_ratio_vs_opt: Option<f64>,
    pub mean_ratio_vs_opt: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RatioReport {
    pub rows: Vec<ReportRow>,
    pub summary: Vec<Summary>,
}

/// `cost / base`, with `0/0 = 1`.
fn ratio(cost: f64, base: f64) -> f64 {
    if base.abs() <= 1e-12 {
        if cost.abs() <= 1e-12 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        cost / base
    }
}

fn max_mean(values: impl Iterator<Item = f64>) -> (Option<f64>, Option<f64>) {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        return (None, None);
    }
    (Some(v.iter().copied().fold(f64::NEG_INFINITY, f64::max)), Some(v.iter().sum::<f64>() / v.len() as f64))
}

impl RatioReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["instance", "algorithm", "cost", "lp_value", "brute_opt", "ratio_vs_lp", "ratio_vs_opt", "error"])
            .map_err(|e| invalid(e.to_string()))?;
        let num = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.instance.clone(),
                r.algorithm.to_string(),
                num(r.cost),
                num(r.lp_value),
                num(r.brute_opt),
                num(r.ratio_vs_lp),
                num(r.ratio_vs_opt),
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(|e| invalid(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs every algorithm on every case. Rows are computed in parallel but
/// listed case by case in input order, algorithms in the given order;
/// a failing row records its error instead of aborting the report.
pub fn ratio_report(cases: &[Case], algorithms: &[Algorithm], seed: u64, brute: bool) -> RatioReport {
    let root = rng::stream_seed(seed, "ratio_report");
    let opts: Vec<Option<Result<f64>>> = cases
        .par_iter()
        .map(|case| brute.then(|| case.distribution().and_then(|d| brute_universal(&case.problem(), &d)).map(|(_, c)| c)))
        .collect();
    let jobs: Vec<(usize, Algorithm)> = (0..cases.len()).flat_map(|i| algorithms.iter().map(move |&a| (i, a))).collect();
    let rows: Vec<ReportRow> = jobs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, algo))| {
            let case = &cases[i];
            let mut row = ReportRow {
                instance: case.name().to_string(),
                algorithm: algo,
                cost: None,
                lp_value: None,
                brute_opt: None,
                ratio_vs_lp: None,
                ratio_vs_opt: None,
                error: None,
            };
            let opt = match &opts[i] {
                Some(Ok(c)) => Some(*c),
                Some(Err(e)) => {
                    row.error = Some(format!("brute force: {e}"));
                    None
                }
                None => None,
            };
            match run_algorithm(case, algo, rng::child_seed(root, k as u64)) {
                Ok(run) => {
                    row.cost = Some(run.cost);
                    row.lp_value = run.lp_value;
                    row.brute_opt = opt;
                    row.ratio_vs_lp = run.lp_value.map(|lp| ratio(run.cost, lp));
                    row.ratio_vs_opt = opt.map(|o| ratio(run.cost, o));
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();

    let mut seen = Vec::new();
    for a in algorithms {
        if !seen.contains(a) {
            seen.push(*a);
        }
    }
    let summary = seen
        .into_iter()
        .map(|algorithm| {
            let mine: Vec<&ReportRow> = rows.iter().filter(|r| r.algorithm == algorithm).collect();
            let (max_ratio_vs_lp, mean_ratio_vs_lp) = max_mean(mine.iter().filter_map(|r| r.ratio_vs_lp));
            let (max_ratio_vs_opt, mean_ratio_vs_opt) = max_mean(mine.iter().filter_map(|r| r.ratio_vs_opt));
            Summary {
                algorithm,
                rows: mine.len(),
                failed: mine.iter().filter(|r| r.cost.is_none()).count(),
                max_ratio_vs_lp,
                mean_ratio_vs_lp,
                max_ratio_vs_opt,
                mean_ratio_vs_opt,
            }
        })
        .collect();
    RatioReport { rows, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcover::harmonic;
    use crate::verify::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_report() {
        let r = ratio_report(&[], &[Algorithm::LpRound], 1, true);
        assert!(r.rows.is_empty());
        assert_eq!(r.summary[0].rows, 0);
        assert_eq!(r.to_csv().unwrap().lines().count(), 1);
    }

    #[test]
    fn lp_round_within_log_bound() {
        let inst = Instance::from_sets(3, vec![(1.0, vec![0, 1]), (1.0, vec![1, 2]), (2.0, vec![0, 1, 2])], None).unwrap();
        let dist = Distribution::independent(vec![0.5, 0.7, 0.2]).unwrap();
        let cases = [Case::Cover { name: "fixture".into(), inst, dist, conn: None }];
        let r = ratio_report(&cases, &[Algorithm::LpRound], 7, true);
        let row = &r.rows[0];
        assert!(row.error.is_none(), "{:?}", row.error);
        assert!(row.ratio_vs_lp.unwrap() <= 4.0 * 3f64.ln() + 1e-9);
        assert!(row.ratio_vs_opt.unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn greedy_multicover_suite_within_harmonic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cases: Vec<Case> = (0..10)
            .map(|i| {
                let inst = random::set_cover(&mut rng, 4, 4, 2).unwrap();
                let dist = random::scenarios(&mut rng, 4, 3).unwrap();
                Case::Cover { name: format!("mc{i}"), inst, dist, conn: None }
            })
            .collect();
        let r = ratio_report(&cases, &[Algorithm::Greedy], 1, false);
        assert!(r.rows.iter().all(|row| row.error.is_none()));
        assert!(r.summary[0].max_ratio_vs_lp.unwrap() <= harmonic(4) + 1e-9);
    }

    #[test]
    fn unsupported_pairs_fail_per_row() {
        let inst = Instance::from_sets(1, vec![(1.0, vec![0])], None).unwrap();
        let dist = Distribution::independent(vec![1.0]).unwrap();
        let cases = [Case::Cover { name: "one".into(), inst, dist, conn: None }];
        let r = ratio_report(&cases, &[Algorithm::PdRound, Algorithm::LpRound], 1, false);
        assert!(r.rows[0].error.as_deref().unwrap().contains("does not apply"));
        assert!(r.rows[1].error.is_none());
        assert_eq!(r.summary[0].failed, 1);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("simplex".parse::<Algorithm>().is_err());
    }
}
