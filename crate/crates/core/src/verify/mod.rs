//! Ground truth: exact and Monte Carlo expected cost, brute-force optimal
//! universal mappings, the lower-bound instance family, random instance
//! generators and ratio reports.

mod brute;
mod lower_bound;
pub mod random;
mod report;

use crate::edgecover::{EdgeCoverMapping, GraphInstance};
use crate::error::{Error, Result};
use crate::facility::{FlInstance, FlMapping};
use crate::model::{sample_scenario, Distribution, ElementSet};
use crate::multicut::{McMapping, McTreeInstance};
use crate::rng;
use crate::setcover::{ConnectionCosts, Mapping};

pub use brute::{brute_universal, search_space, BRUTE_CAP};
pub use lower_bound::{lb_instance, LbInstance};
pub use report::{ratio_report, run_algorithm, Algorithm, AlgorithmRun, Case, RatioReport, ReportRow, Summary};

/// Default sample count of the Monte Carlo evaluator.
pub const MONTE_CARLO_SAMPLES: usize = 100_000;

/// A universal covering problem; the request distribution is supplied
/// separately and ranges over elements, clients, pairs or vertices.
#[derive(Debug, Clone)]
pub enum Problem {
    Cover { inst: crate::model::Instance, conn: Option<ConnectionCosts> },
    Facility(FlInstance),
    Multicut(McTreeInstance),
    EdgeCover(GraphInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Cover(Mapping),
    Facility(FlMapping),
    Multicut(McMapping),
    EdgeCover(EdgeCoverMapping),
}

impl Problem {
    /// Size of the ground set the distribution ranges over.
    pub fn universe(&self) -> usize {
        match self {
            Problem::Cover { inst, .. } => inst.n(),
            Problem::Facility(fl) => fl.clients(),
            Problem::Multicut(mc) => mc.pairs().len(),
            Problem::EdgeCover(g) => g.vertices,
        }
    }

    pub fn validate(&self, sol: &Solution) -> Result<()> {
        match (self, sol) {
            (Problem::Cover { inst, .. }, Solution::Cover(m)) => m.validate(inst),
            (Problem::Facility(fl), Solution::Facility(m)) => m.validate(fl),
            (Problem::Multicut(mc), Solution::Multicut(m)) => m.validate(mc),
            (Problem::EdgeCover(g), Solution::EdgeCover(m)) => m.validate(g),
            _ => Err(Error::InvalidInput("solution does not match the problem kind".into())),
        }
    }

    /// Cost paid when exactly the requests `x` show up.
    pub fn offline_cost(&self, sol: &Solution, x: &ElementSet) -> f64 {
        let mut total = 0.0;
        match (self, sol) {
            (Problem::Cover { inst, conn }, Solution::Cover(m)) => {
                let mut used = ElementSet::new();
                for u in x.iter().filter(|&u| u < inst.n()) {
                    for &s in &m.assignment[u] {
                        used.insert(s);
                        total += conn.as_ref().map_or(0.0, |c| c.get(u, s));
                    }
                }
                total += used.iter().map(|s| inst.set(s).cost).sum::<f64>();
            }
            (Problem::Facility(fl), Solution::Facility(m)) => {
                let mut used = ElementSet::new();
                for c in x.iter().filter(|&c| c < fl.clients()) {
                    used.insert(m.assignment[c]);
                    total += fl.dist[c][m.assignment[c]];
                }
                total += used.iter().map(|f| fl.open_cost[f]).sum::<f64>();
            }
            (Problem::Multicut(mc), Solution::Multicut(m)) => {
                let mut used = ElementSet::new();
                for c in x.iter().filter(|&c| c < mc.pairs().len()) {
                    m.cuts[c].iter().for_each(|&e| {
                        used.insert(e);
                    });
                }
                total += used.iter().map(|e| mc.edges()[e].cost).sum::<f64>();
            }
            (Problem::EdgeCover(g), Solution::EdgeCover(m)) => {
                let used: ElementSet = x.iter().filter(|&v| v < g.vertices).map(|v| m.assignment[v]).collect();
                total += used.iter().map(|e| g.edges[e].cost).sum::<f64>();
            }
            _ => panic!("solution does not match the problem kind"),
        }
        total
    }

    /// Exact expected cost: every bought object is paid with the
    /// probability that one of the requests mapped to it shows up.
    pub fn exact_cost(&self, sol: &Solution, dist: &Distribution) -> Result<f64> {
        self.validate(sol)?;
        dist.validate_for(self.universe())?;
        let eval = dist.evaluator()?;
        let single = |u: usize| eval.g(&ElementSet::singleton(u));
        let cost = match (self, sol) {
            (Problem::Cover { inst, conn }, Solution::Cover(m)) => m.expected_cost(inst, &eval, conn.as_ref())?,
            (Problem::Facility(fl), Solution::Facility(m)) => {
                let mut pre = vec![ElementSet::new(); fl.facilities()];
                let mut connection = 0.0;
                for (c, &f) in m.assignment.iter().enumerate() {
                    pre[f].insert(c);
                    connection += single(c) * fl.dist[c][f];
                }
                connection + pre.iter().enumerate().map(|(f, b)| fl.open_cost[f] * eval.g(b)).sum::<f64>()
            }
            (Problem::Multicut(mc), Solution::Multicut(m)) => {
                let mut pre = vec![ElementSet::new(); mc.edges().len()];
                for (c, cut) in m.cuts.iter().enumerate() {
                    for &e in cut {
                        pre[e].insert(c);
                    }
                }
                pre.iter().enumerate().map(|(e, b)| mc.edges()[e].cost * eval.g(b)).sum()
            }
            (Problem::EdgeCover(g), Solution::EdgeCover(m)) => m.expected_cost(g, &eval)?,
            _ => unreachable!("validated above"),
        };
        Ok(cost)
    }

    pub fn solution_to_json(&self, sol: &Solution) -> String {
        match (self, sol) {
            (Problem::Cover { inst, .. }, Solution::Cover(m)) => m.to_json(inst),
            (Problem::Facility(fl), Solution::Facility(m)) => m.to_json(fl),
            (Problem::Multicut(mc), Solution::Multicut(m)) => m.to_json(mc),
            (Problem::EdgeCover(g), Solution::EdgeCover(m)) => m.to_json(g),
            _ => panic!("solution does not match the problem kind"),
        }
    }

    pub fn solution_from_json(&self, text: &str) -> Result<Solution> {
        Ok(match self {
            Problem::Cover { inst, .. } => Solution::Cover(Mapping::from_json(text, inst)?),
            Problem::Facility(fl) => Solution::Facility(FlMapping::from_json(text, fl)?),
            Problem::Multicut(mc) => Solution::Multicut(McMapping::from_json(text, mc)?),
            Problem::EdgeCover(g) => Solution::EdgeCover(EdgeCoverMapping::from_json(text, g)?),
        })
    }
}

/// Expected cost with its standard error (zero for exact evaluation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Averages `offline` over `samples` seeded draws from `dist`.
pub fn monte_carlo(dist: &Distribution, samples: usize, seed: u64, offline: impl Fn(&ElementSet) -> f64) -> Estimate {
    let root = rng::stream_seed(seed, "monte-carlo");
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for i in 0..samples as u64 {
        let v = offline(&sample_scenario(dist, rng::child_seed(root, i)));
        sum += v;
        sum_sq += v * v;
    }
    let k = samples.max(1) as f64;
    let mean = sum / k;
    let var = if samples > 1 { ((sum_sq - k * mean * mean) / (k - 1.0)).max(0.0) } else { 0.0 };
    Estimate { mean, std_error: (var / k).sqrt(), samples }
}

/// Exact expected cost for scenario and independent distributions; Monte
/// Carlo with [`MONTE_CARLO_SAMPLES`] draws for samplers.
pub fn expected_cost(problem: &Problem, sol: &Solution, dist: &Distribution, seed: u64) -> Result<Estimate> {
    if dist.is_exact() {
        return Ok(Estimate { mean: problem.exact_cost(sol, dist)?, std_error: 0.0, samples: 0 });
    }
    problem.validate(sol)?;
    Ok(monte_carlo(dist, MONTE_CARLO_SAMPLES, seed, |x| problem.offline_cost(sol, x)))
}
