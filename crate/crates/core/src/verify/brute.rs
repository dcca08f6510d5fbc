use rayon::prelude::*;

use super::{Problem, Solution};
use crate::edgecover::EdgeCoverMapping;
use crate::error::{Error, Result};
use crate::facility::FlMapping;
use crate::model::{Distribution, ElementSet, Evaluator};
use crate::multicut::McMapping;
use crate::setcover::Mapping;

/// Largest number of mappings the brute-force search will enumerate.
pub const BRUTE_CAP: f64 = (1u64 << 24) as f64;

/// One option for one request: the objects it is charged to and a cost paid
/// with the request's own probability.
struct Choice {
    objects: Vec<usize>,
    linear: f64,
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn slots(problem: &Problem, eval: &Evaluator<'_>) -> (Vec<Vec<Choice>>, Vec<f64>) {
    let single = |u: usize| eval.g(&ElementSet::singleton(u));
    match problem {
        Problem::Cover { inst, conn } => {
            let slots = (0..inst.n())
                .map(|u| {
                    combinations(&inst.sets_containing(u), inst.requirement(u) as usize)
                        .into_iter()
                        .map(|objects| {
                            let linear = conn.as_ref().map_or(0.0, |c| objects.iter().map(|&s| c.get(u, s)).sum::<f64>() * single(u));
                            Choice { objects, linear }
                        })
                        .collect()
                })
                .collect();
            (slots, inst.sets().iter().map(|s| s.cost).collect())
        }
        Problem::Facility(fl) => {
            let slots = (0..fl.clients())
                .map(|c| (0..fl.facilities()).map(|f| Choice { objects: vec![f], linear: fl.dist[c][f] * single(c) }).collect())
                .collect();
            (slots, fl.open_cost.clone())
        }
        Problem::Multicut(mc) => {
            let slots = (0..mc.pairs().len())
                .map(|c| {
                    let mut path = mc.path(c).to_vec();
                    path.sort_unstable();
                    path.into_iter().map(|e| Choice { objects: vec![e], linear: 0.0 }).collect()
                })
                .collect();
            (slots, mc.edges().iter().map(|e| e.cost).collect())
        }
        Problem::EdgeCover(g) => {
            let slots = (0..g.vertices)
                .map(|v| {
                    g.edges
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| e.u == v || e.v == v)
                        .map(|(id, _)| Choice { objects: vec![id], linear: 0.0 })
                        .collect()
                })
                .collect();
            (slots, g.edges.iter().map(|e| e.cost).collect())
        }
    }
}

/// Number of universal mappings the brute force would enumerate.
pub fn search_space(problem: &Problem) -> f64 {
    let dist = Distribution::Independent(vec![0.0; problem.universe()]);
    let eval = dist.evaluator().expect("independent distributions are exact");
    slots(problem, &eval).0.iter().map(|s| s.len() as f64).product()
}

fn decode(mut index: u64, radix: &[u64]) -> Vec<usize> {
    let mut digits = vec![0usize; radix.len()];
    for (d, &r) in digits.iter_mut().zip(radix).rev() {
        *d = (index % r) as usize;
        index /= r;
    }
    digits
}

/// Optimal universal mapping by exhaustive enumeration; ties go to the
/// lexicographically first mapping.
pub fn brute_universal(problem: &Problem, dist: &Distribution) -> Result<(Solution, f64)> {
    dist.validate_for(problem.universe())?;
    let eval = dist.evaluator()?;
    let (slots, weights) = slots(problem, &eval);
    if let Some(u) = slots.iter().position(Vec::is_empty) {
        return Err(Error::Infeasible(format!("request {u} cannot be served by any object")));
    }
    let size: f64 = slots.iter().map(|s| s.len() as f64).product();
    if size > BRUTE_CAP {
        return Err(Error::TooLarge { size, cap: BRUTE_CAP });
    }
    let radix: Vec<u64> = slots.iter().map(|s| s.len() as u64).collect();
    let total = size as u64;
    let cost_of = |digits: &[usize]| -> f64 {
        let mut pre = vec![ElementSet::new(); weights.len()];
        let mut cost = 0.0;
        for (u, &d) in digits.iter().enumerate() {
            let choice = &slots[u][d];
            cost += choice.linear;
            for &o in &choice.objects {
                pre[o].insert(u);
            }
        }
        cost + pre.iter().zip(&weights).filter(|(b, _)| !b.is_empty()).map(|(b, w)| w * eval.g(b)).sum::<f64>()
    };
    let (best_cost, best_index) = (0..total)
        .into_par_iter()
        .map(|i| (cost_of(&decode(i, &radix)), i))
        .reduce(|| (f64::INFINITY, u64::MAX), |a, b| if b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)).is_lt() { b } else { a });
    let digits = decode(best_index, &radix);
    let pick = |u: usize| &slots[u][digits[u]].objects;
    let solution = match problem {
        Problem::Cover { .. } => Solution::Cover(Mapping { assignment: (0..digits.len()).map(|u| pick(u).clone()).collect() }),
        Problem::Facility(_) => Solution::Facility(FlMapping { assignment: (0..digits.len()).map(|c| pick(c)[0]).collect() }),
        Problem::Multicut(_) => Solution::Multicut(McMapping { cuts: (0..digits.len()).map(|c| pick(c).clone()).collect() }),
        Problem::EdgeCover(_) => Solution::EdgeCover(EdgeCoverMapping { assignment: (0..digits.len()).map(|v| pick(v)[0]).collect() }),
    };
    Ok((solution, best_cost))
}
