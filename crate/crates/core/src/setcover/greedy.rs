use super::Mapping;
use crate::error::Result;
use crate::model::{Distribution, ElementSet, Evaluator, Instance};
use crate::submodular::{minimize_ratio, SubmodularOracle};

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Dual-fitting certificate of a greedy run.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl Certificate {
    /// Largest `Σ_{u∈B} α_u/scale - β_S/scale - c(S)·g(B)` over every set and
    /// every `B ⊆ S`; nonpositive when the scaled duals are feasible.
    pub fn max_violation(&self, inst: &Instance, eval: &Evaluator<'_>, scale: f64) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (s, set) in inst.sets().iter().enumerate() {
            let members = set.elements.to_vec();
            for mask in 0u64..(1u64 << members.len()) {
                let b: ElementSet = members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &u)| u).collect();
                let lhs = (b.iter().map(|u| self.alpha[u]).sum::<f64>() - self.beta[s]) / scale;
                worst = worst.max(lhs - set.cost * eval.g(&b));
            }
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub mapping: Mapping,
    /// Exact expected cost of the mapping (pairs for one set merged).
    pub cost: f64,
    /// Sum of `c(S)·g(B)` over the picked pairs; equals `Σ r(u)α_u - Σ β_S`.
    pub paid: f64,
    pub certificate: Certificate,
    pub picks: usize,
}

/// Greedy multicover: repeatedly buys the pair `(B, S)` with `B` inside the
/// still useful part of `S` that minimizes `c(S)·g(B)/|B|`, charging that
/// ratio to every element of `B`.
pub fn greedy_multicover(inst: &Instance, dist: &Distribution) -> Result<GreedyOutcome> {
    inst.check_feasible()?;
    dist.validate_for(inst.n())?;
    let eval = dist.evaluator()?;
    let n = inst.n();
    let m = inst.m();

    let mut residual: Vec<ElementSet> = inst.sets().iter().map(|s| s.elements.clone()).collect();
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); n];
    // prices[u][j] is the price paid for the (j+1)-th covering of u;
    // slot[u][s] is the index j at which u was assigned to s.
    let mut prices: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut slot: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut paid = 0.0;
    let mut picks = 0;

    while residual.iter().any(|r| !r.is_empty()) {
        let mut best: Option<(f64, usize, ElementSet)> = None;
        for s in 0..m {
            if residual[s].is_empty() {
                continue;
            }
            let cost = inst.set(s).cost;
            let f = SubmodularOracle::new(residual[s].clone(), |b: &ElementSet| cost * eval.g(b));
            let r = minimize_ratio(&f)?;
            if best.as_ref().map_or(true, |(ratio, _, _)| r.ratio < *ratio - 1e-12) {
                best = Some((r.ratio, s, r.set));
            }
        }
        let (ratio, s, b) = best.expect("a nonempty residual set exists");
        paid += inst.set(s).cost * eval.g(&b);
        picks += 1;
        residual[s] = residual[s].difference(&b);
        for u in b.iter() {
            slot[u].push((s, prices[u].len()));
            prices[u].push(ratio);
            assignment[u].push(s);
            if assignment[u].len() == inst.requirement(u) as usize {
                for r in residual.iter_mut() {
                    r.remove(u);
                }
            }
        }
    }

    let alpha: Vec<f64> = prices.iter().map(|p| p.last().copied().unwrap_or(0.0)).collect();
    let mut beta = vec![0.0; m];
    for u in 0..n {
        for &(s, j) in &slot[u] {
            beta[s] += alpha[u] - prices[u][j];
        }
    }
    for a in assignment.iter_mut() {
        a.sort_unstable();
    }
    let mapping = Mapping { assignment };
    let cost = mapping.expected_cost(inst, &eval, None)?;
    Ok(GreedyOutcome { mapping, cost, paid, certificate: Certificate { alpha, beta }, picks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheaper_set_wins() {
        let inst = Instance::from_sets(1, vec![(1.0, vec![0]), (2.0, vec![0])], None).unwrap();
        let dist = Distribution::scenarios([(1.0, vec![0])]).unwrap();
        let out = greedy_multicover(&inst, &dist).unwrap();
        assert_eq!(out.mapping.assignment, vec![vec![0]]);
        assert!((out.cost - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multicover_trace() {
        let inst = Instance::from_sets(2, vec![(1.0, vec![0, 1]), (1.0, vec![0]), (3.0, vec![1])], Some(vec![2, 1])).unwrap();
        let dist = Distribution::scenarios([(1.0, vec![0, 1])]).unwrap();
        let out = greedy_multicover(&inst, &dist).unwrap();
        assert_eq!(out.mapping.assignment, vec![vec![0, 1], vec![0]]);
        assert!((out.cost - 2.0).abs() < 1e-12);
        let ev = dist.evaluator().unwrap();
        let dual: f64 = out.certificate.alpha.iter().zip([2.0, 1.0]).map(|(a, r)| a * r).sum::<f64>()
            - out.certificate.beta.iter().sum::<f64>();
        assert!((dual - out.paid).abs() < 1e-12);
        assert!(out.certificate.max_violation(&inst, &ev, harmonic(2)) <= 1e-9);
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        assert!((harmonic(3) - 11.0 / 6.0).abs() < 1e-15);
    }
}
