#![allow(dead_code)]

use unicover::lpcore::{solve_lp, LinearProgram, Relation, Sense};
use unicover::model::{Distribution, ElementSet, Instance};
use unicover::setcover::{FractionalCover, Mapping};

/// `P[B ∩ X ≠ ∅]` straight from the definition.
pub fn g(dist: &Distribution, b: &[usize]) -> f64 {
    match dist {
        Distribution::Scenario(sc) => sc.iter().filter(|s| b.iter().any(|&u| s.elements.contains(u))).map(|s| s.prob).sum(),
        Distribution::Independent(p) => 1.0 - b.iter().map(|&u| 1.0 - p[u]).product::<f64>(),
        Distribution::Sampler(_) => panic!("oracle needs an explicit distribution"),
    }
}

pub fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u64..1 << items.len()).map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &u)| u).collect()).collect()
}

/// Expected cost of a set cover mapping: every used set pays `c(S)·g(φ⁻¹(S))`.
pub fn mapping_cost(inst: &Instance, dist: &Distribution, phi: &[Vec<usize>]) -> f64 {
    (0..inst.m())
        .map(|s| {
            let pre: Vec<usize> = (0..inst.n()).filter(|&u| phi[u].contains(&s)).collect();
            inst.set(s).cost * g(dist, &pre)
        })
        .sum()
}

fn choose(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    subsets(items).into_iter().filter(|c| c.len() == k).collect()
}

/// Optimal universal set (multi)cover mapping cost by enumeration.
pub fn brute_cover(inst: &Instance, dist: &Distribution) -> f64 {
    let options: Vec<Vec<Vec<usize>>> = (0..inst.n()).map(|u| choose(&inst.sets_containing(u), inst.requirement(u) as usize)).collect();
    let mut best = f64::INFINITY;
    let mut pick = vec![0usize; inst.n()];
    loop {
        let phi: Vec<Vec<usize>> = pick.iter().enumerate().map(|(u, &i)| options[u][i].clone()).collect();
        best = best.min(mapping_cost(inst, dist, &phi));
        let mut u = 0;
        while u < pick.len() {
            pick[u] += 1;
            if pick[u] < options[u].len() {
                break;
            }
            pick[u] = 0;
            u += 1;
        }
        if u == pick.len() {
            return best;
        }
    }
}

/// Configuration LP with every `(S, B)` column written out.
pub fn full_conf_lp(inst: &Instance, dist: &Distribution) -> f64 {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let mut cover: Vec<Vec<(usize, f64)>> = vec![Vec::new(); inst.n()];
    let mut mass: Vec<Vec<(usize, f64)>> = vec![Vec::new(); inst.m()];
    for (s, set) in inst.sets().iter().enumerate() {
        for b in subsets(&set.elements.to_vec()).into_iter().filter(|b| !b.is_empty()) {
            let var = lp.add_var(set.cost * g(dist, &b), (0.0, f64::INFINITY));
            for &u in &b {
                cover[u].push((var, 1.0));
            }
            mass[s].push((var, 1.0));
        }
    }
    for (u, row) in cover.into_iter().enumerate() {
        lp.add_constraint(row, Relation::Ge, inst.requirement(u) as f64);
    }
    if inst.is_multicover() {
        for row in mass {
            lp.add_constraint(row, Relation::Le, 1.0);
        }
    }
    solve_lp(&lp).expect("full configuration LP solves").value
}

/// Worst violation of the dual constraints `Σ_{u∈B} α_u - z_S ≤ c(S)·g(B)`
/// over every column, and the dual objective `Σ r(u)α_u - Σ z_S`.
pub fn dual_check(inst: &Instance, dist: &Distribution, frac: &FractionalCover) -> (f64, f64) {
    let mut worst = f64::NEG_INFINITY;
    for (s, set) in inst.sets().iter().enumerate() {
        for b in subsets(&set.elements.to_vec()) {
            let lhs: f64 = b.iter().map(|&u| frac.duals[u]).sum::<f64>() - frac.set_duals[s];
            worst = worst.max(lhs - set.cost * g(dist, &b));
        }
    }
    let objective = (0..inst.n()).map(|u| inst.requirement(u) as f64 * frac.duals[u]).sum::<f64>() - frac.set_duals.iter().sum::<f64>();
    (worst, objective)
}

pub fn feasible(inst: &Instance, phi: &Mapping) -> bool {
    (0..inst.n()).all(|u| {
        let mut sets = phi.assignment[u].clone();
        sets.sort_unstable();
        sets.dedup();
        sets.len() == inst.requirement(u) as usize && sets.iter().all(|&s| inst.set(s).elements.contains(u))
    })
}

pub fn set_of(v: &[usize]) -> ElementSet {
    v.iter().copied().collect()
}
