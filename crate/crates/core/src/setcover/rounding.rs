use rand::Rng;

use super::{ConnectionCosts, FractionalCover, Mapping};
use crate::error::{Error, Result};
use crate::model::{Distribution, ElementSet, Instance};
use crate::rng;

pub const RETRY_CAP: usize = 1000;

/// Columns drawn per set and round of sampling: `max(1, ⌈2 ln n⌉)`.
pub fn samples_per_set(n: usize) -> usize {
    ((2.0 * (n as f64).ln()).ceil() as usize).max(1)
}

/// Accepted cost factor relative to the LP value: `max(4 ln n, 1)`.
pub fn randomized_bound(n: usize) -> f64 {
    (4.0 * (n as f64).ln()).max(1.0)
}

#[derive(Debug, Clone)]
pub struct Rounded {
    pub mapping: Mapping,
    pub cost: f64,
    pub attempts: usize,
}

impl Rounded {
    pub fn retries(&self) -> usize {
        self.attempts - 1
    }
}

/// Splits the columns of each set into groups of total mass at most 1; each
/// group is sampled independently. Returns `(set, [(B, y)])` per group.
fn sampling_groups(frac: &FractionalCover, m: usize) -> Vec<(usize, Vec<(ElementSet, f64)>)> {
    let mut groups = Vec::new();
    for s in 0..m {
        let mut current: Vec<(ElementSet, f64)> = Vec::new();
        let mut mass = 0.0;
        for col in frac.columns.iter().filter(|c| c.set == s) {
            let mut y = col.y;
            while y > 1e-12 {
                let take = y.min(1.0 - mass);
                current.push((col.b.clone(), take));
                mass += take;
                y -= take;
                if mass >= 1.0 - 1e-12 {
                    groups.push((s, std::mem::take(&mut current)));
                    mass = 0.0;
                }
            }
        }
        if !current.is_empty() {
            groups.push((s, current));
        }
    }
    groups
}

fn require_single_cover(inst: &Instance) -> Result<()> {
    if inst.is_multicover() {
        return Err(Error::Unsupported("this rounding handles requirements r(u) = 1 only; use greedy for multicover".into()));
    }
    Ok(())
}

/// Randomized rounding of a fractional cover: every set draws
/// `samples_per_set(n)` columns from its column distribution (leftover mass
/// draws nothing), elements take the first set that sampled them, and the
/// whole draw is repeated until every element is covered and the exact cost
/// is at most `randomized_bound(n)` times the LP value.
pub fn round_randomized(
    frac: &FractionalCover,
    inst: &Instance,
    dist: &Distribution,
    conn: Option<&ConnectionCosts>,
    seed: u64,
) -> Result<Rounded> {
    require_single_cover(inst)?;
    let eval = dist.evaluator()?;
    let n = inst.n();
    let q = samples_per_set(n);
    let limit = randomized_bound(n) * frac.value + 1e-9 * (1.0 + frac.value);
    let groups = sampling_groups(frac, inst.m());
    let mut rng = rng::stream(seed, "round_randomized");

    for attempt in 1..=RETRY_CAP {
        let mut phi: Vec<Option<usize>> = vec![None; n];
        for _ in 0..q {
            for (s, cols) in &groups {
                let x: f64 = rng.gen();
                let mut acc = 0.0;
                let Some((b, _)) = cols.iter().find(|(_, y)| {
                    acc += y;
                    x < acc
                }) else {
                    continue;
                };
                for u in b.iter() {
                    phi[u].get_or_insert(*s);
                }
            }
        }
        let Some(sets) = phi.into_iter().collect::<Option<Vec<usize>>>() else {
            continue;
        };
        let mapping = Mapping::single(sets);
        let cost = mapping.expected_cost(inst, &eval, conn)?;
        if cost <= limit {
            return Ok(Rounded { mapping, cost, attempts: attempt });
        }
    }
    Err(Error::RetryLimit { attempts: RETRY_CAP })
}

/// Deterministic rounding for instances where every element lies in at most
/// `f` sets: `u` goes to the first set carrying covering mass at least `1/f`
/// for it.
pub fn round_frequency(frac: &FractionalCover, inst: &Instance) -> Result<Mapping> {
    require_single_cover(inst)?;
    let f = inst.max_frequency().max(1) as f64;
    let mut mass = vec![vec![0.0; inst.m()]; inst.n()];
    for col in &frac.columns {
        for u in col.b.iter() {
            mass[u][col.set] += col.y;
        }
    }
    let sets = (0..inst.n())
        .map(|u| {
            (0..inst.m())
                .find(|&s| inst.set(s).elements.contains(u) && mass[u][s] >= 1.0 / f - 1e-9)
                .ok_or_else(|| Error::Infeasible(format!("element {u} has no set with covering mass at least 1/{f}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mapping::single(sets))
}
