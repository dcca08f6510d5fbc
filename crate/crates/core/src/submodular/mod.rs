//! Submodular function minimization.
//!
//! [`minimize`] runs the Fujishige–Wolfe minimum-norm-point algorithm over the
//! base polytope and certifies its answer with the duality bound
//! `min f >= f(∅) + Σ_i min(x_i, 0)` for any base `x`. [`minimize_brute`]
//! enumerates all subsets and is the exact reference for small grounds.
//! [`minimize_ratio`] minimizes `f(X)/|X|` by Dinkelbach iteration on top of
//! [`minimize`].

mod wolfe;

use crate::error::{invalid, Error, Result};
use crate::model::ElementSet;

/// Largest ground set [`minimize_brute`] accepts.
pub const BRUTE_MAX_GROUND: usize = 22;
/// Grounds up to this size fall back to enumeration when the min-norm-point
/// iteration fails to certify its answer.
pub const FALLBACK_MAX_GROUND: usize = 18;
/// Values within this distance of the minimum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;
const RATIO_TOLERANCE: f64 = 1e-10;
const MAX_DINKELBACH_STEPS: usize = 1000;

/// A set function given by an evaluation procedure over a ground set.
pub struct SubmodularOracle<'a> {
    ground: ElementSet,
    value: Box<dyn Fn(&ElementSet) -> f64 + 'a>,
}

impl<'a> SubmodularOracle<'a> {
    pub fn new(ground: ElementSet, value: impl Fn(&ElementSet) -> f64 + 'a) -> Self {
        Self { ground, value: Box::new(value) }
    }

    pub fn ground(&self) -> &ElementSet {
        &self.ground
    }

    pub fn eval(&self, b: &ElementSet) -> f64 {
        (self.value)(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MinNormPoint,
    Enumeration,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub set: ElementSet,
    pub value: f64,
    pub method: Method,
    /// Major iterations of the min-norm-point loop (0 for enumeration).
    pub iterations: usize,
    /// Certified upper bound on `value - min f`.
    pub gap: f64,
}

/// Minimizes `f` over all subsets of its ground set, `∅` included.
pub fn minimize(f: &SubmodularOracle<'_>) -> Result<Minimum> {
    let ground: Vec<usize> = f.ground.iter().collect();
    if ground.is_empty() {
        let value = f.eval(&ElementSet::new());
        return Ok(Minimum { set: ElementSet::new(), value, method: Method::MinNormPoint, iterations: 0, gap: 0.0 });
    }
    let outcome = wolfe::run(&ground, |s| f.eval(s));
    if outcome.certified {
        return Ok(Minimum {
            set: outcome.best,
            value: outcome.best_value,
            method: Method::MinNormPoint,
            iterations: outcome.iterations,
            gap: outcome.gap,
        });
    }
    if ground.len() <= FALLBACK_MAX_GROUND {
        log::debug!(
            "min-norm-point stalled after {} iterations with gap {:e}; enumerating {} elements",
            outcome.iterations,
            outcome.gap,
            ground.len()
        );
        return minimize_brute(f);
    }
    Err(Error::NonConvergence { iterations: outcome.iterations, best: outcome.best, best_value: outcome.best_value })
}

/// Exact minimizer by enumeration of all `2^|ground|` subsets.
///
/// Among values within [`TIE_TOLERANCE`] of the minimum the smallest
/// cardinality wins, then the lexicographically smallest set.
pub fn minimize_brute(f: &SubmodularOracle<'_>) -> Result<Minimum> {
    let ground: Vec<usize> = f.ground.iter().collect();
    let k = ground.len();
    if k > BRUTE_MAX_GROUND {
        return Err(invalid(format!("ground of size {k} exceeds the enumeration limit {BRUTE_MAX_GROUND}")));
    }
    let subset = |mask: u64| -> ElementSet { (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ground[i]).collect() };
    let values: Vec<f64> = (0..1u64 << k).map(|mask| f.eval(&subset(mask))).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut best: Option<(u32, ElementSet, f64)> = None;
    for (mask, &v) in values.iter().enumerate() {
        if v > min + TIE_TOLERANCE {
            continue;
        }
        let card = (mask as u64).count_ones();
        if let Some((bc, _, _)) = &best {
            if card > *bc {
                continue;
            }
        }
        let set = subset(mask as u64);
        let better = match &best {
            None => true,
            Some((bc, bs, _)) => card < *bc || set < *bs,
        };
        if better {
            best = Some((card, set, v));
        }
    }
    let (_, set, value) = best.expect("at least the empty set is evaluated");
    Ok(Minimum { set, value, method: Method::Enumeration, iterations: 0, gap: 0.0 })
}

#[derive(Debug, Clone)]
pub struct RatioMinimum {
    pub set: ElementSet,
    pub ratio: f64,
    /// Successive ratio estimates; strictly decreasing.
    pub iterates: Vec<f64>,
}

/// Minimizes `f(X)/|X|` over nonempty `X` by Dinkelbach iteration: repeatedly
/// minimize `f(X) - c|X|` and move `c` to the ratio of the minimizer until the
/// minimum is no longer negative.
pub fn minimize_ratio(f: &SubmodularOracle<'_>) -> Result<RatioMinimum> {
    if f.ground.is_empty() {
        return Err(invalid("ratio minimization needs a nonempty ground set"));
    }
    let empty_value = f.eval(&ElementSet::new());
    if empty_value < -TIE_TOLERANCE {
        return Err(invalid(format!("ratio minimization needs f(∅) >= 0, got {empty_value}")));
    }
    let mut set = f.ground.clone();
    let mut ratio = f.eval(&set) / set.len() as f64;
    let mut iterates = vec![ratio];
    for _ in 0..MAX_DINKELBACH_STEPS {
        let c = ratio;
        let shifted = SubmodularOracle::new(f.ground.clone(), |b: &ElementSet| f.eval(b) - c * b.len() as f64);
        let m = minimize(&shifted)?;
        if m.value >= -RATIO_TOLERANCE * c.abs().max(1.0) || m.set.is_empty() {
            return Ok(RatioMinimum { set, ratio, iterates });
        }
        let next = f.eval(&m.set) / m.set.len() as f64;
        if next >= ratio {
            return Ok(RatioMinimum { set, ratio, iterates });
        }
        set = m.set;
        ratio = next;
        iterates.push(ratio);
    }
    Err(Error::NonConvergence { iterations: MAX_DINKELBACH_STEPS, best: set, best_value: ratio })
}

/// Ratio minimization by enumeration of all nonempty subsets; the reference for
/// [`minimize_ratio`].
pub fn minimize_ratio_brute(f: &SubmodularOracle<'_>) -> Result<RatioMinimum> {
    let ground: Vec<usize> = f.ground.iter().collect();
    let k = ground.len();
    if k == 0 || k > BRUTE_MAX_GROUND {
        return Err(invalid(format!("ratio enumeration needs 1..={BRUTE_MAX_GROUND} ground elements, got {k}")));
    }
    let mut best: Option<(ElementSet, f64)> = None;
    for mask in 1u64..1 << k {
        let s: ElementSet = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ground[i]).collect();
        let r = f.eval(&s) / s.len() as f64;
        if best.as_ref().map_or(true, |(_, br)| r < *br) {
            best = Some((s, r));
        }
    }
    let (set, ratio) = best.expect("ground is nonempty");
    Ok(RatioMinimum { set, ratio, iterates: vec![ratio] })
}
