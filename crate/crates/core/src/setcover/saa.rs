use super::{greedy_multicover, round_randomized, solve_conf_lp, ConnectionCosts, Mapping};
use crate::error::{invalid, Result};
use crate::model::{empirical_dist, sample_scenario, Distribution, ElementSet, Instance};
use crate::rng;

pub const SAA_DEFAULT_EPSILON: f64 = 0.5;
pub const SAA_SAMPLE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inner {
    LpRound,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleCount {
    /// Unrounded value of the bound.
    pub required: f64,
    pub samples: usize,
    pub capped: bool,
}

/// Samples needed for a `(1 ± ε)` estimate of `g` on every subset:
/// `6/ε² · n(n ln m + 2 ln n)`, or with cost spread `W`
/// `6/ε² · W n(n ln m + 2 ln n + ln W)`. Capped at [`SAA_SAMPLE_CAP`].
pub fn saa_sample_count(n: usize, m: usize, epsilon: f64, weight: Option<f64>) -> Result<SampleCount> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let (nf, mf) = (n as f64, m.max(1) as f64);
    let mut required = 6.0 / (epsilon * epsilon) * nf * (nf * mf.ln() + 2.0 * nf.max(1.0).ln());
    if let Some(w) = weight {
        if !(w >= 1.0) {
            return Err(invalid(format!("weight spread must be at least 1, got {w}")));
        }
        required = 6.0 / (epsilon * epsilon) * w * nf * (nf * mf.ln() + 2.0 * nf.max(1.0).ln() + w.ln());
    }
    let needed = required.ceil().max(1.0);
    let capped = needed > SAA_SAMPLE_CAP as f64;
    if capped {
        log::warn!("sample bound {needed:.0} exceeds the cap; using {SAA_SAMPLE_CAP} samples");
    }
    Ok(SampleCount { required, samples: if capped { SAA_SAMPLE_CAP } else { needed as usize }, capped })
}

#[derive(Debug, Clone)]
pub struct SaaOutcome {
    pub mapping: Mapping,
    /// Empirical distribution the inner solver optimized against.
    pub empirical: Distribution,
}

/// Draws `samples` request sets from `dist`, builds the empirical
/// distribution and solves against it. Elements never sampled still get
/// assigned.
pub fn saa_solve(
    inst: &Instance,
    dist: &Distribution,
    samples: usize,
    inner: Inner,
    seed: u64,
    conn: Option<&ConnectionCosts>,
) -> Result<SaaOutcome> {
    if samples == 0 {
        return Err(invalid("sample average approximation needs at least one sample"));
    }
    let root = rng::stream_seed(seed, "saa-samples");
    let draws: Vec<ElementSet> = (0..samples as u64).map(|i| sample_scenario(dist, rng::child_seed(root, i))).collect();
    let empirical = empirical_dist(&draws)?;
    let mapping = match inner {
        Inner::LpRound => {
            let frac = solve_conf_lp(inst, &empirical, conn)?;
            round_randomized(&frac, inst, &empirical, conn, rng::stream_seed(seed, "saa-round"))?.mapping
        }
        Inner::Greedy => {
            if conn.is_some() {
                return Err(invalid("greedy does not support connection costs"));
            }
            greedy_multicover(inst, &empirical)?.mapping
        }
    };
    Ok(SaaOutcome { mapping, empirical })
}
