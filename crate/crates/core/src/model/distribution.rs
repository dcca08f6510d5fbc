use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ElementSet;
use crate::error::{invalid, Error, Result};

/// Largest deviation of the scenario mass from 1 that is silently renormalized.
pub const NORMALIZE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub prob: f64,
    pub elements: ElementSet,
}

/// Black-box access to a request distribution: a deterministic function of a seed.
#[derive(Clone)]
pub struct SamplerDist {
    n: usize,
    draw: Arc<dyn Fn(u64) -> ElementSet + Send + Sync>,
    calls: Arc<AtomicU64>,
}

impl SamplerDist {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn draw(&self, seed: u64) -> ElementSet {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.draw)(seed)
    }

    /// Number of draws taken so far (shared across clones).
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl fmt::Debug for SamplerDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SamplerDist").field("n", &self.n).field("calls", &self.calls()).finish()
    }
}

/// The random request set `X`.
#[derive(Debug, Clone)]
pub enum Distribution {
    /// Explicit `(prob, set)` list; probabilities sum to 1.
    Scenario(Vec<Scenario>),
    /// Element `u` is requested independently with probability `p[u]`.
    Independent(Vec<f64>),
    Sampler(SamplerDist),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum DistributionFile {
    Scenario { scenarios: Vec<Scenario> },
    Independent { probs: Vec<f64> },
}

impl Distribution {
    /// Scenario distribution; renormalizes when the mass is within
    /// [`NORMALIZE_TOLERANCE`] of 1 and rejects it otherwise.
    pub fn scenario(mut scenarios: Vec<Scenario>) -> Result<Self> {
        if scenarios.is_empty() {
            return Err(invalid("scenario distribution needs at least one scenario"));
        }
        for s in &scenarios {
            if !(s.prob > 0.0 && s.prob <= 1.0 + NORMALIZE_TOLERANCE) {
                return Err(invalid(format!("scenario probability {} is outside (0,1]", s.prob)));
            }
        }
        let total: f64 = scenarios.iter().map(|s| s.prob).sum();
        if (total - 1.0).abs() > NORMALIZE_TOLERANCE {
            return Err(invalid(format!("scenario probabilities sum to {total}, not 1")));
        }
        for s in &mut scenarios {
            s.prob /= total;
        }
        Ok(Distribution::Scenario(scenarios))
    }

    /// Convenience constructor from `(prob, elements)` pairs.
    pub fn scenarios<I, E>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, E)>,
        E: IntoIterator<Item = usize>,
    {
        Self::scenario(
            pairs
                .into_iter()
                .map(|(prob, e)| Scenario { prob, elements: e.into_iter().collect() })
                .collect(),
        )
    }

    pub fn independent(probs: Vec<f64>) -> Result<Self> {
        if let Some(u) = probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(invalid(format!("activation probability of element {u} is {}", probs[u])));
        }
        Ok(Distribution::Independent(probs))
    }

    pub fn sampler<F>(n: usize, draw: F) -> Self
    where
        F: Fn(u64) -> ElementSet + Send + Sync + 'static,
    {
        Distribution::Sampler(SamplerDist { n, draw: Arc::new(draw), calls: Arc::new(AtomicU64::new(0)) })
    }

    /// Hides an exact distribution behind the black-box sampler interface.
    pub fn as_sampler(&self, n: usize) -> Self {
        let inner = self.clone();
        Self::sampler(n, move |seed| sample_scenario(&inner, seed))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Distribution::Sampler(_))
    }

    /// Checks that the distribution lives on the universe `{0..n-1}`.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        match self {
            Distribution::Scenario(sc) => {
                if let Some(s) = sc.iter().find(|s| s.elements.bound() > n) {
                    return Err(invalid(format!(
                        "scenario mentions element {} outside the universe of size {n}",
                        s.elements.bound() - 1
                    )));
                }
            }
            Distribution::Independent(p) if p.len() != n => {
                return Err(invalid(format!("{} activation probabilities for a universe of size {n}", p.len())));
            }
            Distribution::Sampler(s) if s.n != n => {
                return Err(invalid(format!("sampler universe {} differs from {n}", s.n)));
            }
            _ => {}
        }
        Ok(())
    }

    /// `g(B) = P[B ∩ X ≠ ∅]`.
    pub fn g(&self, b: &ElementSet) -> Result<f64> {
        match self {
            Distribution::Scenario(sc) => Ok(scenario_g(sc, b)),
            Distribution::Independent(p) => Ok(independent_g(p, b)),
            Distribution::Sampler(_) => Err(Error::NotExactlyEvaluable),
        }
    }

    /// Infallible evaluator for exact distributions.
    pub fn evaluator(&self) -> Result<Evaluator<'_>> {
        match self {
            Distribution::Sampler(_) => Err(Error::NotExactlyEvaluable),
            d => Ok(Evaluator { dist: d }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        match serde_json::from_str::<DistributionFile>(text)? {
            DistributionFile::Scenario { scenarios } => Self::scenario(scenarios),
            DistributionFile::Independent { probs } => Self::independent(probs),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = match self {
            Distribution::Scenario(sc) => DistributionFile::Scenario { scenarios: sc.clone() },
            Distribution::Independent(p) => DistributionFile::Independent { probs: p.clone() },
            Distribution::Sampler(_) => return Err(Error::NotExactlyEvaluable),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}

/// Borrowed handle on an exact distribution; `g` cannot fail.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'a> {
    dist: &'a Distribution,
}

impl Evaluator<'_> {
    pub fn g(&self, b: &ElementSet) -> f64 {
        match self.dist {
            Distribution::Scenario(sc) => scenario_g(sc, b),
            Distribution::Independent(p) => independent_g(p, b),
            Distribution::Sampler(_) => unreachable!("evaluator is only built for exact distributions"),
        }
    }

    pub fn distribution(&self) -> &Distribution {
        self.dist
    }
}

fn scenario_g(scenarios: &[Scenario], b: &ElementSet) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    scenarios.iter().filter(|s| s.elements.intersects(b)).map(|s| s.prob).sum()
}

fn independent_g(p: &[f64], b: &ElementSet) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    1.0 - b.iter().map(|u| 1.0 - p.get(u).copied().unwrap_or(0.0)).product::<f64>()
}

/// Probability that a random request set intersects `b`.
pub fn eval_g(dist: &Distribution, b: &ElementSet) -> Result<f64> {
    dist.g(b)
}

/// Draws one request set; a deterministic function of `(dist, seed)`.
pub fn sample_scenario(dist: &Distribution, seed: u64) -> ElementSet {
    match dist {
        Distribution::Scenario(sc) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: f64 = rng.gen();
            let mut acc = 0.0;
            for s in sc {
                acc += s.prob;
                if x < acc {
                    return s.elements.clone();
                }
            }
            sc.last().map(|s| s.elements.clone()).unwrap_or_default()
        }
        Distribution::Independent(p) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            p.iter()
                .enumerate()
                .filter_map(|(u, &pu)| (rng.gen::<f64>() < pu).then_some(u))
                .collect()
        }
        Distribution::Sampler(s) => s.draw(seed),
    }
}

/// Scenario distribution putting mass `multiplicity / N` on each distinct sample,
/// so that its `g` is the empirical estimate `ĝ`.
pub fn empirical_dist(samples: &[ElementSet]) -> Result<Distribution> {
    if samples.is_empty() {
        return Err(invalid("empirical distribution needs at least one sample"));
    }
    let mut counts: BTreeMap<&ElementSet, usize> = BTreeMap::new();
    for s in samples {
        *counts.entry(s).or_default() += 1;
    }
    let total = samples.len() as f64;
    Ok(Distribution::Scenario(
        counts
            .into_iter()
            .map(|(set, k)| Scenario { prob: k as f64 / total, elements: set.clone() })
            .collect(),
    ))
}
