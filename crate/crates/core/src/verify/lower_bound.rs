use crate::error::{invalid, Result};
use crate::model::{CoverSet, Distribution, ElementSet, Instance, Scenario};
use crate::setcover::Mapping;

/// The two-branch family showing that universal set cover in the oracle
/// model needs samples polynomial in the cost spread `M`.
///
/// Universe: `W = {0..n-2}` plus the dummy `d = n-1`. Sets: `S_d = {d}` of
/// cost 1, a singleton of cost `M/√n` per `w`, and `S_W = W` of cost `M`.
/// With probability `1 - 1/√M` the request is `{d}`; otherwise it is a
/// single `w` (uniform over `W`) in the first branch, or all of `W` in the
/// second.
#[derive(Debug, Clone)]
pub struct LbInstance {
    pub n: usize,
    pub big_m: f64,
    pub instance: Instance,
    pub single_branch: Distribution,
    pub whole_branch: Distribution,
    /// `d → S_d`, each `w` to its singleton.
    pub phi_singleton: Mapping,
    /// `d → S_d`, every `w` to `S_W`.
    pub phi_big: Mapping,
    /// `(1 - 1/√M)·1 + (1/√M)·(M/√n)`: `phi_singleton` in the single branch.
    pub singleton_cost: f64,
    /// `(1 - 1/√M)·1 + (1/√M)·M`: `phi_big` in the whole branch.
    pub big_cost: f64,
}

impl LbInstance {
    /// `phi_big` in the single branch over `phi_singleton` there.
    pub fn single_branch_ratio(&self) -> Result<f64> {
        let ev = self.single_branch.evaluator()?;
        Ok(self.phi_big.expected_cost(&self.instance, &ev, None)? / self.phi_singleton.expected_cost(&self.instance, &ev, None)?)
    }

    /// `phi_singleton` in the whole branch over `phi_big` there.
    pub fn whole_branch_ratio(&self) -> Result<f64> {
        let ev = self.whole_branch.evaluator()?;
        Ok(self.phi_singleton.expected_cost(&self.instance, &ev, None)? / self.phi_big.expected_cost(&self.instance, &ev, None)?)
    }
}

pub fn lb_instance(n: usize, big_m: f64) -> Result<LbInstance> {
    if n < 2 {
        return Err(invalid(format!("the lower-bound instance needs n >= 2, got {n}")));
    }
    if !(big_m >= 4.0 && big_m.is_finite()) {
        return Err(invalid(format!("the lower-bound instance needs a finite M >= 4, got {big_m}")));
    }
    let w = n - 1;
    let d = n - 1;
    let root_m = big_m.sqrt();
    let root_n = (n as f64).sqrt();

    let mut sets = vec![CoverSet { id: "S_d".into(), cost: 1.0, elements: ElementSet::singleton(d) }];
    for i in 0..w {
        sets.push(CoverSet { id: format!("S_{i}"), cost: big_m / root_n, elements: ElementSet::singleton(i) });
    }
    sets.push(CoverSet { id: "S_W".into(), cost: big_m, elements: (0..w).collect() });
    let instance = Instance::new(n, sets, None)?;

    let rare = 1.0 / root_m;
    let common = Scenario { prob: 1.0 - rare, elements: ElementSet::singleton(d) };
    let mut single = vec![common.clone()];
    single.extend((0..w).map(|i| Scenario { prob: rare / w as f64, elements: ElementSet::singleton(i) }));
    let single_branch = Distribution::scenario(single)?;
    let whole_branch = Distribution::scenario(vec![common, Scenario { prob: rare, elements: (0..w).collect() }])?;

    let mut singleton = vec![0usize; n];
    let mut big = vec![0usize; n];
    for i in 0..w {
        singleton[i] = 1 + i;
        big[i] = 1 + w;
    }
    Ok(LbInstance {
        n,
        big_m,
        instance,
        single_branch,
        whole_branch,
        phi_singleton: Mapping::single(singleton),
        phi_big: Mapping::single(big),
        singleton_cost: (1.0 - rare) * 1.0 + rare * (big_m / root_n),
        big_cost: (1.0 - rare) * 1.0 + rare * big_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_four_and_hundred() {
        let lb = lb_instance(4, 100.0).unwrap();
        assert!((lb.singleton_cost - 5.9).abs() < 1e-12);
        assert!((lb.big_cost - 10.9).abs() < 1e-12);
        let ev = lb.single_branch.evaluator().unwrap();
        let c = lb.phi_singleton.expected_cost(&lb.instance, &ev, None).unwrap();
        assert!((c - lb.singleton_cost).abs() < 1e-9);
        let ev = lb.whole_branch.evaluator().unwrap();
        let c = lb.phi_big.expected_cost(&lb.instance, &ev, None).unwrap();
        assert!((c - lb.big_cost).abs() < 1e-9);
    }

    #[test]
    fn parameter_domain() {
        assert!(lb_instance(1, 100.0).is_err());
        assert!(lb_instance(4, 3.0).is_err());
    }
}
