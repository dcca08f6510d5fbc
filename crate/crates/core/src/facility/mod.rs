//! Universal stochastic metric facility location with independently
//! activated clients: the rent-or-buy LP, the client split and the rounding.

mod primal_dual;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lpcore::{solve_lp, LinearProgram, Relation, Sense};
use crate::model::{CoverSet, Distribution, ElementSet, Instance};
use crate::setcover::ConnectionCosts;

pub use primal_dual::{primal_dual_distorted_fl, PrimalDual};

/// Tolerance of the triangle-inequality check on load.
pub const METRIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FlInstance {
    pub probs: Vec<f64>,
    pub facility_ids: Vec<String>,
    pub open_cost: Vec<f64>,
    /// `dist[c][f]`.
    pub dist: Vec<Vec<f64>>,
    pub metric: bool,
}

#[derive(Serialize, Deserialize)]
struct ClientFile {
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct FacilityFile {
    id: String,
    open_cost: f64,
}

#[derive(Serialize, Deserialize)]
struct FlFile {
    clients: Vec<ClientFile>,
    facilities: Vec<FacilityFile>,
    dist: Vec<Vec<f64>>,
    #[serde(default = "yes")]
    metric: bool,
}

fn yes() -> bool {
    true
}

impl FlInstance {
    pub fn new(probs: Vec<f64>, open_cost: Vec<f64>, dist: Vec<Vec<f64>>, metric: bool) -> Result<Self> {
        let ids = (0..open_cost.len()).map(|f| format!("F{f}")).collect();
        Self::with_ids(probs, ids, open_cost, dist, metric)
    }

    pub fn with_ids(probs: Vec<f64>, facility_ids: Vec<String>, open_cost: Vec<f64>, dist: Vec<Vec<f64>>, metric: bool) -> Result<Self> {
        if open_cost.is_empty() {
            return Err(invalid("facility location needs at least one facility"));
        }
        if facility_ids.len() != open_cost.len() {
            return Err(invalid("facility ids and opening costs differ in length"));
        }
        let mut sorted = facility_ids.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("facility ids must be unique"));
        }
        if let Some(c) = probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(invalid(format!("client {c} has activation probability {} outside [0, 1]", probs[c])));
        }
        if let Some(f) = open_cost.iter().position(|o| !(o.is_finite() && *o >= 0.0)) {
            return Err(invalid(format!("facility {} has invalid opening cost", facility_ids[f])));
        }
        if dist.len() != probs.len() || dist.iter().any(|row| row.len() != open_cost.len()) {
            return Err(invalid("distance matrix must have one row per client and one column per facility"));
        }
        if dist.iter().flatten().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(invalid("distances must be finite and nonnegative"));
        }
        let inst = Self { probs, facility_ids, open_cost, dist, metric };
        if metric {
            inst.check_metric()?;
        }
        Ok(inst)
    }

    /// Distances extend to a metric on clients and facilities iff
    /// `d(c,f) ≤ d(c,f') + d(c',f') + d(c',f)` for all choices.
    fn check_metric(&self) -> Result<()> {
        let (nc, nf) = (self.clients(), self.facilities());
        for c in 0..nc {
            for f in 0..nf {
                for c2 in 0..nc {
                    for f2 in 0..nf {
                        let detour = self.dist[c][f2] + self.dist[c2][f2] + self.dist[c2][f];
                        if self.dist[c][f] > detour + METRIC_TOL {
                            return Err(invalid(format!(
                                "distances are not metric: d({c},{f}) = {} exceeds the path through facility {f2} and client {c2} ({detour})",
                                self.dist[c][f]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn clients(&self) -> usize {
        self.probs.len()
    }

    pub fn facilities(&self) -> usize {
        self.open_cost.len()
    }

    pub fn distribution(&self) -> Result<Distribution> {
        Distribution::independent(self.probs.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FlFile = serde_json::from_str(text)?;
        Self::with_ids(
            file.clients.iter().map(|c| c.p).collect(),
            file.facilities.iter().map(|f| f.id.clone()).collect(),
            file.facilities.iter().map(|f| f.open_cost).collect(),
            file.dist,
            file.metric,
        )
    }

    pub fn to_json(&self) -> String {
        let file = FlFile {
            clients: self.probs.iter().map(|&p| ClientFile { p }).collect(),
            facilities: self
                .facility_ids
                .iter()
                .zip(&self.open_cost)
                .map(|(id, &open_cost)| FacilityFile { id: id.clone(), open_cost })
                .collect(),
            dist: self.dist.clone(),
            metric: self.metric,
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }

    /// Facility minimizing `o_f + d(c,f)`, lowest index on ties.
    pub fn cheapest_rent(&self, c: usize) -> usize {
        (0..self.facilities())
            .min_by(|&a, &b| (self.open_cost[a] + self.dist[c][a]).total_cmp(&(self.open_cost[b] + self.dist[c][b])).then(a.cmp(&b)))
            .expect("at least one facility")
    }

    /// The non-metric view: one set per facility holding every client, with
    /// the distances as connection costs.
    pub fn to_set_cover(&self) -> Result<(Instance, ConnectionCosts)> {
        let all: ElementSet = (0..self.clients()).collect();
        let sets = self
            .facility_ids
            .iter()
            .zip(&self.open_cost)
            .map(|(id, &cost)| CoverSet { id: id.clone(), cost, elements: all.clone() })
            .collect();
        Ok((Instance::new(self.clients(), sets, None)?, ConnectionCosts::new(self.dist.clone())))
    }
}

/// `φ(c)` per client, as facility indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlMapping {
    pub assignment: Vec<usize>,
}

impl FlMapping {
    pub fn validate(&self, inst: &FlInstance) -> Result<()> {
        if self.assignment.len() != inst.clients() {
            let c = self.assignment.len().min(inst.clients());
            return Err(Error::Infeasible(format!("client {c} is not assigned")));
        }
        if let Some(c) = self.assignment.iter().position(|&f| f >= inst.facilities()) {
            return Err(invalid(format!("client {c} is assigned to unknown facility index {}", self.assignment[c])));
        }
        Ok(())
    }

    /// `Σ_f o_f·g(φ⁻¹(f)) + Σ_c p_c·d(c,φ(c))`.
    pub fn expected_cost(&self, inst: &FlInstance) -> Result<f64> {
        self.validate(inst)?;
        let dist = inst.distribution()?;
        let eval = dist.evaluator()?;
        let mut pre = vec![ElementSet::new(); inst.facilities()];
        for (c, &f) in self.assignment.iter().enumerate() {
            pre[f].insert(c);
        }
        let opening: f64 = pre.iter().enumerate().map(|(f, b)| inst.open_cost[f] * eval.g(b)).sum();
        let connection: f64 = self.assignment.iter().enumerate().map(|(c, &f)| inst.probs[c] * inst.dist[c][f]).sum();
        Ok(opening + connection)
    }

    pub fn to_json(&self, inst: &FlInstance) -> String {
        let assignment: serde_json::Map<String, serde_json::Value> = self
            .assignment
            .iter()
            .enumerate()
            .map(|(c, &f)| (c.to_string(), inst.facility_ids[f].clone().into()))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "assignment": assignment })).expect("mapping serializes")
    }

    pub fn from_json(text: &str, inst: &FlInstance) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            assignment: std::collections::HashMap<String, String>,
        }
        let file: File = serde_json::from_str(text)?;
        let mut assignment = Vec::with_capacity(inst.clients());
        for c in 0..inst.clients() {
            let id = file
                .assignment
                .get(&c.to_string())
                .ok_or_else(|| Error::Infeasible(format!("client {c} is not assigned")))?;
            let f = inst
                .facility_ids
                .iter()
                .position(|x| x == id)
                .ok_or_else(|| invalid(format!("unknown facility id {id:?}")))?;
            assignment.push(f);
        }
        if let Some(extra) = file.assignment.keys().find(|k| k.parse::<usize>().map_or(true, |c| c >= inst.clients())) {
            return Err(invalid(format!("unknown client {extra:?}")));
        }
        Ok(Self { assignment })
    }
}

/// Optimal rent-or-buy fractions: `x[c][f]` (bought) and `xbar[c][f]` (rented).
#[derive(Debug, Clone)]
pub struct FlFractional {
    pub x: Vec<Vec<f64>>,
    pub xbar: Vec<Vec<f64>>,
    pub value: f64,
}

/// Minimizes `Σ_f o_f·max_c x_c^f + Σ_f o_f Σ_c p_c·x̄_c^f + Σ_{c,f} p_c·d(c,f)·(x_c^f + x̄_c^f)`
/// subject to `Σ_f (x_c^f + x̄_c^f) ≥ 1`; the max is carried by one auxiliary
/// variable per facility.
pub fn solve_lp_fl(inst: &FlInstance) -> Result<FlFractional> {
    let (nc, nf) = (inst.clients(), inst.facilities());
    let mut lp = LinearProgram::new(Sense::Minimize);
    let inf = f64::INFINITY;
    let mut x = vec![vec![0; nf]; nc];
    let mut xbar = vec![vec![0; nf]; nc];
    for c in 0..nc {
        for f in 0..nf {
            let p = inst.probs[c];
            x[c][f] = lp.add_named_var(format!("x_{c}_{f}"), p * inst.dist[c][f], (0.0, inf));
            xbar[c][f] = lp.add_named_var(format!("r_{c}_{f}"), p * (inst.open_cost[f] + inst.dist[c][f]), (0.0, inf));
        }
    }
    let aux: Vec<usize> = (0..nf).map(|f| lp.add_named_var(format!("open_{f}"), inst.open_cost[f], (0.0, inf))).collect();
    for c in 0..nc {
        let coeffs = (0..nf).flat_map(|f| [(x[c][f], 1.0), (xbar[c][f], 1.0)]).collect();
        lp.add_constraint(coeffs, Relation::Ge, 1.0);
    }
    for c in 0..nc {
        for f in 0..nf {
            lp.add_constraint(vec![(aux[f], 1.0), (x[c][f], -1.0)], Relation::Ge, 0.0);
        }
    }
    let sol = solve_lp(&lp)?;
    let pick = |idx: &Vec<Vec<usize>>| idx.iter().map(|row| row.iter().map(|&j| sol.x[j].max(0.0)).collect()).collect();
    Ok(FlFractional { x: pick(&x), xbar: pick(&xbar), value: sol.value })
}

/// Optimum of the distorted facility-location LP over `clients`:
/// `min Σ_f o_f·max_c z_c^f + Σ_c Σ_f p_c·d(c,f)·z_c^f`, `Σ_f z_c^f ≥ 1`.
pub fn distorted_lp_value(inst: &FlInstance, clients: &[usize]) -> Result<f64> {
    if clients.is_empty() {
        return Ok(0.0);
    }
    let nf = inst.facilities();
    let mut lp = LinearProgram::new(Sense::Minimize);
    let inf = f64::INFINITY;
    let aux: Vec<usize> = (0..nf).map(|f| lp.add_var(inst.open_cost[f], (0.0, inf))).collect();
    for &c in clients {
        let z: Vec<usize> = (0..nf).map(|f| lp.add_var(inst.probs[c] * inst.dist[c][f], (0.0, inf))).collect();
        lp.add_constraint(z.iter().map(|&j| (j, 1.0)).collect(), Relation::Ge, 1.0);
        for f in 0..nf {
            lp.add_constraint(vec![(aux[f], 1.0), (z[f], -1.0)], Relation::Ge, 0.0);
        }
    }
    Ok(solve_lp(&lp)?.value)
}

/// Big side: bought mass `Σ_f x_c^f ≥ 3/4`. Everyone else is on the small
/// side, where feasibility gives rented mass above 1/4.
pub fn split_clients(frac: &FlFractional) -> (Vec<usize>, Vec<usize>) {
    let mut big = Vec::new();
    let mut small = Vec::new();
    for (c, row) in frac.x.iter().enumerate() {
        if row.iter().sum::<f64>() >= 0.75 - 1e-9 {
            big.push(c);
        } else {
            small.push(c);
        }
    }
    (big, small)
}

/// Rounds an LP-FL solution: big-side clients through the speed-distorted
/// primal-dual, small-side clients to their cheapest `o_f + d(c,f)`.
pub fn round_fl(inst: &FlInstance, frac: &FlFractional) -> Result<FlMapping> {
    if !inst.metric {
        return Err(Error::Unsupported("the facility rounding needs a metric instance".into()));
    }
    let (big, small) = split_clients(frac);
    let pd = primal_dual_distorted_fl(inst, &big);
    let mut assignment = vec![usize::MAX; inst.clients()];
    for (&c, &f) in big.iter().zip(&pd.assignment) {
        assignment[c] = f;
    }
    for c in small {
        assignment[c] = inst.cheapest_rent(c);
    }
    Ok(FlMapping { assignment })
}

/// LP-FL solve followed by [`round_fl`].
pub fn solve_fl(inst: &FlInstance) -> Result<(FlMapping, FlFractional)> {
    let frac = solve_lp_fl(inst)?;
    Ok((round_fl(inst, &frac)?, frac))
}
