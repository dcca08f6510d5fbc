use super::FlInstance;

const TIME_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PrimalDual {
    /// Facility per input client, in input order.
    pub assignment: Vec<usize>,
    /// Facilities kept after conflict resolution, in opening order.
    pub open: Vec<usize>,
    /// `α_c = p_c·a_c` per input client; their sum lower-bounds the distorted LP.
    pub duals: Vec<f64>,
    /// `Σ o_f` over facilities with clients plus `Σ p_c·d(c, φ(c))`.
    pub cost: f64,
}

/// Jain-Vazirani primal-dual on the clients `clients`, with the dual of
/// client `c` growing at speed `p_c`. At time `t` client `c` pays
/// `p_c·(t - d(c,f))` towards every facility it reaches; a facility opens
/// once paid for, and clients freeze on reaching an open facility.
pub fn primal_dual_distorted_fl(inst: &FlInstance, clients: &[usize]) -> PrimalDual {
    let nf = inst.facilities();
    let k = clients.len();
    if k == 0 {
        return PrimalDual { assignment: Vec::new(), open: Vec::new(), duals: Vec::new(), cost: 0.0 };
    }
    let p = |i: usize| inst.probs[clients[i]];
    let d = |i: usize, f: usize| inst.dist[clients[i]][f];

    let mut frozen: Vec<Option<f64>> = vec![None; k];
    let mut opened: Vec<Option<f64>> = vec![None; nf];
    let mut t = 0.0f64;

    let payment = |f: usize, t: f64, frozen: &[Option<f64>]| -> f64 {
        (0..k).map(|i| p(i) * (frozen[i].unwrap_or(t) - d(i, f)).max(0.0)).sum()
    };

    loop {
        loop {
            let mut changed = false;
            for f in 0..nf {
                if opened[f].is_none() && payment(f, t, &frozen) >= inst.open_cost[f] - TIME_TOL * (1.0 + inst.open_cost[f]) {
                    opened[f] = Some(t);
                    changed = true;
                }
            }
            for i in 0..k {
                if frozen[i].is_none() && (0..nf).any(|f| opened[f].is_some() && d(i, f) <= t + TIME_TOL) {
                    frozen[i] = Some(t);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if frozen.iter().all(Option::is_some) {
            break;
        }
        let mut next = f64::INFINITY;
        for i in (0..k).filter(|&i| frozen[i].is_none()) {
            for f in 0..nf {
                if d(i, f) > t + TIME_TOL {
                    next = next.min(d(i, f));
                }
            }
        }
        for f in (0..nf).filter(|&f| opened[f].is_none()) {
            let slope: f64 = (0..k).filter(|&i| frozen[i].is_none() && d(i, f) <= t + TIME_TOL).map(p).sum();
            if slope > 0.0 {
                next = next.min(t + (inst.open_cost[f] - payment(f, t, &frozen)).max(0.0) / slope);
            }
        }
        if !next.is_finite() {
            break;
        }
        t = next;
    }

    // Keep a maximal set of temporarily open facilities, in opening order,
    // no two of which are paid positively by the same client.
    let mut order: Vec<usize> = (0..nf).filter(|&f| opened[f].is_some()).collect();
    order.sort_by(|&a, &b| opened[a].unwrap().total_cmp(&opened[b].unwrap()).then(a.cmp(&b)));
    let pays = |i: usize, f: usize| p(i) > 0.0 && frozen[i].map_or(false, |a| a - d(i, f) > TIME_TOL);
    let mut open: Vec<usize> = Vec::new();
    for f in order {
        if !open.iter().any(|&g| (0..k).any(|i| pays(i, f) && pays(i, g))) {
            open.push(f);
        }
    }

    // Clients never frozen have speed zero and no facility opened at all;
    // they go to the cheapest facility.
    let fallback = (0..nf).min_by(|&a, &b| inst.open_cost[a].total_cmp(&inst.open_cost[b]).then(a.cmp(&b))).expect("facility");
    let assignment: Vec<usize> = (0..k)
        .map(|i| {
            open.iter()
                .copied()
                .min_by(|&a, &b| d(i, a).total_cmp(&d(i, b)).then(a.cmp(&b)))
                .unwrap_or(fallback)
        })
        .collect();
    let duals = (0..k).map(|i| p(i) * frozen[i].unwrap_or(t)).collect();

    let mut used = vec![false; nf];
    let mut cost = 0.0;
    for (i, &f) in assignment.iter().enumerate() {
        used[f] = true;
        cost += p(i) * d(i, f);
    }
    cost += (0..nf).filter(|&f| used[f]).map(|f| inst.open_cost[f]).sum::<f64>();
    PrimalDual { assignment, open, duals, cost }
}
