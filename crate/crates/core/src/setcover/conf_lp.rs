use rayon::prelude::*;

use super::{column_cost, Column, ConnectionCosts, FractionalCover};
use crate::error::{invalid, Result};
use crate::lpcore::{cutting_plane, solve_lp, Constraint, Cut, LinearProgram, Relation, Sense};
use crate::model::{Distribution, ElementSet, Evaluator, Instance};
use crate::submodular::{minimize, SubmodularOracle};

/// A dual constraint counts as violated when `h_S(B) < -SEPARATION_TOL`.
pub const SEPARATION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub set: ElementSet,
    /// `-h_S(B)`, positive.
    pub violation: f64,
}

fn separate(
    inst: &Instance,
    eval: &Evaluator<'_>,
    conn: Option<&ConnectionCosts>,
    s: usize,
    alpha: &[f64],
    z: f64,
) -> Result<Option<Violation>> {
    let h = SubmodularOracle::new(inst.set(s).elements.clone(), |b: &ElementSet| {
        column_cost(inst, eval, conn, s, b) - b.iter().map(|u| alpha[u]).sum::<f64>() + z
    });
    let min = minimize(&h)?;
    Ok((min.value < -SEPARATION_TOL).then(|| Violation { set: min.set, violation: -min.value }))
}

/// Most violated dual constraint of set `s`: minimizes
/// `h_S(B) = c(S)·g(B) + Σ_{u∈B} d(u,S)·g({u}) - Σ_{u∈B} α_u` over `B ⊆ S`.
pub fn separation_sc(
    inst: &Instance,
    s: usize,
    alpha: &[f64],
    dist: &Distribution,
    conn: Option<&ConnectionCosts>,
) -> Result<Option<Violation>> {
    if alpha.len() != inst.n() || alpha.iter().any(|a| *a < 0.0) {
        return Err(invalid("separation needs one nonnegative dual per element"));
    }
    separate(inst, &dist.evaluator()?, conn, s, alpha, 0.0)
}

fn dual_cut(inst: &Instance, eval: &Evaluator<'_>, conn: Option<&ConnectionCosts>, s: usize, b: ElementSet) -> Cut<(usize, ElementSet)> {
    let mut coeffs: Vec<(usize, f64)> = b.iter().map(|u| (u, 1.0)).collect();
    if inst.is_multicover() {
        coeffs.push((inst.n() + s, -1.0));
    }
    let rhs = column_cost(inst, eval, conn, s, &b);
    Cut { constraint: Constraint { coeffs, relation: Relation::Le, rhs }, tag: (s, b) }
}

fn round_cap(n: usize) -> usize {
    10 * (1usize << n.min(16))
}

/// Solves the configuration LP by cutting planes on its dual, then solves the
/// restricted primal over the generated columns and brings it to normal form.
///
/// With requirements other than all ones, each element needs covering mass
/// `r(u)` and every set carries total mass at most 1.
pub fn solve_conf_lp(inst: &Instance, dist: &Distribution, conn: Option<&ConnectionCosts>) -> Result<FractionalCover> {
    inst.check_feasible()?;
    dist.validate_for(inst.n())?;
    let eval = dist.evaluator()?;
    if let Some(conn) = conn {
        conn.validate_for(inst)?;
    }
    let n = inst.n();
    let m = inst.m();
    let multi = inst.is_multicover();

    let mut master = LinearProgram::new(Sense::Maximize);
    for u in 0..n {
        master.add_named_var(format!("alpha{u}"), inst.requirement(u) as f64, (0.0, f64::INFINITY));
    }
    if multi {
        for s in 0..m {
            master.add_named_var(format!("z{s}"), -1.0, (0.0, f64::INFINITY));
        }
    }

    // Singleton and whole-set columns keep the restricted primal feasible, so
    // the master is bounded from the first round.
    let mut seeds = Vec::new();
    for (s, set) in inst.sets().iter().enumerate() {
        for u in set.elements.iter() {
            seeds.push(dual_cut(inst, &eval, conn, s, ElementSet::singleton(u)));
        }
        if set.elements.len() > 1 {
            seeds.push(dual_cut(inst, &eval, conn, s, set.elements.clone()));
        }
    }

    let separator = |point: &[f64]| -> Result<Vec<Cut<(usize, ElementSet)>>> {
        let alpha = &point[..n];
        let found: Vec<Result<Option<Violation>>> = (0..m)
            .into_par_iter()
            .map(|s| separate(inst, &eval, conn, s, alpha, if multi { point[n + s] } else { 0.0 }))
            .collect();
        let mut cuts = Vec::new();
        for (s, v) in found.into_iter().enumerate() {
            if let Some(v) = v? {
                cuts.push(dual_cut(inst, &eval, conn, s, v.set));
            }
        }
        Ok(cuts)
    };
    let out = cutting_plane(master, seeds, separator, round_cap(n))?;

    let tags: Vec<&(usize, ElementSet)> = out.pool.cuts().iter().map(|c| &c.tag).collect();
    let mut primal = LinearProgram::new(Sense::Minimize);
    for (k, (s, b)) in tags.iter().enumerate() {
        primal.add_named_var(format!("y{k}"), column_cost(inst, &eval, conn, *s, b), (0.0, f64::INFINITY));
    }
    for u in 0..n {
        let coeffs = tags.iter().enumerate().filter(|(_, (_, b))| b.contains(u)).map(|(k, _)| (k, 1.0)).collect();
        primal.add_constraint(coeffs, Relation::Ge, inst.requirement(u) as f64);
    }
    if multi {
        for s in 0..m {
            let coeffs = tags.iter().enumerate().filter(|(_, (t, _))| *t == s).map(|(k, _)| (k, 1.0)).collect();
            primal.add_constraint(coeffs, Relation::Le, 1.0);
        }
    }
    let sol = solve_lp(&primal)?;
    let rel = (sol.value - out.value).abs() / out.value.abs().max(1.0);
    if rel > 1e-6 {
        log::warn!("restricted primal {} and master {} differ by {rel:e}", sol.value, out.value);
    }

    let columns: Vec<Column> = tags
        .iter()
        .zip(&sol.x)
        .filter(|(_, y)| **y > 1e-12)
        .map(|((s, b), y)| Column { set: *s, b: b.clone(), y: *y })
        .collect();
    let columns = normalize_columns(columns, inst.requirements());
    let value = columns.iter().map(|c| c.y * column_cost(inst, &eval, conn, c.set, &c.b)).sum();

    Ok(FractionalCover {
        columns,
        duals: out.point[..n].to_vec(),
        set_duals: if multi { out.point[n..].to_vec() } else { vec![0.0; m] },
        value,
        dual_value: out.value,
        rounds: out.rounds,
        cuts: out.pool.len(),
    })
}

/// Removes surplus coverage: while element `u` has mass above `r(u)`, strip
/// `u` from columns (splitting one if needed). By monotonicity of `g` this
/// never increases cost. Empty columns are dropped and equal columns merged.
pub fn normalize_columns(mut columns: Vec<Column>, requirements: &[u32]) -> Vec<Column> {
    for (u, &r) in requirements.iter().enumerate() {
        let mut excess: f64 = columns.iter().filter(|c| c.b.contains(u)).map(|c| c.y).sum::<f64>() - r as f64;
        let mut i = 0;
        while excess > 1e-12 && i < columns.len() {
            if columns[i].b.contains(u) && columns[i].y > 0.0 {
                if columns[i].y <= excess {
                    excess -= columns[i].y;
                    columns[i].b.remove(u);
                } else {
                    columns[i].y -= excess;
                    let mut b = columns[i].b.clone();
                    b.remove(u);
                    columns.push(Column { set: columns[i].set, b, y: excess });
                    excess = 0.0;
                }
            }
            i += 1;
        }
    }
    columns.retain(|c| !c.b.is_empty() && c.y > 0.0);
    columns.sort_by(|a, b| (a.set, &a.b).cmp(&(b.set, &b.b)));
    let mut merged: Vec<Column> = Vec::with_capacity(columns.len());
    for c in columns {
        match merged.last_mut() {
            Some(last) if last.set == c.set && last.b == c.b => last.y += c.y,
            _ => merged.push(c),
        }
    }
    merged
}
