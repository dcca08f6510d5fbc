use std::fmt::Write;

use super::{LinearProgram, Relation, Sense};

fn term(out: &mut String, first: &mut bool, coef: f64, name: &str) {
    if coef == 0.0 {
        return;
    }
    match (coef < 0.0, *first) {
        (false, true) => {}
        (true, true) => out.push_str("- "),
        (false, false) => out.push_str(" + "),
        (true, false) => out.push_str(" - "),
    }
    let _ = write!(out, "{} {name}", coef.abs());
    *first = false;
}

pub(super) fn render(lp: &LinearProgram) -> String {
    let mut out = String::new();
    out.push_str(match lp.sense {
        Sense::Minimize => "Minimize\n obj: ",
        Sense::Maximize => "Maximize\n obj: ",
    });
    let mut first = true;
    for (j, &c) in lp.objective.iter().enumerate() {
        term(&mut out, &mut first, c, &lp.names[j]);
    }
    if first {
        out.push('0');
    }
    out.push_str("\nSubject To\n");
    for (i, row) in lp.constraints.iter().enumerate() {
        let _ = write!(out, " c{i}: ");
        let mut first = true;
        for &(j, a) in &row.coeffs {
            term(&mut out, &mut first, a, &lp.names[j]);
        }
        if first {
            out.push('0');
        }
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " {rel} {}", row.rhs);
    }
    out.push_str("Bounds\n");
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        let name = &lp.names[j];
        match (lo.is_finite(), hi.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " {name} free");
            }
            (true, false) if lo == 0.0 => {}
            (true, false) => {
                let _ = writeln!(out, " {name} >= {lo}");
            }
            (false, true) => {
                let _ = writeln!(out, " -inf <= {name} <= {hi}");
            }
            (true, true) => {
                let _ = writeln!(out, " {lo} <= {name} <= {hi}");
            }
        }
    }
    out.push_str("End\n");
    out
}
