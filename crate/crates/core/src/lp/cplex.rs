use std::fmt::Write;

use super::{LinearProgram, Relation, Sense};
use crate::scalar::Scalar;

/// Render in CPLEX-LP format so the model can be cross-checked with an
/// external solver. Coefficients print as `f64`.
pub fn to_cplex_lp<T: Scalar>(lp: &LinearProgram<T>) -> String {
    let mut out = String::new();
    out.push_str(match lp.sense() {
        Sense::Minimize => "Minimize\n",
        Sense::Maximize => "Maximize\n",
    });
    let obj: Vec<(usize, f64)> =
        lp.vars().iter().enumerate().map(|(j, v)| (j, v.cost.as_f64())).filter(|(_, c)| *c != 0.0).collect();
    out.push_str(" obj:");
    if obj.is_empty() {
        // The format needs at least one term.
        let _ = write!(out, " 0 {}", lp.vars().first().map_or("x0", |v| v.name.as_str()));
    }
    write_terms(&mut out, lp, &obj);
    out.push_str("\nSubject To\n");
    for (i, row) in lp.rows().iter().enumerate() {
        let _ = write!(out, " {}:", lp.row_name(i));
        let terms: Vec<(usize, f64)> = row.coeffs.iter().map(|(j, a)| (*j, a.as_f64())).collect();
        write_terms(&mut out, lp, &terms);
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(out, " {rel} {}", fmt_num(row.rhs.as_f64()));
    }
    out.push_str("Bounds\n");
    for v in lp.vars() {
        let l = v.lower.as_ref().map(|x| x.as_f64());
        let u = v.upper.as_ref().map(|x| x.as_f64());
        let _ = match (l, u) {
            (Some(l), None) if l == 0.0 => Ok(()),
            (None, None) => writeln!(out, " {} free", v.name),
            (Some(l), None) => writeln!(out, " {} >= {}", v.name, fmt_num(l)),
            (None, Some(u)) => writeln!(out, " -inf <= {} <= {}", v.name, fmt_num(u)),
            (Some(l), Some(u)) => writeln!(out, " {} <= {} <= {}", fmt_num(l), v.name, fmt_num(u)),
        };
    }
    out.push_str("End\n");
    out
}

fn write_terms<T: Scalar>(out: &mut String, lp: &LinearProgram<T>, terms: &[(usize, f64)]) {
    for (k, (j, a)) in terms.iter().enumerate() {
        let sign = if *a < 0.0 { "-" } else if k == 0 { "" } else { "+" };
        let _ = write!(out, " {sign}");
        if k > 0 || *a < 0.0 {
            out.push(' ');
        }
        let _ = write!(out, "{} {}", fmt_num(a.abs()), lp.vars()[*j].name);
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpBuilder;

    #[test]
    fn renders_all_sections() {
        let mut b = LpBuilder::new(Sense::Minimize);
        let x = b.named_var("x", 1.0, Some(0.0), None);
        let y = b.named_var("y", -2.0, None, None);
        let z = b.named_var("z", 0.0, Some(1.0), Some(4.0));
        b.named_row("r1", vec![(x, 1.0), (y, -1.0)], Relation::Ge, 1.0);
        b.named_row("r2", vec![(y, 1.0), (z, 0.5)], Relation::Eq, 2.0);
        let text = to_cplex_lp(&b.build().unwrap());
        assert_eq!(
            text,
            "Minimize\n obj: 1.0 x - 2.0 y\nSubject To\n r1: 1.0 x - 1.0 y >= 1.0\n r2: 1.0 y + 0.5 z = 2.0\nBounds\n y free\n 1.0 <= z <= 4.0\nEnd\n"
        );
    }
}
