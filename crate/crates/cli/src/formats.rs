//! Plain-text writers: cdd `.ine` H-representations, CPLEX LP files and
//! a human-readable listing.

use std::collections::BTreeSet;
use std::fmt::Write;

use stp_core::facets::{ConstraintSystem, Inequality, Sense};
use stp_core::graph::Graph;

/// H-representation with rows `b −a` meaning `b − a·x ≥ 0`; inequalities
/// first, then the equalities listed on the `linearity` line.
pub fn write_ine(g: &Graph, sys: &ConstraintSystem) -> String {
    let m = g.m();
    let total = sys.inequalities.len() + sys.equalities.len();
    let mut out = String::from("H-representation\n");
    if !sys.equalities.is_empty() {
        let first = sys.inequalities.len() + 1;
        let idx: Vec<String> = (first..=total).map(|i| i.to_string()).collect();
        writeln!(out, "linearity {} {}", sys.equalities.len(), idx.join(" ")).unwrap();
    }
    out.push_str("begin\n");
    writeln!(out, "{total} {} integer", m + 1).unwrap();
    for q in sys.inequalities.iter().chain(&sys.equalities) {
        let le = q.as_le();
        let mut row = vec![le.rhs];
        row.extend(le.dense(m).iter().map(|&a| -a));
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out.push_str("end\n");
    out
}

/// LP variable names: `x_<label>` when every label is a plain identifier,
/// `x<id>` otherwise.
pub fn lp_names(g: &Graph) -> Vec<String> {
    let plain = g
        .edges()
        .iter()
        .all(|e| e.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
    g.edges()
        .iter()
        .map(|e| if plain { format!("x_{}", e.label) } else { format!("x{}", e.id) })
        .collect()
}

fn lp_expr(q: &Inequality, names: &[String]) -> String {
    let mut out = String::new();
    for (i, (&k, &c)) in q.coeffs.iter().enumerate() {
        let sign = if c < 0 { "- " } else if i > 0 { "+ " } else { "" };
        if i > 0 {
            out.push(' ');
        }
        out.push_str(sign);
        if c.abs() != 1 {
            write!(out, "{} ", c.abs()).unwrap();
        }
        out.push_str(&names[k]);
    }
    out
}

/// Single-variable row x(e) ≤ 1 or x(e) ≥ 0, as (edge, is_upper).
fn as_unit_bound(q: &Inequality) -> Option<(usize, bool)> {
    let (&e, &c) = q.coeffs.iter().next().filter(|_| q.coeffs.len() == 1)?;
    match (q.sense, c, q.rhs) {
        (Sense::Le, 1, 1) | (Sense::Ge, -1, -1) => Some((e, true)),
        (Sense::Ge, 1, 0) | (Sense::Le, -1, 0) => Some((e, false)),
        _ => None,
    }
}

/// CPLEX LP file. Unit bounds appear in `Bounds` only when the system
/// contains them; other variables are declared free below or above, so
/// the file describes exactly the system. `relaxed` declares 0 ≤ x ≤ 1
/// for every variable, which is valid for trees but may add rows.
pub fn write_lp(g: &Graph, sys: &ConstraintSystem, relaxed: bool) -> String {
    let names = lp_names(g);
    let mut lower = BTreeSet::new();
    let mut upper = BTreeSet::new();
    let mut rows = Vec::new();
    for q in &sys.inequalities {
        match as_unit_bound(q) {
            Some((e, true)) => {
                upper.insert(e);
            }
            Some((e, false)) => {
                lower.insert(e);
            }
            None => rows.push(q),
        }
    }
    let mut out = String::from("\\ spanning tree polytope\nMinimize\n obj:");
    if let Some(first) = names.first() {
        write!(out, " 0 {first}").unwrap();
    }
    out.push_str("\nSubject To\n");
    for (i, q) in rows.iter().enumerate() {
        writeln!(out, " r{i}: {} {} {}", lp_expr(q, &names), q.sense.symbol(), q.rhs).unwrap();
    }
    for (i, q) in sys.equalities.iter().enumerate() {
        writeln!(out, " eq{i}: {} = {}", lp_expr(q, &names), q.rhs).unwrap();
    }
    out.push_str("Bounds\n");
    for (e, name) in names.iter().enumerate() {
        let lo = relaxed || lower.contains(&e);
        let hi = relaxed || upper.contains(&e);
        let line = match (lo, hi) {
            (true, true) => format!(" 0 <= {name} <= 1"),
            (true, false) => format!(" 0 <= {name} <= +inf"),
            (false, true) => format!(" -inf <= {name} <= 1"),
            (false, false) => format!(" {name} free"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

pub fn write_text(g: &Graph, sys: &ConstraintSystem) -> String {
    let name = |k: usize| g.edge(k).label.clone();
    let mut out = String::new();
    writeln!(
        out,
        "# {} vertices, {} edges, dimension {}, {} inequalities",
        g.n(),
        g.m(),
        sys.dimension,
        sys.inequalities.len()
    )
    .unwrap();
    for q in &sys.equalities {
        writeln!(out, "{}", q.render(name)).unwrap();
    }
    for q in &sys.inequalities {
        writeln!(out, "{}", q.render(name)).unwrap();
    }
    out
}
