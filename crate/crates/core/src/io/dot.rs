use std::fmt::Write;

use crate::orbit::StratumLabel;
use crate::polytope::FaceLattice;
use crate::strata::StratificationReport;

/// Hasse diagram of the face lattice; singular faces are boxed.
pub fn faces_dot(lat: &FaceLattice) -> String {
    let mut s = String::from("digraph faces {\n  rankdir=BT;\n");
    for f in lat.faces() {
        let shape = if f.regular { "ellipse" } else { "box" };
        let _ = writeln!(s, "  f{} [label=\"{} dim {}\", shape={shape}];", f.id, f.index_set, f.dim);
    }
    for (a, b) in lat.covers() {
        let _ = writeln!(s, "  f{a} -> f{b};");
    }
    s.push_str("}\n");
    s
}

/// Closure order of the strata, edges pointing from a stratum to the one whose closure contains it.
pub fn strata_dot(report: &StratificationReport) -> String {
    let mut s = String::from("digraph strata {\n  rankdir=BT;\n");
    for (i, st) in report.strata.iter().enumerate() {
        let label = match st.label {
            StratumLabel::Maximal => format!("maximal dim {}", st.complex_dim),
            StratumLabel::Singular(_) => {
                format!("{} dim {} depth {}", st.index_set, st.complex_dim, st.depth)
            }
        };
        let _ = writeln!(s, "  s{i} [label=\"{label}\"];");
    }
    for (a, b) in &report.edges {
        let _ = writeln!(s, "  s{a} -> s{b};");
    }
    s.push_str("}\n");
    s
}
