//! `molien`: invariant counts by closed-form series, torus quadrature and
//! exact kernel computation.

use std::fmt::Write as _;

use serde::Serialize;

use qutrit_orbit::counting::{invariant_space, su3_invariant_space, MAX_KERNEL_DEGREE};
use qutrit_orbit::molien::{
    closed_form_degrees, expand_closed_form, quadrature_coefficients, residue_consistency_report, Group, Space,
    TorusRep, QUOTED_SU2U1_DEGREES,
};

use crate::io::SCHEMA_VERSION;
use crate::verify::kernel_counts;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    Quadrature,
    Kernel,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodRow {
    pub method: &'static str,
    pub counts: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotedComparison {
    pub degrees: Vec<usize>,
    pub counts: Vec<u64>,
    pub matches_bloch8: bool,
    pub matches_matrix9: bool,
    /// Linear invariants on the 9-variable space.
    pub matrix9_degree1: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MolienReport {
    pub schema_version: u32,
    pub group: &'static str,
    pub space: &'static str,
    pub max_degree: usize,
    pub closed_form_degrees: Vec<usize>,
    pub rows: Vec<MethodRow>,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quoted: Option<QuotedComparison>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn group_name(g: Group) -> &'static str {
    match g {
        Group::Su3 => "su3",
        Group::Su2U1 => "u2",
    }
}

pub fn space_name(s: Space) -> &'static str {
    match s {
        Space::Bloch8 => "bloch8",
        Space::Matrix9 => "matrix9",
    }
}

pub fn run_molien(group: Group, space: Space, k: usize, method: Method) -> qutrit_orbit::Result<MolienReport> {
    let degrees = closed_form_degrees(group, space);
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let want = |m: Method| method == m || method == Method::All;
    if want(Method::Series) {
        rows.push(MethodRow { method: "series", counts: expand_closed_form(&degrees, k), residual: None });
    }
    if want(Method::Quadrature) {
        let q = quadrature_coefficients(&TorusRep::new(group, space), group, k)?;
        rows.push(MethodRow { method: "quadrature", counts: q.counts, residual: Some(q.residual) });
    }
    if want(Method::Kernel) {
        if k <= MAX_KERNEL_DEGREE {
            rows.push(MethodRow { method: "kernel", counts: kernel_counts(group, space, k)?, residual: None });
        } else if method == Method::Kernel {
            return Err(qutrit_orbit::Error::DegreeOutOfRange { degree: k, max: MAX_KERNEL_DEGREE });
        } else {
            notes.push(format!("kernel skipped: degree {k} exceeds {MAX_KERNEL_DEGREE}"));
        }
    }
    let agree = rows.windows(2).all(|w| w[0].counts == w[1].counts);

    let quoted = if group == Group::Su2U1 {
        let r = residue_consistency_report(k)?;
        if !r.quoted_matches_matrix9 {
            notes.push(format!(
                "closed form (1,2,2,3) counts the 8-variable space; the 9-variable space has {} linear invariants",
                r.matrix9_degree1
            ));
        }
        Some(QuotedComparison {
            degrees: QUOTED_SU2U1_DEGREES.to_vec(),
            counts: expand_closed_form(&QUOTED_SU2U1_DEGREES, k),
            matches_bloch8: r.quoted_matches_bloch8,
            matches_matrix9: r.quoted_matches_matrix9,
            matrix9_degree1: r.matrix9_degree1,
        })
    } else {
        None
    };

    Ok(MolienReport {
        schema_version: SCHEMA_VERSION,
        group: group_name(group),
        space: space_name(space),
        max_degree: k,
        closed_form_degrees: degrees,
        rows,
        agree,
        quoted,
        notes,
    })
}

/// Exact invariant basis of ξ-polynomials, one per line, grouped by degree.
pub fn basis_text(group: Group, k: usize) -> qutrit_orbit::Result<String> {
    let mut s = String::new();
    for d in 0..=k.min(MAX_KERNEL_DEGREE) {
        let polys: Vec<String> = match group {
            Group::Su2U1 => invariant_space(d)?.basis.iter().map(|p| p.to_string()).collect(),
            Group::Su3 => su3_invariant_space(d)?.basis.iter().map(|p| p.to_string()).collect(),
        };
        let _ = writeln!(s, "# degree {d}: {}", polys.len());
        for p in polys {
            let _ = writeln!(s, "{p}");
        }
    }
    Ok(s)
}

pub fn render_text(r: &MolienReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group {} on {}, degrees 0..={}", r.group, r.space, r.max_degree);
    for row in &r.rows {
        let counts: Vec<String> = row.counts.iter().map(u64::to_string).collect();
        let _ = write!(s, "{:>10}: {}", row.method, counts.join(" "));
        if let Some(res) = row.residual {
            let _ = write!(s, "  (residual {res:.1e})");
        }
        s.push('\n');
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(s, "{}", if r.agree { "methods agree" } else { "METHODS DISAGREE" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u2_bloch8_all_methods() {
        let r = run_molien(Group::Su2U1, Space::Bloch8, 4, Method::All).unwrap();
        assert!(r.agree);
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.rows[0].counts, [1, 1, 3, 4, 7]);
        assert!(r.quoted.unwrap().matches_bloch8);
    }

    #[test]
    fn matrix9_notes_the_extra_linear_invariant() {
        let r = run_molien(Group::Su2U1, Space::Matrix9, 3, Method::All).unwrap();
        assert!(r.agree);
        let q = r.quoted.unwrap();
        assert!(!q.matches_matrix9);
        assert_eq!(q.matrix9_degree1, 2);
    }

    #[test]
    fn kernel_degree_cap() {
        assert!(run_molien(Group::Su3, Space::Bloch8, 7, Method::Kernel).is_err());
        let r = run_molien(Group::Su3, Space::Bloch8, 8, Method::All).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(!r.notes.is_empty());
    }
}
