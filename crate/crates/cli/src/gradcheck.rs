//! `gradcheck`: quoted versus validated local Grad entries, determinant,
//! Σ± surfaces and the c3 relation, each against the direct gradient products.

use std::time::Instant;

use serde::Serialize;

use qutrit_orbit::grad::{
    det_grad_local, local_model, numeric_grad, quoted_grad_local, quoted_sigma, sigma_surfaces, BasisPolynomial,
    LOCAL_BASIS,
};
use qutrit_orbit::invariants::{casimir_relation_check, casimirs, fitted_c3_relation, local_point, C3Relation};
use qutrit_orbit::sampling::uniform_bloch;

use crate::io::SCHEMA_VERSION;
use crate::verify::par_max;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryReport {
    pub i: usize,
    pub j: usize,
    pub row: &'static str,
    pub col: &'static str,
    pub quoted: String,
    pub validated: String,
    pub quoted_matches: bool,
    /// Max relative deviation of the validated entry from the direct product.
    pub max_deviation: f64,
    /// Same for the quoted entry.
    pub quoted_max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetReport {
    pub constant: String,
    pub linear: String,
    pub quadratic: String,
    pub disc_factor: String,
    pub quoted_matches: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaReport {
    /// Max `|det| / scale` at the computed roots.
    pub max_root_residual: f64,
    /// Max distance between computed and quoted roots.
    pub quoted_max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C3Report {
    /// Coefficients of `f1³, f1 f2, f1 f3, f4`.
    pub quoted: [String; 4],
    pub fitted: [String; 4],
    pub quoted_exact: bool,
    pub fitted_exact: bool,
    pub quoted_max_deviation: f64,
    pub fitted_max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradcheckReport {
    pub schema_version: u32,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub passed: bool,
    pub entries: Vec<EntryReport>,
    pub determinant: DetReport,
    pub sigma: SigmaReport,
    pub c3_relation: C3Report,
    pub wall_time_s: f64,
}

fn coefficient_strings(r: &C3Relation) -> [String; 4] {
    r.coefficients().map(|c| c.to_string())
}

fn is_exact(r: &C3Relation) -> bool {
    r.residual_polynomial().terms().next().is_none()
}

pub fn run_gradcheck(samples: usize, seed: u64, tol: f64) -> GradcheckReport {
    let start = Instant::now();
    let model = local_model();
    let quoted = quoted_grad_local();
    let names = LOCAL_BASIS.map(BasisPolynomial::name);
    let rel = |a: f64, b: f64, s: f64| {
        let e = (a - b).abs() / s.max(1.0);
        if e.is_nan() {
            f64::INFINITY
        } else {
            e
        }
    };

    let entries: Vec<EntryReport> = model
        .reports
        .iter()
        .map(|r| {
            let (a, b) = (r.i - 1, r.j - 1);
            let validated = model.entries[a][b].compile();
            let q = quoted[a][b].compile();
            let dev = |p: &qutrit_orbit::grad::CompiledPoly| {
                par_max(samples, |k| {
                    let xi = uniform_bloch(seed, k);
                    let g = numeric_grad(&LOCAL_BASIS, &xi);
                    rel(p.eval(&local_point(&xi)), g.get(a, b), g.max_abs())
                })
            };
            EntryReport {
                i: r.i,
                j: r.j,
                row: names[a],
                col: names[b],
                quoted: r.quoted.to_string(),
                validated: model.entries[a][b].to_string(),
                quoted_matches: r.quoted_matches(),
                max_deviation: dev(&validated),
                quoted_max_deviation: dev(&q),
            }
        })
        .collect();

    let det_dev = par_max(samples, |k| {
        let xi = uniform_bloch(seed, k);
        let g = numeric_grad(&LOCAL_BASIS, &xi);
        let d = det_grad_local(&local_point(&xi));
        rel(d.constant * d.linear_factor * d.quadratic_factor, g.det(), d.scale)
    });
    let determinant = DetReport {
        constant: model.det.constant.to_string(),
        linear: model.det.linear.to_string(),
        quadratic: model.det.quadratic.to_string(),
        disc_factor: model.det.disc_factor.to_string(),
        quoted_matches: model.det.quoted_matches,
        max_deviation: det_dev,
    };

    let roots = samples / 10 + 1;
    let sigma_point = |k: u64| {
        let xi = uniform_bloch(seed ^ 0x5157, k);
        (xi.0[0] * 0.9, (xi.0[1] + 1.0) * 0.3, (xi.0[2] + 1.0) * 0.5)
    };
    let sigma = SigmaReport {
        max_root_residual: par_max(roots, |k| {
            let (f1, f2, c2) = sigma_point(k);
            let Some((lo, hi)) = sigma_surfaces(f1, f2, c2) else { return f64::INFINITY };
            [lo, hi]
                .iter()
                .map(|&c3| {
                    let d = det_grad_local(&qutrit_orbit::LocalInvariantPoint::new(f1, f2, c2, c3));
                    d.value.abs() / d.scale
                })
                .fold(0.0, f64::max)
        }),
        quoted_max_deviation: par_max(roots, |k| {
            let (f1, f2, c2) = sigma_point(k);
            let (lo, hi) = sigma_surfaces(f1, f2, c2).unwrap_or((f64::NAN, f64::NAN));
            let (a, b) = quoted_sigma(f1, f2, c2);
            let (qa, qb) = (a.min(b), a.max(b));
            rel(lo, qa, 1.0).max(rel(hi, qb, 1.0))
        }),
    };

    let quoted_c3 = C3Relation::quoted();
    let c3_relation = C3Report {
        quoted: coefficient_strings(&quoted_c3),
        fitted: coefficient_strings(fitted_c3_relation()),
        quoted_exact: is_exact(&quoted_c3),
        fitted_exact: is_exact(fitted_c3_relation()),
        quoted_max_deviation: par_max(samples, |k| {
            let xi = uniform_bloch(seed, k);
            rel(casimir_relation_check(&xi).c3_quoted, 0.0, casimirs(&xi).c3.abs())
        }),
        fitted_max_deviation: par_max(samples, |k| {
            let xi = uniform_bloch(seed, k);
            rel(casimir_relation_check(&xi).c3_fitted, 0.0, casimirs(&xi).c3.abs())
        }),
    };

    let passed = entries.iter().all(|e| e.max_deviation <= tol)
        && determinant.max_deviation <= 1e-8
        && sigma.max_root_residual <= 1e-9
        && c3_relation.fitted_exact
        && c3_relation.fitted_max_deviation <= tol;

    GradcheckReport {
        schema_version: SCHEMA_VERSION,
        seed,
        samples,
        tol,
        passed,
        entries,
        determinant,
        sigma,
        c3_relation,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}

/// Plain-text summary, one line per entry.
pub fn render_text(r: &GradcheckReport) -> String {
    let mut s = String::new();
    for e in &r.entries {
        let mark = if e.quoted_matches { "ok" } else { "DIFFERS" };
        s.push_str(&format!(
            "B{}{} ({}, {}): {mark}  validated = {}  quoted = {}  max dev {:.2e} (quoted {:.2e})\n",
            e.i, e.j, e.row, e.col, e.validated, e.quoted, e.max_deviation, e.quoted_max_deviation
        ));
    }
    s.push_str(&format!(
        "det = {} * ({}) * ({})  quoted factorization {}  max dev {:.2e}\n",
        r.determinant.constant,
        r.determinant.linear,
        r.determinant.quadratic,
        if r.determinant.quoted_matches { "confirmed" } else { "rejected" },
        r.determinant.max_deviation
    ));
    s.push_str(&format!(
        "sigma roots: residual {:.2e}, distance to quoted {:.2e}\n",
        r.sigma.max_root_residual, r.sigma.quoted_max_deviation
    ));
    s.push_str(&format!(
        "c3 relation: fitted {:?} (exact {}), quoted {:?} (exact {}, max dev {:.2e})\n",
        r.c3_relation.fitted,
        r.c3_relation.fitted_exact,
        r.c3_relation.quoted,
        r.c3_relation.quoted_exact,
        r.c3_relation.quoted_max_deviation
    ));
    s.push_str(&format!("{}\n", if r.passed { "PASS" } else { "FAIL" }));
    s
}
