//! The full property suite behind `verify`.
//!
//! Every sampled check is a reduction of per-index values with `max` or `+`
//! on integers, so the outcome does not depend on the worker count.

use std::time::Instant;

use rayon::prelude::*;

use qutrit_orbit::counting::{invariant_dimension, matrix9_dimension, su3_invariant_dimension};
use qutrit_orbit::exact::SQRT_3;
use qutrit_orbit::grad::{
    det_grad_local, grad_local_closed, grad_su3_closed, numeric_grad, sigma_surfaces, GLOBAL_BASIS, LOCAL_BASIS,
};
use qutrit_orbit::invariants::{
    casimir_relation_check, casimirs, fitted_c3_relation, local_invariants, local_point, trace_coordinates,
};
use qutrit_orbit::membership::{
    hausdorff_distance, in_global_orbit_space, in_local_orbit_space, is_physical_bloch, slice, triangle_outline,
};
use qutrit_orbit::molien::{closed_form_degrees, expand_closed_form, quadrature_coefficients, Group, Space, TorusRep};
use qutrit_orbit::sampling::{random_density, random_unitary, uniform_bloch, Ensemble, SamplerConfig, UnitaryGroup};
use qutrit_orbit::su3::{
    bloch_of, bloch_to_density, density_to_bloch, eigenvalues, gell_mann_basis, structure_constants, DensityMatrix,
    StructureConstants,
};
use qutrit_orbit::LocalInvariantPoint;

use crate::report::{CheckResult, RunReport};

/// Perturbation of one `d` entry (one-based indices), for fault injection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DFault {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub delta: f64,
}

impl Default for DFault {
    fn default() -> Self {
        DFault { a: 1, b: 1, c: 8, delta: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub ensemble: Ensemble,
    pub fault: Option<DFault>,
    pub slice_n: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 100_000,
            seed: 1,
            tol: 1e-10,
            ensemble: Ensemble::HilbertSchmidt,
            fault: None,
            slice_n: 100,
        }
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// `max_i f(i)` over `0..n`.
pub fn par_max(n: usize, f: impl Fn(u64) -> f64 + Send + Sync) -> f64 {
    (0..n as u64).into_par_iter().map(f).reduce(|| 0.0, nan_max)
}

/// Number of `i` in `0..n` with `f(i)`.
pub fn par_count(n: usize, f: impl Fn(u64) -> bool + Send + Sync) -> usize {
    (0..n as u64).into_par_iter().filter(|&i| f(i)).count()
}

/// NaN-safe `max(err, 0)` so NaNs fail the check.
fn nonneg(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

pub fn algebra_checks(constants: &StructureConstants) -> Vec<CheckResult> {
    let basis = gell_mann_basis();
    let mut ortho: f64 = 0.0;
    for a in 0..8 {
        for b in 0..8 {
            let t = (basis[a] * basis[b]).trace();
            let expect = if a == b { 2.0 } else { 0.0 };
            ortho = ortho.max((t.re - expect).abs()).max(t.im.abs());
        }
    }
    let named = (constants.f(1, 2, 3) - 1.0).abs().max((constants.d(8, 8, 8) + 1.0 / SQRT_3).abs());
    vec![
        CheckResult::new("orthogonality", ortho, 1e-14, 64),
        CheckResult::new("product_identity", nonneg(constants.product_identity_error(&basis)), 1e-12, 64),
        CheckResult::new("structure_symmetry", nonneg(constants.symmetry_error()), 1e-14, 512),
        CheckResult::new("named_constants", named, 1e-14, 2).with_detail("f123 = 1, d888 = -1/sqrt(3)"),
    ]
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    nonneg((a - b).abs() / scale.max(1.0))
}

pub fn run_checks(opts: &VerifyOptions) -> Vec<CheckResult> {
    let n = opts.samples;
    let seed = opts.seed;
    let tol = opts.tol;
    let states = SamplerConfig { seed, count: n, ensemble: opts.ensemble };
    let hs = SamplerConfig { seed, count: n, ensemble: Ensemble::HilbertSchmidt };
    let state = |i: u64| random_density(&states, i);

    let constants = match opts.fault {
        Some(f) => structure_constants().with_perturbed_d(f.a, f.b, f.c, f.delta),
        None => structure_constants().clone(),
    };
    let mut checks = algebra_checks(&constants);

    checks.push(CheckResult::new(
        "bloch_round_trip",
        par_max(n, |i| {
            let rho = random_density(&hs, i);
            let back = density_to_bloch(rho.matrix(), 1e-12).map(|xi| bloch_to_density(&xi));
            back.map_or(f64::INFINITY, |b| (*b.matrix() - *rho.matrix()).max_abs())
        }),
        1e-12,
        n,
    ));

    checks.push(CheckResult::new(
        "trace_identities",
        par_max(n, |i| {
            let xi = uniform_bloch(seed, i);
            let rho = bloch_to_density(&xi);
            let t = trace_coordinates(&rho);
            let c = casimirs(&xi);
            let e2 = rel(t.t2, 1.0 / 3.0 + 2.0 / 3.0 * c.c2, t.t2.abs());
            let e3 = rel(t.t3, 1.0 / 9.0 + 2.0 / 3.0 * c.c2 + 2.0 / 9.0 * c.c3, t.t3.abs());
            e2.max(e3)
        }),
        1e-12,
        n,
    ));

    checks.push(CheckResult::new(
        "det_identity",
        par_max(n, |i| {
            let rho = state(i);
            let c = casimirs(&bloch_of(&rho));
            nonneg((3.0 * c.c2 - 2.0 * c.c3 - (1.0 - 27.0 * rho.matrix().det().re)).abs())
        }),
        1e-12,
        n,
    ));

    checks.push(CheckResult::new(
        "c2_relation",
        par_max(n, |i| {
            let xi = uniform_bloch(seed, i);
            rel(casimir_relation_check(&xi).c2, 0.0, xi.norm_sqr())
        }),
        tol,
        n,
    ));
    checks.push(CheckResult::new(
        "c3_fitted_relation",
        par_max(n, |i| {
            let xi = uniform_bloch(seed, i);
            rel(casimir_relation_check(&xi).c3_fitted, 0.0, casimirs(&xi).c3.abs())
        }),
        tol,
        n,
    ));
    let exact_terms = fitted_c3_relation().residual_polynomial().terms().count();
    checks
        .push(CheckResult::count("c3_fitted_exact", exact_terms, 1).with_detail("nonzero terms of the exact residual"));

    checks.push(CheckResult::new(
        "grad_global_det",
        par_max(n, |i| {
            let xi = uniform_bloch(seed, i);
            let g = numeric_grad(&GLOBAL_BASIS, &xi);
            let c = casimirs(&xi);
            let closed = grad_su3_closed(c.c2, c.c3);
            rel(g.det(), 36.0 * c.discriminant(), g.det_scale()).max(rel(closed.det(), g.det(), g.det_scale()))
        }),
        tol,
        n,
    ));
    checks.push(CheckResult::new(
        "grad_global_entries",
        par_max(n, |i| {
            let xi = uniform_bloch(seed, i);
            let g = numeric_grad(&GLOBAL_BASIS, &xi);
            let c = casimirs(&xi);
            let closed = grad_su3_closed(c.c2, c.c3);
            let s = g.max_abs();
            let mut worst: f64 = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    worst = nan_max(worst, rel(g.get(a, b), closed.get(a, b), s));
                }
            }
            worst
        }),
        tol,
        n,
    ));
    checks.push(CheckResult::new(
        "grad_local_entries",
        par_max(n, |i| {
            let xi = uniform_bloch(seed, i);
            let g = numeric_grad(&LOCAL_BASIS, &xi);
            let closed = grad_local_closed(&local_point(&xi));
            let s = g.max_abs();
            let mut worst: f64 = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    worst = nan_max(worst, rel(g.get(a, b), closed.get(a, b), s));
                }
            }
            worst
        }),
        tol,
        n,
    ));
    checks.push(CheckResult::new(
        "grad_local_det",
        par_max(n, |i| {
            let xi = uniform_bloch(seed, i);
            let g = numeric_grad(&LOCAL_BASIS, &xi);
            let d = det_grad_local(&local_point(&xi));
            rel(d.value, g.det(), d.scale).max(rel(d.constant * d.linear_factor * d.quadratic_factor, g.det(), d.scale))
        }),
        1e-8,
        n,
    ));
    let roots = n / 10 + 1;
    checks.push(CheckResult::new(
        "sigma_roots",
        par_max(roots, |i| {
            let xi = uniform_bloch(seed ^ 0x5157, i);
            let (f1, f2, c2) = (xi.0[0] * 0.9, (xi.0[1] + 1.0) * 0.3, (xi.0[2] + 1.0) * 0.5);
            let Some((lo, hi)) = sigma_surfaces(f1, f2, c2) else { return f64::INFINITY };
            [lo, hi]
                .iter()
                .map(|&c3| {
                    let d = det_grad_local(&LocalInvariantPoint::new(f1, f2, c2, c3));
                    nonneg(d.value.abs() / d.scale)
                })
                .fold(0.0, nan_max)
        }),
        1e-9,
        roots,
    ));

    checks.push(CheckResult::count(
        "physical_equivalence",
        par_count(n, |i| {
            // 0.6·box mixes physical and unphysical states
            let xi = uniform_bloch(seed ^ 0xe9, i).scaled(0.6);
            let rho = bloch_to_density(&xi);
            let by_eig = eigenvalues(&rho)[2] >= -1e-9;
            is_physical_bloch(&xi, 1e-9).inside != by_eig
        }),
        n,
    ));

    for (name, which) in [("inclusion_bloch", 0), ("inclusion_global", 1), ("inclusion_local", 2)] {
        checks.push(CheckResult::count(
            name,
            par_count(n, |i| {
                let xi = bloch_of(&state(i));
                !match which {
                    0 => is_physical_bloch(&xi, tol).inside,
                    1 => {
                        let c = casimirs(&xi);
                        in_global_orbit_space(c.c2, c.c3, tol).inside
                    }
                    _ => in_local_orbit_space(&local_point(&xi), tol).inside,
                }
            }),
            n,
        ));
    }

    let base_states = n.clamp(1, 100);
    let per_state = (n / base_states).clamp(1, 1000);
    let conj = base_states * per_state;
    let drift = |group: UnitaryGroup| {
        par_max(conj, move |k| {
            let rho = random_density(&hs, k / per_state as u64);
            let g = random_unitary(group, seed, k);
            let moved = DensityMatrix::new_unchecked(rho.matrix().conjugate_by(&g));
            let (a, b) = (bloch_of(&rho), bloch_of(&moved));
            match group {
                UnitaryGroup::LocalU2 => {
                    let (x, y) = (local_invariants(&a), local_invariants(&b));
                    [x.f1 - y.f1, x.f2 - y.f2, x.f3 - y.f3, x.f4 - y.f4]
                        .iter()
                        .map(|d| nonneg(d.abs()))
                        .fold(0.0, nan_max)
                }
                UnitaryGroup::U3 => {
                    let (x, y) = (casimirs(&a), casimirs(&b));
                    nonneg((x.c2 - y.c2).abs()).max(nonneg((x.c3 - y.c3).abs()))
                }
            }
        })
    };
    checks.push(CheckResult::new("local_invariance", drift(UnitaryGroup::LocalU2), tol, conj));
    checks.push(CheckResult::new("global_invariance", drift(UnitaryGroup::U3), tol, conj));

    checks.push(molien_check());

    let mesh = slice(0.0, opts.slice_n).expect("grid size at least 2");
    let h = hausdorff_distance(&mesh.projection, &triangle_outline(1000), 1e-3);
    checks.push(CheckResult::new("slice_triangle", nonneg(h), 2.0 / opts.slice_n as f64, mesh.cells.len()));

    checks
}

/// Series, quadrature and kernel counts on the 8-variable space.
pub fn molien_check() -> CheckResult {
    let mut disagreements = 0;
    let mut residual: f64 = 0.0;
    for (group, k) in [(Group::Su2U1, 4), (Group::Su3, 6)] {
        let series: Vec<u64> = expand_closed_form(&closed_form_degrees(group, Space::Bloch8), k);
        let quad = quadrature_coefficients(&TorusRep::new(group, Space::Bloch8), group, k);
        let kernel: Vec<u64> = (0..=k)
            .map(|d| match group {
                Group::Su2U1 => invariant_dimension(d),
                Group::Su3 => su3_invariant_dimension(d),
            })
            .map(|r| r.map_or(u64::MAX, |v| v as u64))
            .collect();
        match quad {
            Ok(q) => {
                residual = residual.max(q.residual);
                disagreements += usize::from(q.counts != series);
            }
            Err(_) => disagreements += 1,
        }
        disagreements += usize::from(kernel != series);
    }
    let detail = format!("max quadrature residual {residual:e}");
    let mut c = CheckResult::count("molien_agreement", disagreements + usize::from(residual > 1e-8), 2);
    c.detail = Some(detail);
    c
}

/// Nine-variable counts from the 8-variable kernel.
pub fn kernel_counts(group: Group, space: Space, k: usize) -> qutrit_orbit::Result<Vec<u64>> {
    let counts8: Vec<usize> = (0..=k)
        .map(|d| match group {
            Group::Su2U1 => invariant_dimension(d),
            Group::Su3 => su3_invariant_dimension(d),
        })
        .collect::<qutrit_orbit::Result<_>>()?;
    Ok((0..=k)
        .map(|d| match space {
            Space::Bloch8 => counts8[d] as u64,
            Space::Matrix9 => matrix9_dimension(&counts8, d) as u64,
        })
        .collect())
}

pub fn run_verify(opts: &VerifyOptions, command: Vec<String>) -> RunReport {
    let start = Instant::now();
    let checks = run_checks(opts);
    RunReport::new(command, opts.seed, opts.samples, checks, start.elapsed().as_secs_f64())
}
