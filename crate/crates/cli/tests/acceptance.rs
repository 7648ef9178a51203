//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Expected values come from oracles written here: five-point stencil
//! gradients of the invariants (exact for cubics), the analytic triangle,
//! quaternion-built local group elements, and exact spectra.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qutrit_orbit::exact::{QSqrt3, SQRT_3};
use qutrit_orbit::grad::{delta1_c3, delta2_c3, det_grad_local, grad_local_closed, sigma_surfaces};
use qutrit_orbit::invariants::{casimirs, fitted_c3_relation, local_invariants, local_point};
use qutrit_orbit::linalg::Mat3;
use qutrit_orbit::membership::{in_global_orbit_space, in_local_orbit_space, is_physical_bloch, slice};
use qutrit_orbit::molien::{Group, Space};
use qutrit_orbit::sampling::{random_density, random_unitary, Ensemble, SamplerConfig, UnitaryGroup};
use qutrit_orbit::su3::{bloch_of, eigenvalues, gell_mann_basis, structure_constants, BlochVector, DensityMatrix};
use qutrit_orbit::LocalInvariantPoint;
use qutrit_orbit_cli::gradcheck::run_gradcheck;
use qutrit_orbit_cli::molien_cmd::{run_molien, Method};

const SEED: u64 = 20_240_611;
const SAMPLES: usize = 100_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uniform_box(rng: &mut StdRng) -> BlochVector {
    BlochVector(std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
}

/// `(f1, f2, c2, c3)` straight from the defining sums.
fn invariants_direct(x: &[f64; 8]) -> [f64; 4] {
    let xi = BlochVector(*x);
    let c = casimirs(&xi);
    let f2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    [x[7], f2, x.iter().map(|v| v * v).sum(), c.c3]
}

/// Five-point central stencil with step 1/2; exact for polynomials of degree ≤ 4.
fn stencil_gradients(xi: &BlochVector) -> [[f64; 8]; 4] {
    let h = 0.5;
    let mut g = [[0.0; 8]; 4];
    for v in 0..8 {
        let at = |t: f64| {
            let mut y = xi.0;
            y[v] += t;
            invariants_direct(&y)
        };
        let (m2, m1, p1, p2) = (at(-2.0 * h), at(-h), at(h), at(2.0 * h));
        for k in 0..4 {
            g[k][v] = (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h);
        }
    }
    g
}

fn dot(a: &[f64; 8], b: &[f64; 8]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn criterion1() -> Outcome {
    let l = gell_mann_basis();
    let consts = structure_constants();
    let mut ortho: f64 = 0.0;
    let mut product: f64 = 0.0;
    for a in 0..8 {
        for b in 0..8 {
            let t = (l[a] * l[b]).trace();
            ortho = ortho.max((t.re - if a == b { 2.0 } else { 0.0 }).abs()).max(t.im.abs());
            // λaλb = (2/3)δab I + Σc (d_abc + i f_abc) λc
            let mut rhs = Mat3::IDENTITY.scale_re(if a == b { 2.0 / 3.0 } else { 0.0 });
            for c in 0..8 {
                let coeff = Mat3::from_parts(
                    [[consts.d(a + 1, b + 1, c + 1), 0.0, 0.0], [0.0; 3], [0.0; 3]],
                    [[consts.f(a + 1, b + 1, c + 1), 0.0, 0.0], [0.0; 3], [0.0; 3]],
                )[(0, 0)];
                rhs = rhs + l[c].scale(coeff);
            }
            product = product.max((l[a] * l[b] - rhs).max_abs());
        }
    }
    // quarter-trace formulas evaluated on the matrices
    let f123 = {
        let t = ((l[0] * l[1] - l[1] * l[0]) * l[2]).trace();
        t.im / 4.0
    };
    let d888 = ((l[7] * l[7] + l[7] * l[7]) * l[7]).trace().re / 4.0;
    ensure(ortho <= 1e-12, || format!("orthogonality {ortho:e}"))?;
    ensure(product <= 1e-12, || format!("product identity {product:e}"))?;
    ensure((f123 - 1.0).abs() <= 1e-12 && (consts.f(1, 2, 3) - 1.0).abs() <= 1e-12, || format!("f123 = {f123}"))?;
    ensure((d888 + 1.0 / SQRT_3).abs() <= 1e-12 && (consts.d(8, 8, 8) - d888).abs() <= 1e-12, || {
        format!("d888 = {d888}")
    })?;
    Ok(format!("orthogonality {ortho:.1e}, product identity {product:.1e}, f123 = {f123}, d888 = {d888:.15}"))
}

fn criterion2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let (mut det_err, mut g22_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..SAMPLES {
        let xi = uniform_box(&mut rng);
        let g = stencil_gradients(&xi);
        let (b11, b12, b22) = (dot(&g[2], &g[2]), dot(&g[2], &g[3]), dot(&g[3], &g[3]));
        let det = b11 * b22 - b12 * b12;
        let c = casimirs(&xi);
        let expect = 36.0 * (c.c2.powi(3) - c.c3 * c.c3);
        let scale = b11.abs().max(b22.abs()).max(b12.abs()).max(1.0).powi(2);
        det_err = det_err.max((det - expect).abs() / scale);
        g22_err = g22_err.max((b22 - 9.0 * c.c2 * c.c2).abs() / b22.abs().max(1.0));
    }
    ensure(det_err <= 1e-10 && g22_err <= 1e-10, || format!("det {det_err:e}, Grad22 {g22_err:e}"))?;
    Ok(format!("det rel err {det_err:.1e}, Grad22 rel err {g22_err:.1e} over {SAMPLES} points"))
}

fn criterion3() -> Outcome {
    let cases = [
        ("maximally mixed", [1.0 / 3.0; 3], (0.0, 0.0)),
        ("pure", [1.0, 0.0, 0.0], (1.0, 1.0)),
        ("half-half", [0.5, 0.5, 0.0], (0.25, -0.125)),
    ];
    let mut worst: f64 = 0.0;
    for (name, spectrum, (c2, c3)) in cases {
        for k in 0..20 {
            let u = random_unitary(UnitaryGroup::U3, SEED, k);
            let rho = DensityMatrix::diagonal(spectrum).map_err(|e| e.to_string())?.conjugated(&u);
            let c = casimirs(&bloch_of(&rho));
            let err = (c.c2 - c2).abs().max((c.c3 - c3).abs());
            worst = worst.max(err);
            ensure(err <= 1e-12, || format!("{name}: ({}, {}) vs ({c2}, {c3})", c.c2, c.c3))?;
            let v = in_global_orbit_space(c.c2, c.c3, 1e-10);
            ensure(v.inside && v.on_boundary(), || format!("{name}: verdict {v:?}"))?;
        }
    }
    Ok(format!("A, C, B reproduced to {worst:.1e}, all boundary-binding"))
}

fn criterion4() -> Outcome {
    let config = SamplerConfig { seed: SEED, count: SAMPLES, ensemble: Ensemble::HilbertSchmidt };
    let mut failures = [0usize; 4];
    let mut min_eig = f64::INFINITY;
    for i in 0..SAMPLES as u64 {
        let rho = random_density(&config, i);
        let xi = bloch_of(&rho);
        if eigenvalues(&rho)[2] < -1e-12 {
            failures[0] += 1;
        }
        if !is_physical_bloch(&xi, 1e-10).inside {
            failures[1] += 1;
        }
        let c = casimirs(&xi);
        if !in_global_orbit_space(c.c2, c.c3, 1e-10).inside {
            failures[2] += 1;
        }
        let p = local_point(&xi);
        let l = local_invariants(&xi);
        let eig = grad_local_closed(&p).min_eigenvalue();
        min_eig = min_eig.min(eig);
        if eig < -1e-10 || l.f2 < 0.0 || l.f3 < 0.0 || !in_local_orbit_space(&p, 1e-10).inside {
            failures[3] += 1;
        }
    }
    ensure(failures == [0; 4], || format!("failures [spectrum, pos, global, local] = {failures:?}"))?;
    Ok(format!("{SAMPLES} states, zero failures, min Grad eigenvalue {min_eig:.2e}"))
}

/// Block-diagonal `diag(e^{iφ} U, e^{−2iφ})` with `U ∈ SU(2)` from a uniform unit quaternion.
fn local_group_element(rng: &mut StdRng) -> Mat3 {
    let q = loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = q.iter().map(|v| v * v).sum::<f64>();
        if n > 1e-6 && n <= 1.0 {
            break q.map(|v| v / n.sqrt());
        }
    };
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let (c, s) = (phi.cos(), phi.sin());
    // e^{iφ}(x + iy) = (cx − sy) + i(sx + cy)
    let rot = |x: f64, y: f64| (c * x - s * y, s * x + c * y);
    let a = rot(q[0], q[1]);
    let b = rot(q[2], q[3]);
    let na = rot(-q[2], q[3]);
    let abar = rot(q[0], -q[1]);
    let (c2, s2) = ((2.0 * phi).cos(), -(2.0 * phi).sin());
    Mat3::from_parts(
        [[a.0, na.0, 0.0], [b.0, abar.0, 0.0], [0.0, 0.0, c2]],
        [[a.1, na.1, 0.0], [b.1, abar.1, 0.0], [0.0, 0.0, s2]],
    )
}

fn criterion5() -> Outcome {
    let config = SamplerConfig { seed: SEED, count: 100, ensemble: Ensemble::HilbertSchmidt };
    let mut rng = StdRng::seed_from_u64(SEED ^ 5);
    let (mut local_drift, mut global_drift): (f64, f64) = (0.0, 0.0);
    for i in 0..100 {
        let rho = random_density(&config, i);
        let base = local_invariants(&bloch_of(&rho));
        let c = casimirs(&bloch_of(&rho));
        let m2 = *rho.matrix() * *rho.matrix();
        let (t2, t3) = (m2.trace().re, (m2 * *rho.matrix()).trace().re);
        for k in 0..1000u64 {
            let g = local_group_element(&mut rng);
            let l = local_invariants(&bloch_of(&rho.conjugated(&g)));
            for (x, y) in [(base.f1, l.f1), (base.f2, l.f2), (base.f3, l.f3), (base.f4, l.f4)] {
                local_drift = local_drift.max((x - y).abs());
            }
            let u = random_unitary(UnitaryGroup::U3, SEED, i * 1000 + k);
            let moved = rho.conjugated(&u);
            let c_moved = casimirs(&bloch_of(&moved));
            let n2 = *moved.matrix() * *moved.matrix();
            let (s2, s3) = (n2.trace().re, (n2 * *moved.matrix()).trace().re);
            global_drift = global_drift
                .max((c.c2 - c_moved.c2).abs())
                .max((c.c3 - c_moved.c3).abs())
                .max((t2 - s2).abs())
                .max((t3 - s3).abs());
        }
    }
    ensure(local_drift <= 1e-10 && global_drift <= 1e-10, || {
        format!("local {local_drift:e}, global {global_drift:e}")
    })?;
    Ok(format!("f1..f4 drift {local_drift:.1e}, c2/c3 drift {global_drift:.1e} over 100x1000 conjugations"))
}

fn criterion6() -> Outcome {
    let cases: [(Group, usize, &[u64]); 2] =
        [(Group::Su2U1, 4, &[1, 1, 3, 4, 7]), (Group::Su3, 6, &[1, 0, 1, 1, 1, 1, 2])];
    let mut residual: f64 = 0.0;
    for (group, k, expect) in cases {
        let r = run_molien(group, Space::Bloch8, k, Method::All).map_err(|e| e.to_string())?;
        ensure(r.rows.len() == 3, || format!("{group:?}: only {} methods ran", r.rows.len()))?;
        for row in &r.rows {
            ensure(row.counts == expect, || format!("{group:?} {}: {:?} vs {expect:?}", row.method, row.counts))?;
            residual = residual.max(row.residual.unwrap_or(0.0));
        }
    }
    ensure(residual <= 1e-8, || format!("quadrature residual {residual:e}"))?;
    let m9 = run_molien(Group::Su2U1, Space::Matrix9, 4, Method::All).map_err(|e| e.to_string())?;
    let q = m9.quoted.ok_or("missing closed-form comparison")?;
    ensure(q.matches_bloch8 && m9.agree, || "quoted series does not match the 8-variable counts".into())?;
    let counts9: Vec<String> = m9.rows[0].counts.iter().map(|c| c.to_string()).collect();
    Ok(format!(
        "counts agree, residual {residual:.1e}; (1,2,2,3) series matches 8 variables, not 9 \
         (9-variable counts {}; {} linear invariants)",
        counts9.join(","),
        q.matrix9_degree1
    ))
}

fn criterion7() -> Outcome {
    let r = run_gradcheck(SAMPLES, SEED, 1e-10);
    // independent check of the certified closed form against stencil gradients
    let mut rng = StdRng::seed_from_u64(SEED ^ 7);
    let mut oracle: f64 = 0.0;
    for _ in 0..SAMPLES {
        let xi = uniform_box(&mut rng);
        let g = stencil_gradients(&xi);
        let closed = grad_local_closed(&local_point(&xi));
        let scale = closed.max_abs().max(1.0);
        for a in 0..4 {
            for b in 0..4 {
                oracle = oracle.max((dot(&g[a], &g[b]) - closed.get(a, b)).abs() / scale);
            }
        }
    }
    let worst_entry = r.entries.iter().map(|e| e.max_deviation).fold(0.0, f64::max);
    let differing: Vec<String> =
        r.entries.iter().filter(|e| !e.quoted_matches).map(|e| format!("B{}{}", e.i, e.j)).collect();
    ensure(r.passed && worst_entry <= 1e-10, || format!("gradcheck worst entry {worst_entry:e}"))?;
    ensure(oracle <= 1e-10, || format!("stencil oracle deviation {oracle:e}"))?;
    ensure(r.c3_relation.fitted_exact, || "fitted c3 relation leaves a nonzero residual".into())?;
    ensure(fitted_c3_relation().f1_cubed == QSqrt3::int(-1), || {
        format!("f1^3 coefficient {}", fitted_c3_relation().f1_cubed)
    })?;
    Ok(format!(
        "{} entries certified (worst {worst_entry:.1e}, stencil {oracle:.1e}); quoted entries differing: [{}]; \
         c3 relation exact, f1^3 coefficient -1",
        r.entries.len(),
        differing.join(", ")
    ))
}

fn triangle_contains(c2: f64, c3: f64, tol: f64) -> bool {
    let r = c2.max(0.0).powf(1.5);
    (-tol..=1.0 + tol).contains(&c2) && c3 <= r + tol && c3 >= -r - tol && c3 >= (3.0 * c2 - 1.0) / 2.0 - tol
}

fn triangle_boundary_points(m: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for k in 0..=m {
        let t = k as f64 / m as f64;
        pts.push((t, t.powf(1.5)));
        let lo = 0.25 * t;
        pts.push((lo, -lo.powf(1.5)));
        let line = 0.25 + 0.75 * t;
        pts.push((line, (3.0 * line - 1.0) / 2.0));
    }
    pts
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    (a.0 + t * dx - p.0).hypot(a.1 + t * dy - p.1)
}

fn polyline_distance(p: (f64, f64), poly: &[(f64, f64)]) -> f64 {
    (0..poly.len()).map(|k| segment_distance(p, poly[k], poly[(k + 1) % poly.len()])).fold(f64::INFINITY, f64::min)
}

const TRIANGLE_AREA: f64 = 27.0 / 320.0;

fn shoelace(poly: &[(f64, f64)]) -> f64 {
    let s: f64 = (0..poly.len())
        .map(|k| {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    s.abs() / 2.0
}

fn criterion8() -> Outcome {
    let mut notes = Vec::new();
    let tri = triangle_boundary_points(4000);
    let tri_poly: Vec<(f64, f64)> = {
        let mut v: Vec<(f64, f64)> =
            (0..=2000).map(|k| k as f64 / 2000.0).map(|c| (0.25 * c, -(0.25 * c).powf(1.5))).collect();
        v.extend((1..=2000).map(|k| 0.25 + 0.75 * k as f64 / 2000.0).map(|c| (c, (3.0 * c - 1.0) / 2.0)));
        v.extend((1..2000).map(|k| 1.0 - k as f64 / 2000.0).map(|c| (c, c.powf(1.5))));
        v
    };
    for n in [100usize, 200] {
        let mesh = slice(0.0, n).map_err(|e| e.to_string())?;
        let proj = &mesh.projection;
        ensure(!proj.is_empty(), || format!("empty slice at n = {n}"))?;
        let d1 = proj.iter().map(|&p| polyline_distance(p, &tri_poly)).fold(0.0, f64::max);
        let d2 = tri.iter().map(|&p| polyline_distance(p, proj)).fold(0.0, f64::max);
        let h = d1.max(d2);
        ensure(h <= 2.0 / n as f64, || format!("Hausdorff {h:e} > 2/{n}"))?;
        notes.push(format!("H(n={n}) = {h:.2e}"));
    }
    for f1 in [0.4, -0.4, -0.9] {
        let mesh = slice(f1, 200).map_err(|e| e.to_string())?;
        let proj = &mesh.projection;
        ensure(!proj.is_empty(), || format!("empty slice at f1 = {f1}"))?;
        let outside = proj.iter().filter(|&&(a, b)| !triangle_contains(a, b, 1e-12)).count();
        let area = shoelace(proj);
        ensure(outside == 0, || format!("f1 = {f1}: {outside} projection vertices outside the triangle"))?;
        ensure(area < TRIANGLE_AREA - 1e-3, || format!("f1 = {f1}: area {area} not below {TRIANGLE_AREA}"))?;
        notes.push(format!("area(f1={f1}) = {area:.4}"));
    }

    let mut rng = StdRng::seed_from_u64(SEED ^ 8);
    let mut sigma_res: f64 = 0.0;
    for _ in 0..10_000 {
        let (f1, f2, c2) = (rng.random_range(-1.0..1.0), rng.random_range(0.0..0.6), rng.random_range(0.0..1.0));
        let (lo, hi) = sigma_surfaces(f1, f2, c2).ok_or("no sigma roots")?;
        for c3 in [lo, hi] {
            let g = grad_local_closed(&LocalInvariantPoint::new(f1, f2, c2, c3));
            sigma_res = sigma_res.max(g.det().abs() / g.det_scale());
        }
    }
    ensure(sigma_res <= 1e-9, || format!("sigma back-substitution {sigma_res:e}"))?;
    notes.push(format!("sigma residual {sigma_res:.1e}"));

    // Δ1 (ξ1..3 = 0) and Δ2 (ξ4..7 = 0): states on these loci land on the
    // predicted c3, which is a double root of det Grad in c3.
    let mut delta: f64 = 0.0;
    for k in 0..2000 {
        let mut x = uniform_box(&mut rng).scaled(0.7).0;
        let which = k % 2;
        if which == 0 {
            x[0] = 0.0;
            x[1] = 0.0;
            x[2] = 0.0;
        } else {
            x[3..7].fill(0.0);
        }
        let xi = BlochVector(x);
        let p = local_point(&xi);
        let predicted = if which == 0 { delta1_c3(p.f1, p.c2) } else { delta2_c3(p.f1, p.c2) };
        let on_locus = (p.c3 - predicted).abs();
        let det = |c3: f64| det_grad_local(&LocalInvariantPoint::new(p.f1, p.f2, p.c2, c3));
        let (m, z, q) = (det(predicted - 1.0), det(predicted), det(predicted + 1.0));
        let scale = z.scale;
        // det is quadratic in c3, so the unit-step central difference is its derivative
        let slope = ((q.value - m.value) / 2.0).abs() / scale;
        delta = delta.max(on_locus).max(z.value.abs() / scale).max(slope);
    }
    ensure(delta <= 1e-10, || format!("Delta loci residual {delta:e}"))?;
    notes.push(format!("Delta double roots {delta:.1e}"));
    Ok(notes.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("algebra self-test", criterion1),
        ("SU(3) Grad determinant", criterion2),
        ("triangle vertices", criterion3),
        ("Monte-Carlo inclusion", criterion4),
        ("invariance", criterion5),
        ("Molien agreement", criterion6),
        ("formula validation", criterion7),
        ("geometry regression", criterion8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}) [{secs:.2}s]: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}) [{secs:.2}s]: {detail}", k + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
