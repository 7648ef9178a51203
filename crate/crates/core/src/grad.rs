//! Procesi–Schwarz gradient matrices.
//!
//! `Grad_ij = ⟨∇p_i, ∇p_j⟩` for an integrity basis `p`. The numeric Gram
//! matrix from analytic gradients ([`numeric_grad`]) is the ground truth;
//! closed forms in the invariants are checked against it.
//!
//! For the local basis `{f1, f2, c2, c3}` every entry is refitted exactly
//! ([`fit_grad_entry`]) and compared with the commonly quoted block form
//!
//! ```text
//! A = diag(1, 4 f2)     D = [[4 c2, 6 c3], [6 c3, 9 c2²]]
//! B = [[2 f1, (3/2)(3 f2 − f1² − c2)], [4 f2, 3 f1 (f2 + c2) + 2 c3]]
//! ```
//!
//! The quoted `B₂₄` lacks a `−f1³` term; every other quoted entry, the
//! quoted determinant factorization and the Σ± surfaces survive the check.
//! [`LocalGradModel`] holds the validated entries.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::{solve_unique, Field, QSqrt3, SQRT_3};
use crate::invariants::{c2_polynomial, c3_polynomial, f1_polynomial, f2_polynomial, ExactPoly, LocalInvariantPoint};
use crate::linalg::symmetric_eigenvalues;
use crate::poly::{monomials_of_degree, NVARS};
use crate::su3::{d_sparse, BlochVector};

/// Element of an integrity basis with a hand-written analytic gradient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisPolynomial {
    F1,
    F2,
    C2,
    C3,
}

pub const GLOBAL_BASIS: [BasisPolynomial; 2] = [BasisPolynomial::C2, BasisPolynomial::C3];
pub const LOCAL_BASIS: [BasisPolynomial; 4] =
    [BasisPolynomial::F1, BasisPolynomial::F2, BasisPolynomial::C2, BasisPolynomial::C3];

impl BasisPolynomial {
    pub fn degree(self) -> usize {
        match self {
            BasisPolynomial::F1 => 1,
            BasisPolynomial::F2 | BasisPolynomial::C2 => 2,
            BasisPolynomial::C3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisPolynomial::F1 => "f1",
            BasisPolynomial::F2 => "f2",
            BasisPolynomial::C2 => "c2",
            BasisPolynomial::C3 => "c3",
        }
    }

    pub fn gradient(self, xi: &BlochVector) -> [f64; NVARS] {
        let x = &xi.0;
        let mut g = [0.0; NVARS];
        match self {
            BasisPolynomial::F1 => g[7] = 1.0,
            BasisPolynomial::F2 => {
                for i in 0..3 {
                    g[i] = 2.0 * x[i];
                }
            }
            BasisPolynomial::C2 => {
                for i in 0..NVARS {
                    g[i] = 2.0 * x[i];
                }
            }
            BasisPolynomial::C3 => {
                // ∂/∂ξa (√3 d_abc ξa ξb ξc) = 3√3 d_abc ξb ξc
                for &(a, b, c, v) in d_sparse() {
                    g[a] += 3.0 * SQRT_3 * v * x[b] * x[c];
                }
            }
        }
        g
    }

    pub fn exact(self) -> ExactPoly {
        match self {
            BasisPolynomial::F1 => f1_polynomial(),
            BasisPolynomial::F2 => f2_polynomial(),
            BasisPolynomial::C2 => c2_polynomial(),
            BasisPolynomial::C3 => c3_polynomial(),
        }
    }
}

/// Symmetric q×q matrix, q ∈ {2, 4}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradMatrix {
    dim: usize,
    m: [[f64; 4]; 4],
}

impl GradMatrix {
    pub fn from_rows<const Q: usize>(rows: [[f64; Q]; Q]) -> Self {
        assert!(Q <= 4);
        let mut m = [[0.0; 4]; 4];
        for i in 0..Q {
            m[i][..Q].copy_from_slice(&rows[i]);
        }
        GradMatrix { dim: Q, m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based entry.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim);
        self.m[i][j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.m[i][..self.dim].to_vec()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i][i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |a, &x| a.max(x.abs()))
    }

    pub fn det(&self) -> f64 {
        match self.dim {
            2 => self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0],
            4 => det4(&self.m),
            _ => unreachable!("grad matrices are 2×2 or 4×4"),
        }
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.dim {
            2 => symmetric_eigenvalues(&[[self.m[0][0], self.m[0][1]], [self.m[1][0], self.m[1][1]]]).to_vec(),
            4 => symmetric_eigenvalues(&self.m).to_vec(),
            _ => unreachable!("grad matrices are 2×2 or 4×4"),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Scale for relative determinant comparisons: `max(1, max|entry|)^q`.
    pub fn det_scale(&self) -> f64 {
        let s = self.max_abs().max(1.0);
        (0..self.dim).fold(1.0, |acc, _| acc * s)
    }

    /// Largest deviation from symmetry.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.m[i][j] - self.m[j][i]).abs());
            }
        }
        worst
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    (0..4)
        .map(|col| {
            let minor: [[f64; 3]; 3] = core::array::from_fn(|r| {
                let cols: Vec<usize> = (0..4).filter(|&c| c != col).collect();
                core::array::from_fn(|c| m[r + 1][cols[c]])
            });
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][col] * det3(minor)
        })
        .sum()
}

/// Gram matrix of the analytic gradients of `basis` at `xi`.
pub fn numeric_grad(basis: &[BasisPolynomial], xi: &BlochVector) -> GradMatrix {
    assert!(basis.len() == 2 || basis.len() == 4, "basis must have 2 or 4 elements");
    let grads: Vec<[f64; NVARS]> = basis.iter().map(|p| p.gradient(xi)).collect();
    let mut m = [[0.0; 4]; 4];
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let v: f64 = grads[i].iter().zip(&grads[j]).map(|(a, b)| a * b).sum();
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    GradMatrix { dim: basis.len(), m }
}

/// `[[4 c2, 6 c3], [6 c3, 9 c2²]]`.
pub fn grad_su3_closed(c2: f64, c3: f64) -> GradMatrix {
    GradMatrix::from_rows([[4.0 * c2, 6.0 * c3], [6.0 * c3, 9.0 * c2 * c2]])
}

/// Exponents of `(f1, f2, c2, c3)`.
pub type InvariantExponents = [u8; 4];

const INVARIANT_NAMES: [&str; 4] = ["f1", "f2", "c2", "c3"];

/// Polynomial in the local integrity basis `(f1, f2, c2, c3)` with
/// coefficients in Q(√3).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct InvariantPoly {
    terms: BTreeMap<InvariantExponents, QSqrt3>,
}

impl InvariantPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: QSqrt3) -> Self {
        Self::term([0, 0, 0, 0], c)
    }

    pub fn term(e: InvariantExponents, c: QSqrt3) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// One of the basis variables, index 0..4 for f1, f2, c2, c3.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::term(e, QSqrt3::one())
    }

    /// Sum of `(num/den)·monomial` terms.
    pub fn from_rational_terms(terms: &[(InvariantExponents, i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, n, d) in terms {
            p.add_term(e, QSqrt3::frac(n, d));
        }
        p
    }

    fn add_term(&mut self, e: InvariantExponents, c: QSqrt3) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(QSqrt3::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&InvariantExponents, &QSqrt3)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &InvariantExponents) -> QSqrt3 {
        self.terms.get(e).cloned().unwrap_or_else(QSqrt3::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-QSqrt3::one()))
    }

    pub fn scale(&self, s: &QSqrt3) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = core::array::from_fn(|i| e1[i] + e2[i]);
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Splits into coefficients of powers of `c3`: `self = Σ_k coeffs[k] c3^k`.
    pub fn c3_coefficients(&self) -> Vec<InvariantPoly> {
        let max = self.terms.keys().map(|e| e[3] as usize).max().unwrap_or(0);
        let mut out = alloc::vec![InvariantPoly::zero(); max + 1];
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[3] = 0;
            out[e[3] as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn eval(&self, p: &LocalInvariantPoint) -> f64 {
        let v = p.as_array();
        self.terms.iter().map(|(e, c)| c.to_f64() * (0..4).map(|i| powi(v[i], e[i])).product::<f64>()).sum()
    }

    /// Substitutes the exact polynomials of `(f1, f2, c2, c3)` in ξ.
    pub fn to_bloch_polynomial(&self, degree: usize) -> ExactPoly {
        let vars: [ExactPoly; 4] = core::array::from_fn(|i| LOCAL_BASIS[i].exact());
        let mut out = ExactPoly::zero(degree);
        for (e, c) in &self.terms {
            let mut m = ExactPoly::constant(c.clone());
            for i in 0..4 {
                m = m.mul(&vars[i].pow(e[i] as usize));
            }
            out = out.add(&m);
        }
        out
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly { terms: self.terms.iter().map(|(e, c)| (*e, c.to_f64())).collect() }
    }
}

fn powi(x: f64, e: u8) -> f64 {
    (0..e).fold(1.0, |acc, _| acc * x)
}

impl fmt::Display for InvariantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest total weight first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| core::cmp::Reverse(**e));
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let is_const = e.iter().all(|&x| x == 0);
            let neg = c.is_rational() && c.a < num_rational::BigRational::zero();
            let shown = if neg { -(*c).clone() } else { (*c).clone() };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !shown.is_one() || is_const {
                write!(f, "{}", shown)?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for i in 0..4 {
                if e[i] == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(INVARIANT_NAMES[i])?;
                if e[i] > 1 {
                    write!(f, "^{}", e[i])?;
                }
            }
        }
        Ok(())
    }
}

/// Floating-point copy of an [`InvariantPoly`] for hot loops.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPoly {
    terms: Vec<(InvariantExponents, f64)>,
}

impl CompiledPoly {
    pub fn eval(&self, p: &LocalInvariantPoint) -> f64 {
        let v = p.as_array();
        self.terms.iter().map(|(e, c)| c * (0..4).map(|i| powi(v[i], e[i])).product::<f64>()).sum()
    }
}

/// All monomials in `(f1, f2, c2, c3)` of weighted degree `d` (weights 1, 2, 2, 3).
pub fn invariant_monomials(d: usize) -> Vec<InvariantExponents> {
    let mut out = Vec::new();
    for c3 in 0..=d / 3 {
        for c2 in 0..=(d - 3 * c3) / 2 {
            for f2 in 0..=(d - 3 * c3 - 2 * c2) / 2 {
                let f1 = d - 3 * c3 - 2 * c2 - 2 * f2;
                out.push([f1 as u8, f2 as u8, c2 as u8, c3 as u8]);
            }
        }
    }
    out
}

/// Exact `⟨∇p_i, ∇p_j⟩` in ξ for local basis indices 1..=4.
pub fn exact_grad_entry(i: usize, j: usize) -> ExactPoly {
    let (pi, pj) = (LOCAL_BASIS[i - 1], LOCAL_BASIS[j - 1]);
    let gi = pi.exact().gradient();
    let gj = pj.exact().gradient();
    let degree = pi.degree() + pj.degree() - 2;
    gi.iter().zip(gj.iter()).fold(ExactPoly::zero(degree), |acc, (a, b)| acc.add(&a.mul(b)))
}

/// Expresses `Grad_ij` (indices 1..=4 over `{f1, f2, c2, c3}`) as a polynomial
/// in the basis by solving the identity over all ξ-monomials of degree
/// `deg p_i + deg p_j − 2`. Invariant monomials are independent because the
/// ring is free, so the fit is unique.
pub fn fit_grad_entry(i: usize, j: usize) -> Result<InvariantPoly> {
    let target = exact_grad_entry(i, j);
    fit_in_invariants(&target, "fitting a local Grad entry")
}

/// Exact fit of a homogeneous invariant in the local integrity basis.
pub fn fit_in_invariants(target: &ExactPoly, context: &'static str) -> Result<InvariantPoly> {
    let degree = target.degree();
    let candidates = invariant_monomials(degree);
    let xi_basis = monomials_of_degree(degree);
    let columns: Vec<Vec<QSqrt3>> = candidates
        .iter()
        .map(|e| InvariantPoly::term(*e, QSqrt3::one()).to_bloch_polynomial(degree).coefficients_in(&xi_basis))
        .collect();
    let rhs = target.coefficients_in(&xi_basis);
    let coeffs = solve_unique(&columns, &rhs, context)?;
    let mut out = InvariantPoly::zero();
    for (e, c) in candidates.into_iter().zip(coeffs) {
        out.add_term(e, c);
    }
    Ok(out)
}

/// The quoted block form of the local Grad matrix.
pub fn quoted_grad_local() -> [[InvariantPoly; 4]; 4] {
    let p = InvariantPoly::from_rational_terms;
    let b14 = p(&[([0, 1, 0, 0], 9, 2), ([2, 0, 0, 0], -3, 2), ([0, 0, 1, 0], -3, 2)]);
    let b24 = p(&[([1, 1, 0, 0], 3, 1), ([1, 0, 1, 0], 3, 1), ([0, 0, 0, 1], 2, 1)]);
    let upper = [
        [p(&[([0, 0, 0, 0], 1, 1)]), InvariantPoly::zero(), p(&[([1, 0, 0, 0], 2, 1)]), b14],
        [InvariantPoly::zero(), p(&[([0, 1, 0, 0], 4, 1)]), p(&[([0, 1, 0, 0], 4, 1)]), b24],
        [InvariantPoly::zero(), InvariantPoly::zero(), p(&[([0, 0, 1, 0], 4, 1)]), p(&[([0, 0, 0, 1], 6, 1)])],
        [InvariantPoly::zero(), InvariantPoly::zero(), InvariantPoly::zero(), p(&[([0, 0, 2, 0], 9, 1)])],
    ];
    core::array::from_fn(|i| core::array::from_fn(|j| if i <= j { upper[i][j].clone() } else { upper[j][i].clone() }))
}

/// The quoted determinant `4 (c2 + 3 f2 − f1²) · Q` with
/// `Q = −9 f1²(c2² + 3 f2²) − 12 c3 f1 (c2 − 3 f2) + 3 f1⁴ (2 c2 + 3 f2)
///      + 27 f2 (c2 − f2)² − 4 c3² + 4 c3 f1³ − f1⁶`.
pub fn quoted_det_factors() -> (QSqrt3, InvariantPoly, InvariantPoly) {
    let p = InvariantPoly::from_rational_terms;
    let linear = p(&[([0, 0, 1, 0], 1, 1), ([0, 1, 0, 0], 3, 1), ([2, 0, 0, 0], -1, 1)]);
    let quadratic = p(&[
        ([2, 0, 2, 0], -9, 1),
        ([2, 2, 0, 0], -27, 1),
        ([1, 0, 1, 1], -12, 1),
        ([1, 1, 0, 1], 36, 1),
        ([4, 0, 1, 0], 6, 1),
        ([4, 1, 0, 0], 9, 1),
        ([0, 1, 2, 0], 27, 1),
        ([0, 2, 1, 0], -54, 1),
        ([0, 3, 0, 0], 27, 1),
        ([0, 0, 0, 2], -4, 1),
        ([3, 0, 0, 1], 4, 1),
        ([6, 0, 0, 0], -1, 1),
    ]);
    (QSqrt3::int(4), linear, quadratic)
}

/// Exact determinant of a symmetric 4×4 matrix of invariant polynomials.
pub fn exact_det4(m: &[[InvariantPoly; 4]; 4]) -> InvariantPoly {
    let mut total = InvariantPoly::zero();
    let perms = permutations4();
    for (perm, sign) in perms {
        let mut term = InvariantPoly::constant(QSqrt3::int(sign));
        for (row, &col) in perm.iter().enumerate() {
            term = term.mul(&m[row][col]);
            if term.is_zero() {
                break;
            }
        }
        total = total.add(&term);
    }
    total
}

fn permutations4() -> Vec<([usize; 4], i64)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..i).all(|j| p[i] != p[j])) {
                        let inversions = (0..4)
                            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        out.push((p, if inversions % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
        }
    }
    out
}

/// Comparison of one quoted closed-form entry with its exact fit.
#[derive(Clone, Debug, PartialEq)]
pub struct GradEntryReport {
    /// One-based indices into `{f1, f2, c2, c3}`.
    pub i: usize,
    pub j: usize,
    pub quoted: InvariantPoly,
    pub fitted: InvariantPoly,
}

impl GradEntryReport {
    pub fn quoted_matches(&self) -> bool {
        self.quoted == self.fitted
    }
}

/// Validated determinant factorization `det = constant · linear · quadratic`
/// where `quadratic = q2 c3² + q1 c3 + q0` and its c3-discriminant is
/// `disc_factor · f2 · (c2 − f2 − f1²)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetFactorization {
    pub constant: QSqrt3,
    pub linear: InvariantPoly,
    pub quadratic: InvariantPoly,
    pub q2: QSqrt3,
    pub q1: InvariantPoly,
    pub q0: InvariantPoly,
    pub disc_factor: QSqrt3,
    /// Whether the quoted determinant equals the validated one exactly.
    pub quoted_matches: bool,
}

/// The local Grad matrix with every entry certified by exact fitting.
#[derive(Clone, Debug)]
pub struct LocalGradModel {
    pub entries: [[InvariantPoly; 4]; 4],
    pub reports: Vec<GradEntryReport>,
    pub det: DetFactorization,
    compiled: [[CompiledPoly; 4]; 4],
    compiled_linear: CompiledPoly,
    compiled_quadratic: CompiledPoly,
    compiled_q1: CompiledPoly,
}

impl LocalGradModel {
    pub fn build() -> Result<Self> {
        let quoted = quoted_grad_local();
        let mut entries: [[InvariantPoly; 4]; 4] = Default::default();
        let mut reports = Vec::new();
        for i in 1..=4 {
            for j in i..=4 {
                let fitted = fit_grad_entry(i, j)?;
                let q = quoted[i - 1][j - 1].clone();
                // The fit is exact; a quoted entry survives only if identical.
                let chosen = if q == fitted { q.clone() } else { fitted.clone() };
                entries[i - 1][j - 1] = chosen.clone();
                entries[j - 1][i - 1] = chosen;
                reports.push(GradEntryReport { i, j, quoted: q, fitted });
            }
        }
        let det = factor_determinant(&entries)?;
        let compiled = core::array::from_fn(|i| core::array::from_fn(|j| entries[i][j].compile()));
        Ok(LocalGradModel {
            compiled_linear: det.linear.compile(),
            compiled_quadratic: det.quadratic.compile(),
            compiled_q1: det.q1.compile(),
            entries,
            reports,
            det,
            compiled,
        })
    }

    pub fn eval(&self, p: &LocalInvariantPoint) -> GradMatrix {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let v = self.compiled[i][j].eval(p);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        GradMatrix { dim: 4, m }
    }
}

fn factor_determinant(entries: &[[InvariantPoly; 4]; 4]) -> Result<DetFactorization> {
    use crate::error::Error;
    let det = exact_det4(entries);
    let (constant, linear, quadratic) = quoted_det_factors();
    let product = linear.mul(&quadratic).scale(&constant);
    if product != det {
        // The quoted factorization did not survive; nothing downstream is
        // derived from an unverified determinant.
        return Err(Error::InconsistentSystem { context: "factoring the local Grad determinant" });
    }
    let coeffs = quadratic.c3_coefficients();
    if coeffs.len() != 3 {
        return Err(Error::InconsistentSystem { context: "reading the determinant as a quadratic in c3" });
    }
    let q2_poly = &coeffs[2];
    let q2 = q2_poly.coefficient(&[0, 0, 0, 0]);
    if q2_poly.terms().count() != 1 || q2.is_zero() {
        return Err(Error::InconsistentSystem { context: "leading c3 coefficient of the determinant" });
    }
    let (q1, q0) = (coeffs[1].clone(), coeffs[0].clone());
    let disc = q1.mul(&q1).sub(&q0.scale(&(QSqrt3::int(4) * q2.clone())));
    // disc = κ f2 (c2 − f2 − f1²)²
    let f1 = InvariantPoly::var(0);
    let f2 = InvariantPoly::var(1);
    let c2 = InvariantPoly::var(2);
    let gap = c2.sub(&f2).sub(&f1.mul(&f1));
    let shape = f2.mul(&gap).mul(&gap);
    let kappa = disc.coefficient(&[0, 1, 2, 0]);
    if shape.scale(&kappa) != disc {
        return Err(Error::InconsistentSystem { context: "factoring the c3-discriminant of the determinant" });
    }
    Ok(DetFactorization { constant, linear, quadratic, q2, q1, q0, disc_factor: kappa, quoted_matches: true })
}

static MODEL: spin::Lazy<LocalGradModel> =
    spin::Lazy::new(|| LocalGradModel::build().expect("local Grad matrix is expressible in its integrity basis"));

/// Cached validated model.
pub fn local_model() -> &'static LocalGradModel {
    &MODEL
}

/// Validated closed-form local Grad matrix at `point`.
pub fn grad_local_closed(point: &LocalInvariantPoint) -> GradMatrix {
    local_model().eval(point)
}

/// Determinant of the local Grad matrix with its two validated factors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetGrad {
    pub value: f64,
    /// `c2 + 3 f2 − f1²`
    pub linear_factor: f64,
    /// Quadratic-in-c3 factor whose roots are Σ±.
    pub quadratic_factor: f64,
    pub constant: f64,
    pub scale: f64,
}

pub fn det_grad_local(point: &LocalInvariantPoint) -> DetGrad {
    let model = local_model();
    let g = model.eval(point);
    DetGrad {
        value: g.det(),
        linear_factor: model.compiled_linear.eval(point),
        quadratic_factor: model.compiled_quadratic.eval(point),
        constant: model.det.constant.to_f64(),
        scale: g.det_scale(),
    }
}

/// The two roots `c3_minus ≤ c3_plus` of the determinant at fixed
/// `(f1, f2, c2)`; `None` when `f2 < 0` (no real roots).
pub fn sigma_surfaces(f1: f64, f2: f64, c2: f64) -> Option<(f64, f64)> {
    if f2 < 0.0 {
        return None;
    }
    let model = local_model();
    let p = LocalInvariantPoint::new(f1, f2, c2, 0.0);
    let q2 = model.det.q2.to_f64();
    let q1 = model.compiled_q1.eval(&p);
    let gap = c2 - f2 - f1 * f1;
    let sqrt_disc = libm::sqrt(model.det.disc_factor.to_f64() * f2) * gap.abs();
    let r1 = (-q1 + sqrt_disc) / (2.0 * q2);
    let r2 = (-q1 - sqrt_disc) / (2.0 * q2);
    Some((r1.min(r2), r1.max(r2)))
}

/// The quoted closed form
/// `c3 = (3/2)(f1(3 f2 − c2) + f1³/3 ∓ √(3 f2)(f2 + f1² − c2))`, as `(Σ−, Σ+)`
/// in the order of the ∓ sign.
pub fn quoted_sigma(f1: f64, f2: f64, c2: f64) -> (f64, f64) {
    let base = f1 * (3.0 * f2 - c2) + f1 * f1 * f1 / 3.0;
    let spread = libm::sqrt(3.0 * f2) * (f2 + f1 * f1 - c2);
    (1.5 * (base - spread), 1.5 * (base + spread))
}

/// Δ1: on `f2 = 0`, `c3 = (3/2) f1 (f1²/3 − c2)`.
pub fn delta1_c3(f1: f64, c2: f64) -> f64 {
    1.5 * f1 * (f1 * f1 / 3.0 - c2)
}

/// Δ2: on `c2 = f2 + f1²`, `c3 = 3 f1 (c2 − (4/3) f1²)`.
pub fn delta2_c3(f1: f64, c2: f64) -> f64 {
    3.0 * f1 * (c2 - 4.0 / 3.0 * f1 * f1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{casimirs, local_point};

    fn pt(x: [f64; 8]) -> BlochVector {
        BlochVector(x)
    }

    #[test]
    fn global_grad_vanishes_at_origin() {
        let g = numeric_grad(&GLOBAL_BASIS, &BlochVector::ZERO);
        assert_eq!(g.max_abs(), 0.0);
        assert_eq!(grad_su3_closed(0.0, 0.0).max_abs(), 0.0);
    }

    #[test]
    fn global_closed_form_at_a_point() {
        let xi = pt([0.3, -0.2, 0.1, 0.5, -0.4, 0.25, 0.15, -0.35]);
        let g = numeric_grad(&GLOBAL_BASIS, &xi);
        let inv = casimirs(&xi);
        let c = grad_su3_closed(inv.c2, inv.c3);
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.get(i, j) - c.get(i, j)).abs() < 1e-13);
            }
        }
        let d = c.det();
        assert!((d - 36.0 * inv.discriminant()).abs() < 1e-13);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let xi = pt([0.3, -0.2, 0.1, 0.5, -0.4, 0.25, 0.15, -0.35]);
        let h = 1e-6;
        for p in LOCAL_BASIS {
            let g = p.gradient(&xi);
            let poly = p.exact();
            for k in 0..8 {
                let mut a = xi.0;
                let mut b = xi.0;
                a[k] += h;
                b[k] -= h;
                let fd = (poly.eval(&a) - poly.eval(&b)) / (2.0 * h);
                assert!((fd - g[k]).abs() < 1e-8, "{:?} d{}", p, k);
            }
        }
    }

    #[test]
    fn invariant_monomial_counts() {
        // coefficients of 1/((1-q)(1-q^2)^2(1-q^3))
        let counts: Vec<usize> = (0..5).map(|d| invariant_monomials(d).len()).collect();
        assert_eq!(counts, [1, 1, 3, 4, 7]);
    }

    #[test]
    fn named_fits() {
        assert_eq!(fit_grad_entry(1, 1).unwrap(), InvariantPoly::constant(QSqrt3::one()));
        assert_eq!(fit_grad_entry(3, 3).unwrap(), InvariantPoly::from_rational_terms(&[([0, 0, 1, 0], 4, 1)]));
        assert_eq!(fit_grad_entry(3, 4).unwrap(), InvariantPoly::from_rational_terms(&[([0, 0, 0, 1], 6, 1)]));
        assert_eq!(fit_grad_entry(1, 3).unwrap(), InvariantPoly::from_rational_terms(&[([1, 0, 0, 0], 2, 1)]));
        let b14 = fit_grad_entry(1, 4).unwrap();
        let quoted = &quoted_grad_local()[0][3];
        assert_eq!(&b14, quoted);
    }

    #[test]
    fn only_b24_differs_from_quoted() {
        let model = local_model();
        let bad: Vec<(usize, usize)> =
            model.reports.iter().filter(|r| !r.quoted_matches()).map(|r| (r.i, r.j)).collect();
        assert_eq!(bad, [(2, 4)]);
        let r = model.reports.iter().find(|r| (r.i, r.j) == (2, 4)).unwrap();
        let diff = r.fitted.sub(&r.quoted);
        assert_eq!(diff, InvariantPoly::from_rational_terms(&[([3, 0, 0, 0], -1, 1)]));
        assert!(model.det.quoted_matches);
        assert_eq!(model.det.disc_factor, QSqrt3::int(432));
        assert_eq!(model.det.q2, QSqrt3::int(-4));
    }

    #[test]
    fn closed_local_matches_numeric_at_a_point() {
        let xi = pt([0.3, -0.2, 0.1, 0.5, -0.4, 0.25, 0.15, -0.35]);
        let g = numeric_grad(&LOCAL_BASIS, &xi);
        let c = grad_local_closed(&local_point(&xi));
        for i in 0..4 {
            for j in 0..4 {
                assert!((g.get(i, j) - c.get(i, j)).abs() < 1e-13, "({i},{j})");
            }
        }
        let d = det_grad_local(&local_point(&xi));
        assert!((d.value - d.constant * d.linear_factor * d.quadratic_factor).abs() < 1e-12 * d.scale);
    }

    #[test]
    fn det_vanishes_at_origin() {
        let d = det_grad_local(&LocalInvariantPoint::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn sigma_collapses_on_delta_surfaces() {
        let (lo, hi) = sigma_surfaces(0.3, 0.0, 0.5).unwrap();
        assert!((hi - lo).abs() < 1e-14);
        assert!((lo - delta1_c3(0.3, 0.5)).abs() < 1e-14);

        let (f1, f2) = (-0.25, 0.2);
        let c2 = f2 + f1 * f1;
        let (lo, hi) = sigma_surfaces(f1, f2, c2).unwrap();
        assert!((hi - lo).abs() < 1e-14);
        assert!((lo - delta2_c3(f1, c2)).abs() < 1e-14);
        assert!(sigma_surfaces(0.0, -0.1, 0.5).is_none());
    }

    #[test]
    fn quoted_sigma_agrees_with_roots() {
        for &(f1, f2, c2) in &[(0.1, 0.2, 0.6), (-0.4, 0.05, 0.3), (0.0, 0.3, 0.5)] {
            let (lo, hi) = sigma_surfaces(f1, f2, c2).unwrap();
            let (a, b) = quoted_sigma(f1, f2, c2);
            assert!((lo - a.min(b)).abs() < 1e-13 && (hi - a.max(b)).abs() < 1e-13);
            for c3 in [lo, hi] {
                let d = det_grad_local(&LocalInvariantPoint::new(f1, f2, c2, c3));
                assert!(d.value.abs() <= 1e-9 * d.scale);
            }
        }
    }
}
