//! Gell-Mann basis of su(3), its structure constants, and the Bloch
//! parametrization of qutrit density matrices
//! `ρ = (I + √3 Σ ξₐ λₐ) / 3`.
//!
//! Structure constants are never tabulated: they are computed once from the
//! matrices, both in floating point and exactly over Q(√3), and cached.
//!
//! Sign convention: `[λₐ, λᵦ] = 2i f_abc λ_c`, i.e. `f_abc = tr([λₐ, λᵦ] λ_c) / 4i`,
//! which gives `f₁₂₃ = +1` with the ordering of [`gell_mann`].

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{QSqrt3, SQRT_3};
use crate::linalg::{hermitian_eigenvalues, Mat3};

/// Entry of a Gell-Mann matrix in Q(√3)(i): `re + i·im`, both in Q(√3).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactComplex {
    pub re: QSqrt3,
    pub im: QSqrt3,
}

impl ExactComplex {
    fn zero() -> Self {
        ExactComplex { re: QSqrt3::zero(), im: QSqrt3::zero() }
    }
    fn add(&self, o: &Self) -> Self {
        ExactComplex { re: self.re.clone() + o.re.clone(), im: self.im.clone() + o.im.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        ExactComplex {
            re: self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            im: self.re.clone() * o.im.clone() + self.im.clone() * o.re.clone(),
        }
    }
}

pub type ExactMat3 = [[ExactComplex; 3]; 3];

/// Nonzero entries of λ₁..λ₈ as `(row, col, re, im)` with `re`, `im` in {0, ±1};
/// λ₈ is stored without its 1/√3 prefactor.
const PATTERN: [&[(usize, usize, i8, i8)]; 8] = [
    &[(0, 1, 1, 0), (1, 0, 1, 0)],
    &[(0, 1, 0, -1), (1, 0, 0, 1)],
    &[(0, 0, 1, 0), (1, 1, -1, 0)],
    &[(0, 2, 1, 0), (2, 0, 1, 0)],
    &[(0, 2, 0, -1), (2, 0, 0, 1)],
    &[(1, 2, 1, 0), (2, 1, 1, 0)],
    &[(1, 2, 0, -1), (2, 1, 0, 1)],
    &[(0, 0, 1, 0), (1, 1, 1, 0), (2, 2, -2, 0)],
];

/// Gell-Mann matrix λₐ for `a` in 1..=8.
pub fn gell_mann(a: usize) -> Result<Mat3> {
    if !(1..=8).contains(&a) {
        return Err(Error::IndexOutOfRange(a));
    }
    let scale = if a == 8 { 1.0 / SQRT_3 } else { 1.0 };
    let mut m = Mat3::ZERO;
    for &(i, j, re, im) in PATTERN[a - 1] {
        m.0[i][j] = Complex64::new(re as f64 * scale, im as f64 * scale);
    }
    Ok(m)
}

/// All eight Gell-Mann matrices, index 0 holding λ₁.
pub fn gell_mann_basis() -> [Mat3; 8] {
    core::array::from_fn(|a| gell_mann(a + 1).expect("index in range"))
}

/// Exact Gell-Mann matrix over Q(√3)(i), `a` in 1..=8.
pub fn gell_mann_exact(a: usize) -> Result<ExactMat3> {
    if !(1..=8).contains(&a) {
        return Err(Error::IndexOutOfRange(a));
    }
    let scale = if a == 8 { QSqrt3::sqrt3_frac(1, 3) } else { QSqrt3::int(1) };
    let mut m: ExactMat3 = core::array::from_fn(|_| core::array::from_fn(|_| ExactComplex::zero()));
    for &(i, j, re, im) in PATTERN[a - 1] {
        m[i][j] =
            ExactComplex { re: QSqrt3::int(re as i64) * scale.clone(), im: QSqrt3::int(im as i64) * scale.clone() };
    }
    Ok(m)
}

fn exact_mul(x: &ExactMat3, y: &ExactMat3) -> ExactMat3 {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| (0..3).fold(ExactComplex::zero(), |acc, k| acc.add(&x[i][k].mul(&y[k][j]))))
    })
}

fn exact_trace(x: &ExactMat3) -> ExactComplex {
    x[0][0].add(&x[1][1]).add(&x[2][2])
}

/// Totally symmetric `d` and antisymmetric `f` tensors, stored densely with
/// zero-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub d: [[[f64; 8]; 8]; 8],
    pub f: [[[f64; 8]; 8]; 8],
}

impl StructureConstants {
    /// Quarter-trace formulas applied to an arbitrary basis.
    pub fn from_basis(lambdas: &[Mat3; 8]) -> Self {
        let mut d = [[[0.0; 8]; 8]; 8];
        let mut f = [[[0.0; 8]; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let anti = lambdas[a].anticommutator(&lambdas[b]);
                let comm = lambdas[a].commutator(&lambdas[b]);
                for c in 0..8 {
                    d[a][b][c] = (anti * lambdas[c]).trace().re / 4.0;
                    // tr([λa, λb] λc) = 4i f_abc
                    f[a][b][c] = (comm * lambdas[c]).trace().im / 4.0;
                }
            }
        }
        StructureConstants { d, f }
    }

    /// `d_abc` with one-based indices.
    pub fn d(&self, a: usize, b: usize, c: usize) -> f64 {
        self.d[a - 1][b - 1][c - 1]
    }

    /// `f_abc` with one-based indices.
    pub fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f[a - 1][b - 1][c - 1]
    }

    /// Nonzero `d` entries `(a, b, c, value)`, zero-based.
    pub fn d_nonzero(&self) -> Vec<(usize, usize, usize, f64)> {
        nonzero(&self.d)
    }

    pub fn f_nonzero(&self) -> Vec<(usize, usize, usize, f64)> {
        nonzero(&self.f)
    }

    /// Copy with one `d` entry shifted (and its permutations left untouched),
    /// used to check that the self-tests notice a corrupted table.
    pub fn with_perturbed_d(&self, a: usize, b: usize, c: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.d[a - 1][b - 1][c - 1] += delta;
        out
    }

    /// Worst entrywise error of `λₐλᵦ = (2/3)δₐᵦ I + (d_abc + i f_abc) λ_c` over all pairs.
    pub fn product_identity_error(&self, lambdas: &[Mat3; 8]) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..8 {
            for b in 0..8 {
                let lhs = lambdas[a] * lambdas[b];
                let mut rhs = if a == b { Mat3::IDENTITY.scale_re(2.0 / 3.0) } else { Mat3::ZERO };
                for c in 0..8 {
                    let coeff = Complex64::new(self.d[a][b][c], self.f[a][b][c]);
                    rhs = rhs + lambdas[c].scale(coeff);
                }
                worst = worst.max((lhs - rhs).max_abs());
            }
        }
        worst
    }

    /// Worst violation of total symmetry of `d` and total antisymmetry of `f`.
    pub fn symmetry_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    let d = self.d[a][b][c];
                    let f = self.f[a][b][c];
                    for (p, q, r) in [(b, a, c), (a, c, b), (c, b, a)] {
                        worst = worst.max((self.d[p][q][r] - d).abs());
                        worst = worst.max((self.f[p][q][r] + f).abs());
                    }
                    worst = worst.max((self.d[b][c][a] - d).abs());
                    worst = worst.max((self.f[b][c][a] - f).abs());
                }
            }
        }
        worst
    }
}

fn nonzero(t: &[[[f64; 8]; 8]; 8]) -> Vec<(usize, usize, usize, f64)> {
    let mut out = Vec::new();
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                if t[a][b][c].abs() > 1e-14 {
                    out.push((a, b, c, t[a][b][c]));
                }
            }
        }
    }
    out
}

static CONSTANTS: spin::Lazy<StructureConstants> =
    spin::Lazy::new(|| StructureConstants::from_basis(&gell_mann_basis()));

static D_SPARSE: spin::Lazy<Vec<(usize, usize, usize, f64)>> = spin::Lazy::new(|| structure_constants().d_nonzero());

/// Floating-point structure constants of the standard basis.
pub fn structure_constants() -> &'static StructureConstants {
    &CONSTANTS
}

/// Nonzero `d_abc` (zero-based), for fast contractions.
pub(crate) fn d_sparse() -> &'static [(usize, usize, usize, f64)] {
    &D_SPARSE
}

/// Exact structure constants over Q(√3), zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactStructureConstants {
    pub d: Vec<(usize, usize, usize, QSqrt3)>,
    pub f: Vec<(usize, usize, usize, QSqrt3)>,
}

impl ExactStructureConstants {
    fn compute() -> Self {
        let lambdas: Vec<ExactMat3> = (1..=8).map(|a| gell_mann_exact(a).expect("in range")).collect();
        let quarter = QSqrt3::frac(1, 4);
        let mut d = Vec::new();
        let mut f = Vec::new();
        for a in 0..8 {
            for b in 0..8 {
                let ab = exact_mul(&lambdas[a], &lambdas[b]);
                let ba = exact_mul(&lambdas[b], &lambdas[a]);
                for c in 0..8 {
                    let abc = exact_trace(&exact_mul(&ab, &lambdas[c]));
                    let bac = exact_trace(&exact_mul(&ba, &lambdas[c]));
                    // tr({a,b}c) is real; tr([a,b]c) is purely imaginary.
                    let dv = (abc.re.clone() + bac.re.clone()) * quarter.clone();
                    let fv = (abc.im - bac.im) * quarter.clone();
                    if !dv.is_zero() {
                        d.push((a, b, c, dv));
                    }
                    if !fv.is_zero() {
                        f.push((a, b, c, fv));
                    }
                }
            }
        }
        ExactStructureConstants { d, f }
    }

    pub fn f_entry(&self, a: usize, b: usize, c: usize) -> QSqrt3 {
        self.f.iter().find(|(x, y, z, _)| (*x, *y, *z) == (a, b, c)).map(|e| e.3.clone()).unwrap_or_else(QSqrt3::zero)
    }
}

static EXACT_CONSTANTS: spin::Lazy<ExactStructureConstants> = spin::Lazy::new(ExactStructureConstants::compute);

pub fn exact_structure_constants() -> &'static ExactStructureConstants {
    &EXACT_CONSTANTS
}

/// `exp(i t λₐ)` in closed form. For `a ≤ 7` the spectrum of λₐ is
/// `{1, −1, 0}`, so `λ³ = λ` and `exp(i t λ) = I + i sin t λ + (cos t − 1) λ²`.
pub fn exp_i_gell_mann(a: usize, t: f64) -> Result<Mat3> {
    let l = gell_mann(a)?;
    if a == 8 {
        let s = t / SQRT_3;
        return Ok(Mat3::diag([
            Complex64::from_polar(1.0, s),
            Complex64::from_polar(1.0, s),
            Complex64::from_polar(1.0, -2.0 * s),
        ]));
    }
    let l2 = l * l;
    Ok(Mat3::IDENTITY + l.scale(Complex64::new(0.0, libm::sin(t))) + l2.scale_re(libm::cos(t) - 1.0))
}

/// Eight real coordinates of a traceless Hermitian direction. Physicality is
/// not implied; see [`crate::membership::is_physical_bloch`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector(pub [f64; 8]);

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector([0.0; 8]);

    pub fn new(xi: [f64; 8]) -> Result<Self> {
        if let Some(index) = xi.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: index + 1 });
        }
        Ok(BlochVector(xi))
    }

    /// Unit vector along ξₐ, `a` in 1..=8.
    pub fn unit(a: usize) -> Result<Self> {
        if !(1..=8).contains(&a) {
            return Err(Error::IndexOutOfRange(a));
        }
        let mut xi = [0.0; 8];
        xi[a - 1] = 1.0;
        Ok(BlochVector(xi))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// `d_abc ξₐ ξᵦ ξ_c`.
    pub fn d_contraction(&self) -> f64 {
        d_sparse().iter().map(|&(a, b, c, v)| v * self.0[a] * self.0[b] * self.0[c]).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        BlochVector(self.0.map(|x| x * s))
    }
}

/// Hermitian, unit-trace 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat3);

/// Default tolerance for Hermiticity and trace checks.
pub const DENSITY_TOL: f64 = 1e-12;

impl DensityMatrix {
    /// Validates Hermiticity and unit trace to within `tol`.
    pub fn new(m: Mat3, tol: f64) -> Result<Self> {
        let deviation = m.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::WrongTrace { trace, deviation: (trace - 1.0).abs() });
        }
        Ok(DensityMatrix(m))
    }

    /// Wraps without validation; caller guarantees Hermitian unit trace.
    pub fn new_unchecked(m: Mat3) -> Self {
        DensityMatrix(m)
    }

    pub fn diagonal(p: [f64; 3]) -> Result<Self> {
        Self::new(Mat3::from_real([[p[0], 0.0, 0.0], [0.0, p[1], 0.0], [0.0, 0.0, p[2]]]), DENSITY_TOL)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat3::IDENTITY.scale_re(1.0 / 3.0))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    /// `g ρ g†`; stays Hermitian with unit trace for unitary `g`.
    pub fn conjugated(&self, g: &Mat3) -> Self {
        DensityMatrix(self.0.conjugate_by(g))
    }
}

/// `ρ = (I + √3 Σ ξₐ λₐ) / 3`.
pub fn bloch_to_density(xi: &BlochVector) -> DensityMatrix {
    let lambdas = gell_mann_basis();
    let mut m = Mat3::IDENTITY;
    for (x, l) in xi.0.iter().zip(lambdas.iter()) {
        m = m + l.scale_re(SQRT_3 * x);
    }
    DensityMatrix(m.scale_re(1.0 / 3.0))
}

/// `ξₐ = (√3/2) tr(ρ λₐ)`; input checked for Hermiticity and unit trace.
pub fn density_to_bloch(rho: &Mat3, tol: f64) -> Result<BlochVector> {
    let rho = DensityMatrix::new(*rho, tol)?;
    Ok(bloch_of(&rho))
}

/// Bloch vector of an already validated density matrix.
pub fn bloch_of(rho: &DensityMatrix) -> BlochVector {
    let lambdas = gell_mann_basis();
    BlochVector(core::array::from_fn(|a| SQRT_3 / 2.0 * (rho.0 * lambdas[a]).trace().re))
}

/// Spectrum of a Hermitian density matrix, descending.
pub fn eigenvalues(rho: &DensityMatrix) -> [f64; 3] {
    hermitian_eigenvalues(&rho.0 .0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponentials_are_unitary() {
        for a in 1..=8 {
            let g = exp_i_gell_mann(a, 0.7).unwrap();
            assert!((g * g.adjoint() - Mat3::IDENTITY).max_abs() < 1e-14);
            // derivative at zero is i λ
            let h = 1e-6;
            let d = (exp_i_gell_mann(a, h).unwrap() - exp_i_gell_mann(a, -h).unwrap()).scale_re(0.5 / h);
            assert!((d - gell_mann(a).unwrap().scale(Complex64::new(0.0, 1.0))).max_abs() < 1e-8);
        }
    }

    #[test]
    fn printed_diagonal_matrices() {
        let l3 = gell_mann(3).unwrap();
        assert_eq!(l3, Mat3::from_real([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.0]]));
        let l8 = gell_mann(8).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for (i, v) in [s, s, -2.0 * s].into_iter().enumerate() {
            assert!((l8.0[i][i].re - v).abs() < 1e-16);
        }
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(gell_mann(0), Err(Error::IndexOutOfRange(0)));
        assert_eq!(gell_mann(9), Err(Error::IndexOutOfRange(9)));
        assert!(BlochVector::unit(9).is_err());
    }

    #[test]
    fn basis_is_traceless_and_orthogonal() {
        let l = gell_mann_basis();
        for a in 0..8 {
            assert_eq!(l[a].trace(), Complex64::new(0.0, 0.0));
            assert!(l[a].hermitian_deviation() == 0.0);
            for b in 0..8 {
                let t = (l[a] * l[b]).trace();
                let expect = if a == b { 2.0 } else { 0.0 };
                assert!((t.re - expect).abs() < 1e-14 && t.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn named_structure_constants() {
        let sc = structure_constants();
        let s = 1.0 / 3f64.sqrt();
        assert!((sc.f(1, 2, 3) - 1.0).abs() < 1e-15);
        assert!((sc.d(8, 8, 8) + s).abs() < 1e-15);
        assert!((sc.d(1, 1, 8) - s).abs() < 1e-15);
        assert!((sc.f(4, 5, 8) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(sc.symmetry_error() < 1e-15);
        assert!(sc.product_identity_error(&gell_mann_basis()) < 1e-12);
    }

    #[test]
    fn exact_constants_agree_with_float() {
        let sc = structure_constants();
        let ex = exact_structure_constants();
        assert_eq!(ex.d.len(), sc.d_nonzero().len());
        assert_eq!(ex.f.len(), sc.f_nonzero().len());
        for (a, b, c, v) in &ex.d {
            assert!((crate::exact::Field::to_f64(v) - sc.d[*a][*b][*c]).abs() < 1e-15);
        }
        for (a, b, c, v) in &ex.f {
            assert!((crate::exact::Field::to_f64(v) - sc.f[*a][*b][*c]).abs() < 1e-15);
        }
        assert_eq!(ex.f_entry(0, 1, 2), QSqrt3::int(1));
        assert_eq!(ex.f_entry(3, 4, 7), QSqrt3::sqrt3_frac(1, 2));
    }

    #[test]
    fn perturbed_table_breaks_product_identity() {
        let bad = structure_constants().with_perturbed_d(1, 4, 6, 1e-3);
        assert!(bad.product_identity_error(&gell_mann_basis()) > 1e-4);
    }

    #[test]
    fn pure_state_bloch_coordinates() {
        let xi = BlochVector([0.0, 0.0, SQRT_3 / 2.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        let rho = bloch_to_density(&xi);
        let expect = Mat3::from_real([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        assert!((*rho.matrix() - expect).max_abs() < 1e-15);
        let back = density_to_bloch(&expect, DENSITY_TOL).unwrap();
        for (x, y) in back.0.iter().zip(xi.0.iter()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(eigenvalues(&DensityMatrix::diagonal([1.0, 0.0, 0.0]).unwrap()), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn maximally_mixed() {
        let rho = bloch_to_density(&BlochVector::ZERO);
        assert!((*rho.matrix() - Mat3::IDENTITY.scale_re(1.0 / 3.0)).max_abs() < 1e-16);
        let ev = eigenvalues(&rho);
        assert!(ev.iter().all(|e| (e - 1.0 / 3.0).abs() < 1e-15));
        let xi = bloch_of(&DensityMatrix::maximally_mixed());
        assert!(xi.norm_sqr() < 1e-30);
    }

    #[test]
    fn rejects_bad_density_input() {
        let mut m = Mat3::IDENTITY.scale_re(1.0 / 3.0);
        m.0[0][1] = Complex64::new(0.1, 0.0);
        match density_to_bloch(&m, DENSITY_TOL) {
            Err(Error::NotHermitian { deviation }) => assert!((deviation - 0.1).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let m = Mat3::IDENTITY.scale_re(0.5);
        match density_to_bloch(&m, DENSITY_TOL) {
            Err(Error::WrongTrace { trace, .. }) => assert!((trace - 1.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }
}
