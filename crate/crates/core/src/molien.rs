//! Molien series: closed-form expansion and Weyl-measure torus quadrature.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUADRATURE_DEGREE: usize = 12;
/// Pre-rounding residual above which quadrature counts are rejected.
pub const RESIDUAL_LIMIT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// SU(3) acting by conjugation; U(3) has the same invariants.
    Su3,
    /// The local SU(2)×U(1).
    Su2U1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// Traceless part, coordinates ξ₁..ξ₈.
    Bloch8,
    /// All 3×3 Hermitian matrices.
    Matrix9,
}

/// Torus weights as exponent pairs over the two torus coordinates:
/// `(x, y)` for SU(2)×U(1), `(x₁, x₂)` with `x₃ = 1/(x₁x₂)` for SU(3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusRep {
    pub weights: Vec<[i32; 2]>,
}

impl TorusRep {
    pub fn new(group: Group, space: Space) -> Self {
        let mut weights: Vec<[i32; 2]> = match group {
            // 1, x², xy⁻¹, x⁻², 1, x⁻¹y⁻¹, yx⁻¹, xy, 1
            Group::Su2U1 => vec![[0, 0], [2, 0], [1, -1], [-2, 0], [0, 0], [-1, -1], [-1, 1], [1, 1], [0, 0]],
            // xᵢ/xⱼ in the coordinates (x₁, x₂)
            Group::Su3 => vec![[0, 0], [1, -1], [2, 1], [-1, 1], [0, 0], [1, 2], [-2, -1], [-1, -2], [0, 0]],
        };
        if space == Space::Bloch8 {
            weights.pop();
        }
        TorusRep { weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn max_exponent(&self) -> usize {
        self.weights.iter().flatten().map(|e| e.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Weights are closed under inversion.
    pub fn is_self_conjugate(&self) -> bool {
        let mut w = self.weights.clone();
        let mut neg: Vec<[i32; 2]> = w.iter().map(|&[a, b]| [-a, -b]).collect();
        w.sort_unstable();
        neg.sort_unstable();
        w == neg
    }
}

/// Taylor coefficients of `∏ 1/(1 − q^dᵢ)` up to `q^K`.
pub fn expand_closed_form(degrees: &[usize], k: usize) -> Vec<u64> {
    let mut c = vec![0u64; k + 1];
    c[0] = 1;
    for &d in degrees {
        assert!(d > 0, "denominator degrees must be positive");
        for i in d..=k {
            c[i] += c[i - d];
        }
    }
    c
}

/// Denominator degrees of the known closed forms. For SU(2)×U(1) on the
/// 9-dimensional space the quoted form `(1, 2, 2, 3)` is the 8-variable
/// series; the extra trace variable contributes a further factor of degree 1.
pub fn closed_form_degrees(group: Group, space: Space) -> Vec<usize> {
    match (group, space) {
        (Group::Su3, Space::Matrix9) => vec![1, 2, 3],
        (Group::Su3, Space::Bloch8) => vec![2, 3],
        (Group::Su2U1, Space::Matrix9) => vec![1, 1, 2, 2, 3],
        (Group::Su2U1, Space::Bloch8) => vec![1, 2, 2, 3],
    }
}

/// The closed form quoted for SU(2)×U(1) together with the label d = 9.
pub const QUOTED_SU2U1_DEGREES: [usize; 4] = [1, 2, 2, 3];

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureCoefficients {
    pub counts: Vec<u64>,
    /// Unrounded real parts.
    pub raw: Vec<f64>,
    /// `max_k |raw_k − counts_k|`, imaginary parts included.
    pub residual: f64,
    pub nodes_per_circle: usize,
}

fn weyl_factor(group: Group, t: [f64; 2]) -> f64 {
    match group {
        // 1 − (x² + x⁻²)/2 on |x| = 1; the U(1) factor is trivial
        Group::Su2U1 => 1.0 - libm::cos(2.0 * t[0]),
        Group::Su3 => {
            let x = [
                Complex64::from_polar(1.0, t[0]),
                Complex64::from_polar(1.0, t[1]),
                Complex64::from_polar(1.0, -t[0] - t[1]),
            ];
            let v = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2]);
            v.norm_sqr() / 6.0
        }
    }
}

/// Complete homogeneous symmetric polynomials `h_0..h_K` of `values` from
/// power sums: `k h_k = Σ_{j=1..k} p_j h_{k−j}`.
pub fn complete_symmetric(values: &[Complex64], k: usize) -> Vec<Complex64> {
    let p: Vec<Complex64> = (0..=k).map(|j| values.iter().map(|v| v.powu(j as u32)).sum()).collect();
    let mut h = vec![Complex64::new(0.0, 0.0); k + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for n in 1..=k {
        let s: Complex64 = (1..=n).map(|j| p[j] * h[n - j]).sum();
        h[n] = s / n as f64;
    }
    h
}

/// `c_k = ∫_T h_k(weights) A dμ` by the trapezoid rule on both circles.
/// The grid is exact once it resolves every frequency of the integrand.
pub fn quadrature_coefficients(rep: &TorusRep, group: Group, k: usize) -> Result<QuadratureCoefficients> {
    if k > MAX_QUADRATURE_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: k, max: MAX_QUADRATURE_DEGREE });
    }
    // h_k has frequencies ≤ k·max|w| per coordinate, the Weyl factor ≤ 4
    let n = 2 * (k * rep.max_exponent() + 4) + 1;
    let mut acc = vec![Complex64::new(0.0, 0.0); k + 1];
    let step = 2.0 * PI / n as f64;
    for i in 0..n {
        for j in 0..n {
            let t = [i as f64 * step, j as f64 * step];
            let values: Vec<Complex64> = rep
                .weights
                .iter()
                .map(|w| Complex64::from_polar(1.0, w[0] as f64 * t[0] + w[1] as f64 * t[1]))
                .collect();
            let a = weyl_factor(group, t);
            for (s, h) in acc.iter_mut().zip(complete_symmetric(&values, k)) {
                *s += h * a;
            }
        }
    }
    let norm = (n * n) as f64;
    let mut counts = Vec::with_capacity(k + 1);
    let mut raw = Vec::with_capacity(k + 1);
    let mut residual: f64 = 0.0;
    for (degree, s) in acc.into_iter().enumerate() {
        let v = s / norm;
        let rounded = libm::round(v.re).max(0.0);
        let r = libm::hypot(v.re - rounded, v.im);
        if r > RESIDUAL_LIMIT {
            return Err(Error::QuadratureResidual { degree, residual: r });
        }
        residual = residual.max(r);
        counts.push(rounded as u64);
        raw.push(v.re);
    }
    Ok(QuadratureCoefficients { counts, raw, residual, nodes_per_circle: n })
}

/// One row of the consistency table.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub label: &'static str,
    pub counts: Vec<u64>,
}

/// Compares quadrature on both SU(2)×U(1) spaces with the quoted closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueReport {
    pub max_degree: usize,
    pub rows: Vec<SeriesRow>,
    /// Quoted series equals 8-variable quadrature.
    pub quoted_matches_bloch8: bool,
    /// Quoted series equals 9-variable quadrature.
    pub quoted_matches_matrix9: bool,
    pub matrix9_degree1: u64,
    pub worst_residual: f64,
}

pub fn residue_consistency_report(max_degree: usize) -> Result<ResidueReport> {
    let quoted = expand_closed_form(&QUOTED_SU2U1_DEGREES, max_degree);
    let b8 = quadrature_coefficients(&TorusRep::new(Group::Su2U1, Space::Bloch8), Group::Su2U1, max_degree)?;
    let m9 = quadrature_coefficients(&TorusRep::new(Group::Su2U1, Space::Matrix9), Group::Su2U1, max_degree)?;
    Ok(ResidueReport {
        max_degree,
        quoted_matches_bloch8: quoted == b8.counts,
        quoted_matches_matrix9: quoted == m9.counts,
        matrix9_degree1: m9.counts.get(1).copied().unwrap_or(0),
        worst_residual: b8.residual.max(m9.residual),
        rows: vec![
            SeriesRow { label: "quoted closed form (1,2,2,3)", counts: quoted },
            SeriesRow { label: "quadrature bloch8", counts: b8.counts },
            SeriesRow { label: "quadrature matrix9", counts: m9.counts },
        ],
    })
}
