//! U(3) Casimirs and SU(2)×U(1) local invariants of a Bloch vector.
//!
//! ```text
//! c2 = ξ·ξ                 c3 = √3 d_ijk ξi ξj ξk
//! f1 = ξ8                  f2 = ξ1² + ξ2² + ξ3²
//! f3 = ξ4² + ξ5² + ξ6² + ξ7²
//! f4 = 2(−ξ1(ξ4ξ6 + ξ5ξ7) + ξ2(ξ4ξ7 − ξ5ξ6)) + ξ3(−ξ4² − ξ5² + ξ6² + ξ7²)
//! ```
//!
//! `c2 = f1² + f2 + f3` holds identically. The cubic Casimir is also a
//! polynomial in the local invariants; the coefficients are obtained by an
//! exact fit ([`fit_c3_relation`]) rather than taken on trust, and the
//! commonly quoted form `c3 = f1(f2 − f3/2) − (3√3/4) f4 − f1³` is kept as
//! [`C3Relation::quoted`] so its residual can be reported.

use alloc::vec::Vec;

use crate::error::Result;
use crate::exact::{solve_unique, QSqrt3, SQRT_3};
use crate::linalg::Mat3;
use crate::poly::{monomials_of_degree, HomogeneousPolynomial};
use crate::su3::{exact_structure_constants, BlochVector, DensityMatrix};

pub type ExactPoly = HomogeneousPolynomial<QSqrt3>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlobalInvariants {
    pub c2: f64,
    pub c3: f64,
}

impl GlobalInvariants {
    /// `c2³ − c3²`, the discriminant of the characteristic polynomial up to a
    /// positive factor.
    pub fn discriminant(&self) -> f64 {
        self.c2 * self.c2 * self.c2 - self.c3 * self.c3
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalInvariants {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
}

/// Point of the local orbit space in the integrity basis `{f1, f2, c2, c3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalInvariantPoint {
    pub f1: f64,
    pub f2: f64,
    pub c2: f64,
    pub c3: f64,
}

impl LocalInvariantPoint {
    pub fn new(f1: f64, f2: f64, c2: f64, c3: f64) -> Self {
        LocalInvariantPoint { f1, f2, c2, c3 }
    }

    /// `f3 = c2 − f1² − f2`.
    pub fn f3(&self) -> f64 {
        self.c2 - self.f1 * self.f1 - self.f2
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.f1, self.f2, self.c2, self.c3]
    }
}

pub fn casimirs(xi: &BlochVector) -> GlobalInvariants {
    GlobalInvariants { c2: xi.norm_sqr(), c3: SQRT_3 * xi.d_contraction() }
}

pub fn local_invariants(xi: &BlochVector) -> LocalInvariants {
    let x = &xi.0;
    let f1 = x[7];
    let f2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let f3 = x[3] * x[3] + x[4] * x[4] + x[5] * x[5] + x[6] * x[6];
    let f4 = 2.0 * (-x[0] * (x[3] * x[5] + x[4] * x[6]) + x[1] * (x[3] * x[6] - x[4] * x[5]))
        + x[2] * (-x[3] * x[3] - x[4] * x[4] + x[5] * x[5] + x[6] * x[6]);
    LocalInvariants { f1, f2, f3, f4 }
}

pub fn local_point(xi: &BlochVector) -> LocalInvariantPoint {
    let l = local_invariants(xi);
    let g = casimirs(xi);
    LocalInvariantPoint { f1: l.f1, f2: l.f2, c2: g.c2, c3: g.c3 }
}

fn var(i: usize) -> ExactPoly {
    ExactPoly::variable(i)
}

fn sum_of_squares(range: core::ops::Range<usize>) -> ExactPoly {
    range.fold(ExactPoly::zero(2), |acc, i| acc.add(&var(i).pow(2)))
}

/// c2 as an exact polynomial.
pub fn c2_polynomial() -> ExactPoly {
    sum_of_squares(0..8)
}

/// c3 = √3 d_ijk ξi ξj ξk, built from the exact structure constants.
pub fn c3_polynomial() -> ExactPoly {
    let sqrt3 = QSqrt3::sqrt3_frac(1, 1);
    let mut p = ExactPoly::zero(3);
    for (a, b, c, v) in &exact_structure_constants().d {
        let term = var(*a).mul(&var(*b)).mul(&var(*c)).scale(&(v.clone() * sqrt3.clone()));
        p = p.add(&term);
    }
    p
}

pub fn f1_polynomial() -> ExactPoly {
    var(7)
}

pub fn f2_polynomial() -> ExactPoly {
    sum_of_squares(0..3)
}

pub fn f3_polynomial() -> ExactPoly {
    sum_of_squares(3..7)
}

pub fn f4_polynomial() -> ExactPoly {
    let two = QSqrt3::int(2);
    let m1 = var(0).mul(&var(3).mul(&var(5)).add(&var(4).mul(&var(6))));
    let m2 = var(1).mul(&var(3).mul(&var(6)).sub(&var(4).mul(&var(5))));
    let m3 = var(2).mul(&var(5).pow(2).add(&var(6).pow(2)).sub(&var(3).pow(2)).sub(&var(4).pow(2)));
    m2.sub(&m1).scale(&two).add(&m3)
}

/// Coefficients of `c3 = a·f1³ + b·f1f2 + c·f1f3 + e·f4`.
#[derive(Clone, Debug, PartialEq)]
pub struct C3Relation {
    pub f1_cubed: QSqrt3,
    pub f1_f2: QSqrt3,
    pub f1_f3: QSqrt3,
    pub f4: QSqrt3,
}

impl C3Relation {
    /// The quoted relation `c3 = f1(f2 − f3/2) − (3√3/4) f4 − f1³`.
    pub fn quoted() -> Self {
        C3Relation {
            f1_cubed: QSqrt3::int(-1),
            f1_f2: QSqrt3::int(1),
            f1_f3: QSqrt3::frac(-1, 2),
            f4: QSqrt3::sqrt3_frac(-3, 4),
        }
    }

    pub fn coefficients(&self) -> [&QSqrt3; 4] {
        [&self.f1_cubed, &self.f1_f2, &self.f1_f3, &self.f4]
    }

    pub fn eval(&self, l: &LocalInvariants) -> f64 {
        use crate::exact::Field;
        self.f1_cubed.to_f64() * l.f1 * l.f1 * l.f1
            + self.f1_f2.to_f64() * l.f1 * l.f2
            + self.f1_f3.to_f64() * l.f1 * l.f3
            + self.f4.to_f64() * l.f4
    }

    /// The relation's right-hand side as a polynomial in ξ.
    pub fn rhs_polynomial(&self) -> ExactPoly {
        let [a, b, c, e] = c3_basis_products();
        a.scale(&self.f1_cubed).add(&b.scale(&self.f1_f2)).add(&c.scale(&self.f1_f3)).add(&e.scale(&self.f4))
    }

    /// `c3 − rhs` as an exact polynomial; zero iff the relation is an identity.
    pub fn residual_polynomial(&self) -> ExactPoly {
        c3_polynomial().sub(&self.rhs_polynomial())
    }
}

fn c3_basis_products() -> [ExactPoly; 4] {
    let f1 = f1_polynomial();
    [f1.pow(3), f1.mul(&f2_polynomial()), f1.mul(&f3_polynomial()), f4_polynomial()]
}

/// Solves `c3 = a·f1³ + b·f1f2 + c·f1f3 + e·f4` as an identity over all cubic
/// monomials in ξ, in exact Q(√3) arithmetic. The four products are linearly
/// independent, so the solution is unique when it exists.
pub fn fit_c3_relation() -> Result<C3Relation> {
    let basis = monomials_of_degree(3);
    let columns: Vec<Vec<QSqrt3>> = c3_basis_products().iter().map(|p| p.coefficients_in(&basis)).collect();
    let rhs = c3_polynomial().coefficients_in(&basis);
    let x = solve_unique(&columns, &rhs, "fitting c3 in local invariants")?;
    let [a, b, c, e]: [QSqrt3; 4] = x.try_into().expect("four unknowns");
    Ok(C3Relation { f1_cubed: a, f1_f2: b, f1_f3: c, f4: e })
}

static FITTED: spin::Lazy<C3Relation> =
    spin::Lazy::new(|| fit_c3_relation().expect("c3 is a polynomial in the local invariants"));

/// Cached result of [`fit_c3_relation`].
pub fn fitted_c3_relation() -> &'static C3Relation {
    &FITTED
}

/// Residuals of the Casimir-in-local-invariant relations at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CasimirResiduals {
    /// `c2 − (f1² + f2 + f3)`
    pub c2: f64,
    /// `c3` minus the quoted relation.
    pub c3_quoted: f64,
    /// `c3` minus the fitted relation.
    pub c3_fitted: f64,
}

pub fn casimir_relation_check(xi: &BlochVector) -> CasimirResiduals {
    let g = casimirs(xi);
    let l = local_invariants(xi);
    CasimirResiduals {
        c2: g.c2 - (l.f1 * l.f1 + l.f2 + l.f3),
        c3_quoted: g.c3 - C3Relation::quoted().eval(&l),
        c3_fitted: g.c3 - fitted_c3_relation().eval(&l),
    }
}

/// `t2 = tr ρ²`, `t3 = tr ρ³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceCoordinates {
    pub t2: f64,
    pub t3: f64,
}

impl TraceCoordinates {
    /// `c2 = (3t2 − 1)/2`, `c3 = (9t3 − 1 − 6c2)/2`.
    pub fn to_casimirs(&self) -> GlobalInvariants {
        let c2 = (3.0 * self.t2 - 1.0) / 2.0;
        let c3 = (9.0 * self.t3 - 1.0 - 6.0 * c2) / 2.0;
        GlobalInvariants { c2, c3 }
    }
}

pub fn trace_coordinates(rho: &DensityMatrix) -> TraceCoordinates {
    let m: &Mat3 = rho.matrix();
    let m2 = *m * *m;
    TraceCoordinates { t2: m2.trace().re, t3: (m2 * *m).trace().re }
}
