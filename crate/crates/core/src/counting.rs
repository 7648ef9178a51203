//! Homogeneous invariants as the common kernel of the infinitesimal generators.
//!
//! Conjugation by `exp(i t λₐ)` moves the Bloch vector along
//! `dξ_c/dt = −2 f_abc ξ_b`; a polynomial is invariant under the connected
//! group iff every generator field annihilates it.
//!
//! The local generators λ₁, λ₂, λ₃, λ₈ preserve the grading by degree in
//! `(ξ₁..ξ₃)`, `(ξ₄..ξ₇)` and `ξ₈`, and fix ξ₈. The local kernel is therefore
//! computed block by block on the first seven variables and multiplied by
//! powers of ξ₈. SU(3) invariants are the local invariants additionally
//! killed by λ₄..λ₇.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{nullspace, Field, QSqrt3, Rational};
use crate::invariants::ExactPoly;
use crate::poly::{monomials_of_degree, HomogeneousPolynomial, Monomial, NVARS};
use crate::su3::exact_structure_constants;

pub const LOCAL_GENERATORS: [usize; 4] = [1, 2, 3, 8];
pub const MAX_KERNEL_DEGREE: usize = 6;

pub type RationalPoly = HomogeneousPolynomial<Rational>;

/// Matrix `M` of the field `ξ ↦ M ξ` generated by λₐ (one-based `a`):
/// `M[c][b] = −2 f_abc`.
pub fn generator_vector_field(a: usize) -> Result<[[QSqrt3; NVARS]; NVARS]> {
    if !(1..=8).contains(&a) {
        return Err(Error::IndexOutOfRange(a));
    }
    let f = exact_structure_constants();
    let mut m: [[QSqrt3; NVARS]; NVARS] = core::array::from_fn(|_| core::array::from_fn(|_| QSqrt3::zero()));
    for (x, b, c, v) in &f.f {
        if *x == a - 1 {
            m[*c][*b] = QSqrt3::int(-2) * v.clone();
        }
    }
    Ok(m)
}

/// Local generator field with rational entries: λ₈'s field carries an overall
/// √3, which is divided out (the kernel is unchanged).
pub fn rational_local_field(a: usize) -> Result<[[Rational; NVARS]; NVARS]> {
    if !LOCAL_GENERATORS.contains(&a) {
        return Err(Error::NotLocalGenerator(a));
    }
    let m = generator_vector_field(a)?;
    let scale = if a == 8 { QSqrt3::sqrt3_frac(1, 3) } else { QSqrt3::int(1) };
    let mut out: [[Rational; NVARS]; NVARS] = core::array::from_fn(|_| core::array::from_fn(|_| Rational::zero()));
    for c in 0..NVARS {
        for b in 0..NVARS {
            let v = m[c][b].clone() * scale.clone();
            debug_assert!(v.is_rational());
            out[c][b] = v.a;
        }
    }
    Ok(out)
}

/// Degree-`k` invariants with an exact basis.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSpace<F> {
    pub degree: usize,
    pub basis: Vec<HomogeneousPolynomial<F>>,
}

impl<F> InvariantSpace<F> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_KERNEL_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: k, max: MAX_KERNEL_DEGREE });
    }
    Ok(())
}

/// Kernel of the stacked linear maps `polys ↦ V(poly)` restricted to the span
/// of `columns`; returns coefficient vectors.
fn common_kernel<F: Field>(columns: &[HomogeneousPolynomial<F>], fields: &[[[F; NVARS]; NVARS]]) -> Vec<Vec<F>> {
    let mut rows: Vec<Vec<F>> = Vec::new();
    for m in fields {
        let images: Vec<HomogeneousPolynomial<F>> = columns.iter().map(|p| p.apply_linear_field(m)).collect();
        let mut monos: Vec<Monomial> = images.iter().flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
        monos.sort_unstable();
        monos.dedup();
        for mono in monos {
            rows.push(images.iter().map(|p| p.coefficient(&mono)).collect());
        }
    }
    nullspace(rows, columns.len())
}

fn combine<F: Field>(degree: usize, columns: &[HomogeneousPolynomial<F>], coeffs: &[F]) -> HomogeneousPolynomial<F> {
    columns
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .fold(HomogeneousPolynomial::zero(degree), |acc, (p, c)| acc.add(&p.scale(c)))
}

/// Local invariants of degree `k` in ξ₁..ξ₈.
pub fn invariant_space(k: usize) -> Result<InvariantSpace<Rational>> {
    check_degree(k)?;
    let fields: Vec<[[Rational; NVARS]; NVARS]> =
        LOCAL_GENERATORS.iter().map(|&a| rational_local_field(a)).collect::<Result<_>>()?;
    let mut basis = Vec::new();
    for c in 0..=k {
        let rest = k - c;
        let xi8 = RationalPoly::variable(7).pow(c);
        let all = monomials_of_degree(rest);
        for a in 0..=rest {
            let block: Vec<RationalPoly> = all
                .iter()
                .filter(|m| m.0[7] == 0 && m.partial_degree(0..3) == a)
                .map(|m| RationalPoly::from_terms(rest, [(*m, Rational::from_int(1))]))
                .collect();
            for v in common_kernel(&block, &fields) {
                basis.push(combine(rest, &block, &v).mul(&xi8));
            }
        }
    }
    Ok(InvariantSpace { degree: k, basis })
}

pub fn invariant_dimension(k: usize) -> Result<usize> {
    invariant_space(k).map(|s| s.dimension())
}

/// SU(3) invariants of degree `k`: local invariants also killed by λ₄..λ₇.
pub fn su3_invariant_space(k: usize) -> Result<InvariantSpace<QSqrt3>> {
    let local = invariant_space(k)?;
    let columns: Vec<ExactPoly> =
        local.basis.iter().map(|p| p.map_coefficients(|c| QSqrt3::rational(c.clone()))).collect();
    let fields: Vec<[[QSqrt3; NVARS]; NVARS]> = (4..=7).map(generator_vector_field).collect::<Result<_>>()?;
    let basis = common_kernel(&columns, &fields).iter().map(|v| combine(k, &columns, v)).collect();
    Ok(InvariantSpace { degree: k, basis })
}

pub fn su3_invariant_dimension(k: usize) -> Result<usize> {
    su3_invariant_space(k).map(|s| s.dimension())
}

/// Invariants on all 3×3 Hermitian matrices. In coordinates `(tr ρ, ξ)` the
/// trace is a fixed coordinate, so the degree-`k` count is the sum of the
/// traceless counts of degrees `0..=k`.
pub fn matrix9_dimension(counts8: &[usize], k: usize) -> usize {
    counts8[..=k].iter().sum()
}
