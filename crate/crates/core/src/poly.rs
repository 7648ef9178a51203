//! Exact homogeneous polynomials in the eight Bloch variables.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::exact::Field;

pub const NVARS: usize = 8;

/// Exponent vector of a monomial in ξ₁..ξ₈.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [u8; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(core::array::from_fn(|i| self.0[i] + other.0[i]))
    }

    pub fn eval(&self, x: &[f64; NVARS]) -> f64 {
        self.0.iter().zip(x).map(|(&e, &v)| powi(v, e)).product()
    }

    /// Degree in the variables with indices in `range`.
    pub fn partial_degree(&self, range: core::ops::Range<usize>) -> usize {
        self.0[range].iter().map(|&e| e as usize).sum()
    }
}

fn powi(x: f64, e: u8) -> f64 {
    (0..e).fold(1.0, |acc, _| acc * x)
}

/// All monomials of total degree `k`, in lexicographic order of exponents
/// (descending in ξ₁).
pub fn monomials_of_degree(k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = [0u8; NVARS];
    fill(0, k, &mut e, &mut out);
    out
}

fn fill(i: usize, remaining: usize, e: &mut [u8; NVARS], out: &mut Vec<Monomial>) {
    if i == NVARS - 1 {
        e[i] = remaining as u8;
        out.push(Monomial(*e));
        return;
    }
    for v in (0..=remaining).rev() {
        e[i] = v as u8;
        fill(i + 1, remaining - v, e, out);
    }
    e[i] = 0;
}

/// Homogeneous polynomial with exact coefficients; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial<F> {
    degree: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> HomogeneousPolynomial<F> {
    pub fn zero(degree: usize) -> Self {
        HomogeneousPolynomial { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::zero(0).with_term(Monomial::ONE, c)
    }

    /// ξᵢ for zero-based `i`.
    pub fn variable(i: usize) -> Self {
        Self::zero(1).with_term(Monomial::var(i), F::one())
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(degree);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn with_term(mut self, m: Monomial, c: F) -> Self {
        self.add_term(m, c);
        self
    }

    /// Adds `c·m`; panics if `m` has the wrong degree.
    pub fn add_term(&mut self, m: Monomial, c: F) {
        assert_eq!(m.degree(), self.degree, "monomial degree mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(F::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = HomogeneousPolynomial { degree, terms: self.terms.clone() };
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(F::one()), |acc, _| acc.mul(self))
    }

    /// ∂/∂ξᵢ, zero-based `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = *m;
            d.0[i] -= 1;
            out.add_term(d, c.clone() * F::from_int(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> [Self; NVARS] {
        core::array::from_fn(|i| self.partial(i))
    }

    /// Derivative along the linear vector field `ξ ↦ M ξ`:
    /// `(V p)(ξ) = Σ_c (M ξ)_c ∂p/∂ξ_c`.
    pub fn apply_linear_field(&self, m: &[[F; NVARS]; NVARS]) -> Self {
        let mut out = Self::zero(self.degree);
        for c in 0..NVARS {
            let dp = self.partial(c);
            if dp.is_zero() {
                continue;
            }
            for b in 0..NVARS {
                if m[c][b].is_zero() {
                    continue;
                }
                for (mono, coeff) in &dp.terms {
                    out.add_term(mono.mul(&Monomial::var(b)), coeff.clone() * m[c][b].clone());
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64; NVARS]) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * m.eval(x)).sum()
    }

    /// Coefficients in the given monomial order; terms outside it are dropped.
    pub fn coefficients_in(&self, basis: &[Monomial]) -> Vec<F> {
        basis.iter().map(|m| self.coefficient(m)).collect()
    }

    pub fn map_coefficients<G: Field>(&self, f: impl Fn(&F) -> G) -> HomogeneousPolynomial<G> {
        HomogeneousPolynomial::from_terms(self.degree, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

impl<F: Field + fmt::Display> fmt::Display for HomogeneousPolynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let is_const = m.degree() == 0;
            if c.is_one() && !is_const {
                // coefficient elided
            } else {
                write!(f, "{}", c)?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Rational};

    type P = HomogeneousPolynomial<Rational>;

    #[test]
    fn monomial_counts() {
        // C(k + 7, 7)
        assert_eq!(monomials_of_degree(0).len(), 1);
        assert_eq!(monomials_of_degree(1).len(), 8);
        assert_eq!(monomials_of_degree(3).len(), 120);
        assert_eq!(monomials_of_degree(6).len(), 1716);
        assert!(monomials_of_degree(4).iter().all(|m| m.degree() == 4));
    }

    #[test]
    fn product_and_derivative() {
        let x = P::variable(0);
        let y = P::variable(1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.degree(), 2);
        let dx = p.partial(0);
        assert_eq!(dx, x.scale(&rat(2, 1)).add(&y.scale(&rat(2, 1))));
        let v = [1.5, -2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!((p.eval(&v) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rotation_field_annihilates_radius() {
        // V = x1 ∂2 − x2 ∂1
        let mut m: [[Rational; NVARS]; NVARS] = core::array::from_fn(|_| core::array::from_fn(|_| rat(0, 1)));
        m[1][0] = rat(1, 1);
        m[0][1] = rat(-1, 1);
        let r2 = P::variable(0).pow(2).add(&P::variable(1).pow(2));
        assert!(r2.apply_linear_field(&m).is_zero());
        assert!(!P::variable(0).apply_linear_field(&m).is_zero());
    }
}
