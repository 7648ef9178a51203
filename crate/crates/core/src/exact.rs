//! Exact arithmetic: rationals, the quadratic field Q(√3), and Gauss–Jordan
//! elimination over any field.
//!
//! The Gell-Mann basis lives in Q(√3)(i): λ₈ carries a 1/√3 and the cubic
//! Casimir mixes rational and √3 coefficients. Everything exact in this crate
//! is therefore carried out over [`QSqrt3`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Minimal field interface used by the exact linear algebra.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn to_f64(&self) -> f64;
    fn from_int(n: i64) -> Self;
}

impl Field for Rational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_int(n: i64) -> Self {
        rat(n, 1)
    }
}

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// `a + b·√3` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QSqrt3 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt3 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt3 { a, b: Rational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat(n, 1))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::rational(rat(num, den))
    }

    /// `(num/den)·√3`.
    pub fn sqrt3_frac(num: i64, den: i64) -> Self {
        QSqrt3 { a: Rational::zero(), b: rat(num, den) }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn conj(&self) -> Self {
        QSqrt3 { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 3b²`, nonzero for every nonzero element since √3 ∉ Q.
    fn norm(&self) -> Rational {
        &self.a * &self.a - rat(3, 1) * &self.b * &self.b
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        QSqrt3 { a: Rational::zero(), b: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        Self::int(1)
    }
}

impl Add for QSqrt3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        QSqrt3 { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for QSqrt3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        QSqrt3 { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Mul for QSqrt3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.a * &rhs.a + rat(3, 1) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QSqrt3 { a, b }
    }
}

impl Div for QSqrt3 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero in Q(sqrt 3)");
        let n = rhs.norm();
        let num = self * rhs.conj();
        QSqrt3 { a: num.a / &n, b: num.b / n }
    }
}

impl Neg for QSqrt3 {
    type Output = Self;
    fn neg(self) -> Self {
        QSqrt3 { a: -self.a, b: -self.b }
    }
}

impl Field for QSqrt3 {
    fn to_f64(&self) -> f64 {
        Field::to_f64(&self.a) + SQRT_3 * Field::to_f64(&self.b)
    }
    fn from_int(n: i64) -> Self {
        Self::int(n)
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write_sqrt3(f, &self.b),
            (false, false) => {
                write!(f, "({}", self.a)?;
                if self.b.is_negative() {
                    f.write_str(" - ")?;
                    write_sqrt3(f, &-self.b.clone())?;
                } else {
                    f.write_str(" + ")?;
                    write_sqrt3(f, &self.b)?;
                }
                f.write_str(")")
            }
        }
    }
}

fn write_sqrt3(f: &mut fmt::Formatter<'_>, b: &Rational) -> fmt::Result {
    if b.is_one() {
        f.write_str("sqrt(3)")
    } else if (-b.clone()).is_one() {
        f.write_str("-sqrt(3)")
    } else if b.is_integer() {
        write!(f, "{}*sqrt(3)", b)
    } else {
        write!(f, "({})*sqrt(3)", b)
    }
}

/// Reduced row-echelon form in place; returns the pivot column of each pivot row.
pub fn row_reduce<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = F::one() / rows[r][col].clone();
        let nonzero: Vec<usize> = (col..ncols).filter(|&j| !rows[r][j].is_zero()).collect();
        for &j in &nonzero {
            rows[r][j] = rows[r][j].clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for &j in &nonzero {
                let delta = factor.clone() * rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - delta;
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for the matrix given by `rows` (each of length `ncols`).
pub fn nullspace<F: Field>(mut rows: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let pivots = row_reduce(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); ncols];
            v[fc] = F::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of `A x = b`; `columns[j]` is column `j` of `A`.
pub fn solve_unique<F: Field>(columns: &[Vec<F>], rhs: &[F], context: &'static str) -> Result<Vec<F>> {
    let nrows = rhs.len();
    let ncols = columns.len();
    let mut rows: Vec<Vec<F>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<F> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut rows, ncols + 1);
    if pivots.contains(&ncols) {
        return Err(Error::InconsistentSystem { context });
    }
    if pivots.len() < ncols {
        return Err(Error::Underdetermined { context, nullity: ncols - pivots.len() });
    }
    Ok(rows.into_iter().map(|row| row[ncols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qsqrt3_arithmetic() {
        let s = QSqrt3::sqrt3_frac(1, 1);
        assert_eq!(s.clone() * s.clone(), QSqrt3::int(3));
        let x = QSqrt3::new(rat(1, 2), rat(-2, 3));
        let y = QSqrt3::new(rat(5, 1), rat(1, 7));
        assert_eq!((x.clone() * y.clone()) / y.clone(), x);
        assert!((x.to_f64() - (0.5 - 2.0 / 3.0 * SQRT_3)).abs() < 1e-15);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![vec![rat(1, 1), rat(2, 1), rat(3, 1)], vec![rat(2, 1), rat(4, 1), rat(6, 1)]];
        let ns = nullspace(rows.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: Rational = rows[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_reports_inconsistency() {
        let cols = vec![vec![QSqrt3::int(1), QSqrt3::int(1)]];
        let err = solve_unique(&cols, &[QSqrt3::int(1), QSqrt3::int(2)], "test").unwrap_err();
        assert!(matches!(err, Error::InconsistentSystem { .. }));
        let x = solve_unique(&cols, &[QSqrt3::int(3), QSqrt3::int(3)], "test").unwrap();
        assert_eq!(x, vec![QSqrt3::int(3)]);
    }
}
