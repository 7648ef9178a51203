//! Small dense complex matrices and a Jacobi eigensolver for Hermitian input.

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 3×3 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[Complex64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[ZERO; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]);

    pub fn from_real(m: [[f64; 3]; 3]) -> Self {
        let mut out = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = Complex64::new(m[i][j], 0.0);
            }
        }
        out
    }

    pub fn from_parts(re: [[f64; 3]; 3], im: [[f64; 3]; 3]) -> Self {
        let mut out = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = Complex64::new(re[i][j], im[i][j]);
            }
        }
        out
    }

    pub fn diag(d: [Complex64; 3]) -> Self {
        let mut out = Self::ZERO;
        for i in 0..3 {
            out.0[i][i] = d[i];
        }
        out
    }

    pub fn re(&self) -> [[f64; 3]; 3] {
        self.0.map(|row| row.map(|z| z.re))
    }

    pub fn im(&self) -> [[f64; 3]; 3] {
        self.0.map(|row| row.map(|z| z.im))
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Mat3(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Mat3(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flat_map(|row| row.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermitian_deviation(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    /// `g * self * g^dagger`.
    pub fn conjugate_by(&self, g: &Mat3) -> Self {
        *g * *self * g.adjoint()
    }

    pub fn commutator(&self, other: &Mat3) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Mat3) -> Self {
        *self * *other + *other * *self
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = ZERO;
                for k in 0..3 {
                    s += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = s;
            }
        }
        out
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        Mat3(self.0.map(|row| row.map(|z| -z)))
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian N×N matrix by cyclic complex Jacobi rotations,
/// sorted descending. Only the upper triangle and the real diagonal are trusted.
pub fn hermitian_eigenvalues<const N: usize>(m: &[[Complex64; N]; N]) -> [f64; N] {
    let mut a = *m;
    for i in 0..N {
        a[i][i] = Complex64::new(a[i][i].re, 0.0);
        for j in 0..i {
            a[i][j] = a[j][i].conj();
        }
    }
    let scale: f64 = a.iter().flat_map(|r| r.iter()).map(|z| z.norm_sqr()).sum::<f64>();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N).flat_map(|p| ((p + 1)..N).map(move |q| (p, q))).map(|(p, q)| a[p][q].norm_sqr()).sum();
        if off <= 1e-34 * scale || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, p, q);
            }
        }
    }
    let mut ev = [0.0; N];
    for i in 0..N {
        ev[i] = a[i][i].re;
    }
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// One Jacobi rotation annihilating `a[p][q]`: `a <- U^dagger a U` with
/// `U = D R`, where `D` makes the pivot real and `R` is the real rotation.
fn rotate<const N: usize>(a: &mut [[Complex64; N]; N], p: usize, q: usize) {
    let apq = a[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let theta = (a[q][q].re - a[p][p].re) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;
    let ph = phase.conj();
    // Columns p, q of U.
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = ph * (-s);
    let uqq = ph * c;

    // a <- a U (only columns p, q change)
    for row in a.iter_mut() {
        let xp = row[p];
        let xq = row[q];
        row[p] = xp * upp + xq * uqp;
        row[q] = xp * upq + xq * uqq;
    }
    // a <- U^dagger a (only rows p, q change)
    for k in 0..N {
        let xp = a[p][k];
        let xq = a[q][k];
        a[p][k] = upp.conj() * xp + uqp.conj() * xq;
        a[q][k] = upq.conj() * xp + uqq.conj() * xq;
    }
    a[p][q] = ZERO;
    a[q][p] = ZERO;
    a[p][p] = Complex64::new(a[p][p].re, 0.0);
    a[q][q] = Complex64::new(a[q][q].re, 0.0);
}

/// Eigenvalues of a real symmetric N×N matrix, descending.
pub fn symmetric_eigenvalues<const N: usize>(m: &[[f64; N]; N]) -> [f64; N] {
    let c = m.map(|row| row.map(|x| Complex64::new(x, 0.0)));
    hermitian_eigenvalues(&c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_sorted_descending() {
        let m = Mat3::diag([0.1.into(), 0.7.into(), 0.2.into()]);
        assert_eq!(hermitian_eigenvalues(&m.0), [0.7, 0.2, 0.1]);
    }

    #[test]
    fn pauli_y_block() {
        let i = Complex64::new(0.0, 1.0);
        let m = Mat3([[ZERO, -i, ZERO], [i, ZERO, ZERO], [ZERO, ZERO, ZERO]]);
        let ev = hermitian_eigenvalues(&m.0);
        assert!((ev[0] - 1.0).abs() < 1e-15);
        assert!(ev[1].abs() < 1e-15);
        assert!((ev[2] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_4x4_matches_trace_and_det() {
        let m = [[4.0, 1.0, 0.5, 0.0], [1.0, 3.0, 0.2, 0.1], [0.5, 0.2, 2.0, 0.3], [0.0, 0.1, 0.3, 1.0]];
        let ev = symmetric_eigenvalues(&m);
        let tr: f64 = ev.iter().sum();
        assert!((tr - 10.0).abs() < 1e-13);
        assert!(ev.windows(2).all(|w| w[0] >= w[1]));
    }
}
