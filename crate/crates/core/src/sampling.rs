//! Random states and group elements.
//!
//! Sample `i` of a stream is drawn from a ChaCha8 generator keyed by
//! `(seed, domain)` on stream `i`, so any index range can be generated
//! independently and in any order.

use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StandardUniform};

use crate::exact::SQRT_3;
use crate::linalg::Mat3;
use crate::su3::{exp_i_gell_mann, BlochVector, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ensemble {
    /// `GG† / tr(GG†)` with complex Gaussian `G`.
    HilbertSchmidt,
    /// `|v⟩⟨v|` with Haar-random unit `v`.
    PureHaar,
    /// Rank `rank` states; `equal_weights` gives the flat spectrum
    /// `(1/r, .., 1/r, 0, ..)` on Haar-random eigenvectors, otherwise
    /// `GG†/tr` with `G` of shape `3 × rank`.
    RankDeficient { rank: usize, equal_weights: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
    pub ensemble: Ensemble,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitaryGroup {
    U3,
    LocalU2,
}

const DOMAIN_DENSITY: u64 = 0x6465_6e73;
const DOMAIN_U3: u64 = 0x7533_0000;
const DOMAIN_LOCAL: u64 = 0x6c6f_6361;
const DOMAIN_BOX: u64 = 0x626f_7800;

/// Generator for sample `index` of the stream `(seed, domain)`.
pub fn sample_rng(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    StandardUniform.sample(rng)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, cols: usize) -> Mat3 {
    let mut g = Mat3::ZERO;
    for i in 0..3 {
        for j in 0..cols {
            g[(i, j)] = complex_normal(rng);
        }
    }
    g
}

fn normalized_gram(g: &Mat3) -> DensityMatrix {
    let w = *g * g.adjoint();
    let t = w.trace().re;
    let mut rho = w.scale_re(1.0 / t);
    // exact Hermiticity
    rho = (rho + rho.adjoint()).scale_re(0.5);
    DensityMatrix::new_unchecked(rho)
}

/// Sample `index` of the configured ensemble.
pub fn random_density(config: &SamplerConfig, index: u64) -> DensityMatrix {
    let mut rng = sample_rng(config.seed, DOMAIN_DENSITY, index);
    match config.ensemble {
        Ensemble::HilbertSchmidt => normalized_gram(&gaussian_matrix(&mut rng, 3)),
        Ensemble::PureHaar => normalized_gram(&gaussian_matrix(&mut rng, 1)),
        Ensemble::RankDeficient { rank, equal_weights: false } => {
            normalized_gram(&gaussian_matrix(&mut rng, rank.clamp(1, 3)))
        }
        Ensemble::RankDeficient { rank, equal_weights: true } => {
            let r = rank.clamp(1, 3);
            let u = haar_u3(&mut rng);
            let mut p = Mat3::ZERO;
            for i in 0..r {
                p[(i, i)] = Complex64::new(1.0 / r as f64, 0.0);
            }
            let rho = p.conjugate_by(&u);
            DensityMatrix::new_unchecked((rho + rho.adjoint()).scale_re(0.5))
        }
    }
}

/// All `config.count` samples in index order.
pub fn density_stream(config: &SamplerConfig) -> impl Iterator<Item = DensityMatrix> + '_ {
    (0..config.count as u64).map(move |i| random_density(config, i))
}

/// Modified Gram–Schmidt on the columns. The triangular factor has a positive
/// real diagonal, which is the normalization that makes QR of a Gaussian
/// matrix Haar.
fn orthonormalize(m: &Mat3) -> Mat3 {
    let mut q = *m;
    for j in 0..3 {
        for k in 0..j {
            let dot: Complex64 = (0..3).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
            for i in 0..3 {
                let v = q[(i, k)];
                q[(i, j)] -= dot * v;
            }
        }
        let norm = libm::sqrt((0..3).map(|i| q[(i, j)].norm_sqr()).sum::<f64>());
        for i in 0..3 {
            q[(i, j)] /= norm;
        }
    }
    q
}

pub const UNITARITY_TOL: f64 = 1e-12;

fn unitarity_defect(u: &Mat3) -> f64 {
    (u.adjoint() * *u - Mat3::IDENTITY).max_abs()
}

fn haar_u3(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut q = orthonormalize(&gaussian_matrix(rng, 3));
    if unitarity_defect(&q) > UNITARITY_TOL {
        q = orthonormalize(&q);
    }
    q
}

/// Euler angles of an element of the local SU(2)×U(1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta: f64,
}

/// `exp(iλ₁α) exp(iλ₂β) exp(iλ₃γ) exp(iθλ₈)`.
pub fn local_element(e: &EulerAngles) -> Mat3 {
    let m = |a, t| exp_i_gell_mann(a, t).expect("valid generator");
    m(1, e.alpha) * m(2, e.beta) * m(3, e.gamma) * m(8, e.theta)
}

/// Haar-distributed angles: α, γ uniform on `[0, 2π)`, θ uniform on its
/// period `[0, 2√3π)`, and β on `[−π/4, π/4]` with density `cos 2β`
/// (sampled as `β = asin(2u − 1)/2`).
pub fn random_euler_angles(rng: &mut ChaCha8Rng) -> EulerAngles {
    let alpha = 2.0 * PI * uniform(rng);
    let gamma = 2.0 * PI * uniform(rng);
    let beta = libm::asin(2.0 * uniform(rng) - 1.0) / 2.0;
    let theta = 2.0 * SQRT_3 * PI * uniform(rng);
    EulerAngles { alpha, beta, gamma, theta }
}

pub fn random_unitary(group: UnitaryGroup, seed: u64, index: u64) -> Mat3 {
    match group {
        UnitaryGroup::U3 => haar_u3(&mut sample_rng(seed, DOMAIN_U3, index)),
        UnitaryGroup::LocalU2 => local_element(&random_euler_angles(&mut sample_rng(seed, DOMAIN_LOCAL, index))),
    }
}

/// Bloch vector uniform on the box `[−1, 1]⁸` (not necessarily physical).
pub fn uniform_bloch(seed: u64, index: u64) -> BlochVector {
    let mut rng = sample_rng(seed, DOMAIN_BOX, index);
    BlochVector(core::array::from_fn(|_| 2.0 * uniform(&mut rng) - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{casimirs, trace_coordinates};
    use crate::su3::{bloch_of, eigenvalues};

    fn cfg(ensemble: Ensemble) -> SamplerConfig {
        SamplerConfig { seed: 7, count: 50, ensemble }
    }

    #[test]
    fn ensembles_are_states() {
        for e in [
            Ensemble::HilbertSchmidt,
            Ensemble::PureHaar,
            Ensemble::RankDeficient { rank: 2, equal_weights: false },
            Ensemble::RankDeficient { rank: 2, equal_weights: true },
        ] {
            for rho in density_stream(&cfg(e)) {
                let ev = eigenvalues(&rho);
                assert!(ev.iter().all(|&l| l >= -1e-14), "{e:?} {ev:?}");
                assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pure_and_balanced_spectra() {
        for rho in density_stream(&cfg(Ensemble::PureHaar)) {
            let c = casimirs(&bloch_of(&rho));
            assert!((c.c2 - 1.0).abs() < 1e-12 && (c.c3 - 1.0).abs() < 1e-12);
        }
        for rho in density_stream(&cfg(Ensemble::RankDeficient { rank: 2, equal_weights: true })) {
            let c = trace_coordinates(&rho).to_casimirs();
            assert!((c.c2 - 0.25).abs() < 1e-12 && (c.c3 + 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn unitaries() {
        for i in 0..20 {
            let u = random_unitary(UnitaryGroup::U3, 3, i);
            assert!(unitarity_defect(&u) <= 1e-12);
            let g = random_unitary(UnitaryGroup::LocalU2, 3, i);
            assert!(unitarity_defect(&g) <= 1e-12);
            // block form: g₃₃ = 1/det(upper block), zero off-block entries
            let upper = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
            assert!((g[(2, 2)] * upper - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            for k in 0..2 {
                assert!(g[(k, 2)].norm() < 1e-15 && g[(2, k)].norm() < 1e-15);
            }
        }
    }

    #[test]
    fn local_block_is_haar() {
        // |u₁₁|² is uniform on [0, 1] under Haar measure on SU(2)
        let n = 20_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for i in 0..n {
            let x = random_unitary(UnitaryGroup::LocalU2, 11, i)[(0, 0)].norm_sqr();
            m1 += x;
            m2 += x * x;
        }
        assert!((m1 / n as f64 - 0.5).abs() < 0.01);
        assert!((m2 / n as f64 - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn streams_are_indexable() {
        let c = cfg(Ensemble::HilbertSchmidt);
        let all: alloc::vec::Vec<_> = density_stream(&c).collect();
        assert_eq!(random_density(&c, 17), all[17]);
        assert_ne!(random_density(&c, 17), all[18]);
        let other = SamplerConfig { seed: 8, ..c };
        assert_ne!(random_density(&other, 17), all[17]);
    }
}
