//! Seeded random states and rotations for property sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, RMatrix};
use crate::uncertainty::DensityMatrix;

/// Generator for sample `i` of a sweep seeded with `seed`.
pub fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(i))
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in `C^d`.
pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    DensityMatrix::pure(&random_pure_vector(d, rng)).expect("nonzero Gaussian vector")
}

/// Hilbert–Schmidt random density matrix, `GG†/Tr(GG†)` with `G` Ginibre.
pub fn random_density_hs<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let rho = CMatrix::from_inner(m.map(|z| z / tr));
    DensityMatrix::new(rho).expect("Ginibre product is a state")
}

/// Orthogonal `d × d` matrix fixing `n* = (1,…,1)/√d`, Haar-distributed on
/// the complement of `n*`.
pub fn random_rotation_fixing_axis<R: Rng + ?Sized>(d: usize, rng: &mut R) -> RMatrix {
    // orthonormal frame with n* as first column
    let mut seed = RMatrix::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    seed.column_mut(0).fill(1.0 / (d as f64).sqrt());
    let frame = seed.qr().q();
    let frame = if frame[(0, 0)] < 0.0 { -frame } else { frame };

    let m = d - 1;
    let g = RMatrix::from_fn(m, m, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut r_q, r) = (qr.q(), qr.r());
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            r_q.column_mut(j).neg_mut();
        }
    }
    let mut block = RMatrix::identity(d, d);
    block.view_mut((1, 1), (m, m)).copy_from(&r_q);
    &frame * block * frame.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_are_reproducible() {
        let a = random_pure_vector(3, &mut sample_rng(7, 2));
        let b = random_pure_vector(3, &mut sample_rng(7, 2));
        let c = random_pure_vector(3, &mut sample_rng(8, 1));
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn hs_states_are_valid() {
        let mut rng = sample_rng(1, 0);
        for d in 2..=5 {
            let rho = random_density_hs(d, &mut rng);
            assert!(rho.purity() <= 1.0 + 1e-12 && rho.purity() >= 1.0 / d as f64 - 1e-12);
        }
    }

    #[test]
    fn rotation_is_orthogonal_and_fixes_axis() {
        let mut rng = sample_rng(3, 0);
        for d in 2..=5 {
            let o = random_rotation_fixing_axis(d, &mut rng);
            let n = RMatrix::from_element(d, 1, 1.0 / (d as f64).sqrt());
            assert!((&o * &n - &n).amax() < 1e-12);
            assert!((o.transpose() * &o - RMatrix::identity(d, d)).amax() < 1e-12);
        }
    }
}
