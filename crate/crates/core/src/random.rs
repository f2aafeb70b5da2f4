//! Seeded generators for random test instances.

use crate::classical::ClassicalWeight;
use crate::hermcore::{CMat, HermitianOperator, C64};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cnormal(r: &mut Rng64) -> C64 {
    let re: f64 = StandardNormal.sample(r);
    let im: f64 = StandardNormal.sample(r);
    C64::new(re, im)
}

/// GUE-style Hermitian matrix `(G + G†)/2` with standard complex Gaussian `G`.
pub fn gue(dim: usize, r: &mut Rng64) -> HermitianOperator {
    let g = CMat::from_fn(dim, dim, |_, _| cnormal(r));
    HermitianOperator::hermitize(&g + g.adjoint())
}

/// Real symmetric variant, for instances that should stay real.
pub fn goe(dim: usize, r: &mut Rng64) -> HermitianOperator {
    let g = CMat::from_fn(dim, dim, |_, _| C64::new(StandardNormal.sample(r), 0.0));
    HermitianOperator::hermitize(&g + g.adjoint())
}

/// Positive definite density: GUE, shifted so the smallest eigenvalue is a random
/// fraction in `[0.02, 1]` of the spread, then trace-normalized.
pub fn random_pd_density(dim: usize, r: &mut Rng64) -> HermitianOperator {
    let h = gue(dim, r);
    let e = h.eig().expect("eigen-decomposition of a small GUE sample");
    let lmin = e.values[0];
    let spread = (e.values[dim - 1] - lmin).max(1e-3);
    let floor = spread * r.random_range(0.02..1.0);
    let shifted = h.add(&HermitianOperator::identity(dim).scale(floor - lmin));
    let t = shifted.trace();
    shifted.scale(1.0 / t)
}

/// Haar-random unit vector.
pub fn random_unit_vector(dim: usize, r: &mut Rng64) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| cnormal(r));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Haar-random pure state `|ψ⟩⟨ψ|`.
pub fn random_pure_state(dim: usize, r: &mut Rng64) -> HermitianOperator {
    HermitianOperator::outer(&random_unit_vector(dim, r))
}

/// Haar-random unitary via QR with phase correction.
pub fn random_unitary(dim: usize, r: &mut Rng64) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| cnormal(r));
    let qr = g.qr();
    let (mut q, rr) = (qr.q(), qr.r());
    for k in 0..dim {
        let d = rr[(k, k)];
        let ph = if d.norm() > 0.0 { d / C64::new(d.norm(), 0.0) } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= ph;
        }
    }
    q
}

/// Flat-Dirichlet probability vector; with `floor > 0` every entry is at least `floor`.
pub fn random_probability(n: usize, floor: f64, r: &mut Rng64) -> ClassicalWeight<f64> {
    let e: Vec<f64> = (0..n).map(|_| Exp1.sample(r)).collect();
    let s: f64 = e.iter().sum();
    let w: Vec<f64> = e.iter().map(|x| floor + (1.0 - floor * n as f64) * x / s).collect();
    ClassicalWeight::normalize(w).expect("positive weights")
}
