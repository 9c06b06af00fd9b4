//! Seeded random Hermitian matrices and curves for property sweeps.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::projective::{Complex, HermitianMatrix, ProjectiveCycle, RationalCurveChart};
use crate::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_entry(rng: &mut impl Rng) -> Complex {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Hermitian matrix with entries uniform in the unit square, rescaled to
/// spectral norm one.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let raw = DMatrix::from_fn(dim, dim, |_, _| complex_entry(rng));
    let h = HermitianMatrix::symmetrized(raw);
    let ev = h.eigenvalues();
    let spectral = ev[0].abs().max(ev[ev.len() - 1].abs());
    HermitianMatrix::symmetrized(h.into_entries() / Complex::new(spectral, 0.0))
}

/// Random traceless Hermitian matrix of spectral norm at most one.
pub fn random_traceless_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let h = random_hermitian(dim, rng).traceless_part();
    let ev = h.eigenvalues();
    let spectral = ev[0].abs().max(ev[ev.len() - 1].abs());
    HermitianMatrix::symmetrized(h.into_entries() / Complex::new(spectral, 0.0))
}

/// Generic rational curve of the given degree spanning `CP^ambient_dim`.
pub fn random_curve(
    degree: usize,
    ambient_dim: usize,
    rng: &mut impl Rng,
) -> Result<ProjectiveCycle> {
    let coeffs = DMatrix::from_fn(ambient_dim + 1, degree + 1, |_, _| complex_entry(rng));
    let mut cycle = ProjectiveCycle::empty(ambient_dim);
    cycle.add_curve(RationalCurveChart::new(coeffs)?, 1)?;
    Ok(cycle)
}
