//! Random band-limited, mean-zero, real fields.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use super::field::SpectralField;
use super::lattice::{Lattice, WaveVector};

fn is_positive_half(k: &WaveVector) -> bool {
    k.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Coefficients `|f̂(k)| = |k|^{−slope}` with independent uniform phases on
/// every mode with `0 < max_i |k_i| ≤ band`; `f̂(−k) = conj f̂(k)` exactly.
pub fn random_field<R: Rng + ?Sized>(
    lattice: Lattice,
    component_count: usize,
    band: i64,
    slope: f64,
    rng: &mut R,
) -> SpectralField {
    let mut f = SpectralField::zeros(lattice, component_count);
    for (idx, k) in lattice.modes() {
        if !is_positive_half(&k) || k.max_abs() > band {
            continue;
        }
        let amp = k.norm_sq().powf(-0.5 * slope);
        let conj_idx = lattice.conjugate_index(idx);
        for c in 0..component_count {
            let z = Complex64::from_polar(amp, rng.gen::<f64>() * TAU);
            f.component_mut(c)[idx] = z;
            f.component_mut(c)[conj_idx] = z.conj();
        }
    }
    f
}

/// Uniform random coefficients in the unit square on every mode with
/// `0 < max_i |k_i| ≤ band`, Hermitian-symmetrised.
pub fn random_uniform_field<R: Rng + ?Sized>(
    lattice: Lattice,
    component_count: usize,
    band: i64,
    rng: &mut R,
) -> SpectralField {
    let mut f = SpectralField::zeros(lattice, component_count);
    for (idx, k) in lattice.modes() {
        if !is_positive_half(&k) || k.max_abs() > band {
            continue;
        }
        let conj_idx = lattice.conjugate_index(idx);
        for c in 0..component_count {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.component_mut(c)[idx] = z;
            f.component_mut(c)[conj_idx] = z.conj();
        }
    }
    f
}
