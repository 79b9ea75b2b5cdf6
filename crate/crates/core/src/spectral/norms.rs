//! Sobolev norms, vertical-class seminorms and the `S_≠ / S_=` split.
//!
//! All sums run over retained lattice modes and use pairwise summation, so
//! the result does not depend on how the mode set is partitioned across
//! workers beyond the fixed reduction tree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::multiplier::fractional_power;
use crate::error::{Error, Result};

/// Which weighted coefficient sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// `[f_≠]_l = (Σ_{S_≠} |k|^{2l} |f̂|²)^{1/2}`
    Neq,
    /// `[f_=]_l = (Σ_{S_=} |k|^{2l} |f̂|²)^{1/2}`
    Eq,
    /// `‖f‖_{Ḣ^l} = (Σ_{k≠0} |k|^{2l} |f̂|²)^{1/2}`
    FullHomogeneous,
    /// `‖f‖_{H^l} = (Σ_k (1+|k|²)^l |f̂|²)^{1/2}`
    FullInhomogeneous,
    /// `{f}_l = Σ_{k≠0} |k|^l |f̂|`
    AbsSum,
}

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Evaluates a norm or seminorm of order `l`. Vector fields add their
/// component contributions before the square root.
pub fn seminorm(f: &SpectralField, l: f64, which: NormKind) -> Result<f64> {
    let homogeneous = !matches!(which, NormKind::FullInhomogeneous);
    if homogeneous && l < 0.0 && !f.is_mean_zero() {
        return Err(Error::NonzeroMean {
            mean: f.mean_magnitude(),
            context: format!("negative-order homogeneous norm (l = {l}) needs a mean-zero field"),
        });
    }
    Ok(seminorm_unchecked(f, l, which))
}

/// Same as [`seminorm`] without the mean-zero precondition; the `k = 0`
/// mode is simply excluded from homogeneous sums.
pub(crate) fn seminorm_unchecked(f: &SpectralField, l: f64, which: NormKind) -> f64 {
    let lat = f.lattice();
    let mut terms = Vec::with_capacity(lat.len() * f.component_count());
    for (idx, k) in lat.modes() {
        let include = match which {
            NormKind::Neq => k.is_vertical_nonzero(),
            NormKind::Eq => k.in_zero_vertical_class(),
            NormKind::FullHomogeneous | NormKind::AbsSum => k.is_nonzero(),
            NormKind::FullInhomogeneous => true,
        };
        if !include {
            continue;
        }
        let nsq = k.norm_sq();
        let weight = match which {
            NormKind::FullInhomogeneous => {
                if l == 0.0 {
                    1.0
                } else {
                    (1.0 + nsq).powf(l)
                }
            }
            NormKind::AbsSum => fractional_power(nsq, l),
            _ => fractional_power(nsq, 2.0 * l),
        };
        for c in f.components() {
            let z = c[idx];
            let t = match which {
                NormKind::AbsSum => weight * z.norm(),
                _ => weight * z.norm_sqr(),
            };
            terms.push(t);
        }
    }
    let total = pairwise_sum(&terms);
    match which {
        NormKind::AbsSum => total,
        _ => total.sqrt(),
    }
}

/// `Σ_k w(k) ⟨f̂(k), ĝ(k)⟩` over nonzero modes, real part; the coefficient
/// space inner product used by the energy identities.
pub fn weighted_inner(
    f: &SpectralField,
    g: &SpectralField,
    weight: impl Fn(&super::lattice::WaveVector) -> f64,
) -> Result<f64> {
    f.ensure_same_lattice(g)?;
    if f.component_count() != g.component_count() {
        return Err(Error::LatticeMismatch("component count differs".into()));
    }
    let mut terms = Vec::new();
    for (idx, k) in f.lattice().modes() {
        if !k.is_nonzero() {
            continue;
        }
        let w = weight(&k);
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in f.components().iter().zip(g.components()) {
            acc += a[idx] * b[idx].conj();
        }
        terms.push(w * acc.re);
    }
    Ok(pairwise_sum(&terms))
}

/// Splits `f` into its `S_≠` and `S_=` parts; the `k = 0` coefficient is
/// dropped from both.
pub fn mode_split(f: &SpectralField) -> (SpectralField, SpectralField) {
    let lat = f.lattice();
    let mut neq = SpectralField::zeros(lat, f.component_count());
    let mut eq = SpectralField::zeros(lat, f.component_count());
    for (idx, k) in lat.modes() {
        let target = if k.is_vertical_nonzero() {
            &mut neq
        } else if k.is_nonzero() {
            &mut eq
        } else {
            continue;
        };
        for c in 0..f.component_count() {
            target.component_mut(c)[idx] = f.component(c)[idx];
        }
    }
    (neq, eq)
}
