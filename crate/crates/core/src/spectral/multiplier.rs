//! Fourier multipliers.
//!
//! Every scalar symbol is defined to be `0` at `k = 0`, and the Leray symbol
//! is the zero matrix there. States are kept mean-zero, so this convention
//! never changes a physical answer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::lattice::WaveVector;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MultiplierSpec {
    /// `Λ^s`, symbol `|k|^s`.
    FractionalLaplacian { s: f64 },
    /// `(−Δ_J)^{1/2}`, symbol `(Σ_{i∈J} k_i²)^{1/2}`. Axes are zero-based.
    PartialLaplacianRoot { axes: Vec<usize> },
    /// `∂_n (−Δ)^{−1/2}`, symbol `i k_n / |k|`.
    RieszVertical,
    /// `∂_axis`, symbol `i k_axis`.
    Derivative { axis: usize },
    /// `I − |k|^{−2} k ⊗ k` on vector fields.
    Leray,
}

impl MultiplierSpec {
    /// Scalar symbol at `k`. `None` for the matrix-valued Leray symbol.
    pub fn symbol(&self, k: &WaveVector) -> Option<Complex64> {
        if matches!(self, MultiplierSpec::Leray) {
            return None;
        }
        if !k.is_nonzero() {
            return Some(ZERO);
        }
        Some(match self {
            MultiplierSpec::FractionalLaplacian { s } => {
                Complex64::new(fractional_power(k.norm_sq(), *s), 0.0)
            }
            MultiplierSpec::PartialLaplacianRoot { axes } => {
                let sq: i64 = axes.iter().map(|&a| k[a] * k[a]).sum();
                Complex64::new((sq as f64).sqrt(), 0.0)
            }
            MultiplierSpec::RieszVertical => Complex64::new(0.0, k.vertical() as f64 / k.norm()),
            MultiplierSpec::Derivative { axis } => Complex64::new(0.0, k[*axis] as f64),
            MultiplierSpec::Leray => unreachable!(),
        })
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            MultiplierSpec::PartialLaplacianRoot { axes } => {
                if axes.is_empty() || axes.iter().any(|&a| a >= dim) {
                    return Err(Error::InvalidArgument(format!(
                        "partial Laplacian axes {axes:?} must be a nonempty subset of 0..{dim}"
                    )));
                }
                let mut sorted = axes.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != axes.len() {
                    return Err(Error::InvalidArgument(format!(
                        "partial Laplacian axes {axes:?} contain duplicates"
                    )));
                }
            }
            MultiplierSpec::Derivative { axis } if *axis >= dim => {
                return Err(Error::InvalidArgument(format!(
                    "derivative axis {axis} out of range for dimension {dim}"
                )));
            }
            MultiplierSpec::FractionalLaplacian { s } if !s.is_finite() => {
                return Err(Error::InvalidArgument("non-finite exponent".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

/// `(|k|²)^{s/2}` with exact integer powers where possible.
#[inline]
pub(crate) fn fractional_power(norm_sq: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if s == 2.0 {
        norm_sq
    } else if s == 1.0 {
        norm_sq.sqrt()
    } else {
        norm_sq.powf(0.5 * s)
    }
}

/// Leray projection of one vector coefficient.
///
/// Coefficients whose divergence `k·v` is already at rounding level are
/// returned unchanged, so projecting an exactly solenoidal field is a no-op.
/// A second projection of a projected field agrees with the first up to
/// rounding of the original magnitude.
pub fn leray_project_mode(k: &WaveVector, v: &mut [Complex64]) {
    if !k.is_nonzero() {
        v.iter_mut().for_each(|z| *z = ZERO);
        return;
    }
    let mut div = ZERO;
    let mut scale = 0.0;
    for (j, z) in v.iter().enumerate() {
        let kj = k[j] as f64;
        div += z * kj;
        scale += kj.abs() * z.norm();
    }
    if div.norm() <= 16.0 * f64::EPSILON * k.dim() as f64 * scale {
        return;
    }
    let coef = div / k.norm_sq();
    for (j, z) in v.iter_mut().enumerate() {
        *z -= coef * k[j] as f64;
    }
}

/// Coefficient-wise application of a multiplier.
///
/// Negative-exponent fractional Laplacians require a mean-zero field, and the
/// Leray projection requires a vector field.
pub fn apply_multiplier(f: &SpectralField, m: &MultiplierSpec) -> Result<SpectralField> {
    m.validate(f.dim())?;
    if let MultiplierSpec::FractionalLaplacian { s } = m {
        if *s < 0.0 && !f.is_mean_zero() {
            return Err(Error::NonzeroMean {
                mean: f.mean_magnitude(),
                context: format!(
                    "Λ^{s} with negative exponent is only defined on mean-zero fields"
                ),
            });
        }
    }
    let lat = f.lattice();
    let table = lat.mode_table();
    let mut out = f.clone();

    if let MultiplierSpec::Leray = m {
        if !f.is_vector() {
            return Err(Error::ExpectedVector("Leray projection"));
        }
        let n = f.dim();
        let mut v = vec![ZERO; n];
        for (idx, k) in table.iter() {
            for (j, z) in v.iter_mut().enumerate() {
                *z = f.component(j)[idx];
            }
            leray_project_mode(k, &mut v);
            for (j, z) in v.iter().enumerate() {
                out.component_mut(j)[idx] = *z;
            }
        }
        return Ok(out);
    }

    for (idx, k) in table.iter() {
        let sym = m.symbol(k).expect("scalar symbol");
        for c in out.components_mut() {
            c[idx] *= sym;
        }
    }
    Ok(out)
}

/// Applies a chain of multipliers left to right (first element first).
pub fn apply_chain(f: &SpectralField, chain: &[MultiplierSpec]) -> Result<SpectralField> {
    let mut out = f.clone();
    for m in chain {
        out = apply_multiplier(&out, m)?;
    }
    Ok(out)
}
