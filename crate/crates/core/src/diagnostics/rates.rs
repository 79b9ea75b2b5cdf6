//! Theorem exponents and log-log decay fits.

use serde::{Deserialize, Serialize};

use super::record::DiagnosticsRecord;
use crate::error::{Error, Result};

/// Samples below this value are excluded from fits.
pub const FIT_FLOOR: f64 = 1e-14;

/// Minimum number of usable samples in a fit window.
pub const MIN_FIT_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateIndex {
    /// `‖u,b‖_{H^s} ≲ ε(1+t)^{δ/2}`
    Growth,
    /// `‖u‖_{H^l}`, `l ∈ [−1, s]`
    UDecay { l: f64 },
    /// `[∂_n(u,b)_≠]_k`, `k ∈ [−1, s−1]`
    VerticalDecay { k: f64 },
}

/// Exponent `γ` in the bound `quantity ≲ ε(1+t)^γ`.
pub fn theorem_rate(s: f64, delta: f64, index: RateIndex) -> Result<f64> {
    match index {
        RateIndex::Growth => Ok(delta / 2.0),
        RateIndex::UDecay { l } => {
            if !(-1.0..=s).contains(&l) {
                return Err(Error::InvalidArgument(format!(
                    "l = {l} outside [-1, s = {s}]"
                )));
            }
            Ok(-s * (s - l) / (2.0 * (s + 1.0)) + delta / 2.0)
        }
        RateIndex::VerticalDecay { k } => {
            if !(-1.0..=s - 1.0).contains(&k) {
                return Err(Error::InvalidArgument(format!(
                    "k = {k} outside [-1, s - 1 = {}]",
                    s - 1.0
                )));
            }
            Ok(-s * (s - 1.0 - k) / (2.0 * s) + delta / 2.0)
        }
    }
}

/// Scalar series extracted from a history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `‖u‖_{L²}`
    L2U,
    /// `‖b‖_{L²}`
    L2B,
    /// `‖u‖_{H^s} + ‖b‖_{H^s}`
    HsSum,
    /// `‖u‖_{Ḣ^m} + ‖b‖_{Ḣ^m}`
    HmSum,
    /// `[∂_n u_≠]_{−1} + [∂_n b_≠]_{−1}`
    VerticalNeqM1,
    /// `[u_=]_{−1}`
    UEqM1,
    /// `[b_=]_{−1}`
    BEqM1,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::L2U => "l2_u",
            Quantity::L2B => "l2_b",
            Quantity::HsSum => "hs_u+hs_b",
            Quantity::HmSum => "hm_u+hm_b",
            Quantity::VerticalNeqM1 => "semi_dnu_neq_m1+semi_dnb_neq_m1",
            Quantity::UEqM1 => "semi_ueq_m1",
            Quantity::BEqM1 => "semi_beq_m1",
        }
    }

    pub fn value(&self, r: &DiagnosticsRecord) -> f64 {
        match self {
            Quantity::L2U => r.l2_u,
            Quantity::L2B => r.l2_b,
            Quantity::HsSum => r.hs_u + r.hs_b,
            Quantity::HmSum => r.hm_u + r.hm_b,
            Quantity::VerticalNeqM1 => r.semi_dnu_neq_m1 + r.semi_dnb_neq_m1,
            Quantity::UEqM1 => r.semi_ueq_m1,
            Quantity::BEqM1 => r.semi_beq_m1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub quantity: String,
    pub window: (f64, f64),
    pub samples: usize,
    /// Least-squares slope of `ln value` against `ln(1+t)`.
    pub slope: f64,
    pub theorem_exponent: f64,
    /// `C` in `value ≈ C (1+t)^slope`.
    pub prefactor: f64,
    /// `max value/(1+t)^{theorem exponent}` over the window.
    pub uniform_quotient: f64,
    /// Slope of the quotient in log-log coordinates, `slope − exponent`.
    pub quotient_slope: f64,
}

/// Fits `quantity` on the samples with `t` in `window`.
pub fn fit_decay(
    history: &[DiagnosticsRecord],
    quantity: Quantity,
    window: (f64, f64),
    theorem_exponent: f64,
) -> Result<RateFit> {
    let times: Vec<f64> = history.iter().map(|r| r.t).collect();
    let values: Vec<f64> = history.iter().map(|r| quantity.value(r)).collect();
    fit_series(quantity.name(), &times, &values, window, theorem_exponent)
}

pub fn fit_series(
    name: &str,
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
    theorem_exponent: f64,
) -> Result<RateFit> {
    if !(window.0 < window.1) {
        return Err(Error::InvalidArgument(format!(
            "fit window [{}, {}] is empty",
            window.0, window.1
        )));
    }
    let points: Vec<(f64, f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= window.0 && **t <= window.1 && **v >= FIT_FLOOR && v.is_finite())
        .map(|(&t, &v)| ((1.0 + t).ln(), v.ln(), v / (1.0 + t).powf(theorem_exponent)))
        .collect();
    if points.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples(format!(
            "{name}: {} usable samples in [{}, {}], need {MIN_FIT_SAMPLES}",
            points.len(),
            window.0,
            window.1
        )));
    }
    let count = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / count;
    let my = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientSamples(format!(
            "{name}: all samples at one time"
        )));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Ok(RateFit {
        quantity: name.to_string(),
        window,
        samples: points.len(),
        slope,
        theorem_exponent,
        prefactor: intercept.exp(),
        uniform_quotient: points.iter().map(|p| p.2).fold(0.0, f64::max),
        quotient_slope: slope - theorem_exponent,
    })
}
