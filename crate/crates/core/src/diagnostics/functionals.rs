//! Time-weighted energy functionals.
//!
//! With `m = s − 2δ − 1`, `w₁(τ) = (1+τ)^{1+m+δ}` and `w₀(τ) = (1+τ)^{−δ}`,
//! and `‖f, g‖ = ‖f‖ + ‖g‖` for coupled norms, the viscous family is
//!
//! ```text
//! Γ₁ = sup ‖u,b‖²_{Ḣ^m}            + ∫ ‖u‖²_{Ḣ^{m+1}}
//! Γ₂ = sup w₁ [∂_n u_≠, ∂_n b_≠]²_{−1} + ∫ w₁ ([∂_n u_≠]²_0 + [∂_n b_≠]²_{−2})
//! Γ₃ = sup w₁ [u_=]²_{−1}           + ∫ w₁ [u_=]²_0
//! Γ₄ = sup w₀ ‖u,b‖²_{H^s}          + ∫ (w₀ ‖u‖²_{H^{s+1}} + w₀/(1+τ) ‖u,b‖²_{H^s})
//! ```
//!
//! and the resistive family `Ψ₁…Ψ₄` exchanges the roles of `u` and `b` in
//! the dissipative terms, with inhomogeneous norms in `Ψ₁`.

use serde::{Deserialize, Serialize};

use super::record::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::solver::{Dissipated, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalFamily {
    /// `Γ₁…Γ₄`, velocity dissipated.
    Gamma,
    /// `Ψ₁…Ψ₄`, magnetic field dissipated.
    Psi,
}

impl FunctionalFamily {
    pub fn for_regime(regime: Regime) -> Self {
        match regime.dissipated() {
            Dissipated::Velocity => FunctionalFamily::Gamma,
            Dissipated::Magnetic => FunctionalFamily::Psi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub family: FunctionalFamily,
    /// `Γ₁…Γ₄` (or `Ψ₁…Ψ₄`) at the last sample.
    pub components: [f64; 4],
    pub sup_parts: [f64; 4],
    pub integral_parts: [f64; 4],
    /// Sample times at which each sup is attained (first occurrence).
    pub sup_witness: [f64; 4],
    /// `Σ components`.
    pub total: f64,
}

/// Integrands of one functional at one sample: `(sup term, integral term)`.
fn terms(r: &DiagnosticsRecord, family: FunctionalFamily, m: f64, delta: f64) -> [(f64, f64); 4] {
    let one_t = 1.0 + r.t;
    let w1 = one_t.powf(1.0 + m + delta);
    let w0 = one_t.powf(-delta);
    let dn = (r.semi_dnu_neq_m1 + r.semi_dnb_neq_m1).powi(2);
    let hs = (r.hs_u + r.hs_b).powi(2);
    let fourth = (w0 * hs, w0 * r.hsp1_diss.powi(2) + w0 / one_t * hs);
    match family {
        FunctionalFamily::Gamma => [
            ((r.hm_u + r.hm_b).powi(2), r.hmp1_diss.powi(2)),
            (
                w1 * dn,
                w1 * (r.semi_dnu_neq_0.powi(2) + r.semi_dnb_neq_m2.powi(2)),
            ),
            (w1 * r.semi_ueq_m1.powi(2), w1 * r.semi_ueq_0.powi(2)),
            fourth,
        ],
        FunctionalFamily::Psi => [
            ((r.hm_inh_u + r.hm_inh_b).powi(2), r.hmp1_inh_diss.powi(2)),
            (
                w1 * dn,
                w1 * (r.semi_dnb_neq_0.powi(2) + r.semi_dnu_neq_m2.powi(2)),
            ),
            (w1 * r.semi_beq_m1.powi(2), w1 * r.semi_beq_0.powi(2)),
            fourth,
        ],
    }
}

/// Evaluates the functional family of `regime` on a time-ordered history;
/// sups are taken over samples and integrals by the trapezoidal rule.
pub fn assemble_functionals(
    history: &[DiagnosticsRecord],
    s: f64,
    delta: f64,
    regime: Regime,
) -> Result<FunctionalReport> {
    assemble_family(history, s, delta, FunctionalFamily::for_regime(regime))
}

pub fn assemble_family(
    history: &[DiagnosticsRecord],
    s: f64,
    delta: f64,
    family: FunctionalFamily,
) -> Result<FunctionalReport> {
    if history.is_empty() {
        return Err(Error::InsufficientSamples("empty history".into()));
    }
    if history.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(Error::InvalidArgument(
            "history times must be strictly increasing".into(),
        ));
    }
    let m = s - 2.0 * delta - 1.0;
    let mut sup_parts = [0.0f64; 4];
    let mut sup_witness = [history[0].t; 4];
    let mut integral_parts = [0.0f64; 4];
    let mut prev: Option<(f64, [(f64, f64); 4])> = None;
    for (i, r) in history.iter().enumerate() {
        let here = terms(r, family, m, delta);
        for j in 0..4 {
            if i == 0 || here[j].0 > sup_parts[j] {
                sup_parts[j] = here[j].0;
                sup_witness[j] = r.t;
            }
            if let Some((t0, before)) = &prev {
                integral_parts[j] += 0.5 * (r.t - t0) * (before[j].1 + here[j].1);
            }
        }
        prev = Some((r.t, here));
    }
    let components = [0, 1, 2, 3].map(|j| sup_parts[j] + integral_parts[j]);
    let total = components.iter().sum();
    Ok(FunctionalReport {
        family,
        components,
        sup_parts,
        integral_parts,
        sup_witness,
        total,
    })
}
