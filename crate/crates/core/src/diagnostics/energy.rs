use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::record::DiagnosticsRecord;
use crate::solver::MhdState;
use crate::spectral::multiplier::fractional_power;
use crate::spectral::{pairwise_sum, SpectralField, Transformer};

/// The quantities of the basic `Ḣ^λ` energy estimate for one state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LemmaEnergyTerms {
    pub lambda: f64,
    /// `‖Λ^{λ+1} u‖²`
    pub dissipation_u: f64,
    /// `‖Λ^{λ+1} b‖²`
    pub dissipation_b: f64,
    /// `max_x max_{i,j} |∂_j u_i|`
    pub grad_u_sup: f64,
    pub grad_b_sup: f64,
    /// `‖Λ^λ u‖`
    pub lambda_norm_u: f64,
    pub lambda_norm_b: f64,
    /// `⟨Λ^λ ∂_n b, Λ^λ u⟩ = Σ Re(i k_n |k|^{2λ} b̂·conj û)`
    pub i5: f64,
    /// `⟨Λ^λ ∂_n u, Λ^λ b⟩`
    pub i6: f64,
}

fn gradient_sup(f: &SpectralField, transformer: &Transformer) -> f64 {
    let lat = f.lattice();
    let table = lat.mode_table();
    let mut worst = 0.0f64;
    for comp in f.components() {
        for axis in 0..lat.dim() {
            let derivative: Vec<Complex64> = comp
                .iter()
                .enumerate()
                .map(|(i, z)| match table.get(i) {
                    Some(k) => Complex64::new(0.0, k[axis] as f64) * z,
                    None => Complex64::default(),
                })
                .collect();
            let grid = transformer.to_grid(&derivative);
            worst = grid.iter().map(|z| z.re.abs()).fold(worst, f64::max);
        }
    }
    worst
}

pub fn lemma_energy_terms(state: &MhdState, lambda: f64) -> LemmaEnergyTerms {
    let lat = state.lattice();
    let mut diss_u = Vec::new();
    let mut diss_b = Vec::new();
    let mut norm_u = Vec::new();
    let mut norm_b = Vec::new();
    let mut i5 = Vec::new();
    let mut i6 = Vec::new();
    for (idx, k) in lat.modes() {
        if !k.is_nonzero() {
            continue;
        }
        let k2 = k.norm_sq();
        let w = fractional_power(k2, 2.0 * lambda);
        let kn = k.vertical() as f64;
        for c in 0..state.dim() {
            let u = state.u.component(c)[idx];
            let b = state.b.component(c)[idx];
            diss_u.push(w * k2 * u.norm_sqr());
            diss_b.push(w * k2 * b.norm_sqr());
            norm_u.push(w * u.norm_sqr());
            norm_b.push(w * b.norm_sqr());
            i5.push((Complex64::new(0.0, kn * w) * b * u.conj()).re);
            i6.push((Complex64::new(0.0, kn * w) * u * b.conj()).re);
        }
    }
    let transformer = Transformer::exact(lat);
    LemmaEnergyTerms {
        lambda,
        dissipation_u: pairwise_sum(&diss_u),
        dissipation_b: pairwise_sum(&diss_b),
        grad_u_sup: gradient_sup(&state.u, &transformer),
        grad_b_sup: gradient_sup(&state.b, &transformer),
        lambda_norm_u: pairwise_sum(&norm_u).sqrt(),
        lambda_norm_b: pairwise_sum(&norm_b).sqrt(),
        i5: pairwise_sum(&i5),
        i6: pairwise_sum(&i6),
    }
}

/// `E(0) − E(T) − ∫₀^T D dt` for a history sampled at every step, with the
/// dissipation `D` integrated by the trapezoidal rule.
pub fn energy_balance_residual(history: &[DiagnosticsRecord]) -> f64 {
    let (Some(first), Some(last)) = (history.first(), history.last()) else {
        return 0.0;
    };
    let integral: Vec<f64> = history
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].enstrophy + w[1].enstrophy))
        .collect();
    first.energy - last.energy - pairwise_sum(&integral)
}
