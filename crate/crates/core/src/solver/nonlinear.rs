//! Quadratic terms `N_u = P(b·∇b − u·∇u)` and `N_b = b·∇u − u·∇b`.
//!
//! With both fields divergence-free these are evaluated in conservation
//! form, `(b·∇b − u·∇u)_i = ∂_j(b_i b_j − u_i u_j)` and
//! `(b·∇u − u·∇b)_i = ∂_j(b_j u_i − u_j b_i)`, which needs `n(n+1)/2`
//! symmetric and `n(n−1)/2` antisymmetric products: `2n` inverse and `n²`
//! forward transforms on the 3/2-padded grid per evaluation.

use num_complex::Complex64;
use rayon::prelude::*;

use super::state::MhdState;
use crate::spectral::lattice::ModeTable;
use crate::spectral::multiplier::leray_project_mode;
use crate::spectral::{SpectralField, Transformer};

pub struct NonlinearTerms {
    transformer: Transformer,
    table: ModeTable,
}

impl NonlinearTerms {
    pub fn new(lattice: crate::spectral::Lattice) -> Self {
        Self {
            transformer: Transformer::dealiasing(lattice),
            table: lattice.mode_table(),
        }
    }

    /// `(N_u, N_b)` for divergence-free, real `u` and `b`.
    pub fn evaluate(&self, u: &SpectralField, b: &SpectralField) -> (SpectralField, SpectralField) {
        let lattice = self.transformer.lattice();
        let n = lattice.dim();

        let inputs: Vec<&[Complex64]> = u
            .components()
            .iter()
            .chain(b.components())
            .map(|c| c.as_slice())
            .collect();
        let grid: Vec<Vec<f64>> = inputs
            .par_iter()
            .map(|c| {
                self.transformer
                    .to_grid(c)
                    .into_iter()
                    .map(|z| z.re)
                    .collect()
            })
            .collect();
        let (ug, bg) = grid.split_at(n);

        // (i, j, symmetric?) for every product we need
        let mut pairs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in i..n {
                pairs.push((i, j, true));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j, false));
            }
        }
        let products: Vec<Vec<Complex64>> = pairs
            .par_iter()
            .map(|&(i, j, symmetric)| {
                let values: Vec<Complex64> = if symmetric {
                    (0..ug[0].len())
                        .map(|p| Complex64::new(bg[i][p] * bg[j][p] - ug[i][p] * ug[j][p], 0.0))
                        .collect()
                } else {
                    // b_j u_i − u_j b_i
                    (0..ug[0].len())
                        .map(|p| Complex64::new(bg[j][p] * ug[i][p] - ug[j][p] * bg[i][p], 0.0))
                        .collect()
                };
                self.transformer.from_grid(values)
            })
            .collect();

        let mut nu = SpectralField::zero_vector(lattice);
        let mut nb = SpectralField::zero_vector(lattice);
        let mut v = vec![Complex64::default(); n];
        for (idx, k) in self.table.iter() {
            if !k.is_nonzero() {
                continue;
            }
            v.iter_mut().for_each(|z| *z = Complex64::default());
            for (p, &(i, j, symmetric)) in pairs.iter().enumerate() {
                let val = products[p][idx];
                let dk_i = Complex64::new(0.0, k[i] as f64);
                let dk_j = Complex64::new(0.0, k[j] as f64);
                if symmetric {
                    v[i] += dk_j * val;
                    if i != j {
                        v[j] += dk_i * val;
                    }
                } else {
                    // W = b_j u_i − u_j b_i: N_b,i += ∂_j W, N_b,j −= ∂_i W
                    let bi = nb.component(i)[idx] + dk_j * val;
                    let bj = nb.component(j)[idx] - dk_i * val;
                    nb.component_mut(i)[idx] = bi;
                    nb.component_mut(j)[idx] = bj;
                }
            }
            leray_project_mode(k, &mut v);
            for (c, z) in v.iter().enumerate() {
                nu.component_mut(c)[idx] = *z;
            }
        }
        nu.hermitianize();
        nb.hermitianize();
        (nu, nb)
    }
}

/// `(P(b·∇b − u·∇u), b·∇u − u·∇b)` for a divergence-free state.
pub fn nonlinear_rhs(state: &MhdState) -> (SpectralField, SpectralField) {
    NonlinearTerms::new(state.lattice()).evaluate(&state.u, &state.b)
}
