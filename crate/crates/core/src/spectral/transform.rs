//! Physical ↔ spectral transforms on uniform grids and dealiased products.
//!
//! A [`Transformer`] embeds the retained lattice of resolution `N` into an
//! `M^n` point grid. With `M = N` it is the plain transform pair; with
//! `M = 3N/2` (the 2/3 rule) every quadratic product of fields supported on
//! the retained lattice is computed without aliasing on the retained modes:
//! products reach `|k_i| ≤ 2(N/2 − 1)`, and the aliases `k − M` land beyond
//! `N/2 − 1` whenever `M > 3(N/2 − 1)`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::SpectralField;
use super::lattice::Lattice;
use crate::error::{Error, Result};

/// In-place multidimensional FFT on an `M^n` grid (last axis contiguous).
pub struct FftGrid {
    dim: usize,
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftGrid {
    pub fn new(dim: usize, size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dim,
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        }
    }

    pub fn len(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Unnormalised transform along every axis.
    pub fn process(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.len());
        let fft = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let m = self.size;
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        let mut lines = Vec::new();
        for axis in 0..self.dim {
            let stride = m.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                fft.process_with_scratch(data, &mut scratch);
                continue;
            }
            // gather `stride` lines of one block, transform them together
            let block = m * stride;
            lines.resize(block, Complex64::default());
            for start in (0..data.len()).step_by(block) {
                let chunk = &mut data[start..start + block];
                for i in 0..m {
                    for j in 0..stride {
                        lines[j * m + i] = chunk[i * stride + j];
                    }
                }
                fft.process_with_scratch(&mut lines, &mut scratch);
                for i in 0..m {
                    for j in 0..stride {
                        chunk[i * stride + j] = lines[j * m + i];
                    }
                }
            }
        }
    }
}

/// Maps lattice coefficients to grid values and back.
pub struct Transformer {
    lattice: Lattice,
    grid: FftGrid,
    /// `(lattice index, grid index)` for every retained mode.
    placement: Vec<(usize, usize)>,
}

impl Transformer {
    pub fn new(lattice: Lattice, grid_size: usize) -> Result<Self> {
        if grid_size < lattice.resolution() {
            return Err(Error::InvalidArgument(format!(
                "grid size {grid_size} is smaller than the lattice resolution {}",
                lattice.resolution()
            )));
        }
        let m = grid_size as i64;
        let placement = lattice
            .modes()
            .into_iter()
            .map(|(idx, k)| {
                let g =
                    k.0.iter()
                        .fold(0usize, |acc, &c| acc * grid_size + c.rem_euclid(m) as usize);
                (idx, g)
            })
            .collect();
        Ok(Self {
            lattice,
            grid: FftGrid::new(lattice.dim(), grid_size),
            placement,
        })
    }

    /// Grid of the lattice's own resolution.
    pub fn exact(lattice: Lattice) -> Self {
        Self::new(lattice, lattice.resolution()).expect("grid matches lattice")
    }

    /// Grid padded by 3/2 for alias-free quadratic products.
    pub fn dealiasing(lattice: Lattice) -> Self {
        Self::new(lattice, 3 * lattice.resolution() / 2).expect("padded grid is larger")
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    /// Point values `f(x_j) = Σ_k f̂(k) e^{ik·x_j}` on the grid.
    pub fn to_grid(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        let mut values = vec![Complex64::default(); self.grid.len()];
        for &(i, g) in &self.placement {
            values[g] = coefficients[i];
        }
        self.grid.process(&mut values, true);
        values
    }

    /// Coefficients of the retained modes from grid values; everything
    /// outside the retained lattice is discarded.
    pub fn from_grid(&self, mut values: Vec<Complex64>) -> Vec<Complex64> {
        self.grid.process(&mut values, false);
        let norm = 1.0 / self.grid.len() as f64;
        let mut out = vec![Complex64::default(); self.lattice.len()];
        for &(i, g) in &self.placement {
            out[i] = values[g] * norm;
        }
        out
    }

    /// Dealiased product of two fields. Components are paired one to one,
    /// or a scalar is broadcast against every component of the other.
    pub fn product(&self, f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
        f.ensure_same_lattice(g)?;
        if f.lattice() != self.lattice {
            return Err(Error::LatticeMismatch(
                "field and transformer lattices differ".into(),
            ));
        }
        let (nf, ng) = (f.component_count(), g.component_count());
        if nf != ng && nf != 1 && ng != 1 {
            return Err(Error::LatticeMismatch(format!(
                "cannot multiply {nf}-component and {ng}-component fields"
            )));
        }
        let fv: Vec<_> = f.components().iter().map(|c| self.to_grid(c)).collect();
        let gv: Vec<_> = g.components().iter().map(|c| self.to_grid(c)).collect();
        let count = nf.max(ng);
        let mut comps = Vec::with_capacity(count);
        for c in 0..count {
            let a = &fv[if nf == 1 { 0 } else { c }];
            let b = &gv[if ng == 1 { 0 } else { c }];
            let prod = a.iter().zip(b).map(|(x, y)| x * y).collect();
            comps.push(self.from_grid(prod));
        }
        SpectralField::from_components(self.lattice, comps)
    }
}

/// Spectral coefficients of the pointwise product `f·g` on the retained
/// lattice, computed on a 3/2-padded grid.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.ensure_same_lattice(g)?;
    Transformer::dealiasing(f.lattice()).product(f, g)
}

/// Inverse then forward transform on the lattice's own grid.
pub fn transform_roundtrip(f: &SpectralField) -> SpectralField {
    let t = Transformer::exact(f.lattice());
    let comps = f
        .components()
        .iter()
        .map(|c| t.from_grid(t.to_grid(c)))
        .collect();
    SpectralField::from_components(f.lattice(), comps).expect("shape preserved")
}

/// Physical-space point values of every component on the lattice's own grid.
pub fn to_physical(f: &SpectralField) -> Vec<Vec<Complex64>> {
    let t = Transformer::exact(f.lattice());
    f.components().iter().map(|c| t.to_grid(c)).collect()
}
