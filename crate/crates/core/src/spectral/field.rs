//! Truncated Fourier coefficient arrays for scalar and vector fields on `T^n`.
//!
//! Coefficients follow `f̂(k) = (2π)^{−n} ∫ f(x) e^{−ik·x} dx`, so
//! `f(x) = Σ_k f̂(k) e^{ik·x}` and every norm in [`crate::spectral::norms`]
//! is a plain weighted coefficient sum. The physical `L²` integral is
//! `(2π)^n` times the coefficient sum; nothing in this crate uses it.

use num_complex::Complex64;

use super::lattice::{Lattice, WaveVector};
use crate::error::{Error, Result};

/// Coefficients of a scalar (one component) or vector (`n` components) field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    lattice: Lattice,
    components: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(lattice: Lattice, component_count: usize) -> Self {
        assert!(component_count >= 1, "a field has at least one component");
        Self {
            lattice,
            components: vec![vec![Complex64::new(0.0, 0.0); lattice.len()]; component_count],
        }
    }

    pub fn zero_scalar(lattice: Lattice) -> Self {
        Self::zeros(lattice, 1)
    }

    pub fn zero_vector(lattice: Lattice) -> Self {
        Self::zeros(lattice, lattice.dim())
    }

    /// Wraps raw component arrays. Nyquist slots are cleared.
    pub fn from_components(lattice: Lattice, components: Vec<Vec<Complex64>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument(
                "field needs at least one component".into(),
            ));
        }
        if components.iter().any(|c| c.len() != lattice.len()) {
            return Err(Error::LatticeMismatch(format!(
                "component length differs from lattice size {}",
                lattice.len()
            )));
        }
        let mut f = Self {
            lattice,
            components,
        };
        f.clear_nyquist();
        Ok(f)
    }

    /// The scalar field `amplitude · e^{ik·x}`.
    pub fn single_mode(lattice: Lattice, k: &WaveVector, amplitude: Complex64) -> Result<Self> {
        let mut f = Self::zero_scalar(lattice);
        f.set(0, k, amplitude)?;
        Ok(f)
    }

    /// Builds a field from a coefficient rule evaluated on every retained mode.
    pub fn from_fn(
        lattice: Lattice,
        component_count: usize,
        mut rule: impl FnMut(usize, &WaveVector) -> Complex64,
    ) -> Self {
        let mut f = Self::zeros(lattice, component_count);
        for (idx, k) in lattice.modes() {
            for c in 0..component_count {
                f.components[c][idx] = rule(c, &k);
            }
        }
        f
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn resolution(&self) -> usize {
        self.lattice.resolution()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_vector(&self) -> bool {
        self.components.len() == self.lattice.dim()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.components[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.components
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.components
    }

    pub fn get(&self, c: usize, k: &WaveVector) -> Complex64 {
        self.lattice
            .index_of(k)
            .map(|i| self.components[c][i])
            .unwrap_or_default()
    }

    pub fn set(&mut self, c: usize, k: &WaveVector, value: Complex64) -> Result<()> {
        let i = self.lattice.index_of(k).ok_or_else(|| {
            Error::InvalidArgument(format!("mode {:?} is outside the retained lattice", k.0))
        })?;
        self.components[c][i] = value;
        Ok(())
    }

    /// Scalar component `c` as its own field.
    pub fn scalar_component(&self, c: usize) -> SpectralField {
        Self {
            lattice: self.lattice,
            components: vec![self.components[c].clone()],
        }
    }

    /// Stacks scalar fields into a multi-component field.
    pub fn stack(parts: &[SpectralField]) -> Result<SpectralField> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to stack".into()))?;
        let mut components = Vec::new();
        for p in parts {
            p.ensure_same_lattice(first)?;
            components.extend(p.components.iter().cloned());
        }
        Ok(Self {
            lattice: first.lattice,
            components,
        })
    }

    pub fn ensure_same_lattice(&self, other: &SpectralField) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch(format!(
                "(n={}, N={}) vs (n={}, N={})",
                self.dim(),
                self.resolution(),
                other.dim(),
                other.resolution()
            )));
        }
        Ok(())
    }

    fn ensure_same_shape(&self, other: &SpectralField) -> Result<()> {
        self.ensure_same_lattice(other)?;
        if self.component_count() != other.component_count() {
            return Err(Error::LatticeMismatch(format!(
                "{} vs {} components",
                self.component_count(),
                other.component_count()
            )));
        }
        Ok(())
    }

    /// Magnitude of the `k = 0` coefficient, maximised over components.
    pub fn mean_magnitude(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c[0].norm())
            .fold(0.0, f64::max)
    }

    pub fn is_mean_zero(&self) -> bool {
        self.components
            .iter()
            .all(|c| c[0] == Complex64::new(0.0, 0.0))
    }

    pub fn zero_mean(&mut self) {
        for c in &mut self.components {
            c[0] = Complex64::new(0.0, 0.0);
        }
    }

    /// Largest coefficient magnitude over all components.
    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max_k |f̂(−k) − conj f̂(k)|`, zero for fields that are real in physical space.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.components {
            for (i, z) in c.iter().enumerate() {
                let j = self.lattice.conjugate_index(i);
                worst = worst.max((c[j] - z.conj()).norm());
            }
        }
        worst
    }

    /// Replaces the field by its real part in physical space:
    /// `f̂(k) ← (f̂(k) + conj f̂(−k)) / 2`. Exact pairing, so the result has
    /// zero Hermitian defect.
    pub fn hermitianize(&mut self) {
        let lat = self.lattice;
        for c in &mut self.components {
            for i in 0..c.len() {
                let j = lat.conjugate_index(i);
                if j < i {
                    continue;
                }
                let avg = (c[i] + c[j].conj()) * 0.5;
                c[i] = avg;
                c[j] = avg.conj();
            }
        }
    }

    pub fn clear_nyquist(&mut self) {
        let lat = self.lattice;
        let mut slots = vec![0; lat.dim()];
        let half = lat.resolution() / 2;
        for i in 0..lat.len() {
            lat.slots_of(i, &mut slots);
            if slots.contains(&half) {
                for c in &mut self.components {
                    c[i] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Zeroes every mode with some `|k_i| > band`.
    pub fn band_limit(&mut self, band: i64) {
        for (idx, k) in self.lattice.modes() {
            if k.max_abs() > band {
                for c in &mut self.components {
                    c[idx] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for c in &mut self.components {
            for z in c.iter_mut() {
                *z *= factor;
            }
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &SpectralField, factor: f64) -> Result<()> {
        self.ensure_same_shape(other)?;
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * factor;
            }
        }
        Ok(())
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        let mut out = self.clone();
        out.add_scaled(other, -1.0)?;
        Ok(out)
    }

    /// `max |f̂ − ĝ|` over all components and modes.
    pub fn max_abs_diff(&self, other: &SpectralField) -> Result<f64> {
        self.ensure_same_shape(other)?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max))
    }

    /// `max_k |k · f̂(k)|` for a vector field.
    pub fn divergence_defect(&self) -> Result<f64> {
        if !self.is_vector() {
            return Err(Error::ExpectedVector("divergence"));
        }
        let mut worst = 0.0f64;
        for (idx, k) in self.lattice.modes() {
            let mut d = Complex64::new(0.0, 0.0);
            for (j, comp) in self.components.iter().enumerate() {
                d += comp[idx] * k[j] as f64;
            }
            worst = worst.max(d.norm());
        }
        Ok(worst)
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}
