//! Integer wave vectors and the truncated symmetric lattice.
//!
//! A lattice of resolution `N` in dimension `n` retains the modes
//! `k ∈ {−N/2+1, …, N/2−1}^n`. Storage follows FFT ordering on each axis
//! (`0, 1, …, N/2−1, [N/2], −N/2+1, …, −1`); the Nyquist slot `N/2` is kept
//! in the array but is never populated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer lattice coordinates `k = (k_1, …, k_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WaveVector(pub Vec<i64>);

impl WaveVector {
    pub fn new(components: impl Into<Vec<i64>>) -> Self {
        Self(components.into())
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Unit vector along `axis`.
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut k = vec![0; n];
        k[axis] = 1;
        Self(k)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|&c| (c * c) as f64).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The vertical frequency `k_n`.
    pub fn vertical(&self) -> i64 {
        *self
            .0
            .last()
            .expect("wave vector has at least one component")
    }

    pub fn is_nonzero(&self) -> bool {
        self.0.iter().any(|&c| c != 0)
    }

    /// `k_n = 0` (includes `k = 0`).
    pub fn is_vertical_zero(&self) -> bool {
        self.vertical() == 0
    }

    /// Membership in `S_≠`: `k ≠ 0` and `k_n ≠ 0`.
    pub fn is_vertical_nonzero(&self) -> bool {
        self.vertical() != 0
    }

    /// Membership in `S_=`: `k ≠ 0` and `k_n = 0`.
    pub fn in_zero_vertical_class(&self) -> bool {
        self.is_nonzero() && self.is_vertical_zero()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl std::ops::Index<usize> for WaveVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// Shape of a truncated lattice. Cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    resolution: usize,
}

impl Lattice {
    pub fn new(dim: usize, resolution: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidLattice("dimension must be at least 1".into()));
        }
        if resolution < 4 || !resolution.is_multiple_of(2) {
            return Err(Error::InvalidLattice(format!(
                "resolution must be even and at least 4, got {resolution}"
            )));
        }
        if resolution.checked_pow(dim as u32).is_none() {
            return Err(Error::InvalidLattice("lattice too large".into()));
        }
        Ok(Self { dim, resolution })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Largest retained `|k_i|`, i.e. `N/2 − 1`.
    pub fn max_mode(&self) -> i64 {
        (self.resolution / 2) as i64 - 1
    }

    /// Number of storage slots, `N^n`.
    pub fn len(&self) -> usize {
        self.resolution.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Wavenumber stored at axis slot `i`, or `None` for the Nyquist slot.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> Option<i64> {
        let half = self.resolution / 2;
        if i < half {
            Some(i as i64)
        } else if i == half {
            None
        } else {
            Some(i as i64 - self.resolution as i64)
        }
    }

    /// Axis slot holding wavenumber `k`, or `None` when `|k|` exceeds the
    /// retained range.
    #[inline]
    pub fn slot(&self, k: i64) -> Option<usize> {
        if k.abs() > self.max_mode() {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.resolution as i64) as usize)
        }
    }

    /// Flat index of a retained wave vector.
    pub fn index_of(&self, k: &WaveVector) -> Option<usize> {
        debug_assert_eq!(k.dim(), self.dim);
        let mut idx = 0usize;
        for &c in &k.0 {
            idx = idx * self.resolution + self.slot(c)?;
        }
        Some(idx)
    }

    /// Per-axis slots of a flat index (axis `n−1` varies fastest).
    pub fn slots_of(&self, mut idx: usize, out: &mut [usize]) {
        for a in (0..self.dim).rev() {
            out[a] = idx % self.resolution;
            idx /= self.resolution;
        }
    }

    /// Wave vector at a flat index, `None` if any axis sits on Nyquist.
    pub fn wave_vector(&self, idx: usize) -> Option<WaveVector> {
        let mut slots = vec![0; self.dim];
        self.slots_of(idx, &mut slots);
        let mut k = Vec::with_capacity(self.dim);
        for &s in &slots {
            k.push(self.wavenumber(s)?);
        }
        Some(WaveVector(k))
    }

    /// Flat indices and wave vectors of every retained mode, in storage
    /// order. Computed once per call; cache it for hot loops.
    pub fn modes(&self) -> Vec<(usize, WaveVector)> {
        (0..self.len())
            .filter_map(|i| self.wave_vector(i).map(|k| (i, k)))
            .collect()
    }

    /// Table of `(|k|², k)` for every storage slot, with `None` on slots
    /// touching a Nyquist plane.
    pub fn mode_table(&self) -> ModeTable {
        let entries = (0..self.len()).map(|i| self.wave_vector(i)).collect();
        ModeTable { entries }
    }

    /// Flat index of `−k` for the slot at `idx` (Nyquist slots map to
    /// themselves).
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let mut slots = vec![0; self.dim];
        self.slots_of(idx, &mut slots);
        let mut out = 0usize;
        for &s in &slots {
            let r = (self.resolution - s) % self.resolution;
            out = out * self.resolution + r;
        }
        out
    }

    /// Flat index of the reflection of slot `idx` across `axis` (`k_axis → −k_axis`).
    pub fn reflect_index(&self, idx: usize, axis: usize) -> usize {
        let stride = self.resolution.pow((self.dim - 1 - axis) as u32);
        let s = (idx / stride) % self.resolution;
        let r = (self.resolution - s) % self.resolution;
        idx - s * stride + r * stride
    }
}

/// Precomputed wave vectors for each storage slot of a lattice.
#[derive(Debug, Clone)]
pub struct ModeTable {
    entries: Vec<Option<WaveVector>>,
}

impl ModeTable {
    #[inline]
    pub fn get(&self, idx: usize) -> Option<&WaveVector> {
        self.entries[idx].as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &WaveVector)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, k)| k.as_ref().map(|k| (i, k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slots_roundtrip() {
        let lat = Lattice::new(3, 8).unwrap();
        for (idx, k) in lat.modes() {
            assert_eq!(lat.index_of(&k), Some(idx));
            assert!(k.max_abs() <= 3);
        }
        assert_eq!(lat.modes().len(), 7usize.pow(3));
    }

    #[test]
    fn conjugate_and_reflection_indices() {
        let lat = Lattice::new(2, 8).unwrap();
        let k = WaveVector::new([2, -3]);
        let idx = lat.index_of(&k).unwrap();
        assert_eq!(lat.wave_vector(lat.conjugate_index(idx)), Some(k.neg()));
        assert_eq!(
            lat.wave_vector(lat.reflect_index(idx, 1)),
            Some(WaveVector::new([2, 3]))
        );
        assert_eq!(
            lat.wave_vector(lat.reflect_index(idx, 0)),
            Some(WaveVector::new([-2, -3]))
        );
    }

    #[test]
    fn vertical_classes_partition_nonzero_modes() {
        let lat = Lattice::new(3, 6).unwrap();
        for (_, k) in lat.modes() {
            if !k.is_nonzero() {
                assert!(!k.in_zero_vertical_class() && k.is_vertical_zero());
                continue;
            }
            assert!(k.is_vertical_nonzero() ^ k.in_zero_vertical_class());
        }
    }

    #[test]
    fn rejects_odd_resolution() {
        assert!(Lattice::new(2, 7).is_err());
        assert!(Lattice::new(2, 2).is_err());
    }
}
