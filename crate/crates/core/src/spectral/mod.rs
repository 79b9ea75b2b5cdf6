//! Fourier representation, multipliers, transforms and norms.

pub mod field;
pub mod lattice;
pub mod multiplier;
pub mod norms;
pub mod random;
pub mod transform;

pub use field::SpectralField;
pub use lattice::{Lattice, WaveVector};
pub use multiplier::{apply_chain, apply_multiplier, leray_project_mode, MultiplierSpec};
pub use norms::{mode_split, pairwise_sum, seminorm, weighted_inner, NormKind};
pub use transform::{dealiased_product, to_physical, transform_roundtrip, Transformer};
