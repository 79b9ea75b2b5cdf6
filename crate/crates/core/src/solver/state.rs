use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Lattice, SpectralField};

/// Dissipation regime: which of velocity and magnetic field diffuse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `μ = 1, ν = 0`
    NonResistive,
    /// `μ = 0, ν = 1`
    NonViscous,
    General {
        mu: f64,
        nu: f64,
    },
}

/// The field carrying the dissipation in a regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dissipated {
    Velocity,
    Magnetic,
}

impl Regime {
    pub fn mu(&self) -> f64 {
        match self {
            Regime::NonResistive => 1.0,
            Regime::NonViscous => 0.0,
            Regime::General { mu, .. } => *mu,
        }
    }

    pub fn nu(&self) -> f64 {
        match self {
            Regime::NonResistive => 0.0,
            Regime::NonViscous => 1.0,
            Regime::General { nu, .. } => *nu,
        }
    }

    /// Velocity unless viscosity vanishes.
    pub fn dissipated(&self) -> Dissipated {
        if self.mu() > 0.0 || self.nu() == 0.0 {
            Dissipated::Velocity
        } else {
            Dissipated::Magnetic
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::NonResistive => "non_resistive",
            Regime::NonViscous => "non_viscous",
            Regime::General { .. } => "general",
        }
    }
}

/// Velocity and magnetic perturbation at one instant. The pressure is
/// eliminated by the Leray projection and never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MhdState {
    pub u: SpectralField,
    /// `B − e_n`
    pub b: SpectralField,
    pub t: f64,
    pub mu: f64,
    pub nu: f64,
}

impl MhdState {
    pub fn zero(lattice: Lattice, regime: Regime) -> Self {
        Self {
            u: SpectralField::zero_vector(lattice),
            b: SpectralField::zero_vector(lattice),
            t: 0.0,
            mu: regime.mu(),
            nu: regime.nu(),
        }
    }

    pub fn new(u: SpectralField, b: SpectralField, regime: Regime) -> Result<Self> {
        u.ensure_same_lattice(&b)?;
        if !u.is_vector() || !b.is_vector() {
            return Err(Error::ExpectedVector("MHD state"));
        }
        Ok(Self {
            u,
            b,
            t: 0.0,
            mu: regime.mu(),
            nu: regime.nu(),
        })
    }

    pub fn lattice(&self) -> Lattice {
        self.u.lattice()
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// Largest coefficient magnitude of `u` and `b`.
    pub fn scale(&self) -> f64 {
        self.u.max_abs().max(self.b.max_abs())
    }

    /// `max_k |k·û|, |k·b̂|`.
    pub fn divergence_defect(&self) -> f64 {
        let du = self.u.divergence_defect().expect("vector field");
        let db = self.b.divergence_defect().expect("vector field");
        du.max(db)
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.u.hermitian_defect().max(self.b.hermitian_defect())
    }

    pub fn is_mean_zero(&self) -> bool {
        self.u.is_mean_zero() && self.b.is_mean_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.b.is_finite()
    }
}
