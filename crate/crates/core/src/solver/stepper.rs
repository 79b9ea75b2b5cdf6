//! Strang splitting: half a step of the exact linear flow, one Heun step of
//! the quadratic terms, another half linear step.

use num_complex::Complex64;
use rayon::prelude::*;

use super::nonlinear::NonlinearTerms;
use super::propagator::{propagator_from, Matrix2};
use super::state::MhdState;
use crate::error::{Error, Result};
use crate::spectral::lattice::ModeTable;
use crate::spectral::{leray_project_mode, Lattice, SpectralField, Transformer};
use crate::symmetry::{symmetrize_in_place, SymmetryClass};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub nonlinear: bool,
    /// Re-project onto this class after every step.
    pub resymmetrize: Option<SymmetryClass>,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            nonlinear: true,
            resymmetrize: None,
        }
    }
}

/// Fixed-step integrator with cached per-mode propagators.
pub struct Stepper {
    lattice: Lattice,
    dt: f64,
    half: Vec<Option<Matrix2>>,
    table: ModeTable,
    nonlinear: Option<NonlinearTerms>,
    options: StepOptions,
}

impl Stepper {
    pub fn new(lattice: Lattice, mu: f64, nu: f64, dt: f64, options: StepOptions) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt = {dt} must be positive"
            )));
        }
        let table = lattice.mode_table();
        let half = (0..lattice.len())
            .map(|i| {
                table
                    .get(i)
                    .filter(|k| k.is_nonzero())
                    .map(|k| propagator_from(k.norm_sq(), k.vertical() as f64, 0.5 * dt, mu, nu))
            })
            .collect();
        Ok(Self {
            lattice,
            dt,
            half,
            table,
            nonlinear: options.nonlinear.then(|| NonlinearTerms::new(lattice)),
            options,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn linear_half(&self, u: &mut SpectralField, b: &mut SpectralField) {
        let n = self.lattice.dim();
        for c in 0..n {
            let (uc, bc) = (u.component_mut(c), b.component_mut(c));
            uc.par_iter_mut()
                .zip(bc.par_iter_mut())
                .zip(self.half.par_iter())
                .for_each(|((zu, zb), m)| match m {
                    Some(m) => {
                        let (nu, nb) = super::propagator::apply(m, *zu, *zb);
                        *zu = nu;
                        *zb = nb;
                    }
                    None => {
                        *zu = Complex64::default();
                        *zb = Complex64::default();
                    }
                });
        }
    }

    fn heun(
        &self,
        terms: &NonlinearTerms,
        u: &mut SpectralField,
        b: &mut SpectralField,
    ) -> Result<()> {
        let (nu0, nb0) = terms.evaluate(u, b);
        let mut u1 = u.clone();
        let mut b1 = b.clone();
        u1.add_scaled(&nu0, self.dt)?;
        b1.add_scaled(&nb0, self.dt)?;
        let (nu1, nb1) = terms.evaluate(&u1, &b1);
        u.add_scaled(&nu0, 0.5 * self.dt)?;
        u.add_scaled(&nu1, 0.5 * self.dt)?;
        b.add_scaled(&nb0, 0.5 * self.dt)?;
        b.add_scaled(&nb1, 0.5 * self.dt)?;
        Ok(())
    }

    /// Advances `state` by one step of size `dt`.
    pub fn step(&self, state: &MhdState) -> Result<MhdState> {
        if state.lattice() != self.lattice {
            return Err(Error::LatticeMismatch(format!(
                "stepper built for {:?}, state on {:?}",
                self.lattice,
                state.lattice()
            )));
        }
        let mut next = state.clone();
        self.linear_half(&mut next.u, &mut next.b);
        if let Some(terms) = &self.nonlinear {
            self.heun(terms, &mut next.u, &mut next.b)?;
        }
        self.linear_half(&mut next.u, &mut next.b);
        self.clean(&mut next);
        if let Some(class) = self.options.resymmetrize {
            symmetrize_in_place(&mut next, class);
        }
        next.t = state.t + self.dt;
        if !next.is_finite() {
            return Err(Error::BlowUp {
                t: next.t,
                reason: "non-finite coefficient".into(),
                norm_history: Vec::new(),
            });
        }
        Ok(next)
    }

    /// Leray projection, zero mean and exact Hermitian symmetry.
    fn clean(&self, state: &mut MhdState) {
        let n = self.lattice.dim();
        let mut v = vec![Complex64::default(); n];
        for field in [&mut state.u, &mut state.b] {
            for (idx, k) in self.table.iter() {
                for c in 0..n {
                    v[c] = field.component(c)[idx];
                }
                leray_project_mode(k, &mut v);
                for c in 0..n {
                    field.component_mut(c)[idx] = v[c];
                }
            }
            field.zero_mean();
            field.hermitianize();
        }
    }
}

/// One step with the quadratic terms on and no re-symmetrisation.
pub fn step(state: &MhdState, dt: f64) -> Result<MhdState> {
    Stepper::new(
        state.lattice(),
        state.mu,
        state.nu,
        dt,
        StepOptions::default(),
    )?
    .step(state)
}

/// `0.5 / (N · max(‖u‖_∞, ‖b‖_∞ + 1))`, the advective bound including the
/// unit background field.
pub fn cfl_dt(state: &MhdState) -> f64 {
    let transformer = Transformer::exact(state.lattice());
    let sup = |f: &SpectralField| {
        let grids: Vec<Vec<Complex64>> = f
            .components()
            .iter()
            .map(|c| transformer.to_grid(c))
            .collect();
        (0..grids[0].len())
            .map(|p| grids.iter().map(|g| g[p].re * g[p].re).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    };
    let speed = sup(&state.u).max(sup(&state.b) + 1.0);
    0.5 / (state.lattice().resolution() as f64 * speed)
}
