use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use super::state::MhdState;
use crate::error::{Error, Result};
use crate::spectral::random::random_field;
use crate::spectral::{apply_multiplier, seminorm, Lattice, MultiplierSpec, NormKind};
use crate::symmetry::symmetrize_in_place;

/// Seeded random initial data in the configured symmetry class, solenoidal,
/// mean-zero and scaled to `‖u₀‖_{H^s} + ‖b₀‖_{H^s} = ε`.
pub fn make_initial_data(config: &RunConfig) -> Result<MhdState> {
    let lattice = Lattice::new(config.n, config.resolution)?;
    let mut state = MhdState::zero(lattice, config.regime);
    if config.epsilon == 0.0 {
        return Ok(state);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n;
    state.u = random_field(
        lattice,
        n,
        config.band_limit,
        config.initial_slope,
        &mut rng,
    );
    state.b = random_field(
        lattice,
        n,
        config.band_limit,
        config.initial_slope,
        &mut rng,
    );
    symmetrize_in_place(&mut state, config.symmetry);
    state.u = apply_multiplier(&state.u, &MultiplierSpec::Leray)?;
    state.b = apply_multiplier(&state.b, &MultiplierSpec::Leray)?;
    state.u.hermitianize();
    state.b.hermitianize();

    let size = seminorm(&state.u, config.s, NormKind::FullInhomogeneous)?
        + seminorm(&state.b, config.s, NormKind::FullInhomogeneous)?;
    if !(size > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "initial data vanish after projection onto the {:?} class (band_limit = {})",
            config.symmetry, config.band_limit
        )));
    }
    let factor = config.epsilon / size;
    state.u.scale(factor);
    state.b.scale(factor);
    Ok(state)
}
