//! Parity classes of `(u, b)` and the vertical-mode constraints they imply.
//!
//! A class is a set of coordinate reflections `R_a: x_a → −x_a`, each with a
//! sign per vector component: component `c` of a field in the class obeys
//! `f_c(R_a x) = p · f_c(x)`. In coefficient space this is
//! `f̂_c(R_a k) = p · f̂_c(k)`, so every operation here is an exact
//! permutation of coefficients with signs; nothing is mirrored on a grid.
//!
//! - [`SymmetryClass::Sym1`] (reflection in `x_n` only): `u_h, b_n` even,
//!   `u_n, b_h` odd.
//! - [`SymmetryClass::Sym2`]: every axis reflection, with `u` transforming
//!   as a polar vector (`u_a` odd in `x_a`, other components even) under all
//!   of them, `b` as a polar vector under horizontal reflections and as in
//!   `Sym1` under `x_n`. The class contains `Sym1` and the full inversion
//!   `x → −x` with `u` odd and `b` even, and it is invariant under the
//!   nonlinear flow for any `(μ, ν)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::solver::{MhdState, Regime};
use crate::spectral::SpectralField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    Sym1,
    Sym2,
    Unconstrained,
}

/// One reflection with per-component parities for `u` and `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    pub axis: usize,
    pub u_parity: Vec<f64>,
    pub b_parity: Vec<f64>,
}

fn polar(n: usize, axis: usize) -> Vec<f64> {
    (0..n).map(|c| if c == axis { -1.0 } else { 1.0 }).collect()
}

fn axial(n: usize, axis: usize) -> Vec<f64> {
    (0..n).map(|c| if c == axis { 1.0 } else { -1.0 }).collect()
}

impl SymmetryClass {
    /// Generating reflections of the class in dimension `n`.
    pub fn reflections(&self, n: usize) -> Vec<Reflection> {
        let vertical = n - 1;
        let sym1 = Reflection {
            axis: vertical,
            u_parity: polar(n, vertical),
            b_parity: axial(n, vertical),
        };
        match self {
            SymmetryClass::Unconstrained => Vec::new(),
            SymmetryClass::Sym1 => vec![sym1],
            SymmetryClass::Sym2 => {
                let mut gens: Vec<_> = (0..vertical)
                    .map(|a| Reflection {
                        axis: a,
                        u_parity: polar(n, a),
                        b_parity: polar(n, a),
                    })
                    .collect();
                gens.push(sym1);
                gens
            }
        }
    }
}

fn project_field(f: &mut SpectralField, axis: usize, parity: &[f64]) {
    let lat = f.lattice();
    for (c, &p) in parity.iter().enumerate() {
        let comp = f.component_mut(c);
        for i in 0..comp.len() {
            let j = lat.reflect_index(i, axis);
            if j < i {
                continue;
            }
            if j == i {
                // k_axis = 0: odd components vanish there
                if p < 0.0 {
                    comp[i] = Complex64::new(0.0, 0.0);
                }
                continue;
            }
            let avg = (comp[i] + comp[j] * p) * 0.5;
            comp[i] = avg;
            comp[j] = avg * p;
        }
    }
}

fn field_violation(f: &SpectralField, axis: usize, parity: &[f64]) -> f64 {
    let lat = f.lattice();
    let mut worst = 0.0f64;
    for (c, &p) in parity.iter().enumerate() {
        let comp = f.component(c);
        for i in 0..comp.len() {
            let j = lat.reflect_index(i, axis);
            worst = worst.max((comp[j] - comp[i] * p).norm());
        }
    }
    worst
}

/// Orthogonal projection of `(u, b)` onto the class, by averaging each
/// coefficient with its signed reflections. Idempotent bit for bit.
pub fn symmetrize(state: &MhdState, class: SymmetryClass) -> MhdState {
    let mut out = state.clone();
    symmetrize_in_place(&mut out, class);
    out
}

pub fn symmetrize_in_place(state: &mut MhdState, class: SymmetryClass) {
    for r in class.reflections(state.dim()) {
        project_field(&mut state.u, r.axis, &r.u_parity);
        project_field(&mut state.b, r.axis, &r.b_parity);
    }
}

/// `max |ĉ(R k) − p·ĉ(k)|` over reflections, components and modes; zero for
/// exactly symmetric states.
pub fn check_symmetry(state: &MhdState, class: SymmetryClass) -> f64 {
    class
        .reflections(state.dim())
        .iter()
        .map(|r| {
            field_violation(&state.u, r.axis, &r.u_parity).max(field_violation(
                &state.b,
                r.axis,
                &r.b_parity,
            ))
        })
        .fold(0.0, f64::max)
}

fn max_on_zero_vertical(f: &SpectralField, components: std::ops::Range<usize>) -> f64 {
    let mut worst = 0.0f64;
    for (idx, k) in f.lattice().modes() {
        if !k.in_zero_vertical_class() {
            continue;
        }
        for c in components.clone() {
            worst = worst.max(f.component(c)[idx].norm());
        }
    }
    worst
}

/// Size of the vertical-mode constraint for the regime.
///
/// Without resistivity the horizontal magnetic coefficients on `k_n = 0`
/// must vanish; without viscosity the horizontal velocity coefficients must,
/// and under [`SymmetryClass::Sym2`] all velocity coefficients on `S_=`. A
/// regime with both diffusivities positive carries no constraint (returns 0).
pub fn check_spectral_constraint(state: &MhdState, regime: Regime, class: SymmetryClass) -> f64 {
    let n = state.dim();
    let horizontal = 0..n - 1;
    let mut worst = 0.0f64;
    if regime.nu() == 0.0 {
        worst = worst.max(max_on_zero_vertical(&state.b, horizontal.clone()));
    }
    if regime.mu() == 0.0 {
        let comps = if class == SymmetryClass::Sym2 {
            0..n
        } else {
            horizontal
        };
        worst = worst.max(max_on_zero_vertical(&state.u, comps));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_uniform_field;
    use crate::spectral::{Lattice, WaveVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(lat: Lattice, seed: u64, regime: Regime) -> MhdState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_uniform_field(lat, lat.dim(), lat.max_mode(), &mut rng);
        let b = random_uniform_field(lat, lat.dim(), lat.max_mode(), &mut rng);
        MhdState::new(u, b, regime).unwrap()
    }

    #[test]
    fn zero_state_is_symmetric() {
        let lat = Lattice::new(2, 8).unwrap();
        let s = MhdState::zero(lat, Regime::NonResistive);
        for class in [SymmetryClass::Sym1, SymmetryClass::Sym2] {
            assert_eq!(check_symmetry(&s, class), 0.0);
        }
    }

    #[test]
    fn sym1_parity_of_horizontal_velocity() {
        let lat = Lattice::new(2, 8).unwrap();
        let e2 = WaveVector::new([0, 1]);
        let mut cos = MhdState::zero(lat, Regime::NonResistive);
        cos.u.set(0, &e2, c(0.5, 0.0)).unwrap();
        cos.u.set(0, &e2.neg(), c(0.5, 0.0)).unwrap();
        assert_eq!(symmetrize(&cos, SymmetryClass::Sym1), cos);

        let mut sin = MhdState::zero(lat, Regime::NonResistive);
        sin.u.set(0, &e2, c(0.0, -0.5)).unwrap();
        sin.u.set(0, &e2.neg(), c(0.0, 0.5)).unwrap();
        let p = symmetrize(&sin, SymmetryClass::Sym1);
        assert_eq!(p.u.max_abs(), 0.0);
    }

    #[test]
    fn projection_is_idempotent_and_exact() {
        for n in [2, 3] {
            let lat = Lattice::new(n, 8).unwrap();
            for class in [SymmetryClass::Sym1, SymmetryClass::Sym2] {
                let s = random_state(lat, 11, Regime::NonResistive);
                let once = symmetrize(&s, class);
                assert_eq!(check_symmetry(&once, class), 0.0);
                assert_eq!(symmetrize(&once, class), once);
                assert!(check_symmetry(&s, class) > 0.1);
            }
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let lat = Lattice::new(2, 8).unwrap();
        let mut s = symmetrize(
            &random_state(lat, 5, Regime::NonResistive),
            SymmetryClass::Sym1,
        );
        let k = WaveVector::new([1, 2]);
        let old = s.b.get(1, &k);
        s.b.set(1, &k, old + c(1e-3, 0.0)).unwrap();
        assert!(check_symmetry(&s, SymmetryClass::Sym1) >= 5e-4);
    }

    #[test]
    fn unconstrained_is_identity() {
        let lat = Lattice::new(2, 8).unwrap();
        let s = random_state(lat, 2, Regime::NonResistive);
        assert_eq!(symmetrize(&s, SymmetryClass::Unconstrained), s);
        assert_eq!(check_symmetry(&s, SymmetryClass::Unconstrained), 0.0);
    }

    #[test]
    fn sym1_kills_horizontal_magnetic_zero_vertical_modes() {
        let lat = Lattice::new(3, 8).unwrap();
        let s = symmetrize(
            &random_state(lat, 9, Regime::NonResistive),
            SymmetryClass::Sym1,
        );
        assert_eq!(
            check_spectral_constraint(&s, Regime::NonResistive, SymmetryClass::Sym1),
            0.0
        );
        let raw = random_state(lat, 9, Regime::NonResistive);
        assert!(
            check_spectral_constraint(&raw, Regime::NonResistive, SymmetryClass::Unconstrained)
                > 0.0
        );
    }

    #[test]
    fn sym2_contains_full_inversion() {
        // u(−x) = −u(x), b(−x) = b(x): û purely imaginary, b̂ real
        let lat = Lattice::new(3, 8).unwrap();
        let s = symmetrize(
            &random_state(lat, 4, Regime::NonViscous),
            SymmetryClass::Sym2,
        );
        for (idx, _) in lat.modes() {
            for comp in 0..3 {
                assert!(s.u.component(comp)[idx].re.abs() < 1e-15);
                assert!(s.b.component(comp)[idx].im.abs() < 1e-15);
            }
        }
    }
}
