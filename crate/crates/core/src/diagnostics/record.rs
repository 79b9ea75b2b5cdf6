use serde::{Deserialize, Serialize};

use crate::solver::{Dissipated, MhdState, Regime};
use crate::spectral::multiplier::fractional_power;
use crate::spectral::{pairwise_sum, Lattice};

/// Column names of the time-series table, in row order.
pub const CSV_HEADER: &str = "t,l2_u,l2_b,hm_u,hm_b,hs_u,hs_b,hsp1_diss,semi_dnu_neq_m2,semi_dnu_neq_m1,semi_dnu_neq_0,semi_dnb_neq_m2,semi_dnb_neq_m1,semi_dnb_neq_0,semi_ueq_m1,semi_ueq_0,semi_beq_m1,semi_beq_0,energy,enstrophy";

/// Every norm and seminorm of one time sample.
///
/// Homogeneous norms are written `Ḣ`, inhomogeneous ones `H`; `[f]_l` is the
/// seminorm restricted to one vertical class. "diss" is the dissipated field
/// of the regime (`u` with viscosity, `b` otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2_u: f64,
    pub l2_b: f64,
    /// `‖u‖_{Ḣ^m}`
    pub hm_u: f64,
    pub hm_b: f64,
    /// `‖u‖_{H^s}`
    pub hs_u: f64,
    pub hs_b: f64,
    /// `‖diss‖_{H^{s+1}}`
    pub hsp1_diss: f64,
    /// `[∂_n u_≠]_{−2}`
    pub semi_dnu_neq_m2: f64,
    pub semi_dnu_neq_m1: f64,
    pub semi_dnu_neq_0: f64,
    pub semi_dnb_neq_m2: f64,
    pub semi_dnb_neq_m1: f64,
    pub semi_dnb_neq_0: f64,
    /// `[u_=]_{−1}`
    pub semi_ueq_m1: f64,
    pub semi_ueq_0: f64,
    pub semi_beq_m1: f64,
    pub semi_beq_0: f64,
    /// `½(‖u‖²_{L²} + ‖b‖²_{L²})`
    pub energy: f64,
    /// `μ‖∇u‖² + ν‖∇b‖²`, the energy dissipation rate.
    pub enstrophy: f64,
    /// `‖u‖_{Ḣ^{−1}}`
    pub hm1_u: f64,
    pub hm1_b: f64,
    /// `‖u‖_{H^m}`
    pub hm_inh_u: f64,
    pub hm_inh_b: f64,
    /// `‖diss‖_{Ḣ^{m+1}}`
    pub hmp1_diss: f64,
    /// `‖diss‖_{H^{m+1}}`
    pub hmp1_inh_diss: f64,
}

impl DiagnosticsRecord {
    /// Values in [`CSV_HEADER`] order.
    pub fn csv_values(&self) -> [f64; 20] {
        [
            self.t,
            self.l2_u,
            self.l2_b,
            self.hm_u,
            self.hm_b,
            self.hs_u,
            self.hs_b,
            self.hsp1_diss,
            self.semi_dnu_neq_m2,
            self.semi_dnu_neq_m1,
            self.semi_dnu_neq_0,
            self.semi_dnb_neq_m2,
            self.semi_dnb_neq_m1,
            self.semi_dnb_neq_0,
            self.semi_ueq_m1,
            self.semi_ueq_0,
            self.semi_beq_m1,
            self.semi_beq_0,
            self.energy,
            self.enstrophy,
        ]
    }

    /// One table row with 17 significant digits per value.
    pub fn csv_row(&self) -> String {
        self.csv_values()
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn is_valid(&self) -> bool {
        self.csv_values().iter().all(|v| v.is_finite() && *v >= 0.0)
    }
}

/// Precomputed per-slot weights for every recorded quantity.
pub struct Recorder {
    dissipated: Dissipated,
    mu: f64,
    nu: f64,
    all: Vec<f64>,
    hm1: Vec<f64>,
    hm: Vec<f64>,
    hs: Vec<f64>,
    hsp1: Vec<f64>,
    hm_inh: Vec<f64>,
    hmp1: Vec<f64>,
    hmp1_inh: Vec<f64>,
    grad: Vec<f64>,
    dn_neq: [Vec<f64>; 3],
    eq: [Vec<f64>; 2],
}

impl Recorder {
    pub fn new(lattice: Lattice, s: f64, delta: f64, regime: Regime) -> Self {
        let m = s - 2.0 * delta - 1.0;
        let table = lattice.mode_table();
        let build = |rule: &dyn Fn(f64, f64, bool) -> f64| -> Vec<f64> {
            (0..lattice.len())
                .map(|i| match table.get(i) {
                    Some(k) => rule(
                        k.norm_sq(),
                        (k.vertical() * k.vertical()) as f64,
                        k.is_nonzero(),
                    ),
                    None => 0.0,
                })
                .collect()
        };
        let homogeneous = |l: f64| {
            move |k2: f64, _: f64, nz: bool| {
                if nz {
                    fractional_power(k2, 2.0 * l)
                } else {
                    0.0
                }
            }
        };
        let inhomogeneous = |l: f64| move |k2: f64, _: f64, _: bool| (1.0 + k2).powf(l);
        let dn = |l: f64| {
            move |k2: f64, kn2: f64, _: bool| {
                if kn2 > 0.0 {
                    kn2 * fractional_power(k2, 2.0 * l)
                } else {
                    0.0
                }
            }
        };
        let eq = |l: f64| {
            move |k2: f64, kn2: f64, nz: bool| {
                if nz && kn2 == 0.0 {
                    fractional_power(k2, 2.0 * l)
                } else {
                    0.0
                }
            }
        };
        Self {
            dissipated: regime.dissipated(),
            mu: regime.mu(),
            nu: regime.nu(),
            all: build(&|_, _, _| 1.0),
            hm1: build(&homogeneous(-1.0)),
            hm: build(&homogeneous(m)),
            hs: build(&inhomogeneous(s)),
            hsp1: build(&inhomogeneous(s + 1.0)),
            hm_inh: build(&inhomogeneous(m)),
            hmp1: build(&homogeneous(m + 1.0)),
            hmp1_inh: build(&inhomogeneous(m + 1.0)),
            grad: build(&homogeneous(1.0)),
            dn_neq: [build(&dn(-2.0)), build(&dn(-1.0)), build(&dn(0.0))],
            eq: [build(&eq(-1.0)), build(&eq(0.0))],
        }
    }

    pub fn record(&self, state: &MhdState) -> DiagnosticsRecord {
        let density = |f: &crate::spectral::SpectralField| -> Vec<f64> {
            (0..f.lattice().len())
                .map(|i| f.components().iter().map(|c| c[i].norm_sqr()).sum())
                .collect()
        };
        let eu = density(&state.u);
        let eb = density(&state.b);
        let sq = |w: &[f64], e: &[f64]| -> f64 {
            let terms: Vec<f64> = w.iter().zip(e).map(|(a, b)| a * b).collect();
            pairwise_sum(&terms)
        };
        let norm = |w: &[f64], e: &[f64]| sq(w, e).sqrt();
        let diss = match self.dissipated {
            Dissipated::Velocity => &eu,
            Dissipated::Magnetic => &eb,
        };
        let l2_u = norm(&self.all, &eu);
        let l2_b = norm(&self.all, &eb);
        let mut enstrophy = 0.0;
        if self.mu != 0.0 {
            enstrophy += self.mu * sq(&self.grad, &eu);
        }
        if self.nu != 0.0 {
            enstrophy += self.nu * sq(&self.grad, &eb);
        }
        DiagnosticsRecord {
            t: state.t,
            l2_u,
            l2_b,
            hm_u: norm(&self.hm, &eu),
            hm_b: norm(&self.hm, &eb),
            hs_u: norm(&self.hs, &eu),
            hs_b: norm(&self.hs, &eb),
            hsp1_diss: norm(&self.hsp1, diss),
            semi_dnu_neq_m2: norm(&self.dn_neq[0], &eu),
            semi_dnu_neq_m1: norm(&self.dn_neq[1], &eu),
            semi_dnu_neq_0: norm(&self.dn_neq[2], &eu),
            semi_dnb_neq_m2: norm(&self.dn_neq[0], &eb),
            semi_dnb_neq_m1: norm(&self.dn_neq[1], &eb),
            semi_dnb_neq_0: norm(&self.dn_neq[2], &eb),
            semi_ueq_m1: norm(&self.eq[0], &eu),
            semi_ueq_0: norm(&self.eq[1], &eu),
            semi_beq_m1: norm(&self.eq[0], &eb),
            semi_beq_0: norm(&self.eq[1], &eb),
            energy: 0.5 * (l2_u * l2_u + l2_b * l2_b),
            enstrophy,
            hm1_u: norm(&self.hm1, &eu),
            hm1_b: norm(&self.hm1, &eb),
            hm_inh_u: norm(&self.hm_inh, &eu),
            hm_inh_b: norm(&self.hm_inh, &eb),
            hmp1_diss: norm(&self.hmp1, diss),
            hmp1_inh_diss: norm(&self.hmp1_inh, diss),
        }
    }
}

/// One-off record; build a [`Recorder`] when sampling a whole history.
pub fn record(state: &MhdState, s: f64, delta: f64, regime: Regime) -> DiagnosticsRecord {
    Recorder::new(state.lattice(), s, delta, regime).record(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_field;
    use crate::spectral::{apply_multiplier, seminorm, MultiplierSpec, NormKind, WaveVector};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-13 * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn header_has_twenty_columns() {
        assert_eq!(CSV_HEADER.split(',').count(), 20);
        assert_eq!(
            DiagnosticsRecord::default().csv_row().split(',').count(),
            20
        );
    }

    #[test]
    fn matches_seminorm_evaluators() {
        let lat = Lattice::new(2, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_field(lat, 2, 5, 1.0, &mut rng);
        let b = random_field(lat, 2, 5, 1.0, &mut rng);
        let state = MhdState::new(u.clone(), b.clone(), Regime::NonResistive).unwrap();
        let (s, delta) = (5.0, 0.1);
        let m = s - 2.0 * delta - 1.0;
        let r = record(&state, s, delta, Regime::NonResistive);

        let dn = |f| apply_multiplier(f, &MultiplierSpec::Derivative { axis: 1 }).unwrap();
        let (du, db) = (dn(&u), dn(&b));
        let expect = [
            (
                r.l2_u,
                seminorm(&u, 0.0, NormKind::FullInhomogeneous).unwrap(),
            ),
            (r.hm_b, seminorm(&b, m, NormKind::FullHomogeneous).unwrap()),
            (
                r.hs_u,
                seminorm(&u, s, NormKind::FullInhomogeneous).unwrap(),
            ),
            (
                r.hsp1_diss,
                seminorm(&u, s + 1.0, NormKind::FullInhomogeneous).unwrap(),
            ),
            (
                r.semi_dnu_neq_m2,
                seminorm(&du, -2.0, NormKind::Neq).unwrap(),
            ),
            (
                r.semi_dnb_neq_m1,
                seminorm(&db, -1.0, NormKind::Neq).unwrap(),
            ),
            (r.semi_dnb_neq_0, seminorm(&db, 0.0, NormKind::Neq).unwrap()),
            (r.semi_ueq_m1, seminorm(&u, -1.0, NormKind::Eq).unwrap()),
            (r.semi_beq_0, seminorm(&b, 0.0, NormKind::Eq).unwrap()),
            (
                r.hm1_b,
                seminorm(&b, -1.0, NormKind::FullHomogeneous).unwrap(),
            ),
            (
                r.hm_inh_u,
                seminorm(&u, m, NormKind::FullInhomogeneous).unwrap(),
            ),
            (
                r.hmp1_diss,
                seminorm(&u, m + 1.0, NormKind::FullHomogeneous).unwrap(),
            ),
            (
                r.enstrophy,
                seminorm(&u, 1.0, NormKind::FullHomogeneous)
                    .unwrap()
                    .powi(2),
            ),
        ];
        for (i, (got, want)) in expect.iter().enumerate() {
            assert!(close(*got, *want), "entry {i}: {got} vs {want}");
        }
        assert!(r.is_valid());
    }

    #[test]
    fn single_mode_values() {
        // u = (cos x_2, 0): û_1(0, ±1) = 1/2
        let lat = Lattice::new(2, 8).unwrap();
        let mut st = MhdState::zero(lat, Regime::NonResistive);
        st.u.set(0, &WaveVector::new([0, 1]), Complex64::new(0.5, 0.0))
            .unwrap();
        st.u.set(0, &WaveVector::new([0, -1]), Complex64::new(0.5, 0.0))
            .unwrap();
        let r = record(&st, 5.0, 0.1, Regime::NonResistive);
        assert!(close(r.l2_u, 0.5f64.sqrt()));
        assert!(close(r.energy, 0.25));
        assert!(close(r.enstrophy, 0.5));
        assert!(close(r.hs_u, (0.5f64 * 2f64.powi(5)).sqrt()));
        assert_eq!(r.semi_ueq_0, 0.0);
        assert!(close(r.semi_dnu_neq_0, 0.5f64.sqrt()));
    }

    #[test]
    fn zero_state_records_zeros() {
        let lat = Lattice::new(2, 8).unwrap();
        let r = record(
            &MhdState::zero(lat, Regime::NonViscous),
            7.5,
            0.1,
            Regime::NonViscous,
        );
        assert!(r.csv_values().iter().all(|&v| v == 0.0));
        assert!(r
            .csv_row()
            .split(',')
            .all(|v| v.parse::<f64>().unwrap() == 0.0));
    }
}
