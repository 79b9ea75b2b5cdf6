//! Exact per-mode linear propagator.
//!
//! For each mode `k ≠ 0` and each Cartesian component, the pair
//! `(û_j, b̂_j)` obeys `d/dt (û, b̂) = A(k) (û, b̂)` with
//!
//! ```text
//! A(k) = [ −μ|k|²    i k_n  ]
//!        [  i k_n   −ν|k|²  ]
//! ```
//!
//! Writing `A = c·I + B` with `c = −(μ+ν)|k|²/2`, `B² = Δ·I` and
//! `Δ = (μ−ν)²|k|⁴/4 − k_n²`, the exponential is
//! `e^{ct} (C(t) I + S(t) B)` where `(C, S) = (cosh √Δ t, sinh(√Δ t)/√Δ)`,
//! `(cos ωt, sin(ωt)/ω)` with `ω = √−Δ`, or `(1, t)` in the defective case.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::WaveVector;

pub type Matrix2 = [[Complex64; 2]; 2];

pub const IDENTITY: Matrix2 = [
    [
        Complex64 { re: 1.0, im: 0.0 },
        Complex64 { re: 0.0, im: 0.0 },
    ],
    [
        Complex64 { re: 0.0, im: 0.0 },
        Complex64 { re: 1.0, im: 0.0 },
    ],
];

/// The generator `A(k)`.
pub fn generator(k: &WaveVector, mu: f64, nu: f64) -> Matrix2 {
    let k2 = k.norm_sq();
    let kn = k.vertical() as f64;
    [
        [Complex64::new(-mu * k2, 0.0), Complex64::new(0.0, kn)],
        [Complex64::new(0.0, kn), Complex64::new(-nu * k2, 0.0)],
    ]
}

/// `exp(dt · A(k))`.
pub fn linear_propagator(k: &WaveVector, dt: f64, mu: f64, nu: f64) -> Result<Matrix2> {
    if !k.is_nonzero() {
        return Err(Error::ZeroMode(
            "the linear propagator is defined for k ≠ 0",
        ));
    }
    Ok(propagator_from(
        k.norm_sq(),
        k.vertical() as f64,
        dt,
        mu,
        nu,
    ))
}

pub(crate) fn propagator_from(k2: f64, kn: f64, t: f64, mu: f64, nu: f64) -> Matrix2 {
    if t == 0.0 {
        return IDENTITY;
    }
    let a = -mu * k2;
    let d = -nu * k2;
    let centre = 0.5 * (a + d);
    let h = 0.5 * (a - d);
    let disc = h * h - kn * kn;

    let b01 = Complex64::new(0.0, kn);
    if disc > 0.0 {
        // real eigenvalues c ± r; diagonal entries are slow·p + fast·q and
        // slow·q + fast·p with p = (r+h)/2r, q = (r−h)/2r, p + q = 1
        let r = disc.sqrt();
        let slow = ((centre + r) * t).exp();
        let fast = ((centre - r) * t).exp();
        let growth = (2.0 * r * t).exp_m1();
        let (p, q) = if h >= 0.0 {
            ((r + h) / (2.0 * r), -kn * kn / (2.0 * r * (r + h)))
        } else {
            (-kn * kn / (2.0 * r * (r - h)), (r - h) / (2.0 * r))
        };
        let (d0, d1, es) = if 2.0 * r * t > 1.0 {
            (
                slow * p + fast * q,
                slow * q + fast * p,
                (slow - fast) / (2.0 * r),
            )
        } else {
            (
                fast * (p * growth + 1.0),
                fast * (q * growth + 1.0),
                fast * growth / (2.0 * r),
            )
        };
        let off = b01 * es;
        return [
            [Complex64::new(d0, 0.0), off],
            [off, Complex64::new(d1, 0.0)],
        ];
    }

    // e^{ct}·C and e^{ct}·S
    let (ec, es) = if disc < 0.0 {
        let w = (-disc).sqrt();
        let e = (centre * t).exp();
        (e * (w * t).cos(), e * (w * t).sin() / w)
    } else {
        let e = (centre * t).exp();
        (e, e * t)
    };

    let b00 = Complex64::new(h, 0.0);
    let ecc = Complex64::new(ec, 0.0);
    [[ecc + b00 * es, b01 * es], [b01 * es, ecc - b00 * es]]
}

pub fn apply(m: &Matrix2, u: Complex64, b: Complex64) -> (Complex64, Complex64) {
    (m[0][0] * u + m[0][1] * b, m[1][0] * u + m[1][1] * b)
}
