//! Commutator of `Λ^{−s} Op` with multiplication, and its four case bounds.
//!
//! For mean-zero `f, g` and `Op` either a partial root `(−Δ_J)^{1/2}` or a
//! first derivative,
//!
//! ```text
//! L = ‖Λ^{−s} Op(fg) − f · Λ^{−s} Op(g)‖_{Ḣ^{−l}}
//! ```
//!
//! where the `k = 0` coefficient of the difference is discarded. Products
//! are dealiased, so `L` is exact for the part of `fg` on the retained
//! lattice.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::random::random_field;
use crate::spectral::{
    apply_multiplier, seminorm, Lattice, MultiplierSpec, NormKind, SpectralField, Transformer,
};

/// The first-order operator inside the commutator. Axes are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommutatorOp {
    /// `(−Δ_J)^{1/2}` for a nonempty proper subset `J` of the axes.
    PartialLaplacianRoot {
        axes: Vec<usize>,
    },
    Derivative {
        axis: usize,
    },
}

impl CommutatorOp {
    pub fn multiplier(&self) -> MultiplierSpec {
        match self {
            CommutatorOp::PartialLaplacianRoot { axes } => {
                MultiplierSpec::PartialLaplacianRoot { axes: axes.clone() }
            }
            CommutatorOp::Derivative { axis } => MultiplierSpec::Derivative { axis: *axis },
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            CommutatorOp::PartialLaplacianRoot { axes } => {
                let mut sorted = axes.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.is_empty()
                    || sorted.len() != axes.len()
                    || sorted.len() >= n
                    || sorted.iter().any(|&a| a >= n)
                {
                    return Err(Error::CasePrecondition(format!(
                        "J = {axes:?} must be a nonempty proper subset of the axes 0..{n} without repeats"
                    )));
                }
            }
            CommutatorOp::Derivative { axis } => {
                if *axis >= n {
                    return Err(Error::CasePrecondition(format!(
                        "derivative axis {axis} out of range 0..{n}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            CommutatorOp::PartialLaplacianRoot { axes } => {
                let list: Vec<String> = axes.iter().map(|a| a.to_string()).collect();
                format!("partial_root[{}]", list.join(" "))
            }
            CommutatorOp::Derivative { axis } => format!("derivative[{axis}]"),
        }
    }
}

/// The case whose hypotheses `(s, l)` satisfy in dimension `n`, if any.
pub fn classify(n: usize, s: f64, l: f64) -> Option<u8> {
    let half = n as f64 / 2.0;
    if !(l >= 0.0) || !(s > 0.0) {
        return None;
    }
    let low = s + l > 0.0 && s + l <= half;
    match (s >= 1.0, low) {
        (true, true) if s <= half => Some(1),
        (true, false) => Some(2),
        (false, true) => Some(3),
        (false, false) => Some(4),
        _ => None,
    }
}

/// Checks the hypotheses of `case`, naming the first violated inequality.
pub fn check_case(n: usize, s: f64, l: f64, eta: f64, case: u8) -> Result<()> {
    let half = n as f64 / 2.0;
    let fail = |what: String| Err(Error::CasePrecondition(format!("case {case}: {what}")));
    if !(eta > 0.0 && eta < 1.0) {
        return fail(format!("requires 0 < eta < 1, got eta = {eta}"));
    }
    if !(l >= 0.0) {
        return fail(format!("requires l >= 0, got l = {l}"));
    }
    let sl = s + l;
    match case {
        1 | 2 => {
            if !(s >= 1.0) {
                return fail(format!("requires s >= 1, got s = {s}"));
            }
        }
        3 | 4 => {
            if !(s > 0.0 && s < 1.0) {
                return fail(format!("requires 0 < s < 1, got s = {s}"));
            }
        }
        _ => {
            return Err(Error::CasePrecondition(format!(
                "unknown case {case}; expected 1 to 4"
            )))
        }
    }
    if case == 1 && !(s <= half) {
        return fail(format!("requires s <= n/2 = {half}, got s = {s}"));
    }
    match case {
        1 | 3 => {
            if !(sl > 0.0 && sl <= half) {
                return fail(format!(
                    "requires 0 < s + l <= n/2 = {half}, got s + l = {sl}"
                ));
            }
        }
        _ => {
            if !(sl > half) {
                return fail(format!("requires s + l > n/2 = {half}, got s + l = {sl}"));
            }
        }
    }
    Ok(())
}

fn ensure_mean_zero(f: &SpectralField, name: &str) -> Result<()> {
    if !f.is_scalar() {
        return Err(Error::ExpectedScalar("commutator operands"));
    }
    if !f.is_mean_zero() {
        return Err(Error::NonzeroMean {
            mean: f.mean_magnitude(),
            context: format!("commutator operand {name} must have zero mean"),
        });
    }
    Ok(())
}

fn lhs_with(
    transformer: &Transformer,
    f: &SpectralField,
    g: &SpectralField,
    s: f64,
    l: f64,
    op: &CommutatorOp,
) -> Result<f64> {
    ensure_mean_zero(f, "f")?;
    ensure_mean_zero(g, "g")?;
    op.validate(f.dim())?;
    let m = op.multiplier();
    let inverse = MultiplierSpec::FractionalLaplacian { s: -s };
    let first = apply_multiplier(
        &apply_multiplier(&transformer.product(f, g)?, &m)?,
        &inverse,
    )?;
    let inner = apply_multiplier(&apply_multiplier(g, &m)?, &inverse)?;
    let mut diff = first.sub(&transformer.product(f, &inner)?)?;
    diff.zero_mean();
    seminorm(&diff, -l, NormKind::FullHomogeneous)
}

/// `L` for scalar mean-zero `f, g`.
pub fn commutator_lhs(
    f: &SpectralField,
    g: &SpectralField,
    s: f64,
    l: f64,
    op: &CommutatorOp,
) -> Result<f64> {
    f.ensure_same_lattice(g)?;
    lhs_with(&Transformer::dealiasing(f.lattice()), f, g, s, l, op)
}

/// The right-hand side of the case bound, without the implied constant.
pub fn commutator_rhs(
    f: &SpectralField,
    g: &SpectralField,
    s: f64,
    l: f64,
    eta: f64,
    case: u8,
    op: &CommutatorOp,
) -> Result<f64> {
    f.ensure_same_lattice(g)?;
    ensure_mean_zero(f, "f")?;
    ensure_mean_zero(g, "g")?;
    let n = f.dim();
    op.validate(n)?;
    check_case(n, s, l, eta, case)?;
    let m = op.multiplier();
    let opf = apply_multiplier(f, &m)?;
    let opg = apply_multiplier(g, &m)?;
    let norm = |h: &SpectralField, order: f64| seminorm(h, order, NormKind::FullHomogeneous);
    let nh = (n as f64 + eta) / 2.0;
    let inv_root_eta = eta.powf(-0.5);
    let low_part = || -> Result<f64> {
        Ok(inv_root_eta
            * (norm(&opg, -s - l - 1.0)? * norm(f, nh + 1.0)? + norm(&opf, -s - l)? * norm(g, nh)?))
    };
    let high_part = || -> Result<f64> {
        Ok(norm(&opg, -s - l - 1.0)? * norm(f, s + l + 1.0)?
            + norm(&opf, -s - l)? * norm(g, s + l)?)
    };
    let fractional_part =
        || -> Result<f64> { Ok(inv_root_eta * norm(&opg, -2.0 * s - l)? * norm(f, nh + s)?) };
    match case {
        1 => low_part(),
        2 => high_part(),
        3 => Ok(low_part()? + fractional_part()?),
        _ => Ok(high_part()? + fractional_part()?),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorSample {
    pub n: usize,
    pub resolution: usize,
    pub case: u8,
    pub s: f64,
    pub l: f64,
    pub eta: f64,
    pub op: CommutatorOp,
    /// Spectral slope of the random operands.
    pub slope: f64,
    pub seed: u64,
    pub trial: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl CommutatorSample {
    pub const CSV_HEADER: &'static str =
        "n,resolution,case,s,l,eta,op,slope,seed,trial,lhs,rhs,ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.16e},{:.16e},{:.16e}",
            self.n,
            self.resolution,
            self.case,
            self.s,
            self.l,
            self.eta,
            self.op.label(),
            self.slope,
            self.seed,
            self.trial,
            self.lhs,
            self.rhs,
            self.ratio
        )
    }
}

/// One `(n, case, s, l, Op)` cell of a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignCell {
    pub n: usize,
    pub case: u8,
    pub s: f64,
    pub l: f64,
    pub op: CommutatorOp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSettings {
    /// Random operand pairs per resolution.
    pub trials: usize,
    pub resolutions: Vec<usize>,
    pub etas: Vec<f64>,
    /// Spectral slopes cycled over trials; `None` uses `{0, 1, (n+2)/2}`.
    pub slopes: Option<Vec<f64>>,
    pub seed: u64,
}

impl Default for CampaignSettings {
    fn default() -> Self {
        Self {
            trials: 100,
            resolutions: vec![16, 32],
            etas: vec![0.1, 0.25, 0.5],
            slopes: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub cell: CampaignCell,
    pub samples: usize,
    pub all_finite: bool,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// `(resolution, max ratio)` in the order of the settings.
    pub per_resolution_max: Vec<(usize, f64)>,
}

impl CampaignStats {
    /// Largest ratio of consecutive per-resolution maxima.
    pub fn max_growth(&self) -> f64 {
        self.per_resolution_max
            .windows(2)
            .map(|w| w[1].1 / w[0].1)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Default valid cells for dimension `n`: two `(s, l)` pairs per case where
/// the case admits them, with `Op = (−Δ_{x_1})^{1/2}`.
pub fn default_cells(n: usize) -> Vec<CampaignCell> {
    let pairs: &[(u8, f64, f64)] = match n {
        2 => &[
            (1, 1.0, 0.0),
            (2, 1.0, 1.0),
            (2, 1.5, 0.5),
            (3, 0.5, 0.0),
            (3, 0.5, 0.5),
            (4, 0.5, 1.0),
            (4, 0.75, 1.5),
        ],
        _ => &[
            (1, 1.0, 0.0),
            (1, 1.0, 0.5),
            (2, 1.0, 1.0),
            (2, 2.0, 0.5),
            (3, 0.5, 0.5),
            (3, 0.5, 1.0),
            (4, 0.5, 1.5),
            (4, 0.75, 2.0),
        ],
    };
    pairs
        .iter()
        .filter(|(case, s, l)| classify(n, *s, *l) == Some(*case))
        .map(|&(case, s, l)| CampaignCell {
            n,
            case,
            s,
            l,
            op: CommutatorOp::PartialLaplacianRoot { axes: vec![0] },
        })
        .collect()
}

/// Random mean-zero pairs `|f̂(k)| = |k|^{−a}` with band `N/3`; one `L` per
/// pair, one ratio per `η`. Trials run in parallel, each from its own
/// stream of the seeded generator, so results do not depend on scheduling.
pub fn ratio_campaign(
    cell: &CampaignCell,
    settings: &CampaignSettings,
) -> Result<(CampaignStats, Vec<CommutatorSample>)> {
    cell.op.validate(cell.n)?;
    for &eta in &settings.etas {
        check_case(cell.n, cell.s, cell.l, eta, cell.case)?;
    }
    if settings.trials == 0 || settings.resolutions.is_empty() || settings.etas.is_empty() {
        return Err(Error::InvalidArgument(
            "campaign needs trials, resolutions and eta values".into(),
        ));
    }
    let slopes = settings
        .slopes
        .clone()
        .unwrap_or_else(|| vec![0.0, 1.0, (cell.n as f64 + 2.0) / 2.0]);
    let mut samples = Vec::new();
    let mut per_resolution_max = Vec::new();
    for &resolution in &settings.resolutions {
        let lattice = Lattice::new(cell.n, resolution)?;
        let transformer = Transformer::dealiasing(lattice);
        let band = (resolution / 3) as i64;
        let batch: Vec<Vec<CommutatorSample>> = (0..settings.trials as u64)
            .into_par_iter()
            .map(|trial| -> Result<Vec<CommutatorSample>> {
                let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
                rng.set_stream(trial);
                let slope = slopes[trial as usize % slopes.len()];
                let f = random_field(lattice, 1, band, slope, &mut rng);
                let g = random_field(lattice, 1, band, slope, &mut rng);
                let lhs = lhs_with(&transformer, &f, &g, cell.s, cell.l, &cell.op)?;
                settings
                    .etas
                    .iter()
                    .map(|&eta| {
                        let rhs = commutator_rhs(&f, &g, cell.s, cell.l, eta, cell.case, &cell.op)?;
                        Ok(CommutatorSample {
                            n: cell.n,
                            resolution,
                            case: cell.case,
                            s: cell.s,
                            l: cell.l,
                            eta,
                            op: cell.op.clone(),
                            slope,
                            seed: settings.seed,
                            trial,
                            lhs,
                            rhs,
                            ratio: lhs / rhs,
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let batch: Vec<CommutatorSample> = batch.into_iter().flatten().collect();
        let max = batch
            .iter()
            .map(|x| x.ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        per_resolution_max.push((resolution, max));
        samples.extend(batch);
    }
    let all_finite = samples
        .iter()
        .all(|x| x.ratio.is_finite() && x.ratio >= 0.0);
    let max_ratio = samples
        .iter()
        .map(|x| x.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let mean_ratio = samples.iter().map(|x| x.ratio).sum::<f64>() / samples.len() as f64;
    Ok((
        CampaignStats {
            cell: cell.clone(),
            samples: samples.len(),
            all_finite,
            max_ratio,
            mean_ratio,
            per_resolution_max,
        },
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::WaveVector;
    use num_complex::Complex64;

    fn j1() -> CommutatorOp {
        CommutatorOp::PartialLaplacianRoot { axes: vec![0] }
    }

    fn mode(lat: Lattice, k: [i64; 2]) -> SpectralField {
        SpectralField::single_mode(lat, &WaveVector::new(k), Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn single_mode_pair() {
        let lat = Lattice::new(2, 8).unwrap();
        let (f, g) = (mode(lat, [1, 0]), mode(lat, [0, 1]));
        let l = commutator_lhs(&f, &g, 1.0, 1.0, &j1()).unwrap();
        assert!((l - 0.5).abs() < 1e-15);
        let r = commutator_rhs(&f, &g, 1.0, 0.0, 0.5, 1, &j1()).unwrap();
        assert!(r.is_finite() && r > 0.0);
    }

    #[test]
    fn vertical_cosine_is_annihilated() {
        let lat = Lattice::new(2, 8).unwrap();
        let mut f = SpectralField::zero_scalar(lat);
        f.set(0, &WaveVector::new([0, 1]), Complex64::new(1.0, 0.0))
            .unwrap();
        f.set(0, &WaveVector::new([0, -1]), Complex64::new(1.0, 0.0))
            .unwrap();
        assert_eq!(commutator_lhs(&f, &f, 1.0, 1.0, &j1()).unwrap(), 0.0);
    }

    #[test]
    fn zero_operand_gives_zero() {
        let lat = Lattice::new(2, 8).unwrap();
        let f = mode(lat, [1, 2]);
        let g = SpectralField::zero_scalar(lat);
        assert_eq!(commutator_lhs(&f, &g, 1.0, 1.0, &j1()).unwrap(), 0.0);
        assert_eq!(
            commutator_rhs(&f, &g, 1.0, 1.0, 0.5, 2, &j1()).unwrap(),
            0.0
        );
    }

    #[test]
    fn nonzero_mean_rejected() {
        let lat = Lattice::new(2, 8).unwrap();
        let f = SpectralField::single_mode(lat, &WaveVector::zero(2), Complex64::new(1.0, 0.0))
            .unwrap();
        let g = mode(lat, [1, 0]);
        assert!(matches!(
            commutator_lhs(&f, &g, 1.0, 0.0, &j1()),
            Err(Error::NonzeroMean { .. })
        ));
    }

    #[test]
    fn case_preconditions() {
        assert_eq!(classify(2, 1.0, 0.0), Some(1));
        assert_eq!(classify(2, 1.0, 1.0), Some(2));
        assert_eq!(classify(2, 0.5, 0.5), Some(3));
        assert_eq!(classify(2, 0.5, 1.0), Some(4));
        assert_eq!(classify(3, 1.5, 0.0), Some(1));
        assert_eq!(classify(3, 2.0, 0.0), Some(2));
        check_case(2, 1.0, 0.0, 0.5, 1).unwrap();
        let err = check_case(2, 1.0, 1.0, 0.5, 1).unwrap_err().to_string();
        assert!(err.contains("s + l <= n/2"), "{err}");
        assert!(check_case(2, 0.5, 0.0, 1.0, 3)
            .unwrap_err()
            .to_string()
            .contains("eta"));
        assert!(check_case(2, 1.0, 0.0, 0.5, 3)
            .unwrap_err()
            .to_string()
            .contains("0 < s < 1"));
        assert!(CommutatorOp::PartialLaplacianRoot { axes: vec![0, 1] }
            .validate(2)
            .is_err());
        assert!(CommutatorOp::PartialLaplacianRoot { axes: vec![] }
            .validate(2)
            .is_err());
    }

    #[test]
    fn default_cells_are_valid() {
        for n in [2, 3] {
            let cells = default_cells(n);
            for case in 1..=4 {
                assert!(cells.iter().any(|c| c.case == case), "n={n} case {case}");
            }
        }
    }

    #[test]
    fn campaign_is_deterministic() {
        let cell = default_cells(2)[1].clone();
        let settings = CampaignSettings {
            trials: 6,
            resolutions: vec![8, 16],
            ..Default::default()
        };
        let (a, sa) = ratio_campaign(&cell, &settings).unwrap();
        let (b, sb) = ratio_campaign(&cell, &settings).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert!(a.all_finite);
        assert_eq!(a.samples, 6 * 2 * 3);
    }
}
