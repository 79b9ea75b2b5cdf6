//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! straight to stdout (so it is visible without `--nocapture`), and the test
//! fails if any criterion fails.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mhdlab::commutator::{
    commutator_lhs, commutator_rhs, default_cells, ratio_campaign, CampaignCell, CampaignSettings,
    CommutatorOp,
};
use mhdlab::diagnostics::study::{decay_checks, growth_check, scaling_check};
use mhdlab::diagnostics::{
    assemble_functionals, energy_balance_residual, CheckOutcome, StudySettings,
};
use mhdlab::solver::{run, run_observed, MhdState, Regime, RunConfig, StepOptions, Stepper};
use mhdlab::spectral::random::{random_field, random_uniform_field};
use mhdlab::spectral::{dealiased_product, seminorm, Lattice, NormKind, SpectralField, WaveVector};
use mhdlab::symmetry::{check_spectral_constraint, check_symmetry, SymmetryClass};

type Verdict = Result<String, String>;

fn report(id: usize, name: &str, verdict: &Verdict, seconds: f64) {
    let (tag, detail) = match verdict {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "criterion {id} [{name}]: {tag} ({seconds:.1} s) {detail}"
    )
    .unwrap();
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn config(regime: Regime, symmetry: SymmetryClass, s: f64, epsilon: f64, seed: u64) -> RunConfig {
    RunConfig {
        n: 2,
        resolution: 32,
        regime,
        symmetry,
        s,
        delta: 0.1,
        epsilon,
        dt: None,
        t_final: 200.0,
        band_limit: 4,
        seed,
        output_every: 10,
        initial_slope: 2.0,
        resymmetrize: false,
        nonlinear: true,
    }
}

// ---------------------------------------------------------------- criterion 1

type Mat = [[Complex64; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[Complex64::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `exp(tA)` by Sylvester's formula on the eigenvalues of `A`, falling back
/// to a scaled Taylor series when they nearly coincide.
fn expm_oracle(a: &Mat, t: f64) -> Mat {
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let root = (tr * tr * 0.25 - det).sqrt();
    let (l1, l2) = (tr * 0.5 + root, tr * 0.5 - root);
    let id = |z: Complex64| -> Mat { [[z, Complex64::default()], [Complex64::default(), z]] };
    if (l1 - l2).norm() * t > 1e-3 {
        let (e1, e2) = ((l1 * t).exp(), (l2 * t).exp());
        let mut out = [[Complex64::default(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let p1 = a[i][j] - id(l2)[i][j];
                let p2 = a[i][j] - id(l1)[i][j];
                out[i][j] = e1 * p1 / (l1 - l2) + e2 * p2 / (l2 - l1);
            }
        }
        return out;
    }
    let norm: f64 = a.iter().flatten().map(|z| z.norm()).sum::<f64>() * t;
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let h = t / 2f64.powi(squarings);
    let x: Mat = [[a[0][0] * h, a[0][1] * h], [a[1][0] * h, a[1][1] * h]];
    let mut result = id(Complex64::new(1.0, 0.0));
    let mut term = result;
    for i in 1..25 {
        term = mat_mul(&term, &x);
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z /= i as f64;
            }
        }
        for r in 0..2 {
            for c in 0..2 {
                result[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

fn random_perpendicular(k: &WaveVector, rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    // (−k_2, k_1) spans k^⊥ in two dimensions
    let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    [a * (-(k[1] as f64)), a * k[0] as f64]
}

fn criterion_1() -> Verdict {
    let lat = Lattice::new(2, 32).unwrap();
    let (dt, big_t): (f64, f64) = (1e-2, 5.0);
    let steps = (big_t / dt).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut count = 0;
    for regime in [Regime::NonResistive, Regime::NonViscous] {
        let (mu, nu) = (regime.mu(), regime.nu());
        let options = StepOptions {
            nonlinear: false,
            resymmetrize: None,
        };
        let stepper = Stepper::new(lat, mu, nu, dt, options).unwrap();
        for _ in 0..50 {
            let k = loop {
                let k = WaveVector::new([rng.gen_range(-15..=15), rng.gen_range(-15..=15)]);
                if k.is_nonzero() {
                    break k;
                }
            };
            let u0 = random_perpendicular(&k, &mut rng);
            let b0 = random_perpendicular(&k, &mut rng);
            let mut state = MhdState::zero(lat, regime);
            for c in 0..2 {
                state.u.set(c, &k, u0[c]).unwrap();
                state.u.set(c, &k.neg(), u0[c].conj()).unwrap();
                state.b.set(c, &k, b0[c]).unwrap();
                state.b.set(c, &k.neg(), b0[c].conj()).unwrap();
            }
            for _ in 0..steps {
                state = stepper.step(&state).unwrap();
            }
            let k2 = k.norm_sq();
            let kn = k[1] as f64;
            let a: Mat = [
                [Complex64::new(-mu * k2, 0.0), Complex64::new(0.0, kn)],
                [Complex64::new(0.0, kn), Complex64::new(-nu * k2, 0.0)],
            ];
            let e = expm_oracle(&a, big_t);
            let mut err = 0.0;
            let mut size = 0.0;
            for c in 0..2 {
                let ue = e[0][0] * u0[c] + e[0][1] * b0[c];
                let be = e[1][0] * u0[c] + e[1][1] * b0[c];
                err += (state.u.get(c, &k) - ue).norm_sqr() + (state.b.get(c, &k) - be).norm_sqr();
                size += ue.norm_sqr() + be.norm_sqr();
            }
            worst = worst.max((err / size).sqrt());
            count += 1;
        }
    }
    verdict(
        worst <= 1e-12,
        format!("{count} single-mode runs, max relative error {worst:.3e} (limit 1e-12)"),
    )
}

// ---------------------------------------------------------------- criterion 2

fn criterion_2() -> Verdict {
    let cfg = RunConfig {
        resolution: 64,
        t_final: 50.0,
        ..config(Regime::NonResistive, SymmetryClass::Sym1, 5.0, 1e-3, 7)
    };
    let (mut div, mut herm, mut sym, mut constraint) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut mean_exact = true;
    let mut states = 0usize;
    let out = run_observed(&cfg, |s| {
        div = div.max(s.divergence_defect());
        herm = herm.max(s.hermitian_defect());
        sym = sym.max(check_symmetry(s, cfg.symmetry));
        constraint = constraint.max(check_spectral_constraint(s, cfg.regime, cfg.symmetry));
        mean_exact &= s.is_mean_zero();
        states += 1;
        Ok(())
    });
    if let Err(e) = out {
        return Err(format!("run failed: {e}"));
    }
    let ok = div <= 1e-12 && herm <= 1e-13 && sym <= 1e-10 && constraint <= 1e-10 && mean_exact;
    verdict(
        ok,
        format!(
            "{states} states: divergence {div:.2e}, hermitian {herm:.2e}, symmetry {sym:.2e}, constraint {constraint:.2e}, mean exactly zero: {mean_exact}"
        ),
    )
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (regime, symmetry, s) in [
        (Regime::NonResistive, SymmetryClass::Sym1, 5.0),
        (Regime::NonViscous, SymmetryClass::Sym2, 7.5),
    ] {
        let mut residuals = Vec::new();
        for dt in [2e-3, 1e-3, 5e-4] {
            let cfg = RunConfig {
                dt: Some(dt),
                t_final: 10.0,
                output_every: 1,
                ..config(regime, symmetry, s, 1e-3, 3)
            };
            match run(&cfg) {
                Ok(out) => residuals.push(energy_balance_residual(&out.history).abs()),
                Err(e) => return Err(format!("{}: run failed: {e}", regime.name())),
            }
        }
        let r1 = residuals[0] / residuals[1];
        let r2 = residuals[1] / residuals[2];
        let good = (3.2..=4.8).contains(&r1) && (3.2..=4.8).contains(&r2) && residuals[1] <= 1e-8;
        ok &= good;
        lines.push(format!(
            "{}: residuals {:.3e}/{:.3e}/{:.3e}, ratios {r1:.3}/{r2:.3}",
            regime.name(),
            residuals[0],
            residuals[1],
            residuals[2]
        ));
    }
    verdict(ok, lines.join("; "))
}

// ---------------------------------------------------------- criteria 4 to 7

struct StudyData {
    settings: StudySettings,
    runs: Vec<(f64, u64, Vec<mhdlab::diagnostics::DiagnosticsRecord>)>,
}

fn study(
    regime: Regime,
    symmetry: SymmetryClass,
    s: f64,
    epsilons: &[f64],
) -> Result<StudyData, String> {
    let mut runs = Vec::new();
    for &eps in epsilons {
        for seed in [1, 2, 3] {
            let out = run(&config(regime, symmetry, s, eps, seed))
                .map_err(|e| format!("eps={eps}, seed={seed}: {e}"))?;
            runs.push((eps, seed, out.history));
        }
    }
    Ok(StudyData {
        settings: StudySettings::new(s, 0.1, regime),
        runs,
    })
}

fn summarize(checks: &[CheckOutcome]) -> Verdict {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} = {:.4} > {} ({})", c.name, c.value, c.limit, c.detail))
        .collect();
    let worst = checks
        .iter()
        .map(|c| c.value)
        .fold(f64::NEG_INFINITY, f64::max);
    if failed.is_empty() {
        Ok(format!("{} checks, worst value {worst:.4}", checks.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn stability_checks(data: &StudyData) -> Result<Vec<CheckOutcome>, String> {
    let st = &data.settings;
    let psi = st.regime.dissipated() == mhdlab::solver::Dissipated::Magnetic;
    let mut sups = Vec::new();
    let mut totals = Vec::new();
    for (eps, _, history) in &data.runs {
        let sup = history
            .iter()
            .map(|r| {
                if psi {
                    r.hm_inh_u + r.hm_inh_b
                } else {
                    r.hm_u + r.hm_b
                }
            })
            .fold(0.0, f64::max);
        sups.push((*eps, sup));
        let report =
            assemble_functionals(history, st.s, st.delta, st.regime).map_err(|e| e.to_string())?;
        totals.push((*eps, report.total));
    }
    Ok(vec![
        scaling_check("sup norm / eps", &sups, 1, st.scaling_tolerance),
        scaling_check("functional total / eps^2", &totals, 2, st.scaling_tolerance),
    ])
}

fn growth_checks(data: &StudyData) -> Result<Vec<CheckOutcome>, String> {
    let st = &data.settings;
    data.runs
        .iter()
        .map(|(_, _, h)| {
            growth_check(h, st.s, st.delta, st.growth_split, st.growth_tolerance)
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn decay_outcomes(data: &StudyData) -> Result<Vec<CheckOutcome>, String> {
    let mut out = Vec::new();
    for (_, _, h) in &data.runs {
        for (_, c) in decay_checks(h, &data.settings).map_err(|e| e.to_string())? {
            out.push(c);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- criterion 8

fn criterion_8() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut cells: Vec<CampaignCell> = default_cells(2)
        .into_iter()
        .chain(default_cells(3))
        .collect();
    for axis in [0, 1] {
        cells.extend(default_cells(2).into_iter().map(|c| CampaignCell {
            op: CommutatorOp::Derivative { axis },
            ..c
        }));
    }
    let settings = CampaignSettings::default();
    let mut per_case = std::collections::BTreeMap::<(usize, u8, String), (f64, f64)>::new();
    for cell in &cells {
        let (stats, _) = match ratio_campaign(cell, &settings) {
            Ok(r) => r,
            Err(e) => return Err(format!("campaign failed: {e}")),
        };
        ok &= stats.all_finite;
        let key = (cell.n, cell.case, cell.op.label());
        let entry = per_case.entry(key).or_insert((0.0, 0.0));
        entry.0 = entry.0.max(stats.per_resolution_max[0].1);
        entry.1 = entry.1.max(stats.per_resolution_max[1].1);
    }
    let mut worst_growth = 0.0f64;
    for ((n, case, op), (coarse, fine)) in &per_case {
        let growth = fine / coarse;
        worst_growth = worst_growth.max(growth);
        if growth > 1.2 {
            ok = false;
            lines.push(format!("n={n} case {case} {op}: growth {growth:.3}"));
        }
    }

    // bilinear scaling of the ratio
    let mut worst_scaling = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for cell in default_cells(2) {
        let lat = Lattice::new(2, 16).unwrap();
        let f = random_field(lat, 1, 5, 1.0, &mut rng);
        let g = random_field(lat, 1, 5, 1.0, &mut rng);
        let ratio = |f: &SpectralField, g: &SpectralField| {
            commutator_lhs(f, g, cell.s, cell.l, &cell.op).unwrap()
                / commutator_rhs(f, g, cell.s, cell.l, 0.5, cell.case, &cell.op).unwrap()
        };
        let base = ratio(&f, &g);
        let scaled = ratio(&f.scaled(3.7), &g.scaled(-0.41));
        worst_scaling = worst_scaling.max((scaled / base - 1.0).abs());
    }
    ok &= worst_scaling <= 1e-13;
    lines.push(format!(
        "{} cells x {} trials x 2 resolutions, worst max-ratio growth {worst_growth:.3} (limit 1.2), scaling defect {worst_scaling:.2e}",
        cells.len(),
        settings.trials
    ));
    verdict(ok, lines.join("; "))
}

// ---------------------------------------------------------------- criterion 9

/// Wave vector of a flat index in FFT order, last axis fastest.
fn naive_wave_vector(mut idx: usize, n: usize, res: usize) -> Option<Vec<i64>> {
    let mut k = vec![0i64; n];
    for axis in (0..n).rev() {
        let slot = (idx % res) as i64;
        idx /= res;
        let half = res as i64 / 2;
        if slot == half {
            return None;
        }
        k[axis] = if slot < half { slot } else { slot - res as i64 };
    }
    Some(k)
}

fn naive_index(k: &[i64], res: usize) -> Option<usize> {
    let max = res as i64 / 2 - 1;
    let mut idx = 0;
    for &c in k {
        if c.abs() > max {
            return None;
        }
        idx = idx * res + c.rem_euclid(res as i64) as usize;
    }
    Some(idx)
}

fn naive_convolution(f: &[Complex64], g: &[Complex64], n: usize, res: usize) -> Vec<Complex64> {
    let vectors: Vec<Option<Vec<i64>>> =
        (0..f.len()).map(|i| naive_wave_vector(i, n, res)).collect();
    let mut out = vec![Complex64::default(); f.len()];
    let mut sum = vec![0i64; n];
    for (fi, a) in f.iter().zip(&vectors) {
        let Some(a) = a else { continue };
        if fi.norm() == 0.0 {
            continue;
        }
        for (gj, b) in g.iter().zip(&vectors) {
            let Some(b) = b else { continue };
            for axis in 0..n {
                sum[axis] = a[axis] + b[axis];
            }
            if let Some(target) = naive_index(&sum, res) {
                out[target] += fi * gj;
            }
        }
    }
    out
}

fn naive_seminorm(f: &SpectralField, l: f64, kind: NormKind) -> f64 {
    let (n, res) = (f.dim(), f.resolution());
    let mut total = 0.0;
    for c in f.components() {
        for (i, z) in c.iter().enumerate() {
            let Some(k) = naive_wave_vector(i, n, res) else {
                continue;
            };
            let k2: f64 = k.iter().map(|x| (x * x) as f64).sum();
            let kn = k[n - 1];
            let zero = k2 == 0.0;
            let term = match kind {
                NormKind::Neq if kn != 0 => k2.powf(l) * z.norm_sqr(),
                NormKind::Eq if kn == 0 && !zero => k2.powf(l) * z.norm_sqr(),
                NormKind::FullHomogeneous if !zero => k2.powf(l) * z.norm_sqr(),
                NormKind::FullInhomogeneous => (1.0 + k2).powf(l) * z.norm_sqr(),
                NormKind::AbsSum if !zero => k2.powf(l / 2.0) * z.norm(),
                _ => 0.0,
            };
            total += term;
        }
    }
    if kind == NormKind::AbsSum {
        total
    } else {
        total.sqrt()
    }
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_product = 0.0f64;
    for n in [2, 3] {
        let lat = Lattice::new(n, 16).unwrap();
        let pairs = if n == 2 { 20 } else { 4 };
        for _ in 0..pairs {
            let f = random_uniform_field(lat, 1, 7, &mut rng);
            let g = random_uniform_field(lat, 1, 7, &mut rng);
            let fast = dealiased_product(&f, &g).unwrap();
            let slow = naive_convolution(f.component(0), g.component(0), n, 16);
            let err = fast
                .component(0)
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst_product = worst_product.max(err);
        }
    }

    let mut worst_norm = 0.0f64;
    for n in [2, 3] {
        let lat = Lattice::new(n, 16).unwrap();
        let f = random_field(lat, n, 7, 1.0, &mut rng);
        for kind in [
            NormKind::Neq,
            NormKind::Eq,
            NormKind::FullHomogeneous,
            NormKind::FullInhomogeneous,
            NormKind::AbsSum,
        ] {
            for l in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.5, 5.0] {
                let fast = seminorm(&f, l, kind).unwrap();
                let slow = naive_seminorm(&f, l, kind);
                worst_norm = worst_norm.max((fast - slow).abs() / slow.abs().max(1e-300));
            }
        }
    }
    verdict(
        worst_product <= 1e-12 && worst_norm <= 1e-13,
        format!("product vs convolution {worst_product:.2e} (limit 1e-12), seminorm relative error {worst_norm:.2e} (limit 1e-13)"),
    )
}

// ---------------------------------------------------------------- driver

fn timed(f: impl FnOnce() -> Verdict) -> (Verdict, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    let mut record = |id: usize, name: &str, (v, secs): (Verdict, f64)| {
        report(id, name, &v, secs);
        results.push((id, v.is_ok()));
    };

    record(1, "linear oracle", timed(criterion_1));
    record(2, "structural invariants", timed(criterion_2));
    record(3, "energy balance", timed(criterion_3));

    let start = Instant::now();
    let viscous = study(
        Regime::NonResistive,
        SymmetryClass::Sym1,
        5.0,
        &[1e-3, 2e-3, 4e-3],
    );
    let study_secs = start.elapsed().as_secs_f64();
    let checked = |f: &dyn Fn(&StudyData) -> Result<Vec<CheckOutcome>, String>,
                   data: &Result<StudyData, String>| {
        data.as_ref()
            .map_err(|e| e.clone())
            .and_then(f)
            .and_then(|c| summarize(&c))
    };
    record(
        4,
        "stability scaling",
        (checked(&stability_checks, &viscous), study_secs),
    );
    record(
        5,
        "growth bound",
        timed(|| checked(&growth_checks, &viscous)),
    );
    record(
        6,
        "decay bounds",
        timed(|| checked(&decay_outcomes, &viscous)),
    );

    record(
        7,
        "non-viscous mirror",
        timed(|| {
            let data = study(Regime::NonViscous, SymmetryClass::Sym2, 7.5, &[1e-3])?;
            let mut all = stability_checks(&data)?;
            all.extend(growth_checks(&data)?);
            all.extend(decay_outcomes(&data)?);
            summarize(&all)
        }),
    );
    record(8, "commutator campaigns", timed(criterion_8));
    record(9, "brute-force oracles", timed(criterion_9));

    let failed: Vec<usize> = results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(id, _)| *id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
