use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;

use mhdlab::commutator::{
    classify, default_cells, ratio_campaign, CampaignCell, CampaignSettings, CampaignStats,
    CommutatorOp, CommutatorSample,
};
use mhdlab::diagnostics::CheckOutcome;

use super::{check, parse_list, timings, Outcome, Timings};
use crate::output::OutputDir;

#[derive(Debug, Args)]
pub struct CommutatorArgs {
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Dimensions to sample.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub dims: Vec<usize>,
    /// Explicit `CASE,S,L` cells; without any, a default set per dimension is used.
    #[arg(long = "cell", value_parser = parse_cell)]
    pub cells: Vec<(u8, f64, f64)>,
    /// Operators: `root:A,B,..` for a partial Laplacian root over zero-based
    /// axes, `d:A` for a derivative. Defaults to `root:0`.
    #[arg(long = "op", value_parser = parse_op)]
    pub ops: Vec<CommutatorOp>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "16,32")]
    pub resolutions: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5")]
    pub etas: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest admissible ratio of per-resolution maxima between successive resolutions.
    #[arg(long, default_value_t = 1.2)]
    pub growth_limit: f64,
    /// Leave wall-clock timings out of summary.json.
    #[arg(long)]
    pub no_timings: bool,
}

fn parse_cell(text: &str) -> Result<(u8, f64, f64), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [case, s, l] = parts.as_slice() else {
        return Err(format!("`{text}` is not of the form CASE,S,L"));
    };
    let case: u8 = case.parse().map_err(|e| format!("case `{case}`: {e}"))?;
    let s: f64 = s.parse().map_err(|e| format!("s `{s}`: {e}"))?;
    let l: f64 = l.parse().map_err(|e| format!("l `{l}`: {e}"))?;
    Ok((case, s, l))
}

fn parse_op(text: &str) -> Result<CommutatorOp, String> {
    match text.split_once(':') {
        Some(("root", axes)) => Ok(CommutatorOp::PartialLaplacianRoot {
            axes: parse_list(axes)?,
        }),
        Some(("d", axis)) => Ok(CommutatorOp::Derivative {
            axis: axis
                .trim()
                .parse()
                .map_err(|e| format!("axis `{axis}`: {e}"))?,
        }),
        _ => Err(format!("`{text}` is neither root:AXES nor d:AXIS")),
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    dims: Vec<usize>,
    settings: CampaignSettings,
    growth_limit: f64,
    cells: Vec<CampaignStats>,
    passed: bool,
    checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

fn campaign_cells(args: &CommutatorArgs) -> Result<Vec<CampaignCell>> {
    let ops = if args.ops.is_empty() {
        vec![CommutatorOp::PartialLaplacianRoot { axes: vec![0] }]
    } else {
        args.ops.clone()
    };
    let mut cells = Vec::new();
    for &n in &args.dims {
        let base: Vec<(u8, f64, f64)> = if args.cells.is_empty() {
            default_cells(n)
                .into_iter()
                .map(|c| (c.case, c.s, c.l))
                .collect()
        } else {
            args.cells.clone()
        };
        for (case, s, l) in base {
            if classify(n, s, l) != Some(case) {
                bail!(mhdlab::Error::CasePrecondition(format!(
                    "(n, s, l) = ({n}, {s}, {l}) does not belong to case {case}"
                )));
            }
            for op in &ops {
                op.validate(n)?;
                cells.push(CampaignCell {
                    n,
                    case,
                    s,
                    l,
                    op: op.clone(),
                });
            }
        }
    }
    Ok(cells)
}

pub fn execute(args: &CommutatorArgs) -> Result<Outcome> {
    let cells = campaign_cells(args)?;
    let settings = CampaignSettings {
        trials: args.trials,
        resolutions: args.resolutions.clone(),
        etas: args.etas.clone(),
        slopes: None,
        seed: args.seed,
    };
    let start = Instant::now();
    let mut stats = Vec::new();
    let mut csv = String::from(CommutatorSample::CSV_HEADER);
    csv.push('\n');
    let mut checks = Vec::new();
    for cell in &cells {
        let (cell_stats, samples) = ratio_campaign(cell, &settings)?;
        for sample in &samples {
            csv.push_str(&sample.csv_row());
            csv.push('\n');
        }
        let label = format!(
            "n={} case {} s={} l={} {}",
            cell.n,
            cell.case,
            cell.s,
            cell.l,
            cell.op.label()
        );
        checks.push(CheckOutcome {
            name: format!("finite ratios ({label})"),
            passed: cell_stats.all_finite,
            value: if cell_stats.all_finite { 0.0 } else { 1.0 },
            limit: 0.0,
            detail: format!(
                "{} samples, largest ratio {:e}",
                cell_stats.samples, cell_stats.max_ratio
            ),
        });
        if cell_stats.per_resolution_max.len() > 1 {
            checks.push(check(
                &format!("ratio bounded under refinement ({label})"),
                cell_stats.max_growth(),
                args.growth_limit,
                format!("per-resolution maxima {:?}", cell_stats.per_resolution_max),
            ));
        }
        stats.push(cell_stats);
    }
    let outcome = Outcome::from_checks(&checks);
    let summary = Summary {
        dims: args.dims.clone(),
        settings,
        growth_limit: args.growth_limit,
        cells: stats,
        passed: matches!(outcome, Outcome::Success),
        checks,
        timings: timings(start, !args.no_timings),
    };
    let mut dir = OutputDir::create(&args.out)?;
    dir.write("samples.csv", csv.as_bytes())?;
    dir.write_json("summary.json", &summary)?;
    dir.commit(Some(args.seed))?;
    Ok(outcome)
}
