use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sldkit_core::fisher::{
    chart_fisher_u3, closed_form_fisher_cp2, closed_form_fisher_u3, closed_form_fisher_u3_equal_pair,
    closed_form_fisher_u3_rank2, cross_block_max, deviation_from_blocks, qfi_index, FlagChartU3, PairCoefficients,
};
use sldkit_core::json::{BasisJson, SolutionJson, TensorJson};
use sldkit_core::oracle::{qfi_eigenbasis, sld_eigenbasis};
use sldkit_core::{Basis, Constants, Weights};

use crate::error::CliError;
use crate::family::{Family, FamilySpec};
use crate::solve::{gauge_distance, snap_weights, solve_at, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Options {
    pub tol: f64,
    pub fd_step: f64,
    pub method: Method,
    pub check_oracle: bool,
    pub allow_degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SldReport {
    pub theta: f64,
    pub method: Method,
    pub solution: SolutionJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QfiRow {
    pub theta: f64,
    pub qfi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qfi_oracle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_dev: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QfiReport {
    pub method: Method,
    pub rows: Vec<QfiRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_dev: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub g: f64,
    pub omega: f64,
}

impl From<PairCoefficients<f64>> for PairJson {
    fn from(c: PairCoefficients<f64>) -> Self {
        Self { g: c.g, omega: c.omega }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorCase {
    Generic,
    Rank2,
    EqualPair,
    Cp2,
    MaximallyMixed,
    Pairwise,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorReport {
    pub weights: Vec<f64>,
    pub case: TensorCase,
    pub tensor: TensorJson,
    pub closed_form: Vec<PairJson>,
    pub cross_block_max: f64,
    pub max_deviation: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorInput {
    weights: Vec<f64>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: Option<&Path>) -> Result<T, CliError> {
    let path = path.ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn basis(n: usize) -> Result<String, CliError> {
    let basis = Basis::new(n)?;
    let constants = Constants::compute(&basis);
    to_json(&BasisJson::new(&basis, &constants))
}

fn load_family(spec: &FamilySpec, opts: &Options) -> Result<(Family, Constants), CliError> {
    let basis = Basis::new(spec.dimension())?;
    let constants = Constants::compute(&basis);
    Ok((Family::new(spec, basis, opts.fd_step)?, constants))
}

pub fn sld(spec: &FamilySpec, theta: f64, opts: &Options) -> Result<SldReport, CliError> {
    let (family, constants) = load_family(spec, opts)?;
    let basis = family.basis();
    let (state, form) = family.at(theta)?;
    let sol = solve_at(basis, &constants, &state, &form, opts.method, opts.tol)?;
    let oracle_deviation = if opts.check_oracle {
        let oracle = sld_eigenbasis(basis, &state, &form, opts.tol)?;
        Some(gauge_distance(&sol.matrix, &oracle.matrix, &oracle.gauge_basis))
    } else {
        None
    };
    Ok(SldReport { theta, method: opts.method, solution: SolutionJson::new(&sol), oracle_deviation })
}

pub fn qfi(spec: &FamilySpec, thetas: &[f64], opts: &Options) -> Result<QfiReport, CliError> {
    let (family, constants) = load_family(spec, opts)?;
    let basis = family.basis();
    let row = |theta: f64| -> Result<QfiRow, CliError> {
        let (state, form) = family.at(theta)?;
        let sol = solve_at(basis, &constants, &state, &form, opts.method, opts.tol)?;
        let qfi = qfi_index(&state, &sol)?;
        let (qfi_oracle, abs_dev) = if opts.check_oracle {
            let o = qfi_eigenbasis(&state, &form, opts.tol)?;
            (Some(o), Some((qfi - o).abs()))
        } else {
            (None, None)
        };
        Ok(QfiRow { theta, qfi, qfi_oracle, abs_dev })
    };
    let rows = std::thread::scope(|s| {
        let handles: Vec<_> = thetas.iter().map(|&t| s.spawn(move || row(t))).collect();
        handles.into_iter().map(|h| h.join().expect("row worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    let max_abs_dev = opts.check_oracle.then(|| rows.iter().filter_map(|r| r.abs_dev).fold(0.0, f64::max));
    Ok(QfiReport { method: opts.method, rows, max_abs_dev })
}

pub fn qfi_csv(report: &QfiReport) -> String {
    let oracle = report.max_abs_dev.is_some();
    let mut out = String::from(if oracle { "theta,qfi,qfi_oracle,abs_dev\n" } else { "theta,qfi\n" });
    for r in &report.rows {
        let _ = write!(out, "{},{}", r.theta, r.qfi);
        if let (Some(o), Some(d)) = (r.qfi_oracle, r.abs_dev) {
            let _ = write!(out, ",{o},{d}");
        }
        out.push('\n');
    }
    out
}

pub fn tensor_weights(cli: Option<Vec<f64>>, input: Option<&Path>) -> Result<Vec<f64>, CliError> {
    match (cli, input) {
        (Some(w), None) => Ok(w),
        (None, Some(_)) => Ok(read_json::<TensorInput>(input)?.weights),
        (Some(_), Some(_)) => Err(CliError::Usage("give either --weights or --input, not both".into())),
        (None, None) => Err(CliError::Usage("tensor needs --weights or --input".into())),
    }
}

pub fn tensor(raw: &[f64], opts: &Options) -> Result<TensorReport, CliError> {
    if raw.len() != 3 {
        return Err(CliError::Usage(format!("tensor needs three weights (got {})", raw.len())));
    }
    // snap in descending order, then restore the caller's order
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]));
    let mut sorted: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    snap_weights(&mut sorted, opts.tol);
    let mut k = vec![0.0; 3];
    for (pos, &i) in order.iter().enumerate() {
        k[i] = sorted[pos];
    }
    let weights = Weights::new(&k, 3)?;
    let chart = if opts.allow_degenerate { FlagChartU3::allow_degenerate(&weights)? } else { FlagChartU3::new(&weights)? };

    let (case, coeffs) = if k[0] == k[1] && k[1] == k[2] {
        (TensorCase::MaximallyMixed, [PairCoefficients::zero(); 3])
    } else if k == [1.0, 0.0, 0.0] {
        (TensorCase::Cp2, closed_form_fisher_cp2())
    } else if k[1] == k[2] {
        (TensorCase::EqualPair, closed_form_fisher_u3_equal_pair(&weights)?)
    } else if k[0] == k[1] || k[0] == k[2] {
        (TensorCase::Pairwise, closed_form_fisher_u3(&weights)?)
    } else if k[2] == 0.0 {
        (TensorCase::Rank2, closed_form_fisher_u3_rank2(&weights)?)
    } else {
        (TensorCase::Generic, closed_form_fisher_u3(&weights)?)
    };

    let basis = Basis::new(3)?;
    let constants = Constants::compute(&basis);
    let t = chart_fisher_u3(&basis, &constants, &chart, opts.tol)?;
    Ok(TensorReport {
        weights: k,
        case,
        tensor: TensorJson::new(&t),
        closed_form: coeffs.iter().copied().map(PairJson::from).collect(),
        cross_block_max: cross_block_max(&t),
        max_deviation: deviation_from_blocks(&t, &coeffs),
    })
}

/// `a:b:count` → `count` evenly spaced angles from `a` to `b` inclusive.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("range must be start:stop:count (got {text:?})"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match count {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok((0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()),
    }
}
