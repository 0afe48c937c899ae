//! Parsers for the little spec strings the CLI takes on the command line
//! (gauge families, weight families, inclusive ranges) and for the file
//! formats (weight CSV, sequence CSV, spline knot files).

use std::fs;
use std::path::Path;

use orlicz::charseq::WeightSequence;
use orlicz::gauge::OrliczFunction;
use orlicz::luxemburg::{FiniteSequence, IndexSet};

use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_param(spec: &str, family: &str, key: &str) -> Result<f64, CliError> {
    let rest = spec
        .strip_prefix(family)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| usage(format!("expected `{family}:{key}=<value>`, got `{spec}`")))?;
    let value = rest
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| usage(format!("expected `{family}:{key}=<value>`, got `{spec}`")))?;
    value
        .parse::<f64>()
        .map_err(|_| usage(format!("`{value}` is not a number in `{spec}`")))
}

/// `power:p=2`, `exp_minus_one`, `power_log:p=1`, or `spline:<path>`.
pub fn parse_gauge(spec: &str) -> Result<OrliczFunction, CliError> {
    if spec == "exp_minus_one" {
        return Ok(OrliczFunction::exp_minus_one());
    }
    if spec.starts_with("power_log") {
        let p = parse_param(spec, "power_log", "p")?;
        return Ok(OrliczFunction::power_log(p)?);
    }
    if spec.starts_with("power") {
        let p = parse_param(spec, "power", "p")?;
        return Ok(OrliczFunction::power(p)?);
    }
    if let Some(path) = spec.strip_prefix("spline:") {
        return read_spline(Path::new(path));
    }
    Err(usage(format!(
        "unknown gauge `{spec}` (expected power:p=<v>, exp_minus_one, power_log:p=<v> or spline:<path>)"
    )))
}

/// `power-decay:beta=<b>`, `geometric:q=<q>`, or `csv:<path>`.
///
/// CSV weights are read as finitely supported (tail bound zero) unless a
/// tail bound is supplied.
pub fn parse_weights(spec: &str, d: usize, tail_bound: Option<f64>) -> Result<WeightSequence, CliError> {
    if spec.starts_with("power-decay") {
        let beta = parse_param(spec, "power-decay", "beta")?;
        return Ok(WeightSequence::power_decay(beta, d)?);
    }
    if spec.starts_with("geometric") {
        let q = parse_param(spec, "geometric", "q")?;
        return Ok(WeightSequence::geometric(q, d)?);
    }
    if let Some(path) = spec.strip_prefix("csv:") {
        let mut values = read_column(Path::new(path))?;
        if values.len() < d {
            return Err(usage(format!(
                "weight file {path} lists {} weights but --d {d} were requested",
                values.len()
            )));
        }
        values.truncate(d);
        return Ok(WeightSequence::new(values, tail_bound.unwrap_or(0.0))?);
    }
    Err(usage(format!(
        "unknown weights `{spec}` (expected power-decay:beta=<b>, geometric:q=<q> or csv:<path>)"
    )))
}

/// Inclusive integer range `a..b`, or a single integer `n`.
pub fn parse_range(spec: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo = lo.parse::<usize>().map_err(|_| usage(format!("bad range `{spec}`")))?;
        let hi = hi.parse::<usize>().map_err(|_| usage(format!("bad range `{spec}`")))?;
        if hi < lo {
            return Err(usage(format!("empty range `{spec}`")));
        }
        Ok(lo..=hi)
    } else {
        let n = spec.parse::<usize>().map_err(|_| usage(format!("bad range `{spec}`")))?;
        Ok(n..=n)
    }
}

/// Comma-separated 1-based indices, e.g. `1,3,7`.
pub fn parse_index_set(spec: &str) -> Result<IndexSet, CliError> {
    let indices = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad index `{tok}` in `{spec}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IndexSet::new(indices)?)
}

/// One real per line.
fn read_column(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line.parse::<f64>().map_err(|_| {
            usage(format!("{}:{}: `{line}` is not a number", path.display(), lineno + 1))
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(usage(format!("{} contains no values", path.display())));
    }
    Ok(values)
}

/// Sequence file for `norm`: one value per line.
pub fn read_sequence(path: &Path) -> Result<FiniteSequence, CliError> {
    Ok(FiniteSequence::new(read_column(path)?))
}

/// Spline knot file: one `t,value` pair per line, first line `0,0`,
/// strictly increasing t, validated for discrete convexity.
pub fn read_spline(path: &Path) -> Result<OrliczFunction, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut knots = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (t, v) = line
            .split_once(',')
            .ok_or_else(|| usage(format!("{}:{}: expected `t,value`", path.display(), lineno + 1)))?;
        let t = t.trim().parse::<f64>().map_err(|_| {
            usage(format!("{}:{}: `{t}` is not a number", path.display(), lineno + 1))
        })?;
        let v = v.trim().parse::<f64>().map_err(|_| {
            usage(format!("{}:{}: `{v}` is not a number", path.display(), lineno + 1))
        })?;
        knots.push((t, v));
    }
    if knots.first() != Some(&(0.0, 0.0)) {
        return Err(usage(format!("{}: first knot must be 0,0", path.display())));
    }
    Ok(OrliczFunction::custom_spline(knots)?
        .with_label(format!("spline:{}", path.display())))
}
