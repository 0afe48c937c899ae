//! Orlicz functions: evaluable convex gauges with numeric inverses and
//! the condition checks every exact formula in this crate relies on.
//!
//! An Orlicz function is a nondecreasing convex `M` with `M(0) = 0` and
//! `M(t) -> inf`. Built-in families cover the usual examples (`t^p`,
//! `e^t - 1`, `t^p*log(1+t)`); arbitrary gauges enter as convex
//! piecewise-linear splines over a knot list.

use std::fmt;

use crate::error::{Error, Result};

/// Relative tolerance for the bisection inverse.
pub const INVERSE_TOL: f64 = 1e-12;
/// Iteration cap for all bisections in this crate.
pub const MAX_BISECT_ITER: usize = 200;

/// Shape of a gauge. `Root` is produced only by [`OrliczFunction::compose_power`]
/// and evaluates the base gauge at `t^(1/degree)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeKind {
    Power { exponent: f64 },
    ExpMinusOne,
    PowerLog { exponent: f64 },
    Spline { knots: Vec<(f64, f64)> },
    Root { base: Box<GaugeKind>, degree: f64 },
}

/// An evaluable gauge `M(t)`, `t >= 0`, together with a display label.
#[derive(Debug, Clone, PartialEq)]
pub struct OrliczFunction {
    kind: GaugeKind,
    label: String,
}

impl OrliczFunction {
    /// `M(t) = t^p`. The kind is constructible for any `p > 0`; convexity
    /// (hence being an actual Orlicz function) holds only for `p >= 1` and
    /// is reported by [`check_axioms`](Self::check_axioms).
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidGauge(format!("power exponent must be positive, got {p}")));
        }
        Ok(Self {
            kind: GaugeKind::Power { exponent: p },
            label: format!("power(p={p})"),
        })
    }

    /// `M(t) = e^t - 1`.
    pub fn exp_minus_one() -> Self {
        Self {
            kind: GaugeKind::ExpMinusOne,
            label: "exp_minus_one".to_string(),
        }
    }

    /// `M(t) = t^p * log(1 + t)`.
    pub fn power_log(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidGauge(format!(
                "power_log exponent must be positive, got {p}"
            )));
        }
        Ok(Self {
            kind: GaugeKind::PowerLog { exponent: p },
            label: format!("power_log(p={p})"),
        })
    }

    /// Convex piecewise-linear gauge through the given knots.
    ///
    /// Validates the whole contract: first knot `(0, 0)`, strictly
    /// increasing abscissae, nondecreasing values, nondecreasing chord
    /// slopes and a strictly positive final slope (growth to infinity).
    pub fn custom_spline(knots: Vec<(f64, f64)>) -> Result<Self> {
        let f = Self::custom_spline_unvalidated(knots)?;
        let GaugeKind::Spline { knots } = &f.kind else {
            unreachable!()
        };
        if knots[0] != (0.0, 0.0) {
            return Err(Error::InvalidGauge("spline must start at the knot (0, 0)".into()));
        }
        let mut prev_slope = f64::NEG_INFINITY;
        for w in knots.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if v1 < v0 {
                return Err(Error::InvalidGauge(format!(
                    "spline values must be nondecreasing, got {v1} after {v0}"
                )));
            }
            let slope = (v1 - v0) / (t1 - t0);
            if slope < prev_slope {
                return Err(Error::InvalidGauge(format!(
                    "spline chord slopes must be nondecreasing, got {slope} after {prev_slope}"
                )));
            }
            prev_slope = slope;
        }
        if prev_slope <= 0.0 {
            return Err(Error::InvalidGauge(
                "spline must grow beyond its last knot (final slope must be positive)".into(),
            ));
        }
        Ok(f)
    }

    /// Spline without the convexity/monotonicity/growth validation.
    ///
    /// Only structural evaluability is enforced (at least two knots,
    /// strictly increasing finite abscissae, finite values). Use this to
    /// build candidate gauges that [`check_axioms`](Self::check_axioms)
    /// is expected to reject.
    pub fn custom_spline_unvalidated(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidGauge("spline needs at least two knots".into()));
        }
        if knots.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidGauge("spline knots must be finite".into()));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidGauge(format!(
                    "spline knots must have strictly increasing t, got {} after {}",
                    w[1].0, w[0].0
                )));
            }
        }
        let n = knots.len();
        Ok(Self {
            kind: GaugeKind::Spline { knots },
            label: format!("spline[{n}]"),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    /// Evaluate `M(t)` for `t >= 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::NegativeArgument(t));
        }
        Ok(eval_kind(&self.kind, t))
    }

    /// Inverse value `t` with `|M(t) - u| <= 1e-12 * max(1, u)`, found by a
    /// doubling bracket followed by bisection. `inverse(0) = 0`.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if !u.is_finite() || u < 0.0 {
            return Err(Error::NegativeArgument(u));
        }
        if let Some(flat) = flat_segment(&self.kind) {
            return Err(Error::NonInvertibleGauge(format!(
                "{} has a flat segment starting at t={flat}",
                self.label
            )));
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        let tol = INVERSE_TOL * u.max(1.0);

        // Doubling bracket: grow hi until M(hi) >= u.
        let mut hi = 1.0_f64;
        let mut f_hi = eval_kind(&self.kind, hi);
        let mut doublings = 0;
        while f_hi < u {
            hi *= 2.0;
            f_hi = eval_kind(&self.kind, hi);
            doublings += 1;
            if doublings > 1100 {
                return Err(Error::NonInvertibleGauge(format!(
                    "{} never reaches the value {u}",
                    self.label
                )));
            }
        }
        if f_hi == u {
            return Ok(hi);
        }
        let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };

        let mut mid = 0.5 * (lo + hi);
        for _ in 0..MAX_BISECT_ITER {
            mid = 0.5 * (lo + hi);
            let f_mid = eval_kind(&self.kind, mid);
            if (f_mid - u).abs() <= tol {
                return Ok(mid);
            }
            if f_mid < u {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        Ok(mid)
    }

    /// Grid check of the Orlicz axioms: `M(0) = 0`, monotonicity, chord-slope
    /// monotonicity (convexity) and growth `M(t_max) > 1`.
    /// Failures are reported with a witness, never thrown.
    pub fn check_axioms(&self, grid: &[f64]) -> ConditionReport {
        let report = ConditionReport::passed(ConditionId::Axioms, grid.len());
        let at_zero = eval_kind(&self.kind, 0.0);
        if at_zero.abs() > 1e-12 {
            return report.fail(0.0, vec![at_zero], "M(0) != 0");
        }
        let mut prev: Option<(f64, f64)> = None;
        let mut prev_slope = f64::NEG_INFINITY;
        for &t in grid {
            if !t.is_finite() || t < 0.0 {
                continue;
            }
            let v = eval_kind(&self.kind, t);
            if let Some((t0, v0)) = prev {
                if t <= t0 {
                    continue;
                }
                if v < v0 - 1e-12 {
                    return report.fail(t, vec![v0, v], "value decreased along the grid");
                }
                let slope = (v - v0) / (t - t0);
                let tol = 1e-12 * slope.abs().max(prev_slope.abs()).max(1.0);
                if slope < prev_slope - tol {
                    return report.fail(t, vec![prev_slope, slope], "chord slope decreased (not convex)");
                }
                prev_slope = slope;
            }
            prev = Some((t, v));
        }
        if let Some((t_max, v_max)) = prev {
            if v_max.is_nan() || v_max <= 1.0 {
                return report.fail(t_max, vec![v_max], "no growth: M(t_max) <= 1");
            }
        } else {
            return report.fail(0.0, vec![], "empty grid");
        }
        report
    }

    /// Grid heuristic for the doubling condition `M(2t) <= C*M(t)`.
    ///
    /// Computes `M(2t)/M(t)` over the grid and passes iff every ratio is
    /// finite and the maximum over the top decade of the grid does not
    /// exceed 1.05x the maximum over the rest (no growth trend). Advisory
    /// only; no exact formula in this crate depends on it.
    pub fn check_delta2(&self, grid: &[f64]) -> ConditionReport {
        let report = ConditionReport::passed(ConditionId::Delta2, grid.len());
        let positive: Vec<f64> = grid.iter().copied().filter(|&t| t > 0.0).collect();
        let Some(&t_max) = positive.last() else {
            return report.fail(0.0, vec![], "no positive grid points");
        };
        let threshold = t_max / 10.0;
        let mut max_top: Option<(f64, f64)> = None;
        let mut max_rest: Option<(f64, f64)> = None;
        for &t in &positive {
            let denom = eval_kind(&self.kind, t);
            let ratio = eval_kind(&self.kind, 2.0 * t) / denom;
            if !ratio.is_finite() {
                return report.fail(t, vec![ratio], "ratio M(2t)/M(t) is not finite");
            }
            let slot = if t > threshold { &mut max_top } else { &mut max_rest };
            if slot.is_none_or(|(_, r)| ratio > r) {
                *slot = Some((t, ratio));
            }
        }
        match (max_top, max_rest) {
            (Some((t_top, r_top)), Some((_, r_rest))) => {
                if r_top > 1.05 * r_rest {
                    report.fail(t_top, vec![r_top, r_rest], "ratio still growing over the top decade")
                } else {
                    report
                }
            }
            // Grid too narrow to split into decades: finiteness is all we can say.
            _ => report,
        }
    }

    /// Norm of a coordinate vector in the sequence space defined by this
    /// gauge: `inf{a > 0 : M(1/a) <= 1} = 1 / inverse(1)`.
    pub fn unit_vector_norm(&self) -> Result<f64> {
        Ok(1.0 / self.inverse(1.0)?)
    }

    /// The gauge `t -> M(t^(1/p))`, validated to be an Orlicz function.
    ///
    /// Power kinds compose in closed form; anything else is wrapped. The
    /// composition is rejected when the grid axioms check fails on it.
    pub fn compose_power(&self, p: f64) -> Result<OrliczFunction> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidGauge(format!("composition degree must be positive, got {p}")));
        }
        let kind = if p == 1.0 {
            self.kind.clone()
        } else if let GaugeKind::Power { exponent } = self.kind {
            GaugeKind::Power { exponent: exponent / p }
        } else {
            GaugeKind::Root {
                base: Box::new(self.kind.clone()),
                degree: p,
            }
        };
        let composed = OrliczFunction {
            kind,
            label: format!("{}∘root({p})", self.label),
        };
        // Grid chosen so the base gauge is probed on its standard range:
        // t = s^p for s in the default grid.
        let grid: Vec<f64> = default_check_grid().into_iter().map(|s| s.powf(p)).collect();
        let report = composed.check_axioms(&grid);
        if !report.passed {
            return Err(Error::ComposedGaugeNotOrlicz(report));
        }
        Ok(composed)
    }
}

fn eval_kind(kind: &GaugeKind, t: f64) -> f64 {
    match kind {
        GaugeKind::Power { exponent } => t.powf(*exponent),
        GaugeKind::ExpMinusOne => t.exp_m1(),
        GaugeKind::PowerLog { exponent } => t.powf(*exponent) * t.ln_1p(),
        GaugeKind::Spline { knots } => eval_spline(knots, t),
        GaugeKind::Root { base, degree } => eval_kind(base, t.powf(1.0 / degree)),
    }
}

fn eval_spline(knots: &[(f64, f64)], t: f64) -> f64 {
    // Segment containing t, with the first/last chord extended outward.
    let idx = knots.partition_point(|&(kt, _)| kt <= t);
    let seg = idx.clamp(1, knots.len() - 1);
    let (t0, v0) = knots[seg - 1];
    let (t1, v1) = knots[seg];
    if t == t0 {
        return v0;
    }
    v0 + (v1 - v0) / (t1 - t0) * (t - t0)
}

/// First abscissa of a zero-slope chord, if the gauge has one.
fn flat_segment(kind: &GaugeKind) -> Option<f64> {
    match kind {
        GaugeKind::Spline { knots } => knots
            .windows(2)
            .find(|w| w[1].1 == w[0].1)
            .map(|w| w[0].0),
        GaugeKind::Root { base, .. } => flat_segment(base),
        _ => None,
    }
}

/// Verifies `0 < N(t) <= M(t)` on a uniform grid over `(0, 1]`.
///
/// This is the domination condition that keeps images `Tx` of unit-ball
/// elements inside the target space.
pub fn check_domination(n: &OrliczFunction, m: &OrliczFunction, samples: usize) -> ConditionReport {
    let samples = samples.max(2);
    let report = ConditionReport::passed(ConditionId::Domination, samples);
    for i in 1..=samples {
        let t = i as f64 / samples as f64;
        let nv = eval_kind(&n.kind, t);
        let mv = eval_kind(&m.kind, t);
        if nv.is_nan() || nv <= 0.0 {
            return report.fail(t, vec![nv, mv], "target gauge vanishes on (0, 1]");
        }
        if nv > mv + 1e-12 * mv.abs().max(1.0) {
            return report.fail(t, vec![nv, mv], "N(t) > M(t) on (0, 1]");
        }
    }
    report
}

/// Standard grid for the advisory checks: 0 plus log-spaced points of
/// `[1e-6, 50]` (kept below the overflow range of `e^t - 1`).
pub fn default_check_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    grid.extend(logspace(1e-6, 50.0, 241));
    grid
}

/// `n` log-spaced points covering `[lo, hi]`, endpoints included.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Which hypothesis a [`ConditionReport`] speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    /// Orlicz axioms: zero at zero, monotone, convex, unbounded.
    Axioms,
    /// Doubling condition `M(2t) <= C*M(t)`.
    Delta2,
    /// `0 < N(t) <= M(t)` on `(0, 1]`.
    Domination,
    /// Source and target give coordinate vectors the same norm.
    UnitNormMatch,
    /// `t -> M(t^(1/p))` is itself an Orlicz function.
    ComposedGauge,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::Axioms => "axioms",
            ConditionId::Delta2 => "delta2",
            ConditionId::Domination => "domination",
            ConditionId::UnitNormMatch => "unit-norm-match",
            ConditionId::ComposedGauge => "composed-gauge",
        };
        f.write_str(s)
    }
}

/// Outcome of a numeric hypothesis check. A witness is present iff the
/// check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub samples_used: usize,
}

/// Point at which a check failed, with the offending values.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub t: f64,
    pub values: Vec<f64>,
    pub detail: String,
}

impl ConditionReport {
    fn passed(condition: ConditionId, samples_used: usize) -> Self {
        Self {
            condition,
            passed: true,
            witness: None,
            samples_used,
        }
    }

    fn fail(mut self, t: f64, values: Vec<f64>, detail: &str) -> Self {
        self.passed = false;
        self.witness = Some(Witness {
            t,
            values,
            detail: detail.to_string(),
        });
        self
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} samples)",
            self.condition,
            if self.passed { "passed" } else { "failed" },
            self.samples_used
        )?;
        if let Some(w) = &self.witness {
            write!(f, "; witness t={} values={:?}: {}", w.t, w.values, w.detail)?;
        }
        Ok(())
    }
}
