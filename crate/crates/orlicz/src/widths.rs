//! Exact approximation quantities of a diagonal operator between two
//! Orlicz sequence spaces: best approximation over a fixed coordinate set,
//! basis widths, widths on the characteristic level sets, and Kolmogorov
//! widths, together with the sampling lower-bound oracle and the
//! ball-containment verifier backing the Kolmogorov lower bound.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charseq::{characteristic, rearrange_nonincreasing, CharacteristicSequences, WeightSequence};
use crate::error::{Error, Result};
use crate::gauge::{check_domination, ConditionId, ConditionReport, OrliczFunction, Witness};
use crate::kahan::KahanSum;
use crate::luxemburg::{luxemburg_norm, tail_norm, FiniteSequence, IndexSet};

/// Tolerance at which the source and target coordinate-vector norms must
/// agree for the exact best-approximation formula to be sharp.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// `x -> (w_k * x_k)` from the source space into the target space.
///
/// Construction verifies the two hypotheses behind the exact formulas:
/// the target gauge is dominated by the source gauge on `(0, 1]` (so
/// images of unit-ball elements land in the target space) and coordinate
/// vectors have the same norm on both sides. Both reports are kept.
#[derive(Debug, Clone)]
pub struct DiagonalOperator {
    lambda: WeightSequence,
    source: OrliczFunction,
    target: OrliczFunction,
    source_unit_norm: f64,
    target_unit_norm: f64,
    reports: Vec<ConditionReport>,
}

impl DiagonalOperator {
    pub fn new(lambda: WeightSequence, source: OrliczFunction, target: OrliczFunction) -> Result<Self> {
        let domination = check_domination(&target, &source, 512);
        if !domination.passed {
            return Err(Error::hypothesis_with_report(
                "target gauge is not dominated by the source gauge on (0, 1]",
                domination,
            ));
        }
        let source_unit_norm = source.unit_vector_norm()?;
        let target_unit_norm = target.unit_vector_norm()?;
        let gap = (source_unit_norm - target_unit_norm).abs();
        let unit_report = if gap <= UNIT_NORM_TOL * source_unit_norm.abs().max(1.0) {
            ConditionReport {
                condition: ConditionId::UnitNormMatch,
                passed: true,
                witness: None,
                samples_used: 1,
            }
        } else {
            ConditionReport {
                condition: ConditionId::UnitNormMatch,
                passed: false,
                witness: Some(Witness {
                    t: 1.0,
                    values: vec![source_unit_norm, target_unit_norm],
                    detail: "coordinate vectors have different norms in source and target".into(),
                }),
                samples_used: 1,
            }
        };
        if !unit_report.passed {
            return Err(Error::hypothesis_with_report(
                "source and target give coordinate vectors different norms",
                unit_report,
            ));
        }
        Ok(Self {
            lambda,
            source,
            target,
            source_unit_norm,
            target_unit_norm,
            reports: vec![domination, unit_report],
        })
    }

    pub fn lambda(&self) -> &WeightSequence {
        &self.lambda
    }

    pub fn source(&self) -> &OrliczFunction {
        &self.source
    }

    pub fn target(&self) -> &OrliczFunction {
        &self.target
    }

    pub fn source_unit_norm(&self) -> f64 {
        self.source_unit_norm
    }

    pub fn target_unit_norm(&self) -> f64 {
        self.target_unit_norm
    }

    pub fn condition_reports(&self) -> &[ConditionReport] {
        &self.reports
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// `Tx`, truncated at the weight dimension.
    pub fn apply(&self, x: &FiniteSequence) -> FiniteSequence {
        let d = self.dim();
        let entries = (1..=d).map(|k| self.lambda.weight(k) * x.coord(k)).collect();
        FiniteSequence::new(entries)
    }

    fn same_gauge(&self) -> bool {
        self.source.kind() == self.target.kind()
    }

    pub(crate) fn characteristic(&self) -> CharacteristicSequences {
        characteristic(&self.lambda)
    }
}

/// Which approximation quantity a [`WidthReport`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthQuantity {
    /// Best approximation by polynomials on a fixed coordinate set.
    BestApproximation,
    /// Infimum of the above over all sets of a given size.
    BasisWidth,
    /// Best approximation on a characteristic level set.
    LevelSetWidth,
    /// Kolmogorov width of the image of the unit ball.
    KolmogorovWidth,
}

impl std::fmt::Display for WidthQuantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            WidthQuantity::BestApproximation => "best_approximation",
            WidthQuantity::BasisWidth => "basis_width",
            WidthQuantity::LevelSetWidth => "level_set_width",
            WidthQuantity::KolmogorovWidth => "kolmogorov_width",
        };
        f.write_str(s)
    }
}

/// What attains (or realizes) a reported width.
#[derive(Debug, Clone, PartialEq)]
pub enum WidthWitness {
    /// A unit-ball element whose image attains the value.
    Element(FiniteSequence),
    /// The coordinate set realizing the infimum / the optimal subspace.
    Set(IndexSet),
}

/// An exactly computed approximation quantity with its attaining witness.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthReport {
    pub quantity: WidthQuantity,
    pub order: usize,
    pub value: f64,
    pub witness: WidthWitness,
}

/// Best approximation of the image of the unit ball by polynomials
/// supported on `gamma`: the largest weight outside `gamma`, attained by
/// the normalized coordinate vector at that weight.
pub fn best_approx_over_set(op: &DiagonalOperator, gamma: &IndexSet) -> Result<WidthReport> {
    let d = op.dim();
    if gamma.max_index().is_some_and(|m| m > d) {
        return Err(Error::InvalidIndexSet(format!(
            "index {} beyond the truncation dimension {d}",
            gamma.max_index().unwrap()
        )));
    }
    let mut best: Option<(usize, f64)> = None;
    for k in 1..=d {
        if gamma.contains(k) {
            continue;
        }
        let w = op.lambda().weight(k);
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((k, w));
        }
    }
    let Some((max_index, value)) = best else {
        return Err(Error::Truncation(
            "every listed index is in the set; the maximum lies in the unseen tail".into(),
        ));
    };
    if value <= op.lambda().tail_bound() {
        return Err(Error::Truncation(format!(
            "largest weight outside the set ({value}) does not exceed the tail bound ({}); \
             the maximum may lie beyond the truncation",
            op.lambda().tail_bound()
        )));
    }
    let witness = FiniteSequence::basis(d, max_index).scaled(1.0 / op.source_unit_norm);
    Ok(WidthReport {
        quantity: WidthQuantity::BestApproximation,
        order: gamma.len(),
        value,
        witness: WidthWitness::Element(witness),
    })
}

/// Basis width of order `n`: the `(n+1)`-th largest weight, realized by
/// keeping the coordinates of the `n` largest weights (smallest indices on
/// ties).
pub fn basis_width(op: &DiagonalOperator, n: usize) -> Result<WidthReport> {
    let d = op.dim();
    if n + 1 > d {
        return Err(Error::Truncation(format!(
            "order {n} needs at least {} listed weights, have {d}",
            n + 1
        )));
    }
    let rearranged = rearrange_nonincreasing(op.lambda());
    let value = rearranged[n];
    if value <= op.lambda().tail_bound() {
        return Err(Error::Truncation(format!(
            "rearranged weight at position {} ({value}) does not exceed the tail bound ({})",
            n + 1,
            op.lambda().tail_bound()
        )));
    }
    let mut order: Vec<usize> = (1..=d).collect();
    order.sort_by(|&a, &b| {
        op.lambda()
            .weight(b)
            .total_cmp(&op.lambda().weight(a))
            .then(a.cmp(&b))
    });
    let optimal = IndexSet::new(order[..n].to_vec()).expect("distinct indices");
    Ok(WidthReport {
        quantity: WidthQuantity::BasisWidth,
        order: n,
        value,
        witness: WidthWitness::Set(optimal),
    })
}

/// Best approximation on the `(n-1)`-th characteristic level set: exactly
/// the `n`-th level value.
pub fn width_on_level_set(op: &DiagonalOperator, n: usize) -> Result<WidthReport> {
    if n == 0 {
        return Err(Error::Truncation("level orders start at 1".into()));
    }
    let seq = op.characteristic();
    if n > seq.len() {
        return Err(Error::Truncation(format!(
            "level {n} beyond the {} levels of the truncated weights",
            seq.len()
        )));
    }
    let gamma = seq.level_set(n - 1);
    let mut report = best_approx_over_set(op, &gamma)?;
    debug_assert_eq!(report.value, seq.level(n));
    report.quantity = WidthQuantity::LevelSetWidth;
    report.order = n;
    Ok(report)
}

/// Kolmogorov width of order `m` for an operator acting within one space:
/// constant on each block `count(n-1) <= m <= count(n) - 1` where it
/// equals the `n`-th level value.
pub fn kolmogorov_width(op: &DiagonalOperator, m: usize) -> Result<WidthReport> {
    if !op.same_gauge() {
        return Err(Error::hypothesis(
            "Kolmogorov width formula applies to an operator acting within a single space",
        ));
    }
    let seq = op.characteristic();
    let total = *seq.level_counts.last().expect("at least one level");
    if m >= total {
        return Err(Error::Truncation(format!(
            "order {m} reaches past the truncated staircase (counts end at {total})"
        )));
    }
    // Smallest n with count(n) > m; block [count(n-1), count(n) - 1].
    let n = seq.level_counts.partition_point(|&c| c <= m) + 1;
    let value = seq.level(n);
    if value <= op.lambda().tail_bound() {
        return Err(Error::Truncation(format!(
            "level {n} ({value}) does not exceed the tail bound ({})",
            op.lambda().tail_bound()
        )));
    }
    Ok(WidthReport {
        quantity: WidthQuantity::KolmogorovWidth,
        order: m,
        value,
        witness: WidthWitness::Set(seq.level_set(n - 1)),
    })
}

/// Outcome of the ball-containment verification.
#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub passed: bool,
    pub trials_run: usize,
    /// A sampled polynomial and its modular sum, when the bound failed.
    pub counterexample: Option<(FiniteSequence, f64)>,
}

/// Verifies the containment step behind the Kolmogorov lower bound: every
/// polynomial supported on the `n`-th level set with norm at most the
/// `n`-th level value is the image of a unit-ball element, i.e.
/// `sum_k M(|a_k| / w_k) <= 1` over the support.
///
/// Samples `trials` random polynomials rescaled into the ball (plus the
/// boundary coordinate polynomials) and checks the sum against `1 + 1e-9`.
pub fn ball_containment_check(
    op: &DiagonalOperator,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ContainmentReport> {
    if !op.same_gauge() {
        return Err(Error::hypothesis(
            "containment check applies to an operator acting within a single space",
        ));
    }
    let seq = op.characteristic();
    if n == 0 || n > seq.len() {
        return Err(Error::Truncation(format!(
            "level {n} outside the {} truncated levels",
            seq.len()
        )));
    }
    let level = seq.level(n);
    let set = seq.level_set(n);
    let d = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut candidates: Vec<FiniteSequence> = Vec::new();
    // Boundary cases: each coordinate polynomial scaled to norm exactly level.
    for &k in set.indices() {
        candidates.push(FiniteSequence::basis(d, k).scaled(level / op.source_unit_norm));
    }
    for _ in 0..trials {
        let mut poly = FiniteSequence::zeros(d);
        for &k in set.indices() {
            poly.set_coord(k, rng.random_range(-1.0..=1.0));
        }
        if poly.is_zero() {
            continue;
        }
        let norm = luxemburg_norm(op.source(), &poly)?;
        let fraction: f64 = rng.random_range(0.0..=1.0);
        candidates.push(poly.scaled(level * fraction / norm));
    }

    let trials_run = candidates.len();
    for poly in candidates {
        let mut sum = KahanSum::new();
        for &k in set.indices() {
            sum.add(op.source().eval(poly.coord(k).abs() / op.lambda().weight(k))?);
        }
        if sum.value() > 1.0 + 1e-9 {
            return Ok(ContainmentReport {
                passed: false,
                trials_run,
                counterexample: Some((poly, sum.value())),
            });
        }
    }
    Ok(ContainmentReport {
        passed: true,
        trials_run,
        counterexample: None,
    })
}

/// Certified lower bound for the best approximation over `gamma`: the
/// largest tail error among images of sampled unit-sphere elements and of
/// all normalized coordinate vectors.
pub fn sup_lower_bound_oracle(
    op: &DiagonalOperator,
    gamma: &IndexSet,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let d = op.dim();
    if d > 32 {
        return Err(Error::OracleScale(format!(
            "sampling oracle handles d <= 32, got {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0_f64;
    let mut consider = |x: &FiniteSequence| -> Result<()> {
        let image = op.apply(x);
        let value = tail_norm(op.target(), &image, gamma)?;
        if value > best {
            best = value;
        }
        Ok(())
    };
    for k in 1..=d {
        consider(&FiniteSequence::basis(d, k).scaled(1.0 / op.source_unit_norm))?;
    }
    for _ in 0..trials {
        let entries: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let x = FiniteSequence::new(entries);
        if x.is_zero() {
            continue;
        }
        let norm = luxemburg_norm(op.source(), &x)?;
        consider(&x.scaled(1.0 / norm))?;
    }
    Ok(best)
}
