//! Best n-term approximation of the image of the unit `l_p` ball under a
//! diagonal operator, measured in an Orlicz sequence space.
//!
//! The closed form scans candidate support sizes `s > n`: each yields the
//! exactly computable error of a "flat" candidate whose image has equal
//! coordinates on `1..=s`, and the answer is the supremum over `s`. The
//! scan either certifies its stopping point through a decay envelope or
//! reports the result as uncertified.

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charseq::WeightSequence;
use crate::error::{Error, Result};
use crate::gauge::OrliczFunction;
use crate::kahan::KahanSum;
use crate::luxemburg::{luxemburg_norm, tail_norm, FiniteSequence, IndexSet};

/// How the candidate scan decides it has seen the supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop once a provable envelope on all later candidates falls below
    /// the best value found; the result is certified exact.
    Certified,
    /// Stop after a run of non-improving steps; the result is a lower
    /// bound and is flagged as uncertified.
    Heuristic,
}

/// Stopping policy for the candidate scan.
#[derive(Debug, Clone, Copy)]
pub struct SearchPolicy {
    /// Hard cap on the support size; clamped to the truncation dimension.
    pub s_cap: Option<usize>,
    /// Non-improving steps tolerated in heuristic mode.
    pub patience: usize,
    pub mode: SearchMode,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        Self {
            s_cap: None,
            patience: 1000,
            mode: SearchMode::Certified,
        }
    }
}

impl SearchPolicy {
    pub fn heuristic(patience: usize) -> Self {
        Self {
            s_cap: None,
            patience,
            mode: SearchMode::Heuristic,
        }
    }
}

/// Result of the closed-form best n-term computation.
#[derive(Debug, Clone)]
pub struct SigmaResult {
    /// The supremum over candidate support sizes.
    pub value: f64,
    /// Support size attaining it (smallest on ties).
    pub support_size: usize,
    /// Every `(s, candidate value)` pair examined by the scan.
    pub trace: Vec<(usize, f64)>,
    /// Unit-ball element whose image attains the value.
    pub extremal: FiniteSequence,
    /// Whether the stopping rule proved the scan saw the supremum.
    pub certified: bool,
}

fn require_nonincreasing(lambda: &WeightSequence) -> Result<()> {
    if !lambda.is_nonincreasing() {
        return Err(Error::hypothesis(
            "weights must be nonincreasing for the best n-term formula",
        ));
    }
    Ok(())
}

fn require_positive_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidGauge(format!("p must be positive and finite, got {p}")));
    }
    Ok(())
}

/// Aggregated weight of the first `s` coordinates:
/// `(sum_{k<=s} w_k^(-p))^(-1/p)`, accumulated with compensation.
fn aggregate_weight(lambda: &WeightSequence, p: f64, s: usize) -> f64 {
    let mut sum = KahanSum::new();
    for k in 1..=s {
        sum.add(lambda.weight(k).powf(-p));
    }
    sum.value().powf(-1.0 / p)
}

/// Error of the flat candidate with support size `s`: the aggregated
/// weight of `1..=s` divided by the inverse gauge at `1/(s - n)`.
pub fn flat_candidate_error(
    gauge: &OrliczFunction,
    p: f64,
    lambda: &WeightSequence,
    n: usize,
    s: usize,
) -> Result<f64> {
    require_positive_p(p)?;
    require_nonincreasing(lambda)?;
    if s > lambda.len() {
        return Err(Error::Truncation(format!(
            "support size {s} beyond the truncation dimension {}",
            lambda.len()
        )));
    }
    if s <= n {
        return Err(Error::hypothesis(format!("support size {s} must exceed the order {n}")));
    }
    let denom = gauge.inverse(1.0 / (s - n) as f64)?;
    Ok(aggregate_weight(lambda, p, s) / denom)
}

/// Closed-form best n-term approximation of the image of the unit `l_p`
/// ball: scans the flat candidates over `s > n` and keeps the largest.
///
/// Requires the composed gauge `t -> M(t^(1/p))` to be an Orlicz function
/// (checked) and nonincreasing weights.
///
/// Certification. With `N(t) = M(t^(1/p))` convex and zero at zero, the
/// inverse is concave through zero, so for `s' > s`
///
/// ```text
/// M^-1(1/(s'-n)) >= M^-1(1/(s-n)) * ((s-n)/(s'-n))^(1/p),
/// ```
///
/// while monotone weights give `aggregate(s') <= w_{s'} * s'^(-1/p)`.
/// Together every later candidate is at most
/// `w_{s+1} / (M^-1(1/(s-n)) * (s-n)^(1/p))` — including support sizes
/// beyond the truncation, whose weights sit below the declared tail
/// bound. In [`SearchMode::Certified`] the scan stops once this envelope
/// drops to the best value found; if the truncation runs out first, a
/// tail pass bounds the unseen candidates through the accumulated
/// reciprocal sum and the tail bound.
pub fn sigma_exact(
    gauge: &OrliczFunction,
    p: f64,
    lambda: &WeightSequence,
    n: usize,
    policy: SearchPolicy,
) -> Result<SigmaResult> {
    require_positive_p(p)?;
    require_nonincreasing(lambda)?;
    gauge.compose_power(p)?;
    let d = lambda.len();
    if n >= d {
        return Err(Error::Truncation(format!(
            "order {n} admits no support size within the truncation dimension {d}"
        )));
    }
    let cap = policy.s_cap.unwrap_or(d).min(d);

    let mut trace = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut best_s = 0;
    let mut certified = false;
    let mut stale = 0usize;
    let mut reciprocal_sum = KahanSum::new();
    let mut scanned_all = true;

    for s in 1..=cap {
        reciprocal_sum.add(lambda.weight(s).powf(-p));
        if s <= n {
            continue;
        }
        let scale = reciprocal_sum.value().powf(-1.0 / p);
        let denom = gauge.inverse(1.0 / (s - n) as f64)?;
        let candidate = scale / denom;
        trace.push((s, candidate));
        if candidate > best {
            best = candidate;
            best_s = s;
            stale = 0;
        } else {
            stale += 1;
        }
        match policy.mode {
            SearchMode::Certified => {
                let next_weight = if s < d { lambda.weight(s + 1) } else { lambda.tail_bound() };
                let envelope = next_weight / (denom * ((s - n) as f64).powf(1.0 / p));
                if envelope <= best {
                    certified = true;
                    scanned_all = false;
                    break;
                }
            }
            SearchMode::Heuristic => {
                if stale >= policy.patience {
                    scanned_all = false;
                    break;
                }
            }
        }
    }

    if policy.mode == SearchMode::Certified && !certified && scanned_all && cap == d {
        certified = tail_is_dominated(gauge, p, lambda, n, reciprocal_sum.value(), best)?;
    }

    let extremal = extremal_sequence(p, lambda, best_s)?;
    Ok(SigmaResult {
        value: best,
        support_size: best_s,
        trace,
        extremal,
        certified,
    })
}

/// Whether every candidate with support reaching past the truncation is
/// provably at most `best`.
///
/// For `s' > d` the reciprocal sum is at least the accumulated sum plus
/// `(s' - d)` copies of the tail bound's reciprocal power, which bounds
/// each candidate by a computable value; a horizon scan checks those one
/// by one and the scan-point envelope covers everything beyond the
/// horizon.
fn tail_is_dominated(
    gauge: &OrliczFunction,
    p: f64,
    lambda: &WeightSequence,
    n: usize,
    reciprocal_sum_at_d: f64,
    best: f64,
) -> Result<bool> {
    let tail_bound = lambda.tail_bound();
    if tail_bound == 0.0 {
        // no tail mass: candidates past the truncation vanish
        return Ok(true);
    }
    let d = lambda.len();
    let tail_reciprocal = tail_bound.powf(-p);
    let horizon = d + 1024;
    for s in d + 1..=horizon {
        let aggregate_bound =
            (reciprocal_sum_at_d + (s - d) as f64 * tail_reciprocal).powf(-1.0 / p);
        let denom = gauge.inverse(1.0 / (s - n) as f64)?;
        if aggregate_bound / denom > best {
            return Ok(false);
        }
    }
    let denom_h = gauge.inverse(1.0 / (horizon - n) as f64)?;
    let beyond = tail_bound / (denom_h * ((horizon - n) as f64).powf(1.0 / p));
    Ok(beyond <= best)
}

/// The unit `l_p`-ball element whose image is flat on `1..=s`:
/// coordinate `k <= s` is the aggregated weight divided by `w_k`, zero
/// beyond. Its p-sum is one by construction.
pub fn extremal_sequence(p: f64, lambda: &WeightSequence, s: usize) -> Result<FiniteSequence> {
    require_positive_p(p)?;
    if s == 0 || s > lambda.len() {
        return Err(Error::Truncation(format!(
            "support size {s} outside the truncation dimension {}",
            lambda.len()
        )));
    }
    let scale = aggregate_weight(lambda, p, s);
    let mut x = FiniteSequence::zeros(lambda.len());
    for k in 1..=s {
        x.set_coord(k, scale / lambda.weight(k));
    }
    Ok(x)
}

fn binomial_at_most(d: usize, n: usize, cap: u128) -> bool {
    let n = n.min(d - n.min(d));
    let mut value: u128 = 1;
    for i in 0..n {
        value = value * (d - i) as u128 / (i + 1) as u128;
        if value > cap {
            return false;
        }
    }
    true
}

/// Best n-term approximation of a single element by exhaustive
/// enumeration of all n-element coordinate sets, cross-checked against the
/// sorted shortcut (zeroing the `n` largest magnitudes).
pub fn sigma_numeric(gauge: &OrliczFunction, x: &FiniteSequence, n: usize) -> Result<f64> {
    let d = x.dim();
    if n >= d {
        return Ok(0.0);
    }
    if n == 0 {
        return luxemburg_norm(gauge, x);
    }
    if d > 20 && !binomial_at_most(d, n, 1_000_000) {
        return Err(Error::OracleScale(format!(
            "enumeration over C({d}, {n}) sets is beyond the oracle scale"
        )));
    }

    // Sorted shortcut: drop the n largest magnitudes, smallest indices on ties.
    let mut order: Vec<usize> = (1..=d).collect();
    order.sort_by(|&a, &b| x.coord(b).abs().total_cmp(&x.coord(a).abs()).then(a.cmp(&b)));
    let shortcut_set = IndexSet::new(order[..n].to_vec()).expect("distinct indices");
    let shortcut = tail_norm(gauge, x, &shortcut_set)?;

    let mut best = f64::INFINITY;
    for combo in (1..=d).combinations(n) {
        let set = IndexSet::new(combo).expect("combination indices are distinct");
        let value = tail_norm(gauge, x, &set)?;
        if value < best {
            best = value;
        }
    }

    assert!(
        (best - shortcut).abs() <= 1e-12 * best.abs().max(1.0),
        "enumerated minimum {best} disagrees with the sorted shortcut {shortcut}"
    );
    Ok(best)
}

/// Sampling lower bound for the best n-term approximation of the image of
/// the unit `l_p` ball: evaluates [`sigma_numeric`] on images of random
/// unit-sphere elements and of every flat candidate within the
/// truncation, and returns the largest value seen.
pub fn sigma_sup_oracle(
    gauge: &OrliczFunction,
    p: f64,
    lambda: &WeightSequence,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    require_positive_p(p)?;
    require_nonincreasing(lambda)?;
    let d = lambda.len();
    if d > 20 && !binomial_at_most(d, n, 1_000_000) {
        return Err(Error::OracleScale(format!(
            "enumeration over C({d}, {n}) sets is beyond the oracle scale"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let apply = |x: &FiniteSequence| -> FiniteSequence {
        FiniteSequence::new((1..=d).map(|k| lambda.weight(k) * x.coord(k)).collect())
    };

    let mut best = 0.0_f64;
    for s in n + 1..=d {
        let candidate = extremal_sequence(p, lambda, s)?;
        let value = sigma_numeric(gauge, &apply(&candidate), n)?;
        if value > best {
            best = value;
        }
    }
    for _ in 0..trials {
        let entries: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let x = FiniteSequence::new(entries);
        if x.is_zero() {
            continue;
        }
        let p_sum = KahanSum::sum_iter(x.entries().iter().map(|v| v.abs().powf(p)));
        let x_unit = x.scaled(p_sum.powf(-1.0 / p));
        let value = sigma_numeric(gauge, &apply(&x_unit), n)?;
        if value > best {
            best = value;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(p: f64) -> OrliczFunction {
        OrliczFunction::power(p).unwrap()
    }

    fn halving(d: usize) -> WeightSequence {
        WeightSequence::geometric(0.5, d).unwrap()
    }

    #[test]
    fn flat_candidate_worked_values() {
        let lambda = halving(8);
        let m = power(1.0);
        let xi2 = flat_candidate_error(&m, 1.0, &lambda, 1, 2).unwrap();
        assert!((xi2 - 1.0 / 6.0).abs() < 1e-12, "{xi2}");
        let xi3 = flat_candidate_error(&m, 1.0, &lambda, 1, 3).unwrap();
        assert!((xi3 - 1.0 / 7.0).abs() < 1e-12, "{xi3}");
    }

    #[test]
    fn flat_candidate_constant_weights_closed_form() {
        let lambda = WeightSequence::finitely_supported(vec![0.7; 10]).unwrap();
        for (p, n, s) in [(1.0, 0, 4), (2.0, 1, 5), (1.5, 2, 9)] {
            let xi = flat_candidate_error(&power(p), p, &lambda, n, s).unwrap();
            let expected = 0.7 * ((s - n) as f64).powf(1.0 / p) * (s as f64).powf(-1.0 / p);
            assert!((xi - expected).abs() < 1e-10 * expected, "{xi} vs {expected}");
        }
    }

    #[test]
    fn flat_candidate_guards() {
        let lambda = halving(4);
        assert!(matches!(
            flat_candidate_error(&power(1.0), 1.0, &lambda, 1, 5),
            Err(Error::Truncation(_))
        ));
        let rising = WeightSequence::finitely_supported(vec![0.1, 0.2]).unwrap();
        assert!(matches!(
            flat_candidate_error(&power(1.0), 1.0, &rising, 0, 1),
            Err(Error::Hypothesis { .. })
        ));
    }

    #[test]
    fn sigma_exact_worked_instance() {
        let result = sigma_exact(&power(1.0), 1.0, &halving(32), 1, SearchPolicy::default()).unwrap();
        assert!((result.value - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(result.support_size, 2);
        assert!(result.certified);
        assert!((result.extremal.coord(1) - 1.0 / 3.0).abs() < 1e-12);
        assert!((result.extremal.coord(2) - 2.0 / 3.0).abs() < 1e-12);
        assert!(result.extremal.entries()[2..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sigma_exact_constant_weights() {
        let lambda = WeightSequence::finitely_supported(vec![0.4; 12]).unwrap();
        let result = sigma_exact(&power(2.0), 2.0, &lambda, 0, SearchPolicy::default()).unwrap();
        assert!((result.value - 0.4).abs() < 1e-12);
        assert_eq!(result.support_size, 1);
    }

    #[test]
    fn sigma_exact_rejects_exhausted_order() {
        let lambda = halving(4);
        assert!(matches!(
            sigma_exact(&power(1.0), 1.0, &lambda, 4, SearchPolicy::default()),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn sigma_exact_rejects_bad_composition() {
        // M(t) = t with p = 2 composes to sqrt(t), which is concave.
        let lambda = halving(8);
        assert!(matches!(
            sigma_exact(&power(1.0), 2.0, &lambda, 1, SearchPolicy::default()),
            Err(Error::ComposedGaugeNotOrlicz(_))
        ));
    }

    #[test]
    fn heuristic_mode_is_uncertified() {
        let result =
            sigma_exact(&power(1.0), 1.0, &halving(16), 1, SearchPolicy::heuristic(3)).unwrap();
        assert!(!result.certified);
        assert!((result.value - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn extremal_sequence_normalization_and_flat_image() {
        for (p, s) in [(1.0, 2), (2.0, 5), (0.5, 3)] {
            let lambda = WeightSequence::power_decay(1.3, 8).unwrap();
            let x = extremal_sequence(p, &lambda, s).unwrap();
            let p_sum = KahanSum::sum_iter(x.entries().iter().map(|v| v.abs().powf(p)));
            assert!((p_sum - 1.0).abs() < 1e-12, "p-sum {p_sum}");
            let norm = luxemburg_norm(&power(p), &x).unwrap();
            assert!((norm - 1.0).abs() < 1e-10, "unit-ball norm {norm}");
            let image_head: Vec<f64> = (1..=s).map(|k| lambda.weight(k) * x.coord(k)).collect();
            let first = image_head[0];
            assert!(image_head.iter().all(|&v| (v - first).abs() < 1e-14 * first));
        }
    }

    #[test]
    fn extremal_sequence_constant_weights() {
        let lambda = WeightSequence::finitely_supported(vec![0.3; 6]).unwrap();
        let x = extremal_sequence(1.0, &lambda, 4).unwrap();
        for k in 1..=4 {
            assert!((x.coord(k) - 0.25).abs() < 1e-15);
        }
        assert_eq!(x.coord(5), 0.0);
    }

    #[test]
    fn sigma_numeric_enumeration() {
        let x = FiniteSequence::new(vec![4.0, 3.0, 2.0, 1.0]);
        let got = sigma_numeric(&power(2.0), &x, 1).unwrap();
        assert!((got - 14.0_f64.sqrt()).abs() < 1e-10);
        let full = sigma_numeric(&power(2.0), &x, 0).unwrap();
        assert!((full - 30.0_f64.sqrt()).abs() < 1e-10);
        assert_eq!(sigma_numeric(&power(2.0), &x, 4).unwrap(), 0.0);
    }

    #[test]
    fn sigma_numeric_scale_guard() {
        let x = FiniteSequence::zeros(40);
        assert!(matches!(
            sigma_numeric(&power(2.0), &x, 10),
            Err(Error::OracleScale(_))
        ));
    }

    #[test]
    fn sup_oracle_reproduces_worked_instance() {
        let lambda = halving(8);
        let oracle = sigma_sup_oracle(&power(1.0), 1.0, &lambda, 1, 100, 11).unwrap();
        assert!((oracle - 1.0 / 6.0).abs() < 1e-9, "{oracle}");
        let exact = sigma_exact(&power(1.0), 1.0, &lambda, 1, SearchPolicy::default()).unwrap();
        assert!(oracle <= exact.value + 1e-9);
        // flat candidates alone already attain the closed form
        let no_random = sigma_sup_oracle(&power(1.0), 1.0, &lambda, 1, 0, 0).unwrap();
        assert!((no_random - exact.value).abs() < 1e-9);
    }

    #[test]
    fn sigma_monotone_in_order() {
        let lambda = WeightSequence::power_decay(1.0, 16).unwrap();
        let mut previous = f64::INFINITY;
        for n in 0..6 {
            let result = sigma_exact(&power(2.0), 2.0, &lambda, n, SearchPolicy::default()).unwrap();
            assert!(result.value <= previous + 1e-12);
            previous = result.value;
        }
    }
}
