//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `--nocapture` to see them) and enforcing its runtime
//! budget. Everything is seeded, so reruns are bit-identical.

use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orlicz::charseq::{characteristic, WeightSequence};
use orlicz::gauge::OrliczFunction;
use orlicz::kahan::KahanSum;
use orlicz::luxemburg::{luxemburg_norm, tail_norm, FiniteSequence, IndexSet};
use orlicz::nterm::{sigma_exact, sigma_numeric, sigma_sup_oracle, SearchPolicy};
use orlicz::oracles::{
    prefix_average_bound_check, random_prefix_average_instance, random_slope_case,
    random_superadditivity_case, scaled_superadditivity_check, slope_monotonicity_check,
};
use orlicz::widths::{
    ball_containment_check, basis_width, best_approx_over_set, kolmogorov_width,
    sup_lower_bound_oracle, width_on_level_set, DiagonalOperator, WidthWitness,
};

struct Budget {
    label: &'static str,
    limit_secs: f64,
    start: Instant,
}

impl Budget {
    fn start(label: &'static str, limit_secs: f64) -> Self {
        Self {
            label,
            limit_secs,
            start: Instant::now(),
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed().as_secs_f64();
        println!("[acceptance] {}: PASS ({elapsed:.2}s / {:.0}s budget)", self.label, self.limit_secs);
        assert!(
            elapsed < self.limit_secs,
            "{} exceeded its {}s budget: {elapsed:.2}s",
            self.label,
            self.limit_secs
        );
    }
}

fn random_subset(rng: &mut ChaCha8Rng, d: usize, n: usize) -> IndexSet {
    let mut all: Vec<usize> = (1..=d).collect();
    for i in (1..all.len()).rev() {
        all.swap(i, rng.random_range(0..=i));
    }
    IndexSet::new(all[..n].to_vec()).unwrap()
}

/// Criterion 1: the Luxemburg norm with a power gauge agrees with the
/// direct p-sum norm to 1e-10 relative on 500 random vectors per exponent.
#[test]
fn criterion_1_lp_agreement() {
    let budget = Budget::start("criterion 1 (lp agreement)", 5.0);
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for &p in &[1.0, 1.5, 2.0, 3.0] {
        let gauge = OrliczFunction::power(p).unwrap();
        for _ in 0..500 {
            let d = rng.random_range(1..=64);
            let entries: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0)).collect();
            let x = FiniteSequence::new(entries.clone());
            let direct = KahanSum::sum_iter(entries.iter().map(|v| v.abs().powf(p))).powf(1.0 / p);
            let norm = luxemburg_norm(&gauge, &x).unwrap();
            assert!(
                (norm - direct).abs() <= 1e-10 * direct.max(1e-300),
                "p={p}: luxemburg {norm} vs direct {direct}"
            );
        }
    }
    budget.finish();
}

/// Criterion 2: on random instances the sampling oracle never exceeds the
/// exact best-approximation value, and the coordinate-vector witness
/// attains it to 1e-9.
#[test]
fn criterion_2_best_approximation_sandwich() {
    let budget = Budget::start("criterion 2 (best-approximation sandwich)", 30.0);
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for trial in 0..100 {
        let d = rng.random_range(2..=16);
        let p = rng.random_range(1.0..4.0);
        let gauge = OrliczFunction::power(p).unwrap();
        let weights: Vec<f64> = (0..d).map(|_| rng.random_range(0.05..2.0)).collect();
        let lambda = WeightSequence::finitely_supported(weights).unwrap();
        let op = DiagonalOperator::new(lambda, gauge.clone(), gauge.clone()).unwrap();
        let n = rng.random_range(1..d.max(2)).min(d - 1);
        let gamma = random_subset(&mut rng, d, n);

        let exact = best_approx_over_set(&op, &gamma).unwrap();
        let oracle = sup_lower_bound_oracle(&op, &gamma, 100, 202_000 + trial).unwrap();
        assert!(
            oracle <= exact.value + 1e-9,
            "oracle {oracle} exceeded the exact value {}",
            exact.value
        );
        let WidthWitness::Element(witness) = &exact.witness else {
            panic!("expected an element witness");
        };
        let attained = tail_norm(op.target(), &op.apply(witness), &gamma).unwrap();
        assert!(
            (attained - exact.value).abs() <= 1e-9,
            "witness attains {attained}, expected {}",
            exact.value
        );
        assert!(oracle >= exact.value - 1e-9, "oracle {oracle} missed the witness value");
    }
    budget.finish();
}

/// Criterion 3: the basis width equals the exhaustive minimum of the
/// best-approximation values over all n-element sets, exactly.
#[test]
fn criterion_3_basis_width_exhaustive() {
    let budget = Budget::start("criterion 3 (basis width exhaustive)", 60.0);
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut weight_lists: Vec<Vec<f64>> = Vec::new();
    // w_k = 1/k at d = 10: the infimum over C(10, n) sets is 1/(n+1)
    weight_lists.push((1..=10).map(|k| 1.0 / k as f64).collect());
    for _ in 0..20 {
        let d = rng.random_range(5..=12);
        // mix smooth values and deliberate ties
        let pool: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..2.0)).collect();
        weight_lists.push(
            (0..d)
                .map(|_| {
                    if rng.random_range(0..2) == 0 {
                        pool[rng.random_range(0..pool.len())]
                    } else {
                        rng.random_range(0.1..2.0)
                    }
                })
                .collect(),
        );
    }
    for weights in weight_lists {
        let d = weights.len();
        let lambda = WeightSequence::finitely_supported(weights).unwrap();
        let gauge = OrliczFunction::power(2.0).unwrap();
        let op = DiagonalOperator::new(lambda, gauge.clone(), gauge).unwrap();
        let mut previous = f64::INFINITY;
        for n in 0..=4.min(d - 1) {
            let formula = basis_width(&op, n).unwrap().value;
            let exhaustive = (1..=d)
                .combinations(n)
                .map(|combo| {
                    let set = IndexSet::new(combo).unwrap();
                    best_approx_over_set(&op, &set).unwrap().value
                })
                .fold(f64::INFINITY, f64::min);
            assert_eq!(formula, exhaustive, "d={d} n={n}");
            assert!(formula <= previous, "basis width rose at n={n}");
            previous = formula;
        }
    }
    budget.finish();
}

/// Criterion 4: the Kolmogorov widths form the level staircase (constant
/// on each block, equal to the level value) and the ball-containment
/// verification passes 1000 trials per instance.
#[test]
fn criterion_4_kolmogorov_staircase() {
    let budget = Budget::start("criterion 4 (staircase + containment)", 60.0);
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let gauges = [
        OrliczFunction::power(1.0).unwrap(),
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(3.5).unwrap(),
        OrliczFunction::exp_minus_one(),
        OrliczFunction::power_log(1.0).unwrap(),
    ];
    for trial in 0..50 {
        let d = rng.random_range(4..=14);
        let levels = rng.random_range(2..=5);
        let pool: Vec<f64> = (0..levels).map(|_| rng.random_range(0.1..2.0)).collect();
        let weights: Vec<f64> = (0..d).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        let lambda = WeightSequence::finitely_supported(weights).unwrap();
        let gauge = gauges[rng.random_range(0..gauges.len())].clone();
        let op = DiagonalOperator::new(lambda.clone(), gauge.clone(), gauge).unwrap();

        let seq = characteristic(&lambda);
        for n in 1..=seq.len() {
            let level_value = seq.level(n);
            let on_set = width_on_level_set(&op, n).unwrap().value;
            assert_eq!(on_set, level_value);
            for m in seq.count(n - 1)..seq.count(n) {
                assert_eq!(kolmogorov_width(&op, m).unwrap().value, level_value, "m={m}");
            }
        }
        let n = rng.random_range(1..=seq.len());
        let containment = ball_containment_check(&op, n, 1000, 404_000 + trial).unwrap();
        assert!(
            containment.passed,
            "containment failed at level {n}: {:?}",
            containment.counterexample
        );
    }
    budget.finish();
}

/// Criterion 5: the hand-derived worked instance. Halving weights with a
/// linear gauge at order 1 give exactly 1/6 at support size 2; the
/// enumeration oracle at d = 8 reproduces it and the extremal sequence
/// (1/3, 2/3, 0, ...) attains it.
#[test]
fn criterion_5_worked_instance() {
    let budget = Budget::start("criterion 5 (worked n-term instance)", 10.0);
    let gauge = OrliczFunction::power(1.0).unwrap();
    let lambda = WeightSequence::geometric(0.5, 8).unwrap();

    let result = sigma_exact(&gauge, 1.0, &lambda, 1, SearchPolicy::default()).unwrap();
    assert!((result.value - 1.0 / 6.0).abs() <= 1e-12);
    assert_eq!(result.support_size, 2);
    assert!(result.certified);
    // the examined candidates decrease after the maximum
    assert_eq!(result.trace[0].0, 2);
    assert!((result.trace[0].1 - 1.0 / 6.0).abs() <= 1e-12);
    if let Some(&(s, xi)) = result.trace.get(1) {
        assert_eq!(s, 3);
        assert!((xi - 1.0 / 7.0).abs() <= 1e-12);
    }

    let oracle = sigma_sup_oracle(&gauge, 1.0, &lambda, 1, 200, 505).unwrap();
    assert!((oracle - 1.0 / 6.0).abs() <= 1e-9, "oracle {oracle}");

    assert!((result.extremal.coord(1) - 1.0 / 3.0).abs() <= 1e-12);
    assert!((result.extremal.coord(2) - 2.0 / 3.0).abs() <= 1e-12);
    assert!(result.extremal.entries()[2..].iter().all(|&v| v == 0.0));
    let image = FiniteSequence::new(
        (1..=8).map(|k| lambda.weight(k) * result.extremal.coord(k)).collect::<Vec<_>>(),
    );
    let attained = sigma_numeric(&gauge, &image, 1).unwrap();
    assert!((attained - 1.0 / 6.0).abs() <= 1e-9);
    budget.finish();
}

/// Criterion 6: on random certified-family instances the extremal sequence
/// attains the closed form through the enumeration oracle, and no random
/// unit-ball point beats it.
#[test]
fn criterion_6_nterm_sharpness_and_domination() {
    let budget = Budget::start("criterion 6 (n-term sharpness + domination)", 120.0);
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut accepted = 0;
    while accepted < 50 {
        let d = rng.random_range(8..=12);
        let lambda = if rng.random_range(0..2) == 0 {
            WeightSequence::geometric(rng.random_range(0.3..0.85), d).unwrap()
        } else {
            WeightSequence::power_decay(rng.random_range(0.6..2.0), d).unwrap()
        };
        let (gauge, p) = match rng.random_range(0..3) {
            0 => {
                let q = rng.random_range(1.0..3.0);
                (OrliczFunction::power(q).unwrap(), rng.random_range(0.5..q))
            }
            1 => (OrliczFunction::exp_minus_one(), rng.random_range(0.5..1.0)),
            _ => (OrliczFunction::power_log(rng.random_range(1.0..2.0)).unwrap(), rng.random_range(0.5..1.0)),
        };
        if gauge.compose_power(p).is_err() {
            continue;
        }
        let n = rng.random_range(0..=3);

        let exact = sigma_exact(&gauge, p, &lambda, n, SearchPolicy::default()).unwrap();
        assert!(exact.certified, "family scan failed to certify");
        accepted += 1;

        let apply = |x: &FiniteSequence| {
            FiniteSequence::new((1..=d).map(|k| lambda.weight(k) * x.coord(k)).collect::<Vec<_>>())
        };
        let attained = sigma_numeric(&gauge, &apply(&exact.extremal), n).unwrap();
        assert!(
            (attained - exact.value).abs() <= 1e-9 * exact.value.max(1.0),
            "extremal attains {attained}, exact {}",
            exact.value
        );

        for _ in 0..200 {
            let entries: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x = FiniteSequence::new(entries);
            if x.is_zero() {
                continue;
            }
            let p_sum = KahanSum::sum_iter(x.entries().iter().map(|v| v.abs().powf(p)));
            let unit = x.scaled(p_sum.powf(-1.0 / p));
            let value = sigma_numeric(&gauge, &apply(&unit), n).unwrap();
            assert!(
                value <= exact.value + 1e-9,
                "random unit point beat the closed form: {value} > {}",
                exact.value
            );
        }
    }
    budget.finish();
}

/// Criterion 7: the three inequality suites pass 10^4 randomized trials
/// each with zero counterexamples.
#[test]
fn criterion_7_inequality_suites() {
    let budget = Budget::start("criterion 7 (inequality suites)", 30.0);
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut failures = 0usize;
    for _ in 0..10_000 {
        let (gauge, a, b, t1, t2) = random_superadditivity_case(&mut rng);
        if !scaled_superadditivity_check(&gauge, a, b, t1, t2).unwrap() {
            failures += 1;
            eprintln!("superadditivity failed: {} A={a} B={b} t1={t1} t2={t2}", gauge.label());
        }
    }
    for _ in 0..10_000 {
        let (gauge, u, t) = random_slope_case(&mut rng);
        if !slope_monotonicity_check(&gauge, u, t).unwrap() {
            failures += 1;
            eprintln!("slope monotonicity failed: {} u={u} t={t}", gauge.label());
        }
    }
    for _ in 0..10_000 {
        let inst = random_prefix_average_instance(&mut rng, 12);
        let outcome = prefix_average_bound_check(&inst).unwrap();
        if !outcome.holds {
            failures += 1;
            eprintln!(
                "prefix-average bound failed: {} lhs={} rhs={} args={:?} factors={:?} weights={:?}",
                inst.gauge.label(),
                outcome.lhs,
                outcome.rhs,
                inst.args,
                inst.factors,
                inst.weights
            );
        }
    }
    assert_eq!(failures, 0, "{failures} counterexamples across the inequality suites");
    budget.finish();
}
