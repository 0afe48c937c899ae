//! Falsification harnesses for the convexity inequalities the exact
//! formulas lean on: scaled superadditivity, monotonicity of `M(t)/t`,
//! and the weighted prefix-average bound used to reduce modular sums to
//! flat candidates. Each check evaluates one concrete instance; random
//! instance generators live here too so the test suites and the CLI
//! `verify` command draw from the same distributions.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::gauge::OrliczFunction;
use crate::kahan::KahanSum;

/// Checks `M(A*t1) + M(B*t2) <= M(A*(t1+t2))` for an increasing convex
/// gauge with `M(0) <= 0`, `t2 > t1 >= 0` and `A >= B > 0`.
pub fn scaled_superadditivity_check(
    gauge: &OrliczFunction,
    a: f64,
    b: f64,
    t1: f64,
    t2: f64,
) -> Result<bool> {
    if !(t1 >= 0.0 && t2 > t1) {
        return Err(Error::hypothesis(format!("need t2 > t1 >= 0, got t1={t1} t2={t2}")));
    }
    if !(b > 0.0 && a >= b) {
        return Err(Error::hypothesis(format!("need A >= B > 0, got A={a} B={b}")));
    }
    let lhs = gauge.eval(a * t1)? + gauge.eval(b * t2)?;
    let rhs = gauge.eval(a * (t1 + t2))?;
    Ok(lhs <= rhs + 1e-10)
}

/// Checks that `M(t)/t` does not decrease: `M(u)/u <= M(t)/t` for
/// `0 < u <= t`.
pub fn slope_monotonicity_check(gauge: &OrliczFunction, u: f64, t: f64) -> Result<bool> {
    if !(u > 0.0 && u <= t) {
        return Err(Error::hypothesis(format!("need 0 < u <= t, got u={u} t={t}")));
    }
    Ok(gauge.eval(u)? / u <= gauge.eval(t)? / t + 1e-12)
}

/// One instance of the weighted prefix-average inequality: a convex gauge,
/// nonincreasing nonnegative arguments, nonnegative factors and strictly
/// positive weights, all of one length.
#[derive(Debug, Clone)]
pub struct PrefixAverageInstance {
    pub gauge: OrliczFunction,
    pub args: Vec<f64>,
    pub factors: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Both sides of the prefix-average inequality for one instance.
#[derive(Debug, Clone, Copy)]
pub struct PrefixAverageOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl PrefixAverageInstance {
    pub fn new(
        gauge: OrliczFunction,
        args: Vec<f64>,
        factors: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let l = args.len();
        if l == 0 || factors.len() != l || weights.len() != l {
            return Err(Error::hypothesis("args, factors and weights must share a positive length"));
        }
        if args.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::hypothesis("args must be nonincreasing"));
        }
        if args.iter().chain(&factors).any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::hypothesis("args and factors must be nonnegative and finite"));
        }
        if weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(Error::hypothesis("weights must be strictly positive and finite"));
        }
        Ok(Self {
            gauge,
            args,
            factors,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Evaluates the prefix-average bound
/// `sum_k w_k f_k N(a_k) <= max_s N((sum_k w_k a_k) / (sum_{k<=s} w_k)) * sum_{k<=s} w_k f_k`.
pub fn prefix_average_bound_check(inst: &PrefixAverageInstance) -> Result<PrefixAverageOutcome> {
    let l = inst.len();
    let mut lhs_acc = KahanSum::new();
    let mut weighted_args = KahanSum::new();
    for k in 0..l {
        lhs_acc.add(inst.weights[k] * inst.factors[k] * inst.gauge.eval(inst.args[k])?);
        weighted_args.add(inst.weights[k] * inst.args[k]);
    }
    let lhs = lhs_acc.value();
    let total_weighted_args = weighted_args.value();

    let mut rhs = f64::NEG_INFINITY;
    let mut weight_prefix = KahanSum::new();
    let mut product_prefix = KahanSum::new();
    for k in 0..l {
        weight_prefix.add(inst.weights[k]);
        product_prefix.add(inst.weights[k] * inst.factors[k]);
        let value =
            inst.gauge.eval(total_weighted_args / weight_prefix.value())? * product_prefix.value();
        if value > rhs {
            rhs = value;
        }
    }
    Ok(PrefixAverageOutcome {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-10,
    })
}

/// The built-in gauges every randomized suite draws from.
pub fn builtin_gauges() -> Vec<OrliczFunction> {
    vec![
        OrliczFunction::power(1.0).unwrap(),
        OrliczFunction::power(1.5).unwrap(),
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(3.0).unwrap(),
        OrliczFunction::exp_minus_one(),
        OrliczFunction::power_log(1.0).unwrap(),
        OrliczFunction::power_log(2.0).unwrap(),
    ]
}

fn half_normal<R: Rng>(rng: &mut R) -> f64 {
    let draw: f64 = StandardNormal.sample(rng);
    draw.abs()
}

/// A random admissible `(gauge, A, B, t1, t2)` tuple for
/// [`scaled_superadditivity_check`]. Draws keep the gauge values in the
/// range where the `1e-10` slack dwarfs evaluation noise, and hit the
/// boundary cases `t1 = 0` and `A = B` with positive probability.
pub fn random_superadditivity_case<R: Rng>(rng: &mut R) -> (OrliczFunction, f64, f64, f64, f64) {
    let gauges = builtin_gauges();
    let gauge = gauges[rng.random_range(0..gauges.len())].clone();
    let b = (0.05 + 0.8 * half_normal(rng)).min(3.0);
    let a = if rng.random_range(0..4) == 0 {
        b
    } else {
        (b + 1e-3 + 0.5 * half_normal(rng)).min(3.0)
    };
    let t1 = if rng.random_range(0..4) == 0 {
        0.0
    } else {
        (1e-3 + half_normal(rng)).min(2.0)
    };
    let t2 = (t1 + 1e-3 + half_normal(rng)).min(3.0);
    (gauge, a, b, t1, t2)
}

/// A random admissible `(gauge, u, t)` pair for
/// [`slope_monotonicity_check`], with the equality case `u = t` hit with
/// positive probability.
pub fn random_slope_case<R: Rng>(rng: &mut R) -> (OrliczFunction, f64, f64) {
    let gauges = builtin_gauges();
    let gauge = gauges[rng.random_range(0..gauges.len())].clone();
    let t = (1e-3 + 2.0 * half_normal(rng)).min(10.0);
    let u = if rng.random_range(0..4) == 0 {
        t
    } else {
        t * rng.random_range(1e-6..1.0)
    };
    (gauge, u, t)
}

/// A random admissible instance of the prefix-average inequality:
/// arguments are sorted half-normal draws, factors are half-normal draws
/// with occasional exact zeros, weights are half-normal draws kept away
/// from zero.
pub fn random_prefix_average_instance<R: Rng>(rng: &mut R, max_len: usize) -> PrefixAverageInstance {
    let gauges = builtin_gauges();
    let gauge = gauges[rng.random_range(0..gauges.len())].clone();
    let l = rng.random_range(1..=max_len.max(1));
    let mut args: Vec<f64> = (0..l).map(|_| half_normal(rng).min(3.0)).collect();
    args.sort_unstable_by(|x, y| y.total_cmp(x));
    let factors: Vec<f64> = (0..l)
        .map(|_| {
            if rng.random_range(0..5) == 0 {
                0.0
            } else {
                half_normal(rng).min(3.0)
            }
        })
        .collect();
    let weights: Vec<f64> = (0..l).map(|_| 1e-6 + half_normal(rng).min(3.0)).collect();
    PrefixAverageInstance::new(gauge, args, factors, weights).expect("generated instance is admissible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn power(p: f64) -> OrliczFunction {
        OrliczFunction::power(p).unwrap()
    }

    #[test]
    fn superadditivity_hand_cases() {
        assert!(scaled_superadditivity_check(&power(2.0), 1.0, 1.0, 1.0, 2.0).unwrap());
        // t1 = 0 reduces to monotonicity in the scale factor
        assert!(scaled_superadditivity_check(&power(2.0), 2.0, 1.0, 0.0, 1.5).unwrap());
        assert!(matches!(
            scaled_superadditivity_check(&power(2.0), 1.0, 2.0, 0.0, 1.0),
            Err(Error::Hypothesis { .. })
        ));
        assert!(matches!(
            scaled_superadditivity_check(&power(2.0), 1.0, 1.0, 2.0, 1.0),
            Err(Error::Hypothesis { .. })
        ));
    }

    #[test]
    fn slope_hand_cases() {
        assert!(slope_monotonicity_check(&power(1.0), 0.3, 5.0).unwrap());
        assert!(slope_monotonicity_check(&power(2.0), 1.0, 2.0).unwrap());
        assert!(matches!(
            slope_monotonicity_check(&power(2.0), 3.0, 2.0),
            Err(Error::Hypothesis { .. })
        ));
    }

    #[test]
    fn prefix_average_single_term_is_equality() {
        let inst =
            PrefixAverageInstance::new(power(2.0), vec![1.7], vec![0.4], vec![2.2]).unwrap();
        let out = prefix_average_bound_check(&inst).unwrap();
        assert!(out.holds);
        assert!((out.lhs - out.rhs).abs() < 1e-12 * out.lhs.abs().max(1.0));
    }

    #[test]
    fn prefix_average_first_factor_only() {
        let inst = PrefixAverageInstance::new(
            power(2.0),
            vec![2.0, 1.0, 0.5],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let out = prefix_average_bound_check(&inst).unwrap();
        // lhs = N(2) = 4; s = 1 already gives N((2+1+0.5)/1) * 1 = 12.25
        assert!(out.holds);
        assert!((out.lhs - 4.0).abs() < 1e-12);
        assert!(out.rhs >= 12.25 - 1e-12);
    }

    #[test]
    fn prefix_average_validation() {
        assert!(PrefixAverageInstance::new(power(2.0), vec![1.0, 2.0], vec![0.0; 2], vec![1.0; 2]).is_err());
        assert!(PrefixAverageInstance::new(power(2.0), vec![1.0], vec![0.0], vec![0.0]).is_err());
        assert!(PrefixAverageInstance::new(power(2.0), vec![], vec![], vec![]).is_err());
    }

    #[test]
    fn randomized_smoke() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let (gauge, a, b, t1, t2) = random_superadditivity_case(&mut rng);
            assert!(scaled_superadditivity_check(&gauge, a, b, t1, t2).unwrap());
            let (gauge, u, t) = random_slope_case(&mut rng);
            assert!(slope_monotonicity_check(&gauge, u, t).unwrap());
            let inst = random_prefix_average_instance(&mut rng, 10);
            assert!(prefix_average_bound_check(&inst).unwrap().holds);
        }
    }
}
