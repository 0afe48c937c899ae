//! The six CLI commands. Each returns the full CSV report as a string;
//! `main` decides where it goes. All randomized paths flow from the
//! explicit seed, so identical invocations produce identical bytes.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orlicz::charseq::{characteristic, WeightSequence};
use orlicz::gauge::{default_check_grid, OrliczFunction};
use orlicz::luxemburg::{
    best_coeff_error_oracle, luxemburg_norm, tail_norm, FiniteSequence, IndexSet,
};
use orlicz::nterm::{sigma_exact, sigma_numeric, sigma_sup_oracle, SearchPolicy};
use orlicz::oracles::{
    builtin_gauges, prefix_average_bound_check, random_prefix_average_instance, random_slope_case,
    random_superadditivity_case, scaled_superadditivity_check, slope_monotonicity_check,
};
use orlicz::widths::{
    ball_containment_check, basis_width, best_approx_over_set, kolmogorov_width,
    sup_lower_bound_oracle, width_on_level_set, DiagonalOperator, WidthReport, WidthWitness,
};
use orlicz::rearrangement_consistency;

use crate::CliError;

/// 17 significant digits, `.` decimal, locale-independent.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

fn witness_summary(report: &WidthReport) -> String {
    match &report.witness {
        WidthWitness::Set(set) => {
            let shown: Vec<String> = set.indices().iter().take(6).map(|k| k.to_string()).collect();
            let ellipsis = if set.len() > 6 { ";.." } else { "" };
            format!("set={{{}{}}}", shown.join(";"), ellipsis)
        }
        WidthWitness::Element(x) => {
            let k = (1..=x.dim()).find(|&k| x.coord(k) != 0.0).unwrap_or(0);
            format!("element=coordinate_vector@{k}")
        }
    }
}

fn width_row(out: &mut String, report: &WidthReport) {
    let _ = writeln!(
        out,
        "{},{},{},true,{}",
        report.quantity,
        report.order,
        sig17(report.value),
        witness_summary(report)
    );
}

const TABLE_HEADER: &str = "quantity,order,value,certified,witness";

pub fn norm_command(
    gauge: &OrliczFunction,
    x: &FiniteSequence,
    gamma: Option<&IndexSet>,
) -> Result<String, CliError> {
    let mut out = String::from("quantity,value\n");
    let norm = luxemburg_norm(gauge, x)?;
    let _ = writeln!(out, "luxemburg_norm,{}", sig17(norm));
    if let Some(set) = gamma {
        let tail = tail_norm(gauge, x, set)?;
        let _ = writeln!(out, "tail_norm,{}", sig17(tail));
    }
    Ok(out)
}

pub fn charseq_command(lambda: &WeightSequence) -> Result<String, CliError> {
    let seq = characteristic(lambda);
    let mut out = String::from("level,epsilon,delta,indices\n");
    for n in 1..=seq.len() {
        let indices: Vec<String> = seq.level_sets[n - 1]
            .indices()
            .iter()
            .map(|k| k.to_string())
            .collect();
        let _ = writeln!(
            out,
            "{n},{},{},{}",
            sig17(seq.level(n)),
            seq.count(n),
            indices.join(";")
        );
    }
    Ok(out)
}

pub struct WidthsRequest {
    pub gamma: Option<IndexSet>,
    pub n_range: Option<std::ops::RangeInclusive<usize>>,
    pub level_range: Option<std::ops::RangeInclusive<usize>>,
    pub m_range: Option<std::ops::RangeInclusive<usize>>,
}

impl WidthsRequest {
    pub fn is_empty(&self) -> bool {
        self.gamma.is_none()
            && self.n_range.is_none()
            && self.level_range.is_none()
            && self.m_range.is_none()
    }
}

pub fn widths_command(op: &DiagonalOperator, request: &WidthsRequest) -> Result<String, CliError> {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    if let Some(gamma) = &request.gamma {
        width_row(&mut out, &best_approx_over_set(op, gamma)?);
    }
    if let Some(range) = &request.n_range {
        for n in range.clone() {
            width_row(&mut out, &basis_width(op, n)?);
        }
    }
    if let Some(range) = &request.level_range {
        for n in range.clone() {
            width_row(&mut out, &width_on_level_set(op, n)?);
        }
    }
    if let Some(range) = &request.m_range {
        for m in range.clone() {
            width_row(&mut out, &kolmogorov_width(op, m)?);
        }
    }
    Ok(out)
}

pub struct SigmaRequest {
    pub p: f64,
    pub orders: Vec<usize>,
    pub policy: SearchPolicy,
}

pub fn sigma_command(
    gauge: &OrliczFunction,
    lambda: &WeightSequence,
    request: &SigmaRequest,
) -> Result<String, CliError> {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for &n in &request.orders {
        let result = sigma_exact(gauge, request.p, lambda, n, request.policy)?;
        let _ = writeln!(
            out,
            "sigma_n,{n},{},{},s_star={}",
            sig17(result.value),
            result.certified,
            result.support_size
        );
    }
    Ok(out)
}

pub struct TableRequest {
    pub p: Option<f64>,
    pub n_range: Option<std::ops::RangeInclusive<usize>>,
    pub m_range: Option<std::ops::RangeInclusive<usize>>,
}

pub fn table_command(op: &DiagonalOperator, request: &TableRequest) -> Result<String, CliError> {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    if let Some(range) = &request.n_range {
        for n in range.clone() {
            width_row(&mut out, &basis_width(op, n)?);
        }
        if let Some(p) = request.p {
            for n in range.clone() {
                let result = sigma_exact(op.source(), p, op.lambda(), n, SearchPolicy::default())?;
                let _ = writeln!(
                    out,
                    "sigma_n,{n},{},{},s_star={}",
                    sig17(result.value),
                    result.certified,
                    result.support_size
                );
            }
        }
    }
    if let Some(range) = &request.m_range {
        for m in range.clone() {
            width_row(&mut out, &kolmogorov_width(op, m)?);
        }
    }
    Ok(out)
}

struct SuiteLog {
    out: String,
    any_failed: bool,
}

impl SuiteLog {
    fn new() -> Self {
        Self {
            out: String::from("suite,trials,failures,status\n"),
            any_failed: false,
        }
    }

    fn record(&mut self, suite: &str, trials: usize, failures: usize) {
        let status = if failures == 0 { "PASS" } else { "FAIL" };
        if failures > 0 {
            self.any_failed = true;
        }
        let _ = writeln!(self.out, "{suite},{trials},{failures},{status}");
    }
}

/// Runs every randomized verification suite; returns the log and whether
/// all of them passed.
pub fn verify_command(seed: u64, trials: usize) -> Result<(String, bool), CliError> {
    let mut log = SuiteLog::new();

    // gauge axioms on the standard grid
    {
        let grid = default_check_grid();
        let gauges = builtin_gauges();
        let failures = gauges.iter().filter(|g| !g.check_axioms(&grid).passed).count();
        log.record("axioms", gauges.len(), failures);
    }

    // doubling-condition classification: power families satisfy it, the
    // exponential one does not
    {
        let grid = default_check_grid();
        let expectations: Vec<(OrliczFunction, bool)> = vec![
            (OrliczFunction::power(1.0)?, true),
            (OrliczFunction::power(2.0)?, true),
            (OrliczFunction::power_log(1.0)?, true),
            (OrliczFunction::exp_minus_one(), false),
        ];
        let failures = expectations
            .iter()
            .filter(|(g, expected)| g.check_delta2(&grid).passed != *expected)
            .count();
        log.record("delta2-classification", expectations.len(), failures);
    }

    // domination classification on (0, 1]
    {
        let p1 = OrliczFunction::power(1.0)?;
        let p2 = OrliczFunction::power(2.0)?;
        let p3 = OrliczFunction::power(3.0)?;
        let exp = OrliczFunction::exp_minus_one();
        let expectations: Vec<(&OrliczFunction, &OrliczFunction, bool)> = vec![
            (&p3, &p2, true),
            (&p2, &p3, false),
            (&p2, &p2, true),
            (&p1, &exp, true),
        ];
        let failures = expectations
            .iter()
            .filter(|(n, m, expected)| orlicz::check_domination(n, m, 512).passed != *expected)
            .count();
        log.record("domination-classification", expectations.len(), failures);
    }

    // scaled superadditivity
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
        let mut failures = 0;
        for _ in 0..trials {
            let (gauge, a, b, t1, t2) = random_superadditivity_case(&mut rng);
            if !scaled_superadditivity_check(&gauge, a, b, t1, t2)? {
                failures += 1;
            }
        }
        log.record("superadditivity", trials, failures);
    }

    // slope monotonicity
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0002);
        let mut failures = 0;
        for _ in 0..trials {
            let (gauge, u, t) = random_slope_case(&mut rng);
            if !slope_monotonicity_check(&gauge, u, t)? {
                failures += 1;
            }
        }
        log.record("slope-monotonicity", trials, failures);
    }

    // prefix-average bound
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0003);
        let mut failures = 0;
        for _ in 0..trials {
            let inst = random_prefix_average_instance(&mut rng, 12);
            if !prefix_average_bound_check(&inst)?.holds {
                failures += 1;
            }
        }
        log.record("prefix-average-bound", trials, failures);
    }

    // Luxemburg norm with a power gauge vs the direct p-sum norm
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_000a);
        let runs = (trials / 10).clamp(100, 1000);
        let mut failures = 0;
        for _ in 0..runs {
            let p = [1.0, 1.5, 2.0, 3.0][rng.random_range(0..4)];
            let gauge = OrliczFunction::power(p)?;
            let d = rng.random_range(1..=32);
            let entries: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0)).collect();
            let x = FiniteSequence::new(entries.clone());
            let direct = orlicz::KahanSum::sum_iter(entries.iter().map(|v| v.abs().powf(p)))
                .powf(1.0 / p);
            let norm = luxemburg_norm(&gauge, &x)?;
            if (norm - direct).abs() > 1e-10 * direct.max(1e-300) {
                failures += 1;
            }
        }
        log.record("lp-agreement", runs, failures);
    }

    // rearrangement consistency
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0004);
        let runs = trials.min(2000);
        let mut failures = 0;
        for _ in 0..runs {
            let d = rng.random_range(1..=24);
            let weights: Vec<f64> = (0..d).map(|_| rng.random_range(0.05..2.0)).collect();
            let lambda = WeightSequence::finitely_supported(weights)?;
            if !rearrangement_consistency(&lambda) {
                failures += 1;
            }
        }
        log.record("rearrangement-consistency", runs, failures);
    }

    // ball containment
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0005);
        let instances = 5;
        let per_instance = (trials / 10).clamp(100, 1000);
        let gauges = builtin_gauges();
        let mut failures = 0;
        for i in 0..instances {
            let d = rng.random_range(4..=10);
            let pool: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.5)).collect();
            let weights: Vec<f64> = (0..d).map(|_| pool[rng.random_range(0..pool.len())]).collect();
            let lambda = WeightSequence::finitely_supported(weights)?;
            let gauge = gauges[rng.random_range(0..gauges.len())].clone();
            let op = DiagonalOperator::new(lambda.clone(), gauge.clone(), gauge)?;
            let levels = characteristic(&lambda).len();
            let n = rng.random_range(1..=levels);
            if !ball_containment_check(&op, n, per_instance, seed ^ (0x6000 + i as u64))?.passed {
                failures += 1;
            }
        }
        log.record("ball-containment", instances * per_instance, failures);
    }

    // best-approximation sandwich: sampling oracle vs exact value
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0006);
        let instances = (trials / 100).clamp(20, 200);
        let mut failures = 0;
        for i in 0..instances {
            let d = rng.random_range(2..=12);
            let gauge = OrliczFunction::power(rng.random_range(1.0..4.0))?;
            let weights: Vec<f64> = (0..d).map(|_| rng.random_range(0.05..2.0)).collect();
            let lambda = WeightSequence::finitely_supported(weights)?;
            let op = DiagonalOperator::new(lambda, gauge.clone(), gauge)?;
            let n = rng.random_range(1..d.max(2)).min(d - 1);
            let mut all: Vec<usize> = (1..=d).collect();
            for j in (1..all.len()).rev() {
                all.swap(j, rng.random_range(0..=j));
            }
            let gamma = IndexSet::new(all[..n].to_vec())?;
            let exact = best_approx_over_set(&op, &gamma)?.value;
            let oracle = sup_lower_bound_oracle(&op, &gamma, 50, seed ^ (0x7000 + i as u64))?;
            if oracle > exact + 1e-9 || oracle < exact - 1e-9 {
                failures += 1;
            }
        }
        log.record("best-approximation-sandwich", instances, failures);
    }

    // interpolation optimality: free coefficients never beat keeping the
    // coordinates
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0007);
        let instances = (trials / 200).clamp(10, 50);
        let gauges = builtin_gauges();
        let mut failures = 0;
        for _ in 0..instances {
            let d = rng.random_range(2..=6);
            let gauge = gauges[rng.random_range(0..gauges.len())].clone();
            let entries: Vec<f64> = (0..d).map(|_| rng.random_range(-4.0..4.0)).collect();
            let x = FiniteSequence::new(entries);
            let size = rng.random_range(1..=2.min(d));
            let mut all: Vec<usize> = (1..=d).collect();
            for j in (1..all.len()).rev() {
                all.swap(j, rng.random_range(0..=j));
            }
            let set = IndexSet::new(all[..size].to_vec())?;
            let tail = tail_norm(&gauge, &x, &set)?;
            let oracle = best_coeff_error_oracle(&gauge, &x, &set, 17)?;
            if oracle < tail - 1e-8 {
                failures += 1;
            }
        }
        log.record("interpolation-optimality", instances, failures);
    }

    // n-term attainment and domination on small certified instances
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0008);
        let instances = (trials / 500).clamp(5, 20);
        let mut failures = 0;
        let mut run = 0;
        while run < instances {
            let d = rng.random_range(6..=8);
            let lambda = if rng.random_range(0..2) == 0 {
                WeightSequence::geometric(rng.random_range(0.3..0.8), d)?
            } else {
                WeightSequence::power_decay(rng.random_range(0.8..2.0), d)?
            };
            let q = rng.random_range(1.0..3.0);
            let p = rng.random_range(0.5..q);
            let gauge = OrliczFunction::power(q)?;
            let n = rng.random_range(0..=2);
            run += 1;
            let exact = sigma_exact(&gauge, p, &lambda, n, SearchPolicy::default())?;
            let image = FiniteSequence::new(
                (1..=d).map(|k| lambda.weight(k) * exact.extremal.coord(k)).collect::<Vec<_>>(),
            );
            let attained = sigma_numeric(&gauge, &image, n)?;
            let oracle =
                sigma_sup_oracle(&gauge, p, &lambda, n, 20, seed ^ (0x8000 + run as u64))?;
            if (attained - exact.value).abs() > 1e-9 * exact.value.max(1.0)
                || oracle > exact.value + 1e-9
                || !exact.certified
            {
                failures += 1;
            }
        }
        log.record("nterm-attainment", instances, failures);
    }

    // heuristic-mode scans must agree with certified scans within the
    // truncation
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0009);
        let instances = (trials / 500).clamp(5, 20);
        let mut failures = 0;
        for _ in 0..instances {
            let d = rng.random_range(6..=10);
            let lambda = WeightSequence::geometric(rng.random_range(0.3..0.8), d)?;
            let q = rng.random_range(1.0..3.0);
            let p = rng.random_range(0.5..q);
            let gauge = OrliczFunction::power(q)?;
            let certified = sigma_exact(&gauge, p, &lambda, 1, SearchPolicy::default())?;
            let heuristic = sigma_exact(&gauge, p, &lambda, 1, SearchPolicy::heuristic(d))?;
            if heuristic.certified || (heuristic.value - certified.value).abs() > 1e-12 {
                failures += 1;
            }
        }
        log.record("heuristic-vs-certified", instances, failures);
    }

    let passed = !log.any_failed;
    Ok((log.out, passed))
}
