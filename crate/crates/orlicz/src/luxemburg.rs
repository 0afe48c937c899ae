//! Luxemburg norm of finite sequences: the infimum of scales at which the
//! modular `sum M(|x_k|/a)` drops to one, plus tail errors after zeroing an
//! index set and a coefficient-search oracle confirming that interpolation
//! (keeping the coordinates themselves) is the best choice of coefficients.

use crate::error::{Error, Result};
use crate::gauge::{OrliczFunction, MAX_BISECT_ITER};
use crate::kahan::KahanSum;

/// Relative width at which the norm bisection stops.
pub const NORM_TOL: f64 = 1e-12;

/// A real vector indexed `1..=d`; coordinates beyond `d` are zero by
/// convention.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSequence {
    entries: Vec<f64>,
}

impl FiniteSequence {
    pub fn new(entries: Vec<f64>) -> Self {
        Self { entries }
    }

    pub fn zeros(d: usize) -> Self {
        Self { entries: vec![0.0; d] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// 1-based coordinate access; indices beyond the truncation read as 0.
    pub fn coord(&self, index: usize) -> f64 {
        assert!(index >= 1, "coordinates are indexed from 1");
        self.entries.get(index - 1).copied().unwrap_or(0.0)
    }

    pub fn set_coord(&mut self, index: usize, value: f64) {
        assert!((1..=self.dim()).contains(&index));
        self.entries[index - 1] = value;
    }

    /// Basis vector `e_i` in dimension `d`.
    pub fn basis(d: usize, index: usize) -> Self {
        assert!((1..=d).contains(&index));
        let mut s = Self::zeros(d);
        s.set_coord(index, 1.0);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.entries.iter().map(|v| c * v).collect())
    }

    /// Copy with the coordinates in `set` zeroed.
    pub fn without(&self, set: &IndexSet) -> Self {
        let mut out = self.clone();
        for &k in set.indices() {
            if k <= out.dim() {
                out.entries[k - 1] = 0.0;
            }
        }
        out
    }
}

impl From<Vec<f64>> for FiniteSequence {
    fn from(entries: Vec<f64>) -> Self {
        Self::new(entries)
    }
}

/// A sorted set of distinct 1-based coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.first() == Some(&0) {
            return Err(Error::InvalidIndexSet("indices are 1-based; 0 is not allowed".into()));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndexSet("duplicate index".into()));
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self { indices: Vec::new() }
    }

    /// `{1, ..., n}`.
    pub fn first_n(n: usize) -> Self {
        Self {
            indices: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn max_index(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

/// The modular `sum_k M(|x_k| / alpha)`.
pub fn modular(gauge: &OrliczFunction, x: &FiniteSequence, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::NonpositiveScale(alpha));
    }
    let mut acc = KahanSum::new();
    for &v in x.entries() {
        acc.add(gauge.eval(v.abs() / alpha)?);
    }
    Ok(acc.value())
}

/// Luxemburg norm `inf{alpha > 0 : modular(x, alpha) <= 1}`.
///
/// Bisection over alpha; the modular is nonincreasing in alpha. The
/// certified lower bracket is `max|x_k| / inverse(1)` (the largest single
/// coordinate alone keeps the modular at one) and the upper bracket starts
/// at `sum|x_k| / inverse(1)` and doubles until the modular is below one,
/// which also covers gauges without the triangle inequality.
pub fn luxemburg_norm(gauge: &OrliczFunction, x: &FiniteSequence) -> Result<f64> {
    if x.is_zero() {
        return Ok(0.0);
    }
    let unit = gauge.unit_vector_norm()?;
    let max_abs = x.entries().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let sum_abs = KahanSum::sum_iter(x.entries().iter().map(|v| v.abs()));

    let lo0 = max_abs * unit;
    let mut hi = sum_abs * unit;
    let mut guard = 0;
    while modular(gauge, x, hi)? > 1.0 {
        hi *= 2.0;
        guard += 1;
        if guard > MAX_BISECT_ITER {
            return Err(Error::NonInvertibleGauge(
                "modular never drops to one; gauge is not unbounded".into(),
            ));
        }
    }
    let mut lo = lo0.min(hi);

    for _ in 0..MAX_BISECT_ITER {
        if hi - lo <= NORM_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if modular(gauge, x, mid)? <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Error of keeping exactly the coordinates in `set`: the norm of `x` with
/// those coordinates zeroed. With the coefficients free this is still the
/// best possible error, so it doubles as the best approximation by
/// polynomials supported on `set`.
pub fn tail_norm(gauge: &OrliczFunction, x: &FiniteSequence, set: &IndexSet) -> Result<f64> {
    luxemburg_norm(gauge, &x.without(set))
}

/// Direct coefficient search for the best approximation of `x` by vectors
/// supported on `set`. Coordinate descent over each coefficient on a grid
/// anchored at the interpolation value, refined three times.
///
/// Test-only scale: it exists to confirm numerically that free coefficients
/// never beat plain interpolation.
pub fn best_coeff_error_oracle(
    gauge: &OrliczFunction,
    x: &FiniteSequence,
    set: &IndexSet,
    grid_steps: usize,
) -> Result<f64> {
    if set.len() > 3 || x.dim() > 8 {
        return Err(Error::OracleScale(format!(
            "coefficient oracle handles |set| <= 3 and d <= 8, got |set|={} d={}",
            set.len(),
            x.dim()
        )));
    }
    if set.is_empty() {
        return luxemburg_norm(gauge, x);
    }
    let half_steps = (grid_steps.max(4) / 2) as i64;
    let targets: Vec<(usize, f64)> = set.indices().iter().map(|&k| (k, x.coord(k))).collect();

    let residual_norm = |coeffs: &[f64]| -> Result<f64> {
        let mut r = x.clone();
        for (&(k, _), &a) in targets.iter().zip(coeffs) {
            if k <= r.dim() {
                r.set_coord(k, x.coord(k) - a);
            }
        }
        luxemburg_norm(gauge, &r)
    };

    let mut coeffs = vec![0.0; targets.len()];
    let mut best = residual_norm(&coeffs)?;
    let max_abs = x.entries().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut step = (max_abs.max(1.0) * 2.0) / half_steps as f64;

    for _refinement in 0..4 {
        for _sweep in 0..2 {
            for i in 0..coeffs.len() {
                // Grid anchored at the interpolation value so the exact
                // cancellation point is always among the candidates.
                let anchor = targets[i].1;
                let around = coeffs[i];
                for j in -half_steps..=half_steps {
                    for &center in &[anchor, around] {
                        let candidate = center + j as f64 * step;
                        let old = coeffs[i];
                        coeffs[i] = candidate;
                        let value = residual_norm(&coeffs)?;
                        if value < best {
                            best = value;
                        } else {
                            coeffs[i] = old;
                        }
                    }
                }
            }
        }
        step /= 10.0;
    }
    Ok(best)
}
