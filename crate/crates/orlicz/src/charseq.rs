//! Characteristic sequences of a positive weight family: the distinct
//! weight levels in decreasing order, the nested index sets collecting all
//! coordinates at or above each level, and those sets' sizes. They drive
//! the staircase shape of every width formula in [`crate::widths`].

use crate::error::{Error, Result};
use crate::luxemburg::IndexSet;

/// Positive diagonal multipliers `w_1..w_d` with a declared bound on every
/// multiplier beyond the truncation (`w_k <= tail_bound` for `k > d`).
///
/// The tail bound is what makes finite truncation sound: operations that
/// would need levels at or below it refuse with a truncation error instead
/// of silently returning a value the unseen tail could invalidate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    weights: Vec<f64>,
    tail_bound: f64,
}

impl WeightSequence {
    pub fn new(weights: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("need at least one weight".into()));
        }
        if weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(Error::InvalidWeights("weights must be positive and finite".into()));
        }
        if !tail_bound.is_finite() || tail_bound < 0.0 {
            return Err(Error::InvalidWeights(format!(
                "tail bound must be a nonnegative finite number, got {tail_bound}"
            )));
        }
        let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
        if tail_bound > min {
            return Err(Error::InvalidWeights(format!(
                "tail bound {tail_bound} exceeds the smallest listed weight {min}"
            )));
        }
        Ok(Self { weights, tail_bound })
    }

    /// Finitely supported: the tail is identically zero.
    pub fn finitely_supported(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, 0.0)
    }

    /// `w_k = k^(-beta)`, truncated at `d`, tail bounded by the next term.
    pub fn power_decay(beta: f64, d: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidWeights(format!("decay exponent must be positive, got {beta}")));
        }
        let weights = (1..=d).map(|k| (k as f64).powf(-beta)).collect();
        Self::new(weights, ((d + 1) as f64).powf(-beta))
    }

    /// `w_k = q^k`, `0 < q < 1`, truncated at `d`, tail bounded by the next
    /// term.
    pub fn geometric(q: f64, d: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidWeights(format!("geometric ratio must be in (0, 1), got {q}")));
        }
        let weights = (1..=d).map(|k| q.powi(k as i32)).collect();
        Self::new(weights, q.powi(d as i32 + 1))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// 1-based weight access.
    pub fn weight(&self, index: usize) -> f64 {
        assert!((1..=self.len()).contains(&index));
        self.weights[index - 1]
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] >= w[1])
    }
}

/// The characteristic sequences of a weight family.
///
/// `levels` holds the distinct weight values in strictly decreasing order;
/// `level_sets[n]` is the set of indices whose weight is at least
/// `levels[n]`; `level_counts[n]` is its size. The sets are nested and the
/// last one covers all `d` indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicSequences {
    pub levels: Vec<f64>,
    pub level_sets: Vec<IndexSet>,
    pub level_counts: Vec<usize>,
}

impl CharacteristicSequences {
    /// Number of distinct levels.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// 1-based level access matching the math convention.
    pub fn level(&self, n: usize) -> f64 {
        self.levels[n - 1]
    }

    /// 1-based set access; `level_set(0)` is the empty set.
    pub fn level_set(&self, n: usize) -> IndexSet {
        if n == 0 {
            IndexSet::empty()
        } else {
            self.level_sets[n - 1].clone()
        }
    }

    /// 1-based count access; `count(0) = 0`.
    pub fn count(&self, n: usize) -> usize {
        if n == 0 {
            0
        } else {
            self.level_counts[n - 1]
        }
    }
}

/// The multiset of weights sorted in nonincreasing order.
pub fn rearrange_nonincreasing(lambda: &WeightSequence) -> Vec<f64> {
    let mut sorted = lambda.weights().to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    sorted
}

/// Builds the characteristic sequences by the level recurrence: the top
/// level is the largest weight, each set collects every index at or above
/// its level, and the next level is the largest weight outside the set.
/// Ties group by exact value equality.
pub fn characteristic(lambda: &WeightSequence) -> CharacteristicSequences {
    let mut levels: Vec<f64> = lambda.weights().to_vec();
    levels.sort_unstable_by(|a, b| b.total_cmp(a));
    levels.dedup();

    let mut level_sets = Vec::with_capacity(levels.len());
    let mut level_counts = Vec::with_capacity(levels.len());
    for &eps in &levels {
        let members: Vec<usize> = (1..=lambda.len())
            .filter(|&k| lambda.weight(k) >= eps)
            .collect();
        level_counts.push(members.len());
        level_sets.push(IndexSet::new(members).expect("indices are distinct by construction"));
    }
    CharacteristicSequences {
        levels,
        level_sets,
        level_counts,
    }
}

/// Checks the exact identity tying the nonincreasing rearrangement to the
/// characteristic sequences: the rearranged weight at position `k` equals
/// `levels[n]` for every `k` in `(count(n-1), count(n)]`.
pub fn rearrangement_consistency(lambda: &WeightSequence) -> bool {
    let rearranged = rearrange_nonincreasing(lambda);
    let seq = characteristic(lambda);
    let mut start = 0usize;
    for n in 0..seq.len() {
        let end = seq.level_counts[n];
        if rearranged[start..end].iter().any(|&v| v != seq.levels[n]) {
            return false;
        }
        start = end;
    }
    start == rearranged.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(values: &[f64]) -> WeightSequence {
        WeightSequence::finitely_supported(values.to_vec()).unwrap()
    }

    #[test]
    fn rearrange_sorts_descending() {
        assert_eq!(rearrange_nonincreasing(&ws(&[0.5, 1.0, 1.0 / 3.0])), vec![1.0, 0.5, 1.0 / 3.0]);
        assert_eq!(rearrange_nonincreasing(&ws(&[3.0, 2.0, 1.0])), vec![3.0, 2.0, 1.0]);
        assert_eq!(rearrange_nonincreasing(&ws(&[0.7, 0.7, 0.7])), vec![0.7, 0.7, 0.7]);
    }

    #[test]
    fn characteristic_with_ties() {
        let lambda = ws(&[1.0, 1.0, 0.5, 0.5, 0.5, 0.25, 0.125]);
        let seq = characteristic(&lambda);
        assert_eq!(seq.levels, vec![1.0, 0.5, 0.25, 0.125]);
        assert_eq!(seq.level_counts, vec![2, 5, 6, 7]);
        assert_eq!(seq.level_sets[0].indices(), &[1, 2]);
        assert_eq!(seq.level_sets[1].indices(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn characteristic_strictly_decreasing() {
        let lambda = ws(&[1.0, 0.5, 0.25]);
        let seq = characteristic(&lambda);
        assert_eq!(seq.levels, vec![1.0, 0.5, 0.25]);
        assert_eq!(seq.level_counts, vec![1, 2, 3]);
        for (n, set) in seq.level_sets.iter().enumerate() {
            assert_eq!(set.indices(), IndexSet::first_n(n + 1).indices());
        }
    }

    #[test]
    fn characteristic_constant() {
        let lambda = ws(&[0.3, 0.3, 0.3, 0.3]);
        let seq = characteristic(&lambda);
        assert_eq!(seq.levels, vec![0.3]);
        assert_eq!(seq.level_counts, vec![4]);
    }

    #[test]
    fn consistency_examples() {
        assert!(rearrangement_consistency(&ws(&[1.0, 1.0, 0.5, 0.5, 0.5, 0.25, 0.125])));
        assert!(rearrangement_consistency(&ws(&[0.9])));
        assert!(rearrangement_consistency(&ws(&[0.2, 0.8, 0.2, 0.5])));
    }

    #[test]
    fn family_constructors() {
        let pd = WeightSequence::power_decay(1.0, 4).unwrap();
        assert_eq!(pd.weights(), &[1.0, 0.5, 1.0 / 3.0, 0.25]);
        assert!((pd.tail_bound() - 0.2).abs() < 1e-15);
        let geo = WeightSequence::geometric(0.5, 3).unwrap();
        assert_eq!(geo.weights(), &[0.5, 0.25, 0.125]);
        assert_eq!(geo.tail_bound(), 0.0625);
        assert!(pd.is_nonincreasing() && geo.is_nonincreasing());
    }

    #[test]
    fn constructor_rejections() {
        assert!(WeightSequence::new(vec![1.0, -0.5], 0.0).is_err());
        assert!(WeightSequence::new(vec![], 0.0).is_err());
        assert!(WeightSequence::new(vec![0.5, 0.2], 0.3).is_err());
        assert!(WeightSequence::geometric(1.5, 3).is_err());
    }
}
