//! Summary statistics: pattern bias, storage ratio, mean connectivity,
//! sparsity, fractional Hamming distance and the split recall-error measure.

use std::fmt;

use crate::corpus::Pattern;
use crate::error::{Error, Result};
use crate::network::WeightMatrix;

/// Training-matrix characteristics in the shape of a capacity-table column.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCharacteristics {
    pub n_units: usize,
    pub n_patterns: usize,
    /// Storage ratio n/N.
    pub alpha: f64,
    /// Fraction of non-zero weight entries, connectivity/N.
    pub sparsity: f64,
    /// Mean number of distinct cooccurrence partners per unit.
    pub mean_connectivity: f64,
    /// Probability that a training bit is 1.
    pub bias: f64,
}

impl MatrixCharacteristics {
    pub fn compute(weights: &WeightMatrix, patterns: &[Pattern]) -> Result<Self> {
        let n_units = weights.size();
        let connectivity = mean_connectivity(weights);
        Ok(MatrixCharacteristics {
            n_units,
            n_patterns: patterns.len(),
            alpha: storage_ratio(patterns.len(), n_units)?,
            sparsity: sparsity(weights),
            mean_connectivity: connectivity,
            bias: bias(patterns),
        })
    }
}

impl fmt::Display for MatrixCharacteristics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {}", "N", self.n_units)?;
        writeln!(f, "{:<10} {}", "n", self.n_patterns)?;
        writeln!(f, "{:<10} {:.4}", "alpha", self.alpha)?;
        writeln!(f, "{:<10} {:.6}", "s(T)", self.sparsity)?;
        writeln!(f, "{:<10} {:.4}", "c(T)", self.mean_connectivity)?;
        write!(f, "{:<10} {:.6}", "Pr(xi=1)", self.bias)
    }
}

/// Mean recall error split by the nominated bit class.
#[derive(Debug, Clone, PartialEq)]
pub struct RecallError {
    /// Mean fraction of nominated 1-bits recalled as 0.
    pub f_b_ones: f64,
    /// Mean fraction of nominated 0-bits recalled as 1.
    pub f_b_zeros: f64,
    /// Number of recall pairs aggregated.
    pub trials: usize,
}

/// Probability that a bit of the training set is 1:
/// `sum_mu sum_i xi^mu_i / (n * N)`.
pub fn bias(patterns: &[Pattern]) -> f64 {
    if patterns.is_empty() {
        return 0.0;
    }
    let total_bits: usize = patterns.iter().map(Pattern::len).sum();
    if total_bits == 0 {
        return 0.0;
    }
    let ones: usize = patterns.iter().map(Pattern::count_ones).sum();
    ones as f64 / total_bits as f64
}

/// Storage ratio alpha = n/N.
pub fn storage_ratio(n_patterns: usize, n_units: usize) -> Result<f64> {
    if n_units == 0 {
        return Err(Error::ZeroUnits);
    }
    Ok(n_patterns as f64 / n_units as f64)
}

/// Mean connectivity: `N^-1 sum_i sum_j g(C_ij)` with g the >= 1 indicator
/// applied to the raw cooccurrence counts (the double sum covers both
/// orders, the diagonal is zero by construction).
pub fn mean_connectivity(weights: &WeightMatrix) -> f64 {
    2.0 * weights.positive_pair_count() as f64 / weights.size() as f64
}

/// Fraction of the weight matrix that is non-zero: connectivity/N.
pub fn sparsity(weights: &WeightMatrix) -> f64 {
    mean_connectivity(weights) / weights.size() as f64
}

/// Fractional Hamming distance `(1/N) sum_i |a_i - b_i|`.
pub fn hamming_fraction(recalled: &[bool], nominated: &[bool]) -> Result<f64> {
    if recalled.len() != nominated.len() {
        return Err(Error::LengthMismatch {
            expected: nominated.len(),
            actual: recalled.len(),
        });
    }
    if recalled.is_empty() {
        return Ok(0.0);
    }
    let differing = recalled
        .iter()
        .zip(nominated)
        .filter(|(a, b)| a != b)
        .count();
    Ok(differing as f64 / recalled.len() as f64)
}

/// Mean per-pattern recall error, split by nominated bit class.
///
/// For each pair, errors on the nominated 1-positions are normalized by the
/// count of 1-positions and averaged across pairs (and symmetrically for the
/// 0-positions). Pairs whose nominated vector has no position of a class are
/// excluded from that class's mean.
pub fn f_b_split(recalled: &[Vec<bool>], nominated: &[Vec<bool>]) -> Result<RecallError> {
    if recalled.len() != nominated.len() {
        return Err(Error::LengthMismatch {
            expected: nominated.len(),
            actual: recalled.len(),
        });
    }
    if recalled.is_empty() {
        return Err(Error::EmptyPairs);
    }

    let mut ones_sum = 0.0;
    let mut ones_pairs = 0usize;
    let mut zeros_sum = 0.0;
    let mut zeros_pairs = 0usize;

    for (r, v) in recalled.iter().zip(nominated) {
        if r.len() != v.len() {
            return Err(Error::LengthMismatch {
                expected: v.len(),
                actual: r.len(),
            });
        }
        let mut one_positions = 0usize;
        let mut one_errors = 0usize;
        let mut zero_positions = 0usize;
        let mut zero_errors = 0usize;
        for (&rb, &vb) in r.iter().zip(v) {
            if vb {
                one_positions += 1;
                if !rb {
                    one_errors += 1;
                }
            } else {
                zero_positions += 1;
                if rb {
                    zero_errors += 1;
                }
            }
        }
        if one_positions > 0 {
            ones_sum += one_errors as f64 / one_positions as f64;
            ones_pairs += 1;
        }
        if zero_positions > 0 {
            zeros_sum += zero_errors as f64 / zero_positions as f64;
            zeros_pairs += 1;
        }
    }

    Ok(RecallError {
        f_b_ones: if ones_pairs == 0 { 0.0 } else { ones_sum / ones_pairs as f64 },
        f_b_zeros: if zeros_pairs == 0 { 0.0 } else { zeros_sum / zeros_pairs as f64 },
        trials: recalled.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{train, ThresholdPolicy};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pat(bits: &[u8]) -> Pattern {
        Pattern::from_bits(bits.iter().map(|&b| b != 0).collect())
    }

    #[test]
    fn bias_counts_set_bits() {
        let patterns = [pat(&[1, 0, 0, 0]), pat(&[1, 1, 0, 0])];
        assert_eq!(bias(&patterns), 3.0 / 8.0);
    }

    #[test]
    fn bias_of_all_zero_set_is_zero() {
        assert_eq!(bias(&[pat(&[0, 0, 0]), pat(&[0, 0, 0])]), 0.0);
        assert_eq!(bias(&[]), 0.0);
    }

    #[test]
    fn bias_of_unbiased_random_patterns_is_near_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let patterns: Vec<Pattern> = (0..100)
            .map(|_| Pattern::from_bits((0..200).map(|_| rng.random_bool(0.5)).collect()))
            .collect();
        let b = bias(&patterns);
        assert!((b - 0.5).abs() < 0.02, "bias = {b}");
    }

    #[test]
    fn storage_ratio_reported_table_values() {
        // (N, n, printed alpha) for the five training matrices.
        let rows = [
            (260usize, 41usize, 0.16),
            (673, 121, 0.18),
            (921, 167, 0.18),
            (1357, 273, 0.20),
            (4131, 1412, 0.34),
        ];
        for (n_units, n_patterns, printed) in rows {
            let alpha = storage_ratio(n_patterns, n_units).unwrap();
            assert!(
                ((alpha * 100.0).round() / 100.0 - printed).abs() < 1e-9,
                "{n_patterns}/{n_units} = {alpha} should print as {printed}"
            );
        }
        assert_eq!(storage_ratio(0, 10).unwrap(), 0.0);
        assert!(matches!(storage_ratio(5, 0), Err(Error::ZeroUnits)));
    }

    #[test]
    fn connectivity_counts_ordered_cooccurring_pairs() {
        let (w, _) = train(&[pat(&[1, 1, 0, 0])], 0.0, ThresholdPolicy::default()).unwrap();
        assert_eq!(mean_connectivity(&w), 0.5);
    }

    #[test]
    fn connectivity_matches_brute_force_enumeration() {
        let patterns = [pat(&[1, 1, 0]), pat(&[1, 0, 1])];
        let (w, _) = train(&patterns, 0.0, ThresholdPolicy::default()).unwrap();
        // Brute force over ordered pairs.
        let mut ordered = 0usize;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let cooccur = patterns.iter().any(|p| p.get(i) && p.get(j));
                    ordered += usize::from(cooccur);
                }
            }
        }
        assert_eq!(ordered, 4);
        assert!((mean_connectivity(&w) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sparsity_is_connectivity_over_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(2..30);
            let patterns: Vec<Pattern> = (0..rng.random_range(1..6))
                .map(|_| Pattern::from_bits((0..n).map(|_| rng.random_bool(0.3)).collect()))
                .collect();
            let (w, _) = train(&patterns, 10.0, ThresholdPolicy::default()).unwrap();
            let via_identity = sparsity(&w) * n as f64;
            assert!((via_identity - mean_connectivity(&w)).abs() < 1e-12);
        }
    }

    #[test]
    fn sparsity_of_empty_matrix_is_zero() {
        let (w, _) = train(&[pat(&[1, 0, 0, 0])], 10.0, ThresholdPolicy::default()).unwrap();
        assert_eq!(sparsity(&w), 0.0);
        assert_eq!(mean_connectivity(&w), 0.0);
    }

    #[test]
    fn table_arithmetic_for_sparsity_columns() {
        // (N, printed connectivity, printed sparsity); the first row's
        // printed sparsity is one unit in the last digit away from the
        // quotient, so the check allows exactly that much.
        let rows = [
            (260.0, 15.95, 0.062),
            (673.0, 18.84, 0.028),
            (921.0, 24.87, 0.027),
            (1357.0, 28.90, 0.021),
            (4131.0, 44.50, 0.011),
        ];
        for (n, connectivity, printed) in rows {
            let s = connectivity / n;
            assert!(
                (s - printed).abs() <= 1e-3 + 1e-9,
                "{connectivity}/{n} = {s} vs printed {printed}"
            );
        }
    }

    #[test]
    fn hamming_fraction_basics() {
        let a = [true, true, false, false];
        assert_eq!(hamming_fraction(&a, &a).unwrap(), 0.0);
        let complement: Vec<bool> = a.iter().map(|&b| !b).collect();
        assert_eq!(hamming_fraction(&a, &complement).unwrap(), 1.0);
        let b = [true, false, true, false];
        assert_eq!(hamming_fraction(&a, &b).unwrap(), 0.5);
        assert!(hamming_fraction(&a, &[true]).is_err());
    }

    #[test]
    fn f_b_split_perfect_recall() {
        let nominated = vec![vec![true, false, true], vec![false, true, false]];
        let err = f_b_split(&nominated, &nominated).unwrap();
        assert_eq!(err.f_b_ones, 0.0);
        assert_eq!(err.f_b_zeros, 0.0);
        assert_eq!(err.trials, 2);
    }

    #[test]
    fn f_b_split_one_miss_of_each_kind() {
        let nominated = vec![vec![true, true, false, false]];
        let recalled = vec![vec![false, true, true, false]];
        let err = f_b_split(&recalled, &nominated).unwrap();
        assert_eq!(err.f_b_ones, 0.5);
        assert_eq!(err.f_b_zeros, 0.5);
    }

    #[test]
    fn f_b_split_empty_list_is_an_error() {
        assert!(matches!(f_b_split(&[], &[]), Err(Error::EmptyPairs)));
    }

    #[test]
    fn f_b_split_skips_pairs_without_the_bit_class() {
        // First nominated vector has no 1s: only the second contributes to
        // the ones mean.
        let nominated = vec![vec![false, false], vec![true, true]];
        let recalled = vec![vec![false, false], vec![true, false]];
        let err = f_b_split(&recalled, &nominated).unwrap();
        assert_eq!(err.f_b_ones, 0.5);
        assert_eq!(err.f_b_zeros, 0.0);
    }

    #[test]
    fn random_recall_sits_at_the_no_overlap_benchmark() {
        // A recalled vector drawn uniformly at random errs on any single
        // position with probability exactly 1/2, so both error means sit at
        // the 0.5 no-coherent-overlap level.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 400;
        let nominated: Vec<Vec<bool>> = (0..200)
            .map(|_| (0..n).map(|_| rng.random_bool(0.1)).collect())
            .collect();
        let recalled: Vec<Vec<bool>> = (0..200)
            .map(|_| (0..n).map(|_| rng.random_bool(0.5)).collect())
            .collect();
        let err = f_b_split(&recalled, &nominated).unwrap();
        assert!((err.f_b_ones - 0.5).abs() < 0.03, "ones = {}", err.f_b_ones);
        assert!((err.f_b_zeros - 0.5).abs() < 0.03, "zeros = {}", err.f_b_zeros);
    }

    #[test]
    fn characteristics_display_row_order() {
        let (w, _) = train(
            &[pat(&[1, 1, 0, 0]), pat(&[0, 1, 1, 0])],
            10.0,
            ThresholdPolicy::default(),
        )
        .unwrap();
        let chars =
            MatrixCharacteristics::compute(&w, &[pat(&[1, 1, 0, 0]), pat(&[0, 1, 1, 0])]).unwrap();
        let rendered = chars.to_string();
        let rows: Vec<&str> = rendered.lines().collect();
        assert!(rows[0].starts_with("N "));
        assert!(rows[1].starts_with("n "));
        assert!(rows[2].starts_with("alpha"));
        assert!(rows[3].starts_with("s(T)"));
        assert!(rows[4].starts_with("c(T)"));
        assert!(rows[5].starts_with("Pr(xi=1)"));
    }

    proptest! {
        #[test]
        fn hamming_is_a_scaled_metric(
            a in proptest::collection::vec(any::<bool>(), 12),
            b in proptest::collection::vec(any::<bool>(), 12),
            c in proptest::collection::vec(any::<bool>(), 12),
        ) {
            let dab = hamming_fraction(&a, &b).unwrap();
            let dba = hamming_fraction(&b, &a).unwrap();
            prop_assert_eq!(dab, dba);
            prop_assert_eq!(hamming_fraction(&a, &a).unwrap(), 0.0);
            prop_assert!((dab == 0.0) == (a == b));
            let dac = hamming_fraction(&a, &c).unwrap();
            let dcb = hamming_fraction(&c, &b).unwrap();
            prop_assert!(dab <= dac + dcb + 1e-12);
        }

        #[test]
        fn errors_decompose_by_bit_class(
            recalled in proptest::collection::vec(any::<bool>(), 16),
            nominated in proptest::collection::vec(any::<bool>(), 16),
        ) {
            let total = recalled.iter().zip(&nominated).filter(|(r, v)| r != v).count();
            let ones_err = recalled.iter().zip(&nominated).filter(|(r, v)| **v && !**r).count();
            let zeros_err = recalled.iter().zip(&nominated).filter(|(r, v)| !**v && **r).count();
            prop_assert_eq!(ones_err + zeros_err, total);
        }

        #[test]
        fn bias_is_bounded_by_per_pattern_densities(
            rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 10), 1..8)
        ) {
            let patterns: Vec<Pattern> = rows.into_iter().map(Pattern::from_bits).collect();
            let densities: Vec<f64> = patterns
                .iter()
                .map(|p| p.count_ones() as f64 / p.len() as f64)
                .collect();
            let b = bias(&patterns);
            let lo = densities.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = densities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(b >= lo - 1e-12 && b <= hi + 1e-12);
        }
    }
}
