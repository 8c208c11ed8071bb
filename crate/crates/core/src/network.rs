//! The discrete Hopfield model: Hebbian storage with a zero diagonal and a
//! global inhibitor, threshold calibration, stochastic asynchronous recall,
//! and the energy function.
//!
//! Weights are kept sparse: a pair of units that cooccurs in at least one
//! stored pattern carries `count/N`; every other off-diagonal pair carries
//! the uniform inhibitor `-J/N`, applied analytically through
//! `sum_{j!=i} T_ij V_j = sum_{pos j} (C_ij + J)/N * V_j - (J/N) * (|V| - V_i)`
//! so the dense matrix is never materialized.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Pattern;
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Weight matrix
// ---------------------------------------------------------------------------

/// Symmetric zero-diagonal weight matrix: sparse Hebb counts plus a global
/// inhibitor on every never-cooccurring pair.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    size: usize,
    inhibitor: f64,
    /// Per-unit adjacency `(j, count)` for pairs with count >= 1, sorted by
    /// `j`; each unordered pair appears in both rows.
    neighbors: Vec<Vec<(u32, u32)>>,
    positive_pairs: usize,
}

impl WeightMatrix {
    /// Assemble from unordered pair counts keyed `i < j`.
    pub fn from_counts(
        size: usize,
        inhibitor_strength: f64,
        counts: &HashMap<(u32, u32), u32>,
    ) -> Result<Self> {
        if size < 2 {
            return Err(Error::DegenerateNetwork(size));
        }
        if !(inhibitor_strength >= 0.0) {
            return Err(Error::InvalidInhibitor(inhibitor_strength));
        }
        let mut neighbors = vec![Vec::new(); size];
        let mut positive_pairs = 0usize;
        for (&(i, j), &c) in counts {
            let (i, j) = (i as usize, j as usize);
            if i >= j || j >= size {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    size,
                });
            }
            if c == 0 {
                continue;
            }
            neighbors[i].push((j as u32, c));
            neighbors[j].push((i as u32, c));
            positive_pairs += 1;
        }
        for row in &mut neighbors {
            row.sort_unstable_by_key(|&(j, _)| j);
        }
        Ok(WeightMatrix {
            size,
            inhibitor: inhibitor_strength,
            neighbors,
            positive_pairs,
        })
    }

    /// Number of units N.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Inhibitor strength J.
    pub fn inhibitor_strength(&self) -> f64 {
        self.inhibitor
    }

    /// Raw cooccurrence count for a pair (0 when the pair never cooccurs or
    /// on the diagonal).
    pub fn count(&self, i: usize, j: usize) -> u32 {
        if i == j || i >= self.size || j >= self.size {
            return 0;
        }
        match self.neighbors[i].binary_search_by_key(&(j as u32), |&(k, _)| k) {
            Ok(pos) => self.neighbors[i][pos].1,
            Err(_) => 0,
        }
    }

    /// Effective weight T_ij: `count/N` for cooccurring pairs, `-J/N` for the
    /// rest off the diagonal, 0 on the diagonal.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let c = self.count(i, j);
        if c > 0 {
            c as f64 / self.size as f64
        } else {
            -self.inhibitor / self.size as f64
        }
    }

    /// Cooccurring partners of unit `i` as `(j, count)`, sorted by `j`.
    pub fn neighbors(&self, i: usize) -> &[(u32, u32)] {
        &self.neighbors[i]
    }

    /// Number of unordered pairs with a positive count.
    pub fn positive_pair_count(&self) -> usize {
        self.positive_pairs
    }

    /// All positive entries as `(i, j, count)` with `i < j`, ascending.
    pub fn positive_pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |&&(j, _)| i < j as usize)
                .map(move |&(j, c)| (i, j as usize, c))
        })
    }

    /// Local field at `i` given outputs, one external input and the current
    /// number of active units.
    fn field(&self, outputs: &[bool], external_input: f64, active: usize, i: usize) -> f64 {
        let mut pos = 0.0;
        for &(j, c) in &self.neighbors[i] {
            if outputs[j as usize] {
                pos += c as f64 + self.inhibitor;
            }
        }
        let others = (active - usize::from(outputs[i])) as f64;
        (pos - self.inhibitor * others) / self.size as f64 + external_input
    }

    fn energy_of(&self, outputs: &[bool], thresholds: &[f64], external: &[f64]) -> f64 {
        let active = outputs.iter().filter(|&&v| v).count() as f64;
        let mut count_sum = 0.0;
        let mut active_pairs = 0.0;
        for (i, row) in self.neighbors.iter().enumerate() {
            if !outputs[i] {
                continue;
            }
            for &(j, c) in row {
                if i < j as usize && outputs[j as usize] {
                    count_sum += c as f64;
                    active_pairs += 1.0;
                }
            }
        }
        let coupling = -count_sum / self.size as f64
            + self.inhibitor / (2.0 * self.size as f64) * (active * (active - 1.0) - 2.0 * active_pairs);
        let bias_terms: f64 = outputs
            .iter()
            .zip(thresholds.iter().zip(external.iter()))
            .filter(|(&v, _)| v)
            .map(|(_, (&u, &i_ext))| u - i_ext)
            .sum();
        coupling + bias_terms
    }
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// How the uniform threshold is chosen at training time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy {
    /// `u = fraction * (mean over patterns of the mean in-pattern field of
    /// their set bits)`, calibrated on the trained weights.
    FieldFraction { fraction: f64 },
    /// An explicit override.
    Fixed { value: f64 },
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::FieldFraction { fraction: 0.5 }
    }
}

/// Mean number of set bits per pattern; the suggested inhibitor strength
/// (one inhibitor unit per typical content word).
pub fn suggested_inhibitor(patterns: &[Pattern]) -> f64 {
    if patterns.is_empty() {
        return 0.0;
    }
    patterns.iter().map(|p| p.count_ones() as f64).sum::<f64>() / patterns.len() as f64
}

/// Mean over stored patterns of the mean field a set bit receives from the
/// other set bits of its own pattern. Within a pattern every pair cooccurs,
/// so only positive counts contribute.
fn mean_in_pattern_field(weights: &WeightMatrix, patterns: &[Pattern]) -> f64 {
    let n = weights.size() as f64;
    let mut total = 0.0;
    let mut counted = 0usize;
    for p in patterns {
        let ones: Vec<usize> = p.ones().collect();
        if ones.is_empty() {
            continue;
        }
        let mut pattern_sum = 0.0;
        for &i in &ones {
            for &j in &ones {
                if i != j {
                    pattern_sum += weights.count(i, j) as f64;
                }
            }
        }
        total += pattern_sum / n / ones.len() as f64;
        counted += 1;
    }
    if counted == 0 {
        0.0
    } else {
        total / counted as f64
    }
}

/// Hebbian training: counts every unordered pair of units that cooccur in a
/// pattern, scales by 1/N, and calibrates the uniform threshold vector.
pub fn train(
    patterns: &[Pattern],
    inhibitor_strength: f64,
    policy: ThresholdPolicy,
) -> Result<(WeightMatrix, Vec<f64>)> {
    let first = patterns.first().ok_or(Error::EmptyPatternSet)?;
    let n = first.len();
    if n < 2 {
        return Err(Error::DegenerateNetwork(n));
    }
    for p in patterns {
        if p.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: p.len(),
            });
        }
    }

    let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
    for p in patterns {
        let ones: Vec<u32> = p.ones().map(|i| i as u32).collect();
        for (a, &i) in ones.iter().enumerate() {
            for &j in &ones[a + 1..] {
                *counts.entry((i, j)).or_insert(0) += 1;
            }
        }
    }
    let weights = WeightMatrix::from_counts(n, inhibitor_strength, &counts)?;

    let u = match policy {
        ThresholdPolicy::Fixed { value } => value,
        ThresholdPolicy::FieldFraction { fraction } => {
            fraction * mean_in_pattern_field(&weights, patterns)
        }
    };
    Ok((weights, vec![u; n]))
}

// ---------------------------------------------------------------------------
// State and dynamics
// ---------------------------------------------------------------------------

/// Mutable network state: binary outputs plus the fixed threshold and
/// external-input vectors.
#[derive(Debug, Clone)]
pub struct NetworkState {
    pub outputs: Vec<bool>,
    pub thresholds: Vec<f64>,
    pub external_inputs: Vec<f64>,
}

impl NetworkState {
    pub fn new(outputs: Vec<bool>, thresholds: Vec<f64>, external_inputs: Vec<f64>) -> Result<Self> {
        if thresholds.len() != outputs.len() {
            return Err(Error::LengthMismatch {
                expected: outputs.len(),
                actual: thresholds.len(),
            });
        }
        if external_inputs.len() != outputs.len() {
            return Err(Error::LengthMismatch {
                expected: outputs.len(),
                actual: external_inputs.len(),
            });
        }
        Ok(NetworkState {
            outputs,
            thresholds,
            external_inputs,
        })
    }

    fn check_against(&self, weights: &WeightMatrix) -> Result<()> {
        if self.outputs.len() != weights.size() {
            return Err(Error::LengthMismatch {
                expected: weights.size(),
                actual: self.outputs.len(),
            });
        }
        Ok(())
    }
}

/// Input sum at unit `i`: `sum_{j != i} T_ij V_j + I_i`, self term excluded.
pub fn local_field(state: &NetworkState, weights: &WeightMatrix, i: usize) -> Result<f64> {
    state.check_against(weights)?;
    if i >= weights.size() {
        return Err(Error::IndexOutOfRange {
            index: i,
            size: weights.size(),
        });
    }
    let active = state.outputs.iter().filter(|&&v| v).count();
    Ok(weights.field(&state.outputs, state.external_inputs[i], active, i))
}

/// Asynchronous single-unit update: the output becomes 1 iff the local field
/// reaches the threshold (ties map to 1). Returns the new bit.
pub fn update_unit(state: &mut NetworkState, weights: &WeightMatrix, i: usize) -> Result<bool> {
    let field = local_field(state, weights, i)?;
    let new_bit = field >= state.thresholds[i];
    state.outputs[i] = new_bit;
    Ok(new_bit)
}

/// The Lyapunov energy
/// `-1/2 sum_ij T_ij V_i V_j + sum_i U_i V_i - sum_i I_i V_i`.
pub fn energy(state: &NetworkState, weights: &WeightMatrix) -> Result<f64> {
    state.check_against(weights)?;
    Ok(weights.energy_of(&state.outputs, &state.thresholds, &state.external_inputs))
}

/// Result of one recall run.
#[derive(Debug, Clone, PartialEq)]
pub struct RecallOutcome {
    pub final_state: Vec<bool>,
    pub sweeps_used: usize,
    /// Energy after each completed sweep; nonincreasing.
    pub energy_trace: Vec<f64>,
    /// True when a full sweep changed no bit.
    pub converged: bool,
}

/// Run asynchronous recall from `initial`: each sweep updates every unit once
/// in a fresh seeded random permutation, stopping at the first sweep with no
/// bit changes or after `max_sweeps`.
pub fn recall(
    initial: &[bool],
    weights: &WeightMatrix,
    thresholds: &[f64],
    external: &[f64],
    rng_seed: u64,
    max_sweeps: usize,
) -> Result<RecallOutcome> {
    let n = weights.size();
    for (len, what) in [(initial.len(), 0), (thresholds.len(), 1), (external.len(), 2)] {
        let _ = what;
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    if max_sweeps == 0 {
        return Err(Error::InvalidPlan("max_sweeps must be at least 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut outputs = initial.to_vec();
    let mut active = outputs.iter().filter(|&&v| v).count();
    let mut order: Vec<usize> = (0..n).collect();
    let mut energy_trace = Vec::new();
    let mut converged = false;
    let mut sweeps_used = 0;

    for _ in 0..max_sweeps {
        order.shuffle(&mut rng);
        let mut changes = 0usize;
        for &i in &order {
            let field = weights.field(&outputs, external[i], active, i);
            let new_bit = field >= thresholds[i];
            if new_bit != outputs[i] {
                if new_bit {
                    active += 1;
                } else {
                    active -= 1;
                }
                outputs[i] = new_bit;
                changes += 1;
            }
        }
        sweeps_used += 1;
        energy_trace.push(weights.energy_of(&outputs, thresholds, external));
        if changes == 0 {
            converged = true;
            break;
        }
    }

    Ok(RecallOutcome {
        final_state: outputs,
        sweeps_used,
        energy_trace,
        converged,
    })
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Serialize a trained network: header `N J`, one `i j count` line per
/// positive entry (i < j, ascending), then the uniform threshold as `U u`.
pub fn matrix_to_text(weights: &WeightMatrix, threshold: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", weights.size(), weights.inhibitor_strength());
    for (i, j, c) in weights.positive_pairs() {
        let _ = writeln!(out, "{i} {j} {c}");
    }
    let _ = writeln!(out, "U {threshold}");
    out
}

/// Parse the matrix format. Returns the weights and the uniform threshold.
pub fn matrix_from_text(text: &str, origin: &Path) -> Result<(WeightMatrix, f64)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(origin, 1, "missing 'N J' header"))?;
    let mut parts = header.split_whitespace();
    let size: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(origin, 1, "bad unit count in header"))?;
    let inhibitor: f64 = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(origin, 1, "bad inhibitor strength in header"))?;

    let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
    let mut threshold = None;
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("U ") {
            threshold = Some(rest.trim().parse::<f64>().map_err(|_| {
                Error::parse(origin, lineno + 1, format!("bad threshold {rest:?}"))
            })?);
            continue;
        }
        let mut fields = line.split_whitespace();
        let parse_next = |fields: &mut std::str::SplitWhitespace<'_>, what: &str| {
            fields
                .next()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::parse(origin, lineno + 1, format!("bad {what} in entry")))
        };
        let i = parse_next(&mut fields, "row index")? as u32;
        let j = parse_next(&mut fields, "column index")? as u32;
        let c = parse_next(&mut fields, "count")? as u32;
        if counts.insert((i, j), c).is_some() {
            return Err(Error::parse(
                origin,
                lineno + 1,
                format!("duplicate entry for pair ({i}, {j})"),
            ));
        }
    }
    let threshold =
        threshold.ok_or_else(|| Error::parse(origin, 1, "missing threshold line 'U u'"))?;
    let weights = WeightMatrix::from_counts(size, inhibitor, &counts)?;
    Ok((weights, threshold))
}

pub fn save_matrix(weights: &WeightMatrix, threshold: f64, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, matrix_to_text(weights, threshold)).map_err(|e| Error::io(path, e))
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<(WeightMatrix, f64)> {
    let path = path.as_ref();
    matrix_from_text(&crate::corpus::load_text(path)?, path)
}
