//! Finitary independence diagnostics: two-sided shattering search at a cut
//! a < b, certificate verification, trace-set growth counting against the
//! Sauer–Shelah bound, and a greedy separation profile.
//!
//! All verdicts are one-sided at finite scale: a returned witness certifies
//! an independence pattern of its size; exhausting the search up to the cap
//! only says none was found on this sample.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TamenessError {
    #[error("the cut requires a < b (got a = {a}, b = {b})")]
    Cut { a: f64, b: f64 },
    #[error("value {value} of {function:?} at {state:?} lies strictly inside the cut")]
    AmbiguousValue { function: String, state: String, value: f64 },
}

/// Family × sample table of real values; rows are functions.
#[derive(Clone, Debug, Serialize)]
pub struct EvalMatrix {
    pub functions: Vec<String>,
    pub sample: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl EvalMatrix {
    pub fn new(functions: Vec<String>, sample: Vec<String>, values: Vec<Vec<f64>>) -> Self {
        assert_eq!(functions.len(), values.len(), "one row per function");
        for row in &values {
            assert_eq!(row.len(), sample.len(), "rows must match the sample");
            assert!(row.iter().all(|v| v.is_finite()), "values must be finite");
        }
        EvalMatrix { functions, sample, values }
    }

    pub fn n_functions(&self) -> usize {
        self.values.len()
    }

    pub fn n_sample(&self) -> usize {
        self.sample.len()
    }
}

/// Certificate that `points` is (a,b)-shattered: for every subset mask,
/// `realizers[mask]` names a function that is ≤ a on the masked points and
/// ≥ b on the rest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceWitness {
    pub points: Vec<usize>,
    /// Indexed by subset bitmask; bit i refers to points[i].
    pub realizers: Vec<usize>,
}

fn check_cut(a: f64, b: f64) -> Result<(), TamenessError> {
    if a < b {
        Ok(())
    } else {
        Err(TamenessError::Cut { a, b })
    }
}

/// The sign pattern of function `row` on `points`: bit i set when the value
/// is ≤ a, clear when ≥ b; None when some value lies strictly inside (a, b).
fn pattern_of(row: &[f64], points: &[usize], a: f64, b: f64) -> Option<usize> {
    let mut mask = 0usize;
    for (i, &j) in points.iter().enumerate() {
        let v = row[j];
        if v <= a {
            mask |= 1 << i;
        } else if v < b {
            return None;
        }
    }
    Some(mask)
}

/// Tries to shatter exactly the given points; returns the realizer table on
/// success.
fn shatter(m: &EvalMatrix, points: &[usize], a: f64, b: f64) -> Option<Vec<usize>> {
    let total = 1usize << points.len();
    let mut realizers = vec![usize::MAX; total];
    let mut found = 0usize;
    for (f, row) in m.values.iter().enumerate() {
        if let Some(mask) = pattern_of(row, points, a, b) {
            if realizers[mask] == usize::MAX {
                realizers[mask] = f;
                found += 1;
                if found == total {
                    return Some(realizers);
                }
            }
        }
    }
    None
}

/// Largest n ≤ cap for which some n-point subset of the sample is
/// (a,b)-shattered, with a witness for the maximum. Subset sizes are
/// searched upward and the search stops at the first size with no shattered
/// subset (shattering is closed downward), enumerating subsets
/// lexicographically so ties break deterministically.
pub fn independence_dimension(
    m: &EvalMatrix,
    a: f64,
    b: f64,
    cap: usize,
) -> Result<(usize, Option<IndependenceWitness>), TamenessError> {
    check_cut(a, b)?;
    assert!(cap >= 1, "cap must be at least 1");
    let mut best: (usize, Option<IndependenceWitness>) = (0, None);
    for n in 1..=cap.min(m.n_sample()) {
        let mut found_at_n = None;
        let mut points: Vec<usize> = (0..n).collect();
        loop {
            if let Some(realizers) = shatter(m, &points, a, b) {
                found_at_n = Some(IndependenceWitness { points: points.clone(), realizers });
                break;
            }
            if !next_combination(&mut points, m.n_sample()) {
                break;
            }
        }
        match found_at_n {
            Some(w) => best = (n, Some(w)),
            None => break,
        }
    }
    Ok(best)
}

/// Advances `points` to the next lexicographic combination of the same size
/// drawn from 0..limit; false when exhausted.
fn next_combination(points: &mut [usize], limit: usize) -> bool {
    let n = points.len();
    let mut i = n;
    while i > 0 {
        i -= 1;
        if points[i] + 1 <= limit - (n - i) {
            points[i] += 1;
            for k in i + 1..n {
                points[k] = points[k - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Replays a witness against the matrix.
pub fn ip_certificate_check(
    m: &EvalMatrix,
    w: &IndependenceWitness,
    a: f64,
    b: f64,
) -> bool {
    let n = w.points.len();
    if a >= b || w.realizers.len() != (1 << n) || w.points.iter().any(|&j| j >= m.n_sample()) {
        return false;
    }
    for (mask, &f) in w.realizers.iter().enumerate() {
        if f >= m.n_functions() {
            return false;
        }
        let row = &m.values[f];
        for (i, &j) in w.points.iter().enumerate() {
            let v = row[j];
            let ok = if mask & (1 << i) != 0 { v <= a } else { v >= b };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Number of distinct {0,1} restriction patterns over the subsample, where
/// a value ≥ b counts as membership and ≤ a as non-membership.
pub fn growth_trace_count(
    m: &EvalMatrix,
    a: f64,
    b: f64,
    subsample: &[usize],
) -> Result<usize, TamenessError> {
    check_cut(a, b)?;
    assert!(subsample.len() <= 64, "trace masks are limited to 64 points");
    let mut traces: Vec<u64> = Vec::with_capacity(m.n_functions());
    for (f, row) in m.values.iter().enumerate() {
        let mut mask = 0u64;
        for (i, &j) in subsample.iter().enumerate() {
            let v = row[j];
            if v >= b {
                mask |= 1 << i;
            } else if v > a {
                return Err(TamenessError::AmbiguousValue {
                    function: m.functions[f].clone(),
                    state: m.sample[j].clone(),
                    value: v,
                });
            }
        }
        traces.push(mask);
    }
    traces.sort_unstable();
    traces.dedup();
    Ok(traces.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct SauerReport {
    pub dim: usize,
    /// max over tested subsamples of traces / Σ_{i≤dim} C(m,i); ≤ 1 always.
    pub worst_ratio: f64,
    pub bound_ok: bool,
    pub subsamples_tested: usize,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Σ_{i=0}^{d} C(m, i), the trace-count bound for a family of independence
/// dimension d on m points.
pub fn sauer_bound(m: usize, d: usize) -> u128 {
    (0..=d.min(m)).map(|i| binomial(m, i)).sum()
}

const SUBSAMPLE_LIMIT: usize = 12;
const RANDOM_SUBSAMPLES_PER_SIZE: usize = 64;

/// Computes the independence dimension and verifies the trace-count bound on
/// subsamples: exhaustively when the sample has at most 12 points, else on
/// seeded random subsamples of each size up to 12.
pub fn sauer_bound_check(
    m: &EvalMatrix,
    a: f64,
    b: f64,
    cap: usize,
) -> Result<SauerReport, TamenessError> {
    let (dim, _) = independence_dimension(m, a, b, cap)?;
    let total = m.n_sample();
    let mut worst_ratio = 0.0f64;
    let mut tested = 0usize;

    let mut consider = |subsample: &[usize], worst: &mut f64| -> Result<(), TamenessError> {
        let traces = growth_trace_count(m, a, b, subsample)?;
        let bound = sauer_bound(subsample.len(), dim);
        let ratio = traces as f64 / bound as f64;
        if ratio > *worst {
            *worst = ratio;
        }
        Ok(())
    };

    if total <= SUBSAMPLE_LIMIT {
        for mask in 1u32..(1 << total) {
            let subsample: Vec<usize> = (0..total).filter(|&j| mask & (1 << j) != 0).collect();
            consider(&subsample, &mut worst_ratio)?;
            tested += 1;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5a5a);
        for size in 1..=SUBSAMPLE_LIMIT {
            for _ in 0..RANDOM_SUBSAMPLES_PER_SIZE {
                let mut subsample = rand::seq::index::sample(&mut rng, total, size).into_vec();
                subsample.sort_unstable();
                consider(&subsample, &mut worst_ratio)?;
                tested += 1;
            }
        }
    }

    Ok(SauerReport { dim, worst_ratio, bound_ok: worst_ratio <= 1.0, subsamples_tested: tested })
}

/// Size of a greedily built subset of functions pairwise at sup-distance
/// ≥ gap over the sample; a lower bound on the maximum such subset.
pub fn separation_profile(m: &EvalMatrix, gap: f64) -> usize {
    assert!(gap > 0.0, "gap must be positive");
    let mut kept: Vec<usize> = Vec::new();
    for f in 0..m.n_functions() {
        let far_from_all = kept.iter().all(|&g| {
            m.values[f]
                .iter()
                .zip(&m.values[g])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
                >= gap
        });
        if far_from_all {
            kept.push(f);
        }
    }
    kept.len()
}
