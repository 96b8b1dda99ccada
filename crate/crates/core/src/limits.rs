//! Constructive deep computations: pointwise limits of transition sequences
//! with stabilization certificates, and the canonical approximating
//! sequences for the cut classifiers f_a^±, the equality tests δ_a, the
//! constant 0^∞, and the square-root limit function.

use serde::Serialize;

use crate::bitseq::{BinaryWord, CantorPoint};
use crate::poly::Polynomial;
use crate::states::{chordal_distance, ExtComplex};
use crate::transitions::{NewtonMap, State, Transition, TransitionError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LimitError {
    #[error("the upper approximants are undefined for the all-ones target (use the constant map)")]
    TargetIsOnes,
    #[error("the lower approximants are undefined for the all-zeros target (use the constant map)")]
    TargetIsZeros,
    #[error(transparent)]
    Transition(#[from] TransitionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitStatus {
    Stabilized,
    Oscillating { period: usize },
    BudgetExhausted,
}

/// Outcome of evaluating a transition sequence at one state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub status: LimitStatus,
    /// The stabilized value, present only when `status` is `Stabilized`.
    pub value: Option<State>,
    /// First index after which the output stays constant (within tolerance).
    pub stabilization_index: Option<usize>,
    pub trace_length: usize,
}

fn states_close(a: &State, b: &State, tol: f64) -> bool {
    match (a, b) {
        // Equality on Cantor points is decidable; no tolerance involved.
        (State::Cantor(x), State::Cantor(y)) => x == y,
        (State::Sphere(z), State::Sphere(w)) => chordal_distance(*z, *w) <= tol,
        _ => false,
    }
}

/// Evaluates seq(0), …, seq(budget) at x and classifies the output trace.
///
/// `Stabilized` requires the tail from the reported index on to be pairwise
/// within `tol` (exact equality for Cantor outputs) and to contain at least
/// two entries. Otherwise the last output is compared against the previous
/// min(trace, 16) outputs; a full-period match of distance ≥ 2 is reported
/// as `Oscillating`.
pub fn pointwise_limit(
    mut seq: impl FnMut(usize) -> Transition,
    x: &State,
    budget: usize,
    tol: f64,
) -> Result<LimitReport, LimitError> {
    assert!(budget >= 1, "budget must be at least 1");
    let mut trace = Vec::with_capacity(budget + 1);
    for n in 0..=budget {
        trace.push(seq(n).apply(x)?);
    }
    Ok(classify_trace(&trace, tol))
}

/// Trace classification shared by `pointwise_limit` and direct-orbit
/// callers.
pub fn classify_trace(trace: &[State], tol: f64) -> LimitReport {
    let last = trace.len() - 1;

    // Longest pairwise-close tail.
    let mut start = last;
    while start > 0 {
        let cand = start - 1;
        if trace[cand + 1..].iter().all(|y| states_close(&trace[cand], y, tol)) {
            start = cand;
        } else {
            break;
        }
    }
    if start < last {
        return LimitReport {
            status: LimitStatus::Stabilized,
            value: Some(trace[last].clone()),
            stabilization_index: Some(start),
            trace_length: trace.len(),
        };
    }

    for q in 2..=16usize.min(last) {
        let reps = q.min(last + 1 - q);
        let matches = (0..reps).all(|i| states_close(&trace[last - i], &trace[last - q - i], tol));
        if matches {
            return LimitReport {
                status: LimitStatus::Oscillating { period: q },
                value: None,
                stabilization_index: None,
                trace_length: trace.len(),
            };
        }
    }

    LimitReport {
        status: LimitStatus::BudgetExhausted,
        value: None,
        stabilization_index: None,
        trace_length: trace.len(),
    }
}

/// w_n = a|_n ⌢ 1, the n-th threshold word approximating the non-strict cut
/// at a.
pub fn threshold_upper_approximant(a: &CantorPoint, n: usize) -> Result<BinaryWord, LimitError> {
    if *a == CantorPoint::ones() {
        return Err(LimitError::TargetIsOnes);
    }
    Ok(a.prefix_of(n).appended(true))
}

/// The n-th threshold word approximating the strict cut at a: for dyadic
/// a = u⌢1⌢0^∞ this is u⌢0⌢1^n; otherwise the prefix up to the n-th set bit
/// with that bit flipped to 0 (set bits counted from 1; n = 0 is treated as
/// n = 1).
pub fn threshold_lower_approximant(a: &CantorPoint, n: usize) -> Result<BinaryWord, LimitError> {
    if *a == CantorPoint::zeros() {
        return Err(LimitError::TargetIsZeros);
    }
    if a.is_eventually_zero() {
        // Canonical form of a dyadic rational ends the prefix with a 1.
        let u_len = a.prefix_part().len() - 1;
        let mut word = a.prefix_of(u_len).appended(false);
        for _ in 0..n {
            word.push(true);
        }
        Ok(word)
    } else {
        let k = n.max(1);
        let j = a
            .nth_positive_bit(k)
            .expect("a non-dyadic eventually periodic point has infinitely many set bits");
        Ok(a.prefix_of(j).appended(false))
    }
}

/// w_n = a|_n, the n-th prefix word approximating the equality test at a.
pub fn delta_approximant(a: &CantorPoint, n: usize) -> BinaryWord {
    a.prefix_of(n)
}

/// w_n = 1^n ⌢ 0, the n-th prefix word approximating the constant 0^∞.
pub fn zero_approximant(n: usize) -> BinaryWord {
    BinaryWord::ones(n).appended(false)
}

/// The pointwise limit of the Newton iterates for x² − a on the extended
/// real line: √a for x > 0, −√a for x < 0, and ∞ at the discontinuity
/// points x ∈ {0, ∞}.
pub fn sqrt_deep_value(a: f64, x: ExtComplex) -> ExtComplex {
    assert!(a > 0.0, "square-root limits need a positive radicand");
    match x {
        ExtComplex::Infinity => ExtComplex::Infinity,
        ExtComplex::Finite(z) => {
            if z.re > 0.0 {
                ExtComplex::real(a.sqrt())
            } else if z.re < 0.0 {
                ExtComplex::real(-a.sqrt())
            } else {
                ExtComplex::Infinity
            }
        }
    }
}

/// The sequence n ↦ φ_{a|_n⌢1} realizing f_a^+.
pub fn upper_cut_sequence(a: CantorPoint) -> impl FnMut(usize) -> Transition {
    move |n| Transition::Threshold(threshold_upper_approximant(&a, n).expect("target checked"))
}

/// The sequence realizing f_a^-.
pub fn lower_cut_sequence(a: CantorPoint) -> impl FnMut(usize) -> Transition {
    move |n| Transition::Threshold(threshold_lower_approximant(&a, n).expect("target checked"))
}

/// The sequence n ↦ ψ_{a|_n} realizing δ_a.
pub fn delta_sequence(a: CantorPoint) -> impl FnMut(usize) -> Transition {
    move |n| Transition::PrefixTest(delta_approximant(&a, n))
}

/// The sequence n ↦ ψ_{1^n⌢0} realizing the constant 0^∞.
pub fn zeros_sequence() -> impl FnMut(usize) -> Transition {
    |n| Transition::PrefixTest(zero_approximant(n))
}

/// The sequence of Newton iterates n ↦ N_p^{(n)} (n = 0 is the identity).
pub fn newton_iterate_sequence(map: NewtonMap) -> impl FnMut(usize) -> Transition {
    move |n| {
        if n == 0 {
            Transition::Identity
        } else {
            Transition::Composite(vec![Transition::NewtonStep(map.clone()); n])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::transitions::threshold_apply;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn p(s: &str) -> CantorPoint {
        s.parse().unwrap()
    }

    #[test]
    fn upper_approximant_examples() {
        assert_eq!(threshold_upper_approximant(&p("(01)"), 2).unwrap(), w("011"));
        assert_eq!(threshold_upper_approximant(&CantorPoint::zeros(), 0).unwrap(), w("1"));
        assert_eq!(threshold_upper_approximant(&CantorPoint::zeros(), 3).unwrap(), w("0001"));
        assert_eq!(
            threshold_upper_approximant(&CantorPoint::ones(), 1).unwrap_err(),
            LimitError::TargetIsOnes
        );
    }

    #[test]
    fn lower_approximant_examples() {
        // Dyadic case: a = 1⌢0^∞, u empty.
        assert_eq!(threshold_lower_approximant(&p("1(0)"), 2).unwrap(), w("011"));
        // Non-dyadic: flip the n-th set bit of (01)^∞.
        assert_eq!(threshold_lower_approximant(&CantorPoint::alternating(), 1).unwrap(), w("00"));
        assert_eq!(threshold_lower_approximant(&CantorPoint::alternating(), 2).unwrap(), w("0100"));
        assert_eq!(
            threshold_lower_approximant(&CantorPoint::zeros(), 1).unwrap_err(),
            LimitError::TargetIsZeros
        );
    }

    #[test]
    fn delta_and_zero_approximants() {
        assert_eq!(delta_approximant(&CantorPoint::alternating(), 4), w("0101"));
        assert_eq!(delta_approximant(&CantorPoint::ones(), 0), BinaryWord::empty());
        assert_eq!(delta_approximant(&CantorPoint::ones(), 2), w("11"));
        assert_eq!(zero_approximant(0), w("0"));
        assert_eq!(zero_approximant(2), w("110"));
        assert_eq!(zero_approximant(5), w("111110"));
    }

    #[test]
    fn limit_of_prefix_tests_at_target() {
        let a = CantorPoint::alternating();
        let report =
            pointwise_limit(delta_sequence(a.clone()), &State::Cantor(a), 12, 0.0).unwrap();
        assert_eq!(report.status, LimitStatus::Stabilized);
        assert_eq!(report.stabilization_index, Some(0));
        assert_eq!(report.value, Some(State::Cantor(CantorPoint::ones())));
    }

    #[test]
    fn newton_cycle_is_oscillating() {
        let map = NewtonMap::new(parse_polynomial("z^3-2z+2").unwrap()).unwrap();
        let report = pointwise_limit(
            newton_iterate_sequence(map),
            &State::Sphere(ExtComplex::real(0.0)),
            12,
            1e-12,
        )
        .unwrap();
        assert_eq!(report.status, LimitStatus::Oscillating { period: 2 });
    }

    #[test]
    fn newton_sqrt_stabilizes() {
        let map = NewtonMap::new(parse_polynomial("x^2-2").unwrap()).unwrap();
        let report = pointwise_limit(
            newton_iterate_sequence(map),
            &State::Sphere(ExtComplex::real(1.0)),
            24,
            1e-12,
        )
        .unwrap();
        assert_eq!(report.status, LimitStatus::Stabilized);
        let value = report.value.unwrap();
        let State::Sphere(z) = value else { panic!() };
        assert!((z.as_finite().unwrap().re - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sqrt_deep_value_cases() {
        assert_eq!(sqrt_deep_value(4.0, ExtComplex::real(3.0)), ExtComplex::real(2.0));
        assert_eq!(sqrt_deep_value(4.0, ExtComplex::real(-3.0)), ExtComplex::real(-2.0));
        assert_eq!(sqrt_deep_value(4.0, ExtComplex::real(0.0)), ExtComplex::Infinity);
        assert_eq!(sqrt_deep_value(4.0, ExtComplex::Infinity), ExtComplex::Infinity);
    }

    #[test]
    fn upper_cut_realization_bound() {
        // For x > a, stabilization happens by one step past the first
        // differing bit.
        let a = CantorPoint::alternating();
        for xw in BinaryWord::all_up_to_length(6) {
            for x in [CantorPoint::word_then_zeros(&xw), CantorPoint::word_then_ones(&xw)] {
                let report = pointwise_limit(
                    upper_cut_sequence(a.clone()),
                    &State::Cantor(x.clone()),
                    16,
                    0.0,
                )
                .unwrap();
                assert_eq!(report.status, LimitStatus::Stabilized, "x={x}");
                let expect = if x <= a { CantorPoint::ones() } else { CantorPoint::zeros() };
                assert_eq!(report.value, Some(State::Cantor(expect)));
                if x > a {
                    let m = x.first_difference(&a).unwrap();
                    assert!(report.stabilization_index.unwrap() <= m + 1);
                }
            }
        }
    }

    #[test]
    fn zero_sequence_blip_bound() {
        // ψ_{1^n⌢0}(x) flips to 1 exactly once, at n = (first 0-bit of x).
        for xw in BinaryWord::all_up_to_length(5) {
            let x = CantorPoint::word_then_zeros(&xw);
            let report =
                pointwise_limit(zeros_sequence(), &State::Cantor(x.clone()), 12, 0.0).unwrap();
            assert_eq!(report.status, LimitStatus::Stabilized);
            assert_eq!(report.value, Some(State::Cantor(CantorPoint::zeros())));
            let first_zero = (0..).find(|&i| !x.bit_at(i)).unwrap();
            assert!(report.stabilization_index.unwrap() <= first_zero + 1);
        }
    }

    #[test]
    fn lower_cut_realization_both_cases() {
        for a in [p("1(0)"), p("101(0)"), CantorPoint::alternating(), p("1(10)")] {
            for xw in BinaryWord::all_up_to_length(5) {
                let x = CantorPoint::word_then_zeros(&xw);
                let report = pointwise_limit(
                    lower_cut_sequence(a.clone()),
                    &State::Cantor(x.clone()),
                    16,
                    0.0,
                )
                .unwrap();
                assert_eq!(report.status, LimitStatus::Stabilized, "a={a} x={x}");
                let expect = if x < a { CantorPoint::ones() } else { CantorPoint::zeros() };
                assert_eq!(report.value, Some(State::Cantor(expect)), "a={a} x={x}");
            }
        }
    }

    #[test]
    fn lower_approximants_stay_below_target() {
        for a in [p("1(0)"), p("011(0)"), CantorPoint::alternating(), p("0(110)")] {
            for n in 0..8 {
                let word = threshold_lower_approximant(&a, n).unwrap();
                let as_point = CantorPoint::word_then_zeros(&word);
                // w_n <_lex a holds as words extended by zeros, and the
                // threshold at w_n accepts a iff false.
                assert!(as_point < a, "a={a} n={n} w={word}");
                assert_eq!(threshold_apply(&word, &a), CantorPoint::zeros());
            }
        }
    }
}
