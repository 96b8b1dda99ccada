//! Finite binary words and eventually periodic infinite binary sequences.
//!
//! Points of Cantor space are restricted to eventually periodic sequences,
//! stored in a canonical `prefix(period)` form. Canonicalization makes
//! equality a structural check and the lexicographic order decidable: two
//! sequences agree everywhere iff they agree on the first
//! `max(|prefix|) + lcm(|period|)` bits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A finite string over {0,1}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryWord {
    bits: Vec<bool>,
}

impl BinaryWord {
    pub fn new(bits: Vec<bool>) -> Self {
        BinaryWord { bits }
    }

    pub fn empty() -> Self {
        BinaryWord { bits: Vec::new() }
    }

    /// All 2^len words of the given length, in lexicographic order.
    pub fn all_of_length(len: usize) -> Vec<BinaryWord> {
        let mut out = Vec::with_capacity(1 << len);
        for v in 0u64..(1 << len) {
            let bits = (0..len).map(|i| (v >> (len - 1 - i)) & 1 == 1).collect();
            out.push(BinaryWord::new(bits));
        }
        out
    }

    /// All words of length at most `max_len`, shortest first, lexicographic
    /// within a length.
    pub fn all_up_to_length(max_len: usize) -> Vec<BinaryWord> {
        (0..=max_len).flat_map(BinaryWord::all_of_length).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn concat(&self, other: &BinaryWord) -> BinaryWord {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BinaryWord { bits }
    }

    pub fn appended(&self, bit: bool) -> BinaryWord {
        let mut bits = self.bits.clone();
        bits.push(bit);
        BinaryWord { bits }
    }

    pub fn repeated(&self, times: usize) -> BinaryWord {
        let mut bits = Vec::with_capacity(self.bits.len() * times);
        for _ in 0..times {
            bits.extend_from_slice(&self.bits);
        }
        BinaryWord { bits }
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    pub fn ones(len: usize) -> BinaryWord {
        BinaryWord { bits: vec![true; len] }
    }

    pub fn zeros(len: usize) -> BinaryWord {
        BinaryWord { bits: vec![false; len] }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w\"{}\"", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("invalid character {0:?} at position {1}")]
    BadChar(char, usize),
    #[error("empty period: the part in parentheses must be non-empty")]
    EmptyPeriod,
    #[error("unbalanced parentheses")]
    Unbalanced,
}

impl FromStr for BinaryWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(ParseError::BadChar(other, i)),
            }
        }
        Ok(BinaryWord { bits })
    }
}

/// An eventually periodic point of Cantor space, in canonical form.
///
/// The sequence is `prefix` followed by `period` repeated forever. Canonical
/// form: the period is primitive (not a power of a shorter word) and the
/// prefix is as short as possible (its last bit never equals the period's
/// last bit). Two points are equal iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CantorPoint {
    prefix: BinaryWord,
    period: BinaryWord,
}

impl CantorPoint {
    /// Builds the point `prefix ⌢ period^∞` and canonicalizes it.
    ///
    /// Panics if `period` is empty.
    pub fn new(prefix: BinaryWord, period: BinaryWord) -> Self {
        assert!(!period.is_empty(), "period must be non-empty");
        let mut prefix = prefix.bits;
        let mut period = primitive_root(&period.bits);
        while let Some(&last) = prefix.last() {
            if last == *period.last().unwrap() {
                prefix.pop();
                let tail = period.pop().unwrap();
                period.insert(0, tail);
            } else {
                break;
            }
        }
        CantorPoint {
            prefix: BinaryWord::new(prefix),
            period: BinaryWord::new(period),
        }
    }

    /// The all-zeros sequence 0^∞.
    pub fn zeros() -> Self {
        CantorPoint::new(BinaryWord::empty(), BinaryWord::new(vec![false]))
    }

    /// The all-ones sequence 1^∞.
    pub fn ones() -> Self {
        CantorPoint::new(BinaryWord::empty(), BinaryWord::new(vec![true]))
    }

    /// The alternating sequence (01)^∞.
    pub fn alternating() -> Self {
        CantorPoint::new(BinaryWord::empty(), BinaryWord::new(vec![false, true]))
    }

    /// `w ⌢ 0^∞`.
    pub fn word_then_zeros(w: &BinaryWord) -> Self {
        CantorPoint::new(w.clone(), BinaryWord::new(vec![false]))
    }

    /// `w ⌢ 1^∞`.
    pub fn word_then_ones(w: &BinaryWord) -> Self {
        CantorPoint::new(w.clone(), BinaryWord::new(vec![true]))
    }

    /// `w ⌢ x`.
    pub fn word_then_point(w: &BinaryWord, x: &CantorPoint) -> Self {
        CantorPoint::new(w.concat(&x.prefix), x.period.clone())
    }

    pub fn prefix_part(&self) -> &BinaryWord {
        &self.prefix
    }

    pub fn period_part(&self) -> &BinaryWord {
        &self.period
    }

    /// Bit i of the stream: prefix bits first, then the period repeated.
    pub fn bit_at(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix.bit(i)
        } else {
            self.period.bit((i - self.prefix.len()) % self.period.len())
        }
    }

    /// The first n bits.
    pub fn prefix_of(&self, n: usize) -> BinaryWord {
        BinaryWord::new((0..n).map(|i| self.bit_at(i)).collect())
    }

    /// Whether the first |w| bits are exactly w.
    pub fn extends(&self, w: &BinaryWord) -> bool {
        (0..w.len()).all(|i| self.bit_at(i) == w.bit(i))
    }

    /// Number of bits sufficient to decide equality/order against `other`:
    /// `max(|prefix|) + lcm(|period|)`.
    pub fn decision_bound(&self, other: &CantorPoint) -> usize {
        self.prefix.len().max(other.prefix.len()) + self.period.len().lcm(&other.period.len())
    }

    /// Lexicographic comparison of the two bit streams. Decidable: the
    /// streams are compared at the first `decision_bound` positions.
    pub fn lex_compare(&self, other: &CantorPoint) -> Ordering {
        let bound = self.decision_bound(other);
        for i in 0..bound {
            match (self.bit_at(i), other.bit_at(i)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        Ordering::Equal
    }

    /// Index of the first bit where the two streams differ, if any.
    pub fn first_difference(&self, other: &CantorPoint) -> Option<usize> {
        let bound = self.decision_bound(other);
        (0..bound).find(|&i| self.bit_at(i) != other.bit_at(i))
    }

    /// True iff the tail is all zeros, i.e. the point is `u⌢1⌢0^∞` or 0^∞.
    pub fn is_eventually_zero(&self) -> bool {
        self.period.bits() == [false]
    }

    /// True iff the tail is all ones.
    pub fn is_eventually_one(&self) -> bool {
        self.period.bits() == [true]
    }

    /// 0-based index of the k-th set bit (k counted from 1). The point must
    /// have at least k set bits; for eventually periodic sequences this holds
    /// for all k whenever the period contains a 1.
    pub fn nth_positive_bit(&self, k: usize) -> Option<usize> {
        assert!(k >= 1, "positive bits are counted from 1");
        let mut seen = 0usize;
        let hard_stop = self.prefix.len() + self.period.len() * k + 1;
        for i in 0..hard_stop {
            if self.bit_at(i) {
                seen += 1;
                if seen == k {
                    return Some(i);
                }
            }
        }
        None
    }
}

impl PartialOrd for CantorPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CantorPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_compare(other)
    }
}

/// Notation `prefix(period)`, e.g. `10(01)` for 10⌢(01)^∞. The canonical
/// form is printed, so equal points print identically.
impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.prefix, self.period)
    }
}

impl fmt::Debug for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p\"{}\"", self)
    }
}

impl FromStr for CantorPoint {
    type Err = ParseError;

    /// Accepts `prefix(period)` or a bare word `w`, read as `w⌢0^∞`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match (s.find('('), s.rfind(')')) {
            (Some(open), Some(close)) if open < close && close == s.len() - 1 => {
                let prefix: BinaryWord = s[..open].parse()?;
                let period: BinaryWord = s[open + 1..close].parse()?;
                if period.is_empty() {
                    return Err(ParseError::EmptyPeriod);
                }
                Ok(CantorPoint::new(prefix, period))
            }
            (None, None) => Ok(CantorPoint::word_then_zeros(&s.parse()?)),
            _ => Err(ParseError::Unbalanced),
        }
    }
}

impl From<CantorPoint> for String {
    fn from(p: CantorPoint) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for CantorPoint {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, ParseError> {
        s.parse()
    }
}

/// Shortest word whose repetition equals `bits`.
fn primitive_root(bits: &[bool]) -> Vec<bool> {
    let n = bits.len();
    for d in 1..=n / 2 {
        if n % d == 0 && (d..n).all(|i| bits[i] == bits[i - d]) {
            return bits[..d].to_vec();
        }
    }
    bits.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn p(s: &str) -> CantorPoint {
        s.parse().unwrap()
    }

    #[test]
    fn bit_at_alternating() {
        let x = CantorPoint::alternating();
        assert!(x.bit_at(5));
        assert!(!x.bit_at(4));
    }

    #[test]
    fn bit_at_prefix_then_tail() {
        let x = p("111(0)");
        assert!(x.bit_at(2));
        assert!(!x.bit_at(3));
    }

    #[test]
    fn lex_compare_basic() {
        assert_eq!(CantorPoint::zeros().lex_compare(&CantorPoint::ones()), Ordering::Less);
        // (01)^∞ vs 0⌢1^∞: first difference at index 2.
        let a = CantorPoint::alternating();
        let b = p("0(1)");
        assert_eq!(a.first_difference(&b), Some(2));
        assert_eq!(a.lex_compare(&b), Ordering::Less);
        assert_eq!(a.lex_compare(&a), Ordering::Equal);
    }

    #[test]
    fn prefix_of_examples() {
        assert_eq!(CantorPoint::alternating().prefix_of(3), w("010"));
        assert_eq!(p("(01)").prefix_of(0), BinaryWord::empty());
        assert_eq!(p("1(0)").prefix_of(4), w("1000"));
    }

    #[test]
    fn extends_examples() {
        assert!(p("101(0)").extends(&w("10")));
        assert!(!CantorPoint::zeros().extends(&w("1")));
        assert!(p("1101(10)").extends(&BinaryWord::empty()));
    }

    #[test]
    fn canonical_form_is_unique() {
        // 0(01), (01) with rotated period, and 0101(0101) all name points of
        // the alternating orbit; equal streams must canonicalize identically.
        let a = CantorPoint::new(w("01"), w("0101"));
        let b = CantorPoint::alternating();
        assert_eq!(a, b);
        let c = CantorPoint::new(w("0"), w("10"));
        assert_eq!(c, b);
        // 1(0) vs 10(0) vs 1(00)
        assert_eq!(p("10(0)"), p("1(0)"));
        assert_eq!(CantorPoint::new(w("1"), w("00")), p("1(0)"));
    }

    #[test]
    fn canonical_period_is_primitive() {
        let x = CantorPoint::new(BinaryWord::empty(), w("010101"));
        assert_eq!(x.period_part().len(), 2);
    }

    #[test]
    fn display_round_trip() {
        for s in ["(0)", "(1)", "10(01)", "1(0)", "(011)"] {
            let x = p(s);
            assert_eq!(x, p(&x.to_string()));
        }
    }

    #[test]
    fn rejects_empty_period() {
        assert_eq!("10()".parse::<CantorPoint>(), Err(ParseError::EmptyPeriod));
    }

    #[test]
    fn nth_positive_bit_alternating() {
        let x = CantorPoint::alternating();
        assert_eq!(x.nth_positive_bit(1), Some(1));
        assert_eq!(x.nth_positive_bit(2), Some(3));
        assert_eq!(x.nth_positive_bit(5), Some(9));
        assert_eq!(CantorPoint::zeros().nth_positive_bit(1), None);
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(BinaryWord::all_of_length(2).len(), 4);
        assert_eq!(BinaryWord::all_up_to_length(3).len(), 15);
        assert_eq!(BinaryWord::all_of_length(0), vec![BinaryWord::empty()]);
    }
}
