//! Generators for the seven minimal function families (and the three-valued
//! step presentation of the extended duplicate) at finite depth, over a
//! chosen regular dyadic subtree, with finite-scale structure checks:
//! along-branch convergence, anti-chain discreteness, and the one-sided cut
//! identities.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bitseq::{BinaryWord, CantorPoint};
use crate::tameness::EvalMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("family depth {requested} exceeds the subtree depth {available}")]
    Depth { requested: usize, available: usize },
    #[error("member {member:?} is not defined on sample state {state:?}")]
    DomainMismatch { member: String, state: String },
}

/// Violations reported by `DyadicSubtree::validate`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SubtreeInvariantError {
    #[error("order not preserved between {0:?} and {1:?}")]
    Order(BinaryWord, BinaryWord),
    #[error("meet not preserved for {0:?} and {1:?}")]
    Meet(BinaryWord, BinaryWord),
    #[error("level {0} is not aligned to a single length")]
    Level(usize),
    #[error("incomparable nodes {0:?} and {1:?} share a constant extension")]
    Extension(BinaryWord, BinaryWord),
}

/// A regular (level-aligned) order- and meet-preserving embedding of the
/// binary tree into itself, stored as index word ↦ subtree node.
///
/// Distinctness of the constant extensions s⌢0^∞ / s⌢1^∞ is validated over
/// incomparable node pairs only: along a branch, padding with the constant
/// bit always collides (t and t⌢0 share t⌢0^∞ under the identity), and the
/// finite-scale checks only consume anti-chain separation.
#[derive(Clone, Debug)]
pub struct DyadicSubtree {
    depth: usize,
    nodes: BTreeMap<BinaryWord, BinaryWord>,
}

fn longest_common_prefix(a: &BinaryWord, b: &BinaryWord) -> BinaryWord {
    let n = a
        .bits()
        .iter()
        .zip(b.bits())
        .take_while(|(x, y)| x == y)
        .count();
    BinaryWord::new(a.bits()[..n].to_vec())
}

impl DyadicSubtree {
    /// s_t = t.
    pub fn identity(depth: usize) -> Self {
        let nodes = BinaryWord::all_up_to_length(depth)
            .into_iter()
            .map(|t| (t.clone(), t))
            .collect();
        DyadicSubtree { depth, nodes }
    }

    /// s_t inserts (spacing − 1) zeros after each bit of t, so level k of
    /// the subtree sits inside level spacing·k of the full tree.
    pub fn spaced(depth: usize, spacing: usize) -> Self {
        assert!(spacing >= 1, "spacing must be at least 1");
        let nodes = BinaryWord::all_up_to_length(depth)
            .into_iter()
            .map(|t| {
                let mut bits = Vec::with_capacity(t.len() * spacing);
                for &b in t.bits() {
                    bits.push(b);
                    bits.extend(std::iter::repeat(false).take(spacing - 1));
                }
                (t, BinaryWord::new(bits))
            })
            .collect();
        DyadicSubtree { depth, nodes }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn node(&self, t: &BinaryWord) -> Option<&BinaryWord> {
        self.nodes.get(t)
    }

    pub fn max_node_len(&self) -> usize {
        self.nodes.values().map(BinaryWord::len).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), SubtreeInvariantError> {
        // Regularity: each index level maps into one target level.
        for level in 0..=self.depth {
            let lens: Vec<usize> = self
                .nodes
                .iter()
                .filter(|(t, _)| t.len() == level)
                .map(|(_, s)| s.len())
                .collect();
            if lens.windows(2).any(|w| w[0] != w[1]) {
                return Err(SubtreeInvariantError::Level(level));
            }
        }
        let entries: Vec<(&BinaryWord, &BinaryWord)> = self.nodes.iter().collect();
        for (i, &(t, s)) in entries.iter().enumerate() {
            for &(u, r) in &entries[i + 1..] {
                let t_le_u = t.is_prefix_of(u);
                let u_le_t = u.is_prefix_of(t);
                if t_le_u != s.is_prefix_of(r) || u_le_t != r.is_prefix_of(s) {
                    return Err(SubtreeInvariantError::Order(t.clone(), u.clone()));
                }
                let meet = longest_common_prefix(t, u);
                if let Some(s_meet) = self.nodes.get(&meet) {
                    if *s_meet != longest_common_prefix(s, r) {
                        return Err(SubtreeInvariantError::Meet(t.clone(), u.clone()));
                    }
                }
                if !t_le_u && !u_le_t {
                    let zero_collide = CantorPoint::word_then_zeros(s)
                        == CantorPoint::word_then_zeros(r);
                    let one_collide =
                        CantorPoint::word_then_ones(s) == CantorPoint::word_then_ones(r);
                    if zero_collide || one_collide {
                        return Err(SubtreeInvariantError::Extension(t.clone(), u.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A real-valued function on Cantor space.
#[derive(Clone, Debug, PartialEq)]
pub enum PointEval {
    /// scale · (characteristic function of {x : x extends word}).
    Cylinder { word: BinaryWord, scale: f64 },
    /// Characteristic function of {x : x ≤ target} (the non-strict cut).
    UpperCut { target: CantorPoint },
    /// Characteristic function of {x : x < target} (the strict cut).
    LowerCut { target: CantorPoint },
    /// Characteristic function of {target}.
    Delta { target: CantorPoint },
    /// 0 below `low`, 1/2 on [low, high], 1 above `high`.
    ThreeStep { low: CantorPoint, high: CantorPoint },
    Constant(f64),
}

impl PointEval {
    pub fn eval(&self, x: &CantorPoint) -> f64 {
        match self {
            PointEval::Cylinder { word, scale } => {
                if x.extends(word) {
                    *scale
                } else {
                    0.0
                }
            }
            PointEval::UpperCut { target } => {
                if x <= target {
                    1.0
                } else {
                    0.0
                }
            }
            PointEval::LowerCut { target } => {
                if x < target {
                    1.0
                } else {
                    0.0
                }
            }
            PointEval::Delta { target } => {
                if x == target {
                    1.0
                } else {
                    0.0
                }
            }
            PointEval::ThreeStep { low, high } => {
                if x < low {
                    0.0
                } else if x > high {
                    1.0
                } else {
                    0.5
                }
            }
            PointEval::Constant(c) => *c,
        }
    }

    /// How many leading bits of the argument can influence the value, for
    /// exact-depth families; cut-like members report the visible extent of
    /// their target.
    pub fn decision_depth(&self) -> usize {
        let visible = |p: &CantorPoint| p.prefix_part().len() + p.period_part().len();
        match self {
            PointEval::Cylinder { word, .. } => word.len(),
            PointEval::UpperCut { target }
            | PointEval::LowerCut { target }
            | PointEval::Delta { target } => visible(target),
            PointEval::ThreeStep { low, high } => visible(low).max(visible(high)),
            PointEval::Constant(_) => 0,
        }
    }
}

impl fmt::Display for PointEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointEval::Cylinder { word, scale } if *scale == 1.0 => write!(f, "v[{word}]"),
            PointEval::Cylinder { word, scale } => write!(f, "{scale}*v[{word}]"),
            PointEval::UpperCut { target } => write!(f, "f+[{target}]"),
            PointEval::LowerCut { target } => write!(f, "f-[{target}]"),
            PointEval::Delta { target } => write!(f, "delta[{target}]"),
            PointEval::ThreeStep { low, .. } => write!(f, "h[{low}]"),
            PointEval::Constant(c) => write!(f, "const[{c}]"),
        }
    }
}

/// A point of the evaluation domain of a family member. Most families act
/// on Cantor points; the point-as-function presentation acts on coordinate
/// indices, and the duplicate families act on tagged disjoint unions.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleState {
    Point(CantorPoint),
    Index(usize),
    First(CantorPoint),
    SecondPoint(CantorPoint),
    SecondIndex(usize),
}

impl fmt::Display for SampleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleState::Point(x) => write!(f, "{x}"),
            SampleState::Index(n) => write!(f, "n={n}"),
            SampleState::First(x) => write!(f, "L:{x}"),
            SampleState::SecondPoint(x) => write!(f, "R:{x}"),
            SampleState::SecondIndex(n) => write!(f, "R:n={n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum MemberEval {
    /// A function on Cantor points.
    Point(PointEval),
    /// A point viewed as the function n ↦ bit n on coordinate indices.
    IndexBits { point: CantorPoint },
    /// (f, p): f on the first copy, the bits of p on coordinate indices of
    /// the second copy.
    PairPointIndex { first: PointEval, point: CantorPoint },
    /// (f, g) on the disjoint union of two copies of Cantor space.
    PairPointPoint { first: PointEval, second: PointEval },
}

impl MemberEval {
    pub fn eval(&self, state: &SampleState) -> Option<f64> {
        let bit = |p: &CantorPoint, n: usize| if p.bit_at(n) { 1.0 } else { 0.0 };
        match (self, state) {
            (MemberEval::Point(pe), SampleState::Point(x)) => Some(pe.eval(x)),
            (MemberEval::IndexBits { point }, SampleState::Index(n)) => Some(bit(point, *n)),
            (MemberEval::PairPointIndex { first, .. }, SampleState::First(x)) => {
                Some(first.eval(x))
            }
            (MemberEval::PairPointIndex { point, .. }, SampleState::SecondIndex(n)) => {
                Some(bit(point, *n))
            }
            (MemberEval::PairPointPoint { first, .. }, SampleState::First(x)) => {
                Some(first.eval(x))
            }
            (MemberEval::PairPointPoint { second, .. }, SampleState::SecondPoint(x)) => {
                Some(second.eval(x))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub label: BinaryWord,
    pub eval: MemberEval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
    Ht,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::D1,
        FamilyKind::D2,
        FamilyKind::D3,
        FamilyKind::D4,
        FamilyKind::D5,
        FamilyKind::D6,
        FamilyKind::D7,
        FamilyKind::Ht,
    ];
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::D1 => "D1",
            FamilyKind::D2 => "D2",
            FamilyKind::D3 => "D3",
            FamilyKind::D4 => "D4",
            FamilyKind::D5 => "D5",
            FamilyKind::D6 => "D6",
            FamilyKind::D7 => "D7",
            FamilyKind::Ht => "Ht",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "D1" => Ok(FamilyKind::D1),
            "D2" => Ok(FamilyKind::D2),
            "D3" => Ok(FamilyKind::D3),
            "D4" => Ok(FamilyKind::D4),
            "D5" => Ok(FamilyKind::D5),
            "D6" => Ok(FamilyKind::D6),
            "D7" => Ok(FamilyKind::D7),
            "HT" => Ok(FamilyKind::Ht),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// One member per index word t with |t| ≤ depth. The scaled and plain
/// cylinder families are indexed by t directly; the others read their
/// parameter point off the subtree node s_t.
pub fn generate_family(
    kind: FamilyKind,
    subtree: &DyadicSubtree,
    depth: usize,
) -> Result<Vec<FamilyMember>, FamilyError> {
    if depth > subtree.depth() {
        return Err(FamilyError::Depth { requested: depth, available: subtree.depth() });
    }
    let mut members = Vec::new();
    for t in BinaryWord::all_up_to_length(depth) {
        let s_t = subtree.node(&t).expect("validated depth").clone();
        let zeros = CantorPoint::word_then_zeros(&s_t);
        let ones = CantorPoint::word_then_ones(&s_t);
        let eval = match kind {
            FamilyKind::D1 => MemberEval::Point(PointEval::Cylinder {
                word: t.clone(),
                scale: 1.0 / (t.len() as f64 + 1.0),
            }),
            FamilyKind::D2 => MemberEval::IndexBits { point: zeros },
            FamilyKind::D3 => MemberEval::Point(PointEval::UpperCut { target: zeros }),
            FamilyKind::D4 => MemberEval::Point(PointEval::LowerCut { target: ones }),
            FamilyKind::D5 => {
                MemberEval::Point(PointEval::Cylinder { word: t.clone(), scale: 1.0 })
            }
            FamilyKind::D6 => MemberEval::PairPointIndex {
                first: PointEval::Cylinder { word: s_t.clone(), scale: 1.0 },
                point: zeros,
            },
            FamilyKind::D7 => MemberEval::PairPointPoint {
                first: PointEval::Cylinder { word: s_t.clone(), scale: 1.0 },
                second: PointEval::UpperCut { target: zeros },
            },
            FamilyKind::Ht => MemberEval::Point(PointEval::ThreeStep { low: zeros, high: ones }),
        };
        members.push(FamilyMember { label: t, eval });
    }
    Ok(members)
}

/// All 2^len points w⌢0^∞ with |w| = len, plus 1^∞. Separates every member
/// at the tested depths and contains the along-branch distinguishing
/// points.
pub fn canonical_sample(word_len: usize) -> Vec<CantorPoint> {
    let mut sample: Vec<CantorPoint> = BinaryWord::all_of_length(word_len)
        .iter()
        .map(CantorPoint::word_then_zeros)
        .collect();
    sample.push(CantorPoint::ones());
    sample
}

/// m order-spread points: the length-L expansions of 0..m followed by
/// zeros, L = max(4, bits needed).
pub fn spread_sample(m: usize) -> Vec<CantorPoint> {
    let needed = (usize::BITS - m.saturating_sub(1).leading_zeros()) as usize;
    let len = needed.max(4);
    (0..m)
        .map(|i| {
            let bits = (0..len).map(|k| (i >> (len - 1 - k)) & 1 == 1).collect();
            CantorPoint::word_then_zeros(&BinaryWord::new(bits))
        })
        .collect()
}

/// Evaluates every member at every sample state; feeds the independence and
/// stability diagnostics.
pub fn evaluate_family(
    members: &[FamilyMember],
    sample: &[SampleState],
) -> Result<EvalMatrix, FamilyError> {
    let functions: Vec<String> = members.iter().map(|m| format!("t={}", m.label)).collect();
    let labels: Vec<String> = sample.iter().map(|s| s.to_string()).collect();
    let mut values = Vec::with_capacity(members.len());
    for member in members {
        let mut row = Vec::with_capacity(sample.len());
        for state in sample {
            match member.eval.eval(state) {
                Some(v) => row.push(v),
                None => {
                    return Err(FamilyError::DomainMismatch {
                        member: format!("t={}", member.label),
                        state: state.to_string(),
                    })
                }
            }
        }
        values.push(row);
    }
    Ok(EvalMatrix::new(functions, labels, values))
}

/// The evaluation domain appropriate to a family, built over the canonical
/// point sample.
pub fn family_sample(kind: FamilyKind, word_len: usize) -> Vec<SampleState> {
    let points = canonical_sample(word_len);
    match kind {
        FamilyKind::D2 => (0..word_len).map(SampleState::Index).collect(),
        FamilyKind::D6 => points
            .iter()
            .cloned()
            .map(SampleState::First)
            .chain((0..word_len).map(SampleState::SecondIndex))
            .collect(),
        FamilyKind::D7 => points
            .iter()
            .cloned()
            .map(SampleState::First)
            .chain(points.iter().cloned().map(SampleState::SecondPoint))
            .collect(),
        _ => points.into_iter().map(SampleState::Point).collect(),
    }
}

/// Evaluates a family at its canonical domain; the word length defaults to
/// max(node length, depth) + 2.
pub fn family_matrix(
    kind: FamilyKind,
    subtree: &DyadicSubtree,
    depth: usize,
) -> Result<EvalMatrix, FamilyError> {
    let members = generate_family(kind, subtree, depth)?;
    let word_len = subtree.max_node_len().max(depth) + 2;
    evaluate_family(&members, &family_sample(kind, word_len))
}

/// Finite-scale structure report for one family.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StructureReport {
    pub family: FamilyKind,
    pub depth: usize,
    /// Along-branch convergence of the cylinder indicators v_{a|n} to the
    /// equality test at a, with stabilization by one step past the first
    /// differing bit.
    pub branch_convergence: bool,
    /// Minimum sup-distance over incomparable index pairs.
    pub min_antichain_gap: f64,
    pub gap_threshold: f64,
    pub antichain_discreteness: bool,
    /// For the cut families: f⁺ takes value 1 and f⁻ value 0 at their own
    /// target.
    pub cut_identities: Option<bool>,
    pub pass: bool,
}

impl StructureReport {
    /// The boolean outcome tuple compared across subtrees.
    pub fn outcomes(&self) -> (bool, bool, Option<bool>, bool) {
        (self.branch_convergence, self.antichain_discreteness, self.cut_identities, self.pass)
    }
}

fn gap_threshold(kind: FamilyKind, depth: usize) -> f64 {
    match kind {
        FamilyKind::D1 => 1.0 / (depth as f64 + 1.0),
        FamilyKind::Ht => 0.5,
        _ => 1.0,
    }
}

/// Runs the three finite-scale checks on the canonical sample.
pub fn limit_structure_check(
    kind: FamilyKind,
    subtree: &DyadicSubtree,
    depth: usize,
    tol: f64,
) -> Result<StructureReport, FamilyError> {
    assert!(depth >= 2, "structure checks need depth at least 2");
    let members = generate_family(kind, subtree, depth)?;
    let word_len = subtree.max_node_len().max(depth) + 2;
    let points = canonical_sample(word_len);

    // (a) Along-branch convergence of v_{a|n}(x) to the indicator of x = a,
    // stabilizing within one step of the first differing bit.
    let mut branch_convergence = true;
    'branch: for a in &points {
        for x in &points {
            let diff = x.first_difference(a);
            for n in 0..=word_len {
                let v = x.extends(&a.prefix_of(n));
                let expect = match diff {
                    None => true,
                    Some(m) => n <= m,
                };
                if v != expect {
                    branch_convergence = false;
                    break 'branch;
                }
            }
        }
    }

    // (b) Anti-chain discreteness on the family's own domain.
    let matrix = evaluate_family(&members, &family_sample(kind, word_len))?;
    let mut min_gap = f64::INFINITY;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (ti, tj) = (&members[i].label, &members[j].label);
            if ti.is_prefix_of(tj) || tj.is_prefix_of(ti) {
                continue;
            }
            let sup = matrix.values[i]
                .iter()
                .zip(&matrix.values[j])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            min_gap = min_gap.min(sup);
        }
    }
    let threshold = gap_threshold(kind, depth);
    let antichain_discreteness = min_gap >= threshold - tol;

    // (c) One-sided cut identities at the members' own targets.
    let cut_identities = match kind {
        FamilyKind::D3 | FamilyKind::D4 | FamilyKind::D7 => {
            let mut ok = true;
            for member in &members {
                let checked = match &member.eval {
                    MemberEval::Point(PointEval::UpperCut { target }) => {
                        PointEval::UpperCut { target: target.clone() }.eval(target) == 1.0
                    }
                    MemberEval::Point(PointEval::LowerCut { target }) => {
                        PointEval::LowerCut { target: target.clone() }.eval(target) == 0.0
                    }
                    MemberEval::PairPointPoint {
                        second: PointEval::UpperCut { target }, ..
                    } => PointEval::UpperCut { target: target.clone() }.eval(target) == 1.0,
                    _ => true,
                };
                ok &= checked;
            }
            Some(ok)
        }
        _ => None,
    };

    let pass = branch_convergence && antichain_discreteness && cut_identities.unwrap_or(true);
    Ok(StructureReport {
        family: kind,
        depth,
        branch_convergence,
        min_antichain_gap: min_gap,
        gap_threshold: threshold,
        antichain_discreteness,
        cut_identities,
        pass,
    })
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
    fn identity_subtree_shape() {
        let st = DyadicSubtree::identity(1);
        assert_eq!(st.node(&BinaryWord::empty()), Some(&BinaryWord::empty()));
        assert_eq!(st.node(&w("0")), Some(&w("0")));
        assert_eq!(st.node(&w("1")), Some(&w("1")));
        assert_eq!(DyadicSubtree::identity(0).nodes.len(), 1);
        for depth in 0..=8 {
            DyadicSubtree::identity(depth).validate().unwrap();
        }
    }

    #[test]
    fn spaced_subtree_shape() {
        let st = DyadicSubtree::spaced(1, 2);
        assert_eq!(st.node(&w("0")), Some(&w("00")));
        assert_eq!(st.node(&w("1")), Some(&w("10")));
        for depth in 0..=6 {
            DyadicSubtree::spaced(depth, 2).validate().unwrap();
            DyadicSubtree::spaced(depth, 3).validate().unwrap();
        }
    }

    #[test]
    fn spacing_one_is_identity() {
        let a = DyadicSubtree::spaced(3, 1);
        let b = DyadicSubtree::identity(3);
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn family_sizes() {
        let st = DyadicSubtree::identity(3);
        for kind in FamilyKind::ALL {
            assert_eq!(generate_family(kind, &st, 3).unwrap().len(), 15);
        }
        assert!(matches!(
            generate_family(FamilyKind::D5, &st, 4),
            Err(FamilyError::Depth { .. })
        ));
    }

    #[test]
    fn d5_and_d1_examples() {
        let st = DyadicSubtree::identity(2);
        let d5 = generate_family(FamilyKind::D5, &st, 2).unwrap();
        let member = d5.iter().find(|m| m.label == w("01")).unwrap();
        assert_eq!(
            member.eval.eval(&SampleState::Point(CantorPoint::alternating())),
            Some(1.0)
        );
        let d1 = generate_family(FamilyKind::D1, &st, 2).unwrap();
        let member = d1.iter().find(|m| m.label == w("01")).unwrap();
        assert_eq!(
            member.eval.eval(&SampleState::Point(p("01(0)"))),
            Some(1.0 / 3.0)
        );
    }

    #[test]
    fn ht_three_cases() {
        let st = DyadicSubtree::identity(2);
        let ht = generate_family(FamilyKind::Ht, &st, 2).unwrap();
        let member = ht.iter().find(|m| m.label == w("1")).unwrap();
        assert_eq!(member.eval.eval(&SampleState::Point(CantorPoint::zeros())), Some(0.0));
        assert_eq!(member.eval.eval(&SampleState::Point(p("10(0)"))), Some(0.5));
        assert_eq!(member.eval.eval(&SampleState::Point(CantorPoint::ones())), Some(0.5));
        assert_eq!(member.eval.eval(&SampleState::Point(p("11(0)"))), Some(0.5));
        // Strictly above 1⌢1^∞ is impossible; below 1⌢0^∞:
        assert_eq!(member.eval.eval(&SampleState::Point(p("01(0)"))), Some(0.0));
    }

    #[test]
    fn d3_vs_d4_at_same_target() {
        let target = p("01(0)");
        let up = PointEval::UpperCut { target: target.clone() };
        let lo = PointEval::LowerCut { target: target.clone() };
        assert_eq!(up.eval(&target), 1.0);
        assert_eq!(lo.eval(&target), 0.0);
    }

    #[test]
    fn evaluate_family_matrix_shape() {
        let st = DyadicSubtree::identity(2);
        let d5 = generate_family(FamilyKind::D5, &st, 2).unwrap();
        let sample: Vec<SampleState> = canonical_sample(3)
            .into_iter()
            .map(SampleState::Point)
            .collect();
        let m = evaluate_family(&d5, &sample).unwrap();
        assert_eq!(m.n_functions(), 7);
        assert_eq!(m.n_sample(), 9);
        assert!(m.values.iter().flatten().all(|&v| v == 0.0 || v == 1.0));
        let empty = evaluate_family(&[], &sample).unwrap();
        assert_eq!(empty.n_functions(), 0);
    }

    #[test]
    fn domain_mismatch_detected() {
        let st = DyadicSubtree::identity(1);
        let d2 = generate_family(FamilyKind::D2, &st, 1).unwrap();
        let err = evaluate_family(&d2, &[SampleState::Point(CantorPoint::zeros())]);
        assert!(matches!(err, Err(FamilyError::DomainMismatch { .. })));
    }

    #[test]
    fn structure_checks_identity_depth_three() {
        let st = DyadicSubtree::identity(3);
        for kind in FamilyKind::ALL {
            let report = limit_structure_check(kind, &st, 3, 1e-9).unwrap();
            assert!(report.pass, "{kind}: {report:?}");
        }
    }

    #[test]
    fn d1_gap_scales_with_depth() {
        let st = DyadicSubtree::identity(4);
        let report = limit_structure_check(FamilyKind::D1, &st, 4, 1e-9).unwrap();
        assert!((report.gap_threshold - 0.2).abs() < 1e-12);
        assert!(report.min_antichain_gap >= 0.2 - 1e-9);
    }

    #[test]
    fn spread_sample_is_ordered_and_distinct() {
        let s = spread_sample(12);
        assert_eq!(s.len(), 12);
        for pair in s.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }
}
