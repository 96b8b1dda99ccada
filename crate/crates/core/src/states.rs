//! Computation-state structures: predicates, finite state types, sizers and
//! shards, plus the two concrete state spaces used throughout — Cantor space
//! with bit projections and the extended complex plane with the coordinates
//! of inverse stereographic projection.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bitseq::CantorPoint;

/// Names one predicate of a structure, e.g. `P0`, `P1`, ... for bit
/// projections or the three sphere coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PredicateId {
    pub name: String,
    pub index: Option<u32>,
}

impl PredicateId {
    pub fn named(name: &str) -> Self {
        PredicateId { name: name.to_string(), index: None }
    }

    pub fn indexed(name: &str, index: u32) -> Self {
        PredicateId { name: name.to_string(), index: Some(index) }
    }
}

impl fmt::Display for PredicateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}{}", self.name, i),
            None => write!(f, "{}", self.name),
        }
    }
}

impl fmt::Debug for PredicateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// The finite restriction of a state's type to the queried predicates.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateType {
    pub values: BTreeMap<PredicateId, f64>,
}

impl StateType {
    pub fn get(&self, id: &PredicateId) -> Option<f64> {
        self.values.get(id).copied()
    }
}

/// Per-predicate magnitude bounds, with a default for unlisted predicates so
/// countably many predicates need no explicit enumeration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sizer {
    pub default_bound: f64,
    pub bounds: BTreeMap<PredicateId, f64>,
}

impl Sizer {
    /// Constant sizer r ≡ bound.
    pub fn uniform(bound: f64) -> Self {
        assert!(bound > 0.0, "sizer bounds must be positive");
        Sizer { default_bound: bound, bounds: BTreeMap::new() }
    }

    pub fn with_bound(mut self, id: PredicateId, bound: f64) -> Self {
        assert!(bound > 0.0, "sizer bounds must be positive");
        self.bounds.insert(id, bound);
        self
    }

    pub fn bound_for(&self, id: &PredicateId) -> f64 {
        self.bounds.get(id).copied().unwrap_or(self.default_bound)
    }
}

/// True iff |v(P)| ≤ r(P) for every predicate the state carries.
pub fn in_shard(v: &StateType, r: &Sizer) -> bool {
    v.values.iter().all(|(id, &val)| val.abs() <= r.bound_for(id))
}

/// The type of a Cantor point restricted to the projections P_n in `ids`:
/// values(P_n) = bit n of x.
pub fn cantor_type(x: &CantorPoint, ids: &[u32]) -> StateType {
    let values = ids
        .iter()
        .map(|&n| (PredicateId::indexed("P", n), if x.bit_at(n as usize) { 1.0 } else { 0.0 }))
        .collect();
    StateType { values }
}

/// A point of the extended complex plane: a finite complex number or ∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        ExtComplex::finite(x, 0.0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Infinity => write!(f, "inf"),
            ExtComplex::Finite(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.im >= 0.0 {
                    write!(f, "{}+{}i", z.re, z.im)
                } else {
                    write!(f, "{}{}i", z.re, z.im)
                }
            }
        }
    }
}

/// Coordinates (P₁,P₂,P₃) of inverse stereographic projection onto the unit
/// sphere: (2Re z, 2Im z, |z|²−1)/(|z|²+1), with ∞ ↦ (0,0,1).
///
/// For |z| > 1 the formulas are evaluated at 1/z̄ to stay finite near the
/// float ceiling: P₁,P₂ are unchanged under that substitution and P₃ flips
/// sign.
pub fn stereo_coords(z: ExtComplex) -> (f64, f64, f64) {
    match z {
        ExtComplex::Infinity => (0.0, 0.0, 1.0),
        ExtComplex::Finite(z) => {
            let m = z.norm();
            if m <= 1.0 {
                let d = m * m + 1.0;
                (2.0 * z.re / d, 2.0 * z.im / d, (m * m - 1.0) / d)
            } else {
                // w = 1/conj(z), computed without squaring z.
                let wre = (z.re / m) / m;
                let wim = (z.im / m) / m;
                let mw2 = wre * wre + wim * wim;
                let d = mw2 + 1.0;
                (2.0 * wre / d, 2.0 * wim / d, (1.0 - mw2) / d)
            }
        }
    }
}

/// Distance between the spherical images of z and w; equals
/// 2|z−w|/√((1+|z|²)(1+|w|²)) for finite arguments and ranges over [0,2].
pub fn chordal_distance(z: ExtComplex, w: ExtComplex) -> f64 {
    match (z, w) {
        (ExtComplex::Finite(a), ExtComplex::Finite(b))
            if a.norm() < 1e100 && b.norm() < 1e100 =>
        {
            let na = a.norm_sqr();
            let nb = b.norm_sqr();
            2.0 * (a - b).norm() / ((1.0 + na) * (1.0 + nb)).sqrt()
        }
        _ => {
            let (a1, a2, a3) = stereo_coords(z);
            let (b1, b2, b3) = stereo_coords(w);
            ((a1 - b1).powi(2) + (a2 - b2).powi(2) + (a3 - b3).powi(2)).sqrt()
        }
    }
}

/// The type of a sphere point under the predicates P₁,P₂,P₃.
pub fn sphere_type(z: ExtComplex) -> StateType {
    let (p1, p2, p3) = stereo_coords(z);
    let values = [(1u32, p1), (2, p2), (3, p3)]
        .into_iter()
        .map(|(i, v)| (PredicateId::indexed("P", i), v))
        .collect();
    StateType { values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn stereo_fixed_points() {
        assert_eq!(stereo_coords(ExtComplex::Infinity), (0.0, 0.0, 1.0));
        assert_eq!(stereo_coords(ExtComplex::real(0.0)), (0.0, 0.0, -1.0));
        let (p1, p2, p3) = stereo_coords(ExtComplex::real(1.0));
        assert_close(p1, 1.0, 1e-15);
        assert_close(p2, 0.0, 1e-15);
        assert_close(p3, 0.0, 1e-15);
    }

    #[test]
    fn stereo_lands_on_sphere() {
        for z in [
            ExtComplex::finite(3.0, -4.0),
            ExtComplex::finite(1e200, 1e199),
            ExtComplex::finite(-1e-200, 0.0),
            ExtComplex::finite(0.5, 0.5),
            ExtComplex::Infinity,
        ] {
            let (p1, p2, p3) = stereo_coords(z);
            assert_close((p1 * p1 + p2 * p2 + p3 * p3).sqrt(), 1.0, 1e-12);
        }
    }

    #[test]
    fn chordal_examples() {
        let z = ExtComplex::finite(0.3, -2.0);
        assert_eq!(chordal_distance(z, z), 0.0);
        assert_close(chordal_distance(ExtComplex::real(0.0), ExtComplex::Infinity), 2.0, 1e-15);
        assert_close(chordal_distance(ExtComplex::real(1.0), ExtComplex::real(-1.0)), 2.0, 1e-15);
    }

    #[test]
    fn chordal_matches_closed_form() {
        let z = ExtComplex::finite(1.5, 0.25);
        let w = ExtComplex::finite(-0.5, 2.0);
        let closed = 2.0 * (1.5f64 - -0.5).hypot(0.25 - 2.0)
            / ((1.0 + 1.5f64 * 1.5 + 0.25 * 0.25) * (1.0 + 0.25 + 4.0)).sqrt();
        assert_close(chordal_distance(z, w), closed, 1e-13);
    }

    #[test]
    fn shard_membership() {
        let r = Sizer::uniform(1.0);
        let v = cantor_type(&CantorPoint::alternating(), &[0, 1, 2, 3]);
        assert!(in_shard(&v, &r));
        let s = sphere_type(ExtComplex::real(0.0));
        assert!(in_shard(&s, &r));
        let tight = Sizer::uniform(1.0).with_bound(PredicateId::indexed("P", 3), 0.5);
        assert!(!in_shard(&s, &tight));
    }

    #[test]
    fn cantor_type_examples() {
        let t = cantor_type(&CantorPoint::zeros(), &[0, 1, 2]);
        assert!(t.values.values().all(|&v| v == 0.0));
        let t = cantor_type(&CantorPoint::alternating(), &[0, 1, 2, 3]);
        let vals: Vec<f64> = t.values.values().copied().collect();
        assert_eq!(vals, vec![0.0, 1.0, 0.0, 1.0]);
        let t = cantor_type(&"1(0)".parse().unwrap(), &[0, 1]);
        let vals: Vec<f64> = t.values.values().copied().collect();
        assert_eq!(vals, vec![1.0, 0.0]);
    }
}
