//! The computation families as evaluable transitions, plus composition.
//!
//! Cantor-space transitions (threshold, prefix test, split, constants) and
//! extended-plane Newton steps share one `Transition` type so they can be
//! composed and evaluated uniformly; the two state spaces never mix.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::bitseq::{BinaryWord, CantorPoint};
use crate::poly::{PolyError, Polynomial};
use crate::states::ExtComplex;

/// Finite values beyond this modulus are identified with ∞; the chordal
/// metric makes ∞ an ordinary point.
pub const INFINITY_CLAMP: f64 = 1e150;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransitionError {
    #[error("cannot compose or apply across state spaces (Cantor vs extended plane)")]
    SpaceMismatch,
    #[error(transparent)]
    Degree(#[from] PolyError),
}

/// Which state space a transition acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Space {
    Cantor,
    Sphere,
}

/// A state of either space.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Cantor(CantorPoint),
    Sphere(ExtComplex),
}

impl State {
    pub fn space(&self) -> Space {
        match self {
            State::Cantor(_) => Space::Cantor,
            State::Sphere(_) => Space::Sphere,
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Cantor(x) => write!(f, "{x}"),
            State::Sphere(z) => write!(f, "{z}"),
        }
    }
}

impl Serialize for State {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The Newton method step z ↦ z − p(z)/p′(z), stored as a reduced rational
/// function. The reduction by gcd(p, p′) removes the singularities at
/// multiple roots, so those become exact fixed points.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonMap {
    poly: Polynomial,
    // N(z) = numer(z) / denom(z) with gcd(numer, denom) trivial.
    numer: Polynomial,
    denom: Polynomial,
}

impl NewtonMap {
    pub fn new(p: Polynomial) -> Result<Self, PolyError> {
        match p.degree() {
            None | Some(0) => return Err(PolyError::Degree),
            _ => {}
        }
        let dp = p.derivative();
        let g = p.gcd(&dp, 1e-10);
        let (a, b) = match g.degree() {
            Some(d) if d >= 1 => (p.div_rem(&g).0, dp.div_rem(&g).0),
            _ => (p.clone(), dp),
        };
        // z·b(z) − a(z)
        let mut shifted = vec![Complex64::new(0.0, 0.0)];
        shifted.extend_from_slice(b.coeffs());
        let zb = Polynomial::new(shifted);
        let numer = Polynomial::new(
            zb.coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| c - a.coeffs().get(i).copied().unwrap_or_default())
                .collect(),
        );
        Ok(NewtonMap { poly: p, numer, denom: b })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn step(&self, z: ExtComplex) -> ExtComplex {
        let z = match z {
            ExtComplex::Finite(v) if v.norm() <= INFINITY_CLAMP => v,
            _ => return self.step_at_infinity(),
        };
        let n = self.numer.eval(z);
        let d = self.denom.eval(z);
        if d.norm() == 0.0 || !d.is_finite() || !n.is_finite() {
            return ExtComplex::Infinity;
        }
        let out = n / d;
        if !out.is_finite() || out.norm() > INFINITY_CLAMP {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(out)
        }
    }

    /// Continuous extension at ∞: compare numerator and denominator degrees.
    fn step_at_infinity(&self) -> ExtComplex {
        let dn = self.numer.degree().unwrap_or(0);
        let dd = self.denom.degree().unwrap_or(0);
        match dn.cmp(&dd) {
            Ordering::Greater => ExtComplex::Infinity,
            Ordering::Equal => ExtComplex::Finite(self.numer.leading() / self.denom.leading()),
            Ordering::Less => ExtComplex::finite(0.0, 0.0),
        }
    }
}

/// One computation of a structure.
#[derive(Clone, Debug)]
pub enum Transition {
    /// φ_w: 1^∞ if the first |w| bits come lexicographically before or equal
    /// w, else 0^∞.
    Threshold(BinaryWord),
    /// ψ_w: 1^∞ if the first |w| bits are exactly w, else 0^∞.
    PrefixTest(BinaryWord),
    /// γ_t: 0^∞ / (01)^∞ / 1^∞ by position against the interval
    /// [t⌢0^∞, t⌢1^∞].
    Split(BinaryWord),
    /// The constant map onto a fixed point.
    ConstantPoint(CantorPoint),
    /// One Newton step for a polynomial.
    NewtonStep(NewtonMap),
    /// Composition f₁∘f₂∘…∘f_k, stored outermost first.
    Composite(Vec<Transition>),
    /// The identity map (the semigroup unit; acts on either space).
    Identity,
}

/// φ_w applied to x.
pub fn threshold_apply(w: &BinaryWord, x: &CantorPoint) -> CantorPoint {
    if &x.prefix_of(w.len()) <= w {
        CantorPoint::ones()
    } else {
        CantorPoint::zeros()
    }
}

/// ψ_w applied to x.
pub fn prefix_test_apply(w: &BinaryWord, x: &CantorPoint) -> CantorPoint {
    if x.extends(w) {
        CantorPoint::ones()
    } else {
        CantorPoint::zeros()
    }
}

/// γ_t applied to x. The middle case t⌢0^∞ ≤ x ≤ t⌢1^∞ is equivalent to x
/// extending t, so exactly one branch fires.
pub fn split_apply(t: &BinaryWord, x: &CantorPoint) -> CantorPoint {
    if x.extends(t) {
        CantorPoint::alternating()
    } else if x.lex_compare(&CantorPoint::word_then_zeros(t)) == Ordering::Less {
        CantorPoint::zeros()
    } else {
        CantorPoint::ones()
    }
}

/// One Newton step of p at z.
pub fn newton_step(p: &Polynomial, z: ExtComplex) -> Result<ExtComplex, PolyError> {
    Ok(NewtonMap::new(p.clone())?.step(z))
}

/// The orbit [z₀, N_p(z₀), …, N_p^{(n)}(z₀)].
pub fn newton_orbit(p: &Polynomial, z0: ExtComplex, n: usize) -> Result<Vec<ExtComplex>, PolyError> {
    let map = NewtonMap::new(p.clone())?;
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(z0);
    let mut z = z0;
    for _ in 0..n {
        z = map.step(z);
        orbit.push(z);
    }
    Ok(orbit)
}

impl Transition {
    /// The state space this transition acts on; None for the identity, which
    /// acts on either.
    pub fn space(&self) -> Option<Space> {
        match self {
            Transition::Threshold(_)
            | Transition::PrefixTest(_)
            | Transition::Split(_)
            | Transition::ConstantPoint(_) => Some(Space::Cantor),
            Transition::NewtonStep(_) => Some(Space::Sphere),
            Transition::Identity => None,
            Transition::Composite(items) => items.iter().find_map(|t| t.space()),
        }
    }

    pub fn apply(&self, state: &State) -> Result<State, TransitionError> {
        if let (Some(space), s) = (self.space(), state.space()) {
            if space != s {
                return Err(TransitionError::SpaceMismatch);
            }
        }
        Ok(match (self, state) {
            (Transition::Identity, s) => s.clone(),
            (Transition::Threshold(w), State::Cantor(x)) => State::Cantor(threshold_apply(w, x)),
            (Transition::PrefixTest(w), State::Cantor(x)) => State::Cantor(prefix_test_apply(w, x)),
            (Transition::Split(t), State::Cantor(x)) => State::Cantor(split_apply(t, x)),
            (Transition::ConstantPoint(c), State::Cantor(_)) => State::Cantor(c.clone()),
            (Transition::NewtonStep(map), State::Sphere(z)) => State::Sphere(map.step(*z)),
            (Transition::Composite(items), s) => {
                let mut cur = s.clone();
                for t in items.iter().rev() {
                    cur = t.apply(&cur)?;
                }
                cur
            }
            _ => return Err(TransitionError::SpaceMismatch),
        })
    }

    /// Convenience for Cantor-space transitions.
    pub fn apply_cantor(&self, x: &CantorPoint) -> Result<CantorPoint, TransitionError> {
        match self.apply(&State::Cantor(x.clone()))? {
            State::Cantor(y) => Ok(y),
            State::Sphere(_) => Err(TransitionError::SpaceMismatch),
        }
    }
}

/// Composition: apply(compose(f, g), x) = apply(f, apply(g, x)).
pub fn compose(outer: Transition, inner: Transition) -> Result<Transition, TransitionError> {
    if let (Some(a), Some(b)) = (outer.space(), inner.space()) {
        if a != b {
            return Err(TransitionError::SpaceMismatch);
        }
    }
    let mut items = match outer {
        Transition::Composite(v) => v,
        Transition::Identity => Vec::new(),
        t => vec![t],
    };
    match inner {
        Transition::Composite(v) => items.extend(v),
        Transition::Identity => {}
        t => items.push(t),
    }
    if items.is_empty() {
        return Ok(Transition::Identity);
    }
    Ok(Transition::Composite(items))
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::Threshold(w) => write!(f, "threshold:{w}"),
            Transition::PrefixTest(w) => write!(f, "prefix:{w}"),
            Transition::Split(t) => write!(f, "split:{t}"),
            Transition::ConstantPoint(c) => write!(f, "const:{c}"),
            Transition::NewtonStep(map) => write!(f, "newton:{}", map.polynomial()),
            Transition::Identity => write!(f, "id"),
            Transition::Composite(items) => {
                write!(f, "compose(")?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}
