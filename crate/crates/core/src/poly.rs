//! Complex polynomials: evaluation, derivative, division, gcd, simultaneous
//! root finding, and the ASCII grammar used by the command line
//! (`z^3-2z+2`, integer or float coefficients, variable `z` or `x`).

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

/// Coefficients in ascending degree; the leading coefficient is non-zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial must be non-constant for the Newton construction")]
    Degree,
}

/// Parse failure with the byte offset of the offending character.
#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize)]
#[error("{msg} at position {pos}")]
pub struct PolyParseError {
    pub pos: usize,
    pub msg: String,
}

impl Polynomial {
    /// Trims trailing (near-)zero coefficients. An all-zero list collapses to
    /// the zero polynomial, represented by an empty coefficient vector.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while let Some(c) = coeffs.last() {
            if c.norm() == 0.0 {
                coeffs.pop();
            } else {
                break;
            }
        }
        Polynomial { coeffs }
    }

    pub fn from_real_coeffs(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    fn scaled(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn monic(&self) -> Polynomial {
        self.scaled(1.0 / self.leading())
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::new(0.0, 0.0); rem.len() - dd];
        let lead = divisor.leading();
        for k in (dd..rem.len()).rev() {
            let q = rem[k] / lead;
            quot[k - dd] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= q * dc;
            }
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic gcd by the Euclidean algorithm; remainder coefficients below
    /// `tol` (relative to the remainder's own scale) are treated as zero.
    pub fn gcd(&self, other: &Polynomial, tol: f64) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, mut r) = a.div_rem(&b);
            let scale = r.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if scale > 0.0 {
                r = Polynomial::new(
                    r.coeffs
                        .iter()
                        .map(|&c| if c.norm() <= tol * scale.max(1.0) { Complex64::new(0.0, 0.0) } else { c })
                        .collect(),
                );
            }
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// The square-free part p / gcd(p, p′); has the same roots as p, all
    /// simple.
    pub fn square_free(&self) -> Polynomial {
        let g = self.gcd(&self.derivative(), 1e-10);
        match g.degree() {
            Some(d) if d >= 1 => self.div_rem(&g).0,
            _ => self.clone(),
        }
    }

    /// All roots of the square-free part (i.e. the distinct roots of p) by
    /// the Aberth–Ehrlich simultaneous iteration, to about 1e−12.
    pub fn distinct_roots(&self) -> Vec<Complex64> {
        let p = self.square_free().monic();
        let n = match p.degree() {
            None | Some(0) => return Vec::new(),
            Some(n) => n,
        };
        let dp = p.derivative();
        // Cauchy bound for the modulus of any root.
        let radius = 1.0 + p.coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let center = -p.coeffs[n - 1] / (n as f64);
        let mut zs: Vec<Complex64> = (0..n)
            .map(|k| {
                // Slightly irrational angle offset so initial guesses avoid
                // symmetry traps (e.g. real axes of symmetric polynomials).
                let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.3517) / n as f64;
                center + Complex64::from_polar(radius, theta)
            })
            .collect();
        for _ in 0..300 {
            let mut max_step = 0.0f64;
            let prev = zs.clone();
            for k in 0..n {
                let zk = prev[k];
                let pv = p.eval(zk);
                let dv = dp.eval(zk);
                if pv.norm() == 0.0 {
                    continue;
                }
                let w = if dv.norm() == 0.0 { Complex64::new(1e-12, 0.0) } else { pv / dv };
                let mut s = Complex64::new(0.0, 0.0);
                for (j, &zj) in prev.iter().enumerate() {
                    if j != k {
                        s += 1.0 / (zk - zj);
                    }
                }
                let denom = 1.0 - w * s;
                let step = if denom.norm() == 0.0 { w } else { w / denom };
                zs[k] = zk - step;
                max_step = max_step.max(step.norm() / (1.0 + zs[k].norm()));
            }
            if max_step < 1e-14 {
                break;
            }
        }
        zs.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        zs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.norm() == 0.0 {
                continue;
            }
            let re = c.re;
            if !first {
                write!(f, "{}", if re < 0.0 || (re == 0.0 && c.im < 0.0) { "-" } else { "+" })?;
            } else if re < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            let mag = if c.im == 0.0 { re.abs() } else { c.norm() };
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1.0 {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "z")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses the ASCII polynomial grammar: signed terms `c`, `cz`, `cz^k`, with
/// `z` or `x` as the variable and integer or float coefficients.
pub fn parse_polynomial(input: &str) -> Result<Polynomial, PolyParseError> {
    let bytes: Vec<char> = input.chars().collect();
    let mut pos = 0usize;
    let mut terms: Vec<(usize, f64)> = Vec::new();

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(PolyParseError { pos, msg: "empty polynomial".into() });
    }

    let mut first_term = true;
    while pos < bytes.len() {
        skip_ws(&mut pos);
        // Sign.
        let mut sign = 1.0;
        if pos < bytes.len() && (bytes[pos] == '+' || bytes[pos] == '-') {
            if bytes[pos] == '-' {
                sign = -1.0;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first_term {
            return Err(PolyParseError { pos, msg: "expected '+' or '-'".into() });
        }
        first_term = false;

        // Coefficient (optional when a variable follows).
        let num_start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == '.') {
            pos += 1;
        }
        let coeff = if pos > num_start {
            let text: String = bytes[num_start..pos].iter().collect();
            text.parse::<f64>().map_err(|_| PolyParseError {
                pos: num_start,
                msg: format!("bad coefficient {text:?}"),
            })?
        } else {
            1.0
        };
        skip_ws(&mut pos);

        // Optional multiplication sign between coefficient and variable.
        if pos < bytes.len() && bytes[pos] == '*' {
            pos += 1;
            skip_ws(&mut pos);
        }

        // Variable with optional exponent.
        let mut exponent = 0usize;
        let has_var = pos < bytes.len() && (bytes[pos] == 'z' || bytes[pos] == 'x');
        if has_var {
            pos += 1;
            exponent = 1;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == '^' {
                pos += 1;
                skip_ws(&mut pos);
                let exp_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == exp_start {
                    return Err(PolyParseError { pos, msg: "expected exponent".into() });
                }
                let text: String = bytes[exp_start..pos].iter().collect();
                exponent = text.parse().map_err(|_| PolyParseError {
                    pos: exp_start,
                    msg: format!("bad exponent {text:?}"),
                })?;
            }
        } else if pos == num_start {
            return Err(PolyParseError { pos, msg: "expected coefficient or variable".into() });
        }

        terms.push((exponent, sign * coeff));
        skip_ws(&mut pos);
    }

    let max_deg = terms.iter().map(|&(e, _)| e).max().unwrap_or(0);
    let mut coeffs = vec![0.0; max_deg + 1];
    for (e, c) in terms {
        coeffs[e] += c;
    }
    Ok(Polynomial::from_real_coeffs(&coeffs))
}
