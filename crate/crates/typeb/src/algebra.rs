//! Arbitrary-precision rationals and sparse bivariate polynomials in the two
//! deformation parameters.
//!
//! [`BivariatePoly`] is the coefficient ring for every exact computation in
//! this crate. Terms are kept in a sorted map keyed by exponent pairs in
//! graded lexicographic order, so iteration and text output are canonical.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from a numerator/denominator pair.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Exponent pair of a term: powers of the first and second parameter.
///
/// Ordered by total degree first, then lexicographically, which fixes the
/// canonical term order used for serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponents {
    pub alpha: u32,
    pub q: u32,
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.alpha + self.q, self.alpha, self.q).cmp(&(
            other.alpha + other.q,
            other.alpha,
            other.q,
        ))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse exact polynomial in the deformation parameters `a` (alpha) and `q`.
///
/// Invariant: no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl BivariatePoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// The polynomial `alpha`.
    pub fn alpha() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    /// The polynomial `q`.
    pub fn q() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// The single term `c * alpha^i * q^j`.
    pub fn monomial(c: Rational, alpha_pow: u32, q_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(
                Exponents {
                    alpha: alpha_pow,
                    q: q_pow,
                },
                c,
            );
        }
        BivariatePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (graded lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of `alpha^i * q^j` (zero if absent).
    pub fn coeff(&self, alpha_pow: u32, q_pow: u32) -> Rational {
        self.terms
            .get(&Exponents {
                alpha: alpha_pow,
                q: q_pow,
            })
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Add `c * alpha^i * q^j` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, c: &Rational, alpha_pow: u32, q_pow: u32) {
        if c.is_zero() {
            return;
        }
        let key = Exponents {
            alpha: alpha_pow,
            q: q_pow,
        };
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(c, e.alpha, e.q);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(&-c.clone(), e.alpha, e.q);
        }
    }

    /// Exact product.
    pub fn mul_poly(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(&(c1 * c2), e1.alpha + e2.alpha, e1.q + e2.q);
            }
        }
        out
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivariatePoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by the monomial `alpha^i * q^j`.
    pub fn shift(&self, alpha_pow: u32, q_pow: u32) -> Self {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| {
                    (
                        Exponents {
                            alpha: e.alpha + alpha_pow,
                            q: e.q + q_pow,
                        },
                        v.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Integer power.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_poly(&base);
            }
        }
        acc
    }

    /// Substitution homomorphism at a rational point.
    pub fn eval(&self, alpha: &Rational, q: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += c * rational_pow(alpha, e.alpha) * rational_pow(q, e.q);
        }
        acc
    }

    /// Evaluate at a floating-point parameter pair.
    pub fn eval_f64(&self, alpha: f64, q: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64().unwrap_or(f64::NAN) * alpha.powi(e.alpha as i32) * q.powi(e.q as i32)
            })
            .sum()
    }

    /// Exact substitution `alpha := 0`, keeping `q` symbolic.
    pub fn substitute_alpha_zero(&self) -> Self {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.alpha == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Exact substitution `q := 0`, keeping `alpha` symbolic.
    pub fn substitute_q_zero(&self) -> Self {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.q == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }
}

fn rational_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        self.mul_poly(rhs)
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        self.scale(&-Rational::one())
    }
}

/// Render a rational as `p/q`, omitting `/1`.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for BivariatePoly {
    /// Canonical text form: terms as `c*a^i*q^j` joined by ` + `, with
    /// zero-exponent factors omitted and `^1` shortened.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = rational_to_string(c);
                for (sym, pow) in [("a", e.alpha), ("q", e.q)] {
                    match pow {
                        0 => {}
                        1 => s = format!("{s}*{sym}"),
                        p => s = format!("{s}*{sym}^{p}"),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{}*q^{}", self.alpha, self.q)
    }
}
