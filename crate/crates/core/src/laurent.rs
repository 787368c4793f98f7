//! Sparse Laurent polynomials in one variable `v`.
//!
//! Coefficients live in any commutative ring implementing [`Coeff`]; the
//! crate root fixes the arbitrary-precision alias [`crate::LaurentPoly`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Commutative ring usable as a Hecke-algebra coefficient.
pub trait Coeff:
    Clone
    + Eq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: Clone
        + Eq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Send
        + Sync
        + 'static
{
}

/// `Σ c_e v^e`, stored sparsely by exponent. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent<R> {
    terms: BTreeMap<i32, R>,
}

impl<R: Coeff> Laurent<R> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · v^e`
    pub fn monomial(c: R, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    /// `v^e`
    pub fn v_pow(e: i32) -> Self {
        Self::monomial(R::one(), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, R)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i32) -> R {
        self.terms.get(&e).cloned().unwrap_or_else(R::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &R)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: i32, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scalar_mul(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())))
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// The ring involution `v ↦ v⁻¹`.
    pub fn bar(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Substitute `v = 1`.
    pub fn eval_at_one(&self) -> R {
        self.terms.values().fold(R::zero(), |acc, c| acc + c.clone())
    }

    /// True iff every exponent is `≤ -1` (the zero polynomial qualifies).
    pub fn in_negative_span(&self) -> bool {
        self.max_degree().is_none_or(|e| e <= -1)
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    /// Splits off the part with exponents `≥ 0` and returns its bar-symmetrization
    /// `a_0 + Σ_{k>0} a_k (v^k + v^{-k})`.
    pub fn nonnegative_symmetrization(&self) -> Self {
        let mut out = Self::zero();
        for (&e, c) in self.terms.range(0..) {
            out.add_term(e, c.clone());
            if e > 0 {
                out.add_term(-e, c.clone());
            }
        }
        out
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Laurent<S> {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl<R: Coeff> AddAssign<&Laurent<R>> for Laurent<R> {
    fn add_assign(&mut self, rhs: &Laurent<R>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<R: Coeff> SubAssign<&Laurent<R>> for Laurent<R> {
    fn sub_assign(&mut self, rhs: &Laurent<R>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl<R: Coeff> Add for &Laurent<R> {
    type Output = Laurent<R>;
    fn add(self, rhs: &Laurent<R>) -> Laurent<R> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<R: Coeff> Add for Laurent<R> {
    type Output = Laurent<R>;
    fn add(mut self, rhs: Laurent<R>) -> Laurent<R> {
        self += &rhs;
        self
    }
}

impl<R: Coeff> Sub for &Laurent<R> {
    type Output = Laurent<R>;
    fn sub(self, rhs: &Laurent<R>) -> Laurent<R> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<R: Coeff> Sub for Laurent<R> {
    type Output = Laurent<R>;
    fn sub(mut self, rhs: Laurent<R>) -> Laurent<R> {
        self -= &rhs;
        self
    }
}

impl<R: Coeff> Neg for &Laurent<R> {
    type Output = Laurent<R>;
    fn neg(self) -> Laurent<R> {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<R: Coeff> Neg for Laurent<R> {
    type Output = Laurent<R>;
    fn neg(self) -> Laurent<R> {
        -&self
    }
}

impl<R: Coeff> Mul for &Laurent<R> {
    type Output = Laurent<R>;
    fn mul(self, rhs: &Laurent<R>) -> Laurent<R> {
        let mut out = Laurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<R: Coeff> Mul for Laurent<R> {
    type Output = Laurent<R>;
    fn mul(self, rhs: Laurent<R>) -> Laurent<R> {
        &self * &rhs
    }
}

impl<R: Coeff> fmt::Debug for Laurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().rev().map(|(e, c)| format!("({c:?})v^{e}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Text form: terms by descending exponent, e.g. `v^2 - 3*v^-1`, `-v^-1`, `0`.
impl<R: Coeff + fmt::Display + Signed> fmt::Display for Laurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (*e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("v")?,
                (1, false) => write!(f, "{abs}*v")?,
                (e, true) => write!(f, "v^{e}")?,
                (e, false) => write!(f, "{abs}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl<R> FromStr for Laurent<R>
where
    R: Coeff + FromStr,
{
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("malformed Laurent polynomial `{s}`"));
        let t = s.trim();
        if t == "0" {
            return Ok(Self::zero());
        }
        // Split into signed terms; a '-' directly after '^' belongs to the exponent.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev = ' ';
        for ch in t.chars() {
            if ch == ' ' {
                continue;
            }
            if (ch == '+' || ch == '-') && prev != '^' {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                } else if !pieces.is_empty() || prev != ' ' {
                    return Err(bad());
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = ch;
        }
        if cur.is_empty() {
            return Err(bad());
        }
        pieces.push((neg, cur));

        let mut p = Self::zero();
        for (neg, body) in pieces {
            let (coef, var) = match body.split_once('*') {
                Some((c, v)) => (Some(c), Some(v)),
                None if body.starts_with('v') => (None, Some(body.as_str())),
                None => (Some(body.as_str()), None),
            };
            let c: R = match coef {
                Some(c) => c.parse().map_err(|_| bad())?,
                None => R::one(),
            };
            let e: i32 = match var {
                None => 0,
                Some("v") => 1,
                Some(v) => v.strip_prefix("v^").ok_or_else(bad)?.parse().map_err(|_| bad())?,
            };
            p.add_term(e, if neg { -c } else { c });
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P = Laurent<BigInt>;

    fn v() -> P {
        P::v_pow(1)
    }

    #[test]
    fn ring_examples() {
        let one = P::one();
        assert_eq!(&(&v() + &one) * &(&v() - &one), &P::v_pow(2) - &one);
        let p = P::from_terms([(3, BigInt::from(2)), (-1, BigInt::from(-1))]);
        assert_eq!(&P::zero() + &p, p);
        assert_eq!(&P::v_pow(-1) * &v(), one);
    }

    #[test]
    fn bar_examples() {
        assert_eq!(P::v_pow(-1).bar(), v());
        assert_eq!(P::constant(BigInt::from(3)).bar(), P::constant(BigInt::from(3)));
        let a = &v() - &P::v_pow(-1);
        assert_eq!(a.bar(), -&a);
    }

    #[test]
    fn eval_and_span() {
        let p: P = "v^2 - 3*v^-1".parse().unwrap();
        assert_eq!(p.eval_at_one(), BigInt::from(-2));
        assert!((-P::v_pow(-1)).in_negative_span());
        assert!(!P::one().in_negative_span());
        assert!(P::zero().in_negative_span());
    }

    #[test]
    fn text_form() {
        assert_eq!((-P::v_pow(-1)).to_string(), "-v^-1");
        assert_eq!(P::zero().to_string(), "0");
        let p = P::from_terms([(2, BigInt::from(1)), (0, BigInt::from(-4)), (-3, BigInt::from(7))]);
        assert_eq!(p.to_string(), "v^2 - 4 + 7*v^-3");
        assert_eq!((&v() - &P::v_pow(-1)).to_string(), "v - v^-1");
        assert!("v^".parse::<P>().is_err());
        assert!("3*w".parse::<P>().is_err());
        assert!("".parse::<P>().is_err());
    }

    #[test]
    fn nonnegative_symmetrization_is_bar_invariant() {
        let p = P::from_terms([(2, BigInt::from(1)), (0, BigInt::from(3)), (-1, BigInt::from(5))]);
        let m = p.nonnegative_symmetrization();
        assert!(m.is_bar_invariant());
        assert!((&p - &m).in_negative_span());
    }

    #[test]
    fn machine_integer_coefficients() {
        let a = Laurent::<i64>::from_terms([(1, 2), (-1, -2)]);
        assert_eq!((&a * &a).coeff(0), -8);
        assert_eq!(a.bar().coeff(1), -2);
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((-6i32..6, -20i64..20), 0..6)
            .prop_map(|ts| P::from_terms(ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
    }

    proptest! {
        #[test]
        fn bar_is_involution(p in arb_poly()) {
            prop_assert_eq!(p.bar().bar(), p);
        }

        #[test]
        fn eval_at_one_is_ring_hom(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!((&p * &q).eval_at_one(), p.eval_at_one() * q.eval_at_one());
            prop_assert_eq!((&p + &q).eval_at_one(), p.eval_at_one() + q.eval_at_one());
        }

        #[test]
        fn text_round_trip(p in arb_poly()) {
            let s = p.to_string();
            prop_assert_eq!(s.parse::<P>().unwrap(), p);
        }

        #[test]
        fn multiplication_commutes_and_distributes(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }
    }
}
