//! Reduced quotients of polynomials.
//!
//! Coefficient-field elements (the field generated by the parameter variables)
//! are `RatFunc` values whose numerator and denominator mention parameters
//! only. The same type also carries the rational functions in coordinates that
//! appear as function lifts; nothing in its arithmetic depends on which kind of
//! variable occurs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::gcd::gcd;
use super::poly::{forward_owned, Poly, Rational, VarId};
use super::ExactError;

/// `num / den` with `gcd(num, den) = 1` and `den` integer-primitive with a
/// positive leading coefficient. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let mut c = den.content();
        if den.leading_coefficient().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(Poly::int(n))
    }

    pub fn param(k: u32) -> Self {
        Self::from_poly(Poly::param(k))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn only_parameters(&self) -> bool {
        self.num.only_parameters() && self.den.only_parameters()
    }

    pub fn vars(&self) -> std::collections::BTreeSet<VarId> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn diff(&self, v: VarId) -> Self {
        if !self.den.contains_var(v) {
            return RatFunc {
                num: self.num.diff(v),
                den: self.den.clone(),
            };
        }
        let n = &(&self.num.diff(v) * &self.den) - &(&self.num * &self.den.diff(v));
        Self::reduce(n, &self.den * &self.den)
    }

    /// Value at a point; `Ok(None)` when the denominator vanishes there.
    pub fn eval(
        &self,
        assignment: &BTreeMap<VarId, Rational>,
    ) -> Result<Option<Rational>, ExactError> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(assignment)? / d))
    }

    /// Substitutes the assigned variables; fails if the denominator vanishes.
    pub fn eval_partial(&self, assignment: &BTreeMap<VarId, Rational>) -> Result<Self, ExactError> {
        RatFunc::new(
            self.num.eval_partial(assignment),
            self.den.eval_partial(assignment),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn to_string_with(&self, labels: &[String]) -> String {
        if self.den.is_one() {
            self.num.to_string_with(labels)
        } else {
            format!(
                "({})/({})",
                self.num.to_string_with(labels),
                self.den.to_string_with(labels)
            )
        }
    }

    /// Leading coefficient sign of the numerator (denominators are positive).
    pub fn is_negative(&self) -> bool {
        self.num.leading_coefficient().is_negative()
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RatFunc {
                num: &self.num + &(&rhs.num * &self.den),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return RatFunc {
                num: &(&self.num * &rhs.den) + &rhs.num,
                den: rhs.den.clone(),
            };
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::reduce(n, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; callers check pivots first.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero in coefficient field");
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c.recip());
        }
        RatFunc::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(Add, add, RatFunc);
forward_owned!(Sub, sub, RatFunc);
forward_owned!(Mul, mul, RatFunc);
forward_owned!(Div, div, RatFunc);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::rat;

    #[test]
    fn zero_over_zero_is_rejected() {
        assert_eq!(
            RatFunc::new(Poly::zero(), Poly::zero()),
            Err(ExactError::ZeroDenominator)
        );
    }

    #[test]
    fn reduces_common_factors() {
        let t = Poly::param(1);
        let u = Poly::param(2);
        let f = RatFunc::new(&t * &u, (&t * &t).scale(&rat(-2))).unwrap();
        assert_eq!(f.denom(), &t);
        assert_eq!(f.numer(), &u.scale(&crate::exact::poly::ratio(-1, 2)));
    }

    #[test]
    fn field_operations() {
        let a = RatFunc::new(Poly::one(), Poly::param(1)).unwrap();
        let b = RatFunc::new(Poly::one(), &Poly::param(1) + &Poly::one()).unwrap();
        let s = &a + &b;
        // 1/t + 1/(t+1) = (2t+1)/(t^2+t)
        let expected = RatFunc::new(
            &Poly::param(1).scale(&rat(2)) + &Poly::one(),
            &Poly::param(1).pow(2) + &Poly::param(1),
        )
        .unwrap();
        assert_eq!(s, expected);
        assert_eq!(&(&s * &s.recip().unwrap()), &RatFunc::one());
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn quotient_rule() {
        let x = VarId::coord(0);
        let f = RatFunc::new(Poly::one(), Poly::var(x)).unwrap();
        let d = f.diff(x);
        assert_eq!(d, RatFunc::new(Poly::int(-1), Poly::var(x).pow(2)).unwrap());
    }
}
