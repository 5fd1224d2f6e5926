//! Exact one-variable rational functions over the integers, the tree
//! survival generating function `h`, and the counterexample forge.

mod forge;
mod poly;
mod roots;
mod tree_h;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use forge::{find_dependency, forge_tree_pair, ForgeError, ForgedPair};
pub use poly::IntPoly;
pub use roots::real_roots;
pub use tree_h::{eigenvalues_from_h_roots, h_from_genfun, h_from_series, h_numerator_roots, h_of_tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("rational function has a pole at 0; no power series")]
    PoleAtZero,
}

/// `numerator / denominator` in lowest terms.
///
/// Canonical form: the polynomial gcd is 1, the integer content shared by
/// both parts is 1, and the denominator's leading coefficient is positive.
/// Structural equality is therefore value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: IntPoly,
    den: IntPoly,
}

impl RatFun {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (
            num.div_exact(&g).expect("gcd divides"),
            den.div_exact(&g).expect("gcd divides"),
        );
        let mut c = num.content().gcd(&den.content());
        if den.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFun {
            num: p,
            den: IntPoly::one(),
        }
        .renormalized()
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_poly(IntPoly::from_i64s(&[c]))
    }

    pub fn zero() -> Self {
        RatFun {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// Shorthand for tests and fixtures: coefficient lists, lowest first.
    pub fn from_i64s(num: &[i64], den: &[i64]) -> Result<Self, RatFunError> {
        Self::new(IntPoly::from_i64s(num), IntPoly::from_i64s(den))
    }

    fn renormalized(self) -> Self {
        Self::new(self.num, self.den).expect("denominator is nonzero")
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self, RatFunError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        Self::new(num, den).expect("square of a nonzero polynomial")
    }

    /// `r(x^2)`.
    pub fn compose_square(&self) -> Self {
        Self::new(self.num.compose_square(), self.den.compose_square()).expect("nonzero")
    }

    /// `q` with `self(x) = q(x^2)`, if both parts are even.
    pub fn even_part(&self) -> Option<Self> {
        let (n, d) = (self.num.even_part()?, self.den.even_part()?);
        Some(Self::new(n, d).expect("nonzero"))
    }

    /// `r(x + c)`.
    pub fn shift(&self, c: &BigInt) -> Self {
        Self::new(self.num.shift(c), self.den.shift(c)).expect("nonzero")
    }

    /// `r(p / q)` for polynomials `p`, `q` with `q` nonzero.
    pub fn compose(&self, p: &IntPoly, q: &IntPoly) -> Result<Self, RatFunError> {
        let m = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let homogenise = |poly: &IntPoly| {
            let mut acc = IntPoly::zero();
            for (i, c) in poly.coeffs().iter().enumerate() {
                let mut term = IntPoly::constant(c.clone());
                for _ in 0..i {
                    term = &term * p;
                }
                for _ in i..m {
                    term = &term * q;
                }
                acc = &acc + &term;
            }
            acc
        };
        Self::new(homogenise(&self.num), homogenise(&self.den))
    }

    /// First `terms` Taylor coefficients at 0.
    pub fn series(&self, terms: usize) -> Result<Vec<BigRational>, RatFunError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(RatFunError::PoleAtZero);
        }
        // e_k = c_k · d0^(k+1) stays integral:
        // e_k = num_k d0^k − Σ_{j≥1} den_j e_{k−j} d0^(j−1)
        let dens = self.den.coeffs();
        let mut d0_pow = vec![BigInt::one()];
        for k in 1..=terms {
            let next = &d0_pow[k - 1] * &d0;
            d0_pow.push(next);
        }
        let mut scaled: Vec<BigInt> = Vec::with_capacity(terms);
        let mut out = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut e = self.num.coeff(k) * &d0_pow[k];
            for j in 1..dens.len().min(k + 1) {
                e -= &dens[j] * &scaled[k - j] * &d0_pow[j - 1];
            }
            out.push(BigRational::new(e.clone(), d0_pow[k + 1].clone()));
            scaled.push(e);
        }
        Ok(out)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RatFun {
    type Output = RatFun;

    fn add(self, rhs: &RatFun) -> RatFun {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::new(num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Sub for &RatFun {
    type Output = RatFun;

    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;

    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Div for &RatFun {
    type Output = Result<RatFun, RatFunError>;

    fn div(self, rhs: &RatFun) -> Result<RatFun, RatFunError> {
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;

    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul<&RatFun> for &BigInt {
    type Output = RatFun;

    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(rhs.num.scale(self), rhs.den.clone()).expect("nonzero")
    }
}

#[derive(Serialize, Deserialize)]
struct RatFunJson {
    num: IntPoly,
    den: IntPoly,
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatFunJson {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFun {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RatFunJson::deserialize(d)?;
        RatFun::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::from_i64s(n, d).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&RatFun::one() + &RatFun::one(), RatFun::from_i64(2));
        let a = rf(&[4, -1], &[4, -3]);
        let b = rf(&[4, -3], &[4, -1]);
        assert_eq!(&a * &b, RatFun::one());
        // 1 − 3(4−x)/(4−3x) + 2·4/(4−3x) = 0
        let three = BigInt::from(3);
        let two = BigInt::from(2);
        let sum = &(&RatFun::one() - &(&three * &a)) + &(&two * &rf(&[4], &[4, -3]));
        assert!(sum.is_zero());
        assert_eq!(&RatFun::one() / &RatFun::zero(), Err(RatFunError::DivisionByZero));
        assert_eq!(RatFun::from_i64s(&[1], &[]), Err(RatFunError::DivisionByZero));
    }

    #[test]
    fn canonical_form() {
        let r = rf(&[2, -2], &[4, 0, -4]); // 2(1−x) / 4(1−x)(1+x)
        assert_eq!(r.numerator(), &IntPoly::from_i64s(&[1]));
        assert_eq!(r.denominator(), &IntPoly::from_i64s(&[2, 2]));
        let s = rf(&[-1], &[-2, -2]);
        assert_eq!(r, s);
        // leading coefficient of the denominator is positive
        let t = rf(&[4, -1], &[4, -3]);
        assert_eq!(t.denominator(), &IntPoly::from_i64s(&[-4, 3]));
    }

    #[test]
    fn series_of_geometric() {
        let g = rf(&[1], &[1, 0, -1]);
        let s = g.series(6).unwrap();
        let expect: Vec<BigRational> = [1, 0, 1, 0, 1, 0]
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        assert_eq!(s, expect);
        let h = rf(&[4, -1], &[4, -3]).series(3).unwrap();
        assert_eq!(h[1], BigRational::new(1.into(), 2.into()));
        assert_eq!(h[2], BigRational::new(3.into(), 8.into()));
        assert_eq!(rf(&[1], &[0, 1]).series(2), Err(RatFunError::PoleAtZero));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(rf(&[4, -1], &[4, -3])).unwrap();
        assert_eq!(v, serde_json::json!({"num": ["-4", "1"], "den": ["-4", "3"]}));
        let back: RatFun = serde_json::from_value(v).unwrap();
        assert_eq!(back, rf(&[4, -1], &[4, -3]));
    }

    fn arb_ratfun() -> impl Strategy<Value = RatFun> {
        (
            prop::collection::vec(-6i64..6, 0..4),
            prop::collection::vec(-6i64..6, 1..4),
        )
            .prop_filter_map("zero denominator", |(n, d)| RatFun::from_i64s(&n, &d).ok())
    }

    proptest! {
        #[test]
        fn normalising_is_idempotent_and_equality_is_cross_multiplication(
            a in arb_ratfun(), b in arb_ratfun()
        ) {
            let again = RatFun::new(a.numerator().clone(), a.denominator().clone()).unwrap();
            prop_assert_eq!(&again, &a);
            let cross = &(a.numerator() * b.denominator()) == &(b.numerator() * a.denominator());
            prop_assert_eq!(cross, a == b);
        }

        #[test]
        fn field_laws(a in arb_ratfun(), b in arb_ratfun(), c in arb_ratfun()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!((&(&a * &b) / &b).unwrap(), a.clone());
            }
        }
    }
}
