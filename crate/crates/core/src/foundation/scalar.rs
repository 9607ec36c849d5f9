//! Exact scalars: quotients of polynomials over `Q` in the formal parameters.
//!
//! Fractions are not reduced by a multivariate gcd. After every operation the
//! denominator is cleared when it divides the numerator (or the other way
//! round), common monomial factors are cancelled, and the denominator is made
//! monic.
//! Equality is decided by cross multiplication, so it is exact regardless of
//! the representative.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::parse::{parse_expr, ExprTarget};
use super::poly::{Monomial, Poly, Var};
use crate::error::Error;

#[derive(Clone, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_i64(1)
    }

    pub fn from_i64(c: i64) -> Self {
        Scalar {
            num: Poly::from_i64(c),
            den: Poly::one(),
        }
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::from(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn var(v: Var) -> Self {
        Scalar {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Build `num / den`. Returns `None` when `den` is zero.
    pub fn ratio(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Scalar { num, den }.normalized())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The polynomial, if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.num.is_zero() {
            return None;
        }
        Some(
            Scalar {
                num: self.den.clone(),
                den: self.num.clone(),
            }
            .normalized(),
        )
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        Some(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Scalar {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
        .normalized()
    }

    pub fn substitute(&self, v: Var, value: &Scalar) -> Option<Scalar> {
        let f = |w: Var| (w == v).then(|| value.clone());
        self.substitute_with(&f)
    }

    /// Substitute scalars for some variables. `None` if the denominator
    /// vanishes after substitution.
    pub fn substitute_with(&self, f: &dyn Fn(Var) -> Option<Scalar>) -> Option<Scalar> {
        let n = subst_poly(&self.num, f);
        let d = subst_poly(&self.den, f);
        n.checked_div(&d)
    }

    pub fn evaluate(&self, point: &BTreeMap<Var, BigRational>) -> Option<BigRational> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(point)? / d)
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = self.den.constant_value() {
            if !c.is_one() {
                self.num = self.num.scale(&c.recip());
            }
            self.den = Poly::one();
            return self;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return Scalar::from_poly(q);
        }
        let g = self.num.monomial_content().gcd(&self.den.monomial_content());
        if !g.is_one() {
            self.num = self.num.div_exact(&Poly::term(BigRational::one(), g.clone())).unwrap();
            self.den = self.den.div_exact(&Poly::term(BigRational::one(), g)).unwrap();
        }
        if let Some(q) = self.den.div_exact(&self.num) {
            // num / den == 1 / q
            let lc = q.leading().map(|(_, c)| c.clone()).unwrap();
            return Scalar {
                num: Poly::constant(lc.recip()),
                den: q.scale(&lc.recip()),
            };
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            self.num = self.num.scale(&lc.recip());
            self.den = self.den.scale(&lc.recip());
        }
        self
    }
}

fn subst_poly(p: &Poly, f: &dyn Fn(Var) -> Option<Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::from(c.clone());
        let mut rest = Vec::new();
        for &(v, e) in m.pairs() {
            match f(v) {
                Some(s) => t = &t * &s.pow(e),
                None => rest.push((v, e)),
            }
        }
        t = &t * &Scalar::from_poly(Poly::term(BigRational::one(), Monomial::from_pairs(rest)));
        acc = &acc + &t;
    }
    acc
}

impl Scalar {
    /// Parse an exact expression over the parameter alphabet, e.g.
    /// `"3/4"` or `"alpha + 2*b1"`.
    pub fn parse(src: &str) -> Result<Scalar, Error> {
        parse_expr(src)
    }
}

impl ExprTarget for Scalar {
    fn integer(n: BigInt) -> Self {
        Scalar::from(BigRational::from_integer(n))
    }
    fn symbol(name: &str) -> Result<Self, Error> {
        Var::from_name(name)
            .map(Scalar::var)
            .ok_or_else(|| Error::Parse(format!("unknown symbol {name:?}")))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Result<Self, Error> {
        self.checked_div(rhs)
            .ok_or_else(|| Error::Parse("division by zero".into()))
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_i64(c)
    }
}

impl From<BigRational> for Scalar {
    fn from(c: BigRational) -> Self {
        Scalar::from_poly(Poly::constant(c))
    }
}

impl From<Poly> for Scalar {
    fn from(p: Poly) -> Self {
        Scalar::from_poly(p)
    }
}

impl From<Var> for Scalar {
    fn from(v: Var) -> Self {
        Scalar::var(v)
    }
}

impl std::ops::Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.den == rhs.den {
            if self.den.is_one() {
                return Scalar::from_poly(&self.num + &rhs.num);
            }
            return Scalar {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        Scalar {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl std::ops::Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num * &rhs.num);
        }
        Scalar {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                std::ops::$tr::$f(&self, &rhs)
            }
        }
        impl std::ops::$tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                std::ops::$tr::$f(&self, rhs)
            }
        }
        impl std::ops::$tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                std::ops::$tr::$f(self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.num_terms() > 1 || p.leading().is_some_and(|(m, c)| !m.is_one() && !c.is_one()) {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Scalar {
        Scalar::var(Var::Alpha)
    }
    fn b() -> Scalar {
        Scalar::var(Var::Beta)
    }

    #[test]
    fn fraction_cancels_when_exact() {
        let num = &(&a() * &a()) - &(&b() * &b());
        let den = &a() + &b();
        let q = num.checked_div(&den).unwrap();
        assert_eq!(q.as_poly(), Some(&(a() - b()).numer().clone()));
    }

    #[test]
    fn equality_by_cross_multiplication() {
        let one = Scalar::one();
        let x = one.checked_div(&(a() + b())).unwrap();
        let y = (a() - b()).checked_div(&(&a() * &a() - &b() * &b())).unwrap();
        assert_eq!(x, y);
        assert!((x - y).is_zero());
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(Scalar::zero().inv().is_none());
        assert!(a().checked_div(&Scalar::zero()).is_none());
    }

    #[test]
    fn parse_and_print() {
        let s = Scalar::parse("alpha + 2*b1 - 1/12*cdot").unwrap();
        assert_eq!(Scalar::parse(&s.to_string()).unwrap(), s);
        let r = Scalar::parse("(h^2 - 1)/(h - 1)").unwrap();
        assert_eq!(r, Scalar::parse("h + 1").unwrap());
        assert!(Scalar::parse("0.5").is_err());
        assert!(Scalar::parse("gamma").is_err());
        assert!(Scalar::parse("1/(alpha - alpha)").is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::rational(3, 4).to_string(), "3/4");
        let s = Scalar::one().checked_div(&(a() + Scalar::one())).unwrap();
        assert_eq!(s.to_string(), "1/(alpha + 1)");
    }
}
