//! Exact arithmetic in `Q[√d]` for a fixed square-free `d > 1`, with exact
//! sign determination. Used only to evaluate real-valued functional orders.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::parse::{parse_expr, ExprTarget};
use super::poly::fmt_rational;
use crate::error::Error;

/// `rational + surd·√d`. Values with `surd = 0` are compatible with any `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub rational: BigRational,
    pub surd: BigRational,
    pub d: u32,
}

impl QuadSurd {
    pub fn new(rational: BigRational, surd: BigRational, d: u32) -> Self {
        QuadSurd { rational, surd, d }
    }

    pub fn from_int(n: i64, d: u32) -> Self {
        QuadSurd::new(BigRational::from_integer(n.into()), BigRational::zero(), d)
    }

    pub fn sqrt(d: u32) -> Self {
        QuadSurd::new(
            BigRational::zero(),
            BigRational::from_integer(1.into()),
            d,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    fn join_d(&self, other: &Self) -> u32 {
        match (self.surd.is_zero(), other.surd.is_zero()) {
            (true, _) => other.d,
            (_, true) => self.d,
            _ => {
                assert_eq!(self.d, other.d, "mixing Q[√{}] and Q[√{}]", self.d, other.d);
                self.d
            }
        }
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.rational.cmp(&BigRational::zero());
        let sb = self.surd.cmp(&BigRational::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let a2 = &self.rational * &self.rational;
        let b2d = &self.surd * &self.surd * BigRational::from_integer(self.d.into());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn scale_int(&self, k: i64) -> QuadSurd {
        let k = BigRational::from_integer(k.into());
        QuadSurd::new(&self.rational * &k, &self.surd * &k, self.d)
    }

    pub fn parse(src: &str, d: u32) -> Result<QuadSurd, Error> {
        let v: ParsedSurd = parse_expr(src)?;
        let v = v.0;
        if !v.surd.is_zero() && v.d != d {
            return Err(Error::Parse(format!(
                "{src:?} uses sqrt{} but the order is over Q[sqrt{d}]",
                v.d
            )));
        }
        Ok(QuadSurd::new(v.rational, v.surd, d))
    }
}

impl std::ops::Add<&QuadSurd> for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &QuadSurd) -> QuadSurd {
        let d = self.join_d(rhs);
        QuadSurd::new(&self.rational + &rhs.rational, &self.surd + &rhs.surd, d)
    }
}

impl std::ops::Sub<&QuadSurd> for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: &QuadSurd) -> QuadSurd {
        let d = self.join_d(rhs);
        QuadSurd::new(&self.rational - &rhs.rational, &self.surd - &rhs.surd, d)
    }
}

impl std::ops::Mul<&QuadSurd> for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &QuadSurd) -> QuadSurd {
        let d = self.join_d(rhs);
        let dd = BigRational::from_integer(d.into());
        QuadSurd::new(
            &self.rational * &rhs.rational + &self.surd * &rhs.surd * dd,
            &self.rational * &rhs.surd + &self.surd * &rhs.rational,
            d,
        )
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.surd.is_zero()) {
            (_, true) => f.write_str(&fmt_rational(&self.rational)),
            (true, false) => write!(f, "{}*sqrt{}", fmt_rational(&self.surd), self.d),
            (false, false) => {
                let sign = if self.surd.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "{} {sign} {}*sqrt{}",
                    fmt_rational(&self.rational),
                    fmt_rational(&self.surd.abs()),
                    self.d
                )
            }
        }
    }
}

#[derive(Clone)]
struct ParsedSurd(QuadSurd);

impl ExprTarget for ParsedSurd {
    fn integer(n: BigInt) -> Self {
        ParsedSurd(QuadSurd::new(
            BigRational::from_integer(n),
            BigRational::zero(),
            0,
        ))
    }
    fn symbol(name: &str) -> Result<Self, Error> {
        let d: u32 = name
            .strip_prefix("sqrt")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("unknown symbol {name:?} (expected sqrtD)")))?;
        if d < 2 || !is_square_free(d) {
            return Err(Error::Parse(format!("sqrt{d}: d must be square-free and > 1")));
        }
        Ok(ParsedSurd(QuadSurd::sqrt(d)))
    }
    fn add(&self, rhs: &Self) -> Self {
        ParsedSurd(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        ParsedSurd(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ParsedSurd(&self.0 * &rhs.0)
    }
    fn div(&self, rhs: &Self) -> Result<Self, Error> {
        let r = &rhs.0;
        if r.is_zero() {
            return Err(Error::Parse("division by zero".into()));
        }
        // multiply by the conjugate
        let conj = QuadSurd::new(r.rational.clone(), -r.surd.clone(), r.d);
        let norm = (r * &conj).rational;
        let top = &self.0 * &conj;
        Ok(ParsedSurd(QuadSurd::new(
            top.rational / &norm,
            top.surd / &norm,
            top.d,
        )))
    }
    fn neg(&self) -> Self {
        ParsedSurd(QuadSurd::new(
            -self.0.rational.clone(),
            -self.0.surd.clone(),
            self.0.d,
        ))
    }
}

pub fn is_square_free(d: u32) -> bool {
    let mut k = 2u32;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_sqrt2_minus_one() {
        let v = QuadSurd::parse("sqrt2 - 1", 2).unwrap();
        assert_eq!(v.signum(), Ordering::Greater);
        let w = QuadSurd::parse("sqrt2*3 - 5", 2).unwrap();
        // 3√2 ≈ 4.24
        assert_eq!(w.signum(), Ordering::Less);
        let z = QuadSurd::parse("(sqrt2 - 1)*(sqrt2 + 1) - 1", 2).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn parse_rejects_floats_and_wrong_radicand() {
        assert!(QuadSurd::parse("1.5", 2).is_err());
        assert!(QuadSurd::parse("sqrt3", 2).is_err());
        assert!(QuadSurd::parse("sqrt4", 4).is_err());
    }

    #[test]
    fn division_by_conjugate() {
        let v = QuadSurd::parse("1/(sqrt2 - 1)", 2).unwrap();
        assert_eq!(v, QuadSurd::parse("sqrt2 + 1", 2).unwrap());
    }
}
