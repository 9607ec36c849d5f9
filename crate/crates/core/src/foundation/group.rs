//! The group `G ≅ Zⁿ`, its elements, and its embedding into the scalars.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, Poly, Var};
use super::quadratic::QuadSurd;
use super::scalar::Scalar;
use crate::error::Error;
use crate::linalg;

/// `Σ xᵢ bᵢ`, stored by its integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<i64>);

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        GroupElement(coords)
    }

    pub fn zero(n: usize) -> Self {
        GroupElement(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        GroupElement(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        GroupElement(self.0.iter().map(|x| x * k).collect())
    }

    pub fn dot(&self, k: &[i64]) -> i64 {
        self.0.iter().zip(k).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add<&GroupElement> for &GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.rank(), rhs.rank());
        GroupElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&GroupElement> for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.rank(), rhs.rank());
        GroupElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: GroupElement) -> GroupElement {
        &self + &rhs
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: GroupElement) -> GroupElement {
        &self - &rhs
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        -&self
    }
}

/// Exact real values of the generators, used by functional orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealData {
    pub d: u32,
    pub values: Vec<QuadSurd>,
}

/// A rank-`n` group `Zb₁ ⊕ … ⊕ Zbₙ`. By default each `bᵢ` is a free symbol;
/// generators may instead be given explicit polynomial values (e.g. `b₁ = 1`
/// for `G = Z`), provided these are linearly independent over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    values: Vec<Scalar>,
    real: Option<RealData>,
}

impl GroupSpec {
    pub fn symbolic(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidGroup("rank must be at least 1".into()));
        }
        Ok(GroupSpec {
            values: (0..n).map(|i| Scalar::var(Var::Gen(i as u8))).collect(),
            real: None,
        })
    }

    pub fn with_values(values: Vec<Scalar>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::InvalidGroup("rank must be at least 1".into()));
        }
        for v in &values {
            if v.as_poly().is_none() {
                return Err(Error::InvalidGroup(format!(
                    "generator value {v} is not a polynomial"
                )));
            }
            if v.vars().iter().any(|x| !x.is_generator()) {
                return Err(Error::InvalidGroup(format!(
                    "generator value {v} involves a module parameter"
                )));
            }
        }
        let spec = GroupSpec { values, real: None };
        let (m, _) = spec.coefficient_matrix();
        if linalg::rank(&m, spec.rank()) < spec.rank() {
            return Err(Error::InvalidGroup(
                "generator values are linearly dependent over Q".into(),
            ));
        }
        Ok(spec)
    }

    /// Attaches real values `bᵢ ∈ Q[√d]`. Linear independence over `Q` is
    /// checked for rank ≤ 2; `Q[√d]` has dimension 2, so for higher rank the
    /// data cannot be independent and only the shape is validated.
    pub fn with_real_data(mut self, d: u32, values: Vec<QuadSurd>) -> Result<Self, Error> {
        if values.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: values.len(),
            });
        }
        if self.rank() <= 2 {
            let rows = surd_rows(&values);
            if linalg::rank(&rows, self.rank()) < self.rank() {
                return Err(Error::InvalidGroup(
                    "real values of the generators are dependent over Q".into(),
                ));
            }
        }
        self.real = Some(RealData {
            d,
            values: values.into_iter().map(|v| QuadSurd::new(v.rational, v.surd, d)).collect(),
        });
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn real_data(&self) -> Option<&RealData> {
        self.real.as_ref()
    }

    pub fn generator_names(&self) -> Vec<String> {
        (0..self.rank()).map(|i| Var::Gen(i as u8).name()).collect()
    }

    pub fn check(&self, x: &GroupElement) -> Result<(), Error> {
        if x.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: x.rank(),
            });
        }
        Ok(())
    }

    pub fn embed(&self, x: &GroupElement) -> Result<Scalar, Error> {
        self.check(x)?;
        Ok(self.embed_unchecked(x))
    }

    pub(crate) fn embed_unchecked(&self, x: &GroupElement) -> Scalar {
        let mut acc = Scalar::zero();
        for (c, v) in x.coords().iter().zip(&self.values) {
            if *c != 0 {
                acc = &acc + &(&Scalar::from_i64(*c) * v);
            }
        }
        acc
    }

    pub fn real_value(&self, x: &GroupElement) -> Option<QuadSurd> {
        let r = self.real.as_ref()?;
        let mut acc = QuadSurd::from_int(0, r.d);
        for (c, v) in x.coords().iter().zip(&r.values) {
            acc = &acc + &v.scale_int(*c);
        }
        Some(acc)
    }

    /// Rows indexed by the monomials occurring in the generator values,
    /// columns by generators.
    fn coefficient_matrix(&self) -> (Vec<Vec<BigRational>>, Vec<Monomial>) {
        let mut monos: Vec<Monomial> = self
            .values
            .iter()
            .flat_map(|v| v.numer().terms().map(|(m, _)| m.clone()).collect::<Vec<_>>())
            .collect();
        monos.sort();
        monos.dedup();
        let m = monos
            .iter()
            .map(|mono| self.values.iter().map(|v| v.numer().coefficient(mono)).collect())
            .collect();
        (m, monos)
    }

    /// Rational coordinates of `s` in the span of the generators, if any.
    fn rational_coords(&self, s: &Scalar) -> Option<Vec<BigRational>> {
        let p: &Poly = s.as_poly()?;
        let (mut m, monos) = self.coefficient_matrix();
        let mut rhs: Vec<BigRational> = monos.iter().map(|mono| p.coefficient(mono)).collect();
        // any monomial of s outside the generators' support must vanish
        for (mono, _) in p.terms() {
            if !monos.contains(mono) {
                return None;
            }
        }
        if m.is_empty() {
            m.push(vec![BigRational::zero(); self.rank()]);
            rhs.push(BigRational::zero());
        }
        linalg::solve(&m, &rhs)
    }

    /// `Some(g)` iff `s = embed(g)`; expressions with free parameters other
    /// than the generators, or with non-integral coordinates, are not in `G`.
    pub fn locate(&self, s: &Scalar) -> Option<GroupElement> {
        let q = self.rational_coords(s)?;
        let mut out = Vec::with_capacity(q.len());
        for c in q {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer().to_i64()?);
        }
        Some(GroupElement::new(out))
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        self.locate(s).is_some()
    }

    /// Reduces `s` modulo the subgroup spanned by `basis`: returns
    /// `(s - embed(g), g)` with `g` in that subgroup, where `g` rounds (toward
    /// −∞) the coordinates of the orthogonal projection of the `G`-part of `s`
    /// onto the span of `basis`. Free parameters of `s` are left untouched.
    pub fn normalize_mod(&self, s: &Scalar, basis: &[GroupElement]) -> (Scalar, GroupElement) {
        let zero = GroupElement::zero(self.rank());
        if basis.is_empty() {
            return (s.clone(), zero);
        }
        // coordinates of the G-part of s along the basis
        let Some(p) = s.as_poly() else {
            return (s.clone(), zero);
        };
        let gen_part = Scalar::from_poly(generator_linear_part(p, self));
        let Some(q) = self.rational_coords(&gen_part) else {
            return (s.clone(), zero);
        };
        // coordinates of the orthogonal projection of q onto span(basis)
        let gram: Vec<Vec<BigRational>> = basis
            .iter()
            .map(|u| basis.iter().map(|v| BigRational::from_integer(u.dot(v.coords()).into())).collect())
            .collect();
        let rhs: Vec<BigRational> = basis
            .iter()
            .map(|u| {
                u.coords()
                    .iter()
                    .zip(&q)
                    .map(|(a, b)| BigRational::from_integer((*a).into()) * b)
                    .sum()
            })
            .collect();
        let Some(coef) = linalg::solve(&gram, &rhs) else {
            return (s.clone(), zero);
        };
        let mut g = zero;
        for (c, b) in coef.iter().zip(basis) {
            let k = c.floor().to_integer();
            let k: i64 = k.to_i64().unwrap_or(0);
            g = &g + &b.scale(k);
        }
        (s - &self.embed_unchecked(&g), g)
    }
}

/// The part of `p` that is a combination of the monomials occurring in the
/// generator values (so that a symbolic offset such as `alpha` is kept aside).
fn generator_linear_part(p: &Poly, spec: &GroupSpec) -> Poly {
    let (_, monos) = spec.coefficient_matrix();
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        if monos.contains(m) {
            out = &out + &Poly::term(c.clone(), m.clone());
        }
    }
    out
}

fn surd_rows(values: &[QuadSurd]) -> Vec<Vec<BigRational>> {
    vec![
        values.iter().map(|v| v.rational.clone()).collect(),
        values.iter().map(|v| v.surd.clone()).collect(),
    ]
}

/// Rank over `Q` of a tuple of `Q[√d]` numbers.
pub fn rational_rank(values: &[QuadSurd]) -> usize {
    linalg::rank(&surd_rows(values), values.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeightBase {
    Zero,
    Lambda0,
    Alpha,
    H,
}

impl WeightBase {
    pub fn scalar(&self) -> Scalar {
        match self {
            WeightBase::Zero => Scalar::zero(),
            WeightBase::Lambda0 => Scalar::var(Var::Lambda0),
            WeightBase::Alpha => Scalar::var(Var::Alpha),
            WeightBase::H => Scalar::var(Var::H),
        }
    }
}

/// `base + Σ offsetᵢ bᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub base: WeightBase,
    pub offset: GroupElement,
}

impl Weight {
    pub fn new(base: WeightBase, offset: GroupElement) -> Self {
        Weight { base, offset }
    }

    pub fn evaluate(&self, group: &GroupSpec) -> Result<Scalar, Error> {
        Ok(&self.base.scalar() + &group.embed(&self.offset)?)
    }

    pub fn shift(&self, x: &GroupElement) -> Weight {
        Weight::new(self.base, &self.offset + x)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            WeightBase::Zero => write!(f, "{}", self.offset),
            b => write!(f, "{}+{}", b.scalar(), self.offset),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_linear() {
        let g = GroupSpec::symbolic(2).unwrap();
        assert!(g.embed(&GroupElement::new(vec![0, 0])).unwrap().is_zero());
        assert_eq!(
            g.embed(&GroupElement::new(vec![1, 0])).unwrap(),
            Scalar::var(Var::Gen(0))
        );
        assert_eq!(
            g.embed(&GroupElement::new(vec![2, -3])).unwrap(),
            Scalar::parse("2*b1 - 3*b2").unwrap()
        );
        assert!(matches!(
            g.embed(&GroupElement::new(vec![1])),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn membership() {
        let z = GroupSpec::with_values(vec![Scalar::one()]).unwrap();
        assert_eq!(z.locate(&Scalar::from_i64(3)), Some(GroupElement::new(vec![3])));
        assert!(!z.contains(&Scalar::rational(1, 2)));
        assert!(!z.contains(&Scalar::var(Var::Alpha)));
        let g = GroupSpec::symbolic(2).unwrap();
        assert!(g.contains(&Scalar::parse("b1 - 4*b2").unwrap()));
        assert!(!g.contains(&Scalar::parse("b1/2").unwrap()));
        assert!(!g.contains(&Scalar::one()));
        let mixed = GroupSpec::with_values(vec![Scalar::one(), Scalar::var(Var::Gen(1))]).unwrap();
        assert!(mixed.contains(&Scalar::parse("2 - b2").unwrap()));
        assert!(GroupSpec::with_values(vec![Scalar::one(), Scalar::from_i64(2)]).is_err());
    }

    #[test]
    fn normalization_mod_subgroup() {
        let g = GroupSpec::symbolic(2).unwrap();
        let s = Scalar::parse("alpha + 3*b2 + b1").unwrap();
        let (r, off) = g.normalize_mod(&s, &[GroupElement::new(vec![0, 1])]);
        assert_eq!(off, GroupElement::new(vec![0, 3]));
        assert_eq!(r, Scalar::parse("alpha + b1").unwrap());
    }

    #[test]
    fn real_data_independence() {
        let g = GroupSpec::symbolic(2).unwrap();
        assert!(g
            .clone()
            .with_real_data(2, vec![QuadSurd::sqrt(2), QuadSurd::from_int(1, 2)])
            .is_ok());
        assert!(g
            .with_real_data(2, vec![QuadSurd::from_int(2, 2), QuadSurd::from_int(1, 2)])
            .is_err());
    }
}
