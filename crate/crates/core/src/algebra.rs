//! The Lie algebra `Vir[G]` with basis `{d_x : x ∈ G} ∪ {c}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::foundation::{GroupElement, GroupSpec, OrderSpec, Scalar};

/// Sign of the linear term of the bracket.
///
/// `YMinusX`: `[d_x, d_y] = (y − x) d_{x+y} + δ_{x,−y} (x³ − x)/12 · c`, the
/// convention under which `d_x v_y = (α + y + xβ) v_{x+y}` is a module.
/// `XMinusY` flips the linear term and is kept only for experiments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Convention {
    #[default]
    YMinusX,
    XMinusY,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<GroupElement, Scalar>,
    central: Scalar,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn d(x: GroupElement) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(x, Scalar::one());
        LieElement {
            terms,
            central: Scalar::zero(),
        }
    }

    pub fn c() -> Self {
        LieElement {
            terms: BTreeMap::new(),
            central: Scalar::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, Scalar> {
        &self.terms
    }

    pub fn central(&self) -> &Scalar {
        &self.central
    }

    pub fn coefficient(&self, x: &GroupElement) -> Scalar {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, x: GroupElement, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(x.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_central(&mut self, c: &Scalar) {
        self.central += c;
    }

    pub fn scale(&self, s: &Scalar) -> LieElement {
        if s.is_zero() {
            return LieElement::zero();
        }
        LieElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
            central: &self.central * s,
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out.add_central(&other.central);
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(&Scalar::from_i64(-1)))
    }

    fn rank(&self) -> Option<usize> {
        self.terms.keys().next().map(GroupElement::rank)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| format!("({v})*d{k}"))
            .collect();
        if !self.central.is_zero() {
            parts.push(format!("({})*c", self.central));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `Vir[G]` for a fixed group and sign convention.
#[derive(Clone, Debug)]
pub struct Virasoro {
    group: GroupSpec,
    convention: Convention,
}

impl Virasoro {
    pub fn new(group: GroupSpec) -> Self {
        Virasoro {
            group,
            convention: Convention::YMinusX,
        }
    }

    pub fn with_convention(group: GroupSpec, convention: Convention) -> Self {
        Virasoro { group, convention }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// `(coefficient of d_{x+y}, coefficient of c)` in `[d_x, d_y]`.
    pub fn structure(&self, x: &GroupElement, y: &GroupElement) -> (Scalar, Scalar) {
        let ex = self.group.embed_unchecked(x);
        let ey = self.group.embed_unchecked(y);
        let lin = match self.convention {
            Convention::YMinusX => &ey - &ex,
            Convention::XMinusY => &ex - &ey,
        };
        let central = if (x + y).is_zero() {
            central_term(&ex)
        } else {
            Scalar::zero()
        };
        (lin, central)
    }

    fn check(&self, u: &LieElement) -> Result<(), Error> {
        match u.rank() {
            Some(r) if r != self.group.rank() => Err(Error::RankMismatch {
                expected: self.group.rank(),
                got: r,
            }),
            _ => Ok(()),
        }
    }

    pub fn bracket(&self, u: &LieElement, v: &LieElement) -> Result<LieElement, Error> {
        self.check(u)?;
        self.check(v)?;
        let mut out = LieElement::zero();
        for (x, a) in &u.terms {
            for (y, b) in &v.terms {
                let (lin, cen) = self.structure(x, y);
                let ab = a * b;
                out.add_term(x + y, &lin * &ab);
                if !cen.is_zero() {
                    out.add_central(&(&cen * &ab));
                }
            }
        }
        Ok(out)
    }

    /// `[d_x, v]`.
    pub fn ad_action(&self, x: &GroupElement, v: &LieElement) -> Result<LieElement, Error> {
        self.group.check(x)?;
        self.bracket(&LieElement::d(x.clone()), v)
    }

    /// Indices reachable from `generators` by at most `depth` nested
    /// (left-normed) brackets with a nonzero exact coefficient.
    pub fn bracket_closure(
        &self,
        generators: &BTreeSet<GroupElement>,
        depth: usize,
    ) -> BTreeSet<GroupElement> {
        let mut reached = generators.clone();
        let mut frontier = generators.clone();
        for _ in 0..depth {
            let mut next = BTreeSet::new();
            for x in &frontier {
                for g in generators {
                    let z = x + g;
                    if reached.contains(&z) || next.contains(&z) {
                        continue;
                    }
                    let (lin, _) = self.structure(x, g);
                    if !lin.is_zero() {
                        next.insert(z);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            reached.extend(next.iter().cloned());
            frontier = next;
        }
        reached
    }
}

/// `(x³ − x)/12`.
pub fn central_term(x: &Scalar) -> Scalar {
    &(&x.pow(3) - x) * &Scalar::rational(1, 12)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Plus,
    Zero,
    Minus,
}

/// `G = G₊ ∪ {0} ∪ G₋` relative to a total order.
#[derive(Clone, Debug)]
pub struct TriangularDecomposition {
    order: OrderSpec,
}

impl TriangularDecomposition {
    pub fn new(order: OrderSpec) -> Result<Self, Error> {
        order.validate()?;
        Ok(TriangularDecomposition { order })
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn part(&self, x: &GroupElement) -> Part {
        match self.order.sign(x) {
            std::cmp::Ordering::Greater => Part::Plus,
            std::cmp::Ordering::Equal => Part::Zero,
            std::cmp::Ordering::Less => Part::Minus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::Var;

    fn ge(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    #[test]
    fn basic_brackets() {
        let vir = Virasoro::new(GroupSpec::symbolic(2).unwrap());
        let r = vir
            .bracket(&LieElement::d(ge(&[1, 0])), &LieElement::d(ge(&[0, 1])))
            .unwrap();
        let b1 = Scalar::var(Var::Gen(0));
        let b2 = Scalar::var(Var::Gen(1));
        assert_eq!(r.coefficient(&ge(&[1, 1])), &b2 - &b1);
        assert!(vir.bracket(&LieElement::c(), &LieElement::d(ge(&[3, -2]))).unwrap().is_zero());
    }

    #[test]
    fn rank_one_central_term() {
        let z = Virasoro::new(GroupSpec::with_values(vec![Scalar::one()]).unwrap());
        let r = z.bracket(&LieElement::d(ge(&[2])), &LieElement::d(ge(&[-2]))).unwrap();
        assert_eq!(r.coefficient(&ge(&[0])), Scalar::from_i64(-4));
        assert_eq!(r.central(), &Scalar::rational(1, 2));
        let s = z.ad_action(&ge(&[1]), &LieElement::d(ge(&[-1]))).unwrap();
        assert_eq!(s.coefficient(&ge(&[0])), Scalar::from_i64(-2));
        assert!(s.central().is_zero());
    }

    #[test]
    fn closure_examples() {
        let vir = Virasoro::new(GroupSpec::symbolic(2).unwrap());
        let gens: BTreeSet<_> = [ge(&[1, 0]), ge(&[-1, 0]), ge(&[0, 1]), ge(&[0, -1])].into();
        let c = vir.bracket_closure(&gens, 2);
        for z in [ge(&[1, 1]), ge(&[2, 1]), ge(&[-1, -1])] {
            assert!(c.contains(&z), "{z}");
        }
        let single: BTreeSet<_> = [ge(&[1, 0])].into();
        assert_eq!(vir.bracket_closure(&single, 5), single);
    }
}
