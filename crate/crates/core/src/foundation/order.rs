//! Total orders on `G` compatible with addition.

use std::cmp::Ordering;

use serde::Serialize;

use super::group::{rational_rank, GroupElement, GroupSpec};
use super::lattice;
use super::quadratic::QuadSurd;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TieBreak {
    /// Reject functionals that are not injective on `G`.
    Reject,
    /// Resolve ties of the functional lexicographically.
    Lex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSpec {
    /// Lexicographic comparison of `T·x` for a unimodular `T` (rows).
    Lex { transform: Vec<Vec<i64>> },
    /// Sign of `Σ wᵢ xᵢ` with `wᵢ ∈ Q[√d]`.
    Functional {
        weights: Vec<QuadSurd>,
        d: u32,
        tie_break: TieBreak,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrderKind {
    Dense,
    Discrete { minimal_positive: GroupElement },
}

impl OrderSpec {
    pub fn lex(n: usize) -> Self {
        OrderSpec::Lex {
            transform: (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn lex_with(transform: Vec<Vec<i64>>) -> Result<Self, Error> {
        let n = transform.len();
        if n == 0 || transform.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidOrder("transform must be square".into()));
        }
        lattice::unimodular_inverse(&transform)
            .map_err(|e| Error::InvalidOrder(format!("transform is not unimodular: {e}")))?;
        Ok(OrderSpec::Lex { transform })
    }

    pub fn functional(weights: Vec<QuadSurd>, d: u32, tie_break: TieBreak) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::InvalidOrder("no weights".into()));
        }
        if weights.iter().all(QuadSurd::is_zero) {
            return Err(Error::InvalidOrder("weights are all zero".into()));
        }
        let weights: Vec<QuadSurd> = weights
            .into_iter()
            .map(|w| QuadSurd::new(w.rational, w.surd, d))
            .collect();
        let order = OrderSpec::Functional {
            weights,
            d,
            tie_break,
        };
        order.validate()?;
        Ok(order)
    }

    /// Functional order from the real data attached to a group.
    pub fn from_real_data(group: &GroupSpec, tie_break: TieBreak) -> Result<Self, Error> {
        let r = group
            .real_data()
            .ok_or_else(|| Error::InvalidOrder("group has no real data".into()))?;
        OrderSpec::functional(r.values.clone(), r.d, tie_break)
    }

    pub fn rank(&self) -> usize {
        match self {
            OrderSpec::Lex { transform } => transform.len(),
            OrderSpec::Functional { weights, .. } => weights.len(),
        }
    }

    fn functional_kernel(weights: &[QuadSurd]) -> Vec<Vec<i64>> {
        // w·x = 0 over Q[√d] iff both rational parts vanish; clear denominators
        let n = weights.len();
        let rows: Vec<Vec<i64>> = [0, 1]
            .iter()
            .map(|&part| {
                let vals: Vec<_> = weights
                    .iter()
                    .map(|w| if part == 0 { w.rational.clone() } else { w.surd.clone() })
                    .collect();
                let lcm = vals
                    .iter()
                    .fold(num_bigint::BigInt::from(1), |l, v| num_integer::Integer::lcm(&l, v.denom()));
                vals.iter()
                    .map(|v| {
                        let x = v * num_rational::BigRational::from_integer(lcm.clone());
                        num_traits::ToPrimitive::to_i64(&x.to_integer()).expect("weight too large")
                    })
                    .collect()
            })
            .collect();
        lattice::integer_kernel(&rows, n)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if let OrderSpec::Functional {
            weights, tie_break, ..
        } = self
        {
            if *tie_break == TieBreak::Reject && !Self::functional_kernel(weights).is_empty() {
                return Err(Error::InvalidOrder(
                    "functional is not injective on G; request the Lex tie-break explicitly".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn compare(&self, x: &GroupElement, y: &GroupElement) -> Result<Ordering, Error> {
        if x.rank() != self.rank() || y.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: if x.rank() != self.rank() { x.rank() } else { y.rank() },
            });
        }
        Ok(self.sign(&(x - y)))
    }

    /// Sign of `x` relative to 0. Assumes the order is valid for `x`'s rank.
    pub fn sign(&self, x: &GroupElement) -> Ordering {
        match self {
            OrderSpec::Lex { transform } => lex_sign(&lattice::mat_vec(transform, x.coords())),
            OrderSpec::Functional { weights, d, .. } => {
                let mut acc = QuadSurd::from_int(0, *d);
                for (w, c) in weights.iter().zip(x.coords()) {
                    acc = &acc + &w.scale_int(*c);
                }
                match acc.signum() {
                    Ordering::Equal => lex_sign(x.coords()),
                    s => s,
                }
            }
        }
    }

    pub fn is_positive(&self, x: &GroupElement) -> bool {
        self.sign(x) == Ordering::Greater
    }

    pub fn classify(&self) -> Result<OrderKind, Error> {
        self.validate()?;
        match self {
            OrderSpec::Lex { transform } => {
                let inv = lattice::unimodular_inverse(transform)?;
                let n = transform.len();
                let col: Vec<i64> = (0..n).map(|i| inv[i][n - 1]).collect();
                Ok(OrderKind::Discrete {
                    minimal_positive: GroupElement::new(col),
                })
            }
            OrderSpec::Functional { weights, .. } => {
                let kernel = Self::functional_kernel(weights);
                if let Some(last) = kernel.last() {
                    // ties are ordered lexicographically, and every positive
                    // element of the kernel lies below every element with a
                    // positive functional value; the Hermite row with the
                    // deepest pivot is the minimal positive kernel element
                    return Ok(OrderKind::Discrete {
                        minimal_positive: GroupElement::new(last.clone()),
                    });
                }
                if rational_rank(weights) >= 2 {
                    return Ok(OrderKind::Dense);
                }
                // injective with rank-1 image: only n = 1
                let x = GroupElement::new(vec![1]);
                let mp = if self.is_positive(&x) { x } else { -&x };
                Ok(OrderKind::Discrete {
                    minimal_positive: mp,
                })
            }
        }
    }
}

fn lex_sign(v: &[i64]) -> Ordering {
    v.iter()
        .find(|&&c| c != 0)
        .map_or(Ordering::Equal, |c| c.cmp(&0))
}

pub fn classify_order(order: &OrderSpec) -> Result<OrderKind, Error> {
    order.classify()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ge(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    #[test]
    fn lex_and_functional_compare() {
        let lex = OrderSpec::lex(2);
        assert_eq!(lex.compare(&ge(&[1, -5]), &ge(&[0, 100])).unwrap(), Ordering::Greater);
        assert_eq!(lex.compare(&ge(&[3, 4]), &ge(&[3, 4])).unwrap(), Ordering::Equal);
        let f = OrderSpec::functional(vec![QuadSurd::sqrt(2), QuadSurd::from_int(1, 2)], 2, TieBreak::Reject)
            .unwrap();
        assert_eq!(f.compare(&ge(&[1, -1]), &ge(&[0, 0])).unwrap(), Ordering::Greater);
        assert_eq!(f.compare(&ge(&[3, 4]), &ge(&[3, 4])).unwrap(), Ordering::Equal);
    }

    #[test]
    fn classification() {
        assert_eq!(
            OrderSpec::lex(2).classify().unwrap(),
            OrderKind::Discrete {
                minimal_positive: ge(&[0, 1])
            }
        );
        let f = OrderSpec::functional(vec![QuadSurd::sqrt(2), QuadSurd::from_int(1, 2)], 2, TieBreak::Reject)
            .unwrap();
        assert_eq!(f.classify().unwrap(), OrderKind::Dense);
        let one = OrderSpec::functional(vec![QuadSurd::from_int(1, 2)], 2, TieBreak::Reject).unwrap();
        assert_eq!(
            one.classify().unwrap(),
            OrderKind::Discrete {
                minimal_positive: ge(&[1])
            }
        );
    }

    #[test]
    fn non_injective_needs_explicit_tie_break() {
        let w = vec![QuadSurd::from_int(1, 2), QuadSurd::from_int(1, 2)];
        assert!(OrderSpec::functional(w.clone(), 2, TieBreak::Reject).is_err());
        let o = OrderSpec::functional(w, 2, TieBreak::Lex).unwrap();
        assert_eq!(
            o.classify().unwrap(),
            OrderKind::Discrete {
                minimal_positive: ge(&[1, -1])
            }
        );
    }

    #[test]
    fn lex_with_transform() {
        let o = OrderSpec::lex_with(vec![vec![1, 1], vec![0, 1]]).unwrap();
        // T x = (x1 + x2, x2)
        assert!(!o.is_positive(&ge(&[1, -1])));
        assert!(o.is_positive(&ge(&[2, -1])));
        let OrderKind::Discrete { minimal_positive } = o.classify().unwrap() else { panic!() };
        assert_eq!(o.sign(&minimal_positive), Ordering::Greater);
        assert!(OrderSpec::lex_with(vec![vec![2, 0], vec![0, 1]]).is_err());
    }
}
