//! Exact dense linear algebra over `Q`, over the scalar function field, and
//! fraction-free routines over polynomial rings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::foundation::poly::{Poly, Var};
use crate::foundation::scalar::Scalar;

pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Panics on division by zero; callers only divide by pivots.
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Heuristic size used for pivot selection.
    fn weight(&self) -> usize {
        1
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
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
    fn div(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("division by a zero pivot")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        self.numer().num_terms() * (1 + self.numer().degree() as usize)
            + self.denom().num_terms() * (1 + self.denom().degree() as usize)
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
    /// Original index of each echelon row.
    pub row_origin: Vec<usize>,
}

pub fn rref<F: Field>(matrix: &[Vec<F>], ncols: usize) -> Echelon<F> {
    let mut rows: Vec<Vec<F>> = matrix.to_vec();
    let mut origin: Vec<usize> = (0..rows.len()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].weight());
        let Some(p) = best else { continue };
        rows.swap(r, p);
        origin.swap(r, p);
        let inv = F::one().div(&rows[r][c]);
        for j in c..ncols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                if rows[r][j].is_zero() {
                    continue;
                }
                let t = f.mul(&rows[r][j]);
                rows[i][j] = rows[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    origin.truncate(r);
    Echelon {
        rows,
        pivots,
        row_origin: origin,
    }
}

pub fn rank<F: Field>(matrix: &[Vec<F>], ncols: usize) -> usize {
    rref(matrix, ncols).pivots.len()
}

/// Basis of `{v : M v = 0}`.
pub fn nullspace<F: Field>(matrix: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let e = rref(matrix, ncols);
    let pivot_set: BTreeSet<usize> = e.pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &pc) in e.rows.iter().zip(&e.pivots) {
            v[pc] = row[free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solve `M x = rhs`; `None` if inconsistent. Free variables are set to zero.
pub fn solve<F: Field>(matrix: &[Vec<F>], rhs: &[F]) -> Option<Vec<F>> {
    let ncols = matrix.first().map_or(0, Vec::len);
    let aug: Vec<Vec<F>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let e = rref(&aug, ncols + 1);
    if e.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![F::zero(); ncols];
    for (row, &pc) in e.rows.iter().zip(&e.pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Indices of a maximal set of linearly independent rows, chosen greedily in
/// order.
pub fn independent_rows<F: Field>(matrix: &[Vec<F>], ncols: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut current: Vec<Vec<F>> = Vec::new();
    let mut r = 0;
    for (i, row) in matrix.iter().enumerate() {
        current.push(row.clone());
        let nr = rank(&current, ncols);
        if nr > r {
            chosen.push(i);
            r = nr;
        } else {
            current.pop();
        }
    }
    chosen
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(matrix: &[Vec<Poly>]) -> Poly {
    let n = matrix.len();
    if n == 0 {
        return Poly::one();
    }
    let mut m = matrix.to_vec();
    let mut prev = Poly::one();
    let mut sign = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub fn det_int(matrix: &[Vec<i64>]) -> BigInt {
    let m: Vec<Vec<Poly>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| Poly::from_i64(x)).collect())
        .collect();
    let d = det_bareiss(&m).constant_value().unwrap();
    debug_assert!(d.is_integer());
    d.to_integer()
}

/// Rank over the fraction field of a polynomial matrix, fraction-free.
pub fn rank_fraction_free(matrix: &[Vec<Poly>], ncols: usize) -> usize {
    let mut m = matrix.to_vec();
    let nrows = m.len();
    let mut prev = Poly::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].num_terms())
        else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let t = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = t.div_exact(&prev).expect("fraction-free step is exact");
            }
            m[i][c] = Poly::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Clear denominators row by row so every entry is a polynomial.
pub fn to_poly_matrix(matrix: &[Vec<Scalar>]) -> Vec<Vec<Poly>> {
    matrix
        .iter()
        .map(|row| {
            let mut den = Poly::one();
            for s in row {
                if !s.denom().is_one() && den.div_exact(s.denom()).is_none() {
                    den = &den * s.denom();
                }
            }
            row.iter()
                .map(|s| {
                    let f = den.div_exact(s.denom()).expect("common denominator");
                    s.numer() * &f
                })
                .collect()
        })
        .collect()
}

/// Exact rank over the function field.
pub fn rank_symbolic(matrix: &[Vec<Scalar>], ncols: usize) -> usize {
    rank_fraction_free(&to_poly_matrix(matrix), ncols)
}

/// Rank after substituting seeded random rationals for every parameter.
///
/// Any specialization can only lose rank, so the value is a certified lower
/// bound on the rank over the function field. The maximum over `points`
/// independent draws is returned.
pub fn specialized_rank(matrix: &[Vec<Scalar>], ncols: usize, seed: u64, points: usize) -> usize {
    let vars: BTreeSet<Var> = matrix.iter().flatten().flat_map(|s| s.vars()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let mut tries = 0;
    let mut done = 0;
    while done < points.max(1) && tries < 16 * points.max(1) {
        tries += 1;
        let point: BTreeMap<Var, BigRational> = vars
            .iter()
            .map(|&v| {
                let n: i64 = rng.gen_range(-1_000_000_007i64..=1_000_000_007);
                let d: i64 = rng.gen_range(1..=997);
                (v, BigRational::new(n.into(), d.into()))
            })
            .collect();
        let evaluated: Option<Vec<Vec<BigRational>>> = matrix
            .iter()
            .map(|row| row.iter().map(|s| s.evaluate(&point)).collect())
            .collect();
        let Some(m) = evaluated else { continue };
        best = best.max(rank(&m, ncols));
        done += 1;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_rank_and_kernel() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m, 3), 2);
        let k = nullspace(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: BigRational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(Zero::is_zero(&dot));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve(&m, &[q(3), q(1)]), Some(vec![q(2), q(1)]));
        let s = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(solve(&s, &[q(1), q(3)]), None);
    }

    #[test]
    fn bareiss_symbolic_det() {
        let h = Poly::var(Var::H);
        let m = vec![vec![h.clone(), Poly::one()], vec![Poly::one(), h.clone()]];
        assert_eq!(det_bareiss(&m), &(&h * &h) - &Poly::one());
        assert_eq!(det_int(&[vec![6, 5], vec![7, 6]]), BigInt::from(1));
        assert_eq!(det_int(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
    }

    #[test]
    fn symbolic_rank_sees_generic_rank() {
        let a = Scalar::var(Var::Alpha);
        // rows (1, a), (a, a^2) are dependent; (1, a+1) is not
        let m = vec![
            vec![Scalar::one(), a.clone()],
            vec![a.clone(), &a * &a],
        ];
        assert_eq!(rank_symbolic(&m, 2), 1);
        assert_eq!(specialized_rank(&m, 2, 1, 2), 1);
        let m2 = vec![vec![Scalar::one(), a.clone()], vec![Scalar::one(), &a + &Scalar::one()]];
        assert_eq!(rank_symbolic(&m2, 2), 2);
        assert_eq!(rank::<Scalar>(&m2, 2), 2);
    }
}
