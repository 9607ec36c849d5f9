//! Integer lattice utilities: extended gcd, Hermite normal form, kernels,
//! basis completion and unimodular inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::group::GroupElement;
use crate::error::Error;
use crate::linalg;

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `s·a + t·b = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = (a as i128).extended_gcd(&(b as i128));
    let (g, s, t) = if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    };
    (g as i64, s as i64, t as i64)
}

pub fn gcd_all(k: &[i64]) -> i64 {
    k.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Row-style Hermite normal form: echelon rows with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    hnf_wide(m)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

fn hnf_wide(mut m: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below row r
            let best = (r..m.len())
                .filter(|&i| m[i][c] != 0)
                .min_by_key(|&i| m[i][c].abs());
            let Some(p) = best else { break };
            m.swap(r, p);
            let mut clean = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c].div_euclid(m[r][c]);
                    for j in c..ncols {
                        m[i][j] -= q * m[r][j];
                    }
                    if m[i][c] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        let piv = m[r][c];
        for i in 0..r {
            let q = m[i][c].div_euclid(piv);
            if q != 0 {
                for j in c..ncols {
                    m[i][j] -= q * m[r][j];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Z-basis (in Hermite normal form) of `{x ∈ Zⁿ : A x = 0}`.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let m = a.len();
    // rows [Aᵀ_i | e_i]
    let aug: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row: Vec<i128> = a.iter().map(|r| r[i] as i128).collect();
            row.extend((0..n).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    let reduced = hnf_wide(aug);
    let kernel: Vec<Vec<i64>> = reduced
        .into_iter()
        .filter(|row| row[..m].iter().all(|&x| x == 0))
        .map(|row| row[m..].iter().map(|&x| x as i64).collect())
        .collect();
    hnf(&kernel)
}

/// The Bézout tuple `t` with `k·t = 1` of minimal Euclidean norm, ties
/// broken by the lexicographically smallest tuple.
pub fn bezout_min_norm(k: &[i64]) -> Result<Vec<i64>, Error> {
    if k.iter().all(|&x| x == 0) {
        return Err(Error::Lattice("zero vector has no Bézout tuple".into()));
    }
    if gcd_all(k) != 1 {
        return Err(Error::Lattice(format!("gcd of {k:?} is not 1")));
    }
    let n = k.len();
    // one solution from the transform
    let aug: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row = vec![k[i] as i128];
            row.extend((0..n).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    let reduced = hnf_wide(aug);
    debug_assert_eq!(reduced[0][0], 1);
    let mut t: Vec<i128> = reduced[0][1..].to_vec();
    let kernel = integer_kernel(&[k.to_vec()], n);
    // greedy size reduction to get a small enumeration radius
    loop {
        let mut improved = false;
        for v in &kernel {
            let vv: i128 = v.iter().map(|&x| (x as i128) * (x as i128)).sum();
            let tv: i128 = t.iter().zip(v).map(|(&a, &b)| a * b as i128).sum();
            let q = (2 * tv + vv).div_euclid(2 * vv);
            if q != 0 {
                let old: i128 = t.iter().map(|x| x * x).sum();
                let cand: Vec<i128> = t.iter().zip(v).map(|(&a, &b)| a - q * b as i128).collect();
                if cand.iter().map(|x| x * x).sum::<i128>() < old {
                    t = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    let bound: i128 = t.iter().map(|x| x * x).sum();
    // enumerate everything within the bound; the last coordinate with
    // nonzero k is solved for
    let pivot = (0..n).rev().find(|&i| k[i] != 0).unwrap();
    let free: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
    let mut best: Option<(i128, Vec<i128>)> = None;
    let mut cur = vec![0i128; n];
    enumerate(k, pivot, &free, 0, bound, 0, 0, &mut cur, &mut best);
    let (_, v) = best.expect("the starting solution lies within the bound");
    Ok(v.into_iter().map(|x| x as i64).collect())
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    k: &[i64],
    pivot: usize,
    free: &[usize],
    depth: usize,
    bound: i128,
    used: i128,
    dot: i128,
    cur: &mut Vec<i128>,
    best: &mut Option<(i128, Vec<i128>)>,
) {
    if depth == free.len() {
        let rest = 1 - dot;
        let kp = k[pivot] as i128;
        if rest % kp != 0 {
            return;
        }
        let xp = rest / kp;
        let norm = used + xp * xp;
        if norm > bound {
            return;
        }
        cur[pivot] = xp;
        let better = match best {
            None => true,
            Some((bn, bv)) => norm < *bn || (norm == *bn && cur[..] < bv[..]),
        };
        if better {
            *best = Some((norm, cur.clone()));
        }
        cur[pivot] = 0;
        return;
    }
    let i = free[depth];
    let r = isqrt(bound - used);
    for x in -r..=r {
        cur[i] = x;
        enumerate(
            k,
            pivot,
            free,
            depth + 1,
            bound,
            used + x * x,
            dot + x * k[i] as i128,
            cur,
            best,
        );
    }
    cur[i] = 0;
}

fn isqrt(v: i128) -> i128 {
    if v <= 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Splits `Zⁿ = Z·t ⊕ G₀` where `G₀ = {x : k·x = 0}`.
pub fn complement_basis(k: &GroupElement) -> Result<(GroupElement, Vec<GroupElement>), Error> {
    let t = bezout_min_norm(k.coords())?;
    let g0 = integer_kernel(&[k.coords().to_vec()], k.rank());
    Ok((
        GroupElement::new(t),
        g0.into_iter().map(GroupElement::new).collect(),
    ))
}

pub fn det(m: &[Vec<i64>]) -> BigInt {
    linalg::det_int(m)
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, Error> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Lattice("matrix is not square".into()));
    }
    let d = det(m);
    if d != BigInt::from(1) && d != BigInt::from(-1) {
        return Err(Error::Lattice(format!("determinant {d} is not ±1")));
    }
    let aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            m[i].iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .chain((0..n).map(|j| BigRational::from_integer(i64::from(i == j).into())))
                .collect()
        })
        .collect();
    let e = linalg::rref(&aug, 2 * n);
    let mut inv = vec![vec![0i64; n]; n];
    for (i, row) in e.rows.iter().enumerate() {
        for j in 0..n {
            let v = &row[n + j];
            debug_assert!(v.is_integer());
            inv[i][j] = v.to_integer().to_i64().ok_or_else(|| Error::Lattice("overflow".into()))?;
        }
    }
    Ok(inv)
}

/// The matrix with rows `(p+1, p, …, p)`, `(p+2, p+1, p, …, p)` and
/// `I₁ + e_k` for `k ≥ 3`; its determinant is 1.
pub fn eq31_matrix(n: usize, p: i64) -> Result<Vec<Vec<i64>>, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    let mut i1 = vec![p; n];
    i1[0] = p + 1;
    let mut i2 = vec![p; n];
    i2[0] = p + 2;
    i2[1] = p + 1;
    let mut rows = vec![i1.clone(), i2];
    for k in 2..n {
        let mut r = i1.clone();
        r[k] += 1;
        rows.push(r);
    }
    Ok(rows)
}

pub fn mat_vec(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// `xᵀ M`, i.e. the combination of the rows of `M` with coefficients `x`.
pub fn vec_mat(x: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| x.iter().zip(m).map(|(a, r)| a * r[j]).sum())
        .collect()
}

pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_bezout() {
        let (g, s, t) = ext_gcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * s + 46 * t, 2);
        assert_eq!(bezout_min_norm(&[2, 3]).unwrap(), vec![-1, 1]);
        assert_eq!(bezout_min_norm(&[6, 10, 15]).unwrap(), vec![1, 1, -1]);
        assert_eq!(bezout_min_norm(&[1, 0]).unwrap(), vec![1, 0]);
        assert!(bezout_min_norm(&[2, 4]).is_err());
        assert!(bezout_min_norm(&[0, 0]).is_err());
    }

    #[test]
    fn hnf_shape() {
        let h = hnf(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        for (i, row) in h.iter().enumerate() {
            let p = row.iter().position(|&x| x != 0).unwrap();
            assert!(row[p] > 0);
            for prev in &h[..i] {
                assert!(prev[p] >= 0 && prev[p] < row[p]);
            }
        }
        assert_eq!(num_traits::Signed::abs(&det(&h)), BigInt::from(144));
    }

    #[test]
    fn kernels() {
        assert_eq!(integer_kernel(&[vec![2, 3]], 2), vec![vec![3, -2]]);
        assert_eq!(integer_kernel(&[vec![1, 0]], 2), vec![vec![0, 1]]);
        let k = integer_kernel(&[vec![6, 10, 15]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(6 * v[0] + 10 * v[1] + 15 * v[2], 0);
        }
    }

    #[test]
    fn unimodular_small_cases() {
        assert_eq!(eq31_matrix(2, 0).unwrap(), vec![vec![1, 0], vec![2, 1]]);
        assert_eq!(
            eq31_matrix(3, 1).unwrap(),
            vec![vec![2, 1, 1], vec![3, 2, 1], vec![2, 1, 2]]
        );
        assert_eq!(det(&eq31_matrix(2, 5).unwrap()), BigInt::from(1));
        assert!(eq31_matrix(1, 0).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = eq31_matrix(4, 2).unwrap();
        let inv = unimodular_inverse(&m).unwrap();
        for i in 0..4 {
            let col: Vec<i64> = (0..4).map(|j| inv[j][i]).collect();
            let e = mat_vec(&m, &col);
            assert_eq!(e, (0..4).map(|j| i64::from(i == j)).collect::<Vec<_>>());
        }
        assert!(unimodular_inverse(&[vec![2, 0], vec![0, 1]]).is_err());
    }
}
