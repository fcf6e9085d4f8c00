//! Exact rational linear algebra for the eigenvector computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub(crate) type Q = BigRational;

pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub(crate) fn int_matrix_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(a: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{x : A x = 0}` for an `rows × cols` matrix.
pub(crate) fn nullspace(a: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Q::zero(); cols];
        x[free] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = -m[r][free].clone();
        }
        basis.push(x);
    }
    basis
}

/// The unique solution of a square system, if any.
pub(crate) fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Coefficients `c_0..c_n` of `det(x I − A)`, `c_n = 1` (Faddeev–LeVerrier).
pub(crate) fn char_poly(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    if !mk[l][j].is_zero() {
                        s += &a[i][l] * &mk[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        mk = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -tr / q(k as i64);
    }
    coeffs
}

pub(crate) fn eval_poly(c: &[Q], x: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, k| acc * x + k)
}

fn combinations(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if chosen.len() == k {
        return f(chosen);
    }
    for i in start..n {
        chosen.push(i);
        combinations(n, k, i + 1, chosen, f)?;
        chosen.pop();
    }
    Ok(())
}

/// Maximum of `Σ_{num} z / Σ_{den} z` over non-zero `z ≥ 0` in the span of
/// `basis`, with the maximizing vector normalized by `Σ_{den} z = 1`. `None`
/// when no such `z` has a positive denominator.
pub(crate) fn maximize_ratio(basis: &[Vec<Q>], num: &[bool], den: &[bool], cap: usize) -> Result<Option<(Q, Vec<Q>)>> {
    let d = basis.len();
    if d == 0 {
        return Ok(None);
    }
    let s = basis[0].len();
    let coord = |j: usize| -> Vec<Q> { basis.iter().map(|v| v[j].clone()).collect() };
    let den_row: Vec<Q> = (0..d)
        .map(|i| (0..s).filter(|&j| den[j]).fold(Q::zero(), |acc, j| acc + &basis[i][j]))
        .collect();
    let mut best: Option<(Q, Vec<Q>)> = None;
    let mut steps = 0usize;
    let mut visit = |chosen: &[usize]| -> Result<()> {
        steps += 1;
        if steps > cap {
            return Err(Error::cap("eigenvector polytope vertices", cap));
        }
        let mut rows: Vec<Vec<Q>> = chosen.iter().map(|&j| coord(j)).collect();
        rows.push(den_row.clone());
        let mut rhs = vec![Q::zero(); d - 1];
        rhs.push(Q::one());
        if let Some(y) = solve(&rows, &rhs) {
            let z: Vec<Q> = (0..s).map(|j| (0..d).fold(Q::zero(), |acc, i| acc + &y[i] * &basis[i][j])).collect();
            if z.iter().all(|x| !x.is_negative()) {
                let r = (0..s).filter(|&j| num[j]).fold(Q::zero(), |acc, j| acc + &z[j]);
                if best.as_ref().is_none_or(|(b, _)| r > *b) {
                    best = Some((r, z));
                }
            }
        }
        Ok(())
    };
    combinations(s, d - 1, 0, &mut Vec::new(), &mut visit)?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: Q = (0..3).fold(Q::zero(), |acc, j| acc + &a[0][j] * &v[j]);
            assert!(s.is_zero());
        }
        let x = solve(&[vec![q(2), q(1)], vec![q(1), q(3)]], &[q(3), q(4)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(solve(&[vec![q(1), q(1)], vec![q(2), q(2)]], &[q(1), q(2)]).is_none());
    }

    #[test]
    fn characteristic_polynomial() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(0)]];
        assert_eq!(char_poly(&a), vec![q(-1), q(-1), q(1)]);
        let b = vec![vec![q(3), q(1)], vec![q(0), q(1)]];
        let c = char_poly(&b);
        assert!(eval_poly(&c, &q(3)).is_zero());
        assert!(eval_poly(&c, &q(1)).is_zero());
    }

    #[test]
    fn ratio_maximum() {
        let basis = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(2)]];
        let (r, z) = maximize_ratio(&basis, &[false, false, true], &[true, true, false], 100).unwrap().unwrap();
        assert_eq!(r, q(2));
        assert_eq!(z, vec![q(0), q(1), q(2)]);
    }
}
