//! Smith normal form over ℤ with arbitrary-precision entries.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// `left · A · right = D` with `D` diagonal, each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries `d_0 | d_1 | …`, `min(rows, cols)` of them, all ≥ 0.
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factor of cokernel coordinate `i`; `0` marks a free summand.
    pub fn cokernel_factor(&self, i: usize) -> BigInt {
        self.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Cokernel coordinates with a nontrivial summand (factor ≠ 1), in order.
    pub fn cokernel_generators(&self) -> Vec<(usize, BigInt)> {
        (0..self.rows).map(|i| (i, self.cokernel_factor(i))).filter(|(_, d)| !d.is_one()).collect()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let s = q * &row[src];
            row[dst] -= s;
        }
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Computes the Smith normal form of the `rows × cols` matrix `a`.
pub fn smith_normal_form(a: &[Vec<BigInt>], rows: usize, cols: usize) -> SmithForm {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    assert_eq!(m.len(), rows);
    assert!(m.iter().all(|r| r.len() == cols));
    let mut left = identity(rows);
    let mut right = identity(cols);
    let n = rows.min(cols);

    for t in 0..n {
        let smallest = |m: &[Vec<BigInt>]| {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = smallest(&m) else { break };
        m.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut right, t, pj);

        loop {
            let mut dirty = false;
            for i in (t + 1)..rows {
                if !m[i][t].is_zero() {
                    let q = &m[i][t] / &m[t][t];
                    row_axpy(&mut m, i, t, &q);
                    row_axpy(&mut left, i, t, &q);
                    if !m[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !m[t][j].is_zero() {
                    let q = &m[t][j] / &m[t][t];
                    col_axpy(&mut m, j, t, &q);
                    col_axpy(&mut right, j, t, &q);
                    if !m[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // A remainder smaller than the pivot appeared in row or column t.
                let mut best = (t, t);
                for i in t..rows {
                    if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                m.swap(t, best.0);
                left.swap(t, best.0);
                swap_cols(&mut m, t, best.1);
                swap_cols(&mut right, t, best.1);
                continue;
            }
            let offender = ((t + 1)..rows).find(|&i| ((t + 1)..cols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut m, t, i, &minus_one);
                    row_axpy(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
            for x in left[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let diagonal = (0..n).map(|i| m[i][i].clone()).collect();
    SmithForm { rows, cols, diagonal, left, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
        (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum()).collect()).collect()
    }

    fn check(a: &[Vec<BigInt>], rows: usize, cols: usize) -> SmithForm {
        let s = smith_normal_form(a, rows, cols);
        let d = mul(&mul(&s.left, a), &s.right);
        for i in 0..rows {
            for j in 0..cols {
                let expect = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(d[i][j], expect, "entry {i},{j}");
            }
        }
        for w in s.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility {:?}", s.diagonal);
            } else {
                assert!(w[0].is_zero() || !w[0].is_negative());
            }
        }
        // Unimodular transforms.
        assert_eq!(det(&s.left).abs(), BigInt::one());
        assert_eq!(det(&s.right).abs(), BigInt::one());
        s
    }

    /// Bareiss fraction-free determinant.
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut a = m.to_vec();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    #[test]
    fn classic_example() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = check(&a, 3, 3);
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check(&big(&[&[0, 0], &[0, 0], &[0, 0]]), 3, 2);
        assert_eq!(s.rank(), 0);
        assert_eq!(s.cokernel_generators().len(), 3);
        let s = check(&big(&[&[1, 1, 1]]), 1, 3);
        assert_eq!(s.diagonal, vec![BigInt::one()]);
        assert!(s.cokernel_generators().is_empty());
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..7, 16)) {
            let a: Vec<Vec<BigInt>> = (0..rows)
                .map(|i| (0..cols).map(|j| BigInt::from(seed[i * 4 + j])).collect())
                .collect();
            check(&a, rows, cols);
        }
    }
}
