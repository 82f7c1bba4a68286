//! Integer row reduction: Hermite form, Smith invariants, integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Row-style Hermite normal form of the row span; zero rows dropped.
/// Pivots are positive and entries above each pivot are reduced into [0, pivot).
pub fn hnf(rows: &[Vec<BigInt>]) -> IntMatrix {
    let (h, _) = echelon(rows.to_vec(), None, usize::MAX);
    h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Echelon form over the first `limit` columns using unimodular row operations,
/// also applied to `tail` if present. Returns the matrix and the pivot columns.
fn echelon(mut a: IntMatrix, mut tail: Option<&mut IntMatrix>, limit: usize) -> (IntMatrix, Vec<usize>) {
    let rows = a.len();
    if rows == 0 {
        return (a, Vec::new());
    }
    let cols = a[0].len().min(limit);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = best else { break };
            a.swap(r, p);
            if let Some(t) = tail.as_deref_mut() {
                t.swap(r, p);
            }
            let mut done = true;
            for i in (r + 1)..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                row_axpy(&mut a, i, r, &q);
                if let Some(t) = tail.as_deref_mut() {
                    row_axpy(t, i, r, &q);
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
            if let Some(t) = tail.as_deref_mut() {
                for x in t[r].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                row_axpy(&mut a, i, r, &q);
                if let Some(t) = tail.as_deref_mut() {
                    row_axpy(t, i, r, &q);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// row[i] -= q * row[r]
fn row_axpy(a: &mut IntMatrix, i: usize, r: usize, q: &BigInt) {
    let src = a[r].clone();
    for (x, s) in a[i].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

/// Basis of {c ∈ Z^k : Σ c_i rows[i] = 0}, i.e. the integer left kernel.
pub fn left_kernel(rows: &[Vec<BigInt>]) -> IntMatrix {
    let k = rows.len();
    if k == 0 {
        return Vec::new();
    }
    let m = rows[0].len();
    let mut tail: IntMatrix = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let (a, pivots) = echelon(rows.to_vec(), Some(&mut tail), m);
    let _ = a;
    hnf(&tail[pivots.len()..])
}

/// Whether `v` lies in the row span of a Hermite basis from [`hnf`].
pub fn hnf_contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut r: Vec<BigInt> = v.to_vec();
    for row in basis {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else { continue };
        if r[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = r[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        for (x, b) in r.iter_mut().zip(row) {
            *x -= &q * b;
        }
    }
    r.iter().all(|x| x.is_zero())
}

/// Nontrivial invariant factors (those ≠ 1) of an integer matrix, plus the rank.
pub fn smith_invariants(m: &[Vec<BigInt>]) -> (Vec<BigInt>, usize) {
    let mut a: IntMatrix = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return (Vec::new(), 0);
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in (t + 1)..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let s = row[t].clone();
                        row[j] -= &q * s;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = ((t + 1)..rows).find(|&i| ((t + 1)..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, s) in a[t].iter_mut().zip(&src) {
                        *x += s;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        diag.push(a[t][t].abs());
    }
    let rank = diag.len();
    (diag.into_iter().filter(|d| !d.is_one()).collect(), rank)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a BigRational>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Determinant by fraction-free elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
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
