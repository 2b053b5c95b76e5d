//! Smith normal form over the integers, for exact kernel computation of
//! small character-lattice matrices.

use num_traits::{Signed, Zero};

use crate::rat::Int;

/// Diagonalize A by unimodular row and column operations: returns (d, v)
/// with U A V = D for some unimodular U, where `d` is the diagonal of D and
/// `v` is the square column-transformation matrix V. Only V is needed for
/// kernels, so U is not tracked.
pub fn smith_diagonal(a: &[Vec<Int>]) -> (Vec<Int>, Vec<Vec<Int>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Int>> = a.to_vec();
    let mut v: Vec<Vec<Int>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { Int::from(1) } else { Int::zero() })
                .collect()
        })
        .collect();

    let mut r = 0;
    let mut c = 0;
    while r < rows && c < cols {
        // Find a pivot: the smallest nonzero entry in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in r..rows {
            for j in c..cols {
                if !m[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(r, pi);
        if pj != c {
            for row in m.iter_mut() {
                row.swap(c, pj);
            }
            for row in v.iter_mut() {
                row.swap(c, pj);
            }
        }

        // Reduce the pivot row and column until both are clear.
        loop {
            let mut dirty = false;
            for i in (r + 1)..rows {
                if !m[i][c].is_zero() {
                    let q = div_round(&m[i][c], &m[r][c]);
                    for j in 0..cols {
                        let t = &m[r][j] * &q;
                        m[i][j] -= t;
                    }
                    if !m[i][c].is_zero() {
                        m.swap(r, i);
                        dirty = true;
                    }
                }
            }
            for j in (c + 1)..cols {
                if !m[r][j].is_zero() {
                    let q = div_round(&m[r][j], &m[r][c]);
                    for row in m.iter_mut() {
                        let t = &row[c] * &q;
                        row[j] -= t;
                    }
                    for row in v.iter_mut() {
                        let t = &row[c] * &q;
                        row[j] -= t;
                    }
                    if !m[r][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(c, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(c, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        r += 1;
        c += 1;
    }

    let d: Vec<Int> = (0..cols)
        .map(|j| if j < rows { m[j][j].clone() } else { Int::zero() })
        .collect();
    (d, v)
}

/// Rounded integer division (quotient minimizing the remainder).
fn div_round(a: &Int, b: &Int) -> Int {
    let two = Int::from(2);
    let (q, r) = (a / b, a % b);
    if (&r * &two).abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Basis of the right kernel {x : A x = 0} of an integer matrix, as columns
/// of the Smith column transform matching zero diagonal entries.
/// Deterministic for fixed input.
pub fn kernel_basis(a: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    if a.is_empty() {
        // Kernel is everything: the standard basis.
        return (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| if i == j { Int::from(1) } else { Int::zero() })
                    .collect()
            })
            .collect();
    }
    assert!(a.iter().all(|row| row.len() == cols));
    let (d, v) = smith_diagonal(a);
    let mut basis = Vec::new();
    for (j, dj) in d.iter().enumerate() {
        if dj.is_zero() {
            basis.push(v.iter().map(|row| row[j].clone()).collect());
        }
    }
    basis
}
