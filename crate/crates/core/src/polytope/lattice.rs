//! Integer matrix normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `left * m * right = diag(divisors, 0, ...)` with unimodular `left`, `right`
/// and `divisors[i] | divisors[i + 1]`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Smith normal form of an `rows x cols` integer matrix.
pub fn smith_normal_form(m: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let rows = m.len();
    let mut a: IntMatrix = m.to_vec();
    let mut left = identity(rows);
    let mut right = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero pivot in the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut right, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    left.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut a, t, best.1);
                    swap_cols(&mut right, t, best.1);
                }
                continue;
            }
            // divisibility of the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    let one = -BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut left, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in left[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let divisors = (0..rows.min(cols))
        .map(|i| a[i][i].clone())
        .take_while(|d| !d.is_zero())
        .collect();
    SmithForm {
        divisors,
        left,
        right,
    }
}

// row_i -= q * row_t
fn row_axpy(a: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    let src = a[t].clone();
    for (x, y) in a[i].iter_mut().zip(src) {
        *x -= q * y;
    }
}

// col_j -= q * col_t
fn col_axpy(a: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let y = row[t].clone();
        row[j] -= q * y;
    }
}

fn swap_cols(a: &mut IntMatrix, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// Basis of the lattice `{u in Z^cols : m u = 0}`.
pub fn integer_kernel(m: &[Vec<BigInt>], cols: usize) -> IntMatrix {
    let snf = smith_normal_form(m, cols);
    let r = snf.rank();
    let mut basis: IntMatrix = (r..cols)
        .map(|j| snf.right.iter().map(|row| row[j].clone()).collect())
        .collect();
    size_reduce(&mut basis);
    basis
}

/// Cheap pairwise size reduction of a lattice basis; keeps the lattice.
fn size_reduce(basis: &mut IntMatrix) {
    let norm = |v: &[BigInt]| v.iter().map(|x| x * x).fold(BigInt::zero(), |s, x| s + x);
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = norm(&basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let dot = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(x, y)| x * y)
                    .fold(BigInt::zero(), |s, x| s + x);
                // nearest integer to dot / nj
                let q = (BigInt::from(2) * &dot + &nj).div_floor(&(BigInt::from(2) * &nj));
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(x, y)| x - &q * y)
                    .collect();
                if norm(&cand) < norm(&basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let p = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..p)
                    .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).fold(BigInt::zero(), |s, v| s + v))
                    .collect()
            })
            .collect()
    }

    fn check(m: &[Vec<i64>], cols: usize, want: &[i64]) {
        let big = to_big(m);
        let snf = smith_normal_form(&big, cols);
        let want: Vec<BigInt> = want.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(snf.divisors, want);
        let d = mul(&mul(&snf.left, &big), &snf.right);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j && i < want.len() { want[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, expect);
            }
        }
    }

    #[test]
    fn identity_has_unit_divisors() {
        check(&[vec![1, 0], vec![0, 1]], 2, &[1, 1]);
    }

    #[test]
    fn diag_two_three() {
        check(&[vec![2, 0], vec![0, 3]], 2, &[1, 6]);
    }

    #[test]
    fn zero_matrix() {
        check(&[vec![0, 0], vec![0, 0]], 2, &[]);
    }

    #[test]
    fn index_two_cone() {
        check(&[vec![1, 1], vec![0, 2]], 2, &[1, 2]);
        check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3, &[2, 6, 12]);
        check(&[vec![1, 2, 3], vec![4, 5, 6]], 3, &[1, 3]);
    }

    #[test]
    fn kernel_of_twisted_cubic_matrix() {
        // points (2,0),(1,1),(0,2) as columns
        let a = to_big(&[vec![2, 1, 0], vec![0, 1, 2]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert!(v == vec![1, -2, 1] || v == vec![-1, 2, -1]);
    }
}
