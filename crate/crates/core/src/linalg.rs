//! Dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(m: &[Vec<Rational>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    for row in &a {
        assert_eq!(row.len(), ncols, "ragged matrix");
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Rational>], ncols: usize) -> usize {
    rref(m, ncols).1.len()
}

/// Basis of `{x : M x = 0}`, returned in reduced row echelon form.
pub fn kernel(m: &[Vec<Rational>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(m, ncols);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        basis.push(v);
    }
    rref(&basis, ncols).0
}

/// Whether `v` lies in the row space of `rows`.
pub fn in_row_space(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    let n = v.len();
    let base = rank(rows, n);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext, n) == base
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction (sign preserved). The zero vector maps to zeros.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Like [`primitive_integer`] but with the first nonzero entry made positive.
pub fn normalized_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut w = primitive_integer(v);
    if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in w.iter_mut() {
            *x = -x.clone();
        }
    }
    w
}

pub fn to_rational_matrix(m: &[Vec<i64>]) -> Matrix {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Characteristic polynomial `det(t I - A)` in ascending coefficient order,
/// by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let identity = |c: &Rational| -> Matrix {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { c.clone() } else { Rational::zero() }).collect())
            .collect()
    };
    // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k
    let mut m: Matrix = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let am = matmul(a, &m);
        let id = identity(&coeffs[n - k + 1]);
        m = am
            .into_iter()
            .zip(id)
            .map(|(r1, r2)| r1.into_iter().zip(r2).map(|(x, y)| x + y).collect())
            .collect();
        let am = matmul(a, &m);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).fold(Rational::zero(), |s, x| s + x);
        coeffs[n - k] = -tr / Rational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let n = a.len();
    let p = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    a[i].iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(Rational::zero(), |s, (x, row)| s + x * &row[j])
                })
                .collect()
        })
        .collect()
}

/// Number of sign changes in a coefficient sequence, zeros skipped.
pub fn sign_changes(coeffs: &[Rational]) -> usize {
    let signs: Vec<bool> = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of positive eigenvalues (with multiplicity) of a symmetric rational
/// matrix. All roots of the characteristic polynomial are real, so Descartes'
/// rule of signs is exact.
pub fn positive_eigenvalue_count(a: &[Vec<Rational>]) -> usize {
    sign_changes(&characteristic_polynomial(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ratio, rational};

    fn m(rows: &[&[i64]]) -> Matrix {
        to_rational_matrix(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = kernel(&m(&[&[1, 1, 1]]), 3);
        assert_eq!(k, m(&[&[1, 0, -1], &[0, 1, -1]]));
    }

    #[test]
    fn full_rank_kernel_is_empty() {
        assert!(kernel(&m(&[&[1, 2], &[3, 4]]), 2).is_empty());
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]]), 2), 1);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![ratio(1, 2), ratio(-3, 4), rational(0)];
        assert_eq!(primitive_integer(&v), vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
        let v = vec![ratio(-1, 3), ratio(2, 3)];
        assert_eq!(normalized_integer(&v), vec![BigInt::from(1), BigInt::from(-2)]);
    }

    #[test]
    fn characteristic_polynomial_of_sigma_hessian() {
        // [[0,1,1],[1,0,1],[1,1,0]] has char poly t^3 - 3t - 2
        let a = m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(
            characteristic_polynomial(&a),
            vec![rational(-2), rational(-3), rational(0), rational(1)]
        );
        assert_eq!(positive_eigenvalue_count(&a), 1);
    }

    #[test]
    fn inertia_counts() {
        assert_eq!(positive_eigenvalue_count(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]])), 2);
        assert_eq!(positive_eigenvalue_count(&m(&[&[2]])), 1);
        assert_eq!(positive_eigenvalue_count(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(positive_eigenvalue_count(&m(&[&[-1, 0], &[0, -3]])), 0);
    }

    #[test]
    fn row_space_membership() {
        let rows = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert!(in_row_space(&rows, &[rational(2), rational(3), rational(5)]));
        assert!(!in_row_space(&rows, &[rational(1), rational(1), rational(1)]));
    }
}
