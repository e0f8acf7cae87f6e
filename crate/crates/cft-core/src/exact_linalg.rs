//! Exact linear algebra over the rationals: fraction-free Bareiss
//! elimination for determinants, ranks, and kernels, plus a plain field
//! elimination for complex-rational determinants.
//!
//! Bareiss works on integer matrices (rows are cleared of denominators
//! first); every intermediate entry is a minor of the input, so the division
//! in the update step is exact and entry growth stays polynomial.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) struct Echelon {
    pub mat: Vec<Vec<BigInt>>,
    pub pivot_cols: Vec<usize>,
    pub sign: i8,
}

/// Fraction-free row echelon form with row pivoting and free-column
/// skipping. The returned matrix has the Bareiss minor property on its
/// pivot rows; rows below the rank are zero.
pub(crate) fn bareiss_echelon(mut m: Vec<Vec<BigInt>>) -> Echelon {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivot_cols = Vec::new();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in col + 1..cols {
                let num = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                let (quot, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = quot;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        pivot_cols.push(col);
        r += 1;
    }
    Echelon { mat: m, pivot_cols, sign }
}

/// Clears denominators row by row; returns the integer matrix and the
/// factor each row was multiplied by.
fn clear_denominators(m: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut out = Vec::with_capacity(m.len());
    let mut factors = Vec::with_capacity(m.len());
    for row in m {
        let mut l = BigInt::one();
        for x in row {
            l = l.lcm(x.denom());
        }
        out.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        factors.push(l);
    }
    (out, factors)
}

/// Exact determinant of a square rational matrix.
pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    let (im, factors) = clear_denominators(m);
    let ech = bareiss_echelon(im);
    if ech.pivot_cols.len() < n {
        return BigRational::zero();
    }
    let mut det = BigRational::from_integer(ech.mat[n - 1][n - 1].clone());
    if ech.sign < 0 {
        det = -det;
    }
    let mut scale = BigInt::one();
    for f in factors {
        scale *= f;
    }
    det / BigRational::from_integer(scale)
}

/// Rank of a rational matrix.
pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let (im, _) = clear_denominators(m);
    bareiss_echelon(im).pivot_cols.len()
}

/// Basis of the right kernel of a rational matrix, one vector per free
/// column. Each vector is normalised so its first nonzero coordinate is 1.
pub fn kernel_rational(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        // No constraints: the kernel is everything.
        return (0..cols)
            .map(|f| {
                let mut v = vec![BigRational::zero(); cols];
                v[f] = BigRational::one();
                v
            })
            .collect();
    }
    assert!(m.iter().all(|r| r.len() == cols));
    let (im, _) = clear_denominators(m);
    let ech = bareiss_echelon(im);
    let rank = ech.pivot_cols.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &ech.pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for f in 0..cols {
        if is_pivot[f] {
            continue;
        }
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for i in (0..rank).rev() {
            let p = ech.pivot_cols[i];
            let mut s = BigRational::zero();
            for j in p + 1..cols {
                if !x[j].is_zero() {
                    s += BigRational::from_integer(ech.mat[i][j].clone()) * &x[j];
                }
            }
            x[p] = -s / BigRational::from_integer(ech.mat[i][p].clone());
        }
        let lead = x.iter().find(|v| !v.is_zero()).expect("kernel vector is nonzero").clone();
        for v in &mut x {
            *v = v.clone() / lead.clone();
        }
        basis.push(x);
    }
    basis
}

/// Exact determinant over the field of complex rationals, by ordinary
/// Gaussian elimination (no fraction-free trick needed; the field is exact).
pub fn det_complex_rational(m: &[Vec<Complex<BigRational>>]) -> Complex<BigRational> {
    let n = m.len();
    let one = Complex::new(BigRational::one(), BigRational::zero());
    if n == 0 {
        return one;
    }
    assert!(m.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<Complex<BigRational>>> = m.to_vec();
    let mut det = one;
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Complex::new(BigRational::zero(), BigRational::zero());
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone() / pivot.clone();
            for j in col..n {
                let sub = factor.clone() * m[col][j].clone();
                m[i][j] = m[i][j].clone() - sub;
            }
        }
    }
    det
}
