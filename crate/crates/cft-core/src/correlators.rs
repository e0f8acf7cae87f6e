//! Closed-form correlators on the plane: vertex operators of the free
//! boson (real-valued and circle-valued), free-fermion Pfaffians, twist
//! fields with their bosonized squares, bc ghosts, and the two-, three-
//! and n-point prefactors fixed by global conformal invariance.
//!
//! Wherever a formula is a rational function of the positions, points are
//! taken as Gaussian rationals and the evaluation is exact; modulus
//! factors with non-integer exponents are evaluated in f64. Complex
//! powers only ever appear with integer exponents, so no branch cut is
//! taken anywhere.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CftError, Result};

/// Gaussian-rational point, the exact-evaluation domain.
pub type ExactComplex = Complex<BigRational>;

/// Converts a float point to its exact binary value.
pub fn exact_complex(z: Complex64) -> Result<ExactComplex> {
    let part = |x: f64| {
        BigRational::from_float(x).ok_or_else(|| {
            CftError::InvalidArgument(format!("non-finite coordinate {x}"))
        })
    };
    Ok(Complex::new(part(z.re)?, part(z.im)?))
}

pub fn to_complex64(z: &ExactComplex) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn check_distinct_exact(points: &[ExactComplex]) -> Result<()> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                return Err(CftError::DegenerateParameter(format!(
                    "coincident insertion points at indices {i} and {j}"
                )));
            }
        }
    }
    Ok(())
}

fn check_distinct(points: &[Complex64]) -> Result<()> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                return Err(CftError::DegenerateParameter(format!(
                    "coincident insertion points at indices {i} and {j}"
                )));
            }
        }
    }
    Ok(())
}

/// n-point function of vertex operators V_alpha of the real free boson:
/// prod_{j<k} |z_j - z_k|^{2 alpha_j alpha_k} when the total charge
/// vanishes, exactly 0 otherwise. The neutrality gate and the pairwise
/// squared distances are exact; only the final power is floating point.
pub fn vertex_npoint(insertions: &[(ExactComplex, BigRational)]) -> Result<f64> {
    let points: Vec<ExactComplex> = insertions.iter().map(|(z, _)| z.clone()).collect();
    check_distinct_exact(&points)?;
    let total: BigRational = insertions.iter().map(|(_, a)| a.clone()).sum();
    if !total.is_zero() {
        return Ok(0.0);
    }
    let mut log_sum = 0.0f64;
    for j in 0..insertions.len() {
        for k in (j + 1)..insertions.len() {
            let exponent = &insertions[j].1 * &insertions[k].1;
            if exponent.is_zero() {
                continue;
            }
            let dist_sq = (&points[j] - &points[k]).norm_sqr();
            log_sum += exponent.to_f64().expect("charge product fits in f64")
                * dist_sq.to_f64().expect("distance fits in f64").ln();
        }
    }
    Ok(log_sum.exp())
}

/// n-point function of circle-valued vertex operators V_{e,m} at squared
/// radius rho = r^2:
///
/// prod_{i<j} |z_ij|^{2(e_i e_j / rho + m_i m_j rho / 4)}
///            (z_ij / |z_ij|)^{e_i m_j + m_i e_j}
///
/// when sum e = sum m = 0, exactly 0 otherwise. The phase exponent
/// e_i m_j + m_i e_j is an integer, so the phase factor is single-valued
/// with no branch choice.
pub fn vertex_lattice_npoint(
    insertions: &[(ExactComplex, i64, i64)],
    radius_sq: &BigRational,
) -> Result<Complex64> {
    if !radius_sq.is_positive() {
        return Err(CftError::InvalidArgument(format!(
            "squared radius must be positive, got {radius_sq}"
        )));
    }
    let points: Vec<ExactComplex> = insertions.iter().map(|(z, ..)| z.clone()).collect();
    check_distinct_exact(&points)?;
    let total_e: i64 = insertions.iter().map(|&(_, e, _)| e).sum();
    let total_m: i64 = insertions.iter().map(|&(_, _, m)| m).sum();
    if total_e != 0 || total_m != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let four = BigRational::from_integer(BigInt::from(4));
    let mut log_sum = 0.0f64;
    let mut phase = Complex64::new(1.0, 0.0);
    for i in 0..insertions.len() {
        for j in (i + 1)..insertions.len() {
            let (_, e_i, m_i) = insertions[i];
            let (_, e_j, m_j) = insertions[j];
            let exponent = BigRational::from_integer(BigInt::from(e_i * e_j)) / radius_sq
                + BigRational::from_integer(BigInt::from(m_i * m_j)) * radius_sq / &four;
            let dist_sq = (&points[i] - &points[j]).norm_sqr();
            if !exponent.is_zero() {
                log_sum += exponent.to_f64().expect("exponent fits in f64")
                    * dist_sq.to_f64().expect("distance fits in f64").ln();
            }
            let winding = e_i * m_j + m_i * e_j;
            if winding != 0 {
                let z_ij = to_complex64(&(&points[i] - &points[j]));
                let u = z_ij / z_ij.norm();
                phase *= u.powi(winding as i32);
            }
        }
    }
    Ok(phase * log_sum.exp())
}

fn pfaffian_rec<T>(a: &[Vec<T>], alive: &[usize]) -> T
where
    T: Clone + Zero + One + std::ops::Sub<Output = T>,
{
    if alive.is_empty() {
        return T::one();
    }
    let first = alive[0];
    let rest = &alive[1..];
    let mut total = T::zero();
    let mut positive = true;
    for (pos, &other) in rest.iter().enumerate() {
        let mut remaining = Vec::with_capacity(rest.len() - 1);
        remaining.extend(rest.iter().take(pos).copied());
        remaining.extend(rest.iter().skip(pos + 1).copied());
        let term = a[first][other].clone() * pfaffian_rec(a, &remaining);
        if positive {
            total = total + term;
        } else {
            total = total - term;
        }
        positive = !positive;
    }
    total
}

fn check_pfaffian_shape<T>(a: &[Vec<T>]) -> Result<Vec<usize>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(CftError::InvalidArgument(
            "Pfaffian requires a square matrix".into(),
        ));
    }
    if n % 2 != 0 {
        return Err(CftError::InvalidArgument(format!(
            "Pfaffian requires even dimension, got {n}"
        )));
    }
    Ok((0..n).collect())
}

/// Pfaffian of an exactly antisymmetric Gaussian-rational matrix, by
/// expansion along the first row. Exact.
pub fn pfaffian(a: &[Vec<ExactComplex>]) -> Result<ExactComplex> {
    let alive = check_pfaffian_shape(a)?;
    for i in 0..a.len() {
        for j in i..a.len() {
            if a[i][j] != -a[j][i].clone() {
                return Err(CftError::InvalidArgument(format!(
                    "matrix is not antisymmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(pfaffian_rec(a, &alive))
}

/// Pfaffian of a float antisymmetric matrix (antisymmetry checked to
/// 1e-12 per entry).
pub fn pfaffian_c64(a: &[Vec<Complex64>]) -> Result<Complex64> {
    let alive = check_pfaffian_shape(a)?;
    for i in 0..a.len() {
        for j in i..a.len() {
            if (a[i][j] + a[j][i]).norm() > 1e-12 {
                return Err(CftError::InvalidArgument(format!(
                    "matrix is not antisymmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(pfaffian_rec(a, &alive))
}

/// n-point function of the chiral free fermion psi:
/// Pf(1 / (z_i - z_j)) for even n, 0 for odd n. Exact.
pub fn psi_npoint(points: &[ExactComplex]) -> Result<ExactComplex> {
    check_distinct_exact(points)?;
    let n = points.len();
    if n % 2 != 0 {
        return Ok(ExactComplex::zero());
    }
    let mut kernel = vec![vec![ExactComplex::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                kernel[i][j] = (&points[i] - &points[j]).inv();
            }
        }
    }
    let alive: Vec<usize> = (0..n).collect();
    Ok(pfaffian_rec(&kernel, &alive))
}

fn matching_sum(points: &[ExactComplex], used: &mut [bool]) -> ExactComplex {
    let first = match used.iter().position(|u| !u) {
        Some(i) => i,
        None => return ExactComplex::one(),
    };
    used[first] = true;
    let mut total = ExactComplex::zero();
    for j in (first + 1)..points.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let diff = &points[first] - &points[j];
        let propagator = -(&diff * &diff).inv();
        total = total + propagator * matching_sum(points, used);
        used[j] = false;
    }
    used[first] = false;
    total
}

/// n-point function of the current d(phi) of the free boson: the Wick sum
/// over perfect matchings of prod -1/(z_a - z_b)^2. Exact. n must be
/// even.
pub fn dphi_npoint(points: &[ExactComplex]) -> Result<ExactComplex> {
    check_distinct_exact(points)?;
    if points.len() % 2 != 0 {
        return Err(CftError::InvalidArgument(format!(
            "current correlator needs an even number of points, got {}",
            points.len()
        )));
    }
    let mut used = vec![false; points.len()];
    Ok(matching_sum(points, &mut used))
}

/// Four-point function of the fermion twist field sigma:
///
/// (1/2) |z13 z24 / (z12 z23 z34 z41)|^{1/4} (|1 + s| + |1 - s|),
///
/// s = sqrt(1 - lambda), lambda = z12 z34 / (z13 z24). Both square-root
/// branches enter through the two modulus terms symmetrically, so the
/// value is branch-independent.
pub fn sigma_four_point(points: &[Complex64; 4]) -> Result<f64> {
    check_distinct(points)?;
    let z12 = points[0] - points[1];
    let z13 = points[0] - points[2];
    let z23 = points[1] - points[2];
    let z24 = points[1] - points[3];
    let z34 = points[2] - points[3];
    let z41 = points[3] - points[0];
    let lambda = z12 * z34 / (z13 * z24);
    if lambda == Complex64::new(0.0, 0.0) || lambda == Complex64::new(1.0, 0.0) {
        return Err(CftError::DegenerateParameter(format!(
            "degenerate cross-ratio {lambda}"
        )));
    }
    let s = (Complex64::new(1.0, 0.0) - lambda).sqrt();
    let one = Complex64::new(1.0, 0.0);
    let prefactor = (z13 * z24 / (z12 * z23 * z34 * z41)).norm().powf(0.25);
    Ok(0.5 * prefactor * ((one + s).norm() + (one - s).norm()))
}

/// Squared n-point function of the twist field from its bosonized form:
/// 2^{-n/2} sum over sign assignments k_i = +-1 with sum k = 0 of
/// prod_{i<j} |z_i - z_j|^{k_i k_j / 2}. n must be even.
pub fn bosonization_sigma_sq(points: &[Complex64]) -> Result<f64> {
    check_distinct(points)?;
    let n = points.len();
    if n % 2 != 0 {
        return Err(CftError::InvalidArgument(format!(
            "twist correlator needs an even number of points, got {n}"
        )));
    }
    if n > 26 {
        return Err(CftError::InvalidArgument(format!(
            "sign-assignment sum over {n} points is out of reach"
        )));
    }
    let mut log_dist = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            log_dist[i][j] = (points[i] - points[j]).norm().ln();
        }
    }
    let mut total = 0.0f64;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != n / 2 {
            continue;
        }
        let sign = |i: usize| if mask & (1 << i) != 0 { 1.0 } else { -1.0 };
        let mut log_term = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                log_term += 0.5 * sign(i) * sign(j) * log_dist[i][j];
            }
        }
        total += log_term.exp();
    }
    Ok(total * 2.0f64.powi(-(n as i32) / 2))
}

/// Ghost propagator <b(w) c(z)> = 1/(w - z).
pub fn bc_two_point(w: Complex64, z: Complex64) -> Result<Complex64> {
    check_distinct(&[w, z])?;
    Ok(Complex64::new(1.0, 0.0) / (w - z))
}

/// <c(z1) c(z2) c(z3)> = z12 z13 z23, soaking up the three c zero modes.
pub fn ccc_three_point(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Complex64> {
    check_distinct(&[z1, z2, z3])?;
    Ok((z1 - z2) * (z1 - z3) * (z2 - z3))
}

/// Ghost-number selection rule: a correlator of the bc system can be
/// nonzero only with three more c than b insertions per chirality.
pub fn ghost_selection(b_count: u32, c_count: u32) -> bool {
    c_count as i64 - b_count as i64 == 3
}

/// Two-point prefactor (z1-z2)^{-(h1+h2)} (conj)^{-(hbar1+hbar2)} fixed
/// by global conformal invariance, plus the weight-matching gate that
/// decides whether the constant in front may be nonzero for primaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointAnsatz {
    pub value: Complex64,
    pub weights_match: bool,
}

pub fn two_point_prefactor(
    h1: f64,
    hbar1: f64,
    h2: f64,
    hbar2: f64,
    z1: Complex64,
    z2: Complex64,
) -> Result<TwoPointAnsatz> {
    check_distinct(&[z1, z2])?;
    let z12 = z1 - z2;
    let value = z12.powf(-(h1 + h2)) * z12.conj().powf(-(hbar1 + hbar2));
    Ok(TwoPointAnsatz {
        value,
        weights_match: h1 == h2 && hbar1 == hbar2,
    })
}

/// Prefactor of an n-point function of primaries together with the
/// exponents alpha_ij it used: value = prod (z_ij)^{-2 alpha_ij}
/// (conj z_ij)^{-2 alphabar_ij}.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefactorAnsatz {
    pub value: Complex64,
    pub exponents: Vec<(usize, usize, f64, f64)>,
}

/// n >= 3 point prefactor with
/// alpha_ij = (h_i + h_j - sum_k h_k / (n-1)) / (n-2); any remaining
/// freedom is a function of cross-ratios and is not included.
pub fn npoint_prefactor(
    weights: &[(f64, f64)],
    points: &[Complex64],
) -> Result<PrefactorAnsatz> {
    if weights.len() != points.len() {
        return Err(CftError::InvalidArgument(format!(
            "{} weights for {} points",
            weights.len(),
            points.len()
        )));
    }
    let n = points.len();
    if n < 3 {
        return Err(CftError::InvalidArgument(
            "prefactor ansatz needs at least three points".into(),
        ));
    }
    check_distinct(points)?;
    let h_sum: f64 = weights.iter().map(|w| w.0).sum();
    let hbar_sum: f64 = weights.iter().map(|w| w.1).sum();
    let scale = 1.0 / (n as f64 - 2.0);
    let mean = 1.0 / (n as f64 - 1.0);
    let mut value = Complex64::new(1.0, 0.0);
    let mut exponents = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let alpha = scale * (weights[i].0 + weights[j].0 - mean * h_sum);
            let alphabar = scale * (weights[i].1 + weights[j].1 - mean * hbar_sum);
            let z_ij = points[i] - points[j];
            value *= z_ij.powf(-2.0 * alpha) * z_ij.conj().powf(-2.0 * alphabar);
            exponents.push((i, j, alpha, alphabar));
        }
    }
    Ok(PrefactorAnsatz { value, exponents })
}

/// Three-point prefactor; the exponents reduce to
/// alpha_12 = (h1 + h2 - h3)/2 and cyclic.
pub fn three_point_prefactor(
    weights: &[(f64, f64); 3],
    points: &[Complex64; 3],
) -> Result<PrefactorAnsatz> {
    npoint_prefactor(weights, points)
}
