//! Torus partition functions: the compactified free boson (with exact
//! T-duality), the Majorana and Dirac fermions, minimal models, and a
//! modular-invariance residual checker.
//!
//! The boson sum runs over the charge lattice (e, m) with
//! h = (e/r + m r/2)^2 / 2 and hbar = (e/r - m r/2)^2 / 2. The radius
//! enters every exponent through r^2 alone, so it is passed as an exact
//! rational rho = r^2: T-duality r <-> 2/r is then the exact involution
//! rho <-> 4/rho, each lattice exponent e^2/rho + m^2 rho/4 is computed as
//! a rational and rounded once, and the lattice is accumulated in
//! swap-symmetric pair order. IEEE addition is commutative, so the two
//! sums of a dual pair agree bit for bit, not just to rounding.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{CftError, Result};
use crate::qseries::{check_tol, eta_eval, theta_eval, TorusPoint};
use crate::virasoro::{irreducible_character, kac_table_classes, minimal_weight};

fn check_radius_sq(radius_sq: &BigRational) -> Result<()> {
    if !radius_sq.is_positive() {
        return Err(CftError::InvalidArgument(format!(
            "squared radius must be positive, got {radius_sq}"
        )));
    }
    Ok(())
}

/// One lattice term of the boson sum, exp(2 pi i (tau h - taubar hbar)):
/// the modulus is exp(-2 pi y (e^2/rho + m^2 rho/4)) with the exponent
/// computed exactly in rho, and the phase is exp(2 pi i x e m).
fn lattice_term(e: i64, m: i64, rho: &BigRational, x: f64, y: f64) -> Complex64 {
    let e2 = BigRational::from_integer(BigInt::from(e * e));
    let m2 = BigRational::from_integer(BigInt::from(m * m));
    let four = BigRational::from_integer(BigInt::from(4));
    let a = (&e2 / rho + &m2 * rho / &four)
        .to_f64()
        .expect("lattice exponent fits in f64");
    let modulus = (-std::f64::consts::TAU * y * a).exp();
    let phase = std::f64::consts::TAU * x * (e * m) as f64;
    Complex64::from_polar(modulus, phase)
}

/// The (e, m) cells of the square shell max(|e|, |m|) = s, each exactly
/// once, in a fixed order independent of the radius.
fn shell_cells(s: i64) -> Vec<(i64, i64)> {
    if s == 0 {
        return vec![(0, 0)];
    }
    let mut cells = Vec::with_capacity(8 * s as usize);
    for m in -s..=s {
        cells.push((s, m));
        cells.push((-s, m));
    }
    for e in (-s + 1)..s {
        cells.push((e, s));
        cells.push((e, -s));
    }
    cells
}

/// Partition function of the free boson compactified at radius
/// r = sqrt(rho):
///
/// Z = (1/|eta|^2) sum_{(e,m)} q^{h(e,m)} qbar^{hbar(e,m)}
///
/// summed over square shells until two consecutive shells are below the
/// tolerance. Swapped pairs (e,m)/(m,e) are added together before joining
/// the running sum, which makes Z(tau, rho) and Z(tau, 4/rho) bitwise
/// equal at matched cutoff.
pub fn z_boson(tau: &TorusPoint, radius_sq: &BigRational, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    check_radius_sq(radius_sq)?;
    let x = tau.tau().re;
    let y = tau.tau().im;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut quiet = 0u32;
    let mut shell = 0i64;
    loop {
        let mut shell_sup = 0.0f64;
        for (e, m) in shell_cells(shell) {
            match e.cmp(&m) {
                std::cmp::Ordering::Greater => continue,
                std::cmp::Ordering::Equal => {
                    let t = lattice_term(e, m, radius_sq, x, y);
                    shell_sup = shell_sup.max(t.norm());
                    sum += t;
                }
                std::cmp::Ordering::Less => {
                    let t1 = lattice_term(e, m, radius_sq, x, y);
                    let t2 = lattice_term(m, e, radius_sq, x, y);
                    shell_sup = shell_sup.max(t1.norm()).max(t2.norm());
                    sum += t1 + t2;
                }
            }
        }
        let cells = (8 * shell).max(1) as f64 + 4.0;
        if shell > 0 && cells * shell_sup < 1e-3 * tol * sum.norm().max(1.0) {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        shell += 1;
        if shell > 20_000 {
            return Err(CftError::Unconverged(format!(
                "boson lattice sum at tau = {}, rho = {radius_sq} did not settle",
                tau.tau()
            )));
        }
    }
    let eta = eta_eval(tau, (tol * 1e-3).min(1e-10))?;
    Ok(sum.re / eta.norm_sqr())
}

/// Convenience wrapper taking the radius itself; the square is formed
/// exactly from the binary value of r.
pub fn z_boson_radius(tau: &TorusPoint, r: f64, tol: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(CftError::InvalidArgument(format!(
            "radius must be positive and finite, got {r}"
        )));
    }
    let exact = BigRational::from_float(r).expect("finite float is rational");
    z_boson(tau, &(&exact * &exact), tol)
}

/// The same partition function after Poisson resummation of the electric
/// sum, which converges fast at large radius:
///
/// Z = (1/|eta|^2) * r/sqrt(2 y) * sum_{(p,m)}
///     exp(-(pi/2) rho [ (p + m x)^2 / y + m^2 y ]),
///
/// with x = Re tau, y = Im tau. Agrees with [`z_boson`] to the tolerance.
pub fn z_boson_poisson(tau: &TorusPoint, radius_sq: &BigRational, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    check_radius_sq(radius_sq)?;
    let x = tau.tau().re;
    let y = tau.tau().im;
    let rho = radius_sq.to_f64().expect("radius fits in f64");
    let r = rho.sqrt();
    let mut sum = 0.0f64;
    let mut quiet = 0u32;
    let mut shell = 0i64;
    loop {
        let mut shell_sup = 0.0f64;
        for (p, m) in shell_cells(shell) {
            let u = p as f64 + m as f64 * x;
            let t = (-std::f64::consts::FRAC_PI_2 * rho * (u * u / y + (m * m) as f64 * y))
                .exp();
            shell_sup = shell_sup.max(t);
            sum += t;
        }
        let cells = (8 * shell).max(1) as f64 + 4.0;
        if shell > 0 && cells * shell_sup < 1e-3 * tol * sum.abs().max(1.0) {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        shell += 1;
        if shell > 20_000 {
            return Err(CftError::Unconverged(format!(
                "resummed boson sum at tau = {}, rho = {radius_sq} did not settle",
                tau.tau()
            )));
        }
    }
    let eta = eta_eval(tau, (tol * 1e-3).min(1e-10))?;
    Ok(sum * r / (2.0 * y).sqrt() / eta.norm_sqr())
}

/// Majorana fermion partition function, the GSO-summed combination
/// (|theta_3| + |theta_4| + |theta_2|) / (2 |eta|).
pub fn z_majorana(tau: &TorusPoint, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let inner = (tol * 1e-3).min(1e-10);
    let w0 = Complex64::new(0.0, 0.0);
    let t3 = theta_eval(3, w0, tau, inner)?.norm();
    let t4 = theta_eval(4, w0, tau, inner)?.norm();
    let t2 = theta_eval(2, w0, tau, inner)?.norm();
    let eta = eta_eval(tau, inner)?.norm();
    Ok((t3 + t4 + t2) / (2.0 * eta))
}

/// Dirac fermion partition function,
/// (|theta_3|^2 + |theta_4|^2 + |theta_2|^2) / (2 |eta|^2); equals the
/// compactified boson at r = 2.
pub fn z_dirac(tau: &TorusPoint, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let inner = (tol * 1e-3).min(1e-10);
    let w0 = Complex64::new(0.0, 0.0);
    let t3 = theta_eval(3, w0, tau, inner)?.norm_sqr();
    let t4 = theta_eval(4, w0, tau, inner)?.norm_sqr();
    let t2 = theta_eval(2, w0, tau, inner)?.norm_sqr();
    let eta = eta_eval(tau, inner)?.norm_sqr();
    Ok((t3 + t4 + t2) / (2.0 * eta))
}

/// Diagonal minimal-model partition function of M(P, Q):
/// sum over Kac-table classes of |chi_{p,q}(tau)|^2, with each character
/// expanded to `levels` levels. Errors if the truncation cannot reach the
/// tolerance at this tau.
pub fn z_minimal(
    p_mod: u32,
    q_mod: u32,
    tau: &TorusPoint,
    levels: u32,
    tol: f64,
) -> Result<f64> {
    check_tol(tol)?;
    let mut sum = 0.0f64;
    for (p, q) in kac_table_classes(p_mod, q_mod)? {
        let chi = irreducible_character(p_mod, q_mod, p, q, levels)?;
        let value = chi.eval_checked(tau, tol)?;
        sum += value.norm_sqr();
    }
    Ok(sum)
}

/// Conformal weight spectrum entry used by callers printing diagnostics.
pub fn minimal_primary_weights(p_mod: u32, q_mod: u32) -> Result<Vec<(u32, u32, BigRational)>> {
    kac_table_classes(p_mod, q_mod)?
        .into_iter()
        .map(|(p, q)| Ok((p, q, minimal_weight(p_mod, q_mod, p, q)?)))
        .collect()
}

/// How far a partition function is from modular invariance at one point:
/// |Z(tau + 1) - Z(tau)| and |Z(-1/tau) - Z(tau)|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularResiduals {
    pub t_residual: f64,
    pub s_residual: f64,
}

pub fn modular_residuals<F>(z: F, tau: &TorusPoint) -> Result<ModularResiduals>
where
    F: Fn(&TorusPoint) -> Result<f64>,
{
    let base = z(tau)?;
    let t_point = TorusPoint::new(tau.tau() + 1.0)?;
    let s_point = TorusPoint::new(-1.0 / tau.tau())?;
    Ok(ModularResiduals {
        t_residual: (z(&t_point)? - base).abs(),
        s_residual: (z(&s_point)? - base).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rat;

    fn tp(re: f64, im: f64) -> TorusPoint {
        TorusPoint::new(Complex64::new(re, im)).unwrap()
    }

    fn rho_of(r: f64) -> BigRational {
        let e = BigRational::from_float(r).unwrap();
        &e * &e
    }

    #[test]
    fn boson_sum_matches_a_pinned_value() {
        // Direct lattice evaluation at tau = 0.3 + 1.1i, r = 1.7, checked
        // against an independent implementation of the same sum.
        let z = z_boson(&tp(0.3, 1.1), &rho_of(1.7), 1e-12).unwrap();
        assert!((z - 2.126_020_817_195_544).abs() < 1e-11, "z = {z}");
    }

    #[test]
    fn t_duality_is_bitwise_exact() {
        let tau = tp(0.3, 1.1);
        for rho in [rho_of(1.7), rat(2, 1), rat(9, 4), rat(1, 1), rat(9, 1)] {
            let dual = rat(4, 1) / &rho;
            let a = z_boson(&tau, &rho, 1e-12).unwrap();
            let b = z_boson(&tau, &dual, 1e-12).unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "rho = {rho}: {a} vs {b}");
        }
    }

    #[test]
    fn radius_wrapper_squares_exactly() {
        let tau = tp(-0.2, 0.9);
        let a = z_boson_radius(&tau, 1.7, 1e-10).unwrap();
        let b = z_boson(&tau, &rho_of(1.7), 1e-10).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn poisson_resummation_agrees_with_the_direct_sum() {
        for (tau, r) in [(tp(0.3, 1.1), 1.7), (tp(0.0, 0.8), 1.0), (tp(-0.4, 1.2), 3.0)] {
            let rho = rho_of(r);
            let direct = z_boson(&tau, &rho, 1e-12).unwrap();
            let dual = z_boson_poisson(&tau, &rho, 1e-12).unwrap();
            assert!(
                (direct - dual).abs() < 1e-10,
                "r = {r}: direct {direct} vs resummed {dual}"
            );
        }
    }

    #[test]
    fn large_radius_brings_out_the_continuum_density() {
        // Z * sqrt(2 y) |eta|^2 / r -> 1 as r grows.
        for tau in [tp(0.0, 1.5), tp(0.1, 0.9)] {
            let z = z_boson(&tau, &rat(64, 1), 1e-12).unwrap();
            let y = tau.tau().im;
            let eta_sq = eta_eval(&tau, 1e-13).unwrap().norm_sqr();
            let ratio = z * (2.0 * y).sqrt() * eta_sq / 8.0;
            assert!((ratio - 1.0).abs() < 1e-6, "ratio = {ratio}");
        }
    }

    #[test]
    fn boson_is_modular_invariant() {
        let rho = rat(2, 1);
        let res = modular_residuals(|t| z_boson(t, &rho, 1e-12), &tp(0.13, 0.87)).unwrap();
        assert!(res.t_residual < 1e-10, "T residual {}", res.t_residual);
        assert!(res.s_residual < 1e-10, "S residual {}", res.s_residual);
    }

    #[test]
    fn majorana_matches_the_fermion_trace_products() {
        // Independent oracle: the NS/NS-tilde/R traces as explicit infinite
        // products over half-integer and integer modes.
        let tau = tp(0.15, 1.05);
        let q = tau.nome();
        let qb = q.conj();
        let mut ns = Complex64::new(1.0, 0.0);
        let mut ns_tilde = Complex64::new(1.0, 0.0);
        let mut ramond = Complex64::new(1.0, 0.0);
        for n in 1..400 {
            let qh = q.powf(n as f64 - 0.5);
            let qbh = qb.powf(n as f64 - 0.5);
            ns *= (1.0 + qh) * (1.0 + qbh);
            ns_tilde *= (1.0 - qh) * (1.0 - qbh);
            ramond *= (1.0 + q.powi(n)) * (1.0 + qb.powi(n));
        }
        let prefactor = (q * qb).powf(-1.0 / 48.0);
        let r_weight = (q * qb).powf(1.0 / 16.0);
        let oracle = 0.5 * (prefactor * (ns + ns_tilde + 2.0 * r_weight * ramond)).re;
        let z = z_majorana(&tau, 1e-12).unwrap();
        assert!((z - oracle).abs() < 1e-10, "{z} vs oracle {oracle}");
    }

    #[test]
    fn majorana_is_modular_invariant() {
        let res = modular_residuals(|t| z_majorana(t, 1e-12), &tp(0.21, 0.93)).unwrap();
        assert!(res.t_residual < 1e-10, "T residual {}", res.t_residual);
        assert!(res.s_residual < 1e-10, "S residual {}", res.s_residual);
    }

    #[test]
    fn dirac_equals_the_boson_at_radius_two() {
        for tau in [tp(0.1, 0.9), tp(0.0, 1.5), tp(-0.4, 1.2)] {
            let d = z_dirac(&tau, 1e-12).unwrap();
            let b = z_boson(&tau, &rat(4, 1), 1e-12).unwrap();
            assert!((d - b).abs() < 1e-10, "dirac {d} vs boson {b}");
        }
    }

    #[test]
    fn ising_partition_function_equals_the_majorana_one() {
        for tau in [tp(0.1, 0.9), tp(0.0, 1.5), tp(-0.4, 1.2)] {
            let ising = z_minimal(3, 4, &tau, 28, 1e-10).unwrap();
            let fermion = z_majorana(&tau, 1e-12).unwrap();
            assert!((ising - fermion).abs() < 1e-9, "{ising} vs {fermion}");
        }
    }

    #[test]
    fn trivial_minimal_model_has_partition_function_one() {
        let z = z_minimal(2, 3, &tp(0.3, 0.9), 12, 1e-8).unwrap();
        assert_eq!(z, 1.0);
    }

    #[test]
    fn lee_yang_is_modular_invariant() {
        let res =
            modular_residuals(|t| z_minimal(2, 5, t, 26, 1e-9), &tp(0.17, 0.91)).unwrap();
        assert!(res.t_residual < 1e-9, "T residual {}", res.t_residual);
        assert!(res.s_residual < 1e-9, "S residual {}", res.s_residual);
    }

    #[test]
    fn insufficient_truncation_is_reported() {
        let hot = tp(0.0, 0.05);
        assert!(matches!(
            z_minimal(3, 4, &hot, 4, 1e-10),
            Err(CftError::TruncationTooSmall(_))
        ));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let tau = tp(0.0, 1.0);
        assert!(z_boson(&tau, &rat(-1, 1), 1e-10).is_err());
        assert!(z_boson(&tau, &rat(0, 1), 1e-10).is_err());
        assert!(z_boson_radius(&tau, -2.0, 1e-10).is_err());
        assert!(z_boson(&tau, &rat(1, 1), 0.0).is_err());
    }

    #[test]
    fn primary_weights_of_ising() {
        let w = minimal_primary_weights(3, 4).unwrap();
        assert_eq!(
            w,
            vec![
                (1, 1, rat(0, 1)),
                (1, 2, rat(1, 16)),
                (1, 3, rat(1, 2)),
            ]
        );
    }
}
