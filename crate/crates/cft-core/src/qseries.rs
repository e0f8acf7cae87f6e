//! Sparse q-expansions with rational exponents, and the classical modular
//! building blocks: partition numbers, the Euler product, Dedekind eta, and
//! the four Jacobi theta functions.
//!
//! A [`FractionalQSeries`] is a finite sum  sum_e c_e q^e  with exact
//! `BigRational` exponents and coefficients, together with a truncation order
//! O: the series is only trusted below q^O, and every operation propagates
//! the tightest order it can justify. Evaluation sends q = exp(2 pi i tau)
//! for a [`TorusPoint`] tau in the upper half-plane; fractional powers are
//! defined through q^e := exp(2 pi i tau e), which is single-valued.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CftError, Result};

/// A point tau in the open upper half-plane, the modulus of a torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    tau: Complex64,
}

impl TorusPoint {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(CftError::InvalidArgument(format!("tau = {tau} is not finite")));
        }
        if tau.im <= 0.0 {
            return Err(CftError::TauNotInUpperHalfPlane(tau));
        }
        Ok(TorusPoint { tau })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// The nome q = exp(2 pi i tau); |q| < 1 always.
    pub fn nome(&self) -> Complex64 {
        (Complex64::i() * std::f64::consts::TAU * self.tau).exp()
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(CftError::InvalidArgument(format!(
            "tolerance must be a finite positive number, got {tol}"
        )));
    }
    Ok(())
}

/// Sparse q-series with exact rational exponents, trusted below its
/// truncation order.
///
/// Invariants: every stored exponent is strictly below `truncation_order`,
/// and no stored coefficient is zero. Equality is structural (same terms and
/// same truncation order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalQSeries {
    terms: BTreeMap<BigRational, BigRational>,
    truncation_order: BigRational,
}

impl FractionalQSeries {
    /// The zero series, trusted below q^order.
    pub fn zero(truncation_order: BigRational) -> Self {
        FractionalQSeries { terms: BTreeMap::new(), truncation_order }
    }

    /// The constant series 1.
    pub fn one(truncation_order: BigRational) -> Self {
        Self::monomial(BigRational::zero(), BigRational::one(), truncation_order)
    }

    /// The single term c q^e. A term at or above the truncation order is
    /// dropped (the result is indistinguishable from zero at that order).
    pub fn monomial(
        exponent: BigRational,
        coefficient: BigRational,
        truncation_order: BigRational,
    ) -> Self {
        let mut s = Self::zero(truncation_order);
        if !coefficient.is_zero() && exponent < s.truncation_order {
            s.terms.insert(exponent, coefficient);
        }
        s
    }

    pub fn from_terms<I>(terms: I, truncation_order: BigRational) -> Self
    where
        I: IntoIterator<Item = (BigRational, BigRational)>,
    {
        let mut s = Self::zero(truncation_order);
        for (e, c) in terms {
            if e < s.truncation_order && !c.is_zero() {
                let entry = s.terms.entry(e).or_insert_with(BigRational::zero);
                *entry += c;
            }
        }
        s.terms.retain(|_, c| !c.is_zero());
        s
    }

    pub fn truncation_order(&self) -> &BigRational {
        &self.truncation_order
    }

    /// Coefficient of q^e (zero if the exponent is absent).
    pub fn coefficient(&self, exponent: &BigRational) -> BigRational {
        self.terms.get(exponent).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest stored exponent, if any term is present.
    pub fn min_exponent(&self) -> Option<&BigRational> {
        self.terms.keys().next()
    }

    /// Smallest exponent at which this series could have a term we do not
    /// know about; for an empty series that is the truncation order itself.
    fn min_exponent_or_order(&self) -> BigRational {
        self.min_exponent().cloned().unwrap_or_else(|| self.truncation_order.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.truncation_order.clone().min(other.truncation_order.clone());
        let mut s = Self::zero(order);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if *e < s.truncation_order {
                let entry = s.terms.entry(e.clone()).or_insert_with(BigRational::zero);
                *entry += c;
            }
        }
        s.terms.retain(|_, c| !c.is_zero());
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.truncation_order.clone());
        }
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = c.clone() * factor;
        }
        s
    }

    /// Product, with the truncation order of the result chosen as the
    /// tightest bound either factor's unknown tail can pollute:
    /// min(O_a + minexp(b), O_b + minexp(a)).
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.truncation_order.clone() + other.min_exponent_or_order())
            .min(other.truncation_order.clone() + self.min_exponent_or_order());
        let mut s = Self::zero(order);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e < s.truncation_order {
                    let entry = s.terms.entry(e).or_insert_with(BigRational::zero);
                    *entry += ca * cb;
                }
            }
        }
        s.terms.retain(|_, c| !c.is_zero());
        s
    }

    pub fn pow(&self, n: u32) -> Self {
        // The truncation order of the result is driven by mul's rule, so
        // repeated squaring and the naive loop agree; the loop is clearer.
        let mut acc = Self::one(self.truncation_order.clone());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by q^delta exactly: every exponent and the truncation
    /// order shift by delta.
    pub fn shifted(&self, delta: &BigRational) -> Self {
        let mut s = Self::zero(self.truncation_order.clone() + delta);
        for (e, c) in &self.terms {
            s.terms.insert(e + delta, c.clone());
        }
        s
    }

    /// Restricts to terms below new_order; the stored order can only shrink.
    pub fn truncated(&self, new_order: &BigRational) -> Self {
        let order = self.truncation_order.clone().min(new_order.clone());
        let mut s = Self::zero(order);
        for (e, c) in &self.terms {
            if *e < s.truncation_order {
                s.terms.insert(e.clone(), c.clone());
            }
        }
        s
    }

    /// Evaluates at q = exp(2 pi i tau), term by term in ascending exponent
    /// order. Fractional powers mean q^e := exp(2 pi i tau e).
    pub fn eval(&self, tau: &TorusPoint) -> Complex64 {
        let two_pi_i_tau = Complex64::i() * std::f64::consts::TAU * tau.tau();
        let mut sum = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let ef = e.to_f64().expect("exponent representable as f64");
            let cf = c.to_f64().expect("coefficient representable as f64");
            sum += cf * (two_pi_i_tau * ef).exp();
        }
        sum
    }

    /// Like [`eval`](Self::eval), but first checks that the dropped tail can
    /// matter less than tol: |q|^order must not exceed tol.
    pub fn eval_checked(&self, tau: &TorusPoint, tol: f64) -> Result<Complex64> {
        check_tol(tol)?;
        let order = self
            .truncation_order
            .to_f64()
            .expect("truncation order representable as f64");
        let tail = tau.nome().norm().powf(order);
        if tail > tol {
            return Err(CftError::TruncationTooSmall(format!(
                "|q|^order = {tail:.3e} exceeds tol = {tol:.3e} at tau = {}; raise the \
                 truncation order",
                tau.tau()
            )));
        }
        Ok(self.eval(tau))
    }
}

/// Number of partitions of n, computed by the standard coin-change dynamic
/// program (exact for any n, cost O(n^2) big-integer additions).
pub fn partition_count(n: u32) -> BigUint {
    let n = n as usize;
    let mut p = vec![BigUint::zero(); n + 1];
    p[0] = BigUint::one();
    for part in 1..=n {
        for s in part..=n {
            let add = p[s - part].clone();
            p[s] += add;
        }
    }
    p[n].clone()
}

/// Generating function of partition numbers, 1/prod(1-q^n), up to q^order.
pub fn partition_series(order: u32) -> FractionalQSeries {
    let ord = BigRational::from_integer(BigInt::from(order));
    FractionalQSeries::from_terms(
        (0..order).map(|n| {
            (
                BigRational::from_integer(BigInt::from(n)),
                BigRational::from_integer(BigInt::from(partition_count(n))),
            )
        }),
        ord,
    )
}

/// Euler product prod_{n>=1} (1 - q^n), expanded with the pentagonal number
/// theorem: sum_{k in Z} (-1)^k q^{k(3k-1)/2}.
pub fn euler_product(truncation_order: &BigRational) -> FractionalQSeries {
    let mut s = FractionalQSeries::zero(truncation_order.clone());
    let add_term = |k: i64, s: &mut FractionalQSeries| -> bool {
        let g = BigRational::from_integer(BigInt::from(k * (3 * k - 1) / 2));
        if g >= *truncation_order {
            return false;
        }
        let sign = if k.rem_euclid(2) == 0 { BigRational::one() } else { -BigRational::one() };
        let entry = s.terms.entry(g).or_insert_with(BigRational::zero);
        *entry += sign;
        true
    };
    add_term(0, &mut s);
    let mut k = 1i64;
    loop {
        let a = add_term(k, &mut s);
        let b = add_term(-k, &mut s);
        if !a && !b {
            break;
        }
        k += 1;
    }
    s.terms.retain(|_, c| !c.is_zero());
    s
}

/// q-expansion of Dedekind eta, q^{1/24} prod (1 - q^n), up to q^order.
/// The order must exceed 1/24 or there is nothing to represent.
pub fn eta_qexp(truncation_order: &BigRational) -> Result<FractionalQSeries> {
    let shift = BigRational::new(BigInt::one(), BigInt::from(24));
    if *truncation_order <= shift {
        return Err(CftError::TruncationTooSmall(format!(
            "eta starts at q^(1/24); order {truncation_order} keeps no term"
        )));
    }
    let euler = euler_product(&(truncation_order - &shift));
    Ok(euler.shifted(&shift))
}

/// Numeric Dedekind eta at tau, by the product formula with an adaptive
/// cutoff: factors are appended until the dropped tail is below tol.
pub fn eta_eval(tau: &TorusPoint, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    let t = tau.tau();
    let q = tau.nome();
    let aq = q.norm();
    let mut prod = (Complex64::i() * std::f64::consts::TAU * t / 24.0).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut aqn = 1.0f64;
    for _ in 1..=1_000_000u64 {
        qn *= q;
        aqn *= aq;
        prod *= Complex64::new(1.0, 0.0) - qn;
        // The remaining factors differ from 1 by at most about
        // sum_{m>n} |q|^m = |q|^{n+1}/(1-|q|).
        if aqn * aq / (1.0 - aq) < tol {
            return Ok(prod);
        }
    }

    Err(CftError::Unconverged(format!(
        "eta product at tau = {t} did not reach tol = {tol} within 10^6 factors"
    )))
}

fn theta3_raw(w: Complex64, tau: Complex64, tol: f64) -> Result<Complex64> {
    // theta_3(w; tau) = sum_k exp(i pi (tau k^2 + 2 k w)); each term is
    // computed by a single exp so the sum is manifestly single-valued.
    let i_pi = Complex64::i() * std::f64::consts::PI;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut quiet = 0u32;
    for k in 1..=100_000i64 {
        let kf = k as f64;
        let plus = (i_pi * (tau * kf * kf + 2.0 * kf * w)).exp();
        let minus = (i_pi * (tau * kf * kf - 2.0 * kf * w)).exp();
        sum += plus + minus;
        let scale = sum.norm().max(1.0);
        if plus.norm() + minus.norm() < tol * scale {
            // Two consecutive quiet terms guard against a transient dip
            // while |t|^k still fights the Gaussian factor.
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(CftError::Unconverged(format!(
        "theta series at w = {w}, tau = {tau} did not reach tol = {tol} within 10^5 terms"
    )))
}

/// Numeric Jacobi theta function theta_index(w; tau), index in 1..=4, with
/// the conventions
/// theta_3 = sum t^k q^{k^2/2},   theta_4(w) = theta_3(w + 1/2),
/// theta_2(w) = q^{1/8} t^{1/2} theta_3(w + tau/2),
/// theta_1(w) = -i q^{1/8} t^{1/2} theta_3(w + 1/2 + tau/2),
/// where t = exp(2 pi i w), q^{1/8} := exp(i pi tau / 4) and
/// t^{1/2} := exp(i pi w).
pub fn theta_eval(index: u8, w: Complex64, tau: &TorusPoint, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(CftError::InvalidArgument(format!("w = {w} is not finite")));
    }
    let t = tau.tau();
    let i_pi = Complex64::i() * std::f64::consts::PI;
    let half = Complex64::new(0.5, 0.0);
    let prefactor = (i_pi * t / 4.0 + i_pi * w).exp();
    match index {
        1 => Ok(-Complex64::i() * prefactor * theta3_raw(w + half + t / 2.0, t, tol)?),
        2 => Ok(prefactor * theta3_raw(w + t / 2.0, t, tol)?),
        3 => theta3_raw(w, t, tol),
        4 => theta3_raw(w + half, t, tol),
        _ => Err(CftError::InvalidArgument(format!(
            "theta index must be 1, 2, 3 or 4, got {index}"
        ))),
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
