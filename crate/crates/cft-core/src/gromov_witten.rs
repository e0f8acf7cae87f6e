//! Rational curve counts in the plane via the Kontsevich recursion,
//! quantum products and Gromov-Witten potentials for CP^1 and CP^2, and a
//! numeric check of the WDVV associativity equation with explicit
//! truncation bounds.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CftError, Result};

/// Degree-indexed table of the rational curve counts N(d): the number of
/// degree-d rational curves in CP^2 through 3d - 1 generic points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwTable {
    values: Vec<BigInt>,
}

impl GwTable {
    /// Wraps externally supplied counts, e.g. a perturbed table for
    /// sensitivity experiments. [`km_counts`] is the canonical source.
    pub fn from_counts(values: Vec<BigInt>) -> Self {
        GwTable { values }
    }

    pub fn dmax(&self) -> u32 {
        self.values.len() as u32
    }

    /// N(d); panics if d is out of range.
    pub fn count(&self, d: u32) -> &BigInt {
        &self.values[(d - 1) as usize]
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.values
    }
}

/// Kontsevich's recursion, seeded by N(1) = 1:
///
/// N(d) = sum_{k+l=d} N(k) N(l) k^2 l [ l C(3d-4, 3k-2) - k C(3d-4, 3k-1) ]
///
/// in exact big-integer arithmetic.
pub fn km_counts(dmax: u32) -> GwTable {
    let mut values = vec![BigInt::one()];
    for d in 2..=dmax as i64 {
        let mut total = BigInt::zero();
        for k in 1..d {
            let l = d - k;
            let n_k = &values[(k - 1) as usize];
            let n_l = &values[(l - 1) as usize];
            let bracket = BigInt::from(l) * binomial(BigInt::from(3 * d - 4), BigInt::from(3 * k - 2))
                - BigInt::from(k) * binomial(BigInt::from(3 * d - 4), BigInt::from(3 * k - 1));
            total += n_k * n_l * BigInt::from(k * k * l) * bracket;
        }
        values.push(total);
    }
    GwTable { values }
}

/// Cohomology basis classes of CP^1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cp1Class {
    One,
    Omega,
}

/// A combination a q^(i) [1] + b q^(j) [omega] arising from the small
/// quantum product on CP^1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cp1Combination {
    /// Coefficient of [1] as (integer, power of q).
    pub unit: (i64, u32),
    /// Coefficient of [omega] as (integer, power of q).
    pub omega: (i64, u32),
}

/// Small quantum product on H*(CP^1): the classical cup product corrected
/// by the degree-one instanton, m(omega, omega) = q [1].
pub fn quantum_product_cp1(a: Cp1Class, b: Cp1Class) -> Cp1Combination {
    match (a, b) {
        (Cp1Class::One, Cp1Class::One) => Cp1Combination {
            unit: (1, 0),
            omega: (0, 0),
        },
        (Cp1Class::One, Cp1Class::Omega) | (Cp1Class::Omega, Cp1Class::One) => Cp1Combination {
            unit: (0, 0),
            omega: (1, 0),
        },
        (Cp1Class::Omega, Cp1Class::Omega) => Cp1Combination {
            unit: (1, 1),
            omega: (0, 0),
        },
    }
}

/// Gromov-Witten potential of CP^1:
/// t0^2 t1 / 2 + q (e^{t1} - 1 - t1 - t1^2/2).
pub fn gw_potential_cp1(t0: f64, t1: f64, q: f64) -> f64 {
    0.5 * t0 * t0 * t1 + q * (t1.exp() - 1.0 - t1 - 0.5 * t1 * t1)
}

/// Third partial of the CP^1 potential with `orders` = (d/dt0 count,
/// d/dt1 count), in closed form.
pub fn cp1_third_partial(orders: (u32, u32), t1: f64, q: f64) -> Result<f64> {
    match orders {
        (3, 0) => Ok(0.0),
        (2, 1) => Ok(1.0),
        (1, 2) => Ok(0.0),
        (0, 3) => Ok(q * t1.exp()),
        _ => Err(CftError::InvalidArgument(format!(
            "need a third derivative, got orders {orders:?}"
        ))),
    }
}

/// Evaluation point for the CP^2 potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cp2Point {
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
    pub q: f64,
}

/// Gromov-Witten potential of CP^2, truncated at the table's top degree:
///
/// t0^2 t2 / 2 + t0 t1^2 / 2 - q t2^2 / 2
///   + sum_{d=1}^{dmax} N(d) / (3d-1)! q^d t2^{3d-1} e^{d t1}.
pub fn gw_potential_cp2(point: Cp2Point, table: &GwTable) -> f64 {
    let Cp2Point { t0, t1, t2, q } = point;
    let mut value = 0.5 * t0 * t0 * t2 + 0.5 * t0 * t1 * t1 - 0.5 * q * t2 * t2;
    for d in 1..=table.dmax() {
        let mut factorial = 1.0f64;
        for i in 1..=(3 * d - 1) {
            factorial *= i as f64;
        }
        value += table.count(d).to_f64().expect("count fits in f64") / factorial
            * q.powi(d as i32)
            * t2.powi((3 * d - 1) as i32)
            * (d as f64 * t1).exp();
    }
    value
}

/// The quantum tail of one third partial: the degree-d summand of
/// d^{n1} e^{d t1} q^d t2^{3d-1-n2} N(d) / (3d-1-n2)!, zero when the
/// falling factorial of t2-derivatives kills the term.
fn quantum_term(d: u32, n1: u32, n2: u32, point: Cp2Point, count: &BigInt) -> f64 {
    let top = 3 * d - 1;
    if top < n2 {
        return 0.0;
    }
    let remaining = top - n2;
    let mut factorial = 1.0f64;
    for i in 1..=remaining {
        factorial *= i as f64;
    }
    count.to_f64().expect("count fits in f64") / factorial
        * (d as f64).powi(n1 as i32)
        * point.q.powi(d as i32)
        * point.t2.powi(remaining as i32)
        * (d as f64 * point.t1).exp()
}

/// Third partial of the CP^2 potential with `orders` = derivative counts
/// in (t0, t1, t2), each summand differentiated in closed form.
pub fn cp2_third_partial(orders: (u32, u32, u32), point: Cp2Point, table: &GwTable) -> Result<f64> {
    let (n0, n1, n2) = orders;
    if n0 + n1 + n2 != 3 {
        return Err(CftError::InvalidArgument(format!(
            "need a third derivative, got orders {orders:?}"
        )));
    }
    let classical = match orders {
        (2, 0, 1) => 1.0,
        (1, 2, 0) => 1.0,
        _ => 0.0,
    };
    if n0 > 0 {
        return Ok(classical);
    }
    let mut value = classical;
    for d in 1..=table.dmax() {
        value += quantum_term(d, n1, n2, point, table.count(d));
    }
    Ok(value)
}

/// Intersection pairing of CP^2 in the basis (1, omega, omega^2): ones on
/// the antidiagonal, its own inverse.
pub fn cp2_pairing() -> [[i64; 3]; 3] {
    [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
}

/// WDVV associativity residual at one point, for one index quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdvvReport {
    /// LHS - RHS of the associativity equation.
    pub residual: f64,
    /// A-priori bound on the truncation error of the residual, from the
    /// first dropped degree.
    pub truncation_bound: f64,
}

fn third(orders_of: [usize; 3], point: Cp2Point, table: &GwTable) -> Result<f64> {
    let mut counts = (0u32, 0u32, 0u32);
    for i in orders_of {
        match i {
            0 => counts.0 += 1,
            1 => counts.1 += 1,
            2 => counts.2 += 1,
            _ => {
                return Err(CftError::InvalidArgument(format!(
                    "flat index {i} out of range for CP^2"
                )))
            }
        }
    }
    cp2_third_partial(counts, point, table)
}

/// Evaluates sum_c Phi_{abc} Phi_{(2-c)ef} - sum_c Phi_{ebc} Phi_{(2-c)af}
/// with the truncated potential, plus a bound on how much the dropped
/// degrees could move the result.
pub fn wdvv_residual_with_table(
    point: Cp2Point,
    table: &GwTable,
    indices: (usize, usize, usize, usize),
) -> Result<WdvvReport> {
    let (a, b, e, f) = indices;
    let mut residual = 0.0f64;
    let mut product_scale = 0.0f64;
    for c in 0..3 {
        let d = 2 - c;
        let lhs_1 = third([a, b, c], point, table)?;
        let lhs_2 = third([d, e, f], point, table)?;
        let rhs_1 = third([e, b, c], point, table)?;
        let rhs_2 = third([d, a, f], point, table)?;
        residual += lhs_1 * lhs_2 - rhs_1 * rhs_2;
        product_scale = product_scale
            .max(lhs_1.abs())
            .max(lhs_2.abs())
            .max(rhs_1.abs())
            .max(rhs_2.abs());
    }
    // Tail of any third partial, bounded by twice its first dropped term
    // (the terms decay superexponentially at usable points).
    let next = table.dmax() + 1;
    let next_count = km_counts(next);
    let mut tail = 0.0f64;
    for n1 in 0..=3 {
        tail = tail.max(quantum_term(next, n1, 3 - n1, point, next_count.count(next)).abs());
    }
    let delta = 2.0 * tail;
    let truncation_bound = 6.0 * (2.0 * product_scale * delta + delta * delta);
    Ok(WdvvReport {
        residual,
        truncation_bound,
    })
}

/// WDVV residual with the canonical recursion table at `dmax`.
pub fn wdvv_residual(
    point: Cp2Point,
    dmax: u32,
    indices: (usize, usize, usize, usize),
) -> Result<WdvvReport> {
    wdvv_residual_with_table(point, &km_counts(dmax), indices)
}
