//! Verma modules over the Virasoro algebra with exact rational arithmetic.
//!
//! The commutation relations are
//! [L_n, L_m] = (n - m) L_{n+m} + delta_{n,-m} (c/12)(n^3 - n),
//! acting on the Verma module V_{c,h} spanned by descendants
//! L_{-n_1} L_{-n_2} ... |h> with n_1 >= n_2 >= ... >= 1. The inner product
//! is fixed by L_n^dagger = L_{-n} and <h|h> = 1.
//!
//! Everything here is exact: coefficients are `BigRational`, determinants
//! and ranks come from fraction-free elimination, and the Kac determinant
//! is checked against the Gram matrix it factorises.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CftError, Result};
use crate::exact_linalg;
use crate::partitions;
use crate::qseries::{partition_count, partition_series, FractionalQSeries};

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Central charge and highest weight of a Verma module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirasoroParams {
    pub c: BigRational,
    pub h: BigRational,
}

impl VirasoroParams {
    pub fn new(c: BigRational, h: BigRational) -> Self {
        VirasoroParams { c, h }
    }
}

/// A descendant label L_{-parts[0]} L_{-parts[1]} ... |h>, with parts
/// descending, so the level is the sum of the parts.
///
/// Ordering: by level first, then descending lexicographic order of the
/// part lists, which makes the level-3 basis read
/// L(-3), L(-2)L(-1), L(-1)^3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descendant {
    parts: Vec<u32>,
}

impl Descendant {
    /// Builds a descendant from arbitrary positive parts (sorted internally).
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "descendant parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Descendant { parts }
    }

    pub fn highest_weight() -> Self {
        Descendant { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn level(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl PartialOrd for Descendant {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Descendant {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl fmt::Display for Descendant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "|h>");
        }
        for p in &self.parts {
            write!(f, "L(-{p})")?;
        }
        write!(f, "|h>")
    }
}

/// The level-N descendant basis in the crate's canonical order.
pub fn descendant_basis(level: u32) -> Vec<Descendant> {
    partitions::enumerate(level)
        .into_iter()
        .map(|parts| Descendant { parts })
        .collect()
}

/// A vector in a fixed level of a Verma module, as an exact linear
/// combination of descendants.
#[derive(Debug, Clone, PartialEq)]
pub struct VermaVector {
    params: VirasoroParams,
    level: u32,
    coeffs: BTreeMap<Descendant, BigRational>,
}

impl VermaVector {
    pub fn zero(params: VirasoroParams, level: u32) -> Self {
        VermaVector { params, level, coeffs: BTreeMap::new() }
    }

    /// The highest-weight vector |h> itself.
    pub fn highest_weight(params: VirasoroParams) -> Self {
        Self::basis_state(params, Descendant::highest_weight())
    }

    /// A single descendant with coefficient 1.
    pub fn basis_state(params: VirasoroParams, d: Descendant) -> Self {
        let level = d.level();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(d, BigRational::one());
        VermaVector { params, level, coeffs }
    }

    pub fn from_coeffs<I>(params: VirasoroParams, level: u32, entries: I) -> Self
    where
        I: IntoIterator<Item = (Descendant, BigRational)>,
    {
        let mut v = Self::zero(params, level);
        for (d, c) in entries {
            assert_eq!(d.level(), level, "descendant {d} is not at level {level}");
            if !c.is_zero() {
                let entry = v.coeffs.entry(d).or_insert_with(BigRational::zero);
                *entry += c;
            }
        }
        v.coeffs.retain(|_, c| !c.is_zero());
        v
    }

    pub fn params(&self) -> &VirasoroParams {
        &self.params
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, d: &Descendant) -> BigRational {
        self.coeffs.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Descendant, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.params, other.params);
        assert!(
            self.is_zero() || other.is_zero() || self.level == other.level,
            "cannot add vectors at levels {} and {}",
            self.level,
            other.level
        );
        let mut v = self.clone();
        if v.is_zero() {
            v.level = other.level;
        }
        for (d, c) in &other.coeffs {
            let entry = v.coeffs.entry(d.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        v.coeffs.retain(|_, c| !c.is_zero());
        v
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.params.clone(), self.level);
        }
        let mut v = self.clone();
        for c in v.coeffs.values_mut() {
            *c = c.clone() * factor;
        }
        v
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Rescales so the first basis coefficient (in canonical order) is 1.
    pub fn normalised(&self) -> Self {
        match self.coeffs.values().next() {
            None => self.clone(),
            Some(lead) => {
                let inv = BigRational::one() / lead.clone();
                self.scale(&inv)
            }
        }
    }
}

/// L_n acting on a level-L vector lands at level L - n; if that is negative
/// the result is the zero vector (every term dies against the
/// highest-weight state).
#[allow(non_snake_case)]
pub fn apply_L(n: i64, v: &VermaVector) -> VermaVector {
    let target = v.level as i64 - n;
    if target < 0 {
        return VermaVector::zero(v.params.clone(), 0);
    }
    let target = target as u32;
    let mut acc: BTreeMap<Descendant, BigRational> = BTreeMap::new();
    for (d, coef) in &v.coeffs {
        for (c2, parts) in mode_on_parts(n, &d.parts, &v.params.c, &v.params.h) {
            debug_assert_eq!(parts.iter().sum::<u32>(), target);
            let entry = acc.entry(Descendant { parts }).or_insert_with(BigRational::zero);
            *entry += coef * c2;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    VermaVector { params: v.params.clone(), level: target, coeffs: acc }
}

/// Core rewriting step: L_n applied to the monomial L_{-parts[0]}...|h>,
/// returned as a combination of descending-ordered monomials.
///
/// Base cases on |h>: L_n|h> = 0 for n > 0, L_0|h> = h|h>, and L_{-k}|h>
/// starts a new monomial. Otherwise with a = parts[0],
/// L_n L_{-a} = L_{-a} L_n + (n + a) L_{n-a} + delta_{n,a} (c/12)(n^3 - n),
/// recursing on the shorter tail; when n < 0 and -n >= a the monomial is
/// already ordered and L_n is simply prepended.
fn mode_on_parts(
    n: i64,
    parts: &[u32],
    c: &BigRational,
    h: &BigRational,
) -> Vec<(BigRational, Vec<u32>)> {
    if parts.is_empty() {
        return match n.cmp(&0) {
            std::cmp::Ordering::Greater => Vec::new(),
            std::cmp::Ordering::Equal => vec![(h.clone(), Vec::new())],
            std::cmp::Ordering::Less => vec![(BigRational::one(), vec![(-n) as u32])],
        };
    }
    let a = parts[0] as i64;
    let rest = &parts[1..];
    if n < 0 && -n >= a {
        let mut out = Vec::with_capacity(parts.len() + 1);
        out.push((-n) as u32);
        out.extend_from_slice(parts);
        return vec![(BigRational::one(), out)];
    }
    let mut out = Vec::new();
    // L_{-a} (L_n rest)
    for (coef, ps) in mode_on_parts(n, rest, c, h) {
        for (c2, ps2) in mode_on_parts(-a, &ps, c, h) {
            out.push((&coef * c2, ps2));
        }
    }
    // (n + a) L_{n-a} rest
    if n + a != 0 {
        for (coef, ps) in mode_on_parts(n - a, rest, c, h) {
            out.push((coef * rat_int(n + a), ps));
        }
    }
    // central term
    if n == a {
        let central = c / rat_int(12) * rat_int(n * n * n - n);
        if !central.is_zero() {
            out.push((central, rest.to_vec()));
        }
    }
    out
}

/// Gram matrix of the level-N descendant basis, G_ij = <basis_i, basis_j>,
/// with the inner product fixed by L_n^dagger = L_{-n} and <h|h> = 1.
pub fn gram_matrix(c: &BigRational, h: &BigRational, level: u32) -> Vec<Vec<BigRational>> {
    let params = VirasoroParams::new(c.clone(), h.clone());
    let basis = descendant_basis(level);
    let empty = Descendant::highest_weight();
    let mut g = vec![vec![BigRational::zero(); basis.len()]; basis.len()];
    for (j, ket) in basis.iter().enumerate() {
        let v = VermaVector::basis_state(params.clone(), ket.clone());
        for (i, bra) in basis.iter().enumerate() {
            // <L_{-m_1}...L_{-m_k} h | v> = <h| L_{m_k}...L_{m_1} v> read
            // right to left, so the first adjoint mode to act is m_1.
            let mut w = v.clone();
            for &p in bra.parts.iter() {
                w = apply_L(p as i64, &w);
            }
            g[i][j] = w.coefficient(&empty);
        }
    }
    g
}

/// Central charge of the degenerate family at parameter m:
/// c = 1 - 6 / (m (m + 1)). Poles at m = 0 and m = -1 are rejected.
pub fn central_charge_from_m(m: &BigRational) -> Result<BigRational> {
    if m.is_zero() || *m == -BigRational::one() {
        return Err(CftError::DegenerateParameter(format!(
            "c(m) has a pole at m = {m}"
        )));
    }
    Ok(BigRational::one() - rat_int(6) / (m * (m + BigRational::one())))
}

/// Degenerate weight h_{p,q}(m) = (((m+1) p - m q)^2 - 1) / (4 m (m+1)).
pub fn kac_weight(m: &BigRational, p: u32, q: u32) -> Result<BigRational> {
    if m.is_zero() || *m == -BigRational::one() {
        return Err(CftError::DegenerateParameter(format!(
            "h_pq(m) has a pole at m = {m}"
        )));
    }
    if p == 0 || q == 0 {
        return Err(CftError::InvalidLabel("Kac labels start at p = q = 1".into()));
    }
    let mp1 = m + BigRational::one();
    let lin = &mp1 * rat_int(p as i64) - m * rat_int(q as i64);
    Ok((&lin * &lin - BigRational::one()) / (rat_int(4) * m * &mp1))
}

/// The m -> infinity (c = 1) limit of the degenerate weights:
/// h_{p,q} = (p - q)^2 / 4.
pub fn kac_weight_c_one(p: u32, q: u32) -> BigRational {
    let d = p as i64 - q as i64;
    BigRational::new(BigInt::from(d * d), BigInt::from(4))
}

/// Inverts c = 1 - 6/(m(m+1)) on the branch that maps the unitary series
/// into m >= 2: m = -1/2 + (1/2) sqrt((25 - c)/(1 - c)). Float convenience;
/// rejects arguments where the radicand is negative (1 < c < 25).
pub fn m_from_central_charge(c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(CftError::InvalidArgument(format!("c = {c} is not finite")));
    }
    let radicand = (25.0 - c) / (1.0 - c);
    if c == 1.0 || radicand < 0.0 {
        return Err(CftError::DegenerateParameter(format!(
            "m(c) is not real at c = {c}"
        )));
    }
    Ok(-0.5 + 0.5 * radicand.sqrt())
}

/// Closed form for the level-N Kac determinant of the Gram matrix,
/// parametrised by m (so c = 1 - 6/(m(m+1))):
///
/// det G_N = alpha_N prod_{p,q >= 1, pq <= N} (h - h_{p,q}(m))^{P(N - pq)}
///
/// with the h-independent constant
/// alpha_N = prod_{pq <= N} ((2p)^q q!)^{P(N-pq) - P(N-p(q+1))}.
pub fn kac_determinant_closed(m: &BigRational, h: &BigRational, level: u32) -> Result<BigRational> {
    if m.is_zero() || *m == -BigRational::one() {
        return Err(CftError::DegenerateParameter(format!(
            "Kac determinant parametrisation has a pole at m = {m}"
        )));
    }
    let n = level;
    let mut det = alpha_n(n);
    for p in 1..=n {
        for q in 1..=n / p {
            let hpq = kac_weight(m, p, q)?;
            let mult = partition_count(n - p * q)
                .to_u32()
                .expect("partition count fits in u32 at these levels");
            let factor = h - hpq;
            for _ in 0..mult {
                det *= &factor;
            }
        }
    }
    Ok(det)
}

fn alpha_n(n: u32) -> BigRational {
    let mut alpha = BigInt::one();
    for p in 1..=n {
        for q in 1..=n / p {
            let mult_high = partition_count(n - p * q);
            let mult_low = if p * (q + 1) <= n {
                partition_count(n - p * (q + 1))
            } else {
                num_bigint::BigUint::zero()
            };
            let exponent = (mult_high - mult_low)
                .to_u32()
                .expect("multiplicity difference fits in u32");
            let mut base = BigInt::from(2 * p).pow(q);
            for k in 2..=q {
                base *= BigInt::from(k);
            }
            alpha *= base.pow(exponent);
        }
    }
    BigRational::from_integer(alpha)
}

/// All singular vectors at the given level: the joint kernel of L_1 and L_2
/// restricted to level N, each normalised to leading coefficient 1.
pub fn null_vectors(c: &BigRational, h: &BigRational, level: u32) -> Vec<VermaVector> {
    if level == 0 {
        return Vec::new();
    }
    let params = VirasoroParams::new(c.clone(), h.clone());
    let basis = descendant_basis(level);
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for n in [1i64, 2] {
        if level as i64 - n < 0 {
            continue;
        }
        let target = descendant_basis(level - n as u32);
        let images: Vec<VermaVector> = basis
            .iter()
            .map(|d| apply_L(n, &VermaVector::basis_state(params.clone(), d.clone())))
            .collect();
        for t in &target {
            rows.push(images.iter().map(|img| img.coefficient(t)).collect());
        }
    }
    exact_linalg::kernel_rational(&rows, basis.len())
        .into_iter()
        .map(|x| {
            VermaVector::from_coeffs(
                params.clone(),
                level,
                basis.iter().cloned().zip(x),
            )
        })
        .collect()
}

/// Validates a minimal-model label (P, Q): coprime integers Q > P >= 2.
pub(crate) fn check_minimal(p_mod: u32, q_mod: u32) -> Result<()> {
    if p_mod < 2 || q_mod <= p_mod {
        return Err(CftError::InvalidLabel(format!(
            "minimal model needs Q > P >= 2, got ({p_mod}, {q_mod})"
        )));
    }
    if p_mod.gcd(&q_mod) != 1 {
        return Err(CftError::InvalidLabel(format!(
            "minimal model needs coprime (P, Q), got ({p_mod}, {q_mod})"
        )));
    }
    Ok(())
}

/// Central charge of the minimal model M(P, Q):
/// c = 1 - 6 (Q - P)^2 / (P Q).
pub fn minimal_central_charge(p_mod: u32, q_mod: u32) -> Result<BigRational> {
    check_minimal(p_mod, q_mod)?;
    let diff = rat_int(q_mod as i64 - p_mod as i64);
    Ok(BigRational::one() - rat_int(6) * &diff * &diff / rat_int(p_mod as i64 * q_mod as i64))
}

/// Conformal weight of the Kac-table entry (p, q) of M(P, Q):
/// h_{p,q} = ((Qp - Pq)^2 - (Q - P)^2) / (4 P Q), for 1 <= p < P,
/// 1 <= q < Q.
pub fn minimal_weight(p_mod: u32, q_mod: u32, p: u32, q: u32) -> Result<BigRational> {
    check_minimal(p_mod, q_mod)?;
    if p == 0 || p >= p_mod || q == 0 || q >= q_mod {
        return Err(CftError::InvalidLabel(format!(
            "Kac label ({p}, {q}) outside the table of M({p_mod}, {q_mod})"
        )));
    }
    let num = rat_int(q_mod as i64 * p as i64 - p_mod as i64 * q as i64);
    let diff = rat_int(q_mod as i64 - p_mod as i64);
    Ok((&num * &num - &diff * &diff) / rat_int(4 * p_mod as i64 * q_mod as i64))
}

/// The full Kac table of M(P, Q) as a (P-1) x (Q-1) matrix of weights,
/// h[p-1][q-1] = h_{p,q}.
pub fn kac_table(p_mod: u32, q_mod: u32) -> Result<Vec<Vec<BigRational>>> {
    check_minimal(p_mod, q_mod)?;
    (1..p_mod)
        .map(|p| (1..q_mod).map(|q| minimal_weight(p_mod, q_mod, p, q)).collect())
        .collect()
}

/// Representatives of the Kac-table symmetry (p, q) ~ (P-p, Q-q), one per
/// primary field: the member with smaller p (smaller q on the p tie).
pub fn kac_table_classes(p_mod: u32, q_mod: u32) -> Result<Vec<(u32, u32)>> {
    check_minimal(p_mod, q_mod)?;
    let mut out = Vec::new();
    for p in 1..p_mod {
        for q in 1..q_mod {
            let (rp, rq) = (p_mod - p, q_mod - q);
            let keep = p < rp || (p == rp && q < rq);
            if keep {
                out.push((p, q));
            }
        }
    }
    Ok(out)
}

/// Character of the Verma module V_{c,h}: q^{h - c/24} / prod (1 - q^n),
/// trusted for `levels` levels above the head.
pub fn verma_character(c: &BigRational, h: &BigRational, levels: u32) -> FractionalQSeries {
    let head = h - c / rat_int(24);
    partition_series(levels).shifted(&head)
}

/// The alternating numerator of the irreducible character of the (p, q)
/// entry of M(P, Q), as a q-series with integer exponents relative to the
/// character head:
///
/// sum_{k in Z} ( q^{(a_k^2 - a_0^2)/(4PQ)} - q^{(b_k^2 - a_0^2)/(4PQ)} ),
/// a_k = 2PQk + Qp - Pq, b_k = 2PQk + Qp + Pq.
pub fn character_numerator(
    p_mod: u32,
    q_mod: u32,
    p: u32,
    q: u32,
    levels: u32,
) -> Result<FractionalQSeries> {
    // Validates the labels as a side effect.
    let _ = minimal_weight(p_mod, q_mod, p, q)?;
    let pq = p_mod as i64 * q_mod as i64;
    let two_pq = 2 * pq;
    let a0 = q_mod as i64 * p as i64 - p_mod as i64 * q as i64;
    let b0 = q_mod as i64 * p as i64 + p_mod as i64 * q as i64;
    let order = rat_int(levels as i64);
    let denom = 2 * two_pq; // 4PQ
    let mut terms: Vec<(BigRational, BigRational)> = Vec::new();
    let exponent = |base: i64, k: i64| -> BigRational {
        let x = two_pq * k + base;
        BigRational::new(BigInt::from(x * x - a0 * a0), BigInt::from(denom))
    };
    // Both families obey exponent >= PQ (|k| - 1)^2 - PQ, so every term
    // below the cutoff has |k| <= 1 + sqrt(levels/PQ + 1).
    let kmax = 2 + (((levels as f64) / (pq as f64) + 1.0).sqrt().ceil() as i64);
    for k in -kmax..=kmax {
        for (base, sign) in [(a0, BigRational::one()), (b0, -BigRational::one())] {
            let e = exponent(base, k);
            debug_assert!(e.is_integer(), "numerator exponents are integers");
            if e < order && !e.is_negative() {
                terms.push((e, sign));
            }
        }
    }
    Ok(FractionalQSeries::from_terms(terms, order))
}

/// Irreducible character of the (p, q) primary of M(P, Q):
/// chi = q^{h - c/24} * numerator * 1/prod(1 - q^n), trusted for `levels`
/// levels above the head exponent h - c/24.
pub fn irreducible_character(
    p_mod: u32,
    q_mod: u32,
    p: u32,
    q: u32,
    levels: u32,
) -> Result<FractionalQSeries> {
    let c = minimal_central_charge(p_mod, q_mod)?;
    let h = minimal_weight(p_mod, q_mod, p, q)?;
    let head = &h - &c / rat_int(24);
    let numerator = character_numerator(p_mod, q_mod, p, q, levels)?;
    Ok(numerator.mul(&partition_series(levels)).shifted(&head))
}

/// Dimension of level N of the irreducible module, read off the character.
pub fn irreducible_level_dimension(
    p_mod: u32,
    q_mod: u32,
    p: u32,
    q: u32,
    level: u32,
) -> Result<BigRational> {
    let chi = irreducible_character(p_mod, q_mod, p, q, level + 1)?;
    let c = minimal_central_charge(p_mod, q_mod)?;
    let h = minimal_weight(p_mod, q_mod, p, q)?;
    let head = &h - &c / rat_int(24);
    Ok(chi.coefficient(&(head + rat_int(level as i64))))
}
