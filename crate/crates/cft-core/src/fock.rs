//! Free-field Fock spaces: the chiral boson with modes [a_n, a_m] = n
//! delta_{n+m,0} and the Majorana fermion with modes {b_n, b_m} =
//! delta_{n+m,0}, together with their Virasoro generators as graded sparse
//! matrices and a commutator-defect checker.
//!
//! Both spaces are truncated at a level cutoff. Matrix entries are exact
//! rationals; the boson zero mode a_0 acts as the rational parameter alpha.
//!
//! Fermion conventions: occupied mode lists are kept sorted ascending and a
//! mode insertion or removal at list position i carries the sign (-1)^i.
//! In the Ramond sector the zero mode satisfies b_0^2 = 1/2; to stay inside
//! rational arithmetic, b_0 maps the state without the zero bit to the state
//! with it (coefficient 1) and back (coefficient 1/2), and zero-bit states
//! carry squared norm 1/2 in the diagonal metric. Hermiticity
//! L_n^dagger = L_{-n} holds with respect to that metric.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CftError, Result};
use crate::partitions;

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Fermion boundary condition on the plane: Neveu-Schwarz (half-integer
/// modes) or Ramond (integer modes, with the h = 1/16 ground state).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Ns,
    R,
}

/// Which free field a Virasoro operator acts on.
#[derive(Debug, Clone, PartialEq)]
pub enum FockModel {
    Boson { alpha: BigRational },
    Fermion { sector: Sector },
}

impl FockModel {
    /// Central charge the Virasoro defect must certify: 1 for the boson,
    /// 1/2 for the fermion.
    pub fn central_charge(&self) -> BigRational {
        match self {
            FockModel::Boson { .. } => BigRational::one(),
            FockModel::Fermion { .. } => BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }
}

/// Bosonic Fock basis up to a level cutoff: states are partitions
/// (descending part lists), one a_{-k} per part, ordered by level then
/// descending-lexicographic part list.
#[derive(Debug, Clone)]
pub struct BosonBasis {
    cutoff: u32,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl BosonBasis {
    pub fn new(cutoff: u32) -> Self {
        let mut states = Vec::new();
        for level in 0..=cutoff {
            states.extend(partitions::enumerate(level));
        }
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        BosonBasis { cutoff, states, index }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn level(&self, i: usize) -> u32 {
        self.states[i].iter().sum()
    }

    pub fn index_of(&self, parts: &[u32]) -> Option<usize> {
        self.index.get(parts).copied()
    }

    /// Squared norm of a basis state: prod(parts) * prod(multiplicities!).
    pub fn norm_sq(&self, i: usize) -> BigRational {
        let mut n = BigInt::one();
        let parts = &self.states[i];
        let mut run = 0u32;
        for (j, &p) in parts.iter().enumerate() {
            n *= BigInt::from(p);
            if j > 0 && parts[j - 1] == p {
                run += 1;
            } else {
                run = 1;
            }
            n *= BigInt::from(run);
        }
        BigRational::from_integer(n)
    }
}

/// Fermionic Fock basis up to a level cutoff. Mode indices are stored
/// doubled so they stay integral: NS modes are odd (1 stands for 1/2, 3 for
/// 3/2, ...), Ramond modes are even with 0 for the zero mode. States are
/// ascending lists of distinct occupied labels, ordered by doubled level
/// then lexicographically.
#[derive(Debug, Clone)]
pub struct FermionBasis {
    sector: Sector,
    cutoff: u32,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FermionBasis {
    pub fn new(sector: Sector, cutoff: u32) -> Self {
        let max_doubled = 2 * cutoff;
        let first = match sector {
            Sector::Ns => 1,
            Sector::R => 0,
        };
        let mut states = Vec::new();
        let mut current = Vec::new();
        // Subsets of distinct labels are ascending chains; the zero label
        // (Ramond zero mode) costs no level.
        fn rec(
            label: u32,
            remaining: u32,
            current: &mut Vec<u32>,
            states: &mut Vec<Vec<u32>>,
        ) {
            states.push(current.clone());
            let mut l = label;
            while l <= remaining {
                current.push(l);
                rec(l + 2, remaining - l, current, states);
                current.pop();
                l += 2;
            }
        }
        rec(first, max_doubled, &mut current, &mut states);
        states.sort_by(|a, b| {
            let la: u32 = a.iter().sum();
            let lb: u32 = b.iter().sum();
            la.cmp(&lb).then_with(|| a.cmp(b))
        });
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        FermionBasis { sector, cutoff, states, index }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    /// Twice the level (so it stays an integer in the NS sector).
    pub fn doubled_level(&self, i: usize) -> u32 {
        self.states[i].iter().sum()
    }

    pub fn index_of(&self, labels: &[u32]) -> Option<usize> {
        self.index.get(labels).copied()
    }

    /// Squared norm: 1/2 when the Ramond zero mode is occupied, else 1.
    pub fn norm_sq(&self, i: usize) -> BigRational {
        if self.states[i].first() == Some(&0) {
            BigRational::new(BigInt::one(), BigInt::from(2))
        } else {
            BigRational::one()
        }
    }
}

/// A sparse operator between levels of a Fock basis, stored as
/// (row, column) -> exact coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSparseOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl GradedSparseOperator {
    pub fn zero(dim: usize) -> Self {
        GradedSparseOperator { dim, entries: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim).map(|i| ((i, i), BigRational::one())).collect();
        GradedSparseOperator { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> BigRational {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.entries.iter()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn insert(&mut self, row: usize, col: usize, value: BigRational) {
        if value.is_zero() {
            return;
        }
        let e = self.entries.entry((row, col)).or_insert_with(BigRational::zero);
        *e += value;
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.insert(i, j, v.clone());
        }
        out
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.clone() * factor;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Operator composition self . other (other acts first).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut by_col: HashMap<usize, Vec<(usize, &BigRational)>> = HashMap::new();
        for (&(i, k), v) in &self.entries {
            by_col.entry(k).or_default().push((i, v));
        }
        let mut out = Self::zero(self.dim);
        for (&(k, j), b) in &other.entries {
            if let Some(rows) = by_col.get(&k) {
                for &(i, a) in rows {
                    out.insert(i, j, a * b);
                }
            }
        }
        out
    }

    /// Largest absolute entry, used in defect diagnostics.
    pub fn max_abs(&self) -> Option<BigRational> {
        self.entries.values().map(|v| v.abs()).max()
    }

    /// Keeps only the columns the predicate accepts.
    pub fn restrict_columns<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(i, j), v) in &self.entries {
            if keep(j) {
                out.insert(i, j, v.clone());
            }
        }
        out
    }
}

/// Single boson mode a_k as an operator on the level-truncated basis:
/// a_{-k} prepends a part, a_k (k > 0) contracts against each matching
/// part with coefficient k * multiplicity, and a_0 multiplies by alpha.
/// Matrix elements whose target level exceeds the cutoff are dropped.
pub fn boson_mode(k: i64, alpha: &BigRational, cutoff: u32) -> Result<GradedSparseOperator> {
    check_mode(k, cutoff)?;
    let basis = BosonBasis::new(cutoff);
    let mut op = GradedSparseOperator::zero(basis.dim());
    for j in 0..basis.dim() {
        for (coeff, parts) in apply_boson_mode(k, basis.state(j), alpha) {
            if let Some(i) = basis.index_of(&parts) {
                op.insert(i, j, coeff);
            }
        }
    }
    Ok(op)
}

fn check_mode(n: i64, cutoff: u32) -> Result<()> {
    if n.unsigned_abs() > cutoff as u64 {
        return Err(CftError::InsufficientCutoff(format!(
            "mode {n} cannot act inside a level-{cutoff} truncation"
        )));
    }
    Ok(())
}

/// a_k on a single partition state; at most one resulting term.
fn apply_boson_mode(
    k: i64,
    parts: &[u32],
    alpha: &BigRational,
) -> Vec<(BigRational, Vec<u32>)> {
    match k.cmp(&0) {
        std::cmp::Ordering::Equal => vec![(alpha.clone(), parts.to_vec())],
        std::cmp::Ordering::Less => {
            let p = (-k) as u32;
            let mut out = Vec::with_capacity(parts.len() + 1);
            let pos = parts.iter().position(|&x| x < p).unwrap_or(parts.len());
            out.extend_from_slice(&parts[..pos]);
            out.push(p);
            out.extend_from_slice(&parts[pos..]);
            vec![(BigRational::one(), out)]
        }
        std::cmp::Ordering::Greater => {
            let p = k as u32;
            let mult = parts.iter().filter(|&&x| x == p).count();
            if mult == 0 {
                return Vec::new();
            }
            let mut out = parts.to_vec();
            let pos = out.iter().position(|&x| x == p).unwrap();
            out.remove(pos);
            vec![(rat_int(k * mult as i64), out)]
        }
    }
}

/// Virasoro generator L_n = (1/2) sum_k :a_k a_{n-k}: on the boson Fock
/// space with zero mode alpha, as a graded sparse operator. Matrix elements
/// that would leave the truncation are dropped, so rows and columns within
/// level cutoff - |n| are exact.
pub fn boson_virasoro(n: i64, alpha: &BigRational, cutoff: u32) -> Result<GradedSparseOperator> {
    check_mode(n, cutoff)?;
    let basis = BosonBasis::new(cutoff);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut op = GradedSparseOperator::zero(basis.dim());
    let c = cutoff as i64;
    for j in 0..basis.dim() {
        let level = basis.level(j) as i64;
        let target = level - n;
        if !(0..=c).contains(&target) {
            continue;
        }
        for k in (n - c).max(-c)..=c.min(n + c) {
            // Normal ordering: the annihilator half of the pair acts first.
            let (first, second) = (k.max(n - k), k.min(n - k));
            for (c1, parts1) in apply_boson_mode(first, basis.state(j), alpha) {
                for (c2, parts2) in apply_boson_mode(second, &parts1, alpha) {
                    if let Some(i) = basis.index_of(&parts2) {
                        op.insert(i, j, &half * &c1 * c2);
                    }
                }
            }
        }
    }
    Ok(op)
}

/// Single fermion mode b_{dm/2} (the index is passed doubled: odd for NS,
/// even for Ramond). Insertion/removal at sorted position i carries
/// (-1)^i; the Ramond zero mode creates its bit with coefficient 1 and
/// annihilates it with coefficient 1/2.
pub fn fermion_mode(dm: i64, sector: Sector, cutoff: u32) -> Result<GradedSparseOperator> {
    check_doubled_mode(dm, sector, cutoff)?;
    let basis = FermionBasis::new(sector, cutoff);
    let mut op = GradedSparseOperator::zero(basis.dim());
    for j in 0..basis.dim() {
        if let Some((coeff, labels)) = apply_fermion_mode(dm, basis.state(j)) {
            if let Some(i) = basis.index_of(&labels) {
                op.insert(i, j, coeff);
            }
        }
    }
    Ok(op)
}

fn check_doubled_mode(dm: i64, sector: Sector, cutoff: u32) -> Result<()> {
    let parity_ok = match sector {
        Sector::Ns => dm.rem_euclid(2) == 1,
        Sector::R => dm.rem_euclid(2) == 0,
    };
    if !parity_ok {
        return Err(CftError::InvalidArgument(format!(
            "doubled mode index {dm} has the wrong parity for the {sector:?} sector"
        )));
    }
    if dm.unsigned_abs() > 2 * cutoff as u64 {
        return Err(CftError::InsufficientCutoff(format!(
            "fermion mode {dm}/2 cannot act inside a level-{cutoff} truncation"
        )));
    }
    Ok(())
}

fn apply_fermion_mode(dm: i64, labels: &[u32]) -> Option<(BigRational, Vec<u32>)> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if dm == 0 {
        // Ramond zero mode: bit 0 always sits at position 0, sign +1.
        let mut out = labels.to_vec();
        if labels.first() == Some(&0) {
            out.remove(0);
            return Some((half, out));
        }
        out.insert(0, 0);
        return Some((BigRational::one(), out));
    }
    let label = dm.unsigned_abs() as u32;
    let pos = labels.partition_point(|&x| x < label);
    let sign = if pos % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let mut out = labels.to_vec();
    if dm < 0 {
        if labels.get(pos) == Some(&label) {
            return None;
        }
        out.insert(pos, label);
        Some((sign, out))
    } else {
        if labels.get(pos) != Some(&label) {
            return None;
        }
        out.remove(pos);
        Some((sign, out))
    }
}

/// Virasoro generator on the fermion Fock space,
/// L_n = sum_m (m/2 + 1/4) :b_{n-m} b_m:  (+ 1/16 on L_0 in the Ramond
/// sector), with m running over the sector's mode set.
pub fn fermion_virasoro(n: i64, sector: Sector, cutoff: u32) -> Result<GradedSparseOperator> {
    check_mode(n, cutoff)?;
    let basis = FermionBasis::new(sector, cutoff);
    let mut op = GradedSparseOperator::zero(basis.dim());
    let dc = 2 * cutoff as i64;
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    // Doubled mode indices dm with the sector parity; |dm| and |2n - dm|
    // beyond the doubled cutoff cannot connect two retained states.
    let start = match sector {
        Sector::Ns => 1 - dc,
        Sector::R => -dc,
    };
    for j in 0..basis.dim() {
        let level = basis.doubled_level(j) as i64;
        let target = level - 2 * n;
        if !(0..=dc).contains(&target) {
            continue;
        }
        let mut dm = start;
        while dm <= dc + 2 * n.abs() {
            let dleft = 2 * n - dm;
            // coefficient m/2 + 1/4 = (dm + 1)/4
            let coeff = (rat_int(dm) + BigRational::one()) * &quarter;
            if coeff.is_zero() || (dm == 0 && dleft == 0) {
                dm += 2;
                continue;
            }
            // :b_{n-m} b_m: ; swap (with sign) when the right factor
            // creates and the left annihilates.
            let (first, second, sign) = if dm < 0 && dleft > 0 {
                (dleft, dm, -BigRational::one())
            } else {
                (dm, dleft, BigRational::one())
            };
            if let Some((c1, l1)) = apply_fermion_mode(first, basis.state(j)) {
                if let Some((c2, l2)) = apply_fermion_mode(second, &l1) {
                    if let Some(i) = basis.index_of(&l2) {
                        op.insert(i, j, &coeff * &sign * c1 * c2);
                    }
                }
            }
            dm += 2;
        }
    }
    if n == 0 && sector == Sector::R {
        let sixteenth = BigRational::new(BigInt::one(), BigInt::from(16));
        op = op.add(&GradedSparseOperator::identity(basis.dim()).scale(&sixteenth));
    }
    Ok(op)
}

/// Number of states the truncated commutator is exact on: both orders of
/// L_n L_m stay inside the cutoff for sources at level
/// <= cutoff - |n| - |m|.
fn defect_safe_level(n: i64, m: i64, cutoff: u32) -> Result<u32> {
    let needed = n.unsigned_abs() + m.unsigned_abs();
    if needed > cutoff as u64 {
        return Err(CftError::InsufficientCutoff(format!(
            "checking [L_{n}, L_{m}] needs cutoff >= {needed}, got {cutoff}"
        )));
    }
    Ok(cutoff - needed as u32)
}

/// The commutator defect
/// [L_n, L_m] - (n - m) L_{n+m} - delta_{n+m,0} (c/12)(n^3 - n)
/// restricted to source states at level <= cutoff - |n| - |m|, where the
/// truncation is exact. A correct realisation returns the zero operator;
/// anything nonzero is reported entry by entry.
pub fn virasoro_defect(
    n: i64,
    m: i64,
    model: &FockModel,
    cutoff: u32,
) -> Result<GradedSparseOperator> {
    let safe = defect_safe_level(n, m, cutoff)?;
    let (ln, lm, lnm, dim, col_ok): (
        GradedSparseOperator,
        GradedSparseOperator,
        GradedSparseOperator,
        usize,
        Box<dyn Fn(usize) -> bool>,
    ) = match model {
        FockModel::Boson { alpha } => {
            let basis = BosonBasis::new(cutoff);
            let levels: Vec<u32> = (0..basis.dim()).map(|i| basis.level(i)).collect();
            (
                boson_virasoro(n, alpha, cutoff)?,
                boson_virasoro(m, alpha, cutoff)?,
                boson_virasoro(n + m, alpha, cutoff)?,
                basis.dim(),
                Box::new(move |j| levels[j] <= safe),
            )
        }
        FockModel::Fermion { sector } => {
            let basis = FermionBasis::new(*sector, cutoff);
            let levels: Vec<u32> = (0..basis.dim()).map(|i| basis.doubled_level(i)).collect();
            (
                fermion_virasoro(n, *sector, cutoff)?,
                fermion_virasoro(m, *sector, cutoff)?,
                fermion_virasoro(n + m, *sector, cutoff)?,
                basis.dim(),
                Box::new(move |j| levels[j] <= 2 * safe),
            )
        }
    };
    let mut defect = ln.mul(&lm).sub(&lm.mul(&ln)).sub(&lnm.scale(&rat_int(n - m)));
    if n + m == 0 {
        let central =
            model.central_charge() / rat_int(12) * rat_int(n * n * n - n);
        defect = defect.sub(&GradedSparseOperator::identity(dim).scale(&central));
    }
    Ok(defect.restrict_columns(col_ok))
}

/// Weights of the charge-(e, m) primary of the compactified boson at
/// radius r: chiral momenta alpha = e/r + m r/2, alphabar = e/r - m r/2,
/// h = alpha^2/2, hbar = alphabar^2/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudovacuumWeights {
    pub h: f64,
    pub hbar: f64,
    /// h + hbar = (e/r)^2 + (m r / 2)^2.
    pub energy: f64,
    /// h - hbar = e m, always an integer.
    pub momentum: i64,
}

pub fn pseudovacuum_weights(e: i64, m: i64, r: f64) -> Result<PseudovacuumWeights> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(CftError::InvalidArgument(format!(
            "compactification radius must be positive and finite, got {r}"
        )));
    }
    let alpha = e as f64 / r + m as f64 * r / 2.0;
    let alphabar = e as f64 / r - m as f64 * r / 2.0;
    let h = alpha * alpha / 2.0;
    let hbar = alphabar * alphabar / 2.0;
    let momentum = e.checked_mul(m).ok_or_else(|| {
        CftError::InvalidArgument(format!("e*m overflows for e = {e}, m = {m}"))
    })?;
    Ok(PseudovacuumWeights { h, hbar, energy: h + hbar, momentum })
}
