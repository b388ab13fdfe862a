//! Exhaustive verification of shift-invariance (SI), pairwise SI and
//! throughput-invariance (TI), plus numeric checkers for the structural
//! identities relating θ-profiles, their changes, and TI.
//!
//! Every search pins the first member's shift to 0: shifting all members by
//! the same amount only relabels slots, so a tuple of size `m` needs
//! `L^(m-1)` configurations. Searches are bounded by a [`Budget`] of slot
//! evaluations and fail loudly when it would be exceeded.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::{
    hamming_reduced, normalize_shift, reference, success_counts, theta_profile, validate_tuple, BinarySequence,
    SequenceSet, ShiftAssignment,
};
use crate::throughput::binomial;
use crate::Rational;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Maximum number of slot evaluations one verdict may spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    fn admit(&self, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::BudgetExceeded { needed, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Property {
    #[serde(rename = "SI")]
    Si,
    #[serde(rename = "PAIRWISE_SI")]
    PairwiseSi,
    #[serde(rename = "TI")]
    Ti,
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Property::Si => "SI",
            Property::PairwiseSi => "PAIRWISE_SI",
            Property::Ti => "TI",
        })
    }
}

/// Two shift configurations that disagree.
///
/// For SI/pairwise SI the shifts are per tuple member and the values are
/// Hamming cross-correlations. For TI the shifts cover all K users, `tuple`
/// names the single user whose throughput moved, and the values are `L·R_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub reference_shifts: ShiftAssignment,
    pub other_shifts: ShiftAssignment,
    pub reference_value: u64,
    pub other_value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub configurations_checked: u64,
    /// MPR capability, TI only.
    pub gamma: Option<usize>,
    /// Invariant per-user throughput when a TI verdict holds.
    #[serde(skip)]
    pub throughput: Option<Vec<Rational>>,
}

impl PropertyVerdict {
    /// Re-evaluates the witness from scratch and reports whether it still
    /// exhibits the claimed discrepancy. A holding verdict has nothing to
    /// re-check and returns `true`.
    pub fn witness_is_sound(&self, set: &SequenceSet) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(self.holds);
        };
        let (a, b) = match self.property {
            Property::Si | Property::PairwiseSi => {
                let a = reference::hamming(set, &w.tuple, &as_i64(w.reference_shifts.shifts()));
                let b = reference::hamming(set, &w.tuple, &as_i64(w.other_shifts.shifts()));
                (a, b)
            }
            Property::Ti => {
                let gamma = self
                    .gamma
                    .ok_or_else(|| Error::Precondition("TI verdict without gamma".into()))?;
                let user = w.tuple[0];
                let a = reference::success_counts(set, &as_i64(w.reference_shifts.shifts()), gamma);
                let b = reference::success_counts(set, &as_i64(w.other_shifts.shifts()), gamma);
                (a[user], b[user])
            }
        };
        Ok(!self.holds && a == w.reference_value && b == w.other_value && a != b)
    }
}

fn as_i64(shifts: &[usize]) -> Vec<i64> {
    shifts.iter().map(|&s| s as i64).collect()
}

/// `base^exp`, saturating.
fn sat_pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Shift vector of length `m` for configuration `idx`: first shift 0, the
/// rest in lexicographic order with the last member varying fastest.
fn decode_config(mut idx: u64, m: usize, period: usize, out: &mut [usize]) {
    out[0] = 0;
    for j in (1..m).rev() {
        out[j] = (idx % period as u64) as usize;
        idx /= period as u64;
    }
}

fn check_gamma(gamma: usize, k: usize) -> Result<()> {
    if gamma == 0 || gamma >= k {
        return Err(Error::GammaOutOfRange { gamma, k });
    }
    Ok(())
}

/// All tuples of the given sizes, ordered by size then lexicographically.
fn tuples_of_sizes(k: usize, sizes: impl Iterator<Item = usize>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for m in sizes {
        if m == 0 || m > k {
            continue;
        }
        let mut combo: Vec<usize> = (0..m).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..m).rev().find(|&i| combo[i] < k - m + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..m {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Searches the `L^(m-1)` shift classes of one tuple for a configuration
/// whose correlation differs from the all-zero one. Returns the first
/// (lexicographically smallest) disagreement and the configuration count.
fn scan_tuple(set: &SequenceSet, tuple: &[usize]) -> (Option<Witness>, u64) {
    let m = tuple.len();
    let l = set.period();
    let configs = sat_pow(l as u128, m - 1) as u64;
    let zero = vec![0usize; m];
    let reference = hamming_reduced(set, tuple, &zero);
    let hit = (0..configs).into_par_iter().find_first(|&idx| {
        let mut shifts = vec![0usize; m];
        decode_config(idx, m, l, &mut shifts);
        hamming_reduced(set, tuple, &shifts) != reference
    });
    match hit {
        None => (None, configs),
        Some(idx) => {
            let mut shifts = vec![0usize; m];
            decode_config(idx, m, l, &mut shifts);
            let other_value = hamming_reduced(set, tuple, &shifts);
            (
                Some(Witness {
                    tuple: tuple.to_vec(),
                    reference_shifts: ShiftAssignment::from_reduced(zero),
                    other_shifts: ShiftAssignment::from_reduced(shifts),
                    reference_value: reference,
                    other_value,
                }),
                idx + 1,
            )
        }
    }
}

fn correlation_verdict(
    set: &SequenceSet,
    property: Property,
    sizes: Vec<usize>,
    budget: Budget,
) -> Result<PropertyVerdict> {
    let k = set.len();
    let l = set.period() as u128;
    let needed = sizes.iter().filter(|&&m| m <= k).fold(0u128, |acc, &m| {
        let tuples = binomial(k as u64, m as u64);
        acc.saturating_add(tuples.saturating_mul(sat_pow(l, m)))
    });
    budget.admit(needed)?;
    let mut checked = 0u64;
    for tuple in &tuples_of_sizes(k, sizes.into_iter()) {
        let (witness, n) = scan_tuple(set, tuple);
        checked += n;
        if witness.is_some() {
            return Ok(PropertyVerdict {
                property,
                holds: false,
                witness,
                configurations_checked: checked,
                gamma: None,
                throughput: None,
            });
        }
    }
    Ok(PropertyVerdict {
        property,
        holds: true,
        witness: None,
        configurations_checked: checked,
        gamma: None,
        throughput: None,
    })
}

/// Whether every generalized Hamming cross-correlation of `set` is
/// independent of the relative shifts.
pub fn is_si(set: &SequenceSet, budget: Budget) -> Result<PropertyVerdict> {
    correlation_verdict(set, Property::Si, (1..=set.len()).collect(), budget)
}

/// SI restricted to pairs. Holds vacuously for a single sequence.
pub fn is_pairwise_si(set: &SequenceSet, budget: Budget) -> Result<PropertyVerdict> {
    correlation_verdict(set, Property::PairwiseSi, vec![2], budget)
}

/// Whether every user's throughput under MPR capability `gamma` is the same
/// for all `L^(K-1)` shift classes.
///
/// A holding verdict with every throughput positive is cross-checked against
/// pairwise SI, which TI then implies; a disagreement is reported as
/// [`Error::TheoremViolation`].
pub fn is_ti(set: &SequenceSet, gamma: usize, budget: Budget) -> Result<PropertyVerdict> {
    let k = set.len();
    check_gamma(gamma, k)?;
    let l = set.period();
    let configs_wide = sat_pow(l as u128, k - 1);
    budget.admit(configs_wide.saturating_mul(l as u128))?;
    let configs = configs_wide as u64;

    let zero = vec![0usize; k];
    let reference = success_counts(set, &zero, gamma);
    let hit = (0..configs).into_par_iter().find_first(|&idx| {
        let mut shifts = vec![0usize; k];
        decode_config(idx, k, l, &mut shifts);
        success_counts(set, &shifts, gamma) != reference
    });

    if let Some(idx) = hit {
        let mut shifts = vec![0usize; k];
        decode_config(idx, k, l, &mut shifts);
        let other = success_counts(set, &shifts, gamma);
        let user = (0..k)
            .find(|&i| other[i] != reference[i])
            .expect("configurations differ");
        return Ok(PropertyVerdict {
            property: Property::Ti,
            holds: false,
            witness: Some(Witness {
                tuple: vec![user],
                reference_shifts: ShiftAssignment::from_reduced(zero),
                other_shifts: ShiftAssignment::from_reduced(shifts),
                reference_value: reference[user],
                other_value: other[user],
            }),
            configurations_checked: idx + 1,
            gamma: Some(gamma),
            throughput: None,
        });
    }

    // The implication needs every user to have positive throughput; with a
    // starved user, e.g. rows 100/100/000 at gamma = 2, it fails.
    if reference.iter().all(|&c| c > 0) {
        let pairwise = is_pairwise_si(set, budget)?;
        if !pairwise.holds {
            return Err(Error::TheoremViolation(format!(
                "set is TI for gamma = {gamma} but not pairwise SI: {:?}",
                pairwise.witness
            )));
        }
    }

    Ok(PropertyVerdict {
        property: Property::Ti,
        holds: true,
        witness: None,
        configurations_checked: configs,
        gamma: Some(gamma),
        throughput: Some(reference.iter().map(|&c| Rational::new(c as i64, l as i64)).collect()),
    })
}

/// Per-user throughput `R_i` for one shift assignment: the fraction of slots
/// in which user `i` transmits and at most `gamma - 1` others do.
pub fn throughput_at(set: &SequenceSet, shifts: &ShiftAssignment, gamma: usize) -> Result<Vec<Rational>> {
    check_gamma(gamma, set.len())?;
    if shifts.len() != set.len() {
        return Err(Error::DimensionMismatch {
            expected: set.len(),
            found: shifts.len(),
        });
    }
    let l = set.period() as i64;
    let reduced: Vec<usize> = shifts.shifts().iter().map(|&s| s % set.period()).collect();
    Ok(success_counts(set, &reduced, gamma)
        .into_iter()
        .map(|c| Rational::new(c as i64, l))
        .collect())
}

/// True iff the set has at most `gamma - 1` all-one sequences, which every
/// TI set with positive throughputs must satisfy.
pub fn allone_constraint(set: &SequenceSet, gamma: usize) -> bool {
    let all_ones = set.sequences().iter().filter(|s| s.is_all_ones()).count();
    all_ones < gamma
}

/// Change of a tuple's θ-profile when its shifts move from one assignment to
/// another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaRecord {
    pub tuple: Vec<usize>,
    pub from_shifts: Vec<i64>,
    pub to_shifts: Vec<i64>,
    /// δ_0 … δ_M.
    pub deltas: Vec<i64>,
}

impl DeltaRecord {
    pub fn order(&self) -> usize {
        self.tuple.len()
    }

    /// Σ δ_j and Σ j·δ_j; both are zero for every record.
    pub fn conservation(&self) -> (i64, i64) {
        let total = self.deltas.iter().sum();
        let weighted = self.deltas.iter().enumerate().map(|(j, &d)| j as i64 * d).sum();
        (total, weighted)
    }

    /// `δ_i = (-1)^(M-i) C(M,i) δ_M` for `i = 1 … M-1`.
    pub fn satisfies_lemma_identity(&self) -> bool {
        let m = self.order();
        let top = self.deltas[m] as i128;
        (1..m).all(|i| {
            let sign = if (m - i).is_multiple_of(2) { 1 } else { -1 };
            self.deltas[i] as i128 == sign * binomial(m as u64, i as u64) as i128 * top
        })
    }
}

pub fn delta_record(set: &SequenceSet, tuple: &[usize], from_shifts: &[i64], to_shifts: &[i64]) -> Result<DeltaRecord> {
    validate_tuple(tuple, set.len())?;
    if tuple.len() < 2 {
        return Err(Error::Precondition("δ-records need a tuple of size >= 2".into()));
    }
    let before = theta_profile(set, tuple, from_shifts)?;
    let after = theta_profile(set, tuple, to_shifts)?;
    let deltas = after
        .counts()
        .iter()
        .zip(before.counts())
        .map(|(&a, &b)| a as i64 - b as i64)
        .collect();
    Ok(DeltaRecord {
        tuple: tuple.to_vec(),
        from_shifts: from_shifts.to_vec(),
        to_shifts: to_shifts.to_vec(),
        deltas,
    })
}

/// Verifies that every `(len - 1)`-subset of `users` is SI, or explains why
/// not.
fn require_subsets_si(set: &SequenceSet, users: &[usize], budget: Budget) -> Result<()> {
    let m = users.len();
    for skip in 0..m {
        let sub: Vec<usize> = users
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &u)| u)
            .collect();
        let verdict = is_si(&set.subset(&sub)?, budget)?;
        if !verdict.holds {
            return Err(Error::Precondition(format!("subset {sub:?} is not SI")));
        }
    }
    Ok(())
}

/// Checks `δ_i = (-1)^(M-i) C(M,i) δ_M` for a tuple whose `(M-1)`-subsets
/// are all SI. An unverifiable precondition is an error, not `false`.
pub fn check_lemma_delta(
    set: &SequenceSet,
    tuple: &[usize],
    from_shifts: &[i64],
    to_shifts: &[i64],
    budget: Budget,
) -> Result<bool> {
    let record = delta_record(set, tuple, from_shifts, to_shifts)?;
    require_subsets_si(set, tuple, budget)?;
    Ok(record.satisfies_lemma_identity())
}

/// `δ_M(τ→τ'; head) · Σ_{i=1}^{M-1} (-1)^(M-i) C(M-2, i-1) θ_{γ-i}(tail)`
/// where the head is users `0..head_size` and the tail the remaining ones
/// at `tail_shifts`. No preconditions are checked.
pub fn lemma_theta_expression(
    set: &SequenceSet,
    head_size: usize,
    gamma: usize,
    from_shifts: &[i64],
    to_shifts: &[i64],
    tail_shifts: &[i64],
) -> Result<i128> {
    let k = set.len();
    if head_size < 2 || head_size >= k {
        return Err(Error::Precondition(format!(
            "head size must satisfy 2 <= M < K = {k}, got {head_size}"
        )));
    }
    let head: Vec<usize> = (0..head_size).collect();
    let tail: Vec<usize> = (head_size..k).collect();
    let delta = delta_record(set, &head, from_shifts, to_shifts)?;
    let theta = theta_profile(set, &tail, tail_shifts)?;
    let m = head_size as i64;
    let mut sum = 0i128;
    for i in 1..m {
        let sign = if (m - i) % 2 == 0 { 1 } else { -1 };
        // θ_j is zero outside 0..=K-M, covering γ < i and γ - i > K - M
        let th = theta.get(gamma as i64 - i) as i128;
        sum += sign * binomial((m - 2) as u64, (i - 1) as u64) as i128 * th;
    }
    Ok(delta.deltas[head_size] as i128 * sum)
}

/// Evaluates [`lemma_theta_expression`] after verifying that `set` is TI
/// with capability `gamma` and that every `(M-1)`-subset of the head is SI.
/// Returns whether the expression vanishes.
pub fn check_lemma_theta(
    set: &SequenceSet,
    head_size: usize,
    gamma: usize,
    from_shifts: &[i64],
    to_shifts: &[i64],
    tail_shifts: &[i64],
    budget: Budget,
) -> Result<bool> {
    let value = lemma_theta_expression(set, head_size, gamma, from_shifts, to_shifts, tail_shifts)?;
    let ti = is_ti(set, gamma, budget)?;
    if !ti.holds {
        return Err(Error::Precondition(format!("set is not TI for gamma = {gamma}")));
    }
    let head: Vec<usize> = (0..head_size).collect();
    require_subsets_si(set, &head, budget)?;
    Ok(value == 0)
}

/// Tail factor of the θ identity once the tail's θ-profile is averaged over
/// its shifts for a common duty factor `f`:
/// `Σ_{i=1}^{M-1} (-1)^(M-i) C(M-2,i-1) C(K-M,γ-i) f^(γ-i) (1-f)^(K-M-γ+i)`.
pub fn lemma_theta_symmetric_factor<T: Scalar>(k: usize, head_size: usize, gamma: usize, f: &T) -> T {
    let m = head_size as i64;
    let tail = (k - head_size) as i64;
    let g = gamma as i64;
    let mut acc = T::zero();
    for i in 1..m {
        let j = g - i;
        if j < 0 || j > tail {
            continue;
        }
        let coeff = binomial((m - 2) as u64, (i - 1) as u64) * binomial(tail as u64, j as u64);
        let term = T::from_count(coeff as u64)
            * Scalar::pow(f, j as usize)
            * Scalar::pow(&(T::one() - f.clone()), (tail - j) as usize);
        if (m - i) % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

/// Independent SI check: SI holds iff every configuration count
/// `N(b_1,…,b_K)` is constant over the shift classes. Uses the bit-list
/// reference kernel.
pub fn is_si_by_patterns(set: &SequenceSet, budget: Budget) -> Result<bool> {
    let k = set.len();
    let l = set.period();
    let configs = sat_pow(l as u128, k - 1);
    budget.admit(configs.saturating_mul(1u128 << k.min(100)).saturating_mul(l as u128))?;
    let patterns: Vec<Vec<bool>> = (0..1u64 << k)
        .map(|p| (0..k).map(|j| p >> j & 1 == 1).collect())
        .collect();
    let zero = vec![0i64; k];
    let reference: Vec<u64> = patterns
        .iter()
        .map(|p| reference::count_config(set, &zero, p))
        .collect();
    let mut shifts = vec![0usize; k];
    for idx in 0..configs as u64 {
        decode_config(idx, k, l, &mut shifts);
        let s = as_i64(&shifts);
        for (p, &r) in patterns.iter().zip(&reference) {
            if reference::count_config(set, &s, p) != r {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which TI ⇒ SI structural result covers a given `(K, γ, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuralCase {
    /// γ = 1, no side conditions.
    SingleReception,
    /// γ = K - 1, no side conditions.
    AllButOne,
    /// γ = 2, common `f = n/d ∉ {0,1}`, `gcd(K-2, d) = 1`.
    GammaTwo,
    /// γ = K - 2, same side conditions as [`StructuralCase::GammaTwo`].
    AllButTwo,
    /// γ = 3, common `f = n/d ∉ {0,1}`, `K-3` prime, `gcd((K-2)/2, d) = 1`.
    GammaThree,
    /// γ = K - 3, same side conditions as [`StructuralCase::GammaThree`].
    AllButThree,
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The structural case whose hypotheses hold, if any. `common_duty` is the
/// duty factor shared by all users, when there is one.
pub fn applicable_case(k: usize, gamma: usize, common_duty: Option<Rational>) -> Option<StructuralCase> {
    if gamma == 0 || gamma >= k {
        return None;
    }
    if gamma == 1 {
        return Some(StructuralCase::SingleReception);
    }
    if gamma == k - 1 {
        return Some(StructuralCase::AllButOne);
    }
    let f = common_duty?;
    if *f.numer() == 0 || f == Rational::from_integer(1) {
        return None;
    }
    let d = *f.denom() as usize;
    let two_ok = k >= 3 && (k - 2).gcd(&d) == 1;
    if gamma == 2 && two_ok {
        return Some(StructuralCase::GammaTwo);
    }
    if gamma + 2 == k && two_ok {
        return Some(StructuralCase::AllButTwo);
    }
    let three_ok = k >= 4 && is_prime(k - 3) && (k - 2).is_multiple_of(2) && ((k - 2) / 2).gcd(&d) == 1;
    if gamma == 3 && three_ok {
        return Some(StructuralCase::GammaThree);
    }
    if gamma + 3 == k && three_ok {
        return Some(StructuralCase::AllButThree);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub gamma: usize,
    pub ti: bool,
    /// Always true for a TI set; `None` when not TI.
    pub pairwise_si: Option<bool>,
    pub case: Option<StructuralCase>,
    /// Verified SI status when a case applied.
    pub si: Option<bool>,
    pub note: String,
}

/// If `set` is TI for `gamma` and a structural case applies, verifies that the
/// set is SI. A TI set covered by a case that turns out not to be SI is an
/// [`Error::TheoremViolation`]. Without hypotheses nothing is concluded.
pub fn structural_conclusion(set: &SequenceSet, gamma: usize, budget: Budget) -> Result<StructuralReport> {
    let k = set.len();
    check_gamma(gamma, k)?;
    let ti = is_ti(set, gamma, budget)?;
    if !ti.holds {
        return Ok(StructuralReport {
            gamma,
            ti: false,
            pairwise_si: None,
            case: None,
            si: None,
            note: "not TI: theorem not applicable".into(),
        });
    }
    let common = {
        let f = set.duty_factors();
        f.iter().all(|x| *x == f[0]).then_some(f[0])
    };
    let Some(case) = applicable_case(k, gamma, common) else {
        return Ok(StructuralReport {
            gamma,
            ti: true,
            pairwise_si: Some(true),
            case: None,
            si: None,
            note: "hypotheses not met: theorem not applicable".into(),
        });
    };
    let si = is_si(set, budget)?;
    if !si.holds {
        return Err(Error::TheoremViolation(format!(
            "TI set under {case:?} is not SI: {:?}",
            si.witness
        )));
    }
    Ok(StructuralReport {
        gamma,
        ti: true,
        pairwise_si: Some(true),
        case: Some(case),
        si: Some(true),
        note: "TI implies SI confirmed".into(),
    })
}

/// Result of the seeded random search for triples that are pairwise SI but
/// not SI.
#[derive(Debug, Clone)]
pub struct TripleSearch {
    pub seed: u64,
    pub candidates: u64,
    pub pairwise_si: u64,
    pub hits: Vec<SequenceSet>,
}

/// Draws `candidates` random triples with periods in `2..=max_period` (each
/// sequence with its own random density) and keeps those that are pairwise
/// SI but not SI. Finding none proves nothing about existence.
pub fn search_pairwise_si_not_si(seed: u64, candidates: u64, max_period: usize) -> TripleSearch {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut hits = Vec::new();
    let mut pairwise = 0;
    let budget = Budget::default();
    for _ in 0..candidates {
        let l = rng.gen_range(2..=max_period.max(2));
        let rows: Vec<BinarySequence> = (0..3)
            .map(|_| {
                let ones = rng.gen_range(1..l);
                let mut bits = vec![false; l];
                for i in rand::seq::index::sample(&mut rng, l, ones) {
                    bits[i] = true;
                }
                BinarySequence::from_bits(bits).expect("non-empty")
            })
            .collect();
        // cheap necessary condition: constant pair correlations are l·f_a·f_b
        let ones: Vec<usize> = rows.iter().map(|r| r.ones()).collect();
        if [(0, 1), (0, 2), (1, 2)]
            .iter()
            .any(|&(a, b)| !(ones[a] * ones[b]).is_multiple_of(l))
        {
            continue;
        }
        let set = SequenceSet::new(rows).expect("equal periods");
        if !is_pairwise_si(&set, budget).map(|v| v.holds).unwrap_or(false) {
            continue;
        }
        pairwise += 1;
        if !is_si(&set, budget).map(|v| v.holds).unwrap_or(true) {
            hits.push(set);
        }
    }
    TripleSearch {
        seed,
        candidates,
        pairwise_si: pairwise,
        hits,
    }
}

/// Reduces a user-supplied shift list against the set's period.
pub fn shifts_for(set: &SequenceSet, shifts: &[i64]) -> ShiftAssignment {
    ShiftAssignment::from_reduced(shifts.iter().map(|&s| normalize_shift(s, set.period())).collect())
}
