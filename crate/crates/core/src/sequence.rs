//! Periodic binary protocol sequences and slot-counting primitives.
//!
//! Bits are packed into `u64` words. Each sequence also keeps a periodic
//! extension of itself so that any cyclic shift can be read one word at a
//! time without materialising the rotated copy. Correlations then reduce to
//! AND + popcount, and θ-profiles to a bit-sliced counter over the tuple.
//!
//! User indices are zero-based throughout the library.

use std::fmt;

use crate::error::{Error, Result};
use crate::Rational;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Reduces any signed shift into `[0, period)`.
pub fn normalize_shift(tau: i64, period: usize) -> usize {
    tau.rem_euclid(period as i64) as usize
}

/// One user's periodic 0/1 schedule.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    period: usize,
    ones: usize,
    words: Vec<u64>,
    // s(0..) repeated far enough that a 64-bit window starting anywhere in
    // [0, period + 64 * words.len()) can be read from two adjacent words.
    extension: Vec<u64>,
}

impl BinarySequence {
    pub fn from_bits<I>(bits: I) -> Result<Self>
    where
        I: IntoIterator<Item = bool>,
    {
        let bits: Vec<bool> = bits.into_iter().collect();
        if bits.is_empty() {
            return Err(Error::EmptySequence);
        }
        let period = bits.len();
        let n_words = words_for(period);
        let mut words = vec![0u64; n_words];
        let mut ones = 0;
        for (t, &b) in bits.iter().enumerate() {
            if b {
                words[t / WORD] |= 1 << (t % WORD);
                ones += 1;
            }
        }
        let ext_bits = period + WORD * (n_words + 2);
        let mut extension = vec![0u64; words_for(ext_bits) + 1];
        for p in 0..ext_bits {
            if bits[p % period] {
                extension[p / WORD] |= 1 << (p % WORD);
            }
        }
        Ok(Self {
            period,
            ones,
            words,
            extension,
        })
    }

    /// Builds a sequence from `0`/`1` bytes (any non-zero byte counts as one).
    pub fn from_u8(bits: &[u8]) -> Result<Self> {
        Self::from_bits(bits.iter().map(|&b| b != 0))
    }

    /// All-ones sequence of the given period.
    pub fn all_ones(period: usize) -> Result<Self> {
        Self::from_bits(std::iter::repeat_n(true, period))
    }

    pub fn all_zeros(period: usize) -> Result<Self> {
        Self::from_bits(std::iter::repeat_n(false, period))
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    pub fn get(&self, t: usize) -> bool {
        let t = t % self.period;
        (self.words[t / WORD] >> (t % WORD)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.period).map(move |t| self.get(t))
    }

    pub fn to_u8(&self) -> Vec<u8> {
        self.bits().map(u8::from).collect()
    }

    pub fn is_all_ones(&self) -> bool {
        self.ones == self.period
    }

    pub fn is_all_zeros(&self) -> bool {
        self.ones == 0
    }

    pub fn duty_factor(&self) -> Rational {
        Rational::new(self.ones as i64, self.period as i64)
    }

    /// The sequence read from offset `tau`: bit `t` of the result is bit
    /// `t + tau (mod L)` of `self`.
    pub fn cyclic_shift(&self, tau: i64) -> Self {
        let tau = normalize_shift(tau, self.period);
        Self::from_bits((0..self.period).map(|t| self.get(t + tau))).expect("period is positive")
    }

    pub(crate) fn word_count(&self) -> usize {
        self.words.len()
    }

    /// Valid-slot mask for word `w`.
    pub(crate) fn tail_mask(&self, w: usize) -> u64 {
        let rem = self.period - w * WORD;
        if rem >= WORD {
            u64::MAX
        } else {
            (1u64 << rem) - 1
        }
    }

    /// Word `w` of the sequence cyclically shifted by `tau` (already reduced
    /// into `[0, L)`). Bits past the period are zero.
    #[inline]
    pub(crate) fn shifted_word(&self, tau: usize, w: usize) -> u64 {
        let start = tau + w * WORD;
        let idx = start / WORD;
        let off = start % WORD;
        let lo = self.extension[idx] >> off;
        let word = if off == 0 {
            lo
        } else {
            lo | (self.extension[idx + 1] << (WORD - off))
        };
        word & self.tail_mask(w)
    }
}

impl fmt::Debug for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySequence(")?;
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// K sequences sharing one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSet {
    sequences: Vec<BinarySequence>,
    period: usize,
}

impl SequenceSet {
    pub fn new(sequences: Vec<BinarySequence>) -> Result<Self> {
        let period = sequences.first().ok_or(Error::EmptySet)?.period();
        for (index, s) in sequences.iter().enumerate() {
            if s.period() != period {
                return Err(Error::PeriodMismatch {
                    index,
                    expected: period,
                    found: s.period(),
                });
            }
        }
        Ok(Self { sequences, period })
    }

    /// Convenience constructor from rows of `0`/`1` bytes.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| BinarySequence::from_u8(r)).collect::<Result<_>>()?)
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn sequences(&self) -> &[BinarySequence] {
        &self.sequences
    }

    pub fn get(&self, i: usize) -> &BinarySequence {
        &self.sequences[i]
    }

    pub fn duty_factors(&self) -> Vec<Rational> {
        self.sequences.iter().map(|s| s.duty_factor()).collect()
    }

    /// The sub-set formed by the given (strictly increasing) user indices.
    pub fn subset(&self, tuple: &[usize]) -> Result<Self> {
        validate_tuple(tuple, self.len())?;
        Self::new(tuple.iter().map(|&i| self.sequences[i].clone()).collect())
    }

    pub(crate) fn word_count(&self) -> usize {
        self.sequences[0].word_count()
    }
}

/// Relative shifts τ₁…τ_K, each reduced into `[0, L)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct ShiftAssignment {
    shifts: Vec<usize>,
}

impl ShiftAssignment {
    pub fn new(shifts: &[i64], period: usize) -> Self {
        Self {
            shifts: shifts.iter().map(|&s| normalize_shift(s, period)).collect(),
        }
    }

    pub fn zeros(k: usize) -> Self {
        Self { shifts: vec![0; k] }
    }

    /// Wraps shifts already known to lie in `[0, period)`.
    pub(crate) fn from_reduced(shifts: Vec<usize>) -> Self {
        Self { shifts }
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }
}

/// Slot histogram by number of simultaneous ones among a tuple's members:
/// `counts[j]` = θ_j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThetaProfile {
    counts: Vec<u64>,
}

impl ThetaProfile {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Tuple size M; the profile has M + 1 entries.
    pub fn order(&self) -> usize {
        self.counts.len() - 1
    }

    /// θ_j, zero outside `0..=M`.
    pub fn get(&self, j: i64) -> u64 {
        if j < 0 {
            0
        } else {
            self.counts.get(j as usize).copied().unwrap_or(0)
        }
    }

    /// θ_{≤j}.
    pub fn at_most(&self, j: i64) -> u64 {
        if j < 0 {
            return 0;
        }
        self.counts.iter().take(j as usize + 1).sum()
    }

    /// θ_{≥j}.
    pub fn at_least(&self, j: i64) -> u64 {
        let start = j.max(0) as usize;
        self.counts.iter().skip(start).sum()
    }

    /// Σ_j θ_j, always the period.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Σ_j j·θ_j, the number of ones across the tuple.
    pub fn weighted_total(&self) -> u64 {
        self.counts.iter().enumerate().map(|(j, &c)| j as u64 * c).sum()
    }

    /// θ_M, the generalized Hamming cross-correlation.
    pub fn hamming(&self) -> u64 {
        *self.counts.last().expect("profile is non-empty")
    }
}

pub(crate) fn validate_tuple(tuple: &[usize], k: usize) -> Result<()> {
    if tuple.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let increasing = tuple.windows(2).all(|w| w[0] < w[1]);
    if !increasing || tuple[tuple.len() - 1] >= k {
        return Err(Error::InvalidTuple {
            tuple: tuple.to_vec(),
            k,
        });
    }
    Ok(())
}

/// Bit-sliced per-slot counter: plane `b` holds bit `b` of each slot's count.
#[derive(Debug, Clone)]
pub(crate) struct SliceCounter {
    planes: [u64; 8],
    used: usize,
}

impl SliceCounter {
    pub(crate) fn new() -> Self {
        Self {
            planes: [0; 8],
            used: 0,
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, word: u64) {
        let mut carry = word;
        for plane in self.planes.iter_mut().take(self.used) {
            let sum = *plane ^ carry;
            carry &= *plane;
            *plane = sum;
            if carry == 0 {
                return;
            }
        }
        if carry != 0 {
            assert!(self.used < self.planes.len(), "counter supports < 256 members");
            self.planes[self.used] = carry;
            self.used += 1;
        }
    }

    /// Slots whose count equals `j`, restricted to `valid`.
    #[inline]
    pub(crate) fn equal(&self, j: usize, valid: u64) -> u64 {
        if self.used < usize::BITS as usize && j >> self.used != 0 {
            return 0;
        }
        let mut mask = valid;
        for (b, &plane) in self.planes.iter().take(self.used).enumerate() {
            mask &= if (j >> b) & 1 == 1 { plane } else { !plane };
        }
        mask
    }

    /// Slots whose count is at most `j`, restricted to `valid`.
    #[inline]
    pub(crate) fn at_most(&self, j: usize, valid: u64) -> u64 {
        // count <= j  <=>  not (count > j); compare from the top plane down.
        let mut greater = 0u64;
        let mut equal = valid;
        for b in (0..self.used).rev() {
            let plane = self.planes[b];
            if (j >> b) & 1 == 1 {
                equal &= plane;
            } else {
                greater |= equal & plane;
                equal &= !plane;
            }
        }
        if self.used < usize::BITS as usize && j >> self.used != 0 {
            return valid;
        }
        valid & !greater
    }
}

fn check_shift_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Fraction of ones in `seq`, in lowest terms.
pub fn duty_factor(seq: &BinarySequence) -> Rational {
    seq.duty_factor()
}

/// `seq` read from offset `tau` (reduced mod L, negative allowed).
pub fn cyclic_shift(seq: &BinarySequence, tau: i64) -> BinarySequence {
    seq.cyclic_shift(tau)
}

/// N(b₁,…,b_K | shifted set): slots where every user `j` shows bit `b_j`.
pub fn count_config(set: &SequenceSet, shifts: &ShiftAssignment, pattern: &[bool]) -> Result<u64> {
    check_shift_len(set.len(), shifts.len())?;
    check_shift_len(set.len(), pattern.len())?;
    let mut total = 0u64;
    for w in 0..set.word_count() {
        let valid = set.get(0).tail_mask(w);
        let mut acc = valid;
        for ((seq, &tau), &b) in set.sequences().iter().zip(shifts.shifts()).zip(pattern) {
            let word = seq.shifted_word(tau, w);
            acc &= if b { word } else { !word };
        }
        total += acc.count_ones() as u64;
    }
    Ok(total)
}

/// Generalized Hamming cross-correlation H(τ; A) of the users in `tuple`
/// with per-member shifts `shifts`.
pub fn hamming_cross_correlation(set: &SequenceSet, tuple: &[usize], shifts: &[i64]) -> Result<u64> {
    validate_tuple(tuple, set.len())?;
    check_shift_len(tuple.len(), shifts.len())?;
    let reduced: Vec<usize> = shifts.iter().map(|&s| normalize_shift(s, set.period())).collect();
    Ok(hamming_reduced(set, tuple, &reduced))
}

pub(crate) fn hamming_reduced(set: &SequenceSet, tuple: &[usize], shifts: &[usize]) -> u64 {
    let mut total = 0u64;
    for w in 0..set.word_count() {
        let mut acc = u64::MAX;
        for (&i, &tau) in tuple.iter().zip(shifts) {
            acc &= set.get(i).shifted_word(tau, w);
            if acc == 0 {
                break;
            }
        }
        total += acc.count_ones() as u64;
    }
    total
}

/// θ-profile of `tuple` under the given per-member shifts.
pub fn theta_profile(set: &SequenceSet, tuple: &[usize], shifts: &[i64]) -> Result<ThetaProfile> {
    validate_tuple(tuple, set.len())?;
    check_shift_len(tuple.len(), shifts.len())?;
    let reduced: Vec<usize> = shifts.iter().map(|&s| normalize_shift(s, set.period())).collect();
    Ok(theta_reduced(set, tuple, &reduced))
}

pub(crate) fn theta_reduced(set: &SequenceSet, tuple: &[usize], shifts: &[usize]) -> ThetaProfile {
    let m = tuple.len();
    let mut counts = vec![0u64; m + 1];
    for w in 0..set.word_count() {
        let valid = set.get(0).tail_mask(w);
        let mut counter = SliceCounter::new();
        for (&i, &tau) in tuple.iter().zip(shifts) {
            counter.add(set.get(i).shifted_word(tau, w));
        }
        for (j, c) in counts.iter_mut().enumerate() {
            *c += counter.equal(j, valid).count_ones() as u64;
        }
    }
    ThetaProfile { counts }
}

/// Per-user success counts L·R_i: slots where user `i` fires and at most
/// `gamma` users fire in total. No range check on `gamma`.
pub(crate) fn success_counts(set: &SequenceSet, shifts: &[usize], gamma: usize) -> Vec<u64> {
    let mut out = vec![0u64; set.len()];
    let mut fired = vec![0u64; set.len()];
    for w in 0..set.word_count() {
        let valid = set.get(0).tail_mask(w);
        let mut counter = SliceCounter::new();
        for ((seq, &tau), slot) in set.sequences().iter().zip(shifts).zip(fired.iter_mut()) {
            *slot = seq.shifted_word(tau, w);
            counter.add(*slot);
        }
        let ok = counter.at_most(gamma, valid);
        for (c, &f) in out.iter_mut().zip(&fired) {
            *c += (f & ok).count_ones() as u64;
        }
    }
    out
}

/// Bit-list implementations of the counting primitives, straight from the
/// definitions. Kept as a differential oracle for the word-packed kernels.
pub mod reference {
    use super::{normalize_shift, SequenceSet};

    fn bit(set: &SequenceSet, user: usize, t: usize, tau: usize) -> bool {
        set.get(user).get((t + tau) % set.period())
    }

    pub fn count_config(set: &SequenceSet, shifts: &[i64], pattern: &[bool]) -> u64 {
        let l = set.period();
        let rows: Vec<Vec<u8>> = set.sequences().iter().map(|s| s.to_u8()).collect();
        (0..l)
            .filter(|&t| {
                rows.iter()
                    .zip(shifts)
                    .zip(pattern)
                    .all(|((row, &tau), &b)| (row[(t + normalize_shift(tau, l)) % l] == 1) == b)
            })
            .count() as u64
    }

    pub fn hamming(set: &SequenceSet, tuple: &[usize], shifts: &[i64]) -> u64 {
        let l = set.period();
        (0..l)
            .filter(|&t| {
                tuple
                    .iter()
                    .zip(shifts)
                    .all(|(&i, &tau)| bit(set, i, t, normalize_shift(tau, l)))
            })
            .count() as u64
    }

    pub fn theta(set: &SequenceSet, tuple: &[usize], shifts: &[i64]) -> Vec<u64> {
        let l = set.period();
        let mut counts = vec![0u64; tuple.len() + 1];
        for t in 0..l {
            let ones = tuple
                .iter()
                .zip(shifts)
                .filter(|(&i, &tau)| bit(set, i, t, normalize_shift(tau, l)))
                .count();
            counts[ones] += 1;
        }
        counts
    }

    /// L·R_i for every user, from the definition of throughput.
    pub fn success_counts(set: &SequenceSet, shifts: &[i64], gamma: usize) -> Vec<u64> {
        let l = set.period();
        let k = set.len();
        let mut out = vec![0u64; k];
        for t in 0..l {
            let fired: Vec<bool> = (0..k).map(|i| bit(set, i, t, normalize_shift(shifts[i], l))).collect();
            let total = fired.iter().filter(|&&f| f).count();
            for (o, &f) in out.iter_mut().zip(&fired) {
                if f && total <= gamma {
                    *o += 1;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_set() -> SequenceSet {
        let s1: Vec<u8> = [1, 1, 0].repeat(9);
        let s2: Vec<u8> = [1, 1, 1, 0, 0, 0, 0, 0, 0].repeat(3);
        let mut s3 = vec![1u8; 9];
        s3.extend(vec![0u8; 18]);
        SequenceSet::from_rows(&[&s1, &s2, &s3]).unwrap()
    }

    #[test]
    fn duty_factor_examples() {
        let r = |b: &[u8]| duty_factor(&BinarySequence::from_u8(b).unwrap());
        assert_eq!(r(&[1, 1, 0]), Rational::new(2, 3));
        assert_eq!(r(&[0, 0, 0, 0]), Rational::new(0, 1));
        assert_eq!(r(&[1, 0, 1, 0, 1, 0]), Rational::new(1, 2));
    }

    #[test]
    fn cyclic_shift_examples() {
        let s = BinarySequence::from_u8(&[1, 1, 0]).unwrap();
        assert_eq!(cyclic_shift(&s, 1).to_u8(), vec![1, 0, 1]);
        assert_eq!(cyclic_shift(&s, 3).to_u8(), vec![1, 1, 0]);
        assert_eq!(cyclic_shift(&s, -1).to_u8(), vec![0, 1, 1]);
    }

    #[test]
    fn empty_sequence_rejected() {
        assert_eq!(BinarySequence::from_u8(&[]), Err(Error::EmptySequence));
        assert_eq!(SequenceSet::new(vec![]), Err(Error::EmptySet));
    }

    #[test]
    fn mismatched_periods_rejected() {
        let err = SequenceSet::from_rows(&[&[1, 0], &[1, 0, 0]]).unwrap_err();
        assert!(matches!(err, Error::PeriodMismatch { index: 1, .. }));
    }

    #[test]
    fn count_config_examples() {
        let set = example_set();
        let zero = ShiftAssignment::zeros(3);
        // slots 0 and 1
        assert_eq!(count_config(&set, &zero, &[true, true, true]).unwrap(), 2);

        let single = SequenceSet::from_rows(&[&[1, 1, 0]]).unwrap();
        assert_eq!(count_config(&single, &ShiftAssignment::zeros(1), &[true]).unwrap(), 2);

        let err = count_config(&set, &zero, &[true, true]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn hamming_examples() {
        let set = example_set();
        assert_eq!(hamming_cross_correlation(&set, &[0, 1], &[0, 5]).unwrap(), 6);
        assert_eq!(hamming_cross_correlation(&set, &[1, 2], &[4, -2]).unwrap(), 3);
        assert_eq!(hamming_cross_correlation(&set, &[0, 2], &[13, 1]).unwrap(), 6);
        assert_eq!(hamming_cross_correlation(&set, &[0, 1, 2], &[3, 7, 11]).unwrap(), 2);
        assert_eq!(
            hamming_cross_correlation(&set, &[], &[]).unwrap_err(),
            Error::EmptyTuple
        );
        assert!(matches!(
            hamming_cross_correlation(&set, &[1, 0], &[0, 0]),
            Err(Error::InvalidTuple { .. })
        ));
        assert!(matches!(
            hamming_cross_correlation(&set, &[0, 3], &[0, 0]),
            Err(Error::InvalidTuple { .. })
        ));
    }

    #[test]
    fn theta_profile_regression() {
        // Scanned by hand over the 27 slots of the worked example.
        let set = example_set();
        let theta = theta_profile(&set, &[0, 1, 2], &[0, 0, 0]).unwrap();
        assert_eq!(theta.counts(), &[4, 12, 9, 2]);
        assert_eq!(theta.hamming(), 2);
        assert_eq!(theta.at_most(1), 16);
        assert_eq!(theta.at_least(2), 11);
        assert_eq!(theta.at_least(-3), 27);
        assert_eq!(theta.at_most(-1), 0);
        assert_eq!(theta.get(7), 0);
        assert_eq!(theta.weighted_total(), 36);
    }

    #[test]
    fn theta_all_one_member() {
        let set = SequenceSet::new(vec![BinarySequence::all_ones(5).unwrap()]).unwrap();
        let theta = theta_profile(&set, &[0], &[3]).unwrap();
        assert_eq!(theta.counts(), &[0, 5]);
    }

    #[test]
    fn slice_counter_thresholds() {
        let mut c = SliceCounter::new();
        // slot b has count = number of words with bit b set
        for w in [0b1111u64, 0b0111, 0b0011, 0b0001] {
            c.add(w);
        }
        // counts per slot: slot0=4, slot1=3, slot2=2, slot3=1, others 0
        let valid = 0xff;
        assert_eq!(c.equal(4, valid), 0b0001);
        assert_eq!(c.equal(0, valid), 0xf0);
        assert_eq!(c.at_most(2, valid), 0xfc);
        assert_eq!(c.at_most(0, valid), 0xf0);
        assert_eq!(c.at_most(9, valid), 0xff);
        assert_eq!(c.equal(9, valid), 0);
    }

    fn arb_set(max_k: usize, max_l: usize) -> impl Strategy<Value = SequenceSet> {
        (1..=max_k, 1..=max_l).prop_flat_map(|(k, l)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), l), k).prop_map(|rows| {
                SequenceSet::new(
                    rows.into_iter()
                        .map(|r| BinarySequence::from_bits(r).unwrap())
                        .collect(),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn packed_kernels_match_reference(
            set in arb_set(5, 150),
            raw_shifts in proptest::collection::vec(-500i64..500, 5),
            pattern in proptest::collection::vec(any::<bool>(), 5),
            gamma in 0usize..6,
        ) {
            let k = set.len();
            let shifts = &raw_shifts[..k];
            let tuple: Vec<usize> = (0..k).collect();
            let assign = ShiftAssignment::new(shifts, set.period());
            prop_assert_eq!(
                count_config(&set, &assign, &pattern[..k]).unwrap(),
                reference::count_config(&set, shifts, &pattern[..k])
            );
            prop_assert_eq!(
                hamming_cross_correlation(&set, &tuple, shifts).unwrap(),
                reference::hamming(&set, &tuple, shifts)
            );
            prop_assert_eq!(
                theta_profile(&set, &tuple, shifts).unwrap().counts().to_vec(),
                reference::theta(&set, &tuple, shifts)
            );
            prop_assert_eq!(
                success_counts(&set, assign.shifts(), gamma),
                reference::success_counts(&set, shifts, gamma)
            );
        }

        #[test]
        fn partition_and_common_shift_invariance(
            set in arb_set(4, 40),
            raw_shifts in proptest::collection::vec(0i64..40, 4),
            c in 0i64..40,
        ) {
            let k = set.len();
            let l = set.period() as u64;
            let shifts = &raw_shifts[..k];
            let tuple: Vec<usize> = (0..k).collect();
            let theta = theta_profile(&set, &tuple, shifts).unwrap();
            prop_assert_eq!(theta.total(), l);
            let ones: u64 = set.sequences().iter().map(|s| s.ones() as u64).sum();
            prop_assert_eq!(theta.weighted_total(), ones);

            let assign = ShiftAssignment::new(shifts, set.period());
            let mut sum = 0;
            for p in 0..(1u32 << k) {
                let pattern: Vec<bool> = (0..k).map(|j| p >> j & 1 == 1).collect();
                sum += count_config(&set, &assign, &pattern).unwrap();
            }
            prop_assert_eq!(sum, l);

            let moved: Vec<i64> = shifts.iter().map(|s| s + c).collect();
            prop_assert_eq!(theta_profile(&set, &tuple, &moved).unwrap(), theta);
        }

        #[test]
        fn cyclic_shift_definition(bits in proptest::collection::vec(any::<bool>(), 1..200), tau in -1000i64..1000) {
            let s = BinarySequence::from_bits(bits.clone()).unwrap();
            let shifted = s.cyclic_shift(tau);
            let l = bits.len();
            for t in 0..l {
                prop_assert_eq!(shifted.get(t), bits[(t + normalize_shift(tau, l)) % l]);
            }
            let r = normalize_shift(tau, l);
            for w in 0..s.word_count() {
                prop_assert_eq!(s.shifted_word(r, w), shifted.words[w]);
            }
        }
    }
}
