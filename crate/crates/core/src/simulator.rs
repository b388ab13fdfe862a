//! Random-shift Monte-Carlo experiments and an erasure-model session
//! simulator.
//!
//! Every run (or shift draw) gets its own xoshiro256++ stream seeded from
//! `(seed, index)`, so results do not depend on thread scheduling.

use num_bigint::BigInt;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{is_ti, Budget};
use crate::construction::DutyFactorList;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::{success_counts, SequenceSet, SliceCounter};
use crate::throughput::ti_throughput;
use crate::{BigRational, Rational};

pub const RNG_NAME: &str = "xoshiro256++";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    ProtocolSequences,
    RandomAccess,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub gamma: usize,
    pub runs: u64,
    pub seed: u64,
    /// Periods per run.
    pub horizon: u64,
    pub scheme: Scheme,
}

impl SimConfig {
    pub fn new(gamma: usize, runs: u64, seed: u64, scheme: Scheme) -> Self {
        Self {
            gamma,
            runs,
            seed,
            horizon: 1,
            scheme,
        }
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }
}

/// Success counts of one user across runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UserStats {
    pub min_successes: u64,
    pub max_successes: u64,
    pub total_successes: u128,
}

impl UserStats {
    fn empty() -> Self {
        Self {
            min_successes: u64::MAX,
            max_successes: 0,
            total_successes: 0,
        }
    }

    fn record(&mut self, c: u64) {
        self.min_successes = self.min_successes.min(c);
        self.max_successes = self.max_successes.max(c);
        self.total_successes += c as u128;
    }

    fn merge(&mut self, o: &Self) {
        self.min_successes = self.min_successes.min(o.min_successes);
        self.max_successes = self.max_successes.max(o.max_successes);
        self.total_successes += o.total_successes;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub scheme: Scheme,
    pub gamma: usize,
    pub runs: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub horizon: u64,
    /// Slots over which each run's throughput is measured.
    pub slots_per_run: u64,
    pub per_user: Vec<UserStats>,
}

impl SimResult {
    pub fn min(&self, user: usize) -> BigRational {
        ratio(self.per_user[user].min_successes as u128, self.slots_per_run as u128)
    }

    pub fn max(&self, user: usize) -> BigRational {
        ratio(self.per_user[user].max_successes as u128, self.slots_per_run as u128)
    }

    pub fn mean(&self, user: usize) -> BigRational {
        ratio(
            self.per_user[user].total_successes,
            self.slots_per_run as u128 * self.runs as u128,
        )
    }

    pub fn spread(&self, user: usize) -> f64 {
        Scalar::to_f64(&(self.max(user) - self.min(user)))
    }
}

fn ratio(n: u128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for item `index` of an experiment seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(splitmix64(seed) ^ index)
}

fn check_gamma(gamma: usize, k: usize) -> Result<()> {
    if gamma == 0 || gamma >= k {
        return Err(Error::GammaOutOfRange { gamma, k });
    }
    Ok(())
}

/// Exact Bernoulli(num/den) on 64 lanes at once: each lane compares a
/// uniform binary fraction, drawn digit by digit, with the expansion of p.
#[derive(Debug, Clone, Copy)]
struct Bernoulli64 {
    num: u128,
    den: u128,
}

impl Bernoulli64 {
    fn new(p: Rational) -> Self {
        Self {
            num: *p.numer() as u128,
            den: *p.denom() as u128,
        }
    }

    fn sample<R: RngCore>(&self, rng: &mut R, valid: u64) -> u64 {
        if self.num == 0 {
            return 0;
        }
        if self.num == self.den {
            return valid;
        }
        let mut below = 0u64;
        let mut open = valid;
        let mut rem = self.num;
        while open != 0 && rem != 0 {
            rem *= 2;
            let r = rng.next_u64();
            if rem >= self.den {
                rem -= self.den;
                below |= open & !r;
                open &= r;
            } else {
                open &= !r;
            }
        }
        below
    }
}

/// Random-shift (or random-access) throughput experiment.
pub fn run_monte_carlo(set: &SequenceSet, cfg: &SimConfig) -> Result<SimResult> {
    let k = set.len();
    check_gamma(cfg.gamma, k)?;
    if cfg.runs == 0 || cfg.horizon == 0 {
        return Err(Error::Configuration("runs and horizon must be positive".into()));
    }
    let l = set.period();
    let slots_per_run = match cfg.scheme {
        Scheme::ProtocolSequences => l as u64,
        Scheme::RandomAccess => cfg
            .horizon
            .checked_mul(l as u64)
            .ok_or_else(|| Error::Overflow("horizon * period".into()))?,
    };
    let samplers: Vec<Bernoulli64> = set.duty_factors().into_iter().map(Bernoulli64::new).collect();
    let gamma = cfg.gamma;
    let per_user = (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = stream(cfg.seed, run);
            match cfg.scheme {
                Scheme::ProtocolSequences => {
                    let shifts: Vec<usize> = (0..k).map(|_| rng.gen_range(0..l)).collect();
                    success_counts(set, &shifts, gamma)
                }
                Scheme::RandomAccess => random_access_counts(&samplers, slots_per_run, gamma, &mut rng),
            }
        })
        .fold(
            || vec![UserStats::empty(); k],
            |mut acc, counts| {
                acc.iter_mut().zip(counts).for_each(|(s, c)| s.record(c));
                acc
            },
        )
        .reduce(
            || vec![UserStats::empty(); k],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| x.merge(y));
                a
            },
        );
    Ok(SimResult {
        scheme: cfg.scheme,
        gamma,
        runs: cfg.runs,
        seed: cfg.seed,
        rng: RNG_NAME,
        horizon: cfg.horizon,
        slots_per_run,
        per_user,
    })
}

fn random_access_counts<R: RngCore>(samplers: &[Bernoulli64], slots: u64, gamma: usize, rng: &mut R) -> Vec<u64> {
    let mut out = vec![0u64; samplers.len()];
    let mut fired = vec![0u64; samplers.len()];
    let mut left = slots;
    while left > 0 {
        let valid = if left >= 64 { u64::MAX } else { (1u64 << left) - 1 };
        left = left.saturating_sub(64);
        let mut counter = SliceCounter::new();
        for (s, f) in samplers.iter().zip(fired.iter_mut()) {
            *f = s.sample(rng, valid);
            counter.add(*f);
        }
        let ok = counter.at_most(gamma, valid);
        for (c, &f) in out.iter_mut().zip(&fired) {
            *c += (f & ok).count_ones() as u64;
        }
    }
    out
}

/// Header carried by every packet: who sent it and the parity of the
/// sender's local period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SessionPacket {
    /// 1-based.
    pub user_id: usize,
    pub period_parity: bool,
    /// Position within the sender's coded block for this period.
    pub payload_index: usize,
}

/// Header size for `k` users: the identity plus one parity bit.
pub fn header_bits(k: usize) -> u32 {
    1 + (k.max(1) as u64).next_power_of_two().trailing_zeros()
}

/// Threshold erasure code of one user: `n_code` packets sent per period,
/// any `k_code` of them recover the period's data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ErasureCodeSpec {
    pub n_code: u64,
    pub k_code: u64,
}

impl ErasureCodeSpec {
    pub fn decodes(&self, survivors: u64) -> bool {
        survivors >= self.k_code
    }
}

/// Erasure codes sized by the guaranteed throughput: `k_code = L·R_i`.
pub fn erasure_codes(set: &SequenceSet, gamma: usize) -> Result<Vec<ErasureCodeSpec>> {
    check_gamma(gamma, set.len())?;
    let duty = DutyFactorList::new(set.duty_factors())?;
    let r = ti_throughput::<BigRational>(&duty, gamma)?;
    let l = BigInt::from(set.period());
    set.sequences()
        .iter()
        .zip(r.per_user)
        .enumerate()
        .map(|(i, (seq, ri))| {
            let k = ri * BigRational::from_integer(l.clone());
            if !k.is_integer() {
                return Err(Error::Configuration(format!(
                    "L*R for user {} is {k}, not an integer; the set is not TI at gamma = {gamma}",
                    i + 1
                )));
            }
            let k_code = u64::try_from(k.to_integer()).map_err(|_| Error::Overflow("k_code".into()))?;
            Ok(ErasureCodeSpec {
                n_code: seq.ones() as u64,
                k_code,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub gamma: usize,
    pub periods: u64,
    /// Independent shift draws.
    pub draws: u64,
    pub seed: u64,
    /// Run the exhaustive TI check first instead of trusting the caller.
    pub verify_ti: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrawOutcome {
    pub shifts: Vec<usize>,
    /// `survivors[user][p]` for local periods `1..=periods`.
    pub survivors: Vec<Vec<u64>>,
    pub decoded: Vec<Vec<bool>>,
    pub grouping_errors: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SessionUserStats {
    pub decoded: u64,
    pub failed: u64,
    pub min_survivors: u64,
    pub max_survivors: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionReport {
    pub gamma: usize,
    pub periods: u64,
    pub draws: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub header_bits: u32,
    pub codes: Vec<ErasureCodeSpec>,
    pub per_user: Vec<SessionUserStats>,
    pub grouping_errors: u64,
    pub outcomes: Vec<DrawOutcome>,
}

impl SessionReport {
    pub fn all_decoded(&self) -> bool {
        self.per_user.iter().all(|u| u.failed == 0) && self.grouping_errors == 0
    }

    pub fn success_rate(&self) -> f64 {
        let ok: u64 = self.per_user.iter().map(|u| u.decoded).sum();
        let all: u64 = self.per_user.iter().map(|u| u.decoded + u.failed).sum();
        if all == 0 {
            1.0
        } else {
            ok as f64 / all as f64
        }
    }
}

/// Slot-level session: users transmit coded packets on their shifted
/// sequences, slots with more than γ transmitters are erased, and the
/// receiver regroups survivors per user by header parity flips.
pub fn run_session(set: &SequenceSet, cfg: &SessionConfig) -> Result<SessionReport> {
    let k = set.len();
    check_gamma(cfg.gamma, k)?;
    if cfg.periods == 0 || cfg.draws == 0 {
        return Err(Error::Configuration("periods and draws must be positive".into()));
    }
    if cfg.verify_ti && !is_ti(set, cfg.gamma, Budget::default())?.holds {
        return Err(Error::Precondition(format!("set is not TI at gamma = {}", cfg.gamma)));
    }
    let codes = erasure_codes(set, cfg.gamma)?;
    let outcomes: Vec<DrawOutcome> = (0..cfg.draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = stream(cfg.seed, d);
            let shifts: Vec<usize> = (0..k).map(|_| rng.gen_range(0..set.period())).collect();
            session_draw(set, &codes, cfg.gamma, cfg.periods, shifts)
        })
        .collect();

    let mut per_user = vec![
        SessionUserStats {
            decoded: 0,
            failed: 0,
            min_survivors: u64::MAX,
            max_survivors: 0,
        };
        k
    ];
    for o in &outcomes {
        for (u, stats) in per_user.iter_mut().enumerate() {
            for (&s, &ok) in o.survivors[u].iter().zip(&o.decoded[u]) {
                stats.min_survivors = stats.min_survivors.min(s);
                stats.max_survivors = stats.max_survivors.max(s);
                if ok {
                    stats.decoded += 1;
                } else {
                    stats.failed += 1;
                }
            }
        }
    }
    Ok(SessionReport {
        gamma: cfg.gamma,
        periods: cfg.periods,
        draws: cfg.draws,
        seed: cfg.seed,
        rng: RNG_NAME,
        header_bits: header_bits(k),
        codes,
        grouping_errors: outcomes.iter().map(|o| o.grouping_errors).sum(),
        per_user,
        outcomes,
    })
}

fn session_draw(
    set: &SequenceSet,
    codes: &[ErasureCodeSpec],
    gamma: usize,
    periods: u64,
    shifts: Vec<usize>,
) -> DrawOutcome {
    let l = set.period() as u64;
    let k = set.len();
    // payload index of each transmitting position within a period
    let block_index: Vec<Vec<usize>> = set
        .sequences()
        .iter()
        .map(|s| {
            let mut next = 0;
            (0..s.period())
                .map(|t| {
                    let idx = next;
                    if s.get(t) {
                        next += 1;
                    }
                    idx
                })
                .collect()
        })
        .collect();

    // Received packets per user in slot order, tagged with the true local
    // period for auditing only; the receiver itself sees the header.
    let mut received: Vec<Vec<(SessionPacket, u64)>> = vec![Vec::new(); k];
    let window = (periods + 2) * l;
    let mut sending = Vec::with_capacity(k);
    for t in 0..window {
        sending.clear();
        for (i, seq) in set.sequences().iter().enumerate() {
            let local = t + shifts[i] as u64;
            let pos = (local % l) as usize;
            if seq.get(pos) {
                let period = local / l;
                let packet = SessionPacket {
                    user_id: i + 1,
                    period_parity: period % 2 == 1,
                    payload_index: block_index[i][pos],
                };
                sending.push((packet, period));
            }
        }
        if sending.len() <= gamma {
            for &(p, period) in &sending {
                received[p.user_id - 1].push((p, period));
            }
        }
    }

    let mut survivors = vec![vec![0u64; periods as usize]; k];
    let mut grouping_errors = 0;
    for (u, packets) in received.iter().enumerate() {
        for group in packets.chunk_by(|a, b| a.0.period_parity == b.0.period_parity) {
            let period = group[0].1;
            if group.iter().any(|&(_, p)| p != period) {
                grouping_errors += 1;
            }
            if (1..=periods).contains(&period) {
                let mut idx: Vec<usize> = group.iter().map(|(p, _)| p.payload_index).collect();
                idx.sort_unstable();
                idx.dedup();
                survivors[u][period as usize - 1] = idx.len() as u64;
            }
        }
    }
    let decoded = survivors
        .iter()
        .zip(codes)
        .map(|(row, code)| row.iter().map(|&s| code.decodes(s)).collect())
        .collect();
    DrawOutcome {
        shifts,
        survivors,
        decoded,
        grouping_errors,
    }
}
