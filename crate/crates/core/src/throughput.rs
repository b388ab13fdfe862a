//! Closed-form throughput of throughput-invariant sequence sets.
//!
//! For a TI set the throughput of user `i` equals its average over uniformly
//! random shifts, which factorises into the probability that user `i` fires
//! while fewer than γ of the others do:
//!
//! `R_i = f_i · Σ_{H ⊆ K∖{i}, |H| < γ} Π_{j∈H} f_j · Π_{k∉H∪{i}} (1 - f_k)`.
//!
//! Everything here is generic over [`Scalar`]; pick an exact rational for
//! verification and `f64` for sweeps.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Budget;
use crate::construction::{construct_si, DutyFactorList};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::success_counts;
use crate::BigRational;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThroughputMode {
    ClosedForm,
    Exhaustive,
    Empirical,
}

/// Per-user throughput for one MPR capability.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputReport<T> {
    pub per_user: Vec<T>,
    pub gamma: usize,
    pub mode: ThroughputMode,
}

impl<T: Scalar> ThroughputReport<T> {
    /// Sum of the per-user values.
    pub fn system(&self) -> T {
        self.per_user.iter().cloned().fold(T::zero(), |acc, r| acc + r)
    }
}

fn check_gamma(gamma: usize, k: usize) -> Result<()> {
    if gamma == 0 || gamma >= k {
        return Err(Error::GammaOutOfRange { gamma, k });
    }
    Ok(())
}

/// Closed-form throughput of every user of a TI set with the given duty
/// factors.
pub fn ti_throughput<T: Scalar>(duty: &DutyFactorList, gamma: usize) -> Result<ThroughputReport<T>> {
    let k = duty.len();
    check_gamma(gamma, k)?;
    let f: Vec<T> = duty.factors().iter().map(T::from_rational).collect();
    let per_user = (0..k)
        .map(|i| {
            // Distribution of the number of other active users, truncated
            // below γ: busy[c] = P(exactly c of the others fire).
            let mut busy = vec![T::zero(); gamma];
            busy[0] = T::one();
            for (j, fj) in f.iter().enumerate() {
                if j == i {
                    continue;
                }
                let idle = T::one() - fj.clone();
                for c in (0..gamma).rev() {
                    let stay = busy[c].clone() * idle.clone();
                    busy[c] = if c > 0 {
                        stay + busy[c - 1].clone() * fj.clone()
                    } else {
                        stay
                    };
                }
            }
            let below = busy.into_iter().fold(T::zero(), |acc, p| acc + p);
            f[i].clone() * below
        })
        .collect();
    Ok(ThroughputReport {
        per_user,
        gamma,
        mode: ThroughputMode::ClosedForm,
    })
}

/// Per-user throughput when all `k` users share duty factor `f`:
/// `Σ_{j<γ} C(K-1, j) f^(j+1) (1-f)^(K-1-j)`.
pub fn symmetric_throughput<T: Scalar>(f: &T, k: usize, gamma: usize) -> Result<T> {
    check_gamma(gamma, k)?;
    if *f < T::zero() || *f > T::one() {
        return Err(Error::InvalidDutyFactor(format!("{f:?}")));
    }
    let idle = T::one() - f.clone();
    let mut acc = T::zero();
    for j in 0..gamma {
        let c = T::from_count(binomial(k as u64 - 1, j as u64) as u64);
        acc = acc + c * Scalar::pow(f, j + 1) * Scalar::pow(&idle, k - 1 - j);
    }
    Ok(acc)
}

/// Exhaustively averages the throughput of `construct_si(duty)` over all
/// shift classes and compares it with [`ti_throughput`], exactly.
pub fn consistency_check(duty: &DutyFactorList, gamma: usize, budget: Budget) -> Result<bool> {
    let report = exhaustive_average(duty, gamma, budget)?;
    let closed = ti_throughput::<BigRational>(duty, gamma)?;
    Ok(report.per_user == closed.per_user)
}

/// Exact shift-averaged throughput of the constructed set.
pub fn exhaustive_average(
    duty: &DutyFactorList,
    gamma: usize,
    budget: Budget,
) -> Result<ThroughputReport<BigRational>> {
    let k = duty.len();
    check_gamma(gamma, k)?;
    let set = construct_si(duty)?;
    let l = set.period();
    let configs = (0..k - 1).try_fold(1u64, |acc, _| acc.checked_mul(l as u64));
    let needed = configs.map(|c| c as u128 * l as u128).unwrap_or(u128::MAX);
    if needed > budget.0 as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: budget.0,
        });
    }
    let configs = configs.expect("within budget");
    let sums = (0..configs)
        .into_par_iter()
        .fold(
            || vec![0u128; k],
            |mut acc, idx| {
                let mut shifts = vec![0usize; k];
                let mut rest = idx;
                for j in (1..k).rev() {
                    shifts[j] = (rest % l as u64) as usize;
                    rest /= l as u64;
                }
                for (a, c) in acc.iter_mut().zip(success_counts(&set, &shifts, gamma)) {
                    *a += c as u128;
                }
                acc
            },
        )
        .reduce(
            || vec![0u128; k],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let denom = BigInt::from(configs as u128 * l as u128);
    Ok(ThroughputReport {
        per_user: sums
            .into_iter()
            .map(|s| BigRational::new(BigInt::from(s), denom.clone()))
            .collect(),
        gamma,
        mode: ThroughputMode::Exhaustive,
    })
}

/// Best symmetric duty factor found by [`optimal_duty`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalDuty {
    pub users: usize,
    pub gamma: usize,
    /// Maximiser of the floating-point search.
    pub f: f64,
    /// Per-user throughput at `f`.
    pub value: f64,
    /// `users * value`.
    pub system_value: f64,
    /// Rational on the refinement grid nearest to `f` with the best exact score.
    #[serde(skip)]
    pub exact_f: BigRational,
    #[serde(skip)]
    pub exact_value: BigRational,
}

fn grid_argmax(lo: f64, hi: f64, step: f64, k: usize, gamma: usize) -> (f64, f64) {
    let n = ((hi - lo) / step).round() as u64;
    let (_, f, v) = (0..=n)
        .into_par_iter()
        .map(|i| {
            let f = (lo + i as f64 * step).clamp(0.0, 1.0);
            let v = symmetric_throughput(&f, k, gamma).unwrap_or(f64::NEG_INFINITY);
            (i, f, v)
        })
        .reduce(
            || (u64::MAX, f64::NAN, f64::NEG_INFINITY),
            |a, b| {
                // larger value wins; ties go to the smaller grid index
                if b.2 > a.2 || (b.2 == a.2 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    (f, v)
}

/// Duty factor maximising symmetric per-user throughput for `k` users and
/// capability `gamma`: a dense grid at `resolution`, then a local grid at
/// `resolution * 1e-3` around the winner. No unimodality is assumed.
pub fn optimal_duty(k: usize, gamma: usize, resolution: f64) -> Result<OptimalDuty> {
    check_gamma(gamma, k)?;
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::Configuration(format!(
            "resolution must lie in (0, 1], got {resolution}"
        )));
    }
    let (coarse, _) = grid_argmax(0.0, 1.0, resolution, k, gamma);
    let fine = resolution * 1e-3;
    let lo = (coarse - resolution).max(0.0);
    let hi = (coarse + resolution).min(1.0);
    let (f, value) = grid_argmax(lo, hi, fine, k, gamma);

    let denom = (1.0 / fine).round().max(1.0) as i64;
    let center = (f * denom as f64).round() as i64;
    let f = center as f64 / denom as f64;
    let value = symmetric_throughput(&f, k, gamma).unwrap_or(value);
    let mut best: Option<(BigRational, BigRational)> = None;
    for numer in [center - 1, center, center + 1] {
        if numer < 0 || numer > denom {
            continue;
        }
        let cand = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        let score = symmetric_throughput(&cand, k, gamma)?;
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((cand, score));
        }
    }
    let (exact_f, exact_value) = best.expect("center lies in [0, denom]");
    Ok(OptimalDuty {
        users: k,
        gamma,
        f,
        value,
        system_value: value * k as f64,
        exact_f,
        exact_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub users: usize,
    pub gamma: usize,
    #[serde(skip)]
    pub f: BigRational,
    pub per_user: f64,
    /// `users * per_user`, the symmetric system throughput.
    pub system: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveTable {
    pub rows: Vec<CurveRow>,
    /// Combinations dropped because `gamma >= users`.
    pub skipped: usize,
}

impl CurveTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("users,gamma,f,per_user,system\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.users,
                r.gamma,
                format_significant(Scalar::to_f64(&r.f), 12),
                format_significant(r.per_user, 12),
                format_significant(r.system, 12),
            ));
        }
        out
    }
}

/// Symmetric throughput rows for every `(K, γ, f)` combination, evaluated
/// exactly and rendered in floating point. Rows with `γ >= K` are skipped.
pub fn throughput_curve(
    users: RangeInclusive<usize>,
    gammas: &[usize],
    duty: &[crate::Rational],
) -> Result<CurveTable> {
    let mut rows = Vec::new();
    let mut skipped = 0;
    for f in duty {
        if *f < crate::Rational::zero() || *f > crate::Rational::one() {
            return Err(Error::InvalidDutyFactor(f.to_string()));
        }
    }
    for k in users {
        for &gamma in gammas {
            if gamma == 0 || gamma >= k {
                skipped += duty.len();
                continue;
            }
            for f in duty {
                let exact = <BigRational as Scalar>::from_rational(f);
                let per_user = symmetric_throughput(&exact, k, gamma)?;
                let system = per_user.clone() * BigRational::from_integer(BigInt::from(k));
                rows.push(CurveRow {
                    users: k,
                    gamma,
                    f: exact,
                    per_user: Scalar::to_f64(&per_user),
                    system: Scalar::to_f64(&system),
                });
            }
        }
    }
    Ok(CurveTable { rows, skipped })
}

/// Fixed-point rendering with `digits` significant digits.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
