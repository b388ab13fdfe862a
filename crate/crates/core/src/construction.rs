//! Array construction of shift-invariant sequence sets and the period
//! divisors any such set must respect.
//!
//! For duty factors `n_i/d_i`, user `i` gets a `(d_1⋯d_{i-1}) × d_i` zero/one
//! array with exactly `n_i` ones per row. Reading the array column by column
//! (left to right, each column top to bottom) and repeating the result gives
//! a sequence of period `d_1⋯d_K`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::format::parse_rational_list;
use crate::sequence::{BinarySequence, SequenceSet};
use crate::Rational;

/// Largest period `construct_si` will materialise.
pub const MAX_CONSTRUCTED_PERIOD: usize = 1 << 28;

/// K duty factors in lowest terms, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DutyFactorList {
    factors: Vec<Rational>,
}

impl DutyFactorList {
    pub fn new(factors: Vec<Rational>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptySet);
        }
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        for f in &factors {
            if *f < zero || *f > one {
                return Err(Error::InvalidDutyFactor(f.to_string()));
            }
        }
        // `Ratio` keeps itself reduced, so 2/4 is already 1/2 here.
        Ok(Self { factors })
    }

    /// Parses `2/3,1/3,1/3` (decimals such as `0.25` are accepted too).
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational_list(s)?)
    }

    /// Every user with the same duty factor.
    pub fn uniform(f: Rational, k: usize) -> Result<Self> {
        Self::new(vec![f; k])
    }

    pub fn factors(&self) -> &[Rational] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn numerators(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|f| *f.numer() as u64)
    }

    pub fn denominators(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|f| *f.denom() as u64)
    }

    /// The common value when every factor is equal.
    pub fn common(&self) -> Option<Rational> {
        let first = self.factors[0];
        self.factors.iter().all(|f| *f == first).then_some(first)
    }
}

impl std::fmt::Display for DutyFactorList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|r| r.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// How the `n_i` ones are placed in each array row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowFill {
    /// Ones in columns `0..n_i` of every row.
    LeftJustified,
    /// Each row gets an independent uniformly random `n_i`-subset of columns.
    Random { seed: u64 },
}

/// The zero/one array 𝔾_i for one user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionArray {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl ConstructionArray {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.cols + col]
    }

    pub fn row_ones(&self, row: usize) -> usize {
        self.cells[row * self.cols..(row + 1) * self.cols]
            .iter()
            .filter(|&&b| b)
            .count()
    }

    /// Columns left to right, each read top to bottom.
    pub fn column_readout(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.get(r, c));
            }
        }
        out
    }
}

fn checked_period(duty: &DutyFactorList) -> Result<usize> {
    let mut period: usize = 1;
    for d in duty.denominators() {
        period = period
            .checked_mul(d as usize)
            .filter(|&p| p <= MAX_CONSTRUCTED_PERIOD)
            .ok_or_else(|| Error::Configuration(format!("period of {duty} exceeds {MAX_CONSTRUCTED_PERIOD} slots")))?;
    }
    Ok(period)
}

/// Builds the arrays 𝔾_1…𝔾_K.
pub fn construction_arrays(duty: &DutyFactorList, fill: RowFill) -> Result<Vec<ConstructionArray>> {
    checked_period(duty)?;
    let mut rng = match fill {
        RowFill::Random { seed } => Some(Xoshiro256PlusPlus::seed_from_u64(seed)),
        RowFill::LeftJustified => None,
    };
    let mut rows = 1usize;
    let mut arrays = Vec::with_capacity(duty.len());
    for f in duty.factors() {
        let n = *f.numer() as usize;
        let d = *f.denom() as usize;
        let mut cells = vec![false; rows * d];
        for r in 0..rows {
            let row = &mut cells[r * d..(r + 1) * d];
            match rng.as_mut() {
                None => row[..n].iter_mut().for_each(|c| *c = true),
                Some(rng) => {
                    for c in rand::seq::index::sample(rng, d, n) {
                        row[c] = true;
                    }
                }
            }
        }
        arrays.push(ConstructionArray { rows, cols: d, cells });
        rows *= d;
    }
    Ok(arrays)
}

/// Shift-invariant set with the given duty factors and the minimum period
/// `d_1⋯d_K`, ones left-justified in every array row.
pub fn construct_si(duty: &DutyFactorList) -> Result<SequenceSet> {
    construct_si_with(duty, RowFill::LeftJustified)
}

pub fn construct_si_with(duty: &DutyFactorList, fill: RowFill) -> Result<SequenceSet> {
    let period = checked_period(duty)?;
    let arrays = construction_arrays(duty, fill)?;
    let sequences = arrays
        .iter()
        .map(|a| {
            let base = a.column_readout();
            BinarySequence::from_bits((0..period).map(|t| base[t % base.len()]))
        })
        .collect::<Result<Vec<_>>>()?;
    SequenceSet::new(sequences)
}

/// `d_1 d_2 ⋯ d_K`: every throughput-invariant set with these duty factors
/// has a period divisible by it, so it is also the minimum period.
pub fn min_period_bound(duty: &DutyFactorList) -> BigUint {
    duty.denominators()
        .fold(BigUint::one(), |acc, d| acc * BigUint::from(d))
}

/// `∏_{i∈U} d_i / gcd(∏_{i∈U} d_i, ∏_{i∈U} n_i)` for the zero-based users in
/// `subset`; the period of any shift-invariant set is divisible by it.
pub fn si_divisibility(duty: &DutyFactorList, subset: &[usize]) -> Result<BigUint> {
    if subset.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let mut d_prod = BigUint::one();
    let mut n_prod = BigUint::one();
    for &i in subset {
        let f = duty.factors().get(i).ok_or(Error::InvalidTuple {
            tuple: subset.to_vec(),
            k: duty.len(),
        })?;
        d_prod *= BigUint::from(*f.denom() as u64);
        n_prod *= BigUint::from(*f.numer() as u64);
    }
    let g = d_prod.gcd(&n_prod);
    Ok(d_prod / g)
}

/// Divisors for every non-empty subset, as `(subset, divisor)` in
/// increasing bitmask order.
pub fn all_subset_divisors(duty: &DutyFactorList) -> Result<Vec<(Vec<usize>, BigUint)>> {
    let k = duty.len();
    if k >= usize::BITS as usize - 1 {
        return Err(Error::Configuration(format!(
            "{k} users is too many to enumerate subsets"
        )));
    }
    (1usize..(1 << k))
        .map(|mask| {
            let subset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let div = si_divisibility(duty, &subset)?;
            Ok((subset, div))
        })
        .collect()
}

/// Convenience conversion of a bound to a machine integer when it fits.
pub fn bound_as_u64(b: &BigUint) -> Option<u64> {
    b.to_u64()
}
