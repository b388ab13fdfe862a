use std::io::Write;
use std::path::PathBuf;

use crate::analysis::{is_si, is_ti, Budget};
use crate::construction::{construct_si, DutyFactorList};
use crate::format::write_sequence_set;
use crate::sequence::{hamming_cross_correlation, SequenceSet};
use crate::throughput::ti_throughput;
use crate::Rational;

use super::{io, CmdResult, EXIT_OK, EXIT_VIOLATION};

const DUTY: &str = "2/3,1/3,1/3";

const SEQUENCES: [&str; 3] = [
    "110110110110110110110110110",
    "111000000111000000111000000",
    "111111111000000000000000000",
];

const CORRELATIONS: [(&[usize], u64); 4] = [(&[0, 1], 6), (&[1, 2], 3), (&[0, 2], 6), (&[0, 1, 2], 2)];

/// `(gamma, [R_1, R_2, R_3])` as `(num, den)` pairs.
const THROUGHPUT: [(usize, [(i64, i64); 3]); 2] = [(1, [(8, 27), (1, 27), (1, 27)]), (2, [(16, 27), (7, 27), (7, 27)])];

struct Report<'a> {
    out: &'a mut dyn Write,
    mismatches: usize,
}

impl Report<'_> {
    fn check(&mut self, label: &str, got: impl ToString, expected: impl ToString) -> std::io::Result<()> {
        let (got, expected) = (got.to_string(), expected.to_string());
        if got == expected {
            writeln!(self.out, "{label:<28} {got:<30} ok")
        } else {
            self.mismatches += 1;
            writeln!(self.out, "{label:<28} {got:<30} MISMATCH, expected {expected}")
        }
    }
}

/// Min and max of `H` for `tuple` over every shift vector (all members free
/// for pairs, first member pinned for longer tuples).
fn correlation_range(set: &SequenceSet, tuple: &[usize]) -> (u64, u64) {
    let l = set.period() as i64;
    let free = if tuple.len() == 2 { 2 } else { tuple.len() - 1 };
    let total = (l as u64).pow(free as u32);
    let mut lo = u64::MAX;
    let mut hi = 0;
    for mut idx in 0..total {
        let mut shifts = vec![0i64; tuple.len()];
        for s in shifts.iter_mut().rev().take(free) {
            *s = idx as i64 % l;
            idx /= l as u64;
        }
        let h = hamming_cross_correlation(set, tuple, &shifts).expect("valid tuple");
        lo = lo.min(h);
        hi = hi.max(h);
    }
    (lo, hi)
}

pub(super) fn run(out_dir: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let duty = DutyFactorList::parse(DUTY)?;
    let set = construct_si(&duty)?;
    let mut r = Report { out, mismatches: 0 };

    writeln!(r.out, "duty factors {duty}").map_err(io)?;
    r.check("period", set.period(), 27).map_err(io)?;
    for (i, want) in SEQUENCES.iter().enumerate() {
        let got = set.get(i).to_string();
        r.check(&format!("s{}", i + 1), got, want).map_err(io)?;
    }

    for (tuple, want) in CORRELATIONS {
        let (lo, hi) = correlation_range(&set, tuple);
        let users: Vec<String> = tuple.iter().map(|u| (u + 1).to_string()).collect();
        let label = format!("H({})", users.join(","));
        let got = if lo == hi {
            lo.to_string()
        } else {
            format!("{lo}..{hi}")
        };
        r.check(&label, got, want).map_err(io)?;
    }

    let budget = Budget::default();
    let si = is_si(&set, budget)?;
    r.check("SI", si.holds, true).map_err(io)?;
    for (gamma, want) in THROUGHPUT {
        let want: Vec<Rational> = want.iter().map(|&(n, d)| Rational::new(n, d)).collect();
        let closed = ti_throughput::<Rational>(&duty, gamma)?;
        let ti = is_ti(&set, gamma, budget)?;
        let fmt = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        r.check(
            &format!("R closed form, gamma={gamma}"),
            fmt(&closed.per_user),
            fmt(&want),
        )
        .map_err(io)?;
        let measured = match &ti.throughput {
            Some(t) if ti.holds => fmt(t),
            _ => "not TI".into(),
        };
        r.check(&format!("R all shifts, gamma={gamma}"), measured, fmt(&want))
            .map_err(io)?;
    }

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir).map_err(io)?;
        let text = write_sequence_set(&set, &[format!("duty {duty}")]);
        std::fs::write(dir.join("example.txt"), text).map_err(io)?;
    }

    let code = if r.mismatches == 0 { EXIT_OK } else { EXIT_VIOLATION };
    writeln!(
        r.out,
        "{}",
        if code == EXIT_OK {
            "all values match"
        } else {
            "values deviate"
        }
    )
    .map_err(io)?;
    Ok(code)
}
