//! Plain-text sequence-set format: one sequence per line of `0`/`1`
//! characters, `#` comment lines allowed, all lines of equal length.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sequence::{BinarySequence, SequenceSet};
use crate::Rational;

pub fn parse_sequence_set(text: &str) -> Result<SequenceSet> {
    let mut rows = Vec::new();
    let mut period = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut bits = Vec::with_capacity(line.len());
        for c in line.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        match period {
            None => period = Some(bits.len()),
            Some(p) if p != bits.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("length {} differs from period {p}", bits.len()),
                })
            }
            _ => {}
        }
        rows.push(BinarySequence::from_bits(bits)?);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no sequences found".into(),
        });
    }
    SequenceSet::new(rows)
}

/// Renders `set`, prefixing each comment line with `# `.
pub fn write_sequence_set(set: &SequenceSet, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for s in set.sequences() {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

pub fn read_sequence_file(path: &Path) -> Result<SequenceSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", path.display())))?;
    parse_sequence_set(&text)
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.05` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        line: 0,
        message: format!("malformed rational {s:?}"),
    };
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 17 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int_part
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    let p: i64 = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(parse_rational)
        .collect()
}
