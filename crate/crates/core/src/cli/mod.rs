//! Command-line front end. [`run`] parses arguments and dispatches; it never
//! exits the process, so it can be driven in-process by tests.

mod example;
mod json;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{is_pairwise_si, is_si, is_ti, Budget, PropertyVerdict, DEFAULT_BUDGET};
use crate::construction::{
    all_subset_divisors, construct_si_with, min_period_bound, si_divisibility, DutyFactorList, RowFill,
};
use crate::error::Error;
use crate::format::{parse_rational_list, read_sequence_file, write_sequence_set};
use crate::simulator::{run_monte_carlo, run_session, Scheme, SessionConfig, SimConfig};
use crate::throughput::{optimal_duty, throughput_curve, ti_throughput};
use crate::{BigRational, SequenceSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "protoseq", version, about = "Protocol sequences for MPR collision channels")]
pub struct Cli {
    /// Worker threads (falls back to PROTOSEQ_THREADS, then all cores).
    #[arg(long, global = true, env = "PROTOSEQ_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fill {
    Left,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Si,
    PairwiseSi,
    Ti,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Seq,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an SI sequence set with the given duty factors.
    Construct {
        #[arg(long)]
        duty: String,
        #[arg(long, value_enum, default_value = "left")]
        fill: Fill,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively check SI, pairwise SI or TI.
    Verify {
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        file: PathBuf,
    },
    /// Closed-form throughput of a TI set.
    Throughput {
        #[arg(long)]
        duty: String,
        #[arg(long)]
        gamma: usize,
    },
    /// Symmetric duty factor maximising throughput.
    OptimalF {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        gamma: usize,
        #[arg(long, default_value_t = 1e-4)]
        resolution: f64,
    },
    /// Symmetric throughput table as CSV.
    Curve {
        /// Inclusive range `A..B`, or a single value.
        #[arg(long)]
        users: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum period and per-subset divisibility constraints.
    Bound {
        #[arg(long)]
        duty: String,
        /// List every subset even when there are more than 20 users.
        #[arg(long)]
        all_subsets: bool,
    },
    /// Monte-Carlo throughput over random shifts or random access.
    Simulate {
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        runs: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "seq")]
        scheme: SchemeArg,
        /// Periods per run.
        #[arg(long, default_value_t = 1)]
        horizon: u64,
        file: PathBuf,
    },
    /// Erasure-coded session over random shift draws.
    Session {
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        periods: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        draws: u64,
        /// Skip the exhaustive TI check.
        #[arg(long)]
        trust_ti: bool,
        /// Include per-draw survivor counts.
        #[arg(long)]
        detail: bool,
        file: PathBuf,
    },
    /// Reproduce the three-user worked example and check every value.
    Example {
        /// Also write the constructed set here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::TheoremViolation(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io(e: std::io::Error) -> Failure {
    usage(e.to_string())
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut buffer = Vec::new();
    let result = pool.install(|| dispatch(cli.command, &mut buffer));
    if out.write_all(&buffer).and_then(|_| out.flush()).is_err() {
        return EXIT_USAGE;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Construct {
            duty,
            fill,
            seed,
            out: path,
        } => construct(&duty, fill, seed, path, out),
        Command::Verify {
            property,
            gamma,
            budget,
            file,
        } => verify(property, gamma, Budget(budget), &file, out),
        Command::Throughput { duty, gamma } => throughput(&duty, gamma, out),
        Command::OptimalF {
            users,
            gamma,
            resolution,
        } => {
            let o = optimal_duty(users, gamma, resolution)?;
            emit(
                out,
                json!({
                    "users": users,
                    "gamma": gamma,
                    "resolution": resolution,
                    "f": o.f,
                    "per_user": o.value,
                    "system": o.system_value,
                    "exact_f": json::big_rational(&o.exact_f),
                    "exact_per_user": json::big_rational(&o.exact_value),
                }),
            )
        }
        Command::Curve {
            users,
            gamma,
            f,
            out: path,
        } => curve(&users, &gamma, &f, path, out),
        Command::Bound { duty, all_subsets } => bound(&duty, all_subsets, out),
        Command::Simulate {
            gamma,
            runs,
            seed,
            scheme,
            horizon,
            file,
        } => simulate(gamma, runs, seed, scheme, horizon, &file, out),
        Command::Session {
            gamma,
            periods,
            seed,
            draws,
            trust_ti,
            detail,
            file,
        } => {
            let set = read_sequence_file(&file)?;
            let cfg = SessionConfig {
                gamma,
                periods,
                draws,
                seed,
                verify_ti: !trust_ti,
            };
            session(&set, &cfg, detail, out)
        }
        Command::Example { out_dir } => example::run(out_dir, out),
    }
}

fn emit(out: &mut dyn Write, body: Value) -> CmdResult {
    emit_with(out, body, EXIT_OK)
}

fn emit_with(out: &mut dyn Write, body: Value, code: i32) -> CmdResult {
    let text = serde_json::to_string_pretty(&json::document(body)).expect("serializable");
    writeln!(out, "{text}").map_err(io)?;
    Ok(code)
}

fn construct(duty: &str, fill: Fill, seed: u64, path: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let duty = DutyFactorList::parse(duty)?;
    let fill = match fill {
        Fill::Left => RowFill::LeftJustified,
        Fill::Random => RowFill::Random { seed },
    };
    let set = construct_si_with(&duty, fill)?;
    let mut comments = vec![format!("duty {duty}")];
    if let RowFill::Random { seed } = fill {
        comments.push(format!("fill random seed {seed}"));
    }
    let text = write_sequence_set(&set, &comments);
    match path {
        Some(p) => std::fs::write(&p, text).map_err(io)?,
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(EXIT_OK)
}

pub(crate) fn verdict_json(v: &PropertyVerdict) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "users": json::one_based(&w.tuple),
            "reference_shifts": w.reference_shifts,
            "other_shifts": w.other_shifts,
            "reference_value": w.reference_value,
            "other_value": w.other_value,
        })
    });
    let mut body = json!({
        "property": v.property,
        "holds": v.holds,
        "witness": witness,
        "configurations_checked": v.configurations_checked,
    });
    if let Some(g) = v.gamma {
        body["gamma"] = json!(g);
    }
    if let Some(r) = &v.throughput {
        body["throughput"] = Value::Array(r.iter().map(json::rational).collect());
    }
    body
}

fn verify(property: PropertyArg, gamma: Option<usize>, budget: Budget, file: &Path, out: &mut dyn Write) -> CmdResult {
    let set = read_sequence_file(file)?;
    let verdict = match property {
        PropertyArg::Si => is_si(&set, budget)?,
        PropertyArg::PairwiseSi => is_pairwise_si(&set, budget)?,
        PropertyArg::Ti => {
            let gamma = gamma.ok_or_else(|| usage("--gamma is required for --property ti"))?;
            is_ti(&set, gamma, budget)?
        }
    };
    let code = if verdict.holds { EXIT_OK } else { EXIT_VIOLATION };
    emit_with(out, verdict_json(&verdict), code)
}

fn throughput(duty: &str, gamma: usize, out: &mut dyn Write) -> CmdResult {
    let duty = DutyFactorList::parse(duty)?;
    let r = ti_throughput::<BigRational>(&duty, gamma)?;
    emit(
        out,
        json!({
            "duty": duty.factors().iter().map(json::rational).collect::<Vec<_>>(),
            "gamma": gamma,
            "per_user": r.per_user.iter().map(json::big_rational).collect::<Vec<_>>(),
            "system": json::big_rational(&r.system()),
        }),
    )
}

fn parse_range(s: &str) -> std::result::Result<std::ops::RangeInclusive<usize>, Failure> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("invalid user count {t:?}")))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b || a == 0 {
        return Err(usage(format!("invalid user range {s:?}")));
    }
    Ok(a..=b)
}

fn curve(users: &str, gamma: &str, f: &str, path: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let users = parse_range(users)?;
    let gammas = gamma
        .split(',')
        .map(|g| {
            g.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("invalid gamma {g:?}")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let fs = parse_rational_list(f)?;
    let table = throughput_curve(users, &gammas, &fs)?;
    let csv = table.to_csv();
    match path {
        Some(p) => std::fs::write(p, csv).map_err(io)?,
        None => out.write_all(csv.as_bytes()).map_err(io)?,
    }
    Ok(EXIT_OK)
}

fn bound(duty: &str, all_subsets: bool, out: &mut dyn Write) -> CmdResult {
    let duty = DutyFactorList::parse(duty)?;
    let k = duty.len();
    let subsets: Vec<(Vec<usize>, _)> = if k <= 20 || all_subsets {
        all_subset_divisors(&duty)?
    } else {
        let full: Vec<usize> = (0..k).collect();
        let d = si_divisibility(&duty, &full)?;
        vec![(full, d)]
    };
    emit(
        out,
        json!({
            "duty": duty.factors().iter().map(json::rational).collect::<Vec<_>>(),
            "min_period": min_period_bound(&duty).to_string(),
            "subsets": subsets
                .iter()
                .map(|(u, d)| json!({"users": json::one_based(u), "divisor": d.to_string()}))
                .collect::<Vec<_>>(),
        }),
    )
}

fn simulate(
    gamma: usize,
    runs: u64,
    seed: u64,
    scheme: SchemeArg,
    horizon: u64,
    file: &Path,
    out: &mut dyn Write,
) -> CmdResult {
    let set = read_sequence_file(file)?;
    let scheme = match scheme {
        SchemeArg::Seq => Scheme::ProtocolSequences,
        SchemeArg::Random => Scheme::RandomAccess,
    };
    let res = run_monte_carlo(&set, &SimConfig::new(gamma, runs, seed, scheme).with_horizon(horizon))?;
    let users: Vec<Value> = (0..set.len())
        .map(|u| {
            json!({
                "user": u + 1,
                "min": json::big_rational(&res.min(u)),
                "mean": json::big_rational(&res.mean(u)),
                "max": json::big_rational(&res.max(u)),
            })
        })
        .collect();
    emit(
        out,
        json!({
            "scheme": res.scheme,
            "gamma": gamma,
            "runs": runs,
            "seed": seed,
            "rng": res.rng,
            "horizon": horizon,
            "slots_per_run": res.slots_per_run,
            "per_user": users,
        }),
    )
}

fn session(set: &SequenceSet, cfg: &SessionConfig, detail: bool, out: &mut dyn Write) -> CmdResult {
    let rep = run_session(set, cfg)?;
    let users: Vec<Value> = rep
        .per_user
        .iter()
        .zip(&rep.codes)
        .enumerate()
        .map(|(u, (s, c))| {
            json!({
                "user": u + 1,
                "n_code": c.n_code,
                "k_code": c.k_code,
                "decoded": s.decoded,
                "failed": s.failed,
                "min_survivors": s.min_survivors,
                "max_survivors": s.max_survivors,
            })
        })
        .collect();
    let mut body = json!({
        "gamma": rep.gamma,
        "periods": rep.periods,
        "draws": rep.draws,
        "seed": rep.seed,
        "rng": rep.rng,
        "header_bits": rep.header_bits,
        "success_rate": rep.success_rate(),
        "grouping_errors": rep.grouping_errors,
        "per_user": users,
    });
    if detail {
        body["outcomes"] = serde_json::to_value(&rep.outcomes).expect("serializable");
    }
    let code = if rep.all_decoded() { EXIT_OK } else { EXIT_VIOLATION };
    emit_with(out, body, code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("protoseq").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..7").unwrap(), 2..=7);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert_eq!(parse_range("2..=3").unwrap(), 2..=3);
        assert!(parse_range("7..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(
            run_str(&["throughput", "--duty", "2/3,x", "--gamma", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["throughput", "--duty", "1/2,1/2", "--gamma", "2"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_str(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
        assert_eq!(run_str(&["--threads", "0", "bound", "--duty", "1/2"]).0, EXIT_USAGE);
    }

    #[test]
    fn bound_examples() {
        for (duty, want) in [("2/3,1/3,1/3", "27"), ("1/1", "1"), ("1/2,1/3", "6")] {
            let (code, out, _) = run_str(&["bound", "--duty", duty]);
            assert_eq!(code, 0);
            let v: Value = serde_json::from_str(&out).unwrap();
            assert_eq!(v["schema"], 1);
            assert_eq!(v["min_period"], want);
        }
    }

    #[test]
    fn bound_large_k_lists_only_full_set() {
        let duty = vec!["1/2"; 21].join(",");
        let (_, out, _) = run_str(&["bound", "--duty", &duty]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["subsets"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn throughput_json() {
        let (code, out, _) = run_str(&["--threads", "1", "throughput", "--duty", "2/3,1/3,1/3", "--gamma", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["per_user"][0]["num"], 16);
        assert_eq!(v["per_user"][0]["den"], 27);
        assert_eq!(v["system"]["num"], 10);
        assert_eq!(v["system"]["den"], 9);
    }

    #[test]
    fn curve_to_stdout() {
        let (code, out, _) = run_str(&["curve", "--users", "10", "--gamma", "1", "--f", "1/10"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1).unwrap(), "10,1,0.1,0.0387420489,0.387420489");
    }

    #[test]
    fn optimal_f_json() {
        let (code, out, _) = run_str(&["optimal-f", "--users", "20", "--gamma", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!((v["f"].as_f64().unwrap() - 0.05).abs() < 1e-3);
    }
}
