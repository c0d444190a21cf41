//! Command-line front end. [`run`] takes the argument vector and output
//! sinks and returns the process exit code, so it can be driven from tests.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::algebra::parse::{parse_poly, parse_ratfun};
use crate::algebra::{MultiIndex, Params, DEFAULT_MAX_PRIME};
use crate::error::{Error, Result};
use crate::fgl::{make_fgl, IterativityTable, LawKind};
use crate::hsd::{DeltaTable, HSDerivation, OperatorExpr};
use crate::pbasis::{derivation_via_pbasis, p_power_decompose, PBasisContext};
use crate::verifier::{run_suite, Suite, VerifyConfig, DEFAULT_SEED};
use crate::witt::witt_addition_law;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "wittcheck", version, about = "Witt-group derivations over F_p: generators and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
struct ParamArgs {
    /// Prime characteristic.
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Witt vector length / number of variables per block (at most 4).
    #[arg(long, default_value_t = 2)]
    e: usize,
    /// Largest prime accepted for --p.
    #[arg(long, default_value_t = DEFAULT_MAX_PRIME)]
    max_prime: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<Params> {
        Params::with_max_prime(self.p, self.e, self.max_prime)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Witt addition law H (or S over Z with --integral).
    GenWittLaw {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        integral: bool,
        #[arg(long)]
        json: bool,
    },
    /// Iterativity constants alpha_{i,j}(l) for |i|+|j| <= K, as JSON.
    GenIterativity {
        #[command(flatten)]
        params: ParamArgs,
        /// ga, gm or witt.
        #[arg(long, default_value = "witt")]
        law: String,
        #[arg(long, default_value_t = 4)]
        max_order: u32,
    },
    /// delta_j^i = D_j(X^i) for the canonical derivation, as JSON.
    GenDeltaTable {
        #[command(flatten)]
        params: ParamArgs,
        /// Bound on i: a number (all entries) or a tuple like "(2,1)".
        #[arg(long)]
        max_i: String,
        /// Bound on j, same format.
        #[arg(long)]
        max_j: String,
    },
    /// Evaluate an operator expression such as "D(1,0)^2" on a polynomial.
    Apply {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        op: String,
        #[arg(long)]
        poly: String,
    },
    /// Coefficients alpha_i with x = sum alpha_i^(p^n) X^i, as JSON.
    Decompose {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: String,
    },
    /// D_j(x) through the p^n-th power decomposition of x.
    DerivePbasis {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        j: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: String,
    },
    /// Run identity checks. Field and separable-closure axioms (H0', H7')
    /// are not checkable on a fixed model and are not part of any suite.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// all, witt-law, iterativity, lemma-we-iter, fact-2-25, h-schemes,
        /// h5, h6, mw-counterexample or pbasis.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        deg_bound: u32,
        #[arg(long, default_value_t = 6)]
        order_bound: u32,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn bound_index(s: &str, e: usize) -> Result<MultiIndex> {
    match s.trim().parse::<u32>() {
        Ok(v) => Ok(MultiIndex::new(vec![v; e])),
        Err(_) => {
            let m: MultiIndex = s.parse()?;
            if m.len() != e {
                return Err(Error::LengthMismatch { expected: e, found: m.len() });
            }
            Ok(m)
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Invariant(_) | Error::InexactDivision(_) | Error::NonUnit(_) | Error::NotPthPower(_) => EXIT_INVARIANT,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(cli.command) {
        Ok((text, code)) => match writeln!(out, "{text}").and_then(|_| out.flush()) {
            Ok(()) => code,
            // a closed reader (`| head`) is not an error of ours
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => code,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let code = exit_code_for(&e);
            let kind = if code == EXIT_INVARIANT { "internal error" } else { "error" };
            let _ = writeln!(err, "{kind}: {e}");
            code
        }
    }
}

fn execute(command: Command) -> Result<(String, i32)> {
    let text = match command {
        Command::GenWittLaw { params, integral, json } => {
            let law = witt_addition_law(params.params()?)?;
            let e = law.params().e();
            let (name, polys): (&str, Vec<String>) = if integral {
                ("S", law.integral().iter().map(|s| s.to_string()).collect())
            } else {
                ("H", law.reduced().iter().map(|h| h.to_string()).collect())
            };
            if json {
                let comps: Vec<_> = if integral {
                    law.integral().iter().map(|s| s.to_json(e)).collect()
                } else {
                    law.reduced().iter().map(|h| h.to_json(e)).collect()
                };
                pretty(&json!({ "p": params.p, "e": e, "integral": integral, "components": comps }))
            } else {
                polys.iter().enumerate().map(|(k, s)| format!("{name}{} = {s}", k + 1)).collect::<Vec<_>>().join(" ; ")
            }
        }
        Command::GenIterativity { params, law, max_order } => {
            let kind: LawKind = law.parse()?;
            let table = IterativityTable::new(make_fgl(kind, params.params()?)?);
            let entries = table.entries_up_to(max_order)?;
            pretty(&json!({ "law": kind, "p": params.p, "e": params.e, "max_order": max_order, "entries": entries }))
        }
        Command::GenDeltaTable { params, max_i, max_j } => {
            let ps = params.params()?;
            let table = DeltaTable::canonical(ps, &bound_index(&max_i, ps.e())?, &bound_index(&max_j, ps.e())?)?;
            pretty(&json!({ "p": ps.p(), "e": ps.e(), "entries": table.to_json() }))
        }
        Command::Apply { params, op, poly } => {
            let ps = params.params()?;
            let d = HSDerivation::canonical_witt(ps)?;
            let op = OperatorExpr::parse(&op, ps.e())?;
            op.eval(&d, &parse_poly(&poly, ps.p())?)?.to_string()
        }
        Command::Decompose { params, n, x } => {
            let ps = params.params()?;
            let parts = p_power_decompose(ps, &parse_ratfun(&x, ps.p())?, n)?;
            let map: BTreeMap<String, String> = parts.iter().map(|(i, a)| (i.to_string(), a.to_string())).collect();
            pretty(&json!({ "p": ps.p(), "e": ps.e(), "n": n, "alpha": map }))
        }
        Command::DerivePbasis { params, j, n, x } => {
            let ps = params.params()?;
            let ctx = PBasisContext::new(ps)?;
            let j = bound_index(&j, ps.e())?;
            derivation_via_pbasis(&ctx, &parse_ratfun(&x, ps.p())?, &j, n)?.to_string()
        }
        Command::Verify { params, suite, deg_bound, order_bound, n, seed, json } => {
            let suite: Suite = suite.parse()?;
            let mut cfg = VerifyConfig::new(params.params()?);
            cfg.deg_bound = deg_bound;
            cfg.order_bound = order_bound;
            cfg.n = n;
            cfg.seed = seed;
            let reports = run_suite(suite, &cfg)?;
            let ok = reports.iter().all(|r| r.passed());
            let text = if json {
                pretty(&reports)
            } else {
                let mut lines: Vec<String> = reports.iter().map(|r| r.summary()).collect();
                lines.push(format!("overall: {}", if ok { "PASS" } else { "FAIL" }));
                lines.join("\n")
            };
            return Ok((text, if ok { EXIT_OK } else { EXIT_CHECK_FAILED }));
        }
    };
    Ok((text, EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("wittcheck").chain(args.iter().copied()).collect();
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn witt_law_text() {
        let (code, out, _) = run_capture(&["gen-witt-law", "--p", "2", "--e", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "H1 = X1 + Y1 ; H2 = X1*Y1 + X2 + Y2\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["gen-witt-law", "--p", "4"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["apply", "--op", "D(1,0", "--poly", "X1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn bound_index_forms() {
        assert_eq!(bound_index("2", 3).unwrap(), MultiIndex::new(vec![2, 2, 2]));
        assert_eq!(bound_index("(1,0)", 2).unwrap(), MultiIndex::new(vec![1, 0]));
        assert!(bound_index("(1,0,0)", 2).is_err());
    }
}
