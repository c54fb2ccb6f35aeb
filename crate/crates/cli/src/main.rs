//! `kepler`: batch JSON front end for the partition-ideal calculus.
//!
//! Every subcommand is a thin adapter over the library: it validates flags,
//! calls one library operation, and prints a single JSON document on
//! standard output. Randomized subcommands require an explicit `--seed` and
//! reproduce their output bit for bit. Exit code 0 on success, 2 on
//! validation or computation errors, with a machine-readable error object.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use kepler_core::kernel::{k_s_expansion, KernelCoefficients};
use kepler_core::minors::diagonal_tripotent;
use kepler_core::partitions::Part;
use kepler_core::peter_weyl::{span_basis, verify_shift_identity};
use kepler_core::poly::Matrix;
use kepler_core::{
    conical_poly, minimal_generators_report, step1_generators, vanishing_order, IdealSupport,
    Partition, SymbolicPowerSpec, TriplePars,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "kepler",
    version,
    about = "Partition-ideal calculus on rectangular matrix spaces",
    disable_help_subcommand = true
)]
struct Cli {
    /// Pretty-print the JSON document.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a generator set to the minimal antichain.
    MinimalSet(MinimalSetArgs),
    /// Minimal generators of a joint symbolic power, with the reference
    /// comparison for curated order tuples.
    Determinantal(DeterminantalArgs),
    /// Closed-form generators of a single-stratum symbolic power.
    Step1(Step1Args),
    /// Localize an ideal support to the normal slice of a tripotent.
    Localize(LocalizeArgs),
    /// Peter-Weyl components of the fibre of an ideal at the origin.
    MaxFibre(MaxFibreArgs),
    /// Exact vanishing order of a conical polynomial at a base point.
    VanishingOrder(VanishingOrderArgs),
    /// Sampled residuals of the determinant-shift kernel identities.
    VerifyKernel(VerifyKernelArgs),
    /// Truncated stratified kernel expansion, exact rational coefficients.
    KExpansion(KExpansionArgs),
    /// Certified dimension of one Peter-Weyl component.
    PeterWeylDim(PeterWeylDimArgs),
}

#[derive(Args)]
struct MinimalSetArgs {
    /// Common rank of the generators.
    #[arg(long)]
    rank: usize,
    /// Generators as a JSON array of partitions, e.g. `[[2,1],[2,2]]`.
    #[arg(long)]
    gens: String,
}

#[derive(Args)]
struct DeterminantalArgs {
    /// Vanishing orders, weakly decreasing, e.g. "10,5,1".
    #[arg(long)]
    nu: String,
}

#[derive(Args)]
struct Step1Args {
    /// Rank of the stratum the vanishing order is imposed on.
    #[arg(long)]
    l: usize,
    /// Vanishing order.
    #[arg(long)]
    n: Part,
    /// Ambient rank.
    #[arg(long)]
    r: usize,
}

#[derive(Args)]
struct LocalizeArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    gens: String,
    /// Rank of the tripotent to localize at.
    #[arg(long)]
    l: usize,
}

#[derive(Args)]
struct MaxFibreArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    gens: String,
}

#[derive(Args)]
struct VanishingOrderArgs {
    /// Partition, e.g. `2,1,0` or `[2,1,0]`.
    #[arg(long)]
    lambda: String,
    /// Base point: "zero" or "ej" for the rank-j diagonal tripotent, e.g. "e1".
    #[arg(long)]
    point: String,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
}

#[derive(Args)]
struct VerifyKernelArgs {
    #[arg(long)]
    lambda: String,
    /// Rectangle height subtracted from the partition.
    #[arg(long)]
    n: Part,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Seed for the orbit sampling; required, no implicit default.
    #[arg(long)]
    seed: u64,
    /// Number of sample point pairs.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Relative singular-value threshold for rank decisions.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct KExpansionArgs {
    #[arg(long)]
    lambda: String,
    /// Step index, 1-based.
    #[arg(long)]
    s: usize,
    /// Weight bound on the output keys.
    #[arg(long = "N")]
    weight_bound: Part,
    /// Coefficient function: "flat" or "pochhammer:c" with c rational, e.g. "pochhammer:7/2".
    #[arg(long, default_value = "flat")]
    coeffs: String,
    /// Characteristic multiplicity entering the shift constants.
    #[arg(long, default_value = "2")]
    mult_a: String,
}

#[derive(Args)]
struct PeterWeylDimArgs {
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Seed for the orbit sampling; required, no implicit default.
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

struct Failure {
    code: &'static str,
    message: String,
}

impl Failure {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure::new("invalid_input", message)
    }
}

fn fail<E: std::fmt::Display>(code: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure::new(code, e.to_string())
}

/// Partition from `2,1,0` or `[2,1,0]`.
fn parse_partition(text: &str) -> Result<Partition, Failure> {
    let trimmed = text.trim();
    let parts: Vec<Part> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed)
            .map_err(|e| Failure::invalid(format!("bad partition {trimmed:?}: {e}")))?
    } else {
        trimmed
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<Part>()
                    .map_err(|e| Failure::invalid(format!("bad partition entry {tok:?}: {e}")))
            })
            .collect::<Result<_, _>>()?
    };
    Partition::new(parts).map_err(fail("invalid_input"))
}

fn parse_generators(text: &str) -> Result<Vec<Partition>, Failure> {
    let raw: Vec<Vec<Part>> = serde_json::from_str(text)
        .map_err(|e| Failure::invalid(format!("bad generator list: {e}")))?;
    raw.into_iter()
        .map(|parts| Partition::new(parts).map_err(fail("invalid_input")))
        .collect()
}

fn parse_rational(text: &str) -> Result<BigRational, Failure> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num = BigInt::from_str(num)
        .map_err(|e| Failure::invalid(format!("bad rational {text:?}: {e}")))?;
    let den = BigInt::from_str(den)
        .map_err(|e| Failure::invalid(format!("bad rational {text:?}: {e}")))?;
    if den == BigInt::from(0) {
        return Err(Failure::invalid(format!(
            "bad rational {text:?}: zero denominator"
        )));
    }
    Ok(BigRational::new(num, den))
}

#[derive(Serialize)]
struct GeneratorsOut {
    generators: Vec<Partition>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    zero_ideal: bool,
}

impl From<IdealSupport> for GeneratorsOut {
    fn from(support: IdealSupport) -> Self {
        GeneratorsOut {
            zero_ideal: support.is_zero_ideal(),
            generators: support.generators().to_vec(),
        }
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value, Failure> {
    serde_json::to_value(value).map_err(fail("encode_failed"))
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::MinimalSet(args) => {
            let gens = parse_generators(&args.gens)?;
            let support =
                IdealSupport::minimal_full_set(args.rank, gens).map_err(fail("invalid_input"))?;
            to_value(&GeneratorsOut::from(support))
        }
        Command::Determinantal(args) => {
            let nu_part = parse_partition(&args.nu)?;
            let nu =
                SymbolicPowerSpec::new(nu_part.parts().to_vec()).map_err(fail("invalid_input"))?;
            to_value(&minimal_generators_report(&nu))
        }
        Command::Step1(args) => {
            let support =
                step1_generators(args.l, args.n, args.r).map_err(fail("invalid_input"))?;
            to_value(&GeneratorsOut::from(support))
        }
        Command::Localize(args) => {
            let gens = parse_generators(&args.gens)?;
            let support =
                IdealSupport::minimal_full_set(args.rank, gens).map_err(fail("invalid_input"))?;
            let localized = support.localize(args.l).map_err(fail("invalid_input"))?;
            to_value(&localized)
        }
        Command::MaxFibre(args) => {
            let gens = parse_generators(&args.gens)?;
            let support =
                IdealSupport::minimal_full_set(args.rank, gens).map_err(fail("invalid_input"))?;
            Ok(json!({ "fibre": support.maximal_fibre() }))
        }
        Command::VanishingOrder(args) => {
            let lambda = parse_partition(&args.lambda)?;
            let pars = TriplePars::new(args.r, args.s).map_err(fail("invalid_input"))?;
            let level = match args.point.trim() {
                "zero" | "0" => 0usize,
                tok => tok
                    .strip_prefix('e')
                    .and_then(|rest| rest.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Failure::invalid(format!(
                            "bad point {tok:?}: expected \"zero\" or \"e<j>\""
                        ))
                    })?,
            };
            if level > args.r {
                return Err(Failure::invalid(format!(
                    "tripotent rank {level} exceeds the triple rank {}",
                    args.r
                )));
            }
            let f = conical_poly::<BigRational>(&lambda, pars).map_err(fail("invalid_input"))?;
            let point: Matrix<BigRational> = diagonal_tripotent(level, pars);
            let order = vanishing_order(&f, &point).map_err(fail("compute_failed"))?;
            Ok(json!({
                "lambda": lambda,
                "point": args.point.trim(),
                "r": args.r,
                "s": args.s,
                "order": order,
            }))
        }
        Command::VerifyKernel(args) => {
            let lambda = parse_partition(&args.lambda)?;
            let pars = TriplePars::new(args.r, args.s).map_err(fail("invalid_input"))?;
            let report =
                verify_shift_identity(&lambda, args.n, pars, args.samples, args.seed, args.tol)
                    .map_err(fail("compute_failed"))?;
            to_value(&report)
        }
        Command::KExpansion(args) => {
            let lambda = parse_partition(&args.lambda)?;
            let mult_a = parse_rational(&args.mult_a)?;
            let coeffs = match args.coeffs.trim() {
                "flat" => KernelCoefficients::Flat,
                other => match other.strip_prefix("pochhammer:") {
                    Some(c) => KernelCoefficients::PochhammerWeighted {
                        c: parse_rational(c)?,
                    },
                    None => {
                        return Err(Failure::invalid(format!(
                            "bad coefficient function {other:?}: expected \"flat\" or \"pochhammer:<c>\""
                        )))
                    }
                },
            };
            let expansion = k_s_expansion(&coeffs, &lambda, args.s, args.weight_bound, &mult_a)
                .map_err(fail("compute_failed"))?;
            to_value(&expansion)
        }
        Command::PeterWeylDim(args) => {
            let lambda = parse_partition(&args.lambda)?;
            let pars = TriplePars::new(args.r, args.s).map_err(fail("invalid_input"))?;
            let basis =
                span_basis(&lambda, pars, args.seed, args.tol).map_err(fail("compute_failed"))?;
            let mut value = to_value(basis.certificate())?;
            if let Value::Object(map) = &mut value {
                map.insert("d_lambda".into(), json!(basis.dim()));
            }
            Ok(value)
        }
    }
}

fn emit(value: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    };
    println!("{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let value = json!({
                "error": { "code": "usage", "message": err.to_string() }
            });
            emit(&value, false);
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(value) => {
            emit(&value, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let value = json!({
                "error": { "code": failure.code, "message": failure.message }
            });
            emit(&value, cli.pretty);
            ExitCode::from(2)
        }
    }
}
