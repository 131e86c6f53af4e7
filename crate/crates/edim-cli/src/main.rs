//! The `edim` binary: clap argument parsing dispatched onto the command
//! functions in the library crate.

use clap::{Args, Parser, Subcommand};
use edim_cli::params::{parse_family, parse_u64_list, resolve_prime_power, GroupSpec};
use edim_cli::verify::VerifyArgs;
use edim_cli::{CliError, CmdOutput, Format};
use edim_core::formulas::Family;
use edim_core::numth::is_prime;

/// Essential l-dimension of finite classical groups: closed forms plus
/// enumeration-based verification.
#[derive(Parser)]
#[command(name = "edim", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the essential l-dimension of one group.
    Ed(TupleArgs),
    /// Describe the Sylow l-subgroup: parameters, block table, center
    /// rank, order exponent, and the explicit matrix model.
    Sylow(SylowArgs),
    /// Sweep a parameter grid comparing closed forms against the
    /// enumeration oracle.
    Verify(VerifyCliArgs),
    /// Recompute the reflection-degree concordance table.
    Table(TableArgs),
}

#[derive(Args)]
struct TupleArgs {
    /// Family: GL, SL, PSL, SLQ, Sp, PSp, O[+|-], POmega[+|-], U, SU, PSU.
    #[arg(long)]
    family: String,
    /// Matrix size n (symplectic/orthogonal: the full dimension).
    #[arg(long)]
    n: u64,
    /// Field size q as a prime power (alternative to --p/--r).
    #[arg(long)]
    q: Option<u64>,
    /// Field characteristic p (with --r; alternative to --q).
    #[arg(long)]
    p: Option<u64>,
    /// Field extension degree r, so q = p^r.
    #[arg(long)]
    r: Option<u32>,
    /// The prime l (distinct from the field characteristic).
    #[arg(long)]
    l: u64,
    /// Scalar-subgroup order n' for the SLQ family.
    #[arg(long)]
    nprime: Option<u64>,
    /// Orthogonal type: plus, minus, or odd.
    #[arg(long)]
    epsilon: Option<String>,
    /// Output format: text, json, or csv.
    #[arg(long, default_value = "text")]
    format: String,
}

impl TupleArgs {
    fn resolve(&self) -> Result<(GroupSpec, Format), CliError> {
        let (p, r) = resolve_prime_power(self.q, self.p, self.r)?;
        let family = parse_family(&self.family, self.epsilon.as_deref(), self.nprime, self.n)?;
        let spec = GroupSpec::new(family, self.n, p, r, self.l)?;
        let format: Format = self.format.parse()?;
        Ok((spec, format))
    }
}

#[derive(Args)]
struct SylowArgs {
    #[command(flatten)]
    tuple: TupleArgs,
    /// Re-verify every generator against its defining form equations.
    #[arg(long)]
    check_forms: bool,
}

#[derive(Args)]
struct VerifyCliArgs {
    /// Comma-separated families to sweep (from GL, SL, PSL); default all three.
    #[arg(long)]
    family: Option<String>,
    /// Inclusive upper bound on the matrix size n.
    #[arg(long, default_value_t = 6)]
    n: u64,
    /// Comma-separated prime powers to sweep.
    #[arg(long, default_value = "3,4,5,7,8,9")]
    q: String,
    /// Comma-separated primes to sweep.
    #[arg(long, default_value = "2,3,5")]
    l: String,
    /// Element budget per tuple; larger groups are reported as skipped.
    #[arg(long, default_value_t = 1 << 20)]
    budget: u64,
    /// Count flagged degenerate tuples as failures.
    #[arg(long)]
    strict: bool,
    /// Output format: text, json, or csv.
    #[arg(long, default_value = "json")]
    format: String,
}

impl VerifyCliArgs {
    fn resolve(&self) -> Result<(VerifyArgs, Format), CliError> {
        let families = match &self.family {
            None => vec![Family::Gl, Family::Sl, Family::Psl],
            Some(toks) => toks
                .split(',')
                .map(|tok| parse_family(tok.trim(), None, None, 1))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let qs = parse_u64_list(&self.q, "q")?;
        for &q in &qs {
            if edim_cli::params::factor_prime_power(q).is_none() {
                return Err(CliError::Usage(format!("q = {q} is not a prime power")));
            }
        }
        let ls = parse_u64_list(&self.l, "l")?;
        for &l in &ls {
            if !is_prime(l) {
                return Err(CliError::Usage(format!("l = {l} is not prime")));
            }
        }
        let args = VerifyArgs {
            families,
            max_n: self.n,
            qs,
            ls,
            budget: self.budget,
            strict: self.strict,
            deep: false,
        };
        let format: Format = self.format.parse()?;
        Ok((args, format))
    }
}

#[derive(Args)]
struct TableArgs {
    /// Output format: text, json, or csv.
    #[arg(long, default_value = "text")]
    format: String,
}

fn dispatch(cli: &Cli) -> Result<CmdOutput, CliError> {
    match &cli.cmd {
        Cmd::Ed(args) => {
            let (spec, format) = args.resolve()?;
            edim_cli::ed::cmd_ed(&spec, format)
        }
        Cmd::Sylow(args) => {
            let (spec, format) = args.tuple.resolve()?;
            edim_cli::sylow::cmd_sylow(&spec, args.check_forms, format)
        }
        Cmd::Verify(args) => {
            let (vargs, format) = args.resolve()?;
            edim_cli::verify::cmd_verify(&vargs, format)
        }
        Cmd::Table(args) => {
            let format: Format = args.format.parse()?;
            edim_cli::table::cmd_table(format)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            std::process::exit(out.exit_code);
        }
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}
