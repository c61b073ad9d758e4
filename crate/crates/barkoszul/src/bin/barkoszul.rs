//! Command-line front end: load a group, run the verification suites, apply
//! the named maps to textual inputs, and print cohomology dimension tables.
//!
//! Exit codes: 0 on success, 1 when an exact identity fails (including degree
//! cap overruns), 2 on usage, parse, or group load failures.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use barkoszul::session::{Session, SessionConfig};
use barkoszul::{Error, Result};

#[derive(Parser)]
#[command(
    name = "barkoszul",
    version,
    about = "Exact chain maps between the bar and Koszul resolutions of S(V), \
             with quantum cochain converters for skew group algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Builtin group (klein4-3d, sym3-perm, cyclic-<r>-2d) or a spec file path.
    #[arg(long, default_value = "klein4-3d")]
    group: String,
    /// Cap on the homological degrees the random sweeps exercise.
    #[arg(long = "max-p", default_value_t = 6)]
    max_p: usize,
    /// Cap on total polynomial degree, for sweeps and parsed inputs alike.
    #[arg(long = "max-degree", default_value_t = 6)]
    max_degree: u32,
    /// Seed for the randomized sweeps; reports embed it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["text", "rows"])]
    format: String,
}

impl Common {
    fn into_config(self) -> Result<SessionConfig> {
        Ok(SessionConfig {
            group: self.group,
            max_p: self.max_p,
            max_degree: self.max_degree,
            seed: self.seed,
            format: self.format.parse()?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite, or all of them.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite of exact identities to sweep.
        #[arg(long, default_value = "all", value_parser = [
            "chainmap", "psi-phi", "phi-upsilon", "upsilon-psi-star",
            "change-of-basis", "homology-oracle", "all",
        ])]
        suite: String,
    },
    /// Apply a named map to a textual chain or form and print the image.
    Apply {
        #[command(flatten)]
        common: Common,
        /// One of psi, phi, upsilon, dstar, reynolds, psi-star.
        map: String,
        /// Positional chain for psi (bar slots `l|m1|...|mp|r`), phi
        /// (`l|r|vi^vj`), and psi-star (`[g]head|t1|...|tp`).
        input: Option<String>,
        /// Tagged form `[g](poly)^dvi^dvj` for upsilon, dstar, and reynolds;
        /// the opaque coefficient symbol `f` is allowed.
        #[arg(long)]
        form: Option<String>,
        /// Comma-separated argument polynomials for upsilon.
        #[arg(long)]
        args: Option<String>,
    },
    /// Print per-component cohomology dimension tables.
    Dims {
        #[command(flatten)]
        common: Common,
        /// Component selector: an element name or index, or `all`.
        #[arg(long, default_value = "all")]
        g: String,
        /// Inclusive exterior degree range, written a..b.
        #[arg(long = "p-range", default_value = "0..3")]
        p_range: String,
        /// Inclusive internal degree range (coefficient degree minus p),
        /// written a..b; ends may be negative.
        #[arg(long = "internal-range", default_value = "0..2")]
        internal_range: String,
        /// Average over centralizers and collapse conjugate components: the
        /// graded pieces of the full invariant theory.
        #[arg(long)]
        invariant: bool,
    },
}

fn parse_range_i64(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::invalid(format!("range '{s}' must look like a..b")))?;
    let lo = a.trim().parse().map_err(|_| Error::invalid(format!("bad range end '{a}'")))?;
    let hi = b.trim().parse().map_err(|_| Error::invalid(format!("bad range end '{b}'")))?;
    Ok((lo, hi))
}

fn parse_range_usize(s: &str) -> Result<(usize, usize)> {
    let (a, b) = parse_range_i64(s)?;
    // A backwards or negative range is empty; dims renders an empty table.
    if b < a.max(0) {
        return Ok((1, 0));
    }
    Ok((a.max(0) as usize, b as usize))
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { common, suite } => {
            let session = Session::open(common.into_config()?)?;
            let (report, failures) = session.verify(&suite)?;
            print!("{report}");
            Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Apply { common, map, input, form, args } => {
            let session = Session::open(common.into_config()?)?;
            let out = session.apply(&map, input.as_deref(), form.as_deref(), args.as_deref())?;
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Dims { common, g, p_range, internal_range, invariant } => {
            let session = Session::open(common.into_config()?)?;
            let p = parse_range_usize(&p_range)?;
            let d = parse_range_i64(&internal_range)?;
            let out = session.dims(&g, p, d, invariant)?;
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DegreeCapExceeded { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
