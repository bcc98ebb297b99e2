//! Command-line front end: load systems (built-in catalog or files), run
//! the invariance/Darboux machinery, and print deterministic reports.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 verification failure.

use clap::{Parser, Subcommand};

use darboux_core::error::Error;

mod commands;
mod output;

#[derive(Parser)]
#[command(
    name = "darboux",
    about = "Exact Darboux-integrability toolkit for polynomial vector fields on ellipsoids",
    version
)]
struct Cli {
    /// Emit a machine-readable JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify that a system's field is tangent to its ellipsoid.
    CheckSurface {
        /// Catalog name or path to a .sys file.
        system: String,
        /// Exact parameter substitutions, e.g. `a=1,b=3/2`.
        #[arg(long, allow_hyphen_values = true)]
        instantiate: Option<String>,
    },
    /// Solve X(f) = k·f for the cofactor of a hypersurface.
    Cofactor {
        system: String,
        /// The hypersurface polynomial f.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Solve in the ambient space even when the system has an ellipsoid.
        #[arg(long)]
        ambient: bool,
        /// Override the cofactor degree bound (default m₁ − 1).
        #[arg(long)]
        degree_bound: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        instantiate: Option<String>,
    },
    /// Compute the extactic polynomial for a basis.
    Extactic {
        system: String,
        /// Comma-separated basis polynomials, e.g. `x,y`.
        #[arg(long, default_value = "x,y", allow_hyphen_values = true)]
        basis: String,
        /// Apply the catalog entry's recorded parameter settings first.
        #[arg(long)]
        settings: bool,
        #[arg(long, allow_hyphen_values = true)]
        instantiate: Option<String>,
    },
    /// Enumerate invariant meridians on the ellipsoid.
    Meridians {
        system: String,
        #[arg(long, allow_hyphen_values = true)]
        instantiate: Option<String>,
        /// Candidate meridian forms to verify (semicolon-separated).
        #[arg(long, allow_hyphen_values = true)]
        candidates: Option<String>,
        /// Keep only meridians with real normalized forms.
        #[arg(long)]
        real: bool,
        #[arg(long)]
        settings: bool,
    },
    /// Enumerate invariant parallels on the ellipsoid.
    Parallels {
        system: String,
        #[arg(long, allow_hyphen_values = true)]
        instantiate: Option<String>,
        /// Candidate heights to verify (semicolon-separated constants).
        #[arg(long, allow_hyphen_values = true)]
        candidates: Option<String>,
        #[arg(long)]
        settings: bool,
    },
    /// Multiplicity of a factor inside an extactic polynomial.
    Multiplicity {
        system: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "x,y", allow_hyphen_values = true)]
        basis: String,
        #[arg(long)]
        settings: bool,
        #[arg(long, allow_hyphen_values = true)]
        instantiate: Option<String>,
    },
    /// Solve the cofactor relation over given invariant objects and build
    /// the Darboux function.
    Darboux {
        system: String,
        /// Invariant hypersurfaces (comma-separated polynomials).
        #[arg(long, allow_hyphen_values = true)]
        planes: String,
        /// Exponential factors as `g/h` pairs (comma-separated).
        #[arg(long, allow_hyphen_values = true)]
        exp: Option<String>,
        /// Also search for time-dependent invariants (σ ≠ 0).
        #[arg(long)]
        allow_sigma: bool,
        #[arg(long)]
        ambient: bool,
        #[arg(long, allow_hyphen_values = true)]
        instantiate: Option<String>,
    },
    /// Counting bounds for invariant hyperplanes, meridians and parallels.
    Bounds {
        /// Surface/ambient dimension n.
        #[arg(long)]
        n: u32,
        /// Degree vector, comma-separated, e.g. `2,2,2`.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        hyperplanes: bool,
        #[arg(long)]
        through_point: bool,
        #[arg(long)]
        meridians: bool,
        #[arg(long)]
        parallels: bool,
    },
    /// Integrability thresholds for (n, m₁) in the ambient space or on the
    /// ellipsoid.
    Thresholds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m1: u32,
        /// `ambient` or `ellipsoid`.
        #[arg(long, default_value = "ambient")]
        context: String,
        /// Optionally report the verdict for p invariant hypersurfaces and
        /// q exponential factors.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
    },
    /// List catalog entries, or print one entry's definition.
    Catalog {
        /// Entry to print; lists all names when omitted.
        name: Option<String>,
    },
    /// Recompute every catalog entry's expected artifacts.
    VerifyCatalog,
}

fn main() {
    let cli = Cli::parse();
    let code = match commands::run(&cli.command, cli.json) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

/// 2 for parse/validation problems, 3 for verification failures.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::NotOnSurface(_) => 3,
        _ => 2,
    }
}
