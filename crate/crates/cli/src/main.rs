use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;

/// Exact computations on Clifford-type algebras and their coactions by E(n).
#[derive(Debug, Parser)]
#[command(name = "coact", version, about)]
pub struct Cli {
    /// Algebra configuration (JSON).
    #[arg(short, long, global = true, value_name = "CONFIG")]
    pub algebra: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field, dimension and basis labels.
    Info,
    /// det Q and whether the algebra is semisimple (exit 1 if not).
    Semisimple,
    /// Basis of the Jacobson radical and the size of the quotient.
    Radical,
    /// Congruence diagonalization PᵀQP = D of the form.
    Diagonalize,
    /// Basis of the center.
    Center,
    /// Regular trace of an element, or of every basis element.
    Trace {
        /// Element as a JSON map from basis labels to scalars.
        #[arg(long)]
        element: Option<String>,
    },
    /// Whether the algebra carries a bialgebra structure (exit 1 if not).
    Bialgebra,
    /// Structure verdict from det Q and δ.
    Classify,
    /// Pseudoscalar of an orthogonal generating set.
    Pseudoscalar,
    /// The canonical coaction of E(n).
    CanonicalCoaction,
    /// Check the comodule algebra axioms for a coaction file.
    VerifyCoaction { file: PathBuf },
    /// Coaction induced by an inner tuple file.
    CoactionFromInner { file: PathBuf },
    /// Coaction induced by an operator tuple file.
    CoactionFromTuple { file: PathBuf },
    /// Coinvariants of a coaction file.
    Coinvariants { file: PathBuf },
    /// Decomposition into two copies of the even part (even n, δ a square).
    SplitEven,
    /// Inequivalent inner coactions over a small prime field.
    Enumerate {
        /// Only the σ-twisted branch (even n).
        #[arg(long, conflicts_with = "untwisted")]
        twisted: bool,
        /// Only the untwisted branch.
        #[arg(long)]
        untwisted: bool,
        /// Cap on the total number of candidate checks.
        #[arg(long, default_value_t = 1 << 22)]
        max_candidates: u64,
    },
    /// Check the Hopf axioms of E(K).
    VerifyHopf {
        #[arg(long = "n", value_name = "K")]
        n: usize,
        /// `rational`, `prime:P`, or a JSON field descriptor.
        #[arg(long, default_value = "rational")]
        field: String,
    },
    /// Check that φ: E(K) → E(K)* is a Hopf isomorphism onto the coopposite dual.
    VerifyDuality {
        #[arg(long = "n", value_name = "K")]
        n: usize,
        #[arg(long, default_value = "rational")]
        field: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            emit(&out.value);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            let code = e.exit_code();
            if code == 1 {
                emit(&serde_json::json!({ "error": e.kind(), "message": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}


/// Pretty JSON on stdout; a closed pipe is not an error.
fn emit(v: &serde_json::Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
