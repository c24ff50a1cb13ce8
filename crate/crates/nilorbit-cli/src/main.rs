//! `nilorbit`: command-line front end.
//!
//! Inputs are system files (JSON, see the README) or `fixture:NAME` for a
//! built-in system. Text goes to stdout by default, `--json` switches to a
//! JSON report. Exit codes: 0 pass, 1 checked negative, 2 usage or input
//! error.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "nilorbit", version, about = "Exact computations with nilpotent orbits and limiting mixed Hodge structures")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Sp,
    O,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    #[value(name = "C")]
    C,
    #[value(name = "R")]
    R,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value = "C")]
    pub field: FieldArg,
    /// Dimension of the standard representation (`sp`, or complex `o`).
    #[arg(long)]
    pub n: Option<u32>,
    /// Signature `(p, q)` of a real orthogonal group.
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct Pick {
    /// System file, `-` for stdin, or `fixture:NAME`.
    pub input: String,
    /// Use `N_j` (1-based) instead of `N_1 + ... + N_r`.
    #[arg(long)]
    pub index: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jordan type and signed Young diagram of a nilpotent.
    Classify(Pick),
    /// List the nilpotent orbits of a classical group.
    Enumerate(GroupArgs),
    /// Closure order between two orbits (system files or `{"diagram": ...}`).
    Order {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Hasse diagram of the closure order, as DOT.
    Hasse(GroupArgs),
    /// Monodromy weight filtration `W(N)`.
    Wfilt {
        #[command(flatten)]
        pick: Pick,
        /// Center of the filtration (default: the weight of the system).
        #[arg(long, allow_hyphen_values = true)]
        center: Option<i64>,
    },
    /// Relative weight filtration `M(N, W)`.
    Relwfilt(Pick),
    /// Gradings and sl2-pairs of a Deligne system.
    DeligneChain {
        input: String,
    },
    /// Deformations of the last nilpotent of a Deligne system.
    Deform {
        input: String,
        /// Slot `j` (1-based, default the last).
        #[arg(long)]
        slot: Option<usize>,
        /// Require infinitesimal isometries of `q`.
        #[arg(long)]
        isometry: bool,
        /// Require commuting with these `N_i` (comma separated, 1-based).
        #[arg(long, value_delimiter = ',')]
        commute: Vec<usize>,
        /// Require morphisms of type (-1,-1) of the limit.
        #[arg(long)]
        morphism: bool,
    },
    /// Reassemble a Deligne system from its prefix and last variable.
    Assemble {
        input: String,
        /// JSON matrix replacing the last nilpotent.
        #[arg(long)]
        last_n: Option<String>,
    },
    /// Triangular substitution `phi^a` of the nilpotents.
    Phi {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Check the Deligne-Hodge axioms.
    DhCheck {
        input: String,
    },
    /// Check the infinitesimal mixed Hodge module axioms with the given form.
    ImhmCheck {
        input: String,
    },
    /// Decide whether a Deligne-Hodge system admits a polarization.
    Polarize {
        input: String,
        /// Weight of the graded piece (default: the weight of the system).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Signed diagram read off the Hodge diamond of the limit.
    Chromosome(Pick),
    /// Explicit weight-2 split limit with parameters (a, b, c, d).
    Weight2Model {
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        d: usize,
    },
    /// Check that a cone in a weight-2 model underlies a nilpotent orbit.
    ConeCheck {
        /// Model parameters `a,b,c,d`.
        #[arg(long, value_delimiter = ',', required = true)]
        model: Vec<usize>,
        /// Cone file: `{"generators": [{"x": .., "y": ..}], "probes": [..]}`.
        cone: String,
        /// Extra interior probes with random positive weights.
        #[arg(long, default_value_t = 0)]
        random_probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Commuting root sl2s in so(4, m - 4).
    RootSl2 {
        #[arg(long, default_value_t = 9)]
        m: usize,
        /// Roots among 1..=4 (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        subset: Vec<usize>,
        /// Also run the cone check on the nilnegatives.
        #[arg(long)]
        cone: bool,
        /// Classify every non-empty subset.
        #[arg(long)]
        table: bool,
    },
    /// The polarizable-looking system that admits no polarization.
    Counterexample,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                let mut s = serde_json::to_string_pretty(&out.json).expect("JSON serializes");
                s.push('\n');
                s
            } else {
                out.text
            };
            let written = match &cli.out {
                Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            match written {
                Ok(()) if out.ok => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
