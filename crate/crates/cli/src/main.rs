mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

#[derive(Parser, Debug)]
#[command(name = "strata", version, about = "Exact multi-scale numbers, level-shift formulas, finite ultrafilters and Ramsey/density searches")]
pub struct Cli {
    /// Emit a single JSON document.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of scale variables w0, w1, ….
    #[arg(long, global = true, default_value_t = strata::Scales::DEFAULT)]
    scales: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse formulas and print their canonical form.
    Parse(ParseArgs),
    /// Shift every level and embedding label up by r.
    Shift {
        #[arg(long)]
        r: usize,
        formula: String,
    },
    /// Homogeneous-shift instance of a formula.
    Ho {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        label: String,
        formula: String,
    },
    /// Transfer instance of a pure membership formula.
    Gt {
        #[arg(long)]
        label: String,
        formula: String,
    },
    /// Evaluate a formula over finite domains.
    Eval(EvalArgs),
    /// Canonical form of a number.
    Num {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Compare two numbers.
    Cmp {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Shadow at level r.
    Shadow {
        #[arg(long)]
        r: usize,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Limited / infinitesimal at level r.
    Classify {
        #[arg(long)]
        r: usize,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Support of a number, and membership in a level.
    Level {
        #[arg(long)]
        label: Option<String>,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Rename scales along the order isomorphism between two labels.
    Embed {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Derivative of a rational function at a point.
    Deriv {
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Ultrafilter checks on a finite ground.
    UfCheck(UfCheckArgs),
    /// Tensor products and powers of ultrafilters.
    UfTensor(UfTensorArgs),
    /// Brute-force ultrapower check on a finite structure.
    UfLos(UfLosArgs),
    /// Homogeneous sets for a coloring.
    Ramsey(RamseyArgs),
    /// Replay the embedding side conditions of the Ramsey argument.
    Replay {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        /// Random elements drawn per sampled clause.
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Finite-window upper Banach density.
    Density {
        #[arg(long)]
        window: usize,
        /// Set file: whitespace-separated naturals or a JSON array.
        #[arg(long)]
        set: String,
    },
    /// Density relative to an ambient set.
    RelDensity {
        #[arg(long)]
        window: usize,
        #[arg(long)]
        set: String,
        #[arg(long)]
        ambient: String,
        /// Tolerance, an exact rational such as 0 or 1/8.
        #[arg(long, default_value = "0")]
        tol: String,
    },
    /// Least k-term arithmetic progression in a set.
    Ap {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        set: String,
    },
    /// Largest subset of [0, n) without a k-term progression.
    ApFree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    /// Accept the unbounded quantifier `Aall`.
    #[arg(long)]
    extended: bool,
    /// Formula file, one per line, `#` comments.
    #[arg(long, conflicts_with = "formula")]
    file: Option<String>,
    #[arg(required_unless_present = "file")]
    formula: Option<String>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    formula: String,
    /// Free variable value, `name=expr` or `name=[expr, …]` for a set.
    #[arg(long = "let", value_name = "NAME=VALUE")]
    bindings: Vec<String>,
    /// Quantifier candidates, `name=[value, …]`.
    #[arg(long = "domain", value_name = "NAME=[VALUES]")]
    domains: Vec<String>,
    /// JSON file with `env` and `domains` objects.
    #[arg(long)]
    context: Option<String>,
}

#[derive(Args, Debug)]
pub struct UfCheckArgs {
    /// Ground size for enumeration and coherence checks.
    #[arg(long, required_unless_present = "family")]
    ground: Option<usize>,
    /// Re-derive the ultrafilters by filtering every family.
    #[arg(long)]
    exhaustive: bool,
    /// JSON family file to test.
    #[arg(long, conflicts_with_all = ["ground", "coherence"])]
    family: Option<String>,
    /// Check coherence of the projections to labels A ⊆ B.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    coherence: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct UfTensorArgs {
    /// Ultrafilter: `K:I` (principal at I on K points) or a JSON family file.
    #[arg(long)]
    u: String,
    /// Right factor of the tensor product.
    #[arg(long, conflicts_with = "power")]
    v: Option<String>,
    /// Tensor power instead of a product.
    #[arg(long, required_unless_present = "v")]
    power: Option<usize>,
    /// Project the power to this label.
    #[arg(long, requires = "power")]
    label: Option<String>,
}

#[derive(Args, Debug)]
pub struct UfLosArgs {
    /// JSON structure file.
    #[arg(long)]
    structure: String,
    /// Ultrafilter: `K:I` or a JSON family file.
    #[arg(long)]
    u: String,
    /// Check one formula instead of the whole family.
    #[arg(long)]
    formula: Option<String>,
}

#[derive(Args, Debug)]
pub struct RamseyArgs {
    /// JSON coloring file.
    #[arg(long, conflicts_with = "generator")]
    coloring: Option<String>,
    /// Named generator: parity-sum, pentagon or constant:C.
    #[arg(long, requires_all = ["n", "size"])]
    generator: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Ground size N.
    #[arg(long)]
    size: Option<usize>,
    /// Size of the homogeneous set sought.
    #[arg(long, required_unless_present = "greedy")]
    h: Option<usize>,
    /// Run the greedy construction instead of the exact search.
    #[arg(long, conflicts_with = "h")]
    greedy: bool,
}

/// A successful command: machine-readable result and witness, plus the text
/// form printed without `--json`.
pub struct Outcome {
    pub result: Json,
    pub witness: Json,
    pub text: String,
}

#[derive(Debug)]
pub enum Failure {
    Domain(strata::Error),
    Input { kind: &'static str, message: String },
}

impl Failure {
    fn kind(&self) -> &str {
        match self {
            Failure::Domain(e) => e.kind(),
            Failure::Input { kind, .. } => kind,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Input { message, .. } => message.clone(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(e) if !e.is_parse_error() => 1,
            _ => 2,
        }
    }
}

impl From<strata::Error> for Failure {
    fn from(e: strata::Error) -> Self {
        Failure::Domain(e)
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse(_) => "parse",
        Command::Shift { .. } => "shift",
        Command::Ho { .. } => "ho",
        Command::Gt { .. } => "gt",
        Command::Eval(_) => "eval",
        Command::Num { .. } => "num",
        Command::Cmp { .. } => "cmp",
        Command::Shadow { .. } => "shadow",
        Command::Classify { .. } => "classify",
        Command::Level { .. } => "level",
        Command::Embed { .. } => "embed",
        Command::Deriv { .. } => "deriv",
        Command::UfCheck(_) => "uf-check",
        Command::UfTensor(_) => "uf-tensor",
        Command::UfLos(_) => "uf-los",
        Command::Ramsey(_) => "ramsey",
        Command::Replay { .. } => "replay",
        Command::Density { .. } => "density",
        Command::RelDensity { .. } => "rel-density",
        Command::Ap { .. } => "ap",
        Command::ApFree { .. } => "ap-free",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if std::env::args().any(|a| a == "--json") {
                let doc = json!({
                    "command": Json::Null,
                    "status": "error",
                    "result": Json::Null,
                    "witness": Json::Null,
                    "error": {"kind": "UsageError", "message": e.render().to_string().trim_end()},
                });
                println!("{doc}");
            } else {
                let _ = e.print();
            }
            return ExitCode::from(2);
        }
    };
    let name = command_name(&cli.command);
    match commands::run(&cli) {
        Ok(out) => {
            if cli.json {
                let doc = json!({
                    "command": name,
                    "status": "ok",
                    "result": out.result,
                    "witness": out.witness,
                });
                println!("{doc}");
            } else {
                println!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json {
                let doc = json!({
                    "command": name,
                    "status": "error",
                    "result": Json::Null,
                    "witness": Json::Null,
                    "error": {"kind": f.kind(), "message": f.message()},
                });
                println!("{doc}");
            } else {
                eprintln!("error [{}]: {}", f.kind(), f.message());
            }
            ExitCode::from(f.exit_code())
        }
    }
}
