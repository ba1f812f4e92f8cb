//! `opcalc`: the command-line front end and the document format.
//!
//! [`run`] is the whole binary as a pure function from arguments to exit code
//! and output, so tests can drive it in-process.

pub mod format;
pub mod report;
mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use opcalc_core::algebras::TowerMode;
use opcalc_core::exactlin::SignRule;

pub use format::{Document, FormatError, FORMAT_VERSION};
pub use report::Report;

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code: 2, stdout: String::new(), stderr }
    }
}

#[derive(Parser, Debug)]
#[command(name = "opcalc", version, about = "Exact computations with operads, triples and their algebras")]
struct Cli {
    #[command(subcommand)]
    group: Group,
    #[command(flatten)]
    global: Globals,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct Globals {
    /// Print the report as a JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the produced document (or the report) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Use only deterministic fixtures (always the case; kept for scripts).
    #[arg(long, global = true)]
    pub seedless: bool,
    #[arg(long, global = true, value_parser = parse_sign, value_name = "koszul|plain")]
    pub sign: Option<SignRule>,
    #[arg(long, global = true, value_name = "N")]
    pub max_arity: Option<usize>,
    /// Internal degree cap.
    #[arg(long, global = true, value_name = "D", allow_negative_numbers = true)]
    pub degree: Option<i32>,
    #[arg(long, global = true, value_parser = parse_mode, value_name = "direct|derived")]
    pub mode: Option<TowerMode>,
}

impl Globals {
    pub fn sign(&self) -> SignRule {
        self.sign.unwrap_or(SignRule::Koszul)
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity.unwrap_or(4)
    }

    pub fn degree(&self) -> i32 {
        self.degree.unwrap_or(4)
    }

    pub fn mode(&self) -> TowerMode {
        self.mode.unwrap_or(TowerMode::Direct)
    }
}

fn parse_sign(s: &str) -> Result<SignRule, String> {
    SignRule::parse(s).ok_or_else(|| format!("expected koszul or plain, got {s:?}"))
}

fn parse_mode(s: &str) -> Result<TowerMode, String> {
    TowerMode::parse(s).ok_or_else(|| format!("expected direct or derived, got {s:?}"))
}

/// An input given either as a document path or as a builtin name.
#[derive(Args, Debug, Clone)]
pub(crate) struct Source {
    /// Document to read.
    pub file: Option<PathBuf>,
    /// Builtin name: com, assoc, lie, poisson(n); triples also accept tensor, symmetric, free-lie.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Operads: builtins, law checks, free and quadratic operads.
    Operad {
        #[command(subcommand)]
        cmd: OperadCmd,
    },
    /// Analytic triples and the operads they induce.
    Triple {
        #[command(subcommand)]
        cmd: TripleCmd,
    },
    /// Algebras over operads, their towers and splittings.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Hochschild homology of a polynomial ring against differential forms.
    Hh {
        #[arg(long)]
        vars: usize,
        #[arg(long, default_value_t = 3)]
        q_max: usize,
    },
    /// Calculus of analytic functors.
    Calc {
        #[command(subcommand)]
        cmd: CalcCmd,
    },
}

#[derive(Subcommand, Debug)]
pub(crate) enum OperadCmd {
    /// Emit a builtin operad.
    Builtin {
        #[arg(long)]
        name: String,
    },
    /// Check unit, equivariance and associativity.
    Check(Source),
    /// The free operad on a sequence document.
    Free { file: PathBuf },
    /// A builtin given by its quadratic presentation (com, assoc or lie).
    Quadratic {
        #[arg(long)]
        name: String,
    },
    /// Primitive generation, tested on X = K^d in degree one.
    Primgen {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        dims: Vec<usize>,
    },
    /// The operad induced by a triple.
    Induced {
        /// Triple or operad document.
        file: Option<PathBuf>,
        #[arg(long)]
        triple: Option<String>,
    },
    /// The isomorphism from an operad to the operad of its triple.
    Roundtrip(Source),
}

#[derive(Subcommand, Debug)]
pub(crate) enum TripleCmd {
    /// Check the triple laws.
    Check(Source),
    /// The canonical map from the induced operad's triple.
    Nu(Source),
    /// Compare the triple's multiplication with the induced operad action on F(X).
    Compat {
        #[command(flatten)]
        source: Source,
        /// X as degree:dim pairs, e.g. 1:2 or 1:1,2:1.
        #[arg(long, default_value = "1:2")]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
pub(crate) enum AlgebraCmd {
    /// A free algebra, optionally modulo relations; writes an algebra document.
    Free {
        #[arg(long)]
        name: String,
        /// Generators as degree:dim pairs.
        #[arg(long, default_value = "1:1")]
        gens: String,
        /// A relation as coef:word terms separated by ';', words comma separated (e.g. "1:0,1;-1:1,0").
        #[arg(long, allow_hyphen_values = true)]
        relation: Vec<String>,
        /// Replace the structure map in this arity by zero.
        #[arg(long)]
        kill: Vec<usize>,
    },
    /// Check the algebra laws.
    Check { file: PathBuf },
    /// The augmentation tower I/I^n.
    Tower {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Compare the tower layers with the prediction from the indecomposables.
    Layers {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Split the algebra by a section of C -> I/I^2.
    Split {
        file: PathBuf,
        /// Highest tower level compared (default: degree cap + 1).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Leray's splitting of a connected commutative algebra.
    Leray { file: PathBuf },
    /// PBW for a preset graded Lie algebra.
    Pbw {
        #[arg(long, default_value = "heisenberg")]
        lie: String,
    },
}

#[derive(Subcommand, Debug)]
pub(crate) enum CalcCmd {
    /// The k-th cross effect cr_k F(X, …, X).
    Cross {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "1:1")]
        x: String,
    },
    /// Taylor polynomials and layers P_n F(X), D_n F(X).
    Taylor {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "1:1")]
        x: String,
    },
    /// The differential ∇F(X; Y).
    Diff {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "1:1")]
        x: String,
        /// The base point Y; empty for Y = 0.
        #[arg(long, default_value = "")]
        at: String,
    },
    /// Split P_n F(X) into its homogeneous layers.
    Split {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "1:1")]
        x: String,
    },
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome::usage(text),
            };
        }
    };
    let g = cli.global;
    let result = match cli.group {
        Group::Operad { cmd } => commands::operad(cmd, &g),
        Group::Triple { cmd } => commands::triple(cmd, &g),
        Group::Algebra { cmd } => commands::algebra(cmd, &g),
        Group::Hh { vars, q_max } => commands::hh(vars, q_max, &g),
        Group::Calc { cmd } => commands::calc(cmd, &g),
    };
    match result {
        Ok((report, produced)) => finish(&report, produced, &g),
        Err(message) => Outcome::usage(format!("error: {message}")),
    }
}

fn finish(report: &Report, produced: Option<Document>, g: &Globals) -> Outcome {
    if let Some(path) = &g.out {
        let doc = produced.unwrap_or_else(|| report.document());
        if let Err(e) = std::fs::write(path, doc.emit()) {
            return Outcome::usage(format!("error: cannot write {}: {e}", path.display()));
        }
    }
    let stdout = if g.json { report.document().emit() } else { report.render() };
    let code = if report.holds == Some(false) { 1 } else { 0 };
    Outcome { code, stdout, stderr: String::new() }
}

/// Reads and parses a document, with the path in every diagnostic.
pub fn load(path: &std::path::Path) -> Result<Document, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Document::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn store(doc: &Document, path: &std::path::Path) -> Result<(), String> {
    std::fs::write(path, doc.emit()).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
