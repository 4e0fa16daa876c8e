//! Command-line front end: reads a structure-constant document, runs one
//! computation and writes a deterministic report.

pub mod commands;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Failure, Overrides, Setup};
use input::{parse_field, Document, InputError};
use report::{digest, Emit};

#[derive(Parser, Debug)]
#[command(name = "massey", version, about = "Hochschild-type cohomology, A-infinity obstructions and Massey products of finite graded algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the A_k structure equations.
    Verify(Args),
    /// Dimensions of the cochain and cohomology groups in a window.
    Cohomology(Args),
    /// The obstruction class to extending the structure by one arity.
    Obstruct(Args),
    /// Extend arity by arity up to the target.
    Extend(Args),
    /// The universal Massey product and, given a window, its Massey complex.
    Massey(Args),
    /// Run a vanishing criterion over a range of anti-diagonals.
    Check(Args),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EmitArg {
    Json,
    Table,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Args {
    /// Input document, or "-" for stdin.
    pub input: String,
    /// Bidegree window p_min:p_max,q_min:q_max.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Q or Fp:<p>; overrides the document.
    #[arg(long)]
    pub field: Option<String>,
    /// Truncation arity of the structure.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub target_arity: Option<usize>,
    /// Sparsity; 0 detects it from the degrees.
    #[arg(long)]
    pub sparse_d: Option<usize>,
    /// Criterion tag for `check`.
    #[arg(long)]
    pub theorem: Option<String>,
    /// algebra, pair or bimodule.
    #[arg(long)]
    pub context: Option<String>,
    /// Length offset d of the Massey class ⟨m_{d+2}⟩.
    #[arg(long = "length-offset", visible_alias = "d")]
    pub length_offset: Option<usize>,
    /// Largest n checked by `check`.
    #[arg(long)]
    pub range: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub emit: EmitArg,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn input_failure(e: InputError) -> Output {
    Output {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: 2,
    }
}

/// Runs one command. `stdin` is read only when the input is "-".
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Output { stdout: text, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: text, code: 2 }
            };
        }
    };
    let (name, args, f): (&str, &Args, fn(&Setup) -> Result<report::Report, Failure>) = match &cli.command {
        Command::Verify(a) => ("verify", a, commands::verify),
        Command::Cohomology(a) => ("cohomology", a, commands::cohomology),
        Command::Obstruct(a) => ("obstruct", a, commands::obstruct),
        Command::Extend(a) => ("extend", a, commands::extend),
        Command::Massey(a) => ("massey", a, commands::massey),
        Command::Check(a) => ("check", a, commands::check),
    };
    let _ = name;
    let mut bytes = Vec::new();
    let read = if args.input == "-" {
        stdin.read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(&args.input).map(|b| bytes = b)
    };
    if let Err(e) = read {
        return input_failure(InputError::at(&args.input, e.to_string()));
    }
    let Ok(text) = std::str::from_utf8(&bytes) else {
        return input_failure(InputError::at(&args.input, "input is not UTF-8"));
    };
    let field = match args.field.as_deref().map(parse_field).transpose() {
        Ok(f) => f,
        Err(m) => return input_failure(InputError::at("--field", m)),
    };
    let ov = Overrides {
        window: args.window.clone(),
        field,
        k: args.k,
        target_arity: args.target_arity,
        sparse_d: args.sparse_d,
        theorem: args.theorem.clone(),
        context: args.context.clone(),
        d: args.length_offset,
        range: args.range,
    };
    let setup = match Document::parse(text).and_then(|doc| Setup::new(doc, ov)) {
        Ok(s) => s,
        Err(e) => return input_failure(e),
    };
    let mut report = match f(&setup) {
        Ok(r) => r,
        Err(Failure::Input(e)) => return input_failure(e),
        Err(Failure::Math(m)) => {
            // stopped before any result: an empty report still carries the header
            let mut r = report::Report {
                command: name,
                digest: String::new(),
                field: setup.field,
                window: setup.window,
                parameters: serde_json::Value::Null,
                audit: Default::default(),
                result: None,
                failure: Some(m),
            };
            r.audit.multiplication = None;
            r
        }
    };
    report.digest = digest(&bytes);
    let emit = match args.emit {
        EmitArg::Json => Emit::Json,
        EmitArg::Table => Emit::Table,
    };
    let code = report.exit_code();
    let stderr = match &report.failure {
        Some(m) => format!("{name}: {m}\n"),
        None if code != 0 => format!("{name}: sign-convention audit failed\n"),
        None => String::new(),
    };
    Output {
        stdout: report.render(emit),
        stderr,
        code,
    }
}
