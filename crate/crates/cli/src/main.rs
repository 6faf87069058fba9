use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mathpar_cli::{format_results, has_errors, render_with_outputs, repl, Format, Settings};

#[derive(Parser)]
#[command(name = "mathpar", version, about = "Run, explore and render Mathpar documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a document and print each cell's results.
    Run {
        /// Document to run, or `-` for standard input.
        path: PathBuf,
        #[command(flatten)]
        session: SessionArgs,
        #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
        format: FormatArg,
    },
    /// Read and evaluate cells interactively.
    Repl {
        #[command(flatten)]
        session: SessionArgs,
    },
    /// Write the document with an OUT block after every evaluated cell.
    Render {
        /// Document to render, or `-` for standard input.
        path: PathBuf,
        /// Where to write the result, or `-` for standard output.
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        session: SessionArgs,
    },
}

#[derive(Args)]
struct SessionArgs {
    /// Decimal places used by \value.
    #[arg(long, default_value_t = 2)]
    precision: u32,
    /// Variable that \solve solves for.
    #[arg(long, default_value = "x")]
    unknown: String,
}

impl SessionArgs {
    fn settings(&self) -> Settings {
        Settings {
            precision: self.precision,
            unknown: self.unknown.clone(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Latex,
    Plain,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Latex => Format::Latex,
            FormatArg::Plain => Format::Plain,
            FormatArg::Json => Format::Json,
        }
    }
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_output(path: &Path, text: &str) -> Result<(), String> {
    if path == Path::new("-") {
        return io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write standard output: {e}"));
    }
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn execute(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Run { path, session, format } => {
            let text = read_input(&path)?;
            let mut env = session.settings().env()?;
            let results = env.eval_document(&text);
            let out = format_results(&results, format.into());
            write_output(Path::new("-"), &out)?;
            Ok(!has_errors(&results))
        }
        Command::Repl { session } => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            repl(stdin.lock(), &mut io::stdout(), &session.settings(), prompt)
                .map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Render { path, output, session } => {
            let text = read_input(&path)?;
            let mut env = session.settings().env()?;
            let (rendered, results) = render_with_outputs(&text, &mut env);
            write_output(&output, &rendered)?;
            Ok(!has_errors(&results))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("mathpar: {message}");
            ExitCode::from(2)
        }
    }
}
