//! Document running, rendering and the interactive loop behind the
//! `mathpar` binary.

use std::io::{self, BufRead, Write};

use mathpar::cells::cell_ranges;
use mathpar::render::{render_expr, render_symbol, Style};
use mathpar::{CellReport, CellResult, Env, Severity, SymbolName};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Plain,
    Latex,
    Json,
}

/// Session settings shared by every command.
#[derive(Clone, Debug)]
pub struct Settings {
    pub precision: u32,
    pub unknown: String,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            precision: mathpar::calculus::DEFAULT_PRECISION,
            unknown: "x".to_string(),
        }
    }
}

impl Settings {
    pub fn env(&self) -> Result<Env, String> {
        let mut env = Env::new();
        env.set_precision(self.precision);
        let name = SymbolName::parse(&self.unknown)
            .ok_or_else(|| format!("invalid unknown name `{}`", self.unknown))?;
        env.set_unknown(name).map_err(|e| e.to_string())?;
        Ok(env)
    }
}

pub fn has_errors(results: &[CellResult]) -> bool {
    results.iter().any(CellResult::has_errors)
}

fn output_lines(result: &CellResult) -> Vec<String> {
    result
        .outputs
        .iter()
        .map(|o| {
            let value = render_expr(&o.value, Style::Display);
            match &o.label {
                Some(name) => format!("{} = {value}", render_symbol(name)),
                None => value,
            }
        })
        .collect()
}

fn diagnostic_lines(result: &CellResult) -> Vec<String> {
    result
        .diagnostics
        .iter()
        .map(|d| {
            let severity = match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            format!(
                "{severity}[{}] at {}..{}: {}",
                d.code, d.span.start, d.span.end, d.message
            )
        })
        .collect()
}

/// Formats the results of a whole document.
pub fn format_results(results: &[CellResult], format: Format) -> String {
    match format {
        Format::Json => {
            let reports: Vec<CellReport> = results
                .iter()
                .enumerate()
                .map(|(i, r)| CellReport::new(i, r))
                .collect();
            let mut text = serde_json::to_string_pretty(&reports).expect("reports serialize");
            text.push('\n');
            text
        }
        Format::Plain | Format::Latex => {
            let mut out = String::new();
            for r in results {
                for line in output_lines(r) {
                    if format == Format::Latex {
                        out.push_str(&format!("${line}$\n"));
                    } else {
                        out.push_str(&line);
                        out.push('\n');
                    }
                }
                for line in diagnostic_lines(r) {
                    out.push_str(&line);
                    out.push('\n');
                }
            }
            out
        }
    }
}

const OUT_MARKER: &str = "\n\"OUT:\n";

fn escape_passive(line: &str) -> String {
    let mut escaped = line.replace('"', "\\\"");
    if escaped.ends_with('\\') {
        escaped.push(' ');
    }
    escaped
}

/// Drops an `OUT:` block left by an earlier render.
fn strip_out_block(cell: &str) -> &str {
    match cell.rfind(OUT_MARKER) {
        Some(at) if cell.ends_with('"') && !cell[at + OUT_MARKER.len()..cell.len() - 1]
            .replace("\\\"", "")
            .contains('"') =>
        {
            &cell[..at]
        }
        _ => cell,
    }
}

/// Evaluates `text` and returns it with an `OUT:` block after every cell
/// that produced outputs or diagnostics.
pub fn render_with_outputs(text: &str, env: &mut Env) -> (String, Vec<CellResult>) {
    let mut rendered = String::with_capacity(text.len());
    let mut results = Vec::new();
    let mut copied = 0;
    for range in cell_ranges(text) {
        let cell = strip_out_block(&text[range.clone()]);
        let result = env.eval_cell(cell);
        rendered.push_str(&text[copied..range.start]);
        rendered.push_str(cell);
        copied = range.end;

        let lines: Vec<String> = output_lines(&result)
            .into_iter()
            .map(|l| format!("${l}$"))
            .chain(diagnostic_lines(&result))
            .collect();
        if !lines.is_empty() {
            rendered.push_str(OUT_MARKER);
            for line in lines {
                rendered.push_str(&escape_passive(&line));
                rendered.push('\n');
            }
            rendered.push('"');
        }
        results.push(result);
    }
    rendered.push_str(&text[copied..]);
    (rendered, results)
}

const HELP: &str = "\
Enter statements; a blank line evaluates the cell.
  :reset            forget all bindings and settings
  :unknown <name>   variable solved for by \\solve
  :precision <n>    decimal places used by \\value
  :quit             leave
";

/// Reads cells from `input` until end of input or `:quit`.
pub fn repl<R: BufRead, W: Write>(
    input: R,
    output: &mut W,
    settings: &Settings,
    prompt: bool,
) -> io::Result<()> {
    let mut env = settings.env().map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    let mut cell = String::new();
    let mut lines = input.lines();
    loop {
        if prompt {
            write!(output, "{}", if cell.is_empty() { "mathpar> " } else { "...> " })?;
            output.flush()?;
        }
        let line = lines.next().transpose()?;
        let Some(line) = line else {
            if !cell.trim().is_empty() {
                submit(&mut env, &cell, output)?;
            }
            return Ok(());
        };

        if cell.is_empty() && line.trim_start().starts_with(':') {
            let mut words = line.split_whitespace();
            let command = words.next().unwrap_or_default();
            let arg = words.next();
            match (command, arg) {
                (":quit" | ":q", _) => return Ok(()),
                (":reset", _) => {
                    env.reset();
                    writeln!(output, "session reset")?;
                }
                (":unknown", Some(name)) => match SymbolName::parse(name) {
                    Some(n) => match env.set_unknown(n) {
                        Ok(()) => writeln!(output, "unknown = {name}")?,
                        Err(e) => writeln!(output, "error[{}]: {e}", e.code())?,
                    },
                    None => writeln!(output, "invalid name `{name}`")?,
                },
                (":precision", Some(n)) => match n.parse() {
                    Ok(places) => {
                        env.set_precision(places);
                        writeln!(output, "precision = {places}")?;
                    }
                    Err(_) => writeln!(output, "invalid precision `{n}`")?,
                },
                (":help", _) => write!(output, "{HELP}")?,
                _ => writeln!(output, "unknown command `{}`; try :help", line.trim())?,
            }
            continue;
        }

        if line.trim().is_empty() {
            if !cell.trim().is_empty() {
                submit(&mut env, &cell, output)?;
            }
            cell.clear();
        } else {
            if !cell.is_empty() {
                cell.push('\n');
            }
            cell.push_str(&line);
        }
    }
}

fn submit<W: Write>(env: &mut Env, cell: &str, output: &mut W) -> io::Result<()> {
    let result = env.eval_cell(cell);
    write!(output, "{}", format_results(&[result], Format::Plain))
}
