//! Library side of the `multispin` binary: argument types, one function per
//! subcommand, and CSV/JSON rendering.

pub mod args;
pub mod commands;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Format, OutputArgs};
use commands::{CliResult, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

pub fn run(command: &Command) -> CliResult<Report> {
    match command {
        Command::Fig2(a) => commands::fig2(a),
        Command::Fig4(a) => commands::fig4(a),
        Command::Fig6(a) => commands::fig6(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Mabk(a) => commands::mabk(a),
        Command::Cfrd(a) => commands::cfrd(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Fig2(a) => &a.output,
        Command::Fig4(a) => &a.output,
        Command::Fig6(a) => &a.output,
        Command::Bounds(a) => &a.output,
        Command::Mabk(a) => &a.output,
        Command::Cfrd(a) => &a.output,
        Command::Verify(a) => &a.output,
    }
}

/// The single JSON document for a report.
pub fn to_json(report: &Report) -> Value {
    let mut doc = serde_json::Map::new();
    doc.insert("rows".into(), report.table.json_rows());
    if let Some((name, t)) = &report.extra {
        doc.insert((*name).into(), t.json_rows());
    }
    doc.insert(
        "meta".into(),
        json!({
            "command": report.command,
            "config": report.config,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": report.seed,
        }),
    );
    Value::Object(doc)
}

/// `dir/stem.csv` → `dir/stem.<name>.csv`.
pub fn sibling_path(path: &Path, name: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let file = match path.extension() {
        Some(ext) => format!("{stem}.{name}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{name}"),
    };
    path.with_file_name(file)
}

/// Writes a report. CSV puts a second table in a sibling file, or after a
/// blank line on stdout; JSON keeps everything in one document.
pub fn emit(report: &Report, output: &OutputArgs) -> CliResult<()> {
    let render_main = |w: &mut dyn Write| -> CliResult<()> {
        match output.format {
            Format::Csv => report.table.write_csv(&mut *w)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &to_json(report)).map_err(std::io::Error::from)?;
                writeln!(w)?;
            }
        }
        Ok(())
    };
    let extra = match output.format {
        Format::Csv => report.extra.as_ref(),
        Format::Json => None,
    };
    match &output.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            render_main(&mut f)?;
            f.flush()?;
            if let Some((name, t)) = extra {
                let mut f = std::io::BufWriter::new(std::fs::File::create(sibling_path(path, name))?);
                t.write_csv(&mut f)?;
                f.flush()?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            render_main(&mut w)?;
            if let Some((_, t)) = extra {
                writeln!(w)?;
                t.write_csv(&mut w)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = run(&cli.command).and_then(|report| {
        emit(&report, output_args(&cli.command))?;
        Ok(report.failed)
    });
    match result {
        Ok(false) => EXIT_OK,
        Ok(true) => {
            eprintln!("error: verification failed: at least one oracle maximum disagrees with its analytic bound");
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
