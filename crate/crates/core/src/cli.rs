//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::apply::apply_suggestions;
use crate::corpus::{Corpus, PackageLicenseIndex};
use crate::error::{Error, Result};
use crate::extract::interpret;
use crate::pipeline::{analyze, AnalysisOptions};
use crate::report::{render_text, Report};
use crate::resolve::Preference;
use crate::scan::{ScanOptions, DEFAULT_INLINE_WINDOW};

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Clean = 0,
    Issues = 1,
    Error = 2,
}

#[derive(Parser, Debug)]
#[command(
    name = "licentia",
    version,
    about = "Find and resolve license incompatibilities in a project"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a project directory and write a report
    Run(RunArgs),
    /// Print the term matrix of a license text as JSON
    Interpret {
        file: PathBuf,
        /// Identifier recorded in the matrix
        #[arg(long, default_value = "custom")]
        id: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prefer {
    Official,
    Custom,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Project root
    path: PathBuf,
    /// Report file
    #[arg(long, default_value = "licentia-report.json")]
    out: PathBuf,
    /// Format of the summary printed to stdout
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// JSON map from package name to SPDX identifier
    #[arg(long)]
    pkg_index: Option<PathBuf>,
    /// License corpus JSON
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Resolution tried first
    #[arg(long, value_enum, default_value_t = Prefer::Official)]
    prefer: Prefer,
    /// Rewrite license files with the suggestions
    #[arg(long)]
    write: bool,
    /// Print the license hierarchy as JSON instead of the summary
    #[arg(long)]
    dump_tree: bool,
    /// Leading lines of a source file searched for a license header
    #[arg(long, default_value_t = DEFAULT_INLINE_WINDOW)]
    max_inline_lines: usize,
}

/// Parses `args` (program name first) and runs the command, writing
/// output to `stdout` and `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                ExitStatus::Error
            } else {
                ExitStatus::Clean
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => run_project(&a, stdout, stderr),
        Command::Interpret { file, id } => interpret_file(&file, &id, stdout),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ExitStatus::Error
        }
    }
}

fn interpret_file(file: &Path, id: &str, stdout: &mut dyn Write) -> Result<ExitStatus> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
    let matrix = interpret(&text, id);
    writeln!(stdout, "{}", serde_json::to_string_pretty(&matrix)?).map_err(|e| Error::io(Path::new("<stdout>"), e))?;
    Ok(ExitStatus::Clean)
}

fn run_project(a: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<ExitStatus> {
    if !a.path.is_dir() {
        return Err(Error::io(
            &a.path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let corpus = match &a.corpus {
        Some(p) => Corpus::load(p)?,
        None => Corpus::bundled(),
    };
    let index = match &a.pkg_index {
        Some(p) => PackageLicenseIndex::load(p)?,
        None => PackageLicenseIndex::bundled(),
    };
    let opts = AnalysisOptions {
        scan: ScanOptions {
            max_inline_lines: a.max_inline_lines,
        },
        prefer: match a.prefer {
            Prefer::Official => Preference::Official,
            Prefer::Custom => Preference::Custom,
        },
    };
    let analysis = analyze(&a.path, &corpus, &index, &opts)?;
    let report = Report::new(&analysis, corpus.version());
    std::fs::write(&a.out, report.to_json() + "\n").map_err(|e| Error::io(&a.out, e))?;

    let out_err = |e| Error::io(Path::new("<stdout>"), e);
    if a.dump_tree {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&analysis.tree.to_json())?).map_err(out_err)?;
    } else {
        match a.format {
            Format::Text => write!(stdout, "{}", render_text(&report)).map_err(out_err)?,
            Format::Json => writeln!(stdout, "{}", report.to_json()).map_err(out_err)?,
        }
    }
    if a.write {
        let (written, warnings) = apply_suggestions(&a.path, &analysis, &corpus)?;
        for w in warnings {
            let _ = writeln!(stderr, "warning: {w}");
        }
        for p in written {
            let _ = writeln!(stderr, "wrote {p}");
        }
    }
    Ok(if report.has_issues() {
        ExitStatus::Issues
    } else {
        ExitStatus::Clean
    })
}
