//! `plhtpy`: command-line front end of the PL homotopy toolkit.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! names it and a witness), 2 on unreadable or invalid input.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Settings;

#[derive(Parser)]
#[command(name = "plhtpy", version, about = "Exact PL homotopy toolkit")]
struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 20240917)]
    seed: u64,
    /// Subdivision rounds allowed when approximating.
    #[arg(long, global = true, default_value_t = 8)]
    max_rounds: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Add wall-clock timing to the report (breaks byte stability).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check an SCX or SCX-M document.
    Validate { input: String },
    /// Barycentric subdivision.
    Subdivide {
        input: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
        /// Fine complex, declared subcomplexes carried along.
        #[arg(long)]
        out: Option<PathBuf>,
        /// The subdivision witness as an identity homeomorphism.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Star of a subcomplex.
    Star {
        input: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest closed subcomplex.
    Core {
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a normal homeomorphism on a subcomplex to the whole complex.
    ExtendNormal {
        input: String,
        #[arg(long)]
        sub: String,
        /// Homeomorphism on the subcomplex; identity when omitted.
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the straight-line homotopy from the identity.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check the normality conditions of a homeomorphism.
    VerifyNormal {
        input: String,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Simplicial approximation with a homotopy certificate.
    Approximate {
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Simplicial approximation relative to a fixed subcomplex.
    Simplicialize {
        input: String,
        #[arg(long)]
        fixed: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Re-check a homotopy certificate.
    VerifyCert { input: String },
    /// Extend a homotopy on a subcomplex to the whole cylinder.
    ExtendHomotopy {
        f: String,
        h: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Homology {
        input: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    RelHomology {
        input: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Long exact sequence of a pair, checked for exactness.
    Les {
        input: String,
        #[arg(long)]
        sub: String,
    },
    Pi0 { input: String },
    Pi1 {
        input: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Abelianized fundamental group against first homology.
    Hurewicz {
        input: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Second homotopy group of a certifiably simply connected complex.
    Pi2 {
        input: String,
        #[arg(long)]
        base: Option<String>,
    },
    Euler { input: String },
    /// Built-in complexes and maps.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    /// Print or write the canonical text of an entry.
    Emit {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> anyhow::Result<Option<report::Report>> {
    let s = Settings {
        seed: cli.seed,
        max_rounds: cli.max_rounds,
    };
    use Command::*;
    let r = match &cli.command {
        Validate { input } => commands::validate(input)?,
        Subdivide { input, times, out, witness } => commands::subdivide(input, *times, out, witness)?,
        Star { input, sub, out } => commands::star(input, sub, out)?,
        Core { input, out } => commands::core(input, out)?,
        ExtendNormal { input, sub, phi, out, cert } => commands::extend_normal_cmd(input, sub, phi, out, cert)?,
        VerifyNormal { input, cert } => commands::verify_normal_cmd(input, cert)?,
        Approximate { input, out, cert } => commands::approximate(&s, input, out, cert)?,
        Simplicialize { input, fixed, out, cert } => commands::simplicialize(&s, input, fixed, out, cert)?,
        VerifyCert { input } => commands::verify_cert(input)?,
        ExtendHomotopy { f, h, sub, out } => commands::extend_homotopy_cmd(f, h, sub, out)?,
        Homology { input, dim } => commands::homology_cmd(input, *dim)?,
        RelHomology { input, sub, dim } => commands::rel_homology_cmd(input, sub, *dim)?,
        Les { input, sub } => commands::les_cmd(input, sub)?,
        Pi0 { input } => commands::pi0_cmd(input)?,
        Pi1 { input, base } => commands::pi1_cmd(&s, input, base)?,
        Hurewicz { input, base } => commands::hurewicz_cmd(&s, input, base)?,
        Pi2 { input, base } => commands::pi2_cmd(input, base)?,
        Euler { input } => commands::euler_cmd(input)?,
        Corpus { action } => match action {
            CorpusAction::List => commands::corpus_list(),
            CorpusAction::Emit { name, out: Some(out) } => commands::corpus_emit(name, out)?,
            CorpusAction::Emit { name, out: None } => {
                print!("{}", commands::corpus_text(name)?);
                return Ok(None);
            }
        },
    };
    Ok(Some(r))
}

/// Variant name of a library error, e.g. `DuplicateSimplex`.
fn error_kind(e: &plhtpy_core::Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(mut r)) => {
            if cli.timing {
                r.timing_ms = Some(start.elapsed().as_millis());
            }
            match cli.format {
                Format::Text => print!("{}", r.render_text()),
                Format::Json => print!("{}", r.render_json()),
            }
            if r.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            match e.chain().find_map(|c| c.downcast_ref::<plhtpy_core::Error>()) {
                Some(kind) => eprintln!("error[{}]: {e:#}", error_kind(kind)),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
