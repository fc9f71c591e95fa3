use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use models_cli::{
    check_max_degree, cmd_baut_rel, cmd_example, cmd_homology, cmd_parse_check, cmd_verify, CliError, Complex,
    ExampleKind, Format, Report,
};

/// Derivation models of relative self-equivalences of free dg Lie models.
///
/// MODEL is a model file or a builtin: cp:K, cp:K:N, sphere:N, disk, disk:1,
/// disk:2, boundary.
#[derive(Parser)]
#[command(name = "baut", version)]
struct Cli {
    /// Top degree reported.
    #[arg(long, global = true, default_value_t = 10)]
    max_degree: i64,
    /// Allow --max-degree above 24.
    #[arg(long, global = true)]
    force: bool,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a model or of its derivations.
    Homology {
        model: String,
        /// Model to use when the file declares several.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = Complex::Lie)]
        of: Complex,
    },
    /// H(Der(L_X‖L_A)⟨1⟩) for a map, compared with the twisted semidirect model.
    BautRel {
        model: String,
        #[arg(long)]
        map: Option<String>,
        /// Derivations vanishing on the image; works for any map.
        #[arg(long)]
        vanishing: bool,
    },
    /// Run one invariant suite.
    Verify {
        /// dsquare, jacobi, ce, mc, outer-axioms, zeta, spi, ses or cone-homotopy.
        suite: String,
        model: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        map: Option<String>,
        /// Negative control: flip signs so the suite must fail.
        #[arg(long)]
        corrupt: bool,
    },
    /// Print a builtin model file.
    Example {
        #[arg(value_enum)]
        kind: ExampleKind,
        /// k for cp (or k n for an inclusion), n for sphere.
        args: Vec<i64>,
    },
    /// Parse, build and reprint a model file.
    ParseCheck { file: String },
}

fn run(cli: &Cli, echo: &str) -> Result<Option<Report>, CliError> {
    check_max_degree(cli.max_degree, cli.force)?;
    let top = cli.max_degree;
    let report = match &cli.command {
        Command::Homology { model, name, of } => cmd_homology(echo, model, name.as_deref(), *of, top)?,
        Command::BautRel { model, map, vanishing } => cmd_baut_rel(echo, model, map.as_deref(), *vanishing, top)?,
        Command::Verify {
            suite,
            model,
            name,
            map,
            corrupt,
        } => cmd_verify(echo, suite, model, name.as_deref(), map.as_deref(), *corrupt, top)?,
        Command::Example { kind, args } => {
            print!("{}", cmd_example(*kind, args)?);
            return Ok(None);
        }
        Command::ParseCheck { file } => cmd_parse_check(echo, file, top)?,
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::iter::once("baut".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    match run(&cli, &echo) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            let text = report.render(cli.format);
            print!("{text}");
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
