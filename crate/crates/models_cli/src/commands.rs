//! The subcommands, as functions from inputs to reports.

use std::path::Path;

use crate::builtins::{
    boundary_fixture, builtin_cp, builtin_cp_inclusion, builtin_sphere, disk_file, resolve_builtin, single,
};
use crate::error::CliError;
use crate::pipeline::{
    cover_homology, lie_homology, relative_run, run_suite, vanishing_homology, SuiteInput,
};
use crate::report::{DimTable, Report, Verdict};
use crate::spec::{parse_model_file, ModelFile};

/// Largest `--max-degree` accepted without `--force`.
pub const DEGREE_GUARD: i64 = 24;

pub fn check_max_degree(n: i64, force: bool) -> Result<(), CliError> {
    if n < 1 {
        return Err(CliError::Range(format!("--max-degree must be at least 1, got {n}")));
    }
    if n > DEGREE_GUARD && !force {
        return Err(CliError::DegreeTooLarge(n));
    }
    Ok(())
}

/// A path to a model file, or a builtin name such as `cp:2` or `disk:1`.
pub fn load(reference: &str) -> Result<ModelFile, CliError> {
    let path = Path::new(reference);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        parse_model_file(&text)
    } else {
        resolve_builtin(reference)
    }
}

fn describe(file: &ModelFile, report: &mut Report) {
    for m in &file.models {
        report.models.push(m.describe());
    }
    for f in &file.maps {
        let images: Vec<String> = f.images.iter().map(|(g, e)| format!("{g} ↦ {e}")).collect();
        report
            .models
            .push(format!("map {} : {} -> {} ({})", f.name, f.source, f.target, images.join(", ")));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Complex {
    /// the model itself
    Lie,
    /// its derivations, truncated at ⟨1⟩
    Der,
}

pub fn cmd_homology(
    command: &str,
    reference: &str,
    model: Option<&str>,
    complex: Complex,
    top: i64,
) -> Result<Report, CliError> {
    let file = load(reference)?;
    let spec = file.choose_model(model)?;
    let mut report = Report::new(command);
    report.models.push(spec.describe());
    let (title, rows) = match complex {
        Complex::Lie => {
            let l = spec.build(top + 1)?;
            (format!("H({})", spec.name), lie_homology(&l, 1, top)?)
        }
        Complex::Der => {
            let l = spec.build(top + 1 + spec.max_degree())?;
            let der = derivations::build_der(std::sync::Arc::new(l), Some(top + 1))?;
            (format!("H(Der({})⟨1⟩)", spec.name), cover_homology(der, top)?)
        }
    };
    report.tables.push(DimTable { title, rows });
    report.valid_degrees = Some((1, top));
    Ok(report)
}

pub fn cmd_baut_rel(
    command: &str,
    reference: &str,
    map: Option<&str>,
    vanishing: bool,
    top: i64,
) -> Result<Report, CliError> {
    let file = load(reference)?;
    let f = file.choose_map(map)?;
    let mut report = Report::new(command);
    describe(&file, &mut report);
    report.valid_degrees = Some((1, top));
    if vanishing {
        report
            .notes
            .push(format!("derivations of {} vanishing on the image of {}", f.target, f.name));
        report.tables.push(DimTable {
            title: format!("H(Der({}‖{}(A))⟨1⟩)", f.target, f.name),
            rows: vanishing_homology(&file, f, top)?,
        });
        return Ok(report);
    }
    let run = relative_run(&file, f, top)?;
    report.notes.push(run.truncation.clone());
    report.notes.push("H_n is read as rational π_{n+1} of the classifying space".into());
    report.tables.push(DimTable {
        title: format!("H(Der({}‖{})⟨1⟩)", f.target, f.source),
        rows: run.relative_homology()?,
    });
    report.verdicts.extend(run.dual_pipeline()?);
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_verify(
    command: &str,
    suite: &str,
    reference: &str,
    model: Option<&str>,
    map: Option<&str>,
    corrupt: bool,
    top: i64,
) -> Result<Report, CliError> {
    let file = load(reference)?;
    let mut report = Report::new(command);
    describe(&file, &mut report);
    let outcome = run_suite(
        suite,
        &SuiteInput {
            file: &file,
            model,
            map,
            top,
            corrupt,
        },
    )?;
    if corrupt {
        report.notes.push("signs deliberately corrupted: failures are expected".into());
    }
    report.notes.extend(outcome.notes);
    report.tables = outcome.tables;
    report.verdicts = outcome.verdicts;
    report.valid_degrees = outcome.valid;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleKind {
    Cp,
    Sphere,
    Disk,
    Boundary,
}

/// The model file of a builtin: `cp K` or `cp K N`, `sphere N`, `disk`,
/// `boundary`.
pub fn cmd_example(kind: ExampleKind, args: &[i64]) -> Result<ModelFile, CliError> {
    let bad = || CliError::InvalidInput(format!("wrong arguments {args:?} for this example"));
    let to_k = |x: i64| usize::try_from(x).map_err(|_| bad());
    match (kind, args) {
        (ExampleKind::Cp, [k]) => Ok(single(builtin_cp(to_k(*k)?)?)),
        (ExampleKind::Cp, [k, n]) => builtin_cp_inclusion(to_k(*k)?, to_k(*n)?),
        (ExampleKind::Sphere, [n]) => Ok(single(builtin_sphere(*n)?)),
        (ExampleKind::Disk, []) => Ok(disk_file()),
        (ExampleKind::Boundary, []) => Ok(boundary_fixture()),
        _ => Err(bad()),
    }
}

pub fn cmd_parse_check(command: &str, path: &str, top: i64) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_model_file(&text)?;
    let mut report = Report::new(command);
    describe(&file, &mut report);
    for m in &file.models {
        m.build(top)?;
        report.verdicts.push(Verdict::pass(&format!("{}: d² = 0 on generators", m.name)));
    }
    for f in &file.maps {
        let i = file.build_map(f, top)?;
        report.verdicts.push(Verdict::pass(&format!("{}: chain map preserving brackets", f.name)));
        report.notes.push(format!(
            "{} is {}a free extension",
            f.name,
            if i.is_free_extension() { "" } else { "not " }
        ));
    }
    let printed = file.to_string();
    report.verdicts.push(match parse_model_file(&printed) {
        Ok(back) if back == file => Verdict::pass("printing and reparsing gives the same file"),
        Ok(_) => Verdict::fail("printing and reparsing gives the same file", "the reparsed file differs"),
        Err(e) => Verdict::fail("printing and reparsing gives the same file", e.to_string()),
    });
    report.valid_degrees = Some((1, top));
    Ok(report)
}
