//! Built-in models, the model file format and the computations behind the
//! `baut` command line.

mod builtins;
mod commands;
mod error;
mod expr;
mod pipeline;
mod report;
mod spec;

pub use builtins::{
    boundary_fixture, builtin_boundary_model, builtin_cp, builtin_cp_inclusion, builtin_disk_example,
    builtin_sphere, disk_file, resolve_builtin, single, DiskPair,
};
pub use commands::{
    check_max_degree, cmd_baut_rel, cmd_example, cmd_homology, cmd_parse_check, cmd_verify, load, Complex,
    ExampleKind, DEGREE_GUARD,
};
pub use error::CliError;
pub use expr::{canonical, parse_expr, Atom, Expr, ExprError};
pub use pipeline::{
    choose_word_cutoff, cover_homology, lie_homology, quasi_iso_verdicts, relative_homology, relative_run,
    run_suite, vanishing_homology, RelativeRun, SuiteInput, SuiteOutcome, AXIOM_DEGREE, BRACKET_DEGREE, SUITES,
};
pub use report::{DimTable, Format, Report, Verdict};
pub use spec::{parse_model_file, ModelFile, ModelSpec, MorphismSpec};
