//! Formal verification of derivation chains over formal jets.

mod calculus;
mod interp;
mod script;

pub use calculus::{
    codazzi_residual, commutator_relation, connection_from_spec, curvature_commutation_residual, differentiate,
    generic_point, jet, l0_point, ConnectionTable, Relation,
};
pub use interp::{
    builtin_script, hypothesis_lines, run_all_builtin, run_builtin, run_script, without_line, ScriptReport, StepReport,
    StepStatus, BUILTIN_SCRIPTS,
};
pub use script::{parse_script, Line, PointKind, Stmt};
