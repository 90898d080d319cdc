//! Pointwise classification: the admissible set of `L`, verdicts, the model
//! catalog and the classification report.

mod admissible;
mod catalog;
mod report;
mod verdict;

pub use admissible::{admissible_l, AdmissibleSet, Obstruction};
pub use catalog::{catalog, hopf_check, Family, Model, Space, FAMILIES};
pub use report::{isolated_instance, main_theorem_report, Mode, Report, ReportConfig, ReportRow, ISOLATED_NAME};
pub use verdict::{classify_set, standing_assumptions, verdict, verdict_with, Classification, Verdict};
