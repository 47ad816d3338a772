//! Experiments probing the quantitative estimates: large deviations,
//! Birkhoff sums, trigonometric products and continuity sweeps.

mod birkhoff;
mod ldt;
mod report;
mod scan;
mod trig;

pub use birkhoff::{birkhoff_error, BirkhoffRow, BirkhoffTable, FIT_HEADROOM};
pub use ldt::{fit_decay, ldt_experiment, perturbations, DeviationReport, LdtConfig, LdtResult, NPolicy};
pub use report::{real, trig_table, Table};
pub use scan::{
    continuity_scan, frequency_scan, le_value, ContinuityScan, FrequencyGap, FrequencyScan, Guarantee, JumpCandidate,
    LeConfig, LeValue,
};
pub use trig::{calibrate_c5, random_pairs, trig_product, TrigProduct};
