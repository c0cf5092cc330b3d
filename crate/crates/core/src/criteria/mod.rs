//! Finite-horizon certificates for the expansivity criteria of weighted shifts.

mod average;
mod config;
mod diagnostics;
mod grid;
mod uniform;
mod verdict;

pub use average::{avg_expansive, avg_expansive_backward, avg_expansive_forward, avg_pos_expansive, cesaro_branch_trace, Side};
pub use config::{pow2_grid, HorizonConfig};
pub use diagnostics::{
    basis_orbit_statuses, expansive_basis_diagnostic, hierarchy_audit, mixing_check, BasisOrbitStatus, HierarchyReport,
};
pub use uniform::{ue_trace, unif_expansive, unif_expansive_backward, unif_expansive_forward, unif_pos_expansive, Region, UeProperty};
pub(crate) use verdict::{all_crossed, sup_crossings};
pub use verdict::{Branch, Crossing, CriterionTrace, LevelEvidence, Verdict, VerdictKind};
