//! Local deformations of a network that decrease boundary mass while
//! moving little area, and their greedy application.

mod admissible;
mod builder;
mod greedy;
mod moves;

pub use admissible::{check_admissible, check_admissible_with, AdmissibilityReport};
pub use builder::NetBuilder;
pub use greedy::{
    apply_best_moves, apply_best_moves_within, apply_moves, AppliedMove, DeltaVcEstimate,
};
pub use moves::{enumerate_moves, vanish_grain, DeformationMove, MoveKind, NewEdge, VRef};

#[cfg(test)]
mod tests;
