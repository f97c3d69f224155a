//! Scalar kernels: the smoothing mollifier, the weight `Omega`, backwards
//! heat kernels and the test-function class `A_j`.

mod class_aj;
pub mod cutoff;
mod heat;
pub mod quad;
mod smoothing;
mod weight;

pub use class_aj::{aj_membership, lattice, AjReport, AjViolation, Bump, ScalarField};
pub use heat::{clearing_out_theta0, HeatKernelQuery};
pub use smoothing::KernelSuite;
pub use weight::{spectral_norm, WeightOmega, WeightVariant};
