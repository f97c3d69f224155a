pub mod deformation;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kernels;
pub mod stepper;
pub mod varifold;
