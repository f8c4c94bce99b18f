//! Fourier–Jacobi side: symmetric indices, the Siegel operator, the cusp
//! condition and positive definite interpolation grids.

mod expansion;
mod grid;
mod matrix;

pub use expansion::{
    cusp_condition_check, filtration_index, is_cuspidal, rigidity_check, siegel_phi, slash_invariance_check,
    FourierExpansion,
};
pub use grid::{build_pd_grid, grid_variable, pit_vanishes, DegreeBounds, GridDeviation, PdGrid};
pub use matrix::{gl_transform, Rat, RatMatrix, SymMatrix, MAX_SIZE};
