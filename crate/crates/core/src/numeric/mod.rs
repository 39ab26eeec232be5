//! Finite-difference checks of the integral and curl identities behind the
//! energy estimates.
//!
//! Fields are sampled analytically on a grid extended by ghost layers, so
//! every centered stencil is evaluated from exact data; norms and inner
//! products only see interior points.

pub mod checks;
pub mod grid;
pub mod manufactured;
pub mod ops;

pub use checks::{
    check_identity, classify, observed_order, residual, Check, Classification, IdentityReport, CONVERGING_ORDER,
    EXACT_TOL, MACHINE_TOL,
};
pub use grid::{Field, Grid, GHOST, MIN_POINTS};
pub use manufactured::{
    boundary_zero_field, manufactured_field, smooth_scalar, velocity_from_potential, Factor, FieldSpec, Potential,
    Separable,
};
pub use ops::{advect, discrete_op, inner_product, max_abs, norm, partial, Op};

/// Box used when the caller does not choose one.
pub const DEFAULT_LENGTHS: [f64; 3] = [1.0, 1.5, 2.0];
pub const DEFAULT_SEED: u64 = 20240917;
pub const DEFAULT_GRIDS: (usize, usize) = (16, 31);
