//! Differential elimination for polynomial PDE systems.
//!
//! The kernel represents PDEs as exact differential polynomials
//! ([`DiffPoly`]), orders derivatives with block elimination rankings
//! ([`Ranking`]) and triangularizes systems with a Rosenfeld–Gröbner style
//! loop ([`rg::rosenfeld_groebner`]). The [`zoo`] module builds the fluid
//! models (Stokes, Navier–Stokes, RANS, rotational RANS, stream function,
//! Prandtl), [`text`] parses and renders systems, and [`numeric`] checks the
//! supporting integral and curl identities with finite differences.

pub mod coeff;
pub mod error;
pub mod numeric;
pub mod poly;
pub mod ranking;
pub mod reduction;
pub mod rg;
pub mod symbol;
pub mod text;
pub mod zoo;

pub use coeff::{Coefficient, ParamPoly};
pub use error::{Error, Result};
pub use poly::{DerivKey, Derivation, DiffPoly, Indeterminate, IndeterminateKind, Monomial, MultiIndex};
pub use ranking::{LeaderData, Ranking, ReductionMode};
pub use reduction::{autoreduce, normalize, pseudo_reduce, reduce_against_chain, Chain, ReductionStep, ReductionTrace};
pub use rg::{classify, delta_poly, rosenfeld_groebner, Budget, Class, Outcome, StepUnit, Verdict};
pub use symbol::Symbol;
pub use zoo::{ModelName, ModelSpec, Regime};
