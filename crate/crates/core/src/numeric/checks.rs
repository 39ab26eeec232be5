use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{Field, Grid};
use super::manufactured::{boundary_zero_field, manufactured_field, smooth_scalar, FieldSpec};
use super::ops::{advect, discrete_op, inner_product, norm, partial, Op};
use crate::error::{Error, Result};

/// Residuals at or below this on both grids count as exact.
pub const EXACT_TOL: f64 = 1e-10;
/// Smallest residual for which an observed order is meaningful.
pub const MACHINE_TOL: f64 = 1e-14;
pub const CONVERGING_ORDER: f64 = 1.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    IdTime,
    IdSelfadv,
    IdSkew,
    IdLaplace,
    CurlGradZero,
    DivCurlZero,
    #[serde(rename = "advection_curl_gap_2d_self")]
    AdvectionCurlGap2dSelf,
    #[serde(rename = "advection_curl_gap_3d")]
    AdvectionCurlGap3d,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::IdTime,
        Check::IdSelfadv,
        Check::IdSkew,
        Check::IdLaplace,
        Check::CurlGradZero,
        Check::DivCurlZero,
        Check::AdvectionCurlGap2dSelf,
        Check::AdvectionCurlGap3d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::IdTime => "id_time",
            Check::IdSelfadv => "id_selfadv",
            Check::IdSkew => "id_skew",
            Check::IdLaplace => "id_laplace",
            Check::CurlGradZero => "curl_grad_zero",
            Check::DivCurlZero => "div_curl_zero",
            Check::AdvectionCurlGap2dSelf => "advection_curl_gap_2d_self",
            Check::AdvectionCurlGap3d => "advection_curl_gap_3d",
        }
    }

    pub fn supports(self, dim: usize) -> bool {
        match self {
            Check::AdvectionCurlGap2dSelf => dim == 2,
            Check::AdvectionCurlGap3d => dim == 3,
            _ => dim == 2 || dim == 3,
        }
    }

    /// Checks that run in `dim` dimensions.
    pub fn for_dim(dim: usize) -> Vec<Check> {
        Check::ALL.into_iter().filter(|c| c.supports(dim)).collect()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ExactZero,
    Converging,
    NonVanishing,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::ExactZero => "exact_zero",
            Classification::Converging => "converging",
            Classification::NonVanishing => "non_vanishing",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub check: Check,
    pub dim: usize,
    pub n_coarse: usize,
    pub n_fine: usize,
    pub residual_coarse: f64,
    pub residual_fine: f64,
    pub observed_order: Option<f64>,
    pub classification: Classification,
}

pub fn observed_order(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > MACHINE_TOL && fine > MACHINE_TOL).then(|| (coarse / fine).log2())
}

pub fn classify(coarse: f64, fine: f64) -> Classification {
    if coarse <= EXACT_TOL && fine <= EXACT_TOL {
        Classification::ExactZero
    } else if observed_order(coarse, fine).is_some_and(|p| p >= CONVERGING_ORDER) {
        Classification::Converging
    } else {
        Classification::NonVanishing
    }
}

fn spec(seed: u64, depth: u32) -> FieldSpec {
    FieldSpec { seed, modes: 8, depth }
}

/// Amplitude profile for the time identity, with its exact derivative.
fn phi(t: f64) -> (f64, f64) {
    (1.0 + 0.25 * (3.0 * t).sin() + 0.5 * t, 0.75 * (3.0 * t).cos() + 0.5)
}

const T0: f64 = 0.7;

/// Fields in Green's formula vanish to order 4 on the faces, so the terms a
/// summation by parts leaves at the boundary ring are negligible.
const LAPLACE_DEPTH: u32 = 2;

fn scaled(f: &Field, c: f64) -> Field {
    Field {
        comps: f.comps.iter().map(|a| a * c).collect(),
        margin: f.margin,
    }
}

/// Gradient of every component, stacked.
fn grad_all(f: &Field, grid: &Grid) -> Result<Field> {
    let mut comps = Vec::new();
    let mut margin = usize::MAX;
    for a in 0..grid.dim {
        let d = partial(f, a, grid)?;
        margin = margin.min(d.margin);
        comps.extend(d.comps);
    }
    Ok(Field { comps, margin })
}

/// Residual of one check on one grid.
pub fn residual(check: Check, grid: &Grid, seed: u64) -> Result<f64> {
    if !check.supports(grid.dim) {
        return Err(Error::InvalidArgument(format!(
            "{check} does not run in {} dimensions",
            grid.dim
        )));
    }
    let g = grid;
    Ok(match check {
        Check::IdTime => {
            let base = manufactured_field(g, &spec(seed, 1))?;
            let (p, dp) = phi(T0);
            let f = scaled(&base, p);
            let ft = scaled(&base, dp);
            let lhs = inner_product(&ft, &f, g)?;
            // d/dt (phi^2 ||base||^2) / 2, differentiated by hand.
            let rhs = 0.5 * (2.0 * p * dp) * inner_product(&base, &base, g)?;
            (lhs - rhs).abs()
        }
        Check::IdSelfadv => {
            let f = manufactured_field(g, &spec(seed, 1))?;
            inner_product(&advect(&f, &f, g)?, &f, g)?.abs()
        }
        Check::IdSkew => {
            let f = manufactured_field(g, &spec(seed, 1))?;
            let h = boundary_zero_field(g, &spec(seed.wrapping_add(1), 1));
            let a = inner_product(&advect(&f, &h, g)?, &f, g)?;
            let b = inner_product(&advect(&f, &f, g)?, &h, g)?;
            (a + b).abs()
        }
        Check::IdLaplace => {
            let f = boundary_zero_field(g, &spec(seed, LAPLACE_DEPTH));
            let h = boundary_zero_field(g, &spec(seed.wrapping_add(1), LAPLACE_DEPTH));
            let mut total = 0.0;
            // alpha = 0 and every first-order multi-index.
            let mut pairs = vec![(f.clone(), h.clone())];
            for a in 0..g.dim {
                pairs.push((partial(&f, a, g)?, partial(&h, a, g)?));
            }
            for (df, dh) in pairs {
                let lhs = inner_product(&discrete_op(&df, Op::Laplacian, g)?, &dh, g)?;
                let rhs = inner_product(&grad_all(&df, g)?, &grad_all(&dh, g)?, g)?;
                total += (lhs + rhs).abs();
            }
            total
        }
        Check::CurlGradZero => {
            let s = smooth_scalar(g, seed);
            norm(&discrete_op(&discrete_op(&s, Op::Grad, g)?, Op::Curl, g)?, g)
        }
        Check::DivCurlZero => {
            let pot = if g.dim == 2 {
                smooth_scalar(g, seed)
            } else {
                let parts: Vec<Field> = (0..3).map(|c| smooth_scalar(g, seed.wrapping_add(c))).collect();
                Field {
                    comps: parts
                        .into_iter()
                        .map(|p| p.comps.into_iter().next().expect("scalar"))
                        .collect(),
                    margin: super::grid::GHOST,
                }
            };
            norm(&discrete_op(&discrete_op(&pot, Op::Curl, g)?, Op::Div, g)?, g)
        }
        Check::AdvectionCurlGap2dSelf => {
            let f = manufactured_field(g, &spec(seed, 1))?;
            let lhs = discrete_op(&advect(&f, &f, g)?, Op::Curl, g)?;
            let rhs = advect(&f, &discrete_op(&f, Op::Curl, g)?, g)?;
            norm(&lhs.sub(&rhs)?, g)
        }
        Check::AdvectionCurlGap3d => {
            let a = manufactured_field(g, &spec(seed, 1))?;
            let b = manufactured_field(g, &spec(seed.wrapping_add(1), 1))?;
            let lhs = discrete_op(&advect(&a, &b, g)?, Op::Curl, g)?;
            let rhs = advect(&a, &discrete_op(&b, Op::Curl, g)?, g)?;
            norm(&lhs.sub(&rhs)?, g)
        }
    })
}

/// Runs `check` on `coarse` and on its refinement with `fine` points.
pub fn check_identity(check: Check, coarse: &Grid, fine_n: usize, seed: u64) -> Result<IdentityReport> {
    let fine = Grid::new(coarse.lengths, fine_n, coarse.dim)?;
    let rc = residual(check, coarse, seed)?;
    let rf = residual(check, &fine, seed)?;
    Ok(IdentityReport {
        check,
        dim: coarse.dim,
        n_coarse: coarse.n,
        n_fine: fine_n,
        residual_coarse: rc,
        residual_fine: rf,
        observed_order: observed_order(rc, rf),
        classification: classify(rc, rf),
    })
}
