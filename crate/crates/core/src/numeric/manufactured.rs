use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::grid::{Field, Grid};
use super::ops::{discrete_op, Op};
use crate::error::Result;

/// `sin(k pi x / L)^power * cos(j pi x / L)` along one axis.
///
/// With an even `power` the factor is even about both faces of `(0, L)` and
/// vanishes there to order `power`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub k: u32,
    pub power: u32,
    pub j: u32,
}

impl Factor {
    pub const ONE: Factor = Factor { k: 0, power: 0, j: 0 };

    fn eval(&self, x: f64, l: f64) -> f64 {
        let s = (self.k as f64 * PI * x / l).sin().powi(self.power as i32);
        s * (self.j as f64 * PI * x / l).cos()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separable {
    pub amplitude: f64,
    pub factors: [Factor; 3],
}

/// Sum of separable terms per component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub components: Vec<Vec<Separable>>,
}

/// Recipe for random manufactured fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub seed: u64,
    /// Separable terms per component.
    pub modes: usize,
    /// Boundary factors are `sin^(2 * depth)`.
    pub depth: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            seed: 0,
            modes: 8,
            depth: 1,
        }
    }
}

impl Potential {
    pub fn zero(ncomp: usize) -> Self {
        Potential {
            components: vec![Vec::new(); ncomp],
        }
    }

    /// `sin(pi x / L1) sin(pi y / L2)`.
    pub fn sin_sin() -> Self {
        let f = Factor { k: 1, power: 1, j: 0 };
        Potential {
            components: vec![vec![Separable {
                amplitude: 1.0,
                factors: [f, f, Factor::ONE],
            }]],
        }
    }

    /// Random potential whose terms all vanish to order `2 * depth` on the
    /// faces of the box, evenly about each face.
    pub fn random(ncomp: usize, dim: usize, spec: &FieldSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let components = (0..ncomp)
            .map(|_| {
                // Term `m` takes cosine parity `(m >> a) & 1` along axis `a`,
                // so no reflection of the box maps the field to +-itself and
                // integrals do not cancel by symmetry.
                (0..spec.modes)
                    .map(|m| {
                        let amplitude = rng.random_range(-1.0..1.0);
                        let mut factors = [Factor::ONE; 3];
                        for (a, f) in factors.iter_mut().enumerate().take(dim) {
                            let parity = ((m >> a) & 1) as u32;
                            *f = Factor {
                                k: 1,
                                power: 2 * spec.depth,
                                j: parity,
                            };
                        }
                        Separable { amplitude, factors }
                    })
                    .collect()
            })
            .collect();
        Potential { components }
    }

    pub fn eval(&self, c: usize, x: [f64; 3], grid: &Grid) -> f64 {
        self.components[c]
            .iter()
            .map(|t| (0..grid.dim).fold(t.amplitude, |v, a| v * t.factors[a].eval(x[a], grid.lengths[a])))
            .sum()
    }

    /// Samples on the extended grid, tabulating each separable factor once
    /// per axis.
    pub fn sample(&self, grid: &Grid) -> Field {
        let mut out = Field::zeros(grid, self.components.len());
        let (nx, ny, nz) = grid.shape();
        let lens = [nx, ny, nz];
        for (comp, terms) in out.comps.iter_mut().zip(&self.components) {
            for t in terms {
                let tables: Vec<Vec<f64>> = (0..3)
                    .map(|a| {
                        (0..lens[a])
                            .map(|i| {
                                if a < grid.dim {
                                    t.factors[a].eval(grid.coord(a, i), grid.lengths[a])
                                } else {
                                    1.0
                                }
                            })
                            .collect()
                    })
                    .collect();
                for ((i, j, k), v) in comp.indexed_iter_mut() {
                    *v += t.amplitude * tables[0][i] * tables[1][j] * tables[2][k];
                }
            }
        }
        out
    }
}

/// Discrete curl of a potential: stream function in 2-D (one component),
/// vector potential in 3-D. The centered divergence of the result vanishes
/// to rounding.
pub fn velocity_from_potential(grid: &Grid, potential: &Potential) -> Result<Field> {
    discrete_op(&potential.sample(grid), Op::Curl, grid)
}

/// Divergence-free, boundary-zero vector field from a seeded potential.
pub fn manufactured_field(grid: &Grid, spec: &FieldSpec) -> Result<Field> {
    let ncomp = if grid.dim == 2 { 1 } else { 3 };
    velocity_from_potential(grid, &Potential::random(ncomp, grid.dim, spec))
}

/// Boundary-zero vector field with no divergence constraint.
pub fn boundary_zero_field(grid: &Grid, spec: &FieldSpec) -> Field {
    Potential::random(grid.dim, grid.dim, spec).sample(grid)
}

/// Smooth scalar with no boundary conditions.
pub fn smooth_scalar(grid: &Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, [f64; 3], [f64; 3])> = (0..4)
        .map(|_| {
            let a = rng.random_range(-1.0..1.0);
            let k = [(); 3].map(|_| rng.random_range(0.5..3.0));
            let phase = [(); 3].map(|_| rng.random_range(0.0..PI));
            (a, k, phase)
        })
        .collect();
    Field::sample(grid, 1, |_, x| {
        terms
            .iter()
            .map(|(a, k, ph)| {
                let mut v = *a;
                for d in 0..grid.dim {
                    v *= (k[d] * PI * x[d] / grid.lengths[d] + ph[d]).sin();
                }
                v
            })
            .sum()
    })
}
