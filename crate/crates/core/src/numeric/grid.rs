use ndarray::{s, Array3, ArrayView3, ArrayViewMut3, Axis, Zip};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 8;

/// Ghost points sampled beyond each physical face so that composed stencils
/// can be evaluated up to the boundary.
pub const GHOST: usize = 5;

/// Uniform grid on `(0, L1) x (0, L2) [x (0, L3)]` with `n` points per axis,
/// boundary points included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lengths: [f64; 3],
    pub n: usize,
    pub dim: usize,
}

impl Grid {
    pub fn new(lengths: [f64; 3], n: usize, dim: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::GridTooCoarse(n));
        }
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}")));
        }
        if lengths[..dim].iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidArgument("box lengths must be positive".into()));
        }
        Ok(Grid { lengths, n, dim })
    }

    pub fn h(&self, axis: usize) -> f64 {
        self.lengths[axis] / (self.n - 1) as f64
    }

    /// Same box with `2n - 1` points, so every coarse point is a fine point.
    pub fn refined(&self) -> Grid {
        Grid {
            n: 2 * self.n - 1,
            ..*self
        }
    }

    pub(crate) fn ghost(&self, axis: usize) -> usize {
        if axis < self.dim {
            GHOST
        } else {
            0
        }
    }

    pub(crate) fn shape(&self) -> (usize, usize, usize) {
        let len = |a: usize| if a < self.dim { self.n + 2 * GHOST } else { 1 };
        (len(0), len(1), len(2))
    }

    /// Physical coordinate of array index `i` along `axis`.
    pub(crate) fn coord(&self, axis: usize, i: usize) -> f64 {
        if axis >= self.dim {
            return 0.0;
        }
        (i as f64 - GHOST as f64) * self.h(axis)
    }

    /// Cell volume used by the quadrature.
    pub fn cell(&self) -> f64 {
        (0..self.dim).map(|a| self.h(a)).product()
    }
}

/// Scalar (one component) or vector samples on an extended grid.
///
/// `margin` is how many ghost layers still hold valid values; every
/// derivative consumes one.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub comps: Vec<Array3<f64>>,
    pub margin: usize,
}

impl Field {
    pub fn zeros(grid: &Grid, ncomp: usize) -> Self {
        Field {
            comps: vec![Array3::zeros(grid.shape()); ncomp],
            margin: GHOST,
        }
    }

    pub fn sample(grid: &Grid, ncomp: usize, f: impl Fn(usize, [f64; 3]) -> f64) -> Self {
        let mut out = Field::zeros(grid, ncomp);
        for (c, arr) in out.comps.iter_mut().enumerate() {
            for ((i, j, k), v) in arr.indexed_iter_mut() {
                *v = f(c, [grid.coord(0, i), grid.coord(1, j), grid.coord(2, k)]);
            }
        }
        out
    }

    pub fn is_scalar(&self) -> bool {
        self.comps.len() == 1
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn scalar(arr: Array3<f64>, margin: usize) -> Self {
        Field {
            comps: vec![arr],
            margin,
        }
    }

    /// Values at the physical interior (boundary ring excluded).
    pub fn interior(&self, grid: &Grid, c: usize) -> ArrayView3<'_, f64> {
        let r = |a: usize| {
            if a < grid.dim {
                let g = grid.ghost(a);
                (g + 1) as isize..(g + grid.n - 1) as isize
            } else {
                0..1
            }
        };
        let (rx, ry, rz) = (r(0), r(1), r(2));
        self.comps[c].slice(s![rx, ry, rz])
    }

    /// Values on the physical boundary faces and interior, ghosts excluded.
    pub fn physical(&self, grid: &Grid, c: usize) -> ArrayView3<'_, f64> {
        let r = |a: usize| {
            if a < grid.dim {
                let g = grid.ghost(a);
                g as isize..(g + grid.n) as isize
            } else {
                0..1
            }
        };
        let (rx, ry, rz) = (r(0), r(1), r(2));
        self.comps[c].slice(s![rx, ry, rz])
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        if self.ncomp() != other.ncomp() || self.comps[0].dim() != other.comps[0].dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} vs {} components",
                self.ncomp(),
                other.ncomp()
            )));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| Zip::from(a).and(b).map_collect(|&x, &y| f(x, y)))
            .collect();
        Ok(Field {
            comps,
            margin: self.margin.min(other.margin),
        })
    }
}

/// Centered first difference along `axis`; the outermost layer is left at 0.
pub(crate) fn d1(a: &Array3<f64>, axis: usize, h: f64) -> Array3<f64> {
    let mut out = Array3::zeros(a.dim());
    let len = a.len_of(Axis(axis));
    if len < 3 {
        return out;
    }
    let inv = 1.0 / (2.0 * h);
    let fwd = a.slice_axis(Axis(axis), (2..len).into());
    let bwd = a.slice_axis(Axis(axis), (0..len - 2).into());
    let mut mid: ArrayViewMut3<f64> = out.slice_axis_mut(Axis(axis), (1..len - 1).into());
    Zip::from(&mut mid)
        .and(&fwd)
        .and(&bwd)
        .for_each(|o, &f, &b| *o = (f - b) * inv);
    out
}

/// Compact second difference along `axis`.
pub(crate) fn d2(a: &Array3<f64>, axis: usize, h: f64) -> Array3<f64> {
    let mut out = Array3::zeros(a.dim());
    let len = a.len_of(Axis(axis));
    if len < 3 {
        return out;
    }
    let inv = 1.0 / (h * h);
    let fwd = a.slice_axis(Axis(axis), (2..len).into());
    let c = a.slice_axis(Axis(axis), (1..len - 1).into());
    let bwd = a.slice_axis(Axis(axis), (0..len - 2).into());
    let mut mid = out.slice_axis_mut(Axis(axis), (1..len - 1).into());
    Zip::from(&mut mid)
        .and(&fwd)
        .and(&c)
        .and(&bwd)
        .for_each(|o, &f, &c, &b| *o = (f - 2.0 * c + b) * inv);
    out
}
