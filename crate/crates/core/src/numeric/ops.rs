use ndarray::{Array3, Zip};
use serde::{Deserialize, Serialize};

use super::grid::{d1, d2, Field, Grid};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Grad,
    Div,
    /// 3-D: vector to vector. 2-D: vector to scalar vorticity, or scalar
    /// stream function `psi` to `(psi_y, -psi_x)`.
    Curl,
    Laplacian,
}

fn consume(f: &Field, levels: usize) -> Result<usize> {
    f.margin
        .checked_sub(levels)
        .ok_or_else(|| Error::ShapeMismatch("stencil reaches past the sampled ghost layers".into()))
}

fn mismatch(op: Op, f: &Field, grid: &Grid) -> Error {
    Error::ShapeMismatch(format!(
        "{op:?} is not defined for a {}-component field in {} dimensions",
        f.ncomp(),
        grid.dim
    ))
}

pub fn discrete_op(f: &Field, op: Op, grid: &Grid) -> Result<Field> {
    if f.comps.iter().any(|c| c.dim() != grid.shape()) {
        return Err(Error::ShapeMismatch("field was sampled on another grid".into()));
    }
    let margin = consume(f, 1)?;
    let dx = |a: &Array3<f64>, axis: usize| d1(a, axis, grid.h(axis));
    let comps = match (op, f.ncomp(), grid.dim) {
        (Op::Grad, 1, d) => (0..d).map(|a| dx(&f.comps[0], a)).collect(),
        (Op::Div, n, d) if n == d => {
            let mut acc = dx(&f.comps[0], 0);
            for a in 1..d {
                acc += &dx(&f.comps[a], a);
            }
            vec![acc]
        }
        (Op::Curl, 3, 3) => {
            let c = &f.comps;
            vec![
                dx(&c[2], 1) - dx(&c[1], 2),
                dx(&c[0], 2) - dx(&c[2], 0),
                dx(&c[1], 0) - dx(&c[0], 1),
            ]
        }
        (Op::Curl, 2, 2) => vec![dx(&f.comps[1], 0) - dx(&f.comps[0], 1)],
        (Op::Curl, 1, 2) => vec![dx(&f.comps[0], 1), -dx(&f.comps[0], 0)],
        (Op::Laplacian, _, d) => f
            .comps
            .iter()
            .map(|c| {
                let mut acc = d2(c, 0, grid.h(0));
                for a in 1..d {
                    acc += &d2(c, a, grid.h(a));
                }
                acc
            })
            .collect(),
        _ => return Err(mismatch(op, f, grid)),
    };
    Ok(Field { comps, margin })
}

/// Partial derivative of every component along `axis`.
pub fn partial(f: &Field, axis: usize, grid: &Grid) -> Result<Field> {
    if axis >= grid.dim {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} in {} dimensions",
            grid.dim
        )));
    }
    Ok(Field {
        comps: f.comps.iter().map(|c| d1(c, axis, grid.h(axis))).collect(),
        margin: consume(f, 1)?,
    })
}

/// `(a . grad) b`, componentwise in `b`.
pub fn advect(a: &Field, b: &Field, grid: &Grid) -> Result<Field> {
    if a.ncomp() != grid.dim {
        return Err(Error::ShapeMismatch("advecting field must be a vector".into()));
    }
    let margin = consume(b, 1)?.min(a.margin);
    let comps = b
        .comps
        .iter()
        .map(|bc| {
            let mut acc = Array3::zeros(bc.dim());
            for (axis, ac) in a.comps.iter().enumerate() {
                let d = d1(bc, axis, grid.h(axis));
                Zip::from(&mut acc).and(ac).and(&d).for_each(|o, &x, &y| *o += x * y);
            }
            acc
        })
        .collect();
    Ok(Field { comps, margin })
}

/// Midpoint-rule `(f, g)` over the interior points, boundary ring excluded.
pub fn inner_product(f: &Field, g: &Field, grid: &Grid) -> Result<f64> {
    if f.ncomp() != g.ncomp() || f.comps[0].dim() != g.comps[0].dim() {
        return Err(Error::ShapeMismatch(format!(
            "inner product of {}- and {}-component fields",
            f.ncomp(),
            g.ncomp()
        )));
    }
    let mut sum = 0.0;
    for c in 0..f.ncomp() {
        let (a, b) = (f.interior(grid, c), g.interior(grid, c));
        sum += Zip::from(&a).and(&b).fold(0.0, |acc, &x, &y| acc + x * y);
    }
    Ok(sum * grid.cell())
}

pub fn norm(f: &Field, grid: &Grid) -> f64 {
    inner_product(f, f, grid).expect("same field").max(0.0).sqrt()
}

/// Largest absolute interior value over all components.
pub fn max_abs(f: &Field, grid: &Grid) -> f64 {
    (0..f.ncomp())
        .flat_map(|c| f.interior(grid, c).iter().copied().collect::<Vec<_>>())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}
