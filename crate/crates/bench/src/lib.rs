//! Shared fixtures for the criterion benchmarks in `benches/`.

use delta_core::text::{parse_expr, Scope};
use delta_core::zoo::build;
use delta_core::{DiffPoly, ModelName, Ranking, Regime};

/// Equations and suggested ranking of one model cell.
pub fn model(name: ModelName, regime: Regime) -> (Vec<DiffPoly>, Ranking) {
    let spec = build(name, regime).expect("populated cell");
    (spec.equations, spec.suggested_ranking)
}

pub fn scope() -> Scope {
    Scope::new(&["nu"], &["u", "v", "w", "p"])
}

pub fn expr(text: &str) -> DiffPoly {
    parse_expr(text, &scope()).expect("fixture parses")
}

/// A nonlinear momentum-like polynomial of moderate size.
pub const MOMENTUM: &str = "u_t + u*u_x + v*u_y + w*u_z + p_x - nu*(u_xx + u_yy + u_zz)";
pub const CONTINUITY: &str = "u_x + v_y + w_z";
