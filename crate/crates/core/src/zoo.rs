//! Fluid-model systems as differential polynomials.
//!
//! Models are addressed by a [`ModelName`] and a [`Regime`] column
//! (compressible, incompressible, Stokes limit, Euler limit, stationary).
//! Limits are derived syntactically from the incompressible system with
//! [`regime_filter`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{Derivation, DiffPoly};
use crate::ranking::Ranking;
use crate::symbol::Symbol;

pub const VISCOSITY: &str = "nu";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Stokes3d,
    RansStokes,
    Ns3d,
    Rans3d,
    OmegaRans,
    Streamfunction2d,
    Prandtl,
    Busemann,
}

impl ModelName {
    pub const ALL: [ModelName; 8] = [
        ModelName::Stokes3d,
        ModelName::RansStokes,
        ModelName::Ns3d,
        ModelName::Rans3d,
        ModelName::OmegaRans,
        ModelName::Streamfunction2d,
        ModelName::Prandtl,
        ModelName::Busemann,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Stokes3d => "stokes3d",
            ModelName::RansStokes => "rans_stokes",
            ModelName::Ns3d => "ns3d",
            ModelName::Rans3d => "rans3d",
            ModelName::OmegaRans => "omega_rans",
            ModelName::Streamfunction2d => "streamfunction2d",
            ModelName::Prandtl => "prandtl",
            ModelName::Busemann => "busemann",
        }
    }

    /// Row label used in the reducibility table.
    pub fn label(self) -> &'static str {
        match self {
            ModelName::Stokes3d => "Stokes (3-D)",
            ModelName::RansStokes => "RANS-Stokes (3-D)",
            ModelName::Ns3d => "Navier-Stokes (3-D)",
            ModelName::Rans3d => "RANS (3-D)",
            ModelName::OmegaRans => "omega-RANS",
            ModelName::Streamfunction2d => "Stream-function NS (2-D)",
            ModelName::Prandtl => "Prandtl boundary layer",
            ModelName::Busemann => "Busemann jet",
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown model `{s}`")))
    }
}

/// Table column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Compressible,
    Incompressible,
    StokesLimit,
    EulerLimit,
    Stationary,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::Compressible,
        Regime::Incompressible,
        Regime::StokesLimit,
        Regime::EulerLimit,
        Regime::Stationary,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Compressible => "compressible",
            Regime::Incompressible => "incompressible",
            Regime::StokesLimit => "stokes_limit",
            Regime::EulerLimit => "euler_limit",
            Regime::Stationary => "stationary",
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Regime::Compressible => "C",
            Regime::Incompressible => "In",
            Regime::StokesLimit => "S",
            Regime::EulerLimit => "E",
            Regime::Stationary => "St",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.as_str() == s || r.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown regime `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegimeFlags {
    pub compressible: bool,
    pub stokes_limit: bool,
    pub euler_limit: bool,
    pub stationary: bool,
}

impl RegimeFlags {
    pub fn is_consistent(&self) -> bool {
        !(self.stokes_limit && self.euler_limit) && !(self.compressible && (self.stokes_limit || self.euler_limit))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Whether omega-RANS carries the curl definitions of the vorticities.
    pub with_curl_defs: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { with_curl_defs: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: ModelName,
    pub regime: RegimeFlags,
    pub dimension: u8,
    pub equations: Vec<DiffPoly>,
    pub suggested_ranking: Ranking,
    /// Dependent indeterminates, in declaration order.
    pub unknowns: Vec<Symbol>,
    /// The equations are a standard textbook form rather than a displayed
    /// system.
    pub best_effort: bool,
}

fn unsupported(name: ModelName, regime: impl fmt::Display) -> Error {
    Error::UnsupportedCell {
        model: name.to_string(),
        regime: regime.to_string(),
    }
}

/// Whether `(name, regime)` is a populated cell.
pub fn is_supported(name: ModelName, regime: Regime) -> bool {
    use ModelName::*;
    use Regime::*;
    match name {
        Stokes3d | RansStokes => matches!(regime, Incompressible | StokesLimit),
        Ns3d | Rans3d | OmegaRans => true,
        Streamfunction2d => matches!(regime, Incompressible | Stationary),
        Prandtl => regime == Incompressible,
        Busemann => false,
    }
}

fn var(name: &str) -> DiffPoly {
    DiffPoly::var(name, "")
}

fn d(p: &DiffPoly, x: Derivation) -> DiffPoly {
    p.differentiate(x)
}

const SPACE3: [Derivation; 3] = [Derivation::X, Derivation::Y, Derivation::Z];
const SPACE2: [Derivation; 2] = [Derivation::X, Derivation::Y];

fn laplacian(p: &DiffPoly, dims: &[Derivation]) -> DiffPoly {
    dims.iter().fold(DiffPoly::zero(), |acc, &x| &acc + &d(&d(p, x), x))
}

fn nu() -> DiffPoly {
    DiffPoly::param(VISCOSITY)
}

/// `sum_j a_j * d_j b`.
fn advect(a: &[DiffPoly], b: &DiffPoly) -> DiffPoly {
    a.iter()
        .zip(SPACE3)
        .fold(DiffPoly::zero(), |acc, (aj, x)| &acc + &(aj * &d(b, x)))
}

fn divergence(a: &[DiffPoly]) -> DiffPoly {
    a.iter()
        .zip(SPACE3)
        .fold(DiffPoly::zero(), |acc, (aj, x)| &acc + &d(aj, x))
}

fn sum_vec(a: &[DiffPoly], b: &[DiffPoly]) -> Vec<DiffPoly> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn symbols(names: &[&str]) -> Vec<Symbol> {
    names.iter().map(|n| Symbol::new(n)).collect()
}

fn ranking(names: &[&str]) -> Ranking {
    Ranking::from_names(names).expect("model rankings have distinct blocks")
}

/// Incompressible momentum with velocity `vel` (already split if needed):
/// `d_t V_i + (V.grad) V_i + d_i p - nu * lap V_i`.
fn momentum_incompressible(vel: &[DiffPoly]) -> Vec<DiffPoly> {
    let p = var("p");
    vel.iter()
        .zip(SPACE3)
        .map(|(vi, xi)| {
            &(&(&d(vi, Derivation::T) + &advect(vel, vi)) + &d(&p, xi)) - &(&nu() * &laplacian(vi, &SPACE3))
        })
        .collect()
}

/// Compressible momentum with a constant viscosity under Stokes' hypothesis:
/// `rho (d_t V_i + (V.grad) V_i) + d_i p - nu (lap V_i + 1/3 d_i div V)`.
fn momentum_compressible(vel: &[DiffPoly]) -> Vec<DiffPoly> {
    let (p, rho) = (var("p"), var("rho"));
    let third = Coefficient::from_fraction(
        crate::coeff::ParamPoly::one(),
        crate::coeff::ParamPoly::constant(num_rational::BigRational::from_integer(3.into())),
    );
    let div = divergence(vel);
    vel.iter()
        .zip(SPACE3)
        .map(|(vi, xi)| {
            let inertia = &rho * &(&d(vi, Derivation::T) + &advect(vel, vi));
            let visc = &laplacian(vi, &SPACE3) + &d(&div, xi).scale(&third);
            &(&inertia + &d(&p, xi)) - &(&nu() * &visc)
        })
        .collect()
}

fn continuity_compressible(vel: &[DiffPoly]) -> DiffPoly {
    let rho = var("rho");
    let flux: Vec<DiffPoly> = vel.iter().map(|vi| &rho * vi).collect();
    &d(&rho, Derivation::T) + &divergence(&flux)
}

fn velocity() -> Vec<DiffPoly> {
    ["u", "v", "w"].iter().map(|n| var(n)).collect()
}

fn fluctuation() -> Vec<DiffPoly> {
    ["u'", "v'", "w'"].iter().map(|n| var(n)).collect()
}

fn curl(a: &[DiffPoly]) -> Vec<DiffPoly> {
    use Derivation::{X, Y, Z};
    vec![
        &d(&a[2], Y) - &d(&a[1], Z),
        &d(&a[0], Z) - &d(&a[2], X),
        &d(&a[1], X) - &d(&a[0], Y),
    ]
}

fn ns3d(compressible: bool) -> (Vec<DiffPoly>, Vec<&'static str>) {
    let vel = velocity();
    if compressible {
        let mut eqs = vec![continuity_compressible(&vel)];
        eqs.extend(momentum_compressible(&vel));
        (eqs, vec!["u", "v", "w", "p", "rho"])
    } else {
        let mut eqs = vec![divergence(&vel)];
        eqs.extend(momentum_incompressible(&vel));
        (eqs, vec!["u", "v", "w", "p"])
    }
}

/// Two-scale split `V = v + v'`; as in the Stokes system, only the mean
/// field carries the divergence constraint.
fn rans3d(compressible: bool) -> (Vec<DiffPoly>, Vec<&'static str>) {
    let total = sum_vec(&velocity(), &fluctuation());
    if compressible {
        let mut eqs = vec![continuity_compressible(&total)];
        eqs.extend(momentum_compressible(&total));
        (eqs, vec!["u", "v", "w", "u'", "v'", "w'", "p", "rho"])
    } else {
        let mut eqs = vec![divergence(&velocity())];
        eqs.extend(momentum_incompressible(&total));
        (eqs, vec!["u", "v", "w", "u'", "v'", "w'", "p"])
    }
}

const OMEGA_UNKNOWNS: [&str; 12] = [
    "omega1", "omega2", "omega3", "omega1'", "omega2'", "omega3'", "u", "v", "w", "u'", "v'", "w'",
];

/// Rotational two-scale system: three vorticity-balance components, the
/// curl definitions (optional) and the divergence constraints (incompressible
/// only).
fn omega_rans(compressible: bool, opts: BuildOptions) -> (Vec<DiffPoly>, Vec<&'static str>) {
    let vel = velocity();
    let fl = fluctuation();
    let om: Vec<DiffPoly> = ["omega1", "omega2", "omega3"].iter().map(|n| var(n)).collect();
    let omf: Vec<DiffPoly> = ["omega1'", "omega2'", "omega3'"].iter().map(|n| var(n)).collect();
    let mut eqs = Vec::new();
    for i in 0..3 {
        let both = &om[i] + &omf[i];
        let advection =
            &(&(&advect(&vel, &om[i]) + &advect(&fl, &omf[i])) + &advect(&vel, &omf[i])) + &advect(&fl, &om[i]);
        eqs.push(&(&d(&both, Derivation::T) + &advection) - &(&nu() * &laplacian(&both, &SPACE3)));
    }
    if opts.with_curl_defs {
        for (w, c) in om.iter().zip(curl(&vel)) {
            eqs.push(w - &c);
        }
        for (w, c) in omf.iter().zip(curl(&fl)) {
            eqs.push(w - &c);
        }
    }
    if !compressible {
        eqs.push(divergence(&vel));
        eqs.push(divergence(&fl));
    }
    (eqs, OMEGA_UNKNOWNS.to_vec())
}

/// `d_t lap psi + psi_y d_x lap psi - psi_x d_y lap psi - nu lap^2 psi`.
fn streamfunction2d() -> DiffPoly {
    use Derivation::{T, X, Y};
    let psi = var("psi");
    let lap = laplacian(&psi, &SPACE2);
    let transport = &(&d(&lap, T) + &(&d(&psi, Y) * &d(&lap, X))) - &(&d(&psi, X) * &d(&lap, Y));
    &transport - &(&nu() * &laplacian(&lap, &SPACE2))
}

/// `u u_x + v u_y - nu u_yy - U U_x` and `u_x + v_y`, with `U` the outer
/// stream velocity.
fn prandtl() -> Vec<DiffPoly> {
    use Derivation::{X, Y};
    let (u, v, big_u) = (var("u"), var("v"), var("U"));
    let momentum =
        &(&(&(&u * &d(&u, X)) + &(&v * &d(&u, Y))) - &(&nu() * &d(&d(&u, Y), Y))) - &(&big_u * &d(&big_u, X));
    vec![momentum, &d(&u, X) + &d(&v, Y)]
}

fn regime_of(regime: Regime) -> RegimeFlags {
    let mut f = RegimeFlags::default();
    match regime {
        Regime::Compressible => f.compressible = true,
        Regime::Incompressible => {}
        Regime::StokesLimit => f.stokes_limit = true,
        Regime::EulerLimit => f.euler_limit = true,
        Regime::Stationary => f.stationary = true,
    }
    f
}

/// Builds the polynomial system of a populated table cell.
pub fn build(name: ModelName, regime: Regime) -> Result<ModelSpec> {
    build_with(name, regime, BuildOptions::default())
}

pub fn build_with(name: ModelName, regime: Regime, opts: BuildOptions) -> Result<ModelSpec> {
    if !is_supported(name, regime) {
        return Err(unsupported(name, regime));
    }
    let compressible = regime == Regime::Compressible;
    let (equations, unknowns, ranking_names, dimension, best_effort): (Vec<DiffPoly>, Vec<&str>, Vec<&str>, u8, bool) =
        match name {
            ModelName::Stokes3d => {
                let (eqs, unk) = ns3d(false);
                let eqs = eqs.iter().map(drop_nonlinear).collect();
                (eqs, unk.clone(), unk, 3, false)
            }
            ModelName::RansStokes => {
                let (eqs, unk) = rans3d(false);
                let eqs = eqs.iter().map(drop_nonlinear).collect();
                (eqs, unk.clone(), unk, 3, false)
            }
            ModelName::Ns3d => {
                let (eqs, unk) = ns3d(compressible);
                (eqs, unk.clone(), unk, 3, compressible)
            }
            ModelName::Rans3d => {
                let (eqs, unk) = rans3d(compressible);
                (eqs, unk.clone(), unk, 3, compressible)
            }
            ModelName::OmegaRans => {
                let (eqs, unk) = omega_rans(compressible, opts);
                (eqs, unk.clone(), unk, 3, compressible)
            }
            ModelName::Streamfunction2d => (vec![streamfunction2d()], vec!["psi"], vec!["psi"], 2, true),
            ModelName::Prandtl => (prandtl(), vec!["u", "v", "U"], vec!["v", "u", "U"], 2, true),
            ModelName::Busemann => return Err(unsupported(name, regime)),
        };
    let base = ModelSpec {
        name,
        regime: regime_of(if compressible {
            Regime::Compressible
        } else {
            Regime::Incompressible
        }),
        dimension,
        equations,
        suggested_ranking: ranking(&ranking_names),
        unknowns: symbols(&unknowns),
        best_effort,
    };
    match regime {
        Regime::Compressible | Regime::Incompressible => Ok(base),
        _ if matches!(name, ModelName::Stokes3d | ModelName::RansStokes) => Ok(base),
        other => regime_filter(&base, other),
    }
}

fn drop_nonlinear(p: &DiffPoly) -> DiffPoly {
    p.filter_terms(|m, _| m.total_degree() < 2)
}

/// Applies a regime flag syntactically:
/// - `stokes_limit` drops every monomial of degree two or more (the
///   convective products of incompressible models);
/// - `euler_limit` drops every monomial whose coefficient involves `nu`;
/// - `stationary` drops every monomial containing a time derivative.
pub fn regime_filter(spec: &ModelSpec, flag: Regime) -> Result<ModelSpec> {
    let mut regime = spec.regime;
    match flag {
        Regime::StokesLimit => regime.stokes_limit = true,
        Regime::EulerLimit => regime.euler_limit = true,
        Regime::Stationary => regime.stationary = true,
        Regime::Compressible | Regime::Incompressible => return Err(unsupported(spec.name, flag)),
    }
    if !regime.is_consistent() {
        return Err(unsupported(spec.name, flag));
    }
    let nu = Symbol::new(VISCOSITY);
    let t = Derivation::T.index();
    let equations = spec
        .equations
        .iter()
        .map(|p| match flag {
            Regime::StokesLimit => drop_nonlinear(p),
            Regime::EulerLimit => p.filter_terms(|_, c| !c.involves(nu)),
            _ => p.filter_terms(|m, _| m.factors().iter().all(|(k, _)| k.alpha[t] == 0)),
        })
        .filter(|p| !p.is_zero())
        .collect();
    Ok(ModelSpec {
        regime,
        equations,
        ..spec.clone()
    })
}

/// Every cell of the reducibility table, in row order, with whether it is
/// populated.
pub fn table_rows() -> Vec<(ModelName, Vec<(Regime, bool)>)> {
    [
        ModelName::Busemann,
        ModelName::Prandtl,
        ModelName::Ns3d,
        ModelName::Rans3d,
        ModelName::OmegaRans,
        ModelName::Streamfunction2d,
    ]
    .into_iter()
    .map(|m| {
        let cells = Regime::ALL
            .into_iter()
            .map(|r| {
                let applicable = is_supported(m, r) || (m == ModelName::Busemann && r == Regime::Compressible);
                (r, applicable)
            })
            .collect();
        (m, cells)
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stokes_matches_filtered_navier_stokes() {
        let ns = build(ModelName::Ns3d, Regime::Incompressible).unwrap();
        let st = regime_filter(&ns, Regime::StokesLimit).unwrap();
        let stokes = build(ModelName::Stokes3d, Regime::Incompressible).unwrap();
        assert_eq!(st.equations, stokes.equations);
        assert_eq!(stokes.equations.len(), 4);
        assert_eq!(stokes.suggested_ranking.to_string(), "u>v>w>p");
    }

    #[test]
    fn rans_stokes_ranking() {
        let s = build(ModelName::RansStokes, Regime::Incompressible).unwrap();
        assert_eq!(s.suggested_ranking.to_string(), "u>v>w>u'>v'>w'>p");
        assert_eq!(s.equations.len(), 4);
    }

    #[test]
    fn omega_rans_stokes_has_eleven_equations() {
        let s = build(ModelName::OmegaRans, Regime::StokesLimit).unwrap();
        assert_eq!(s.equations.len(), 11);
        assert!(s.equations.iter().all(|p| p.terms().all(|(m, _)| m.total_degree() < 2)));
        let free = build_with(
            ModelName::OmegaRans,
            Regime::StokesLimit,
            BuildOptions { with_curl_defs: false },
        )
        .unwrap();
        assert_eq!(free.equations.len(), 5);
    }

    #[test]
    fn filters() {
        let psi = build(ModelName::Streamfunction2d, Regime::Stationary).unwrap();
        let t = Derivation::T.index();
        assert!(psi.equations.iter().all(|p| p.keys().iter().all(|k| k.alpha[t] == 0)));
        let stokes = build(ModelName::Stokes3d, Regime::Incompressible).unwrap();
        let euler = regime_filter(&stokes, Regime::EulerLimit).unwrap();
        let nu = Symbol::new(VISCOSITY);
        assert!(euler.equations.iter().all(|p| p.terms().all(|(_, c)| !c.involves(nu))));
        assert!(regime_filter(&euler, Regime::StokesLimit).is_err());
    }

    #[test]
    fn unsupported_cells() {
        assert!(matches!(
            build(ModelName::Busemann, Regime::Compressible),
            Err(Error::UnsupportedCell { .. })
        ));
        assert!(matches!(
            build(ModelName::Prandtl, Regime::Stationary),
            Err(Error::UnsupportedCell { .. })
        ));
    }
}
