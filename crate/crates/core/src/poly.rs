//! Differential polynomials with exact coefficients.
//!
//! A [`DiffPoly`] is a sparse map from [`Monomial`]s (products of powers of
//! derivative symbols) to nonzero [`Coefficient`]s. The map is canonical:
//! no zero coefficient and no zero exponent is ever stored, so structural
//! equality is mathematical equality.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// One of the four commuting derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Derivation {
    T,
    X,
    Y,
    Z,
}

impl Derivation {
    pub const ALL: [Derivation; 4] = [Derivation::T, Derivation::X, Derivation::Y, Derivation::Z];

    /// Slot in a multi-index (`t, x, y, z`).
    pub fn index(self) -> usize {
        match self {
            Derivation::T => 0,
            Derivation::X => 1,
            Derivation::Y => 2,
            Derivation::Z => 3,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Derivation::T => 't',
            Derivation::X => 'x',
            Derivation::Y => 'y',
            Derivation::Z => 'z',
        }
    }

    pub fn from_letter(c: char) -> Option<Derivation> {
        match c {
            't' => Some(Derivation::T),
            'x' => Some(Derivation::X),
            'y' => Some(Derivation::Y),
            'z' => Some(Derivation::Z),
            _ => None,
        }
    }
}

/// Multi-index of derivative orders in `t, x, y, z`.
pub type MultiIndex = [u16; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndeterminateKind {
    Dependent,
    Parameter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Indeterminate {
    pub name: Symbol,
    pub kind: IndeterminateKind,
}

impl Indeterminate {
    pub fn dependent(name: &str) -> Self {
        Indeterminate {
            name: Symbol::new(name),
            kind: IndeterminateKind::Dependent,
        }
    }

    pub fn parameter(name: &str) -> Self {
        Indeterminate {
            name: Symbol::new(name),
            kind: IndeterminateKind::Parameter,
        }
    }
}

/// A dependent indeterminate together with a derivative multi-index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivKey {
    pub base: Symbol,
    pub alpha: MultiIndex,
}

impl DerivKey {
    pub fn new(base: Symbol, alpha: MultiIndex) -> Self {
        DerivKey { base, alpha }
    }

    pub fn plain(base: &str) -> Self {
        DerivKey::new(Symbol::new(base), [0; 4])
    }

    /// Parses a derivation suffix such as `"xx"` or `"xyt"`; letters commute.
    pub fn with_suffix(base: &str, suffix: &str) -> Option<Self> {
        let mut alpha = [0u16; 4];
        for c in suffix.chars() {
            alpha[Derivation::from_letter(c)?.index()] += 1;
        }
        Some(DerivKey::new(Symbol::new(base), alpha))
    }

    pub fn order(&self) -> u32 {
        self.alpha.iter().map(|&a| a as u32).sum()
    }

    pub fn derive(mut self, d: Derivation) -> Self {
        self.alpha[d.index()] += 1;
        self
    }

    pub fn derive_by(mut self, theta: &MultiIndex) -> Self {
        for (a, t) in self.alpha.iter_mut().zip(theta) {
            *a += t;
        }
        self
    }

    /// `theta` with `self = theta(other)` when `self` is a (possibly
    /// trivial) derivative of `other`.
    pub fn derivative_of(&self, other: &DerivKey) -> Option<MultiIndex> {
        if self.base != other.base {
            return None;
        }
        let mut theta = [0u16; 4];
        for ((t, a), b) in theta.iter_mut().zip(self.alpha).zip(other.alpha) {
            *t = a.checked_sub(b)?;
        }
        Some(theta)
    }

    pub fn is_proper_derivative_of(&self, other: &DerivKey) -> bool {
        self.derivative_of(other).is_some_and(|t| t != [0; 4])
    }

    /// Least common derivative of two keys of the same base.
    pub fn lcm(&self, other: &DerivKey) -> Option<DerivKey> {
        if self.base != other.base {
            return None;
        }
        let alpha = std::array::from_fn(|i| self.alpha[i].max(other.alpha[i]));
        Some(DerivKey::new(self.base, alpha))
    }

    /// Renders as `base_letters` with letters in the given precedence.
    pub fn display_with(&self, precedence: &[Derivation; 4]) -> String {
        let mut s = self.base.to_string();
        if self.order() > 0 {
            s.push('_');
            for d in precedence {
                for _ in 0..self.alpha[d.index()] {
                    s.push(d.letter());
                }
            }
        }
        s
    }
}

pub const DEFAULT_PRECEDENCE: [Derivation; 4] = [Derivation::X, Derivation::Y, Derivation::Z, Derivation::T];

impl fmt::Display for DerivKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&DEFAULT_PRECEDENCE))
    }
}

impl fmt::Debug for DerivKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Product of powers of derivative symbols, sorted by key.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[(DerivKey, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(k: DerivKey) -> Self {
        Monomial::pow(k, 1)
    }

    pub fn pow(k: DerivKey, e: u32) -> Self {
        let mut v = SmallVec::new();
        if e > 0 {
            v.push((k, e));
        }
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(DerivKey, u32)] {
        &self.0
    }

    pub fn degree_of(&self, k: &DerivKey) -> u32 {
        self.0.binary_search_by(|(x, _)| x.cmp(k)).map_or(0, |i| self.0[i].1)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Sets the exponent of `k` (removing it when `e == 0`).
    pub fn with_exponent(&self, k: &DerivKey, e: u32) -> Monomial {
        let mut v = self.0.clone();
        match v.binary_search_by(|(x, _)| x.cmp(k)) {
            Ok(i) => {
                if e == 0 {
                    v.remove(i);
                } else {
                    v[i].1 = e;
                }
            }
            Err(i) => {
                if e > 0 {
                    v.insert(i, (*k, e));
                }
            }
        }
        Monomial(v)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, e)| if *e == 1 { k.to_string() } else { format!("{k}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Differential polynomial in canonical form.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Coefficient>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        DiffPoly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        DiffPoly::constant(Coefficient::from_int(n))
    }

    pub fn param(name: &str) -> Self {
        DiffPoly::constant(Coefficient::param(Symbol::new(name)))
    }

    pub fn term(m: Monomial, c: Coefficient) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn key(k: DerivKey) -> Self {
        DiffPoly::term(Monomial::var(k), Coefficient::one())
    }

    /// Convenience: `DiffPoly::var("u", "xy")` is `u_xy`.
    pub fn var(base: &str, suffix: &str) -> Self {
        DiffPoly::key(DerivKey::with_suffix(base, suffix).expect("derivation letters are t, x, y, z"))
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Coefficient)>) -> Self {
        let mut p = DiffPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, c: &Coefficient, m: &Monomial, other: &DiffPoly) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(m.mul(om), c * oc);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Option<&Coefficient> {
        self.terms.get(m)
    }

    /// All derivative symbols occurring in the polynomial.
    pub fn keys(&self) -> BTreeSet<DerivKey> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|&(k, _)| k)).collect()
    }

    pub fn parameters(&self) -> BTreeSet<Symbol> {
        self.terms.values().flat_map(|c| c.symbols()).collect()
    }

    /// The value when no dependent indeterminate occurs.
    pub fn as_coefficient(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_coefficient(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn scale(&self, c: &Coefficient) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(tm, c)| (tm.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal total derivative.
    pub fn differentiate(&self, d: Derivation) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (i, &(k, e)) in m.0.iter().enumerate() {
                let mut rest = m.0.clone();
                if e == 1 {
                    rest.remove(i);
                } else {
                    rest[i].1 = e - 1;
                }
                let dm = Monomial(rest).mul(&Monomial::var(k.derive(d)));
                let dc = if e == 1 {
                    c.clone()
                } else {
                    c * &Coefficient::from_int(e as i64)
                };
                out.add_term(dm, dc);
            }
        }
        out
    }

    /// Applies the derivative operator with multi-index `theta`.
    pub fn differentiate_by(&self, theta: &MultiIndex) -> DiffPoly {
        let mut p = self.clone();
        for d in Derivation::ALL {
            for _ in 0..theta[d.index()] {
                p = p.differentiate(d);
            }
        }
        p
    }

    /// Highest derivative order occurring, and the support.
    pub fn measure(&self) -> Result<(u32, BTreeSet<DerivKey>)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let keys = self.keys();
        let max_order = keys.iter().map(DerivKey::order).max().unwrap_or(0);
        Ok((max_order, keys))
    }

    pub fn degree_in(&self, k: &DerivKey) -> u32 {
        self.terms.keys().map(|m| m.degree_of(k)).max().unwrap_or(0)
    }

    /// Coefficient of `k^deg` when the polynomial is viewed as a polynomial in `k`.
    pub fn coeff_of_power(&self, k: &DerivKey, deg: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_of(k) == deg)
                .map(|(m, c)| (m.with_exponent(k, 0), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to the symbol `k`.
    pub fn partial(&self, k: &DerivKey) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_of(k);
            if e == 0 {
                continue;
            }
            let dc = if e == 1 {
                c.clone()
            } else {
                c * &Coefficient::from_int(e as i64)
            };
            out.add_term(m.with_exponent(k, e - 1), dc);
        }
        out
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial, &Coefficient) -> bool) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Maps every coefficient; zero results are dropped.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Coefficient) -> Coefficient) -> DiffPoly {
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let (mut out, other) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_scaled(c, m, rhs);
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: &DiffPoly) -> DiffPoly {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> DiffPoly {
        match s.split_once('_') {
            Some((b, suf)) => DiffPoly::var(b, suf),
            None => DiffPoly::var(s, ""),
        }
    }

    #[test]
    fn add_cancels_and_merges() {
        let p = &(&v("u_x") + &v("v")) + &(-&v("v"));
        assert_eq!(p, v("u_x"));
        assert_eq!(&v("u_x") + &DiffPoly::zero(), v("u_x"));
        let five = &v("u").scale(&Coefficient::from_int(2)) + &v("u").scale(&Coefficient::from_int(3));
        assert_eq!(five, v("u").scale(&Coefficient::from_int(5)));
    }

    #[test]
    fn mul_examples() {
        let ux = v("u_x");
        assert_eq!(
            &ux * &ux,
            DiffPoly::term(
                Monomial::pow(DerivKey::with_suffix("u", "x").unwrap(), 2),
                Coefficient::one()
            )
        );
        assert_eq!(&ux * &DiffPoly::one(), ux);
        let lhs = &(&v("u") + &v("v")) * &(&v("u") - &v("v"));
        let rhs = &(&v("u") * &v("u")) - &(&v("v") * &v("v"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_and_schwarz() {
        let p = &v("u_x") * &v("v");
        let expect = &(&v("u_xx") * &v("v")) + &(&v("u_x") * &v("v_x"));
        assert_eq!(p.differentiate(Derivation::X), expect);
        assert!(DiffPoly::param("nu").differentiate(Derivation::X).is_zero());
        assert_eq!(v("u_x").differentiate(Derivation::Y), v("u_xy"));
        assert_eq!(v("u_y").differentiate(Derivation::X), v("u_xy"));
        assert_eq!(v("u_yx"), v("u_xy"));
    }

    #[test]
    fn measure_examples() {
        let nu = DiffPoly::param("nu");
        let lap = &(&v("u_xx") + &v("u_yy")) + &v("u_zz");
        let p = &(&v("u_t") + &v("p_x")) - &(&nu * &lap);
        assert_eq!(p.measure().unwrap().0, 2);
        assert_eq!(p.measure().unwrap().1.len(), 5);
        assert_eq!(v("u").measure().unwrap().0, 0);
        assert_eq!(DiffPoly::zero().measure(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn partial_and_power_coefficients() {
        let k = DerivKey::with_suffix("u", "x").unwrap();
        let p = &(&v("u_x").pow(2) * &v("v")) + &v("u_x");
        assert_eq!(p.degree_in(&k), 2);
        assert_eq!(p.coeff_of_power(&k, 2), v("v"));
        let expect = &(&v("u_x") * &v("v")).scale(&Coefficient::from_int(2)) + &DiffPoly::one();
        assert_eq!(p.partial(&k), expect);
    }
}
