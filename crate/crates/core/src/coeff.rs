//! Exact coefficients: rational functions in the parameters (e.g. `nu`)
//! over the rationals.
//!
//! A [`Coefficient`] is kept as a reduced fraction `num / den` of
//! [`ParamPoly`] values whose denominator is monic under the lexicographic
//! monomial order, so equal rational functions have identical
//! representations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::symbol::Symbol;

/// Parameter monomial: sorted `(symbol, exponent)` pairs, no zero exponents.
pub type ParamMonomial = SmallVec<[(Symbol, u32); 2]>;

/// Multivariate polynomial over Q in the parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, BigRational>,
}

/// Lexicographic comparison; the alphabetically first symbol is the most
/// significant variable.
pub fn lex_cmp(a: &ParamMonomial, b: &ParamMonomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(sa, ea)), Some(&(sb, eb))) => {
                if sa == sb {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                } else if sa < sb {
                    return Ordering::Greater;
                } else {
                    return Ordering::Less;
                }
            }
        }
    }
}

fn mono_mul(a: &ParamMonomial, b: &ParamMonomial) -> ParamMonomial {
    let mut out = ParamMonomial::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `a / b` if `b` divides `a`.
fn mono_div(a: &ParamMonomial, b: &ParamMonomial) -> Option<ParamMonomial> {
    let mut out = ParamMonomial::new();
    let mut j = 0;
    for &(s, e) in a {
        if j < b.len() && b[j].0 < s {
            return None;
        }
        if j < b.len() && b[j].0 == s {
            match e.cmp(&b[j].1) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => out.push((s, e - b[j].1)),
            }
            j += 1;
        } else {
            out.push((s, e));
        }
    }
    (j == b.len()).then_some(out)
}

fn mono_exponent(m: &ParamMonomial, s: Symbol) -> u32 {
    m.iter().find(|(t, _)| *t == s).map_or(0, |&(_, e)| e)
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamMonomial::new(), c);
        }
        ParamPoly { terms }
    }

    pub fn var(s: Symbol) -> Self {
        let mut m = ParamMonomial::new();
        m.push((s, 1));
        let mut terms = BTreeMap::new();
        terms.insert(m, BigRational::one());
        ParamPoly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (ParamMonomial, BigRational)>) -> Self {
        let mut p = ParamPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: ParamMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.get(&ParamMonomial::new()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.as_constant().is_some()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.iter().map(|&(s, _)| s)).collect()
    }

    pub fn leading_term(&self) -> Option<(&ParamMonomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0))
    }

    pub fn scale(&self, c: &BigRational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| mono_exponent(m, s)).max().unwrap_or(0)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves
    /// a remainder.
    pub fn div_exact(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = mono_div(&m, &lm)?;
            let qc = c / &lc;
            let mut t = ParamPoly::zero();
            t.add_term(qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> ParamPoly {
        match self.leading_term() {
            None => ParamPoly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    fn as_monomial(&self) -> Option<&ParamMonomial> {
        if self.terms.len() == 1 {
            self.terms.keys().next()
        } else {
            None
        }
    }

    fn to_univariate(&self, x: Symbol) -> Vec<ParamPoly> {
        let mut out: Vec<ParamPoly> = vec![ParamPoly::zero(); self.degree_in(x) as usize + 1];
        for (m, c) in &self.terms {
            let e = mono_exponent(m, x);
            let rest: ParamMonomial = m.iter().copied().filter(|(s, _)| *s != x).collect();
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    fn from_univariate(coeffs: &[ParamPoly], x: Symbol) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            if e == 0 {
                out = &out + c;
                continue;
            }
            let mut xm = ParamMonomial::new();
            xm.push((x, e as u32));
            for (m, v) in &c.terms {
                out.add_term(mono_mul(m, &xm), v.clone());
            }
        }
        out
    }
}

fn trim(p: &mut Vec<ParamPoly>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn pseudo_rem(a: &[ParamPoly], b: &[ParamPoly]) -> Vec<ParamPoly> {
    let mut r: Vec<ParamPoly> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        trim(&mut r);
    }
    r
}

fn content(coeffs: &[ParamPoly]) -> ParamPoly {
    let mut g = ParamPoly::zero();
    for c in coeffs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(coeffs: &[ParamPoly]) -> Vec<ParamPoly> {
    let c = content(coeffs);
    if c.is_zero() || c.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|x| x.div_exact(&c).expect("content divides every coefficient"))
        .collect()
}

/// Monic greatest common divisor over Q.
pub fn gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one();
    }
    if a == b {
        return a.monic();
    }
    // Monomial fast path: the gcd is the monomial of minimal exponents.
    for (m, other) in [(a.as_monomial(), b), (b.as_monomial(), a)] {
        if let Some(m) = m {
            let mut g: ParamMonomial = m.clone();
            for om in other.terms.keys() {
                g = g
                    .iter()
                    .filter_map(|&(s, e)| {
                        let oe = mono_exponent(om, s).min(e);
                        (oe > 0).then_some((s, oe))
                    })
                    .collect();
                if g.is_empty() {
                    break;
                }
            }
            let mut out = ParamPoly::zero();
            out.add_term(g, BigRational::one());
            return out;
        }
    }
    let x = *a
        .symbols()
        .union(&b.symbols())
        .next()
        .expect("non-constant polynomials have symbols");
    let ua = a.to_univariate(x);
    let ub = b.to_univariate(x);
    let c = gcd(&content(&ua), &content(&ub));
    let mut p = primitive_part(&ua);
    let mut q = primitive_part(&ub);
    trim(&mut p);
    trim(&mut q);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        if q.len() == 1 {
            // Degree zero in x and primitive: the univariate gcd is a unit.
            p = vec![ParamPoly::one()];
            break;
        }
        let r = pseudo_rem(&p, &q);
        p = q;
        q = if r.is_empty() { r } else { primitive_part(&r) };
    }
    let g = ParamPoly::from_univariate(&primitive_part(&p), x);
    (&c * &g).monic()
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &ParamMonomial) -> String {
    m.iter()
        .map(|&(s, e)| if e == 1 { s.to_string() } else { format!("{s}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for ParamPoly {
    /// Terms in descending lexicographic order, e.g. `nu^2 - 3/2*nu + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| lex_cmp(b.0, a.0));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Reduced rational function of the parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coefficient {
    num: ParamPoly,
    den: ParamPoly,
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::zero()
    }
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Coefficient::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Coefficient {
            num: ParamPoly::constant(c),
            den: ParamPoly::one(),
        }
    }

    pub fn param(s: Symbol) -> Self {
        Coefficient {
            num: ParamPoly::var(s),
            den: ParamPoly::one(),
        }
    }

    pub fn from_poly(num: ParamPoly) -> Self {
        Coefficient {
            num,
            den: ParamPoly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    ///
    /// Panics if `den` is zero.
    pub fn from_fraction(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Coefficient::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip();
            return Coefficient {
                num: num.scale(&inv),
                den: ParamPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_term().map(|(_, c)| c.recip()).expect("nonzero denominator");
        Coefficient {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// The value as a rational number when no parameter occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.den.is_one() {
            self.num.as_constant().cloned()
        } else {
            None
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn involves(&self, s: Symbol) -> bool {
        self.num.degree_in(s) > 0 || self.den.degree_in(s) > 0
    }

    pub fn inv(&self) -> Option<Coefficient> {
        if self.is_zero() {
            return None;
        }
        Some(Coefficient::from_fraction(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Coefficient) -> Option<Coefficient> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn powi(&self, n: i32) -> Option<Coefficient> {
        if n >= 0 {
            Some(Coefficient {
                num: self.num.pow(n as u32),
                den: self.den.pow(n as u32),
            })
        } else {
            self.inv()?.powi(-n)
        }
    }

    /// Sign of the leading numerator coefficient.
    pub fn is_negative(&self) -> bool {
        self.num.leading_term().is_some_and(|(_, c)| c.is_negative())
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return Coefficient {
                    num,
                    den: ParamPoly::one(),
                };
            }
            return Coefficient::from_fraction(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Coefficient::from_fraction(num, &self.den * &rhs.den)
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        if self.is_zero() || rhs.is_zero() {
            return Coefficient::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Coefficient {
                num: &self.num * &rhs.num,
                den: ParamPoly::one(),
            };
        }
        Coefficient::from_fraction(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        // `1/2*nu` would read back as `(1/2)*nu`.
        let den = self.den.to_string();
        if den.contains([' ', '*', '/']) {
            write!(f, "{num}/({den})")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu() -> ParamPoly {
        ParamPoly::var(Symbol::new("nu"))
    }

    fn int(n: i64) -> ParamPoly {
        ParamPoly::constant(BigRational::from_integer(n.into()))
    }

    #[test]
    fn gcd_of_univariate() {
        // (nu+1)(nu-2) and (nu+1)(nu+3)
        let a = &(&nu() + &int(1)) * &(&nu() - &int(2));
        let b = &(&nu() + &int(1)) * &(&nu() + &int(3));
        assert_eq!(gcd(&a, &b), &nu() + &int(1));
    }

    #[test]
    fn gcd_of_bivariate() {
        let mu = ParamPoly::var(Symbol::new("mu"));
        let common = &(&nu() * &mu) + &int(1);
        let a = &common * &(&nu() + &mu);
        let b = &common * &(&nu() - &int(5));
        assert_eq!(gcd(&a, &b), common);
    }

    #[test]
    fn fractions_reduce() {
        let n = Coefficient::param(Symbol::new("nu"));
        let inv = n.inv().unwrap();
        assert!((&n * &inv).is_one());
        let half = Coefficient::from_rational(BigRational::new(1.into(), 2.into()));
        let s = &(&half * &inv) + &(&half * &inv);
        assert_eq!(s, inv);
        assert_eq!(inv.to_string(), "1/nu");
        let x = &(&n + &Coefficient::one()) * &inv;
        assert_eq!(x.to_string(), "(nu + 1)/nu");
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn zero_is_unique() {
        let n = Coefficient::param(Symbol::new("nu"));
        let a = &(&n * &n.inv().unwrap()) - &Coefficient::one();
        assert_eq!(a, Coefficient::zero());
    }
}
