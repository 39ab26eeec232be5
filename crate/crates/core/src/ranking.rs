//! Elimination rankings on derivative symbols, and the leader, initial and
//! separant of a differential polynomial.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{DerivKey, Derivation, DiffPoly, DEFAULT_PRECEDENCE};
use crate::symbol::Symbol;

/// Block elimination ranking, one indeterminate per block.
///
/// Any derivative of an earlier block outranks every derivative of a later
/// one. Inside a block, higher total order wins, and ties go to the larger
/// multi-index compared along `precedence`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    blocks: Vec<Symbol>,
    precedence: [Derivation; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionMode {
    /// No proper derivative of the divisor's leader may remain.
    Partial,
    /// Additionally, the degree in the leader itself must drop below the
    /// divisor's degree.
    #[default]
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeaderData {
    pub leader: DerivKey,
    pub degree: u32,
    pub initial: DiffPoly,
    pub separant: DiffPoly,
}

impl Ranking {
    pub fn new(blocks: Vec<Symbol>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if blocks[..i].contains(b) {
                return Err(Error::DuplicateEntry(b.to_string()));
            }
        }
        Ok(Ranking {
            blocks,
            precedence: DEFAULT_PRECEDENCE,
        })
    }

    /// `Ranking::from_names(&["u", "v", "w", "p"])` is `u > v > w > p`.
    pub fn from_names(names: &[&str]) -> Result<Self> {
        Ranking::new(names.iter().map(|n| Symbol::new(n)).collect())
    }

    pub fn with_precedence(mut self, precedence: [Derivation; 4]) -> Result<Self> {
        for (i, d) in precedence.iter().enumerate() {
            if precedence[..i].contains(d) {
                return Err(Error::DuplicateEntry(d.letter().to_string()));
            }
        }
        self.precedence = precedence;
        Ok(self)
    }

    pub fn blocks(&self) -> &[Symbol] {
        &self.blocks
    }

    pub fn precedence(&self) -> &[Derivation; 4] {
        &self.precedence
    }

    fn block(&self, s: Symbol) -> Option<usize> {
        self.blocks.iter().position(|&b| b == s)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.block(s).is_some()
    }

    /// Compares two derivative symbols; `Greater` means `a` ranks higher.
    pub fn compare(&self, a: &DerivKey, b: &DerivKey) -> Result<Ordering> {
        let ba = self
            .block(a.base)
            .ok_or_else(|| Error::UnknownIndeterminate(a.base.to_string()))?;
        let bb = self
            .block(b.base)
            .ok_or_else(|| Error::UnknownIndeterminate(b.base.to_string()))?;
        Ok(self.cmp_in_blocks(ba, a, bb, b))
    }

    fn cmp_in_blocks(&self, ba: usize, a: &DerivKey, bb: usize, b: &DerivKey) -> Ordering {
        // Lower block index ranks higher.
        bb.cmp(&ba).then_with(|| a.order().cmp(&b.order())).then_with(|| {
            for d in &self.precedence {
                let i = d.index();
                match a.alpha[i].cmp(&b.alpha[i]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    /// Infallible comparison for keys already validated with
    /// [`Ranking::check_poly`].
    pub(crate) fn cmp_keys(&self, a: &DerivKey, b: &DerivKey) -> Ordering {
        let ba = self.block(a.base).unwrap_or(usize::MAX);
        let bb = self.block(b.base).unwrap_or(usize::MAX);
        self.cmp_in_blocks(ba, a, bb, b)
    }

    /// Fails with `UnknownIndeterminate` if `p` uses a base outside the ranking.
    pub fn check_poly(&self, p: &DiffPoly) -> Result<()> {
        for k in p.keys() {
            if !self.contains(k.base) {
                return Err(Error::UnknownIndeterminate(k.base.to_string()));
            }
        }
        Ok(())
    }

    /// Leader and its degree.
    pub fn leader(&self, p: &DiffPoly) -> Result<(DerivKey, u32)> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        self.check_poly(p)?;
        let leader = self.leader_unchecked(p).ok_or(Error::NoLeader)?;
        Ok((leader, p.degree_in(&leader)))
    }

    pub(crate) fn leader_unchecked(&self, p: &DiffPoly) -> Option<DerivKey> {
        let mut best: Option<DerivKey> = None;
        for (m, _) in p.terms() {
            for &(k, _) in m.factors() {
                best = match best {
                    Some(b) if self.cmp_keys(&b, &k) != Ordering::Less => Some(b),
                    _ => Some(k),
                };
            }
        }
        best
    }

    pub fn leader_data(&self, p: &DiffPoly) -> Result<LeaderData> {
        let (leader, degree) = self.leader(p)?;
        Ok(LeaderData {
            leader,
            degree,
            initial: p.coeff_of_power(&leader, degree),
            separant: p.partial(&leader),
        })
    }

    /// Whether `f` is reduced with respect to `g`.
    pub fn is_reduced(&self, f: &DiffPoly, g: &DiffPoly, mode: ReductionMode) -> Result<bool> {
        let (lg, dg) = self.leader(g)?;
        for k in f.keys() {
            if k.is_proper_derivative_of(&lg) {
                return Ok(false);
            }
        }
        Ok(match mode {
            ReductionMode::Partial => true,
            ReductionMode::Full => f.degree_in(&lg) < dg,
        })
    }

    /// Ritt rank comparison of two polynomials with leaders: leader first,
    /// then degree in the leader.
    pub(crate) fn rank_cmp(&self, a: (&DerivKey, u32), b: (&DerivKey, u32)) -> Ordering {
        self.cmp_keys(a.0, b.0).then(a.1.cmp(&b.1))
    }

    /// Total ordering of polynomials used to sort chains and working sets.
    /// Polynomials without a leader come first.
    pub fn poly_cmp(&self, a: &DiffPoly, b: &DiffPoly) -> Ordering {
        let la = self.leader_unchecked(a).map(|k| (k, a.degree_in(&k)));
        let lb = self.leader_unchecked(b).map(|k| (k, b.degree_in(&k)));
        match (la, lb) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => self.rank_cmp((&x.0, x.1), (&y.0, y.1)),
        }
        .then_with(|| a.len().cmp(&b.len()))
        .then_with(|| a.cmp(b))
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.blocks.iter().map(|s| s.as_str()).collect();
        f.write_str(&names.join(">"))?;
        if self.precedence != DEFAULT_PRECEDENCE {
            let letters: Vec<String> = self.precedence.iter().map(|d| d.letter().to_string()).collect();
            write!(f, "; prec {}", letters.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ranking({self})")
    }
}
