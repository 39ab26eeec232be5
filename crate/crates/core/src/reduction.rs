//! Ritt pseudo-reduction, chains and autoreduction.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{DerivKey, DiffPoly, Monomial, MultiIndex};
use crate::ranking::{Ranking, ReductionMode};

/// One elementary elimination:
/// `f_next = premultiplier * f - multiplier * theta(divisor)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub divisor: usize,
    pub theta: MultiIndex,
    pub premultiplier: DiffPoly,
    pub multiplier: DiffPoly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub step_count: usize,
}

impl ReductionTrace {
    /// Re-applies the recorded steps to `f`.
    pub fn replay(&self, f: &DiffPoly, divisors: &[DiffPoly]) -> DiffPoly {
        self.steps.iter().fold(f.clone(), |acc, s| {
            let d = divisors[s.divisor].differentiate_by(&s.theta);
            &(&s.premultiplier * &acc) - &(&s.multiplier * &d)
        })
    }

    /// Product of all premultipliers.
    pub fn total_premultiplier(&self) -> DiffPoly {
        self.steps
            .iter()
            .fold(DiffPoly::one(), |acc, s| &acc * &s.premultiplier)
    }

    /// Number of maximal runs of consecutive steps using the same divisor.
    pub fn passes(&self) -> usize {
        count_passes(self.steps.iter().map(|s| s.divisor))
    }
}

fn count_passes(divisors: impl Iterator<Item = usize>) -> usize {
    let mut last = None;
    let mut n = 0;
    for d in divisors {
        if last != Some(d) {
            n += 1;
            last = Some(d);
        }
    }
    n
}

/// Elimination counts of one reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StepCount {
    pub eliminations: usize,
    pub passes: usize,
}

/// A divisor with its cached leader data.
#[derive(Clone, Debug)]
pub(crate) struct Divisor {
    pub poly: DiffPoly,
    pub leader: DerivKey,
    pub degree: u32,
    pub initial: DiffPoly,
    pub separant: DiffPoly,
}

impl Divisor {
    pub fn new(poly: DiffPoly, r: &Ranking) -> Result<Self> {
        let ld = r.leader_data(&poly)?;
        Ok(Divisor {
            poly,
            leader: ld.leader,
            degree: ld.degree,
            initial: ld.initial,
            separant: ld.separant,
        })
    }
}

/// Divisors sorted by decreasing leader rank, with a cache of their
/// derivatives.
pub(crate) struct DivisorSet<'r> {
    ranking: &'r Ranking,
    divisors: Vec<Divisor>,
    /// Position of each sorted divisor in the caller's list.
    origin: Vec<usize>,
    derivatives: HashMap<(usize, MultiIndex), DiffPoly>,
}

impl<'r> DivisorSet<'r> {
    pub fn new(ranking: &'r Ranking, divisors: Vec<Divisor>) -> Self {
        let mut order: Vec<usize> = (0..divisors.len()).collect();
        order.sort_by(|&a, &b| {
            let (da, db) = (&divisors[a], &divisors[b]);
            ranking
                .rank_cmp((&db.leader, db.degree), (&da.leader, da.degree))
                .then(a.cmp(&b))
        });
        let mut slots: Vec<Option<Divisor>> = divisors.into_iter().map(Some).collect();
        let sorted = order
            .iter()
            .map(|&i| slots[i].take().expect("each divisor moved once"))
            .collect();
        DivisorSet {
            ranking,
            divisors: sorted,
            origin: order,
            derivatives: HashMap::new(),
        }
    }

    fn derivative(&mut self, i: usize, theta: &MultiIndex) -> &DiffPoly {
        let d = &self.divisors[i];
        self.derivatives
            .entry((i, *theta))
            .or_insert_with(|| d.poly.differentiate_by(theta))
    }

    /// Highest-ranked key of `f` that some divisor can eliminate, with the
    /// divisor (highest leader first) and derivative operator to use.
    fn find_reducible(&self, f: &DiffPoly, mode: ReductionMode) -> Option<(DerivKey, usize, MultiIndex)> {
        let mut keys: Vec<DerivKey> = f.keys().into_iter().collect();
        keys.sort_by(|a, b| self.ranking.cmp_keys(b, a));
        for k in keys {
            for (i, d) in self.divisors.iter().enumerate() {
                if let Some(theta) = k.derivative_of(&d.leader) {
                    if theta != [0; 4] {
                        return Some((k, i, theta));
                    }
                    if mode == ReductionMode::Full && f.degree_in(&k) >= d.degree {
                        return Some((k, i, theta));
                    }
                }
            }
        }
        None
    }

    /// Reduces `f`, invoking `on_step` after every elimination. The callback
    /// may abort the reduction by returning `false`; the partially reduced
    /// polynomial is then returned.
    pub fn reduce(
        &mut self,
        f: &DiffPoly,
        mode: ReductionMode,
        mut trace: Option<&mut Vec<ReductionStep>>,
        mut on_step: impl FnMut(&DiffPoly) -> bool,
    ) -> (DiffPoly, StepCount, bool) {
        let mut f = f.clone();
        let mut used = Vec::new();
        let mut completed = true;
        while let Some((k, i, theta)) = self.find_reducible(&f, mode) {
            let is_leader = theta == [0; 4];
            let (e, pre) = if is_leader {
                (self.divisors[i].degree, self.divisors[i].initial.clone())
            } else {
                (1, self.divisors[i].separant.clone())
            };
            let df = f.degree_in(&k);
            let lc = f.coeff_of_power(&k, df);
            let shift = Monomial::pow(k, df - e);
            let h = self.derivative(i, &theta).clone();
            let (premultiplier, multiplier) = match pre.as_coefficient() {
                Some(c) => {
                    let inv = c.inv().expect("initials and separants are nonzero");
                    let mult = lc.scale(&inv).mul_monomial(&shift);
                    f = &f - &(&mult * &h);
                    (DiffPoly::one(), mult)
                }
                None => {
                    let mult = lc.mul_monomial(&shift);
                    f = &(&pre * &f) - &(&mult * &h);
                    (pre, mult)
                }
            };
            used.push(i);
            if let Some(t) = trace.as_deref_mut() {
                t.push(ReductionStep {
                    divisor: self.origin[i],
                    theta,
                    premultiplier,
                    multiplier,
                });
            }
            if !on_step(&f) {
                completed = false;
                break;
            }
        }
        let count = StepCount {
            eliminations: used.len(),
            passes: count_passes(used.into_iter()),
        };
        (f, count, completed)
    }
}

/// Pseudo-reduces `f` by the single divisor `g`.
///
/// Constant initials and separants are divided out instead of multiplied in,
/// so reducing by a monic divisor never introduces premultipliers.
pub fn pseudo_reduce(
    f: &DiffPoly,
    g: &DiffPoly,
    r: &Ranking,
    mode: ReductionMode,
) -> Result<(DiffPoly, ReductionTrace)> {
    r.check_poly(f)?;
    let div = Divisor::new(g.clone(), r)?;
    let mut set = DivisorSet::new(r, vec![div]);
    let mut steps = Vec::new();
    let (rem, count, _) = set.reduce(f, mode, Some(&mut steps), |_| true);
    Ok((
        rem,
        ReductionTrace {
            steps,
            step_count: count.eliminations,
        },
    ))
}

/// Autoreduced list of polynomials with strictly ascending leaders.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain {
    elements: Vec<DiffPoly>,
}

impl Chain {
    pub fn empty() -> Self {
        Chain::default()
    }

    /// Validates the chain invariants and sorts by ascending rank.
    pub fn new(mut elements: Vec<DiffPoly>, r: &Ranking) -> Result<Self> {
        for e in &elements {
            r.leader(e)?;
        }
        elements.sort_by(|a, b| r.poly_cmp(a, b));
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                if i != j && !r.is_reduced(a, b, ReductionMode::Full)? {
                    return Err(Error::InvalidArgument(format!(
                        "chain element {i} is not reduced with respect to element {j}"
                    )));
                }
            }
        }
        Ok(Chain { elements })
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<DiffPoly>) -> Self {
        Chain { elements }
    }

    pub fn elements(&self) -> &[DiffPoly] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &DiffPoly) -> bool {
        self.elements.contains(p)
    }

    pub fn into_elements(self) -> Vec<DiffPoly> {
        self.elements
    }

    pub(crate) fn divisor_set<'r>(&self, r: &'r Ranking) -> Result<DivisorSet<'r>> {
        let divs = self
            .elements
            .iter()
            .map(|e| Divisor::new(e.clone(), r))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorSet::new(r, divs))
    }
}

/// Fully reduces `f` against every element of `c`, eliminating the
/// highest-ranked reducible derivative first.
pub fn reduce_against_chain(f: &DiffPoly, c: &Chain, r: &Ranking) -> Result<(DiffPoly, ReductionTrace)> {
    r.check_poly(f)?;
    if c.is_empty() {
        return Ok((f.clone(), ReductionTrace::default()));
    }
    let mut set = c.divisor_set(r)?;
    let mut steps = Vec::new();
    let (rem, count, _) = set.reduce(f, ReductionMode::Full, Some(&mut steps), |_| true);
    Ok((
        rem,
        ReductionTrace {
            steps,
            step_count: count.eliminations,
        },
    ))
}

/// Scales `p` so that a constant initial becomes 1; otherwise the leading
/// coefficient of the initial is made 1.
pub fn normalize(p: &DiffPoly, r: &Ranking) -> DiffPoly {
    let Some(leader) = r.leader_unchecked(p) else {
        return match p.as_coefficient() {
            Some(c) if !c.is_zero() => DiffPoly::one(),
            _ => p.clone(),
        };
    };
    let init = p.coeff_of_power(&leader, p.degree_in(&leader));
    let lc: Coefficient = match init.as_coefficient() {
        Some(c) => c,
        None => {
            let (_, c) = init
                .terms()
                .max_by(|a, b| monomial_rank_cmp(r, a.0, b.0))
                .expect("initial is nonzero");
            c.clone()
        }
    };
    p.scale(&lc.inv().expect("nonzero leading coefficient"))
}

/// Orders monomials by their factors from the highest-ranked key down.
pub(crate) fn monomial_rank_cmp(r: &Ranking, a: &Monomial, b: &Monomial) -> Ordering {
    let sorted = |m: &Monomial| {
        let mut f: Vec<(DerivKey, u32)> = m.factors().to_vec();
        f.sort_by(|x, y| r.cmp_keys(&y.0, &x.0));
        f
    };
    let (fa, fb) = (sorted(a), sorted(b));
    for (x, y) in fa.iter().zip(fb.iter()) {
        match r.cmp_keys(&x.0, &y.0).then(x.1.cmp(&y.1)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    fa.len().cmp(&fb.len())
}

/// Indices of a basic set of `polys` (sorted ascending), built greedily from
/// the lowest rank up, and the indices left out.
pub(crate) fn basic_set(polys: &[DiffPoly], r: &Ranking) -> (Vec<usize>, Vec<usize>) {
    let mut chosen: Vec<(usize, DerivKey, u32)> = Vec::new();
    let mut rest = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        let Some(l) = r.leader_unchecked(p) else {
            rest.push(i);
            continue;
        };
        let reduced = chosen
            .iter()
            .all(|(_, cl, cd)| p.keys().iter().all(|k| !k.is_proper_derivative_of(cl)) && p.degree_in(cl) < *cd);
        if reduced {
            chosen.push((i, l, p.degree_in(&l)));
        } else {
            rest.push(i);
        }
    }
    (chosen.into_iter().map(|(i, _, _)| i).collect(), rest)
}

/// Sorts by rank and removes zeros and duplicates.
pub(crate) fn sort_set(set: &mut Vec<DiffPoly>, r: &Ranking) {
    set.retain(|p| !p.is_zero());
    set.sort_by(|a, b| r.poly_cmp(a, b));
    set.dedup();
}

/// Autoreduces `s` to a chain, iterating until no element leaves a nonzero
/// remainder against the current basic set.
pub fn autoreduce(s: &[DiffPoly], r: &Ranking) -> Result<Chain> {
    let mut set: Vec<DiffPoly> = Vec::with_capacity(s.len());
    for p in s {
        r.check_poly(p)?;
        set.push(normalize(p, r));
    }
    loop {
        sort_set(&mut set, r);
        if let Some(bad) = set.iter().find(|p| p.is_coefficient()) {
            return Err(Error::InconsistentSystem(format!("{bad:?}")));
        }
        let (basic, rest) = basic_set(&set, r);
        let chain: Vec<DiffPoly> = basic.iter().map(|&i| set[i].clone()).collect();
        let mut divisors = Chain::from_sorted_unchecked(chain.clone()).divisor_set(r)?;
        let mut remainders = Vec::new();
        for &i in &rest {
            let (rem, _, _) = divisors.reduce(&set[i], ReductionMode::Full, None, |_| true);
            if !rem.is_zero() {
                remainders.push(normalize(&rem, r));
            }
        }
        if remainders.is_empty() {
            return Ok(Chain::from_sorted_unchecked(chain));
        }
        set = chain;
        set.extend(remainders);
    }
}
