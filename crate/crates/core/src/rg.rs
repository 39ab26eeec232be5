//! Rosenfeld–Gröbner style decomposition.
//!
//! Each branch alternates autoreduction of its working set with the
//! completion step: Δ-polynomials of chain elements that share an
//! indeterminate are reduced against the chain, and nonzero remainders join
//! the set. A chain element whose initial (or separant) is not a constant
//! splits the branch into a case where that polynomial is assumed nonzero
//! and a case where it vanishes. Parameters are assumed nonzero and never
//! split on.
//!
//! Runs are bounded by a [`Budget`]. A branch whose pseudo-reductions go
//! `quiescence_window` steps without producing a previously unseen leader is
//! accepted as converged; exhausting `step_cap`, exceeding `order_cap` or
//! letting an intermediate polynomial grow past `term_cap` terms ends the run
//! as irreducible.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{DerivKey, DiffPoly};
use crate::ranking::{Ranking, ReductionMode};
use crate::reduction::{basic_set, normalize, sort_set, Chain, Divisor, DivisorSet};

/// What counts as one pseudo-reduction step against the budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepUnit {
    /// One elementary elimination of a derivative power.
    #[default]
    Elimination,
    /// One run of consecutive eliminations by the same divisor.
    Pass,
}

pub const DEFAULT_TERM_CAP: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub quiescence_window: usize,
    pub order_cap: u32,
    pub step_cap: usize,
    /// Largest number of terms any intermediate polynomial may reach.
    pub term_cap: usize,
    pub step_unit: StepUnit,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            quiescence_window: 400,
            order_cap: 12,
            step_cap: 100_000,
            term_cap: DEFAULT_TERM_CAP,
            step_unit: StepUnit::Elimination,
        }
    }
}

impl Budget {
    pub fn new(quiescence_window: usize, order_cap: u32, step_cap: usize) -> Result<Self> {
        if quiescence_window == 0 || order_cap == 0 || step_cap == 0 {
            return Err(Error::InvalidArgument("budget limits must be positive".into()));
        }
        Ok(Budget {
            quiescence_window,
            order_cap,
            step_cap,
            term_cap: DEFAULT_TERM_CAP,
            step_unit: StepUnit::Elimination,
        })
    }

    pub fn with_term_cap(mut self, term_cap: usize) -> Result<Self> {
        if term_cap == 0 {
            return Err(Error::InvalidArgument("budget limits must be positive".into()));
        }
        self.term_cap = term_cap;
        Ok(self)
    }

    pub fn with_step_unit(mut self, unit: StepUnit) -> Self {
        self.step_unit = unit;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibleReason {
    BudgetExhausted,
    OrderCap,
    TermCap,
}

impl fmt::Display for IrreducibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrreducibleReason::BudgetExhausted => "budget_exhausted",
            IrreducibleReason::OrderCap => "order_cap",
            IrreducibleReason::TermCap => "term_cap",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub total_steps: usize,
    pub distinct_leaders_seen: usize,
    pub max_order_reached: u32,
    pub max_terms: usize,
    pub branches: usize,
}

/// Assumption recorded when a branch splits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub poly: DiffPoly,
    pub nonzero: bool,
}

/// How a reducible branch stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Every Δ-polynomial and input reduced to zero.
    Completed,
    /// The quiescence window elapsed without a new leader.
    Quiescent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchChain {
    pub chain: Chain,
    pub conditions: Vec<Condition>,
    pub termination: Termination,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Reducible(Vec<BranchChain>),
    Irreducible(IrreducibleReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Verdict {
    pub fn is_reducible(&self) -> bool {
        matches!(self.outcome, Outcome::Reducible(_))
    }

    pub fn class(&self) -> Class {
        if self.is_reducible() {
            Class::R
        } else {
            Class::I
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    R,
    I,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::R => "R",
            Class::I => "I",
        })
    }
}

/// Cross-derivative of two polynomials whose leaders are derivatives of the
/// same indeterminate: `S_g * θ_f(f) - S_f * θ_g(g)`, where `θ_f`, `θ_g`
/// lift both leaders to their least common derivative.
///
/// Returns `None` when the bases differ or one leader is a proper
/// derivative of the other.
pub fn delta_poly(f: &DiffPoly, g: &DiffPoly, r: &Ranking) -> Result<Option<DiffPoly>> {
    let df = Divisor::new(f.clone(), r)?;
    let dg = Divisor::new(g.clone(), r)?;
    Ok(delta_of(&df, &dg))
}

fn delta_of(f: &Divisor, g: &Divisor) -> Option<DiffPoly> {
    let lcm = f.leader.lcm(&g.leader)?;
    if f.leader != g.leader
        && (f.leader.is_proper_derivative_of(&g.leader) || g.leader.is_proper_derivative_of(&f.leader))
    {
        return None;
    }
    let tf = lcm.derivative_of(&f.leader).expect("lcm is a derivative");
    let tg = lcm.derivative_of(&g.leader).expect("lcm is a derivative");
    let (sf, sg) = if tf == [0; 4] && tg == [0; 4] {
        (&f.initial, &g.initial)
    } else {
        (&f.separant, &g.separant)
    };
    let a = f.poly.differentiate_by(&tf);
    let b = g.poly.differentiate_by(&tg);
    Some(&(sg * &a) - &(sf * &b))
}

fn lcm_key(f: &Divisor, g: &Divisor) -> Option<DerivKey> {
    f.leader.lcm(&g.leader)
}

#[derive(Clone, Debug)]
struct Branch {
    set: Vec<DiffPoly>,
    inputs: Vec<DiffPoly>,
    nonzero: Vec<DiffPoly>,
    conditions: Vec<Condition>,
    seen: BTreeSet<DerivKey>,
    since_new: usize,
    done_pairs: HashSet<(DiffPoly, DiffPoly)>,
}

enum BranchEnd {
    Done(BranchChain),
    Split(Box<Branch>, Box<Branch>),
    Inconsistent(DiffPoly),
    Stopped,
}

struct Engine<'a> {
    r: &'a Ranking,
    budget: Budget,
    total_steps: usize,
    max_order: u32,
    max_terms: usize,
    leaders: BTreeSet<DerivKey>,
    stop: Option<IrreducibleReason>,
    branches: usize,
}

impl Engine<'_> {
    fn note_leader(&mut self, br: &mut Branch, p: &DiffPoly) {
        let Some(k) = self.r.leader_unchecked(p) else {
            return;
        };
        self.max_order = self.max_order.max(k.order());
        self.leaders.insert(k);
        if br.seen.insert(k) {
            br.since_new = 0;
        }
        if k.order() > self.budget.order_cap && self.stop.is_none() {
            self.stop = Some(IrreducibleReason::OrderCap);
        }
    }

    /// Reduces `f` against `divs`, charging the steps to the budget.
    fn reduce(&mut self, br: &mut Branch, divs: &mut DivisorSet<'_>, f: &DiffPoly) -> DiffPoly {
        let unit = self.budget.step_unit;
        let cap = self.budget.step_cap;
        let mut local = 0usize;
        let term_cap = self.budget.term_cap;
        let mut max_terms = self.max_terms.max(f.len());
        let start = self.total_steps;
        let (rem, count, _) = divs.reduce(f, ReductionMode::Full, None, |g| {
            max_terms = max_terms.max(g.len());
            if g.len() > term_cap {
                return false;
            }
            if unit == StepUnit::Elimination {
                local += 1;
                start + local < cap
            } else {
                true
            }
        });
        self.max_terms = max_terms;
        if max_terms > term_cap && self.stop.is_none() {
            self.stop = Some(IrreducibleReason::TermCap);
        }
        let charged = match unit {
            StepUnit::Elimination => count.eliminations,
            StepUnit::Pass => count.passes,
        };
        self.charge(br, charged);
        rem
    }

    fn charge(&mut self, br: &mut Branch, n: usize) {
        self.total_steps += n;
        br.since_new += n;
        if self.total_steps >= self.budget.step_cap && self.stop.is_none() {
            self.stop = Some(IrreducibleReason::BudgetExhausted);
        }
    }

    fn known_nonzero(&self, br: &Branch, q: &DiffPoly) -> bool {
        if q.as_coefficient().is_some_and(|c| !c.is_zero()) {
            return true;
        }
        let q = normalize(q, self.r);
        if br.nonzero.contains(&q) {
            return true;
        }
        // A single monomial is nonzero when each of its factors is.
        if q.len() == 1 {
            let (m, _) = q.terms().next().expect("one term");
            return m.factors().iter().all(|(k, _)| br.nonzero.contains(&DiffPoly::key(*k)));
        }
        false
    }

    fn split(&self, br: &Branch, chain: &[DiffPoly]) -> Result<Option<(Branch, Branch)>> {
        for p in chain {
            let ld = self.r.leader_data(p)?;
            let mut candidates = vec![(ld.initial.clone(), true)];
            if ld.degree > 1 {
                candidates.push((ld.separant.clone(), false));
            }
            for (q, is_initial) in candidates {
                if self.known_nonzero(br, &q) {
                    continue;
                }
                let qn = normalize(&q, self.r);
                let mut keep = br.clone();
                keep.nonzero.push(qn.clone());
                keep.conditions.push(Condition {
                    poly: qn.clone(),
                    nonzero: true,
                });
                let mut vanish = br.clone();
                vanish.conditions.push(Condition {
                    poly: qn.clone(),
                    nonzero: false,
                });
                if is_initial {
                    let reductum = p - &(&q * &DiffPoly::key(ld.leader).pow(ld.degree));
                    vanish.set.retain(|x| x != p);
                    if !reductum.is_zero() {
                        vanish.set.push(normalize(&reductum, self.r));
                    }
                }
                vanish.set.push(qn.clone());
                vanish.inputs.push(qn);
                vanish.done_pairs.clear();
                return Ok(Some((keep, vanish)));
            }
        }
        Ok(None)
    }

    fn run_branch(&mut self, mut br: Branch) -> Result<BranchEnd> {
        let r = self.r;
        loop {
            // Autoreduce the working set to a fixed point.
            let chain: Vec<DiffPoly> = loop {
                sort_set(&mut br.set, r);
                if let Some(bad) = br.set.iter().find(|p| p.is_coefficient()) {
                    return Ok(BranchEnd::Inconsistent(bad.clone()));
                }
                let (basic, rest) = basic_set(&br.set, r);
                let chain: Vec<DiffPoly> = basic.iter().map(|&i| br.set[i].clone()).collect();
                let mut divs = Chain::from_sorted_unchecked(chain.clone()).divisor_set(r)?;
                let mut rems = Vec::new();
                for &i in &rest {
                    let f = br.set[i].clone();
                    let rem = self.reduce(&mut br, &mut divs, &f);
                    if self.stop.is_some() {
                        return Ok(BranchEnd::Stopped);
                    }
                    if !rem.is_zero() {
                        let rem = normalize(&rem, r);
                        self.note_leader(&mut br, &rem);
                        rems.push(rem);
                    }
                }
                if self.stop.is_some() {
                    return Ok(BranchEnd::Stopped);
                }
                if rems.is_empty() {
                    break chain;
                }
                br.set = chain;
                br.set.extend(rems);
            };

            if let Some((keep, vanish)) = self.split(&br, &chain)? {
                return Ok(BranchEnd::Split(Box::new(keep), Box::new(vanish)));
            }

            let divisors: Vec<Divisor> = chain
                .iter()
                .map(|p| Divisor::new(p.clone(), r))
                .collect::<Result<_>>()?;
            let mut pairs = Vec::new();
            for i in 0..divisors.len() {
                for j in i + 1..divisors.len() {
                    if let Some(l) = lcm_key(&divisors[i], &divisors[j]) {
                        pairs.push((l, i, j));
                    }
                }
            }
            pairs.sort_by(|a, b| r.cmp_keys(&a.0, &b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

            let mut divs = Chain::from_sorted_unchecked(chain.clone()).divisor_set(r)?;
            let mut new = Vec::new();
            for (_, i, j) in pairs {
                let key = (chain[i].clone(), chain[j].clone());
                if br.done_pairs.contains(&key) {
                    continue;
                }
                let Some(delta) = delta_of(&divisors[i], &divisors[j]) else {
                    continue;
                };
                let rem = self.reduce(&mut br, &mut divs, &delta);
                if self.stop.is_some() {
                    return Ok(BranchEnd::Stopped);
                }
                if rem.is_zero() {
                    br.done_pairs.insert(key);
                } else {
                    let rem = normalize(&rem, r);
                    self.note_leader(&mut br, &rem);
                    if self.stop.is_some() {
                        return Ok(BranchEnd::Stopped);
                    }
                    new.push(rem);
                }
            }

            if new.is_empty() {
                for q in br.inputs.clone() {
                    let rem = self.reduce(&mut br, &mut divs, &q);
                    if self.stop.is_some() {
                        return Ok(BranchEnd::Stopped);
                    }
                    if !rem.is_zero() {
                        let rem = normalize(&rem, r);
                        self.note_leader(&mut br, &rem);
                        new.push(rem);
                    }
                }
            }

            if new.is_empty() {
                return self.finish(br, chain, Termination::Completed, &mut divs);
            }
            if br.since_new >= self.budget.quiescence_window {
                return self.finish(br, chain, Termination::Quiescent, &mut divs);
            }
            br.set = chain;
            br.set.extend(new);
        }
    }

    /// Discards branches whose nonvanishing assumptions are contradicted.
    fn finish(
        &mut self,
        mut br: Branch,
        chain: Vec<DiffPoly>,
        termination: Termination,
        divs: &mut DivisorSet<'_>,
    ) -> Result<BranchEnd> {
        for h in br.nonzero.clone() {
            let rem = self.reduce(&mut br, divs, &h);
            if rem.is_zero() {
                return Ok(BranchEnd::Inconsistent(h));
            }
        }
        Ok(BranchEnd::Done(BranchChain {
            chain: Chain::from_sorted_unchecked(chain),
            conditions: br.conditions,
            termination,
        }))
    }
}

/// Decomposes `system` into triangular chains under ranking `r`.
pub fn rosenfeld_groebner(system: &[DiffPoly], r: &Ranking, budget: Budget) -> Result<Verdict> {
    let mut inputs = Vec::new();
    for p in system {
        r.check_poly(p)?;
        if !p.is_zero() {
            inputs.push(normalize(p, r));
        }
    }
    let mut engine = Engine {
        r,
        budget,
        total_steps: 0,
        max_order: 0,
        max_terms: 0,
        leaders: BTreeSet::new(),
        stop: None,
        branches: 0,
    };
    let mut root = Branch {
        set: inputs.clone(),
        inputs: inputs.clone(),
        nonzero: Vec::new(),
        conditions: Vec::new(),
        seen: BTreeSet::new(),
        since_new: 0,
        done_pairs: HashSet::new(),
    };
    for p in &inputs {
        engine.note_leader(&mut root, p);
    }

    let mut stack = vec![root];
    let mut done = Vec::new();
    let mut first_inconsistency = None;
    while let Some(br) = stack.pop() {
        if engine.stop.is_some() {
            break;
        }
        engine.branches += 1;
        match engine.run_branch(br)? {
            BranchEnd::Done(bc) => done.push(bc),
            BranchEnd::Split(keep, vanish) => {
                // Depth first, generic case first.
                stack.push(*vanish);
                stack.push(*keep);
            }
            BranchEnd::Inconsistent(p) => {
                first_inconsistency.get_or_insert(p);
            }
            BranchEnd::Stopped => break,
        }
    }

    let stats = Stats {
        total_steps: engine.total_steps,
        distinct_leaders_seen: engine.leaders.len(),
        max_order_reached: engine.max_order,
        max_terms: engine.max_terms,
        branches: engine.branches,
    };
    if let Some(reason) = engine.stop {
        return Ok(Verdict {
            outcome: Outcome::Irreducible(reason),
            stats,
        });
    }
    if done.is_empty() {
        if let Some(p) = first_inconsistency {
            return Err(Error::InconsistentSystem(format!("{p:?}")));
        }
    }
    done.sort_by(|a, b| a.conditions.cmp(&b.conditions));
    Ok(Verdict {
        outcome: Outcome::Reducible(done),
        stats,
    })
}

/// `R` when every branch triangularizes within the budget, `I` otherwise.
pub fn classify(system: &[DiffPoly], r: &Ranking, budget: Budget) -> Result<Class> {
    Ok(rosenfeld_groebner(system, r, budget)?.class())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Derivation;

    fn v(s: &str) -> DiffPoly {
        match s.split_once('_') {
            Some((b, suf)) => DiffPoly::var(b, suf),
            None => DiffPoly::var(s, ""),
        }
    }

    #[test]
    fn delta_of_linear_pair() {
        let r = Ranking::from_names(&["u", "v"]).unwrap();
        let f = &v("u_x") + &v("v");
        let g = &v("u_t") - &v("v_y");
        let expect = &f.differentiate(Derivation::T) - &g.differentiate(Derivation::X);
        assert_eq!(delta_poly(&f, &g, &r).unwrap(), Some(expect));
        assert_eq!(delta_poly(&v("u_x"), &v("v_xx"), &r).unwrap(), None);
        assert_eq!(delta_poly(&v("u_x"), &v("u_xy"), &r).unwrap(), None);
        let d = delta_poly(&f, &f, &r).unwrap().unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn empty_system_is_reducible() {
        let r = Ranking::from_names(&["u"]).unwrap();
        let verdict = rosenfeld_groebner(&[DiffPoly::zero()], &r, Budget::default()).unwrap();
        match verdict.outcome {
            Outcome::Reducible(b) => {
                assert_eq!(b.len(), 1);
                assert!(b[0].chain.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn integrability_condition_is_found() {
        // u_x = v, u_y = 0 forces v_y = 0.
        let r = Ranking::from_names(&["u", "v"]).unwrap();
        let sys = [&v("u_x") - &v("v"), v("u_y")];
        let verdict = rosenfeld_groebner(&sys, &r, Budget::default()).unwrap();
        let Outcome::Reducible(b) = verdict.outcome else {
            panic!("expected reducible");
        };
        assert!(b[0].chain.contains(&v("v_y")));
    }

    #[test]
    fn splitting_on_initial() {
        // v*u_x - 1 = 0 with v free: the vanishing branch is inconsistent.
        let r = Ranking::from_names(&["u", "v"]).unwrap();
        let sys = [&(&v("v") * &v("u_x")) - &DiffPoly::one()];
        let verdict = rosenfeld_groebner(&sys, &r, Budget::default()).unwrap();
        let Outcome::Reducible(b) = verdict.outcome else {
            panic!("expected reducible");
        };
        assert_eq!(b.len(), 1);
        assert_eq!(
            b[0].conditions,
            vec![Condition {
                poly: v("v"),
                nonzero: true
            }]
        );
        assert!(verdict.stats.branches >= 2);
    }

    #[test]
    fn inconsistent_root_errors() {
        let r = Ranking::from_names(&["u"]).unwrap();
        let sys = [v("u_x"), &v("u_x") + &DiffPoly::one()];
        assert!(matches!(
            rosenfeld_groebner(&sys, &r, Budget::default()),
            Err(Error::InconsistentSystem(_))
        ));
    }

    #[test]
    fn budget_rejects_zero() {
        assert!(Budget::new(0, 12, 10).is_err());
        assert!(Budget::new(400, 12, 100_000).is_ok());
    }
}
