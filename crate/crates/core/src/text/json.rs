//! Serializable views for the `delta-reduce/1` JSON schema.

use serde::Serialize;

use crate::poly::DiffPoly;
use crate::ranking::Ranking;
use crate::rg::{Budget, Outcome, Stats, Termination, Verdict};
use crate::text::render::{render_poly, solved_form};

pub const SCHEMA: &str = "delta-reduce/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEntry {
    pub leader: String,
    pub rhs: String,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionJson {
    pub poly: String,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub schema: &'static str,
    pub outcome: &'static str,
    pub class: String,
    pub reason: Option<String>,
    pub ranking: String,
    pub chains: Vec<Vec<ChainEntry>>,
    pub branch_conditions: Vec<Vec<ConditionJson>>,
    pub termination: Vec<Termination>,
    pub stats: Stats,
    pub budget: Budget,
    /// What the verdict does and does not establish.
    pub provenance: String,
}

pub fn chain_entry(p: &DiffPoly, r: &Ranking) -> ChainEntry {
    let (leader, rhs) = solved_form(p, r);
    ChainEntry {
        leader,
        rhs,
        poly: render_poly(p, r),
    }
}

pub fn verdict_json(v: &Verdict, r: &Ranking, budget: &Budget) -> VerdictJson {
    let (outcome, reason, chains, conditions, termination, provenance) = match &v.outcome {
        Outcome::Reducible(branches) => {
            let quiescent = branches.iter().any(|b| b.termination == Termination::Quiescent);
            let provenance = if quiescent {
                format!(
                    "R: every branch closed; at least one by quiescence ({} steps without a new leader)",
                    budget.quiescence_window
                )
            } else {
                "R: every Δ-polynomial and input reduced to zero on every branch".to_string()
            };
            (
                "reducible",
                None,
                branches
                    .iter()
                    .map(|b| b.chain.elements().iter().map(|p| chain_entry(p, r)).collect())
                    .collect(),
                branches
                    .iter()
                    .map(|b| {
                        b.conditions
                            .iter()
                            .map(|c| ConditionJson {
                                poly: render_poly(&c.poly, r),
                                nonzero: c.nonzero,
                            })
                            .collect()
                    })
                    .collect(),
                branches.iter().map(|b| b.termination).collect(),
                provenance,
            )
        }
        Outcome::Irreducible(reason) => (
            "irreducible",
            Some(reason.to_string()),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            format!(
                "I: the run was stopped by {reason}; this is a budget verdict, not a proof that no finite chain exists"
            ),
        ),
    };
    VerdictJson {
        schema: SCHEMA,
        outcome,
        class: v.class().to_string(),
        reason,
        ranking: r.to_string(),
        chains,
        branch_conditions: conditions,
        termination,
        stats: v.stats,
        budget: *budget,
        provenance,
    }
}
