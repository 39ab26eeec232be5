//! Randomized kernel properties, shared by the core test target and the
//! acceptance suite.

use std::cmp::Ordering;

use delta_core::text::{parse_expr, render_poly, Scope};
use delta_core::{
    autoreduce, pseudo_reduce, Coefficient, DerivKey, Derivation, DiffPoly, Error, Monomial, MultiIndex, Ranking,
    ReductionMode, Symbol,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const BASES: [&str; 3] = ["u", "v", "p"];
pub const PARAM: &str = "nu";

/// Runs `strategy` through `body` for `cases` cases with a fixed RNG seed.
pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    body: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: cases.saturating_mul(4),
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, body).map_err(|e| e.to_string())
}

/// Derivative symbol of total order at most `max_order`.
pub fn key(max_order: u16) -> impl Strategy<Value = DerivKey> {
    (
        0..BASES.len(),
        prop::collection::vec(derivation(), 0..=max_order as usize),
    )
        .prop_map(|(b, ds)| {
            let mut alpha: MultiIndex = [0; 4];
            for d in ds {
                alpha[d.index()] += 1;
            }
            DerivKey::new(Symbol::new(BASES[b]), alpha)
        })
}

pub fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=4, 0..4u8).prop_filter_map("nonzero", |(n, d, nu)| {
        if n == 0 {
            return None;
        }
        let q = Coefficient::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)));
        let p = Coefficient::param(Symbol::new(PARAM));
        Some(match nu {
            0 | 1 => q,
            2 => &q * &p,
            _ => q.div(&p).expect("nu is nonzero"),
        })
    })
}

fn monomial(max_order: u16, max_exp: u32, max_factors: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((key(max_order), 1..=max_exp), 0..=max_factors).prop_map(|fs| {
        fs.into_iter()
            .fold(Monomial::one(), |m, (k, e)| m.mul(&Monomial::pow(k, e)))
    })
}

/// Sparse polynomial with up to `terms` terms.
pub fn poly(terms: usize, max_order: u16, max_exp: u32) -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec((monomial(max_order, max_exp, 2), coefficient()), 0..=terms).prop_map(DiffPoly::from_terms)
}

/// Polynomial of total degree at most one.
pub fn linear_poly(terms: usize, max_order: u16) -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec((prop::option::weighted(0.9, key(max_order)), coefficient()), 1..=terms).prop_map(|ts| {
        DiffPoly::from_terms(
            ts.into_iter()
                .map(|(k, c)| (k.map(Monomial::var).unwrap_or_else(Monomial::one), c)),
        )
    })
}

pub fn derivation() -> impl Strategy<Value = Derivation> {
    prop::sample::select(Derivation::ALL.to_vec())
}

pub fn ranking() -> impl Strategy<Value = Ranking> {
    (
        Just(BASES.to_vec()).prop_shuffle(),
        Just(Derivation::ALL.to_vec()).prop_shuffle(),
    )
        .prop_map(|(b, d)| {
            Ranking::from_names(&b)
                .unwrap()
                .with_precedence([d[0], d[1], d[2], d[3]])
                .unwrap()
        })
}

fn has_leader(p: &DiffPoly) -> bool {
    !p.is_coefficient()
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    let s = (poly(4, 2, 2), poly(4, 2, 2), poly(4, 2, 2));
    run(cases, s, |(a, b, c)| {
        let zero = DiffPoly::zero();
        let one = DiffPoly::one();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a * &zero).is_zero());
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a - &b, &a + &(-&b));
        Ok(())
    })
}

pub fn leibniz_and_commutation(cases: u32) -> Result<(), String> {
    let s = (poly(4, 2, 2), poly(4, 2, 2), derivation(), derivation());
    run(cases, s, |(a, b, d, e)| {
        let lhs = (&a * &b).differentiate(d);
        let rhs = &(&a.differentiate(d) * &b) + &(&a * &b.differentiate(d));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!((&a + &b).differentiate(d), &a.differentiate(d) + &b.differentiate(d));
        prop_assert_eq!(a.differentiate(d).differentiate(e), a.differentiate(e).differentiate(d));
        let mut theta: MultiIndex = [0; 4];
        theta[d.index()] += 1;
        theta[e.index()] += 1;
        prop_assert_eq!(a.differentiate_by(&theta), a.differentiate(d).differentiate(e));
        prop_assert!(DiffPoly::param(PARAM).differentiate(d).is_zero());
        Ok(())
    })
}

pub fn ranking_axioms(cases: u32) -> Result<(), String> {
    let s = (ranking(), key(3), key(3), key(3), derivation());
    run(cases, s, |(r, a, b, c, d)| {
        let cmp = |x: &DerivKey, y: &DerivKey| r.compare(x, y).unwrap();
        // R1: a proper derivative ranks above its base.
        prop_assert_eq!(cmp(&a.derive(d), &a), Ordering::Greater);
        // R2: derivations preserve the order.
        prop_assert_eq!(cmp(&a.derive(d), &b.derive(d)), cmp(&a, &b));
        // Strict totality.
        prop_assert_eq!(cmp(&a, &b) == Ordering::Equal, a == b);
        prop_assert_eq!(cmp(&a, &b), cmp(&b, &a).reverse());
        if cmp(&a, &b) == Ordering::Greater && cmp(&b, &c) == Ordering::Greater {
            prop_assert_eq!(cmp(&a, &c), Ordering::Greater);
        }
        // Elimination: blocks dominate derivative order.
        let pos = |k: &DerivKey| r.blocks().iter().position(|&s| s == k.base).unwrap();
        if pos(&a) < pos(&b) {
            prop_assert_eq!(cmp(&a, &b), Ordering::Greater);
        }
        Ok(())
    })
}

pub fn pseudo_remainder_reduced(cases: u32) -> Result<(), String> {
    let s = (
        ranking(),
        poly(4, 2, 2),
        poly(3, 2, 2).prop_filter("has leader", has_leader),
    );
    run(cases, s, |(r, f, g)| {
        let (rem, trace) = pseudo_reduce(&f, &g, &r, ReductionMode::Full).unwrap();
        prop_assert!(r.is_reduced(&rem, &g, ReductionMode::Full).unwrap());
        prop_assert_eq!(trace.replay(&f, std::slice::from_ref(&g)), rem.clone());
        let (prem, _) = pseudo_reduce(&f, &g, &r, ReductionMode::Partial).unwrap();
        prop_assert!(r.is_reduced(&prem, &g, ReductionMode::Partial).unwrap());
        Ok(())
    })
}

/// `H f - rem` must equal an explicit combination of derivatives of `g`,
/// rebuilt here from the recorded multipliers.
pub fn premultiplier_reconstruction(cases: u32) -> Result<(), String> {
    let s = (
        ranking(),
        linear_poly(5, 2),
        linear_poly(3, 1).prop_filter("has leader", has_leader),
    );
    run(cases, s, |(r, f, g)| {
        let (rem, trace) = pseudo_reduce(&f, &g, &r, ReductionMode::Full).unwrap();
        let h = trace.total_premultiplier();
        let mut combo = DiffPoly::zero();
        for (i, step) in trace.steps.iter().enumerate() {
            let later = trace.steps[i + 1..]
                .iter()
                .fold(DiffPoly::one(), |acc, s| &acc * &s.premultiplier);
            let term = &(&later * &step.multiplier) * &g.differentiate_by(&step.theta);
            combo = &combo + &term;
        }
        prop_assert_eq!(&(&h * &f) - &rem, combo);
        prop_assert!(!h.is_zero());
        // Linear divisors have a constant initial, so nothing is premultiplied.
        prop_assert!(h.is_coefficient());
        Ok(())
    })
}

pub fn autoreduce_idempotent(cases: u32) -> Result<(), String> {
    let s = (ranking(), prop::collection::vec(poly(3, 1, 1), 1..=3));
    run(cases, s, |(r, set)| {
        let chain = match autoreduce(&set, &r) {
            Ok(c) => c,
            Err(Error::InconsistentSystem(_)) => return Err(TestCaseError::reject("inconsistent")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let again = autoreduce(chain.elements(), &r).unwrap();
        prop_assert_eq!(&again, &chain);
        let els = chain.elements();
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                if i != j {
                    prop_assert!(r.is_reduced(a, b, ReductionMode::Full).unwrap());
                }
            }
        }
        Ok(())
    })
}

pub fn parser_round_trip(cases: u32) -> Result<(), String> {
    let scope = Scope::new(&[PARAM], &BASES);
    let s = (ranking(), poly(5, 3, 3));
    run(cases, s, |(r, p)| {
        let text = render_poly(&p, &r);
        let back = parse_expr(&text, &scope).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &p, "{}", text);
        let shown = p.to_string();
        prop_assert_eq!(parse_expr(&shown, &scope).unwrap(), p);
        Ok(())
    })
}

pub type Property = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: [Property; 7] = [
    ("ring_axioms", ring_axioms),
    ("leibniz_and_commutation", leibniz_and_commutation),
    ("ranking_axioms", ranking_axioms),
    ("pseudo_remainder_reduced", pseudo_remainder_reduced),
    ("premultiplier_reconstruction", premultiplier_reconstruction),
    ("autoreduce_idempotent", autoreduce_idempotent),
    ("parser_round_trip", parser_round_trip),
];
