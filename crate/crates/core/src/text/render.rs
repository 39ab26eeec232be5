//! Human-readable rendering. Everything printed here parses back to the same
//! polynomial.

use std::fmt;

use crate::coeff::Coefficient;
use crate::poly::{DerivKey, Derivation, DiffPoly, Monomial};
use crate::ranking::Ranking;
use crate::reduction::{monomial_rank_cmp, Chain};
use crate::rg::{Condition, Outcome, Verdict};

fn key_str(k: &DerivKey, prec: &[Derivation; 4]) -> String {
    k.display_with(prec)
}

fn monomial_str(m: &Monomial, r: &Ranking) -> String {
    let mut f: Vec<(DerivKey, u32)> = m.factors().to_vec();
    f.sort_by(|a, b| r.cmp_keys(&b.0, &a.0));
    f.iter()
        .map(|(k, e)| {
            let s = key_str(k, r.precedence());
            if *e == 1 {
                s
            } else {
                format!("{s}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn coeff_factor(c: &Coefficient) -> String {
    let s = c.to_string();
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

/// `|c|*m`, with the sign returned separately.
fn signed_term(m: &Monomial, c: &Coefficient, r: &Ranking) -> (bool, String) {
    let neg = c.is_negative();
    let abs = if neg { -c } else { c.clone() };
    let body = if m.is_one() {
        coeff_factor(&abs)
    } else if abs.is_one() {
        monomial_str(m, r)
    } else {
        format!("{}*{}", coeff_factor(&abs), monomial_str(m, r))
    };
    (neg, body)
}

fn join_signed(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Ranking over the bases of `p` in name order, used when the caller has none.
fn fallback_ranking(p: &DiffPoly) -> Ranking {
    let mut bases: Vec<_> = p.keys().iter().map(|k| k.base).collect();
    bases.sort();
    bases.dedup();
    Ranking::new(bases).expect("deduplicated")
}

fn sorted_terms<'a>(p: &'a DiffPoly, r: &Ranking) -> Vec<(&'a Monomial, &'a Coefficient)> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| monomial_rank_cmp(r, b.0, a.0));
    terms
}

/// Sum of terms, highest-ranked monomial first.
pub fn render_poly(p: &DiffPoly, r: &Ranking) -> String {
    join_signed(sorted_terms(p, r).into_iter().map(|(m, c)| signed_term(m, c, r)))
}

/// Like [`render_poly`], but terms with the same non-rational coefficient
/// (up to sign) are collected: `-v_yy + 1/nu*(v_t + p_y)`.
pub fn render_grouped(p: &DiffPoly, r: &Ranking) -> String {
    let terms = sorted_terms(p, r);
    let mut parts: Vec<(bool, String)> = Vec::new();
    let mut groups: Vec<(Coefficient, Vec<(bool, &Monomial)>)> = Vec::new();
    for (m, c) in terms {
        if c.as_rational().is_some() || m.is_one() {
            parts.push(signed_term(m, c, r));
            continue;
        }
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        match groups.iter_mut().find(|(g, _)| *g == abs) {
            Some((_, members)) => members.push((neg, m)),
            None => groups.push((abs, vec![(neg, m)])),
        }
    }
    for (c, members) in groups {
        if members.len() == 1 {
            let (neg, m) = members[0];
            let signed = if neg { -&c } else { c.clone() };
            parts.push(signed_term(m, &signed, r));
            continue;
        }
        // Pull a leading minus out of the bracket.
        let flip = members[0].0;
        let inner = join_signed(members.iter().map(|(neg, m)| (*neg != flip, monomial_str(m, r))));
        parts.push((flip, format!("{}*({inner})", coeff_factor(&c))));
    }
    join_signed(parts)
}

/// Solved form `lhs = rhs` of a chain element. When the initial is a
/// constant and the leader appears linearly, `lhs` is the bare leader;
/// otherwise it is the part of `p` carrying the highest power of the leader.
pub fn solved_form(p: &DiffPoly, r: &Ranking) -> (String, String) {
    let Some(leader) = r.leader_unchecked(p) else {
        return (render_poly(p, r), "0".into());
    };
    let deg = p.degree_in(&leader);
    let init = p.coeff_of_power(&leader, deg);
    let top = &init * &DiffPoly::key(leader).pow(deg);
    let rest = p - &top;
    match init.as_coefficient() {
        Some(c) if deg == 1 => {
            let inv = c.inv().expect("initial is nonzero");
            let rhs = rest.scale(&-&inv);
            (key_str(&leader, r.precedence()), render_grouped(&rhs, r))
        }
        _ => (render_poly(&top, r), render_grouped(&-&rest, r)),
    }
}

pub fn render_chain(c: &Chain, r: &Ranking) -> String {
    c.elements()
        .iter()
        .map(|p| {
            let (l, rhs) = solved_form(p, r);
            format!("{l} = {rhs}\n")
        })
        .collect()
}

fn render_condition(c: &Condition, r: &Ranking) -> String {
    format!("{} {} 0", render_poly(&c.poly, r), if c.nonzero { "!=" } else { "==" })
}

/// Multi-line human report for a verdict.
pub fn render_verdict(v: &Verdict, r: &Ranking) -> String {
    let mut out = String::new();
    match &v.outcome {
        Outcome::Reducible(branches) => {
            out.push_str(&format!(
                "verdict: R ({} branch{})\n",
                branches.len(),
                if branches.len() == 1 { "" } else { "es" }
            ));
            for (i, b) in branches.iter().enumerate() {
                if branches.len() > 1 || !b.conditions.is_empty() {
                    out.push_str(&format!("\nbranch {}:\n", i + 1));
                    for c in &b.conditions {
                        out.push_str(&format!("  assume {}\n", render_condition(c, r)));
                    }
                }
                out.push_str(&render_chain(&b.chain, r));
            }
        }
        Outcome::Irreducible(reason) => {
            out.push_str(&format!("verdict: I (stopped by {reason})\n"));
        }
    }
    let s = &v.stats;
    out.push_str(&format!(
        "stats: steps={} leaders={} max_order={} max_terms={} branches={}\n",
        s.total_steps, s.distinct_leaders_seen, s.max_order_reached, s.max_terms, s.branches
    ));
    out
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_poly(self, &fallback_ranking(self)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse::{parse_expr, Scope};

    fn scope() -> Scope {
        Scope::new(&["nu"], &["u", "v", "w", "p"])
    }

    fn r() -> Ranking {
        Ranking::from_names(&["u", "v", "w", "p"]).unwrap()
    }

    #[test]
    fn zero_renders_as_zero() {
        assert_eq!(render_poly(&DiffPoly::zero(), &r()), "0");
        assert_eq!(DiffPoly::zero().to_string(), "0");
    }

    #[test]
    fn solved_forms() {
        let p = parse_expr("u_x + v_y + w_z", &scope()).unwrap();
        assert_eq!(solved_form(&p, &r()), ("u_x".into(), "-v_y - w_z".into()));
        let p = parse_expr("p_z + w_t - nu*(w_xx + w_yy + w_zz)", &scope()).unwrap();
        let (l, rhs) = solved_form(&p, &r());
        assert_eq!(l, "w_xx");
        assert_eq!(rhs, "-w_yy - w_zz + 1/nu*(w_t + p_z)");
        // The element was divided by its initial, -nu.
        let back = parse_expr(&format!("{l} - ({rhs})"), &scope()).unwrap();
        assert_eq!(back.scale(&-&Coefficient::param(crate::Symbol::new("nu"))), p);
    }

    #[test]
    fn nonlinear_solved_form() {
        let p = parse_expr("v*u_x - 1", &scope()).unwrap();
        let (l, rhs) = solved_form(&p, &r());
        assert_eq!((l.as_str(), rhs.as_str()), ("u_x*v", "1"));
    }

    #[test]
    fn awkward_coefficients_round_trip() {
        let s = Scope::new(&["nu", "mu"], &["u"]);
        for src in [
            "u/(2*nu)",
            "u*(nu + 1)/nu",
            "-u^2*(nu - 3/2*mu)/(nu*mu + 1)",
            "3/2 - nu",
            "-1/nu",
        ] {
            let p = parse_expr(src, &s).unwrap();
            let ranking = Ranking::from_names(&["u"]).unwrap();
            assert_eq!(parse_expr(&render_poly(&p, &ranking), &s).unwrap(), p, "{src}");
            assert_eq!(parse_expr(&render_grouped(&p, &ranking), &s).unwrap(), p, "{src}");
        }
    }
}
