//! System-file and ranking parser.
//!
//! ```text
//! # Stokes, 3-D
//! param nu;
//! var u, v, w, p;
//! ranking u>v>w>p
//! u_x + v_y + w_z = 0
//! u_t + p_x - nu*(u_xx + u_yy + u_zz) = 0
//! ```
//!
//! Declarations (`param`, `var`, `derivations`, `ranking`) may appear on any
//! line; every other non-blank line is one equation `lhs = rhs`, stored as
//! `lhs - rhs`. `#` starts a comment.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{DerivKey, Derivation, DiffPoly, MultiIndex, DEFAULT_PRECEDENCE};
use crate::ranking::Ranking;
use crate::symbol::Symbol;

const KEYWORDS: [&str; 5] = ["param", "var", "derivations", "ranking", "prec"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub params: Vec<Symbol>,
    pub vars: Vec<Symbol>,
    pub derivations: Vec<Derivation>,
    pub ranking: Option<Ranking>,
    pub equations: Vec<DiffPoly>,
}

/// Symbols an expression may refer to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scope {
    pub params: Vec<Symbol>,
    pub vars: Vec<Symbol>,
    /// Derivation letters allowed in suffixes; empty means all four.
    pub derivations: Vec<Derivation>,
}

impl Scope {
    pub fn new(params: &[&str], vars: &[&str]) -> Self {
        Scope {
            params: params.iter().map(|s| Symbol::new(s)).collect(),
            vars: vars.iter().map(|s| Symbol::new(s)).collect(),
            derivations: Vec::new(),
        }
    }

    fn allows(&self, d: Derivation) -> bool {
        self.derivations.is_empty() || self.derivations.contains(&d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident {
        name: String,
        suffix: Option<(String, usize)>,
    },
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    Comma,
    Semi,
    Gt,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident { name, .. } => format!("`{name}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Gt => "`>`".into(),
        }
    }
}

/// Token with its 1-based column.
#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn lex(src: &str, line: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '>' => Some(Tok::Gt),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, col });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || is_ident_start(chars[i])) {
                return Err(syntax(line, i + 1, "malformed number"));
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<BigInt>().expect("digits");
            out.push(Spanned { tok: Tok::Int(n), col });
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut suffix = None;
            if i < chars.len() && chars[i] == '_' {
                let at = i + 2;
                i += 1;
                let s0 = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                if i == s0 {
                    return Err(syntax(line, at, "expected derivation letters after `_`"));
                }
                suffix = Some((chars[s0..i].iter().collect(), at));
            }
            if i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                return Err(syntax(line, i + 1, format!("unexpected character `{}`", chars[i])));
            }
            out.push(Spanned {
                tok: Tok::Ident { name, suffix },
                col,
            });
            continue;
        }
        return Err(syntax(line, col, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    /// Column just past the end of the line, for errors at end of input.
    eol: usize,
    scope: &'a Scope,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.eol, |s| s.col)
    }

    fn bump(&mut self) -> Option<&'a Spanned> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn error_here(&self, expected: &str) -> Error {
        match self.peek() {
            Some(t) => syntax(
                self.line,
                self.col(),
                format!("expected {expected}, found {}", t.describe()),
            ),
            None => syntax(self.line, self.eol, format!("expected {expected}, found end of line")),
        }
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -&self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    let col = self.col();
                    self.bump();
                    let d = self.unary()?;
                    let c = d
                        .as_coefficient()
                        .ok_or_else(|| syntax(self.line, col, "division by an expression involving unknowns"))?;
                    let inv = c.inv().ok_or_else(|| syntax(self.line, col, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<DiffPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let caret = self.col();
        self.bump();
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let col = self.col();
        let n = match self.bump().map(|s| &s.tok) {
            Some(Tok::Int(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.error_here("an integer exponent"));
            }
        };
        let e: u32 = n.try_into().map_err(|_| syntax(self.line, col, "exponent too large"))?;
        if !negative {
            return Ok(base.pow(e));
        }
        let c = base.as_coefficient().ok_or_else(|| {
            syntax(
                self.line,
                caret,
                "negative exponent on an expression involving unknowns",
            )
        })?;
        let e = i32::try_from(e).map_err(|_| syntax(self.line, col, "exponent too large"))?;
        let p = c
            .powi(-e)
            .ok_or_else(|| syntax(self.line, caret, "negative power of zero"))?;
        Ok(DiffPoly::constant(p))
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.bump();
                Ok(DiffPoly::constant(Coefficient::from_rational(
                    BigRational::from_integer(n.clone()),
                )))
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error_here("`)`"));
                }
                self.bump();
                Ok(e)
            }
            Some(Tok::Ident { name, suffix }) => {
                self.bump();
                self.symbol(name, suffix.as_ref(), col)
            }
            _ => Err(self.error_here("an expression")),
        }
    }

    fn symbol(&self, name: &str, suffix: Option<&(String, usize)>, col: usize) -> Result<DiffPoly> {
        let sym = Symbol::new(name);
        if self.scope.params.contains(&sym) {
            if let Some((_, at)) = suffix {
                return Err(syntax(
                    self.line,
                    *at,
                    format!("parameter `{name}` cannot be differentiated"),
                ));
            }
            return Ok(DiffPoly::param(name));
        }
        if !self.scope.vars.contains(&sym) {
            return Err(Error::UndeclaredSymbol {
                name: name.to_string(),
                line: self.line,
                column: col,
            });
        }
        let mut alpha: MultiIndex = [0; 4];
        if let Some((letters, at)) = suffix {
            for (k, ch) in letters.chars().enumerate() {
                let d = Derivation::from_letter(ch)
                    .filter(|d| self.scope.allows(*d))
                    .ok_or_else(|| syntax(self.line, at + k, format!("`{ch}` is not a declared derivation")))?;
                alpha[d.index()] += 1;
            }
        }
        Ok(DiffPoly::key(DerivKey::new(sym, alpha)))
    }
}

/// Parses one expression (no `=`) over `scope`.
pub fn parse_expr(text: &str, scope: &Scope) -> Result<DiffPoly> {
    parse_expr_at(text, scope, 1)
}

fn parse_expr_at(text: &str, scope: &Scope, line: usize) -> Result<DiffPoly> {
    let toks = lex(text, line)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        line,
        eol: text.chars().count() + 1,
        scope,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error_here("an operator"));
    }
    Ok(e)
}

fn parse_equation(toks: &[Spanned], text: &str, scope: &Scope, line: usize) -> Result<DiffPoly> {
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        eol: text.chars().count() + 1,
        scope,
    };
    let lhs = p.expr()?;
    if p.peek() != Some(&Tok::Eq) {
        return Err(p.error_here(if p.peek().is_none() {
            "`=`"
        } else {
            "an operator or `=`"
        }));
    }
    p.bump();
    let rhs = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error_here("an operator or end of line"));
    }
    Ok(&lhs - &rhs)
}

/// Comma-separated identifiers, optionally closed by `;`.
fn name_list(toks: &[Spanned], line: usize, eol: usize) -> Result<Vec<(String, usize)>> {
    let mut names = Vec::new();
    let mut i = 0;
    loop {
        match toks.get(i) {
            Some(Spanned {
                tok: Tok::Ident { name, suffix: None },
                col,
            }) => names.push((name.clone(), *col)),
            Some(s) => {
                return Err(syntax(
                    line,
                    s.col,
                    format!("expected a name, found {}", s.tok.describe()),
                ))
            }
            None => return Err(syntax(line, eol, "expected a name, found end of line")),
        }
        i += 1;
        match toks.get(i) {
            Some(Spanned { tok: Tok::Comma, .. }) => i += 1,
            Some(Spanned { tok: Tok::Semi, .. }) if i + 1 == toks.len() => return Ok(names),
            None => return Ok(names),
            Some(s) => {
                return Err(syntax(
                    line,
                    s.col,
                    format!("expected `,` or `;`, found {}", s.tok.describe()),
                ))
            }
        }
    }
}

fn parse_ranking_toks(toks: &[Spanned], line: usize, eol: usize, declared: Option<&[Symbol]>) -> Result<Ranking> {
    let mut blocks = Vec::new();
    let mut i = 0;
    loop {
        match toks.get(i) {
            Some(Spanned {
                tok: Tok::Ident { name, suffix: None },
                ..
            }) if !KEYWORDS.contains(&name.as_str()) => {
                let s = Symbol::new(name);
                if declared.is_some_and(|d| !d.contains(&s)) {
                    return Err(Error::UnknownIndeterminate(name.clone()));
                }
                blocks.push(s);
            }
            Some(s) => {
                return Err(syntax(
                    line,
                    s.col,
                    format!("expected an indeterminate, found {}", s.tok.describe()),
                ))
            }
            None => return Err(syntax(line, eol, "expected an indeterminate, found end of line")),
        }
        i += 1;
        match toks.get(i).map(|s| &s.tok) {
            Some(Tok::Gt) => i += 1,
            _ => break,
        }
    }
    let mut precedence = DEFAULT_PRECEDENCE;
    match toks.get(i) {
        None => {}
        Some(Spanned { tok: Tok::Semi, col }) => {
            i += 1;
            match toks.get(i) {
                None => {}
                Some(Spanned {
                    tok: Tok::Ident { name, suffix: None },
                    ..
                }) if name == "prec" => {
                    let names = name_list(&toks[i + 1..], line, eol)?;
                    if names.len() != 4 {
                        return Err(syntax(line, *col, "precedence must list t, x, y and z"));
                    }
                    for (k, (n, c)) in names.iter().enumerate() {
                        let d = (n.len() == 1)
                            .then(|| Derivation::from_letter(n.chars().next().expect("nonempty")))
                            .flatten()
                            .ok_or_else(|| syntax(line, *c, format!("`{n}` is not a derivation")))?;
                        precedence[k] = d;
                    }
                }
                Some(s) => {
                    return Err(syntax(
                        line,
                        s.col,
                        format!("expected `prec`, found {}", s.tok.describe()),
                    ))
                }
            }
        }
        Some(s) => {
            return Err(syntax(
                line,
                s.col,
                format!("expected `>` or `;`, found {}", s.tok.describe()),
            ))
        }
    }
    Ranking::new(blocks)?.with_precedence(precedence)
}

/// Parses `a>b>c` with an optional `; prec x,y,z,t` tail. When `declared` is
/// given, every block must be one of those indeterminates.
pub fn parse_ranking(text: &str, declared: Option<&[Symbol]>) -> Result<Ranking> {
    let toks = lex(text, 1)?;
    parse_ranking_toks(&toks, 1, text.chars().count() + 1, declared)
}

/// Parses a whole system file.
pub fn parse_system_file(text: &str) -> Result<SystemFile> {
    let mut scope = Scope::default();
    let mut ranking_line = None;
    let mut equations = Vec::new();
    let mut seen_names: Vec<Symbol> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let toks = lex(raw, line)?;
        let eol = raw.chars().count() + 1;
        let Some(first) = toks.first() else { continue };
        let keyword = match &first.tok {
            Tok::Ident { name, suffix: None } if KEYWORDS.contains(&name.as_str()) => Some(name.as_str()),
            _ => None,
        };
        match keyword {
            Some("param") | Some("var") => {
                for (name, col) in name_list(&toks[1..], line, eol)? {
                    if KEYWORDS.contains(&name.as_str()) {
                        return Err(syntax(line, col, format!("`{name}` is a reserved word")));
                    }
                    let s = Symbol::new(&name);
                    if seen_names.contains(&s) {
                        return Err(Error::DuplicateEntry(name));
                    }
                    seen_names.push(s);
                    if keyword == Some("param") {
                        scope.params.push(s);
                    } else {
                        scope.vars.push(s);
                    }
                }
            }
            Some("derivations") => {
                for (name, col) in name_list(&toks[1..], line, eol)? {
                    let d = (name.len() == 1)
                        .then(|| Derivation::from_letter(name.chars().next().expect("nonempty")))
                        .flatten()
                        .ok_or_else(|| syntax(line, col, format!("`{name}` is not a derivation")))?;
                    if scope.derivations.contains(&d) {
                        return Err(Error::DuplicateEntry(name));
                    }
                    scope.derivations.push(d);
                }
            }
            Some("ranking") => {
                if ranking_line.is_some() {
                    return Err(syntax(line, first.col, "second ranking line"));
                }
                ranking_line = Some((toks, line, eol));
            }
            Some(_) => return Err(syntax(line, first.col, "unexpected keyword")),
            None => equations.push((toks, raw, line)),
        }
    }
    let equations = equations
        .into_iter()
        .map(|(toks, raw, line)| parse_equation(&toks, raw, &scope, line))
        .collect::<Result<Vec<_>>>()?;
    let ranking = ranking_line
        .map(|(toks, line, eol)| parse_ranking_toks(&toks[1..], line, eol, Some(&scope.vars)))
        .transpose()?;
    Ok(SystemFile {
        params: scope.params,
        vars: scope.vars,
        derivations: scope.derivations,
        ranking,
        equations,
    })
}

/// Equations of a system file, dropping the declarations.
pub fn parse_system(text: &str) -> Result<Vec<DiffPoly>> {
    parse_system_file(text).map(|f| f.equations)
}

impl SystemFile {
    pub fn scope(&self) -> Scope {
        Scope {
            params: self.params.clone(),
            vars: self.vars.clone(),
            derivations: self.derivations.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1_scope() -> Scope {
        Scope::new(&["nu"], &["u", "v", "w", "p"])
    }

    #[test]
    fn continuity_and_momentum() {
        let s = sigma1_scope();
        let cont = parse_expr("u_x + v_y + w_z", &s).unwrap();
        let expect = &(&DiffPoly::var("u", "x") + &DiffPoly::var("v", "y")) + &DiffPoly::var("w", "z");
        assert_eq!(cont, expect);

        let m = parse_expr("u_t + p_x - nu*(u_xx + u_yy + u_zz)", &s).unwrap();
        let lap = &(&DiffPoly::var("u", "xx") + &DiffPoly::var("u", "yy")) + &DiffPoly::var("u", "zz");
        let expect = &(&DiffPoly::var("u", "t") + &DiffPoly::var("p", "x")) - &(&DiffPoly::param("nu") * &lap);
        assert_eq!(m, expect);
        assert_eq!(parse_expr("u_yx", &s).unwrap(), parse_expr("u_xy", &s).unwrap());
    }

    #[test]
    fn dangling_operator() {
        let err = parse_expr("u_x + * v", &sigma1_scope()).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 1,
                column: 7,
                message: "expected an expression, found `*`".into()
            }
        );
    }

    #[test]
    fn errors_carry_positions() {
        let text = "param nu;\nvar u, v;\nu_x + q = 0\n";
        assert_eq!(
            parse_system(text).unwrap_err(),
            Error::UndeclaredSymbol {
                name: "q".into(),
                line: 3,
                column: 7
            }
        );
        let text = "var u;\nu_x + (u = 0\n";
        assert!(matches!(
            parse_system(text).unwrap_err(),
            Error::Syntax {
                line: 2,
                column: 10,
                ..
            }
        ));
        let text = "var u;\nu_xq = 0\n";
        assert!(matches!(
            parse_system(text).unwrap_err(),
            Error::Syntax { line: 2, column: 4, .. }
        ));
        assert!(matches!(
            parse_expr("u/u_x", &sigma1_scope()).unwrap_err(),
            Error::Syntax { column: 2, .. }
        ));
    }

    #[test]
    fn coefficients_and_powers() {
        let s = sigma1_scope();
        let a = parse_expr("nu^-1*p_x + 1/2*u^2", &s).unwrap();
        let b = parse_expr("p_x/nu + u*u/2", &s).unwrap();
        assert_eq!(a, b);
        assert!(parse_expr("u^-1", &s).is_err());
    }

    #[test]
    fn rankings() {
        let r = parse_ranking("u>v>w>p", None).unwrap();
        assert_eq!(r.blocks().len(), 4);
        let r = parse_ranking("u>v>w>u'>v'>w'>p", None).unwrap();
        assert_eq!(r.to_string(), "u>v>w>u'>v'>w'>p");
        assert_eq!(parse_ranking("u>u", None), Err(Error::DuplicateEntry("u".into())));
        let r = parse_ranking("u>p; prec t,x,y,z", None).unwrap();
        assert_eq!(r.precedence()[0], Derivation::T);
        let declared = [Symbol::new("u")];
        assert_eq!(
            parse_ranking("u>q", Some(&declared)),
            Err(Error::UnknownIndeterminate("q".into()))
        );
    }

    #[test]
    fn whole_file() {
        let text = "# Stokes\nparam nu;\nvar u, v, w, p;\nranking u>v>w>p\n\nu_x + v_y + w_z = 0\nu_t + p_x = nu*(u_xx + u_yy + u_zz)\n";
        let f = parse_system_file(text).unwrap();
        assert_eq!(f.equations.len(), 2);
        assert_eq!(f.ranking.unwrap().to_string(), "u>v>w>p");
        assert_eq!(f.vars.len(), 4);
    }

    #[test]
    fn primed_names() {
        let s = Scope::new(&[], &["u", "u'"]);
        let p = parse_expr("u'_xxx - u_x", &s).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.keys().contains(&DerivKey::with_suffix("u'", "xxx").unwrap()));
    }
}
