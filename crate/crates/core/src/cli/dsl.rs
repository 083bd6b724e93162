//! The input language:
//!
//! ```text
//! ring Z invert 2 3
//! cdga S2 { gen v : 2  gen w : 3  d w = v^2 }
//! ideal J : S2 = (v^2, w)
//! morphism q : S2 -> S2 / J { v -> v  w -> w }
//! ```
//!
//! `dga` declares a free tensor algebra instead of a free commutative one,
//! `#` starts a comment, and every error carries `line:column`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::cdga::{AlgebraMorphism, Codomain, Element, Flavor, FreeGradedAlgebra, Generator, HomogeneousIdeal};
use crate::coeff::{CoefficientRing, Scalar};
use crate::error::{MildError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Arrow,
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn parse_error(pos: Pos, message: impl Into<String>) -> MildError {
    MildError::Parse { line: pos.line, column: pos.column, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Int(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            out.push((Tok::Arrow, pos));
            continue;
        }
        if "{}:=+-*^/(),".contains(c) {
            i += 1;
            col += 1;
            out.push((Tok::Sym(c), pos));
            continue;
        }
        return Err(parse_error(pos, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Scalar, Pos),
    Var(String, Pos),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// A declared ideal.
#[derive(Clone, Debug)]
pub struct IdealDecl {
    pub name: String,
    pub algebra: String,
    pub ideal: Arc<HomogeneousIdeal>,
}

/// A declared morphism; `target` names the ambient algebra of the codomain.
#[derive(Clone, Debug)]
pub struct MorphismDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub morphism: AlgebraMorphism,
}

/// Everything declared in one input file.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub ring: CoefficientRing,
    pub cap: usize,
    pub algebras: Vec<Arc<FreeGradedAlgebra>>,
    pub ideals: Vec<IdealDecl>,
    pub morphisms: Vec<MorphismDecl>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        let ideals_eq = |a: &IdealDecl, b: &IdealDecl| {
            a.name == b.name && a.algebra == b.algebra && a.ideal.generators() == b.ideal.generators()
        };
        let morphisms_eq = |a: &MorphismDecl, b: &MorphismDecl| {
            let ia = a.morphism.target().ideal.as_ref().map(|i| i.generators().to_vec());
            let ib = b.morphism.target().ideal.as_ref().map(|i| i.generators().to_vec());
            a.name == b.name
                && a.source == b.source
                && a.target == b.target
                && a.morphism.images() == b.morphism.images()
                && ia == ib
        };
        self.ring == other.ring
            && self.cap == other.cap
            && self.algebras.len() == other.algebras.len()
            && self.algebras.iter().zip(&other.algebras).all(|(a, b)| a == b)
            && self.ideals.len() == other.ideals.len()
            && self.ideals.iter().zip(&other.ideals).all(|(a, b)| ideals_eq(a, b))
            && self.morphisms.len() == other.morphisms.len()
            && self.morphisms.iter().zip(&other.morphisms).all(|(a, b)| morphisms_eq(a, b))
    }
}

impl Workspace {
    pub fn algebra(&self, name: &str) -> Result<&Arc<FreeGradedAlgebra>> {
        self.algebras.iter().find(|a| a.name() == name).ok_or_else(|| MildError::UnknownName(name.into()))
    }

    pub fn ideal(&self, name: &str) -> Option<&IdealDecl> {
        self.ideals.iter().find(|i| i.name == name)
    }

    pub fn morphism(&self, name: &str) -> Result<&MorphismDecl> {
        self.morphisms.iter().find(|m| m.name == name).ok_or_else(|| MildError::UnknownName(name.into()))
    }

    /// An algebra, or the quotient named by an ideal declaration.
    pub fn codomain(&self, name: &str) -> Result<Codomain> {
        if let Some(i) = self.ideal(name) {
            return Codomain::quotient(self.algebra(&i.algebra)?.clone(), i.ideal.clone());
        }
        Ok(Codomain::free(self.algebra(name)?.clone()))
    }

    /// Source text that parses back to this workspace.
    pub fn to_source(&self) -> String {
        let mut s = String::new();
        match self.ring.inverted_primes() {
            None => s.push_str("ring Q\n"),
            Some(ps) => {
                let ps: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                writeln!(s, "ring Z invert {}", ps.join(" ")).unwrap();
            }
        }
        for a in &self.algebras {
            let kw = match a.flavor() {
                Flavor::Commutative => "cdga",
                Flavor::Tensor => "dga",
            };
            writeln!(s, "\n{kw} {} {{", a.name()).unwrap();
            for g in a.gens() {
                writeln!(s, "  gen {} : {}", g.name, g.degree).unwrap();
            }
            for (i, g) in a.gens().iter().enumerate() {
                let d = a.gen_differential(i);
                if !d.is_zero() {
                    writeln!(s, "  d {} = {}", g.name, a.format(d)).unwrap();
                }
            }
            s.push_str("}\n");
        }
        for i in &self.ideals {
            let a = i.ideal.ambient();
            let gens: Vec<String> = i.ideal.generators().iter().map(|g| a.format(g)).collect();
            writeln!(s, "\nideal {} : {} = ({})", i.name, i.algebra, gens.join(", ")).unwrap();
        }
        for m in &self.morphisms {
            let f = &m.morphism;
            let tgt = &f.target().ambient;
            write!(s, "\nmorphism {} : {} -> {}", m.name, m.source, m.target).unwrap();
            if let Some(i) = &f.target().ideal {
                let gens: Vec<String> = i.generators().iter().map(|g| tgt.format(g)).collect();
                write!(s, " / ({})", gens.join(", ")).unwrap();
            }
            s.push_str(" {\n");
            for (g, img) in f.source().gens().iter().zip(f.images()) {
                writeln!(s, "  {} -> {}", g.name, tgt.format(img)).unwrap();
            }
            s.push_str("}\n");
        }
        s
    }
}

const RESERVED: [&str; 7] = ["ring", "cdga", "dga", "morphism", "ideal", "gen", "d"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> MildError {
        parse_error(self.pos(), format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn expect_arrow(&mut self) -> Result<()> {
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("`->`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.pos();
                self.bump();
                Ok((s, p))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, Pos)> {
        let (s, p) = self.ident(what)?;
        if RESERVED.contains(&s.as_str()) {
            return Err(parse_error(p, format!("`{s}` is reserved and cannot be used as {what}")));
        }
        Ok((s, p))
    }

    fn int(&mut self, what: &str) -> Result<(BigInt, Pos)> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let p = self.pos();
                self.bump();
                Ok((n, p))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn small(&mut self, what: &str) -> Result<(usize, Pos)> {
        let (n, p) = self.int(what)?;
        let v = usize::try_from(&n).map_err(|_| parse_error(p, format!("{n} is too large")))?;
        Ok((v, p))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if *self.peek() == Tok::Sym('-') {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            if *self.peek() == Tok::Sym('+') {
                self.bump();
            }
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let (e, p) = self.small("an exponent")?;
            let e = u32::try_from(e).map_err(|_| parse_error(p, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    let (d, dp) = self.int("a denominator")?;
                    if d == BigInt::from(0) {
                        return Err(parse_error(dp, "division by zero"));
                    }
                    return Ok(Expr::Num(Scalar::from_ratio(n, d), pos));
                }
                Ok(Expr::Num(Scalar::from_bigint(n), pos))
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(Expr::Var(s, pos))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(self.unexpected("a number, a generator or `(`")),
        }
    }

    fn expr_list(&mut self) -> Result<Vec<(Expr, Pos)>> {
        self.expect_sym('(')?;
        let mut out = Vec::new();
        loop {
            let p = self.pos();
            out.push((self.expr()?, p));
            match self.peek() {
                Tok::Sym(',') => {
                    self.bump();
                }
                Tok::Sym(')') => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
    }
}

fn eval(a: &FreeGradedAlgebra, e: &Expr) -> Result<Element> {
    Ok(match e {
        Expr::Num(c, p) => {
            if !a.ring().contains(c) {
                return Err(MildError::Ring(format!("{p}: coefficient {c} is not in {}", a.ring())));
            }
            Element::scalar(c.clone())
        }
        Expr::Var(s, p) => match a.generator_index(s) {
            Some(i) => Element::generator(i),
            None => return Err(parse_error(*p, format!("`{s}` is not a generator of {}", a.name()))),
        },
        Expr::Add(x, y) => eval(a, x)?.add(&eval(a, y)?),
        Expr::Sub(x, y) => eval(a, x)?.sub(&eval(a, y)?),
        Expr::Mul(x, y) => a.multiply(&eval(a, x)?, &eval(a, y)?),
        Expr::Neg(x) => eval(a, x)?.neg(),
        Expr::Pow(x, k) => a.power(&eval(a, x)?, *k as usize),
    })
}

/// Evaluate and require every term to have degree `degree`.
fn eval_homogeneous(a: &FreeGradedAlgebra, e: &Expr, pos: Pos, degree: usize, what: &str) -> Result<Element> {
    let v = eval(a, e)?;
    for (m, _) in v.terms() {
        let d = a.monomial_degree(m);
        if d != degree {
            return Err(MildError::Degree(format!(
                "{pos}: {what} must have degree {degree}, found a term {} of degree {d}",
                a.format_monomial(m)
            )));
        }
    }
    Ok(v)
}

fn eval_generators(a: &FreeGradedAlgebra, list: &[(Expr, Pos)]) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for (e, p) in list {
        let v = eval(a, e)?;
        if !v.is_zero() && a.degree_of(&v).is_none_or(|d| d == 0) {
            return Err(MildError::Degree(format!("{p}: ideal generators must be homogeneous of positive degree")));
        }
        out.push(v);
    }
    Ok(out)
}

/// Parse a workspace; algebras get the degree cap `cap`.
pub fn parse(src: &str, cap: usize) -> Result<Workspace> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let mut ws = Workspace {
        ring: CoefficientRing::rationals(),
        cap,
        algebras: Vec::new(),
        ideals: Vec::new(),
        morphisms: Vec::new(),
    };
    let mut seen_ring = false;
    let mut names: Vec<String> = Vec::new();
    let mut declare = |name: &str, pos: Pos| -> Result<()> {
        if names.iter().any(|n| n == name) {
            return Err(parse_error(pos, format!("`{name}` is already declared")));
        }
        names.push(name.to_string());
        Ok(())
    };
    loop {
        let pos = p.pos();
        let kw = match p.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(s) => s,
            _ => return Err(p.unexpected("`ring`, `cdga`, `dga`, `ideal` or `morphism`")),
        };
        match kw.as_str() {
            "ring" => {
                if seen_ring || !ws.algebras.is_empty() {
                    return Err(parse_error(pos, "the ring must be declared once, before any algebra"));
                }
                seen_ring = true;
                p.bump();
                let (r, rp) = p.ident("`Q` or `Z`")?;
                ws.ring = match r.as_str() {
                    "Q" => CoefficientRing::rationals(),
                    "Z" => {
                        let mut primes = Vec::new();
                        if matches!(p.peek(), Tok::Ident(s) if s == "invert") {
                            p.bump();
                            while let Tok::Int(_) = p.peek() {
                                let (n, np) = p.int("a prime")?;
                                let n = u64::try_from(&n).map_err(|_| parse_error(np, "prime too large"))?;
                                if !crate::coeff::is_prime(n) {
                                    return Err(parse_error(np, format!("{n} is not a prime")));
                                }
                                primes.push(n);
                            }
                            if primes.is_empty() {
                                return Err(p.unexpected("a prime"));
                            }
                        }
                        CoefficientRing::localized(primes)?
                    }
                    _ => return Err(parse_error(rp, format!("unknown ring `{r}`, expected `Q` or `Z`"))),
                };
            }
            "cdga" | "dga" => {
                p.bump();
                let flavor = if kw == "cdga" { Flavor::Commutative } else { Flavor::Tensor };
                let (name, np) = p.name("an algebra name")?;
                declare(&name, np)?;
                p.expect_sym('{')?;
                let mut gens: Vec<Generator> = Vec::new();
                let mut diffs: Vec<(String, Pos, Expr, Pos)> = Vec::new();
                loop {
                    match p.peek().clone() {
                        Tok::Sym('}') => {
                            p.bump();
                            break;
                        }
                        Tok::Ident(s) if s == "gen" => {
                            p.bump();
                            let (g, gp) = p.name("a generator name")?;
                            if gens.iter().any(|h| h.name == g) {
                                return Err(parse_error(gp, format!("generator `{g}` declared twice")));
                            }
                            p.expect_sym(':')?;
                            let (d, dp) = p.small("a degree")?;
                            if d == 0 {
                                return Err(MildError::Degree(format!("{dp}: generator {g} must have positive degree")));
                            }
                            gens.push(Generator::new(g, d));
                        }
                        Tok::Ident(s) if s == "d" => {
                            p.bump();
                            let (g, gp) = p.ident("a generator name")?;
                            p.expect_sym('=')?;
                            let ep = p.pos();
                            let e = p.expr()?;
                            diffs.push((g, gp, e, ep));
                        }
                        _ => return Err(p.unexpected("`gen`, `d` or `}`")),
                    }
                }
                let zero = vec![Element::zero(); gens.len()];
                let scratch = FreeGradedAlgebra::new(&name, flavor, &ws.ring, gens.clone(), zero.clone(), cap)?;
                let mut diff = zero;
                let mut set = vec![false; gens.len()];
                for (g, gp, e, ep) in &diffs {
                    let i = scratch
                        .generator_index(g)
                        .ok_or_else(|| parse_error(*gp, format!("`{g}` is not a generator of {name}")))?;
                    if set[i] {
                        return Err(parse_error(*gp, format!("differential of `{g}` given twice")));
                    }
                    set[i] = true;
                    diff[i] = eval_homogeneous(&scratch, e, *ep, gens[i].degree + 1, &format!("d {g}"))?;
                }
                let a = FreeGradedAlgebra::new(&name, flavor, &ws.ring, gens, diff, cap)
                    .map_err(|e| located(e, np))?;
                ws.algebras.push(a);
            }
            "ideal" => {
                p.bump();
                let (name, np) = p.name("an ideal name")?;
                declare(&name, np)?;
                p.expect_sym(':')?;
                let (an, ap) = p.ident("an algebra name")?;
                let a = ws.algebra(&an).map_err(|_| parse_error(ap, format!("unknown algebra `{an}`")))?.clone();
                p.expect_sym('=')?;
                let list = p.expr_list()?;
                let gens = eval_generators(&a, &list)?;
                let ideal = HomogeneousIdeal::new(&a, gens)?;
                ws.ideals.push(IdealDecl { name, algebra: an, ideal });
            }
            "morphism" => {
                p.bump();
                let (name, np) = p.name("a morphism name")?;
                declare(&name, np)?;
                p.expect_sym(':')?;
                let (sn, sp) = p.ident("a source algebra")?;
                p.expect_arrow()?;
                let (tn, tp) = p.ident("a target algebra")?;
                let src = ws.algebra(&sn).map_err(|_| parse_error(sp, format!("unknown algebra `{sn}`")))?.clone();
                let tgt = ws.algebra(&tn).map_err(|_| parse_error(tp, format!("unknown algebra `{tn}`")))?.clone();
                let mut target = Codomain::free(tgt.clone());
                if *p.peek() == Tok::Sym('/') {
                    p.bump();
                    let ideal = if let Tok::Ident(jn) = p.peek().clone() {
                        let jp = p.pos();
                        p.bump();
                        let d = ws.ideal(&jn).ok_or_else(|| parse_error(jp, format!("unknown ideal `{jn}`")))?;
                        if d.algebra != tn {
                            return Err(parse_error(jp, format!("ideal `{jn}` lives in {}, not {tn}", d.algebra)));
                        }
                        d.ideal.clone()
                    } else {
                        let list = p.expr_list()?;
                        HomogeneousIdeal::new(&tgt, eval_generators(&tgt, &list)?)?
                    };
                    target = Codomain::quotient(tgt.clone(), ideal)?;
                }
                p.expect_sym('{')?;
                let mut images: Vec<Option<Element>> = vec![None; src.num_gens()];
                loop {
                    match p.peek().clone() {
                        Tok::Sym('}') => {
                            p.bump();
                            break;
                        }
                        Tok::Ident(_) => {
                            let (g, gp) = p.ident("a generator name")?;
                            let i = src
                                .generator_index(&g)
                                .ok_or_else(|| parse_error(gp, format!("`{g}` is not a generator of {sn}")))?;
                            if images[i].is_some() {
                                return Err(parse_error(gp, format!("image of `{g}` given twice")));
                            }
                            p.expect_arrow()?;
                            let ep = p.pos();
                            let e = p.expr()?;
                            let what = format!("the image of {g}");
                            images[i] = Some(eval_homogeneous(&tgt, &e, ep, src.gens()[i].degree, &what)?);
                        }
                        _ => return Err(p.unexpected("a generator name or `}`")),
                    }
                }
                let mut imgs = Vec::new();
                for (g, img) in src.gens().iter().zip(images) {
                    match img {
                        Some(e) => imgs.push(e),
                        None => return Err(parse_error(np, format!("no image given for generator `{}`", g.name))),
                    }
                }
                let f = AlgebraMorphism::new_chain_map(src, target, imgs)?;
                ws.morphisms.push(MorphismDecl { name, source: sn, target: tn, morphism: f });
            }
            _ => return Err(p.unexpected("`ring`, `cdga`, `dga`, `ideal` or `morphism`")),
        }
    }
    Ok(ws)
}

/// Attach a position to validation errors raised while building an algebra.
fn located(e: MildError, pos: Pos) -> MildError {
    match e {
        MildError::InvalidAlgebra(m) => MildError::InvalidAlgebra(format!("{pos}: {m}")),
        MildError::Degree(m) => MildError::Degree(format!("{pos}: {m}")),
        MildError::Ring(m) => MildError::Ring(format!("{pos}: {m}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S2: &str = "ring Z invert 2\n# the 2-sphere\ncdga S2 {\n  gen v : 2\n  gen w : 3\n  d w = 3*v^2\n}\n";

    #[test]
    fn parses_the_sphere() {
        let ws = parse(S2, 8).unwrap();
        let a = ws.algebra("S2").unwrap();
        assert_eq!(a.num_gens(), 2);
        assert_eq!(a.format(a.gen_differential(1)), "3*v^2");
    }

    #[test]
    fn degree_mismatch_is_a_degree_error() {
        let err = parse("cdga A { gen v : 2 gen w : 3 d w = v }", 8).unwrap_err();
        assert!(matches!(err, MildError::Degree(_)), "{err:?}");
        assert!(err.to_string().contains("1:36"), "{err}");
    }

    #[test]
    fn fraction_outside_the_ring_is_a_ring_error() {
        let err = parse("ring Z invert 2\ncdga A { gen v : 2 gen w : 3 d w = 1/3*v^2 }", 8).unwrap_err();
        assert!(matches!(err, MildError::Ring(_)), "{err:?}");
        let ok = parse("ring Q\ncdga A { gen v : 2 gen w : 3 d w = 1/3*v^2 }", 8);
        assert!(ok.is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse("cdga A {\n  gen v 2\n}", 8).unwrap_err();
        assert_eq!(err, MildError::Parse { line: 2, column: 9, message: "expected `:`, found `2`".into() });
        let err = parse("cdga A { gen v : 2 } $", 8).unwrap_err();
        assert!(matches!(err, MildError::Parse { line: 1, column: 22, .. }), "{err:?}");
    }

    #[test]
    fn morphisms_ideals_and_round_trip() {
        let src = format!(
            "{S2}\nideal J : S2 = (v^2, w)\nmorphism q : S2 -> S2 / J {{ v -> v  w -> w }}\n\
             morphism g : S2 -> S2 {{ v -> -v w -> 3*w }}\n"
        );
        let err = parse(&src, 8).unwrap_err();
        // v -> -v forces w -> w (dw = 3v^2 is even in v); 3*w breaks the chain condition
        assert!(matches!(err, MildError::NotChainMap(_)), "{err:?}");
        let src = src.replace("w -> 3*w", "w -> w");
        let ws = parse(&src, 8).unwrap();
        let printed = ws.to_source();
        assert_eq!(parse(&printed, 8).unwrap(), ws);
        assert_eq!(parse(&printed, 8).unwrap().to_source(), printed);
    }

    #[test]
    fn non_d_stable_quotient_is_rejected() {
        let src = format!("{S2}\nmorphism q : S2 -> S2 / (w) {{ v -> v w -> w }}\n");
        let err = parse(&src, 8).unwrap_err();
        assert!(matches!(err, MildError::NotDStable { .. }), "{err:?}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn unknown_names_are_reported() {
        let err = parse("cdga A { gen v : 2 d u = v }", 8).unwrap_err();
        assert!(matches!(err, MildError::Parse { .. }));
        let ws = parse(S2, 8).unwrap();
        assert_eq!(ws.algebra("T").unwrap_err().exit_code(), 2);
    }
}
