use std::collections::HashSet;

use crate::scope::Scope;
use crate::surface::ast::*;
use crate::surface::error::SurfaceError;
use crate::surface::lexer::{is_reserved, tokenize, Tok};
use crate::surface::sort::Sort;

/// Parses a complete theory file.
pub fn parse_theory(text: &str) -> Result<Theory, SurfaceError> {
    parse_extending(&Theory::default(), text)
}

/// Parses `text` as a continuation of `base`: names declared in `base` are
/// in scope and the result contains the items of both.
pub fn parse_extending(base: &Theory, text: &str) -> Result<Theory, SurfaceError> {
    let mut p = Parser::new(base.clone(), text)?;
    p.items()?;
    Ok(p.theory)
}

/// Parses a manifest: goal blocks only, resolved against `base`.
pub fn parse_manifest(base: &Theory, text: &str) -> Result<Vec<Goal>, SurfaceError> {
    let mut p = Parser::new(base.clone(), text)?;
    let before = p.theory.goals.len();
    while p.peek() != &Tok::Eof {
        if !p.at_word("goal") {
            return Err(p.error(&["`goal`"]));
        }
        p.item()?;
    }
    Ok(p.theory.goals.split_off(before))
}

/// Parses a single character-level formula against `base` with the given
/// variables in scope.
pub fn parse_term(base: &Theory, bound: &[&str], text: &str) -> Result<Term, SurfaceError> {
    let mut p = Parser::new(base.clone(), text)?;
    p.bound = bound.iter().map(|s| s.to_string()).collect();
    let t = p.formula()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(t)
}

pub fn parse_meta(base: &Theory, text: &str) -> Result<Meta, SurfaceError> {
    let mut p = Parser::new(base.clone(), text)?;
    let m = p.meta()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(m)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    theory: Theory,
    names: HashSet<String>,
    bound: Vec<String>,
    no_or: bool,
    item: String,
}

impl Parser {
    fn new(theory: Theory, text: &str) -> Result<Parser, SurfaceError> {
        let mut names: HashSet<String> = theory.signature.iter().map(|(n, _)| n.to_string()).collect();
        names.extend(theory.defs.iter().map(|d| d.name.clone()));
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            theory,
            names,
            bound: Vec::new(),
            no_or: false,
            item: String::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SurfaceError {
        SurfaceError::Parse {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SurfaceError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// A user-chosen name: an identifier that is not reserved.
    fn name(&mut self, what: &str) -> Result<(String, Span), SurfaceError> {
        let span = self.span();
        match self.peek() {
            Tok::Ident(s) if !is_reserved(s) => {
                let s = s.clone();
                self.bump();
                Ok((s, span))
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn items(&mut self) -> Result<(), SurfaceError> {
        while self.peek() != &Tok::Eof {
            self.item()?;
        }
        Ok(())
    }

    fn item(&mut self) -> Result<(), SurfaceError> {
        let span = self.span();
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return Err(self.error(&["`sorts`", "`consts`", "`def`", "`axiom`", "`goal`"])),
        };
        match word.as_str() {
            "sorts" => {
                self.bump();
                loop {
                    let (name, nspan) = self.name("sort name")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let sort = self.sort()?;
                    if Sort::from_name(&name).is_some()
                        || self.theory.sort_aliases.iter().any(|(n, _)| *n == name)
                    {
                        return Err(SurfaceError::DuplicateName { name, span: nspan });
                    }
                    self.theory.sort_aliases.push((name, sort));
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
            }
            "consts" => {
                self.bump();
                loop {
                    let (name, nspan) = self.name("constant name")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let sort = self.sort()?;
                    if !self.names.insert(name.clone()) {
                        return Err(SurfaceError::DuplicateName { name, span: nspan });
                    }
                    self.theory.signature.insert(&name, sort);
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
            }
            "def" => {
                self.bump();
                let (name, nspan) = self.name("definition name")?;
                self.item = name.clone();
                let mut params = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    loop {
                        params.extend(self.binder_group()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                            continue;
                        }
                        break;
                    }
                    self.expect(Tok::RParen, "`)`")?;
                }
                let mut reconstructed = false;
                if *self.peek() == Tok::LBrack {
                    self.bump();
                    loop {
                        if self.eat_word("reconstructed") {
                            reconstructed = true;
                        } else {
                            return Err(self.error(&["`reconstructed`"]));
                        }
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.bump();
                    }
                    self.expect(Tok::RBrack, "`]`")?;
                }
                self.expect(Tok::Define, "`:=`")?;
                self.bound = params.iter().map(|(n, _)| n.clone()).collect();
                let body = self.formula()?;
                self.bound.clear();
                if !self.names.insert(name.clone()) {
                    return Err(SurfaceError::DuplicateName { name, span: nspan });
                }
                self.theory.defs.push(Def {
                    name,
                    params,
                    reconstructed,
                    body,
                    span,
                });
            }
            "axiom" => {
                self.bump();
                let (name, nspan) = self.name("axiom name")?;
                self.item = name.clone();
                self.expect(Tok::Colon, "`:`")?;
                let formula = self.meta()?;
                if self.theory.axiom(&name).is_some() {
                    return Err(SurfaceError::DuplicateName { name, span: nspan });
                }
                self.theory.axioms.push(Axiom {
                    name,
                    formula,
                    span,
                });
            }
            "goal" => {
                self.bump();
                let (name, nspan) = self.name("goal name")?;
                self.item = name.clone();
                let attrs = if *self.peek() == Tok::LBrack {
                    self.goal_attrs()?
                } else {
                    GoalAttrs::default()
                };
                let formula = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.meta()?)
                } else if attrs.query.is_some() {
                    None
                } else {
                    return Err(self.error(&["`:`"]));
                };
                if self.theory.goal(&name).is_some() {
                    return Err(SurfaceError::DuplicateName { name, span: nspan });
                }
                self.theory.goals.push(Goal {
                    name,
                    attrs,
                    formula,
                    span,
                });
            }
            _ => return Err(self.error(&["`sorts`", "`consts`", "`def`", "`axiom`", "`goal`"])),
        }
        Ok(())
    }

    fn goal_attrs(&mut self) -> Result<GoalAttrs, SurfaceError> {
        self.expect(Tok::LBrack, "`[`")?;
        let mut a = GoalAttrs::default();
        loop {
            let span = self.span();
            let key = match self.peek() {
                Tok::Ident(k) => k.clone(),
                _ => return Err(self.error(&["attribute name"])),
            };
            self.bump();
            self.expect(Tok::Eq, "`=`")?;
            match key.as_str() {
                "expect" => {
                    let (v, _) = self.word()?;
                    a.expect = Some(Expect::from_keyword(&v).ok_or_else(|| SurfaceError::Parse {
                        span,
                        expected: vec![
                            "`sat`".into(),
                            "`countermodel`".into(),
                            "`bounded-valid`".into(),
                            "`entailed`".into(),
                            "`ablation`".into(),
                        ],
                        found: format!("`{v}`"),
                    })?);
                }
                "scope" => a.scope = Some(self.scope_value()?),
                "using" => {
                    let list = self.name_list()?;
                    a.using = Some(if list == ["none"] { Vec::new() } else { list });
                }
                "without" => a.without = self.name_list()?,
                "anchor" => match self.bump() {
                    Tok::Str(s) => a.anchor = Some(s),
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&["string"]));
                    }
                },
                "query" => a.query = Some(self.word()?.0),
                _ => {
                    return Err(SurfaceError::Parse {
                        span,
                        expected: ["expect", "scope", "using", "without", "anchor", "query"]
                            .iter()
                            .map(|s| format!("`{s}`"))
                            .collect(),
                        found: format!("`{key}`"),
                    })
                }
            }
            if *self.peek() != Tok::Comma {
                break;
            }
            self.bump();
        }
        self.expect(Tok::RBrack, "`]`")?;
        Ok(a)
    }

    fn word(&mut self) -> Result<(String, Span), SurfaceError> {
        let span = self.span();
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok((s, span))
            }
            _ => Err(self.error(&["name"])),
        }
    }

    /// `a, b, c` where the list ends before a `, key =` pair.
    fn name_list(&mut self) -> Result<Vec<String>, SurfaceError> {
        let mut out = vec![self.word()?.0];
        while *self.peek() == Tok::Comma
            && matches!(self.peek_at(1), Tok::Ident(_))
            && *self.peek_at(2) != Tok::Eq
        {
            self.bump();
            out.push(self.word()?.0);
        }
        Ok(out)
    }

    fn scope_value(&mut self) -> Result<Scope, SurfaceError> {
        let mut text = String::new();
        loop {
            let (k, span) = self.word()?;
            self.expect(Tok::Eq, "`=`")?;
            let n = match self.bump() {
                Tok::Int(n) => n,
                _ => {
                    self.pos -= 1;
                    return Err(self.error(&["number"]));
                }
            };
            if !text.is_empty() {
                text.push(',');
            }
            text.push_str(&format!("{k}={n}"));
            let more = *self.peek() == Tok::Comma
                && matches!(self.peek_at(1), Tok::Ident(s) if s == "c" || s == "e" || s == "w")
                && *self.peek_at(2) == Tok::Eq;
            if !more {
                return text.parse().map_err(|e: crate::scope::ScopeParseError| SurfaceError::Parse {
                    span,
                    expected: vec!["scope `c=i,e=j,w=k` with positive sizes".into()],
                    found: e.0,
                });
            }
            self.bump();
        }
    }

    fn sort(&mut self) -> Result<Sort, SurfaceError> {
        let dom = self.sort_atom()?;
        if *self.peek() == Tok::SortArrow {
            self.bump();
            Ok(Sort::fun(dom, self.sort()?))
        } else {
            Ok(dom)
        }
    }

    fn sort_atom(&mut self) -> Result<Sort, SurfaceError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let s = self.sort()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(s)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(s) = Sort::from_name(&name) {
                    return Ok(s);
                }
                self.theory
                    .sort_aliases
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, s)| s.clone())
                    .ok_or(SurfaceError::UnknownSort { name, span })
            }
            _ => Err(self.error(&["sort"])),
        }
    }

    /// `x y : S`
    fn binder_group(&mut self) -> Result<Vec<(String, Sort)>, SurfaceError> {
        let mut names = vec![self.name("variable name")?.0];
        while *self.peek() != Tok::Colon {
            names.push(self.name("variable name or `:`")?.0);
        }
        self.bump();
        let sort = self.sort()?;
        Ok(names.into_iter().map(|n| (n, sort.clone())).collect())
    }

    /// Binder groups up to (and consuming) the `.`.
    fn binders(&mut self) -> Result<Vec<(String, Sort)>, SurfaceError> {
        let mut out = self.binder_group()?;
        while *self.peek() != Tok::Dot {
            out.extend(self.binder_group()?);
        }
        self.bump();
        Ok(out)
    }

    pub fn formula(&mut self) -> Result<Term, SurfaceError> {
        let mut l = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let r = self.imp()?;
            l = Term::iff(l, r);
        }
        Ok(l)
    }

    fn imp(&mut self) -> Result<Term, SurfaceError> {
        let l = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.imp()?;
            return Ok(Term::imp(l, r));
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<Term, SurfaceError> {
        let mut l = self.and()?;
        while *self.peek() == Tok::Bar && !self.no_or {
            self.bump();
            let r = self.and()?;
            l = Term::or(l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Term, SurfaceError> {
        let mut l = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.unary()?;
            l = Term::and(l, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Term, SurfaceError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Term::not(self.unary()?));
        }
        if let Tok::Ident(w) = self.peek() {
            if let Some(op) = UnOp::from_keyword(w) {
                self.bump();
                return Ok(Term::un(op, self.unary()?));
            }
            let q = match w.as_str() {
                "forall" => Some(Quant::Forall),
                "exists" => Some(Quant::Exists),
                _ => None,
            };
            if let Some(q) = q {
                self.bump();
                let binders = self.binders()?;
                let depth = self.bound.len();
                self.bound.extend(binders.iter().map(|(n, _)| n.clone()));
                let body = self.formula()?;
                self.bound.truncate(depth);
                return Ok(binders
                    .into_iter()
                    .rev()
                    .fold(body, |b, (n, s)| Term::Quant(q, n, s, Box::new(b))));
            }
        }
        self.app()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::LBrack => true,
            Tok::Ident(w) => !is_reserved(w) || w == "top" || w == "bot" || (w == "O" && *self.peek_at(1) == Tok::Lt),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Term, SurfaceError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn resolve(&self, name: String, span: Span) -> Term {
        if self.bound.iter().rev().any(|b| *b == name) {
            Term::Var(name, span)
        } else if self.names.contains(&name) {
            Term::Const(name, span)
        } else {
            Term::Var(name, span)
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Parser) -> Result<T, SurfaceError>) -> Result<T, SurfaceError> {
        let saved = self.no_or;
        self.no_or = false;
        let r = f(self);
        self.no_or = saved;
        r
    }

    fn atom(&mut self) -> Result<Term, SurfaceError> {
        const EXPECTED: &[&str] = &["name", "`(`", "`[`", "`top`", "`bot`", "`O<`"];
        let span = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.nested(|p| p.formula())?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::LBrack => {
                self.bump();
                let t = self.nested(|p| p.sexpr())?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(t)
            }
            Tok::Ident(w) if w == "top" => {
                self.bump();
                Ok(Term::Top)
            }
            Tok::Ident(w) if w == "bot" => {
                self.bump();
                Ok(Term::Bot)
            }
            Tok::Ident(w) if w == "O" && *self.peek_at(1) == Tok::Lt => {
                self.bump();
                self.bump();
                let saved = self.no_or;
                self.no_or = true;
                let body = self.formula();
                self.no_or = saved;
                let body = body?;
                self.expect(Tok::Bar, "`|`")?;
                let cond = self.nested(|p| p.formula())?;
                self.expect(Tok::Gt, "`>`")?;
                Ok(Term::ob(body, cond))
            }
            Tok::Ident(w) if !is_reserved(&w) => {
                self.bump();
                Ok(self.resolve(w, span))
            }
            _ => Err(self.error(EXPECTED)),
        }
    }

    /// Body of `[ ... ]`: an operator name followed by its operands, or an
    /// application `[f a b]`.
    fn sexpr(&mut self) -> Result<Term, SurfaceError> {
        let head = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => String::new(),
        };
        let arity = |p: &mut Parser, n: usize| -> Result<Vec<Term>, SurfaceError> {
            let mut args = Vec::new();
            while *p.peek() != Tok::RBrack {
                args.push(p.atom()?);
            }
            if args.len() != n {
                return Err(SurfaceError::ArityError {
                    item: p.item.clone(),
                    name: head.clone(),
                    expected: n,
                    found: args.len(),
                    span: p.span(),
                });
            }
            Ok(args)
        };
        match head.as_str() {
            "not" => {
                self.bump();
                let mut a = arity(self, 1)?;
                Ok(Term::not(a.remove(0)))
            }
            "and" | "or" => {
                self.bump();
                let mut args = Vec::new();
                while *self.peek() != Tok::RBrack {
                    args.push(self.atom()?);
                }
                if args.len() < 2 {
                    return Err(self.error(&["at least two operands"]));
                }
                let op = if head == "and" { BinOp::And } else { BinOp::Or };
                let mut it = args.into_iter();
                let first = it.next().unwrap();
                Ok(it.fold(first, |l, r| Term::bin(op, l, r)))
            }
            "imp" | "iff" => {
                self.bump();
                let mut a = arity(self, 2)?;
                let r = a.pop().unwrap();
                let l = a.pop().unwrap();
                Ok(if head == "imp" { Term::imp(l, r) } else { Term::iff(l, r) })
            }
            "O" => {
                self.bump();
                let mut a = arity(self, 2)?;
                let cond = a.pop().unwrap();
                let body = a.pop().unwrap();
                Ok(Term::ob(body, cond))
            }
            "forall" | "exists" => {
                self.bump();
                let q = if head == "forall" { Quant::Forall } else { Quant::Exists };
                let mut binders = self.binder_group()?;
                while matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon {
                    binders.extend(self.binder_group()?);
                }
                let depth = self.bound.len();
                self.bound.extend(binders.iter().map(|(n, _)| n.clone()));
                let body = self.atom();
                self.bound.truncate(depth);
                let body = body?;
                Ok(binders
                    .into_iter()
                    .rev()
                    .fold(body, |b, (n, s)| Term::Quant(q, n, s, Box::new(b))))
            }
            w if UnOp::from_keyword(w).is_some() => {
                let op = UnOp::from_keyword(w).unwrap();
                self.bump();
                let mut a = arity(self, 1)?;
                Ok(Term::un(op, a.remove(0)))
            }
            _ => {
                let mut t = self.atom()?;
                while *self.peek() != Tok::RBrack {
                    let a = self.atom()?;
                    t = Term::app(t, a);
                }
                Ok(t)
            }
        }
    }

    fn meta(&mut self) -> Result<Meta, SurfaceError> {
        let l = self.meta_and()?;
        if *self.peek() == Tok::MetaImp {
            self.bump();
            let r = self.meta()?;
            return Ok(Meta::imp(l, r));
        }
        Ok(l)
    }

    fn meta_and(&mut self) -> Result<Meta, SurfaceError> {
        let mut l = self.meta_prim()?;
        while *self.peek() == Tok::AmpAmp {
            self.bump();
            let r = self.meta_prim()?;
            l = Meta::and(l, r);
        }
        Ok(l)
    }

    fn meta_prim(&mut self) -> Result<Meta, SurfaceError> {
        const EXPECTED: &[&str] = &["`valid`", "`validD`", "`validAt`", "`validCtx`", "`forall`", "`(`"];
        if *self.peek() == Tok::LParen {
            self.bump();
            let m = self.meta()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(m);
        }
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return Err(self.error(EXPECTED)),
        };
        match word.as_str() {
            "forall" => {
                self.bump();
                let span = self.span();
                let binders = self.binders()?;
                for (_, s) in &binders {
                    if *s != Sort::C {
                        return Err(SurfaceError::SortMismatch {
                            item: self.item.clone(),
                            expected: Sort::C,
                            found: s.clone(),
                            span,
                        });
                    }
                }
                let depth = self.bound.len();
                self.bound.extend(binders.iter().map(|(n, _)| n.clone()));
                let body = self.meta();
                self.bound.truncate(depth);
                let body = body?;
                Ok(binders
                    .into_iter()
                    .rev()
                    .fold(body, |b, (n, _)| Meta::ForallCtx(n, Box::new(b))))
            }
            "valid" => {
                self.bump();
                Ok(Meta::Valid(self.formula()?))
            }
            "validD" => {
                self.bump();
                Ok(Meta::ValidD(self.formula()?))
            }
            "validAt" | "validCtx" => {
                self.bump();
                let ctx = self.atom()?;
                let f = self.formula()?;
                Ok(if word == "validAt" {
                    Meta::AtCtx(f, ctx)
                } else {
                    Meta::ValidCtx(f, ctx)
                })
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}
