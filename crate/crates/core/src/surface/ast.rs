use std::hash::{Hash, Hasher};

use crate::scope::Scope;
use crate::surface::sort::Sort;

/// Source position (1-based). Positions never take part in AST equality,
/// so a reparsed theory compares equal to the original.
#[derive(Copy, Clone, Debug, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Span {
        Span { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    BoxA,
    DiaA,
    BoxP,
    DiaP,
    BoxD,
    ObA,
    ObI,
}

impl UnOp {
    pub fn keyword(self) -> &'static str {
        match self {
            UnOp::Not => "~",
            UnOp::BoxA => "boxA",
            UnOp::DiaA => "diaA",
            UnOp::BoxP => "boxP",
            UnOp::DiaP => "diaP",
            UnOp::BoxD => "boxD",
            UnOp::ObA => "Oa",
            UnOp::ObI => "Oi",
        }
    }

    pub fn from_keyword(s: &str) -> Option<UnOp> {
        Some(match s {
            "boxA" => UnOp::BoxA,
            "diaA" => UnOp::DiaA,
            "boxP" => UnOp::BoxP,
            "diaP" => UnOp::DiaP,
            "boxD" => UnOp::BoxD,
            "Oa" => UnOp::ObA,
            "Oi" => UnOp::ObI,
            _ => return None,
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Imp,
    Iff,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Imp => "->",
            BinOp::Iff => "<->",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Quant {
    Forall,
    Exists,
}

/// Character-level terms. Formulas are the terms of sort `m`; the same type
/// carries terms of other sorts (`Agent c`, `FWB`, bound individuals).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(String, Span),
    Var(String, Span),
    App(Box<Term>, Box<Term>),
    Top,
    Bot,
    Un(UnOp, Box<Term>),
    Bin(BinOp, Box<Term>, Box<Term>),
    /// `O<body | condition>`
    Ob(Box<Term>, Box<Term>),
    Quant(Quant, String, Sort, Box<Term>),
}

impl Term {
    pub fn cnst(name: &str) -> Term {
        Term::Const(name.to_string(), Span::default())
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string(), Span::default())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `head a1 ... an`
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn un(op: UnOp, t: Term) -> Term {
        Term::Un(op, Box::new(t))
    }

    pub fn not(t: Term) -> Term {
        Term::un(UnOp::Not, t)
    }

    pub fn bin(op: BinOp, l: Term, r: Term) -> Term {
        Term::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn and(l: Term, r: Term) -> Term {
        Term::bin(BinOp::And, l, r)
    }

    pub fn or(l: Term, r: Term) -> Term {
        Term::bin(BinOp::Or, l, r)
    }

    pub fn imp(l: Term, r: Term) -> Term {
        Term::bin(BinOp::Imp, l, r)
    }

    pub fn iff(l: Term, r: Term) -> Term {
        Term::bin(BinOp::Iff, l, r)
    }

    pub fn ob(body: Term, cond: Term) -> Term {
        Term::Ob(Box::new(body), Box::new(cond))
    }

    pub fn forall(x: &str, s: Sort, body: Term) -> Term {
        Term::Quant(Quant::Forall, x.to_string(), s, Box::new(body))
    }

    pub fn exists(x: &str, s: Sort, body: Term) -> Term {
        Term::Quant(Quant::Exists, x.to_string(), s, Box::new(body))
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            Term::Const(_, s) | Term::Var(_, s) => Some(*s),
            Term::App(f, _) => f.span(),
            Term::Un(_, t) | Term::Quant(_, _, _, t) => t.span(),
            Term::Bin(_, l, r) | Term::Ob(l, r) => l.span().or_else(|| r.span()),
            Term::Top | Term::Bot => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(..) | Term::Var(..) | Term::Top | Term::Bot => 1,
            Term::App(a, b) | Term::Bin(_, a, b) | Term::Ob(a, b) => 1 + a.size() + b.size(),
            Term::Un(_, t) | Term::Quant(_, _, _, t) => 1 + t.size(),
        }
    }
}

/// Meta-level validity statements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Meta {
    /// Truth at every point of every context.
    Valid(Term),
    /// Truth at every context's own world.
    ValidD(Term),
    /// Truth at every world of the given context.
    ValidCtx(Term, Term),
    /// Truth at the given context and its world.
    AtCtx(Term, Term),
    Imp(Box<Meta>, Box<Meta>),
    And(Box<Meta>, Box<Meta>),
    ForallCtx(String, Box<Meta>),
}

impl Meta {
    pub fn imp(l: Meta, r: Meta) -> Meta {
        Meta::Imp(Box::new(l), Box::new(r))
    }

    pub fn and(l: Meta, r: Meta) -> Meta {
        Meta::And(Box::new(l), Box::new(r))
    }

    pub fn forall_ctx(x: &str, body: Meta) -> Meta {
        Meta::ForallCtx(x.to_string(), Box::new(body))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub name: String,
    pub params: Vec<(String, Sort)>,
    pub reconstructed: bool,
    pub body: Term,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub formula: Meta,
    pub span: Span,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expect {
    Sat,
    Countermodel,
    BoundedValid,
    Entailed,
    Ablation,
}

impl Expect {
    pub fn keyword(self) -> &'static str {
        match self {
            Expect::Sat => "sat",
            Expect::Countermodel => "countermodel",
            Expect::BoundedValid => "bounded-valid",
            Expect::Entailed => "entailed",
            Expect::Ablation => "ablation",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Expect> {
        Some(match s {
            "sat" => Expect::Sat,
            "countermodel" => Expect::Countermodel,
            "bounded-valid" => Expect::BoundedValid,
            "entailed" => Expect::Entailed,
            "ablation" => Expect::Ablation,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoalAttrs {
    pub expect: Option<Expect>,
    pub scope: Option<Scope>,
    /// Axioms the goal may use; `None` means all of them.
    pub using: Option<Vec<String>>,
    pub without: Vec<String>,
    pub anchor: Option<String>,
    /// Name of another goal whose formula this entry checks.
    pub query: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub name: String,
    pub attrs: GoalAttrs,
    /// Absent when the goal refers to another goal through `query`.
    pub formula: Option<Meta>,
    pub span: Span,
}

/// Names and sorts of the non-logical constants, builtins first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    entries: Vec<(String, Sort)>,
}

pub const BUILTINS: [&str; 2] = ["Agent", "World"];

impl Default for Signature {
    fn default() -> Signature {
        Signature {
            entries: vec![
                ("Agent".to_string(), Sort::fun(Sort::C, Sort::E)),
                ("World".to_string(), Sort::fun(Sort::C, Sort::W)),
            ],
        }
    }
}

impl Signature {
    pub fn get(&self, name: &str) -> Option<&Sort> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Adds an entry; returns false if the name is taken.
    pub fn insert(&mut self, name: &str, sort: Sort) -> bool {
        if self.contains(name) {
            return false;
        }
        self.entries.push((name.to_string(), sort));
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Sort)> {
        self.entries.iter().map(|(n, s)| (n.as_str(), s))
    }

    /// Declared constants without the builtins.
    pub fn user(&self) -> impl Iterator<Item = (&str, &Sort)> {
        self.iter().filter(|(n, _)| !BUILTINS.contains(n))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub sort_aliases: Vec<(String, Sort)>,
    pub signature: Signature,
    pub defs: Vec<Def>,
    pub axioms: Vec<Axiom>,
    pub goals: Vec<Goal>,
}

impl Theory {
    pub fn def(&self, name: &str) -> Option<&Def> {
        self.defs.iter().find(|d| d.name == name)
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn goal(&self, name: &str) -> Option<&Goal> {
        self.goals.iter().find(|g| g.name == name)
    }
}
