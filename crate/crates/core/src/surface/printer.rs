use std::fmt::Write;

use crate::surface::ast::*;

/// Precedence levels: larger binds tighter.
fn prec(t: &Term) -> u8 {
    match t {
        Term::Quant(..) => 0,
        Term::Bin(BinOp::Iff, ..) => 1,
        Term::Bin(BinOp::Imp, ..) => 2,
        Term::Bin(BinOp::Or, ..) => 3,
        Term::Bin(BinOp::And, ..) => 4,
        Term::Un(..) => 5,
        Term::App(..) => 6,
        Term::Const(..) | Term::Var(..) | Term::Top | Term::Bot | Term::Ob(..) => 7,
    }
}

fn write_term(out: &mut String, t: &Term, min: u8) {
    let p = prec(t);
    if p < min {
        out.push('(');
        write_term(out, t, 0);
        out.push(')');
        return;
    }
    match t {
        Term::Const(n, _) | Term::Var(n, _) => out.push_str(n),
        Term::Top => out.push_str("top"),
        Term::Bot => out.push_str("bot"),
        Term::App(f, a) => {
            write_term(out, f, 6);
            out.push(' ');
            write_term(out, a, 7);
        }
        Term::Un(op, a) => {
            out.push_str(op.keyword());
            out.push(' ');
            write_term(out, a, 5);
        }
        Term::Bin(op, l, r) => {
            let (lmin, rmin) = match op {
                BinOp::Iff => (1, 2),
                BinOp::Imp => (3, 2),
                BinOp::Or => (3, 4),
                BinOp::And => (4, 5),
            };
            write_term(out, l, lmin);
            let _ = write!(out, " {} ", op.symbol());
            write_term(out, r, rmin);
        }
        Term::Ob(body, cond) => {
            out.push_str("O<");
            write_term(out, body, 4);
            out.push_str(" | ");
            write_term(out, cond, 0);
            out.push('>');
        }
        Term::Quant(q, ..) => {
            out.push_str(match q {
                Quant::Forall => "forall",
                Quant::Exists => "exists",
            });
            let mut body = t;
            while let Term::Quant(q2, x, s, b) = body {
                if q2 != q {
                    break;
                }
                let _ = write!(out, " {x}:{}", sort_atom(s));
                body = b;
            }
            out.push_str(". ");
            write_term(out, body, 0);
        }
    }
}

fn sort_atom(s: &crate::surface::sort::Sort) -> String {
    if s.alias().is_none() && matches!(s, crate::surface::sort::Sort::Fun(..)) {
        format!("({s})")
    } else {
        s.to_string()
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, 0);
    s
}

/// Operand of `valid` and friends: parenthesised unless it is atomic-ish.
fn write_operand(out: &mut String, t: &Term) {
    write_term(out, t, 5);
}

fn meta_prec(m: &Meta) -> u8 {
    match m {
        Meta::ForallCtx(..) | Meta::Imp(..) => 0,
        Meta::And(..) => 1,
        _ => 2,
    }
}

fn write_meta(out: &mut String, m: &Meta, min: u8) {
    if meta_prec(m) < min {
        out.push('(');
        write_meta(out, m, 0);
        out.push(')');
        return;
    }
    match m {
        Meta::Valid(t) => {
            out.push_str("valid ");
            write_operand(out, t);
        }
        Meta::ValidD(t) => {
            out.push_str("validD ");
            write_operand(out, t);
        }
        Meta::ValidCtx(t, c) | Meta::AtCtx(t, c) => {
            out.push_str(if matches!(m, Meta::AtCtx(..)) {
                "validAt "
            } else {
                "validCtx "
            });
            write_term(out, c, 7);
            out.push(' ');
            write_operand(out, t);
        }
        Meta::Imp(l, r) => {
            write_meta(out, l, 1);
            out.push_str(" ==> ");
            write_meta(out, r, 0);
        }
        Meta::And(l, r) => {
            write_meta(out, l, 1);
            out.push_str(" && ");
            write_meta(out, r, 2);
        }
        Meta::ForallCtx(..) => {
            out.push_str("forall");
            let mut body = m;
            while let Meta::ForallCtx(x, b) = body {
                let _ = write!(out, " {x}:c");
                body = b;
            }
            out.push_str(". ");
            write_meta(out, body, 0);
        }
    }
}

pub fn print_meta(m: &Meta) -> String {
    let mut s = String::new();
    write_meta(&mut s, m, 0);
    s
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn print_goal_attrs(a: &GoalAttrs) -> String {
    let mut parts = Vec::new();
    if let Some(e) = a.expect {
        parts.push(format!("expect = {}", e.keyword()));
    }
    if let Some(s) = a.scope {
        parts.push(format!("scope = {s}"));
    }
    if let Some(q) = &a.query {
        parts.push(format!("query = {q}"));
    }
    if let Some(u) = &a.using {
        if u.is_empty() {
            parts.push("using = none".to_string());
        } else {
            parts.push(format!("using = {}", u.join(", ")));
        }
    }
    if !a.without.is_empty() {
        parts.push(format!("without = {}", a.without.join(", ")));
    }
    if let Some(an) = &a.anchor {
        parts.push(format!("anchor = {}", quote(an)));
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" [{}]", parts.join(", "))
    }
}

/// Renders a theory in the surface syntax; parsing the result yields an
/// equal theory.
pub fn print_theory(t: &Theory) -> String {
    let mut out = String::new();
    for (n, s) in &t.sort_aliases {
        let _ = writeln!(out, "sorts {n} = {s}");
    }
    for (n, s) in t.signature.user() {
        let _ = writeln!(out, "consts {n} : {s}");
    }
    for d in &t.defs {
        let _ = write!(out, "def {}", d.name);
        if !d.params.is_empty() {
            let ps: Vec<String> = d.params.iter().map(|(x, s)| format!("{x}:{}", sort_atom(s))).collect();
            let _ = write!(out, "({})", ps.join(", "));
        }
        if d.reconstructed {
            out.push_str(" [reconstructed]");
        }
        let _ = writeln!(out, " := {}", print_term(&d.body));
    }
    for a in &t.axioms {
        let _ = writeln!(out, "axiom {}: {}", a.name, print_meta(&a.formula));
    }
    for g in &t.goals {
        let _ = write!(out, "goal {}{}", g.name, print_goal_attrs(&g.attrs));
        if let Some(f) = &g.formula {
            let _ = write!(out, ": {}", print_meta(f));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::{parse_meta, parse_term, parse_theory};

    #[test]
    fn prints_minimal_parentheses() {
        let base = parse_theory("consts A : m, B : m, G : e => m => m").unwrap();
        for src in [
            "A -> B -> A",
            "(A -> B) -> A",
            "A & B | ~ A",
            "A & (B | A)",
            "boxD G a A",
            "~ (A & B)",
            "O<A & B | B -> A>",
            "O<(A | B) | A>",
            "forall x:m y:e. x -> G y x",
            "(forall x:m. x) & A",
            "A <-> B <-> A",
            "A <-> (B <-> A)",
        ] {
            let t = parse_term(&base, &["a"], src).unwrap();
            assert_eq!(print_term(&t), src);
        }
    }

    #[test]
    fn meta_printing() {
        let base = parse_theory("consts A : m").unwrap();
        for src in [
            "validD A ==> valid A",
            "(validD A ==> valid A) ==> valid top",
            "forall c:c d:c. validAt d A ==> validAt c A",
            "valid (A -> A) && validCtx x A",
        ] {
            let m = parse_meta(&base, src).unwrap();
            assert_eq!(print_meta(&m), src);
        }
    }

    #[test]
    fn theory_round_trip() {
        let src = "sorts prop = m\nconsts A : m, F : p, R : (e => e) => bool\n\
                   def D(a:e, q:p) [reconstructed] := q a & A\n\
                   axiom ax: validD (forall x:e. D x F)\n\
                   goal g [expect = countermodel, scope = c=1,e=1,w=2, using = none, anchor = \"a \\\"b\\\"\"]: validD A ==> valid A\n\
                   goal h [query = g, without = ax]\n";
        let t = parse_theory(src).unwrap();
        let printed = print_theory(&t);
        assert_eq!(parse_theory(&printed).unwrap(), t);
    }
}
