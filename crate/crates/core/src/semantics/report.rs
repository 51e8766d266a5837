use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::semantics::interp::Interpretation;
use crate::semantics::universe::{describe, describe_worlds};
use crate::surface::Sort;

fn carrier(prefix: char, n: u32) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn ob_entries(i: &Interpretation) -> Vec<(String, Vec<String>)> {
    let s = i.scope;
    (0..i.frame.ob.len() as u64)
        .map(|x| {
            let ys = (0..i.frame.ob.len() as u64)
                .filter(|&y| i.frame.in_ob(x, y))
                .map(|y| describe_worlds(y, s))
                .collect();
            (describe_worlds(x, s), ys)
        })
        .collect()
}

fn cell_label(args: &[Sort], tuple: &[u64], i: &Interpretation) -> String {
    tuple
        .iter()
        .zip(args)
        .map(|(&a, s)| describe(s, a, i.scope))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Human-readable listing of an interpretation.
pub fn render_text(i: &Interpretation) -> String {
    let s = i.scope;
    let f = &i.frame;
    let mut out = String::new();
    let _ = writeln!(out, "scope: {s}");
    let _ = writeln!(out, "worlds: {}", carrier('w', s.w).join(" "));
    let _ = writeln!(out, "contexts: {}", carrier('c', s.c).join(" "));
    let _ = writeln!(out, "individuals: {}", carrier('e', s.e).join(" "));
    for (name, acc) in [("av", &f.av), ("pv", &f.pv)] {
        let parts: Vec<String> = acc
            .iter()
            .enumerate()
            .map(|(w, &m)| format!("w{} -> {}", w + 1, describe_worlds(m, s)))
            .collect();
        let _ = writeln!(out, "{name}: {}", parts.join("; "));
    }
    let _ = writeln!(out, "ob:");
    for (x, ys) in ob_entries(i) {
        let _ = writeln!(out, "  {x} -> {{{}}}", ys.join(", "));
    }
    let wo: Vec<String> = f
        .world_of
        .iter()
        .enumerate()
        .map(|(c, &w)| format!("c{} -> w{}", c + 1, w + 1))
        .collect();
    let _ = writeln!(out, "worldOf: {}", wo.join("; "));
    let ag: Vec<String> = f
        .agent_of
        .iter()
        .enumerate()
        .map(|(c, &e)| format!("c{} -> e{}", c + 1, e + 1))
        .collect();
    let _ = writeln!(out, "agentOf: {}", ag.join("; "));
    for (name, t) in &i.tables {
        if t.args.is_empty() {
            let _ = writeln!(out, "{name}: {}", describe(&t.result, t.cells[0], s));
            continue;
        }
        let _ = writeln!(out, "{name}:");
        for (idx, &v) in t.cells.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {} -> {}",
                cell_label(&t.args, &t.tuple(idx), i),
                describe(&t.result, v, s)
            );
        }
    }
    out
}

/// Machine-readable rendering with the same content as [`render_text`].
pub fn render_json(i: &Interpretation) -> Value {
    let s = i.scope;
    let f = &i.frame;
    let acc = |v: &[u64]| -> Value {
        v.iter()
            .enumerate()
            .map(|(w, &m)| (format!("w{}", w + 1), json!(describe_worlds(m, s))))
            .collect::<Map<_, _>>()
            .into()
    };
    let ob: Map<String, Value> = ob_entries(i).into_iter().map(|(x, ys)| (x, json!(ys))).collect();
    let ctx = |v: &[u32], p: char| -> Value {
        v.iter()
            .enumerate()
            .map(|(c, &x)| (format!("c{}", c + 1), json!(format!("{p}{}", x + 1))))
            .collect::<Map<_, _>>()
            .into()
    };
    let mut tables = Map::new();
    for (name, t) in &i.tables {
        let v = if t.args.is_empty() {
            json!(describe(&t.result, t.cells[0], s))
        } else {
            t.cells
                .iter()
                .enumerate()
                .map(|(idx, &v)| (cell_label(&t.args, &t.tuple(idx), i), json!(describe(&t.result, v, s))))
                .collect::<Map<_, _>>()
                .into()
        };
        tables.insert(name.clone(), json!({ "sort": t.sort.to_string(), "value": v }));
    }
    json!({
        "scope": { "c": s.c, "e": s.e, "w": s.w },
        "av": acc(&f.av),
        "pv": acc(&f.pv),
        "ob": ob,
        "worldOf": ctx(&f.world_of, 'w'),
        "agentOf": ctx(&f.agent_of, 'e'),
        "constants": tables,
    })
}
