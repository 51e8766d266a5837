//! Brute-force count of condition-satisfying frames on explicit sets. It
//! shares no code with the library's condition checker.

use std::collections::BTreeSet;

pub type Set = BTreeSet<usize>;

/// Condition-satisfying frames at one context and one individual.
pub const N1: usize = 2;
pub const N2: usize = 160;

pub fn subsets(n: usize) -> Vec<Set> {
    (0..1usize << n)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Accessibility pairs (av, pv) over `n` worlds meeting the default
/// conditions on av and pv.
pub fn accessibility(n: usize) -> Vec<(Vec<Set>, Vec<Set>)> {
    let subs = subsets(n);
    let maps: Vec<Vec<Set>> = (0..subs.len().pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let s = subs[k % subs.len()].clone();
                    k /= subs.len();
                    s
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for av in &maps {
        for pv in &maps {
            let ok = (0..n).all(|w| av[w].is_subset(&pv[w]) && !av[w].is_empty() && pv[w].contains(&w));
            if ok {
                out.push((av.clone(), pv.clone()));
            }
        }
    }
    out
}

/// Obligation functions over `n` worlds meeting the default conditions on
/// ob, as sets of (X, Y) pairs meaning Y ∈ ob(X).
pub fn obligations(n: usize) -> Vec<BTreeSet<(Set, Set)>> {
    let subs = subsets(n);
    let pairs: Vec<(Set, Set)> = subs
        .iter()
        .flat_map(|x| subs.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..1 << pairs.len() {
        let ob: BTreeSet<(Set, Set)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        if ob_ok(&ob, &subs) {
            out.push(ob);
        }
    }
    out
}

fn ob_ok(ob: &BTreeSet<(Set, Set)>, subs: &[Set]) -> bool {
    let has = |x: &Set, y: &Set| ob.contains(&(x.clone(), y.clone()));
    let meet = |a: &Set, b: &Set| -> Set { a.intersection(b).copied().collect() };
    for x in subs {
        for y in subs {
            if has(x, y) && meet(x, y).is_empty() {
                return false;
            }
            for z in subs {
                if meet(x, y) == meet(x, z) && has(x, y) != has(x, z) {
                    return false;
                }
                if has(x, y) && has(x, z) && !meet(&meet(x, y), z).is_empty() && !has(x, &meet(y, z)) {
                    return false;
                }
                if has(x, y) && y.is_subset(x) && x.is_subset(z) {
                    let lifted: Set = z.difference(x).copied().chain(y.iter().copied()).collect();
                    if !has(z, &lifted) {
                        return false;
                    }
                }
                if y.is_subset(x) && has(x, z) && !meet(y, z).is_empty() && !has(y, z) {
                    return false;
                }
            }
        }
    }
    true
}

/// Frames at one context and one individual: the context's world is free.
pub fn oracle_count(n: usize) -> usize {
    accessibility(n).len() * obligations(n).len() * n
}
