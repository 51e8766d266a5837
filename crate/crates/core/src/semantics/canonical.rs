use crate::scope::Scope;
use crate::semantics::interp::{Frame, Interpretation};
use crate::semantics::universe::{encode_function, universe_size};
use crate::surface::Sort;

/// Renaming of worlds, contexts and individuals: `w[i]` is the new name of
/// world `i`, and likewise for `c` and `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    pub w: Vec<u32>,
    pub c: Vec<u32>,
    pub e: Vec<u32>,
}

impl Renaming {
    pub fn identity(scope: Scope) -> Renaming {
        Renaming {
            w: (0..scope.w).collect(),
            c: (0..scope.c).collect(),
            e: (0..scope.e).collect(),
        }
    }

    /// Every renaming of the scope, identity first.
    pub fn all(scope: Scope) -> Vec<Renaming> {
        let (ws, cs, es) = (permutations(scope.w), permutations(scope.c), permutations(scope.e));
        let mut out = Vec::with_capacity(ws.len() * cs.len() * es.len());
        for w in &ws {
            for c in &cs {
                for e in &es {
                    out.push(Renaming {
                        w: w.clone(),
                        c: c.clone(),
                        e: e.clone(),
                    });
                }
            }
        }
        out
    }

    /// Image of a set of worlds.
    pub fn worlds(&self, mask: u64) -> u64 {
        self.w
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0, |acc, (_, &j)| acc | 1 << j)
    }

    /// Image of the value `v` of sort `s`.
    pub fn value(&self, s: &Sort, v: u64, scope: Scope) -> u64 {
        match s {
            Sort::W => self.w[v as usize] as u64,
            Sort::C => self.c[v as usize] as u64,
            Sort::E => self.e[v as usize] as u64,
            Sort::Bool => v,
            _ if s.is_wo() => self.worlds(v),
            _ if s.is_m() => {
                let mut out = 0;
                for c in 0..scope.c {
                    for w in 0..scope.w {
                        if v >> (c * scope.w + w) & 1 == 1 {
                            out |= 1 << (self.c[c as usize] * scope.w + self.w[w as usize]);
                        }
                    }
                }
                out
            }
            Sort::Fun(d, r) => {
                let nd = universe_size(d, scope).expect("enumerable sort");
                let nr = universe_size(r, scope).expect("enumerable sort");
                let mut images = vec![0; nd as usize];
                let mut rest = v;
                for a in 0..nd {
                    let img = rest % nr;
                    rest /= nr;
                    images[self.value(d, a, scope) as usize] = self.value(r, img, scope);
                }
                encode_function(&images, nr)
            }
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// The interpretation obtained by renaming carriers along `r`.
pub fn rename(i: &Interpretation, r: &Renaming) -> Interpretation {
    let scope = i.scope;
    let f = &i.frame;
    let mut g = Frame::empty(scope);
    for w in 0..scope.w as usize {
        g.av[r.w[w] as usize] = r.worlds(f.av[w]);
        g.pv[r.w[w] as usize] = r.worlds(f.pv[w]);
    }
    for x in 0..f.ob.len() {
        let mut ys = 0u64;
        for y in 0..f.ob.len() as u64 {
            if f.ob[x] >> y & 1 == 1 {
                ys |= 1 << r.worlds(y);
            }
        }
        g.ob[r.worlds(x as u64) as usize] = ys;
    }
    for c in 0..scope.c as usize {
        g.agent_of[r.c[c] as usize] = r.e[f.agent_of[c] as usize];
        g.world_of[r.c[c] as usize] = r.w[f.world_of[c] as usize];
    }
    let mut tables = i.tables.clone();
    for (name, t) in &i.tables {
        let out = tables.get_mut(name).unwrap();
        for (idx, &v) in t.cells.iter().enumerate() {
            let tuple: Vec<u64> = t
                .tuple(idx)
                .iter()
                .zip(&t.args)
                .map(|(&a, s)| r.value(s, a, scope))
                .collect();
            out.set(&tuple, r.value(&t.result, v, scope));
        }
    }
    Interpretation {
        scope,
        frame: g,
        tables,
    }
}

/// Representative of the isomorphism class of `i`: the renaming with the
/// lexicographically least [`Interpretation::key`].
pub fn canonical_form(i: &Interpretation) -> Interpretation {
    let mut best: Option<(Vec<u64>, Interpretation)> = None;
    for r in Renaming::all(i.scope) {
        let j = rename(i, &r);
        let k = j.key();
        if best.as_ref().map_or(true, |(b, _)| k < *b) {
            best = Some((k, j));
        }
    }
    best.expect("at least the identity renaming").1
}

pub fn canonical_key(i: &Interpretation) -> Vec<u64> {
    Renaming::all(i.scope)
        .iter()
        .map(|r| rename(i, r).key())
        .min()
        .expect("at least the identity renaming")
}
