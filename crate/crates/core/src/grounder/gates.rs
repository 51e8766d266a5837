use std::collections::HashMap;

use deon_sat::{Cnf, Lit, Var};

/// Clause store with hash-consed AND gates over a constant-true literal.
/// Every gate gets both implication directions, so auxiliary variables are
/// functions of the primary ones.
pub struct Gates {
    pub cnf: Cnf,
    t: Lit,
    ands: HashMap<Vec<Lit>, Lit>,
    pub aux: u32,
}

impl Gates {
    /// `primary` variables come first; the next one is pinned to true.
    pub fn new(primary: u32) -> Gates {
        let mut cnf = Cnf::with_vars(primary + 1);
        let t = Var(primary).positive();
        cnf.add_clause([t]);
        Gates {
            cnf,
            t,
            ands: HashMap::new(),
            aux: 0,
        }
    }

    pub fn tt(&self) -> Lit {
        self.t
    }

    pub fn ff(&self) -> Lit {
        !self.t
    }

    pub fn constant(&self, b: bool) -> Lit {
        if b {
            self.t
        } else {
            !self.t
        }
    }

    /// `Some(b)` when `l` is one of the two constants.
    pub fn value(&self, l: Lit) -> Option<bool> {
        if l == self.t {
            Some(true)
        } else if l == !self.t {
            Some(false)
        } else {
            None
        }
    }

    pub fn and<I: IntoIterator<Item = Lit>>(&mut self, lits: I) -> Lit {
        let mut v: Vec<Lit> = Vec::new();
        for l in lits {
            if l == self.t {
                continue;
            }
            if l == !self.t {
                return !self.t;
            }
            v.push(l);
        }
        v.sort_unstable();
        v.dedup();
        if v.windows(2).any(|p| p[0] == !p[1]) {
            return !self.t;
        }
        match v.len() {
            0 => return self.t,
            1 => return v[0],
            _ => {}
        }
        if let Some(&g) = self.ands.get(&v) {
            return g;
        }
        let g = self.cnf.new_var().positive();
        self.aux += 1;
        for &l in &v {
            self.cnf.add_clause([!g, l]);
        }
        self.cnf.add_clause(std::iter::once(g).chain(v.iter().map(|&l| !l)));
        self.ands.insert(v, g);
        g
    }

    pub fn or<I: IntoIterator<Item = Lit>>(&mut self, lits: I) -> Lit {
        let neg: Vec<Lit> = lits.into_iter().map(|l| !l).collect();
        !self.and(neg)
    }

    pub fn and2(&mut self, a: Lit, b: Lit) -> Lit {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([a, b])
    }

    pub fn imp(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([!a, b])
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let both = self.and([a, b]);
        let neither = self.and([!a, !b]);
        self.or([both, neither])
    }

    /// Adds `l` as a unit clause.
    pub fn assert(&mut self, l: Lit) {
        self.cnf.add_clause([l]);
    }

    pub fn clause<I: IntoIterator<Item = Lit>>(&mut self, lits: I) {
        let mut v = Vec::new();
        for l in lits {
            if l == self.t {
                return;
            }
            if l != !self.t {
                v.push(l);
            }
        }
        self.cnf.add_clause(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models(g: &Gates, out: Lit, inputs: u32) -> Vec<(u32, bool)> {
        // brute force over inputs; aux variables follow from the clauses
        let n = g.cnf.num_vars() as usize;
        let mut res = Vec::new();
        for x in 0..1u32 << inputs {
            let mut found = None;
            for aux in 0..1u64 << (n - inputs as usize - 1) {
                let mut a = vec![false; n];
                for i in 0..inputs as usize {
                    a[i] = x >> i & 1 == 1;
                }
                a[inputs as usize] = true;
                for j in 0..n - inputs as usize - 1 {
                    a[inputs as usize + 1 + j] = aux >> j & 1 == 1;
                }
                if g.cnf.is_satisfied_by(&a) {
                    assert!(found.is_none(), "aux variables are determined");
                    found = Some(out.eval(&a));
                }
            }
            res.push((x, found.expect("every input extends")));
        }
        res
    }

    #[test]
    fn gates_compute_their_functions() {
        let mut g = Gates::new(3);
        let (a, b, c) = (Var(0).positive(), Var(1).positive(), Var(2).positive());
        let x = g.and([a, b]);
        let y = g.or([x, !c]);
        let z = g.iff(y, a);
        for (x_in, v) in models(&g, z, 3) {
            let (a, b, c) = (x_in & 1 == 1, x_in & 2 == 2, x_in & 4 == 4);
            assert_eq!(v, ((a && b) || !c) == a);
        }
    }

    #[test]
    fn constants_fold() {
        let mut g = Gates::new(1);
        let a = Var(0).positive();
        let t = g.tt();
        assert_eq!(g.and([a, t]), a);
        assert_eq!(g.and([a, !a]), g.ff());
        assert_eq!(g.or([a, t]), t);
        assert_eq!(g.and(Vec::new()), t);
        let n = g.cnf.num_vars();
        let x = g.and([a, Var(0).positive()]);
        assert_eq!(x, a);
        assert_eq!(g.cnf.num_vars(), n);
    }

    #[test]
    fn and_gates_are_shared() {
        let mut g = Gates::new(2);
        let (a, b) = (Var(0).positive(), Var(1).positive());
        let x = g.and([a, b]);
        assert_eq!(g.and([b, a]), x);
        assert_eq!(g.aux, 1);
    }
}
