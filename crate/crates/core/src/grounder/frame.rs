use crate::grounder::gates::Gates;
use crate::grounder::varmap::PropVarMap;
use crate::semantics::conditions::{Condition, ConditionSet};

/// Clauses for each enabled frame condition and the exactly-one constraints
/// of the selector groups.
pub fn frame_clauses(g: &mut Gates, m: &PropVarMap, cs: &ConditionSet) {
    let nw = m.scope.w;
    let sets = 1u64 << nw;
    let sub = |a: u64, b: u64| a & !b == 0;
    for cond in cs.enabled() {
        match cond {
            Condition::AvPv => {
                for w in 0..nw {
                    for v in 0..nw {
                        g.clause([m.av(w, v).negative(), m.pv(w, v).positive()]);
                    }
                }
            }
            Condition::NonemptyAv => {
                for w in 0..nw {
                    g.clause((0..nw).map(|v| m.av(w, v).positive()));
                }
            }
            Condition::PvRefl => {
                for w in 0..nw {
                    g.clause([m.pv(w, w).positive()]);
                }
            }
            Condition::Sem5ab => {
                for x in 0..sets {
                    for y in 0..sets {
                        if x & y == 0 {
                            g.clause([m.ob(x, y).negative()]);
                        }
                    }
                }
            }
            Condition::ObExt => {
                for x in 0..sets {
                    for y in 0..sets {
                        for z in y + 1..sets {
                            if x & y == x & z {
                                g.clause([m.ob(x, y).negative(), m.ob(x, z).positive()]);
                                g.clause([m.ob(x, z).negative(), m.ob(x, y).positive()]);
                            }
                        }
                    }
                }
            }
            Condition::ObClosure => {
                for x in 0..sets {
                    for y in 0..sets {
                        for z in 0..sets {
                            if x & y & z != 0 {
                                g.clause([
                                    m.ob(x, y).negative(),
                                    m.ob(x, z).negative(),
                                    m.ob(x, y & z).positive(),
                                ]);
                            }
                        }
                    }
                }
            }
            Condition::ObUp => {
                for x in 0..sets {
                    for y in 0..sets {
                        for z in 0..sets {
                            if sub(y, x) && sub(x, z) {
                                g.clause([m.ob(x, y).negative(), m.ob(z, (z & !x) | y).positive()]);
                            }
                        }
                    }
                }
            }
            Condition::ObDown => {
                for x in 0..sets {
                    for y in 0..sets {
                        for z in 0..sets {
                            if sub(y, x) && y & z != 0 {
                                g.clause([m.ob(x, z).negative(), m.ob(y, z).positive()]);
                            }
                        }
                    }
                }
            }
        }
    }
    for group in m.selector_groups() {
        g.clause(group.iter().map(|v| v.positive()));
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                g.clause([a.negative(), b.negative()]);
            }
        }
    }
}
