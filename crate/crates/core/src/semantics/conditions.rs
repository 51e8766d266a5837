use std::fmt;
use std::str::FromStr;

use crate::semantics::interp::{Frame, Interpretation};
use crate::semantics::universe::describe_worlds;
use crate::semantics::SemanticsError;

/// Frame conditions on `av`, `pv` and `ob`. Sets are bit masks over worlds.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// av(w) is a subset of pv(w).
    AvPv,
    /// Y in ob(X) implies X and Y intersect.
    Sem5ab,
    /// av(w) is nonempty.
    NonemptyAv,
    /// w is in pv(w).
    PvRefl,
    /// X∩Y = X∩Z implies (Y in ob(X) iff Z in ob(X)).
    ObExt,
    /// Y, Z in ob(X) and X∩Y∩Z nonempty imply Y∩Z in ob(X).
    ObClosure,
    /// Y in ob(X), Y ⊆ X ⊆ Z imply (Z∖X)∪Y in ob(Z).
    ObUp,
    /// Y ⊆ X, Z in ob(X), Y∩Z nonempty imply Z in ob(Y).
    ObDown,
}

impl Condition {
    pub const ALL: [Condition; 8] = [
        Condition::AvPv,
        Condition::Sem5ab,
        Condition::NonemptyAv,
        Condition::PvRefl,
        Condition::ObExt,
        Condition::ObClosure,
        Condition::ObUp,
        Condition::ObDown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::AvPv => "C-avpv",
            Condition::Sem5ab => "sem_5ab",
            Condition::NonemptyAv => "sem-nonempty-av",
            Condition::PvRefl => "sem-pv-refl",
            Condition::ObExt => "sem-ob-ext",
            Condition::ObClosure => "sem-ob-closure",
            Condition::ObUp => "sem-ob-up",
            Condition::ObDown => "sem-ob-down",
        }
    }

    /// Conditions the corpus relies on; they stay on in corpus runs.
    pub fn is_mandatory(self) -> bool {
        matches!(self, Condition::AvPv | Condition::Sem5ab)
    }

    /// Witnesses of violations in `f` over `nw` worlds, first one only when
    /// `first_only`.
    pub fn violations(self, f: &Frame, nw: u32, first_only: bool) -> Vec<Vec<u64>> {
        let sets = 1u64 << nw;
        let mut out = Vec::new();
        let mut push = |w: Vec<u64>| {
            out.push(w);
            first_only
        };
        let sub = |a: u64, b: u64| a & !b == 0;
        match self {
            Condition::AvPv | Condition::NonemptyAv | Condition::PvRefl => {
                for w in 0..nw as u64 {
                    let (av, pv) = (f.av[w as usize], f.pv[w as usize]);
                    let ok = match self {
                        Condition::AvPv => sub(av, pv),
                        Condition::NonemptyAv => av != 0,
                        _ => pv >> w & 1 == 1,
                    };
                    if !ok && push(vec![w]) {
                        break;
                    }
                }
            }
            Condition::Sem5ab => {
                'outer: for x in 0..sets {
                    for y in 0..sets {
                        if f.in_ob(x, y) && x & y == 0 && push(vec![x, y]) {
                            break 'outer;
                        }
                    }
                }
            }
            Condition::ObExt => {
                'outer: for x in 0..sets {
                    for y in 0..sets {
                        for z in y + 1..sets {
                            if x & y == x & z && f.in_ob(x, y) != f.in_ob(x, z) && push(vec![x, y, z]) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
            Condition::ObClosure => {
                'outer: for x in 0..sets {
                    for y in 0..sets {
                        for z in 0..sets {
                            if f.in_ob(x, y) && f.in_ob(x, z) && x & y & z != 0 && !f.in_ob(x, y & z) && push(vec![x, y, z]) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
            Condition::ObUp => {
                'outer: for x in 0..sets {
                    for y in 0..sets {
                        for z in 0..sets {
                            if f.in_ob(x, y) && sub(y, x) && sub(x, z) && !f.in_ob(z, (z & !x) | y) && push(vec![x, y, z]) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
            Condition::ObDown => {
                'outer: for x in 0..sets {
                    for y in 0..sets {
                        for z in 0..sets {
                            if sub(y, x) && f.in_ob(x, z) && y & z != 0 && !f.in_ob(y, z) && push(vec![x, y, z]) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Condition, SemanticsError> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| SemanticsError::UnknownCondition { name: s.to_string() })
    }
}

/// Which frame conditions are in force.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConditionSet {
    flags: Vec<(Condition, bool)>,
}

impl Default for ConditionSet {
    fn default() -> ConditionSet {
        ConditionSet {
            flags: Condition::ALL.iter().map(|&c| (c, true)).collect(),
        }
    }
}

impl ConditionSet {
    pub fn none() -> ConditionSet {
        ConditionSet {
            flags: Condition::ALL.iter().map(|&c| (c, false)).collect(),
        }
    }

    pub fn set(&mut self, c: Condition, on: bool) {
        for (k, f) in &mut self.flags {
            if *k == c {
                *f = on;
            }
        }
    }

    pub fn enable(&mut self, name: &str) -> Result<(), SemanticsError> {
        self.set(name.parse()?, true);
        Ok(())
    }

    pub fn disable(&mut self, name: &str) -> Result<(), SemanticsError> {
        self.set(name.parse()?, false);
        Ok(())
    }

    pub fn is_enabled(&self, c: Condition) -> bool {
        self.flags.iter().any(|&(k, f)| k == c && f)
    }

    pub fn enabled(&self) -> impl Iterator<Item = Condition> + '_ {
        self.flags.iter().filter(|(_, f)| *f).map(|&(c, _)| c)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.enabled().map(Condition::name).collect()
    }

    /// Rejects sets that switch off a mandatory condition.
    pub fn require_mandatory(&self) -> Result<(), SemanticsError> {
        match Condition::ALL.into_iter().find(|c| c.is_mandatory() && !self.is_enabled(*c)) {
            Some(c) => Err(SemanticsError::MandatoryCondition { name: c.name().to_string() }),
            None => Ok(()),
        }
    }
}

/// One failed frame condition with the worlds or world sets witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Vec<u64>,
    pub description: String,
}

pub fn frame_conditions_check(i: &Interpretation, cs: &ConditionSet) -> Vec<Violation> {
    let nw = i.scope.w;
    let mut out = Vec::new();
    for c in cs.enabled() {
        for witness in c.violations(&i.frame, nw, false) {
            let description = match c {
                Condition::AvPv | Condition::NonemptyAv | Condition::PvRefl => format!("w{}", witness[0] + 1),
                _ => witness
                    .iter()
                    .zip(["X", "Y", "Z"])
                    .map(|(&s, n)| format!("{n}={}", describe_worlds(s, i.scope)))
                    .collect::<Vec<_>>()
                    .join(" "),
            };
            out.push(Violation {
                condition: c,
                witness,
                description,
            });
        }
    }
    out
}

/// True iff the frame meets every enabled condition.
pub fn frame_ok(f: &Frame, nw: u32, cs: &ConditionSet) -> bool {
    cs.enabled().all(|c| c.violations(f, nw, true).is_empty())
}
