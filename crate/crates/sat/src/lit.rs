use std::fmt;
use std::ops::Not;

/// A propositional variable, numbered from zero.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

/// A literal: a variable together with a polarity.
///
/// Encoded as `2 * var + negated`, so a literal and its negation are
/// neighbours and literals can index per-literal tables directly.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 * 2 + u32::from(!positive))
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// DIMACS convention: variables are 1-based, negative integers are
    /// negated literals.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 {
            return None;
        }
        let var = u32::try_from(value.unsigned_abs() - 1).ok()?;
        Some(Lit::new(Var(var), value > 0))
    }

    /// Truth value of this literal under a total assignment.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var().index()] == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_flips_polarity_only() {
        let l = Var(7).positive();
        assert_eq!((!l).var(), Var(7));
        assert!(!(!l).is_positive());
        assert_eq!(!!l, l);
    }

    #[test]
    fn dimacs_numbering_is_one_based() {
        assert_eq!(Var(0).positive().to_dimacs(), 1);
        assert_eq!(Var(0).negative().to_dimacs(), -1);
        assert_eq!(Lit::from_dimacs(-3), Some(Var(2).negative()));
        assert_eq!(Lit::from_dimacs(0), None);
    }
}
