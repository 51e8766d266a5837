use crate::lit::{Lit, Var};

/// A formula in conjunctive normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new() -> Cnf {
        Cnf::default()
    }

    pub fn with_vars(num_vars: u32) -> Cnf {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.num_vars);
        self.num_vars += 1;
        v
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Adds a clause, growing the variable count if the clause mentions
    /// variables beyond it.
    pub fn add_clause<I: IntoIterator<Item = Lit>>(&mut self, lits: I) {
        let clause: Vec<Lit> = lits.into_iter().collect();
        for l in &clause {
            self.num_vars = self.num_vars.max(l.var().0 + 1);
        }
        self.clauses.push(clause);
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Index of the first clause falsified by `assignment`, if any.
    pub fn first_falsified(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.eval(assignment)))
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() >= self.num_vars as usize && self.first_falsified(assignment).is_none()
    }
}
