use std::collections::BTreeMap;

use crate::scope::Scope;
use crate::semantics::universe::universe_size;
use crate::semantics::SemanticsError;
use crate::surface::Sort;

/// Most worlds supported: `ob` stores, for each set of worlds, a set of
/// sets of worlds as one 64-bit word.
pub const MAX_WORLDS: u32 = 6;
/// Most points (context, world pairs) supported: a character is one word.
pub const MAX_POINTS: u32 = 62;

/// The DDL frame together with the two context features. Sets of worlds are
/// bit masks; `ob[x]` has bit `y` set iff the set `y` is in `ob(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub av: Vec<u64>,
    pub pv: Vec<u64>,
    pub ob: Vec<u64>,
    pub agent_of: Vec<u32>,
    pub world_of: Vec<u32>,
}

impl Frame {
    /// The frame with empty accessibility, empty `ob`, and every context
    /// mapped to the first world and individual.
    pub fn empty(scope: Scope) -> Frame {
        Frame {
            av: vec![0; scope.w as usize],
            pv: vec![0; scope.w as usize],
            ob: vec![0; 1 << scope.w],
            agent_of: vec![0; scope.c as usize],
            world_of: vec![0; scope.c as usize],
        }
    }

    pub fn in_ob(&self, x: u64, y: u64) -> bool {
        self.ob[x as usize] >> y & 1 == 1
    }
}

/// Finite function interpreting one constant. The constant's sort is split
/// into argument sorts and a result sort (see [`Sort::table_shape`]); cells
/// are laid out with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    pub sort: Sort,
    pub args: Vec<Sort>,
    pub result: Sort,
    pub arg_sizes: Vec<u64>,
    pub cells: Vec<u64>,
}

impl Table {
    pub fn new(sort: &Sort, scope: Scope) -> Result<Table, SemanticsError> {
        let (args, result) = sort.table_shape();
        let arg_sizes = args
            .iter()
            .map(|s| universe_size(s, scope))
            .collect::<Result<Vec<_>, _>>()?;
        universe_size(&result, scope)?;
        let n = arg_sizes
            .iter()
            .try_fold(1u64, |acc, &s| acc.checked_mul(s).filter(|&n| n <= 1 << 24))
            .ok_or_else(|| SemanticsError::UnsupportedSort { sort: sort.clone() })?;
        Ok(Table {
            sort: sort.clone(),
            args,
            result,
            arg_sizes,
            cells: vec![0; n as usize],
        })
    }

    pub fn index(&self, args: &[u64]) -> usize {
        args.iter()
            .zip(&self.arg_sizes)
            .fold(0u64, |acc, (&a, &s)| acc * s + a) as usize
    }

    /// Argument tuple of cell `i`.
    pub fn tuple(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.arg_sizes.len()];
        for (k, &s) in self.arg_sizes.iter().enumerate().rev() {
            out[k] = i as u64 % s;
            i /= s as usize;
        }
        out
    }

    pub fn get(&self, args: &[u64]) -> u64 {
        self.cells[self.index(args)]
    }

    pub fn set(&mut self, args: &[u64], v: u64) {
        let i = self.index(args);
        self.cells[i] = v;
    }
}

/// The constants a query needs tables for, by name.
pub type Vocabulary = BTreeMap<String, Sort>;

/// A finite interpretation: a frame plus one table per constant of the
/// vocabulary. The builtins `Agent` and `World` live in the frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interpretation {
    pub scope: Scope,
    pub frame: Frame,
    pub tables: BTreeMap<String, Table>,
}

impl Interpretation {
    /// All-zero tables over the empty frame.
    pub fn blank(scope: Scope, vocab: &Vocabulary) -> Result<Interpretation, SemanticsError> {
        check_scope(scope)?;
        let tables = vocab
            .iter()
            .map(|(n, s)| Ok((n.clone(), Table::new(s, scope)?)))
            .collect::<Result<_, SemanticsError>>()?;
        Ok(Interpretation {
            scope,
            frame: Frame::empty(scope),
            tables,
        })
    }

    pub fn vocabulary(&self) -> Vocabulary {
        self.tables.iter().map(|(n, t)| (n.clone(), t.sort.clone())).collect()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.get(name)
    }

    pub fn table_mut(&mut self, name: &str) -> Option<&mut Table> {
        self.tables.get_mut(name)
    }

    /// Flat serialization: frame, then tables in name order. Equal keys mean
    /// equal interpretations over the same vocabulary and scope.
    pub fn key(&self) -> Vec<u64> {
        let f = &self.frame;
        let mut out = Vec::new();
        out.extend(&f.av);
        out.extend(&f.pv);
        out.extend(&f.ob);
        out.extend(f.agent_of.iter().map(|&x| x as u64));
        out.extend(f.world_of.iter().map(|&x| x as u64));
        for t in self.tables.values() {
            out.extend(&t.cells);
        }
        out
    }
}

pub fn check_scope(scope: Scope) -> Result<(), SemanticsError> {
    if !scope.is_valid() || scope.w > MAX_WORLDS || scope.points() > MAX_POINTS {
        return Err(SemanticsError::ScopeUnsupported { scope });
    }
    Ok(())
}

/// Bits of a set of `n` elements.
pub fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout_is_big_endian() {
        let s = Scope::new(1, 2, 2);
        let t = Table::new(&Sort::fun(Sort::E, Sort::fun(Sort::p(), Sort::m())), s).unwrap();
        // args [e, p]: 2 * 16 cells
        assert_eq!(t.arg_sizes, vec![2, 16]);
        assert_eq!(t.cells.len(), 32);
        assert_eq!(t.index(&[1, 3]), 19);
        assert_eq!(t.tuple(19), vec![1, 3]);
    }

    #[test]
    fn scope_limits() {
        assert!(check_scope(Scope::new(2, 2, 2)).is_ok());
        assert!(check_scope(Scope::new(1, 1, 7)).is_err());
        assert!(check_scope(Scope::new(11, 1, 6)).is_err());
    }
}
