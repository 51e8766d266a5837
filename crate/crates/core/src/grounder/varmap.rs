use std::collections::BTreeMap;

use deon_sat::{Lit, Var};

use crate::scope::Scope;
use crate::semantics::canonical::Renaming;
use crate::semantics::interp::{Table, Vocabulary};
use crate::semantics::universe::{describe, describe_worlds};
use crate::semantics::SemanticsError;
use crate::surface::Sort;

/// A semantic cell backed by one propositional variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Av { w: u32, v: u32 },
    Pv { w: u32, v: u32 },
    Ob { x: u64, y: u64 },
    WorldOf { c: u32, w: u32 },
    AgentOf { c: u32, e: u32 },
    /// Bit `bit` of a set-valued cell, or value `bit` of an element-valued
    /// cell, of table `table` at argument tuple index `cell`.
    Table { table: usize, cell: usize, bit: u32 },
}

/// How the cells of one table are laid out in the variable space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableLayout {
    pub name: String,
    pub table: Table,
    /// Variables per cell: bit width for set-valued results, universe size
    /// (one-hot) for element-valued ones.
    pub width: u32,
    pub one_hot: bool,
    pub first: u32,
}

/// Bijection between the primary propositional variables and semantic
/// cells, in the order av, pv, ob, worldOf, agentOf, tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropVarMap {
    pub scope: Scope,
    pub tables: Vec<TableLayout>,
    av: u32,
    pv: u32,
    ob: u32,
    world_of: u32,
    agent_of: u32,
    len: u32,
}

impl PropVarMap {
    pub fn new(scope: Scope, vocab: &Vocabulary) -> Result<PropVarMap, SemanticsError> {
        let (nw, nc, ne) = (scope.w, scope.c, scope.e);
        let av = 0;
        let pv = av + nw * nw;
        let ob = pv + nw * nw;
        let world_of = ob + (1 << nw) * (1 << nw);
        let agent_of = world_of + nc * nw;
        let mut next = agent_of + nc * ne;
        let mut tables = Vec::new();
        for (name, sort) in vocab {
            let table = Table::new(sort, scope)?;
            let r = &table.result;
            let (width, one_hot) = if r.is_m() {
                (scope.points(), false)
            } else if r.is_wo() {
                (nw, false)
            } else if *r == Sort::Bool {
                (1, false)
            } else {
                let n = crate::semantics::universe_size(r, scope)?;
                (n as u32, true)
            };
            let first = next;
            next += width * table.cells.len() as u32;
            tables.push(TableLayout {
                name: name.clone(),
                table,
                width,
                one_hot,
                first,
            });
        }
        Ok(PropVarMap {
            scope,
            tables,
            av,
            pv,
            ob,
            world_of,
            agent_of,
            len: next,
        })
    }

    /// Number of primary variables.
    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn av(&self, w: u32, v: u32) -> Var {
        Var(self.av + w * self.scope.w + v)
    }

    pub fn pv(&self, w: u32, v: u32) -> Var {
        Var(self.pv + w * self.scope.w + v)
    }

    pub fn ob(&self, x: u64, y: u64) -> Var {
        Var(self.ob + (x as u32) * (1 << self.scope.w) + y as u32)
    }

    pub fn world_of(&self, c: u32, w: u32) -> Var {
        Var(self.world_of + c * self.scope.w + w)
    }

    pub fn agent_of(&self, c: u32, e: u32) -> Var {
        Var(self.agent_of + c * self.scope.e + e)
    }

    pub fn table_index(&self, name: &str) -> Option<usize> {
        self.tables.iter().position(|t| t.name == name)
    }

    pub fn table_var(&self, table: usize, cell: usize, bit: u32) -> Var {
        let t = &self.tables[table];
        Var(t.first + cell as u32 * t.width + bit)
    }

    /// The cell a primary variable stands for.
    pub fn cell(&self, v: Var) -> Option<Cell> {
        let i = v.0;
        let (nw, ne) = (self.scope.w, self.scope.e);
        if i >= self.len {
            return None;
        }
        Some(if i < self.pv {
            Cell::Av { w: i / nw, v: i % nw }
        } else if i < self.ob {
            let j = i - self.pv;
            Cell::Pv { w: j / nw, v: j % nw }
        } else if i < self.world_of {
            let j = (i - self.ob) as u64;
            Cell::Ob {
                x: j >> nw,
                y: j & ((1 << nw) - 1),
            }
        } else if i < self.agent_of {
            let j = i - self.world_of;
            Cell::WorldOf { c: j / nw, w: j % nw }
        } else if i < self.tables.first().map_or(self.len, |t| t.first) {
            let j = i - self.agent_of;
            Cell::AgentOf { c: j / ne, e: j % ne }
        } else {
            let table = self.tables.iter().rposition(|t| t.first <= i).unwrap();
            let t = &self.tables[table];
            let j = i - t.first;
            Cell::Table {
                table,
                cell: (j / t.width) as usize,
                bit: j % t.width,
            }
        })
    }

    pub fn var(&self, cell: &Cell) -> Var {
        match *cell {
            Cell::Av { w, v } => self.av(w, v),
            Cell::Pv { w, v } => self.pv(w, v),
            Cell::Ob { x, y } => self.ob(x, y),
            Cell::WorldOf { c, w } => self.world_of(c, w),
            Cell::AgentOf { c, e } => self.agent_of(c, e),
            Cell::Table { table, cell, bit } => self.table_var(table, cell, bit),
        }
    }

    pub fn describe(&self, cell: &Cell) -> String {
        let s = self.scope;
        match cell {
            Cell::Av { w, v } => format!("av[w{}][w{}]", w + 1, v + 1),
            Cell::Pv { w, v } => format!("pv[w{}][w{}]", w + 1, v + 1),
            Cell::Ob { x, y } => format!("ob[{}][{}]", describe_worlds(*x, s), describe_worlds(*y, s)),
            Cell::WorldOf { c, w } => format!("worldOf[c{}]=w{}", c + 1, w + 1),
            Cell::AgentOf { c, e } => format!("agentOf[c{}]=e{}", c + 1, e + 1),
            Cell::Table { table, cell, bit } => {
                let t = &self.tables[*table];
                let mut out = t.name.clone();
                for (a, sort) in t.table.tuple(*cell).iter().zip(&t.table.args) {
                    out.push_str(&format!("[{}]", describe(sort, *a, s)));
                }
                let r = &t.table.result;
                if t.one_hot {
                    out.push_str(&format!("={}", describe(r, *bit as u64, s)));
                } else if r.is_m() {
                    out.push_str(&format!("@c{}w{}", bit / s.w + 1, bit % s.w + 1));
                } else if r.is_wo() {
                    out.push_str(&format!("@w{}", bit + 1));
                }
                out
            }
        }
    }

    /// `c <id> <cell>` lines for DIMACS export, one per primary variable.
    pub fn comments(&self) -> Vec<String> {
        (0..self.len)
            .map(|i| format!("v {} {}", i + 1, self.describe(&self.cell(Var(i)).unwrap())))
            .collect()
    }

    /// Groups of variables of which exactly one is true.
    pub fn selector_groups(&self) -> Vec<Vec<Var>> {
        let s = self.scope;
        let mut out = Vec::new();
        for c in 0..s.c {
            out.push((0..s.w).map(|w| self.world_of(c, w)).collect());
            out.push((0..s.e).map(|e| self.agent_of(c, e)).collect());
        }
        for (k, t) in self.tables.iter().enumerate() {
            if t.one_hot {
                for cell in 0..t.table.cells.len() {
                    out.push((0..t.width).map(|b| self.table_var(k, cell, b)).collect());
                }
            }
        }
        out
    }

    /// The variable a renaming of the carriers sends `v` to.
    pub fn image(&self, v: Var, r: &Renaming) -> Var {
        let s = self.scope;
        let cell = match self.cell(v).expect("primary variable") {
            Cell::Av { w, v } => Cell::Av { w: r.w[w as usize], v: r.w[v as usize] },
            Cell::Pv { w, v } => Cell::Pv { w: r.w[w as usize], v: r.w[v as usize] },
            Cell::Ob { x, y } => Cell::Ob {
                x: r.worlds(x),
                y: r.worlds(y),
            },
            Cell::WorldOf { c, w } => Cell::WorldOf {
                c: r.c[c as usize],
                w: r.w[w as usize],
            },
            Cell::AgentOf { c, e } => Cell::AgentOf {
                c: r.c[c as usize],
                e: r.e[e as usize],
            },
            Cell::Table { table, cell, bit } => {
                let t = &self.tables[table];
                let tuple: Vec<u64> = t
                    .table
                    .tuple(cell)
                    .iter()
                    .zip(&t.table.args)
                    .map(|(&a, sort)| r.value(sort, a, s))
                    .collect();
                let bit = if t.one_hot {
                    r.value(&t.table.result, bit as u64, s) as u32
                } else {
                    r.value(&t.table.result, 1 << bit, s).trailing_zeros()
                };
                Cell::Table {
                    table,
                    cell: t.table.index(&tuple),
                    bit,
                }
            }
        };
        self.var(&cell)
    }

    /// Closed-form number of primary variables for `vocab` at `scope`.
    pub fn closed_form(scope: Scope, vocab: &BTreeMap<String, Sort>) -> Result<u64, SemanticsError> {
        let (c, e, w) = (scope.c as u64, scope.e as u64, scope.w as u64);
        let mut n = 2 * w * w + (1 << w) * (1 << w) + c * w + c * e;
        for sort in vocab.values() {
            let (args, result) = sort.table_shape();
            let mut cells = 1u64;
            for a in &args {
                cells *= crate::semantics::universe_size(a, scope)?;
            }
            let width = if result.is_m() {
                c * w
            } else if result.is_wo() {
                w
            } else if result == Sort::Bool {
                1
            } else {
                crate::semantics::universe_size(&result, scope)?
            };
            n += cells * width;
        }
        Ok(n)
    }
}

/// Positive literal of a variable.
pub fn pos(v: Var) -> Lit {
    v.positive()
}
