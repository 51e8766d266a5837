use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Cardinality bounds for the three carrier sorts.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Scope {
    pub c: u32,
    pub e: u32,
    pub w: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScopeParseError(pub String);

impl fmt::Display for ScopeParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ScopeParseError {}

impl Scope {
    pub const fn new(c: u32, e: u32, w: u32) -> Scope {
        Scope { c, e, w }
    }

    pub fn is_valid(&self) -> bool {
        self.c >= 1 && self.e >= 1 && self.w >= 1
    }

    /// Number of (context, world) points; the bit width of a character.
    pub fn points(&self) -> u32 {
        self.c * self.w
    }

    pub fn leq(&self, other: &Scope) -> bool {
        self.c <= other.c && self.e <= other.e && self.w <= other.w
    }

    /// Every scope componentwise below `self` (inclusive), smallest first in
    /// iterative-deepening order: by total size, then c, e, w.
    pub fn below(&self) -> Vec<Scope> {
        let mut all = Vec::new();
        for c in 1..=self.c {
            for e in 1..=self.e {
                for w in 1..=self.w {
                    all.push(Scope::new(c, e, w));
                }
            }
        }
        all.sort_by_key(|s| (s.c + s.e + s.w, s.c, s.e, s.w));
        all
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={},e={},w={}", self.c, self.e, self.w)
    }
}

/// Parses `c=i,e=j,w=k`. Components may be given in any order; missing
/// components default to 1.
impl FromStr for Scope {
    type Err = ScopeParseError;

    fn from_str(s: &str) -> Result<Scope, ScopeParseError> {
        let mut scope = Scope::new(1, 1, 1);
        let mut seen = [false; 3];
        for part in s.split(',') {
            let part = part.trim();
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| ScopeParseError(format!("expected `key=value`, found `{part}`")))?;
            let n: u32 = value
                .trim()
                .parse()
                .map_err(|_| ScopeParseError(format!("`{}` is not a number", value.trim())))?;
            if n == 0 {
                return Err(ScopeParseError(format!(
                    "cardinality of `{}` must be positive",
                    key.trim()
                )));
            }
            let slot = match key.trim() {
                "c" => 0,
                "e" => 1,
                "w" => 2,
                other => return Err(ScopeParseError(format!("unknown scope key `{other}`"))),
            };
            if seen[slot] {
                return Err(ScopeParseError(format!("scope key `{}` repeated", key.trim())));
            }
            seen[slot] = true;
            match slot {
                0 => scope.c = n,
                1 => scope.e = n,
                _ => scope.w = n,
            }
        }
        Ok(scope)
    }
}
