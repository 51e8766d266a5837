use std::fmt;

/// Sorts of the object language. `wo`, `m` and `p` are not separate
/// constructors: they are the function sorts built by [`Sort::wo`],
/// [`Sort::m`] and [`Sort::p`], so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sort {
    W,
    C,
    E,
    Bool,
    Fun(Box<Sort>, Box<Sort>),
}

impl Sort {
    pub fn fun(domain: Sort, codomain: Sort) -> Sort {
        Sort::Fun(Box::new(domain), Box::new(codomain))
    }

    /// Contents: `w => bool`.
    pub fn wo() -> Sort {
        Sort::fun(Sort::W, Sort::Bool)
    }

    /// Characters (sentence meanings): `c => wo`.
    pub fn m() -> Sort {
        Sort::fun(Sort::C, Sort::wo())
    }

    /// Properties: `e => m`.
    pub fn p() -> Sort {
        Sort::fun(Sort::E, Sort::m())
    }

    pub fn is_m(&self) -> bool {
        *self == Sort::m()
    }

    pub fn is_wo(&self) -> bool {
        *self == Sort::wo()
    }

    pub fn domain(&self) -> Option<&Sort> {
        match self {
            Sort::Fun(d, _) => Some(d),
            _ => None,
        }
    }

    pub fn codomain(&self) -> Option<&Sort> {
        match self {
            Sort::Fun(_, c) => Some(c),
            _ => None,
        }
    }

    /// Splits a constant's sort into the argument sorts its table is indexed
    /// by and the sort stored in each cell. Peeling stops at base sorts and
    /// at `m` / `wo`, whose values are stored as bit masks.
    pub fn table_shape(&self) -> (Vec<Sort>, Sort) {
        let mut args = Vec::new();
        let mut s = self;
        while let Sort::Fun(d, c) = s {
            if s.is_m() || s.is_wo() {
                break;
            }
            args.push((**d).clone());
            s = c;
        }
        (args, s.clone())
    }

    /// Builtin alias name of this sort, if it has one.
    pub fn alias(&self) -> Option<&'static str> {
        if self.is_m() {
            Some("m")
        } else if *self == Sort::p() {
            Some("p")
        } else if self.is_wo() {
            Some("wo")
        } else {
            None
        }
    }

    pub fn from_name(name: &str) -> Option<Sort> {
        Some(match name {
            "w" => Sort::W,
            "c" => Sort::C,
            "e" => Sort::E,
            "bool" => Sort::Bool,
            "wo" => Sort::wo(),
            "m" => Sort::m(),
            "p" => Sort::p(),
            _ => return None,
        })
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.alias() {
            return f.write_str(a);
        }
        match self {
            Sort::W => f.write_str("w"),
            Sort::C => f.write_str("c"),
            Sort::E => f.write_str("e"),
            Sort::Bool => f.write_str("bool"),
            Sort::Fun(d, c) => {
                if d.alias().is_none() && matches!(**d, Sort::Fun(..)) {
                    write!(f, "({d}) => {c}")
                } else {
                    write!(f, "{d} => {c}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_expand_structurally() {
        assert_eq!(Sort::m(), Sort::fun(Sort::C, Sort::fun(Sort::W, Sort::Bool)));
        assert_eq!(Sort::p(), Sort::fun(Sort::E, Sort::m()));
        assert_eq!(Sort::from_name("p"), Some(Sort::p()));
        assert_eq!(Sort::from_name("q"), None);
    }

    #[test]
    fn display_folds_aliases() {
        let good = Sort::fun(Sort::E, Sort::fun(Sort::m(), Sort::m()));
        assert_eq!(good.to_string(), "e => m => m");
        let nfp = Sort::fun(Sort::E, Sort::fun(Sort::p(), Sort::fun(Sort::m(), Sort::m())));
        assert_eq!(nfp.to_string(), "e => p => m => m");
        let higher = Sort::fun(Sort::fun(Sort::E, Sort::E), Sort::Bool);
        assert_eq!(higher.to_string(), "(e => e) => bool");
    }

    #[test]
    fn table_shapes() {
        let nfp = Sort::fun(Sort::E, Sort::fun(Sort::p(), Sort::fun(Sort::m(), Sort::m())));
        assert_eq!(nfp.table_shape(), (vec![Sort::E, Sort::p(), Sort::m()], Sort::m()));
        assert_eq!(Sort::p().table_shape(), (vec![Sort::E], Sort::m()));
        assert_eq!(Sort::m().table_shape(), (vec![], Sort::m()));
        assert_eq!(
            Sort::fun(Sort::C, Sort::E).table_shape(),
            (vec![Sort::C], Sort::E)
        );
    }
}
