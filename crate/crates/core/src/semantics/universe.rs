use crate::scope::Scope;
use crate::semantics::SemanticsError;
use crate::surface::Sort;

/// Largest universe the evaluator will index.
pub const MAX_UNIVERSE: u64 = 1 << 62;

/// Number of values of sort `s`. Function sorts are all set-theoretic
/// functions, so `|A => B| = |B|^|A|`.
pub fn universe_size(s: &Sort, scope: Scope) -> Result<u64, SemanticsError> {
    let unsupported = || SemanticsError::UnsupportedSort { sort: s.clone() };
    Ok(match s {
        Sort::W => scope.w as u64,
        Sort::C => scope.c as u64,
        Sort::E => scope.e as u64,
        Sort::Bool => 2,
        Sort::Fun(d, c) => {
            let base = universe_size(c, scope).map_err(|_| unsupported())?;
            let exp = universe_size(d, scope).map_err(|_| unsupported())?;
            let exp = u32::try_from(exp).map_err(|_| unsupported())?;
            match base.checked_pow(exp) {
                Some(n) if n <= MAX_UNIVERSE => n,
                _ => return Err(unsupported()),
            }
        }
    })
}

/// The values of `s` in their canonical order. Values are represented by
/// their index; for function sorts the index is the mixed-radix number whose
/// digit at position `a` is the index of the image of `a`. For `m` this
/// makes the index a bit mask with bit `c * w_count + w` set iff the
/// character holds at context `c` and world `w`.
pub fn value_universe(s: &Sort, scope: Scope) -> Result<Vec<u64>, SemanticsError> {
    let n = universe_size(s, scope)?;
    if n > 1 << 24 {
        return Err(SemanticsError::UnsupportedSort { sort: s.clone() });
    }
    Ok((0..n).collect())
}

/// Image of `arg` under the function with index `f` of sort `fsort`.
pub fn apply_index(fsort: &Sort, f: u64, arg: u64, scope: Scope) -> u64 {
    let cod = universe_size(fsort.codomain().expect("function sort"), scope).expect("enumerable sort");
    (f / cod.pow(arg as u32)) % cod
}

/// Index of the function whose images are `images` (indexed by argument).
pub fn encode_function(images: &[u64], cod_size: u64) -> u64 {
    images.iter().rev().fold(0, |acc, &v| acc * cod_size + v)
}

/// Human-readable rendering of a value.
pub fn describe(s: &Sort, idx: u64, scope: Scope) -> String {
    match s {
        Sort::W => format!("w{}", idx + 1),
        Sort::C => format!("c{}", idx + 1),
        Sort::E => format!("e{}", idx + 1),
        Sort::Bool => if idx == 1 { "T" } else { "F" }.to_string(),
        _ if s.is_m() => {
            let pts: Vec<String> = (0..scope.c)
                .flat_map(|c| (0..scope.w).map(move |w| (c, w)))
                .filter(|(c, w)| idx >> (c * scope.w + w) & 1 == 1)
                .map(|(c, w)| format!("c{}w{}", c + 1, w + 1))
                .collect();
            format!("{{{}}}", pts.join(","))
        }
        _ if s.is_wo() => {
            let ws: Vec<String> = (0..scope.w)
                .filter(|w| idx >> w & 1 == 1)
                .map(|w| format!("w{}", w + 1))
                .collect();
            format!("{{{}}}", ws.join(","))
        }
        Sort::Fun(d, c) => {
            let n = universe_size(d, scope).unwrap_or(0);
            let parts: Vec<String> = (0..n)
                .map(|a| {
                    format!(
                        "{} -> {}",
                        describe(d, a, scope),
                        describe(c, apply_index(s, idx, a, scope), scope)
                    )
                })
                .collect();
            format!("[{}]", parts.join(", "))
        }
    }
}

/// Subset of worlds rendered as `{w1,w2}`.
pub fn describe_worlds(mask: u64, scope: Scope) -> String {
    describe(&Sort::wo(), mask, scope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_sizes() {
        let s = Scope::new(1, 1, 2);
        assert_eq!(value_universe(&Sort::m(), s).unwrap().len(), 4);
        assert_eq!(value_universe(&Sort::E, Scope::new(1, 3, 1)).unwrap().len(), 3);
        assert_eq!(value_universe(&Sort::p(), Scope::new(1, 2, 2)).unwrap().len(), 16);
        assert_eq!(universe_size(&Sort::m(), Scope::new(2, 2, 2)).unwrap(), 16);
        assert_eq!(universe_size(&Sort::p(), Scope::new(2, 2, 2)).unwrap(), 256);
        let huge = Sort::fun(Sort::p(), Sort::m());
        assert!(universe_size(&huge, Scope::new(2, 2, 3)).is_err());
    }

    #[test]
    fn characters_are_point_masks() {
        let s = Scope::new(2, 1, 2);
        // bit (c=1, w=0) is bit 2
        let m = 0b0100;
        let content_c1 = apply_index(&Sort::m(), m, 1, s);
        assert_eq!(content_c1, 0b01);
        assert_eq!(apply_index(&Sort::wo(), content_c1, 0, s), 1);
        assert_eq!(describe(&Sort::m(), m, s), "{c2w1}");
    }

    #[test]
    fn encode_inverts_apply() {
        let s = Scope::new(1, 3, 2);
        let f = encode_function(&[3, 0, 2], 4);
        for (a, v) in [3, 0, 2].into_iter().enumerate() {
            assert_eq!(apply_index(&Sort::p(), f, a as u64, s), v);
        }
        assert_eq!(describe(&Sort::p(), f, s), "[e1 -> {c1w1,c1w2}, e2 -> {}, e3 -> {c1w2}]");
    }
}
