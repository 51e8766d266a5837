//! DIMACS CNF reading and writing.

use std::io::{self, Write};

use thiserror::Error;

use crate::cnf::Cnf;
use crate::lit::Lit;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: missing or malformed `p cnf` header")]
    BadHeader { line: usize },
    #[error("line {line}: invalid literal `{token}`")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {vars}")]
    VarOutOfRange { line: usize, lit: i64, vars: u32 },
    #[error("declared {declared} clauses but found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("clause not terminated by 0 at end of input")]
    Unterminated,
}

/// Writes `cnf` in DIMACS format. Each comment line is emitted verbatim
/// after a `c ` prefix, before the header.
pub fn write_dimacs<W: Write>(cnf: &Cnf, comments: &[String], out: &mut W) -> io::Result<()> {
    for c in comments {
        writeln!(out, "c {c}")?;
    }
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.len())?;
    for clause in cnf.clauses() {
        for l in clause {
            write!(out, "{} ", l.to_dimacs())?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

pub fn to_dimacs_string(cnf: &Cnf, comments: &[String]) -> String {
    let mut buf = Vec::new();
    write_dimacs(cnf, comments, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut cnf = Cnf::new();
    let mut current: Vec<Lit> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(DimacsError::BadHeader { line: line_no });
            }
            let vars = parts[2]
                .parse()
                .map_err(|_| DimacsError::BadHeader { line: line_no })?;
            let clauses = parts[3]
                .parse()
                .map_err(|_| DimacsError::BadHeader { line: line_no })?;
            header = Some((vars, clauses));
            cnf = Cnf::with_vars(vars);
            continue;
        }
        let (vars, _) = header.ok_or(DimacsError::BadHeader { line: line_no })?;
        for tok in line.split_whitespace() {
            let value: i64 = tok.parse().map_err(|_| DimacsError::BadLiteral {
                line: line_no,
                token: tok.to_string(),
            })?;
            match Lit::from_dimacs(value) {
                None => cnf.add_clause(std::mem::take(&mut current)),
                Some(l) => {
                    if l.var().0 >= vars {
                        return Err(DimacsError::VarOutOfRange {
                            line: line_no,
                            lit: value,
                            vars,
                        });
                    }
                    current.push(l);
                }
            }
        }
    }
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    let (_, declared) = header.ok_or(DimacsError::BadHeader { line: 0 })?;
    if declared != cnf.len() {
        return Err(DimacsError::ClauseCount {
            declared,
            found: cnf.len(),
        });
    }
    Ok(cnf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::Var;

    #[test]
    fn parses_header_comments_and_multiline_clauses() {
        let text = "c hello\np cnf 3 2\n1 -2\n 0 3 0\n";
        let cnf = parse_dimacs(text).unwrap();
        assert_eq!(cnf.num_vars(), 3);
        assert_eq!(
            cnf.clauses(),
            &[
                vec![Var(0).positive(), Var(1).negative()],
                vec![Var(2).positive()]
            ]
        );
    }

    #[test]
    fn rejects_out_of_range_and_count_mismatch() {
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(DimacsError::VarOutOfRange { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 2\n1 0\n"),
            Err(DimacsError::ClauseCount { .. })
        ));
        assert!(matches!(
            parse_dimacs("1 0\n"),
            Err(DimacsError::BadHeader { .. })
        ));
    }

    #[test]
    fn writer_emits_comments_before_header() {
        let mut cnf = Cnf::with_vars(2);
        cnf.add_clause([Var(0).positive(), Var(1).negative()]);
        let s = to_dimacs_string(&cnf, &["1 av[w1][w1]".to_string()]);
        assert_eq!(s, "c 1 av[w1][w1]\np cnf 2 1\n1 -2 0\n");
    }
}
