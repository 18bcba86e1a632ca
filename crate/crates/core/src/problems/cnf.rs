//! CNF formulas and the DIMACS text format.
//!
//! Emitted DIMACS is canonical: comment lines first (`c <text>`), then
//! `p cnf <vars> <clauses>`, then one clause per line with literals separated
//! by single spaces and terminated by ` 0`. Parsing accepts any whitespace
//! layout, clauses spanning lines, and comments anywhere; comments are kept
//! in a side channel and never affect semantics.

use std::fmt::Write as _;

use thiserror::Error;

pub type Literal = i32;
pub type Clause = Vec<Literal>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("literal {literal} out of range for {vars} variables")]
    LiteralOutOfRange { literal: Literal, vars: u32 },
    #[error("empty clause at index {0}")]
    EmptyClause(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    variable_count: u32,
    clauses: Vec<Clause>,
    /// The first `tag_len` clauses are unit clauses on variables `1..=tag_len`.
    tag_len: usize,
    comments: Vec<String>,
}

impl CnfFormula {
    pub fn new(variable_count: u32, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(CnfError::EmptyClause(i));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() > variable_count {
                    return Err(CnfError::LiteralOutOfRange {
                        literal: l,
                        vars: variable_count,
                    });
                }
            }
        }
        Ok(Self {
            variable_count,
            clauses,
            tag_len: 0,
            comments: Vec::new(),
        })
    }

    pub(crate) fn with_tag_len(mut self, tag_len: usize) -> Self {
        debug_assert!(self.clauses[..tag_len]
            .iter()
            .enumerate()
            .all(|(i, c)| c.len() == 1 && c[0].unsigned_abs() as usize == i + 1));
        self.tag_len = tag_len;
        self
    }

    pub fn with_comments(mut self, comments: Vec<String>) -> Self {
        self.comments = comments;
        self
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn tag_len(&self) -> usize {
        self.tag_len
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    /// Same clauses and variables, ignoring comments and tag annotation.
    pub fn same_clauses(&self, other: &CnfFormula) -> bool {
        self.variable_count == other.variable_count && self.clauses == other.clauses
    }

    /// Truth value under a full assignment; `assignment[v - 1]` is variable `v`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

/// Exhaustive satisfiability check. Exponential; for small oracles only.
pub fn brute_force_sat(f: &CnfFormula) -> bool {
    let n = f.variable_count() as usize;
    assert!(n <= 26, "brute force over {n} variables");
    let mut assignment = vec![false; n];
    (0..(1u64 << n)).any(|mask| {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = (mask >> i) & 1 == 1;
        }
        f.evaluate(&assignment)
    })
}

pub fn emit_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    for c in &f.comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", f.variable_count, f.clauses.len());
    for clause in &f.clauses {
        for l in clause {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let err = |line: usize, msg: &str| CnfError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut comments = Vec::new();
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Clause = Vec::new();
    let mut clause_line = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            comments.push(trimmed[1..].trim_start().to_string());
            continue;
        }
        if trimmed.starts_with('%') {
            // SATLIB trailer
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(line, "duplicate header"));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(err(
                    line,
                    "malformed header, expected \"p cnf <vars> <clauses>\"",
                ));
            }
            let vars = parts[2]
                .parse::<u32>()
                .map_err(|_| err(line, "malformed variable count"))?;
            let count = parts[3]
                .parse::<usize>()
                .map_err(|_| err(line, "malformed clause count"))?;
            if vars > i32::MAX as u32 {
                return Err(err(line, "variable count too large"));
            }
            header = Some((vars, count));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| err(line, "clause before header"))?;
        for tok in trimmed.split_whitespace() {
            let lit = tok
                .parse::<i32>()
                .map_err(|_| err(line, &format!("bad literal {tok:?}")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(err(line, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() > vars {
                return Err(err(
                    line,
                    &format!("literal {lit} exceeds variable count {vars}"),
                ));
            }
            if current.is_empty() {
                clause_line = line;
            }
            current.push(lit);
        }
    }
    let (vars, count) = header.ok_or_else(|| err(last_line.max(1), "missing header"))?;
    if !current.is_empty() {
        return Err(err(clause_line, "unterminated clause"));
    }
    if clauses.len() != count {
        return Err(err(
            last_line.max(1),
            &format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(CnfFormula::new(vars, clauses)?.with_comments(comments))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal() {
        let f = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.variable_count(), 1);
        assert_eq!(f.clauses(), &[vec![1]]);
    }

    #[test]
    fn literal_out_of_range_is_reported_with_line() {
        let e = parse_dimacs("p cnf 1 1\n2 0\n").unwrap_err();
        assert!(matches!(e, CnfError::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_dimacs("p dnf 1 1\n1 0\n"),
            Err(CnfError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(CnfError::Parse { line: 2, .. })
        ));
        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n0\n").is_err());
    }

    #[test]
    fn comments_are_side_channel() {
        let f = parse_dimacs("c hello\np cnf 2 2\n1 -2\nc mid\n 0 2 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, -2], vec![2]]);
        assert_eq!(f.comments(), &["hello".to_string(), "mid".to_string()]);
        let g = parse_dimacs("p cnf 2 2\n1 -2 0\n2 0\n").unwrap();
        assert!(f.same_clauses(&g));
        assert_eq!(emit_dimacs(&g), "p cnf 2 2\n1 -2 0\n2 0\n");
    }

    #[test]
    fn constructor_rejects_empty_clause() {
        assert_eq!(
            CnfFormula::new(1, vec![vec![]]),
            Err(CnfError::EmptyClause(0))
        );
    }

    #[test]
    fn brute_force_small() {
        assert!(brute_force_sat(&CnfFormula::new(0, vec![]).unwrap()));
        assert!(!brute_force_sat(
            &CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap()
        ));
    }
}
