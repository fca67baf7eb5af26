use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }

    /// DIMACS form: `var + 1`, negated when the literal is negative.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// A 3-CNF formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    variables: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(variables: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for (i, clause) in clauses.iter().enumerate() {
            if let Some(l) = clause.iter().find(|l| l.var >= variables) {
                return Err(Error::InvalidInput(format!(
                    "clause {i} uses variable {} of {variables}",
                    l.var + 1
                )));
            }
        }
        Ok(CnfFormula { variables, clauses })
    }

    pub fn variable_count(&self) -> usize {
        self.variables
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.variables && self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variables, self.clauses.len());
        for c in &self.clauses {
            let _ = writeln!(out, "{} {} {} 0", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs());
        }
        out
    }
}

/// Reads DIMACS CNF. Comment lines (`c`) are skipped and a `%` line ends
/// the clause list. Every clause must have exactly three literals.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        let bad = |msg: String| Error::InvalidInput(format!("line {}: {msg}", lineno + 1));
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(bad(format!("bad header `{line}`")));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad number `{s}`")));
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        }
        let (variables, _) = header.ok_or_else(|| bad("clause before `p cnf` header".into()))?;
        for token in line.split_whitespace() {
            let v: i64 = token.parse().map_err(|_| bad(format!("bad literal `{token}`")))?;
            if v == 0 {
                if current.len() != 3 {
                    return Err(bad(format!("clause with {} literals, expected 3", current.len())));
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
                continue;
            }
            let var = v.unsigned_abs() as usize - 1;
            if var >= variables {
                return Err(bad(format!("variable {} exceeds header count {variables}", var + 1)));
            }
            current.push(Literal { var, positive: v > 0 });
        }
    }
    let (variables, count) = header.ok_or_else(|| Error::InvalidInput("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(Error::InvalidInput("last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(Error::InvalidInput(format!(
            "header announces {count} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(variables, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 5 2\n1 -3 5 0\n-1 2\n4 0\n%\n0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f.variable_count(), 5);
        assert_eq!(f.clauses()[0], [Literal::pos(0), Literal::neg(2), Literal::pos(4)]);
        assert_eq!(f.clauses()[1], [Literal::neg(0), Literal::pos(1), Literal::pos(3)]);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("p cnf 2 1\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2 -1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2 3 0\n").is_err());
        assert!(parse_dimacs("1 2 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 3 2\n1 2 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 3 1\n1 2 3\n").is_err());
    }

    #[test]
    fn satisfaction() {
        let f = CnfFormula::new(2, vec![[Literal::pos(0), Literal::pos(0), Literal::neg(1)]]).unwrap();
        assert!(f.is_satisfied_by(&[true, true]));
        assert!(f.is_satisfied_by(&[false, false]));
        assert!(!f.is_satisfied_by(&[false, true]));
        assert!(CnfFormula::new(1, vec![[Literal::pos(1); 3]]).is_err());
    }
}
