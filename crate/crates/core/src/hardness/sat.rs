use crate::error::{Error, Result};
use crate::exact::Limits;
use crate::hardness::cnf::{CnfFormula, Literal};

/// DPLL with unit propagation. Returns a satisfying assignment, or `None`
/// when the formula is unsatisfiable.
pub fn sat_decide(formula: &CnfFormula, limits: &Limits) -> Result<Option<Vec<bool>>> {
    if formula.variable_count() > limits.max_sat_variables {
        return Err(Error::SizeLimit(format!(
            "{} variables exceed the SAT limit of {}",
            formula.variable_count(),
            limits.max_sat_variables
        )));
    }
    let clauses: Vec<Vec<Literal>> = formula.clauses().iter().map(|c| c.to_vec()).collect();
    let mut values: Vec<Option<bool>> = vec![None; formula.variable_count()];
    if dpll(&clauses, &mut values) {
        let assignment: Vec<bool> = values.into_iter().map(|v| v.unwrap_or(false)).collect();
        debug_assert!(formula.is_satisfied_by(&assignment));
        Ok(Some(assignment))
    } else {
        Ok(None)
    }
}

enum ClauseState {
    Satisfied,
    Unit(Literal),
    Open,
    Conflict,
}

fn state(clause: &[Literal], values: &[Option<bool>]) -> ClauseState {
    let mut free = None;
    let mut free_count = 0;
    for l in clause {
        match values[l.var] {
            Some(v) if v == l.positive => return ClauseState::Satisfied,
            Some(_) => {}
            None => {
                if free != Some(*l) {
                    free_count += 1;
                }
                free = Some(*l);
            }
        }
    }
    match (free, free_count) {
        (None, _) => ClauseState::Conflict,
        (Some(l), 1) => ClauseState::Unit(l),
        _ => ClauseState::Open,
    }
}

fn dpll(clauses: &[Vec<Literal>], values: &mut Vec<Option<bool>>) -> bool {
    let saved = values.clone();
    // unit propagation to a fixed point
    loop {
        let mut changed = false;
        let mut branch = None;
        for clause in clauses {
            match state(clause, values) {
                ClauseState::Conflict => {
                    *values = saved;
                    return false;
                }
                ClauseState::Unit(l) => {
                    values[l.var] = Some(l.positive);
                    changed = true;
                }
                ClauseState::Open => {
                    if branch.is_none() {
                        branch = clause.iter().find(|l| values[l.var].is_none()).map(|l| l.var);
                    }
                }
                ClauseState::Satisfied => {}
            }
        }
        if changed {
            continue;
        }
        let Some(var) = branch else {
            return true;
        };
        for choice in [true, false] {
            values[var] = Some(choice);
            if dpll(clauses, values) {
                return true;
            }
            values[var] = None;
        }
        *values = saved;
        return false;
    }
}
