use crate::error::{Error, Result};
use crate::hardness::cnf::{CnfFormula, Literal};
use crate::model::{Instance, Schedule};
use crate::objective::worst_case_makespan;
use crate::value::Value;

/// A robust unrelated-machines instance built from a 3-CNF formula.
///
/// Variable `x` owns machines `2x` (its false side) and `2x + 1` (its true
/// side); jobs `0..n0` are variable jobs, followed by one job per clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInstance {
    pub formula: CnfFormula,
    pub instance: Instance,
}

impl ReductionInstance {
    pub fn false_machine(var: usize) -> usize {
        2 * var
    }

    pub fn true_machine(var: usize) -> usize {
        2 * var + 1
    }

    /// Machine on which a clause job may use this literal.
    pub fn literal_machine(lit: Literal) -> usize {
        if lit.positive {
            Self::true_machine(lit.var)
        } else {
            Self::false_machine(lit.var)
        }
    }

    /// One-based label such as `3_f` or `5_t`.
    pub fn label(machine: usize) -> String {
        format!("{}_{}", machine / 2 + 1, if machine % 2 == 1 { 't' } else { 'f' })
    }

    pub fn clause_machines(&self, clause: usize) -> Vec<usize> {
        let mut ms: Vec<usize> = self.formula.clauses()[clause]
            .iter()
            .map(|&l| Self::literal_machine(l))
            .collect();
        ms.sort_unstable();
        ms.dedup();
        ms
    }

    pub fn clause_job(&self, clause: usize) -> usize {
        self.formula.variable_count() + clause
    }
}

/// Builds the instance: variable jobs have nominal time 1 on their two
/// machines, clause jobs have deviation 1 on their literal machines, every
/// other entry is forbidden, and `gamma = 1`.
pub fn encode(formula: &CnfFormula) -> Result<ReductionInstance> {
    let n0 = formula.variable_count();
    if n0 == 0 {
        return Err(Error::InvalidInput("formula needs at least one variable".into()));
    }
    let m = 2 * n0;
    let n = n0 + formula.clauses().len();
    let mut p_bar = vec![vec![Value::Forbidden; n]; m];
    let mut p_hat = vec![vec![Value::Forbidden; n]; m];
    for x in 0..n0 {
        for i in [ReductionInstance::false_machine(x), ReductionInstance::true_machine(x)] {
            p_bar[i][x] = Value::int(1);
            p_hat[i][x] = Value::zero();
        }
    }
    for (c, clause) in formula.clauses().iter().enumerate() {
        for &lit in clause {
            let i = ReductionInstance::literal_machine(lit);
            p_bar[i][n0 + c] = Value::zero();
            p_hat[i][n0 + c] = Value::int(1);
        }
    }
    Ok(ReductionInstance {
        formula: formula.clone(),
        instance: Instance::unrelated(p_bar, p_hat, 1)?,
    })
}

/// Reads the truth assignment off a schedule of cost at most 1: `x` is true
/// when its variable job sits on the false-side machine (leaving the
/// true-side machine free for clause jobs).
pub fn decode(reduction: &ReductionInstance, schedule: &Schedule) -> Result<Vec<bool>> {
    let cost = worst_case_makespan(&reduction.instance, schedule)?;
    if cost > Value::int(1) {
        return Err(Error::InvalidInput(format!("decoding needs cost at most 1, got {cost}")));
    }
    let assignment: Vec<bool> = (0..reduction.formula.variable_count())
        .map(|x| schedule.machine_of(x) == ReductionInstance::false_machine(x))
        .collect();
    if !reduction.formula.is_satisfied_by(&assignment) {
        return Err(Error::ContractViolation("decoded assignment does not satisfy the formula".into()));
    }
    Ok(assignment)
}

/// Schedule induced by an assignment: each clause job goes to the machine
/// of its first true literal, or of its first literal if none is true.
pub fn schedule_from_assignment(reduction: &ReductionInstance, assignment: &[bool]) -> Result<Schedule> {
    let n0 = reduction.formula.variable_count();
    if assignment.len() != n0 {
        return Err(Error::InvalidInput(format!("assignment has {} values for {n0} variables", assignment.len())));
    }
    let mut machines: Vec<usize> = (0..n0)
        .map(|x| {
            if assignment[x] {
                ReductionInstance::false_machine(x)
            } else {
                ReductionInstance::true_machine(x)
            }
        })
        .collect();
    for clause in reduction.formula.clauses() {
        let lit = clause.iter().find(|l| l.holds(assignment)).unwrap_or(&clause[0]);
        machines.push(ReductionInstance::literal_machine(*lit));
    }
    Ok(Schedule::new(machines))
}
