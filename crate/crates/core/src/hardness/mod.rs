//! 3-SAT gap instances with `gamma = 1`.
//!
//! A satisfiable formula yields an instance of optimum 1, an unsatisfiable
//! one an instance of optimum at least 2, so no algorithm does better than
//! a factor 2 on unrelated machines unless P = NP. A small DPLL solver
//! checks the gap on generated formulas.

mod cnf;
mod encode;
mod sat;

pub use cnf::{parse_dimacs, CnfFormula, Literal};
pub use encode::{decode, encode, schedule_from_assignment, ReductionInstance};
pub use sat::sat_decide;
