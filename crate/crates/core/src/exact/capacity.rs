//! Typed machines with capacities: decide whether all jobs fit.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::search::{Grid, PackingProblem, Weight};
use crate::value::{Rational, Value};

/// A group of interchangeable machines sharing capacity and processing times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineType {
    pub count: usize,
    pub capacity: Rational,
    /// Time of each job on a machine of this type.
    pub times: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacitatedTypedInstance {
    job_count: usize,
    types: Vec<MachineType>,
}

impl CapacitatedTypedInstance {
    pub fn new(job_count: usize, types: Vec<MachineType>) -> Result<Self> {
        for (k, t) in types.iter().enumerate() {
            if !t.capacity.is_positive() {
                return Err(Error::InvalidInput(format!("type {k} has non-positive capacity")));
            }
            if t.times.len() != job_count {
                return Err(Error::InvalidInput(format!(
                    "type {k} lists {} times for {job_count} jobs",
                    t.times.len()
                )));
            }
        }
        Ok(CapacitatedTypedInstance { job_count, types })
    }

    pub fn job_count(&self) -> usize {
        self.job_count
    }

    pub fn types(&self) -> &[MachineType] {
        &self.types
    }

    pub fn machine_count(&self) -> usize {
        self.types.iter().map(|t| t.count).sum()
    }

    /// Type of every machine, machines numbered type by type.
    pub fn machine_types(&self) -> Vec<usize> {
        self.types
            .iter()
            .enumerate()
            .flat_map(|(k, t)| std::iter::repeat_n(k, t.count))
            .collect()
    }

    /// First machine index of each type.
    pub fn type_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.types
            .iter()
            .map(|t| {
                let start = acc;
                acc += t.count;
                start
            })
            .collect()
    }

    pub fn capacity_of(&self, machine: usize) -> &Rational {
        &self.types[self.machine_types()[machine]].capacity
    }

    /// Load of every machine under `schedule`.
    pub fn loads(&self, schedule: &TypedSchedule) -> Vec<Value> {
        let types = self.machine_types();
        let mut loads = vec![Value::zero(); types.len()];
        for (j, &i) in schedule.assignment.iter().enumerate() {
            loads[i] += &self.types[types[i]].times[j];
        }
        loads
    }

    /// `true` when every machine load is at most `(1 + slack) * capacity`.
    pub fn within(&self, schedule: &TypedSchedule, slack: &Rational) -> bool {
        let types = self.machine_types();
        if schedule.assignment.len() != self.job_count || schedule.assignment.iter().any(|&i| i >= types.len()) {
            return false;
        }
        let factor = Rational::one() + slack;
        self.loads(schedule)
            .iter()
            .zip(&types)
            .all(|(load, &k)| *load <= Value::Finite(&self.types[k].capacity * &factor))
    }
}

/// Assignment of jobs to the machines of a [`CapacitatedTypedInstance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedSchedule {
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionOutcome {
    Accept(TypedSchedule),
    /// No assignment keeps every load within capacity.
    RejectCertified,
}

impl DecisionOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, DecisionOutcome::Accept(_))
    }
}

fn packing<W: Weight>(cti: &CapacitatedTypedInstance, conv: impl Fn(&Rational) -> W) -> PackingProblem<W> {
    let types = cti.machine_types();
    PackingProblem {
        capacity: types.iter().map(|&k| conv(&cti.types[k].capacity)).collect(),
        times: types
            .iter()
            .map(|&k| cti.types[k].times.iter().map(|v| v.as_finite().map(&conv)).collect())
            .collect(),
        class: types,
    }
}

/// Exact decision: accepts with a schedule whose loads stay within the
/// capacities (so within `(1 + slack)` times them for any `slack >= 0`), or
/// rejects when no such schedule exists.
pub fn capacity_decision_exact(cti: &CapacitatedTypedInstance, slack: &Rational) -> DecisionOutcome {
    debug_assert!(!slack.is_negative());
    if cti.job_count == 0 {
        return DecisionOutcome::Accept(TypedSchedule { assignment: Vec::new() });
    }
    if cti.machine_count() == 0 {
        return DecisionOutcome::RejectCertified;
    }
    let capacities: Vec<&Rational> = cti.types.iter().map(|t| &t.capacity).collect();
    let grid = Grid::new(
        cti.types.iter().flat_map(|t| std::iter::repeat_n(&t.times, t.count)).flatten(),
        &capacities,
    );
    let found = if grid.fits_i128() {
        packing(cti, |r| grid.small(r)).solve()
    } else {
        packing::<BigInt>(cti, |r| grid.big(r)).solve()
    };
    match found {
        Some(assignment) => {
            let schedule = TypedSchedule { assignment };
            debug_assert!(cti.within(&schedule, &Rational::from_integer(0.into())));
            DecisionOutcome::Accept(schedule)
        }
        None => DecisionOutcome::RejectCertified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{int, ratio};

    fn one_type(count: usize, capacity: Rational, times: Vec<Value>) -> CapacitatedTypedInstance {
        let n = times.len();
        CapacitatedTypedInstance::new(
            n,
            vec![MachineType {
                count,
                capacity,
                times,
            }],
        )
        .unwrap()
    }

    #[test]
    fn decision_examples() {
        let cti = one_type(2, int(1), vec![Value::int(1), Value::int(1)]);
        match capacity_decision_exact(&cti, &int(0)) {
            DecisionOutcome::Accept(s) => assert_ne!(s.assignment[0], s.assignment[1]),
            other => panic!("expected accept, got {other:?}"),
        }
        let cti = one_type(1, int(1), vec![Value::ratio(3, 5), Value::ratio(3, 5)]);
        assert_eq!(capacity_decision_exact(&cti, &int(0)), DecisionOutcome::RejectCertified);
        let cti = CapacitatedTypedInstance::new(
            1,
            vec![
                MachineType {
                    count: 2,
                    capacity: int(5),
                    times: vec![Value::Forbidden],
                },
                MachineType {
                    count: 1,
                    capacity: int(5),
                    times: vec![Value::Forbidden],
                },
            ],
        )
        .unwrap();
        assert_eq!(capacity_decision_exact(&cti, &int(0)), DecisionOutcome::RejectCertified);
    }

    #[test]
    fn capacity_above_one_and_types() {
        // type 0 is slow for job 0, type 1 cannot take job 1
        let cti = CapacitatedTypedInstance::new(
            2,
            vec![
                MachineType {
                    count: 1,
                    capacity: ratio(6, 5),
                    times: vec![Value::int(2), Value::int(1)],
                },
                MachineType {
                    count: 1,
                    capacity: ratio(1, 2),
                    times: vec![Value::ratio(1, 2), Value::Forbidden],
                },
            ],
        )
        .unwrap();
        match capacity_decision_exact(&cti, &int(0)) {
            DecisionOutcome::Accept(s) => {
                assert_eq!(s.assignment, vec![1, 0]);
                assert!(cti.within(&s, &int(0)));
            }
            other => panic!("expected accept, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_types() {
        assert!(CapacitatedTypedInstance::new(
            1,
            vec![MachineType {
                count: 1,
                capacity: int(0),
                times: vec![Value::int(1)],
            }]
        )
        .is_err());
    }
}
