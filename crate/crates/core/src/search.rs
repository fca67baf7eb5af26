//! Integer depth-first search engines shared by the exact solvers.
//!
//! Callers scale all rationals of one problem by their common denominator,
//! so the searches only ever compare and add integers. `i128` is used when
//! every partial sum is guaranteed to fit, `BigInt` otherwise.

use std::fmt::Debug;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::value::{common_denominator, Rational, Value};

pub(crate) trait Weight: Clone + Ord + Debug + Zero + Add<Output = Self> + Sub<Output = Self> {
    fn times(&self, k: usize) -> Self;
}

impl Weight for i128 {
    fn times(&self, k: usize) -> Self {
        self * k as i128
    }
}

impl Weight for BigInt {
    fn times(&self, k: usize) -> Self {
        self * BigInt::from(k)
    }
}

/// Values of one problem scaled onto a common integer grid.
pub(crate) struct Grid {
    pub denominator: BigInt,
    fits_i128: bool,
}

impl Grid {
    /// `extra` holds values that never enter a sum with the matrices but must
    /// still be representable (thresholds, capacities).
    pub fn new<'a>(values: impl Iterator<Item = &'a Value> + Clone, extra: &[&'a Rational]) -> Grid {
        let finite = values.clone().filter_map(Value::as_finite);
        let denominator = common_denominator(finite.chain(extra.iter().copied()));
        let mut total = BigInt::zero();
        for v in values.filter_map(Value::as_finite).chain(extra.iter().copied()) {
            total += (v * Rational::from_integer(denominator.clone())).to_integer();
        }
        // Loads and bounds are at most the grand total times a machine count;
        // leave 20 bits of headroom for that factor.
        let fits_i128 = (total << 20usize).to_i128().is_some();
        Grid {
            denominator,
            fits_i128,
        }
    }

    pub fn fits_i128(&self) -> bool {
        self.fits_i128
    }

    pub fn big(&self, r: &Rational) -> BigInt {
        let scaled = r * Rational::from_integer(self.denominator.clone());
        debug_assert!(scaled.is_integer());
        scaled.to_integer()
    }

    pub fn small(&self, r: &Rational) -> i128 {
        self.big(r).to_i128().expect("grid value fits i128")
    }

    pub fn back<W: Into<BigInt>>(&self, w: W) -> Rational {
        Rational::new(w.into(), self.denominator.clone())
    }
}

/// Robust minimization problem on the integer grid.
pub(crate) struct RobustProblem<W> {
    pub gamma: usize,
    /// `[machine][job]`, `None` when forbidden.
    pub nominal: Vec<Vec<Option<W>>>,
    pub deviation: Vec<Vec<Option<W>>>,
    /// Machines are interchangeable (identical environment).
    pub symmetric: bool,
}

#[derive(Clone, Debug)]
struct Slot<W> {
    nominal: W,
    /// Largest deviations on the machine, descending, at most `gamma` of them.
    top: Vec<W>,
    top_sum: W,
    count: usize,
}

impl<W: Weight> Slot<W> {
    fn new() -> Self {
        Slot {
            nominal: W::zero(),
            top: Vec::new(),
            top_sum: W::zero(),
            count: 0,
        }
    }

    fn load(&self) -> W {
        self.nominal.clone() + self.top_sum.clone()
    }

    fn load_with(&self, p_bar: &W, p_hat: &W, gamma: usize) -> W {
        let gain = if gamma == 0 {
            W::zero()
        } else if self.top.len() < gamma {
            p_hat.clone()
        } else {
            let last = self.top.last().expect("gamma > 0");
            if p_hat > last {
                p_hat.clone() - last.clone()
            } else {
                W::zero()
            }
        };
        self.nominal.clone() + p_bar.clone() + self.top_sum.clone() + gain
    }

    fn push(&mut self, p_bar: &W, p_hat: &W, gamma: usize) {
        self.nominal = self.nominal.clone() + p_bar.clone();
        self.count += 1;
        if gamma == 0 {
            return;
        }
        let pos = self.top.partition_point(|x| x >= p_hat);
        if pos < gamma {
            self.top.insert(pos, p_hat.clone());
            self.top_sum = self.top_sum.clone() + p_hat.clone();
            if self.top.len() > gamma {
                let dropped = self.top.pop().expect("non-empty");
                self.top_sum = self.top_sum.clone() - dropped;
            }
        }
    }
}

struct RobustSearch<'a, W> {
    p: &'a RobustProblem<W>,
    order: Vec<usize>,
    slots: Vec<Slot<W>>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_value: W,
    lower_bound: W,
    /// Sum over jobs of their cheapest nominal time, compared against
    /// `m * incumbent`.
    nominal_floor: W,
    done: bool,
}

impl<W: Weight> RobustProblem<W> {
    fn machines(&self) -> usize {
        self.nominal.len()
    }

    fn jobs(&self) -> usize {
        self.nominal[0].len()
    }

    fn times(&self, i: usize, j: usize) -> Option<(&W, &W)> {
        match (&self.nominal[i][j], &self.deviation[i][j]) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        }
    }

    /// Jobs by largest finite `p_bar + p_hat` descending, then index.
    fn job_order(&self) -> Vec<usize> {
        let key = |j: usize| {
            (0..self.machines())
                .filter_map(|i| self.times(i, j).map(|(a, b)| a.clone() + b.clone()))
                .max()
                .expect("every job has an allowed machine")
        };
        let keys: Vec<W> = (0..self.jobs()).map(key).collect();
        let mut order: Vec<usize> = (0..self.jobs()).collect();
        order.sort_by(|&a, &b| keys[b].cmp(&keys[a]).then(a.cmp(&b)));
        order
    }

    /// Greedy list schedule: each job in `order` goes where its resulting
    /// worst-case load is smallest.
    pub fn greedy(&self, order: &[usize]) -> (Vec<usize>, W) {
        let mut slots = vec![Slot::new(); self.machines()];
        let mut assignment = vec![0; self.jobs()];
        for &j in order {
            let (i, _) = (0..self.machines())
                .filter_map(|i| self.times(i, j).map(|(a, b)| (i, slots[i].load_with(a, b, self.gamma))))
                .min_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)))
                .expect("every job has an allowed machine");
            let (a, b) = self.times(i, j).expect("allowed");
            slots[i].push(a, b, self.gamma);
            assignment[j] = i;
        }
        let value = slots.iter().map(Slot::load).max().unwrap_or_else(W::zero);
        (assignment, value)
    }

    pub fn greedy_default(&self) -> (Vec<usize>, W) {
        self.greedy(&self.job_order())
    }

    /// Optimal assignment and its worst-case makespan.
    pub fn solve(&self) -> (Vec<usize>, W) {
        let order = self.job_order();
        let (best, best_value) = self.greedy(&order);
        let lower_bound = (0..self.jobs())
            .map(|j| {
                (0..self.machines())
                    .filter_map(|i| {
                        self.times(i, j)
                            .map(|(a, b)| if self.gamma > 0 { a.clone() + b.clone() } else { a.clone() })
                    })
                    .min()
                    .expect("allowed machine")
            })
            .max()
            .unwrap_or_else(W::zero);
        let nominal_floor = (0..self.jobs())
            .map(|j| {
                (0..self.machines())
                    .filter_map(|i| self.times(i, j).map(|(a, _)| a.clone()))
                    .min()
                    .expect("allowed machine")
            })
            .fold(W::zero(), |acc, x| acc + x);
        let mut s = RobustSearch {
            p: self,
            order,
            slots: vec![Slot::new(); self.machines()],
            current: vec![0; self.jobs()],
            best,
            best_value,
            lower_bound,
            nominal_floor,
            done: false,
        };
        s.check_optimal();
        if !s.done {
            s.dfs(0);
        }
        (s.best, s.best_value)
    }
}

impl<W: Weight> RobustSearch<'_, W> {
    fn check_optimal(&mut self) {
        if self.best_value <= self.lower_bound || self.best_value.times(self.p.machines()) <= self.nominal_floor {
            self.done = true;
        }
    }

    /// Every unplaced job still has a machine keeping its load below the
    /// incumbent.
    fn forward_ok(&self, depth: usize) -> bool {
        self.order[depth..].iter().all(|&j| {
            (0..self.p.machines()).any(|i| {
                self.p
                    .times(i, j)
                    .is_some_and(|(a, b)| self.slots[i].load_with(a, b, self.p.gamma) < self.best_value)
            })
        })
    }

    fn dfs(&mut self, depth: usize) {
        if self.done {
            return;
        }
        if depth == self.order.len() {
            let value = self.slots.iter().map(Slot::load).max().unwrap_or_else(W::zero);
            if value < self.best_value {
                self.best_value = value;
                self.best = self.current.clone();
                self.check_optimal();
            }
            return;
        }
        let j = self.order[depth];
        let m = self.p.machines();
        let open = if self.p.symmetric {
            // Non-empty machines form a prefix; only the first empty one may open.
            (self.slots.iter().take_while(|s| s.count > 0).count() + 1).min(m)
        } else {
            m
        };
        let mut candidates: Vec<(W, usize)> = (0..open)
            .filter_map(|i| {
                self.p
                    .times(i, j)
                    .map(|(a, b)| (self.slots[i].load_with(a, b, self.p.gamma), i))
            })
            .filter(|(load, _)| *load < self.best_value)
            .collect();
        candidates.sort();
        for (load, i) in candidates {
            if self.done || load >= self.best_value {
                continue;
            }
            let (a, b) = self.p.times(i, j).expect("allowed");
            let saved = self.slots[i].clone();
            self.slots[i].push(a, b, self.p.gamma);
            self.current[j] = i;
            if self.forward_ok(depth + 1) {
                self.dfs(depth + 1);
            }
            self.slots[i] = saved;
        }
    }
}

/// Capacity feasibility problem on the integer grid.
pub(crate) struct PackingProblem<W> {
    pub capacity: Vec<W>,
    /// `[machine][job]`, `None` when forbidden.
    pub times: Vec<Vec<Option<W>>>,
    /// Machines with equal class are interchangeable.
    pub class: Vec<usize>,
}

struct PackingSearch<'a, W> {
    p: &'a PackingProblem<W>,
    order: Vec<usize>,
    load: Vec<W>,
    count: Vec<usize>,
    /// Previous machine of the same class, if any.
    prev_in_class: Vec<Option<usize>>,
    /// Suffix sums of the cheapest time of each job in `order`.
    min_suffix: Vec<W>,
    current: Vec<usize>,
}

impl<W: Weight> PackingProblem<W> {
    /// An assignment with every machine load within its capacity, if one exists.
    pub fn solve(&self) -> Option<Vec<usize>> {
        let m = self.times.len();
        let n = self.times.first().map_or(0, Vec::len);
        if n == 0 {
            return Some(Vec::new());
        }
        let mut cheapest = Vec::with_capacity(n);
        let mut largest = Vec::with_capacity(n);
        for j in 0..n {
            let fits: Vec<&W> = (0..m)
                .filter_map(|i| self.times[i][j].as_ref().filter(|p| **p <= self.capacity[i]))
                .collect();
            let min = fits.iter().min()?;
            cheapest.push((*min).clone());
            largest.push(
                (0..m)
                    .filter_map(|i| self.times[i][j].clone())
                    .max()
                    .expect("some machine fits"),
            );
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| largest[b].cmp(&largest[a]).then(a.cmp(&b)));
        let mut min_suffix = vec![W::zero(); n + 1];
        for d in (0..n).rev() {
            min_suffix[d] = min_suffix[d + 1].clone() + cheapest[order[d]].clone();
        }
        let capacity_total = self.capacity.iter().fold(W::zero(), |acc, c| acc + c.clone());
        if min_suffix[0] > capacity_total {
            return None;
        }
        let prev_in_class = (0..m)
            .map(|i| (0..i).rev().find(|&k| self.class[k] == self.class[i]))
            .collect();
        let mut s = PackingSearch {
            p: self,
            order,
            load: vec![W::zero(); m],
            count: vec![0; m],
            prev_in_class,
            min_suffix,
            current: vec![0; n],
        };
        if s.dfs(0) {
            Some(s.current)
        } else {
            None
        }
    }
}

impl<W: Weight> PackingSearch<'_, W> {
    fn fits(&self, i: usize, j: usize) -> Option<W> {
        let p = self.p.times[i][j].as_ref()?;
        let load = self.load[i].clone() + p.clone();
        (load <= self.p.capacity[i]).then_some(load)
    }

    fn forward_ok(&self, depth: usize) -> bool {
        let slack = self
            .load
            .iter()
            .zip(&self.p.capacity)
            .fold(W::zero(), |acc, (l, c)| acc + (c.clone() - l.clone()));
        if self.min_suffix[depth] > slack {
            return false;
        }
        self.order[depth..]
            .iter()
            .all(|&j| (0..self.load.len()).any(|i| self.fits(i, j).is_some()))
    }

    fn dfs(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let j = self.order[depth];
        let mut candidates: Vec<(W, usize)> = (0..self.load.len())
            .filter(|&i| self.prev_in_class[i].is_none_or(|k| self.count[k] > 0))
            .filter_map(|i| self.fits(i, j).map(|load| (self.p.capacity[i].clone() - load, i)))
            .collect();
        // best fit first
        candidates.sort();
        for (_, i) in candidates {
            let p = self.p.times[i][j].clone().expect("fits");
            let before = self.load[i].clone();
            self.load[i] = before.clone() + p;
            self.count[i] += 1;
            self.current[j] = i;
            if self.forward_ok(depth + 1) && self.dfs(depth + 1) {
                return true;
            }
            self.load[i] = before;
            self.count[i] -= 1;
        }
        false
    }
}
