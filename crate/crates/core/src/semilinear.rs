//! Semilinear subsets of ℕ^d presented as unions of linear sets.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{MPoly, MultiIndex, RatFun, Vars};
use crate::automata::VectorAutomaton;
use crate::error::{Error, Result};

pub type Vector = Vec<u32>;

/// `constant + periods*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSet {
    pub constant: Vector,
    pub periods: Vec<Vector>,
}

impl LinearSet {
    pub fn new(constant: Vector, periods: Vec<Vector>) -> Self {
        LinearSet { constant, periods }
    }

    fn contains(&self, v: &[u32]) -> bool {
        let Some(rest) = sub_vec(v, &self.constant) else {
            return false;
        };
        solve_periods(&self.periods, 0, rest)
    }
}

fn sub_vec(a: &[u32], b: &[u32]) -> Option<Vector> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

// exhaustive search; λ_i is bounded since each period is nonzero
fn solve_periods(periods: &[Vector], i: usize, rest: Vector) -> bool {
    if rest.iter().all(|&x| x == 0) {
        return true;
    }
    if i == periods.len() {
        return false;
    }
    let mut r = rest;
    loop {
        if solve_periods(periods, i + 1, r.clone()) {
            return true;
        }
        match sub_vec(&r, &periods[i]) {
            Some(next) => r = next,
            None => return false,
        }
    }
}

/// Finite union of linear sets, flagged when the presentation is unambiguous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearSet {
    dimension: usize,
    components: Vec<LinearSet>,
    unambiguous: bool,
}

impl SemilinearSet {
    pub fn new(dimension: usize, components: Vec<LinearSet>, unambiguous: bool) -> Result<Self> {
        for c in &components {
            if c.constant.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, got: c.constant.len() });
            }
            let mut seen = BTreeSet::new();
            for p in &c.periods {
                if p.len() != dimension {
                    return Err(Error::DimensionMismatch { expected: dimension, got: p.len() });
                }
                if p.iter().all(|&x| x == 0) {
                    return Err(Error::ZeroPeriod);
                }
                if !seen.insert(p.clone()) {
                    return Err(Error::DuplicatePeriod);
                }
            }
        }
        Ok(SemilinearSet { dimension, components, unambiguous })
    }

    /// ℕ^d itself: `0 + {e_1,…,e_d}*`.
    pub fn universe(dimension: usize) -> Self {
        let periods = (0..dimension)
            .map(|i| {
                let mut e = vec![0; dimension];
                e[i] = 1;
                e
            })
            .collect();
        SemilinearSet {
            dimension,
            components: vec![LinearSet::new(vec![0; dimension], periods)],
            unambiguous: true,
        }
    }

    pub fn empty(dimension: usize) -> Self {
        SemilinearSet { dimension, components: vec![], unambiguous: true }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    pub fn is_unambiguous(&self) -> bool {
        self.unambiguous
    }

    /// Largest coordinate over constants and periods.
    pub fn norm_inf(&self) -> u32 {
        self.components
            .iter()
            .flat_map(|c| std::iter::once(&c.constant).chain(&c.periods))
            .flat_map(|v| v.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Number of periods over all components.
    pub fn period_count(&self) -> usize {
        self.components.iter().map(|c| c.periods.len()).sum()
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: v.len() });
        }
        Ok(self.components.iter().any(|c| c.contains(v)))
    }

    /// Characteristic series over `vars`, one variable per coordinate.
    pub fn characteristic_series(&self, vars: &Vars) -> Result<RatFun> {
        if !self.unambiguous {
            return Err(Error::AmbiguousPresentation);
        }
        if vars.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: vars.len() });
        }
        let one = MPoly::one(vars.clone());
        let factor = |p: &Vector| &one - &MPoly::monomial(vars.clone(), MultiIndex(p.clone()), BigInt::one());
        // least common multiple at the level of the (1 - x^p) factors
        let all: BTreeSet<&Vector> = self.components.iter().flat_map(|c| &c.periods).collect();
        let mut den = one.clone();
        for p in &all {
            den = &den * &factor(p);
        }
        let mut num = MPoly::zero(vars.clone());
        for c in &self.components {
            let mut term = MPoly::monomial(vars.clone(), MultiIndex(c.constant.clone()), BigInt::one());
            for p in &all {
                if !c.periods.contains(p) {
                    term = &term * &factor(p);
                }
            }
            num = &num + &term;
        }
        RatFun::new(num, den)
    }

    /// Concatenated set `{u·w : u ∈ self, w ∈ other}`.
    pub fn concat_product(&self, other: &SemilinearSet) -> SemilinearSet {
        let (d1, d2) = (self.dimension, other.dimension);
        let mut components = Vec::with_capacity(self.components.len() * other.components.len());
        for a in &self.components {
            for b in &other.components {
                let mut constant = a.constant.clone();
                constant.extend(&b.constant);
                let mut periods = Vec::with_capacity(a.periods.len() + b.periods.len());
                for p in &a.periods {
                    let mut q = p.clone();
                    q.extend(std::iter::repeat_n(0, d2));
                    periods.push(q);
                }
                for p in &b.periods {
                    let mut q = vec![0; d1];
                    q.extend(p);
                    periods.push(q);
                }
                components.push(LinearSet { constant, periods });
            }
        }
        SemilinearSet {
            dimension: d1 + d2,
            components,
            unambiguous: self.unambiguous && other.unambiguous,
        }
    }

    /// True iff no vector of norm ≤ `k` has two decompositions.
    pub fn check_unambiguous(&self, k: u32) -> bool {
        let mut seen: HashMap<Vector, ()> = HashMap::new();
        for c in &self.components {
            if c.constant.iter().any(|&x| x > k) {
                continue;
            }
            if !enumerate_unique(&c.periods, 0, c.constant.clone(), k, &mut seen) {
                return false;
            }
        }
        true
    }

    /// Unambiguous vector automaton accepting exactly this set.
    ///
    /// States: an initial state, one state per period of each component, and
    /// one extra final state per period-free component with nonzero constant.
    /// From state `q^j_k` the period `p^j_k` is emitted while moving to any
    /// `q^j_{k'}` with `k' ≥ k`; runs end in the last period state of their
    /// component, so a run is a nondecreasing sequence of period indices.
    pub fn to_vector_automaton(&self) -> Result<VectorAutomaton> {
        if !self.unambiguous {
            return Err(Error::AmbiguousPresentation);
        }
        let d = self.dimension;
        let mut names = vec!["qI".to_string()];
        let mut finals = Vec::new();
        let mut trans: Vec<(usize, Vector, usize)> = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            let zero_const = c.constant.iter().all(|&x| x == 0);
            if c.periods.is_empty() {
                if zero_const {
                    finals.push(0);
                } else {
                    let s = names.len();
                    names.push(format!("q{}_end", j + 1));
                    trans.push((0, c.constant.clone(), s));
                    finals.push(s);
                }
                continue;
            }
            let base = names.len();
            let m = c.periods.len();
            for k in 0..m {
                names.push(format!("q{}_{}", j + 1, k + 1));
            }
            let last = base + m - 1;
            finals.push(last);
            for k in 0..m {
                for k2 in k..m {
                    trans.push((base + k, c.periods[k].clone(), base + k2));
                }
            }
            if zero_const {
                // q_I emits the first period directly
                finals.push(0);
                for k in 0..m {
                    for k2 in k..m {
                        trans.push((0, c.periods[k].clone(), base + k2));
                    }
                }
            } else {
                for k in 0..m {
                    trans.push((0, c.constant.clone(), base + k));
                }
            }
        }
        finals.sort_unstable();
        finals.dedup();
        VectorAutomaton::new(d, names, 0, finals, trans)
    }
}

fn enumerate_unique(
    periods: &[Vector],
    i: usize,
    cur: Vector,
    k: u32,
    seen: &mut HashMap<Vector, ()>,
) -> bool {
    if i == periods.len() {
        return seen.insert(cur, ()).is_none();
    }
    let mut v = cur;
    loop {
        if !enumerate_unique(periods, i + 1, v.clone(), k, seen) {
            return false;
        }
        let next: Vector = v.iter().zip(&periods[i]).map(|(a, b)| a + b).collect();
        if next.iter().any(|&x| x > k) {
            return true;
        }
        v = next;
    }
}
