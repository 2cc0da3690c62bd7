//! Emptiness of Parikh automata and the weak-unambiguity check built on it.
//!
//! A word is accepted iff some multiset of transitions (i) satisfies the
//! Kirchhoff flow equations from the initial state to a final state f,
//! (ii) is connected to the initial state, and (iii) sums to a vector of
//! some linear component of the constraint. Connectivity is not linear, so
//! the supports are enumerated; each support gives an integer program.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lp::{integer_feasible, lp_feasible, IntegerOutcome, System};
use super::product::{ambiguity_product, useful_states};
use super::{ParikhAutomaton, Run};
use crate::limits::Limits;
use crate::semilinear::Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    /// `bound` is the largest small-solution bound used by the integer
    /// search (0 when no integer program had to be solved).
    Empty { bound: BigInt },
    NonEmpty { word: Vec<usize>, run: Run },
    ResourceExceeded(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unambiguity {
    Yes,
    No(Vec<usize>),
    ResourceExceeded(String),
}

/// Decides whether the automaton is weakly-unambiguous.
pub fn is_weakly_unambiguous(a: &ParikhAutomaton, limits: &Limits) -> Unambiguity {
    match pa_is_empty(&ambiguity_product(a), limits) {
        Emptiness::Empty { .. } => Unambiguity::Yes,
        Emptiness::NonEmpty { word, .. } => Unambiguity::No(word),
        Emptiness::ResourceExceeded(r) => Unambiguity::ResourceExceeded(r),
    }
}

pub fn pa_is_empty(a: &ParikhAutomaton, limits: &Limits) -> Emptiness {
    match bfs_witness(a, limits) {
        Bfs::Found(run) => {
            return Emptiness::NonEmpty { word: run.word(a), run };
        }
        Bfs::Exhausted => return Emptiness::Empty { bound: BigInt::zero() },
        Bfs::Unknown => {}
    }
    let mut engine = Engine { a, limits, nodes: 0, bound: BigInt::zero() };
    match engine.run() {
        Ok(Some(run)) => Emptiness::NonEmpty { word: run.word(a), run },
        Ok(None) => Emptiness::Empty { bound: engine.bound },
        Err(reason) => Emptiness::ResourceExceeded(reason),
    }
}

enum Bfs {
    Found(Run),
    /// Every reachable configuration was visited.
    Exhausted,
    Unknown,
}

/// Breadth-first search over configurations `(state, vector)`.
fn bfs_witness(a: &ParikhAutomaton, limits: &Limits) -> Bfs {
    // node = (state, vector, parent, transition)
    let mut nodes: Vec<(usize, Vector, usize, usize)> = Vec::new();
    let mut seen: HashMap<(usize, Vector), ()> = HashMap::new();
    let start = (a.initial(), vec![0; a.dimension()]);
    seen.insert(start.clone(), ());
    nodes.push((start.0, start.1, usize::MAX, usize::MAX));
    let mut frontier: VecDeque<(usize, usize)> = VecDeque::from([(0usize, 0usize)]);
    let mut truncated = false;
    while let Some((idx, depth)) = frontier.pop_front() {
        let (q, v) = (nodes[idx].0, nodes[idx].1.clone());
        if a.is_final(q) && a.constraint().contains(&v).unwrap_or(false) {
            return Bfs::Found(rebuild(&nodes, idx));
        }
        if depth >= limits.search_depth {
            truncated = true;
            continue;
        }
        for (ti, t) in a.transitions().iter().enumerate().filter(|(_, t)| t.from == q) {
            let w: Vector = v.iter().zip(&t.vector).map(|(x, y)| x + y).collect();
            let key = (t.to, w);
            if seen.contains_key(&key) {
                continue;
            }
            if nodes.len() >= limits.search_configurations {
                truncated = true;
                continue;
            }
            seen.insert(key.clone(), ());
            nodes.push((key.0, key.1, idx, ti));
            frontier.push_back((nodes.len() - 1, depth + 1));
        }
    }
    if truncated {
        Bfs::Unknown
    } else {
        Bfs::Exhausted
    }
}

fn rebuild(nodes: &[(usize, Vector, usize, usize)], mut idx: usize) -> Run {
    let mut states = vec![nodes[idx].0];
    let mut trans = Vec::new();
    while nodes[idx].2 != usize::MAX {
        trans.push(nodes[idx].3);
        idx = nodes[idx].2;
        states.push(nodes[idx].0);
    }
    states.reverse();
    trans.reverse();
    Run { states, transitions: trans }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    In,
    Out,
    Undecided,
}

struct Engine<'a> {
    a: &'a ParikhAutomaton,
    limits: &'a Limits,
    nodes: usize,
    bound: BigInt,
}

/// Integer program for one final state and one linear component.
struct Problem {
    /// Indices into the automaton's transitions (the variables `x_t`).
    trans: Vec<usize>,
    /// Total number of variables (transitions, then period multipliers).
    vars: usize,
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    target: usize,
}

impl<'a> Engine<'a> {
    fn run(&mut self) -> Result<Option<Run>, String> {
        let a = self.a;
        let base = a.constraint().base();
        for &f in a.finals() {
            let trans = self.relevant_transitions(f);
            if trans.len() > self.limits.max_transitions {
                return Err(format!(
                    "{} transitions exceed the support-enumeration limit {}",
                    trans.len(),
                    self.limits.max_transitions
                ));
            }
            if trans.is_empty() && f != a.initial() {
                continue;
            }
            for comp in base.components() {
                let p = self.problem(f, &trans, &comp.constant, &comp.periods);
                if lp_feasible(&System::new(p.a.clone(), p.b.clone(), p.vars)).is_none() {
                    continue;
                }
                let mut status = vec![Status::Undecided; p.trans.len()];
                if let Some(x) = self.search(&p, &mut status)? {
                    return Ok(Some(self.euler(&p, &x)));
                }
            }
        }
        Ok(None)
    }

    /// Transitions lying on some path from the initial state to `f`.
    fn relevant_transitions(&self, f: usize) -> Vec<usize> {
        let a = self.a;
        let restricted = ParikhAutomaton::new(
            a.alphabet().to_vec(),
            a.states().to_vec(),
            a.initial(),
            vec![f],
            a.constraint().clone(),
            a.transitions().to_vec(),
        )
        .expect("same automaton with one final state");
        let useful = useful_states(&restricted);
        (0..a.transitions().len())
            .filter(|&i| {
                let t = &a.transitions()[i];
                useful[t.from] && useful[t.to]
            })
            .collect()
    }

    fn problem(&self, f: usize, trans: &[usize], constant: &[u32], periods: &[Vector]) -> Problem {
        let a = self.a;
        let n = a.states().len();
        let k = trans.len();
        let vars = k + periods.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for q in 0..n {
            let mut row = vec![BigInt::zero(); vars];
            for (j, &ti) in trans.iter().enumerate() {
                let t = &a.transitions()[ti];
                if t.from == q {
                    row[j] += 1;
                }
                if t.to == q {
                    row[j] -= 1;
                }
            }
            let r = i64::from(q == a.initial()) - i64::from(q == f);
            if row.iter().all(Zero::is_zero) && r == 0 {
                continue;
            }
            rows.push(row);
            rhs.push(BigInt::from(r));
        }
        let projected: Vec<Vector> = trans.iter().map(|&ti| a.constraint().project(&a.transitions()[ti].vector)).collect();
        for (c, &cv) in constant.iter().enumerate() {
            let mut row = vec![BigInt::zero(); vars];
            for j in 0..k {
                row[j] = BigInt::from(projected[j][c]);
            }
            for (pi, p) in periods.iter().enumerate() {
                row[k + pi] = -BigInt::from(p[c]);
            }
            rows.push(row);
            rhs.push(BigInt::from(cv));
        }
        Problem { trans: trans.to_vec(), vars, a: rows, b: rhs, target: f }
    }

    fn system(&self, p: &Problem, status: &[Status]) -> System {
        let mut s = System::new(p.a.clone(), p.b.clone(), p.vars);
        for (j, st) in status.iter().enumerate() {
            match st {
                Status::In => s.lower[j] = BigInt::one(),
                Status::Out => s.upper[j] = Some(BigInt::zero()),
                Status::Undecided => {}
            }
        }
        s
    }

    /// Every `In` transition is reachable from the initial state using
    /// transitions of the given statuses.
    fn reachable(&self, p: &Problem, status: &[Status], allowed: &[Status]) -> bool {
        let a = self.a;
        let mut seen = vec![false; a.states().len()];
        seen[a.initial()] = true;
        let mut stack = vec![a.initial()];
        while let Some(q) = stack.pop() {
            for (j, &ti) in p.trans.iter().enumerate() {
                let t = &a.transitions()[ti];
                if t.from == q && allowed.contains(&status[j]) && !seen[t.to] {
                    seen[t.to] = true;
                    stack.push(t.to);
                }
            }
        }
        p.trans
            .iter()
            .zip(status)
            .all(|(&ti, st)| *st != Status::In || seen[a.transitions()[ti].from])
    }

    fn connected_support(&self, p: &Problem, x: &[BigInt]) -> bool {
        let status: Vec<Status> =
            (0..p.trans.len()).map(|j| if x[j].is_positive() { Status::In } else { Status::Out }).collect();
        self.reachable(p, &status, &[Status::In])
    }

    fn search(&mut self, p: &Problem, status: &mut Vec<Status>) -> Result<Option<Vec<BigInt>>, String> {
        self.nodes += 1;
        if self.nodes > self.limits.max_support_nodes {
            return Err(format!("support enumeration exceeded {} nodes", self.limits.max_support_nodes));
        }
        if !self.reachable(p, status, &[Status::In, Status::Undecided]) {
            return Ok(None);
        }
        let sys = self.system(p, status);
        let Some(x) = lp_feasible(&sys) else {
            return Ok(None);
        };
        if x.iter().all(|v| v.is_integer()) {
            let xi: Vec<BigInt> = x.iter().map(|v| v.to_integer()).collect();
            if self.connected_support(p, &xi) {
                return Ok(Some(xi));
            }
        }
        // branch on the undecided transition carrying the most LP flow
        let pick = (0..p.trans.len())
            .filter(|&j| status[j] == Status::Undecided)
            .max_by(|&i, &j| x[i].cmp(&x[j]).then(j.cmp(&i)));
        let Some(j) = pick else {
            return self.leaf(p, status, &sys);
        };
        for choice in [Status::In, Status::Out] {
            status[j] = choice;
            let r = self.search(p, status);
            status[j] = Status::Undecided;
            if let Some(found) = r? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    /// All transitions decided: the support is exactly the `In` set.
    fn leaf(&mut self, p: &Problem, status: &[Status], sys: &System) -> Result<Option<Vec<BigInt>>, String> {
        if !self.reachable(p, status, &[Status::In]) {
            return Ok(None);
        }
        let cap = small_solution_bound(sys);
        if cap > self.bound {
            self.bound = cap.clone();
        }
        match integer_feasible(sys, &cap, self.limits.max_branch_nodes) {
            IntegerOutcome::Feasible(x) => Ok(Some(x)),
            IntegerOutcome::Infeasible => Ok(None),
            IntegerOutcome::NodeLimit => {
                Err(format!("integer search exceeded {} branch nodes", self.limits.max_branch_nodes))
            }
        }
    }

    /// Eulerian path through the multigraph given by the multiplicities.
    fn euler(&self, p: &Problem, x: &[BigInt]) -> Run {
        let a = self.a;
        let n = a.states().len();
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for (j, &ti) in p.trans.iter().enumerate() {
            let m: u64 = x[j].clone().try_into().expect("witness multiplicity fits in u64");
            if m > 0 {
                adj[a.transitions()[ti].from].push((ti, m));
            }
        }
        // Hierholzer, iterative
        let mut stack: Vec<(usize, usize)> = vec![(a.initial(), usize::MAX)];
        let mut path: Vec<(usize, usize)> = Vec::new();
        while let Some(&(q, _)) = stack.last() {
            if let Some(slot) = adj[q].iter_mut().find(|(_, m)| *m > 0) {
                slot.1 -= 1;
                let ti = slot.0;
                stack.push((a.transitions()[ti].to, ti));
            } else {
                path.push(stack.pop().unwrap());
            }
        }
        path.reverse();
        let states: Vec<usize> = path.iter().map(|(q, _)| *q).collect();
        let transitions: Vec<usize> = path.iter().skip(1).map(|(_, t)| *t).collect();
        debug_assert_eq!(*states.last().unwrap(), p.target);
        Run { states, transitions }
    }
}

/// `n·(m·a)^(2m+1)` for the system shifted to zero lower bounds, where `a`
/// bounds the absolute entries of the matrix and right-hand side.
fn small_solution_bound(s: &System) -> BigInt {
    let m = s.a.len();
    let n = s.vars();
    let mut amax = BigInt::one();
    for (r, row) in s.a.iter().enumerate() {
        let mut b = s.b[r].clone();
        for (j, c) in row.iter().enumerate() {
            b -= c * &s.lower[j];
            if c.abs() > amax {
                amax = c.abs();
            }
        }
        if b.abs() > amax {
            amax = b.abs();
        }
    }
    let base = BigInt::from(m.max(1)) * amax;
    let shift = s.lower.iter().max().cloned().unwrap_or_default();
    BigInt::from(n) * num_traits::pow(base, 2 * m + 1) + shift
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Constraint, Transition};
    use crate::semilinear::{LinearSet, SemilinearSet};

    fn pa(d: usize, n: usize, finals: Vec<usize>, c: SemilinearSet, t: Vec<(usize, usize, Vec<u32>, usize)>) -> ParikhAutomaton {
        ParikhAutomaton::new(
            vec!["a".into(), "b".into()],
            (0..n).map(|i| i.to_string()).collect(),
            0,
            finals,
            Constraint::Semilinear(c),
            t.into_iter().map(|(from, letter, vector, to)| Transition { from, letter, vector, to }).collect(),
        )
        .inspect(|p| assert_eq!(p.dimension(), d))
        .unwrap()
    }

    #[test]
    fn unreachable_final() {
        let a = pa(1, 2, vec![1], SemilinearSet::universe(1), vec![(0, 0, vec![1], 0)]);
        assert!(matches!(pa_is_empty(&a, &Limits::default()), Emptiness::Empty { .. }));
    }

    #[test]
    fn deep_witness_found_by_support_search() {
        // a^n with n ≡ 0 mod 7 and n ≥ 14: beyond the breadth-first depth
        let c = SemilinearSet::new(1, vec![LinearSet::new(vec![14], vec![vec![7]])], true).unwrap();
        let a = pa(1, 1, vec![0], c, vec![(0, 0, vec![1], 0)]);
        match pa_is_empty(&a, &Limits::default()) {
            Emptiness::NonEmpty { word, .. } => assert_eq!(word.len() % 7, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parity_makes_empty() {
        // loop adds 2, constraint wants odd
        let c = SemilinearSet::new(1, vec![LinearSet::new(vec![1], vec![vec![2]])], true).unwrap();
        let a = pa(1, 1, vec![0], c, vec![(0, 0, vec![2], 0)]);
        assert!(matches!(pa_is_empty(&a, &Limits::default()), Emptiness::Empty { .. }));
    }

    #[test]
    fn disconnected_cycle_is_rejected() {
        // 0 -a-> 1 (final); an isolated cycle 2 <-> 3 carries the needed count
        let c = SemilinearSet::new(1, vec![LinearSet::new(vec![2], vec![])], true).unwrap();
        let a = pa(
            1,
            4,
            vec![1],
            c,
            vec![(0, 0, vec![0], 1), (2, 0, vec![1], 3), (3, 0, vec![1], 2), (1, 1, vec![0], 1)],
        );
        assert!(matches!(pa_is_empty(&a, &Limits::default()), Emptiness::Empty { .. }));
    }
}
