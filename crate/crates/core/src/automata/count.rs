use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Constraint, ParikhAutomaton, Run, VectorAutomaton};
use crate::error::{Error, Result};
use crate::semilinear::Vector;

/// Run counts `q[v]` for every state and every vector inside a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    bound: Vector,
    states: usize,
    table: BTreeMap<Vector, Vec<BigUint>>,
}

impl CountTable {
    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    pub fn get(&self, q: usize, v: &[u32]) -> BigUint {
        self.table.get(v).map_or_else(BigUint::zero, |c| c[q].clone())
    }

    /// Vectors with at least one run, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vector, &Vec<BigUint>)> {
        self.table.iter()
    }

    pub fn states(&self) -> usize {
        self.states
    }
}

/// Exact run counts for all `‖v‖∞ ≤ k`.
pub fn count_vectors(v: &VectorAutomaton, k: u32) -> CountTable {
    count_vectors_box(v, &vec![k; v.dimension()])
}

/// Counts inside the box `v ≤ bound` (coordinate-wise).
///
/// Vectors are processed in lexicographic order. Every label is nonzero, so
/// each predecessor `v − u` precedes `v` and its count is final when used.
pub fn count_vectors_box(v: &VectorAutomaton, bound: &[u32]) -> CountTable {
    let n = v.states().len();
    let d = v.dimension();
    let mut out_edges: Vec<Vec<(usize, &Vector)>> = vec![Vec::new(); n];
    for (p, u, q) in v.transitions() {
        out_edges[*p].push((*q, u));
    }
    let mut pending: BTreeMap<Vector, Vec<BigUint>> = BTreeMap::new();
    let mut start = vec![BigUint::zero(); n];
    start[v.initial()] = BigUint::one();
    pending.insert(vec![0; d], start);
    let mut table = BTreeMap::new();
    while let Some((vec, counts)) = pending.pop_first() {
        for (p, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (q, u) in &out_edges[p] {
                let w: Vector = vec.iter().zip(u.iter()).map(|(a, b)| a + b).collect();
                if w.iter().zip(bound).any(|(a, b)| a > b) {
                    continue;
                }
                let slot = pending.entry(w).or_insert_with(|| vec![BigUint::zero(); n]);
                slot[*q] += c;
            }
        }
        table.insert(vec, counts);
    }
    CountTable { bound: bound.to_vec(), states: n, table }
}

/// The (d+1)-dimensional vector automaton whose first coordinate is length.
pub(crate) fn run_automaton(a: &ParikhAutomaton) -> VectorAutomaton {
    let trans = a
        .transitions()
        .iter()
        .map(|t| {
            let mut v = Vec::with_capacity(t.vector.len() + 1);
            v.push(1);
            v.extend(&t.vector);
            (t.from, v, t.to)
        })
        .collect();
    VectorAutomaton::new(a.dimension() + 1, a.states().to_vec(), a.initial(), a.finals().to_vec(), trans)
        .expect("length coordinate makes every label nonzero")
}

/// Number of accepting runs of each length `0..=n`.
pub fn count_words(a: &ParikhAutomaton, n: usize) -> Vec<BigUint> {
    let k = n as u32 * a.transition_norm();
    let mut bound = vec![k; a.dimension() + 1];
    bound[0] = n as u32;
    let table = count_vectors_box(&run_automaton(a), &bound);
    let member = membership_oracle(a.constraint(), k);
    let mut u = vec![BigUint::zero(); n + 1];
    for (v, counts) in table.entries() {
        let total: BigUint = a.finals().iter().map(|&f| &counts[f]).sum();
        if total.is_zero() {
            continue;
        }
        if member(&v[1..]) {
            u[v[0] as usize] += total;
        }
    }
    u
}

/// Indicator of the constraint on vectors of norm ≤ `k`.
///
/// Plain unambiguous sets go through their vector automaton; anything else
/// falls back to direct membership.
fn membership_oracle(c: &Constraint, k: u32) -> Box<dyn Fn(&[u32]) -> bool + '_> {
    if let Constraint::Semilinear(s) = c {
        if let Ok(va) = s.to_vector_automaton() {
            let table = count_vectors(&va, k);
            let finals = va.finals().to_vec();
            return Box::new(move |v: &[u32]| finals.iter().any(|&f| !table.get(f, v).is_zero()));
        }
    }
    Box::new(move |v: &[u32]| c.contains(v).unwrap_or(false))
}

type Config = (usize, Vector);

fn step(a: &ParikhAutomaton, configs: &HashSet<Config>, letter: usize) -> HashSet<Config> {
    let mut next = HashSet::new();
    for (q, v) in configs {
        for t in a.transitions().iter().filter(|t| t.from == *q && t.letter == letter) {
            let w: Vector = v.iter().zip(&t.vector).map(|(x, y)| x + y).collect();
            next.insert((t.to, w));
        }
    }
    next
}

fn accepting(a: &ParikhAutomaton, configs: &HashSet<Config>) -> bool {
    configs
        .iter()
        .any(|(q, v)| a.is_final(*q) && a.constraint().contains(v).unwrap_or(false))
}

/// Distinct accepted words of each length, by exhaustive enumeration.
pub fn brute_force_count(a: &ParikhAutomaton, n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let start: HashSet<Config> = [(a.initial(), vec![0; a.dimension()])].into_iter().collect();
    brute(a, &start, 0, n, &mut counts);
    counts
}

fn brute(a: &ParikhAutomaton, configs: &HashSet<Config>, depth: usize, n: usize, counts: &mut [u64]) {
    if accepting(a, configs) {
        counts[depth] += 1;
    }
    if depth == n {
        return;
    }
    for letter in 0..a.alphabet().len() {
        let next = step(a, configs, letter);
        if !next.is_empty() {
            brute(a, &next, depth + 1, n, counts);
        }
    }
}

/// Every accepted word of length `k`, in lexicographic letter order.
pub fn accepted_words(a: &ParikhAutomaton, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let start: HashSet<Config> = [(a.initial(), vec![0; a.dimension()])].into_iter().collect();
    let mut word = Vec::new();
    collect_words(a, &start, k, &mut word, &mut out);
    out
}

fn collect_words(
    a: &ParikhAutomaton,
    configs: &HashSet<Config>,
    k: usize,
    word: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if word.len() == k {
        if accepting(a, configs) {
            out.push(word.clone());
        }
        return;
    }
    for letter in 0..a.alphabet().len() {
        let next = step(a, configs, letter);
        if !next.is_empty() {
            word.push(letter);
            collect_words(a, &next, k, word, out);
            word.pop();
        }
    }
}

/// All accepting runs on `w`.
pub fn accepts(a: &ParikhAutomaton, w: &[usize]) -> Result<Vec<Run>> {
    if let Some(&bad) = w.iter().find(|&&l| l >= a.alphabet().len()) {
        return Err(Error::ForeignLetter(format!("#{bad}")));
    }
    let mut runs = Vec::new();
    let mut states = vec![a.initial()];
    let mut trans = Vec::new();
    enumerate_runs(a, w, &mut states, &mut trans, &mut runs);
    Ok(runs)
}

fn enumerate_runs(
    a: &ParikhAutomaton,
    w: &[usize],
    states: &mut Vec<usize>,
    trans: &mut Vec<usize>,
    runs: &mut Vec<Run>,
) {
    let q = *states.last().unwrap();
    if trans.len() == w.len() {
        let run = Run { states: states.clone(), transitions: trans.clone() };
        if a.is_final(q) && a.constraint().contains(&run.vector(a)).unwrap_or(false) {
            runs.push(run);
        }
        return;
    }
    let letter = w[trans.len()];
    for (i, t) in a.transitions().iter().enumerate() {
        if t.from == q && t.letter == letter {
            states.push(t.to);
            trans.push(i);
            enumerate_runs(a, w, states, trans, runs);
            states.pop();
            trans.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilinear::{LinearSet, SemilinearSet};

    fn va(d: usize, n: usize, finals: Vec<usize>, t: Vec<(usize, Vec<u32>, usize)>) -> VectorAutomaton {
        VectorAutomaton::new(d, (0..n).map(|i| i.to_string()).collect(), 0, finals, t).unwrap()
    }

    #[test]
    fn single_loop() {
        let v = va(1, 1, vec![0], vec![(0, vec![1], 0)]);
        let t = count_vectors(&v, 7);
        for k in 0..=7 {
            assert_eq!(t.get(0, &[k]), BigUint::one());
        }
    }

    #[test]
    fn parallel_edges() {
        let v = va(1, 2, vec![1], vec![(0, vec![1], 1), (0, vec![1], 1)]);
        assert_eq!(count_vectors(&v, 3).get(1, &[1]), BigUint::from(2u32));
    }

    #[test]
    fn semilinear_automaton_counts() {
        let s = SemilinearSet::new(3, vec![LinearSet::new(vec![0, 0, 0], vec![vec![2, 3, 5]])], true).unwrap();
        let v = s.to_vector_automaton().unwrap();
        assert_eq!(v.states().len(), 2);
        let t = count_vectors(&v, 10);
        let accepted: Vec<_> = t
            .entries()
            .filter(|(_, c)| v.finals().iter().any(|&f| !c[f].is_zero()))
            .map(|(x, _)| x.clone())
            .collect();
        assert_eq!(accepted, vec![vec![0, 0, 0], vec![2, 3, 5], vec![4, 6, 10]]);
        let f = v.finals()[v.finals().len() - 1];
        assert_eq!(t.get(f, &[2, 3, 5]), BigUint::one());
        assert!(t.get(f, &[1, 1, 1]).is_zero());
    }

    #[test]
    fn singleton_automaton() {
        let s = SemilinearSet::new(2, vec![LinearSet::new(vec![1, 2], vec![])], true).unwrap();
        let v = s.to_vector_automaton().unwrap();
        assert_eq!(v.transitions().len(), 1);
        assert_eq!(v.transitions()[0], (0, vec![1, 2], 1));
    }
}
