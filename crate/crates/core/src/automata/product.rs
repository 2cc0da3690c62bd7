use std::collections::{HashMap, VecDeque};

use super::{ParikhAutomaton, Transition};
use crate::error::{Error, Result};

/// Builds the reachable part of a synchronized product.
///
/// `combine` receives the two transitions and returns the product vector.
fn product<F>(a: &ParikhAutomaton, b: &ParikhAutomaton, combine: F) -> Result<(Vec<String>, Vec<usize>, Vec<Transition>)>
where
    F: Fn(usize, &Transition, usize, &Transition) -> Vec<u32>,
{
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut names = Vec::new();
    let mut queue = VecDeque::new();
    let start = (a.initial(), b.initial());
    index.insert(start, 0);
    names.push(format!("({},{})", a.states()[start.0], b.states()[start.1]));
    queue.push_back(start);
    let mut trans = Vec::new();
    while let Some((p, q)) = queue.pop_front() {
        let src = index[&(p, q)];
        for (i, t1) in a.transitions().iter().enumerate().filter(|(_, t)| t.from == p) {
            for (j, t2) in b.transitions().iter().enumerate().filter(|(_, t)| t.from == q) {
                if t1.letter != t2.letter {
                    continue;
                }
                let key = (t1.to, t2.to);
                let dst = *index.entry(key).or_insert_with(|| {
                    names.push(format!("({},{})", a.states()[key.0], b.states()[key.1]));
                    queue.push_back(key);
                    names.len() - 1
                });
                trans.push(Transition { from: src, letter: t1.letter, vector: combine(i, t1, j, t2), to: dst });
            }
        }
    }
    let mut finals: Vec<usize> = index
        .iter()
        .filter(|((p, q), _)| a.is_final(*p) && b.is_final(*q))
        .map(|(_, &i)| i)
        .collect();
    finals.sort_unstable();
    Ok((names, finals, trans))
}

/// Product automaton recognizing `L(a) ∩ L(b)`.
pub fn intersect(a: &ParikhAutomaton, b: &ParikhAutomaton) -> Result<ParikhAutomaton> {
    let (names, finals, trans) = product(a, b, |_, t1, _, t2| {
        let mut v = t1.vector.clone();
        v.extend(&t2.vector);
        v
    })?;
    ParikhAutomaton::new(
        a.alphabet().to_vec(),
        names,
        0,
        finals,
        a.constraint().concat(b.constraint()),
        trans,
    )
}

/// Self-product whose last coordinate counts positions where the two
/// simulated runs take different transitions; that coordinate must be > 0.
pub fn ambiguity_product(a: &ParikhAutomaton) -> ParikhAutomaton {
    let (names, finals, trans) = product(a, a, |i, t1, j, t2| {
        let mut v = t1.vector.clone();
        v.extend(&t2.vector);
        v.push(u32::from(i != j));
        v
    })
    .expect("same alphabet");
    ParikhAutomaton::new(
        a.alphabet().to_vec(),
        names,
        0,
        finals,
        a.constraint().concat(a.constraint()).with_positive_coordinate(),
        trans,
    )
    .expect("well-formed product")
}

/// States reachable from the initial state and co-reachable to a final one.
pub(crate) fn useful_states(a: &ParikhAutomaton) -> Vec<bool> {
    let n = a.states().len();
    let mut fwd = vec![false; n];
    let mut stack = vec![a.initial()];
    fwd[a.initial()] = true;
    while let Some(p) = stack.pop() {
        for t in a.transitions().iter().filter(|t| t.from == p) {
            if !fwd[t.to] {
                fwd[t.to] = true;
                stack.push(t.to);
            }
        }
    }
    let mut bwd = vec![false; n];
    let mut stack: Vec<usize> = a.finals().to_vec();
    for &f in a.finals() {
        bwd[f] = true;
    }
    while let Some(q) = stack.pop() {
        for t in a.transitions().iter().filter(|t| t.to == q) {
            if !bwd[t.from] {
                bwd[t.from] = true;
                stack.push(t.from);
            }
        }
    }
    (0..n).map(|i| fwd[i] && bwd[i]).collect()
}
