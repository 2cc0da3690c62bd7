use std::collections::BTreeMap;

use super::{Constraint, ParikhAutomaton, Transition};
use crate::error::{Error, Result};
use crate::semilinear::Vector;

/// `μ(R ∩ [C])`: a finite automaton over Γ, a constraint on Parikh images
/// over Γ and a letter-to-letter morphism Γ → Σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rcm {
    gamma: Vec<String>,
    sigma: Vec<String>,
    morphism: Vec<usize>,
    states: Vec<String>,
    initial: usize,
    finals: Vec<usize>,
    transitions: Vec<(usize, usize, usize)>,
    constraint: Constraint,
}

impl Rcm {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma: Vec<String>,
        sigma: Vec<String>,
        morphism: Vec<usize>,
        states: Vec<String>,
        initial: usize,
        mut finals: Vec<usize>,
        transitions: Vec<(usize, usize, usize)>,
        constraint: Constraint,
    ) -> Result<Self> {
        if morphism.len() != gamma.len() || morphism.iter().any(|&s| s >= sigma.len()) {
            return Err(Error::InvalidAutomaton("morphism must map every working letter into the alphabet".into()));
        }
        if constraint.dimension() != gamma.len() {
            return Err(Error::DimensionMismatch { expected: gamma.len(), got: constraint.dimension() });
        }
        let n = states.len();
        if initial >= n || finals.iter().any(|&f| f >= n) {
            return Err(Error::InvalidAutomaton("state index out of range".into()));
        }
        if transitions.iter().any(|&(p, g, q)| p >= n || q >= n || g >= gamma.len()) {
            return Err(Error::InvalidAutomaton("transition out of range".into()));
        }
        finals.sort_unstable();
        finals.dedup();
        Ok(Rcm { gamma, sigma, morphism, states, initial, finals, transitions, constraint })
    }

    pub fn gamma(&self) -> &[String] {
        &self.gamma
    }

    pub fn sigma(&self) -> &[String] {
        &self.sigma
    }

    pub fn morphism(&self) -> &[usize] {
        &self.morphism
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn transitions(&self) -> &[(usize, usize, usize)] {
        &self.transitions
    }

    pub fn constraint(&self) -> &Constraint {
        &self.constraint
    }
}

fn unit(d: usize, i: usize) -> Vector {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// Composes `constraint` with the linear map whose column `j` is `cols[j]`.
fn compose(constraint: &Constraint, cols: &[Vector]) -> Constraint {
    let d = constraint.dimension();
    let (map, base) = match constraint {
        Constraint::Semilinear(s) => {
            let id: Vec<Vec<u32>> = (0..d).map(|i| unit(d, i)).collect();
            (id, s.clone())
        }
        Constraint::Mapped { map, base, .. } => (map.clone(), base.clone()),
    };
    let composed = map
        .iter()
        .map(|row| cols.iter().map(|c| row.iter().zip(c).map(|(a, b)| a * b).sum()).collect())
        .collect();
    Constraint::Mapped { dimension: cols.len(), map: composed, base }
}

/// Relabels transitions with unit vectors, one coordinate per distinct
/// original vector (in order of first occurrence).
pub fn normalize_unit_vectors(a: &ParikhAutomaton) -> ParikhAutomaton {
    let mut index: BTreeMap<&Vector, usize> = BTreeMap::new();
    let mut distinct: Vec<Vector> = Vec::new();
    for t in a.transitions() {
        index.entry(&t.vector).or_insert_with(|| {
            distinct.push(t.vector.clone());
            distinct.len() - 1
        });
    }
    let k = distinct.len();
    let trans = a
        .transitions()
        .iter()
        .map(|t| Transition { from: t.from, letter: t.letter, vector: unit(k, index[&t.vector]), to: t.to })
        .collect();
    ParikhAutomaton::new(
        a.alphabet().to_vec(),
        a.states().to_vec(),
        a.initial(),
        a.finals().to_vec(),
        compose(a.constraint(), &distinct),
        trans,
    )
    .expect("relabeling keeps the automaton well-formed")
}

/// Γ = pairs (letter, coordinate) used by some transition; μ projects to
/// the letter.
pub fn pa_to_rcm(a: &ParikhAutomaton) -> Result<Rcm> {
    let d = a.dimension();
    let mut coord = Vec::with_capacity(a.transitions().len());
    for t in a.transitions() {
        let ones: Vec<usize> = (0..d).filter(|&i| t.vector[i] != 0).collect();
        if ones.len() != 1 || t.vector[ones[0]] != 1 {
            return Err(Error::NonUnitVector);
        }
        coord.push(ones[0]);
    }
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (t, &i) in a.transitions().iter().zip(&coord) {
        index.entry((t.letter, i)).or_insert(0);
    }
    for (n, v) in index.values_mut().enumerate() {
        *v = n;
    }
    let mut gamma = vec![String::new(); index.len()];
    let mut morphism = vec![0; index.len()];
    let mut cols = vec![Vec::new(); index.len()];
    for (&(letter, i), &g) in &index {
        gamma[g] = format!("{}#{}", a.alphabet()[letter], i);
        morphism[g] = letter;
        cols[g] = unit(d, i);
    }
    let transitions = a
        .transitions()
        .iter()
        .zip(&coord)
        .map(|(t, &i)| (t.from, index[&(t.letter, i)], t.to))
        .collect();
    Rcm::new(
        gamma,
        a.alphabet().to_vec(),
        morphism,
        a.states().to_vec(),
        a.initial(),
        a.finals().to_vec(),
        transitions,
        compose(a.constraint(), &cols),
    )
}

/// Each Γ-transition `(q, γ, q′)` becomes `(q, μ(γ), e_γ, q′)`.
pub fn rcm_to_pa(r: &Rcm) -> ParikhAutomaton {
    let k = r.gamma.len();
    let trans = r
        .transitions
        .iter()
        .map(|&(p, g, q)| Transition { from: p, letter: r.morphism[g], vector: unit(k, g), to: q })
        .collect();
    ParikhAutomaton::new(
        r.sigma.clone(),
        r.states.clone(),
        r.initial,
        r.finals.clone(),
        r.constraint.clone(),
        trans,
    )
    .expect("validated RCM gives a well-formed automaton")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::brute_force_count;
    use crate::semilinear::{LinearSet, SemilinearSet};

    #[test]
    fn abab_counts() {
        // R = a*b*c*d*, μ(a)=μ(c)=a, μ(b)=μ(d)=b, C = {(n,m,n,m)}
        let c = SemilinearSet::new(4, vec![LinearSet::new(vec![0; 4], vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]])], true)
            .unwrap();
        let mut trans = Vec::new();
        for s in 0..4 {
            for g in s..4 {
                trans.push((s, g, g));
            }
        }
        let r = Rcm::new(
            ["a", "b", "c", "d"].map(String::from).to_vec(),
            vec!["a".into(), "b".into()],
            vec![0, 1, 0, 1],
            (0..4).map(|i| i.to_string()).collect(),
            0,
            vec![0, 1, 2, 3],
            trans,
            Constraint::Semilinear(c),
        )
        .unwrap();
        let a = rcm_to_pa(&r);
        assert_eq!(brute_force_count(&a, 8), vec![1, 0, 2, 0, 3, 0, 4, 0, 5]);
    }

    #[test]
    fn non_unit_rejected() {
        let a = ParikhAutomaton::new(
            vec!["a".into()],
            vec!["0".into()],
            0,
            vec![0],
            Constraint::Semilinear(SemilinearSet::universe(1)),
            vec![Transition { from: 0, letter: 0, vector: vec![2], to: 0 }],
        )
        .unwrap();
        assert_eq!(pa_to_rcm(&a), Err(Error::NonUnitVector));
        let n = normalize_unit_vectors(&a);
        let r = pa_to_rcm(&n).unwrap();
        assert_eq!(r.gamma().len(), 1);
        assert_eq!(brute_force_count(&rcm_to_pa(&r), 5), brute_force_count(&a, 5));
    }
}
