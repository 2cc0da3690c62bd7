//! Parikh automata, vector automata and their algorithms.

mod count;
mod emptiness;
pub mod lp;
mod product;
mod rcm;

pub use count::{accepted_words, accepts, brute_force_count, count_vectors, count_words, CountTable};
pub use emptiness::{is_weakly_unambiguous, pa_is_empty, Emptiness, Unambiguity};
pub use product::{ambiguity_product, intersect};
pub use rcm::{normalize_unit_vectors, pa_to_rcm, rcm_to_pa, Rcm};

use crate::error::{Error, Result};
use crate::semilinear::{LinearSet, SemilinearSet, Vector};

/// Automaton over ℕ^d with nonzero vector labels and no letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorAutomaton {
    dimension: usize,
    states: Vec<String>,
    initial: usize,
    finals: Vec<usize>,
    transitions: Vec<(usize, Vector, usize)>,
}

impl VectorAutomaton {
    pub fn new(
        dimension: usize,
        states: Vec<String>,
        initial: usize,
        mut finals: Vec<usize>,
        transitions: Vec<(usize, Vector, usize)>,
    ) -> Result<Self> {
        let n = states.len();
        if initial >= n || finals.iter().any(|&f| f >= n) {
            return Err(Error::InvalidAutomaton("state index out of range".into()));
        }
        for (p, v, q) in &transitions {
            if *p >= n || *q >= n {
                return Err(Error::InvalidAutomaton("transition endpoint out of range".into()));
            }
            if v.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, got: v.len() });
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::ZeroLabel);
            }
        }
        finals.sort_unstable();
        finals.dedup();
        Ok(VectorAutomaton { dimension, states, initial, finals, transitions })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
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

    pub fn transitions(&self) -> &[(usize, Vector, usize)] {
        &self.transitions
    }

    pub fn norm_inf(&self) -> u32 {
        self.transitions.iter().flat_map(|(_, v, _)| v.iter().copied()).max().unwrap_or(0)
    }

    /// Largest number of outgoing transitions of a state.
    pub fn max_out_degree(&self) -> usize {
        let mut d = vec![0usize; self.states.len()];
        for (p, _, _) in &self.transitions {
            d[*p] += 1;
        }
        d.into_iter().max().unwrap_or(0)
    }
}

/// Constraint set of a Parikh automaton.
///
/// `Mapped` is the derived form produced by unit-vector normalization:
/// a vector `n` is accepted when `map · n` lies in `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Semilinear(SemilinearSet),
    Mapped { dimension: usize, map: Vec<Vec<u32>>, base: SemilinearSet },
}

impl Constraint {
    pub fn dimension(&self) -> usize {
        match self {
            Constraint::Semilinear(s) => s.dimension(),
            Constraint::Mapped { dimension, .. } => *dimension,
        }
    }

    pub fn base(&self) -> &SemilinearSet {
        match self {
            Constraint::Semilinear(s) => s,
            Constraint::Mapped { base, .. } => base,
        }
    }

    /// Image of `v` in the base set's coordinates.
    pub fn project(&self, v: &[u32]) -> Vector {
        match self {
            Constraint::Semilinear(_) => v.to_vec(),
            Constraint::Mapped { map, .. } => map
                .iter()
                .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        }
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: v.len() });
        }
        self.base().contains(&self.project(v))
    }

    pub fn as_semilinear(&self) -> Result<&SemilinearSet> {
        match self {
            Constraint::Semilinear(s) => Ok(s),
            Constraint::Mapped { .. } => Err(Error::MappedConstraint),
        }
    }

    fn to_mapped(&self) -> (usize, Vec<Vec<u32>>, SemilinearSet) {
        match self {
            Constraint::Semilinear(s) => {
                let d = s.dimension();
                let map = (0..d).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect();
                (d, map, s.clone())
            }
            Constraint::Mapped { dimension, map, base } => (*dimension, map.clone(), base.clone()),
        }
    }

    /// Constraint on concatenated vectors.
    pub fn concat(&self, other: &Constraint) -> Constraint {
        if let (Constraint::Semilinear(a), Constraint::Semilinear(b)) = (self, other) {
            return Constraint::Semilinear(a.concat_product(b));
        }
        let (d1, m1, b1) = self.to_mapped();
        let (d2, m2, b2) = other.to_mapped();
        let mut map = Vec::new();
        for row in m1 {
            let mut r = row;
            r.extend(std::iter::repeat_n(0, d2));
            map.push(r);
        }
        for row in m2 {
            let mut r = vec![0; d1];
            r.extend(row);
            map.push(r);
        }
        Constraint::Mapped { dimension: d1 + d2, map, base: b1.concat_product(&b2) }
    }

    /// Adds one coordinate that must be positive.
    pub fn with_positive_coordinate(&self) -> Constraint {
        let extend = |s: &SemilinearSet| {
            let d = s.dimension() + 1;
            let comps = s
                .components()
                .iter()
                .map(|c| {
                    let mut constant = c.constant.clone();
                    constant.push(1);
                    let mut periods: Vec<Vector> = c
                        .periods
                        .iter()
                        .map(|p| {
                            let mut q = p.clone();
                            q.push(0);
                            q
                        })
                        .collect();
                    let mut e = vec![0; d];
                    e[d - 1] = 1;
                    periods.push(e);
                    LinearSet::new(constant, periods)
                })
                .collect();
            SemilinearSet::new(d, comps, s.is_unambiguous()).expect("valid extension")
        };
        match self {
            Constraint::Semilinear(s) => Constraint::Semilinear(extend(s)),
            Constraint::Mapped { dimension, map, base } => {
                let mut m: Vec<Vec<u32>> = map
                    .iter()
                    .map(|r| {
                        let mut r = r.clone();
                        r.push(0);
                        r
                    })
                    .collect();
                let mut last = vec![0; dimension + 1];
                last[*dimension] = 1;
                m.push(last);
                Constraint::Mapped { dimension: dimension + 1, map: m, base: extend(base) }
            }
        }
    }
}

/// One transition `(from, letter, vector, to)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub letter: usize,
    pub vector: Vector,
    pub to: usize,
}

/// Parikh automaton without ε-transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParikhAutomaton {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: usize,
    finals: Vec<usize>,
    constraint: Constraint,
    transitions: Vec<Transition>,
}

impl ParikhAutomaton {
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: usize,
        mut finals: Vec<usize>,
        constraint: Constraint,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let n = states.len();
        if initial >= n || finals.iter().any(|&f| f >= n) {
            return Err(Error::InvalidAutomaton("state index out of range".into()));
        }
        let d = constraint.dimension();
        for t in &transitions {
            if t.from >= n || t.to >= n {
                return Err(Error::InvalidAutomaton("transition endpoint out of range".into()));
            }
            if t.letter >= alphabet.len() {
                return Err(Error::InvalidAutomaton("letter index out of range".into()));
            }
            if t.vector.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: t.vector.len() });
            }
        }
        if let Constraint::Mapped { map, base, dimension } = &constraint {
            if map.len() != base.dimension() || map.iter().any(|r| r.len() != *dimension) {
                return Err(Error::InvalidAutomaton("constraint map has wrong shape".into()));
            }
        }
        finals.sort_unstable();
        finals.dedup();
        Ok(ParikhAutomaton { alphabet, states, initial, finals, constraint, transitions })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
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

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.binary_search(&q).is_ok()
    }

    pub fn constraint(&self) -> &Constraint {
        &self.constraint
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn dimension(&self) -> usize {
        self.constraint.dimension()
    }

    /// Largest coordinate of a transition vector.
    pub fn transition_norm(&self) -> u32 {
        self.transitions.iter().flat_map(|t| t.vector.iter().copied()).max().unwrap_or(0)
    }

    /// `‖A‖∞`: largest coordinate over transitions, constants and periods.
    pub fn norm_inf(&self) -> u32 {
        self.transition_norm().max(self.constraint.base().norm_inf())
    }

    /// `|A| = |Q| + |Δ| + p + Σ|P_i|`.
    pub fn size(&self) -> usize {
        let c = self.constraint.base();
        self.states.len() + self.transitions.len() + c.components().len() + c.period_count()
    }

    pub fn letter_index(&self, a: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|x| x == a)
            .ok_or_else(|| Error::ForeignLetter(a.to_string()))
    }

    /// Parse a word: characters when every letter is one character,
    /// whitespace-separated letters otherwise.
    pub fn parse_word(&self, w: &str) -> Result<Vec<usize>> {
        parse_word(&self.alphabet, w)
    }

    pub fn word_to_string(&self, w: &[usize]) -> String {
        word_to_string(&self.alphabet, w)
    }

    pub fn with_constraint(&self, constraint: Constraint) -> Result<Self> {
        Self::new(
            self.alphabet.clone(),
            self.states.clone(),
            self.initial,
            self.finals.clone(),
            constraint,
            self.transitions.clone(),
        )
    }

    /// Structural equality up to state names.
    pub fn same_structure(&self, other: &ParikhAutomaton) -> bool {
        self.alphabet == other.alphabet
            && self.states.len() == other.states.len()
            && self.initial == other.initial
            && self.finals == other.finals
            && self.constraint == other.constraint
            && self.transitions == other.transitions
    }
}

pub(crate) fn parse_word(alphabet: &[String], w: &str) -> Result<Vec<usize>> {
    let single = alphabet.iter().all(|a| a.chars().count() == 1);
    let pieces: Vec<String> = if single {
        w.chars().filter(|c| !c.is_whitespace()).map(|c| c.to_string()).collect()
    } else {
        w.split_whitespace().map(str::to_string).collect()
    };
    pieces
        .iter()
        .map(|p| alphabet.iter().position(|a| a == p).ok_or_else(|| Error::ForeignLetter(p.clone())))
        .collect()
}

pub(crate) fn word_to_string(alphabet: &[String], w: &[usize]) -> String {
    let single = alphabet.iter().all(|a| a.chars().count() == 1);
    let parts: Vec<&str> = w.iter().map(|&i| alphabet[i].as_str()).collect();
    if single {
        parts.concat()
    } else {
        parts.join(" ")
    }
}

/// Accepting run as the sequence of transition indices taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<usize>,
    pub transitions: Vec<usize>,
}

impl Run {
    pub fn vector(&self, a: &ParikhAutomaton) -> Vector {
        let mut v = vec![0; a.dimension()];
        for &t in &self.transitions {
            for (x, y) in v.iter_mut().zip(&a.transitions[t].vector) {
                *x += y;
            }
        }
        v
    }

    pub fn word(&self, a: &ParikhAutomaton) -> Vec<usize> {
        self.transitions.iter().map(|&t| a.transitions[t].letter).collect()
    }
}
