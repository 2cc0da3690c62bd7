//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::Rng;

use parikh_holo::algebra::{determinant, vars, MPoly, MultiIndex, PolyMatrix, UPoly, Vars};
use parikh_holo::automata::{Constraint, ParikhAutomaton, Transition, VectorAutomaton};
use parikh_holo::holonomic::{
    determinant_bound_squared, gf_bounds, gf_vector_automaton_raw, ode_to_recurrence, product_norm_bound,
    recurrence_bounds, specialization_norm_bound, specialize_ode_to_one, LinearODE,
};
use parikh_holo::semilinear::{LinearSet, SemilinearSet};

pub const LEMMA_CASES: u32 = 200;

fn names(n: usize) -> Vars {
    let v: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    vars(&v)
}

pub fn poly_in(vs: Vars, max_exp: u32, max_terms: usize, max_coef: i64) -> impl Strategy<Value = MPoly> {
    let n = vs.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -max_coef..=max_coef), 0..=max_terms).prop_map(
        move |ts| MPoly::from_terms(vs.clone(), ts.into_iter().map(|(e, c)| (MultiIndex(e), BigInt::from(c)))),
    )
}

pub fn poly_pair() -> impl Strategy<Value = (MPoly, MPoly)> {
    (1usize..=3).prop_flat_map(|n| {
        let vs = names(n);
        (poly_in(vs.clone(), 4, 6, 20), poly_in(vs, 4, 6, 20))
    })
}

pub fn check_product_norm((p, q): (MPoly, MPoly)) -> Result<(), TestCaseError> {
    let prod = &p * &q;
    prop_assert!(prod.norm_inf() <= product_norm_bound(&p, &q), "{p} * {q}");
    Ok(())
}

pub fn square_matrix() -> impl Strategy<Value = (usize, Vec<MPoly>)> {
    (1usize..=4, 1usize..=2).prop_flat_map(|(p, n)| {
        let vs = names(n);
        (Just(p), prop::collection::vec(poly_in(vs, 2, 3, 6), p * p))
    })
}

pub fn check_determinant((p, entries): (usize, Vec<MPoly>)) -> Result<(), TestCaseError> {
    let vs = entries[0].vars().clone();
    let rows: Vec<Vec<MPoly>> = entries.chunks(p).map(<[MPoly]>::to_vec).collect();
    let m = PolyMatrix::from_rows(vs, rows).unwrap();
    let det = determinant(&m).unwrap();
    let n = det.norm_inf();
    prop_assert!(&n * &n <= determinant_bound_squared(&entries, p));
    Ok(())
}

pub fn vector_automaton() -> impl Strategy<Value = VectorAutomaton> {
    (1usize..=4, 1usize..=2).prop_flat_map(|(s, d)| {
        let label = prop::collection::vec(0u32..=2, d).prop_filter("nonzero", |v| v.iter().any(|&x| x > 0));
        (
            Just(s),
            Just(d),
            0..s,
            prop::collection::vec(0..s, 1..=s),
            prop::collection::vec((0..s, label, 0..s), 0..=7),
        )
            .prop_map(|(s, d, init, finals, trans)| {
                let states = (0..s).map(|i| format!("q{i}")).collect();
                VectorAutomaton::new(d, states, init, finals, trans).unwrap()
            })
    })
}

pub fn check_gf_bounds(v: VectorAutomaton) -> Result<(), TestCaseError> {
    let vs = names(v.dimension());
    let (p, q) = gf_vector_automaton_raw(&v, &vs).unwrap();
    let states = v.states().len();
    let (deg, sq) = gf_bounds(states, v.norm_inf(), v.max_out_degree());
    for f in [&p, &q] {
        prop_assert!(u64::from(f.maxdegree()) <= deg, "degree of {f}");
        let n = f.norm_inf();
        prop_assert!(&n * &n <= sq, "norm of {f}");
    }
    Ok(())
}

pub fn univariate_ode() -> impl Strategy<Value = LinearODE> {
    let vs = vars(&["x"]);
    (1usize..=3)
        .prop_flat_map(move |r| prop::collection::vec(poly_in(vs.clone(), 4, 4, 9), r + 1))
        .prop_filter_map("nontrivial leading coefficient", |cs| {
            if cs.last().unwrap().is_zero() {
                None
            } else {
                LinearODE::new(0, cs).ok()
            }
        })
}

pub fn check_recurrence_bounds(ode: LinearODE) -> Result<(), TestCaseError> {
    let rec = ode_to_recurrence(&ode).unwrap();
    let (s, big_s, deg, norm) = recurrence_bounds(&ode);
    prop_assert!(u64::from(rec.s()) <= s);
    prop_assert!(u64::from(rec.big_s()) <= big_s);
    prop_assert!(rec.leading().degree() as u64 <= deg);
    let ts = rec.leading().0.iter().map(|c| c.abs()).max().unwrap_or_default();
    prop_assert!(ts <= norm, "{ts} > {norm} for {ode}");
    Ok(())
}

pub fn bivariate_ode() -> impl Strategy<Value = LinearODE> {
    let vs = vars(&["x", "y"]);
    (1usize..=2, 0u32..=2)
        .prop_flat_map(move |(r, k)| (Just(k), prop::collection::vec(poly_in(vs.clone(), 2, 4, 5), r + 1)))
        .prop_filter_map("nontrivial leading coefficient", |(k, cs)| {
            if cs.last().unwrap().is_zero() {
                return None;
            }
            let vs = cs[0].vars().clone();
            let f = (&MPoly::var(vs.clone(), 1) - &MPoly::one(vs)).pow(k);
            LinearODE::new(0, cs.iter().map(|c| c * &f).collect()).ok()
        })
}

pub fn check_specialization_bounds(ode: LinearODE) -> Result<(), TestCaseError> {
    let s = specialize_ode_to_one(&ode, &[1]).unwrap();
    prop_assert!(s.order() <= ode.order());
    prop_assert!(s.coeffs().iter().any(|c| !c.is_zero()));
    for (q, p) in s.coeffs().iter().zip(ode.coeffs()) {
        prop_assert!(q.total_degree() <= u64::from(p.maxdegree()), "{q} from {p}");
        prop_assert!(q.norm_inf() <= specialization_norm_bound(p, 1), "{q} from {p}");
    }
    Ok(())
}

/// Number of accepting runs of every word up to `max_len`, by depth-first
/// enumeration of transition sequences.
pub fn run_multiplicities(a: &ParikhAutomaton, max_len: usize) -> HashMap<Vec<usize>, u64> {
    let mut by_state: Vec<Vec<&Transition>> = vec![Vec::new(); a.states().len()];
    for t in a.transitions() {
        by_state[t.from].push(t);
    }
    let mut out = HashMap::new();
    let mut word = Vec::new();
    let mut v = vec![0u32; a.dimension()];
    dfs(a, &by_state, a.initial(), max_len, &mut word, &mut v, &mut out);
    out
}

fn dfs(
    a: &ParikhAutomaton,
    by_state: &[Vec<&Transition>],
    q: usize,
    max_len: usize,
    word: &mut Vec<usize>,
    v: &mut Vec<u32>,
    out: &mut HashMap<Vec<usize>, u64>,
) {
    if a.is_final(q) && a.constraint().contains(v).unwrap() {
        *out.entry(word.clone()).or_insert(0) += 1;
    }
    if word.len() == max_len {
        return;
    }
    for t in &by_state[q] {
        word.push(t.letter);
        for (x, y) in v.iter_mut().zip(&t.vector) {
            *x += y;
        }
        dfs(a, by_state, t.to, max_len, word, v, out);
        for (x, y) in v.iter_mut().zip(&t.vector) {
            *x -= y;
        }
        word.pop();
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, d: usize, max: u32, nonzero: bool) -> Vec<u32> {
    loop {
        let v: Vec<u32> = (0..d).map(|_| rng.gen_range(0..=max)).collect();
        if !nonzero || v.iter().any(|&x| x > 0) {
            return v;
        }
    }
}

/// Small random Parikh automaton: at most four states, `d ≤ 2`, `|Σ| ≤ 2`.
pub fn random_pa<R: Rng>(rng: &mut R) -> ParikhAutomaton {
    let s = rng.gen_range(1..=4);
    let sigma = rng.gen_range(1..=2);
    let d = rng.gen_range(1..=2);
    let states = (0..s).map(|i| format!("q{i}")).collect();
    let alphabet = ["a", "b"][..sigma].iter().map(|x| x.to_string()).collect();
    let finals = (0..s).filter(|_| rng.gen_bool(0.6)).collect();
    let ntrans = rng.gen_range(2..=8);
    let transitions = (0..ntrans)
        .map(|_| Transition {
            from: rng.gen_range(0..s),
            letter: rng.gen_range(0..sigma),
            vector: random_vector(rng, d, 2, false),
            to: rng.gen_range(0..s),
        })
        .collect();
    let nper = rng.gen_range(0..=2);
    let mut periods: Vec<Vec<u32>> = (0..nper).map(|_| random_vector(rng, d, 2, true)).collect();
    periods.sort();
    periods.dedup();
    // half of the constraints accept everything, so that languages overlap
    let set = if rng.gen_bool(0.5) {
        SemilinearSet::universe(d)
    } else {
        SemilinearSet::new(d, vec![LinearSet::new(random_vector(rng, d, 1, false), periods)], false).unwrap()
    };
    ParikhAutomaton::new(alphabet, states, 0, finals, Constraint::Semilinear(set), transitions).unwrap()
}

/// Components as `(constant, periods)`.
pub type RawSet = Vec<(Vec<u32>, Vec<Vec<u32>>)>;

pub fn random_raw_set<R: Rng>(rng: &mut R, d: usize) -> RawSet {
    let ncomp = rng.gen_range(1..=2);
    (0..ncomp)
        .map(|_| {
            let np = rng.gen_range(0..=3);
            let c = random_vector(rng, d, 3, false);
            let mut ps: Vec<Vec<u32>> = Vec::new();
            for _ in 0..np {
                let p = random_vector(rng, d, 3, true);
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
            (c, ps)
        })
        .collect()
}

/// Number of representations of each vector with `‖v‖∞ ≤ k`.
pub fn representation_counts(set: &RawSet, k: u32) -> HashMap<Vec<u32>, u32> {
    let mut out = HashMap::new();
    for (c, ps) in set {
        if c.iter().any(|&x| x > k) {
            continue;
        }
        walk(ps, 0, c.clone(), k, &mut out);
    }
    out
}

fn walk(ps: &[Vec<u32>], i: usize, cur: Vec<u32>, k: u32, out: &mut HashMap<Vec<u32>, u32>) {
    if i == ps.len() {
        *out.entry(cur).or_insert(0) += 1;
        return;
    }
    let mut v = cur;
    loop {
        walk(ps, i + 1, v.clone(), k, out);
        let next: Vec<u32> = v.iter().zip(&ps[i]).map(|(a, b)| a + b).collect();
        if next.iter().any(|&x| x > k) {
            return;
        }
        v = next;
    }
}

/// Every vector in `[0, k]^d`.
pub fn box_vectors(d: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=k).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Univariate integer polynomial from coefficients, lowest first.
pub fn upoly(c: &[i64]) -> UPoly {
    UPoly(c.iter().map(|&k| BigInt::from(k)).collect()).trim()
}
