//! Rational generating functions of vector automata and the two factors
//! whose Hadamard product is the weighted series of a Parikh automaton.

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{determinant, vars, MPoly, MultiIndex, PolyMatrix, RatFun, Vars};
use crate::automata::{ParikhAutomaton, VectorAutomaton};
use crate::error::{Error, Result};

/// Default variable names: `x` in dimension one, `x1…xd` otherwise.
fn default_vars(d: usize) -> Vars {
    if d == 1 {
        vars(&["x"])
    } else {
        let names: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
        vars(&names)
    }
}

/// `(P, Q)` straight from Cramer's rule on `(I − M)g = f`, before any
/// cancellation.
pub fn gf_vector_automaton_raw(v: &VectorAutomaton, vs: &Vars) -> Result<(MPoly, MPoly)> {
    if vs.len() != v.dimension() {
        return Err(Error::DimensionMismatch { expected: v.dimension(), got: vs.len() });
    }
    let n = v.states().len();
    let mut m = PolyMatrix::identity(vs.clone(), n);
    for (p, u, q) in v.transitions() {
        let t = MPoly::monomial(vs.clone(), MultiIndex(u.clone()), BigInt::one());
        let e = m.get(*p, *q) - &t;
        m.set(*p, *q, e);
    }
    let den = determinant(&m)?;
    let mut mi = m;
    for r in 0..n {
        let f = if v.finals().contains(&r) { MPoly::one(vs.clone()) } else { MPoly::zero(vs.clone()) };
        mi.set(r, v.initial(), f);
    }
    let num = determinant(&mi)?;
    Ok((num, den))
}

/// Generating series of run counts per label sum.
pub fn gf_vector_automaton(v: &VectorAutomaton) -> Result<RatFun> {
    gf_vector_automaton_in(v, &default_vars(v.dimension()))
}

pub fn gf_vector_automaton_in(v: &VectorAutomaton, vs: &Vars) -> Result<RatFun> {
    let (p, q) = gf_vector_automaton_raw(v, vs)?;
    RatFun::new(p, q)
}

/// `(x, y1, …, yd)`.
pub fn weighted_vars(d: usize) -> Vars {
    let mut names = vec!["x".to_string()];
    names.extend((1..=d).map(|i| format!("y{i}")));
    vars(&names)
}

/// `(Ā, C̄)` over [`weighted_vars`] of the constraint's base dimension.
///
/// Mapped constraints are handled by projecting each transition vector into
/// the base coordinates first.
pub fn weighted_series_factors(a: &ParikhAutomaton) -> Result<(RatFun, RatFun)> {
    let base = a.constraint().base();
    if !base.is_unambiguous() {
        return Err(Error::AmbiguousPresentation);
    }
    let d = base.dimension();
    let vs = weighted_vars(d);
    let trans = a
        .transitions()
        .iter()
        .map(|t| {
            let mut u = vec![1];
            u.extend(a.constraint().project(&t.vector));
            (t.from, u, t.to)
        })
        .collect();
    let run = VectorAutomaton::new(d + 1, a.states().to_vec(), a.initial(), a.finals().to_vec(), trans)?;
    let abar = gf_vector_automaton_in(&run, &vs)?;
    let yvars: Vars = vs[1..].to_vec().into();
    let map: Vec<usize> = (1..=d).collect();
    let c = base.characteristic_series(&yvars)?;
    let one = MPoly::one(vs.clone());
    let cbar = RatFun::new(c.num().embed(&vs, &map), &c.den().embed(&vs, &map) * &(&one - &MPoly::var(vs.clone(), 0)))?;
    Ok((abar, cbar))
}
