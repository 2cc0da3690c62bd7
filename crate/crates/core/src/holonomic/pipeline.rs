use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::bounds::{automaton_factor_bounds, gf_bounds, BoundReport, BoundValue};
use super::gf::weighted_series_factors;
use super::hadamard::{hadamard_ode, hadamard_ode_at_one};
use super::{LinearODE, PRecurrence};
use crate::automata::{count_words, ParikhAutomaton};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Equation for the length generating series of a Parikh automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaOde {
    /// Univariate, in `x`.
    pub ode: LinearODE,
    pub report: BoundReport,
}

pub fn pa_ode(a: &ParikhAutomaton) -> Result<PaOde> {
    pa_ode_with(a, &Limits::default())
}

pub fn pa_ode_with(a: &ParikhAutomaton, limits: &Limits) -> Result<PaOde> {
    let (abar, cbar) = weighted_series_factors(a)?;
    let d = abar.vars().len() - 1;
    let fix: Vec<usize> = (1..=d).collect();
    let h = hadamard_ode_at_one(&abar, &cbar, 0, &fix, limits)?;
    let ode = h.ode.clone();

    let mut report = BoundReport::new();
    let bits = limits.exact_bound_bits;
    let states = a.states().len();
    let norm = a.transitions().iter().map(|t| a.constraint().project(&t.vector).into_iter().max().unwrap_or(0)).max();
    let (deg, sq) = gf_bounds(states, norm.unwrap_or(0).max(1), a.transitions().len());
    report.push("abar_degree", BoundValue::Exact(BigInt::from(deg)), Some(BigInt::from(abar.num().maxdegree().max(abar.den().maxdegree()))));
    let an = abar.num().norm_inf().max(abar.den().norm_inf());
    report.push("abar_norm_squared", BoundValue::from_int(sq, bits), Some(&an * &an));
    report.extend("automaton_", automaton_factor_bounds(a.size() as u64, a.norm_inf() as u64, bits));
    report.extend("hadamard_", h.report);

    verify(a, &ode, limits.verify_terms)?;
    Ok(PaOde { ode, report })
}

/// The equation in `x, y_1, …, y_d` for the weighted series, before any
/// specialization. Only feasible when the Hadamard step needs no residues.
pub fn pa_weighted_ode(a: &ParikhAutomaton, limits: &Limits) -> Result<LinearODE> {
    let (abar, cbar) = weighted_series_factors(a)?;
    Ok(hadamard_ode(&abar, &cbar, 0, limits)?.ode)
}

fn verify(a: &ParikhAutomaton, ode: &LinearODE, terms: usize) -> Result<()> {
    let len = terms + ode.order() + ode.maxdegree() as usize;
    let u: Vec<BigRational> =
        count_words(a, len).into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect();
    let res = ode.apply_to_sequence(&u)?;
    if res.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal(format!("equation {ode} does not annihilate the counts")));
    }
    Ok(())
}

/// Whether `rec` annihilates the word counts of `a` over its first `terms`
/// relations.
pub fn recurrence_matches_counts(a: &ParikhAutomaton, rec: &PRecurrence, terms: usize) -> bool {
    let len = terms + (rec.s() + rec.big_s()) as usize;
    let u: Vec<BigRational> =
        count_words(a, len).into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect();
    rec.annihilates(&u, len as u64)
}
