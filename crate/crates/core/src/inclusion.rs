//! Language inclusion for weakly-unambiguous Parikh automata.
//!
//! `d_n = |L(A) ∩ Σⁿ| − |L(A) ∩ L(B) ∩ Σⁿ|` is P-recursive. Once its
//! recurrence is known, `d` vanishes identically as soon as it vanishes on
//! the first `W` terms, so comparing exact counts up to `W` decides
//! inclusion.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::UPoly;
use crate::automata::{accepted_words, accepts, count_words, intersect, is_weakly_unambiguous, ParikhAutomaton, Unambiguity};
use crate::error::{Error, Result};
use crate::holonomic::{ode_sum, ode_to_recurrence, pa_ode_with, witness_formula, BoundReport, BoundValue, LinearODE, PRecurrence};
use crate::limits::Limits;

/// Largest `|Σ|^k` for which a witness word is searched.
const WORD_SEARCH_LIMIT: f64 = (1u64 << 20) as f64;

/// Recorded with every certificate.
pub const THRESHOLD_NOTE: &str = "threshold W = s + S + |t_S|inf + 1 taken from the recurrence; \
     the order of the differential equation alone does not bound the first nonzero term";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub recurrence: PRecurrence,
    /// Operator annihilating the difference series; absent on the fast path.
    pub ode: Option<LinearODE>,
    /// `s + S + ‖t_S‖∞ + 1`.
    pub w: BigInt,
    /// `s + S + ρ` with `ρ` one more than the largest nonnegative root of
    /// `t_S`, when the root scan was feasible.
    pub w_refined: Option<BigInt>,
    pub report: BoundReport,
    /// Structurally equal automata; `d ≡ 0` without any algebra.
    pub fast_path: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InclusionVerdict {
    /// Counts agree on every length `≤ certified_up_to`, which is at least
    /// the refined threshold.
    Included { certified_up_to: u64, certificate: Box<Certificate> },
    NotIncluded { witness_length: usize, witness_word: Option<Vec<usize>> },
    Inconclusive { checked_up_to: usize, reason: String },
}

impl InclusionVerdict {
    /// 0 included, 1 not included, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self {
            InclusionVerdict::Included { .. } => 0,
            InclusionVerdict::NotIncluded { .. } => 1,
            InclusionVerdict::Inconclusive { .. } => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InclusionOptions {
    /// Largest length compared when `W` is out of reach.
    pub cap: usize,
    /// Run the weak-unambiguity check on both inputs first.
    pub check_ambiguity: bool,
    /// Use the root-scan refinement of `W` when it is smaller.
    pub refine: bool,
}

impl Default for InclusionOptions {
    fn default() -> Self {
        InclusionOptions { cap: 30, check_ambiguity: true, refine: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceRecurrence {
    pub ode: LinearODE,
    pub recurrence: PRecurrence,
    pub report: BoundReport,
}

fn ensure_unambiguous(a: &ParikhAutomaton, limits: &Limits) -> Result<()> {
    match is_weakly_unambiguous(a, limits) {
        Unambiguity::Yes => Ok(()),
        Unambiguity::No(w) => Err(Error::Ambiguous(a.word_to_string(&w))),
        Unambiguity::ResourceExceeded(r) => Err(Error::ResourceExceeded(format!("ambiguity check: {r}"))),
    }
}

fn difference(ua: &[BigUint], uc: &[BigUint]) -> Vec<BigRational> {
    ua.iter()
        .zip(uc)
        .map(|(x, y)| BigRational::from_integer(BigInt::from(x.clone()) - BigInt::from(y.clone())))
        .collect()
}

/// Recurrence for `d_n`. The inputs are not checked for ambiguity here.
pub fn difference_recurrence(a: &ParikhAutomaton, b: &ParikhAutomaton, limits: &Limits) -> Result<DifferenceRecurrence> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let c = intersect(a, b)?;
    let pa = pa_ode_with(a, limits)?;
    let pc = pa_ode_with(&c, limits)?;
    let ode = ode_sum(&pa.ode, &pc.ode)?;
    let recurrence = ode_to_recurrence(&ode)?;

    let mut report = BoundReport::new();
    report.extend("a_", pa.report);
    report.extend("ab_", pc.report);
    report.push("W", BoundValue::from_int(witness_formula(&recurrence), limits.exact_bound_bits), None);

    let len = limits.verify_terms + (recurrence.s() + recurrence.big_s()) as usize;
    let d = difference(&count_words(a, len), &count_words(&c, len));
    if !recurrence.annihilates(&d, len as u64) {
        return Err(Error::Internal(format!("recurrence {recurrence} does not annihilate the difference")));
    }
    Ok(DifferenceRecurrence { ode, recurrence, report })
}

/// `s + S + ‖t_S‖∞ + 1`.
pub fn witness_bound(rec: &PRecurrence) -> BigInt {
    witness_formula(rec)
}

/// `s + S + ρ`; `None` when the root scan is too large.
pub fn witness_bound_refined(rec: &PRecurrence) -> Option<BigInt> {
    let rho = match rec.leading_root()? {
        Some(r) => BigInt::from(r) + 1,
        None => BigInt::zero(),
    };
    Some(BigInt::from(rec.s()) + BigInt::from(rec.big_s()) + rho)
}

pub fn decide_inclusion(a: &ParikhAutomaton, b: &ParikhAutomaton, cap: usize) -> Result<InclusionVerdict> {
    let opts = InclusionOptions { cap, ..InclusionOptions::default() };
    decide_inclusion_with(a, b, &opts, &Limits::default())
}

pub fn decide_inclusion_with(
    a: &ParikhAutomaton,
    b: &ParikhAutomaton,
    opts: &InclusionOptions,
    limits: &Limits,
) -> Result<InclusionVerdict> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    // L(A) ⊆ L(A) needs no unambiguity
    if a.same_structure(b) {
        return Ok(fast_path());
    }
    if opts.check_ambiguity {
        ensure_unambiguous(a, limits)?;
        ensure_unambiguous(b, limits)?;
    }

    let pipeline = match difference_recurrence(a, b, limits) {
        Ok(d) => Ok(d),
        Err(e @ (Error::ResourceExceeded(_) | Error::AmbiguousPresentation)) => Err(e.to_string()),
        Err(e) => return Err(e),
    };
    let threshold = pipeline.as_ref().ok().map(|d| {
        let w = witness_bound(&d.recurrence);
        let used = match witness_bound_refined(&d.recurrence) {
            Some(r) if opts.refine && r < w => r,
            _ => w,
        };
        used.to_usize().filter(|&u| u <= opts.cap)
    });
    let len = threshold.flatten().unwrap_or(opts.cap);

    let c = intersect(a, b)?;
    let (ua, uc) = std::thread::scope(|s| {
        let h = s.spawn(|| count_words(&c, len));
        let ua = count_words(a, len);
        (ua, h.join().expect("count thread"))
    });
    if let Some(k) = (0..=len).find(|&k| ua[k] != uc[k]) {
        if ua[k] < uc[k] {
            return Err(Error::Internal(format!("intersection has more words than A at length {k}")));
        }
        return Ok(InclusionVerdict::NotIncluded { witness_length: k, witness_word: witness_word(a, b, k) });
    }

    match (pipeline, threshold.flatten()) {
        (Ok(d), Some(used)) => {
            let diff = difference(&ua, &uc);
            if !d.recurrence.annihilates(&diff, used as u64) {
                return Err(Error::Internal("certificate recurrence fails on the observed difference".into()));
            }
            let certificate = Certificate {
                w: witness_bound(&d.recurrence),
                w_refined: if opts.refine { witness_bound_refined(&d.recurrence) } else { None },
                recurrence: d.recurrence,
                ode: Some(d.ode),
                report: d.report,
                fast_path: false,
                note: THRESHOLD_NOTE.to_string(),
            };
            Ok(InclusionVerdict::Included { certified_up_to: used as u64, certificate: Box::new(certificate) })
        }
        (Ok(d), None) => Ok(InclusionVerdict::Inconclusive {
            checked_up_to: len,
            reason: format!("counts agree up to the cap; threshold W = {} is beyond it", witness_bound(&d.recurrence)),
        }),
        (Err(reason), _) => Ok(InclusionVerdict::Inconclusive {
            checked_up_to: len,
            reason: format!("counts agree up to the cap; no recurrence: {reason}"),
        }),
    }
}

fn fast_path() -> InclusionVerdict {
    let rec = PRecurrence::new(0, 0, vec![UPoly(vec![BigInt::from(1)])], 0).expect("u_n = 0");
    let w = witness_bound(&rec);
    let certificate = Certificate {
        w_refined: witness_bound_refined(&rec),
        ode: None,
        report: BoundReport::new(),
        fast_path: true,
        note: THRESHOLD_NOTE.to_string(),
        recurrence: rec,
        w: w.clone(),
    };
    InclusionVerdict::Included { certified_up_to: w.to_u64().unwrap_or(u64::MAX), certificate: Box::new(certificate) }
}

/// A word of length `k` in `L(a) \ L(b)` by enumeration, when affordable.
fn witness_word(a: &ParikhAutomaton, b: &ParikhAutomaton, k: usize) -> Option<Vec<usize>> {
    if (a.alphabet().len() as f64).powi(k as i32) > WORD_SEARCH_LIMIT {
        return None;
    }
    accepted_words(a, k).into_iter().find(|w| accepts(b, w).map(|r| r.is_empty()).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn verdict(a: &str, b: &str, cap: usize) -> InclusionVerdict {
        decide_inclusion(&fixtures::pa(a).unwrap(), &fixtures::pa(b).unwrap(), cap).unwrap()
    }

    #[test]
    fn abstar_not_in_anbn() {
        match verdict("abstar", "anbn", 20) {
            InclusionVerdict::NotIncluded { witness_length, witness_word } => {
                assert_eq!(witness_length, 4);
                assert_eq!(witness_word, Some(vec![0, 1, 0, 1]));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn aastar_in_astar_certified() {
        let InclusionVerdict::Included { certified_up_to, certificate } = verdict("aastar", "astar", 30) else {
            panic!("expected inclusion");
        };
        assert!(!certificate.fast_path);
        let rec = &certificate.recurrence;
        assert_eq!(certificate.w, witness_bound(rec));
        assert!(BigInt::from(certified_up_to) <= certificate.w);
        let a = fixtures::pa("aastar").unwrap();
        let c = intersect(&a, &fixtures::pa("astar").unwrap()).unwrap();
        let d = difference(&count_words(&a, 40), &count_words(&c, 40));
        assert!(rec.annihilates(&d, 40));
    }

    #[test]
    fn astar_not_in_aastar() {
        let v = verdict("astar", "aastar", 20);
        assert!(matches!(v, InclusionVerdict::NotIncluded { witness_length: 1, .. }), "{v:?}");
    }

    #[test]
    fn self_inclusion_fast_path() {
        for (name, _) in fixtures::ALL {
            let a = fixtures::pa(name).unwrap();
            let v = decide_inclusion(&a, &a, 10).unwrap();
            assert_eq!(v.exit_code(), 0, "{name}");
        }
    }

    #[test]
    fn refined_bound_never_larger() {
        let rec = PRecurrence::new(0, 1, vec![UPoly(vec![(-1).into(), (-1).into()]), UPoly(vec![1.into(), 1.into()])], 1).unwrap();
        assert_eq!(witness_bound(&rec), BigInt::from(3));
        assert_eq!(witness_bound_refined(&rec), Some(BigInt::from(1)));
    }
}
