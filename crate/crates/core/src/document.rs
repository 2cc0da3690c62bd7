//! JSON interchange documents, discriminated by a `"kind"` field.
//!
//! Polynomials are lists of `[exponents, "coefficient"]` pairs with decimal
//! coefficient strings. States and letters are referenced by name.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{vars, MPoly, MultiIndex, UPoly};
use crate::automata::{Constraint, ParikhAutomaton, Rcm, Transition, VectorAutomaton};
use crate::error::{Error, Result};
use crate::holonomic::{BoundReport, BoundValue, LinearODE, PRecurrence};
use crate::inclusion::InclusionVerdict;
use crate::semilinear::{LinearSet, SemilinearSet, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Pa(ParikhAutomaton),
    Va(VectorAutomaton),
    Semilinear(SemilinearSet),
    Rcm(Rcm),
    Ode(LinearODE),
    Recurrence(PRecurrence),
}

type Terms = Vec<(Vec<u32>, String)>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLinear {
    constant: Vector,
    periods: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSemilinear {
    dimension: usize,
    #[serde(default)]
    unambiguous: bool,
    components: Vec<RawLinear>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawConstraint {
    Mapped { dimension: usize, map: Vec<Vec<u32>>, base: RawSemilinear },
    Plain(RawSemilinear),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    from: String,
    letter: String,
    vector: Vector,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPa {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: String,
    finals: Vec<String>,
    constraint: RawConstraint,
    transitions: Vec<RawTransition>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVaTransition {
    from: String,
    vector: Vector,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVa {
    dimension: usize,
    states: Vec<String>,
    initial: String,
    finals: Vec<String>,
    transitions: Vec<RawVaTransition>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRcmTransition {
    from: String,
    letter: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRcm {
    gamma: Vec<String>,
    sigma: Vec<String>,
    /// Image of each working letter, in `gamma` order.
    morphism: Vec<String>,
    states: Vec<String>,
    initial: String,
    finals: Vec<String>,
    transitions: Vec<RawRcmTransition>,
    constraint: RawConstraint,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOde {
    variables: Vec<String>,
    var: String,
    /// `p_0 … p_r`.
    coefficients: Vec<Terms>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecurrence {
    s: u32,
    #[serde(rename = "S")]
    big_s: u32,
    n0: u64,
    /// `t_{−s} … t_S` as polynomials in `n`.
    coefficients: Vec<Terms>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Raw {
    Pa(RawPa),
    Va(RawVa),
    Semilinear(RawSemilinear),
    Rcm(RawRcm),
    Ode(RawOde),
    Recurrence(RawRecurrence),
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

fn index_of(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut m = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if m.insert(n.clone(), i).is_some() {
            return Err(doc_err(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(m)
}

fn lookup(m: &HashMap<String, usize>, name: &str, what: &str) -> Result<usize> {
    m.get(name).copied().ok_or_else(|| doc_err(format!("unknown {what} `{name}`")))
}

fn semilinear_from_raw(r: RawSemilinear) -> Result<SemilinearSet> {
    let comps = r.components.into_iter().map(|c| LinearSet::new(c.constant, c.periods)).collect();
    SemilinearSet::new(r.dimension, comps, r.unambiguous)
}

fn semilinear_to_raw(s: &SemilinearSet) -> RawSemilinear {
    RawSemilinear {
        dimension: s.dimension(),
        unambiguous: s.is_unambiguous(),
        components: s
            .components()
            .iter()
            .map(|c| RawLinear { constant: c.constant.clone(), periods: c.periods.clone() })
            .collect(),
    }
}

fn constraint_from_raw(r: RawConstraint) -> Result<Constraint> {
    match r {
        RawConstraint::Plain(s) => Ok(Constraint::Semilinear(semilinear_from_raw(s)?)),
        RawConstraint::Mapped { dimension, map, base } => {
            let base = semilinear_from_raw(base)?;
            if map.len() != base.dimension() || map.iter().any(|row| row.len() != dimension) {
                return Err(doc_err("constraint map has the wrong shape"));
            }
            Ok(Constraint::Mapped { dimension, map, base })
        }
    }
}

fn constraint_to_raw(c: &Constraint) -> RawConstraint {
    match c {
        Constraint::Semilinear(s) => RawConstraint::Plain(semilinear_to_raw(s)),
        Constraint::Mapped { dimension, map, base } => {
            RawConstraint::Mapped { dimension: *dimension, map: map.clone(), base: semilinear_to_raw(base) }
        }
    }
}

fn names(ids: &[usize], all: &[String]) -> Vec<String> {
    ids.iter().map(|&i| all[i].clone()).collect()
}

pub fn poly_to_terms(p: &MPoly) -> Terms {
    p.terms().iter().map(|(m, c)| (m.0.clone(), c.to_string())).collect()
}

pub fn poly_from_terms(vs: &crate::algebra::Vars, terms: &Terms) -> Result<MPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        if e.len() != vs.len() {
            return Err(doc_err(format!("exponent vector {e:?} has the wrong length")));
        }
        let c: BigInt = c.parse().map_err(|_| doc_err(format!("bad coefficient `{c}`")))?;
        out.push((MultiIndex(e.clone()), c));
    }
    Ok(MPoly::from_terms(vs.clone(), out))
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Pa(_) => "pa",
            Document::Va(_) => "va",
            Document::Semilinear(_) => "semilinear",
            Document::Rcm(_) => "rcm",
            Document::Ode(_) => "ode",
            Document::Recurrence(_) => "recurrence",
        }
    }

    pub fn from_json(text: &str) -> Result<Document> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
        match raw {
            Raw::Pa(r) => Ok(Document::Pa(pa_from_raw(r)?)),
            Raw::Va(r) => {
                let st = index_of(&r.states, "state")?;
                let finals = r.finals.iter().map(|f| lookup(&st, f, "state")).collect::<Result<_>>()?;
                let trans = r
                    .transitions
                    .iter()
                    .map(|t| Ok((lookup(&st, &t.from, "state")?, t.vector.clone(), lookup(&st, &t.to, "state")?)))
                    .collect::<Result<_>>()?;
                let init = lookup(&st, &r.initial, "state")?;
                Ok(Document::Va(VectorAutomaton::new(r.dimension, r.states, init, finals, trans)?))
            }
            Raw::Semilinear(r) => Ok(Document::Semilinear(semilinear_from_raw(r)?)),
            Raw::Rcm(r) => {
                let st = index_of(&r.states, "state")?;
                let g = index_of(&r.gamma, "working letter")?;
                let s = index_of(&r.sigma, "letter")?;
                if r.morphism.len() != r.gamma.len() {
                    return Err(doc_err("morphism needs one image per working letter"));
                }
                let morphism = r.morphism.iter().map(|m| lookup(&s, m, "letter")).collect::<Result<_>>()?;
                let finals = r.finals.iter().map(|f| lookup(&st, f, "state")).collect::<Result<_>>()?;
                let trans = r
                    .transitions
                    .iter()
                    .map(|t| {
                        Ok((
                            lookup(&st, &t.from, "state")?,
                            lookup(&g, &t.letter, "working letter")?,
                            lookup(&st, &t.to, "state")?,
                        ))
                    })
                    .collect::<Result<_>>()?;
                let init = lookup(&st, &r.initial, "state")?;
                let c = constraint_from_raw(r.constraint)?;
                Ok(Document::Rcm(Rcm::new(r.gamma, r.sigma, morphism, r.states, init, finals, trans, c)?))
            }
            Raw::Ode(r) => {
                let vs = vars(&r.variables);
                let var = r
                    .variables
                    .iter()
                    .position(|v| *v == r.var)
                    .ok_or_else(|| doc_err(format!("unknown variable `{}`", r.var)))?;
                let coeffs = r.coefficients.iter().map(|t| poly_from_terms(&vs, t)).collect::<Result<_>>()?;
                Ok(Document::Ode(LinearODE::new(var, coeffs)?))
            }
            Raw::Recurrence(r) => {
                let nv = vars(&["n"]);
                let coeffs = r
                    .coefficients
                    .iter()
                    .map(|t| Ok(UPoly::from_mpoly(&poly_from_terms(&nv, t)?, 0).expect("univariate")))
                    .collect::<Result<_>>()?;
                Ok(Document::Recurrence(PRecurrence::new(r.s, r.big_s, coeffs, r.n0)?))
            }
        }
    }

    fn to_raw(&self) -> Raw {
        match self {
            Document::Pa(a) => Raw::Pa(RawPa {
                alphabet: a.alphabet().to_vec(),
                states: a.states().to_vec(),
                initial: a.states()[a.initial()].clone(),
                finals: names(a.finals(), a.states()),
                constraint: constraint_to_raw(a.constraint()),
                transitions: a
                    .transitions()
                    .iter()
                    .map(|t| RawTransition {
                        from: a.states()[t.from].clone(),
                        letter: a.alphabet()[t.letter].clone(),
                        vector: t.vector.clone(),
                        to: a.states()[t.to].clone(),
                    })
                    .collect(),
            }),
            Document::Va(v) => Raw::Va(RawVa {
                dimension: v.dimension(),
                states: v.states().to_vec(),
                initial: v.states()[v.initial()].clone(),
                finals: names(v.finals(), v.states()),
                transitions: v
                    .transitions()
                    .iter()
                    .map(|(p, u, q)| RawVaTransition {
                        from: v.states()[*p].clone(),
                        vector: u.clone(),
                        to: v.states()[*q].clone(),
                    })
                    .collect(),
            }),
            Document::Semilinear(s) => Raw::Semilinear(semilinear_to_raw(s)),
            Document::Rcm(r) => Raw::Rcm(RawRcm {
                gamma: r.gamma().to_vec(),
                sigma: r.sigma().to_vec(),
                morphism: names(r.morphism(), r.sigma()),
                states: r.states().to_vec(),
                initial: r.states()[r.initial()].clone(),
                finals: names(r.finals(), r.states()),
                transitions: r
                    .transitions()
                    .iter()
                    .map(|&(p, g, q)| RawRcmTransition {
                        from: r.states()[p].clone(),
                        letter: r.gamma()[g].clone(),
                        to: r.states()[q].clone(),
                    })
                    .collect(),
                constraint: constraint_to_raw(r.constraint()),
            }),
            Document::Ode(o) => Raw::Ode(RawOde {
                variables: o.vars().to_vec(),
                var: o.var_name().to_string(),
                coefficients: o.coeffs().iter().map(poly_to_terms).collect(),
            }),
            Document::Recurrence(r) => {
                let nv = vars(&["n"]);
                Raw::Recurrence(RawRecurrence {
                    s: r.s(),
                    big_s: r.big_s(),
                    n0: r.n0(),
                    coefficients: r.coeffs().iter().map(|t| poly_to_terms(&t.to_mpoly(&nv, 0))).collect(),
                })
            }
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self.to_raw()).expect("documents serialize")
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("documents serialize");
        s.push('\n');
        s
    }
}

fn pa_from_raw(r: RawPa) -> Result<ParikhAutomaton> {
    let st = index_of(&r.states, "state")?;
    let al = index_of(&r.alphabet, "letter")?;
    let finals = r.finals.iter().map(|f| lookup(&st, f, "state")).collect::<Result<_>>()?;
    let trans = r
        .transitions
        .iter()
        .map(|t| {
            Ok(Transition {
                from: lookup(&st, &t.from, "state")?,
                letter: lookup(&al, &t.letter, "letter")?,
                vector: t.vector.clone(),
                to: lookup(&st, &t.to, "state")?,
            })
        })
        .collect::<Result<_>>()?;
    let init = lookup(&st, &r.initial, "state")?;
    let c = constraint_from_raw(r.constraint)?;
    ParikhAutomaton::new(r.alphabet, r.states, init, finals, c, trans)
}

/// Parses a document that must be a Parikh automaton.
pub fn parse_pa(text: &str) -> Result<ParikhAutomaton> {
    match Document::from_json(text)? {
        Document::Pa(a) => Ok(a),
        d => Err(doc_err(format!("expected a pa document, found `{}`", d.kind()))),
    }
}

pub fn bound_value_to_json(v: &BoundValue) -> Value {
    match v {
        BoundValue::Exact(b) => json!({ "exact": b.to_string() }),
        BoundValue::Log2(l) => json!({ "log2": l.to_string() }),
    }
}

pub fn report_to_json(r: &BoundReport) -> Value {
    Value::Array(
        r.bounds
            .iter()
            .map(|b| {
                json!({
                    "name": b.name,
                    "bound": bound_value_to_json(&b.value),
                    "measured": b.measured.as_ref().map(|m| m.to_string()),
                    "holds": b.measured.as_ref().map(|m| b.value.dominates(m)),
                })
            })
            .collect(),
    )
}

pub fn verdict_to_json(v: &InclusionVerdict, a: &ParikhAutomaton) -> Value {
    match v {
        InclusionVerdict::Included { certified_up_to, certificate } => json!({
            "verdict": "included",
            "certified_up_to": certified_up_to,
            "certificate": {
                "fast_path": certificate.fast_path,
                "recurrence": Document::Recurrence(certificate.recurrence.clone()).to_value(),
                "recurrence_text": certificate.recurrence.to_string(),
                "ode": certificate.ode.as_ref().map(|o| Document::Ode(o.clone()).to_value()),
                "W": certificate.w.to_string(),
                "W_refined": certificate.w_refined.as_ref().map(|w| w.to_string()),
                "W_refined_is_engineering_refinement": true,
                "note": certificate.note,
                "bounds": report_to_json(&certificate.report),
            },
        }),
        InclusionVerdict::NotIncluded { witness_length, witness_word } => json!({
            "verdict": "not_included",
            "witness_length": witness_length,
            "witness_word": witness_word.as_ref().map(|w| a.word_to_string(w)),
        }),
        InclusionVerdict::Inconclusive { checked_up_to, reason } => json!({
            "verdict": "inconclusive",
            "checked_up_to": checked_up_to,
            "reason": reason,
        }),
    }
}
