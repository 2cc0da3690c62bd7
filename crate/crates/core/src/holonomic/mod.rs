//! Linear differential equations and recurrences for generating series of
//! weakly-unambiguous Parikh automata.

mod bounds;
mod gf;
mod hadamard;
mod ops;
mod pipeline;

pub use bounds::{
    automaton_factor_bounds, determinant_bound_squared, explicit_bounds, gf_bounds, hadamard_bounds, lipshitz_bounds,
    lipshitz_n, product_norm_bound, recurrence_bounds, specialization_norm_bound, witness_formula, Bound, BoundInputs,
    BoundReport, BoundValue,
};
pub use gf::{gf_vector_automaton, gf_vector_automaton_in, gf_vector_automaton_raw, weighted_series_factors, weighted_vars};
pub use hadamard::{hadamard_ode, hadamard_ode_at_one, HadamardOutcome};
pub use ops::{ode_sum, ode_to_recurrence, specialize_ode_to_one};
pub use pipeline::{pa_ode, pa_ode_with, pa_weighted_ode, recurrence_matches_counts, PaOde};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{MPoly, MultiIndex, TruncatedSeries, UPoly, Vars};
use crate::error::{Error, Result};

/// `p_r ∂^r f + … + p_0 f = 0` in the distinguished variable `vars[var]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearODE {
    var: usize,
    coeffs: Vec<MPoly>,
}

impl LinearODE {
    /// Trailing zero coefficients are dropped; all-zero input is rejected.
    pub fn new(var: usize, mut coeffs: Vec<MPoly>) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::TrivialOde)?;
        let vars = first.vars().clone();
        if var >= vars.len() {
            return Err(Error::DistinguishedVariable(format!("index {var}")));
        }
        for c in &coeffs[1..] {
            first.check_vars(c)?;
        }
        while coeffs.last().is_some_and(MPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::TrivialOde);
        }
        Ok(LinearODE { var, coeffs })
    }

    /// `∂f = 0`.
    pub fn derivative_zero(vars: Vars, var: usize) -> Self {
        LinearODE { var, coeffs: vec![MPoly::zero(vars.clone()), MPoly::one(vars)] }
    }

    pub fn vars(&self) -> &Vars {
        self.coeffs[0].vars()
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn var_name(&self) -> &str {
        &self.vars()[self.var]
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &MPoly {
        self.coeffs.last().unwrap()
    }

    /// Largest maxdegree among the coefficients.
    pub fn maxdegree(&self) -> u32 {
        self.coeffs.iter().map(MPoly::maxdegree).max().unwrap_or(0)
    }

    /// Largest total degree among the coefficients.
    pub fn degree(&self) -> u64 {
        self.coeffs.iter().filter(|p| !p.is_zero()).map(MPoly::total_degree).max().unwrap_or(0)
    }

    pub fn norm_inf(&self) -> BigInt {
        self.coeffs.iter().map(MPoly::norm_inf).max().unwrap_or_default()
    }

    /// Applies the operator to a truncation; the result is exact up to
    /// `cap − order`.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.vars()[..] != self.vars()[..] {
            return Err(Error::VariableMismatch(f.vars().to_vec(), self.vars().to_vec()));
        }
        let r = self.order() as u32;
        if f.cap() < r {
            return Err(Error::Internal(format!("truncation cap {} below order {r}", f.cap())));
        }
        let target = f.cap() - r;
        let mut acc = TruncatedSeries::zero(f.vars().clone(), target);
        let mut d = f.clone();
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derivative(self.var);
            }
            if !p.is_zero() {
                acc = acc.add(&d.restrict(target).mul_poly(p))?;
            }
        }
        Ok(acc)
    }

    pub fn annihilates(&self, f: &TruncatedSeries) -> Result<bool> {
        Ok(self.apply(f)?.is_zero())
    }

    /// Applies a univariate operator to the prefix `u_0, u_1, …` of a
    /// sequence; returns the residual coefficients that are fully determined.
    pub fn apply_to_sequence(&self, u: &[BigRational]) -> Result<Vec<BigRational>> {
        if self.vars().len() != 1 {
            return Err(Error::Internal("sequence application needs a univariate operator".into()));
        }
        let r = self.order();
        if u.len() <= r {
            return Ok(Vec::new());
        }
        let len = u.len() - r;
        let mut out = vec![BigRational::zero(); len];
        let mut d: Vec<BigRational> = u.to_vec();
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = (1..d.len()).map(|k| &d[k] * BigRational::from_integer(BigInt::from(k))).collect();
            }
            for (m, c) in p.terms() {
                let shift = m.0[0] as usize;
                let c = BigRational::from_integer(c.clone());
                for n in shift..len {
                    out[n] += &c * &d[n - shift];
                }
            }
        }
        Ok(out)
    }

    /// Removes integer content and common factors; makes the leading
    /// coefficient's leading term positive.
    pub fn normalized(&self) -> LinearODE {
        let mut coeffs = self.coeffs.clone();
        // common monomial
        let nz: Vec<&MPoly> = coeffs.iter().filter(|p| !p.is_zero()).collect();
        let n = self.vars().len();
        let mut common = MultiIndex(vec![u32::MAX; n]);
        for p in &nz {
            let g = p.monomial_gcd();
            for k in 0..n {
                common.0[k] = common.0[k].min(g.0[k]);
            }
        }
        if common.0.iter().any(|&e| e > 0) {
            coeffs = coeffs.iter().map(|p| p.div_monomial(&common)).collect();
        }
        if n == 1 {
            let mut g = UPoly(vec![]);
            for p in &coeffs {
                g = g.gcd(&UPoly::from_mpoly(p, 0).unwrap());
                if g.degree() == 0 {
                    break;
                }
            }
            if g.degree() > 0 {
                let vars = self.vars().clone();
                coeffs = coeffs
                    .iter()
                    .map(|p| UPoly::from_mpoly(p, 0).unwrap().div_exact(&g).unwrap().to_mpoly(&vars, 0))
                    .collect();
            }
        }
        let mut content = BigInt::zero();
        for p in &coeffs {
            content = content.gcd(&p.content());
        }
        let lead_neg = coeffs.last().unwrap().leading().is_some_and(|(_, c)| c.is_negative());
        if lead_neg {
            content = -content;
        }
        if !content.is_zero() && content != BigInt::from(1) {
            coeffs = coeffs.iter().map(|p| p.div_scalar_exact(&content)).collect();
        }
        LinearODE { var: self.var, coeffs }
    }
}

impl fmt::Display for LinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({p})*f")?,
                1 => write!(f, "({p})*D[{}]f", self.var_name())?,
                _ => write!(f, "({p})*D[{}]^{i}f", self.var_name())?,
            }
        }
        write!(f, " = 0")
    }
}

/// `Σ_{k=−s}^{S} t_k(n) u_{n+k} = 0` for all `n ≥ n0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRecurrence {
    s: u32,
    big_s: u32,
    coeffs: Vec<UPoly>,
    n0: u64,
}

impl PRecurrence {
    /// `coeffs[i]` is `t_{i−s}`; leading zero coefficients are an error.
    pub fn new(s: u32, big_s: u32, coeffs: Vec<UPoly>, n0: u64) -> Result<Self> {
        if coeffs.len() != (s + big_s + 1) as usize {
            return Err(Error::Internal("recurrence offsets do not match coefficient count".into()));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::TrivialOde);
        }
        Ok(PRecurrence { s, big_s, coeffs, n0 })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn big_s(&self) -> u32 {
        self.big_s
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    /// `t_k` for `−s ≤ k ≤ S`.
    pub fn t(&self, k: i64) -> &UPoly {
        &self.coeffs[(k + self.s as i64) as usize]
    }

    pub fn leading(&self) -> &UPoly {
        self.coeffs.last().unwrap()
    }

    /// `Σ t_k(n) u_{n+k}`, with `u` taken as zero at negative indices.
    /// `None` if some `u_{n+k}` lies beyond the slice.
    pub fn residual<T>(&self, u: &[T], n: u64) -> Option<BigRational>
    where
        T: Clone + Into<BigRational>,
    {
        let mut acc = BigRational::zero();
        let nb = BigInt::from(n);
        for (i, t) in self.coeffs.iter().enumerate() {
            let idx = n as i64 + i as i64 - self.s as i64;
            if idx < 0 || t.is_zero() {
                continue;
            }
            let val: BigRational = u.get(idx as usize)?.clone().into();
            acc += BigRational::from_integer(t.eval(&nb)) * val;
        }
        Some(acc)
    }

    /// Checks the relation for `n0 ≤ n ≤ upto` wherever `u` is long enough.
    pub fn annihilates<T>(&self, u: &[T], upto: u64) -> bool
    where
        T: Clone + Into<BigRational>,
    {
        (self.n0..=upto).all(|n| self.residual(u, n).is_none_or(|r| r.is_zero()))
    }

    /// Largest nonnegative integer root of `t_S`: `Some(None)` when there is
    /// none, `None` when the Cauchy root bound is too large to scan.
    pub fn leading_root(&self) -> Option<Option<u64>> {
        const SCAN_LIMIT: u64 = 1 << 20;
        let t = self.leading();
        let lead = t.lead().abs();
        let ratio = t.0.iter().map(|c| c.abs() / &lead).max().unwrap_or_default();
        let bound: u64 = (ratio + 1u32).try_into().ok().filter(|&b| b <= SCAN_LIMIT)?;
        Some((0..=bound).rev().find(|&n| t.eval(&BigInt::from(n)).is_zero()))
    }
}

impl fmt::Display for PRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = crate::algebra::vars(&["n"]);
        let mut first = true;
        for (i, t) in self.coeffs.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = i as i64 - self.s as i64;
            let idx = match k.cmp(&0) {
                std::cmp::Ordering::Less => format!("n-{}", -k),
                std::cmp::Ordering::Equal => "n".to_string(),
                std::cmp::Ordering::Greater => format!("n+{k}"),
            };
            write!(f, "({})*u[{idx}]", t.to_mpoly(&vars, 0))?;
        }
        write!(f, " = 0 for n >= {}", self.n0)
    }
}
