//! Explicit (non-asymptotic) bounds, exact when small and as base-2
//! logarithms otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LinearODE, PRecurrence};
use crate::algebra::MPoly;

/// Upper bound on a nonnegative quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigInt),
    /// The quantity is at most `2^l`.
    Log2(BigRational),
}

impl BoundValue {
    pub fn from_int(b: BigInt, threshold_bits: u64) -> Self {
        if b.bits() <= threshold_bits {
            BoundValue::Exact(b)
        } else {
            BoundValue::Log2(BigRational::from_integer(BigInt::from(b.bits())))
        }
    }

    /// `2^l`, materialized only below the threshold.
    pub fn from_log2(l: BigInt, threshold_bits: u64) -> Self {
        match l.to_u64() {
            Some(k) if k <= threshold_bits => BoundValue::Exact(BigInt::one() << k),
            _ => BoundValue::Log2(BigRational::from_integer(l)),
        }
    }

    pub fn dominates(&self, m: &BigInt) -> bool {
        let m = m.abs();
        match self {
            BoundValue::Exact(b) => &m <= b,
            BoundValue::Log2(l) => {
                if m.is_zero() {
                    return true;
                }
                // m < 2^bits(m), m ≥ 2^(bits(m)−1)
                let bits = BigRational::from_integer(BigInt::from(m.bits()));
                if bits <= *l {
                    return true;
                }
                let lo = &bits - BigRational::one();
                if lo > *l {
                    return false;
                }
                // 2^(bits−1) ≤ m < 2^bits and bits − 1 ≤ l < bits
                let floor = l.floor().to_integer().to_u64().unwrap_or(u64::MAX);
                m <= (BigInt::one() << floor) || l.is_integer() && m == (BigInt::one() << floor)
            }
        }
    }

    pub fn as_exact(&self) -> Option<&BigInt> {
        match self {
            BoundValue::Exact(b) => Some(b),
            BoundValue::Log2(_) => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(b) => write!(f, "{b}"),
            BoundValue::Log2(l) => write!(f, "2^{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub name: String,
    pub value: BoundValue,
    pub measured: Option<BigInt>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundReport {
    pub bounds: Vec<Bound>,
}

impl BoundReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, value: BoundValue, measured: Option<BigInt>) {
        self.bounds.push(Bound { name: name.to_string(), value, measured });
    }

    pub fn get(&self, name: &str) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn set_measured(&mut self, name: &str, m: BigInt) {
        if let Some(b) = self.bounds.iter_mut().find(|b| b.name == name) {
            b.measured = Some(m);
        }
    }

    pub fn extend(&mut self, prefix: &str, other: BoundReport) {
        for mut b in other.bounds {
            b.name = format!("{prefix}{}", b.name);
            self.bounds.push(b);
        }
    }

    /// Names of bounds whose measured value exceeds the bound.
    pub fn violations(&self) -> Vec<String> {
        self.bounds
            .iter()
            .filter(|b| b.measured.as_ref().is_some_and(|m| !b.value.dominates(m)))
            .map(|b| b.name.clone())
            .collect()
    }
}

/// Inputs for [`explicit_bounds`]; every group is optional.
#[derive(Clone, Debug)]
pub struct BoundInputs {
    /// `(n, M, S∞)` for a fraction `P/Q` in `2n` variables with
    /// `M = max deg_m + 1`.
    pub lipshitz: Option<(u64, u64, BigInt)>,
    /// `(|A|, ‖A‖∞)` of a Parikh automaton.
    pub automaton: Option<(u64, u64)>,
    pub recurrence: Option<PRecurrence>,
    pub exact_bits: u64,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs { lipshitz: None, automaton: None, recurrence: None, exact_bits: 1 << 20 }
    }
}

pub fn explicit_bounds(inputs: &BoundInputs) -> BoundReport {
    let mut r = BoundReport::new();
    if let Some((n, m, s)) = &inputs.lipshitz {
        r.extend("", lipshitz_bounds(*n, *m, s, inputs.exact_bits));
    }
    if let Some((size, norm)) = inputs.automaton {
        r.extend("", automaton_factor_bounds(size, norm, inputs.exact_bits));
    }
    if let Some(rec) = &inputs.recurrence {
        r.push("W", BoundValue::from_int(witness_formula(rec), inputs.exact_bits), None);
    }
    r
}

/// `N = ((2n+1)M)^(2n) − 2n`.
pub fn lipshitz_n(n: u64, m: u64) -> BigInt {
    num_traits::pow(BigInt::from((2 * n + 1) * m), (2 * n) as usize) - BigInt::from(2 * n)
}

/// Bounds for the Lipshitz relation of a fraction in `2n` variables.
pub fn lipshitz_bounds(n: u64, m: u64, s: &BigInt, exact_bits: u64) -> BoundReport {
    let mut r = BoundReport::new();
    let big_n = lipshitz_n(n, m);
    r.push("N", BoundValue::from_int(big_n.clone(), exact_bits), None);
    r.push("order_plus_degree", BoundValue::from_int(&big_n - 1, exact_bits), None);
    r.push("R_degree", BoundValue::from_int(&big_n * BigInt::from(m), exact_bits), None);
    // log2 of R's coefficients ≤ 3N·log2(N·S)
    let log_ns = BigInt::from((&big_n * s).bits());
    r.push("R_coefficient", BoundValue::from_log2(BigInt::from(3) * &big_n * &log_ns, exact_bits), None);
    let e = (2 * n) as usize;
    let l = BigInt::from(6) * num_traits::pow(big_n.clone(), e + 1) * num_traits::pow(BigInt::from(m), e) * log_ns;
    r.push("coefficient", BoundValue::from_log2(l, exact_bits), None);
    r
}

/// Bounds for a Hadamard product of `P1/Q1` and `P2/Q2` in `n` variables:
/// the fraction level doubles the degree bound and squares the norm bound.
pub fn hadamard_bounds(n: u64, inputs: &[&MPoly], exact_bits: u64) -> BoundReport {
    let m = 1 + inputs.iter().map(|p| p.maxdegree() as u64).max().unwrap_or(0);
    let s = inputs.iter().map(|p| p.norm_inf()).max().unwrap_or_default().max(BigInt::one());
    let mut r = BoundReport::new();
    r.push("M", BoundValue::Exact(BigInt::from(2 * m)), None);
    r.push("S", BoundValue::from_int(&s * &s, exact_bits), None);
    r.extend("", lipshitz_bounds(n, 2 * m, &(&s * &s), exact_bits));
    r
}

/// Degree and norm bounds for the two rational factors of a Parikh
/// automaton with `|A| = size` and `‖A‖∞ = norm`.
pub fn automaton_factor_bounds(size: u64, norm: u64, exact_bits: u64) -> BoundReport {
    let mut r = BoundReport::new();
    r.push("factor_degree", BoundValue::Exact(BigInt::from((size * norm.max(1)).saturating_sub(1))), None);
    // |A|^(5|A|/2) = floor(sqrt(|A|^(5|A|))) on integers
    let bits = 5 * size * (64 - size.leading_zeros() as u64);
    let v = if bits / 2 <= exact_bits {
        BoundValue::Exact(num_traits::pow(BigInt::from(size), (5 * size) as usize).sqrt())
    } else {
        BoundValue::Log2(BigRational::new(BigInt::from(bits), BigInt::from(2)))
    };
    r.push("factor_norm", v, None);
    r
}

pub fn witness_formula(rec: &PRecurrence) -> BigInt {
    let ts = rec.leading().0.iter().map(|c| c.abs()).max().unwrap_or_default();
    BigInt::from(rec.s()) + BigInt::from(rec.big_s()) + ts + 1
}

/// `‖PQ‖∞ ≤ (m+1)^n ‖P‖∞ ‖Q‖∞` with `m = min(deg_m P, deg_m Q)`.
pub fn product_norm_bound(p: &MPoly, q: &MPoly) -> BigInt {
    let m = p.maxdegree().min(q.maxdegree()) as usize;
    num_traits::pow(BigInt::from(m + 1), p.nvars()) * p.norm_inf() * q.norm_inf()
}

/// Square of the determinant bound `R₁^p p^(p/2)`.
pub fn determinant_bound_squared(entries: &[MPoly], p: usize) -> BigInt {
    let r1 = entries.iter().map(MPoly::norm_1).max().unwrap_or_default();
    num_traits::pow(r1, 2 * p) * num_traits::pow(BigInt::from(p), p)
}

/// `(deg_m, ‖·‖∞²)` bounds for the fraction of a vector automaton with
/// `states` states, label norm `norm` and maximal out-degree `dout`.
pub fn gf_bounds(states: usize, norm: u32, dout: usize) -> (u64, BigInt) {
    let deg = states as u64 * norm as u64;
    let sq = num_traits::pow(BigInt::from(1 + dout), 2 * states) * num_traits::pow(BigInt::from(states), states);
    (deg, sq)
}

/// The four bounds relating an ODE and its recurrence:
/// `(s, S, deg t_S, ‖t_S‖∞)` upper limits.
pub fn recurrence_bounds(ode: &LinearODE) -> (u64, u64, u64, BigInt) {
    let r = ode.order() as u64;
    let d = ode.degree();
    let q = ode.norm_inf();
    (d, r, r, q * num_traits::pow(BigInt::from(r), (r + 1) as usize))
}

/// `‖p‖∞ (deg_m p + 1)^d 2^deg(p)` for one coefficient.
pub fn specialization_norm_bound(p: &MPoly, fixed: usize) -> BigInt {
    if p.is_zero() {
        return BigInt::zero();
    }
    p.norm_inf() * num_traits::pow(BigInt::from(p.maxdegree() + 1), fixed) * (BigInt::one() << p.total_degree())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lipshitz_n_small() {
        assert_eq!(lipshitz_n(1, 2), BigInt::from(34));
    }

    #[test]
    fn factor_norm_exact() {
        let r = automaton_factor_bounds(2, 1, 1 << 20);
        // 2^(5) = 32
        assert_eq!(r.get("factor_norm").unwrap().value, BoundValue::Exact(BigInt::from(32)));
        let r = automaton_factor_bounds(3, 1, 1 << 20);
        // floor(sqrt(3^15)) = floor(3787.995…)
        assert_eq!(r.get("factor_norm").unwrap().value, BoundValue::Exact(BigInt::from(3787)));
    }

    #[test]
    fn log_domination() {
        let v = BoundValue::Log2(BigRational::from_integer(BigInt::from(10)));
        assert!(v.dominates(&BigInt::from(1024)));
        assert!(!v.dominates(&BigInt::from(1025)));
        assert!(v.dominates(&BigInt::from(1023)));
    }
}
