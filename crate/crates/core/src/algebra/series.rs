use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mpoly::{same_vars, MPoly, MultiIndex, Vars};
use super::ratfun::RatFun;
use crate::error::{Error, Result};

/// Power series known for every index of maxdegree at most `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    vars: Vars,
    cap: u32,
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(vars: Vars, cap: u32) -> Self {
        let len = ((cap as usize) + 1).pow(vars.len() as u32);
        TruncatedSeries { vars, cap, coeffs: vec![BigRational::zero(); len] }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn base(&self) -> usize {
        self.cap as usize + 1
    }

    fn index(&self, m: &[u32]) -> Option<usize> {
        let b = self.base();
        let mut i = 0usize;
        for &e in m {
            if e > self.cap {
                return None;
            }
            i = i * b + e as usize;
        }
        Some(i)
    }

    fn exponents(&self, mut i: usize) -> Vec<u32> {
        let b = self.base();
        let mut e = vec![0u32; self.vars.len()];
        for k in (0..e.len()).rev() {
            e[k] = (i % b) as u32;
            i /= b;
        }
        e
    }

    /// Coefficient at `m`; panics if `m` exceeds the cap.
    pub fn coefficient(&self, m: &[u32]) -> &BigRational {
        &self.coeffs[self.index(m).expect("index within cap")]
    }

    pub fn set(&mut self, m: &[u32], c: BigRational) {
        let i = self.index(m).expect("index within cap");
        self.coeffs[i] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero coefficients in lexicographic index order.
    pub fn nonzero_terms(&self) -> Vec<(MultiIndex, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (MultiIndex(self.exponents(i)), c.clone()))
            .collect()
    }

    pub fn from_poly(p: &MPoly, cap: u32) -> Self {
        let mut s = Self::zero(p.vars().clone(), cap);
        for (m, c) in p.terms() {
            if let Some(i) = s.index(&m.0) {
                s.coeffs[i] = BigRational::from_integer(c.clone());
            }
        }
        s
    }

    /// Expansion of `f` by inversion of its denominator.
    pub fn expand(f: &RatFun, cap: u32) -> Result<Self> {
        let q = f.den();
        let q0 = q.constant_term();
        if q0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let q0 = BigRational::from_integer(q0);
        let mut s = Self::from_poly(f.num(), cap);
        let tail: Vec<(Vec<u32>, BigRational)> = q
            .terms()
            .iter()
            .filter(|(m, _)| m.total_degree() > 0 && m.maxdegree() <= cap)
            .map(|(m, c)| (m.0.clone(), BigRational::from_integer(c.clone())))
            .collect();
        let n = s.vars.len();
        let mut diff = vec![0u32; n];
        for i in 0..s.coeffs.len() {
            let g = s.exponents(i);
            let mut acc = std::mem::take(&mut s.coeffs[i]);
            for (a, c) in &tail {
                if a.iter().zip(&g).all(|(x, y)| x <= y) {
                    for k in 0..n {
                        diff[k] = g[k] - a[k];
                    }
                    let j = s.index(&diff).unwrap();
                    if !s.coeffs[j].is_zero() {
                        acc -= c * &s.coeffs[j];
                    }
                }
            }
            s.coeffs[i] = acc / &q0;
        }
        Ok(s)
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if !same_vars(&self.vars, &o.vars) {
            return Err(Error::VariableMismatch(self.vars.to_vec(), o.vars.to_vec()));
        }
        if self.cap != o.cap {
            return Err(Error::CapMismatch(self.cap, o.cap));
        }
        Ok(())
    }

    pub fn hadamard(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        Ok(TruncatedSeries {
            vars: self.vars.clone(),
            cap: self.cap,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        Ok(TruncatedSeries {
            vars: self.vars.clone(),
            cap: self.cap,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        TruncatedSeries {
            vars: self.vars.clone(),
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// Product with a polynomial, valid on the whole cap.
    pub fn mul_poly(&self, p: &MPoly) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.cap);
        let n = self.vars.len();
        let mut sum = vec![0u32; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = self.exponents(i);
            for (m, pc) in p.terms() {
                for k in 0..n {
                    sum[k] = g[k] + m.0[k];
                }
                if let Some(j) = out.index(&sum) {
                    out.coeffs[j] += c * BigRational::from_integer(pc.clone());
                }
            }
        }
        out
    }

    /// Partial derivative; the cap drops by one.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(self.cap > 0, "cannot differentiate a cap-0 truncation");
        let mut out = Self::zero(self.vars.clone(), self.cap - 1);
        for j in 0..out.coeffs.len() {
            let mut e = out.exponents(j);
            e[var] += 1;
            let k = BigInt::from(e[var]);
            out.coeffs[j] = self.coefficient(&e) * BigRational::from_integer(k);
        }
        out
    }

    /// Same series known on a smaller cap.
    pub fn restrict(&self, cap: u32) -> Self {
        assert!(cap <= self.cap);
        let mut out = Self::zero(self.vars.clone(), cap);
        for j in 0..out.coeffs.len() {
            let e = out.exponents(j);
            out.coeffs[j] = self.coefficient(&e).clone();
        }
        out
    }

    /// Coefficient sequence of a univariate series.
    pub fn univariate(&self) -> Vec<BigRational> {
        assert_eq!(self.vars.len(), 1);
        self.coeffs.clone()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }
}
