//! Dense univariate integer polynomials, used for gcd clean-up.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mpoly::{MPoly, MultiIndex, Vars};

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<BigInt>);

impl UPoly {
    pub fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &BigInt {
        self.0.last().expect("nonzero")
    }

    /// Read a polynomial that only involves variable `i`.
    pub fn from_mpoly(p: &MPoly, i: usize) -> Option<UPoly> {
        let mut v = vec![BigInt::zero(); p.degree_in(i) as usize + 1];
        for (m, c) in p.terms() {
            if m.0.iter().enumerate().any(|(k, &e)| k != i && e != 0) {
                return None;
            }
            v[m.0[i] as usize] = c.clone();
        }
        Some(UPoly(v).trim())
    }

    pub fn to_mpoly(&self, vars: &Vars, i: usize) -> MPoly {
        let n = vars.len();
        MPoly::from_terms(
            vars.clone(),
            self.0.iter().enumerate().map(|(d, c)| {
                let mut e = vec![0; n];
                e[i] = d as u32;
                (MultiIndex(e), c.clone())
            }),
        )
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        UPoly(self.0.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder of `self` by `d`.
    fn prem(&self, d: &UPoly) -> UPoly {
        let mut r = self.0.clone();
        let dl = d.lead().clone();
        let dd = d.degree();
        while r.len() > dd && !r.is_empty() {
            let rl = r.last().unwrap().clone();
            if rl.is_zero() {
                r.pop();
                continue;
            }
            let shift = r.len() - 1 - dd;
            for c in r.iter_mut() {
                *c *= &dl;
            }
            for (k, dc) in d.0.iter().enumerate() {
                r[shift + k] -= &rl * dc;
            }
            r.pop();
        }
        UPoly(r).trim()
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        if d.is_zero() {
            return None;
        }
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() < d.0.len() {
            return if self.is_zero() { Some(UPoly(vec![])) } else { None };
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (qc, rem) = r[k + dd].div_rem(d.lead());
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &qc * dc;
            }
            q[k] = qc;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(UPoly(q).trim())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: &[i64]) -> UPoly {
        UPoly(v.iter().map(|&c| BigInt::from(c)).collect()).trim()
    }

    #[test]
    fn gcd_of_products() {
        // (x-1)(x+2) and (x-1)(3x+5)
        let a = u(&[-2, 1, 1]);
        let b = u(&[-5, 2, 3]);
        assert_eq!(a.gcd(&b), u(&[-1, 1]));
        assert!(u(&[1, 1]).gcd(&u(&[1, 2])).is_one());
    }

    #[test]
    fn exact_division() {
        let a = u(&[-2, 1, 1]);
        assert_eq!(a.div_exact(&u(&[-1, 1])).unwrap(), u(&[2, 1]));
        assert!(a.div_exact(&u(&[1, 1])).is_none());
    }
}
