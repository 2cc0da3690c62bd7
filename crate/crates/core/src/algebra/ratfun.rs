use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mpoly::{MPoly, Vars};
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Quotient of two integer polynomials.
///
/// Integer content is always removed and the denominator has a positive
/// leading coefficient. Univariate fractions are fully reduced; multivariate
/// ones only when [`RatFun::cancel_factor`] is asked to.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.num.check_vars(&other.num).is_ok() && &self.num * &other.den == &other.num * &self.den
    }
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        num.check_vars(&den)?;
        if den.is_zero() {
            return Err(Error::Internal("zero denominator".into()));
        }
        Ok(Self::build(num, den))
    }

    fn build(mut num: MPoly, mut den: MPoly) -> Self {
        if num.is_zero() {
            let vars = den.vars().clone();
            return RatFun { num, den: MPoly::one(vars) };
        }
        if num.nvars() == 1 {
            let a = UPoly::from_mpoly(&num, 0).unwrap();
            let b = UPoly::from_mpoly(&den, 0).unwrap();
            let g = a.gcd(&b);
            if g.degree() > 0 {
                let vars = num.vars().clone();
                num = a.div_exact(&g).unwrap().to_mpoly(&vars, 0);
                den = b.div_exact(&g).unwrap().to_mpoly(&vars, 0);
            }
        }
        let mut g = num.content().gcd(&den.content());
        if den.leading().unwrap().1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            num = num.div_scalar_exact(&g);
            den = den.div_scalar_exact(&g);
        }
        RatFun { num, den }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let one = MPoly::one(p.vars().clone());
        Self::build(p, one)
    }

    pub fn zero(vars: Vars) -> Self {
        Self::from_poly(MPoly::zero(vars))
    }

    pub fn one(vars: Vars) -> Self {
        Self::from_poly(MPoly::one(vars))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFun) -> Result<RatFun> {
        self.num.check_vars(&o.num)?;
        if self.den == o.den {
            return Ok(Self::build(&self.num + &o.num, self.den.clone()));
        }
        Ok(Self::build(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        ))
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFun) -> Result<RatFun> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> Result<RatFun> {
        self.num.check_vars(&o.num)?;
        Ok(Self::build(&self.num * &o.num, &self.den * &o.den))
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        self.num.check_vars(&o.num)?;
        if o.is_zero() {
            return Err(Error::Internal("division by zero rational function".into()));
        }
        Ok(Self::build(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn mul_poly(&self, p: &MPoly) -> RatFun {
        Self::build(&self.num * p, self.den.clone())
    }

    pub fn derivative(&self, i: usize) -> RatFun {
        let n = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        Self::build(n, &self.den * &self.den)
    }

    pub fn is_independent_of(&self, i: usize) -> bool {
        (&(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i))).is_zero()
    }

    /// Substitute an integer for `x_i`; the denominator must stay nonzero.
    pub fn substitute(&self, i: usize, value: &BigInt) -> Result<RatFun> {
        let den = self.den.substitute(i, value);
        if den.is_zero() {
            return Err(Error::Internal(format!(
                "denominator vanishes at {} = {value}",
                self.vars()[i]
            )));
        }
        Ok(Self::build(self.num.substitute(i, value), den))
    }

    pub fn embed(&self, new_vars: &Vars, map: &[usize]) -> RatFun {
        Self::build(self.num.embed(new_vars, map), self.den.embed(new_vars, map))
    }

    pub fn drop_var(&self, i: usize) -> RatFun {
        let num = self.num.drop_var(i);
        let vars = num.vars().clone();
        Self::build(num, self.den.drop_var_into(i, &vars))
    }

    /// Divide out `f` from numerator and denominator as often as it divides both.
    pub fn cancel_factor(&self, f: &MPoly) -> RatFun {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if f.is_constant() || num.is_zero() {
            return self.clone();
        }
        while let (Some(a), Some(b)) = (num.div_exact(f), den.div_exact(f)) {
            num = a;
            den = b;
        }
        Self::build(num, den)
    }

    pub fn constant_term_nonzero(&self) -> bool {
        !self.den.constant_term().is_zero()
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
