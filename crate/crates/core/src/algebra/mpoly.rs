use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Shared ordered list of variable names.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Exponent tuple, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn maxdegree(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`; caller guarantees `other` divides `self`.
    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the integers.
///
/// Terms are kept sorted by decreasing graded-lex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Vars,
    terms: Vec<(MultiIndex, BigInt)>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for MPoly {}

pub(crate) fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

impl MPoly {
    pub fn zero(vars: Vars) -> Self {
        MPoly { vars, terms: Vec::new() }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: Vars, c: BigInt) -> Self {
        let n = vars.len();
        Self::monomial(vars, MultiIndex::zero(n), c)
    }

    pub fn monomial(vars: Vars, m: MultiIndex, c: BigInt) -> Self {
        assert_eq!(m.0.len(), vars.len(), "monomial arity");
        if c.is_zero() {
            return Self::zero(vars);
        }
        MPoly { vars, terms: vec![(m, c)] }
    }

    /// The polynomial `x_i`.
    pub fn var(vars: Vars, i: usize) -> Self {
        let n = vars.len();
        Self::monomial(vars, MultiIndex::unit(n, i), BigInt::one())
    }

    pub fn from_terms<I>(vars: Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, BigInt)>,
    {
        let mut acc: HashMap<MultiIndex, BigInt> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial arity");
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(vars, acc)
    }

    fn from_map(vars: Vars, acc: HashMap<MultiIndex, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        MPoly { vars, terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn terms(&self) -> &[(MultiIndex, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.total_degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.total_degree() == 0 && self.terms[0].1.is_one()
    }

    pub fn leading(&self) -> Option<&(MultiIndex, BigInt)> {
        self.terms.first()
    }

    pub fn constant_term(&self) -> BigInt {
        match self.terms.last() {
            Some((m, c)) if m.total_degree() == 0 => c.clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn coefficient(&self, m: &MultiIndex) -> BigInt {
        match self.terms.binary_search_by(|(k, _)| m.cmp(k)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn check_vars(&self, other: &MPoly) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VariableMismatch(self.vars.to_vec(), other.vars.to_vec()))
        }
    }

    fn assert_vars(&self, other: &MPoly) {
        if let Err(e) = self.check_vars(other) {
            panic!("{e}");
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable (`deg_m`).
    pub fn maxdegree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.maxdegree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[i]).min().unwrap_or(0)
    }

    pub fn norm_inf(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn norm_1(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).sum()
    }

    /// Positive gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient. Idempotent.
    pub fn normalize(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    pub fn scale(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c / k)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &MultiIndex, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, d)| (k.add(m), d * c)).collect(),
        }
    }

    fn merge(&self, other: &MPoly, sign: &BigInt) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), &b[j].1 * sign));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1 * sign;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), c * sign)));
        MPoly { vars: self.vars.clone(), terms: out }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = Self::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| {
                let mut e = m.clone();
                e.0[i] -= 1;
                (e, c * BigInt::from(m.0[i]))
            });
        // derivative of a grlex-sorted list stays sorted
        MPoly { vars: self.vars.clone(), terms: terms.collect() }
    }

    pub fn is_independent_of(&self, i: usize) -> bool {
        self.terms.iter().all(|(m, _)| m.0[i] == 0)
    }

    /// Substitute an integer for `x_i`; the variable stays in the list.
    pub fn substitute(&self, i: usize, value: &BigInt) -> MPoly {
        let mut powers: Vec<BigInt> = vec![BigInt::one()];
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut k = m.clone();
            k.0[i] = 0;
            (k, c * &powers[e])
        });
        Self::from_terms(self.vars.clone(), terms.collect::<Vec<_>>())
    }

    /// Move to a new variable list; `map[k]` is the new index of old variable `k`.
    pub fn embed(&self, new_vars: &Vars, map: &[usize]) -> MPoly {
        assert_eq!(map.len(), self.vars.len());
        let n = new_vars.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; n];
            for (k, &x) in m.0.iter().enumerate() {
                e[map[k]] += x;
            }
            (MultiIndex(e), c.clone())
        });
        Self::from_terms(new_vars.clone(), terms.collect::<Vec<_>>())
    }

    /// Drop variable `i`, which must not occur.
    pub fn drop_var(&self, i: usize) -> MPoly {
        assert!(self.is_independent_of(i));
        let new_vars: Vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, v)| v.clone())
            .collect::<Vec<_>>()
            .into();
        self.drop_var_into(i, &new_vars)
    }

    pub fn drop_var_into(&self, i: usize, new_vars: &Vars) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.remove(i);
                (MultiIndex(e), c.clone())
            })
            .collect();
        MPoly { vars: new_vars.clone(), terms }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        self.assert_vars(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        if d.terms.len() == 1 {
            let (lm, lc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                let (q, r) = c.div_rem(lc);
                if !r.is_zero() {
                    return None;
                }
                out.push((m.sub(lm), q));
            }
            return Some(MPoly { vars: self.vars.clone(), terms: out });
        }
        let (lm, lc) = d.terms[0].clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            if !lm.divides(m) {
                return None;
            }
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let qm = m.sub(&lm);
            rem = rem.merge(&d.mul_monomial(&qm, &qc), &-BigInt::one());
            quot.push((qm, qc));
        }
        Some(MPoly { vars: self.vars.clone(), terms: quot })
    }

    /// Largest monomial dividing every term.
    pub fn monomial_gcd(&self) -> MultiIndex {
        let n = self.nvars();
        if self.is_zero() {
            return MultiIndex::zero(n);
        }
        let mut g = self.terms[0].0.clone();
        for (m, _) in &self.terms[1..] {
            for k in 0..n {
                g.0[k] = g.0[k].min(m.0[k]);
            }
        }
        g
    }

    pub fn div_monomial(&self, m: &MultiIndex) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.sub(m), c.clone())).collect(),
        }
    }

    /// Evaluate modulo `p` at the given residues.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc: u128 = 0;
        for (m, c) in &self.terms {
            let mut t = crate::algebra::modp::bigint_mod(c, &pb);
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = (t as u128 * crate::algebra::modp::pow_mod(point[k], e as u64, p) as u128 % p as u128) as u64;
                }
            }
            acc = (acc + t as u128) % p as u128;
        }
        acc as u64
    }

    /// Evaluate at integer values for every variable.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[k].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.assert_vars(rhs);
        self.merge(rhs, &BigInt::one())
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.assert_vars(rhs);
        self.merge(rhs, &-BigInt::one())
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.assert_vars(rhs);
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero(self.vars.clone());
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<MultiIndex, BigInt> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                match acc.entry(ma.add(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                }
            }
        }
        MPoly::from_map(self.vars.clone(), acc)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        (&self).neg()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_const = m.total_degree() == 0;
            if is_const || !a.is_one() {
                write!(f, "{a}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars[k])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
