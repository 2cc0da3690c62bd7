//! Differential equation for the Hadamard product of two rational series.
//!
//! Variables on which one side is constant, or on which one side is
//! `g/(1 − x_i)` with `g` free of `x_i`, are peeled off first. The rest
//! go through a residue: with `F = f1(1/y)·f2(x·y)/∏y`, the product is the
//! coefficient of `∏y⁻¹` in `F`, and a `Q[x]`-linear relation among the
//! `∂_y^β ∂_{x_j}^γ F` yields the equation.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bounds::{hadamard_bounds, BoundReport};
use super::LinearODE;
use crate::algebra::modp::{first_dependency, rank_profile, PRIME};
use crate::algebra::{MPoly, MultiIndex, RatFun, Vars};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardOutcome {
    pub ode: LinearODE,
    pub report: BoundReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    /// Only exponent 0 contributes.
    Gone,
    /// Carried by `f1` alone.
    Param1,
    /// Carried by `f2` alone.
    Param2,
    Lipshitz,
}

/// An equation in `x_j` annihilating `f1 ⊙ f2`.
pub fn hadamard_ode(f1: &RatFun, f2: &RatFun, j: usize, limits: &Limits) -> Result<HadamardOutcome> {
    hadamard_ode_at_one(f1, f2, j, &[], limits)
}

/// An equation in `x_j` for `(f1 ⊙ f2)` with the variables of `fix` set to
/// 1; those variables are removed from the result.
///
/// The caller guarantees the substitution makes sense on the product: every
/// coefficient in the remaining variables must be a polynomial in the fixed
/// ones. Carrying it out before the relation search keeps the ansatz over
/// the remaining variables only.
pub fn hadamard_ode_at_one(f1: &RatFun, f2: &RatFun, j: usize, fix: &[usize], limits: &Limits) -> Result<HadamardOutcome> {
    f1.num().check_vars(f2.num())?;
    let vars = f1.vars().clone();
    let n = vars.len();
    if j >= n {
        return Err(Error::DistinguishedVariable(format!("index {j}")));
    }
    let mut fix = fix.to_vec();
    fix.sort_unstable();
    fix.dedup();
    if let Some(&bad) = fix.iter().find(|&&i| i >= n) {
        return Err(Error::UnknownVariable(format!("index {bad}")));
    }
    if fix.contains(&j) {
        return Err(Error::DistinguishedVariable(vars[j].clone()));
    }
    if !f1.constant_term_nonzero() || !f2.constant_term_nonzero() {
        return Err(Error::ZeroConstantTerm);
    }
    let mut report = hadamard_bounds(n as u64, &[f1.num(), f1.den(), f2.num(), f2.den()], limits.exact_bound_bits);

    let (mut g1, mut g2, roles) = assign_roles(f1, f2)?;
    let one = BigInt::one();
    for &i in &fix {
        match roles[i] {
            Role::Param1 => g1 = g1.substitute(i, &one)?,
            Role::Param2 => g2 = g2.substitute(i, &one)?,
            Role::Gone | Role::Lipshitz => {}
        }
    }
    let kept: Vars = (0..n).filter(|i| !fix.contains(i)).map(|i| vars[i].clone()).collect::<Vec<_>>().into();
    let jr = j - fix.iter().filter(|&&i| i < j).count();
    let lipshitz: Vec<usize> = (0..n).filter(|&i| roles[i] == Role::Lipshitz).collect();
    let ode = if roles[j] == Role::Gone {
        LinearODE::derivative_zero(kept, jr)
    } else if lipshitz.is_empty() {
        let h = g1.mul(&g2)?;
        let drop = |p: &MPoly| fix.iter().rev().fold(p.clone(), |acc, &i| acc.substitute(i, &one).drop_var(i));
        rational_ode(&RatFun::new(drop(h.num()), drop(h.den()))?, jr)?
    } else {
        lipshitz_ode(&g1, &g2, &lipshitz, j, &fix, limits)?
    };
    let ode = ode.normalized();

    let r = ode.order() as u64;
    let opd = ode.coeffs().iter().filter(|p| !p.is_zero()).map(|p| r + p.maxdegree() as u64).max().unwrap_or(r);
    report.set_measured("order_plus_degree", BigInt::from(opd));
    report.set_measured("coefficient", ode.norm_inf());
    Ok(HadamardOutcome { ode, report })
}

fn assign_roles(f1: &RatFun, f2: &RatFun) -> Result<(RatFun, RatFun, Vec<Role>)> {
    let vars = f1.vars().clone();
    let zero = BigInt::zero();
    let one = MPoly::one(vars.clone());
    let (mut g1, mut g2) = (f1.clone(), f2.clone());
    let mut roles = Vec::with_capacity(vars.len());
    for i in 0..vars.len() {
        let lin = &one - &MPoly::var(vars.clone(), i);
        let role = if g1.is_independent_of(i) {
            g2 = g2.substitute(i, &zero)?;
            Role::Gone
        } else if g2.is_independent_of(i) {
            g1 = g1.substitute(i, &zero)?;
            Role::Gone
        } else if g2.mul_poly(&lin).is_independent_of(i) {
            g2 = g2.substitute(i, &zero)?;
            Role::Param1
        } else if g1.mul_poly(&lin).is_independent_of(i) {
            g1 = g1.substitute(i, &zero)?;
            Role::Param2
        } else {
            Role::Lipshitz
        };
        roles.push(role);
    }
    Ok((g1, g2, roles))
}

/// First-order equation of a rational function: `PQ·h′ − (P′Q − PQ′)·h = 0`.
fn rational_ode(h: &RatFun, j: usize) -> Result<LinearODE> {
    let vars = h.vars().clone();
    let (p, q) = (h.num(), h.den());
    if p.is_zero() {
        return LinearODE::new(j, vec![MPoly::one(vars)]);
    }
    let d = &(&p.derivative(j) * q) - &(p * &q.derivative(j));
    if d.is_zero() {
        return Ok(LinearODE::derivative_zero(vars, j));
    }
    LinearODE::new(j, vec![-d, p * q])
}

/// `(P, Q)` over `x` followed by one `y` per Lipshitz variable.
fn residue_fraction(g1: &RatFun, g2: &RatFun, lip: &[usize]) -> (MPoly, MPoly, Vars) {
    let vars = g1.vars();
    let n = vars.len();
    let m = lip.len();
    let mut names: Vec<String> = vars.to_vec();
    names.extend(lip.iter().map(|&i| format!("_y{i}")));
    let fv: Vars = names.into();
    let e: Vec<u32> = lip.iter().map(|&i| g1.num().degree_in(i).max(g1.den().degree_in(i))).collect();
    let flip = |p: &MPoly| {
        MPoly::from_terms(
            fv.clone(),
            p.terms().iter().map(|(v, c)| {
                let mut w = v.0.clone();
                w.resize(n + m, 0);
                for (t, &i) in lip.iter().enumerate() {
                    w[n + t] = e[t] - v.0[i];
                    w[i] = 0;
                }
                (MultiIndex(w), c.clone())
            }),
        )
    };
    let scale = |p: &MPoly| {
        MPoly::from_terms(
            fv.clone(),
            p.terms().iter().map(|(v, c)| {
                let mut w = v.0.clone();
                w.resize(n + m, 0);
                for (t, &i) in lip.iter().enumerate() {
                    w[n + t] = v.0[i];
                }
                (MultiIndex(w), c.clone())
            }),
        )
    };
    let mut ys = vec![0u32; n + m];
    for t in 0..m {
        ys[n + t] = 1;
    }
    let ymono = MPoly::monomial(fv.clone(), MultiIndex(ys), BigInt::one());
    let p = &flip(g1.num()) * &scale(g2.num());
    let q = &(&ymono * &flip(g1.den())) * &scale(g2.den());
    // drop the common y-monomial
    let (gp, gq) = (p.monomial_gcd(), q.monomial_gcd());
    let mut common = vec![0u32; n + m];
    for t in n..n + m {
        common[t] = if p.is_zero() { gq.0[t] } else { gp.0[t].min(gq.0[t]) };
    }
    let common = MultiIndex(common);
    (p.div_monomial(&common), q.div_monomial(&common), fv)
}

type Key = (Vec<u32>, u32);

/// `P_α` with `Q^{|α|+1} ∂^α F = P_α`, α = (β over y, γ over x_j).
struct Derivatives {
    q: MPoly,
    dq: Vec<MPoly>,
    n: usize,
    j: usize,
    cache: HashMap<Key, MPoly>,
    qpow: Vec<MPoly>,
    budget: usize,
}

impl Derivatives {
    fn new(p: MPoly, q: MPoly, n: usize, m: usize, j: usize, budget: usize) -> Self {
        let mut dq: Vec<MPoly> = (0..m).map(|t| q.derivative(n + t)).collect();
        dq.push(q.derivative(j));
        let mut cache = HashMap::new();
        cache.insert((vec![0; m], 0), p);
        let qpow = vec![MPoly::one(q.vars().clone())];
        Derivatives { q, dq, n, j, cache, qpow, budget }
    }

    /// Product guarded by the term-pair budget.
    fn mul(&self, a: &MPoly, b: &MPoly) -> Result<MPoly> {
        if a.len().saturating_mul(b.len()) > self.budget {
            return Err(Error::ResourceExceeded(format!(
                "ansatz product of {} by {} terms (limit {})",
                a.len(),
                b.len(),
                self.budget
            )));
        }
        Ok(a * b)
    }

    fn get(&mut self, key: &Key) -> Result<MPoly> {
        if let Some(p) = self.cache.get(key) {
            return Ok(p.clone());
        }
        let (beta, gamma) = key;
        let (prev, var, slot) = if *gamma > 0 {
            ((beta.clone(), gamma - 1), self.j, self.dq.len() - 1)
        } else {
            let t = beta.iter().rposition(|&b| b > 0).expect("nonzero order");
            let mut b = beta.clone();
            b[t] -= 1;
            ((b, 0), self.n + t, t)
        };
        let pa = self.get(&prev)?;
        let s = prev.0.iter().sum::<u32>() + prev.1;
        let out = &self.mul(&self.q, &pa.derivative(var))? - &self.mul(&self.dq[slot], &pa)?.scale(&BigInt::from(s + 1));
        self.cache.insert(key.clone(), out.clone());
        Ok(out)
    }

    fn qpow(&mut self, e: usize) -> Result<MPoly> {
        while self.qpow.len() <= e {
            let next = self.mul(self.qpow.last().unwrap(), &self.q)?;
            self.qpow.push(next);
        }
        Ok(self.qpow[e].clone())
    }
}

/// All `(β, γ)` of total order `< bound`, by order then `γ` descending.
fn columns(m: usize, bound: u32) -> Vec<Key> {
    let mut out = Vec::new();
    for s in 0..bound {
        let mut level = Vec::new();
        for gamma in (0..=s).rev() {
            let mut betas = Vec::new();
            compositions(m, s - gamma, &mut vec![0; m], 0, &mut betas);
            for b in betas {
                level.push((b, gamma));
            }
        }
        out.extend(level);
    }
    out
}

fn compositions(m: usize, total: u32, cur: &mut Vec<u32>, i: usize, out: &mut Vec<Vec<u32>>) {
    if i + 1 >= m {
        if m > 0 {
            cur[m - 1] = total;
            out.push(cur.clone());
            cur[m - 1] = 0;
        } else if total == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in 0..=total {
        cur[i] = k;
        compositions(m, total - k, cur, i + 1, out);
    }
    cur[i] = 0;
}

fn binomial(n: u64, k: u64) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

fn lipshitz_ode(g1: &RatFun, g2: &RatFun, lip: &[usize], j: usize, fix: &[usize], limits: &Limits) -> Result<LinearODE> {
    let m = lip.len();
    let (mut p, mut q, _fv) = residue_fraction(g1, g2, lip);
    // fix is sorted; highest index first keeps the others valid
    let one = BigInt::one();
    for &i in fix.iter().rev() {
        p = p.substitute(i, &one).drop_var(i);
        q = q.substitute(i, &one).drop_var(i);
    }
    let n = g1.vars().len() - fix.len();
    let xvars: Vars = p.vars()[..n].to_vec().into();
    let j = j - fix.iter().filter(|&&i| i < j).count();
    let mut ders = Derivatives::new(p, q, n, m, j, limits.max_ansatz_products);
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    for bound in 1..=limits.max_ansatz as u32 {
        let ncols = binomial(bound as u64 + m as u64, m as u64 + 1);
        if ncols > limits.max_ansatz_columns as u128 {
            return Err(Error::ResourceExceeded(format!(
                "ansatz with bound {bound} needs {ncols} unknowns (limit {})",
                limits.max_ansatz_columns
            )));
        }
        let cols = columns(m, bound);
        // entries grouped by y-monomial
        let mut rows: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        let mut entries: Vec<Vec<(usize, MPoly)>> = Vec::with_capacity(cols.len());
        for key in &cols {
            let s = key.0.iter().sum::<u32>() + key.1;
            let qp = ders.qpow((bound - s - 1) as usize)?;
            let g = ders.get(key)?;
            let r = ders.mul(&qp, &g)?;
            let mut groups: BTreeMap<Vec<u32>, Vec<(MultiIndex, BigInt)>> = BTreeMap::new();
            for (mono, c) in r.terms() {
                groups.entry(mono.0[n..].to_vec()).or_default().push((MultiIndex(mono.0[..n].to_vec()), c.clone()));
            }
            let mut col = Vec::with_capacity(groups.len());
            for (ykey, terms) in groups {
                let next = rows.len();
                let row = *rows.entry(ykey).or_insert(next);
                col.push((row, MPoly::from_terms(xvars.clone(), terms)));
            }
            entries.push(col);
            if rows.len() > limits.max_ansatz_rows {
                break;
            }
        }
        if rows.len() > limits.max_ansatz_rows {
            return Err(Error::ResourceExceeded(format!(
                "ansatz with bound {bound} has more than {} equations",
                limits.max_ansatz_rows
            )));
        }
        for _attempt in 0..3 {
            let point: Vec<u64> = (0..n).map(|_| rng.gen_range(2..PRIME)).collect();
            if let Some(v) = try_kernel(&entries, rows.len(), &point, &xvars, limits.max_exact_support)? {
                return Ok(extract(&cols, &v, j, &xvars));
            }
        }
    }
    Err(Error::ResourceExceeded(format!("no relation found with ansatz bound up to {}", limits.max_ansatz)))
}

/// Exact kernel vector supported where the modular one at `point` is;
/// `None` if there is no dependency or the exact check fails.
fn try_kernel(
    entries: &[Vec<(usize, MPoly)>],
    nrows: usize,
    point: &[u64],
    xvars: &Vars,
    max_support: usize,
) -> Result<Option<Vec<MPoly>>> {
    let ncols = entries.len();
    let mut data = vec![0u64; nrows * ncols];
    for (c, col) in entries.iter().enumerate() {
        for (r, p) in col {
            data[r * ncols + c] = p.eval_mod(point, PRIME);
        }
    }
    let Some(modular) = first_dependency(nrows, ncols, &data, PRIME) else {
        return Ok(None);
    };
    let support: Vec<usize> = (0..ncols).filter(|&c| modular[c] != 0).collect();
    if support.is_empty() {
        return Ok(None);
    }
    if support.len() > max_support {
        return Err(Error::ResourceExceeded(format!(
            "relation candidate involves {} unknowns (exact limit {max_support})",
            support.len()
        )));
    }
    Ok(solve_on_support(entries, nrows, &data, &support, xvars))
}

/// Exact kernel vector of the columns in `support`, scaled so the last one is a determinant.
fn solve_on_support(
    entries: &[Vec<(usize, MPoly)>],
    nrows: usize,
    data: &[u64],
    support: &[usize],
    xvars: &Vars,
) -> Option<Vec<MPoly>> {
    let ncols = entries.len();
    let (&k, rest) = support.split_last()?;
    let s = rest.len();
    // independent rows for the other support columns
    let mut sub = vec![0u64; nrows * s];
    for (i, &c) in rest.iter().enumerate() {
        for (r, _) in &entries[c] {
            sub[r * s + i] = data[r * ncols + c];
        }
    }
    let (prow, _) = rank_profile(nrows, s, &sub, PRIME);
    if prow.len() < s {
        return None;
    }
    let zero = MPoly::zero(xvars.clone());
    let lookup = |r: usize, c: usize| -> MPoly {
        entries[c].iter().find(|(rr, _)| *rr == r).map_or_else(|| zero.clone(), |(_, p)| p.clone())
    };
    // fraction-free Gauss–Jordan on [A | b]
    let mut a: Vec<Vec<MPoly>> =
        prow.iter().map(|&r| rest.iter().chain(std::iter::once(&k)).map(|&c| lookup(r, c)).collect()).collect();
    let mut prev = MPoly::one(xvars.clone());
    for i in 0..s {
        if a[i][i].is_zero() {
            let sw = (i + 1..s).find(|&l| !a[l][i].is_zero())?;
            a.swap(i, sw);
        }
        let piv = a[i][i].clone();
        for l in 0..s {
            if l == i {
                continue;
            }
            let f = a[l][i].clone();
            for c in 0..=s {
                if c == i {
                    continue;
                }
                let t = &(&piv * &a[l][c]) - &(&f * &a[i][c]);
                a[l][c] = if prev.is_one() { t } else { t.div_exact(&prev)? };
            }
            a[l][i] = zero.clone();
        }
        prev = piv;
    }
    let mut v = vec![zero.clone(); ncols];
    for (i, &c) in rest.iter().enumerate() {
        v[c] = a[i][s].clone();
    }
    v[k] = if s == 0 { MPoly::one(xvars.clone()) } else { -&prev };
    // exact verification on every equation
    let mut acc: Vec<MPoly> = vec![zero.clone(); nrows];
    for &c in support {
        if v[c].is_zero() {
            continue;
        }
        for (r, p) in &entries[c] {
            acc[*r] = &acc[*r] + &(p * &v[c]);
        }
    }
    if acc.iter().all(MPoly::is_zero) && v.iter().any(|p| !p.is_zero()) {
        Some(v)
    } else {
        None
    }
}

/// Keeps the part of the relation at the lexicographically least `β`.
fn extract(cols: &[Key], v: &[MPoly], j: usize, xvars: &Vars) -> LinearODE {
    let bmin = cols
        .iter()
        .zip(v)
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, _)| k.0.clone())
        .min()
        .expect("nonzero kernel vector");
    let gmax = cols.iter().zip(v).filter(|(k, p)| k.0 == bmin && !p.is_zero()).map(|(k, _)| k.1).max().unwrap();
    let mut coeffs = vec![MPoly::zero(xvars.clone()); gmax as usize + 1];
    for (k, p) in cols.iter().zip(v) {
        if k.0 == bmin {
            coeffs[k.1 as usize] = p.clone();
        }
    }
    LinearODE::new(j, coeffs).expect("nonzero coefficient at the least β")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{vars, TruncatedSeries};

    fn u(c: &[i64]) -> MPoly {
        let v = vars(&["x"]);
        crate::algebra::UPoly(c.iter().map(|&k| BigInt::from(k)).collect()).trim().to_mpoly(&v, 0)
    }

    fn check(f1: &RatFun, f2: &RatFun, j: usize, cap: u32) -> HadamardOutcome {
        let out = hadamard_ode(f1, f2, j, &Limits::default()).unwrap();
        let cap = cap + out.ode.order() as u32;
        let h = TruncatedSeries::expand(f1, cap).unwrap().hadamard(&TruncatedSeries::expand(f2, cap).unwrap()).unwrap();
        assert!(out.ode.annihilates(&h).unwrap(), "{}", out.ode);
        assert!(out.report.violations().is_empty(), "{:?}", out.report);
        out
    }

    #[test]
    fn geometric_square() {
        let g = RatFun::new(u(&[1]), u(&[1, -1])).unwrap();
        let out = check(&g, &g, 0, 30);
        assert_eq!(out.ode.order(), 1);
    }

    #[test]
    fn fibonacci_times_powers_of_two() {
        let f = RatFun::new(u(&[1]), u(&[1, -1, -1])).unwrap();
        let g = RatFun::new(u(&[1]), u(&[1, -2])).unwrap();
        check(&f, &g, 0, 30);
    }

    #[test]
    fn central_binomial_like() {
        // 1/(1−x)^2 ⊙ 1/(1−x)^2 = Σ (n+1)² xⁿ
        let d = u(&[1, -2, 1]);
        let f = RatFun::new(u(&[1]), d).unwrap();
        check(&f, &f, 0, 30);
    }

    #[test]
    fn constant_side() {
        let v = vars(&["x"]);
        let f = RatFun::new(u(&[1]), u(&[1, -3])).unwrap();
        let one = RatFun::one(v);
        let out = check(&f, &one, 0, 30);
        assert_eq!(out.ode.order(), 1);
    }

    #[test]
    fn parameter_passthrough() {
        // 1/(1−xy) ⊙ 1/((1−x)(1−y)) = 1/(1−xy)
        let v = vars(&["x", "y"]);
        let x = MPoly::var(v.clone(), 0);
        let y = MPoly::var(v.clone(), 1);
        let one = MPoly::one(v.clone());
        let a = RatFun::new(one.clone(), &one - &(&x * &y)).unwrap();
        let c = RatFun::new(one.clone(), &(&one - &x) * &(&one - &y)).unwrap();
        check(&a, &c, 0, 12);
    }
}
