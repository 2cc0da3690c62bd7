//! Specialization, closure under sum and conversion to recurrences.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LinearODE, PRecurrence};
use crate::algebra::{nullspace_vector, MPoly, PolyMatrix, UPoly, Vars};
use crate::error::{Error, Result};

/// Sets each variable of `fix` to 1, first removing the largest power of
/// `(y − 1)` common to all coefficients.
pub fn specialize_ode_to_one(ode: &LinearODE, fix: &[usize]) -> Result<LinearODE> {
    let vars = ode.vars().clone();
    for &y in fix {
        if y >= vars.len() {
            return Err(Error::UnknownVariable(format!("index {y}")));
        }
        if y == ode.var() {
            return Err(Error::DistinguishedVariable(vars[y].clone()));
        }
    }
    let mut order: Vec<usize> = fix.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut coeffs = ode.coeffs().to_vec();
    let mut var = ode.var();
    let one = BigInt::one();
    // highest index first so earlier indices stay valid
    for &y in order.iter().rev() {
        let vs = coeffs[0].vars().clone();
        let factor = &MPoly::var(vs.clone(), y) - &MPoly::one(vs.clone());
        while coeffs.iter().all(|p| p.substitute(y, &one).is_zero()) {
            coeffs = coeffs.iter().map(|p| p.div_exact(&factor).expect("vanishing at 1 means divisible")).collect();
        }
        coeffs = coeffs.iter().map(|p| p.substitute(y, &one).drop_var(y)).collect();
        if y < var {
            var -= 1;
        }
    }
    Ok(LinearODE::new(var, coeffs)?.normalized())
}

fn upoly(p: &MPoly) -> Result<UPoly> {
    if p.nvars() != 1 {
        return Err(Error::Internal("expected univariate coefficients".into()));
    }
    Ok(UPoly::from_mpoly(p, 0).unwrap())
}

/// Numerators `W_k` with `∂^k f = Σ_i W_k[i] ∂^i f / p^k`, `p` the leading
/// coefficient, for `k = 0..=upto`.
fn derivative_basis(ode: &LinearODE, upto: usize) -> Vec<Vec<MPoly>> {
    let r = ode.order();
    let vs = ode.vars().clone();
    let z = MPoly::zero(vs.clone());
    let a = ode.coeffs();
    let p = ode.leading();
    let dp = p.derivative(0);
    let mut out = Vec::with_capacity(upto + 1);
    let mut w: Vec<MPoly> = (0..r).map(|i| if i == 0 { MPoly::one(vs.clone()) } else { z.clone() }).collect();
    out.push(w.clone());
    for e in 0..upto {
        let eb = BigInt::from(e);
        let last = if r > 0 { w[r - 1].clone() } else { z.clone() };
        let next: Vec<MPoly> = (0..r)
            .map(|i| {
                let mut t = &(p * &w[i].derivative(0)) - &(&dp * &w[i]).scale(&eb);
                if i > 0 {
                    t = &t + &(p * &w[i - 1]);
                }
                &t - &(&last * &a[i])
            })
            .collect();
        w = next;
        out.push(w.clone());
    }
    out
}

/// An operator annihilating `f + g` whenever `a(f) = 0` and `b(g) = 0`.
pub fn ode_sum(a: &LinearODE, b: &LinearODE) -> Result<LinearODE> {
    if a.vars()[..] != b.vars()[..] {
        return Err(Error::VariableMismatch(a.vars().to_vec(), b.vars().to_vec()));
    }
    if a.var() != b.var() {
        return Err(Error::DistinguishedVariable(b.var_name().to_string()));
    }
    upoly(a.leading())?;
    let vs: Vars = a.vars().clone();
    let (ra, rb) = (a.order(), b.order());
    let n = ra + rb;
    let wa = derivative_basis(a, n);
    let wb = derivative_basis(b, n);
    let (pa, pb) = (a.leading(), b.leading());
    let mut m = PolyMatrix::zeros(vs.clone(), n, n + 1);
    let mut pbk = MPoly::one(vs.clone());
    let mut pak = MPoly::one(vs.clone());
    for k in 0..=n {
        for i in 0..ra {
            m.set(i, k, &pbk * &wa[k][i]);
        }
        for i in 0..rb {
            m.set(ra + i, k, &pak * &wb[k][i]);
        }
        pbk = &pbk * pb;
        pak = &pak * pa;
    }
    let c = nullspace_vector(&m)?;
    let papb = pa * pb;
    let mut scale = MPoly::one(vs.clone());
    let mut q = Vec::with_capacity(n + 1);
    for ck in c {
        q.push(&ck * &scale);
        scale = &scale * &papb;
    }
    Ok(LinearODE::new(a.var(), q)?.normalized())
}

/// `Σ_{k=−s}^{S} t_k(n) u_{n+k} = 0` satisfied by the coefficients of any
/// power series solution.
pub fn ode_to_recurrence(ode: &LinearODE) -> Result<PRecurrence> {
    for p in ode.coeffs() {
        upoly(p)?;
    }
    // divide out the common power of x
    let mut shift = u32::MAX;
    for p in ode.coeffs().iter().filter(|p| !p.is_zero()) {
        shift = shift.min(p.min_degree_in(0));
    }
    let coeffs: Vec<UPoly> = ode
        .coeffs()
        .iter()
        .map(|p| {
            let u = UPoly::from_mpoly(p, 0).unwrap();
            if u.is_zero() {
                u
            } else {
                UPoly(u.0[shift as usize..].to_vec())
            }
        })
        .collect();
    let d = coeffs.iter().filter(|u| !u.is_zero()).map(UPoly::degree).max().unwrap_or(0) as i64;
    let r = coeffs.len() as i64 - 1;
    let mut jmin = i64::MAX;
    let mut jmax = i64::MIN;
    for (k, u) in coeffs.iter().enumerate() {
        for (kp, c) in u.0.iter().enumerate() {
            if !c.is_zero() {
                let j = k as i64 - kp as i64;
                jmin = jmin.min(j);
                jmax = jmax.max(j);
            }
        }
    }
    if jmax == i64::MIN {
        return Err(Error::TrivialOde);
    }
    let s = (-jmin).max(0);
    let nv = crate::algebra::vars(&["n"]);
    let nvar = MPoly::var(nv.clone(), 0);
    let mut ts = Vec::new();
    for j in -s..=jmax {
        let mut t = MPoly::zero(nv.clone());
        for k in 0..=r {
            let kp = k - j;
            if kp < 0 || kp as usize >= coeffs[k as usize].0.len() {
                continue;
            }
            let a = &coeffs[k as usize].0[kp as usize];
            if a.is_zero() {
                continue;
            }
            // ∏_{ℓ=1}^{k} (n + j − ℓ + 1)
            let mut prod = MPoly::constant(nv.clone(), a.clone());
            for l in 1..=k {
                let f = &nvar + &MPoly::constant(nv.clone(), BigInt::from(j - l + 1));
                prod = &prod * &f;
            }
            t = &t + &prod;
        }
        ts.push(UPoly::from_mpoly(&t, 0).unwrap());
    }
    // some coefficient keeps a constant term, so S = jmax ≥ 0
    PRecurrence::new(s as u32, jmax as u32, ts, d as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{vars, RatFun, TruncatedSeries};
    use num_rational::BigRational;

    fn xpoly(c: &[i64]) -> MPoly {
        let v = vars(&["x"]);
        UPoly(c.iter().map(|&k| BigInt::from(k)).collect()).trim().to_mpoly(&v, 0)
    }

    fn exp_x2(len: usize) -> Vec<BigRational> {
        // e^{x²}: u_{2k} = 1/k!
        let mut u = vec![BigRational::zero(); len];
        let mut f = BigInt::one();
        for k in 0..len.div_ceil(2) {
            if k > 0 {
                f *= BigInt::from(k);
            }
            if 2 * k < len {
                u[2 * k] = BigRational::new(BigInt::one(), f.clone());
            }
        }
        u
    }

    #[test]
    fn exp_square_recurrence() {
        let ode = LinearODE::new(0, vec![xpoly(&[0, -2]), xpoly(&[1])]).unwrap();
        let rec = ode_to_recurrence(&ode).unwrap();
        assert_eq!((rec.s(), rec.big_s(), rec.n0()), (1, 1, 1));
        assert_eq!(rec.t(1), &UPoly(vec![1.into(), 1.into()]));
        assert_eq!(rec.t(-1), &UPoly(vec![BigInt::from(-2)]));
        assert!(rec.t(0).is_zero());
        assert!(rec.annihilates(&exp_x2(42), 40));
    }

    #[test]
    fn geometric_recurrence() {
        let ode = LinearODE::new(0, vec![xpoly(&[-1]), xpoly(&[1, -1])]).unwrap();
        let rec = ode_to_recurrence(&ode).unwrap();
        assert_eq!((rec.s(), rec.big_s(), rec.n0()), (0, 1, 1));
        assert_eq!(rec.t(1), &UPoly(vec![1.into(), 1.into()]));
        assert_eq!(rec.t(0), &UPoly(vec![BigInt::from(-1), BigInt::from(-1)]));
        let ones = vec![BigRational::one(); 45];
        assert!(rec.annihilates(&ones, 40));
    }

    #[test]
    fn specialize_plain_and_divisible() {
        let v = vars(&["x", "y"]);
        let x = MPoly::var(v.clone(), 0);
        let y = MPoly::var(v.clone(), 1);
        let one = MPoly::one(v.clone());
        let ode = LinearODE::new(0, vec![-&y, &one - &(&x * &y)]).unwrap();
        let s = specialize_ode_to_one(&ode, &[1]).unwrap();
        let want = LinearODE::new(0, vec![xpoly(&[-1]), xpoly(&[1, -1])]).unwrap().normalized();
        assert_eq!(s, want);
        let ym1 = &y - &one;
        let ode = LinearODE::new(0, vec![-&ym1, &ym1 * &(&one - &x)]).unwrap();
        assert_eq!(specialize_ode_to_one(&ode, &[1]).unwrap(), want);
        assert!(matches!(specialize_ode_to_one(&ode, &[0]), Err(Error::DistinguishedVariable(_))));
    }

    #[test]
    fn sum_of_geometrics() {
        let g = LinearODE::new(0, vec![xpoly(&[-1]), xpoly(&[1, -1])]).unwrap();
        let s = ode_sum(&g, &g).unwrap();
        let v = vars(&["x"]);
        let two = MPoly::constant(v.clone(), 2.into());
        let f = RatFun::new(two, xpoly(&[1, -1])).unwrap();
        assert!(s.annihilates(&TruncatedSeries::expand(&f, 30).unwrap()).unwrap());
    }

    #[test]
    fn sum_exp_square_and_geometric() {
        let e = LinearODE::new(0, vec![xpoly(&[0, -2]), xpoly(&[1])]).unwrap();
        let g = LinearODE::new(0, vec![xpoly(&[-1]), xpoly(&[1, -1])]).unwrap();
        let s = ode_sum(&e, &g).unwrap();
        let v = vars(&["x"]);
        let mut t = TruncatedSeries::zero(v, 30);
        for (n, c) in exp_x2(31).into_iter().enumerate() {
            t.set(&[n as u32], c + BigRational::one());
        }
        assert!(s.annihilates(&t).unwrap());
        assert!(s.order() <= 2);
        // difference handled by the same operator
        let mut d = TruncatedSeries::zero(t.vars().clone(), 30);
        for (n, c) in exp_x2(31).into_iter().enumerate() {
            d.set(&[n as u32], c - BigRational::one());
        }
        assert!(s.annihilates(&d).unwrap());
    }
}
