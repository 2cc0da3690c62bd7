//! Exact rational simplex (phase one only) and branch-and-bound for
//! feasibility of `A x = b, l ≤ x ≤ u` over the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct System {
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<BigInt>,
    pub lower: Vec<BigInt>,
    pub upper: Vec<Option<BigInt>>,
}

impl System {
    pub fn new(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, vars: usize) -> Self {
        System { a, b, lower: vec![BigInt::zero(); vars], upper: vec![None; vars] }
    }

    pub fn vars(&self) -> usize {
        self.lower.len()
    }
}

/// A rational point of the relaxation, or `None` when it is empty.
pub fn lp_feasible(s: &System) -> Option<Vec<BigRational>> {
    let n = s.vars();
    for i in 0..n {
        if let Some(u) = &s.upper[i] {
            if u < &s.lower[i] {
                return None;
            }
        }
    }
    // shift x = l + y
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let bounded: Vec<usize> = (0..n).filter(|&i| s.upper[i].is_some()).collect();
    let width = n + bounded.len();
    for (r, row) in s.a.iter().enumerate() {
        let mut b = s.b[r].clone();
        for (j, c) in row.iter().enumerate() {
            b -= c * &s.lower[j];
        }
        let mut v: Vec<BigRational> = row.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        v.resize(width, BigRational::zero());
        rows.push(v);
        rhs.push(BigRational::from_integer(b));
    }
    for (k, &i) in bounded.iter().enumerate() {
        let mut v = vec![BigRational::zero(); width];
        v[i] = BigRational::one();
        v[n + k] = BigRational::one();
        rows.push(v);
        rhs.push(BigRational::from_integer(s.upper[i].clone().unwrap() - &s.lower[i]));
    }
    let y = phase_one(rows, rhs, width)?;
    Some((0..n).map(|i| &y[i] + BigRational::from_integer(s.lower[i].clone())).collect())
}

/// Finds `y ≥ 0` with `rows · y = rhs` by minimizing artificial variables.
fn phase_one(mut rows: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>, width: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    for r in 0..m {
        if rhs[r].is_negative() {
            rhs[r] = -rhs[r].clone();
            for c in rows[r].iter_mut() {
                *c = -c.clone();
            }
        }
    }
    let cols = width + m;
    let mut t: Vec<Vec<BigRational>> = rows
        .into_iter()
        .enumerate()
        .map(|(r, mut row)| {
            row.resize(cols, BigRational::zero());
            row[width + r] = BigRational::one();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (width..cols).collect();
    // reduced costs of the phase-one objective
    let mut cost = vec![BigRational::zero(); cols];
    let mut obj = BigRational::zero();
    for r in 0..m {
        for j in 0..width {
            cost[j] -= &t[r][j];
        }
        obj -= &rhs[r];
    }
    while let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for r in 0..m {
            if t[r][enter].is_positive() {
                let ratio = &rhs[r] / &t[r][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[r] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
        }
        let Some(r) = leave else {
            // unbounded ray in a bounded-below objective cannot happen
            break;
        };
        let piv = t[r][enter].clone();
        for c in t[r].iter_mut() {
            *c /= &piv;
        }
        rhs[r] /= &piv;
        let prow = t[r].clone();
        let prhs = rhs[r].clone();
        for i in 0..m {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for (c, p) in t[i].iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *c -= &f * p;
                    }
                }
                rhs[i] -= &f * &prhs;
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (c, p) in cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *c -= &f * p;
                }
            }
            obj -= &f * &prhs;
        }
        basis[r] = enter;
    }
    if !obj.is_zero() {
        return None;
    }
    let mut y = vec![BigRational::zero(); width];
    for (r, &b) in basis.iter().enumerate() {
        if b < width {
            y[b] = rhs[r].clone();
        }
    }
    Some(y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerOutcome {
    Feasible(Vec<BigInt>),
    Infeasible,
    NodeLimit,
}

/// Depth-first branch and bound.
///
/// `cap` is an a-priori bound on some solution (when one exists); it is
/// imposed on every variable that gets branched upward, which makes the
/// search finite.
pub fn integer_feasible(s: &System, cap: &BigInt, node_limit: usize) -> IntegerOutcome {
    let mut nodes = 0usize;
    let mut stack = vec![(s.lower.clone(), s.upper.clone())];
    while let Some((lower, upper)) = stack.pop() {
        nodes += 1;
        if nodes > node_limit {
            return IntegerOutcome::NodeLimit;
        }
        let sys = System { a: s.a.clone(), b: s.b.clone(), lower, upper };
        let Some(x) = lp_feasible(&sys) else {
            continue;
        };
        match x.iter().position(|v| !v.is_integer()) {
            None => return IntegerOutcome::Feasible(x.iter().map(|v| v.to_integer()).collect()),
            Some(i) => {
                let fl = x[i].floor().to_integer();
                let mut up_lower = sys.lower.clone();
                up_lower[i] = &fl + BigInt::one();
                let mut up_upper = sys.upper.clone();
                if up_upper[i].is_none() {
                    up_upper[i] = Some(cap.clone());
                }
                let mut down_upper = sys.upper.clone();
                down_upper[i] = Some(match &sys.upper[i] {
                    Some(u) if u < &fl => u.clone(),
                    _ => fl,
                });
                stack.push((up_lower, up_upper));
                stack.push((sys.lower.clone(), down_upper));
            }
        }
    }
    IntegerOutcome::Infeasible
}
