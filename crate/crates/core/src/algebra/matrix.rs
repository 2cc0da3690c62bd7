use num_bigint::BigInt;

use super::mpoly::{MPoly, Vars};
use super::ratfun::RatFun;
use crate::error::{Error, Result};

/// Dense matrix of polynomials over a shared variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    vars: Vars,
    rows: usize,
    cols: usize,
    entries: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn zeros(vars: Vars, rows: usize, cols: usize) -> Self {
        let z = MPoly::zero(vars.clone());
        PolyMatrix { vars, rows, cols, entries: vec![z; rows * cols] }
    }

    pub fn identity(vars: Vars, n: usize) -> Self {
        let mut m = Self::zeros(vars.clone(), n, n);
        for i in 0..n {
            m.set(i, i, MPoly::one(vars.clone()));
        }
        m
    }

    pub fn from_rows(vars: Vars, rows: Vec<Vec<MPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            for e in row {
                if !super::mpoly::same_vars(&vars, e.vars()) {
                    return Err(Error::VariableMismatch(vars.to_vec(), e.vars().to_vec()));
                }
                entries.push(e);
            }
        }
        Ok(PolyMatrix { vars, rows: r, cols: c, entries })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut m = Self::zeros(self.vars.clone(), rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[MPoly]) -> Vec<MPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = MPoly::zero(self.vars.clone());
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.get(i, j).is_zero() {
                        acc = &acc + &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Largest row 1-norm, the `R₁` of the determinant bound.
    pub fn max_row_norm1(&self) -> BigInt {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).norm_1()).sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }

    /// Fraction-free row reduction; returns pivot rows and columns.
    fn bareiss_profile(&self) -> (Vec<usize>, Vec<usize>, MPoly, bool) {
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut row_ids: Vec<usize> = (0..rows).collect();
        let mut prev = MPoly::one(self.vars.clone());
        let mut prow = Vec::new();
        let mut pcol = Vec::new();
        let mut k = 0;
        let mut swaps = false;
        for c in 0..cols {
            if k == rows {
                break;
            }
            // prefer the sparsest pivot to limit growth
            let Some(piv) = (k..rows)
                .filter(|&i| !a[i * cols + c].is_zero())
                .min_by_key(|&i| a[i * cols + c].len())
            else {
                continue;
            };
            if piv != k {
                for j in 0..cols {
                    a.swap(piv * cols + j, k * cols + j);
                }
                row_ids.swap(piv, k);
                swaps = !swaps;
            }
            let p = a[k * cols + c].clone();
            for i in (k + 1)..rows {
                let f = a[i * cols + c].clone();
                for j in (c + 1)..cols {
                    let t = &(&a[i * cols + j] * &p) - &(&f * &a[k * cols + j]);
                    a[i * cols + j] = if prev.is_one() {
                        t
                    } else {
                        t.div_exact(&prev).expect("Bareiss division is exact")
                    };
                }
                a[i * cols + c] = MPoly::zero(self.vars.clone());
            }
            prev = p;
            prow.push(row_ids[k]);
            pcol.push(c);
            k += 1;
        }
        (prow, pcol, prev, swaps)
    }

    pub fn rank(&self) -> usize {
        self.bareiss_profile().1.len()
    }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &PolyMatrix) -> Result<MPoly> {
    if m.rows != m.cols {
        return Err(Error::NonSquare(m.rows, m.cols));
    }
    if m.rows == 0 {
        return Ok(MPoly::one(m.vars.clone()));
    }
    let n = m.rows;
    let mut a = m.entries.clone();
    let mut prev = MPoly::one(m.vars.clone());
    let mut negate = false;
    for k in 0..n {
        let Some(piv) = (k..n)
            .filter(|&i| !a[i * n + k].is_zero())
            .min_by_key(|&i| a[i * n + k].len())
        else {
            return Ok(MPoly::zero(m.vars.clone()));
        };
        if piv != k {
            for j in 0..n {
                a.swap(piv * n + j, k * n + j);
            }
            negate = !negate;
        }
        let p = a[k * n + k].clone();
        for i in (k + 1)..n {
            let f = a[i * n + k].clone();
            for j in (k + 1)..n {
                let t = &(&a[i * n + j] * &p) - &(&f * &a[k * n + j]);
                a[i * n + j] = if prev.is_one() {
                    t
                } else {
                    t.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
        }
        prev = p;
    }
    let d = a[n * n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Solve `m·v = b` as quotients of determinants.
pub fn cramer_solve(m: &PolyMatrix, b: &[MPoly]) -> Result<Vec<RatFun>> {
    if m.rows != m.cols {
        return Err(Error::NonSquare(m.rows, m.cols));
    }
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, got: b.len() });
    }
    let det = determinant(m)?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    (0..m.cols)
        .map(|i| {
            let mut mi = m.clone();
            for (r, x) in b.iter().enumerate() {
                mi.set(r, i, x.clone());
            }
            RatFun::new(determinant(&mi)?, det.clone())
        })
        .collect()
}

/// Kernel vector from Cramer minors on a nonsingular pivot block.
///
/// `prows`/`pcols` index a nonsingular square block and `k` is a column in
/// the span of `pcols`. Entries are minors or their negations.
pub fn kernel_from_pivots(m: &PolyMatrix, prows: &[usize], pcols: &[usize], k: usize) -> Vec<MPoly> {
    let a = m.submatrix(prows, pcols);
    let mut v = vec![MPoly::zero(m.vars.clone()); m.cols];
    let det = determinant(&a).expect("square");
    for (idx, &c) in pcols.iter().enumerate() {
        let mut ai = a.clone();
        for (r, &row) in prows.iter().enumerate() {
            ai.set(r, idx, m.get(row, k).clone());
        }
        v[c] = determinant(&ai).expect("square");
    }
    v[k] = -det;
    v
}

/// A nonzero `v` with `m·v = 0`.
pub fn nullspace_vector(m: &PolyMatrix) -> Result<Vec<MPoly>> {
    let (prow, pcol, _, _) = m.bareiss_profile();
    let Some(k) = (0..m.cols).find(|c| !pcol.contains(c)) else {
        return Err(Error::FullColumnRank);
    };
    // all columns before the first non-pivot are pivots
    let r = k;
    Ok(kernel_from_pivots(m, &prow[..r], &pcol[..r], k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mpoly::vars;

    fn c(v: &Vars, k: i64) -> MPoly {
        MPoly::constant(v.clone(), BigInt::from(k))
    }

    #[test]
    fn identity_determinant() {
        let v = vars(&["x"]);
        assert!(determinant(&PolyMatrix::identity(v, 3)).unwrap().is_one());
    }

    #[test]
    fn triangular_determinant() {
        let v = vars(&["x"]);
        let x = MPoly::var(v.clone(), 0);
        let one = c(&v, 1);
        let a = &one - &x;
        let m = PolyMatrix::from_rows(v.clone(), vec![vec![a.clone(), -&x], vec![c(&v, 0), a.clone()]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), &a * &a);
        assert_eq!(determinant(&PolyMatrix::zeros(v, 2, 3)), Err(Error::NonSquare(2, 3)));
    }

    #[test]
    fn kernel_two_columns() {
        let v = vars(&["x", "y"]);
        let a = &MPoly::var(v.clone(), 0) + &c(&v, 2);
        let b = MPoly::var(v.clone(), 1);
        let m = PolyMatrix::from_rows(v.clone(), vec![vec![a.clone(), b.clone()]]).unwrap();
        let k = nullspace_vector(&m).unwrap();
        assert_eq!(k, vec![b.clone(), -&a]);
    }

    #[test]
    fn kernel_integer_example() {
        let v = vars(&["x"]);
        let m = PolyMatrix::from_rows(
            v.clone(),
            vec![vec![c(&v, 1), c(&v, 0), c(&v, 1)], vec![c(&v, 0), c(&v, 1), c(&v, 1)]],
        )
        .unwrap();
        let k = nullspace_vector(&m).unwrap();
        let r = m.mul_vec(&k);
        assert!(r.iter().all(|p| p.is_zero()));
        assert_eq!(k, vec![c(&v, 1), c(&v, 1), c(&v, -1)]);
    }

    #[test]
    fn full_rank_has_no_kernel() {
        let v = vars(&["x"]);
        assert_eq!(nullspace_vector(&PolyMatrix::identity(v, 2)), Err(Error::FullColumnRank));
    }

    #[test]
    fn cramer_geometric() {
        let v = vars(&["x"]);
        let one = c(&v, 1);
        let m = PolyMatrix::from_rows(v.clone(), vec![vec![&one - &MPoly::var(v.clone(), 0)]]).unwrap();
        let s = cramer_solve(&m, std::slice::from_ref(&one)).unwrap();
        assert_eq!(s[0], RatFun::new(one.clone(), &one - &MPoly::var(v.clone(), 0)).unwrap());
        let z = PolyMatrix::zeros(v.clone(), 1, 1);
        assert_eq!(cramer_solve(&z, &[one]), Err(Error::Singular));
    }
}
