//! Exact integer polynomials, rational functions, truncated series and
//! polynomial linear algebra.

pub mod matrix;
pub mod modp;
pub mod mpoly;
pub mod ratfun;
pub mod series;
pub mod upoly;

pub use matrix::{cramer_solve, determinant, kernel_from_pivots, nullspace_vector, PolyMatrix};
pub use mpoly::{vars, MPoly, MultiIndex, Vars};
pub use ratfun::RatFun;
pub use series::TruncatedSeries;
pub use upoly::UPoly;

use crate::error::Result;

pub fn poly_mul(p: &MPoly, q: &MPoly) -> Result<MPoly> {
    p.check_vars(q)?;
    Ok(p * q)
}

pub fn poly_add(p: &MPoly, q: &MPoly) -> Result<MPoly> {
    p.check_vars(q)?;
    Ok(p + q)
}

pub fn poly_derivative(p: &MPoly, var: &str) -> Result<MPoly> {
    Ok(p.derivative(p.var_index(var)?))
}

pub fn series_expand(f: &RatFun, cap: u32) -> Result<TruncatedSeries> {
    TruncatedSeries::expand(f, cap)
}

pub fn series_hadamard(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.hadamard(b)
}
