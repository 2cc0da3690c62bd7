//! Word-size prime field arithmetic used for rank detection.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

pub const PRIME: u64 = (1u64 << 61) - 1;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b % p, p)
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn bigint_mod(c: &BigInt, p: &BigInt) -> u64 {
    let mut r = c % p;
    if r.is_negative() {
        r += p;
    }
    r.to_u64().expect("residue fits")
}

/// Kernel vector ending at the first column that depends on the earlier
/// ones: `v[k] = 1`, zero after `k`. `None` for full column rank.
pub fn first_dependency(rows: usize, cols: usize, data: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut m = data.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let piv = (r..rows).find(|&i| m[i * cols + c] != 0);
        let Some(piv) = piv else {
            // column c is a combination of the pivot columns
            let mut v = vec![0u64; cols];
            v[c] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, m[i * cols + c], p);
            }
            return Some(v);
        };
        if piv != r {
            for k in 0..cols {
                m.swap(piv * cols + k, r * cols + k);
            }
        }
        let inv = inv_mod(m[r * cols + c], p);
        for k in c..cols {
            m[r * cols + k] = mul_mod(m[r * cols + k], inv, p);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                let t = mul_mod(f, m[r * cols + k], p);
                m[i * cols + k] = sub_mod(m[i * cols + k], t, p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    None
}

/// Row-echelon rank profile of a dense matrix over F_p.
///
/// Returns `(pivot_rows, pivot_cols)` in pivot order; columns are scanned
/// left to right so the first dependent column is the first non-pivot.
pub fn rank_profile(rows: usize, cols: usize, data: &[u64], p: u64) -> (Vec<usize>, Vec<usize>) {
    let mut m = data.to_vec();
    let mut row_ids: Vec<usize> = (0..rows).collect();
    let mut prow = Vec::new();
    let mut pcol = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for k in 0..cols {
                m.swap(piv * cols + k, r * cols + k);
            }
            row_ids.swap(piv, r);
        }
        let inv = inv_mod(m[r * cols + c], p);
        for k in c..cols {
            m[r * cols + k] = mul_mod(m[r * cols + k], inv, p);
        }
        for i in (r + 1)..rows {
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                let t = mul_mod(f, m[r * cols + k], p);
                m[i * cols + k] = sub_mod(m[i * cols + k], t, p);
            }
        }
        prow.push(row_ids[r]);
        pcol.push(c);
        r += 1;
    }
    (prow, pcol)
}
