use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::ring::{Field, Ring};

/// Resultant of `f` and `g` with respect to the variable at position `var`,
/// as the determinant of the Sylvester matrix.
pub fn resultant<F: Field>(f: &MPoly<F>, g: &MPoly<F>, var: usize) -> Result<MPoly<F>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateInput("resultant with the zero polynomial".into()));
    }
    let fu = f.to_univariate(var);
    let gu = g.to_univariate(var);
    let m = fu.degree().unwrap();
    let n = gu.degree().unwrap();
    if m == 0 {
        return Ok(f.pow(n as u64));
    }
    if n == 0 {
        return Ok(g.pow(m as u64));
    }
    let size = m + n;
    let zero = f.zero();
    let mut mat = vec![vec![zero.clone(); size]; size];
    // leading coefficient first
    for r in 0..n {
        for (j, c) in fu.coeffs().iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in gu.coeffs().iter().rev().enumerate() {
            mat[n + r][r + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_det<F: Field>(mut a: Vec<Vec<MPoly<F>>>) -> Result<MPoly<F>> {
    let n = a.len();
    if n == 0 {
        return Err(Error::DegenerateInput("empty matrix".into()));
    }
    let mut negate = false;
    let mut prev = a[0][0].one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(a[0][0].zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = if prev.is_one() { num } else { num.div_exact(&prev)? };
            }
            a[i][k] = a[i][k].zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}
