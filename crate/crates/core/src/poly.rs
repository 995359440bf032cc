//! Integer polynomials counting cells by dimension.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient `i` is the number of `i`-cells. Trailing zeros are trimmed,
/// the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellPoly(Vec<i64>);

impl CellPoly {
    pub fn zero() -> Self {
        CellPoly(Vec::new())
    }

    pub fn one() -> Self {
        CellPoly(vec![1])
    }

    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        CellPoly(coeffs)
    }

    /// `c·x^d`.
    pub fn monomial(c: i64, d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[d] = c;
        CellPoly::new(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, d: usize) -> i64 {
        self.0.get(d).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &CellPoly) -> Result<CellPoly> {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for d in 0..n {
            out.push(
                self.coeff(d)
                    .checked_add(other.coeff(d))
                    .ok_or(Error::Overflow("polynomial sum"))?,
            );
        }
        Ok(CellPoly::new(out))
    }

    pub fn sub(&self, other: &CellPoly) -> Result<CellPoly> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, c: i64) -> Result<CellPoly> {
        let out = self
            .0
            .iter()
            .map(|&a| a.checked_mul(c).ok_or(Error::Overflow("polynomial scaling")))
            .collect::<Result<Vec<_>>>()?;
        Ok(CellPoly::new(out))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> CellPoly {
        if self.is_zero() {
            return CellPoly::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.0);
        CellPoly(v)
    }

    pub fn mul(&self, other: &CellPoly) -> Result<CellPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(CellPoly::zero());
        }
        let mut out = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                let p = a.checked_mul(b).ok_or(Error::Overflow("polynomial product"))?;
                out[i + j] = out[i + j].checked_add(p).ok_or(Error::Overflow("polynomial product"))?;
            }
        }
        Ok(CellPoly::new(out))
    }

    pub fn pow(&self, n: u32) -> Result<CellPoly> {
        let mut acc = CellPoly::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Divides every coefficient by `d`, failing if any division is inexact.
    pub fn div_exact(&self, d: usize) -> Result<CellPoly> {
        let di = d as i64;
        let mut out = Vec::with_capacity(self.0.len());
        for (degree, &c) in self.0.iter().enumerate() {
            if c % di != 0 {
                return Err(Error::NonIntegralBurnside { degree, sum: c, order: d });
            }
            out.push(c / di);
        }
        Ok(CellPoly::new(out))
    }

    pub fn eval(&self, x: i64) -> Result<i64> {
        let mut acc: i64 = 0;
        for &c in self.0.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|a| a.checked_add(c))
                .ok_or(Error::Overflow("polynomial evaluation"))?;
        }
        Ok(acc)
    }

    /// Value at `x = -1`, the Euler characteristic of the counted complex.
    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c } else { -c })
            .sum()
    }
}

impl From<Vec<i64>> for CellPoly {
    fn from(v: Vec<i64>) -> Self {
        CellPoly::new(v)
    }
}

impl fmt::Display for CellPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.unsigned_abs();
            write!(f, "{sign}")?;
            match d {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "x")?;
                    if d > 1 {
                        write!(f, "^{d}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}
