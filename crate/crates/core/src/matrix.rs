//! Square matrices over `F_p[t]/(t^k)`.
//!
//! Entries are stored flat: entry `(i, j)` occupies the `k` slots starting at
//! `(i * n + j) * k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{mul_into, RingCtx, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesMatrix {
    ctx: RingCtx,
    n: usize,
    data: Vec<u32>,
}

impl SeriesMatrix {
    pub fn zero(ctx: RingCtx, n: usize) -> Self {
        SeriesMatrix {
            ctx,
            n,
            data: vec![0; n * n * ctx.k()],
        }
    }

    pub fn identity(ctx: RingCtx, n: usize) -> Self {
        let mut m = Self::zero(ctx, n);
        for i in 0..n {
            m.slot_mut(i, i)[0] = 1;
        }
        m
    }

    pub fn from_entries(ctx: RingCtx, n: usize, entries: &[TruncatedSeries]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        let mut m = Self::zero(ctx, n);
        for (idx, e) in entries.iter().enumerate() {
            ctx.check(&e.ctx())?;
            m.slot_mut(idx / n, idx % n).copy_from_slice(e.coeffs());
        }
        Ok(m)
    }

    /// Constant matrix from an `n x n` row-major array over `F_p`.
    pub fn from_fp(ctx: RingCtx, n: usize, values: &[u32]) -> Self {
        assert_eq!(values.len(), n * n);
        let mut m = Self::zero(ctx, n);
        for (idx, &v) in values.iter().enumerate() {
            m.slot_mut(idx / n, idx % n)[0] = v % ctx.p();
        }
        m
    }

    /// `I + c * t^level * X` for a constant matrix `X` over `F_p`.
    pub fn identity_plus(ctx: RingCtx, n: usize, level: usize, x: &[u32]) -> Self {
        assert_eq!(x.len(), n * n);
        let mut m = Self::identity(ctx, n);
        if level < ctx.k() {
            for (idx, &v) in x.iter().enumerate() {
                let slot = m.slot_mut(idx / n, idx % n);
                slot[level] = ctx.add_fp(slot[level], v % ctx.p());
            }
        }
        m
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub(crate) fn slot(&self, i: usize, j: usize) -> &[u32] {
        let k = self.ctx.k();
        let start = (i * self.n + j) * k;
        &self.data[start..start + k]
    }

    pub(crate) fn slot_mut(&mut self, i: usize, j: usize) -> &mut [u32] {
        let k = self.ctx.k();
        let start = (i * self.n + j) * k;
        &mut self.data[start..start + k]
    }

    pub fn entry(&self, i: usize, j: usize) -> TruncatedSeries {
        TruncatedSeries::from_raw(self.ctx, self.slot(i, j).to_vec())
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: &TruncatedSeries) -> Result<()> {
        self.ctx.check(&value.ctx())?;
        self.slot_mut(i, j).copy_from_slice(value.coeffs());
        Ok(())
    }

    /// The `F_p` matrix of coefficients of `t^i`, row-major.
    pub fn coefficient_layer(&self, i: usize) -> Vec<u32> {
        let k = self.ctx.k();
        (0..self.n * self.n)
            .map(|idx| if i < k { self.data[idx * k + i] } else { 0 })
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        self.ctx.check(&other.ctx)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n;
        let k = self.ctx.k();
        let p = self.ctx.p();
        let mut out = Self::zero(self.ctx, n);
        let mut tmp = vec![0u32; k];
        for i in 0..n {
            for l in 0..n {
                let a = self.slot(i, l);
                if a.iter().all(|&c| c == 0) {
                    continue;
                }
                for j in 0..n {
                    let b = other.slot(l, j);
                    mul_into(p, a, b, &mut tmp);
                    let dst = out.slot_mut(i, j);
                    for (d, &t) in dst.iter_mut().zip(&tmp) {
                        *d = ((*d as u64 + t as u64) % p as u64) as u32;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mat_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.ctx.p() as u64;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| ((a as u64 + b as u64) % p) as u32)
            .collect();
        Ok(SeriesMatrix {
            ctx: self.ctx,
            n: self.n,
            data,
        })
    }

    pub fn mat_sub(&self, other: &Self) -> Result<Self> {
        self.mat_add(&other.scale(self.ctx.p() - 1))
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.ctx.p() as u64;
        let data = self
            .data
            .iter()
            .map(|&a| ((a as u64 * c as u64) % p) as u32)
            .collect();
        SeriesMatrix {
            ctx: self.ctx,
            n: self.n,
            data,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.ctx, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.slot_mut(j, i).copy_from_slice(self.slot(i, j));
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.ctx, self.n)
    }

    /// True when `self ≡ I (mod t^level)`.
    pub fn is_identity_mod(&self, level: usize) -> bool {
        let level = level.min(self.ctx.k());
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let s = self.slot(i, j);
                (0..level).all(|d| s[d] == u32::from(i == j && d == 0))
            })
        })
    }

    /// Gauss-Jordan elimination with unit pivots. A unit pivot exists in
    /// every column exactly when the reduction mod `t` is invertible.
    pub fn mat_inv(&self) -> Result<Self> {
        let n = self.n;
        let mut a: Vec<Vec<TruncatedSeries>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect();
        let mut inv: Vec<Vec<TruncatedSeries>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { self.ctx.one() } else { self.ctx.zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| a[r][col].is_unit())
                .ok_or(Error::NotInvertible)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let u = a[col][col].inverse()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &u;
                inv[col][j] = &inv[col][j] * &u;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let da = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &da;
                    let di = &f * &inv[col][j];
                    inv[r][j] = &inv[r][j] - &di;
                }
            }
        }
        let entries: Vec<TruncatedSeries> = inv.into_iter().flatten().collect();
        Self::from_entries(self.ctx, n, &entries)
    }

    /// Determinant by the division-free Berkowitz recurrence, exact over any
    /// commutative ring (including non-domains such as `F_p[t]/(t^k)`).
    pub fn det(&self) -> TruncatedSeries {
        let n = self.n;
        let ctx = self.ctx;
        if n == 0 {
            return ctx.one();
        }
        // Characteristic polynomial coefficients (leading first) of the
        // trailing principal submatrix, grown from the bottom-right corner.
        let mut poly = vec![ctx.one(), self.entry(n - 1, n - 1).negate()];
        for start in (0..n - 1).rev() {
            let size = n - start; // size of current submatrix
            let a = self.entry(start, start);
            let row: Vec<TruncatedSeries> =
                (start + 1..n).map(|j| self.entry(start, j)).collect();
            let mut col: Vec<TruncatedSeries> =
                (start + 1..n).map(|i| self.entry(i, start)).collect();
            // Toeplitz column: 1, -a, -R C, -R A C, ..., -R A^{size-2} C
            let mut toeplitz = vec![ctx.one(), a.negate()];
            for step in 0..size - 1 {
                let rc = row
                    .iter()
                    .zip(&col)
                    .fold(ctx.zero(), |acc, (r, c)| &acc + &(r * c));
                toeplitz.push(rc.negate());
                if step + 1 < size - 1 {
                    col = (0..size - 1)
                        .map(|i| {
                            (0..size - 1).fold(ctx.zero(), |acc, j| {
                                let m = self.entry(start + 1 + i, start + 1 + j);
                                &acc + &(&m * &col[j])
                            })
                        })
                        .collect();
                }
            }
            let mut next = vec![ctx.zero(); size + 1];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, c) in poly.iter().enumerate() {
                    if i >= j && i - j < toeplitz.len() {
                        *slot = &*slot + &(&toeplitz[i - j] * c);
                    }
                }
            }
            poly = next;
        }
        let constant = poly.last().expect("nonempty").clone();
        if n % 2 == 0 {
            constant
        } else {
            constant.negate()
        }
    }

    pub fn trace(&self) -> TruncatedSeries {
        (0..self.n).fold(self.ctx.zero(), |acc, i| &acc + &self.entry(i, i))
    }

    /// Same matrix viewed modulo a (possibly smaller) power of `t`.
    pub fn retruncate(&self, ctx: RingCtx) -> Result<Self> {
        if ctx.p() != self.ctx.p() {
            return Err(Error::CtxMismatch(self.ctx.to_string(), ctx.to_string()));
        }
        let mut out = Self::zero(ctx, self.n);
        let kk = ctx.k().min(self.ctx.k());
        for i in 0..self.n {
            for j in 0..self.n {
                out.slot_mut(i, j)[..kk].copy_from_slice(&self.slot(i, j)[..kk]);
            }
        }
        Ok(out)
    }

    /// Row-major bracketed encoding, e.g. `[[1+0*t,0+1*t],[0+0*t,1+0*t]]`.
    pub fn encode(&self) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let cells: Vec<String> = (0..self.n).map(|j| self.entry(i, j).encode()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    pub fn parse(ctx: RingCtx, text: &str) -> std::result::Result<Self, String> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(|| "matrix must look like [[...],...,[...]]".to_string())?;
        let rows: Vec<&str> = inner.split("],[").collect();
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != n {
                return Err(format!("row has {} entries, expected {n}", cells.len()));
            }
            for c in cells {
                entries.push(TruncatedSeries::parse(ctx, c)?);
            }
        }
        Self::from_entries(ctx, n, &entries).map_err(|e| e.to_string())
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, i: usize, j: usize) -> Vec<u32> {
        let mut v = vec![0; n * n];
        v[i * n + j] = 1;
        v
    }

    /// Cofactor expansion; exponential, used only as an independent oracle.
    fn laplace_det(m: &SeriesMatrix) -> TruncatedSeries {
        fn rec(m: &SeriesMatrix, rows: &[usize], cols: &[usize]) -> TruncatedSeries {
            let ctx = m.ctx();
            if rows.is_empty() {
                return ctx.one();
            }
            let mut acc = ctx.zero();
            for (ci, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = &m.entry(rows[0], c) * &rec(m, &rows[1..], &rest);
                acc = if ci % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        let idx: Vec<usize> = (0..m.size()).collect();
        rec(m, &idx, &idx)
    }

    #[test]
    fn inverse_examples() {
        let ctx = RingCtx::new(3, 3).unwrap();
        let id = SeriesMatrix::identity(ctx, 2);
        assert_eq!(id.mat_inv().unwrap(), id);
        let u = SeriesMatrix::identity_plus(ctx, 2, 1, &unit(2, 0, 1));
        let expected = SeriesMatrix::identity_plus(ctx, 2, 1, &unit(2, 0, 1).iter().map(|&x| 2 * x).collect::<Vec<_>>());
        assert_eq!(u.mat_inv().unwrap(), expected);
        // det = t, a non-unit
        let singular = SeriesMatrix::from_entries(
            ctx,
            2,
            &[ctx.t(), ctx.zero(), ctx.zero(), ctx.one()],
        )
        .unwrap();
        assert_eq!(singular.mat_inv(), Err(Error::NotInvertible));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let ctx = RingCtx::new(5, 4).unwrap();
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64
        };
        for n in 1..=5 {
            for _ in 0..20 {
                let entries: Vec<TruncatedSeries> = (0..n * n)
                    .map(|_| ctx.series(&[next(), next(), next(), next()]))
                    .collect();
                let m = SeriesMatrix::from_entries(ctx, n, &entries).unwrap();
                assert_eq!(m.det(), laplace_det(&m), "n = {n}");
            }
        }
    }

    #[test]
    fn unipotent_det_is_one() {
        let ctx = RingCtx::new(2, 4).unwrap();
        assert!(SeriesMatrix::identity_plus(ctx, 2, 1, &unit(2, 0, 1)).det().is_one());
        let d = SeriesMatrix::identity_plus(ctx, 2, 1, &unit(2, 0, 0)).det();
        assert_eq!(d, ctx.series(&[1, 1]));
    }

    #[test]
    fn encoding_round_trips() {
        let ctx = RingCtx::new(3, 2).unwrap();
        let m = SeriesMatrix::identity_plus(ctx, 2, 1, &[0, 1, 2, 0]);
        assert_eq!(m.encode(), "[[1+0*t,0+1*t],[0+2*t,1+0*t]]");
        assert_eq!(SeriesMatrix::parse(ctx, &m.encode()).unwrap(), m);
        assert!(SeriesMatrix::parse(ctx, "[[1,0],[0]]").is_err());
    }
}
