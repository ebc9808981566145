//! Truncated power series over a prime field: the ring `F_p[t]/(t^k)`.
//!
//! Every element stores exactly `k` canonical residues in `[0, p)`, so
//! structural equality is ring equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// The pair `(p, k)` fixing the ring `F_p[t]/(t^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingCtx {
    p: u32,
    k: usize,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RingCtx {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if p > (1u64 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::param("truncation exponent k must be at least 1"));
        }
        Ok(RingCtx { p: p as u32, k })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Same prime, different truncation.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        RingCtx::new(self.p as u64, k)
    }

    pub fn zero(&self) -> TruncatedSeries {
        TruncatedSeries {
            ctx: *self,
            coeffs: vec![0; self.k],
        }
    }

    pub fn one(&self) -> TruncatedSeries {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> TruncatedSeries {
        let mut s = self.zero();
        s.coeffs[0] = (c % self.p as u64) as u32;
        s
    }

    /// `c * t^i`, zero when `i >= k`.
    pub fn monomial(&self, c: u64, i: usize) -> TruncatedSeries {
        let mut s = self.zero();
        if i < self.k {
            s.coeffs[i] = (c % self.p as u64) as u32;
        }
        s
    }

    pub fn t(&self) -> TruncatedSeries {
        self.monomial(1, 1)
    }

    /// Builds a series from arbitrary integer coefficients, reducing mod p and
    /// dropping everything at or above degree `k`.
    pub fn series(&self, coeffs: &[i64]) -> TruncatedSeries {
        let mut s = self.zero();
        for (i, &c) in coeffs.iter().take(self.k).enumerate() {
            s.coeffs[i] = self.reduce_signed(c);
        }
        s
    }

    pub(crate) fn reduce_signed(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub(crate) fn check(&self, other: &RingCtx) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CtxMismatch(self.to_string(), other.to_string()))
        }
    }

    pub(crate) fn add_fp(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    pub(crate) fn mul_fp(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub(crate) fn neg_fp(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub(crate) fn inv_fp(&self, a: u32) -> Option<u32> {
        fp_inv(self.p, a)
    }
}

impl fmt::Display for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[t]/(t^{})", self.p, self.k)
    }
}

pub(crate) fn fp_pow(p: u32, base: u32, mut e: u64) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64 % p64;
    let mut b = base as u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        e >>= 1;
    }
    acc as u32
}

pub(crate) fn fp_inv(p: u32, a: u32) -> Option<u32> {
    if a % p == 0 {
        None
    } else {
        Some(fp_pow(p, a, p as u64 - 2))
    }
}

/// An element of `F_p[t]/(t^k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    ctx: RingCtx,
    coeffs: Vec<u32>,
}

impl TruncatedSeries {
    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub(crate) fn from_raw(ctx: RingCtx, coeffs: Vec<u32>) -> Self {
        debug_assert_eq!(coeffs.len(), ctx.k);
        TruncatedSeries { ctx, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    /// Index of the lowest nonzero coefficient; `None` stands for the zero
    /// series, whose valuation sits above every integer.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ctx.check(&other.ctx)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ctx.add_fp(a, b))
            .collect();
        Ok(TruncatedSeries::from_raw(self.ctx, coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ctx.check(&other.ctx)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ctx.add_fp(a, self.ctx.neg_fp(b)))
            .collect();
        Ok(TruncatedSeries::from_raw(self.ctx, coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.ctx.check(&other.ctx)?;
        let k = self.ctx.k;
        let mut out = vec![0u32; k];
        mul_into(self.ctx.p, &self.coeffs, &other.coeffs, &mut out);
        Ok(TruncatedSeries::from_raw(self.ctx, out))
    }

    pub fn negate(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.neg_fp(c)).collect();
        TruncatedSeries::from_raw(self.ctx, coeffs)
    }

    pub fn scale(&self, c: u32) -> Self {
        let c = c % self.ctx.p;
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul_fp(a, c)).collect();
        TruncatedSeries::from_raw(self.ctx, coeffs)
    }

    /// Inverse in the local ring; only units (nonzero constant term) qualify.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .ctx
            .inv_fp(self.coeffs[0])
            .ok_or_else(|| Error::NonUnit(self.to_string()))?;
        let ctx = self.ctx;
        let k = ctx.k;
        let mut inv = vec![0u32; k];
        inv[0] = c0;
        // Solve a * inv = 1 degree by degree.
        for n in 1..k {
            let mut acc = 0u64;
            for i in 1..=n {
                acc += ctx.mul_fp(self.coeffs[i], inv[n - i]) as u64;
            }
            let acc = (acc % ctx.p as u64) as u32;
            inv[n] = ctx.mul_fp(ctx.neg_fp(acc), c0);
        }
        Ok(TruncatedSeries::from_raw(ctx, inv))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Reinterprets the series in a ring with the same prime and a different
    /// truncation; coefficients beyond the new `k` are dropped.
    pub fn retruncate(&self, ctx: RingCtx) -> Result<Self> {
        if ctx.p != self.ctx.p {
            return Err(Error::CtxMismatch(self.ctx.to_string(), ctx.to_string()));
        }
        let coeffs = (0..ctx.k).map(|i| self.coeff(i)).collect();
        Ok(TruncatedSeries::from_raw(ctx, coeffs))
    }

    /// Canonical text form `c0+c1*t+...+c{k-1}*t^{k-1}` listing every slot.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            match i {
                0 => s.push_str(&c.to_string()),
                1 => s.push_str(&format!("{c}*t")),
                _ => s.push_str(&format!("{c}*t^{i}")),
            }
        }
        s
    }

    /// Parses a sum of terms `c`, `c*t`, `c*t^i`, `t`, `t^i`. The canonical
    /// encoding is one instance; terms at degree `>= k` are truncated away.
    pub fn parse(ctx: RingCtx, text: &str) -> std::result::Result<Self, String> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err("empty series".into());
        }
        let mut coeffs = vec![0u32; ctx.k];
        for term in text.split('+') {
            let (coef, deg) = parse_term(term)?;
            if deg < ctx.k {
                let c = (coef % ctx.p as u64) as u32;
                coeffs[deg] = ctx.add_fp(coeffs[deg], c);
            }
        }
        Ok(TruncatedSeries::from_raw(ctx, coeffs))
    }
}

fn parse_term(term: &str) -> std::result::Result<(u64, usize), String> {
    if term.is_empty() {
        return Err("empty term".into());
    }
    let (coef_part, var_part) = match term.find('t') {
        None => (term, None),
        Some(pos) => {
            let coef = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
            (coef, Some(&term[pos + 1..]))
        }
    };
    let coef = if coef_part.is_empty() {
        1
    } else {
        coef_part
            .parse::<u64>()
            .map_err(|_| format!("bad coefficient '{coef_part}' in term '{term}'"))?
    };
    let deg = match var_part {
        None => 0,
        Some("") => 1,
        Some(rest) => {
            let e = rest
                .strip_prefix('^')
                .ok_or_else(|| format!("bad exponent in term '{term}'"))?;
            e.parse::<usize>()
                .map_err(|_| format!("bad exponent in term '{term}'"))?
        }
    };
    Ok((coef, deg))
}

/// Truncated convolution `out = a * b` (length of `out` is the truncation).
pub(crate) fn mul_into(p: u32, a: &[u32], b: &[u32], out: &mut [u32]) {
    let k = out.len();
    let p64 = p as u64;
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for i in 0..=n.min(a.len().saturating_sub(1)) {
            let ai = a[i];
            if ai == 0 || n - i >= b.len() {
                continue;
            }
            acc = (acc + ai as u64 * b[n - i] as u64) % p64;
        }
        *slot = acc as u32;
    }
    debug_assert!(out.len() == k);
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

// Operator forms panic on a context mismatch; use the `checked_*` methods
// when the contexts are not known to agree.
impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.checked_add(rhs).expect("ring context mismatch")
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.checked_sub(rhs).expect("ring context mismatch")
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.checked_mul(rhs).expect("ring context mismatch")
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.negate()
    }
}
