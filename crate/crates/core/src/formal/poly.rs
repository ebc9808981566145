use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::ring::{RingCtx, TruncatedSeries};

/// Multivariate polynomial with coefficients in `F_p[t]/(t^k)`, truncated
/// above a total-degree cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Poly {
    pub nvars: usize,
    pub max_deg: u32,
    pub ctx: RingCtx,
    pub terms: BTreeMap<Vec<u32>, TruncatedSeries>,
}

pub(crate) fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl Poly {
    pub fn zero(ctx: RingCtx, nvars: usize, max_deg: u32) -> Self {
        Poly {
            nvars,
            max_deg,
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: RingCtx, nvars: usize, max_deg: u32) -> Self {
        let mut p = Self::zero(ctx, nvars, max_deg);
        p.add_term(vec![0; nvars], &ctx.one());
        p
    }

    pub fn var(ctx: RingCtx, nvars: usize, max_deg: u32, i: usize) -> Self {
        let mut p = Self::zero(ctx, nvars, max_deg);
        let mut m = vec![0; nvars];
        m[i] = 1;
        p.add_term(m, &ctx.one());
        p
    }

    pub fn add_term(&mut self, m: Vec<u32>, c: &TruncatedSeries) {
        if degree(&m) > self.max_deg || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &c.negate());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Vec<u32>, TruncatedSeries> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = degree(ma);
            for (mb, cb) in &other.terms {
                if da + degree(mb) > self.max_deg {
                    continue;
                }
                let m: Vec<u32> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let prod = ca * cb;
                let e = acc.entry(m).or_insert_with(|| self.ctx.zero());
                *e = &*e + &prod;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly {
            nvars: self.nvars,
            max_deg: self.max_deg,
            ctx: self.ctx,
            terms: acc,
        }
    }

    /// Renames variable `i` to `map[i]` in a polynomial ring of `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(self.ctx, nvars, self.max_deg);
        for (m, c) in &self.terms {
            let mut nm = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                nm[map[i]] += e;
            }
            out.add_term(nm, c);
        }
        out
    }

    /// Substitutes `subs[i]` for variable `i`.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let target_vars = subs[0].nvars;
        let mut powers: Vec<Vec<Poly>> = subs
            .iter()
            .map(|s| vec![Poly::one(self.ctx, target_vars, self.max_deg), s.clone()])
            .collect();
        let mut out = Poly::zero(self.ctx, target_vars, self.max_deg);
        for (m, c) in &self.terms {
            let mut term = Poly::zero(self.ctx, target_vars, self.max_deg);
            term.add_term(vec![0; target_vars], c);
            for (v, &e) in m.iter().enumerate() {
                let e = e as usize;
                while powers[v].len() <= e {
                    let next = powers[v].last().expect("nonempty").mul(&subs[v]);
                    powers[v].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[v][e]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}
