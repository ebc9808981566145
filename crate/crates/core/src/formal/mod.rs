//! Formal group laws over `F_p[[t]]` (truncated) and the standard groups
//! they define on `(t^N)^d`.
//!
//! A law is stored as its full list of monomials in the `2d` variables
//! `X_1..X_d, Y_1..Y_d`, cut off above total degree `D`. All axiom checks are
//! therefore statements modulo degree `D`.

mod poly;

use std::collections::BTreeMap;
use std::fmt;

use crate::closure::{bfs_closure, exact_log, floor_log, pack_residues};
use crate::error::{Error, Result};
use crate::ring::{RingCtx, TruncatedSeries};
use poly::{degree, Poly};

/// A `d`-dimensional formal group law truncated at total degree `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupLaw {
    d: usize,
    max_degree: u32,
    ctx: RingCtx,
    terms: BTreeMap<Vec<u32>, Vec<TruncatedSeries>>,
}

impl FormalGroupLaw {
    /// Builds a law from explicit terms. Monomials above degree `D` and
    /// all-zero coefficient tuples are dropped.
    pub fn from_terms(
        ctx: RingCtx,
        d: usize,
        max_degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Vec<TruncatedSeries>)>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("formal group law dimension must be at least 1"));
        }
        let mut map: BTreeMap<Vec<u32>, Vec<TruncatedSeries>> = BTreeMap::new();
        for (m, coeffs) in terms {
            if m.len() != 2 * d {
                return Err(Error::DimensionMismatch {
                    expected: 2 * d,
                    got: m.len(),
                });
            }
            if coeffs.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: coeffs.len(),
                });
            }
            for c in &coeffs {
                ctx.check(&c.ctx())?;
            }
            if degree(&m) > max_degree {
                continue;
            }
            let slot = map.entry(m).or_insert_with(|| vec![ctx.zero(); d]);
            for (s, c) in slot.iter_mut().zip(&coeffs) {
                *s = &*s + c;
            }
        }
        map.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        Ok(FormalGroupLaw {
            d,
            max_degree,
            ctx,
            terms: map,
        })
    }

    /// `F(X, Y) = X + Y`.
    pub fn additive(ctx: RingCtx, d: usize, max_degree: u32) -> Result<Self> {
        let mut terms = Vec::new();
        for i in 0..d {
            for offset in [0, d] {
                let mut m = vec![0; 2 * d];
                m[offset + i] = 1;
                let mut c = vec![ctx.zero(); d];
                c[i] = ctx.one();
                terms.push((m, c));
            }
        }
        Self::from_terms(ctx, d, max_degree, terms)
    }

    /// `F(X, Y) = X + Y + XY`, the law of `1 + tF_p[[t]]` under multiplication.
    pub fn multiplicative(ctx: RingCtx, max_degree: u32) -> Result<Self> {
        let terms = [vec![1, 0], vec![0, 1], vec![1, 1]]
            .into_iter()
            .map(|m| (m, vec![ctx.one()]));
        Self::from_terms(ctx, 1, max_degree, terms)
    }

    /// The non-commutative two-dimensional law of `x ↦ (1 + a)x + b`:
    /// `F = (X1 + Y1 + X1 Y1, X2 + Y2 + X1 Y2)`.
    pub fn affine(ctx: RingCtx, max_degree: u32) -> Result<Self> {
        let (one, zero) = (ctx.one(), ctx.zero());
        let first = vec![one.clone(), zero.clone()];
        let second = vec![zero, one];
        let terms = [
            (vec![1, 0, 0, 0], first.clone()),
            (vec![0, 0, 1, 0], first.clone()),
            (vec![1, 0, 1, 0], first),
            (vec![0, 1, 0, 0], second.clone()),
            (vec![0, 0, 0, 1], second.clone()),
            (vec![1, 0, 0, 1], second),
        ];
        Self::from_terms(ctx, 2, max_degree, terms)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Vec<TruncatedSeries>> {
        &self.terms
    }

    /// Same law with coefficients reduced into another truncation.
    pub fn retruncate(&self, ctx: RingCtx) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(m, cs)| {
                let cs = cs.iter().map(|c| c.retruncate(ctx)).collect::<Result<Vec<_>>>()?;
                Ok((m.clone(), cs))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(ctx, self.d, self.max_degree, terms)
    }

    fn component(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.ctx, 2 * self.d, self.max_degree);
        for (m, cs) in &self.terms {
            p.add_term(m.clone(), &cs[i]);
        }
        p
    }

    /// Checks the unit laws, associativity and the shape of the tail
    /// `G = F - X - Y`, all modulo degree `D`.
    pub fn check_axioms(&self) -> AxiomReport {
        let d = self.d;
        let mut violations = Vec::new();
        let is_linear_identity = |m: &[u32], i: usize| {
            degree(m) == 1 && (m[i] == 1 || m[d + i] == 1)
        };
        for i in 0..d {
            // F(X, 0) = X and F(0, Y) = Y
            let mut expected_x = vec![0; 2 * d];
            expected_x[i] = 1;
            let mut expected_y = vec![0; 2 * d];
            expected_y[d + i] = 1;
            for (side, expected, other_half) in [
                (UnitSide::Right, &expected_x, d..2 * d),
                (UnitSide::Left, &expected_y, 0..d),
            ] {
                let restricted: Vec<(&Vec<u32>, &TruncatedSeries)> = self
                    .terms
                    .iter()
                    .filter(|(m, _)| m[other_half.clone()].iter().all(|&e| e == 0))
                    .map(|(m, cs)| (m, &cs[i]))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                let ok = restricted.len() == 1
                    && restricted[0].0 == expected
                    && restricted[0].1.is_one();
                if !ok {
                    violations.push(AxiomViolation::Unit { side, component: i });
                }
            }
            for (m, cs) in &self.terms {
                if cs[i].is_zero() || is_linear_identity(m, i) {
                    continue;
                }
                let has_x = m[..d].iter().any(|&e| e > 0);
                let has_y = m[d..].iter().any(|&e| e > 0);
                if degree(m) < 2 || !has_x || !has_y {
                    violations.push(AxiomViolation::TailShape {
                        component: i,
                        monomial: m.clone(),
                    });
                }
            }
        }
        // F(F(X,Y),Z) = F(X,F(Y,Z)) in 3d variables
        let nv = 3 * d;
        let x_y: Vec<usize> = (0..2 * d).collect();
        let y_z: Vec<usize> = (d..3 * d).collect();
        let inner_left: Vec<Poly> = (0..d).map(|j| self.component(j).embed(nv, &x_y)).collect();
        let inner_right: Vec<Poly> = (0..d).map(|j| self.component(j).embed(nv, &y_z)).collect();
        let var = |v: usize| Poly::var(self.ctx, nv, self.max_degree, v);
        for i in 0..d {
            let f = self.component(i);
            let mut left_subs = inner_left.clone();
            left_subs.extend((0..d).map(|j| var(2 * d + j)));
            let mut right_subs: Vec<Poly> = (0..d).map(var).collect();
            right_subs.extend(inner_right.iter().cloned());
            let lhs = f.compose(&left_subs);
            let rhs = f.compose(&right_subs);
            let diff = lhs.sub(&rhs);
            if let Some((m, c)) = diff.terms.iter().next() {
                violations.push(AxiomViolation::Associativity {
                    component: i,
                    monomial: m.clone(),
                    difference: c.encode(),
                });
            }
        }
        AxiomReport { violations }
    }

    /// File form: header `fgl d=.. D=.. p=.. k=..` then one line per monomial,
    /// `[e1,...,e2d] -> [s1, ..., sd]`.
    pub fn encode(&self) -> String {
        let mut out = format!(
            "fgl d={} D={} p={} k={}\n",
            self.d,
            self.max_degree,
            self.ctx.p(),
            self.ctx.k()
        );
        for (m, cs) in &self.terms {
            let exps: Vec<String> = m.iter().map(|e| e.to_string()).collect();
            let series: Vec<String> = cs.iter().map(|c| c.encode()).collect();
            out.push_str(&format!("[{}] -> [{}]\n", exps.join(","), series.join(", ")));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
        let fields = parse_header(hline, header, "fgl", &["d", "D", "p", "k"])?;
        let d = fields[0] as usize;
        let max_degree = fields[1] as u32;
        let ctx = RingCtx::new(fields[2], fields[3] as usize)?;
        let mut terms = Vec::new();
        for (ln, line) in lines {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(ln, "expected '<exponents> -> <series>'"))?;
            let exps = parse_bracket_list(lhs)
                .ok_or_else(|| Error::parse(ln, "exponent vector must be bracketed"))?
                .iter()
                .map(|s| s.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(ln, e.to_string()))?;
            let coeffs = parse_bracket_list(rhs)
                .ok_or_else(|| Error::parse(ln, "series tuple must be bracketed"))?
                .iter()
                .map(|s| TruncatedSeries::parse(ctx, s))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(ln, e))?;
            terms.push((exps, coeffs));
        }
        Self::from_terms(ctx, d, max_degree, terms)
    }
}

pub(crate) fn parse_bracket_list(s: &str) -> Option<Vec<String>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    Some(inner.split(',').map(|x| x.trim().to_string()).collect())
}

/// Parses `<tag> key=value ...`, returning the values of `keys` in order.
pub(crate) fn parse_header(line_no: usize, line: &str, tag: &str, keys: &[&str]) -> Result<Vec<u64>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(Error::parse(line_no, format!("header must start with '{tag}'")));
    }
    let mut found: BTreeMap<&str, u64> = BTreeMap::new();
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("bad header field '{part}'")))?;
        let v = v
            .parse::<u64>()
            .map_err(|_| Error::parse(line_no, format!("bad value for '{k}'")))?;
        found.insert(k, v);
    }
    keys.iter()
        .map(|k| {
            found
                .get(k)
                .copied()
                .ok_or_else(|| Error::parse(line_no, format!("missing header field '{k}'")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSide {
    /// `F(X, 0) = X`
    Right,
    /// `F(0, Y) = Y`
    Left,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Unit {
        side: UnitSide,
        component: usize,
    },
    Associativity {
        component: usize,
        monomial: Vec<u32>,
        difference: String,
    },
    TailShape {
        component: usize,
        monomial: Vec<u32>,
    },
}

impl AxiomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::Unit { .. } => "unit",
            AxiomViolation::Associativity { .. } => "associativity",
            AxiomViolation::TailShape { .. } => "tail-shape",
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Unit { side, component } => {
                let law = match side {
                    UnitSide::Right => "F(X,0) = X",
                    UnitSide::Left => "F(0,Y) = Y",
                };
                write!(f, "unit: {law} fails in component {component}")
            }
            AxiomViolation::Associativity {
                component,
                monomial,
                difference,
            } => write!(
                f,
                "associativity: component {component} differs at monomial {monomial:?} by {difference}"
            ),
            AxiomViolation::TailShape {
                component,
                monomial,
            } => write!(
                f,
                "tail-shape: component {component} has unmixed or low-degree monomial {monomial:?}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom() == axiom)
    }
}

/// Coordinates of a point of a standard group: a `d`-tuple of series, each of
/// valuation at least the group level `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardPoint {
    coords: Vec<TruncatedSeries>,
}

impl StandardPoint {
    pub fn coords(&self) -> &[TruncatedSeries] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// The group structure `F` carries on `(t^N)^d ⊂ (F_p[t]/(t^k))^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardGroup {
    fgl: FormalGroupLaw,
    level: usize,
    ctx: RingCtx,
}

/// Result of closing a finitely generated subgroup in `S / S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FglClosure {
    /// `log_p |H S_n / S_n|` (a lower bound when not exhausted).
    pub exponent: u32,
    pub states: usize,
    pub exhausted: bool,
}

impl StandardGroup {
    pub fn new(fgl: FormalGroupLaw, level: usize, ctx: RingCtx) -> Result<Self> {
        if level == 0 {
            return Err(Error::param("standard group level N must be at least 1"));
        }
        if ctx.k() < level + 1 {
            return Err(Error::param(format!(
                "truncation k = {} must be at least N + 1 = {}",
                ctx.k(),
                level + 1
            )));
        }
        let fgl = fgl.retruncate(ctx)?;
        Ok(StandardGroup { fgl, level, ctx })
    }

    pub fn fgl(&self) -> &FormalGroupLaw {
        &self.fgl
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.fgl.d
    }

    /// Number of visible filtration steps, `k - N`.
    pub fn depth(&self) -> usize {
        self.ctx.k() - self.level
    }

    pub fn identity(&self) -> StandardPoint {
        StandardPoint {
            coords: vec![self.ctx.zero(); self.dim()],
        }
    }

    pub fn point(&self, coords: Vec<TruncatedSeries>) -> Result<StandardPoint> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        for c in &coords {
            self.ctx.check(&c.ctx())?;
            if let Some(v) = c.valuation() {
                if v < self.level {
                    return Err(Error::GroupMismatch(format!(
                        "coordinate {c} has valuation {v} below level {}",
                        self.level
                    )));
                }
            }
        }
        Ok(StandardPoint { coords })
    }

    fn check_point(&self, x: &StandardPoint) -> Result<()> {
        if x.coords.len() != self.dim() {
            return Err(Error::GroupMismatch(format!(
                "point has {} coordinates, group has dimension {}",
                x.coords.len(),
                self.dim()
            )));
        }
        for c in &x.coords {
            if c.ctx() != self.ctx {
                return Err(Error::GroupMismatch(format!(
                    "coordinate lives in {}, group in {}",
                    c.ctx(),
                    self.ctx
                )));
            }
        }
        Ok(())
    }

    /// `F(x, y)` evaluated coordinatewise.
    pub fn mul(&self, x: &StandardPoint, y: &StandardPoint) -> Result<StandardPoint> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    fn mul_unchecked(&self, x: &StandardPoint, y: &StandardPoint) -> StandardPoint {
        let d = self.dim();
        let k = self.ctx.k();
        let vars: Vec<&TruncatedSeries> = x.coords.iter().chain(&y.coords).collect();
        let mut powers: Vec<Vec<TruncatedSeries>> =
            vars.iter().map(|v| vec![self.ctx.one(), (*v).clone()]).collect();
        let mut out = vec![self.ctx.zero(); d];
        for (m, cs) in &self.fgl.terms {
            // every variable has valuation >= N, so high-degree terms vanish
            if (degree(m) as usize) * self.level >= k {
                continue;
            }
            let mut value = self.ctx.one();
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[v].len() <= e {
                    let next = powers[v].last().expect("nonempty") * vars[v];
                    powers[v].push(next);
                }
                value = &value * &powers[v][e];
                if value.is_zero() {
                    break;
                }
            }
            if value.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(cs) {
                if !c.is_zero() {
                    *o = &*o + &(c * &value);
                }
            }
        }
        StandardPoint { coords: out }
    }

    /// Inverse by the refinement `y <- y - F(x, y)` starting from `-x`. Each
    /// pass gains at least `N` orders of `t`; failure to reach `F(x, y) = 0`
    /// within `k + 1` passes means the law is not a formal group law.
    pub fn inv(&self, x: &StandardPoint) -> Result<StandardPoint> {
        self.check_point(x)?;
        let mut y = StandardPoint {
            coords: x.coords.iter().map(|c| c.negate()).collect(),
        };
        let passes = self.ctx.k() + 1;
        for _ in 0..passes {
            let f = self.mul_unchecked(x, &y);
            if f.is_identity() {
                return Ok(y);
            }
            y = StandardPoint {
                coords: y.coords.iter().zip(&f.coords).map(|(a, b)| a - b).collect(),
            };
        }
        Err(Error::NonConvergence(passes))
    }

    /// Largest `n <= k - N` with `x ∈ S_n`, i.e. every coordinate has
    /// valuation at least `N + n`.
    pub fn level_of(&self, x: &StandardPoint) -> usize {
        let min_val = x
            .coords
            .iter()
            .filter_map(|c| c.valuation())
            .min()
            .unwrap_or(self.ctx.k());
        min_val.saturating_sub(self.level).min(self.depth())
    }

    pub fn pow(&self, x: &StandardPoint, mut e: u64) -> Result<StandardPoint> {
        self.check_point(x)?;
        let mut acc = self.identity();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// `log_p |S : S_n| = d n` for `F_p[[t]]`: each coordinate of `S / S_n`
    /// ranges over the `n` coefficient slots `t^N .. t^{N+n-1}`.
    pub fn index_log(&self, n: usize) -> Result<usize> {
        if n > self.depth() {
            return Err(Error::OutOfRange {
                value: n.to_string(),
                range: format!("0..={}", self.depth()),
            });
        }
        Ok(self.dim() * n)
    }

    /// The same group viewed modulo `S_n`, i.e. with truncation `N + n`.
    fn quotient_ctx(&self, n: usize) -> Result<RingCtx> {
        self.ctx.with_k(self.level + n)
    }

    /// Canonical encoding of `x S_n`: coefficient slots `t^N .. t^{N+n-1}`.
    pub fn coset_key(&self, x: &StandardPoint, n: usize) -> Vec<u8> {
        let mut key = Vec::with_capacity(self.dim() * n);
        for c in &x.coords {
            pack_residues(
                self.ctx.p(),
                (self.level..self.level + n).map(|i| c.coeff(i)),
                &mut key,
            );
        }
        key
    }

    /// Order (as a power of `p`) of the image of `<gens>` in `S / S_n`.
    pub fn subgroup_closure(
        &self,
        gens: &[StandardPoint],
        n: usize,
        cap: usize,
    ) -> Result<FglClosure> {
        if n > self.depth() {
            return Err(Error::OutOfRange {
                value: n.to_string(),
                range: format!("0..={}", self.depth()),
            });
        }
        for g in gens {
            self.check_point(g)?;
        }
        if n == 0 {
            return Ok(FglClosure {
                exponent: 0,
                states: 1,
                exhausted: true,
            });
        }
        let qctx = self.quotient_ctx(n)?;
        let quotient = StandardGroup {
            fgl: self.fgl.retruncate(qctx)?,
            level: self.level,
            ctx: qctx,
        };
        let reduced: Vec<StandardPoint> = gens
            .iter()
            .map(|g| {
                let coords = g
                    .coords
                    .iter()
                    .map(|c| c.retruncate(qctx))
                    .collect::<Result<Vec<_>>>()?;
                Ok(StandardPoint { coords })
            })
            .collect::<Result<Vec<_>>>()?;
        let closure = bfs_closure(
            quotient.identity(),
            &reduced,
            |a, b| quotient.mul_unchecked(a, b),
            |a| quotient.coset_key(a, n),
            cap,
        );
        let states = closure.elements.len();
        let exponent = if closure.exhausted {
            exact_log(self.ctx.p(), states as u64).ok_or_else(|| {
                Error::Inconsistent(format!("subgroup of a p-group has order {states}"))
            })?
        } else {
            floor_log(self.ctx.p(), states as u64)
        };
        Ok(FglClosure {
            exponent,
            states,
            exhausted: closure.exhausted,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, k: usize) -> RingCtx {
        RingCtx::new(p, k).unwrap()
    }

    fn one_dim(g: &StandardGroup, coeffs: &[i64]) -> StandardPoint {
        g.point(vec![g.ctx().series(coeffs)]).unwrap()
    }

    #[test]
    fn standard_laws_pass() {
        let c = ctx(3, 6);
        let add = FormalGroupLaw::additive(c, 2, 8).unwrap();
        assert!(add.terms().keys().all(|m| degree(m) == 1));
        assert!(add.check_axioms().passed());
        let mult = FormalGroupLaw::multiplicative(c, 8).unwrap();
        assert!(mult.terms().contains_key(&vec![1, 1]));
        assert!(mult.check_axioms().passed());
        assert!(FormalGroupLaw::affine(c, 8).unwrap().check_axioms().passed());
    }

    #[test]
    fn affine_law_is_not_commutative() {
        let c = ctx(5, 4);
        let g = StandardGroup::new(FormalGroupLaw::affine(c, 4).unwrap(), 1, c).unwrap();
        let x = g.point(vec![c.t(), c.zero()]).unwrap();
        let y = g.point(vec![c.zero(), c.t()]).unwrap();
        assert_ne!(g.mul(&x, &y).unwrap(), g.mul(&y, &x).unwrap());
    }

    #[test]
    fn pure_power_tail_is_rejected() {
        let c = ctx(3, 4);
        let terms = [vec![1, 0], vec![0, 1], vec![2, 0]]
            .into_iter()
            .map(|m| (m, vec![c.one()]));
        let f = FormalGroupLaw::from_terms(c, 1, 4, terms).unwrap();
        let report = f.check_axioms();
        assert!(report.violates("tail-shape"));
    }

    #[test]
    fn xy_squared_law_is_associative_only_in_characteristic_two() {
        // F = X + Y + XY^2 at D = 3. Expanding both sides by hand:
        //   F(F(X,Y),Z) = X+Y+Z + XY^2 + XZ^2 + YZ^2
        //   F(X,F(Y,Z)) = X+Y+Z + YZ^2 + XY^2 + 2XYZ + XZ^2
        // so they differ by 2XYZ, which vanishes exactly when p = 2.
        for (p, assoc) in [(2, true), (3, false), (5, false)] {
            let c = ctx(p, 4);
            let terms = [vec![1, 0], vec![0, 1], vec![1, 2]]
                .into_iter()
                .map(|m| (m, vec![c.one()]));
            let f = FormalGroupLaw::from_terms(c, 1, 3, terms).unwrap();
            let report = f.check_axioms();
            assert!(!report.violates("unit"));
            assert!(!report.violates("tail-shape"));
            assert_eq!(!report.violates("associativity"), assoc, "p = {p}");
            if let Some(AxiomViolation::Associativity { monomial, difference, .. }) =
                report.violations.first()
            {
                assert_eq!(monomial, &vec![1, 1, 1]);
                assert_eq!(difference, &c.constant(p - 2).encode());
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        let c = ctx(3, 5);
        let g = StandardGroup::new(FormalGroupLaw::additive(c, 2, 8).unwrap(), 1, c).unwrap();
        let x = g.point(vec![c.series(&[0, 1, 2]), c.series(&[0, 0, 1])]).unwrap();
        let y = g.point(vec![c.series(&[0, 2, 2]), c.series(&[0, 1])]).unwrap();
        let z = g.mul(&x, &y).unwrap();
        assert_eq!(z.coords()[0], &x.coords()[0] + &y.coords()[0]);
        assert_eq!(z.coords()[1], &x.coords()[1] + &y.coords()[1]);
        assert_eq!(g.mul(&x, &g.identity()).unwrap(), x);

        let c = ctx(2, 4);
        let g = StandardGroup::new(FormalGroupLaw::multiplicative(c, 8).unwrap(), 1, c).unwrap();
        let t = one_dim(&g, &[0, 1]);
        assert_eq!(g.mul(&t, &t).unwrap(), one_dim(&g, &[0, 0, 1]));
    }

    #[test]
    fn inverse_examples() {
        let c = ctx(3, 4);
        let add = StandardGroup::new(FormalGroupLaw::additive(c, 1, 8).unwrap(), 1, c).unwrap();
        let x = one_dim(&add, &[0, 1, 2]);
        assert_eq!(add.inv(&x).unwrap(), one_dim(&add, &[0, 2, 1]));

        let g = StandardGroup::new(FormalGroupLaw::multiplicative(c, 8).unwrap(), 1, c).unwrap();
        let t = one_dim(&g, &[0, 1]);
        let inv = g.inv(&t).unwrap();
        // (1+t)^{-1} - 1 = -t + t^2 - t^3
        assert_eq!(inv, one_dim(&g, &[0, 2, 1, 2]));
        assert!(g.mul(&t, &inv).unwrap().is_identity());
        assert!(g.inv(&g.identity()).unwrap().is_identity());
    }

    #[test]
    fn inverse_reports_non_convergence() {
        // F = X + 2Y breaks the unit law; the refinement oscillates between
        // y = -x and y = 0
        let c = ctx(3, 4);
        let terms = vec![(vec![1, 0], vec![c.one()]), (vec![0, 1], vec![c.constant(2)])];
        let bogus = FormalGroupLaw::from_terms(c, 1, 4, terms).unwrap();
        let g = StandardGroup::new(bogus, 1, c).unwrap();
        let t = one_dim(&g, &[0, 1]);
        assert!(matches!(g.inv(&t), Err(Error::NonConvergence(_))));
    }

    #[test]
    fn level_examples() {
        let c = ctx(5, 8);
        let g = StandardGroup::new(FormalGroupLaw::additive(c, 2, 8).unwrap(), 1, c).unwrap();
        let x = g.point(vec![c.series(&[0, 1]), c.series(&[0, 0, 3])]).unwrap();
        assert_eq!(g.level_of(&x), 0);
        let x = g.point(vec![c.monomial(1, 3), c.monomial(1, 5)]).unwrap();
        assert_eq!(g.level_of(&x), 2);
        assert_eq!(g.level_of(&g.identity()), 7);
        assert!(g.point(vec![c.one(), c.zero()]).is_err());
    }

    #[test]
    fn power_examples() {
        let c = ctx(2, 5);
        let g = StandardGroup::new(FormalGroupLaw::multiplicative(c, 8).unwrap(), 1, c).unwrap();
        let t = one_dim(&g, &[0, 1]);
        assert!(g.pow(&t, 0).unwrap().is_identity());
        let sq = g.pow(&t, 2).unwrap();
        assert_eq!(sq, one_dim(&g, &[0, 0, 1]));
        assert_eq!(g.level_of(&sq), 1);
        let c = ctx(3, 5);
        let add = StandardGroup::new(FormalGroupLaw::additive(c, 1, 8).unwrap(), 1, c).unwrap();
        let x = one_dim(&add, &[0, 2, 1, 1]);
        assert!(add.pow(&x, 3).unwrap().is_identity());
    }

    #[test]
    fn index_log_examples() {
        let c = ctx(2, 6);
        let g = StandardGroup::new(FormalGroupLaw::additive(c, 3, 8).unwrap(), 1, c).unwrap();
        assert_eq!(g.index_log(0).unwrap(), 0);
        assert_eq!(g.index_log(2).unwrap(), 6);
        assert!(g.index_log(6).is_err());
    }

    #[test]
    fn closure_examples() {
        let c = ctx(2, 4);
        let add = StandardGroup::new(FormalGroupLaw::additive(c, 1, 8).unwrap(), 1, c).unwrap();
        assert_eq!(add.subgroup_closure(&[], 3, 100).unwrap().exponent, 0);
        let t = one_dim(&add, &[0, 1]);
        assert_eq!(add.subgroup_closure(&[t], 3, 100).unwrap().exponent, 1);

        let mult = StandardGroup::new(FormalGroupLaw::multiplicative(c, 8).unwrap(), 1, c).unwrap();
        let t = one_dim(&mult, &[0, 1]);
        let r = mult.subgroup_closure(&[t], 3, 100).unwrap();
        // (1+t) has order 4 in (1 + tF_2[t]) / (1 + t^4): exponent 2 = ceil(log2 3)
        assert_eq!(r.exponent, 2);
        assert!(r.exhausted);
    }

    #[test]
    fn closure_cap_is_flagged() {
        let c = ctx(2, 6);
        let add = StandardGroup::new(FormalGroupLaw::additive(c, 2, 8).unwrap(), 1, c).unwrap();
        let gens: Vec<StandardPoint> = (1..6)
            .flat_map(|i| {
                [
                    add.point(vec![c.monomial(1, i), c.zero()]).unwrap(),
                    add.point(vec![c.zero(), c.monomial(1, i)]).unwrap(),
                ]
            })
            .collect();
        let r = add.subgroup_closure(&gens, 5, 100).unwrap();
        assert!(!r.exhausted);
        assert_eq!(r.states, 100);
        assert_eq!(r.exponent, 6);
        let full = add.subgroup_closure(&gens, 5, 10_000).unwrap();
        assert_eq!(full.exponent, 10);
    }

    #[test]
    fn file_format_round_trips() {
        let c = ctx(3, 4);
        let f = FormalGroupLaw::multiplicative(c, 6).unwrap();
        let text = f.encode();
        assert!(text.starts_with("fgl d=1 D=6 p=3 k=4\n"));
        assert!(text.contains("[1,1] -> [1+0*t+0*t^2+0*t^3]"));
        assert_eq!(FormalGroupLaw::parse(&text).unwrap(), f);
        assert!(FormalGroupLaw::parse("fgl d=1 D=6 p=3\n").is_err());
        assert!(FormalGroupLaw::parse("fgl d=1 D=6 p=3 k=4\n[1,0,0] -> [1]\n").is_err());
    }
}
