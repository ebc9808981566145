//! Abelian workbench: coordinate subgroups of the additive group
//! `(tF_p[[t]])^d`, their exact dimension traces, a constructive realization
//! of every rational dimension, and finite-level checks of the subgroup and
//! quotient dimension identities.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::formal::{parse_bracket_list, parse_header};
use crate::ring::is_prime;
use crate::trace::{Rational, Trace, TraceRow};

/// An eventually periodic subset of `N = {0, 1, 2, ...}`: membership below
/// `from` is read off `prefix`, and from `from` on it repeats `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl ExponentSet {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::param("exponent set period must be nonempty"));
        }
        Ok(ExponentSet { prefix, period })
    }

    pub fn all() -> Self {
        ExponentSet { prefix: vec![], period: vec![true] }
    }

    pub fn empty() -> Self {
        ExponentSet { prefix: vec![], period: vec![false] }
    }

    /// Multiples of `q`, starting at 0.
    pub fn multiples(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::param("modulus must be positive"));
        }
        let mut period = vec![false; q];
        period[0] = true;
        ExponentSet::new(vec![], period)
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    /// First index of the periodic part.
    pub fn from(&self) -> usize {
        self.prefix.len()
    }

    pub fn contains(&self, n: usize) -> bool {
        match self.prefix.get(n) {
            Some(&b) => b,
            None => self.period[(n - self.from()) % self.period.len()],
        }
    }

    /// `|S ∩ [0, n)|`.
    pub fn count_below(&self, n: usize) -> usize {
        let head = n.min(self.from());
        let mut count = self.prefix[..head].iter().filter(|&&b| b).count();
        if n > self.from() {
            let rest = n - self.from();
            let len = self.period.len();
            let per = self.period.iter().filter(|&&b| b).count();
            count += (rest / len) * per;
            count += self.period[..rest % len].iter().filter(|&&b| b).count();
        }
        count
    }

    /// Natural density: the fraction of ones in the period.
    pub fn density(&self) -> Rational {
        let per = self.period.iter().filter(|&&b| b).count();
        Rational::new(per as i64, self.period.len() as i64)
    }

    /// Exact inclusion test; both sets are periodic past
    /// `max(from) ` with period `lcm`, so one joint period decides it.
    pub fn is_subset_of(&self, other: &ExponentSet) -> bool {
        let horizon = self.from().max(other.from()) + self.period.len().lcm(&other.period.len());
        (0..horizon).all(|n| !self.contains(n) || other.contains(n))
    }

    /// Bound on `|count_below(n) - n·density|` valid for every `n`.
    pub fn discrepancy_bound(&self) -> usize {
        self.from() + self.period.len()
    }
}

/// A closed subgroup `{ (Σ_{n∈S_i} a_{i,n} t^{n+1})_i }` of `(tF_p[[t]])^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateSubgroupSpec {
    p: u64,
    sets: Vec<ExponentSet>,
}

impl CoordinateSubgroupSpec {
    pub fn new(p: u64, sets: Vec<ExponentSet>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if sets.is_empty() {
            return Err(Error::param("need at least one coordinate"));
        }
        Ok(CoordinateSubgroupSpec { p, sets })
    }

    pub fn dim(&self) -> usize {
        self.sets.len()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn sets(&self) -> &[ExponentSet] {
        &self.sets
    }

    /// `lim ratio(n)`: the mean density of the coordinates.
    pub fn density(&self) -> Rational {
        let sum: Rational = self.sets.iter().map(|s| s.density()).sum();
        sum / Rational::from_integer(self.dim() as i64)
    }

    pub fn is_subgroup_of(&self, other: &CoordinateSubgroupSpec) -> bool {
        self.dim() == other.dim()
            && self.p == other.p
            && self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn encode(&self) -> String {
        let bits = |v: &[bool]| {
            v.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(",")
        };
        let mut out = format!("abelian d={} p={}\n", self.dim(), self.p);
        for (i, s) in self.sets.iter().enumerate() {
            out.push_str(&format!(
                "S{}: prefix=[{}] period=[{}] from={}\n",
                i + 1,
                bits(&s.prefix),
                bits(&s.period),
                s.from()
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty spec"))?;
        let vals = parse_header(no, header, "abelian", &["d", "p"])?;
        let (d, p) = (vals[0] as usize, vals[1]);
        let mut sets: Vec<Option<ExponentSet>> = vec![None; d];
        for (no, line) in lines {
            let (tag, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(no, "expected 'S<i>: ...'"))?;
            let idx: usize = tag
                .trim()
                .strip_prefix('S')
                .and_then(|s| s.parse().ok())
                .filter(|&i| (1..=d).contains(&i))
                .ok_or_else(|| Error::parse(no, format!("bad coordinate tag '{tag}'")))?;
            let set = parse_set(no, rest)?;
            if sets[idx - 1].replace(set).is_some() {
                return Err(Error::parse(no, format!("coordinate S{idx} given twice")));
            }
        }
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::parse(0, format!("missing coordinate S{}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        CoordinateSubgroupSpec::new(p, sets)
    }
}

impl fmt::Display for CoordinateSubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

fn parse_bits(no: usize, s: &str) -> Result<Vec<bool>> {
    parse_bracket_list(s)
        .ok_or_else(|| Error::parse(no, format!("expected a bracketed list, got '{s}'")))?
        .iter()
        .map(|b| match b.as_str() {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(Error::parse(no, format!("bits must be 0 or 1, got '{b}'"))),
        })
        .collect()
}

fn parse_set(no: usize, rest: &str) -> Result<ExponentSet> {
    let mut prefix = None;
    let mut period = None;
    let mut from = None;
    for field in rest.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(no, format!("bad field '{field}'")))?;
        match k {
            "prefix" => prefix = Some(parse_bits(no, v)?),
            "period" => period = Some(parse_bits(no, v)?),
            "from" => {
                from = Some(v.parse::<usize>().map_err(|_| Error::parse(no, "bad 'from'"))?)
            }
            _ => return Err(Error::parse(no, format!("unknown field '{k}'"))),
        }
    }
    let prefix = prefix.ok_or_else(|| Error::parse(no, "missing prefix"))?;
    let period = period.ok_or_else(|| Error::parse(no, "missing period"))?;
    let from = from.ok_or_else(|| Error::parse(no, "missing from"))?;
    if from != prefix.len() {
        return Err(Error::parse(
            no,
            format!("from={from} but prefix has {} entries", prefix.len()),
        ));
    }
    ExponentSet::new(prefix, period).map_err(|e| Error::parse(no, e.to_string()))
}

/// `log_p |H S_n : S_n| = Σ_i |S_i ∩ [0, n)|`.
pub fn abelian_index_log(spec: &CoordinateSubgroupSpec, n: usize) -> usize {
    spec.sets.iter().map(|s| s.count_below(n)).sum()
}

/// Ratios `Σ_i |S_i ∩ [0,n)| / (d n)` for `n = 1 ..= n_max`.
pub fn abelian_trace(spec: &CoordinateSubgroupSpec, n_max: usize) -> Trace {
    let d = spec.dim() as u64;
    let rows = (1..=n_max)
        .map(|n| TraceRow::new(n, abelian_index_log(spec, n) as u64, d * n as u64))
        .collect();
    Trace::from_rows(rows, n_max)
}

/// One-coordinate subgroup of dimension exactly `theta = a/b`:
/// `S = { n : ⌊(n+1)a/b⌋ > ⌊na/b⌋ }`, so `|S ∩ [0,n)| = ⌊n a / b⌋`.
pub fn realize_dimension(theta: Rational, p: u64) -> Result<CoordinateSubgroupSpec> {
    if theta < Rational::from_integer(0) || theta > Rational::from_integer(1) {
        return Err(Error::OutOfRange {
            value: theta.to_string(),
            range: "[0, 1]".into(),
        });
    }
    CoordinateSubgroupSpec::new(p, vec![beatty_set(theta)])
}

fn beatty_set(theta: Rational) -> ExponentSet {
    let (a, b) = (*theta.numer(), *theta.denom());
    let period = (0..b).map(|n| ((n + 1) * a) / b > (n * a) / b).collect();
    ExponentSet { prefix: vec![], period }
}

/// Outcome of a finite-level check of a dimension identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub levels: usize,
    /// Limits of the traces involved, in the order documented on each check.
    pub limits: Vec<Rational>,
    /// First level where an identity or convergence bound failed.
    pub failure: Option<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn nested(small: &CoordinateSubgroupSpec, big: &CoordinateSubgroupSpec) -> Result<()> {
    if small.is_subgroup_of(big) {
        Ok(())
    } else {
        Err(Error::NotNested(format!(
            "{} is not contained in {}",
            small.encode().trim_end(),
            big.encode().trim_end()
        )))
    }
}

/// `|ratio(n) - density| <= Σ_i (from_i + period_i) / (d n)`: the trace is
/// a proper limit.
fn converges(spec: &CoordinateSubgroupSpec, n: usize) -> bool {
    let d = spec.dim() as i64;
    let ratio = Rational::new(abelian_index_log(spec, n) as i64, d * n as i64);
    let slack: usize = spec.sets.iter().map(|s| s.discrepancy_bound()).sum();
    let err = ratio - spec.density();
    let err = if err < Rational::from_integer(0) { -err } else { err };
    err <= Rational::new(slack as i64, d * n as i64)
}

/// Subgroup chain rule for `K ≤ H ≤ G`: at every level
/// `num_K/den = (num_H/den)(num_K/num_H)`, and the three traces converge.
/// Limits are reported as `[hdim H, hdim K, hdim^H K]`.
pub fn chain_rule_check(
    h: &CoordinateSubgroupSpec,
    k: &CoordinateSubgroupSpec,
    n_max: usize,
) -> Result<LemmaReport> {
    nested(k, h)?;
    let d = h.dim() as i64;
    let mut failure = None;
    for n in 1..=n_max {
        let den = d * n as i64;
        let nh = abelian_index_log(h, n) as i64;
        let nk = abelian_index_log(k, n) as i64;
        let ok = if nh > 0 {
            Rational::new(nk, den) == Rational::new(nh, den) * Rational::new(nk, nh)
        } else {
            nk == 0
        };
        if !ok || nk > nh || !converges(h, n) || !converges(k, n) {
            failure = Some(format!("chain rule fails at level {n}"));
            break;
        }
    }
    let (dh, dk) = (h.density(), k.density());
    let relative = if dh == Rational::from_integer(0) {
        Rational::from_integer(0)
    } else {
        dk / dh
    };
    if failure.is_none() && dk != dh * relative {
        failure = Some("limit identity fails".into());
    }
    Ok(LemmaReport {
        levels: n_max,
        limits: vec![dh, dk, relative],
        failure,
    })
}

/// Quotient formula for `N ≤ H ≤ G`:
/// `hdim H = (1 - hdim N) hdim_{G/N}(H/N) + hdim N`, with the quotient trace
/// `(num_H - num_N) / (den - num_N)`. Limits are reported as
/// `[hdim H, hdim N, hdim_{G/N} H/N]`.
pub fn quotient_formula_check(
    n_sub: &CoordinateSubgroupSpec,
    h: &CoordinateSubgroupSpec,
    n_max: usize,
) -> Result<LemmaReport> {
    nested(n_sub, h)?;
    let one = Rational::from_integer(1);
    let d = h.dim() as i64;
    let mut failure = None;
    for n in 1..=n_max {
        let den = d * n as i64;
        let nh = abelian_index_log(h, n) as i64;
        let nn = abelian_index_log(n_sub, n) as i64;
        let ok = if den > nn {
            let hn = Rational::new(nn, den);
            let q = Rational::new(nh - nn, den - nn);
            Rational::new(nh, den) == (one - hn) * q + hn
        } else {
            nh == nn
        };
        if !ok || !converges(h, n) || !converges(n_sub, n) {
            failure = Some(format!("quotient formula fails at level {n}"));
            break;
        }
    }
    let (dh, dn) = (h.density(), n_sub.density());
    let q = if dn == one { Rational::from_integer(0) } else { (dh - dn) / (one - dn) };
    if failure.is_none() && dn != one && dh != (one - dn) * q + dn {
        failure = Some("limit identity fails".into());
    }
    Ok(LemmaReport {
        levels: n_max,
        limits: vec![dh, dn, q],
        failure,
    })
}

/// A subgroup `N ≤ K ≤ H` of dimension `(κ - η) θ + η`, where `η`, `κ` are
/// the dimensions of `N` and `H`: in each coordinate, the exponents of
/// `H \ N` are enumerated in order and the `j`-th is kept when `j` lies in
/// the Beatty set of `θ`.
pub fn splice(
    n_sub: &CoordinateSubgroupSpec,
    h: &CoordinateSubgroupSpec,
    theta: Rational,
) -> Result<CoordinateSubgroupSpec> {
    nested(n_sub, h)?;
    let selector = realize_dimension(theta, h.p())?.sets.remove(0);
    let sets = n_sub
        .sets
        .iter()
        .zip(&h.sets)
        .map(|(sn, sh)| {
            let start = sn.from().max(sh.from());
            let len = sn.period.len().lcm(&sh.period.len()) * selector.period.len();
            let mut bits = Vec::with_capacity(start + len);
            let mut j = 0;
            for n in 0..start + len {
                let keep = if sn.contains(n) {
                    true
                } else if sh.contains(n) {
                    j += 1;
                    selector.contains(j - 1)
                } else {
                    false
                };
                bits.push(keep);
            }
            let period = bits.split_off(start);
            ExponentSet::new(bits, period)
        })
        .collect::<Result<Vec<_>>>()?;
    CoordinateSubgroupSpec::new(h.p(), sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(set: ExponentSet) -> CoordinateSubgroupSpec {
        CoordinateSubgroupSpec::new(2, vec![set]).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn index_examples() {
        assert_eq!(abelian_index_log(&one(ExponentSet::all()), 5), 5);
        assert_eq!(abelian_index_log(&one(ExponentSet::multiples(2).unwrap()), 5), 3);
        assert_eq!(abelian_index_log(&one(ExponentSet::empty()), 5), 0);
    }

    #[test]
    fn trace_examples() {
        let evens = abelian_trace(&one(ExponentSet::multiples(2).unwrap()), 10);
        for row in &evens.rows {
            assert_eq!(row.ratio, r(row.level.div_ceil(2) as i64, row.level as i64));
        }
        assert_eq!(evens.tail_min, Some(r(1, 2)));
        let half = CoordinateSubgroupSpec::new(3, vec![ExponentSet::all(), ExponentSet::empty()]).unwrap();
        assert!(abelian_trace(&half, 7).ratios().iter().all(|&x| x == r(1, 2)));
    }

    #[test]
    fn realization_examples() {
        assert_eq!(realize_dimension(r(1, 1), 2).unwrap().sets()[0], ExponentSet::all());
        assert_eq!(realize_dimension(r(0, 1), 2).unwrap().sets()[0], ExponentSet::empty());
        let third = realize_dimension(r(1, 3), 2).unwrap();
        assert_eq!(abelian_trace(&third, 9).last().unwrap().ratio, r(3, 9));
        assert_eq!(
            realize_dimension(r(1, 2), 2).unwrap().sets()[0].count_below(10),
            5
        );
        assert!(realize_dimension(r(3, 2), 2).is_err());
        assert!(realize_dimension(r(-1, 2), 2).is_err());
    }

    #[test]
    fn chain_rule_examples() {
        let h = one(ExponentSet::multiples(2).unwrap());
        let k = one(ExponentSet::multiples(4).unwrap());
        let rep = chain_rule_check(&h, &k, 200).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.limits, vec![r(1, 2), r(1, 4), r(1, 2)]);
        assert_eq!(chain_rule_check(&h, &h, 50).unwrap().limits[2], r(1, 1));
        let empty = one(ExponentSet::empty());
        assert_eq!(
            chain_rule_check(&h, &empty, 50).unwrap().limits[1..],
            [r(0, 1), r(0, 1)]
        );
        assert!(matches!(chain_rule_check(&k, &h, 10), Err(Error::NotNested(_))));
    }

    #[test]
    fn quotient_formula_examples() {
        let n = one(ExponentSet::multiples(4).unwrap());
        let h = one(ExponentSet::multiples(2).unwrap());
        let rep = quotient_formula_check(&n, &h, 200).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.limits, vec![r(1, 2), r(1, 4), r(1, 3)]);
        let same = quotient_formula_check(&h, &h, 50).unwrap();
        assert_eq!(same.limits[0], same.limits[1]);
        let empty = one(ExponentSet::empty());
        let rep = quotient_formula_check(&empty, &h, 50).unwrap();
        assert_eq!(rep.limits[2], rep.limits[0]);
    }

    #[test]
    fn splice_interpolates() {
        let n = one(ExponentSet::multiples(4).unwrap());
        let h = one(ExponentSet::multiples(2).unwrap());
        for theta in [r(0, 1), r(1, 3), r(2, 5), r(1, 1)] {
            let k = splice(&n, &h, theta).unwrap();
            assert!(n.is_subgroup_of(&k) && k.is_subgroup_of(&h));
            assert_eq!(k.density(), (r(1, 2) - r(1, 4)) * theta + r(1, 4));
        }
    }

    #[test]
    fn text_round_trip() {
        let spec = CoordinateSubgroupSpec::new(
            5,
            vec![
                ExponentSet::new(vec![true, false, true], vec![false, true]).unwrap(),
                ExponentSet::empty(),
            ],
        )
        .unwrap();
        let text = spec.encode();
        assert!(text.starts_with("abelian d=2 p=5\nS1: prefix=[1,0,1] period=[0,1] from=3\n"));
        assert_eq!(CoordinateSubgroupSpec::parse(&text).unwrap(), spec);
        assert!(CoordinateSubgroupSpec::parse("abelian d=1 p=2\nS1: prefix=[1] period=[1] from=0").is_err());
        assert!(CoordinateSubgroupSpec::parse("abelian d=2 p=2\nS1: prefix=[] period=[1] from=0").is_err());
        assert!(CoordinateSubgroupSpec::parse("abelian d=1 p=4\nS1: prefix=[] period=[1] from=0").is_err());
    }

    #[test]
    fn subset_test_sees_past_prefixes() {
        let a = ExponentSet::new(vec![false; 5], vec![true, false]).unwrap();
        let b = ExponentSet::new(vec![], vec![false, true]).unwrap();
        // a = {5, 7, 9, ...}, b = odds
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
    }
}
