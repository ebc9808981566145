//! The acceptance suite: twelve exact checks with pinned time budgets.
//!
//! The rendered report contains no timings, so identical configurations
//! give byte-identical reports; elapsed times are returned separately.

pub mod oracles;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::closure::DEFAULT_CAP;
use crate::error::{Error, Result};
use crate::formal::{FormalGroupLaw, StandardGroup, StandardPoint};
use crate::groups::{
    borel_dimension, dimension_trace, dimension_trace_from, layer_dimension, layer_log_count,
    spectrum_sample, unipotent_generators, Family, GroupSpec,
};
use crate::hausdorff::{
    abelian_trace, chain_rule_check, quotient_formula_check, realize_dimension,
    CoordinateSubgroupSpec, ExponentSet,
};
use crate::lie::{
    borel_subalgebra, congruence_family, density_trace, isolated_bound_check, lie_from_spec,
    subalgebra_family, LieAlgebra, SimplicityVerdict,
};
use crate::ring::RingCtx;
use crate::trace::{display_ratio, Rational};

pub const DEFAULT_SEED: u64 = 1;

/// Name, description and time budget of each criterion, in report order.
pub const CRITERIA: [(&str, &str, Duration); 12] = [
    ("borel", "Borel dimension ratios", Duration::from_secs(1)),
    ("dimensions", "layer dimensions match closed forms", Duration::from_secs(1)),
    ("fgl", "formal group law axioms and p-power deepening", Duration::from_secs(10)),
    ("index", "index growth against coset enumeration", Duration::from_secs(5)),
    ("realize", "abelian realization of target dimensions", Duration::from_secs(5)),
    ("lemmas", "chain rule and quotient formula", Duration::from_secs(5)),
    ("layers", "congruence layer orders", Duration::from_secs(30)),
    ("unipotent", "unipotent subgroup trace", Duration::from_secs(30)),
    ("lie", "simplicity by projective enumeration", Duration::from_secs(300)),
    ("density", "loop subalgebra densities and the isolated bound", Duration::from_secs(10)),
    ("shift", "level-shift stability", Duration::from_secs(60)),
    ("determinism", "seeded output independent of scheduling", Duration::from_secs(60)),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Criterion names to run; empty runs all.
    pub filter: Vec<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            filter: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.index,
            self.name,
            self.detail
        )
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    /// One line per criterion, then a JSON summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let _ = writeln!(out, "{}", r.line());
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        let items: Vec<String> = self
            .results
            .iter()
            .map(|r| format!("{{\"name\":\"{}\",\"passed\":{}}}", r.name, r.passed))
            .collect();
        let _ = writeln!(
            out,
            "{{\"suite\":\"verify\",\"seed\":{},\"passed\":{},\"failed\":{},\"results\":[{}]}}",
            self.seed,
            passed,
            self.results.len() - passed,
            items.join(",")
        );
        out
    }
}

type Check = fn(u64) -> Result<(bool, String)>;

fn check_fn(name: &str) -> Check {
    match name {
        "borel" => check_borel,
        "dimensions" => check_dimensions,
        "fgl" => check_fgl,
        "index" => check_index,
        "realize" => check_realize,
        "lemmas" => check_lemmas,
        "layers" => check_layers,
        "unipotent" => check_unipotent,
        "lie" => check_lie,
        "density" => check_density,
        "shift" => check_shift,
        "determinism" => check_determinism,
        _ => unreachable!("unknown criterion"),
    }
}

/// Runs the selected criteria in order. Unknown filter names are an input
/// error.
pub fn run_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    for f in &config.filter {
        if !CRITERIA.iter().any(|(n, _, _)| n == f) {
            let names: Vec<&str> = CRITERIA.iter().map(|c| c.0).collect();
            return Err(Error::param(format!(
                "unknown criterion '{f}' (expected one of {})",
                names.join(", ")
            )));
        }
    }
    let mut results = Vec::new();
    for (i, &(name, description, budget)) in CRITERIA.iter().enumerate() {
        if !config.filter.is_empty() && !config.filter.iter().any(|f| f == name) {
            continue;
        }
        results.push(run_one(i + 1, name, description, budget, config.seed));
    }
    Ok(VerifyReport {
        seed: config.seed,
        results,
    })
}

fn run_one(
    index: usize,
    name: &'static str,
    description: &'static str,
    budget: Duration,
    seed: u64,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = check_fn(name)(seed);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(x) => x,
        Err(e) => (false, format!("invariant violation: {e}")),
    };
    if elapsed > budget {
        passed = false;
        detail.push_str(&format!("; exceeded time budget of {}s", budget.as_secs()));
    }
    CriterionResult {
        index,
        name,
        description,
        passed,
        detail,
        elapsed,
        budget,
    }
}

fn spec(family: Family, n: usize, p: u64, k: usize) -> Result<GroupSpec> {
    GroupSpec::new(family, n, RingCtx::new(p, k)?)
}

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn check_borel(_seed: u64) -> Result<(bool, String)> {
    let formula = |family: Family, n: i64| match family {
        Family::SL => r(n * (n + 1) - 2, 2 * n * n - 2),
        Family::Sp | Family::SOOdd => r(n + 1, 2 * n + 1),
        Family::SOEven => r(n, 2 * n - 1),
    };
    let cases = [
        (Family::SL, 2, 2, 3, r(2, 3)),
        (Family::SL, 3, 5, 8, r(5, 8)),
        (Family::Sp, 2, 6, 10, r(3, 5)),
        (Family::Sp, 3, 12, 21, r(4, 7)),
        (Family::SOOdd, 3, 12, 21, r(4, 7)),
        (Family::SOEven, 4, 16, 28, r(4, 7)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (family, n, b, g, ratio) in cases {
        for p in [3, 5] {
            let bd = borel_dimension(&spec(family, n, p, 1)?)?;
            ok &= bd.dim_borel == b
                && bd.dim_group == g
                && bd.ratio == ratio
                && bd.ratio == formula(family, n as i64);
        }
        parts.push(format!("{} ({b},{g},{ratio})", family.group_name(n)));
    }
    Ok((ok, parts.join(" ")))
}

fn check_dimensions(_seed: u64) -> Result<(bool, String)> {
    let mut checked = 0;
    for family in Family::ALL {
        let primes: &[u64] = if family == Family::SL { &[2, 3, 5] } else { &[3, 5] };
        for &p in primes {
            for n in 2..=5 {
                let d = layer_dimension(&spec(family, n, p, 1)?)?;
                let expected = match family {
                    Family::SL => n * n - 1,
                    Family::Sp | Family::SOOdd => n * (2 * n + 1),
                    Family::SOEven => n * (2 * n - 1),
                };
                if d != expected {
                    return Ok((false, format!("{} over F_{p}: {d} != {expected}", family.group_name(n))));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} cases, n <= 5")))
}

/// Draws a point of `S_n` with `n` uniform in `0..=depth`.
fn random_point(g: &StandardGroup, rng: &mut Xoshiro256PlusPlus) -> Result<StandardPoint> {
    let ctx = g.ctx();
    let n = rng.gen_range(0..=g.depth());
    let coords = (0..g.dim())
        .map(|_| {
            let c: Vec<i64> = (0..ctx.k())
                .map(|i| if i < g.level() + n { 0 } else { rng.gen_range(0..ctx.p() as i64) })
                .collect();
            ctx.series(&c)
        })
        .collect();
    g.point(coords)
}

/// `x ∈ S_n` implies `x^p ∈ S_{min(2n, depth)}`.
fn deepens(g: &StandardGroup, x: &StandardPoint) -> Result<bool> {
    let n = g.level_of(x);
    let y = g.pow(x, g.ctx().p() as u64)?;
    Ok(g.level_of(&y) >= (2 * n).min(g.depth()))
}

fn laws(ctx: RingCtx, degree: u32) -> Result<Vec<(&'static str, FormalGroupLaw)>> {
    Ok(vec![
        ("additive d=1", FormalGroupLaw::additive(ctx, 1, degree)?),
        ("additive d=2", FormalGroupLaw::additive(ctx, 2, degree)?),
        ("multiplicative", FormalGroupLaw::multiplicative(ctx, degree)?),
        ("affine", FormalGroupLaw::affine(ctx, degree)?),
    ])
}

const FGL_RANDOM_POINTS: usize = 10_000;

fn check_fgl(seed: u64) -> Result<(bool, String)> {
    for p in [2, 3, 5] {
        for (name, law) in laws(RingCtx::new(p, 8)?, 8)? {
            let report = law.check_axioms();
            if !report.passed() {
                return Ok((false, format!("{name} over F_{p} fails: {:?}", report.violations)));
            }
        }
    }
    let mut exhaustive = 0;
    let ctx = RingCtx::new(2, 8)?;
    for (name, law) in laws(ctx, 8)?.into_iter().filter(|(_, l)| l.dim() == 1) {
        let g = StandardGroup::new(law, 1, ctx)?;
        for x in oracles::all_points(&g)? {
            if !deepens(&g, &x)? {
                return Ok((false, format!("{name}: x^p does not deepen at x = {:?}", x.coords())));
            }
            exhaustive += 1;
        }
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut random = 0;
    for p in [2, 3, 5] {
        let ctx = RingCtx::new(p, 8)?;
        for (name, law) in laws(ctx, 8)? {
            if p == 2 && law.dim() == 1 {
                continue;
            }
            let g = StandardGroup::new(law, 1, ctx)?;
            for _ in 0..FGL_RANDOM_POINTS {
                let x = random_point(&g, &mut rng)?;
                if !deepens(&g, &x)? {
                    return Ok((false, format!("{name} over F_{p}: x^p does not deepen")));
                }
                random += 1;
            }
        }
    }
    Ok((
        true,
        format!("axioms at D=8 for p in {{2,3,5}}; deepening on {exhaustive} exhaustive and {random} random points"),
    ))
}

fn check_index(_seed: u64) -> Result<(bool, String)> {
    let mut checked = 0;
    for level in [1, 2] {
        let ctx = RingCtx::new(2, level + 3)?;
        for (name, law) in laws(ctx, 6)? {
            let g = StandardGroup::new(law, level, ctx)?;
            for n in 1..=3 {
                let expected = 1u64 << g.index_log(n)?;
                let counted = oracles::coset_count(&g, n)?;
                if counted != expected || g.index_log(n)? != g.dim() * n {
                    return Ok((false, format!("{name} N={level} n={n}: {counted} cosets, expected {expected}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} cases, d <= 2, p = 2, n <= 3")))
}

const REALIZE_LEVELS: usize = 1000;

fn check_realize(_seed: u64) -> Result<(bool, String)> {
    let targets = [r(0, 1), r(1, 4), r(1, 3), r(1, 2), r(2, 3), r(1, 1)];
    for theta in targets {
        let spec = realize_dimension(theta, 2)?;
        for row in abelian_trace(&spec, REALIZE_LEVELS).rows {
            let err = row.ratio - theta;
            let err = if err < r(0, 1) { -err } else { err };
            if err > r(1, row.level as i64) {
                return Ok((false, format!("theta {theta}: ratio {} at n = {}", row.ratio, row.level)));
            }
        }
    }
    Ok((true, format!("6 targets, |ratio(n) - theta| <= 1/n for n <= {REALIZE_LEVELS}")))
}

fn check_lemmas(_seed: u64) -> Result<(bool, String)> {
    let evens = CoordinateSubgroupSpec::new(2, vec![ExponentSet::multiples(2)?])?;
    let fours = CoordinateSubgroupSpec::new(2, vec![ExponentSet::multiples(4)?])?;
    let chain = chain_rule_check(&evens, &fours, REALIZE_LEVELS)?;
    let quot = quotient_formula_check(&fours, &evens, REALIZE_LEVELS)?;
    let ok = chain.passed()
        && quot.passed()
        && chain.limits == [r(1, 2), r(1, 4), r(1, 2)]
        && quot.limits == [r(1, 2), r(1, 4), r(1, 3)];
    let fmt = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    Ok((
        ok,
        format!(
            "n <= {REALIZE_LEVELS}; chain limits [{}]; quotient limits [{}]",
            fmt(&chain.limits),
            fmt(&quot.limits)
        ),
    ))
}

fn check_layers(_seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut kernels = Vec::new();
    for m in 2..=4 {
        let direct = oracles::sl2_f2_kernel(m);
        let quotient = oracles::sl2_f2_order(m) / oracles::sl2_f2_order(m - 1);
        ok &= direct == 8 && quotient == 8;
        kernels.push(direct.to_string());
    }
    let sl2 = spec(Family::SL, 2, 2, 5)?;
    ok &= (1..=3).all(|m| layer_log_count(&sl2, m).ok() == Some(3));
    let sp4_f2 = oracles::sp4_f2_first_layer();
    ok &= sp4_f2 == 1 << layer_log_count(&spec(Family::Sp, 2, 2, 2)?, 1)?;
    for (family, n) in [(Family::Sp, 2), (Family::SOOdd, 2)] {
        let g = spec(family, n, 3, 4)?;
        let d = layer_dimension(&g)?;
        ok &= d == 10 && (1..=3).all(|m| layer_log_count(&g, m).ok() == Some(d));
    }
    Ok((
        ok,
        format!(
            "SL2 over F_2 kernels m=2..4: [{}]; Sp4 over F_2 first layer {sp4_f2}; Sp4, SO5 over F_3 layers 3^10",
            kernels.join(",")
        ),
    ))
}

const UNIPOTENT_LEVEL: usize = 5;

fn unipotent_setup() -> Result<(GroupSpec, Vec<crate::groups::CongruenceElement>)> {
    let sl2 = spec(Family::SL, 2, 3, UNIPOTENT_LEVEL)?;
    let gens = unipotent_generators(&sl2, UNIPOTENT_LEVEL)?;
    Ok((sl2, gens))
}

fn check_unipotent(_seed: u64) -> Result<(bool, String)> {
    let (sl2, gens) = unipotent_setup()?;
    let tr = dimension_trace(&sl2, &gens, UNIPOTENT_LEVEL, DEFAULT_CAP)?;
    let ok = tr.exhausted
        && tr.trace.rows.len() == UNIPOTENT_LEVEL - 1
        && tr.trace.ratios().iter().all(|&x| x == r(1, 3));
    let ratios: Vec<String> = tr.trace.ratios().iter().map(|x| x.to_string()).collect();
    Ok((ok, format!("SL2 over F_3, m = 2..{UNIPOTENT_LEVEL}: [{}]", ratios.join(","))))
}

fn verdict_text(v: &SimplicityVerdict) -> String {
    match v {
        SimplicityVerdict::Simple { classes } => format!("simple ({classes} classes)"),
        SimplicityVerdict::NotSimple { ideal, .. } => format!("ideal of dimension {}", ideal.dim()),
        SimplicityVerdict::Abelian => "abelian".into(),
        SimplicityVerdict::Unknown { classes } => format!("unknown ({classes} classes)"),
    }
}

fn check_lie(_seed: u64) -> Result<(bool, String)> {
    let sp4 = lie_from_spec(Family::Sp, 2, 3)?;
    let so5 = lie_from_spec(Family::SOOdd, 2, 3)?;
    let sp4_f2 = lie_from_spec(Family::Sp, 2, 2)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, alg) in [("sp4(F_3)", &sp4), ("so5(F_3)", &so5)] {
        let v = alg.is_simple_bruteforce();
        ok &= alg.check_axioms().is_empty() && v == SimplicityVerdict::Simple { classes: 29_524 };
        parts.push(format!("{name} {}", verdict_text(&v)));
    }
    let v = sp4_f2.is_simple_bruteforce();
    ok &= sp4_f2.check_axioms().is_empty()
        && matches!(&v, SimplicityVerdict::NotSimple { ideal, .. } if ideal.dim() > 0 && ideal.dim() < 10);
    parts.push(format!("sp4(F_2) {}", verdict_text(&v)));
    Ok((ok, parts.join("; ")))
}

const DENSITY_DEGREE: usize = 30;

fn density_families(alg: &LieAlgebra, seed: u64) -> Result<(bool, String)> {
    let d = alg.dim() as i64;
    let bound = r(d - 1, d);
    let mut ok = true;
    for q in [2usize, 3, 5] {
        let tr = density_trace(&congruence_family(alg, q, DENSITY_DEGREE)?);
        ok &= tr
            .rows
            .iter()
            .all(|row| row.ratio == r((row.level / q) as i64, row.level as i64));
        ok &= r(1, q as i64) <= bound;
    }
    let h = borel_subalgebra(alg)?;
    let hd = r(h.dim() as i64, d);
    let tr = density_trace(&subalgebra_family(alg, &h, DENSITY_DEGREE)?);
    ok &= tr.ratios().iter().all(|&x| x == hd) && hd <= bound;
    let rep = isolated_bound_check(alg, 8, seed, DENSITY_DEGREE)?;
    ok &= rep.passed() && rep.bound == bound;
    Ok((ok, format!("Borel {hd}, bound {bound}")))
}

fn check_density(seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, family) in [("sp4(F_3)", Family::Sp), ("so5(F_3)", Family::SOOdd)] {
        let alg = lie_from_spec(family, 2, 3)?;
        let (good, text) = density_families(&alg, seed)?;
        ok &= good;
        parts.push(format!("{name}: {text}"));
    }
    Ok((ok, format!("q in {{2,3,5}}, D = {DENSITY_DEGREE}; {}", parts.join("; "))))
}

fn check_shift(_seed: u64) -> Result<(bool, String)> {
    let (sl2, gens) = unipotent_setup()?;
    let g1 = dimension_trace(&sl2, &gens, UNIPOTENT_LEVEL, DEFAULT_CAP)?;
    let g2 = dimension_trace_from(&sl2, &gens, 2, UNIPOTENT_LEVEL, DEFAULT_CAP)?;
    let tol = r(2, UNIPOTENT_LEVEL as i64 - 2);
    let tail = g1.trace.tail_min.ok_or_else(|| Error::Inconsistent("empty trace".into()))?;
    let ok = g1.exhausted
        && g2.exhausted
        && g2.trace.ratios().iter().all(|&x| {
            let e = x - tail;
            (if e < r(0, 1) { -e } else { e }) <= tol
        });
    let last = g2.trace.last().map(|row| row.ratio).unwrap_or_default();
    Ok((
        ok,
        format!("G^1 tail min {}, G^2 last {}, tolerance {}", display_ratio(&tail), display_ratio(&last), tol),
    ))
}

/// Seeded sampling output rendered as text.
fn sampled_output(seed: u64) -> Result<String> {
    let mut out = String::new();
    let sl2 = spec(Family::SL, 2, 3, 3)?;
    for s in spectrum_sample(&sl2, 3, 16, seed, DEFAULT_CAP)? {
        let _ = writeln!(out, "{} {} {} {}", s.index, s.generators, s.ratio, s.exhausted);
    }
    let rep = isolated_bound_check(&lie_from_spec(Family::Sp, 2, 3)?, 8, seed, 12)?;
    for f in &rep.families {
        let _ = writeln!(out, "{} {} {}", f.label, f.density_at_cutoff, f.linear_codimension);
    }
    Ok(out)
}

fn check_determinism(seed: u64) -> Result<(bool, String)> {
    let run = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Inconsistent(e.to_string()))?;
        pool.install(|| sampled_output(seed))
    };
    let a = run(1)?;
    let b = run(4)?;
    let c = run(4)?;
    Ok((a == b && b == c, format!("seed {seed}: sampled output identical across 1 and 4 threads")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_and_rejects() {
        let cfg = VerifyConfig {
            seed: 1,
            filter: vec!["borel".into()],
        };
        let rep = run_suite(&cfg).unwrap();
        assert_eq!(rep.results.len(), 1);
        assert!(rep.passed(), "{}", rep.render());
        let bad = VerifyConfig {
            seed: 1,
            filter: vec!["nope".into()],
        };
        assert!(run_suite(&bad).is_err());
    }
}
