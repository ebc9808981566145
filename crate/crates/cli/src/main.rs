use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hausdorff_core::closure::DEFAULT_CAP;
use hausdorff_core::formal::{FormalGroupLaw, StandardGroup};
use hausdorff_core::groups::{
    borel_dimension, dimension_trace, spectrum_sample, Family, GroupSpec, SubgroupFile,
};
use hausdorff_core::hausdorff::{abelian_trace, realize_dimension, CoordinateSubgroupSpec};
use hausdorff_core::lie::{
    borel_subalgebra, congruence_family, density_trace, isolated_bound_check, lie_from_spec,
    subalgebra_family, SimplicityVerdict,
};
use hausdorff_core::trace::{display_ratio, Rational, Trace};
use hausdorff_core::verify::{run_suite, VerifyConfig, DEFAULT_SEED};
use hausdorff_core::{parallel, Error, RingCtx};

const EXIT_CAPPED: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "hausdorff-lab", version, about = "Exact Hausdorff-dimension traces over F_p[[t]]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Borel dimension ratios of classical groups.
    Borel(Opts),
    /// Dimension trace of a subgroup given by generators (--spec).
    Hdim(Opts),
    /// Coordinate subgroup realizing a rational dimension (--theta).
    Realize(Opts),
    /// Dimension trace of a coordinate subgroup of the additive group (--spec).
    Abelian(Opts),
    /// Lie algebra report: axioms, simplicity, densities, isolated bound.
    Lie(Opts),
    /// Formal group law report (--spec) at standard level --n.
    Fgl(Opts),
    /// Ratios of randomly generated subgroups.
    Spectrum(Opts),
    /// Run the acceptance suite.
    Verify(Opts),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Args, Clone)]
struct Opts {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    mmax: Option<usize>,
    /// Degree cutoff for loop subalgebras.
    #[arg(long = "D")]
    degree: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    count: Option<usize>,
    /// Target dimension as `a/b`.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Comma-separated criterion names.
    #[arg(long)]
    filter: Option<String>,
    /// Also print the structure constants (lie).
    #[arg(long)]
    dump: bool,
}

/// Command output plus the exit status it calls for.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) | Error::NonConvergence(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

fn input<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Input(msg.into()))
}

impl Opts {
    fn family(&self) -> std::result::Result<Family, Failure> {
        match &self.family {
            Some(f) => Ok(Family::from_str(f)?),
            None => input("--family is required"),
        }
    }

    fn rank(&self) -> std::result::Result<usize, Failure> {
        self.n.map_or_else(|| input("--n is required"), Ok)
    }

    fn group(&self, default_k: usize) -> std::result::Result<GroupSpec, Failure> {
        let ctx = RingCtx::new(self.p.unwrap_or(3), self.k.unwrap_or(default_k))?;
        Ok(GroupSpec::new(self.family()?, self.rank()?, ctx)?)
    }

    fn read_spec(&self) -> std::result::Result<String, Failure> {
        let path = match &self.spec {
            Some(p) => p,
            None => return input("--spec <path> is required"),
        };
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn trace_text(&self, trace: &Trace) -> String {
        match self.format {
            Format::Csv => trace.to_csv(),
            Format::Jsonl => trace.to_jsonl(),
        }
    }
}

fn parse_theta(s: &str) -> std::result::Result<Rational, Failure> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    match (a.trim().parse::<i64>(), b.trim().parse::<i64>()) {
        (Ok(a), Ok(b)) if b > 0 => Ok(Rational::new(a, b)),
        _ => input(format!("--theta must be a rational a/b, got '{s}'")),
    }
}

fn ratio_json(r: &Rational) -> serde_json::Value {
    json!({"num": r.numer(), "den": r.denom()})
}

fn cmd_borel(o: &Opts) -> CmdResult {
    let cases: Vec<(Family, usize)> = match (&o.family, o.n) {
        (Some(_), Some(n)) => vec![(o.family()?, n)],
        (None, None) => vec![
            (Family::SL, 2),
            (Family::SL, 3),
            (Family::Sp, 2),
            (Family::Sp, 3),
            (Family::SOOdd, 3),
            (Family::SOEven, 4),
        ],
        _ => return input("give both --family and --n, or neither for the default table"),
    };
    let ctx = RingCtx::new(o.p.unwrap_or(3), 1)?;
    let mut out = String::new();
    if let Format::Csv = o.format {
        out.push_str("family,n,group,dim_borel,dim_group,ratio\n");
    }
    for (family, n) in cases {
        let b = borel_dimension(&GroupSpec::new(family, n, ctx)?)?;
        let line = match o.format {
            Format::Csv => format!(
                "{family},{n},{},{},{},{}",
                family.group_name(n),
                b.dim_borel,
                b.dim_group,
                display_ratio(&b.ratio)
            ),
            Format::Jsonl => json!({
                "family": family.to_string(), "n": n, "group": family.group_name(n),
                "dim_borel": b.dim_borel, "dim_group": b.dim_group, "ratio": ratio_json(&b.ratio),
            })
            .to_string(),
        };
        let _ = writeln!(out, "{line}");
    }
    Ok(Outcome::ok(out))
}

fn cmd_hdim(o: &Opts) -> CmdResult {
    let file = SubgroupFile::parse(&o.read_spec()?)?;
    let m_max = o.mmax.unwrap_or(file.spec.ctx().k());
    let tr = dimension_trace(&file.spec, &file.gens, m_max, o.cap)?;
    if !tr.exhausted {
        log::warn!("closure stopped at the cap of {} states", o.cap);
    }
    Ok(Outcome {
        text: o.trace_text(&tr.trace),
        code: if tr.exhausted { 0 } else { EXIT_CAPPED },
    })
}

fn cmd_realize(o: &Opts) -> CmdResult {
    let theta = match &o.theta {
        Some(t) => parse_theta(t)?,
        None => return input("--theta is required"),
    };
    let n_max = o.mmax.unwrap_or(100);
    if n_max < 2 {
        return input("--mmax must be at least 2");
    }
    let spec = realize_dimension(theta, o.p.unwrap_or(2))?;
    let trace = abelian_trace(&spec, n_max);
    let last = trace.last().map(|r| r.ratio).unwrap_or_default();
    let err = if last > theta { last - theta } else { theta - last };
    let mut text = spec.encode();
    text.push('\n');
    text.push_str(&o.trace_text(&trace));
    if err > Rational::new(1, n_max as i64) {
        return Err(Failure::Invariant(format!("final ratio {last} is not within 1/{n_max} of {theta}")));
    }
    Ok(Outcome::ok(text))
}

fn cmd_abelian(o: &Opts) -> CmdResult {
    let spec = CoordinateSubgroupSpec::parse(&o.read_spec()?)?;
    let n_max = o.mmax.unwrap_or(100);
    if n_max < 2 {
        return input("--mmax must be at least 2");
    }
    Ok(Outcome::ok(o.trace_text(&abelian_trace(&spec, n_max))))
}

fn cmd_lie(o: &Opts) -> CmdResult {
    let family = o.family()?;
    let n = o.rank()?;
    let p = o.p.unwrap_or(3);
    let degree = o.degree.unwrap_or(30);
    let alg = lie_from_spec(family, n, p)?;
    let d = alg.dim();
    let mut out = String::new();
    let mut code = 0;
    let _ = writeln!(out, "algebra {} p={p} d={d}", family.group_name(n).to_lowercase());
    let violations = alg.check_axioms();
    match violations.first() {
        None => out.push_str("axioms: antisymmetry and jacobi hold\n"),
        Some(v) => {
            let _ = writeln!(out, "axioms: {} violated ({v:?})", v.axiom());
            code = EXIT_INVARIANT;
        }
    }
    let _ = writeln!(out, "perfect: {}", alg.is_perfect());
    let verdict = match alg.is_simple_bruteforce() {
        SimplicityVerdict::Simple { classes } => format!("simple (certified over {classes} classes)"),
        SimplicityVerdict::NotSimple { generator, ideal } => format!(
            "not simple: generator {generator:?} spans an ideal of dimension {}",
            ideal.dim()
        ),
        SimplicityVerdict::Abelian => "not simple: abelian".into(),
        SimplicityVerdict::Unknown { classes } => {
            format!("unknown ({classes} classes exceed the enumeration limit; no basis witness)")
        }
    };
    let _ = writeln!(out, "simplicity: {verdict}");
    for q in [2usize, 3, 5].into_iter().filter(|&q| q <= degree) {
        let tr = density_trace(&congruence_family(&alg, q, degree)?);
        let last = tr.last().map(|r| r.ratio).unwrap_or_default();
        let _ = writeln!(out, "density congruence q={q} D={degree}: {}", display_ratio(&last));
    }
    let h = borel_subalgebra(&alg)?;
    let tr = density_trace(&subalgebra_family(&alg, &h, degree)?);
    let last = tr.last().map(|r| r.ratio).unwrap_or_default();
    let _ = writeln!(out, "density borel dim={} D={degree}: {}", h.dim(), display_ratio(&last));
    let rep = isolated_bound_check(&alg, o.count.unwrap_or(8), o.seed, degree)?;
    let _ = writeln!(out, "bound 1-1/d: {}", display_ratio(&rep.bound));
    for f in &rep.families {
        let _ = writeln!(
            out,
            "family {}: density {} linear-codimension {} within-bound {}",
            f.label,
            display_ratio(&f.density_at_cutoff),
            f.linear_codimension,
            f.within_bound
        );
    }
    for note in &rep.notes {
        let _ = writeln!(out, "note: {note}");
    }
    for v in &rep.violations {
        let _ = writeln!(out, "violation: {v}");
        code = EXIT_INVARIANT;
    }
    if o.dump {
        out.push_str(&alg.dump());
    }
    Ok(Outcome { text: out, code })
}

fn cmd_fgl(o: &Opts) -> CmdResult {
    let law = FormalGroupLaw::parse(&o.read_spec()?)?;
    let level = o.n.unwrap_or(1);
    let ctx = match o.k {
        Some(k) => RingCtx::new(law.ctx().p() as u64, k)?,
        None => law.ctx(),
    };
    let mut out = format!(
        "fgl d={} D={} p={} k={} level={level}\n",
        law.dim(),
        law.max_degree(),
        ctx.p(),
        ctx.k()
    );
    let report = law.check_axioms();
    if !report.passed() {
        for v in &report.violations {
            let _ = writeln!(out, "violation {}: {v:?}", v.axiom());
        }
        return Ok(Outcome { text: out, code: EXIT_INVARIANT });
    }
    out.push_str("axioms: unit, associativity and tail shape hold\n");
    let g = StandardGroup::new(law, level, ctx)?;
    out.push_str("n,index_log\n");
    for n in 0..=o.mmax.unwrap_or(g.depth()).min(g.depth()) {
        let _ = writeln!(out, "{n},{}", g.index_log(n)?);
    }
    Ok(Outcome::ok(out))
}

fn cmd_spectrum(o: &Opts) -> CmdResult {
    let m = o.mmax.unwrap_or(3);
    let spec = o.group(m)?;
    let samples = spectrum_sample(&spec, m, o.count.unwrap_or(16), o.seed, o.cap)?;
    let capped = samples.iter().any(|s| !s.exhausted);
    let mut out = String::new();
    if let Format::Csv = o.format {
        out.push_str("index,generators,ratio_num,ratio_den,exhausted\n");
    }
    for s in &samples {
        let line = match o.format {
            Format::Csv => format!(
                "{},{},{},{},{}",
                s.index,
                s.generators,
                s.ratio.numer(),
                s.ratio.denom(),
                s.exhausted
            ),
            Format::Jsonl => json!({
                "index": s.index, "generators": s.generators,
                "ratio_num": s.ratio.numer(), "ratio_den": s.ratio.denom(), "exhausted": s.exhausted,
            })
            .to_string(),
        };
        let _ = writeln!(out, "{line}");
    }
    Ok(Outcome {
        text: out,
        code: if capped { EXIT_CAPPED } else { 0 },
    })
}

fn cmd_verify(o: &Opts) -> CmdResult {
    let filter = o
        .filter
        .as_deref()
        .map(|f| f.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .unwrap_or_default();
    let report = run_suite(&VerifyConfig { seed: o.seed, filter })?;
    for r in &report.results {
        eprintln!(
            "{:<12} {:>8.3}s (budget {}s)",
            r.name,
            r.elapsed.as_secs_f64(),
            r.budget.as_secs()
        );
    }
    Ok(Outcome {
        text: report.render(),
        code: if report.passed() { 0 } else { EXIT_INVARIANT },
    })
}

fn run(cli: &Cli) -> CmdResult {
    let (opts, f): (&Opts, fn(&Opts) -> CmdResult) = match &cli.command {
        Command::Borel(o) => (o, cmd_borel),
        Command::Hdim(o) => (o, cmd_hdim),
        Command::Realize(o) => (o, cmd_realize),
        Command::Abelian(o) => (o, cmd_abelian),
        Command::Lie(o) => (o, cmd_lie),
        Command::Fgl(o) => (o, cmd_fgl),
        Command::Spectrum(o) => (o, cmd_spectrum),
        Command::Verify(o) => (o, cmd_verify),
    };
    let outcome = f(opts)?;
    match &opts.out {
        Some(path) => fs::write(path, &outcome.text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    parallel::init_from_env();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(o) => ExitCode::from(o.code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
