//! Classical matrix groups `SL_n`, `SO_{2n+1}`, `SO_{2n}`, `Sp_{2n}` over
//! `F_p[t]/(t^k)`, their level-1 congruence subgroups, and dimension traces
//! of subgroups through the congruence quotients `G^1 / G_m`.
//!
//! The congruence filtration is used as the working standard filtration for
//! every family. For `SL_n` this is the classical statement; for the
//! orthogonal and symplectic families it is an assumption of this crate
//! (those groups are only known to contain *some* standard subgroup of the
//! same dimension).

mod element;
mod file;
mod trace;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{fp_kernel, FpSubspace};
use crate::ring::RingCtx;
use crate::trace::Rational;

pub use element::{defining_check, lift_element, lift_element_at, CongruenceElement};
pub use file::SubgroupFile;
pub use trace::{
    ambient_index_log, dimension_trace, dimension_trace_from, layer_log_count, spectrum_sample,
    subgroup_closure, unipotent_generators, ClosureResult, DimensionTrace, SpectrumSample,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    SL,
    SOOdd,
    SOEven,
    Sp,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::SL, Family::SOOdd, Family::SOEven, Family::Sp];

    pub fn matrix_size(self, n: usize) -> usize {
        match self {
            Family::SL => n,
            Family::SOOdd => 2 * n + 1,
            Family::SOEven | Family::Sp => 2 * n,
        }
    }

    /// Dimension of the group as an analytic manifold.
    pub fn closed_form_dimension(self, n: usize) -> usize {
        match self {
            Family::SL => n * n - 1,
            Family::SOOdd | Family::Sp => n * (2 * n + 1),
            Family::SOEven => n * (2 * n - 1),
        }
    }

    /// Dimension of the Borel subgroup (upper-triangular elements).
    pub fn closed_form_borel_dimension(self, n: usize) -> usize {
        match self {
            Family::SL => n * (n + 1) / 2 - 1,
            Family::SOOdd | Family::Sp => n * n + n,
            Family::SOEven => n * n,
        }
    }

    fn min_rank(self) -> usize {
        2
    }

    /// Smallest rank for which the family is the group of its root system
    /// type (`A_{n-1}`, `B_n`, `C_n`, `D_n`).
    pub fn root_system_min_rank(self) -> usize {
        match self {
            Family::SL | Family::SOOdd => 2,
            Family::Sp => 3,
            Family::SOEven => 4,
        }
    }

    /// Human-readable group name for rank `n`, e.g. `Sp4`, `SO7`.
    pub fn group_name(self, n: usize) -> String {
        match self {
            Family::SL => format!("SL{n}"),
            Family::Sp => format!("Sp{}", 2 * n),
            Family::SOOdd | Family::SOEven => format!("SO{}", self.matrix_size(n)),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::SL => "SL",
            Family::SOOdd => "SOodd",
            Family::SOEven => "SOeven",
            Family::Sp => "Sp",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SL" | "sl" => Ok(Family::SL),
            "SOodd" | "SO_odd" | "soodd" => Ok(Family::SOOdd),
            "SOeven" | "SO_even" | "soeven" => Ok(Family::SOEven),
            "Sp" | "sp" => Ok(Family::Sp),
            other => Err(Error::param(format!(
                "unknown family '{other}' (expected SL, SOodd, SOeven or Sp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    family: Family,
    n: usize,
    ctx: RingCtx,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, ctx: RingCtx) -> Result<Self> {
        if n < family.min_rank() {
            return Err(Error::param(format!("{family} requires n >= {}", family.min_rank())));
        }
        if n < family.root_system_min_rank() {
            log::debug!(
                "{} is accepted as a plain matrix group; its root system type needs n >= {}",
                family.group_name(n),
                family.root_system_min_rank()
            );
        }
        Ok(GroupSpec { family, n, ctx })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.family.matrix_size(self.n)
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn with_ctx(&self, ctx: RingCtx) -> Self {
        GroupSpec { ctx, ..*self }
    }

    pub fn name(&self) -> String {
        self.family.group_name(self.n)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "group family={} n={} p={} k={}",
            self.family,
            self.n,
            self.ctx.p(),
            self.ctx.k()
        )
    }
}

/// The bilinear form defining an orthogonal or symplectic group, as a
/// constant matrix over `F_p` (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramForm {
    pub size: usize,
    pub matrix: Vec<u32>,
}

/// Anti-diagonal ones, `K_s`.
fn antidiagonal(s: usize) -> Vec<u32> {
    let mut m = vec![0; s * s];
    for i in 0..s {
        m[i * s + (s - 1 - i)] = 1;
    }
    m
}

pub fn gram_matrix(spec: &GroupSpec) -> Result<GramForm> {
    let s = spec.size();
    let matrix = match spec.family {
        Family::SL => return Err(Error::NoForm("SL".into())),
        Family::SOOdd | Family::SOEven => antidiagonal(s),
        Family::Sp => {
            // [[0, K_n], [-K_n, 0]]
            let n = spec.n;
            let p = spec.p();
            let mut m = vec![0; s * s];
            for i in 0..n {
                m[i * s + n + (n - 1 - i)] = 1;
                m[(n + i) * s + (n - 1 - i)] = p - 1;
            }
            m
        }
    };
    Ok(GramForm { size: s, matrix })
}

/// Linear equations (over the `s^2` entries of `X`, row-major) cutting out
/// the tangent space: `tr X = 0` for `SL`, `X^t B + B X = 0` otherwise.
pub(crate) fn tangent_equations(spec: &GroupSpec) -> Vec<Vec<u32>> {
    let s = spec.size();
    let p = spec.p();
    match gram_matrix(spec) {
        Err(_) => {
            let mut eq = vec![0; s * s];
            for i in 0..s {
                eq[i * s + i] = 1;
            }
            vec![eq]
        }
        Ok(form) => {
            let b = &form.matrix;
            let mut eqs = Vec::with_capacity(s * s);
            for a in 0..s {
                for c in 0..s {
                    let mut eq = vec![0u32; s * s];
                    // (X^t B)_{ac} = sum_r X_{ra} B_{rc}
                    for r in 0..s {
                        let idx = r * s + a;
                        eq[idx] = (eq[idx] + b[r * s + c]) % p;
                    }
                    // (B X)_{ac} = sum_r B_{ar} X_{rc}
                    for r in 0..s {
                        let idx = r * s + c;
                        eq[idx] = (eq[idx] + b[a * s + r]) % p;
                    }
                    if eq.iter().any(|&x| x != 0) {
                        eqs.push(eq);
                    }
                }
            }
            eqs
        }
    }
}

/// The tangent space (Lie algebra) as a subspace of `F_p^{s^2}`.
pub fn tangent_space(spec: &GroupSpec) -> Result<FpSubspace> {
    let s = spec.size();
    fp_kernel(spec.p(), s * s, &tangent_equations(spec))
}

/// Upper-triangular part of the tangent space, in `F_p^{s^2}` coordinates.
pub fn borel_tangent_space(spec: &GroupSpec) -> Result<FpSubspace> {
    let s = spec.size();
    let p = spec.p();
    let upper: Vec<usize> = (0..s)
        .flat_map(|i| (i..s).map(move |j| i * s + j))
        .collect();
    let restricted: Vec<Vec<u32>> = tangent_equations(spec)
        .iter()
        .map(|eq| upper.iter().map(|&idx| eq[idx]).collect())
        .collect();
    let kernel = fp_kernel(p, upper.len(), &restricted)?;
    let full: Vec<Vec<u32>> = kernel
        .basis()
        .iter()
        .map(|v| {
            let mut w = vec![0; s * s];
            for (&idx, &x) in upper.iter().zip(v) {
                w[idx] = x;
            }
            w
        })
        .collect();
    crate::linalg::fp_rref(p, s * s, &full)
}

/// `dim_{F_p}` of the tangent space; it must agree with the closed form.
pub fn layer_dimension(spec: &GroupSpec) -> Result<usize> {
    let computed = tangent_space(spec)?.dim();
    let expected = spec.family.closed_form_dimension(spec.n);
    if computed != expected {
        return Err(Error::Inconsistent(format!(
            "{} over F_{}: tangent space has dimension {computed}, closed form gives {expected}",
            spec.name(),
            spec.p()
        )));
    }
    Ok(computed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BorelDimension {
    pub dim_borel: usize,
    pub dim_group: usize,
    pub ratio: Rational,
}

pub fn borel_dimension(spec: &GroupSpec) -> Result<BorelDimension> {
    let dim_borel = borel_tangent_space(spec)?.dim();
    let dim_group = layer_dimension(spec)?;
    Ok(BorelDimension {
        dim_borel,
        dim_group,
        ratio: Rational::new(dim_borel as i64, dim_group as i64),
    })
}
