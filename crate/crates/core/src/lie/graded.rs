//! Graded subalgebras of the loop algebra `L ⊗ tF_p[t]` truncated at a
//! degree cutoff, their density traces, and the isolated-point bound.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::{lie_from_spec, LieAlgebra};
use crate::error::{Error, Result};
use crate::groups::{borel_tangent_space, layer_log_count, GroupSpec};
use crate::linalg::FpSubspace;
use crate::ring::RingCtx;
use crate::trace::{Rational, Trace, TraceRow};

/// Slope `c` of the infinite-codimension proxy
/// `codim(K, <= n) >= c n` for `n` in `[ceil(D/2), D]`.
pub const CODIMENSION_SLOPE: Rational = Rational::new_raw(1, 2);

/// Homogeneous components `K_1, ..., K_D` of a graded subalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubalgebra {
    d: usize,
    layers: Vec<FpSubspace>,
}

impl GradedSubalgebra {
    pub fn max_degree(&self) -> usize {
        self.layers.len()
    }

    /// `K_m` for `1 <= m <= D`.
    pub fn layer(&self, m: usize) -> &FpSubspace {
        &self.layers[m - 1]
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.dim()).collect()
    }

    /// `[K_m, K_n] ⊆ K_{m+n}` for all `m + n <= D`.
    pub fn satisfies_grading(&self, alg: &LieAlgebra) -> bool {
        let top = self.max_degree();
        (1..=top).all(|m| {
            (1..=top - m).all(|n| {
                let target = self.layer(m + n);
                self.layer(m).basis().iter().all(|x| {
                    self.layer(n)
                        .basis()
                        .iter()
                        .all(|y| target.contains(&alg.bracket(x, y)))
                })
            })
        })
    }

    /// `Σ_{m<=n} (d - dim K_m)`.
    pub fn codimension_up_to(&self, n: usize) -> usize {
        self.layers[..n].iter().map(|l| self.d - l.dim()).sum()
    }

    /// Whether the codimension is at least `c n` on the upper half
    /// `[h, D]` of the computed degrees and also grows by at least
    /// `c (D - h)` across it, with `c = CODIMENSION_SLOPE`. The growth
    /// condition rejects finite-codimension subalgebras whose constant
    /// codimension happens to exceed `c D`.
    pub fn has_linear_codimension(&self) -> bool {
        let top = self.max_degree();
        let half = top.div_ceil(2).max(1);
        let int = |x: usize| Rational::from_integer(x as i64);
        let bounded_below =
            (half..=top).all(|n| int(self.codimension_up_to(n)) >= CODIMENSION_SLOPE * int(n));
        let growth = self.codimension_up_to(top) - self.codimension_up_to(half);
        bounded_below && int(growth) >= CODIMENSION_SLOPE * int(top - half)
    }
}

/// Smallest graded subalgebra containing `gens` (vector, degree) up to
/// degree `max_degree`. Degrees are processed in increasing order, and
/// `K_m` only receives brackets of strictly lower degrees, so one pass
/// reaches the fixed point.
pub fn loop_subalgebra_closure(
    alg: &LieAlgebra,
    gens: &[(Vec<u32>, usize)],
    max_degree: usize,
) -> Result<GradedSubalgebra> {
    let d = alg.dim();
    let mut layers = vec![FpSubspace::zero(alg.p(), d); max_degree];
    for (v, deg) in gens {
        if *deg == 0 || *deg > max_degree {
            return Err(Error::OutOfRange {
                value: deg.to_string(),
                range: format!("1..={max_degree}"),
            });
        }
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        layers[deg - 1].insert(v);
    }
    for m in 2..=max_degree {
        for a in 1..=m / 2 {
            let products: Vec<Vec<u32>> = layers[a - 1]
                .basis()
                .iter()
                .flat_map(|x| layers[m - a - 1].basis().iter().map(move |y| (x, y)))
                .map(|(x, y)| alg.bracket(x, y))
                .collect();
            for v in &products {
                if layers[m - 1].is_full() {
                    break;
                }
                layers[m - 1].insert(v);
            }
        }
    }
    Ok(GradedSubalgebra { d, layers })
}

/// `Σ_{m<=n} dim K_m / (n d)` for `n = 1 ..= D`.
pub fn density_trace(k: &GradedSubalgebra) -> Trace {
    let mut acc = 0u64;
    let rows = k
        .layers
        .iter()
        .enumerate()
        .map(|(i, l)| {
            acc += l.dim() as u64;
            TraceRow::new(i + 1, acc, ((i + 1) * k.d) as u64)
        })
        .collect();
    Trace::from_rows(rows, k.max_degree())
}

fn full_basis(alg: &LieAlgebra) -> Vec<Vec<u32>> {
    FpSubspace::full(alg.p(), alg.dim()).basis().to_vec()
}

/// The graded subalgebra generated by all of `L` in degree `q`.
pub fn congruence_family(alg: &LieAlgebra, q: usize, max_degree: usize) -> Result<GradedSubalgebra> {
    let gens: Vec<_> = full_basis(alg).into_iter().map(|v| (v, q)).collect();
    loop_subalgebra_closure(alg, &gens, max_degree)
}

/// `H ⊗ tF_p[t]`, generated by `H` in every degree.
pub fn subalgebra_family(
    alg: &LieAlgebra,
    h: &FpSubspace,
    max_degree: usize,
) -> Result<GradedSubalgebra> {
    let gens: Vec<_> = (1..=max_degree)
        .flat_map(|m| h.basis().iter().map(move |v| (v.clone(), m)))
        .collect();
    loop_subalgebra_closure(alg, &gens, max_degree)
}

/// Upper-triangular subalgebra of a classical algebra, in basis coordinates.
pub fn borel_subalgebra(alg: &LieAlgebra) -> Result<FpSubspace> {
    let (family, n) = alg
        .label()
        .ok_or_else(|| Error::param("Borel subalgebra needs a classical algebra"))?;
    let spec = GroupSpec::new(family, n, RingCtx::new(alg.p() as u64, 1)?)?;
    alg.subspace_from_matrices(borel_tangent_space(&spec)?.basis())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDensity {
    pub label: String,
    /// Density ratio at `n = D`.
    pub density_at_cutoff: Rational,
    /// Exact limit for constructed families.
    pub limit: Option<Rational>,
    pub linear_codimension: bool,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedBoundReport {
    pub dim: usize,
    /// `1 - 1/d`.
    pub bound: Rational,
    pub max_degree: usize,
    pub families: Vec<FamilyDensity>,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl IsolatedBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Densities of constructed families (`q`-congruence for `q` in
/// `{2, 3, 5}`, the Borel loop family) and of `samples` random closures,
/// compared against `1 - 1/d`. Only families whose codimension passes the
/// linear-growth proxy are held to the bound.
pub fn isolated_bound_check(
    alg: &LieAlgebra,
    samples: usize,
    seed: u64,
    max_degree: usize,
) -> Result<IsolatedBoundReport> {
    let d = alg.dim();
    if d == 0 || max_degree == 0 {
        return Err(Error::param("need a nonzero algebra and a positive degree cutoff"));
    }
    let bound = Rational::from_integer(1) - Rational::new(1, d as i64);
    let mut families = Vec::new();
    let mut record = |label: String, k: &GradedSubalgebra, limit: Option<Rational>| {
        let at = density_trace(k).last().map(|r| r.ratio).unwrap_or_default();
        let linear = k.has_linear_codimension();
        let within = at <= bound && limit.map_or(true, |l| l <= bound);
        families.push(FamilyDensity {
            label,
            density_at_cutoff: at,
            limit,
            linear_codimension: linear,
            within_bound: within,
        });
    };
    let perfect = alg.is_perfect();
    for q in [2usize, 3, 5].into_iter().filter(|&q| q <= max_degree) {
        let k = congruence_family(alg, q, max_degree)?;
        record(format!("congruence q={q}"), &k, perfect.then(|| Rational::new(1, q as i64)));
    }
    if alg.label().is_some() {
        let h = borel_subalgebra(alg)?;
        let k = subalgebra_family(alg, &h, max_degree)?;
        record(
            format!("borel dim={}", h.dim()),
            &k,
            Some(Rational::new(h.dim() as i64, d as i64)),
        );
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for i in 0..samples {
        let r = rng.gen_range(1..=3usize);
        let gens: Vec<(Vec<u32>, usize)> = (0..r)
            .map(|_| {
                let deg = rng.gen_range(1..=3usize.min(max_degree));
                let v = (0..d).map(|_| rng.gen_range(0..alg.p())).collect();
                (v, deg)
            })
            .collect();
        let k = loop_subalgebra_closure(alg, &gens, max_degree)?;
        record(format!("sample {i} gens={r}"), &k, None);
    }
    let violations = families
        .iter()
        .filter(|f| f.linear_codimension && !f.within_bound)
        .map(|f| {
            format!(
                "{}: density {} exceeds {}",
                f.label, f.density_at_cutoff, bound
            )
        })
        .collect();
    let notes = vec![
        format!(
            "infinite codimension proxy: codim(K, <= n) >= {c} n for n in [{h}, {d}] and codim grows by >= {c} ({d} - {h}) over that range",
            c = CODIMENSION_SLOPE,
            h = max_degree.div_ceil(2).max(1),
            d = max_degree
        ),
        "simplicity over F_p is taken as sufficient for the bound".to_string(),
        "maximality of the families is not certified".to_string(),
    ];
    Ok(IsolatedBoundReport {
        dim: d,
        bound,
        max_degree,
        families,
        violations,
        notes,
    })
}

/// Dimensions of the congruence layers `G_m / G_{m+1}`, `m = 1 ..= m_max`,
/// each checked against `dim L(F_p)`.
pub fn group_to_graded(spec: &GroupSpec, m_max: usize) -> Result<Vec<usize>> {
    if m_max == 0 || m_max > spec.ctx().k() {
        return Err(Error::OutOfRange {
            value: m_max.to_string(),
            range: format!("1..={}", spec.ctx().k()),
        });
    }
    let d = lie_from_spec(spec.family(), spec.rank(), spec.p() as u64)?.dim();
    (1..=m_max)
        .map(|m| {
            let layer = layer_log_count(spec, m)?;
            if layer != d {
                return Err(Error::Inconsistent(format!(
                    "layer {m} of {} has dimension {layer}, Lie algebra has {d}",
                    spec.name()
                )));
            }
            Ok(layer)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Family;

    fn sp4() -> LieAlgebra {
        lie_from_spec(Family::Sp, 2, 3).unwrap()
    }

    #[test]
    fn closure_examples() {
        let l = sp4();
        let full = congruence_family(&l, 1, 6).unwrap();
        assert_eq!(full.layer_dims(), vec![10; 6]);
        let q3 = congruence_family(&l, 3, 9).unwrap();
        for m in 1..=9 {
            assert_eq!(q3.layer(m).dim(), if m % 3 == 0 { 10 } else { 0 });
        }
        let empty = loop_subalgebra_closure(&l, &[], 5).unwrap();
        assert_eq!(empty.layer_dims(), vec![0; 5]);
        assert!(q3.satisfies_grading(&l));
    }

    #[test]
    fn density_examples() {
        let l = sp4();
        let q2 = congruence_family(&l, 2, 10).unwrap();
        assert_eq!(density_trace(&q2).last().unwrap().ratio, Rational::new(1, 2));
        let h = borel_subalgebra(&l).unwrap();
        assert_eq!(h.dim(), 6);
        let kh = subalgebra_family(&l, &h, 8).unwrap();
        assert!(density_trace(&kh).ratios().iter().all(|&r| r == Rational::new(3, 5)));
        let full = congruence_family(&l, 1, 4).unwrap();
        assert!(!full.has_linear_codimension());
    }

    #[test]
    fn bound_report() {
        let rep = isolated_bound_check(&sp4(), 4, 1, 12).unwrap();
        assert_eq!(rep.bound, Rational::new(9, 10));
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(rep.families.iter().any(|f| f.label == "congruence q=2"));
    }

    #[test]
    fn group_layers() {
        let sl2 = GroupSpec::new(Family::SL, 2, RingCtx::new(3, 4).unwrap()).unwrap();
        assert_eq!(group_to_graded(&sl2, 3).unwrap(), vec![3, 3, 3]);
        assert_eq!(group_to_graded(&sl2, 1).unwrap(), vec![3]);
        let sp = GroupSpec::new(Family::Sp, 2, RingCtx::new(3, 3).unwrap()).unwrap();
        assert_eq!(group_to_graded(&sp, 3).unwrap(), vec![10; 3]);
    }
}
