use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use super::element::{defining_check, lift_element, CongruenceElement};
use super::{gram_matrix, layer_dimension, tangent_space, Family, GroupSpec};
use crate::closure::{bfs_closure, exact_log, floor_log, pack_residues, Closure};
use crate::error::{Error, Result};
use crate::linalg::fp_rref;
use crate::matrix::SeriesMatrix;
use crate::trace::{Rational, Trace, TraceRow};

/// Image of a subgroup in `G^1 / G_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureResult {
    pub level: usize,
    /// `log_p |H G_m : G_m|`; a lower bound when `exhausted` is false.
    pub exponent: u32,
    pub states: usize,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionTrace {
    pub trace: Trace,
    /// Level of the ambient congruence subgroup the ratios are taken in.
    pub base_level: usize,
    pub exhausted: bool,
}

fn check_level(spec: &GroupSpec, m: usize) -> Result<()> {
    if m == 0 || m > spec.ctx().k() {
        return Err(Error::OutOfRange {
            value: m.to_string(),
            range: format!("1..={}", spec.ctx().k()),
        });
    }
    Ok(())
}

/// `log_p |G^1 : G_m| = d (m - 1)`: each congruence layer has order `p^d`.
pub fn ambient_index_log(spec: &GroupSpec, m: usize) -> Result<usize> {
    check_level(spec, m)?;
    Ok(layer_dimension(spec)? * (m - 1))
}

/// Canonical state of `M mod t^m`: coefficients of `t^1 .. t^{m-1}` of every
/// entry, row-major.
fn state_key(m: &SeriesMatrix, level: usize) -> Vec<u8> {
    let s = m.size();
    let mut key = Vec::with_capacity(s * s * level.saturating_sub(1));
    for i in 0..s {
        for j in 0..s {
            let slot = m.slot(i, j);
            pack_residues(m.ctx().p(), slot[1..level].iter().copied(), &mut key);
        }
    }
    key
}

fn reduce_generators(
    spec: &GroupSpec,
    gens: &[CongruenceElement],
    m: usize,
) -> Result<Vec<SeriesMatrix>> {
    let ctx = spec.ctx().with_k(m)?;
    gens.iter()
        .map(|g| {
            let mat = g.matrix();
            if mat.size() != spec.size() {
                return Err(Error::DimensionMismatch {
                    expected: spec.size(),
                    got: mat.size(),
                });
            }
            if mat.ctx().k() < m {
                return Err(Error::param(format!(
                    "generator known only mod t^{}, level {m} requested",
                    mat.ctx().k()
                )));
            }
            mat.retruncate(ctx)
        })
        .collect()
}

fn closure_at(
    spec: &GroupSpec,
    gens: &[CongruenceElement],
    m: usize,
    cap: usize,
) -> Result<Closure<SeriesMatrix>> {
    check_level(spec, m)?;
    let reduced = reduce_generators(spec, gens, m)?;
    let ctx = spec.ctx().with_k(m)?;
    let identity = SeriesMatrix::identity(ctx, spec.size());
    Ok(bfs_closure(
        identity,
        &reduced,
        |a, b| a.mat_mul(b).expect("same shape"),
        |a| state_key(a, m),
        cap,
    ))
}

fn exponent_of(p: u32, count: usize, exhausted: bool) -> Result<u32> {
    if exhausted {
        exact_log(p, count as u64)
            .ok_or_else(|| Error::Inconsistent(format!("subgroup of a p-group has order {count}")))
    } else {
        Ok(floor_log(p, count as u64))
    }
}

/// Order of the image of `<gens>` in `G^1 / G_m`, by breadth-first closure.
pub fn subgroup_closure(
    spec: &GroupSpec,
    gens: &[CongruenceElement],
    m: usize,
    cap: usize,
) -> Result<ClosureResult> {
    let closure = closure_at(spec, gens, m, cap)?;
    let states = closure.elements.len();
    let exponent = exponent_of(spec.p(), states, closure.exhausted)?;
    Ok(ClosureResult {
        level: m,
        exponent,
        states,
        exhausted: closure.exhausted,
    })
}

/// Ratios `log|H G_m : G_m| / log|G^1 : G_m|` for `m = 2 ..= m_max`.
pub fn dimension_trace(
    spec: &GroupSpec,
    gens: &[CongruenceElement],
    m_max: usize,
    cap: usize,
) -> Result<DimensionTrace> {
    dimension_trace_from(spec, gens, 1, m_max, cap)
}

/// Dimension trace of `H ∩ G^base` inside the ambient group `G^base`, for
/// levels `m = base + 1 ..= m_max`.
///
/// Since `G_m ⊆ G^base`, `(H ∩ G^base) G_m / G_m` is the set of elements
/// of the image of `H` in `G^1 / G_m` that are `≡ I (mod t^base)`, so one
/// closure per level serves every base.
pub fn dimension_trace_from(
    spec: &GroupSpec,
    gens: &[CongruenceElement],
    base: usize,
    m_max: usize,
    cap: usize,
) -> Result<DimensionTrace> {
    if base == 0 || m_max <= base {
        return Err(Error::param(format!(
            "need 1 <= base level < m_max (got base {base}, m_max {m_max})"
        )));
    }
    check_level(spec, m_max)?;
    let d = layer_dimension(spec)? as u64;
    let mut rows = Vec::new();
    let mut exhausted = true;
    for m in base + 1..=m_max {
        let closure = closure_at(spec, gens, m, cap)?;
        let inside = closure
            .elements
            .iter()
            .filter(|e| e.is_identity_mod(base))
            .count();
        let num = exponent_of(spec.p(), inside, closure.exhausted)? as u64;
        let den = d * (m - base) as u64;
        let row = TraceRow::new(m, num, den);
        if row.ratio > Rational::from_integer(1) {
            return Err(Error::Inconsistent(format!(
                "trace ratio {} exceeds 1 at level {m}",
                row.ratio
            )));
        }
        rows.push(row);
        if !closure.exhausted {
            exhausted = false;
            break;
        }
    }
    Ok(DimensionTrace {
        trace: Trace::from_rows(rows, m_max),
        base_level: base,
        exhausted,
    })
}

/// `log_p` of the number of `X` with `I + t^level X` in the group modulo
/// `t^{level+1}`, counted from the group relation itself: the defect of
/// `I + t^level X` at order `t^level` is linear in `X`, so the count is
/// `p^{s^2 - rank}`.
pub fn layer_log_count(spec: &GroupSpec, level: usize) -> Result<usize> {
    if level == 0 {
        return Err(Error::param("layer level must be at least 1"));
    }
    let s = spec.size();
    let ctx = spec.ctx().with_k(level + 1)?;
    let form = gram_matrix(spec).ok();
    let mut defects = Vec::with_capacity(s * s);
    for idx in 0..s * s {
        let mut x = vec![0; s * s];
        x[idx] = 1;
        let a = SeriesMatrix::identity_plus(ctx, s, level, &x);
        let defect: Vec<u32> = match &form {
            None => vec![a.det().coeff(level)],
            Some(f) => {
                let b = SeriesMatrix::from_fp(ctx, s, &f.matrix);
                let lhs = a.transpose().mat_mul(&b)?.mat_mul(&a)?;
                lhs.mat_sub(&b)?.coefficient_layer(level)
            }
        };
        // det(I) = 1 contributes a constant 1 at level 0 only; at `level`
        // the SL defect is just the coefficient of t^level.
        defects.push(defect);
    }
    let width = defects[0].len();
    let rank = fp_rref(spec.p(), width, &defects)?.dim();
    Ok(s * s - rank)
}

/// Generators `I + t^j E_{12}` for `j = 1 ..= m - 1`: modulo `t^m` they
/// generate the upper-unipotent coordinate subgroup `I + tF_p[[t]] E_{12}`
/// of `SL_n^1`.
pub fn unipotent_generators(spec: &GroupSpec, m: usize) -> Result<Vec<CongruenceElement>> {
    if spec.family() != Family::SL {
        return Err(Error::param("unipotent coordinate subgroup is defined for SL only"));
    }
    check_level(spec, m)?;
    let s = spec.size();
    let mut x = vec![0; s * s];
    x[1] = 1;
    (1..m)
        .map(|j| {
            let mat = SeriesMatrix::identity_plus(spec.ctx(), s, j, &x);
            debug_assert!(defining_check(&mat, spec).unwrap_or(false));
            Ok(CongruenceElement::from_matrix_unchecked(mat))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumSample {
    pub index: usize,
    pub generators: usize,
    pub ratio: Rational,
    pub exhausted: bool,
}

/// Ratios at level `m` of randomly generated subgroups: each sample draws
/// 1 to 3 random tangent vectors and closes their level-1 lifts.
///
/// Sampling is sequential from a xoshiro256++ stream seeded with `seed`; the
/// closures then run in parallel and are returned in sample order.
pub fn spectrum_sample(
    spec: &GroupSpec,
    m: usize,
    count: usize,
    seed: u64,
    cap: usize,
) -> Result<Vec<SpectrumSample>> {
    check_level(spec, m)?;
    if m < 2 {
        return Err(Error::param("spectrum sampling needs m >= 2"));
    }
    if spec.family() != Family::SL && spec.p() == 2 {
        return Err(Error::param("orthogonal and symplectic sampling needs p >= 3"));
    }
    let tangent = tangent_space(spec)?;
    let d = layer_dimension(spec)?;
    let p = spec.p();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut inputs = Vec::with_capacity(count);
    for _ in 0..count {
        let r = rng.gen_range(1..=3usize);
        let gens = (0..r)
            .map(|_| {
                let coords: Vec<u32> = (0..tangent.dim()).map(|_| rng.gen_range(0..p)).collect();
                lift_element(spec, &tangent.combine(&coords), m)
            })
            .collect::<Result<Vec<_>>>()?;
        inputs.push(gens);
    }
    let local = spec.with_ctx(spec.ctx().with_k(m)?);
    inputs
        .par_iter()
        .enumerate()
        .map(|(index, gens)| {
            let res = subgroup_closure(&local, gens, m, cap)?;
            Ok(SpectrumSample {
                index,
                generators: gens.len(),
                ratio: Rational::new(res.exponent as i64, (d * (m - 1)) as i64),
                exhausted: res.exhausted,
            })
        })
        .collect()
}
