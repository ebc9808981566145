use super::{gram_matrix, tangent_space, Family, GroupSpec};
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::ring::fp_inv;

/// An element of the level-1 congruence subgroup `G^1`: `M ≡ I (mod t)` and
/// the defining relation holds exactly in the matrix's own truncation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceElement {
    matrix: SeriesMatrix,
}

impl CongruenceElement {
    pub fn new(spec: &GroupSpec, matrix: SeriesMatrix) -> Result<Self> {
        if matrix.ctx().p() != spec.p() {
            return Err(Error::CtxMismatch(spec.ctx().to_string(), matrix.ctx().to_string()));
        }
        if !matrix.is_identity_mod(1) {
            return Err(Error::param(format!(
                "matrix is not congruent to I mod t: {matrix}"
            )));
        }
        if !defining_check(&matrix, spec)? {
            return Err(Error::param(format!(
                "matrix does not satisfy the defining relation of {}",
                spec.name()
            )));
        }
        Ok(CongruenceElement { matrix })
    }

    pub fn matrix(&self) -> &SeriesMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SeriesMatrix {
        self.matrix
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        CongruenceElement {
            matrix: SeriesMatrix::identity(spec.ctx(), spec.size()),
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: SeriesMatrix) -> Self {
        CongruenceElement { matrix }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(CongruenceElement {
            matrix: self.matrix.mat_mul(&other.matrix)?,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(CongruenceElement {
            matrix: self.matrix.mat_inv()?,
        })
    }

    /// Largest `m` with `M ≡ I (mod t^m)`, capped at the truncation.
    pub fn level(&self) -> usize {
        let k = self.matrix.ctx().k();
        (1..=k)
            .take_while(|&m| self.matrix.is_identity_mod(m))
            .last()
            .unwrap_or(0)
    }
}

/// Whether `m` satisfies the defining relation of the family exactly in its
/// own truncation: `det M = 1`, or `M^t B M = B` for the Gram matrix `B`.
pub fn defining_check(m: &SeriesMatrix, spec: &GroupSpec) -> Result<bool> {
    if m.size() != spec.size() {
        return Err(Error::DimensionMismatch {
            expected: spec.size(),
            got: m.size(),
        });
    }
    match spec.family() {
        Family::SL => Ok(m.det().is_one()),
        _ => {
            let form = gram_matrix(spec)?;
            let b = SeriesMatrix::from_fp(m.ctx(), form.size, &form.matrix);
            let lhs = m.transpose().mat_mul(&b)?.mat_mul(m)?;
            Ok(lhs == b)
        }
    }
}

/// Lift of a tangent vector `X` to an element `≡ I + tX (mod t^2)` of `G^1`,
/// satisfying the defining relation exactly mod `t^m`.
pub fn lift_element(spec: &GroupSpec, x: &[u32], m: usize) -> Result<CongruenceElement> {
    lift_element_at(spec, x, 1, m)
}

/// Lift of `X` to an element `≡ I + t^level X (mod t^{level+1})` of
/// `G^level`, computed modulo `t^m`.
///
/// `SL`: `I + t^level X` with its first row divided by the determinant.
/// `SO`/`Sp`: the Cayley transform `(I + Y)(I - Y)^{-1}` with
/// `Y = t^level X / 2`, which needs `p >= 3`.
pub fn lift_element_at(
    spec: &GroupSpec,
    x: &[u32],
    level: usize,
    m: usize,
) -> Result<CongruenceElement> {
    let s = spec.size();
    if x.len() != s * s {
        return Err(Error::DimensionMismatch {
            expected: s * s,
            got: x.len(),
        });
    }
    if m == 0 || m > spec.ctx().k() {
        return Err(Error::OutOfRange {
            value: m.to_string(),
            range: format!("1..={}", spec.ctx().k()),
        });
    }
    if level == 0 {
        return Err(Error::param("lift level must be at least 1"));
    }
    if !tangent_space(spec)?.contains(x) {
        return Err(Error::NotTangent(spec.name()));
    }
    let ctx = spec.ctx().with_k(m)?;
    let p = spec.p();
    let matrix = match spec.family() {
        Family::SL => {
            let mut a = SeriesMatrix::identity_plus(ctx, s, level, x);
            let det_inv = a.det().inverse()?;
            for j in 0..s {
                let scaled = &a.entry(0, j) * &det_inv;
                a.set_entry(0, j, &scaled)?;
            }
            a
        }
        _ => {
            if p == 2 {
                return Err(Error::param(
                    "orthogonal and symplectic lifts need p >= 3 (Cayley transform divides by 2)",
                ));
            }
            let half = fp_inv(p, 2).expect("p odd");
            let y: Vec<u32> = x.iter().map(|&v| (v as u64 * half as u64 % p as u64) as u32).collect();
            let neg_y: Vec<u32> = y.iter().map(|&v| (p - v) % p).collect();
            let plus = SeriesMatrix::identity_plus(ctx, s, level, &y);
            let minus = SeriesMatrix::identity_plus(ctx, s, level, &neg_y);
            plus.mat_mul(&minus.mat_inv()?)?
        }
    };
    let target = spec.with_ctx(ctx);
    if !defining_check(&matrix, &target)? {
        return Err(Error::Inconsistent(format!(
            "lift of a tangent vector left {}",
            spec.name()
        )));
    }
    Ok(CongruenceElement { matrix })
}
