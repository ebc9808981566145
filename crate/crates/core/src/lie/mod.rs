//! Classical Lie algebras over `F_p` given by their matrix relations, with
//! structure constants, ideals, centralizers and brute-force simplicity.

mod graded;

pub use graded::{
    borel_subalgebra, congruence_family, density_trace, group_to_graded, isolated_bound_check,
    loop_subalgebra_closure, subalgebra_family, FamilyDensity, GradedSubalgebra,
    IsolatedBoundReport, CODIMENSION_SLOPE,
};

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{layer_dimension, tangent_space, Family, GroupSpec};
use crate::linalg::{fp_kernel, fp_rref, FpSubspace};
use crate::ring::RingCtx;

/// Largest number of projective classes enumerated by the certified
/// simplicity test.
pub const CERTIFIED_CLASS_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    p: u32,
    label: Option<(Family, usize)>,
    /// Basis matrices in row-major `F_p^{s^2}` coordinates; empty for an
    /// algebra given only by structure constants.
    basis: Vec<Vec<u32>>,
    /// `consts[i][j]` holds the coordinates of `[b_i, b_j]`.
    consts: Vec<Vec<Vec<u32>>>,
}

fn commutator(p: u32, s: usize, a: &[u32], b: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut out = vec![0u32; s * s];
    for i in 0..s {
        for j in 0..s {
            let mut acc = 0u64;
            for r in 0..s {
                acc += a[i * s + r] as u64 * b[r * s + j] as u64;
                acc += (p64 - b[i * s + r] as u64) * a[r * s + j] as u64;
            }
            out[i * s + j] = (acc % p64) as u32;
        }
    }
    out
}

/// The Lie algebra of `family` and rank `n` over `F_p`: the kernel of the
/// linearized defining relation, bracketed as matrices.
pub fn lie_from_spec(family: Family, n: usize, p: u64) -> Result<LieAlgebra> {
    let spec = GroupSpec::new(family, n, RingCtx::new(p, 1)?)?;
    let space = tangent_space(&spec)?;
    layer_dimension(&spec)?;
    let p = spec.p();
    let s = spec.size();
    let basis = space.basis().to_vec();
    let mut consts = vec![vec![Vec::new(); basis.len()]; basis.len()];
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let c = commutator(p, s, bi, bj);
            consts[i][j] = space.coordinates(&c).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "bracket of basis elements {i}, {j} leaves the algebra of {}",
                    spec.name()
                ))
            })?;
        }
    }
    Ok(LieAlgebra {
        p,
        label: Some((family, n)),
        basis,
        consts,
    })
}

/// Antisymmetry or Jacobi failure on basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieViolation {
    Antisymmetry { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
}

impl LieViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            LieViolation::Antisymmetry { .. } => "antisymmetry",
            LieViolation::Jacobi { .. } => "jacobi",
        }
    }
}

/// Result of the simplicity search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityVerdict {
    /// Every projective class generates the whole algebra.
    Simple { classes: u64 },
    /// A proper nonzero ideal, generated by `generator`.
    NotSimple { generator: Vec<u32>, ideal: FpSubspace },
    /// Zero bracket: abelian algebras are not simple.
    Abelian,
    /// Too many classes to enumerate and no basis vector gave a witness.
    Unknown { classes: u64 },
}

impl SimplicityVerdict {
    pub fn is_simple(&self) -> bool {
        matches!(self, SimplicityVerdict::Simple { .. })
    }
}

impl LieAlgebra {
    /// An abstract algebra from `consts[i][j] = [b_i, b_j]`; axioms are not
    /// checked here, see [`LieAlgebra::check_axioms`].
    pub fn from_structure(p: u32, consts: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let d = consts.len();
        if consts.iter().any(|row| row.len() != d || row.iter().any(|v| v.len() != d)) {
            return Err(Error::param("structure constants must be a d x d x d array"));
        }
        if consts.iter().flatten().flatten().any(|&c| c >= p) {
            return Err(Error::param(format!("structure constants must be reduced mod {p}")));
        }
        Ok(LieAlgebra {
            p,
            label: None,
            basis: Vec::new(),
            consts,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.consts.len()
    }

    pub fn label(&self) -> Option<(Family, usize)> {
        self.label
    }

    pub fn basis_matrices(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u32 {
        self.consts[i][j][k]
    }

    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, c: u32) {
        self.consts[i][j][k] = c % self.p;
    }

    /// `[u, v]` in basis coordinates.
    pub fn bracket(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let d = self.dim();
        let p = self.p as u64;
        let mut acc = vec![0u64; d];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj == 0 {
                    continue;
                }
                let w = ui as u64 * vj as u64 % p;
                for (a, &c) in acc.iter_mut().zip(&self.consts[i][j]) {
                    *a = (*a + w * c as u64) % p;
                }
            }
        }
        acc.into_iter().map(|x| x as u32).collect()
    }

    fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Matrix of `ad(a)`, row-major: column `j` holds `[a, b_j]`.
    pub fn ad(&self, a: &[u32]) -> Vec<Vec<u32>> {
        let d = self.dim();
        let cols: Vec<Vec<u32>> = (0..d).map(|j| self.bracket(a, &self.unit(j))).collect();
        (0..d).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
    }

    /// Antisymmetry `[b_i, b_i] = 0`, `[b_i, b_j] = -[b_j, b_i]` and the
    /// Jacobi identity on every basis triple.
    pub fn check_axioms(&self) -> Vec<LieViolation> {
        let d = self.dim();
        let p = self.p;
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                let ok = if i == j {
                    self.consts[i][i].iter().all(|&c| c == 0)
                } else {
                    self.consts[i][j]
                        .iter()
                        .zip(&self.consts[j][i])
                        .all(|(&a, &b)| (a + b) % p == 0)
                };
                if !ok {
                    out.push(LieViolation::Antisymmetry { i, j });
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (bi, bj, bk) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket(&bi, &self.bracket(&bj, &bk));
                    let t2 = self.bracket(&bj, &self.bracket(&bk, &bi));
                    let t3 = self.bracket(&bk, &self.bracket(&bi, &bj));
                    if (0..d).any(|x| (t1[x] + t2[x] + t3[x]) % p != 0) {
                        out.push(LieViolation::Jacobi { i, j, k });
                    }
                }
            }
        }
        out
    }

    /// `[L, L] = L`.
    pub fn is_perfect(&self) -> bool {
        let d = self.dim();
        let rows: Vec<Vec<u32>> = self.consts.iter().flatten().cloned().collect();
        fp_rref(self.p, d, &rows).map(|s| s.dim() == d).unwrap_or(d == 0)
    }

    pub fn is_abelian(&self) -> bool {
        self.consts.iter().flatten().flatten().all(|&c| c == 0)
    }

    /// Smallest ideal containing `v`.
    pub fn ideal_closure(&self, v: &[u32]) -> FpSubspace {
        let d = self.dim();
        let mut span = FpSubspace::zero(self.p, d);
        let mut queue = Vec::new();
        if span.insert(v) {
            queue.push(v.to_vec());
        }
        while let Some(w) = queue.pop() {
            for j in 0..d {
                if span.is_full() {
                    return span;
                }
                let u = self.bracket(&w, &self.unit(j));
                if span.insert(&u) {
                    queue.push(u);
                }
            }
        }
        span
    }

    /// `ker ad(a)`.
    pub fn centralizer(&self, a: &[u32]) -> Result<FpSubspace> {
        fp_kernel(self.p, self.dim(), &self.ad(a))
    }

    /// Number of one-dimensional subspaces, `(p^d - 1)/(p - 1)`, saturating.
    pub fn projective_classes(&self) -> u64 {
        let p = self.p as u64;
        let mut total = 0u64;
        let mut pow = 1u64;
        for _ in 0..self.dim() {
            total = total.saturating_add(pow);
            pow = pow.saturating_mul(p);
        }
        total
    }

    /// The `idx`-th normalized vector (first nonzero coordinate 1), ordered
    /// by leading position and then lexicographically in the tail.
    fn projective_vector(&self, mut idx: u64) -> Vec<u32> {
        let d = self.dim();
        let p = self.p as u64;
        let mut v = vec![0u32; d];
        for lead in 0..d {
            let tail = d - lead - 1;
            let block = p.pow(tail as u32);
            if idx < block {
                v[lead] = 1;
                for pos in (lead + 1..d).rev() {
                    v[pos] = (idx % p) as u32;
                    idx /= p;
                }
                return v;
            }
            idx -= block;
        }
        unreachable!("projective index out of range")
    }

    /// Simplicity by enumeration of projective classes when there are at
    /// most [`CERTIFIED_CLASS_LIMIT`]; otherwise only basis vectors are
    /// tried. The witness is the lowest-index class with a proper ideal.
    pub fn is_simple_bruteforce(&self) -> SimplicityVerdict {
        if self.dim() == 0 || self.is_abelian() {
            return SimplicityVerdict::Abelian;
        }
        let classes = self.projective_classes();
        let proper = |v: &Vec<u32>| !self.ideal_closure(v).is_full();
        if classes <= CERTIFIED_CLASS_LIMIT {
            let hit = (0..classes)
                .into_par_iter()
                .map(|i| self.projective_vector(i))
                .find_first(|v| proper(v));
            match hit {
                Some(v) => SimplicityVerdict::NotSimple {
                    ideal: self.ideal_closure(&v),
                    generator: v,
                },
                None => SimplicityVerdict::Simple { classes },
            }
        } else {
            match (0..self.dim()).map(|i| self.unit(i)).find(|v| proper(v)) {
                Some(v) => SimplicityVerdict::NotSimple {
                    ideal: self.ideal_closure(&v),
                    generator: v,
                },
                None => SimplicityVerdict::Unknown { classes },
            }
        }
    }

    /// Coordinates of matrices (row-major `s^2` vectors) in the basis;
    /// fails if a matrix is outside the algebra.
    pub fn subspace_from_matrices(&self, mats: &[Vec<u32>]) -> Result<FpSubspace> {
        let s2 = self.basis.first().map(|b| b.len()).unwrap_or(0);
        let space = fp_rref(self.p, s2, &self.basis)?;
        let coords = mats
            .iter()
            .map(|m| {
                space
                    .coordinates(m)
                    .ok_or_else(|| Error::param("matrix is not in the algebra"))
            })
            .collect::<Result<Vec<_>>>()?;
        fp_rref(self.p, self.dim(), &coords)
    }

    /// `lie family=.. n=.. p=.. d=..`, the basis matrices, then nonzero
    /// structure constants as `i j k c`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        match self.label {
            Some((fam, n)) => {
                let _ = writeln!(out, "lie family={fam} n={n} p={} d={}", self.p, self.dim());
            }
            None => {
                let _ = writeln!(out, "lie family=abstract n=0 p={} d={}", self.p, self.dim());
            }
        }
        for b in &self.basis {
            let s = (b.len() as f64).sqrt() as usize;
            let rows: Vec<String> = b
                .chunks(s)
                .map(|r| {
                    let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                    format!("[{}]", cells.join(","))
                })
                .collect();
            let _ = writeln!(out, "[{}]", rows.join(","));
        }
        for (i, row) in self.consts.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, &c) in v.iter().enumerate() {
                    if c != 0 {
                        let _ = writeln!(out, "{i} {j} {k} {c}");
                    }
                }
            }
        }
        out
    }

    /// Reads the structure constants back from [`LieAlgebra::dump`] output;
    /// basis matrices are skipped.
    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty dump"))?;
        let fields: Vec<(&str, &str)> = header
            .split_whitespace()
            .skip(1)
            .filter_map(|f| f.split_once('='))
            .collect();
        if !header.starts_with("lie ") {
            return Err(Error::parse(no, "header must start with 'lie'"));
        }
        let get = |k: &str| -> Result<u64> {
            fields
                .iter()
                .find(|(key, _)| *key == k)
                .and_then(|(_, v)| v.parse().ok())
                .ok_or_else(|| Error::parse(no, format!("missing or bad field '{k}'")))
        };
        let (p, d) = (get("p")? as u32, get("d")? as usize);
        let mut consts = vec![vec![vec![0u32; d]; d]; d];
        for (no, line) in lines {
            if line.is_empty() || line.starts_with('[') {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| Error::parse(no, format!("bad number '{x}'"))))
                .collect::<Result<_>>()?;
            match nums[..] {
                [i, j, k, c] if (i as usize) < d && (j as usize) < d && (k as usize) < d => {
                    consts[i as usize][j as usize][k as usize] = (c % p as u64) as u32;
                }
                _ => return Err(Error::parse(no, "expected 'i j k c' with indices below d")),
            }
        }
        LieAlgebra::from_structure(p, consts)
    }
}
