//! Row reduction over `F_p`.

use crate::error::{Error, Result};
use crate::ring::{fp_inv, is_prime};

/// A subspace of `F_p^n` held as a reduced row echelon basis.
///
/// Pivot columns are strictly increasing and each pivot is 1 with zeros
/// above and below it, so two generating sets of the same subspace yield
/// identical values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpSubspace {
    p: u32,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl FpSubspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        FpSubspace {
            p,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![0; ambient];
                r[i] = 1;
                r
            })
            .collect();
        FpSubspace {
            p,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduces `v` against the basis in place; the remainder is zero iff
    /// `v` lies in the span.
    fn reduce(&self, v: &mut [u32]) {
        let p = self.p as u64;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let f = p - c as u64;
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = ((*x as u64 + f * r as u64) % p) as u32;
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span, keeping the basis reduced. Returns whether the
    /// dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let p = self.p as u64;
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = fp_inv(self.p, w[pc]).expect("nonzero pivot") as u64;
        for x in w.iter_mut() {
            *x = ((*x as u64 * inv) % p) as u32;
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c == 0 {
                continue;
            }
            let f = p - c as u64;
            for (x, &r) in row.iter_mut().zip(&w) {
                if r != 0 {
                    *x = ((*x as u64 + f * r as u64) % p) as u32;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, w);
        true
    }

    /// Coordinates of `v` with respect to the echelon basis, or `None` when
    /// `v` is outside the span. With a reduced basis these are just the
    /// entries of `v` at the pivot columns.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc] % self.p).collect())
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        assert_eq!(coords.len(), self.rows.len());
        let p = self.p as u64;
        let mut out = vec![0u32; self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            if *c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                *o = ((*o as u64 + *c as u64 * r as u64) % p) as u32;
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &FpSubspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &FpSubspace) -> FpSubspace {
        let mut out = self.clone();
        for r in &other.rows {
            out.insert(r);
        }
        out
    }
}

/// Reduced row echelon form of the span of `rows` in `F_p^ambient`.
pub fn fp_rref(p: u32, ambient: usize, rows: &[Vec<u32>]) -> Result<FpSubspace> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let mut space = FpSubspace::zero(p, ambient);
    for r in rows {
        if r.len() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: r.len(),
            });
        }
        space.insert(r);
        if space.is_full() {
            break;
        }
    }
    Ok(space)
}

/// Basis (in reduced echelon form) of `{x : A x = 0}` where the rows of `A`
/// are `equations`, each of length `ncols`.
pub fn fp_kernel(p: u32, ncols: usize, equations: &[Vec<u32>]) -> Result<FpSubspace> {
    let rref = fp_rref(p, ncols, equations)?;
    let pivots = rref.pivots().to_vec();
    let free: Vec<usize> = (0..ncols).filter(|c| pivots.binary_search(c).is_err()).collect();
    let mut gens = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![0u32; ncols];
        v[f] = 1;
        for (row, &pc) in rref.basis().iter().zip(&pivots) {
            let c = row[f];
            if c != 0 {
                v[pc] = p - c;
            }
        }
        gens.push(v);
    }
    fp_rref(p, ncols, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        assert_eq!(fp_rref(3, 2, &[vec![1, 0], vec![0, 1]]).unwrap().dim(), 2);
        assert_eq!(fp_rref(3, 2, &[vec![1, 1], vec![2, 2]]).unwrap().dim(), 1);
        assert_eq!(fp_rref(3, 2, &[]).unwrap().dim(), 0);
    }

    #[test]
    fn rref_is_idempotent_and_canonical() {
        let a = fp_rref(5, 3, &[vec![1, 2, 3], vec![2, 0, 1]]).unwrap();
        let again = fp_rref(5, 3, a.basis()).unwrap();
        assert_eq!(a, again);
        // a different generating set of the same plane
        let b = fp_rref(5, 3, &[vec![3, 2, 4], vec![4, 4, 2]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn row_length_mismatch_is_an_error() {
        assert!(fp_rref(3, 2, &[vec![1, 0, 0]]).is_err());
    }

    #[test]
    fn kernel_of_trace_form() {
        // x0 + x3 = 0 on 2x2 matrices: three-dimensional kernel
        let ker = fp_kernel(3, 4, &[vec![1, 0, 0, 1]]).unwrap();
        assert_eq!(ker.dim(), 3);
        for v in ker.basis() {
            assert_eq!((v[0] + v[3]) % 3, 0);
        }
    }

    #[test]
    fn coordinates_recombine() {
        let s = fp_rref(7, 4, &[vec![1, 2, 0, 3], vec![0, 1, 1, 1]]).unwrap();
        let v = s.combine(&[3, 5]);
        assert_eq!(s.coordinates(&v).unwrap(), vec![3, 5]);
        assert!(s.coordinates(&[0, 0, 0, 1]).is_none());
    }
}
