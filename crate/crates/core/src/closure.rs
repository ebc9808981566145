//! Breadth-first closure of a generated subgroup inside a finite group.
//!
//! States are deduplicated by an exact byte encoding. Because the ambient
//! group is finite, closing under right multiplication by the generators
//! already yields the generated subgroup (inverses are positive powers).

use std::collections::{HashSet, VecDeque};

/// Default bound on visited states.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct Closure<T> {
    pub elements: Vec<T>,
    /// False when the cap stopped the search before the subgroup was complete.
    pub exhausted: bool,
}

pub fn bfs_closure<T, M, K>(identity: T, gens: &[T], mul: M, key: K, cap: usize) -> Closure<T>
where
    T: Clone,
    M: Fn(&T, &T) -> T,
    K: Fn(&T) -> Vec<u8>,
{
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(key(&identity));
    elements.push(identity.clone());
    queue.push_back(identity);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(key(&y)) {
                if elements.len() >= cap {
                    return Closure {
                        elements,
                        exhausted: false,
                    };
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Closure {
        elements,
        exhausted: true,
    }
}

/// Packs residues into bytes: one byte per residue when `p <= 256`, four
/// little-endian bytes otherwise.
pub(crate) fn pack_residues(p: u32, residues: impl Iterator<Item = u32>, out: &mut Vec<u8>) {
    if p <= 256 {
        out.extend(residues.map(|r| r as u8));
    } else {
        for r in residues {
            out.extend_from_slice(&r.to_le_bytes());
        }
    }
}

/// `log_p(count)` when `count` is an exact power of `p`.
pub fn exact_log(p: u32, mut count: u64) -> Option<u32> {
    if count == 0 {
        return None;
    }
    let mut e = 0;
    while count > 1 {
        if count % p as u64 != 0 {
            return None;
        }
        count /= p as u64;
        e += 1;
    }
    Some(e)
}

/// `floor(log_p(count))`, for partial (cap-limited) lower bounds.
pub fn floor_log(p: u32, mut count: u64) -> u32 {
    let mut e = 0;
    while count >= p as u64 {
        count /= p as u64;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_closure() {
        // Z/12 generated by 8 has order 3
        let c = bfs_closure(0u32, &[8], |a, b| (a + b) % 12, |a| vec![*a as u8], 100);
        assert!(c.exhausted);
        assert_eq!(c.elements.len(), 3);
    }

    #[test]
    fn cap_is_flagged() {
        let c = bfs_closure(0u32, &[1], |a, b| (a + b) % 50, |a| vec![*a as u8], 10);
        assert!(!c.exhausted);
        assert_eq!(c.elements.len(), 10);
    }

    #[test]
    fn logs() {
        assert_eq!(exact_log(3, 27), Some(3));
        assert_eq!(exact_log(3, 1), Some(0));
        assert_eq!(exact_log(2, 6), None);
        assert_eq!(floor_log(2, 7), 2);
    }
}
