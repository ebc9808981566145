//! Independent brute-force counts used to cross-check the engines. These
//! deliberately avoid the library's matrix and closure code.

use crate::formal::{StandardGroup, StandardPoint};
use crate::error::Result;
use crate::ring::RingCtx;

/// `F_2[t]/(t^m)` elements as bit masks (bit `i` is the coefficient of
/// `t^i`), multiplied carry-free.
fn f2_mul(a: u32, b: u32, m: usize) -> u32 {
    let mut out = 0u32;
    for i in 0..m {
        if a >> i & 1 == 1 {
            out ^= b << i;
        }
    }
    out & ((1 << m) - 1)
}

/// `|SL_2(F_2[t]/(t^m))|` by enumerating all `2^{4m}` matrices.
pub fn sl2_f2_order(m: usize) -> u64 {
    assert!((1..=5).contains(&m), "enumeration sized for m <= 5");
    let size = 1u32 << m;
    let mut count = 0;
    for a in 0..size {
        for d in 0..size {
            let ad = f2_mul(a, d, m);
            for b in 0..size {
                for c in 0..size {
                    if ad ^ f2_mul(b, c, m) == 1 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Number of `A ∈ SL_2(F_2[t]/(t^m))` with `A ≡ I (mod t^{m-1})`.
pub fn sl2_f2_kernel(m: usize) -> u64 {
    assert!((2..=8).contains(&m));
    let top = 1u32 << (m - 1);
    let mut count = 0;
    for bits in 0..16u32 {
        let pick = |i: u32| if bits >> i & 1 == 1 { top } else { 0 };
        let (a, b, c, d) = (1 ^ pick(0), pick(1), pick(2), 1 ^ pick(3));
        if f2_mul(a, d, m) ^ f2_mul(b, c, m) == 1 {
            count += 1;
        }
    }
    count
}

/// Number of `X ∈ M_4(F_2)` with `I + tX` symplectic modulo `t^2`, i.e.
/// `X^t J + J X = 0` for `J = [[0, K_2], [K_2, 0]]` (signs vanish mod 2).
pub fn sp4_f2_first_layer() -> u64 {
    let j = |r: usize, c: usize| u32::from(r + c == 3);
    let mut count = 0;
    for bits in 0..(1u32 << 16) {
        let x = |r: usize, c: usize| bits >> (r * 4 + c) & 1;
        let ok = (0..4).all(|a| {
            (0..4).all(|c| {
                let mut v = 0;
                for r in 0..4 {
                    v ^= x(r, a) & j(r, c);
                    v ^= j(a, r) & x(r, c);
                }
                v == 0
            })
        });
        if ok {
            count += 1;
        }
    }
    count
}

/// All points of `S / S_depth` for a standard group over `F_p`, enumerated
/// coefficient by coefficient.
pub fn all_points(g: &StandardGroup) -> Result<Vec<StandardPoint>> {
    let p = g.ctx().p() as u64;
    let (n0, k, d) = (g.level(), g.ctx().k(), g.dim());
    let slots = (k - n0) * d;
    let total = p.pow(slots as u32);
    let ctx: RingCtx = g.ctx();
    (0..total)
        .map(|mut idx| {
            let coords = (0..d)
                .map(|_| {
                    let mut c = vec![0i64; k];
                    for slot in c.iter_mut().skip(n0) {
                        *slot = (idx % p) as i64;
                        idx /= p;
                    }
                    ctx.series(&c)
                })
                .collect();
            g.point(coords)
        })
        .collect()
}

/// `|S : S_n|` counted as the number of classes of `x ~ y ⟺ x^{-1} y ∈ S_n`
/// over all points of `S / S_depth`, using only the group law.
pub fn coset_count(g: &StandardGroup, n: usize) -> Result<u64> {
    let points = all_points(g)?;
    let mut reps: Vec<StandardPoint> = Vec::new();
    for x in &points {
        let mut found = false;
        for r in &reps {
            let q = g.mul(&g.inv(r)?, x)?;
            if g.level_of(&q) >= n {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(x.clone());
        }
    }
    Ok(reps.len() as u64)
}
