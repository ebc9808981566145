use hausdorff_core::{fp_rref, RingCtx, SeriesMatrix, TruncatedSeries};
use proptest::prelude::*;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn ctx_strategy() -> impl Strategy<Value = RingCtx> {
    (0..PRIMES.len(), 1usize..8).prop_map(|(i, k)| RingCtx::new(PRIMES[i], k).unwrap())
}

fn series(ctx: RingCtx) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(0i64..ctx.p() as i64, ctx.k()).prop_map(move |c| ctx.series(&c))
}

fn triple() -> impl Strategy<Value = (TruncatedSeries, TruncatedSeries, TruncatedSeries)> {
    ctx_strategy().prop_flat_map(|c| (series(c), series(c), series(c)))
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a - &b, &a + &(-&b));
    }

    #[test]
    fn valuation_is_additive_up_to_truncation((a, b, _c) in triple()) {
        let k = a.ctx().k();
        let prod = (&a * &b).valuation();
        match (a.valuation(), b.valuation()) {
            (Some(va), Some(vb)) if va + vb < k => prop_assert_eq!(prod, Some(va + vb)),
            _ => prop_assert_eq!(prod, None),
        }
    }

    #[test]
    fn units_invert((a, _b, _c) in triple()) {
        match a.inverse() {
            Ok(inv) => {
                prop_assert!(a.is_unit());
                prop_assert!((&a * &inv).is_one());
            }
            Err(_) => prop_assert!(!a.is_unit()),
        }
    }

    #[test]
    fn encoding_round_trips((a, _b, _c) in triple()) {
        prop_assert_eq!(TruncatedSeries::parse(a.ctx(), &a.encode()).unwrap(), a);
    }

    #[test]
    fn rref_is_canonical(
        rows in prop::collection::vec(prop::collection::vec(0u32..5, 6), 0..6),
        mix in prop::collection::vec(1u32..5, 6),
    ) {
        let a = fp_rref(5, 6, &rows).unwrap();
        // rescaled and reversed generators span the same space
        let other: Vec<Vec<u32>> = rows
            .iter()
            .rev()
            .zip(&mix)
            .map(|(r, &m)| r.iter().map(|&x| x * m % 5).collect())
            .collect();
        let b = fp_rref(5, 6, &other).unwrap();
        prop_assert_eq!(a.basis(), b.basis());
        for r in &rows {
            prop_assert!(a.contains(r));
        }
    }

    #[test]
    fn determinant_is_multiplicative(
        x in prop::collection::vec(0i64..3, 27),
        y in prop::collection::vec(0i64..3, 27),
    ) {
        let ctx = RingCtx::new(3, 3).unwrap();
        let entries = |v: &[i64]| -> Vec<TruncatedSeries> { v.chunks(3).map(|c| ctx.series(c)).collect() };
        let a = SeriesMatrix::from_entries(ctx, 3, &entries(&x)).unwrap();
        let b = SeriesMatrix::from_entries(ctx, 3, &entries(&y)).unwrap();
        let ab = a.mat_mul(&b).unwrap();
        prop_assert_eq!(ab.det(), &a.det() * &b.det());
        if let Ok(inv) = a.mat_inv() {
            prop_assert!(a.mat_mul(&inv).unwrap().is_identity());
            prop_assert!(a.det().is_unit());
        } else {
            prop_assert!(!a.det().is_unit());
        }
    }
}
