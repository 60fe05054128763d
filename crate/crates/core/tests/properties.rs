use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;

use qrenorm_core::catalog::{build_series, family, NamedSeriesId};
use qrenorm_core::maass::{cohen_residual, translation_check, MaassEvalContext, UpperHalfPoint};
use qrenorm_core::renorm::{shadow, shadow_partner};
use qrenorm_core::{Exponent, QProductExpr, TruncatedQSeries};

fn series_strategy() -> impl Strategy<Value = TruncatedQSeries> {
    (1i64..=3, -2i64..=3, prop::collection::vec(-5i64..=5, 0..12), 0i64..=6).prop_map(|(grid, off, c, extra)| {
        let coeffs = c.into_iter().map(|x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        let bound = off + coeffs.len() as i64 + extra;
        TruncatedQSeries::from_parts(grid, off, coeffs, bound)
    })
}

fn expr_strategy() -> impl Strategy<Value = QProductExpr> {
    let factor = (-3i64..=3, -4i64..=4, prop::sample::select(vec![-2i32, -1, 1, 2]));
    (-4i64..=4, -5i64..=5, prop::collection::vec(factor, 0..5)).prop_map(|(c, k, fs)| {
        let c = if c == 0 { 1 } else { c };
        fs.into_iter().fold(QProductExpr::mono(c, k), |e, (fc, m, p)| {
            let fc = if fc == 0 { 1 } else { fc };
            e.factor(BigRational::from_integer(fc.into()), Exponent::from_integer(m), p)
        })
    })
}

fn rational_point() -> impl Strategy<Value = BigRational> {
    (prop::sample::select(vec![-7i64, -5, -3, -2, 2, 3, 5, 7, 11]), 1i64..=9)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        prop_assert_eq!(a.add_series(&b), b.add_series(&a));
        prop_assert_eq!(a.mul_series(&b), b.mul_series(&a));
        prop_assert_eq!(a.add_series(&b).add_series(&c), a.add_series(&b.add_series(&c)));
        prop_assert_eq!(a.mul_series(&b).mul_series(&c), a.mul_series(&b.mul_series(&c)));
        prop_assert_eq!(a.mul_series(&b.add_series(&c)), a.mul_series(&b).add_series(&a.mul_series(&c)));
    }

    #[test]
    fn equality_is_grid_invariant(a in series_strategy(), b in series_strategy(), k in 2i64..=4) {
        let g = |s: &TruncatedQSeries| s.rescale(s.grid() * k);
        prop_assert_eq!(a == b, g(&a) == g(&b));
        prop_assert_eq!(a.first_mismatch(&b), g(&a).first_mismatch(&g(&b)));
    }

    #[test]
    fn qinv_matches_pointwise_evaluation(x in expr_strategy(), r in rational_point()) {
        let inv = x.subst_qinv();
        let at_inv = x.eval_rational(&r.recip());
        match (inv, at_inv) {
            (Ok(inv), Ok(v)) => prop_assert_eq!(inv.eval_rational(&r).unwrap(), v),
            (Err(_), _) | (_, Err(_)) => {}
        }
    }
}

#[test]
fn partial_sums_stabilize() {
    let bound = Exponent::from_integer(120);
    for id in [NamedSeriesId::Sigma, NamedSeriesId::SigmaStar, NamedSeriesId::W, NamedSeriesId::SW, NamedSeriesId::F3] {
        let fam = family(id).unwrap();
        let (s, n_used) = fam.sum(bound).unwrap();
        let mut extended = s.clone();
        let next = fam.n_start + n_used;
        for n in next..next + 10 {
            extended = extended.add_series(&fam.term(n).unwrap().to_series(bound).unwrap());
        }
        assert_eq!(extended, s, "{id}");
    }
}

#[test]
fn shadow_plus_ghost_is_tails_to_200() {
    let bound = Exponent::from_integer(200);
    for id in [NamedSeriesId::Sigma, NamedSeriesId::W, NamedSeriesId::SW] {
        let r = shadow(id, bound).unwrap();
        assert_eq!(r.shadow.add_series(&r.ghost), r.tails);
        let (p, sign) = shadow_partner(id).unwrap();
        assert_eq!(r.shadow, build_series(p, bound).unwrap().scale(&BigRational::from_integer(sign.into())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cohen_relation_random_roots(k in 1i64..=90, a in 0i64..90) {
        let x = Ratio::new(a % k, k);
        prop_assert!(cohen_residual(x, 40) < 1e-30);
    }

    #[test]
    fn translation_is_termwise_everywhere(x in -2.0f64..2.0, y in 0.2f64..3.0) {
        let ctx = MaassEvalContext::phi0_w(160).unwrap();
        let r = translation_check(&ctx, &[UpperHalfPoint::new(x, y).unwrap()]).unwrap();
        prop_assert!(r.max_residual < 1e-13);
    }
}
