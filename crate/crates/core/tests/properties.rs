use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmatroid::poly::omega;
use qmatroid::projectivization::{whitney_deprojectivize, whitney_projectivize};
use qmatroid::qmatroid::charpoly_family;
use qmatroid::rmcode::{weight_enums_from_whitney, whitney_from_weight_enums};
use qmatroid::{BiPoly, Error, Field, FieldElement, FieldSpec, Mat, QMatroid, RankMetricCode};

fn full_rank(rng: &mut ChaCha8Rng, f: &Field, rows: usize, cols: usize) -> Mat {
    loop {
        let data = (0..rows)
            .map(|_| (0..cols).map(|_| FieldElement::from_code(rng.gen_range(0..f.order()))).collect())
            .collect();
        let g = Mat::from_rows(f, cols, data).unwrap();
        if g.rank() == rows {
            return g;
        }
    }
}

/// (q, m, k, n, seed) with n <= 4 and lattices small enough for debug builds.
fn code_params() -> impl Strategy<Value = (u32, usize, usize, usize, u64)> {
    (prop_oneof![Just(2u32), Just(3u32)], 1usize..=3, 1usize..=4, any::<u64>())
        .prop_flat_map(|(q, m, n, seed)| (Just(q), Just(m), 1..=n, Just(n), Just(seed)))
}

fn build_code(q: u32, m: usize, k: usize, n: usize, seed: u64) -> RankMetricCode {
    let f = FieldSpec::with_default_modulus(q, m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RankMetricCode::new(full_rank(&mut rng, &f, k, n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn whitney_is_invariant_under_ambient_maps((q, m, k, n, seed) in code_params()) {
        let mq = build_code(q, m, k, n, seed).qmatroid().unwrap();
        let base = FieldSpec::with_default_modulus(q, 1).unwrap();
        let alpha = full_rank(&mut ChaCha8Rng::seed_from_u64(seed ^ 1), &base, n, n);
        let moved = mq.transported(&alpha).unwrap();
        prop_assert_eq!(moved.whitney().unwrap().poly(), mq.whitney().unwrap().poly());
    }

    #[test]
    fn char_poly_routes_agree((q, m, k, n, seed) in code_params()) {
        let mq = build_code(q, m, k, n, seed).qmatroid().unwrap();
        prop_assert_eq!(mq.char_poly_direct().unwrap(), mq.whitney().unwrap().char_poly().unwrap());
    }

    #[test]
    fn delta_identity_holds((q, m, k, n, seed) in code_params()) {
        let w = build_code(q, m, k, n, seed).qmatroid().unwrap().whitney().unwrap();
        prop_assert!(w.whitney_delta_identity());
    }

    #[test]
    fn weight_enumerators_round_trip((q, m, k, n, seed) in code_params(), ext in 1u32..=4) {
        let w = build_code(q, m, k, n, seed).qmatroid().unwrap().whitney().unwrap();
        let enums: Vec<BiPoly> = (0..=k).map(|t| weight_enums_from_whitney(&w, ext, t).unwrap()).collect();
        prop_assert_eq!(&enums[0], &BiPoly::monomial(n as u32, 0, 1));
        let back = whitney_from_weight_enums(&enums, q, ext, k, n).unwrap();
        prop_assert_eq!(back.poly(), w.poly());
    }

    #[test]
    fn shortening_matches_rank((q, m, k, n, seed) in code_params()) {
        let mq = build_code(q, m, k, n, seed).qmatroid().unwrap();
        let lattice = mq.lattice().unwrap();
        for v in lattice.subspaces() {
            prop_assert_eq!(mq.rank_via_shortening(v).unwrap(), mq.rank(v).unwrap());
        }
    }

    #[test]
    fn nullity_is_monotone((q, m, k, n, seed) in code_params()) {
        let mq = build_code(q, m, k, n, seed).qmatroid().unwrap();
        let l = mq.lattice().unwrap();
        let r = mq.rank_vector().unwrap();
        for i in 0..l.len() {
            for j in 0..l.len() {
                if l.leq(i, j) {
                    prop_assert!(l.dim(i) - r[i] <= l.dim(j) - r[j]);
                }
            }
        }
    }

    #[test]
    fn projectivization_round_trips(q in 2u32..=3, k in 0usize..=3, extra in 0usize..=1) {
        let n = k + extra;
        let w = QMatroid::uniform(q, k, n).unwrap().whitney().unwrap();
        let r_pm = whitney_projectivize(&w).unwrap();
        prop_assert_eq!(whitney_deprojectivize(&r_pm, q, k, n).unwrap().poly(), w.poly());
        // No projectivized Whitney function has a y-degree above the number of points.
        let points = (q.pow(n as u32) - 1) / (q - 1);
        let bumped = &r_pm + &BiPoly::monomial(0, points + 1, 1);
        prop_assert!(matches!(whitney_deprojectivize(&bumped, q, k, n), Err(Error::NotInImage(_))));
    }

    #[test]
    fn substitution_is_linear(a in -50i64..50, b in -50i64..50, i in 0u32..4, j in 0u32..4) {
        let fam = charpoly_family(2, 4);
        let f = BiPoly::monomial(i, j, a);
        let g = BiPoly::monomial(j, i, b);
        let lhs = omega(&(&f + &g), &fam).unwrap();
        let rhs = &omega(&f, &fam).unwrap() + &omega(&g, &fam).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pretty_parse_round_trip(terms in proptest::collection::vec((0u32..5, 0u32..5, -1000i64..1000), 0..8)) {
        let mut p = BiPoly::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, BigInt::from(c));
        }
        prop_assert_eq!(BiPoly::parse(&p.pretty()).unwrap(), p);
    }

    #[test]
    fn field_inverse_and_distributivity(q in prop_oneof![Just(2u32), Just(3u32), Just(5u32)], m in 1usize..=4, seed in any::<u64>()) {
        let f = FieldSpec::with_default_modulus(q, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = || FieldElement::from_code(rng.gen_range(0..f.order()));
        let (a, b, c) = (pick(), pick(), pick());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
    }
}
