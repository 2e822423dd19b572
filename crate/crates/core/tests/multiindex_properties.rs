use std::collections::HashMap;

use analyticity::multiindex::{
    binomial, binomial_f64, binomial_product_bound_holds, choose_ratio, lemma_star_ratio, product_identity_sides,
    star_sum, stirling_bounds, BigRatio, StarTable, StarVariant,
};
use analyticity::MultiIndex;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn index(max: u32) -> impl Strategy<Value = MultiIndex> {
    (0..=max, 0..=max, 0..=max).prop_map(|(a, b, c)| MultiIndex::new(a, b, c))
}

proptest! {
    #[test]
    fn weight_is_the_tangential_multinomial(a in index(40)) {
        let w = factorial(a.a1 + a.a2) / (factorial(a.a1) * factorial(a.a2));
        prop_assert_eq!(a.weight(), w);
        prop_assert!(a.weight() >= BigUint::from(1u32));
    }

    #[test]
    fn choose_bound_holds_beyond_the_sweep(a in index(30), f in (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64)) {
        let beta = MultiIndex::new(
            (a.a1 as f64 * f.0).floor() as u32,
            (a.a2 as f64 * f.1).floor() as u32,
            (a.a3 as f64 * f.2).floor() as u32,
        );
        let lhs = choose_ratio(&a, &beta).unwrap();
        let rhs = BigRatio::from_integer(BigInt::from(binomial(a.order(), beta.order())));
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn vandermonde_type_bound(n in 0u32..60, m in 0u32..60, i in 0u32..60, j in 0u32..60) {
        prop_assume!(i <= n && j <= m);
        prop_assert!(binomial_product_bound_holds(n, m, i, j));
    }

    #[test]
    fn float_binomial_is_close_to_exact(n in 0u32..200, k in 0u32..200) {
        prop_assume!(k <= n);
        let exact: f64 = binomial(n, k).to_string().parse().unwrap();
        prop_assert!((binomial_f64(n, k) / exact - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_identity_on_random_maps(m in 0u32..7, frac in 0.0..=1.0f64, seed in any::<u64>()) {
        let j = (m as f64 * frac).floor() as u32;
        let mut state = seed | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            BigInt::from((state % 2001) as i64 - 1000)
        };
        let mut x = HashMap::new();
        let mut y = HashMap::new();
        for a in analyticity::multiindex::up_to_order(m) {
            x.insert(a, next());
            y.insert(a, next());
        }
        let sides = product_identity_sides(m, j, &x, &y).unwrap();
        prop_assert_eq!(sides.lhs, sides.rhs);
    }

    #[test]
    fn star_ratio_decreases_in_m(b1 in 1u32..30, b2 in 1u32..30, extra in 0u32..20) {
        let m = (b1 + b2 + 1).max(3);
        for v in StarVariant::ALL {
            let lo = lemma_star_ratio(b1, b2, m, v).unwrap();
            let hi = lemma_star_ratio(b1, b2, m + extra, v).unwrap();
            prop_assert!(hi <= lo);
        }
    }

    #[test]
    fn stirling_bracket(n in 1u64..1_000_000) {
        prop_assert!(stirling_bounds(n).unwrap().holds());
    }
}

#[test]
fn star_table_agrees_with_enumeration() {
    let table = StarTable::new(40);
    for n in 0..=40u32 {
        for b1 in 0..=n {
            for v in StarVariant::ALL {
                let direct = star_sum(b1, n - b1, v).ok();
                assert_eq!(table.sum(b1, n - b1, v).cloned(), direct, "({b1},{}) {v:?}", n - b1);
            }
        }
    }
}
