use num_bigint::BigUint;
use proptest::prelude::*;
use tnomial::degree::{least_tnomial_multiple, DEFAULT_DEGREE_CAP};
use tnomial::gf2::{primitive_polynomials, FactorSpec};
use tnomial::product::{count_product_recursive, oracle_count_product, ProductSpec};
use tnomial::Gf2Poly;

/// Counts weight-`t` multiples of `m` with all exponents below `e` by
/// reducing every candidate polynomial.
fn brute_count(m: &Gf2Poly, e: u64, t: usize) -> u64 {
    fn rec(m: &Gf2Poly, acc: &Gf2Poly, left: usize, hi: u64) -> u64 {
        if left == 0 {
            return acc.rem(m).unwrap().is_zero() as u64;
        }
        (left as u64..hi)
            .map(|a| rec(m, &(acc + &Gf2Poly::monomial(a as usize)), left - 1, a))
            .sum()
    }
    rec(m, &Gf2Poly::one(), t - 1, e)
}

#[test]
fn pair_formulas_match_polynomial_reduction() {
    for (degrees, weights) in [
        (vec![2, 3], vec![3, 4, 5]),
        (vec![2, 5], vec![3, 4]),
        (vec![3, 4], vec![3, 4]),
    ] {
        let spec = ProductSpec::from_degrees(&degrees).unwrap();
        for t in weights {
            let formula = count_product_recursive(&spec, t).unwrap().exact_count;
            let brute = brute_count(&spec.product_poly, spec.product_exponent, t);
            assert_eq!(formula, BigUint::from(brute), "{degrees:?} t={t}");
        }
    }
}

#[test]
fn worked_example_pair_by_reduction() {
    let spec = ProductSpec::from_degrees(&[2, 3]).unwrap();
    assert_eq!(spec.product_exponent, 21);
    assert_eq!(brute_count(&spec.product_poly, 21, 5), 155);
    assert_eq!(brute_count(&spec.product_poly, 21, 3), 6);
}

#[test]
fn least_multiple_is_a_multiple_with_nothing_smaller() {
    let spec = ProductSpec::from_polys(vec![
        "x^5+x^2+1".parse().unwrap(),
        "x^3+x+1".parse().unwrap(),
    ])
    .unwrap();
    let m = least_tnomial_multiple(&spec, 4, DEFAULT_DEGREE_CAP).unwrap();
    assert!(m.to_poly().rem(&spec.product_poly).unwrap().is_zero());
    assert_eq!(brute_count(&spec.product_poly, m.degree(), 4), 0);
    assert_eq!(m.degree(), 13);
}

fn factor_choice() -> impl Strategy<Value = (Vec<FactorSpec>, usize)> {
    let pairs = prop_oneof![
        Just(vec![2usize, 3]),
        Just(vec![2, 5]),
        Just(vec![3, 4]),
        Just(vec![3, 5]),
        Just(vec![4, 5]),
    ];
    (pairs, any::<u64>(), 3usize..=5).prop_map(|(degrees, seed, t)| {
        let mut s = seed;
        let factors = degrees
            .iter()
            .map(|&d| {
                let options = primitive_polynomials(d);
                let pick = options[(s % options.len() as u64) as usize].clone();
                s /= 7;
                FactorSpec::new(pick).unwrap()
            })
            .collect();
        (factors, t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn formula_agrees_with_oracle_for_any_factor_choice((factors, t) in factor_choice()) {
        let spec = ProductSpec::new(factors).unwrap();
        let formula = count_product_recursive(&spec, t).unwrap();
        let oracle = oracle_count_product(&spec, t, 1024).unwrap();
        prop_assert_eq!(&formula.exact_count, &BigUint::from(oracle));
        prop_assert!(formula.lower_bound <= formula.exact_count);
        let swapped = count_product_recursive(&spec.reordered(&[1, 0]).unwrap(), t).unwrap();
        prop_assert_eq!(swapped.exact_count, formula.exact_count);
    }
}

#[test]
fn formulas_match_oracle_beyond_the_acceptance_pairs() {
    for (degrees, t) in [(vec![2usize, 7], 4), (vec![2, 7], 5), (vec![2, 5], 5), (vec![2, 3, 5], 4), (vec![2, 3, 5], 3)] {
        let spec = ProductSpec::from_degrees(&degrees).unwrap();
        let formula = count_product_recursive(&spec, t).unwrap().exact_count;
        let oracle = oracle_count_product(&spec, t, 1024).unwrap();
        assert_eq!(formula, BigUint::from(oracle), "{degrees:?} t={t}");
    }
}
