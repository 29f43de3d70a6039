use num_bigint::BigUint;
use proptest::prelude::*;
use uinf_core::partitions::{
    conjugate, count_standard_tableaux_bruteforce, enumerate_partitions, factorial, hook_dimension, semistandard_tableaux,
    Partition,
};
use uinf_core::schur::schur_tableau_sum;
use uinf_core::C64;

/// Euler's pentagonal recurrence, independent of the enumerator.
fn partition_count(n: usize) -> usize {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[m] += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                p[m] += sign * p[m - g2];
            }
            k += 1;
        }
    }
    p[n] as usize
}

#[test]
fn enumeration_counts_and_order() {
    for n in 0..=12 {
        let parts = enumerate_partitions(n, None);
        assert_eq!(parts.len(), partition_count(n), "n={n}");
        assert!(parts.iter().all(|p| p.weight() == n));
        let mut sorted = parts.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), parts.len());
    }
}

#[test]
fn hook_formula_matches_bruteforce() {
    for n in 0..=8 {
        for lambda in enumerate_partitions(n, None) {
            assert_eq!(hook_dimension(&lambda).unwrap(), count_standard_tableaux_bruteforce(&lambda).unwrap(), "{lambda}");
        }
    }
}

#[test]
fn squared_dimensions_sum_to_factorial() {
    for n in 0..=8 {
        let total: BigUint = enumerate_partitions(n, None).iter().map(|l| hook_dimension(l).unwrap().pow(2)).sum();
        assert_eq!(total, factorial(n));
    }
}

#[test]
fn tableau_count_is_schur_at_ones() {
    for n in 0..=6 {
        for l in 1..=4 {
            let ones = vec![C64::new(1.0, 0.0); l];
            for lambda in enumerate_partitions(n, None) {
                let count = semistandard_tableaux(&lambda, l).unwrap().len() as f64;
                let s = schur_tableau_sum(&lambda, &ones).unwrap();
                assert!((s.re - count).abs() < 1e-9 && s.im.abs() < 1e-12, "{lambda} l={l}");
            }
        }
    }
}

fn partition_strategy() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..7, 0..7).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(lambda in partition_strategy()) {
        let c = conjugate(&lambda);
        prop_assert_eq!(c.weight(), lambda.weight());
        prop_assert_eq!(conjugate(&c), lambda.clone());
        prop_assert_eq!(hook_dimension(&c).unwrap(), hook_dimension(&lambda).unwrap());
    }

    #[test]
    fn hook_lengths_are_transposed(lambda in partition_strategy()) {
        let c = conjugate(&lambda);
        for i in 0..lambda.len() {
            for j in 0..lambda.part(i) {
                prop_assert_eq!(lambda.hook(i, j), c.hook(j, i));
            }
        }
    }

    #[test]
    fn semistandard_tableaux_are_semistandard(lambda in partition_strategy(), l in 1usize..4) {
        prop_assume!(lambda.weight() <= 6);
        for t in semistandard_tableaux(&lambda, l).unwrap() {
            prop_assert!(t.is_semistandard());
            prop_assert_eq!(t.content(l).iter().sum::<usize>(), lambda.weight());
        }
    }
}
