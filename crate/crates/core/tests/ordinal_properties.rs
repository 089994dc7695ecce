use num_bigint::BigUint;
use osp_core::ordinal::{
    dominates, frontier_filter, label_bound, leq_componentwise, lex_ge, nondominated_filter, strictly_dominates,
    FrequencyVector, OrdinalScale, OrdinalVector, SortedOrdinalVector,
};
use proptest::prelude::*;

const MAX_LEVEL: u32 = 5;

fn k5() -> OrdinalScale {
    OrdinalScale::new(MAX_LEVEL).unwrap()
}

fn raw_vector(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=MAX_LEVEL, 0..=max_len)
}

fn sorted_vector(max_len: usize) -> impl Strategy<Value = SortedOrdinalVector> {
    raw_vector(max_len).prop_map(SortedOrdinalVector::new)
}

/// Path vectors between distinct nodes are never empty. The empty vector
/// dominates and is dominated by everything, so it breaks transitivity.
fn path_vector(max_len: usize) -> impl Strategy<Value = SortedOrdinalVector> {
    prop::collection::vec(1..=MAX_LEVEL, 1..=max_len).prop_map(SortedOrdinalVector::new)
}

fn freq_of(v: &SortedOrdinalVector) -> FrequencyVector {
    FrequencyVector::from_levels(v.levels(), k5()).unwrap()
}

/// Pascal's triangle, independent of the library's multiplicative binomial.
fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
    let mut t: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
    for r in 1..=rows {
        let prev = &t[r - 1];
        let mut row = vec![BigUint::from(1u32); r + 1];
        for c in 1..r {
            row[c] = &prev[c - 1] + &prev[c];
        }
        t.push(row);
    }
    t
}

#[test]
fn label_bound_closed_form_matches_sum() {
    let t = pascal(70);
    for k in 1..=10u32 {
        for n in 1..=50usize {
            // sum_{i=1}^{n-1} C(K+i-1, i)
            let sum: BigUint = (1..n).map(|i| t[k as usize + i - 1][i].clone()).sum();
            assert_eq!(label_bound(n as u64, OrdinalScale::new(k).unwrap()), sum, "n={n} k={k}");
        }
    }
}

#[test]
fn empty_vector_is_not_transitive_middle() {
    let (a, empty, c) =
        (SortedOrdinalVector::new(vec![2]), SortedOrdinalVector::empty(), SortedOrdinalVector::new(vec![1]));
    assert!(dominates(&a, &empty) && dominates(&empty, &c) && !dominates(&a, &c));
}

#[test]
fn antisymmetry_counterexample() {
    for j in 1..=10 {
        let a = SortedOrdinalVector::new(vec![j]);
        let b = SortedOrdinalVector::new(vec![j, j]);
        assert!(dominates(&a, &b) && dominates(&b, &a) && a != b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn dominance_is_reflexive(a in sorted_vector(12)) {
        prop_assert!(dominates(&a, &a));
        prop_assert!(!strictly_dominates(&a, &a));
    }

    #[test]
    fn dominance_is_transitive(a in path_vector(12), b in path_vector(12), c in path_vector(12)) {
        if dominates(&a, &b) && dominates(&b, &c) {
            prop_assert!(dominates(&a, &c));
        }
    }

    #[test]
    fn count_route_agrees_with_sequence_route(a in sorted_vector(12), b in sorted_vector(12)) {
        prop_assert_eq!(freq_of(&a).dominates(&freq_of(&b)), dominates(&a, &b));
    }

    #[test]
    fn dominance_depends_only_on_multisets(x in raw_vector(10), y in raw_vector(10), seed in any::<u64>()) {
        let shuffle = |v: &[u32]| {
            let mut v = v.to_vec();
            let n = v.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (s >> 33) as usize % (i + 1));
            }
            v
        };
        let (sx, sy) = (OrdinalVector::new(x.clone()).sorted(), OrdinalVector::new(y.clone()).sorted());
        let (tx, ty) = (OrdinalVector::new(shuffle(&x)).sorted(), OrdinalVector::new(shuffle(&y)).sorted());
        prop_assert_eq!(dominates(&sx, &sy), dominates(&tx, &ty));
    }

    #[test]
    fn frequency_round_trip(x in raw_vector(15)) {
        let v = OrdinalVector::new(x);
        let f = FrequencyVector::from_levels(v.levels(), k5()).unwrap();
        prop_assert_eq!(f.to_sorted(), v.sorted());
        prop_assert_eq!(f.total(), v.len());
    }

    #[test]
    fn filters_are_idempotent(vs in prop::collection::vec(sorted_vector(6), 0..12)) {
        let once = nondominated_filter(&vs);
        prop_assert_eq!(nondominated_filter(&once), once.clone());
        for u in &once {
            for v in &once {
                prop_assert!(!strictly_dominates(u, v));
            }
        }
        let front = frontier_filter(&vs);
        prop_assert_eq!(frontier_filter(&front), front.clone());
        // the literal filter only removes more
        prop_assert!(once.iter().all(|v| front.contains(v)));
    }

    #[test]
    fn lex_is_a_total_order(
        a in prop::collection::vec(0u32..4, 4),
        b in prop::collection::vec(0u32..4, 4),
        c in prop::collection::vec(0u32..4, 4),
    ) {
        let (a, b, c) = (FrequencyVector::from_counts(a), FrequencyVector::from_counts(b), FrequencyVector::from_counts(c));
        let ge = |x: &FrequencyVector, y: &FrequencyVector| lex_ge(x, y).unwrap();
        prop_assert!(ge(&a, &b) || ge(&b, &a));
        if ge(&a, &b) && ge(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if ge(&a, &b) && ge(&b, &c) {
            prop_assert!(ge(&a, &c));
        }
    }

    #[test]
    fn lex_order_survives_common_increments(
        a in prop::collection::vec(0u32..6, 5),
        b in prop::collection::vec(0u32..6, 5),
        d in prop::collection::vec(0u32..6, 5),
    ) {
        let add = |x: &[u32]| FrequencyVector::from_counts(x.iter().zip(&d).map(|(p, q)| p + q).collect());
        let (fa, fb) = (FrequencyVector::from_counts(a.clone()), FrequencyVector::from_counts(b.clone()));
        if lex_ge(&fa, &fb).unwrap() {
            prop_assert!(lex_ge(&add(&a), &add(&b)).unwrap());
        }
    }

    // equal-length componentwise order is preserved by a common suffix
    #[test]
    fn equal_length_order_survives_extension(
        base in raw_vector(10),
        bumps in prop::collection::vec(0u32..3, 10),
        suffix in raw_vector(8),
    ) {
        let l1 = SortedOrdinalVector::new(base.clone());
        let l2 = SortedOrdinalVector::new(
            l1.levels().iter().zip(&bumps).map(|(&x, &d)| (x + d).min(MAX_LEVEL)).collect(),
        );
        prop_assume!(leq_componentwise(&l1, &l2).unwrap());
        let extend = |v: &SortedOrdinalVector| {
            SortedOrdinalVector::new(v.levels().iter().chain(&suffix).copied().collect())
        };
        prop_assert!(leq_componentwise(&extend(&l1), &extend(&l2)).unwrap());
    }
}
