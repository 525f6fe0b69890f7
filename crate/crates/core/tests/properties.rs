use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use matrep::bounds::rbg_pattern_bound;
use matrep::enumerate::{enumerate_matroids, Census, EnumOptions};
use matrep::gf::{GfContext, GfMatrix};
use matrep::matroid::{check_exchange, k_subsets, Matroid, Permutation, SubsetMask};
use matrep::patterns::{enumerate_patterns, patterns_across_fields};
use matrep::poly::{binomial, minors_polynomials, IntPoly, PolySystem};
use matrep::represent::{find_representation, normalize_to_last_basis, verify_representation, RepStatus, SearchOptions};

/// Every unlabeled matroid with n <= 6.
fn small_matroids() -> &'static [Matroid] {
    static ALL: OnceLock<Vec<Matroid>> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut all = Vec::new();
        for n in 1..=6 {
            for r in 0..=n {
                all.extend(enumerate_matroids(n, r, EnumOptions::default()).unwrap().items);
            }
        }
        all
    })
}

fn field(q: u64) -> GfContext {
    GfContext::of_order(q).unwrap()
}

/// A census matroid under a random relabeling.
fn any_matroid() -> impl Strategy<Value = Matroid> {
    (0..small_matroids().len(), any::<u64>()).prop_map(|(i, seed)| {
        let m = &small_matroids()[i];
        m.apply_permutation(&shuffle(m.n(), seed)).unwrap()
    })
}

fn shuffle(n: usize, seed: u64) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    let mut s = seed | 1;
    for i in (1..n).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        images.swap(i, (s % (i as u64 + 1)) as usize);
    }
    Permutation::new(images).unwrap()
}

fn q_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4])
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(m in any_matroid()) {
        let d = m.dual();
        prop_assert_eq!(d.rank(), m.n() - m.rank());
        prop_assert_eq!(d.num_bases(), m.num_bases());
        prop_assert_eq!(d.dual(), m.clone());
        prop_assert!(check_exchange(d.n(), d.bases()).unwrap());
    }

    #[test]
    fn nonbases_complement_bases(m in any_matroid()) {
        let total = k_subsets(m.n(), m.rank()).len();
        prop_assert_eq!(m.nonbases().len() + m.num_bases(), total);
        for b in m.nonbases() {
            prop_assert!(!m.is_basis(b));
        }
    }

    #[test]
    fn canonical_key_ignores_labels(m in any_matroid(), seed in any::<u64>()) {
        let p = shuffle(m.n(), seed);
        let image = m.apply_permutation(&p).unwrap();
        let a = m.canonical_form().unwrap();
        let b = image.canonical_form().unwrap();
        prop_assert_eq!(&a.key, &b.key);
        prop_assert_eq!(a.automorphisms, b.automorphisms);
        prop_assert_eq!(m.apply_permutation(&a.relabeling).unwrap(), a.matroid.clone());
        prop_assert!(a.matroid.is_canonical().unwrap());
    }

    #[test]
    fn representability_respects_duality(m in any_matroid(), q in q_strategy()) {
        let ctx = field(q);
        let opts = SearchOptions::default();
        let here = find_representation(&normalize_to_last_basis(&m).0, &ctx, opts).unwrap().status;
        let dual = find_representation(&normalize_to_last_basis(&m.dual()).0, &ctx, opts).unwrap().status;
        prop_assert_eq!(here, dual);
    }

    #[test]
    fn row_normalization_agrees(m in any_matroid(), q in q_strategy()) {
        let ctx = field(q);
        let (nm, _) = normalize_to_last_basis(&m);
        let plain = find_representation(&nm, &ctx, SearchOptions::default()).unwrap();
        let rows = find_representation(&nm, &ctx, SearchOptions { row_normalization: true, ..Default::default() }).unwrap();
        prop_assert_eq!(plain.status, rows.status);
        if let Some(u) = &rows.witness {
            prop_assert!(verify_representation(&nm, u).unwrap());
        }
    }

    /// Matroids read off random matrices are found over the same field.
    #[test]
    fn random_matrices_are_recovered(
        q in q_strategy(),
        n in 2usize..=7,
        r_frac in 0.0f64..1.0,
        raw in prop::collection::vec(any::<u8>(), 49),
    ) {
        let ctx = field(q);
        let r = 1 + ((n - 1) as f64 * r_frac) as usize;
        let entries: Vec<u8> = raw.iter().take(r * n).map(|v| v % q as u8).collect();
        let a = GfMatrix::new(&ctx, r, n, entries).unwrap();
        prop_assume!(a.rank() == r);
        let bases: Vec<SubsetMask> = k_subsets(n, r)
            .into_iter()
            .filter(|b| a.is_nonsingular_cols(*b).unwrap())
            .collect();
        let m = Matroid::new(n, bases).unwrap();
        let (nm, _) = normalize_to_last_basis(&m);
        let res = find_representation(&nm, &ctx, SearchOptions::default()).unwrap();
        prop_assert_eq!(res.status, RepStatus::Found);
        prop_assert!(verify_representation(&nm, res.witness.as_ref().unwrap()).unwrap());
    }

    /// Nonvanishing minors of [u | I_r] are exactly its nonsingular column sets.
    #[test]
    fn minor_pattern_matches_column_ranks(
        q in q_strategy(),
        n in 2usize..=6,
        r_frac in 0.0f64..1.0,
        raw in prop::collection::vec(any::<u8>(), 36),
    ) {
        let ctx = field(q);
        let r = 1 + ((n - 1) as f64 * r_frac) as usize;
        let u_entries: Vec<u8> = raw.iter().take(r * (n - r)).map(|v| v % q as u8).collect();
        let u = GfMatrix::new(&ctx, r, n - r, u_entries.clone()).unwrap();
        let full = u.hconcat(&GfMatrix::identity(&ctx, r)).unwrap();
        let sys = minors_polynomials(n, r).unwrap();
        let set = k_subsets(n, r);
        let mut pattern = Vec::new();
        for (b, p) in set.iter().zip(sys.polys()) {
            let nonzero = p.eval_over(&ctx, &u_entries).unwrap() != 0;
            prop_assert_eq!(nonzero, full.is_nonsingular_cols(*b).unwrap());
            if nonzero {
                pattern.push(*b);
            }
        }
        prop_assert!(check_exchange(n, &pattern).unwrap());
    }

    #[test]
    fn pattern_counts_respect_dimension_bound(sys in any_system(), q in prop::sample::select(vec![2u64, 3, 4, 5])) {
        let set = enumerate_patterns(&sys, &field(q), u64::MAX).unwrap();
        let bound = rbg_pattern_bound(&BigUint::from(sys.len()), u64::from(sys.max_degree()), sys.num_vars() as u64);
        prop_assert!(BigUint::from(set.len()) <= bound);
        prop_assert!(set.verify(&sys).unwrap());
    }

    #[test]
    fn pattern_union_ignores_field_order(sys in any_system()) {
        let forward: Vec<GfContext> = [2, 3, 4, 5].into_iter().map(field).collect();
        let backward: Vec<GfContext> = forward.iter().rev().cloned().collect();
        let a = patterns_across_fields(&sys, &forward, u64::MAX).unwrap();
        let b = patterns_across_fields(&sys, &backward, u64::MAX).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pattern_enumeration_ignores_worker_count(sys in any_system(), q in prop::sample::select(vec![3u64, 5, 7])) {
        let one = in_pool(1, || enumerate_patterns(&sys, &field(q), u64::MAX).unwrap());
        let many = in_pool(4, || enumerate_patterns(&sys, &field(q), u64::MAX).unwrap());
        prop_assert_eq!(one, many);
    }
}

fn any_system() -> impl Strategy<Value = PolySystem> {
    (1usize..=3, 1usize..=6, 1u32..=3).prop_flat_map(|(m, count, d)| {
        let term = (-3i64..=3, prop::collection::vec(0u32..=d, m)).prop_filter_map("degree", move |(c, e)| {
            (e.iter().sum::<u32>() <= d).then_some((BigInt::from(c), e))
        });
        prop::collection::vec(prop::collection::vec(term, 1..=4), count).prop_map(move |polys| {
            let polys = polys.into_iter().map(|t| IntPoly::from_terms(m, t).unwrap()).collect();
            PolySystem::new(m, polys).unwrap()
        })
    })
}

#[test]
fn minor_polynomials_have_unit_norm_and_bounded_degree() {
    for n in 1..=8 {
        for r in 0..=n {
            let sys = minors_polynomials(n, r).unwrap();
            assert_eq!(BigUint::from(sys.len()), binomial(n as u64, r as u64));
            for p in sys.polys() {
                assert_eq!(p.norm(), BigUint::from(1u32));
                assert!(p.degree() as usize <= r);
            }
        }
    }
}

#[test]
fn census_ignores_worker_count() {
    let one = in_pool(1, || enumerate_matroids(6, 3, EnumOptions::default()).unwrap());
    let many = in_pool(4, || enumerate_matroids(6, 3, EnumOptions::default()).unwrap());
    assert_eq!(one, many);
}

#[test]
fn census_items_are_valid_and_canonical() {
    for n in 0..=6 {
        for r in 0..=n {
            let c: Census = enumerate_matroids(n, r, EnumOptions::default()).unwrap();
            let mut keys = Vec::new();
            for m in &c.items {
                assert!(check_exchange(n, m.bases()).unwrap());
                assert!(m.is_canonical().unwrap());
                keys.push(m.canonical_key().unwrap());
            }
            assert!(keys.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
