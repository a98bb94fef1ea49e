use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use perm_depth::distribution::{jfraction_series, max_depth, sfraction_series};
use perm_depth::motzkin::{MotzkinPath, Step};
use perm_depth::permutation::Permutation;
use perm_depth::phi::{diagram, enumerate_preimage, phi, FiberChoices};
use perm_depth::series::TruncatedSeries;
use perm_depth::Guard;

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (0..=max_n)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::from_one_line(&v).unwrap())
}

/// Random walk kept feasible at every step.
fn motzkin_path(max_n: usize) -> impl Strategy<Value = MotzkinPath> {
    (0..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(0u8..3, n)))
        .prop_map(|(n, picks)| {
            let mut h = 0usize;
            let steps = picks
                .iter()
                .enumerate()
                .map(|(i, &pick)| {
                    let remaining = n - i - 1;
                    let mut options = Vec::new();
                    if h < remaining {
                        options.push(Step::Up);
                    }
                    if h <= remaining {
                        options.push(Step::Horizontal);
                    }
                    if h > 0 {
                        options.push(Step::Down);
                    }
                    let s = options[pick as usize % options.len()];
                    h = match s {
                        Step::Up => h + 1,
                        Step::Horizontal => h,
                        Step::Down => h - 1,
                    };
                    s
                })
                .collect();
            MotzkinPath::new(steps).unwrap()
        })
}

const Z: usize = 5;
const T: usize = 6;

fn sparse_series() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec((0..=Z, 0..=T, -20i64..=20), 0..8)
        .prop_map(|terms| TruncatedSeries::from_terms(terms, Z, T))
}

fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec((1..=Z, 0..=T, -20i64..=20), 0..8).prop_map(|terms| {
        TruncatedSeries::from_terms(std::iter::once((0, 0, 1)).chain(terms), Z, T)
    })
}

proptest! {
    #[test]
    fn permutation_statistics(w in permutation(14)) {
        let n = w.len();
        prop_assert_eq!(w.total_displacement(), 2 * w.depth());
        prop_assert_eq!(w.depth(), w.inverse().depth());
        prop_assert!(w.depth() <= max_depth(n));
        prop_assert!(w.compose(&w.inverse()).is_identity());
        let text = w.to_string();
        prop_assert_eq!(text.parse::<Permutation>().unwrap(), w);
    }

    #[test]
    fn phi_is_total_and_preserves_depth(w in permutation(14)) {
        let p = phi(&w);
        prop_assert_eq!(p.len(), w.len());
        prop_assert_eq!(p.area(), w.depth());
        prop_assert_eq!(diagram(&w).to_permutation().unwrap(), w);
    }

    #[test]
    fn diagram_shape_matches_path(w in permutation(12)) {
        let p = phi(&w);
        let d = diagram(&w);
        let ups = p.steps().iter().filter(|&&s| s == Step::Up).count();
        prop_assert_eq!(d.above_strings.len(), ups);
        prop_assert_eq!(d.below_strings.len(), ups);
        prop_assert!(d.above_strings.iter().all(|s| s.len() >= 2 && s.windows(2).all(|x| x[0] < x[1])));
        prop_assert!(d.below_strings.iter().all(|s| s.len() >= 2 && s.windows(2).all(|x| x[0] > x[1])));
    }

    #[test]
    fn path_invariants(p in motzkin_path(30)) {
        let n = p.len();
        prop_assert_eq!(p.area(), p.geometric_area());
        prop_assert!(p.area() <= max_depth(n));
        let heights = p.heights();
        for ((step, h), wt) in p.steps().iter().zip(&heights).zip(p.step_weights()) {
            match step {
                Step::Horizontal => prop_assert_eq!(wt % 2, 1),
                _ => {
                    prop_assert!(*h >= 1);
                    prop_assert_eq!(wt, *h as u64);
                }
            }
        }
        let product: BigUint = FiberChoices::new(&p).radices().iter().map(|&r| BigUint::from(r)).product();
        prop_assert_eq!(product, p.weight());
        prop_assert_eq!(p.to_string().parse::<MotzkinPath>().unwrap(), p);
    }

    #[test]
    fn fibers_have_constant_depth(p in motzkin_path(9)) {
        prop_assume!(p.weight_u128().unwrap() <= 5000);
        let mut count = 0u128;
        for w in enumerate_preimage(&p, Guard::Enforced).unwrap() {
            prop_assert_eq!(w.depth(), p.area());
            prop_assert_eq!(&phi(&w), &p);
            count += 1;
        }
        prop_assert_eq!(count, p.weight_u128().unwrap());
    }

    #[test]
    fn ring_axioms(a in sparse_series(), b in sparse_series(), c in sparse_series()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.add(&a.neg()).unwrap(), TruncatedSeries::zero(Z, T));
    }

    #[test]
    fn reciprocal_is_two_sided_inverse(a in unit_series()) {
        let r = a.reciprocal().unwrap();
        let one = TruncatedSeries::one(Z, T);
        prop_assert_eq!(a.mul(&r).unwrap(), one.clone());
        prop_assert_eq!(r.mul(&a).unwrap(), one);
    }

    #[test]
    fn truncation_commutes_with_arithmetic(a in unit_series(), b in sparse_series()) {
        let (z, t) = (3, 4);
        let small = |s: &TruncatedSeries| s.truncate(z, t);
        prop_assert_eq!(small(&a.mul(&b).unwrap()), small(&a).mul(&small(&b)).unwrap());
        prop_assert_eq!(small(&a.reciprocal().unwrap()), small(&a).reciprocal().unwrap());
    }
}

#[test]
fn fraction_truncation_is_sound() {
    // a bigger box projected down equals the smaller box computed directly
    for (big_z, big_t, z, t) in [(20, 100, 12, 36), (16, 64, 16, 10), (14, 49, 9, 20)] {
        let big = jfraction_series(big_z, big_t).truncate(z, t);
        assert_eq!(big, jfraction_series(z, t));
        let big = sfraction_series(big_z, big_t).truncate(z, t);
        assert_eq!(big, sfraction_series(z, t));
    }
}

#[test]
fn fraction_coefficients_match_path_sums() {
    // t = 1 gives n!
    let f = jfraction_series(12, 36);
    let mut fact = BigInt::from(1);
    for n in 0..=12 {
        if n > 0 {
            fact *= n;
        }
        assert_eq!(f.row_sum(n), fact);
    }
}
