use cycdex_core::hiprec::{self, Enclosure, SignConfidence};
use cycdex_core::ineqcheck::{logconcavity_report, refined_bounds_a, refined_bounds_b, BMode};
use cycdex_core::probseq::{embed_c_as_cp, panjer, recover_r, scale_normalize, CPModel, Lambda};
use cycdex_core::rational::{frac, int};
use cycdex_core::seqcore::{exp_coefficients, expand_a, factorial, series_mul, TruncationOrder, WeightSeq};
use cycdex_core::sympoly::identities::symbolic_cp_masses;
use cycdex_core::sympoly::{bruteforce_b, symbolic_b, BruteForce};
use cycdex_core::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn order(k: usize) -> TruncationOrder {
    TruncationOrder::new(k).unwrap()
}

fn rat() -> impl Strategy<Value = BigRational> {
    (0i64..=12, 1i64..=12).prop_map(|(p, q)| frac(p, q))
}

fn weights(max_len: usize) -> impl Strategy<Value = WeightSeq> {
    prop::collection::vec(rat(), 1..=max_len).prop_map(|c| WeightSeq::new(c).unwrap())
}

fn positive_weights(len: usize) -> impl Strategy<Value = WeightSeq> {
    prop::collection::vec((1i64..=12, 1i64..=12), len).prop_map(|v| {
        WeightSeq::new(v.into_iter().map(|(p, q)| frac(p, q)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expansion_of_nonnegative_weights_is_nonnegative(c in weights(12), k in 1usize..=60) {
        let e = expand_a(&c, order(k));
        prop_assert!(e.a.iter().chain(&e.b).all(|x| !x.is_negative()));
    }

    #[test]
    fn expansion_matches_permutation_sum(c in weights(8), m in 0usize..=7) {
        let point: Vec<BigRational> = (1..=m.max(1)).map(|j| c.get(j)).collect();
        let brute = bruteforce_b(m, BruteForce::Permutations).unwrap().eval(&point);
        let a = expand_a(&c, order(m.max(1))).a;
        prop_assert_eq!(BigRational::from_integer(factorial(m)) * &a[m], brute);
    }

    #[test]
    fn multiplying_by_inverse_exponential_gives_one(c in weights(10), k in 1usize..=40) {
        let e = expand_a(&c, order(k));
        let neg: Vec<BigRational> = c.prefix(order(k)).iter().map(|x| -x).collect();
        let inv = exp_coefficients(&neg, k);
        let prod = series_mul(&e.a, &inv, k);
        prop_assert!(prod[0].is_one());
        prop_assert!(prod[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn truncation_is_prefix_stable(c in weights(10), k in 1usize..=30, extra in 1usize..=20) {
        let short = expand_a(&c, order(k));
        let long = expand_a(&c, order(k + extra));
        prop_assert_eq!(&short.a[..], &long.a[..=k]);
        prop_assert_eq!(&short.b[..], &long.b[..=k]);
    }

    #[test]
    fn panjer_then_recover_returns_jump_rates(f in prop::collection::vec(rat(), 1..=10), lam in (1i64..=8, 1i64..=4), k in 1usize..=100) {
        let total: BigRational = f.iter().sum();
        let mut masses = vec![BigRational::zero()];
        masses.extend(f.iter().map(|x| x / (&total + BigRational::one())));
        let spent: BigRational = masses.iter().sum();
        masses[0] = BigRational::one() - spent;
        let model = CPModel::new(frac(lam.0, lam.1), masses).unwrap();
        let q = panjer(&model, order(k));
        let r = recover_r(q.q()).unwrap();
        prop_assert_eq!(r.0, model.r_sequence(k));
    }

    #[test]
    fn embedded_weights_reproduce_expansion(c in weights(15), k in 1usize..=40) {
        let model = embed_c_as_cp(&c, order(k), Lambda::Auto).unwrap();
        let q = panjer(&model, order(k));
        prop_assert_eq!(q.q().to_vec(), expand_a(&c, order(k)).a);
    }

    #[test]
    fn rescaling_weights_keeps_shape_signs(c in positive_weights(8), u0 in (1i64..=9, 1i64..=9)) {
        let k = order(12);
        let scaled = scale_normalize(&c, &frac(u0.0, u0.1)).unwrap();
        let signs = |w: &WeightSeq| -> Vec<i8> {
            logconcavity_report(&expand_a(w, k).a, 0)
                .differences
                .iter()
                .map(cycdex_core::rational::sign)
                .collect()
        };
        prop_assert_eq!(signs(&c), signs(&scaled));
    }

    #[test]
    fn a_side_and_b_side_agree_pointwise(c in positive_weights(10)) {
        let e = expand_a(&c, order(20));
        let a = refined_bounds_a(&e.a);
        let b = refined_bounds_b(&e.b, BMode::Concave);
        // a_k^2 >= a_{k-1}a_{k+1}  <=>  b_k^2 >= k/(k+1) b_{k-1}b_{k+1}
        for ((k, da), (_, db)) in a.lower.indexed().zip(b.upper.indexed()) {
            prop_assert_eq!(da.signum(), db.signum(), "k = {}", k);
        }
        // a_k^2 <= (k+1)/k a_{k-1}a_{k+1}  <=>  b_k^2 <= b_{k-1}b_{k+1}
        for ((k, da), (_, db)) in a.upper.indexed().zip(b.lower.indexed()) {
            prop_assert_eq!(da.signum(), db.signum(), "k = {}", k);
        }
    }

    #[test]
    fn symbolic_b_specializes_to_expansion(c in positive_weights(25), m in 0usize..=25) {
        let b = symbolic_b(m);
        let point: Vec<BigRational> = (1..=b.alphabet().len()).map(|j| c.get(j)).collect();
        prop_assert_eq!(b.eval(&point), expand_a(&c, order(25)).b[m].clone());
    }
}

#[test]
fn symbolic_b_matches_cycle_type_sum_up_to_25() {
    for m in 0..=25 {
        assert_eq!(symbolic_b(m), bruteforce_b(m, BruteForce::CycleTypes).unwrap(), "m = {m}");
    }
}

#[test]
fn symbolic_b_coefficients_are_positive_integers_summing_to_factorial() {
    for m in 0..=14 {
        let b = symbolic_b(m);
        assert!(b.terms().all(|(_, c)| c.is_integer() && c.is_positive()));
        let ones = vec![BigRational::one(); b.alphabet().len()];
        assert_eq!(b.eval(&ones), BigRational::from_integer(factorial(m)));
    }
}

#[test]
fn compound_poisson_masses_are_linear_in_the_zero_mass() {
    let p = symbolic_cp_masses(8);
    for (n, pn) in p.iter().enumerate() {
        assert!(pn.terms().all(|(e, _)| e[0] == 1), "P_{n} not homogeneous in P_0");
        let sq = pn * pn;
        assert!(sq.terms().all(|(e, _)| e[0] == 2));
    }
}

#[test]
fn finite_support_masses_sum_to_one() {
    let digits = 50;
    let tol = frac(1, 1) / BigRational::from_integer(num_bigint::BigInt::from(10).pow(30));
    for (lam, f) in [
        (int(4), vec![frac(1, 4), frac(1, 4), frac(1, 2)]),
        (frac(5, 2), vec![frac(0, 1), frac(1, 3), frac(1, 3), frac(1, 3)]),
        (int(1), vec![frac(1, 2), frac(1, 2)]),
    ] {
        let model = CPModel::new(lam, f).unwrap();
        let q = panjer(&model, order(200));
        let total: BigRational = q.q().iter().sum();
        let scale = hiprec::working_scale(digits);
        let mass = q.prefactor(digits).mul_rational(&total);
        let err = mass.sub(&Enclosure::from_int(1, scale));
        assert!(err.upper() < tol && err.lower() > -tol.clone(), "{}", err.to_decimal(digits));
        assert_eq!(q.prefactor(digits).sign(digits), SignConfidence::ExactSign(1));
    }
}
