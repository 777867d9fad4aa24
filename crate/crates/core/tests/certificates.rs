use cycdex_core::certify::{
    agree_at_random_points, build_generator_set, certify_in_cone, certify_poly1, certify_poly2, poly1_target,
    poly2_target, validate_certificate, CertificateJson, DecodedCertificate, GenKind, GeneratorSet, SearchOutcome,
};
use cycdex_core::distexamples::{random_logshape, Boundary, Shape};
use cycdex_core::seqcore::TruncationOrder;
use cycdex_core::sympoly::{Alphabet, MultiPoly};
use num_traits::Signed;
use proptest::prelude::*;

fn c_vars() -> (MultiPoly, MultiPoly) {
    let alpha = Alphabet::weights(2);
    (MultiPoly::var(&alpha, 0), MultiPoly::var(&alpha, 1))
}

/// Membership of `al c1^4 + be c1^2 c2 + ga c2^2` in the cone spanned by
/// degree-4 products of `c1`, `c2` and `sign * (c1^2 - c2)`, by enumerating
/// the pair multiplicities. With `sign = 1`, writing the pair part as
/// `z1 c1^2 p + z2 c2 p + z3 p^2` leaves monomial slacks
/// `al - z1 - z3`, `be + z1 - z2 - 2 z3`, `ga + z2 + z3` and so on; every
/// `z_i` is bounded by `|al| + |be| + |ga|`.
fn member_by_enumeration(al: i64, be: i64, ga: i64, sign: i64) -> bool {
    let n = al.abs() + be.abs() + ga.abs();
    for z1 in 0..=n {
        for z2 in 0..=n {
            for z3 in 0..=n {
                // p = sign*(c1^2 - c2); p*c1^2, p*c2, p^2 expanded
                let x1 = al - sign * z1 - z3;
                let x2 = be - sign * (z2 - z1) + 2 * z3;
                let x3 = ga + sign * z2 - z3;
                if x1 >= 0 && x2 >= 0 && x3 >= 0 {
                    return true;
                }
            }
        }
    }
    false
}

fn quartic(al: i64, be: i64, ga: i64) -> MultiPoly {
    let (c1, c2) = c_vars();
    let c1sq = &c1 * &c1;
    &(&(&c1sq * &c1sq).scalar_mul_int(al) + &(&c1sq * &c2).scalar_mul_int(be)) + &(&c2 * &c2).scalar_mul_int(ga)
}

fn check_found(target: &MultiPoly, gens: &GeneratorSet, bound: u32, seed: u64) -> Result<bool, TestCaseError> {
    match certify_in_cone(target, gens, bound).unwrap() {
        SearchOutcome::Found(cert) => {
            prop_assert!(validate_certificate(&cert, target, gens).passed());
            let expanded = cert.expand(gens).unwrap();
            let target = target.extend_to(expanded.alphabet()).unwrap();
            prop_assert!(agree_at_random_points(&expanded, &target, 20, seed));
            Ok(true)
        }
        SearchOutcome::NotFound { .. } => Ok(false),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_agrees_with_enumeration_on_quartics(al in -3i64..=3, be in -3i64..=3, ga in -3i64..=3, bound in 4u32..=5) {
        for (kind, sign) in [(GenKind::Y, 1), (GenKind::Z, -1)] {
            let gens = build_generator_set(kind, 2).unwrap();
            let found = check_found(&quartic(al, be, ga), &gens, bound, 1)?;
            prop_assert_eq!(found, member_by_enumeration(al, be, ga, sign), "{:?} {} {} {}", kind, al, be, ga);
        }
    }

    #[test]
    fn search_agrees_with_enumeration_on_quadratics(al in -4i64..=4, be in -4i64..=4, bound in 2u32..=4) {
        // cone at weight 2: x c1^2 + y c2 + z sign (c1^2 - c2)
        let (c1, c2) = c_vars();
        let target = &(&c1 * &c1).scalar_mul_int(al) + &c2.scalar_mul_int(be);
        for (kind, sign) in [(GenKind::Y, 1i64), (GenKind::Z, -1)] {
            let gens = build_generator_set(kind, 2).unwrap();
            let n = al.abs() + be.abs();
            let oracle = (0..=n).any(|z| al - sign * z >= 0 && be + sign * z >= 0);
            prop_assert_eq!(check_found(&target, &gens, bound, 2)?, oracle);
        }
    }

    #[test]
    fn random_cone_members_are_certified(
        kind in prop_oneof![Just(GenKind::Y), Just(GenKind::Z), Just(GenKind::X)],
        picks in prop::collection::vec((prop::collection::vec(0usize..64, 1..=3), 1i64..=3), 1..=4),
        seed in 0u64..1000,
    ) {
        let gens = build_generator_set(kind, 4).unwrap();
        let mut target = MultiPoly::zero(gens.alphabet());
        let mut bound = 0;
        for (idx, coeff) in &picks {
            let factors: Vec<_> = idx.iter().map(|i| gens.get(i % gens.len()).unwrap()).collect();
            bound = bound.max(factors.iter().map(|g| g.degree).sum::<u32>());
            let prod = factors.iter().fold(MultiPoly::one(gens.alphabet()), |acc, g| &acc * &g.poly);
            target = &target + &prod.scalar_mul_int(*coeff);
        }
        prop_assume!(!target.is_zero());
        prop_assert!(check_found(&target, &gens, bound, seed)?);
    }

    #[test]
    fn cone_targets_are_nonnegative_at_matching_shapes(seed in 0u64..10_000, m in 1usize..=5, dn in 0usize..=3) {
        let n = m + dn;
        let k = TruncationOrder::new(n + 1).unwrap();
        let concave = random_logshape(seed, k, Shape::Concave, Boundary::C1sqGeC2);
        let convex = random_logshape(seed, k, Shape::Convex, Boundary::C1sqLeC2);
        prop_assert!(!poly1_target(m, n).unwrap().eval(concave.as_slice()).is_negative());
        prop_assert!(!poly2_target(m, n).unwrap().eval(convex.as_slice()).is_negative());
    }
}

#[test]
fn every_small_pair_has_both_certificates() {
    for n in 1..=6 {
        for m in 1..=n {
            let (gens, out) = certify_poly1(m, n).unwrap();
            let cert = out.certificate().unwrap_or_else(|| panic!("no Y certificate at ({m}, {n})"));
            let target = poly1_target(m, n).unwrap();
            assert!(validate_certificate(cert, &target, &gens).passed());
            assert!(agree_at_random_points(&cert.expand(&gens).unwrap(), &target, 20, (m * 10 + n) as u64));

            let (zgens, rc) = certify_poly2(m, n).unwrap();
            let neg = poly2_target(m, n).unwrap();
            assert!(validate_certificate(&rc, &neg, &zgens).passed(), "ratio ({m}, {n})");
            let num = rc.numerator.expand(&zgens).unwrap();
            let den = rc.denominator.expand(&zgens).unwrap();
            let neg = neg.extend_to(zgens.alphabet()).unwrap();
            assert!(agree_at_random_points(&num, &(&neg * &den), 20, 7));
        }
    }
}

#[test]
fn certificates_survive_json() {
    let (gens, out) = certify_poly1(2, 3).unwrap();
    let cert = out.certificate().unwrap().clone();
    let text = serde_json::to_string(&CertificateJson::plain(&cert, &gens)).unwrap();
    let back: CertificateJson = serde_json::from_str(&text).unwrap();
    let (g2, decoded) = back.decode().unwrap();
    match decoded {
        DecodedCertificate::Plain(c) => {
            assert_eq!(c, cert);
            assert!(validate_certificate(&c, &poly1_target(2, 3).unwrap(), &g2).passed());
        }
        DecodedCertificate::Ratio(_) => panic!("expected a plain certificate"),
    }

    let (zgens, rc) = certify_poly2(2, 3).unwrap();
    let text = serde_json::to_string(&CertificateJson::ratio(&rc, &zgens)).unwrap();
    let (g2, decoded) = serde_json::from_str::<CertificateJson>(&text).unwrap().decode().unwrap();
    assert!(validate_certificate(decoded.as_ref(), &poly2_target(2, 3).unwrap(), &g2).passed());
}

#[test]
fn tampered_certificate_is_rejected() {
    let (gens, out) = certify_poly1(1, 2).unwrap();
    let mut cert = out.certificate().unwrap().clone();
    cert.terms_mut()[0].coeff += 1;
    let target = poly1_target(1, 2).unwrap();
    assert!(!validate_certificate(&cert, &target, &gens).passed());
}
