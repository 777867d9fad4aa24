//! Exact search for cone certificates within a degree bound.
//!
//! Every generator is homogeneous for `weight(c_j) = j`, so a representation
//! of the target splits into one representation per weight component. At
//! `c_k = q^{k^2}` all pair generators of `Y` are positive for `0 < q < 1`
//! (and those of `Z` for `q > 1`), hence no nonzero nonnegative combination
//! of products vanishes. Products whose weight matches no target component
//! can therefore be dropped without losing solutions, and the remaining
//! feasible set is a bounded polytope.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lp::{nonneg_integer_solution, IntOutcome};
use super::{CertTerm, Certificate, GenShape, GeneratorSet};
use crate::sympoly::MultiPoly;
use crate::{Error, Result};

/// Cap on generator products considered for one weight component.
pub const MAX_CANDIDATES: usize = 20_000;
const MAX_NODES: usize = 100_000;
const STAGE_NODES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Certificate),
    /// No representation by products of total degree `<= bound`.
    NotFound { bound: u32 },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

pub fn certify_in_cone(target: &MultiPoly, gens: &GeneratorSet, degree_bound: u32) -> Result<SearchOutcome> {
    let target = target.extend_to(gens.alphabet())?;
    if target.is_zero() {
        return Ok(SearchOutcome::Found(Certificate::empty()));
    }
    let deg = target.total_degree();
    if degree_bound < deg {
        return Err(Error::invalid(format!(
            "degree bound {degree_bound} is below the target degree {deg}"
        )));
    }
    let vw = gens.var_weights();
    let mut components: BTreeMap<u32, Vec<(Vec<u32>, BigRational)>> = BTreeMap::new();
    for (e, c) in target.terms() {
        let w = e.iter().zip(vw).map(|(k, w)| k * w).sum();
        components.entry(w).or_default().push((e.clone(), c.clone()));
    }
    let mut terms = Vec::new();
    for (w, comp) in components {
        match solve_component(&comp, gens, w, degree_bound)? {
            Some(mut t) => terms.append(&mut t),
            None => return Ok(SearchOutcome::NotFound { bound: degree_bound }),
        }
    }
    Ok(SearchOutcome::Found(Certificate::new(terms)))
}

fn solve_component(
    comp: &[(Vec<u32>, BigRational)],
    gens: &GeneratorSet,
    weight: u32,
    bound: u32,
) -> Result<Option<Vec<CertTerm>>> {
    let all = products_of_weight(gens, weight, bound)?;
    let pairs_in = |ix: &[usize]| {
        ix.iter().filter(|&&i| matches!(gens.generators()[i].shape, GenShape::Pair { .. })).count()
    };
    let most = all.iter().map(|(ix, _)| pairs_in(ix)).max().unwrap_or(0);
    // Deepen on the number of pair factors per product; the last stage
    // holds every candidate, so only its verdict is final.
    for stage in 0..=most {
        let cands: Vec<&(Vec<usize>, MultiPoly)> = all.iter().filter(|(ix, _)| pairs_in(ix) <= stage).collect();
        let last = stage == most;
        match solve_columns(comp, &cands, if last { MAX_NODES } else { STAGE_NODES }) {
            IntOutcome::Found(x) => {
                return Ok(Some(
                    cands
                        .into_iter()
                        .zip(x)
                        .filter(|(_, v)| v.is_positive())
                        .map(|((ix, _), coeff)| CertTerm { gen_indices: ix.clone(), coeff })
                        .collect(),
                ))
            }
            IntOutcome::Infeasible if last => return Ok(None),
            IntOutcome::NodeLimit if last => {
                return Err(Error::SizeLimit { what: "branch-and-bound nodes", got: MAX_NODES + 1, limit: MAX_NODES })
            }
            _ => {}
        }
    }
    Ok(None)
}

fn solve_columns(comp: &[(Vec<u32>, BigRational)], cands: &[&(Vec<usize>, MultiPoly)], max_nodes: usize) -> IntOutcome {
    let mut rows: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for (e, _) in comp {
        let n = rows.len();
        rows.entry(e.clone()).or_insert(n);
    }
    for (_, p) in cands {
        for (e, _) in p.terms() {
            let n = rows.len();
            rows.entry(e.clone()).or_insert(n);
        }
    }
    let mut a = vec![vec![BigRational::zero(); cands.len()]; rows.len()];
    for (col, (_, p)) in cands.iter().enumerate() {
        for (e, c) in p.terms() {
            a[rows[e]][col] = c.clone();
        }
    }
    let mut t = vec![BigRational::zero(); rows.len()];
    for (e, c) in comp {
        t[rows[e]] = c.clone();
    }
    // A monomial no candidate reaches must have a zero target coefficient.
    if a.iter().zip(&t).any(|(row, ti)| !ti.is_zero() && row.iter().all(|v| v.is_zero())) {
        return IntOutcome::Infeasible;
    }
    nonneg_integer_solution(&a, &t, cands.len(), max_nodes)
}

/// All generator multisets of exactly `weight` and degree `<= bound`, with
/// their expanded products, in lexicographic order of index lists.
pub(crate) fn products_of_weight(
    gens: &GeneratorSet,
    weight: u32,
    bound: u32,
) -> Result<Vec<(Vec<usize>, MultiPoly)>> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let one = MultiPoly::one(gens.alphabet());
    collect(gens, 0, weight, bound, &mut stack, &one, &mut out)?;
    Ok(out)
}

fn collect(
    gens: &GeneratorSet,
    start: usize,
    weight: u32,
    degree: u32,
    stack: &mut Vec<usize>,
    prod: &MultiPoly,
    out: &mut Vec<(Vec<usize>, MultiPoly)>,
) -> Result<()> {
    if weight == 0 {
        if out.len() == MAX_CANDIDATES {
            return Err(Error::SizeLimit { what: "generator products", got: MAX_CANDIDATES + 1, limit: MAX_CANDIDATES });
        }
        out.push((stack.clone(), prod.clone()));
        return Ok(());
    }
    for (i, g) in gens.generators().iter().enumerate().skip(start) {
        if g.weight <= weight && g.degree <= degree {
            stack.push(i);
            let next = prod * &g.poly;
            collect(gens, i, weight - g.weight, degree - g.degree, stack, &next, out)?;
            stack.pop();
        }
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use crate::certify::{build_generator_set, poly1_target, validate_certificate, GenKind};
    use crate::sympoly::Alphabet;

    #[test]
    fn base_case_is_one_generator() {
        let gens = build_generator_set(GenKind::Y, 2).unwrap();
        let t = poly1_target(1, 1).unwrap();
        let out = certify_in_cone(&t, &gens, 2).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.terms(), &[CertTerm { gen_indices: vec![2], coeff: BigInt::from(1) }]);
        assert!(validate_certificate(cert, &t, &gens).passed());
    }

    #[test]
    fn zero_target() {
        let gens = build_generator_set(GenKind::Y, 2).unwrap();
        let z = MultiPoly::zero(&Alphabet::weights(2));
        assert_eq!(certify_in_cone(&z, &gens, 0).unwrap(), SearchOutcome::Found(Certificate::empty()));
    }

    #[test]
    fn negative_at_ones_not_found() {
        let gens = build_generator_set(GenKind::Y, 3).unwrap();
        let a = Alphabet::weights(3);
        let c = |i: usize| MultiPoly::var(&a, i - 1);
        let t = (&(&c(1) * &c(2)) + &c(3)).scalar_mul_int(-2);
        for bound in 2..=5 {
            assert_eq!(certify_in_cone(&t, &gens, bound).unwrap(), SearchOutcome::NotFound { bound });
        }
    }

    #[test]
    fn bound_below_degree_rejected() {
        let gens = build_generator_set(GenKind::Y, 2).unwrap();
        let t = poly1_target(1, 1).unwrap();
        assert!(matches!(certify_in_cone(&t, &gens, 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn candidate_counts() {
        let gens = build_generator_set(GenKind::Y, 3).unwrap();
        // weight 3: c3, c1c2, c1^3, c1*y11, y12
        assert_eq!(products_of_weight(&gens, 3, 3).unwrap().len(), 5);
        assert_eq!(products_of_weight(&gens, 3, 2).unwrap().len(), 3);
    }
}
