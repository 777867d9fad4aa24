//! Several weight families at once: ordinary and binomial convolution,
//! the expansion of `exp(sum_j C_j u^j / j)` with `C_j = sum_i c_{i,j}`,
//! the two-sequence convolution identity for `D_m D_n - D_{m-1} D_{n+1}`,
//! and the convexity check for summed log-convex weights.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::ineqcheck::{logconcavity_report, Verdict};
use crate::rational::serde_rat;
use crate::seqcore::{expand_a, factorial, CoeffPair, TruncationOrder, WeightSeq};
use crate::sympoly::{Alphabet, IdentityCheck, MultiPoly};
use crate::{Error, Result};

/// Largest `n` accepted by [`verify_dmdn_identity`].
pub const MAX_DMDN_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvFamily {
    families: Vec<WeightSeq>,
    #[serde(rename = "K")]
    order: TruncationOrder,
}

impl ConvFamily {
    pub fn new(families: Vec<WeightSeq>, order: TruncationOrder) -> Result<Self> {
        if families.is_empty() {
            return Err(Error::invalid("need at least one weight family"));
        }
        Ok(ConvFamily { families, order })
    }

    pub fn families(&self) -> &[WeightSeq] {
        &self.families
    }

    pub fn order(&self) -> TruncationOrder {
        self.order
    }

    pub fn width(&self) -> usize {
        self.families.len()
    }

    /// `C_j = sum_i c_{i,j}` for `j = 1..K`.
    pub fn summed(&self) -> WeightSeq {
        let c = (1..=self.order.get())
            .map(|j| self.families.iter().map(|f| f.get(j)).sum())
            .collect();
        WeightSeq::new(c).expect("sums of nonnegative weights")
    }
}

/// `D_n = sum_{k<=n} x_k y_{n-k}` for `n < min(len)`.
pub fn convolve(x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let n = x.len().min(y.len());
    (0..n)
        .map(|i| (0..=i).map(|k| &x[k] * &y[i - k]).sum())
        .collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `B_n = sum_{k<=n} binom(n, k) b_k b'_{n-k}`.
pub fn binomial_convolve(b: &[BigRational], b2: &[BigRational]) -> Vec<BigRational> {
    let n = b.len().min(b2.len());
    (0..n)
        .map(|i| {
            (0..=i)
                .map(|k| &b[k] * &b2[i - k] * BigRational::from_integer(binomial(i, k)))
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiExpansion {
    pub summed: WeightSeq,
    pub coeffs: CoeffPair,
    pub per_family: Vec<CoeffPair>,
    /// `A` equals the `w`-fold convolution of the per-family `a`.
    pub a_matches_convolution: bool,
    /// `B` equals the `w`-fold binomial convolution of the per-family `b`.
    pub b_matches_binomial: bool,
}

pub fn multi_expand_a(fam: &ConvFamily) -> MultiExpansion {
    let summed = fam.summed();
    let coeffs = expand_a(&summed, fam.order);
    let per_family: Vec<CoeffPair> = fam.families.iter().map(|f| expand_a(f, fam.order)).collect();
    let a_conv = per_family[1..]
        .iter()
        .fold(per_family[0].a.clone(), |acc, p| convolve(&acc, &p.a));
    let b_conv = per_family[1..]
        .iter()
        .fold(per_family[0].b.clone(), |acc, p| binomial_convolve(&acc, &p.b));
    MultiExpansion {
        a_matches_convolution: a_conv == coeffs.a,
        b_matches_binomial: b_conv == coeffs.b,
        summed,
        coeffs,
        per_family,
    }
}

/// Polynomials over `x_0..x_{n+1}, y_0..y_{n+1}`.
struct XY {
    alpha: Arc<Alphabet>,
    len: usize,
}

impl XY {
    fn new(n: usize) -> Self {
        let mut names: Vec<String> = (0..=n + 1).map(|i| format!("x_{i}")).collect();
        names.extend((0..=n + 1).map(|i| format!("y_{i}")));
        XY { alpha: Alphabet::new(names), len: n + 2 }
    }

    fn x(&self, i: usize) -> MultiPoly {
        MultiPoly::var(&self.alpha, i)
    }

    fn y(&self, i: usize) -> MultiPoly {
        MultiPoly::var(&self.alpha, self.len + i)
    }

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(&self.alpha)
    }

    fn d(&self, n: usize) -> MultiPoly {
        (0..=n).fold(self.zero(), |acc, k| &acc + &(&self.x(k) * &self.y(n - k)))
    }

    fn sum<I: IntoIterator<Item = MultiPoly>>(&self, it: I) -> MultiPoly {
        it.into_iter().fold(self.zero(), |acc, p| &acc + &p)
    }
}

/// The pieces of the five-sum expansion, kept separate so they can be
/// checked one at a time or evaluated at a point.
struct Dmdn {
    lhs: MultiPoly,
    first: MultiPoly,
    second: MultiPoly,
    third: MultiPoly,
    fourth_at_zero: MultiPoly,
    fourth_rest: MultiPoly,
    fifth: MultiPoly,
    fifth_swapped: MultiPoly,
    fifth_square: MultiPoly,
    part_one: MultiPoly,
    part_two: MultiPoly,
    part_three: MultiPoly,
}

fn dmdn_pieces(m: usize, n: usize) -> Dmdn {
    let s = XY::new(n);
    let (x, y) = (|i| s.x(i), |i| s.y(i));
    let lhs = &(&s.d(m) * &s.d(n)) - &(&s.d(m - 1) * &s.d(n + 1));

    let first = &(&(&x(0) * &y(0)) * &x(m)) * &y(n);
    let second = &y(0) * &s.sum((0..n - m).map(|k| &(&x(m) * &x(k + 1)) * &y(n - 1 - k)));
    let third = &y(0)
        * &s.sum((0..m).map(|k| &y(k) * &(&(&x(m) * &x(n - k)) - &(&x(n + 1) * &x(m - k - 1)))));
    let fourth_term = |k: usize, l: usize| {
        &(&x(k) * &x(l)) * &(&(&y(m - k) * &y(n - l)) - &(&y(m - k - 1) * &y(n + 1 - l)))
    };
    let fourth_at_zero = s.sum((0..m).map(|k| fourth_term(k, 0)));
    let fourth_rest = s.sum((0..m).flat_map(|k| (1..=n - m).map(move |l| (k, l))).map(|(k, l)| fourth_term(k, l)));
    let off = n - m + 1;
    let fifth_term = |k: usize, l: usize| {
        &(&(&x(k) * &x(off + l)) - &(&x(l) * &x(off + k)))
            * &(&(&y(m - k) * &y(m - 1 - l)) - &(&y(m - 1 - k) * &y(m - l)))
    };
    let fifth = s.sum((0..m).flat_map(|k| (0..=k).map(move |l| (k, l))).map(|(k, l)| fifth_term(k, l)));
    let fifth_swapped = s.sum((0..m).flat_map(|k| (k..m).map(move |l| (k, l))).map(|(k, l)| fifth_term(k, l)));
    let fifth_square = s.sum((0..m).flat_map(|k| (0..m).map(move |l| (k, l))).map(|(k, l)| {
        &(&x(k) * &x(off + l)) * &(&(&y(m - k) * &y(m - 1 - l)) - &(&y(m - 1 - k) * &y(m - l)))
    }));

    let part_one = &x(0) * &(&(&y(n) * &s.d(m)) - &(&y(n + 1) * &s.d(m - 1)));
    let part_two = &y(0)
        * &(&(&x(m) * &s.sum((0..n).map(|k| &x(k + 1) * &y(n - 1 - k))))
            - &(&x(n + 1) * &s.sum((0..m).map(|k| &x(k) * &y(m - 1 - k)))));
    let part_three = s.sum((0..m).flat_map(|k| (0..n).map(move |l| (k, l))).map(|(k, l)| {
        &(&x(k) * &x(l + 1)) * &(&(&y(m - k) * &y(n - 1 - l)) - &(&y(m - 1 - k) * &y(n - l)))
    }));
    Dmdn {
        lhs,
        first,
        second,
        third,
        fourth_at_zero,
        fourth_rest,
        fifth,
        fifth_swapped,
        fifth_square,
        part_one,
        part_two,
        part_three,
    }
}

fn check_dmdn_args(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::invalid(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    if n > MAX_DMDN_N {
        return Err(Error::SizeLimit { what: "n", got: n, limit: MAX_DMDN_N });
    }
    Ok(())
}

/// Checks, for `D_n = sum x_k y_{n-k}`, the five-sum expansion of
/// `D_m D_n - D_{m-1} D_{n+1}`, its three-part split and how each part maps
/// onto the five sums, and the symmetry of the last sum.
pub fn verify_dmdn_identity(m: usize, n: usize) -> Result<Vec<IdentityCheck>> {
    check_dmdn_args(m, n)?;
    let p = dmdn_pieces(m, n);
    let params = format!("m={m},n={n}");
    let sum = |ps: &[&MultiPoly]| ps.iter().fold(MultiPoly::zero(p.lhs.alphabet()), |acc, q| &acc + *q);
    let five = sum(&[&p.first, &p.second, &p.third, &p.fourth_at_zero, &p.fourth_rest, &p.fifth]);
    Ok(vec![
        IdentityCheck::compare("convolution_five_sums", params.clone(), &p.lhs, &five),
        IdentityCheck::compare(
            "convolution_three_parts",
            params.clone(),
            &p.lhs,
            &sum(&[&p.part_one, &p.part_two, &p.part_three]),
        ),
        IdentityCheck::compare("convolution_part_one", params.clone(), &p.part_one, &(&p.first + &p.fourth_at_zero)),
        IdentityCheck::compare("convolution_part_two", params.clone(), &p.part_two, &(&p.second + &p.third)),
        IdentityCheck::compare("convolution_part_three", params.clone(), &p.part_three, &(&p.fourth_rest + &p.fifth)),
        IdentityCheck::compare("convolution_last_sum_swap", params.clone(), &p.fifth, &p.fifth_swapped),
        IdentityCheck::compare("convolution_last_sum_square", params, &p.fifth, &p.fifth_square),
    ])
}

/// Values of the five sums (the fourth split at `l = 0`) at a numeric point,
/// for inspecting which terms are negative when one sequence is log-convex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DmdnBreakdown {
    #[serde(with = "serde_rat")]
    pub lhs: BigRational,
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub terms: Vec<BigRational>,
}

pub fn dmdn_breakdown(x: &[BigRational], y: &[BigRational], m: usize, n: usize) -> Result<DmdnBreakdown> {
    check_dmdn_args(m, n)?;
    if x.len() < n + 2 || y.len() < n + 2 {
        return Err(Error::invalid(format!("need x and y up to index {}", n + 1)));
    }
    let p = dmdn_pieces(m, n);
    let point: Vec<BigRational> = x[..n + 2].iter().chain(&y[..n + 2]).cloned().collect();
    let terms = [&p.first, &p.second, &p.third, &p.fourth_at_zero, &p.fourth_rest, &p.fifth]
        .iter()
        .map(|q| q.eval(&point))
        .collect();
    Ok(DmdnBreakdown { lhs: p.lhs.eval(&point), terms })
}

/// Sign check of `f(m, n) >= 0` over `1 <= m <= n < K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub checked: usize,
    /// First `(m, n)` in row order with a negative value.
    pub first_violation: Option<(usize, usize)>,
}

impl GridReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

fn grid<F: Fn(usize, usize) -> BigRational>(k: usize, f: F) -> GridReport {
    let mut checked = 0;
    for n in 1..k {
        for m in 1..=n {
            checked += 1;
            if f(m, n).is_negative() {
                return GridReport { checked, first_violation: Some((m, n)) };
            }
        }
    }
    GridReport { checked, first_violation: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryStatus {
    /// All predicted signs were observed.
    Consistent,
    Contradiction,
    /// Some family is not log-convex.
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryVerdict {
    pub order: usize,
    pub family_shapes: Vec<Verdict>,
    /// `sum_i c_{i,2} - (sum_i c_{i,1})^2`.
    #[serde(with = "serde_rat")]
    pub condition: BigRational,
    /// `m B_{m-1} B_{n+1} - (n+1) B_m B_n >= 0` over the grid.
    pub b_grid: Option<GridReport>,
    /// `A_{m-1} A_{n+1} - A_m A_n >= 0` over the grid.
    pub a_grid: Option<GridReport>,
    /// `B_0 B_2 - 2 B_1^2 == C_2 - C_1^2`.
    pub boundary_identity: bool,
    /// `B_0 B_2 - B_1^2 == C_0 C_2 - C_1^2`, which only holds when `C_1 = 0`.
    pub unscaled_boundary_identity: bool,
    pub status: CorollaryStatus,
}

/// For log-convex families, the grid inequalities hold iff the condition is
/// nonnegative; with a negative condition both must fail at `m = n = 1`.
pub fn corollary_convexity_check(fam: &ConvFamily) -> CorollaryVerdict {
    let k = fam.order.get();
    let family_shapes: Vec<Verdict> = fam
        .families
        .iter()
        .map(|f| logconcavity_report(&f.prefix(fam.order), 1).verdict)
        .collect();
    let all_convex = family_shapes.iter().all(|v| matches!(v, Verdict::LogConvex | Verdict::Both));
    let c = fam.summed();
    let (c1, c2) = (c.get(1), c.get(2));
    let condition = &c2 - &c1 * &c1;
    let e = expand_a(&c, fam.order);
    let (a, b) = (&e.a, &e.b);
    let two = BigRational::from_integer(2.into());
    let (boundary_identity, unscaled_boundary_identity) = if b.len() >= 3 {
        (
            &b[0] * &b[2] - &two * &b[1] * &b[1] == condition,
            &b[0] * &b[2] - &b[1] * &b[1] == condition,
        )
    } else {
        (true, true)
    };
    let rat = |v: usize| BigRational::from_integer(v.into());
    let (b_grid, a_grid, status) = if !all_convex {
        (None, None, CorollaryStatus::Inapplicable)
    } else {
        let bg = grid(k, |m, n| rat(m) * &b[m - 1] * &b[n + 1] - rat(n + 1) * &b[m] * &b[n]);
        let ag = grid(k, |m, n| &a[m - 1] * &a[n + 1] - &a[m] * &a[n]);
        let expected = if k < 2 {
            true
        } else if condition.is_negative() {
            bg.first_violation == Some((1, 1)) && ag.first_violation == Some((1, 1))
        } else {
            bg.holds() && ag.holds()
        };
        let status = if expected && boundary_identity {
            CorollaryStatus::Consistent
        } else {
            CorollaryStatus::Contradiction
        };
        (Some(bg), Some(ag), status)
    };
    CorollaryVerdict {
        order: k,
        family_shapes,
        condition,
        b_grid,
        a_grid,
        boundary_identity,
        unscaled_boundary_identity,
        status,
    }
}
