//! Exact rational simplex and branch-and-bound for `A x = t, x >= 0, x ∈ Z^n`.
//!
//! Dense fraction-free tableau, Bland's rule, two phases. Phase two minimises `sum x`, which
//! together with Bland's rule makes every answer a deterministic function of
//! the input matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum IntOutcome {
    Found(Vec<BigInt>),
    Infeasible,
    NodeLimit,
}

/// Integer-preserving tableau: the real tableau is `m / d` with `d > 0` the
/// current basis determinant, so pivots need only exact integer division.
struct Tableau {
    rows: Vec<Vec<BigInt>>,
    obj: Vec<BigInt>,
    basis: Vec<usize>,
    d: BigInt,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        let prow = self.rows[r].clone();
        let d = self.d.clone();
        let update = |row: &mut Vec<BigInt>| {
            let f = row[j].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                let mut x = &p * &*v;
                if !f.is_zero() && !pv.is_zero() {
                    x -= &f * pv;
                }
                *v = if d.is_one() { x } else { x / &d };
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row);
            }
        }
        update(&mut self.obj);
        self.basis[r] = j;
        if p.is_negative() {
            for row in self.rows.iter_mut().chain(std::iter::once(&mut self.obj)) {
                for v in row.iter_mut() {
                    *v = -std::mem::take(v);
                }
            }
            self.d = -p;
        } else {
            self.d = p;
        }
    }

    /// Bland's rule over columns `< allowed`. Returns false if unbounded.
    fn optimise(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(j) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<usize> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => {
                        let brow = &self.rows[b];
                        let lhs = &row[rhs] * &brow[j];
                        let rhs_v = &brow[rhs] * &row[j];
                        lhs < rhs_v || (lhs == rhs_v && self.basis[r] < self.basis[b])
                    }
                };
                if better {
                    best = Some(r);
                }
            }
            match best {
                Some(r) => self.pivot(r, j),
                None => return false,
            }
        }
    }
}

/// Scales a rational row to integers.
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
}

/// Minimises `sum x` subject to `A x = t`, `lo <= x <= hi`.
fn lp_min(
    a: &[Vec<BigRational>],
    t: &[BigRational],
    lo: &[BigInt],
    hi: &[Option<BigInt>],
) -> Option<Vec<BigRational>> {
    let n = lo.len();
    let uppers: Vec<(usize, BigInt)> = hi
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.as_ref().map(|h| (i, h - &lo[i])))
        .collect();
    if uppers.iter().any(|(_, cap)| cap.is_negative()) {
        return None;
    }
    let u = uppers.len();
    let m = a.len() + u;
    let width = n + u + m + 1;
    let rhs = width - 1;
    let mut rows = Vec::with_capacity(m);
    for (ai, ti) in a.iter().zip(t) {
        let mut row = vec![BigRational::zero(); n + 1];
        let mut b = ti.clone();
        for (k, v) in ai.iter().enumerate() {
            if !v.is_zero() {
                row[k] = v.clone();
                if !lo[k].is_zero() {
                    b -= v * BigRational::from_integer(lo[k].clone());
                }
            }
        }
        row[n] = b;
        let ints = integer_row(&row);
        let mut full = vec![BigInt::zero(); width];
        full[..n].clone_from_slice(&ints[..n]);
        full[rhs] = ints[n].clone();
        rows.push(full);
    }
    for (s, (i, cap)) in uppers.iter().enumerate() {
        let mut row = vec![BigInt::zero(); width];
        row[*i] = BigInt::one();
        row[n + s] = BigInt::one();
        row[rhs] = cap.clone();
        rows.push(row);
    }
    for (r, row) in rows.iter_mut().enumerate() {
        if row[rhs].is_negative() {
            for v in row.iter_mut() {
                *v = -std::mem::take(v);
            }
        }
        row[n + u + r] = BigInt::one();
    }
    // Phase one: minimise the sum of artificials.
    let mut obj = vec![BigInt::zero(); width];
    for row in &rows {
        for k in (0..n + u).chain(std::iter::once(rhs)) {
            obj[k] -= &row[k];
        }
    }
    let basis = (n + u..n + u + m).collect();
    let mut tab = Tableau { rows, obj, basis, d: BigInt::one() };
    tab.optimise(n + u + m);
    if !tab.obj[rhs].is_zero() {
        return None;
    }
    // Drive artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n + u {
            match (0..n + u).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => {
                    tab.pivot(r, j);
                    r += 1;
                }
                None => {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }
    // Phase two: cost 1 on each original variable.
    let mut obj: Vec<BigInt> = (0..width)
        .map(|j| if j < n { tab.d.clone() } else { BigInt::zero() })
        .collect();
    for (row, &bj) in tab.rows.iter().zip(&tab.basis) {
        if bj < n {
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o -= v;
                }
            }
        }
    }
    tab.obj = obj;
    if !tab.optimise(n + u) {
        return None;
    }
    let mut x: Vec<BigRational> = lo.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    for (row, &bj) in tab.rows.iter().zip(&tab.basis) {
        if bj < n {
            x[bj] += BigRational::new(row[rhs].clone(), tab.d.clone());
        }
    }
    Some(x)
}

/// Depth-first branch-and-bound on the first fractional coordinate, trying
/// the rounded-up branch first.
pub(crate) fn nonneg_integer_solution(
    a: &[Vec<BigRational>],
    t: &[BigRational],
    n: usize,
    max_nodes: usize,
) -> IntOutcome {
    let mut lo = vec![BigInt::zero(); n];
    let mut hi = vec![None; n];
    let mut nodes = 0;
    branch(a, t, &mut lo, &mut hi, &mut nodes, max_nodes)
}

fn branch(
    a: &[Vec<BigRational>],
    t: &[BigRational],
    lo: &mut Vec<BigInt>,
    hi: &mut Vec<Option<BigInt>>,
    nodes: &mut usize,
    max_nodes: usize,
) -> IntOutcome {
    *nodes += 1;
    if *nodes > max_nodes {
        return IntOutcome::NodeLimit;
    }
    let Some(x) = lp_min(a, t, lo, hi) else {
        return IntOutcome::Infeasible;
    };
    let Some(i) = x.iter().position(|v| !v.is_integer()) else {
        return IntOutcome::Found(x.into_iter().map(|v| v.to_integer()).collect());
    };
    let fl = x[i].numer().div_floor(x[i].denom());
    let saved = lo[i].clone();
    lo[i] = &fl + 1;
    let up = branch(a, t, lo, hi, nodes, max_nodes);
    lo[i] = saved;
    if up != IntOutcome::Infeasible {
        return up;
    }
    let saved = hi[i].clone();
    hi[i] = Some(fl);
    let down = branch(a, t, lo, hi, nodes, max_nodes);
    hi[i] = saved;
    down
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn vecr(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn simple_feasible() {
        let a = mat(&[&[1, 1, 0], &[0, 1, 1]]);
        let out = nonneg_integer_solution(&a, &vecr(&[2, 3]), 3, 100);
        let IntOutcome::Found(x) = out else { panic!("{out:?}") };
        assert_eq!(&x[0] + &x[1], BigInt::from(2));
        assert_eq!(&x[1] + &x[2], BigInt::from(3));
        assert_eq!(x, ints(&[0, 2, 1]));
    }

    #[test]
    fn negative_rhs_infeasible() {
        let a = mat(&[&[1, 1]]);
        assert_eq!(nonneg_integer_solution(&a, &vecr(&[-1]), 2, 100), IntOutcome::Infeasible);
    }

    #[test]
    fn needs_branching() {
        // 2x + 2y = 3 has rational but no integer solutions.
        let a = mat(&[&[2, 2]]);
        assert_eq!(nonneg_integer_solution(&a, &vecr(&[3]), 2, 100), IntOutcome::Infeasible);
        // 2x + 3y = 7, x + y <= ... forces x = 2, y = 1.
        let a = mat(&[&[2, 3]]);
        assert_eq!(nonneg_integer_solution(&a, &vecr(&[7]), 2, 100), IntOutcome::Found(ints(&[2, 1])));
    }

    #[test]
    fn redundant_rows() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert_eq!(nonneg_integer_solution(&a, &vecr(&[1, 2]), 2, 100), IntOutcome::Found(ints(&[1, 0])));
    }

    #[test]
    fn bounds_respected() {
        let a = mat(&[&[1, 1]]);
        let x = lp_min(&a, &vecr(&[5]), &ints(&[3, 0]), &[None, Some(BigInt::from(1))]).unwrap();
        assert_eq!(&x[0] + &x[1], int(5));
        assert!(x[0] >= int(3) && x[1] <= int(1));
        assert!(lp_min(&a, &vecr(&[5]), &ints(&[0, 0]), &[Some(BigInt::from(1)), Some(BigInt::from(1))]).is_none());
    }
}
