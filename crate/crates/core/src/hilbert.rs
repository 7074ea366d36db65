//! Hilbert basis of the monoid of nonnegative integer vectors orthogonal to
//! a lattice kernel.
//!
//! The monoid `{b in Z^n_+ : b ⟂ K}` is the set of nonnegative solutions of
//! the homogeneous system `K^T b = 0`, so its Hilbert basis is the set of
//! componentwise-minimal nonzero solutions. [`hilbert_basis`] starts from
//! the unit vectors, the basis of the whole orthant, and cuts the cone by one
//! equation at a time with a Pottier-style completion.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::IntMatrix;
use crate::model::LatticeBasis;

/// Cap on the number of search nodes [`brute_force_basis`] may visit.
pub const ENUMERATION_LIMIT: f64 = 1e8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasisSet {
    vectors: Vec<Vec<i64>>,
    kernel: LatticeBasis,
}

impl HilbertBasisSet {
    /// Wraps externally supplied basis vectors after checking they are
    /// nonzero, nonnegative and orthogonal to the kernel. The vectors are
    /// put in canonical order.
    pub fn from_vectors(mut vectors: Vec<Vec<i64>>, kernel: LatticeBasis) -> Result<Self> {
        let rows = constraint_rows(&kernel)?;
        for v in &vectors {
            if v.len() != kernel.num_states() {
                return Err(Error::DimensionMismatch {
                    expected: kernel.num_states(),
                    found: v.len(),
                });
            }
            if v.iter().any(|&x| x < 0) || v.iter().all(|&x| x == 0) {
                return Err(Error::InvalidParameter(
                    "basis vectors must be nonnegative and nonzero".into(),
                ));
            }
            if !is_orthogonal(v, &rows) {
                return Err(Error::InvalidParameter(
                    "basis vector is not orthogonal to the kernel".into(),
                ));
            }
        }
        vectors.sort_by(|a, b| canonical_order(a, b));
        vectors.dedup();
        Ok(HilbertBasisSet { vectors, kernel })
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn kernel(&self) -> &LatticeBasis {
        &self.kernel
    }

    pub fn num_states(&self) -> usize {
        self.kernel.num_states()
    }

    /// States where basis element `j` vanishes.
    pub fn zero_set(&self, j: usize) -> Vec<usize> {
        zero_set(&self.vectors[j])
    }

    /// Basis vectors as the rows of an `l x n` matrix.
    pub fn as_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(
            self.vectors
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            self.num_states(),
        )
    }

    pub fn max_entry(&self) -> i64 {
        self.vectors.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Multipliers expressing `b` over this basis; see [`decompose`].
    pub fn decompose(&self, b: &[i64]) -> Option<Vec<u64>> {
        decompose(b, &self.vectors)
    }
}

pub fn zero_set(v: &[i64]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, &x)| x == 0).map(|(i, _)| i).collect()
}

/// Graded order: smaller total first, ties broken by descending
/// lexicographic order so that `e_1` precedes `e_2`.
pub fn canonical_order(a: &[i64], b: &[i64]) -> Ordering {
    let sa: i64 = a.iter().sum();
    let sb: i64 = b.iter().sum();
    sa.cmp(&sb).then_with(|| b.cmp(a))
}

/// Rows of the homogeneous system `b` must satisfy: one per kernel
/// generator, scaled by the reference measure.
fn constraint_rows(kernel: &LatticeBasis) -> Result<Vec<Vec<i64>>> {
    kernel
        .exponent_vectors()
        .iter()
        .map(|w| {
            w.iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or(Error::Overflow("converting the kernel to machine integers"))
                })
                .collect()
        })
        .collect()
}

fn is_orthogonal(v: &[i64], rows: &[Vec<i64>]) -> bool {
    rows.iter().all(|r| {
        r.iter()
            .zip(v)
            .map(|(&a, &b)| i128::from(a) * i128::from(b))
            .sum::<i128>()
            == 0
    })
}

fn dominates(x: &[i64], s: &[i64]) -> bool {
    x.iter().zip(s).all(|(a, b)| a >= b)
}

/// The full Hilbert basis of `{b in Z^n_+ \ {0} : b ⟂ K}` in canonical order.
pub fn hilbert_basis(kernel: &LatticeBasis) -> Result<HilbertBasisSet> {
    let n = kernel.num_states();
    let mut basis: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut e = vec![0i64; n];
            e[j] = 1;
            e
        })
        .collect();
    for row in constraint_rows(kernel)? {
        basis = cut(basis, &row)?;
        if basis.is_empty() {
            return Err(Error::ConeIsZero);
        }
    }
    if basis.is_empty() {
        return Err(Error::ConeIsZero);
    }
    basis.sort_by(|a, b| canonical_order(a, b));
    Ok(HilbertBasisSet {
        vectors: basis,
        kernel: kernel.clone(),
    })
}

/// A cone element together with the value of the cutting form on it.
#[derive(Clone, Debug)]
struct Lifted {
    v: Vec<i64>,
    t: i64,
}

impl Lifted {
    fn degree(&self) -> i64 {
        self.v.iter().sum()
    }

    /// `self ⊑ other`: below componentwise, and the form value is
    /// sign-compatible and no larger in absolute value.
    fn below(&self, other: &Lifted) -> bool {
        let t_ok = self.t == 0 || (self.t.signum() == other.t.signum() && self.t.abs() <= other.t.abs());
        t_ok && dominates(&other.v, &self.v)
    }

    fn sub(&mut self, h: &Lifted) {
        for (a, b) in self.v.iter_mut().zip(&h.v) {
            *a -= b;
        }
        self.t -= h.t;
    }

    fn is_zero(&self) -> bool {
        self.v.iter().all(|&x| x == 0)
    }
}

fn normal_form(mut s: Lifted, set: &[Lifted]) -> Lifted {
    while let Some(h) = set.iter().find(|h| h.below(&s)) {
        s.sub(h);
        if s.is_zero() {
            break;
        }
    }
    s
}

/// Hilbert basis of `C ∩ {row · x = 0}` from the Hilbert basis of a cone
/// `C` in the nonnegative orthant.
///
/// Completion under the order `⊑` on `(x, row · x)`: every sum of a
/// positive and a negative element is reduced, and irreducible remainders
/// join the set. Afterwards the set holds every `⊑`-minimal element, so the
/// minimal ones with form value zero are the basis of the cut.
fn cut(basis: Vec<Vec<i64>>, row: &[i64]) -> Result<Vec<Vec<i64>>> {
    let lift = |v: Vec<i64>| -> Result<Lifted> {
        let t: Option<i64> = v
            .iter()
            .zip(row)
            .try_fold(0i64, |acc, (&a, &b)| acc.checked_add(a.checked_mul(b)?));
        let t = t.ok_or(Error::Overflow("evaluating a kernel equation"))?;
        Ok(Lifted { v, t })
    };
    let mut set: Vec<Lifted> = basis.into_iter().map(lift).collect::<Result<_>>()?;

    // pairs (positive index, negative index) keyed by the degree of the sum
    let mut queue: BinaryHeap<Reverse<(i64, usize, usize)>> = BinaryHeap::new();
    let push_pairs = |queue: &mut BinaryHeap<Reverse<(i64, usize, usize)>>, set: &[Lifted], i: usize| {
        let x = &set[i];
        for (j, y) in set.iter().enumerate().take(i) {
            if x.t.signum() * y.t.signum() < 0 {
                let (p, q) = if x.t > 0 { (i, j) } else { (j, i) };
                queue.push(Reverse((x.degree() + y.degree(), p, q)));
            }
        }
    };
    for i in 0..set.len() {
        push_pairs(&mut queue, &set, i);
    }

    while let Some(Reverse((degree, _, _))) = queue.peek().copied() {
        // one degree at a time: reduce the batch in parallel against the
        // current set, then admit remainders in order, re-reducing each
        let mut batch = Vec::new();
        while let Some(&Reverse((d, p, q))) = queue.peek() {
            if d != degree {
                break;
            }
            queue.pop();
            batch.push((p, q));
        }
        let snapshot = &set;
        let mut remainders: Vec<Lifted> = batch
            .par_iter()
            .map(|&(p, q)| {
                let v: Option<Vec<i64>> = snapshot[p]
                    .v
                    .iter()
                    .zip(&snapshot[q].v)
                    .map(|(a, b)| a.checked_add(*b))
                    .collect();
                let t = snapshot[p].t.checked_add(snapshot[q].t);
                match (v, t) {
                    (Some(v), Some(t)) => Ok(normal_form(Lifted { v, t }, snapshot)),
                    _ => Err(Error::Overflow("summing Hilbert basis candidates")),
                }
            })
            .filter(|r| r.as_ref().map_or(true, |s| !s.is_zero()))
            .collect::<Result<_>>()?;
        remainders.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.v.cmp(&b.v)));
        for r in remainders {
            let r = normal_form(r, &set);
            if !r.is_zero() {
                set.push(r);
                push_pairs(&mut queue, &set, set.len() - 1);
            }
        }
    }

    let zero: Vec<Vec<i64>> = set.into_iter().filter(|x| x.t == 0).map(|x| x.v).collect();
    Ok(zero
        .iter()
        .filter(|v| !zero.iter().any(|u| u != *v && dominates(v, u)))
        .cloned()
        .collect())
}

/// Independent oracle: enumerates every `b in {0..bound}^n` orthogonal to the
/// kernel and keeps the ones that are not a sum of two enumerated vectors.
///
/// The box is walked depth first, one coordinate at a time; a branch is cut
/// as soon as the remaining coordinates cannot bring some residual back to
/// zero. [`ENUMERATION_LIMIT`] caps the number of visited search nodes.
pub fn brute_force_basis(kernel: &LatticeBasis, bound: u32) -> Result<HilbertBasisSet> {
    brute_force_basis_with_limit(kernel, bound, ENUMERATION_LIMIT)
}

/// [`brute_force_basis`] with an explicit cap on visited search nodes.
pub fn brute_force_basis_with_limit(kernel: &LatticeBasis, bound: u32, limit: f64) -> Result<HilbertBasisSet> {
    if bound == 0 {
        return Err(Error::InvalidBound);
    }
    let n = kernel.num_states();
    let rows = constraint_rows(kernel)?;
    let bound = i128::from(bound);
    // images[x][i]: contribution of one unit at state x to residual i
    let images: Vec<Vec<i128>> = (0..n)
        .map(|x| rows.iter().map(|r| i128::from(r[x])).collect())
        .collect();
    // reach[k][i]: range of residual i over the coordinates x >= k
    let mut reach = vec![vec![(0i128, 0i128); rows.len()]; n + 1];
    for x in (0..n).rev() {
        for i in 0..rows.len() {
            let step = images[x][i] * bound;
            let (lo, hi) = reach[x + 1][i];
            reach[x][i] = (lo + step.min(0), hi + step.max(0));
        }
    }

    let mut walk = BoxWalk {
        images: &images,
        reach: &reach,
        bound,
        limit,
        visited: 0.0,
        x: vec![0; n],
        members: Vec::new(),
    };
    walk.descend(0, &mut vec![0i128; rows.len()])?;
    let mut members = walk.members;

    // v = u + w with u, w enumerated iff some enumerated u != v has u <= v
    // (then w = v - u is in the box and orthogonal). Scanning by total, it is
    // enough to compare against the survivors kept so far.
    members.sort_by(|a, b| canonical_order(a, b));
    let mut survivors: Vec<Vec<i64>> = Vec::new();
    for v in members {
        if !survivors.iter().any(|u| dominates(&v, u)) {
            survivors.push(v);
        }
    }
    if survivors.is_empty() {
        return Err(Error::ConeIsZero);
    }
    Ok(HilbertBasisSet {
        vectors: survivors,
        kernel: kernel.clone(),
    })
}

struct BoxWalk<'a> {
    images: &'a [Vec<i128>],
    reach: &'a [Vec<(i128, i128)>],
    bound: i128,
    limit: f64,
    visited: f64,
    x: Vec<i64>,
    members: Vec<Vec<i64>>,
}

impl BoxWalk<'_> {
    /// Values of coordinate `k` that keep every residual reachable by the
    /// coordinates after it.
    fn feasible_values(&self, k: usize, residual: &[i128]) -> Option<(i128, i128)> {
        let (mut lo, mut hi) = (0i128, self.bound);
        for ((&r, &a), &(rlo, rhi)) in residual.iter().zip(&self.images[k]).zip(&self.reach[k + 1]) {
            // rlo <= -(r + v a) <= rhi
            let (min, max) = (-rhi - r, -rlo - r);
            match a.cmp(&0) {
                Ordering::Equal if min > 0 || max < 0 => return None,
                Ordering::Equal => {}
                Ordering::Greater => {
                    lo = lo.max(div_ceil(min, a));
                    hi = hi.min(div_floor(max, a));
                }
                Ordering::Less => {
                    lo = lo.max(div_ceil(max, a));
                    hi = hi.min(div_floor(min, a));
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn descend(&mut self, k: usize, residual: &mut [i128]) -> Result<()> {
        self.visited += 1.0;
        if self.visited > self.limit {
            return Err(Error::EnumerationTooLarge {
                size: self.visited,
                limit: self.limit,
            });
        }
        if k == self.images.len() {
            if self.x.iter().any(|&v| v > 0) {
                self.members.push(self.x.clone());
            }
            return Ok(());
        }
        let Some((lo, hi)) = self.feasible_values(k, residual) else {
            return Ok(());
        };
        for (r, a) in residual.iter_mut().zip(&self.images[k]) {
            *r += a * lo;
        }
        for v in lo..=hi {
            self.x[k] = v as i64;
            self.descend(k + 1, residual)?;
            for (r, a) in residual.iter_mut().zip(&self.images[k]) {
                *r += a;
            }
        }
        for (r, a) in residual.iter_mut().zip(&self.images[k]) {
            *r -= a * (hi + 1);
        }
        self.x[k] = 0;
        Ok(())
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && (a < 0) != (b < 0) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Nonnegative integer multipliers `alpha` with `sum alpha_j basis_j = b`,
/// or `None` when no such combination exists.
///
/// Exhaustive search: the first positive coordinate of the remainder has to
/// be covered by some basis vector `<=` the remainder. Remainders already
/// shown to be undecomposable are memoized.
pub fn decompose(b: &[i64], basis: &[Vec<i64>]) -> Option<Vec<u64>> {
    if b.iter().any(|&x| x < 0) || basis.iter().any(|v| v.len() != b.len()) {
        return None;
    }
    let mut alpha = vec![0u64; basis.len()];
    let mut dead: HashSet<Vec<i64>> = HashSet::new();
    let mut remainder = b.to_vec();
    if search(&mut remainder, basis, &mut alpha, &mut dead) {
        Some(alpha)
    } else {
        None
    }
}

fn search(remainder: &mut Vec<i64>, basis: &[Vec<i64>], alpha: &mut [u64], dead: &mut HashSet<Vec<i64>>) -> bool {
    let Some(lead) = remainder.iter().position(|&x| x > 0) else {
        return true;
    };
    if dead.contains(remainder.as_slice()) {
        return false;
    }
    for (j, v) in basis.iter().enumerate() {
        if v[lead] == 0 || !dominates(remainder, v) {
            continue;
        }
        for (r, x) in remainder.iter_mut().zip(v) {
            *r -= x;
        }
        alpha[j] += 1;
        if search(remainder, basis, alpha, dead) {
            return true;
        }
        alpha[j] -= 1;
        for (r, x) in remainder.iter_mut().zip(v) {
            *r += x;
        }
    }
    dead.insert(remainder.clone());
    false
}

/// Basis elements that can be dropped from the monomial model without losing
/// a face: those with an empty zero set, and those whose zero set is the
/// intersection of the zero sets of other elements.
pub fn redundant_elements(basis: &HilbertBasisSet) -> Vec<usize> {
    let n = basis.num_states();
    let sets: Vec<Vec<bool>> = basis
        .vectors()
        .iter()
        .map(|v| v.iter().map(|&x| x == 0).collect())
        .collect();
    let mut out = Vec::new();
    for (j, sj) in sets.iter().enumerate() {
        if !sj.iter().any(|&z| z) {
            out.push(j);
            continue;
        }
        let mut meet = vec![true; n];
        let mut any = false;
        for (k, sk) in sets.iter().enumerate() {
            if k == j || !sj.iter().zip(sk).all(|(&a, &b)| !a || b) {
                continue;
            }
            any = true;
            for (m, &b) in meet.iter_mut().zip(sk) {
                *m &= b;
            }
        }
        if any && &meet == sj {
            out.push(j);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::kernel_basis;
    use crate::models::independence_2x2;

    fn independence_kernel() -> LatticeBasis {
        LatticeBasis::from_i64_columns(&[vec![1, -1, -1, 1]], 4)
    }

    fn expected_independence() -> Vec<Vec<i64>> {
        vec![vec![1, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]
    }

    #[test]
    fn empty_kernel_gives_unit_vectors() {
        let k = LatticeBasis::from_columns(&[], 3);
        let hb = hilbert_basis(&k).unwrap();
        assert_eq!(hb.vectors(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let bf = brute_force_basis(&k, 2).unwrap();
        assert_eq!(bf.vectors(), hb.vectors());
    }

    #[test]
    fn independence_basis() {
        let hb = hilbert_basis(&independence_kernel()).unwrap();
        assert_eq!(hb.vectors(), expected_independence().as_slice());
        let from_model = hilbert_basis(&kernel_basis(&independence_2x2())).unwrap();
        assert_eq!(from_model.vectors(), hb.vectors());
        let oracle = brute_force_basis(&independence_kernel(), 3).unwrap();
        assert_eq!(oracle.vectors(), hb.vectors());
    }

    #[test]
    fn zero_cone_is_reported() {
        let k = LatticeBasis::from_i64_columns(&[vec![1, 1]], 2);
        assert_eq!(hilbert_basis(&k), Err(Error::ConeIsZero));
    }

    #[test]
    fn brute_force_guards() {
        assert_eq!(brute_force_basis(&independence_kernel(), 0), Err(Error::InvalidBound));
        let free = LatticeBasis::from_columns(&[], 12);
        assert!(matches!(
            brute_force_basis_with_limit(&free, 2, 1e4),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn decompose_examples() {
        let basis = expected_independence();
        let alpha = decompose(&basis[2], &basis).unwrap();
        assert_eq!(alpha, vec![0, 0, 1, 0]);
        let alpha = decompose(&[2, 1, 1, 0], &basis).unwrap();
        assert_eq!(alpha, vec![1, 1, 0, 0]);
        assert!(decompose(&[1, 0, 0, 0], &basis).is_none());
        assert_eq!(decompose(&[0, 0, 0, 0], &basis), Some(vec![0; 4]));
    }

    #[test]
    fn redundancy_of_independence_basis_is_empty() {
        let hb = hilbert_basis(&independence_kernel()).unwrap();
        assert!(redundant_elements(&hb).is_empty());
    }

    #[test]
    fn constant_element_is_redundant() {
        // kernel (1,-1,0): monoid generated by (1,1,0), (0,0,1)
        let k = LatticeBasis::from_i64_columns(&[vec![1, -1, 0]], 3);
        let hb = hilbert_basis(&k).unwrap();
        assert_eq!(hb.vectors(), &[vec![0, 0, 1], vec![1, 1, 0]]);
        assert!(redundant_elements(&hb).is_empty());
        // an all-ones element alongside others has an empty zero set
        let with_ones = HilbertBasisSet::from_vectors(vec![vec![1, 1, 1], vec![1, 1, 0], vec![0, 0, 1]], k).unwrap();
        let ones = with_ones.vectors().iter().position(|v| v == &vec![1, 1, 1]).unwrap();
        assert_eq!(redundant_elements(&with_ones), vec![ones]);
    }

    #[test]
    fn intersection_redundancy() {
        // zero sets {0,1}, {1,2} and {1}: the last is the meet of the others
        let k = LatticeBasis::from_columns(&[], 3);
        let hb = HilbertBasisSet::from_vectors(vec![vec![0, 0, 1], vec![1, 0, 0], vec![1, 0, 1]], k).unwrap();
        let idx = hb.vectors().iter().position(|v| v == &vec![1, 0, 1]).unwrap();
        assert_eq!(redundant_elements(&hb), vec![idx]);
    }

    #[test]
    fn canonical_order_is_graded_then_descending() {
        let mut v = vec![vec![0, 1, 1], vec![1, 0, 0], vec![0, 0, 1], vec![1, 1, 0]];
        v.sort_by(|a, b| canonical_order(a, b));
        assert_eq!(v, vec![vec![1, 0, 0], vec![0, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]);
    }
}
