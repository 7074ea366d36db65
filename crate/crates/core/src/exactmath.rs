//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; there is no floating
//! point in this module. The three workhorses are the row-style Hermite normal
//! form, the saturated integer kernel and rational row-span solving.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed so that a matrix with no
    /// rows still knows its width.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row in IntMatrix::from_rows");
            data.extend(row);
        }
        IntMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
            cols,
        )
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column in IntMatrix::from_columns");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "IntMatrix index out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "IntMatrix index out of bounds");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "IntMatrix::mul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "IntMatrix::mul_vec dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Entries as `i64`, or `None` if any entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row[target] -= q * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = self.data[source * self.cols + c].clone();
            if !s.is_zero() {
                self.data[target * self.cols + c] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Vector of canonicalized rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    pub fn zeros(n: usize) -> Self {
        RatVector(vec![BigRational::zero(); n])
    }

    pub fn from_ints(v: &[BigInt]) -> Self {
        RatVector(v.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn from_i64(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Smallest positive integer multiple with integer entries, divided by the
    /// gcd of the result so it is primitive. The zero vector maps to zeros.
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
        make_primitive(ints)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Divides an integer vector by the gcd of its entries. Zero stays zero.
pub fn make_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * M = H`, `U`
/// unimodular, `H` in echelon form with positive pivots and the entries above
/// each pivot reduced into `[0, pivot)`. Zero rows of `H` are at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        if pivot_row == rows {
            break;
        }
        let mut found = false;
        loop {
            // smallest nonzero |entry| at or below pivot_row limits growth
            let best = (pivot_row..rows)
                .filter(|&r| !h.get(r, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(best) = best else { break };
            found = true;
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let pivot = h.get(pivot_row, col).clone();
            let mut clean = true;
            for r in pivot_row + 1..rows {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = h.get(r, col).div_floor(&pivot);
                h.sub_row_multiple(r, pivot_row, &q);
                u.sub_row_multiple(r, pivot_row, &q);
                if !h.get(r, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h.get(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.get(r, col).div_floor(&pivot);
            h.sub_row_multiple(r, pivot_row, &q);
            u.sub_row_multiple(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Number of nonzero rows of a matrix already in echelon form.
fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows())
        .take_while(|&r| h.row(r).iter().any(|x| !x.is_zero()))
        .count()
}

/// Basis of the saturated integer kernel `{y in Z^cols : M y = 0}`, returned
/// as the columns of a `cols x (cols - rank)` matrix.
///
/// The rows of the unimodular transform of `HNF(M^T)` that hit zero rows span
/// the kernel lattice exactly; they are then brought into Hermite form so the
/// output does not depend on elimination order.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let (h, u) = hermite_normal_form(&m.transpose());
    let r = echelon_rank(&h);
    let kernel_rows: Vec<Vec<BigInt>> = (r..n).map(|i| u.row(i).to_vec()).collect();
    if kernel_rows.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    let (reduced, _) = hermite_normal_form(&IntMatrix::from_rows(kernel_rows, n));
    reduced.transpose()
}

/// Reduced row echelon form over Q. Returns the pivot columns.
pub fn rref(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(sel) = (pr..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(pr, sel);
        let inv = a[pr][c].recip();
        for v in a[pr].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = a[pr].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == pr || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

pub fn rank(m: &IntMatrix) -> usize {
    let mut a = to_rational_rows(m);
    rref(&mut a).len()
}

/// Basis of the rational null space `{y : A y = 0}` for a rational matrix
/// given by rows with `cols` columns, one vector per free column.
pub fn rational_nullspace(a: &[Vec<BigRational>], cols: usize) -> Vec<RatVector> {
    let mut work = a.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = RatVector::zeros(cols);
            v.0[f] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v.0[p] = -work[row][f].clone();
            }
            v
        })
        .collect()
}

/// Finds `c` with `c^T M = v^T`, or `None` when `v` is outside the rational
/// row span of `M`. Free coordinates are set to zero, so the answer is the
/// unique one whenever the rows of `M` are independent.
pub fn solve_in_rowspan(v: &RatVector, m: &IntMatrix) -> Option<RatVector> {
    assert_eq!(v.len(), m.cols(), "solve_in_rowspan: length mismatch");
    let k = m.rows();
    // system M^T c = v, augmented
    let mut aug: Vec<Vec<BigRational>> = (0..m.cols())
        .map(|x| {
            let mut row: Vec<BigRational> = (0..k).map(|i| BigRational::from_integer(m.get(i, x).clone())).collect();
            row.push(v.0[x].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut c = RatVector::zeros(k);
    for (row, &p) in pivots.iter().enumerate() {
        c.0[p] = aug[row][k].clone();
    }
    Some(c)
}

/// `c^T M` as a rational vector.
pub fn combine_rows(c: &RatVector, m: &IntMatrix) -> RatVector {
    assert_eq!(c.len(), m.rows(), "combine_rows: length mismatch");
    let mut out = RatVector::zeros(m.cols());
    for (i, ci) in c.0.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (x, o) in out.0.iter_mut().enumerate() {
            let a = m.get(i, x);
            if !a.is_zero() {
                *o += ci * BigRational::from_integer(a.clone());
            }
        }
    }
    out
}

/// Determinant via fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.row_vecs();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(sel) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, sel);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..h.rows() {
            let lead = (0..h.cols()).find(|&c| !h.get(r, c).is_zero());
            match lead {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last_pivot.is_some_and(|p| c <= p) {
                        return false;
                    }
                    let p = h.get(r, c);
                    if !p.is_positive() {
                        return false;
                    }
                    for above in 0..r {
                        let e = h.get(above, c);
                        if e.is_negative() || e >= p {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity_is_fixed() {
        let id = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_two_by_two() {
        let m = im(&[vec![2, 4], vec![1, 3]]);
        let (h, u) = hermite_normal_form(&m);
        // (1,3) reduces modulo the second pivot to (1,1)
        assert_eq!(h, im(&[vec![1, 1], vec![0, 2]]));
        assert!(is_hnf(&h));
        assert_eq!(u.mul(&m), h);
        assert_eq!(determinant(&u).abs(), BigInt::one());
    }

    #[test]
    fn hnf_single_row_pivot_is_gcd() {
        let m = im(&[vec![6, 10, 15]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h.get(0, 0), &BigInt::from(6));
        // one row: U = [±1], the pivot is the leading entry itself
        assert_eq!(u.mul(&m), h);
        // as a column the pivot is the gcd
        let (hc, uc) = hermite_normal_form(&m.transpose());
        assert_eq!(hc.get(0, 0), &BigInt::one());
        assert!(hc.get(1, 0).is_zero() && hc.get(2, 0).is_zero());
        assert_eq!(uc.mul(&m.transpose()), hc);
        assert!(is_hnf(&hc));
    }

    #[test]
    fn hnf_rank_deficient() {
        let m = im(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let (h, u) = hermite_normal_form(&m);
        assert!(is_hnf(&h));
        assert_eq!(u.mul(&m), h);
        assert_eq!(determinant(&u).abs(), BigInt::one());
        assert!(h.row(2).iter().all(Zero::is_zero));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = integer_kernel(&IntMatrix::identity(4));
        assert_eq!((k.rows(), k.cols()), (4, 0));
    }

    #[test]
    fn kernel_of_independence_model() {
        let m = im(&[vec![1, 1, 1, 1], vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        let col: Vec<i64> = k.column(0).iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(col == vec![1, -1, -1, 1] || col == vec![-1, 1, 1, -1]);
    }

    #[test]
    fn kernel_is_saturated_for_scaled_rows() {
        // 2x + 4y = 0 has kernel generated by (2, -1), not (4, -2)
        let m = im(&[vec![2, 4]]);
        let k = integer_kernel(&m);
        let col: Vec<i64> = k.column(0).iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(col == vec![2, -1] || col == vec![-2, 1]);
    }

    #[test]
    fn solve_first_row_gives_unit_vector() {
        let m = im(&[vec![1, 2, 3], vec![0, 1, 1]]);
        let v = RatVector::from_ints(m.row(0));
        let c = solve_in_rowspan(&v, &m).unwrap();
        assert_eq!(c, RatVector::from_i64(&[1, 0]));
    }

    #[test]
    fn solve_rejects_kernel_vector() {
        let m = im(&[vec![1, 1, 1, 1], vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
        let v = RatVector::from_i64(&[1, -1, -1, 1]);
        assert!(solve_in_rowspan(&v, &m).is_none());
    }

    #[test]
    fn solve_with_dependent_rows_still_reproduces_target() {
        let m = im(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]);
        let v = RatVector::from_i64(&[3, 3, -2]);
        let c = solve_in_rowspan(&v, &m).unwrap();
        assert_eq!(combine_rows(&c, &m), v);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&im(&[vec![2, 1], vec![7, 4]])), BigInt::one());
        assert_eq!(
            determinant(&im(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]])),
            BigInt::from(-2)
        );
        assert!(determinant(&im(&[vec![1, 2], vec![2, 4]])).is_zero());
    }

    #[test]
    fn primitive_integer_scaling() {
        let v = RatVector(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
            BigRational::zero(),
        ]);
        assert_eq!(
            v.to_primitive_integer(),
            vec![BigInt::from(2), BigInt::from(-3), BigInt::zero()]
        );
    }
}
