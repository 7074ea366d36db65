//! State spaces, model matrices and the lattice structure they induce.
//!
//! A [`ModelMatrix`] stores the unweighted statistics `T_j(x)` with one
//! column per state. The reference measure is applied only where the
//! orthogonality relations need it, in [`kernel_basis`].

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{integer_kernel, rational_nullspace, rref, solve_in_rowspan, IntMatrix, RatVector};

/// Finite state space with labels and a positive integer reference measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
    mu: Vec<BigInt>,
}

impl StateSpace {
    pub fn new(labels: Vec<String>, mu: Vec<BigInt>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidStateSpace("no states".into()));
        }
        if mu.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: mu.len(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidStateSpace(format!("duplicate label {l:?}")));
            }
        }
        if let Some(bad) = mu.iter().find(|m| *m < &BigInt::one()) {
            return Err(Error::InvalidStateSpace(format!(
                "reference measure must be >= 1, found {bad}"
            )));
        }
        Ok(StateSpace { labels, mu })
    }

    /// Unit reference measure.
    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, vec![BigInt::one(); n])
    }

    /// States labelled `x1 .. xn` with unit measure.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::uniform((1..=n).map(|i| format!("x{i}")).collect())
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mu(&self) -> &[BigInt] {
        &self.mu
    }

    pub fn total_mass(&self) -> BigInt {
        self.mu.iter().sum()
    }

    pub fn has_unit_measure(&self) -> bool {
        self.mu.iter().all(One::is_one)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sub-space on the given (sorted, distinct) state indices.
    pub fn restrict(&self, states: &[usize]) -> Result<StateSpace> {
        if states.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = states.iter().find(|&&s| s >= self.size()) {
            return Err(Error::StateOutOfRange(bad));
        }
        Ok(StateSpace {
            labels: states.iter().map(|&s| self.labels[s].clone()).collect(),
            mu: states.iter().map(|&s| self.mu[s].clone()).collect(),
        })
    }
}

/// Integer matrix of canonical statistics: rows are statistics, columns are
/// states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelMatrix {
    states: StateSpace,
    matrix: IntMatrix,
    row_names: Vec<String>,
}

impl ModelMatrix {
    /// Row names default to `T1 .. Tm`.
    pub fn new(states: StateSpace, matrix: IntMatrix, row_names: Option<Vec<String>>) -> Result<Self> {
        if matrix.cols() != states.size() {
            return Err(Error::DimensionMismatch {
                expected: states.size(),
                found: matrix.cols(),
            });
        }
        if matrix.rows() == 0 {
            return Err(Error::InvalidModel("model matrix has no rows".into()));
        }
        let row_names = match row_names {
            Some(names) => {
                if names.len() != matrix.rows() {
                    return Err(Error::DimensionMismatch {
                        expected: matrix.rows(),
                        found: names.len(),
                    });
                }
                let mut seen = HashSet::new();
                for name in &names {
                    if !seen.insert(name.as_str()) {
                        return Err(Error::InvalidModel(format!("duplicate row name {name:?}")));
                    }
                }
                names
            }
            None => (1..=matrix.rows()).map(|j| format!("T{j}")).collect(),
        };
        Ok(ModelMatrix {
            states,
            matrix,
            row_names,
        })
    }

    pub fn from_i64_rows(states: StateSpace, rows: &[Vec<i64>], row_names: Option<Vec<String>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != states.size()) {
            return Err(Error::InvalidModel("row length differs from state count".into()));
        }
        Self::new(states, IntMatrix::from_i64_rows(rows), row_names)
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    /// Number of statistics.
    pub fn num_rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of states.
    pub fn num_states(&self) -> usize {
        self.states.size()
    }

    /// The statistic vector `T(x)`.
    pub fn statistic(&self, x: usize) -> Vec<BigInt> {
        self.matrix.column(x)
    }

    pub fn has_constant_in_rowspan(&self) -> bool {
        let ones = RatVector(vec![BigRational::one(); self.num_states()]);
        solve_in_rowspan(&ones, &self.matrix).is_some()
    }

    /// The model matrix with a constant row stacked on top, weighted
    /// columnwise by the reference measure: entry `(j, x)` is `T_j(x) mu(x)`
    /// with `T_0 = 1`.
    pub fn weighted_with_constant(&self) -> IntMatrix {
        let n = self.num_states();
        let mut rows = Vec::with_capacity(self.num_rows() + 1);
        rows.push(self.states.mu().to_vec());
        for j in 0..self.num_rows() {
            rows.push(
                self.matrix
                    .row(j)
                    .iter()
                    .zip(self.states.mu())
                    .map(|(t, m)| t * m)
                    .collect(),
            );
        }
        IntMatrix::from_rows(rows, n)
    }
}

/// Saturated integer kernel of the weighted matrix `[T_j(x) mu(x)]`,
/// constant row included. Columns are the lattice generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    basis: IntMatrix,
    weighted: bool,
    mu: Vec<BigInt>,
}

impl LatticeBasis {
    /// A basis given directly, with unit measure.
    pub fn from_columns(columns: &[Vec<BigInt>], n: usize) -> Self {
        LatticeBasis {
            basis: IntMatrix::from_columns(columns, n),
            weighted: false,
            mu: vec![BigInt::one(); n],
        }
    }

    pub fn from_i64_columns(columns: &[Vec<i64>], n: usize) -> Self {
        let cols: Vec<Vec<BigInt>> = columns
            .iter()
            .map(|c| c.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_columns(&cols, n)
    }

    /// `n x l` matrix whose columns are the kernel generators.
    pub fn matrix(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn mu(&self) -> &[BigInt] {
        &self.mu
    }

    pub fn num_states(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        self.basis.column_vecs()
    }

    /// Exponent vectors of the binomial equations: each generator `w`
    /// multiplied pointwise by `mu`. These span the kernel of the unweighted
    /// constant-adjoined model matrix; with unit measure they are the
    /// generators themselves.
    pub fn exponent_vectors(&self) -> Vec<Vec<BigInt>> {
        self.columns()
            .into_iter()
            .map(|w| w.iter().zip(&self.mu).map(|(a, m)| a * m).collect())
            .collect()
    }
}

/// Prepends a constant row named `I` when the all-ones vector is not already
/// a rational combination of the rows.
pub fn ensure_constant_row(model: &ModelMatrix) -> ModelMatrix {
    if model.has_constant_in_rowspan() {
        return model.clone();
    }
    let n = model.num_states();
    let mut rows = vec![vec![BigInt::one(); n]];
    rows.extend(model.matrix().row_vecs());
    let mut name = String::from("I");
    while model.row_names().contains(&name) {
        name.push('\'');
    }
    let mut names = vec![name];
    names.extend(model.row_names().iter().cloned());
    ModelMatrix::new(model.states().clone(), IntMatrix::from_rows(rows, n), Some(names))
        .expect("prepending a fresh row keeps the model valid")
}

/// Shifts every row with a negative entry by `-min(row)` times the constant
/// so the matrix becomes nonnegative. Requires the constant in the row span,
/// otherwise the shift would change the model.
pub fn nonnegative_shift(model: &ModelMatrix) -> Result<ModelMatrix> {
    if !model.has_constant_in_rowspan() {
        return Err(Error::ConstantNotInRowSpan);
    }
    let n = model.num_states();
    let rows: Vec<Vec<BigInt>> = model
        .matrix()
        .row_vecs()
        .into_iter()
        .map(|row| {
            let min = row.iter().min().cloned().unwrap_or_else(BigInt::zero);
            if min.is_negative() {
                row.into_iter().map(|v| v - &min).collect()
            } else {
                row
            }
        })
        .collect();
    ModelMatrix::new(
        model.states().clone(),
        IntMatrix::from_rows(rows, n),
        Some(model.row_names().to_vec()),
    )
}

/// Saturated primitive integer kernel of `[T_j(x) mu(x)]` with `T_0 = 1`.
pub fn kernel_basis(model: &ModelMatrix) -> LatticeBasis {
    LatticeBasis {
        basis: integer_kernel(&model.weighted_with_constant()),
        weighted: true,
        mu: model.states().mu().to_vec(),
    }
}

/// Rational basis, in reduced echelon form, of the coefficient vectors `c`
/// for which `c^T A` is constant over the states.
pub fn confounding_space(model: &ModelMatrix) -> Vec<RatVector> {
    let m = model.num_rows();
    let a = model.matrix();
    // unknowns (c_1..c_m, alpha); one equation per state
    let system: Vec<Vec<BigRational>> = (0..model.num_states())
        .map(|x| {
            let mut row: Vec<BigRational> = (0..m).map(|j| BigRational::from_integer(a.get(j, x).clone())).collect();
            row.push(-BigRational::one());
            row
        })
        .collect();
    let mut coeffs: Vec<Vec<BigRational>> = rational_nullspace(&system, m + 1)
        .into_iter()
        .map(|v| v.0[..m].to_vec())
        .collect();
    let pivots = rref(&mut coeffs);
    coeffs.truncate(pivots.len());
    coeffs.into_iter().map(RatVector).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{combine_rows, hermite_normal_form};
    use crate::models::{four_cycle, independence_2x2, markov_chain};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn state_space_rejects_bad_input() {
        assert!(StateSpace::uniform(vec![]).is_err());
        assert!(StateSpace::uniform(vec!["a".into(), "a".into()]).is_err());
        assert!(StateSpace::new(vec!["a".into()], ints(&[0])).is_err());
        assert!(StateSpace::new(vec!["a".into()], ints(&[1, 1])).is_err());
    }

    #[test]
    fn row_names_default() {
        let m = ModelMatrix::from_i64_rows(StateSpace::numbered(2).unwrap(), &[vec![1, 2], vec![0, 1]], None).unwrap();
        assert_eq!(m.row_names(), &["T1".to_string(), "T2".to_string()]);
        let dup = ModelMatrix::from_i64_rows(
            StateSpace::numbered(2).unwrap(),
            &[vec![1, 2], vec![0, 1]],
            Some(vec!["a".into(), "a".into()]),
        );
        assert!(dup.is_err());
    }

    #[test]
    fn constant_row_prepended_when_missing() {
        let m = ModelMatrix::from_i64_rows(StateSpace::numbered(2).unwrap(), &[vec![1, 2]], None).unwrap();
        let e = ensure_constant_row(&m);
        assert_eq!(e.num_rows(), 2);
        assert_eq!(e.matrix().row(0), ints(&[1, 1]).as_slice());
        assert_eq!(e.row_names()[0], "I");
        assert_eq!(ensure_constant_row(&e), e);
    }

    #[test]
    fn constant_row_kept_for_builtin_models() {
        let fc = four_cycle();
        assert_eq!(ensure_constant_row(&fc), fc);
        let mc = markov_chain(3).unwrap();
        assert_eq!(ensure_constant_row(&mc), mc);
        // (1 - X0) + X0 = 1
        let ones = RatVector(vec![BigRational::one(); mc.num_states()]);
        let c = solve_in_rowspan(&ones, mc.matrix()).unwrap();
        assert_eq!(combine_rows(&c, mc.matrix()), ones);
    }

    #[test]
    fn shift_four_cycle_to_zero_two() {
        let fc = four_cycle();
        let s = nonnegative_shift(&fc).unwrap();
        assert_eq!(s.matrix().row(0), fc.matrix().row(0));
        for j in 1..9 {
            for x in 0..16 {
                let v = s.matrix().get(j, x);
                assert!(v == &BigInt::zero() || v == &BigInt::from(2));
                assert_eq!(v, &(fc.matrix().get(j, x) + 1));
            }
        }
        // spans agree both ways
        for j in 0..9 {
            assert!(solve_in_rowspan(&RatVector::from_ints(s.matrix().row(j)), fc.matrix()).is_some());
            assert!(solve_in_rowspan(&RatVector::from_ints(fc.matrix().row(j)), s.matrix()).is_some());
        }
        let (h1, _) = hermite_normal_form(&kernel_basis(&fc).matrix().transpose());
        let (h2, _) = hermite_normal_form(&kernel_basis(&s).matrix().transpose());
        assert_eq!(h1, h2);
    }

    #[test]
    fn shift_is_noop_on_nonnegative() {
        let ind = independence_2x2();
        assert_eq!(nonnegative_shift(&ind).unwrap(), ind);
        let mc = markov_chain(2).unwrap();
        assert_eq!(nonnegative_shift(&mc).unwrap(), mc);
    }

    #[test]
    fn shift_requires_constant() {
        let m = ModelMatrix::from_i64_rows(StateSpace::numbered(2).unwrap(), &[vec![-1, 2]], None).unwrap();
        assert_eq!(nonnegative_shift(&m), Err(Error::ConstantNotInRowSpan));
    }

    #[test]
    fn independence_kernel() {
        let k = kernel_basis(&independence_2x2());
        assert!(k.is_weighted());
        assert_eq!(k.dim(), 1);
        let col = k.columns().remove(0);
        assert!(col == ints(&[1, -1, -1, 1]) || col == ints(&[-1, 1, 1, -1]));
    }

    #[test]
    fn full_rank_square_model_has_trivial_kernel() {
        let m = ModelMatrix::from_i64_rows(
            StateSpace::numbered(3).unwrap(),
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            None,
        )
        .unwrap();
        assert_eq!(kernel_basis(&m).dim(), 0);
    }

    #[test]
    fn weighted_kernel_respects_measure() {
        let states = StateSpace::new(vec!["a".into(), "b".into(), "c".into()], ints(&[1, 2, 3])).unwrap();
        let m = ModelMatrix::from_i64_rows(states, &[vec![0, 1, 2]], None).unwrap();
        let k = kernel_basis(&m);
        let w = m.weighted_with_constant();
        assert!(w.mul(k.matrix()).is_zero());
        // exponent vectors live in the unweighted kernel
        let unweighted = ensure_constant_row(&m);
        for e in k.exponent_vectors() {
            assert!(unweighted.matrix().mul_vec(&e).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn markov_confounding() {
        for steps in 2..=4 {
            let basis = confounding_space(&markov_chain(steps).unwrap());
            assert_eq!(
                basis,
                vec![
                    RatVector::from_i64(&[1, 1, 0, 0, 0, 0]),
                    RatVector::from_i64(&[0, 0, 1, 1, 1, 1]),
                ]
            );
        }
    }

    #[test]
    fn confounding_empty_without_constant() {
        let m = ModelMatrix::from_i64_rows(StateSpace::numbered(3).unwrap(), &[vec![0, 1, 2]], None).unwrap();
        assert!(confounding_space(&m).is_empty());
    }
}
