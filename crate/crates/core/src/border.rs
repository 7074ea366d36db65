//! The closure of the family: exposed sets with integer certificates,
//! membership decisions for arbitrary densities, Gibbs limit paths and the
//! Hilbert-basis monomial (B-)model.
//!
//! Certificates are integer coefficient vectors over the rows of
//! [`ensure_constant_row`] applied to the model. The functional they define
//! is zero on the exposed set and at least one everywhere else.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{rref, solve_in_rowspan, RatVector};
use crate::family::{
    check_implicit, density_theta, density_zeta, gibbs_from_scores, linear_scores, mu_f64, trace_model, Density,
    ThetaParam, ZetaParam,
};
use crate::hilbert::HilbertBasisSet;
use crate::model::{confounding_space, ensure_constant_row, kernel_basis, ModelMatrix, StateSpace};

/// Residual bound for the log-scale test on floating densities.
pub const LOG_RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Number of steps in the default schedule `beta_k = -2^k, k = 0..=40`.
pub const DEFAULT_SCHEDULE_STEPS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposedSet {
    /// Sorted state indices.
    pub states: Vec<usize>,
    /// Integer coefficients over the constant-adjoined model rows.
    pub certificate: Vec<BigInt>,
    /// Hilbert-basis indices whose zero sets intersect to `states`.
    pub generators: Vec<usize>,
}

impl ExposedSet {
    /// The whole state space with the zero functional.
    pub fn improper(model: &ModelMatrix) -> Self {
        ExposedSet {
            states: (0..model.num_states()).collect(),
            certificate: vec![BigInt::zero(); certificate_len(model)],
            generators: Vec::new(),
        }
    }

    pub fn is_improper(&self) -> bool {
        self.certificate.iter().all(Zero::is_zero)
    }
}

fn certificate_len(model: &ModelMatrix) -> usize {
    ensure_constant_row(model).num_rows()
}

/// Values of the affine functional `certificate^T [1; A]` at every state.
pub fn evaluate_certificate(certificate: &[BigInt], model: &ModelMatrix) -> Result<Vec<BigInt>> {
    let aug = ensure_constant_row(model);
    if certificate.len() != aug.num_rows() {
        return Err(Error::DimensionMismatch {
            expected: aug.num_rows(),
            found: certificate.len(),
        });
    }
    let a = aug.matrix();
    Ok((0..aug.num_states())
        .map(|x| certificate.iter().enumerate().map(|(j, c)| c * a.get(j, x)).sum())
        .collect())
}

/// One exposed set per basis element with a nonempty zero set.
pub fn exposed_sets_from_basis(basis: &HilbertBasisSet, model: &ModelMatrix) -> Result<Vec<ExposedSet>> {
    if basis.num_states() != model.num_states() {
        return Err(Error::DimensionMismatch {
            expected: model.num_states(),
            found: basis.num_states(),
        });
    }
    let aug = ensure_constant_row(model);
    let mut out = Vec::new();
    for (j, b) in basis.vectors().iter().enumerate() {
        let states = basis.zero_set(j);
        if states.is_empty() {
            continue;
        }
        let coeffs = solve_in_rowspan(&RatVector::from_i64(b), aug.matrix()).ok_or(Error::NotInRowSpan)?;
        out.push(ExposedSet {
            states,
            certificate: coeffs.to_primitive_integer(),
            generators: vec![j],
        });
    }
    Ok(out)
}

/// Decides whether `states` is exposed, given the exposed sets of the basis.
///
/// `states` is exposed exactly when it equals the intersection of the basis
/// zero sets containing it; the certificate is then the sum of theirs.
pub fn is_exposed(states: &[usize], basis_sets: &[ExposedSet], model: &ModelMatrix) -> Option<ExposedSet> {
    let n = model.num_states();
    let mut target = vec![false; n];
    for &s in states {
        if s >= n {
            return None;
        }
        target[s] = true;
    }
    if !target.iter().any(|&t| t) {
        return None;
    }
    let mut meet = vec![true; n];
    let mut certificate = vec![BigInt::zero(); certificate_len(model)];
    let mut generators = Vec::new();
    for set in basis_sets {
        let mut member = vec![false; n];
        for &s in &set.states {
            member[s] = true;
        }
        if !target.iter().zip(&member).all(|(&t, &m)| !t || m) {
            continue;
        }
        for (m, &b) in meet.iter_mut().zip(&member) {
            *m &= b;
        }
        for (c, d) in certificate.iter_mut().zip(&set.certificate) {
            *c += d;
        }
        generators.extend(set.generators.iter().copied());
    }
    if meet != target {
        return None;
    }
    generators.sort_unstable();
    generators.dedup();
    Some(ExposedSet {
        states: (0..n).filter(|&x| target[x]).collect(),
        certificate,
        generators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Interior,
    Border,
    Outside,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Interior => "interior",
            VerdictKind::Border => "border",
            VerdictKind::Outside => "outside",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureVerdict {
    pub kind: VerdictKind,
    pub face: Option<ExposedSet>,
    /// Canonical parameters on the support, orthogonal to the confounding
    /// directions of the (trace) model.
    pub theta: Option<ThetaParam>,
}

impl ClosureVerdict {
    fn outside() -> Self {
        ClosureVerdict {
            kind: VerdictKind::Outside,
            face: None,
            theta: None,
        }
    }
}

/// Least-squares fit of `log p = a_0 + theta^T T` on a positive density.
/// Returns `theta` projected off the confounding space and the largest
/// absolute residual. The independent design columns are picked exactly, so
/// the float solve is a full-rank QR.
fn fit_log_linear(model: &ModelMatrix, values: &[f64]) -> (Vec<f64>, f64) {
    let n = model.num_states();
    let m = model.num_rows();
    let a = model.matrix();
    let entry = |x: usize, j: usize| if j == 0 { BigInt::one() } else { a.get(j - 1, x).clone() };
    let mut exact: Vec<Vec<BigRational>> = (0..n)
        .map(|x| (0..=m).map(|j| BigRational::from_integer(entry(x, j))).collect())
        .collect();
    let pivots = rref(&mut exact);
    let design = DMatrix::from_fn(n, pivots.len(), |x, k| entry(x, pivots[k]).to_f64().unwrap_or(f64::NAN));
    let target = DVector::from_iterator(n, values.iter().map(|v| v.ln()));
    let qr = design.clone().qr();
    let coeffs = qr
        .r()
        .solve_upper_triangular(&(qr.q().transpose() * &target))
        .unwrap_or_else(|| DVector::zeros(pivots.len()));
    let residual = (&design * &coeffs - &target).amax();
    let mut solution = vec![0.0; m + 1];
    for (k, &j) in pivots.iter().enumerate() {
        solution[j] = coeffs[k];
    }

    let mut theta: Vec<f64> = solution.iter().skip(1).copied().collect();
    // Gram-Schmidt on the confounding directions, then project them out
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for c in confounding_space(model) {
        let mut v = c.to_f64();
        for u in &ortho {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            ortho.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    for u in &ortho {
        let d: f64 = theta.iter().zip(u).map(|(a, b)| a * b).sum();
        theta.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
    }
    (theta, residual)
}

/// Whether a full-support density belongs to the family of `model`.
fn in_family(q: &Density, model: &ModelMatrix) -> Result<Option<ThetaParam>> {
    let values = q.to_f64();
    let (theta, residual) = fit_log_linear(model, &values);
    let member = if q.is_exact() {
        check_implicit(q, &kernel_basis(model))?
    } else {
        residual <= LOG_RESIDUAL_TOLERANCE
    };
    Ok(member.then_some(ThetaParam(theta)))
}

/// Classifies `q` as interior to the family, on its border (with the face
/// its support exposes), or outside the closure.
pub fn extended_membership(q: &Density, model: &ModelMatrix, basis: &HilbertBasisSet) -> Result<ClosureVerdict> {
    let faces = exposed_sets_from_basis(basis, model)?;
    membership_with_faces(q, model, &faces)
}

/// [`extended_membership`] with the basis exposed sets computed beforehand.
pub fn membership_with_faces(q: &Density, model: &ModelMatrix, faces: &[ExposedSet]) -> Result<ClosureVerdict> {
    if q.states().size() != model.num_states() {
        return Err(Error::DimensionMismatch {
            expected: model.num_states(),
            found: q.states().size(),
        });
    }
    let support = q.support();
    if support.len() == model.num_states() {
        return Ok(match in_family(q, model)? {
            Some(theta) => ClosureVerdict {
                kind: VerdictKind::Interior,
                face: Some(ExposedSet::improper(model)),
                theta: Some(theta),
            },
            None => ClosureVerdict::outside(),
        });
    }
    let Some(face) = is_exposed(&support, faces, model) else {
        return Ok(ClosureVerdict::outside());
    };
    let trace = trace_model(model, &support)?;
    let conditional = q.condition_on(&support)?;
    Ok(match in_family(&conditional, &trace)? {
        Some(theta) => ClosureVerdict {
            kind: VerdictKind::Border,
            face: Some(face),
            theta: Some(theta),
        },
        None => ClosureVerdict::outside(),
    })
}

/// One-dimensional sub-family `p_beta ∝ exp(beta f + theta^T T)` where `f`
/// is the certificate functional of the target face.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsPath {
    base_theta: ThetaParam,
    certificate: Vec<BigInt>,
    schedule: Vec<f64>,
}

impl GibbsPath {
    pub fn new(base_theta: ThetaParam, certificate: Vec<BigInt>, schedule: Vec<f64>) -> Result<Self> {
        if schedule.is_empty() {
            return Err(Error::InvalidSchedule("empty schedule".into()));
        }
        if schedule.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidSchedule("non-finite beta".into()));
        }
        if schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidSchedule("beta must be strictly decreasing".into()));
        }
        Ok(GibbsPath {
            base_theta,
            certificate,
            schedule,
        })
    }

    /// `beta_k = -2^k` for `k = 0..=40`.
    pub fn with_default_schedule(base_theta: ThetaParam, certificate: Vec<BigInt>) -> Result<Self> {
        Self::new(base_theta, certificate, default_schedule())
    }

    pub fn base_theta(&self) -> &ThetaParam {
        &self.base_theta
    }

    pub fn certificate(&self) -> &[BigInt] {
        &self.certificate
    }

    pub fn schedule(&self) -> &[f64] {
        &self.schedule
    }
}

pub fn default_schedule() -> Vec<f64> {
    (0..=DEFAULT_SCHEDULE_STEPS).map(|k| -(2f64.powi(k as i32))).collect()
}

fn functional_f64(path: &GibbsPath, model: &ModelMatrix) -> Result<Vec<f64>> {
    Ok(evaluate_certificate(&path.certificate, model)?
        .iter()
        .map(|v| v.to_f64().unwrap_or(f64::INFINITY))
        .collect())
}

/// The density of the Gibbs sub-model at `beta`.
pub fn gibbs_density(model: &ModelMatrix, path: &GibbsPath, beta: f64) -> Result<Density> {
    if !beta.is_finite() {
        return Err(Error::InvalidParameter("beta must be finite".into()));
    }
    if path.base_theta.0.len() != model.num_rows() {
        return Err(Error::DimensionMismatch {
            expected: model.num_rows(),
            found: path.base_theta.0.len(),
        });
    }
    let f = functional_f64(path, model)?;
    let scores: Vec<f64> = linear_scores(model, &path.base_theta.0)
        .iter()
        .zip(&f)
        .map(|(s, fx)| if *fx == 0.0 { *s } else { s + beta * fx })
        .collect();
    gibbs_from_scores(model.states(), &scores)
}

/// Result of walking a Gibbs path.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitOutcome {
    pub density: Density,
    /// Last beta evaluated.
    pub beta: f64,
    /// Total-variation gap between the last two iterates.
    pub gap: f64,
}

/// Walks the schedule until successive densities are within `tol` in total
/// variation, then zeroes the off-face states below `tol` and renormalizes.
pub fn limit_path(model: &ModelMatrix, path: &GibbsPath, tol: f64) -> Result<LimitOutcome> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let f = functional_f64(path, model)?;
    if f.iter().all(|&v| v == 0.0) {
        return Ok(LimitOutcome {
            density: density_theta(model, &path.base_theta)?,
            beta: 0.0,
            gap: 0.0,
        });
    }
    let mut previous: Option<Density> = None;
    let mut gap = f64::INFINITY;
    let mut last_beta = path.schedule[0];
    for &beta in &path.schedule {
        let current = gibbs_density(model, path, beta)?;
        last_beta = beta;
        if let Some(prev) = &previous {
            gap = prev.total_variation(&current);
            if gap < tol {
                let clipped: Vec<f64> = current
                    .to_f64()
                    .iter()
                    .zip(&f)
                    .map(|(&p, &fx)| if fx > 0.0 && p < tol { 0.0 } else { p })
                    .collect();
                return Ok(LimitOutcome {
                    density: Density::from_unnormalized_float(model.states().clone(), clipped)?,
                    beta,
                    gap,
                });
            }
        }
        previous = Some(current);
    }
    Err(Error::NoConvergence { last_beta, gap })
}

pub fn limit_of_path(model: &ModelMatrix, path: &GibbsPath, tol: f64) -> Result<Density> {
    limit_path(model, path, tol).map(|o| o.density)
}

/// Mass of a density outside a set of states.
pub fn off_face_mass(p: &Density, face: &[usize]) -> f64 {
    let mu = mu_f64(p.states());
    p.to_f64()
        .iter()
        .enumerate()
        .filter(|(x, _)| face.binary_search(x).is_err())
        .map(|(x, v)| v * mu[x])
        .sum()
}

/// Monomial density with the Hilbert basis as exponent rows.
pub fn b_model_density(basis: &HilbertBasisSet, states: &StateSpace, zeta: &ZetaParam) -> Result<Density> {
    density_zeta(&basis.as_matrix(), states, zeta)
}

/// Coefficients of `F_j = 1 - b_j` over the constant-adjoined model rows,
/// one vector per basis element.
pub fn face_indicator_expansions(basis: &HilbertBasisSet, model: &ModelMatrix) -> Result<Vec<RatVector>> {
    let aug = ensure_constant_row(model);
    basis
        .vectors()
        .iter()
        .map(|b| {
            let f = RatVector(
                b.iter()
                    .map(|&v| BigRational::one() - BigRational::from_integer(v.into()))
                    .collect(),
            );
            solve_in_rowspan(&f, aug.matrix()).ok_or(Error::NotInRowSpan)
        })
        .collect()
}

/// Checks a certificate against its set: zero on the set, `>= 1` off it.
pub fn certificate_is_valid(set: &ExposedSet, model: &ModelMatrix) -> Result<bool> {
    let values = evaluate_certificate(&set.certificate, model)?;
    Ok(values.iter().enumerate().all(|(x, v)| {
        if set.states.binary_search(&x).is_ok() {
            v.is_zero()
        } else {
            v.is_positive()
        }
    }))
}
