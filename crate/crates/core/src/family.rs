//! Densities of the exponential family and its monomial presentations.
//!
//! Densities are taken with respect to the reference measure: a density `p`
//! is normalized when `sum_x p(x) mu(x) = 1`. Rational parameters give exact
//! rational densities; canonical parameters and limit paths give floating
//! ones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{rational_to_f64, IntMatrix};
use crate::model::{LatticeBasis, ModelMatrix, StateSpace};

/// Normalization tolerance for floating densities.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

/// A vector of numbers that is either exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Exact(v) => v.len(),
            Values::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Values::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Values::Exact(v) => v.iter().map(rational_to_f64).collect(),
            Values::Float(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    states: StateSpace,
    values: Values,
}

impl Density {
    /// Exact density; must be nonnegative and normalized exactly.
    pub fn exact(states: StateSpace, values: Vec<BigRational>) -> Result<Self> {
        check_len(&states, values.len())?;
        if values.iter().any(Signed::is_negative) {
            return Err(Error::InvalidDensity("negative value".into()));
        }
        let mass: BigRational = values
            .iter()
            .zip(states.mu())
            .map(|(p, m)| p * BigRational::from_integer(m.clone()))
            .sum();
        if !mass.is_one() {
            return Err(Error::NotNormalized { mass: mass.to_string() });
        }
        Ok(Density {
            states,
            values: Values::Exact(values),
        })
    }

    /// Floating density; must be nonnegative, finite and normalized within
    /// [`FLOAT_MASS_TOLERANCE`].
    pub fn float(states: StateSpace, values: Vec<f64>) -> Result<Self> {
        check_len(&states, values.len())?;
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidDensity("values must be finite and nonnegative".into()));
        }
        let mass: f64 = values.iter().zip(mu_f64(&states)).map(|(p, m)| p * m).sum();
        if (mass - 1.0).abs() > FLOAT_MASS_TOLERANCE {
            return Err(Error::NotNormalized { mass: mass.to_string() });
        }
        Ok(Density {
            states,
            values: Values::Float(values),
        })
    }

    /// Normalizes nonnegative unnormalized weights against `mu`.
    pub fn from_unnormalized_exact(states: StateSpace, weights: Vec<BigRational>) -> Result<Self> {
        check_len(&states, weights.len())?;
        let total: BigRational = weights
            .iter()
            .zip(states.mu())
            .map(|(w, m)| w * BigRational::from_integer(m.clone()))
            .sum();
        if total.is_zero() {
            return Err(Error::AllMonomialsZero);
        }
        let values = weights.into_iter().map(|w| w / &total).collect();
        Density::exact(states, values)
    }

    pub fn from_unnormalized_float(states: StateSpace, weights: Vec<f64>) -> Result<Self> {
        check_len(&states, weights.len())?;
        let total: f64 = weights.iter().zip(mu_f64(&states)).map(|(w, m)| w * m).sum();
        if total.is_nan() || total <= 0.0 || !total.is_finite() {
            return Err(Error::AllMonomialsZero);
        }
        Density::float(states, weights.into_iter().map(|w| w / total).collect())
    }

    /// Uniform with respect to `mu`: `p(x) = 1 / sum(mu)`.
    pub fn uniform(states: StateSpace) -> Self {
        let p = BigRational::new(BigInt::one(), states.total_mass());
        let n = states.size();
        Density {
            states,
            values: Values::Exact(vec![p; n]),
        }
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        self.values.is_exact()
    }

    pub fn exact_values(&self) -> Option<&[BigRational]> {
        match &self.values {
            Values::Exact(v) => Some(v),
            Values::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.to_f64()
    }

    /// States with positive value, ascending.
    pub fn support(&self) -> Vec<usize> {
        match &self.values {
            Values::Exact(v) => v
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .map(|(i, _)| i)
                .collect(),
            Values::Float(v) => v.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(i, _)| i).collect(),
        }
    }

    pub fn has_full_support(&self) -> bool {
        self.support().len() == self.states.size()
    }

    /// Conditional density on `states` (sorted indices), renormalized.
    pub fn condition_on(&self, states: &[usize]) -> Result<Density> {
        let sub = self.states.restrict(states)?;
        match &self.values {
            Values::Exact(v) => Density::from_unnormalized_exact(sub, states.iter().map(|&s| v[s].clone()).collect()),
            Values::Float(v) => Density::from_unnormalized_float(sub, states.iter().map(|&s| v[s]).collect()),
        }
    }

    /// Total-variation distance `1/2 sum |p - q| mu`.
    pub fn total_variation(&self, other: &Density) -> f64 {
        assert_eq!(
            self.states.size(),
            other.states.size(),
            "total_variation: state spaces differ"
        );
        let (a, b) = (self.to_f64(), other.to_f64());
        0.5 * a
            .iter()
            .zip(&b)
            .zip(mu_f64(&self.states))
            .map(|((p, q), m)| (p - q).abs() * m)
            .sum::<f64>()
    }

    /// Probability weights `p(x) mu(x)`; these are the convex weights that
    /// exhibit the mean parameters as a point of the convex support.
    pub fn probabilities(&self) -> Values {
        match &self.values {
            Values::Exact(v) => Values::Exact(
                v.iter()
                    .zip(self.states.mu())
                    .map(|(p, m)| p * BigRational::from_integer(m.clone()))
                    .collect(),
            ),
            Values::Float(v) => Values::Float(v.iter().zip(mu_f64(&self.states)).map(|(p, m)| p * m).collect()),
        }
    }
}

fn check_len(states: &StateSpace, len: usize) -> Result<()> {
    if states.size() != len {
        return Err(Error::DimensionMismatch {
            expected: states.size(),
            found: len,
        });
    }
    Ok(())
}

pub(crate) fn mu_f64(states: &StateSpace) -> Vec<f64> {
    states
        .mu()
        .iter()
        .map(|m| m.to_f64().unwrap_or(f64::INFINITY))
        .collect()
}

/// Canonical parameters, one per model row.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaParam(pub Vec<f64>);

impl ThetaParam {
    pub fn zeros(m: usize) -> Self {
        ThetaParam(vec![0.0; m])
    }

    fn check(&self, model: &ModelMatrix) -> Result<()> {
        if self.0.len() != model.num_rows() {
            return Err(Error::DimensionMismatch {
                expected: model.num_rows(),
                found: self.0.len(),
            });
        }
        if self.0.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("theta must be finite".into()));
        }
        Ok(())
    }
}

/// Nonnegative monomial parameters, one per row of the exponent matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaParam(pub Vec<BigRational>);

impl ZetaParam {
    pub fn from_i64(v: &[i64]) -> Self {
        ZetaParam(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }
}

/// Expectations of the canonical statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanParam(pub Values);

/// `theta^T T(x)` for every state.
pub(crate) fn linear_scores(model: &ModelMatrix, theta: &[f64]) -> Vec<f64> {
    let a = model.matrix();
    (0..model.num_states())
        .map(|x| {
            theta
                .iter()
                .enumerate()
                .map(|(j, t)| t * a.get(j, x).to_f64().unwrap_or(f64::NAN))
                .sum()
        })
        .collect()
}

/// Normalizes `exp(score(x))` against `mu` in log space.
pub(crate) fn gibbs_from_scores(states: &StateSpace, scores: &[f64]) -> Result<Density> {
    let mu = mu_f64(states);
    let logw: Vec<f64> = scores.iter().zip(&mu).map(|(s, m)| s + m.ln()).collect();
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = logw.iter().map(|l| (l - max).exp()).sum();
    let log_z = max + total.ln();
    let values = scores.iter().map(|s| (s - log_z).exp()).collect::<Vec<_>>();
    Density::from_unnormalized_float(states.clone(), values)
}

/// `psi(theta) = log sum_x exp(theta^T T(x)) mu(x)`, with max-subtraction.
pub fn log_partition(model: &ModelMatrix, theta: &ThetaParam) -> Result<f64> {
    theta.check(model)?;
    let scores = linear_scores(model, &theta.0);
    let logw: Vec<f64> = scores
        .iter()
        .zip(mu_f64(model.states()))
        .map(|(s, m)| s + m.ln())
        .collect();
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(max + logw.iter().map(|l| (l - max).exp()).sum::<f64>().ln())
}

/// `p(x; theta) = exp(theta^T T(x) - psi(theta))`.
pub fn density_theta(model: &ModelMatrix, theta: &ThetaParam) -> Result<Density> {
    theta.check(model)?;
    gibbs_from_scores(model.states(), &linear_scores(model, &theta.0))
}

fn check_exponents(mono: &IntMatrix, states: &StateSpace, params: usize) -> Result<()> {
    if mono.cols() != states.size() {
        return Err(Error::DimensionMismatch {
            expected: states.size(),
            found: mono.cols(),
        });
    }
    if params != mono.rows() {
        return Err(Error::DimensionMismatch {
            expected: mono.rows(),
            found: params,
        });
    }
    for r in 0..mono.rows() {
        if mono.row(r).iter().any(Signed::is_negative) {
            return Err(Error::InvalidModel("monomial exponents must be nonnegative".into()));
        }
    }
    Ok(())
}

/// Exact monomial density `p(x) ∝ prod_{j : e_j(x) > 0} zeta_j^{e_j(x)}`,
/// normalized against `mu`. A zero parameter removes exactly the states
/// where its exponent is positive.
pub fn density_zeta(mono: &IntMatrix, states: &StateSpace, zeta: &ZetaParam) -> Result<Density> {
    check_exponents(mono, states, zeta.0.len())?;
    if zeta.0.iter().any(Signed::is_negative) {
        return Err(Error::InvalidParameter("zeta must be nonnegative".into()));
    }
    let weights = (0..states.size())
        .map(|x| {
            let mut w = BigRational::one();
            for (j, z) in zeta.0.iter().enumerate() {
                let e = mono.get(j, x);
                if e.is_zero() {
                    continue;
                }
                let e = e
                    .to_i32()
                    .ok_or(Error::Overflow("raising zeta to a monomial exponent"))?;
                w *= num_traits::pow::Pow::pow(z, e);
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    Density::from_unnormalized_exact(states.clone(), weights)
}

/// Floating counterpart of [`density_zeta`], for irrational parameters.
pub fn density_zeta_float(mono: &IntMatrix, states: &StateSpace, zeta: &[f64]) -> Result<Density> {
    check_exponents(mono, states, zeta.len())?;
    if zeta.iter().any(|z| !z.is_finite() || *z < 0.0) {
        return Err(Error::InvalidParameter("zeta must be finite and nonnegative".into()));
    }
    // log space so that large exponents do not overflow
    let mut scores = vec![0.0f64; states.size()];
    let mut alive = vec![true; states.size()];
    for (x, (s, a)) in scores.iter_mut().zip(alive.iter_mut()).enumerate() {
        for (j, z) in zeta.iter().enumerate() {
            let e = mono.get(j, x).to_f64().unwrap_or(f64::INFINITY);
            if e == 0.0 {
                continue;
            }
            if *z == 0.0 {
                *a = false;
            } else {
                *s += e * z.ln();
            }
        }
    }
    if !alive.iter().any(|&a| a) {
        return Err(Error::AllMonomialsZero);
    }
    let max = scores
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(s, _)| *s)
        .fold(f64::NEG_INFINITY, f64::max);
    let weights = scores
        .iter()
        .zip(&alive)
        .map(|(s, &a)| if a { (s - max).exp() } else { 0.0 })
        .collect();
    Density::from_unnormalized_float(states.clone(), weights)
}

/// `eta_j = sum_x T_j(x) p(x) mu(x)`; exact for exact densities.
pub fn mean_parameters(model: &ModelMatrix, p: &Density) -> Result<MeanParam> {
    check_len(model.states(), p.states().size())?;
    let a = model.matrix();
    Ok(MeanParam(match p.probabilities() {
        Values::Exact(w) => Values::Exact(
            (0..model.num_rows())
                .map(|j| {
                    w.iter()
                        .enumerate()
                        .map(|(x, wx)| wx * BigRational::from_integer(a.get(j, x).clone()))
                        .sum()
                })
                .collect(),
        ),
        Values::Float(w) => Values::Float(
            (0..model.num_rows())
                .map(|j| {
                    w.iter()
                        .enumerate()
                        .map(|(x, wx)| wx * a.get(j, x).to_f64().unwrap_or(f64::NAN))
                        .sum()
                })
                .collect(),
        ),
    }))
}

/// Checks `prod p^{w+} = prod p^{w-}` exactly for every generator of the
/// kernel (exponents scaled by `mu`), with `0^0 = 1`.
pub fn check_implicit(p: &Density, kernel: &LatticeBasis) -> Result<bool> {
    let values = p.exact_values().ok_or(Error::NotExact)?;
    if kernel.num_states() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: kernel.num_states(),
            found: values.len(),
        });
    }
    for w in kernel.exponent_vectors() {
        let mut plus = BigRational::one();
        let mut minus = BigRational::one();
        for (e, v) in w.iter().zip(values) {
            if e.is_zero() {
                continue;
            }
            let k = e.abs().to_i32().ok_or(Error::Overflow("evaluating a binomial"))?;
            let term = num_traits::pow::Pow::pow(v, k);
            if e.is_positive() {
                plus *= term;
            } else {
                minus *= term;
            }
        }
        if plus != minus {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The family conditioned on `subset`: columns restricted, measure restricted.
pub fn trace_model(model: &ModelMatrix, subset: &[usize]) -> Result<ModelMatrix> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut states = subset.to_vec();
    states.sort_unstable();
    states.dedup();
    let sub = model.states().restrict(&states)?;
    let a = model.matrix();
    let rows = (0..model.num_rows())
        .map(|j| states.iter().map(|&x| a.get(j, x).clone()).collect())
        .collect();
    ModelMatrix::new(
        sub,
        IntMatrix::from_rows(rows, states.len()),
        Some(model.row_names().to_vec()),
    )
}
