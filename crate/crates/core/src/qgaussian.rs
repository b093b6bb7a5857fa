//! The q-Gaussian family for `1 < q < 3`: density, normalization, the
//! exceedance probability of `|X|`, the tail-exponent relation and an
//! exact sampler.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::{beta_reg_split, gamma_ratio, hyp2f1, Hyp2F1Args};

/// Below this exceedance probability the closed form `1 - 2 A x F` has
/// lost too many digits and the complementary tail form is used.
const TAIL_SWITCH: f64 = 0.1;

/// Parameters `(q, β, μ)` of one q-Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QGaussianParams {
    q: f64,
    beta: f64,
    mu: f64,
}

impl QGaussianParams {
    /// Centered q-Gaussian. Requires `1 < q < 3` and `beta > 0`.
    pub fn new(q: f64, beta: f64) -> Result<Self> {
        Self::with_location(q, beta, 0.0)
    }

    pub fn with_location(q: f64, beta: f64, mu: f64) -> Result<Self> {
        if !(q > 1.0 && q < 3.0) {
            return domain(format!("entropic index q = {q} outside (1, 3)"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return domain(format!("beta = {beta} must be positive and finite"));
        }
        if !mu.is_finite() {
            return domain(format!("location mu = {mu} must be finite"));
        }
        Ok(Self { q, beta, mu })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `1 / (q - 1)`, the exponent of the density's tail factor.
    fn tail_power(&self) -> f64 {
        1.0 / (self.q - 1.0)
    }

    /// `(q - 1) β`
    fn scale(&self) -> f64 {
        (self.q - 1.0) * self.beta
    }

    /// Degrees of freedom of the equivalent Student-t.
    pub fn student_dof(&self) -> f64 {
        (3.0 - self.q) / (self.q - 1.0)
    }

    /// Scale factor mapping a standard Student-t onto this distribution.
    pub fn student_scale(&self) -> f64 {
        1.0 / (self.beta * (3.0 - self.q)).sqrt()
    }
}

/// Asymptotic exponent `α` of `P(|X| > x) ~ x^-α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailExponent {
    alpha: f64,
}

impl TailExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(Self { alpha })
        } else {
            domain(format!("tail exponent {alpha} must be positive and finite"))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// q-exponential `[1 + (1-q) x]_+^(1/(1-q))` for `q != 1`.
pub fn exp_q(q: f64, x: f64) -> f64 {
    let base = (1.0 - q) * x;
    if base <= -1.0 {
        return 0.0;
    }
    (base.ln_1p() / (1.0 - q)).exp()
}

/// Normalization constant `A(q, β)`.
pub fn normalization(params: &QGaussianParams) -> f64 {
    let b = params.tail_power();
    // Γ(b) / Γ(b - 1/2) with both arguments positive for q < 3
    let ratio = gamma_ratio(b, b - 0.5).expect("q in (1, 3) keeps gamma arguments positive");
    (params.scale() / std::f64::consts::PI).sqrt() * ratio
}

/// Probability density `A exp_q(-β (x - μ)²)`.
pub fn pdf(params: &QGaussianParams, x: f64) -> f64 {
    let d = x - params.mu;
    normalization(params) * exp_q(params.q, -params.beta * d * d)
}

/// `P(|X| > x)` for a centered q-Gaussian,
/// `1 - 2 A x ₂F₁(1/2, 1/(q-1); 3/2; -(q-1) β x²)`.
///
/// Once that value drops below 0.1 the equivalent upper tail
/// `I_{1/(1+y)}(1/(q-1) - 1/2, 1/2)`, `y = (q-1) β x²`, is returned
/// instead, so that far-tail probabilities keep full relative precision.
pub fn ccdf_abs(params: &QGaussianParams, x: f64) -> Result<f64> {
    if params.mu != 0.0 {
        return domain("ccdf_abs is defined for centered distributions only");
    }
    if x.is_nan() || x < 0.0 {
        return domain(format!("threshold x = {x} must be non-negative"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let b = params.tail_power();
    let y = params.scale() * x * x;
    let f = hyp2f1(Hyp2F1Args::new(0.5, b, 1.5, -y))?;
    let inside = 2.0 * normalization(params) * x * f;
    let outside = 1.0 - inside;
    if outside >= TAIL_SWITCH {
        return Ok(outside.min(1.0));
    }
    ccdf_abs_tail(params, x)
}

/// Upper-tail form of [`ccdf_abs`], exact for all `x >= 0`.
pub fn ccdf_abs_tail(params: &QGaussianParams, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return domain(format!("threshold x = {x} must be non-negative"));
    }
    let b = params.tail_power();
    let y = params.scale() * x * x;
    let p = beta_reg_split(b - 0.5, 0.5, 1.0 / (1.0 + y), y / (1.0 + y))?;
    Ok(p.clamp(0.0, 1.0))
}

/// `α = (3 - q) / (q - 1)`.
pub fn q_to_tail(q: f64) -> Result<TailExponent> {
    if !(q > 1.0 && q < 3.0) {
        return domain(format!("q = {q} outside (1, 3)"));
    }
    TailExponent::new((3.0 - q) / (q - 1.0))
}

/// `q = (3 + α) / (1 + α)`.
pub fn tail_to_q(alpha: TailExponent) -> f64 {
    (3.0 + alpha.alpha) / (1.0 + alpha.alpha)
}

/// `n` independent draws, reproducible for a given seed.
///
/// Uses the identity between a q-Gaussian and a Student-t with
/// `ν = (3-q)/(q-1)` degrees of freedom scaled by `1/√(β(3-q))`; the
/// Student-t variate is `Z / √(V/ν)` with `Z` standard normal and
/// `V ~ χ²(ν)`.
pub fn sample(params: &QGaussianParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return domain("sample size must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dof = params.student_dof();
    let chi = ChiSquared::new(dof)
        .map_err(|e| crate::Error::Domain(format!("chi-squared with {dof} dof: {e}")))?;
    let scale = params.student_scale();
    Ok((0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let v = chi.sample(&mut rng);
            params.mu + scale * z / (v / dof).sqrt()
        })
        .collect())
}
