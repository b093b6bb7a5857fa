//! Special functions needed by the q-Gaussian normalization and its
//! cumulative distribution: log-Gamma, Gamma ratios, the regularized
//! incomplete beta function and the Gauss hypergeometric function on the
//! negative real axis.
//!
//! Everything here is a pure function of its arguments.

use crate::error::{domain, Error, Result};

/// Relative size of the last series term at which summation stops.
pub const SERIES_TOLERANCE: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Arguments below this are shifted up by the recurrence before the
/// asymptotic series is applied.
const STIRLING_MIN: f64 = 10.0;

// B_{2k} / (2k (2k - 1)) for k = 1..=8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Correction term of the Stirling series, `ln Γ(x) - [(x - 1/2) ln x - x + ln √(2π)]`.
fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        domain(format!(
            "{name} requires a positive finite argument, got {x}"
        ))
    }
}

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_tail(x);
    }
    // Γ(x) = Γ(x + n) / (x (x + 1) ... (x + n - 1))
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_pos(shifted) - prod.ln()
}

/// `ln Γ(p) - ln Γ(r)`, evaluated without forming either log-Gamma when
/// the arguments are large and close to each other.
pub fn ln_gamma_diff(p: f64, r: f64) -> Result<f64> {
    check_positive("ln_gamma_diff", p)?;
    check_positive("ln_gamma_diff", r)?;
    Ok(ln_gamma_diff_pos(p, r))
}

fn ln_gamma_diff_pos(p: f64, r: f64) -> f64 {
    let d = p - r;
    if d == 0.0 {
        return 0.0;
    }
    let lo = p.min(r);
    if lo >= STIRLING_MIN {
        // (p - 1/2) ln p - (r - 1/2) ln r - d, regrouped around ln(p / r).
        return (p - 0.5) * (d / r).ln_1p() + d * r.ln() - d + stirling_tail(p) - stirling_tail(r);
    }
    let mut shift_terms = 0.0;
    let (mut ps, mut rs) = (p, r);
    while ps.min(rs) < STIRLING_MIN {
        shift_terms += (d / rs).ln_1p();
        ps += 1.0;
        rs += 1.0;
    }
    ln_gamma_diff_pos(ps, rs) - shift_terms
}

/// `Γ(p) / Γ(r)` for positive arguments, computed in log space.
pub fn gamma_ratio(p: f64, r: f64) -> Result<f64> {
    Ok(ln_gamma_diff(p, r)?.exp())
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    check_positive("ln_beta", a)?;
    check_positive("ln_beta", b)?;
    Ok(ln_beta_pos(a, b))
}

fn ln_beta_pos(a: f64, b: f64) -> f64 {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    ln_gamma_pos(small) + ln_gamma_diff_pos(big, big + small)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn beta_reg(a: f64, b: f64, x: f64) -> Result<f64> {
    beta_reg_split(a, b, x, 1.0 - x)
}

/// `I_x(a, b)` with the complement `1 - x` supplied separately, so that
/// arguments within rounding distance of 1 keep their precision.
pub fn beta_reg_split(a: f64, b: f64, x: f64, one_minus_x: f64) -> Result<f64> {
    check_positive("beta_reg", a)?;
    check_positive("beta_reg", b)?;
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&one_minus_x) {
        return domain(format!("beta_reg argument {x} outside [0, 1]"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if one_minus_x == 0.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * one_minus_x.ln() - ln_beta_pos(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(ln_front.exp() * beta_cf(a, b, x)? / a)
    } else {
        Ok(1.0 - ln_front.exp() * beta_cf(b, a, one_minus_x)? / b)
    }
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let guard = |v: f64| if v.abs() < TINY { TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=MAX_SERIES_TERMS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= EPS {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence {
        routine: "incomplete beta continued fraction",
        iterations: MAX_SERIES_TERMS,
    })
}

/// Arguments of `₂F₁(a, b; c; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    fn validate(&self) -> Result<()> {
        let Self { a, b, c, z } = *self;
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || z.is_nan() {
            return domain(format!("non-finite hypergeometric parameters {self:?}"));
        }
        if c <= 0.0 && c.fract() == 0.0 {
            return domain(format!("lower parameter c = {c} is a non-positive integer"));
        }
        if z > 0.0 {
            return domain(format!("hypergeometric argument z = {z} must be <= 0"));
        }
        Ok(())
    }

    /// `c = a + 1` with `0 < a < 1` and `b > a`: the family whose large-|z|
    /// values reduce to an incomplete beta function.
    fn is_incomplete_beta_family(&self) -> bool {
        self.c == self.a + 1.0 && self.a > 0.0 && self.a < 1.0 && self.b > self.a
    }
}

/// Condition number above which the direct series is abandoned in favour
/// of a transformed argument.
const MAX_CANCELLATION: f64 = 1e3;

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for real `z <= 0`.
///
/// Small `|z|` is summed directly. Otherwise the argument is mapped to
/// `w = z / (z - 1)` in `[0, 1)` by a Pfaff transformation; for the
/// `c = a + 1` family with `w > 1/2` the incomplete beta representation
/// `a (-z)^(-a) B_w(a, b - a)` is used instead, which stays cheap all the
/// way out to `z = -1e8` and beyond.
pub fn hyp2f1(args: Hyp2F1Args) -> Result<f64> {
    args.validate()?;
    let Hyp2F1Args { a, b, c, z } = args;
    if z == 0.0 {
        return Ok(1.0);
    }
    if z >= -0.9 {
        if let Ok((sum, abs_sum)) = series(a, b, c, z) {
            if abs_sum <= MAX_CANCELLATION * sum.abs() {
                return Ok(sum);
            }
        }
    }
    let w = z / (z - 1.0);
    if args.is_incomplete_beta_family() && w > 0.5 {
        return hyp2f1_incomplete_beta(args);
    }
    hyp2f1_pfaff(args)
}

/// Plain Taylor series `Σ (a)_k (b)_k / (c)_k z^k / k!`.
pub fn hyp2f1_series(args: Hyp2F1Args) -> Result<f64> {
    args.validate()?;
    if args.z <= -1.0 {
        return domain("direct series requires |z| < 1");
    }
    Ok(series(args.a, args.b, args.c, args.z)?.0)
}

/// Pfaff-transformed evaluation. Of the two transformations
/// `(1-z)^(-a) F(a, c-b; c; w)` and `(1-z)^(-b) F(c-a, b; c; w)` the one
/// whose series has only non-negative terms is preferred.
pub fn hyp2f1_pfaff(args: Hyp2F1Args) -> Result<f64> {
    args.validate()?;
    let Hyp2F1Args { a, b, c, z } = args;
    let w = z / (z - 1.0);
    let log_one_minus_z = (-z).ln_1p();
    let b_variant_positive = c - a >= 0.0 && b >= 0.0;
    let a_variant_positive = a >= 0.0 && c - b >= 0.0;
    if b_variant_positive || !a_variant_positive {
        let (sum, _) = series(c - a, b, c, w)?;
        Ok((-b * log_one_minus_z).exp() * sum)
    } else {
        let (sum, _) = series(a, c - b, c, w)?;
        Ok((-a * log_one_minus_z).exp() * sum)
    }
}

/// Incomplete beta representation valid when `c = a + 1`, `0 < a < 1`,
/// `b > a`:  `F(a, b; a+1; -y) = a y^(-a) B(a, b-a) I_{y/(1+y)}(a, b-a)`.
pub fn hyp2f1_incomplete_beta(args: Hyp2F1Args) -> Result<f64> {
    args.validate()?;
    if !args.is_incomplete_beta_family() {
        return domain("incomplete beta route needs c = a + 1, 0 < a < 1, b > a");
    }
    let Hyp2F1Args { a, b, z, .. } = args;
    if z == 0.0 {
        return Ok(1.0);
    }
    let y = -z;
    let r = b - a;
    let w = y / (1.0 + y);
    let w_c = 1.0 / (1.0 + y);
    let ib = beta_reg_split(a, r, w, w_c)?;
    Ok(a * (ln_beta_pos(a, r) - a * y.ln()).exp() * ib)
}

/// Returns the partial sum and the sum of absolute terms.
fn series(a: f64, b: f64, c: f64, z: f64) -> Result<(f64, f64)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let k = k as f64;
        let ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        term *= ratio;
        if term == 0.0 {
            return Ok((sum, abs_sum));
        }
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= SERIES_TOLERANCE * sum.abs() && ratio.abs() < 1.0 {
            return Ok((sum, abs_sum));
        }
    }
    Err(Error::NonConvergence {
        routine: "hypergeometric series",
        iterations: MAX_SERIES_TERMS,
    })
}
