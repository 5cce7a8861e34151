//! One-parameter family abstraction and the built-in Lehmann-alternative
//! models.
//!
//! A [`CumulantModel`] supplies everything the interval constructions need:
//! the mean map `g(theta) = E X_1` with its inverse and derivative, the
//! variance `sigma(theta)^2`, higher cumulants `K_r(theta)`, distribution
//! access and an inverse-CDF sampler. Models are immutable; samplers take an
//! explicit RNG so concurrent use needs no shared state.
//!
//! Built-ins:
//! * [`ExpLehmann`] - `F(x, theta) = exp(theta x)` on `(-inf, 0]`
//!   (a Lehmann alternative with exponential base). Cumulants
//!   `K_r = (-theta)^(-r) (r-1)!`, so the standardized cumulants
//!   `l_r = (-1)^r (r-1)!` are parameter-free and `n theta |mean(X)|` is
//!   exactly Gamma(n, 1).
//! * [`PowerLehmann`] - `F(x, theta) = x^(nu theta)` on `[0, 1]`. Moments
//!   `E X^r = (1 + r psi)^(-1)` with `psi = 1/(nu theta)`; the standardized
//!   cumulants vary with `theta`, which is what the general
//!   parameter-dependent interval transform is for.

use crate::edgeworth::StandardizedCumulants;
use crate::error::{Error, Result};
use crate::poly::{rational, Rational};
use crate::special::reg_gamma_upper;
use rand::distributions::Open01;
use rand::{Rng, RngCore};

/// Capability contract for a one-parameter continuous family.
pub trait CumulantModel: Send + Sync {
    /// Short identifier, e.g. `exp-lehmann`.
    fn name(&self) -> &str;

    /// Human-readable description including fixed shape parameters.
    fn describe(&self) -> String {
        self.name().to_string()
    }

    /// Open parameter domain.
    fn theta_domain(&self) -> (f64, f64);

    /// Support of a single observation (used for data validation and
    /// quadrature).
    fn support(&self) -> (f64, f64);

    /// Open range of the mean map.
    fn mean_range(&self) -> (f64, f64);

    /// `g(theta) = E X_1`.
    fn mean(&self, theta: f64) -> f64;

    /// Declared monotonicity direction of `g`.
    fn mean_increasing(&self) -> bool;

    /// `g^{-1}(t)`; errors when `t` is outside the range of `g`.
    fn mean_inverse(&self, t: f64) -> Result<f64>;

    /// `dg/dtheta`.
    fn mean_derivative(&self, theta: f64) -> f64;

    /// `sigma(theta)^2 = var X_1`.
    fn variance(&self, theta: f64) -> f64;

    /// `K_r(theta) = kappa_r(X_1)` for `2 <= r <= 6`.
    fn cumulant(&self, r: u32, theta: f64) -> Result<f64>;

    /// CDF of a single observation.
    fn cdf(&self, x: f64, theta: f64) -> f64;

    /// Density of a single observation.
    fn pdf(&self, x: f64, theta: f64) -> f64;

    /// One inverse-CDF draw.
    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> f64;

    /// Exact CDF of the sample mean, when the family has one.
    fn mean_cdf(&self, _v: f64, _theta: f64, _n: u64) -> Option<f64> {
        None
    }

    /// Closed-form `(d/dt M_1, d^2/dt^2 M_1)` where `M_1(t) = sigma(g^{-1}(t))`,
    /// overriding the finite-difference default.
    fn m1_derivatives(&self, _t: f64) -> Option<(f64, f64)> {
        None
    }

    /// Closed-form `d/dt M_2` where `M_2(t) = sigma^{-2} K_3` at `g^{-1}(t)`.
    fn m2_derivative(&self, _t: f64) -> Option<f64> {
        None
    }

    /// Five interior parameter values used to probe whether standardized
    /// cumulants (and sigma) depend on theta.
    fn probe_thetas(&self) -> [f64; 5] {
        let (lo, hi) = self.theta_domain();
        if lo.is_finite() && hi.is_finite() {
            let w = hi - lo;
            [lo + 0.1 * w, lo + 0.3 * w, lo + 0.5 * w, lo + 0.7 * w, lo + 0.9 * w]
        } else if lo.is_finite() {
            let base = if lo == 0.0 { 0.0 } else { lo };
            [base + 0.5, base + 1.0, base + 2.0, base + 5.0, base + 10.0]
        } else if hi.is_finite() {
            [hi - 10.0, hi - 5.0, hi - 2.0, hi - 1.0, hi - 0.5]
        } else {
            [-2.0, -1.0, 0.0, 1.0, 2.0]
        }
    }
}

/// Standardized cumulants `l_3..l_{max_r}` of the model at `theta`.
pub fn standardized_cumulants_at(
    model: &dyn CumulantModel,
    theta: f64,
    max_r: u32,
) -> Result<StandardizedCumulants> {
    check_theta(theta, model)?;
    let mut kappa = vec![model.mean(theta), model.variance(theta)];
    for r in 3..=max_r {
        kappa.push(model.cumulant(r, theta)?);
    }
    StandardizedCumulants::from_kappa(&kappa)
}

fn check_theta(theta: f64, model: &dyn CumulantModel) -> Result<()> {
    let (lo, hi) = model.theta_domain();
    if !theta.is_finite() || theta <= lo || theta >= hi {
        return Err(Error::Domain(format!(
            "theta = {theta} outside the parameter domain ({lo}, {hi}) of {}",
            model.name()
        )));
    }
    Ok(())
}

// ------------------------------------------------------------------ builtins

/// Lehmann alternative with exponential base: `F(x, theta) = exp(theta x)`
/// on `(-inf, 0]`, `theta > 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpLehmann;

impl ExpLehmann {
    pub fn new() -> Self {
        ExpLehmann
    }

    /// `l_r` computed over the rationals: `kappa_r = (-1)^r (r-1)! / theta^r`
    /// divided by `sigma^r = theta^{-r}` collapses to `(-1)^r (r-1)!` for any
    /// rational `theta > 0`, with no rounding anywhere.
    pub fn exact_standardized_cumulant(theta: &Rational, r: u32) -> Rational {
        let mut fact = 1i64;
        for k in 1..r as i64 {
            fact *= k;
        }
        let sign = if r.is_multiple_of(2) { 1 } else { -1 };
        let kappa = rational(sign * fact, 1) / pow_rational(theta, r);
        let sigma_pow = pow_rational(&(rational(1, 1) / theta.clone()), r);
        kappa / sigma_pow
    }
}

fn pow_rational(x: &Rational, r: u32) -> Rational {
    let mut acc = rational(1, 1);
    for _ in 0..r {
        acc *= x.clone();
    }
    acc
}

impl CumulantModel for ExpLehmann {
    fn name(&self) -> &str {
        "exp-lehmann"
    }

    fn theta_domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, 0.0)
    }

    fn mean_range(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, 0.0)
    }

    fn mean(&self, theta: f64) -> f64 {
        -1.0 / theta
    }

    fn mean_increasing(&self) -> bool {
        true // dg/dtheta = theta^{-2} > 0
    }

    fn mean_inverse(&self, t: f64) -> Result<f64> {
        if t >= 0.0 || !t.is_finite() {
            return Err(Error::Domain(format!("mean value {t} outside (-inf, 0)")));
        }
        Ok(-1.0 / t)
    }

    fn mean_derivative(&self, theta: f64) -> f64 {
        1.0 / (theta * theta)
    }

    fn variance(&self, theta: f64) -> f64 {
        1.0 / (theta * theta)
    }

    fn cumulant(&self, r: u32, theta: f64) -> Result<f64> {
        if !(2..=6).contains(&r) {
            return Err(Error::OrderOutOfRange { what: "cumulant order r", value: r, max: 6 });
        }
        let mut fact = 1.0;
        for k in 1..r {
            fact *= k as f64;
        }
        Ok(fact / (-theta).powi(r as i32))
    }

    fn cdf(&self, x: f64, theta: f64) -> f64 {
        if x >= 0.0 {
            1.0
        } else {
            (theta * x).exp()
        }
    }

    fn pdf(&self, x: f64, theta: f64) -> f64 {
        if x > 0.0 {
            0.0
        } else {
            theta * (theta * x).exp()
        }
    }

    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> f64 {
        let u: f64 = rng.sample(Open01);
        u.ln() / theta
    }

    /// `n theta |mean(X)|` is Gamma(n, 1): for `v < 0`,
    /// `P(mean(X) <= v) = Q(n, -n theta v)`.
    fn mean_cdf(&self, v: f64, theta: f64, n: u64) -> Option<f64> {
        if v >= 0.0 {
            return Some(1.0);
        }
        Some(reg_gamma_upper(n as f64, -(n as f64) * theta * v))
    }

    fn m1_derivatives(&self, _t: f64) -> Option<(f64, f64)> {
        // M_1(t) = sigma(g^{-1}(t)) = -t on t < 0
        Some((-1.0, 0.0))
    }

    fn m2_derivative(&self, _t: f64) -> Option<f64> {
        // M_2(t) = sigma l_3 = (-t)(-2) = 2t
        Some(2.0)
    }
}

/// Lehmann alternative with power base: `F(x, theta) = x^(nu theta)` on
/// `[0, 1]`, `nu > 0`, `theta > 0`.
#[derive(Debug, Clone, Copy)]
pub struct PowerLehmann {
    nu: f64,
}

impl PowerLehmann {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::Domain(format!("nu must be positive, got {nu}")));
        }
        Ok(PowerLehmann { nu })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Raw moment `E X^r = (1 + r psi)^{-1}`, `psi = 1/(nu theta)`.
    pub fn raw_moment(&self, r: u32, theta: f64) -> f64 {
        1.0 / (1.0 + r as f64 / (self.nu * theta))
    }
}

/// Raw moments to cumulants via the standard recursion
/// `kappa_n = mu_n - sum_{i=1}^{n-1} C(n-1, i-1) kappa_i mu_{n-i}`.
///
/// `moments[i]` is the raw moment of order `i + 1`; returns cumulants
/// 1-indexed the same way.
pub fn moments_to_cumulants(moments: &[f64]) -> Vec<f64> {
    let n = moments.len();
    let mut kappa = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = moments[m];
        for (i, k) in kappa.iter().enumerate().take(m) {
            acc -= binomial(m, i) * k * moments[m - 1 - i];
        }
        kappa.push(acc);
    }
    kappa
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

impl CumulantModel for PowerLehmann {
    fn name(&self) -> &str {
        "power-lehmann"
    }

    fn describe(&self) -> String {
        format!("power-lehmann(nu={})", self.nu)
    }

    fn theta_domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn mean_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn mean(&self, theta: f64) -> f64 {
        self.raw_moment(1, theta)
    }

    fn mean_increasing(&self) -> bool {
        true
    }

    fn mean_inverse(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t <= 0.0 || t >= 1.0 {
            return Err(Error::Domain(format!("mean value {t} outside (0, 1)")));
        }
        Ok(t / (self.nu * (1.0 - t)))
    }

    fn mean_derivative(&self, theta: f64) -> f64 {
        let d = self.nu * theta + 1.0;
        self.nu / (d * d)
    }

    /// `sigma^2 = t (1-t)^2 / (2-t)` at `t = g(theta)`.
    fn variance(&self, theta: f64) -> f64 {
        let t = self.mean(theta);
        t * (1.0 - t) * (1.0 - t) / (2.0 - t)
    }

    fn cumulant(&self, r: u32, theta: f64) -> Result<f64> {
        if !(2..=6).contains(&r) {
            return Err(Error::OrderOutOfRange { what: "cumulant order r", value: r, max: 6 });
        }
        let moments: Vec<f64> = (1..=r).map(|k| self.raw_moment(k, theta)).collect();
        Ok(moments_to_cumulants(&moments)[(r - 1) as usize])
    }

    fn cdf(&self, x: f64, theta: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 1.0 {
            1.0
        } else {
            x.powf(self.nu * theta)
        }
    }

    fn pdf(&self, x: f64, theta: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        let a = self.nu * theta;
        a * x.powf(a - 1.0)
    }

    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> f64 {
        let u: f64 = rng.sample(Open01);
        u.powf(1.0 / (self.nu * theta))
    }

    fn m1_derivatives(&self, t: f64) -> Option<(f64, f64)> {
        // M_1^2 = s2(t) = t(1-t)^2/(2-t);  s2' = 2((2-t)^{-2} - t),
        // s2'' = 2(2(2-t)^{-3} - 1).
        let s2 = t * (1.0 - t) * (1.0 - t) / (2.0 - t);
        if s2 <= 0.0 {
            return None;
        }
        let m1 = s2.sqrt();
        let s2p = 2.0 * ((2.0 - t).powi(-2) - t);
        let s2pp = 2.0 * (2.0 * (2.0 - t).powi(-3) - 1.0);
        let d1 = s2p / (2.0 * m1);
        let d2 = s2pp / (2.0 * m1) - s2p * s2p / (4.0 * s2 * m1);
        Some((d1, d2))
    }

    fn m2_derivative(&self, t: f64) -> Option<f64> {
        // M_2 = 2(1-t)(1-2t)/(3-2t)
        let den = 3.0 - 2.0 * t;
        Some(-2.0 * (4.0 * t * t - 12.0 * t + 7.0) / (den * den))
    }
}

// -------------------------------------------------------------- custom model

/// User-supplied family defined by closed-form callbacks. Everything the
/// trait needs must be provided; [`validate_model`] gates acceptance.
pub struct CustomModel {
    pub name: String,
    pub theta_domain: (f64, f64),
    pub support: (f64, f64),
    pub mean_range: (f64, f64),
    pub mean_increasing: bool,
    pub mean: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub mean_inverse: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub mean_derivative: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub variance: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `(r, theta) -> K_r(theta)` for `2 <= r <= 6`.
    pub cumulant: Box<dyn Fn(u32, f64) -> f64 + Send + Sync>,
    pub cdf: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub pdf: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    /// Inverse-CDF transform applied to a uniform (0,1) draw.
    pub quantile: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl CumulantModel for CustomModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn theta_domain(&self) -> (f64, f64) {
        self.theta_domain
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn mean_range(&self) -> (f64, f64) {
        self.mean_range
    }

    fn mean(&self, theta: f64) -> f64 {
        (self.mean)(theta)
    }

    fn mean_increasing(&self) -> bool {
        self.mean_increasing
    }

    fn mean_inverse(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.mean_range;
        if t.is_nan() || t <= lo || t >= hi {
            return Err(Error::Domain(format!("mean value {t} outside ({lo}, {hi})")));
        }
        Ok((self.mean_inverse)(t))
    }

    fn mean_derivative(&self, theta: f64) -> f64 {
        (self.mean_derivative)(theta)
    }

    fn variance(&self, theta: f64) -> f64 {
        (self.variance)(theta)
    }

    fn cumulant(&self, r: u32, theta: f64) -> Result<f64> {
        if !(2..=6).contains(&r) {
            return Err(Error::OrderOutOfRange { what: "cumulant order r", value: r, max: 6 });
        }
        Ok((self.cumulant)(r, theta))
    }

    fn cdf(&self, x: f64, theta: f64) -> f64 {
        (self.cdf)(x, theta)
    }

    fn pdf(&self, x: f64, theta: f64) -> f64 {
        (self.pdf)(x, theta)
    }

    fn sample(&self, theta: f64, rng: &mut dyn RngCore) -> f64 {
        let u: f64 = rng.sample(Open01);
        (self.quantile)(u, theta)
    }
}

// ----------------------------------------------------------------- M vectors

/// `M_i(t) = m_i(g^{-1}(t))` with `m_i(theta) = sigma(theta) beta_{i-1}`:
/// `m_1 = sigma`, `m_2 = sigma^{-2} K_3`, `m_3 = (sigma^{-3} K_4, -sigma^{-5} K_3^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MVector {
    pub order: u32,
    pub entries: Vec<f64>,
}

/// Entry counts are 1, 1, 2 for `i = 1, 2, 3`.
pub fn m_vector(model: &dyn CumulantModel, t: f64, i: u32) -> Result<MVector> {
    if !(1..=3).contains(&i) {
        return Err(Error::OrderOutOfRange { what: "M-vector order i", value: i, max: 3 });
    }
    let theta = model.mean_inverse(t)?;
    let sigma = model.variance(theta).sqrt();
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::NonPositiveVariance(sigma * sigma));
    }
    let entries = match i {
        1 => vec![sigma],
        2 => vec![model.cumulant(3, theta)? / (sigma * sigma)],
        _ => {
            let k3 = model.cumulant(3, theta)?;
            let k4 = model.cumulant(4, theta)?;
            vec![k4 / sigma.powi(3), -k3 * k3 / sigma.powi(5)]
        }
    };
    Ok(MVector { order: i, entries })
}

/// First or second `t`-derivatives of the entries of `M_i(t)`.
///
/// Uses the model's closed forms when available, otherwise Richardson-refined
/// central differences: step `max(1e-5, 1e-5 |t|)` for first derivatives and
/// `max(1e-3, 1e-3 |t|)` for second derivatives (the larger step keeps the
/// second-difference roundoff ~4 eps/h^2 below 1e-9).
pub fn m_vector_derivatives(
    model: &dyn CumulantModel,
    t: f64,
    i: u32,
    order: u32,
) -> Result<Vec<f64>> {
    if i == 1 {
        if let Some((d1, d2)) = model.m1_derivatives(t) {
            return match order {
                1 => Ok(vec![d1]),
                2 => Ok(vec![d2]),
                _ => Err(Error::OrderOutOfRange { what: "derivative order", value: order, max: 2 }),
            };
        }
    }
    if i == 2 && order == 1 {
        if let Some(d1) = model.m2_derivative(t) {
            return Ok(vec![d1]);
        }
    }
    m_vector_derivatives_fd(model, t, i, order)
}

/// Finite-difference path, always; exposed so the closed forms can be
/// cross-checked against it.
pub fn m_vector_derivatives_fd(
    model: &dyn CumulantModel,
    t: f64,
    i: u32,
    order: u32,
) -> Result<Vec<f64>> {
    if !(1..=2).contains(&order) {
        return Err(Error::OrderOutOfRange { what: "derivative order", value: order, max: 2 });
    }
    let h = if order == 1 {
        (1e-5f64).max(1e-5 * t.abs())
    } else {
        (1e-3f64).max(1e-3 * t.abs())
    };
    let (lo, hi) = model.mean_range();
    if !(t - h > lo && t + h < hi) {
        return Err(Error::StencilFailure { t });
    }
    let len = m_vector(model, t, i)?.entries.len();
    let at = |tt: f64| -> Result<Vec<f64>> { Ok(m_vector(model, tt, i)?.entries) };
    let stencil = |hh: f64| -> Result<Vec<f64>> {
        let plus = at(t + hh)?;
        let minus = at(t - hh)?;
        if order == 1 {
            Ok((0..len).map(|k| (plus[k] - minus[k]) / (2.0 * hh)).collect())
        } else {
            let center = at(t)?;
            Ok((0..len)
                .map(|k| (plus[k] - 2.0 * center[k] + minus[k]) / (hh * hh))
                .collect())
        }
    };
    // Richardson: both stencils have O(h^2) error, so (4 d_{h/2} - d_h)/3.
    let coarse = stencil(h)?;
    let fine = stencil(h / 2.0)?;
    Ok((0..len).map(|k| (4.0 * fine[k] - coarse[k]) / 3.0).collect())
}

// ----------------------------------------------------------------- validation

/// Outcome of [`validate_model`]; each check reports independently.
#[derive(Debug, Clone)]
pub struct ModelDiagnostics {
    pub monotone_mean: bool,
    pub inverse_consistent: bool,
    pub variance_consistent: bool,
    pub sampler_consistent: bool,
    pub messages: Vec<String>,
}

impl ModelDiagnostics {
    pub fn all_passed(&self) -> bool {
        self.monotone_mean
            && self.inverse_consistent
            && self.variance_consistent
            && self.sampler_consistent
    }
}

/// Check the model's self-consistency over `[theta_lo, theta_hi]`:
/// mean-map monotonicity on a 101-point grid, `g^{-1}(g(theta)) = theta` to
/// 1e-12 relative, `kappa_2 = sigma^2` to 1e-12 relative, and agreement of
/// the sample mean of 1e6 draws with `g(theta)` within 5 standard errors at
/// three grid points.
pub fn validate_model(
    model: &dyn CumulantModel,
    theta_lo: f64,
    theta_hi: f64,
    seed: u64,
) -> ModelDiagnostics {
    use rand::SeedableRng;

    let mut diag = ModelDiagnostics {
        monotone_mean: true,
        inverse_consistent: true,
        variance_consistent: true,
        sampler_consistent: true,
        messages: Vec::new(),
    };
    let grid: Vec<f64> =
        (0..101).map(|k| theta_lo + (theta_hi - theta_lo) * k as f64 / 100.0).collect();

    let mut prev = model.mean(grid[0]);
    for &theta in &grid[1..] {
        let cur = model.mean(theta);
        let ok = if model.mean_increasing() { cur > prev } else { cur < prev };
        if !ok {
            diag.monotone_mean = false;
            diag.messages.push(format!("mean map not strictly monotone at theta = {theta}"));
            break;
        }
        prev = cur;
    }

    for &theta in &grid {
        match model.mean_inverse(model.mean(theta)) {
            Ok(back) => {
                if (back - theta).abs() > 1e-12 * theta.abs().max(1.0) {
                    diag.inverse_consistent = false;
                    diag.messages
                        .push(format!("g_inverse(g({theta})) = {back} off by more than 1e-12"));
                    break;
                }
            }
            Err(e) => {
                diag.inverse_consistent = false;
                diag.messages.push(format!("mean_inverse failed at theta = {theta}: {e}"));
                break;
            }
        }
    }

    for &theta in &grid {
        let v = model.variance(theta);
        let k2 = model.cumulant(2, theta).unwrap_or(f64::NAN);
        let k2_mismatch = (v - k2).abs();
        if k2_mismatch.is_nan() || k2_mismatch > 1e-12 * v.abs().max(k2.abs()) {
            diag.variance_consistent = false;
            diag.messages
                .push(format!("kappa_2 = {k2} but sigma^2 = {v} at theta = {theta}"));
            break;
        }
    }

    let draws_per_point = 1_000_000u64;
    for (idx, &theta) in [grid[0], grid[50], grid[100]].iter().enumerate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (idx as u64) << 32);
        let mut sum = 0.0;
        for _ in 0..draws_per_point {
            sum += model.sample(theta, &mut rng);
        }
        let mean = sum / draws_per_point as f64;
        let se = model.variance(theta).sqrt() / (draws_per_point as f64).sqrt();
        if (mean - model.mean(theta)).abs() > 5.0 * se {
            diag.sampler_consistent = false;
            diag.messages.push(format!(
                "sampler mean {mean} vs g({theta}) = {} beyond 5 standard errors",
                model.mean(theta)
            ));
        }
    }

    diag
}
