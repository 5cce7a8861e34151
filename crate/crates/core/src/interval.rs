//! The three confidence-interval constructions.
//!
//! * **Constant-cumulant**: when the standardized cumulants are parameter-free,
//!   the corrected quantile of the mean is `g(theta) + n^(-1/2) sigma eta_nj(x)`
//!   and the bounds are `g^{-1}(mean - n^(-1/2) sigma eta_nj(x))`. When `sigma`
//!   varies with `theta` (but the `l_r` do not), the same equation is solved
//!   for `theta` with `sigma(theta)` self-consistent at the bound, which
//!   coincides with the pivot inversion below.
//! * **Monotone pivot**: inverts `Y_n(theta) = n^(1/2)(mean - g(theta))/sigma(theta)`
//!   at the transformed tail points `eta_nj(x)` by bracketed bisection.
//! * **General transform**: for parameter-dependent cumulants, maps the mean
//!   through `S_nxj(t) = t + sum_{i=1}^{j+1} n^(-i/2) Q_i(t)` and then through
//!   `g^{-1}`; supported through `j = 2` (`Q_1..Q_3`).
//!
//! Coverage error is `O(n^-(j+1)/2)` in each case, and the per-order
//! correction magnitudes are reported so callers can judge how many terms the
//! series supports at their sample size (they should decrease; a warning flag
//! is set when they do not).

use crate::edgeworth::{self, ExpansionSpec, StandardizedCumulants};
use crate::error::{Error, Result};
use crate::models::{
    m_vector, m_vector_derivatives, m_vector_derivatives_fd, standardized_cumulants_at,
    CumulantModel,
};
use crate::special::{std_normal_cdf, std_normal_quantile};

/// Interval construction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ConstantCumulant,
    MonotonePivot,
    GeneralTransform,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ConstantCumulant => "constant_cumulant",
            Method::MonotonePivot => "monotone_pivot",
            Method::GeneralTransform => "general_transform",
        }
    }

    /// Highest expansion order the method supports: the quantile-transform
    /// paths carry `g_1..g_4`, the general transform carries `Q_1..Q_3`.
    pub fn max_order(&self) -> u32 {
        match self {
            Method::GeneralTransform => 2,
            _ => 4,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" | "constant_cumulant" => Ok(Method::ConstantCumulant),
            "pivot" | "monotone_pivot" => Ok(Method::MonotonePivot),
            "general" | "general_transform" => Ok(Method::GeneralTransform),
            other => Err(Error::InvalidSpec(format!(
                "unknown method '{other}' (expected constant | pivot | general)"
            ))),
        }
    }
}

/// Confidence level and tail points. `x1 > 0 > x2` for the usual symmetric
/// two-sided interval; `Phi(x1) - Phi(x2) = 1 - alpha` always holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceSpec {
    pub alpha: f64,
    pub x1: f64,
    pub x2: f64,
    pub j: u32,
    pub n: u64,
}

impl ConfidenceSpec {
    /// Symmetric tails `x1 = -x2 = Phi^{-1}(1 - alpha/2)`.
    pub fn symmetric(alpha: f64, j: u32, n: u64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 || alpha > 1.0 {
            return Err(Error::InvalidSpec(format!("alpha = {alpha} outside (0, 1]")));
        }
        ExpansionSpec::new(n, j)?;
        let x1 = if alpha == 1.0 { 0.0 } else { std_normal_quantile(1.0 - alpha / 2.0) };
        Ok(ConfidenceSpec { alpha, x1, x2: -x1, j, n })
    }

    /// Explicit tail points; the level is `1 - |Phi(x1) - Phi(x2)|`.
    pub fn with_tails(x1: f64, x2: f64, j: u32, n: u64) -> Result<Self> {
        if !x1.is_finite() || !x2.is_finite() {
            return Err(Error::InvalidSpec("tail points must be finite".into()));
        }
        ExpansionSpec::new(n, j)?;
        let alpha = 1.0 - (std_normal_cdf(x1) - std_normal_cdf(x2)).abs();
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidSpec("tail points too extreme: alpha underflows".into()));
        }
        Ok(ConfidenceSpec { alpha, x1, x2, j, n })
    }

    /// Explicit tails with a caller-supplied level, which must match
    /// `Phi(x1) - Phi(x2) = 1 - alpha` to 1e-10.
    pub fn with_tails_and_alpha(x1: f64, x2: f64, alpha: f64, j: u32, n: u64) -> Result<Self> {
        let spec = Self::with_tails(x1, x2, j, n)?;
        if (spec.alpha - alpha).abs() > 1e-10 {
            return Err(Error::InvalidSpec(format!(
                "Phi(x1) - Phi(x2) = {} but alpha = {alpha}",
                1.0 - spec.alpha
            )));
        }
        Ok(ConfidenceSpec { alpha, ..spec })
    }

    pub fn expansion(&self) -> ExpansionSpec {
        ExpansionSpec { n: self.n, j: self.j }
    }
}

/// A two-sided interval in parameter units with series diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalResult {
    pub method: Method,
    pub j: u32,
    pub lower: f64,
    pub upper: f64,
    /// Successive correction magnitudes `|n^(-i/2) term_i|` (max over the two
    /// tails), one per expansion order used.
    pub corrections: Vec<f64>,
    /// Set when the correction magnitudes fail to decrease: the series is
    /// past its useful order at this sample size.
    pub series_warning: bool,
}

fn orient(method: Method, j: u32, a: f64, b: f64, corrections: Vec<f64>) -> IntervalResult {
    let series_warning = corrections.windows(2).any(|w| w[0] > 0.0 && w[1] >= w[0]);
    IntervalResult {
        method,
        j,
        lower: a.min(b),
        upper: a.max(b),
        corrections,
        series_warning,
    }
}

// ------------------------------------------------------------- root finding

/// Bracketed bisection to relative tolerance 1e-12 (200-iteration cap).
fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300) {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Expand from `start` inside the open `domain` until `f` changes sign, then
/// bisect. Steps halve the gap toward a finite boundary and double outward
/// toward an infinite one.
fn solve_bracketed(
    f: &dyn Fn(f64) -> f64,
    start: f64,
    domain: (f64, f64),
    target_desc: f64,
) -> Result<f64> {
    let f0 = f(start);
    if f0 == 0.0 {
        return Ok(start);
    }
    let step_toward = |bound: f64, from: f64, k: u32| -> f64 {
        if bound.is_infinite() {
            from + bound.signum() * from.abs().max(1.0) * (1u64 << k.min(52)) as f64 * 0.5
        } else {
            bound + (from - bound) / (1u64 << k.min(52)) as f64
        }
    };
    for &bound in &[domain.0, domain.1] {
        let mut prev = start;
        let mut fprev = f0;
        for k in 1..=100u32 {
            let cand = step_toward(bound, start, k);
            if cand == prev {
                break;
            }
            let fc = f(cand);
            if fc == 0.0 {
                return Ok(cand);
            }
            if (fc < 0.0) != (fprev < 0.0) {
                return Ok(bisect(f, prev.min(cand), prev.max(cand)));
            }
            prev = cand;
            fprev = fc;
        }
    }
    Err(Error::BracketNotFound { target: target_desc })
}

// -------------------------------------------------- constant-cumulant checks

fn relative_spread(values: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (hi - lo) / lo.abs().max(hi.abs()).max(1.0)
}

/// Standardized cumulants at the probe grid; errors unless `l_3..l_{j+2}`
/// agree across the grid to 1e-10 relative.
fn theta_free_cumulants(
    model: &dyn CumulantModel,
    j: u32,
) -> Result<StandardizedCumulants> {
    let max_r = j + 2;
    let probes = model.probe_thetas();
    let ells: Vec<StandardizedCumulants> = probes
        .iter()
        .map(|&theta| standardized_cumulants_at(model, theta, max_r))
        .collect::<Result<_>>()?;
    for r in 3..=max_r {
        let vals: Vec<f64> = ells.iter().map(|e| e.get(r)).collect();
        let spread = relative_spread(&vals);
        if spread > 1e-10 {
            return Err(Error::ThetaDependentCumulants { order: r, relative_spread: spread });
        }
    }
    Ok(ells.into_iter().next().expect("nonempty probe grid"))
}

fn sigma_if_theta_free(model: &dyn CumulantModel) -> Option<f64> {
    let sigmas: Vec<f64> =
        model.probe_thetas().iter().map(|&theta| model.variance(theta).sqrt()).collect();
    (relative_spread(&sigmas) <= 1e-10).then_some(sigmas[0])
}

fn quantile_correction_magnitudes(
    spec: &ConfidenceSpec,
    ell: &StandardizedCumulants,
) -> Result<Vec<f64>> {
    let eps = 1.0 / (spec.n as f64).sqrt();
    (1..=spec.j)
        .map(|r| {
            let g1 = edgeworth::g_value(r, ell, spec.x1)?;
            let g2 = edgeworth::g_value(r, ell, spec.x2)?;
            Ok(eps.powi(r as i32) * g1.abs().max(g2.abs()))
        })
        .collect()
}

// ----------------------------------------------------- interval constructions

/// Interval from the corrected quantile of the sample mean, valid when the
/// standardized cumulants do not depend on the parameter.
///
/// With `sigma` also parameter-free the bounds are the closed form
/// `g^{-1}(mean - n^(-1/2) sigma eta_nj(x))`; with `sigma(theta)` varying the
/// defining equation `g(theta) + n^(-1/2) sigma(theta) eta_nj(x) = mean` is
/// solved for `theta`, which agrees with the monotone-pivot interval to the
/// root-finder tolerance.
pub fn constant_cumulant_interval(
    model: &dyn CumulantModel,
    sample_mean: f64,
    spec: &ConfidenceSpec,
) -> Result<IntervalResult> {
    let ell = theta_free_cumulants(model, spec.j)?;
    let espec = spec.expansion();
    let eps = 1.0 / (spec.n as f64).sqrt();
    let sigma_const = sigma_if_theta_free(model);

    let mut endpoints = [0.0f64; 2];
    for (slot, &x) in [spec.x1, spec.x2].iter().enumerate() {
        let eta = edgeworth::eta_transform(x, &espec, &ell)?;
        endpoints[slot] = match sigma_const {
            Some(sigma) => {
                let target = sample_mean - eps * sigma * eta;
                model.mean_inverse(target).map_err(|_| Error::OutOfRange {
                    what: "corrected mean quantile",
                    tail: x,
                    value: target,
                })?
            }
            None => {
                let start = model.mean_inverse(sample_mean).map_err(|_| Error::OutOfRange {
                    what: "sample mean",
                    tail: x,
                    value: sample_mean,
                })?;
                let f = |theta: f64| {
                    model.mean(theta) + eps * model.variance(theta).sqrt() * eta - sample_mean
                };
                solve_bracketed(&f, start, model.theta_domain(), eta)?
            }
        };
    }

    let corrections = quantile_correction_magnitudes(spec, &ell)?;
    Ok(orient(Method::ConstantCumulant, spec.j, endpoints[0], endpoints[1], corrections))
}

/// Interval by inverting the monotone pivot
/// `Y_n(theta) = n^(1/2) (mean - g(theta)) / sigma(theta)` at the transformed
/// tail points `eta_nj(x1)`, `eta_nj(x2)`.
///
/// Requires parameter-free standardized cumulants (otherwise `eta_nj` itself
/// depends on `theta`) while `sigma(theta)` may vary. Orientation follows the
/// pivot's monotonicity direction, which is verified on a grid spanning the
/// solved endpoints.
pub fn monotone_pivot_interval(
    model: &dyn CumulantModel,
    samples: &[f64],
    spec: &ConfidenceSpec,
) -> Result<IntervalResult> {
    monotone_pivot_interval_from_mean(model, checked_mean(samples, spec)?, spec)
}

/// Pivot interval from a pre-aggregated sample mean.
pub fn monotone_pivot_interval_from_mean(
    model: &dyn CumulantModel,
    sample_mean: f64,
    spec: &ConfidenceSpec,
) -> Result<IntervalResult> {
    let ell = theta_free_cumulants(model, spec.j)?;
    let espec = spec.expansion();
    let sqrt_n = (spec.n as f64).sqrt();
    let pivot = |theta: f64| sqrt_n * (sample_mean - model.mean(theta)) / model.variance(theta).sqrt();

    let start = model.mean_inverse(sample_mean).map_err(|_| Error::OutOfRange {
        what: "sample mean",
        tail: f64::NAN,
        value: sample_mean,
    })?;

    let mut endpoints = [0.0f64; 2];
    for (slot, &x) in [spec.x1, spec.x2].iter().enumerate() {
        let target = edgeworth::eta_transform(x, &espec, &ell)?;
        let f = |theta: f64| pivot(theta) - target;
        endpoints[slot] = solve_bracketed(&f, start, model.theta_domain(), target)?;
    }

    check_pivot_monotone(&pivot, model, start, endpoints)?;

    let corrections = quantile_correction_magnitudes(spec, &ell)?;
    Ok(orient(Method::MonotonePivot, spec.j, endpoints[0], endpoints[1], corrections))
}

/// The pivot must be strictly monotone over the stretch of parameter space
/// the interval came from; checked on a 21-point grid over the hull of the
/// plug-in estimate and both endpoints.
fn check_pivot_monotone(
    pivot: &dyn Fn(f64) -> f64,
    model: &dyn CumulantModel,
    start: f64,
    endpoints: [f64; 2],
) -> Result<()> {
    let mut lo = start.min(endpoints[0]).min(endpoints[1]);
    let mut hi = start.max(endpoints[0]).max(endpoints[1]);
    let pad = 0.1 * (hi - lo);
    let (dlo, dhi) = model.theta_domain();
    lo = (lo - pad).max(dlo + (lo - dlo) * 1e-6);
    hi = (hi + pad).min(if dhi.is_finite() { dhi - (dhi - hi) * 1e-6 } else { hi + pad });
    if hi <= lo {
        return Ok(()); // degenerate zero-width hull
    }
    let vals: Vec<f64> = (0..21).map(|k| pivot(lo + (hi - lo) * k as f64 / 20.0)).collect();
    let increasing = vals.windows(2).all(|w| w[1] > w[0]);
    let decreasing = vals.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::NonMonotonePivot);
    }
    Ok(())
}

fn checked_mean(samples: &[f64], spec: &ConfidenceSpec) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidSpec("empty sample".into()));
    }
    if samples.len() as u64 != spec.n {
        return Err(Error::InvalidSpec(format!(
            "spec says n = {} but {} observations given",
            spec.n,
            samples.len()
        )));
    }
    Ok(samples.iter().sum::<f64>() / samples.len() as f64)
}

// ------------------------------------------------------- general transform

/// Which derivative source the `Q_i` evaluation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativePath {
    /// Model closed forms when present, finite differences otherwise.
    #[default]
    Auto,
    /// Force Richardson finite differences (used by consistency checks).
    FiniteDifference,
}

fn m_derivs(
    model: &dyn CumulantModel,
    t: f64,
    i: u32,
    order: u32,
    path: DerivativePath,
) -> Result<Vec<f64>> {
    match path {
        DerivativePath::Auto => m_vector_derivatives(model, t, i, order),
        DerivativePath::FiniteDifference => m_vector_derivatives_fd(model, t, i, order),
    }
}

/// Correction polynomial `Q_i(t)` of the parameter-dependent transform, for
/// the tail point `x`:
///
/// ```text
/// Q_1 = -M_1 x
/// Q_2 = -M_2 b_1(x) + x^2 D_t[M_1^2]/2
/// Q_3 = -M_3' b_2(x) + x b_1(x) D_t[M_1 M_2] - x^3 D_t^2[M_1^3]/6
/// ```
///
/// equivalently `Q_1 = -P_1`, `Q_2 = -P_2 - P_1' Q_1`,
/// `Q_3 = -P_3 - P_1' Q_2 - P_2' Q_1 - P_1'' Q_1^2 / 2` with
/// `P_i(t) = M_i(t)' b_{i-1}(x)` - the formal inverse of
/// `u(t) = t + sum n^(-i/2) P_i(t)` through third order.
pub fn q_polynomial(
    model: &dyn CumulantModel,
    t: f64,
    x: f64,
    i: u32,
    path: DerivativePath,
) -> Result<f64> {
    if !(1..=3).contains(&i) {
        return Err(Error::OrderOutOfRange { what: "Q order i", value: i, max: 3 });
    }
    let m1 = m_vector(model, t, 1)?.entries[0];
    match i {
        1 => Ok(-m1 * x),
        2 => {
            let m2 = m_vector(model, t, 2)?.entries[0];
            let d1 = m_derivs(model, t, 1, 1, path)?[0];
            let b1 = edgeworth::b_basis_values(1, x)?[0];
            Ok(-m2 * b1 + x * x * m1 * d1)
        }
        _ => {
            let m2 = m_vector(model, t, 2)?.entries[0];
            let m3 = m_vector(model, t, 3)?.entries;
            let d1 = m_derivs(model, t, 1, 1, path)?[0];
            let dd1 = m_derivs(model, t, 1, 2, path)?[0];
            let d2 = m_derivs(model, t, 2, 1, path)?[0];
            let b1 = edgeworth::b_basis_values(1, x)?[0];
            let b2 = edgeworth::b_basis_values(2, x)?;
            let dot = m3[0] * b2[0] + m3[1] * b2[1];
            let d_m1m2 = d1 * m2 + m1 * d2;
            let d2_m1cubed_over6 = m1 * d1 * d1 + m1 * m1 * dd1 / 2.0;
            Ok(-dot + x * b1 * d_m1m2 - x.powi(3) * d2_m1cubed_over6)
        }
    }
}

/// Parameter-dependent correction transform
/// `S_nxj(t) = t + sum_{i=1}^{j+1} n^(-i/2) Q_i(t)`; `j <= 2`.
pub fn s_transform(
    model: &dyn CumulantModel,
    t: f64,
    x: f64,
    spec: &ExpansionSpec,
    path: DerivativePath,
) -> Result<f64> {
    if spec.j > 2 {
        return Err(Error::OrderOutOfRange {
            what: "general-transform order j",
            value: spec.j,
            max: 2,
        });
    }
    let eps = 1.0 / (spec.n as f64).sqrt();
    let mut acc = t;
    for i in 1..=spec.j + 1 {
        acc += eps.powi(i as i32) * q_polynomial(model, t, x, i, path)?;
    }
    Ok(acc)
}

/// General parameter-dependent interval: endpoints
/// `g^{-1}(S_nxj(mean))` at the two tail points. Supported through `j = 2`.
pub fn general_interval(
    model: &dyn CumulantModel,
    samples: &[f64],
    spec: &ConfidenceSpec,
) -> Result<IntervalResult> {
    general_interval_from_mean(model, checked_mean(samples, spec)?, spec)
}

/// General interval from a pre-aggregated sample mean.
pub fn general_interval_from_mean(
    model: &dyn CumulantModel,
    sample_mean: f64,
    spec: &ConfidenceSpec,
) -> Result<IntervalResult> {
    if spec.j > 2 {
        return Err(Error::OrderOutOfRange {
            what: "general-transform order j",
            value: spec.j,
            max: 2,
        });
    }
    let (rlo, rhi) = model.mean_range();
    if sample_mean.is_nan() || sample_mean <= rlo || sample_mean >= rhi {
        return Err(Error::OutOfRange {
            what: "sample mean",
            tail: f64::NAN,
            value: sample_mean,
        });
    }
    let espec = spec.expansion();
    let eps = 1.0 / (spec.n as f64).sqrt();

    let mut endpoints = [0.0f64; 2];
    let mut corrections = vec![0.0f64; (spec.j + 1) as usize];
    for (slot, &x) in [spec.x1, spec.x2].iter().enumerate() {
        let s = s_transform(model, sample_mean, x, &espec, DerivativePath::Auto)?;
        endpoints[slot] = model.mean_inverse(s).map_err(|_| Error::OutOfRange {
            what: "transformed mean",
            tail: x,
            value: s,
        })?;
        for i in 1..=spec.j + 1 {
            let mag = (eps.powi(i as i32)
                * q_polynomial(model, sample_mean, x, i, DerivativePath::Auto)?)
            .abs();
            let slot_i = (i - 1) as usize;
            corrections[slot_i] = corrections[slot_i].max(mag);
        }
    }
    Ok(orient(Method::GeneralTransform, spec.j, endpoints[0], endpoints[1], corrections))
}

/// Interval scale factor `N_nj(x) = 1 - n^(-1/2) eta_nj(x)` for families
/// whose pivot is `n^(1/2)(theta mean(X) + 1)`: the exponential Lehmann
/// bounds are `N_nj(x) / |mean(X)|`, and `n theta |mean(X)|` has an exact
/// Gamma(n, 1) law, which makes this the bridge to the chi-square oracle
/// (`2n N_nj(-x)` approximates the `Phi(x)` quantile of chi-square with `2n`
/// degrees of freedom).
pub fn pivot_factor(x: f64, spec: &ExpansionSpec, ell: &StandardizedCumulants) -> Result<f64> {
    Ok(1.0 - edgeworth::eta_transform(x, spec, ell)? / (spec.n as f64).sqrt())
}

/// Dispatch by method on a pre-aggregated mean.
pub fn build_interval_from_mean(
    model: &dyn CumulantModel,
    method: Method,
    sample_mean: f64,
    spec: &ConfidenceSpec,
) -> Result<IntervalResult> {
    if spec.j > method.max_order() {
        return Err(Error::OrderOutOfRange {
            what: "expansion order j for method",
            value: spec.j,
            max: method.max_order(),
        });
    }
    match method {
        Method::ConstantCumulant => constant_cumulant_interval(model, sample_mean, spec),
        Method::MonotonePivot => monotone_pivot_interval_from_mean(model, sample_mean, spec),
        Method::GeneralTransform => general_interval_from_mean(model, sample_mean, spec),
    }
}

/// Dispatch by method on raw observations.
pub fn build_interval(
    model: &dyn CumulantModel,
    method: Method,
    samples: &[f64],
    spec: &ConfidenceSpec,
) -> Result<IntervalResult> {
    build_interval_from_mean(model, method, checked_mean(samples, spec)?, spec)
}
