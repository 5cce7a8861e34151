//! Efficiency and robustness of the mean-based estimate: influence function,
//! asymptotic variance and efficiency relative to the maximum-likelihood
//! choice of transform.
//!
//! Observations `Y ~ R(y, theta)` are mapped through a one-to-one increasing
//! transform `h` to `X = h(Y)` with distribution `F(x, theta) = R(h^{-1}(x), theta)`;
//! the parameter is estimated through the plug-in `theta_hat = g^{-1}(mean(X))`.
//! Its influence function is `I_theta(x) = (h(x) - g(theta)) / g'(theta)` and
//! `n^(1/2)(theta_hat - theta)` is asymptotically normal with variance
//! `V(theta, h) = sigma(theta)^2 / g'(theta)^2`, so a bounded `h` buys outlier
//! robustness at the price of efficiency. `V` is minimized by taking `h` to
//! be Fisher's score, which the maximum-likelihood estimate realizes.
//!
//! Everything here is univariate; the built-in families live on the real
//! line and `h` is the identity on the already-transformed scale.

use crate::error::{Error, Result};
use crate::models::{CumulantModel, ExpLehmann, PowerLehmann};

type Fn1 = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type Fn2 = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A base family together with the transform that produces the mean-based
/// estimating model.
pub struct TransformedFamily {
    model: Box<dyn CumulantModel>,
    transform: Fn1,
    transform_bounded: bool,
    /// Integration window carrying all but < 1e-12 of the mass at `theta`.
    effective_support: Fn1Pair,
    mle_variance: Option<Fn1>,
    fisher_score: Option<Fn2>,
}

type Fn1Pair = Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>;

impl TransformedFamily {
    /// Exponential-base Lehmann family; `h` is the identity on the
    /// `(-inf, 0]` scale (the score transform, hence unbounded influence and
    /// full efficiency).
    pub fn exp_lehmann() -> Self {
        TransformedFamily {
            model: Box::new(ExpLehmann::new()),
            transform: Box::new(|x| x),
            transform_bounded: false,
            // P(X < -L) = exp(-theta L) < 1e-12 at L = 30/theta
            effective_support: Box::new(|theta: f64| (-30.0 / theta, 0.0)),
            mle_variance: None, // maximum-likelihood estimate coincides with the plug-in
            fisher_score: Some(Box::new(|x: f64, theta: f64| 1.0 / theta + x)),
        }
    }

    /// Power-base Lehmann family on `[0, 1]`; bounded transform, efficiency
    /// `1 - (nu theta + 1)^{-2}` relative to maximum likelihood.
    pub fn power_lehmann(nu: f64) -> Result<Self> {
        let model = PowerLehmann::new(nu)?;
        Ok(TransformedFamily {
            model: Box::new(model),
            transform: Box::new(|x| x),
            transform_bounded: true,
            effective_support: Box::new(|_| (0.0, 1.0)),
            mle_variance: Some(Box::new(|theta: f64| theta * theta)),
            fisher_score: Some(Box::new(move |x: f64, theta: f64| 1.0 / theta + nu * x.ln())),
        })
    }

    /// Assemble a family from parts (the induced model is the distribution of
    /// `h(Y)`; callers are responsible for that consistency, which
    /// `mean_map_consistent` probes).
    pub fn custom(
        model: Box<dyn CumulantModel>,
        transform: Fn1,
        transform_bounded: bool,
        effective_support: Fn1Pair,
        mle_variance: Option<Fn1>,
    ) -> Self {
        TransformedFamily {
            model,
            transform,
            transform_bounded,
            effective_support,
            mle_variance,
            fisher_score: None,
        }
    }

    pub fn model(&self) -> &dyn CumulantModel {
        self.model.as_ref()
    }

    /// Whether the transform (hence the influence function) is bounded on
    /// the support.
    pub fn influence_bounded(&self) -> bool {
        self.transform_bounded
    }

    /// Fisher score `q_theta(x)`, available for the Lehmann built-ins.
    pub fn fisher_score(&self, x: f64, theta: f64) -> Option<f64> {
        self.fisher_score.as_ref().map(|q| q(x, theta))
    }

    fn gdot_checked(&self, theta: f64) -> Result<f64> {
        let gdot = self.model.mean_derivative(theta);
        if gdot == 0.0 || !gdot.is_finite() {
            return Err(Error::Domain(format!(
                "mean map has zero or non-finite derivative at theta = {theta}"
            )));
        }
        Ok(gdot)
    }

    /// Influence function `I_theta(x) = (h(x) - g(theta)) / g'(theta)`
    /// evaluated at the model distribution.
    pub fn influence_value(&self, x: f64, theta: f64) -> Result<f64> {
        let gdot = self.gdot_checked(theta)?;
        Ok(((self.transform)(x) - self.model.mean(theta)) / gdot)
    }

    /// Asymptotic variance `V(theta, h) = sigma(theta)^2 / g'(theta)^2`.
    pub fn asymptotic_variance(&self, theta: f64) -> Result<f64> {
        let gdot = self.gdot_checked(theta)?;
        Ok(self.model.variance(theta) / (gdot * gdot))
    }

    /// The same variance through the defining integral
    /// `int I_theta(x)^2 dF(x, theta)` (adaptive quadrature, abs tol 1e-10).
    pub fn asymptotic_variance_quadrature(&self, theta: f64) -> Result<f64> {
        let gdot = self.gdot_checked(theta)?;
        let g = self.model.mean(theta);
        let (lo, hi) = (self.effective_support)(theta);
        let f = |x: f64| {
            let i = ((self.transform)(x) - g) / gdot;
            i * i * self.model.pdf(x, theta)
        };
        Ok(integrate(&f, lo, hi, 1e-10))
    }

    /// Mean of the influence function under the model (zero in exact
    /// arithmetic; exposed for diagnostics).
    pub fn influence_mean(&self, theta: f64) -> Result<f64> {
        let gdot = self.gdot_checked(theta)?;
        let g = self.model.mean(theta);
        let (lo, hi) = (self.effective_support)(theta);
        let f = |x: f64| ((self.transform)(x) - g) / gdot * self.model.pdf(x, theta);
        Ok(integrate(&f, lo, hi, 1e-10))
    }

    /// Efficiency of the mean-based estimate relative to maximum likelihood,
    /// `V_mle(theta) / V(theta, h)`, in `(0, 1]`.
    ///
    /// For the exponential family the maximum-likelihood estimate *is* the
    /// plug-in estimate (`h` is the score transform), so the ratio is
    /// identically one.
    pub fn relative_efficiency(&self, theta: f64) -> Result<f64> {
        let v = self.asymptotic_variance(theta)?;
        if v == 0.0 {
            return Err(Error::Domain("asymptotic variance is zero".into()));
        }
        match &self.mle_variance {
            None => Ok(1.0),
            Some(mle) => Ok(mle(theta) / v),
        }
    }

    /// `|g(theta) - int h(y) dR(y, theta)|` on a small parameter grid; the
    /// induced model's mean map must reproduce the transformed-mean integral.
    pub fn mean_map_consistent(&self, thetas: &[f64], tol: f64) -> Result<bool> {
        for &theta in thetas {
            let (lo, hi) = (self.effective_support)(theta);
            let f = |x: f64| (self.transform)(x) * self.model.pdf(x, theta);
            let integral = integrate(&f, lo, hi, 1e-10);
            if (integral - self.model.mean(theta)).abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// ------------------------------------------------------------------ quadrature

/// 12-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
fn gauss_nodes() -> &'static [(f64, f64); 12] {
    use once_cell::sync::Lazy;
    static NODES: Lazy<[(f64, f64); 12]> = Lazy::new(|| {
        let n = 12usize;
        let mut out = [(0.0f64, 0.0f64); 12];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    });
    &NODES
}

/// Legendre `P_n` and its derivative at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    gauss_nodes().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Adaptive quadrature with interval-halving error control: a panel is
/// accepted when the whole-panel rule matches the sum of its halves within
/// the local tolerance share.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gauss_panel(f, a, mid);
        let right = gauss_panel(f, mid, b);
        let err = (left + right - whole).abs();
        if err <= tol || depth >= 40 {
            return left + right;
        }
        recurse(f, a, mid, left, 0.5 * tol, depth + 1)
            + recurse(f, mid, b, right, 0.5 * tol, depth + 1)
    }
    let whole = gauss_panel(f, a, b);
    recurse(f, a, b, whole, abs_tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_smoke() {
        let got = integrate(&|x: f64| x * x, 0.0, 3.0, 1e-12);
        assert!((got - 9.0).abs() < 1e-12);
        let got = integrate(&|x: f64| (-x).exp(), 0.0, 40.0, 1e-12);
        assert!((got - 1.0).abs() < 1e-11);
        let got = integrate(&|x: f64| 1.0 / (1.0 + x * x), -1.0, 1.0, 1e-12);
        assert!((got - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn influence_examples() {
        // mean point has zero influence
        let fam = TransformedFamily::power_lehmann(2.0).unwrap();
        let g = fam.model().mean(1.0);
        assert!(fam.influence_value(g, 1.0).unwrap().abs() < 1e-14);

        // exponential family at theta = 1: I(x) = x + 1
        let exp = TransformedFamily::exp_lehmann();
        for &x in &[-3.0, -1.0, -0.2] {
            assert!((exp.influence_value(x, 1.0).unwrap() - (x + 1.0)).abs() < 1e-14);
        }

        // boundedness flags
        assert!(!exp.influence_bounded());
        assert!(fam.influence_bounded());
    }

    #[test]
    fn asymptotic_variance_examples() {
        let exp = TransformedFamily::exp_lehmann();
        assert!((exp.asymptotic_variance(1.0).unwrap() - 1.0).abs() < 1e-14);

        // power family nu = 1, theta = 1: V = (1/12)/(1/16) = 4/3
        let pw = TransformedFamily::power_lehmann(1.0).unwrap();
        let v = pw.asymptotic_variance(1.0).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn quadrature_path_agrees_with_closed_form() {
        let fams = [TransformedFamily::exp_lehmann(), TransformedFamily::power_lehmann(2.0).unwrap()];
        for fam in &fams {
            for &theta in &[0.5, 1.0, 3.0] {
                let closed = fam.asymptotic_variance(theta).unwrap();
                let quad = fam.asymptotic_variance_quadrature(theta).unwrap();
                assert!(
                    (closed - quad).abs() <= 1e-6 * closed.abs(),
                    "{}: theta = {theta}: {closed} vs {quad}",
                    fam.model().name()
                );
            }
        }
    }

    #[test]
    fn influence_has_zero_mean() {
        let fams = [TransformedFamily::exp_lehmann(), TransformedFamily::power_lehmann(2.0).unwrap()];
        for fam in &fams {
            for &theta in &[0.5, 1.0, 3.0] {
                let m = fam.influence_mean(theta).unwrap();
                assert!(m.abs() < 1e-8, "{}: theta = {theta}: {m}", fam.model().name());
            }
        }
    }

    #[test]
    fn relative_efficiency_examples() {
        let exp = TransformedFamily::exp_lehmann();
        assert_eq!(exp.relative_efficiency(2.0).unwrap(), 1.0);

        let pw = TransformedFamily::power_lehmann(2.0).unwrap();
        let eff = pw.relative_efficiency(1.0).unwrap();
        assert!((eff - 8.0 / 9.0).abs() < 1e-13, "{eff}");

        // nu theta -> infinity: efficiency -> 1
        let pw100 = TransformedFamily::power_lehmann(100.0).unwrap();
        let eff = pw100.relative_efficiency(1.0).unwrap();
        assert!((eff - (1.0 - 101.0f64.powi(-2))).abs() < 1e-12);

        // efficiency formula on a grid, and confined to (0, 1]
        for &nu in &[0.5, 2.0, 7.0] {
            let fam = TransformedFamily::power_lehmann(nu).unwrap();
            for &theta in &[0.3, 1.0, 4.0] {
                let eff = fam.relative_efficiency(theta).unwrap();
                let want = 1.0 - (nu * theta + 1.0).powi(-2);
                assert!((eff - want).abs() <= 1e-12 * want);
                assert!(eff > 0.0 && eff <= 1.0);
            }
        }
    }

    #[test]
    fn mean_map_matches_transform_integral() {
        let fams = [TransformedFamily::exp_lehmann(), TransformedFamily::power_lehmann(2.0).unwrap()];
        for fam in &fams {
            assert!(fam.mean_map_consistent(&[0.5, 1.0, 2.0], 1e-10).unwrap());
        }
    }

    #[test]
    fn fisher_score_shapes() {
        let exp = TransformedFamily::exp_lehmann();
        assert!((exp.fisher_score(-0.5, 2.0).unwrap() - 0.0).abs() < 1e-15);
        let pw = TransformedFamily::power_lehmann(2.0).unwrap();
        let q = pw.fisher_score(0.5, 1.0).unwrap();
        assert!((q - (1.0 + 2.0 * 0.5f64.ln())).abs() < 1e-15);
    }
}
