//! Standardized cumulants, the Edgeworth CDF expansion and the
//! Cornish-Fisher quantile transforms.
//!
//! For a statistic `Y_n = n^(1/2) (mean(X) - g(theta)) / sigma(theta)` with
//! standardized cumulants `l_r` of a single observation, this module provides
//!
//! * the Edgeworth series `P(Y_n <= x) = Phi(x) - phi(x) sum n^(-r/2) U_r(x)`,
//! * the normalizing transform `xi_nj(x) = x - sum_{r<=j} n^(-r/2) f_r(x)`,
//! * the quantile transform `eta_nj(y) = y + sum_{r<=j} n^(-r/2) g_r(y)`,
//!
//! where `f_r = beta_r' a_r` and `g_r = beta_r' b_r` are dot products of
//! cumulant monomials `beta_r` against fixed polynomial bases. All bases are
//! held as exact rational polynomials; `xi`/`eta`/CDF evaluation uses cached
//! `f64` coefficient mirrors.
//!
//! Orders through `j = 4` are supported. The coefficient vector `beta_4` has
//! five entries `(l6, -l4^2, -l3*l5, l3^2*l4, -l3^4)` matching the five
//! printed base polynomials of `a_4`/`b_4` and the monomials of `U_4`; the
//! exact series identities in the test suite (mutual inversion of `xi`/`eta`
//! and consistency with the Edgeworth CDF, checked coefficient-by-coefficient
//! over the rationals) pin this down.

use crate::error::{Error, Result};
use crate::poly::{rational, Polynomial, Rational};
use crate::special::{std_normal_cdf, std_normal_pdf};
use once_cell::sync::Lazy;

/// Highest supported expansion order for both the CDF series and the
/// quantile transforms. Coefficients beyond `g_4` are out of scope.
pub const MAX_ORDER: u32 = 4;

/// Standardized cumulants `l_r = kappa_2^(-r/2) kappa_r - delta_{r,2}` of a
/// single observation, stored 1-indexed with `l_1 = l_2 = 0` explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedCumulants {
    /// `ell[r - 1]` holds `l_r`.
    ell: Vec<f64>,
}

impl StandardizedCumulants {
    /// Standardize raw cumulants. `kappa[i]` is `kappa_{i+1}` of `X_1`;
    /// at least `kappa_1` and `kappa_2` must be present and `kappa_2 > 0`.
    ///
    /// `l_1` is identically zero because the expanded statistic is centered
    /// at `g(theta) = E X_1`, and `l_2 = kappa_2/kappa_2 - 1 = 0`.
    pub fn from_kappa(kappa: &[f64]) -> Result<Self> {
        if kappa.len() < 2 {
            return Err(Error::InsufficientCumulants { needed: 2, available: kappa.len() });
        }
        let var = kappa[1];
        if var <= 0.0 || !var.is_finite() {
            return Err(Error::NonPositiveVariance(var));
        }
        if kappa.iter().any(|k| !k.is_finite()) {
            return Err(Error::Domain("cumulants must be finite".into()));
        }
        let sigma = var.sqrt();
        let mut ell = vec![0.0, 0.0];
        for (i, &k) in kappa.iter().enumerate().skip(2) {
            let r = (i + 1) as i32;
            ell.push(k / sigma.powi(r));
        }
        Ok(StandardizedCumulants { ell })
    }

    /// Build directly from `l_3, l_4, ...` (with `l_1 = l_2 = 0` implied).
    pub fn from_ell3(ell3plus: &[f64]) -> Self {
        let mut ell = vec![0.0, 0.0];
        ell.extend_from_slice(ell3plus);
        StandardizedCumulants { ell }
    }

    /// All-zero cumulants of the given length (the normal case).
    pub fn zeros(max_r: usize) -> Self {
        StandardizedCumulants { ell: vec![0.0; max_r.max(2)] }
    }

    /// `l_r`; zero for `r` beyond the stored range is *not* assumed, so this
    /// panics rather than silently extending the expansion.
    pub fn get(&self, r: u32) -> f64 {
        self.ell[(r - 1) as usize]
    }

    /// Largest `r` for which `l_r` is available.
    pub fn max_order(&self) -> u32 {
        self.ell.len() as u32
    }

    /// Error unless `l_3 .. l_{j+2}` are all available.
    pub fn require_order(&self, j: u32) -> Result<()> {
        let needed = (j + 2) as usize;
        if self.ell.len() < needed {
            return Err(Error::InsufficientCumulants { needed, available: self.ell.len() });
        }
        Ok(())
    }
}

/// Which expansion to evaluate: sample size and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionSpec {
    pub n: u64,
    pub j: u32,
}

impl ExpansionSpec {
    pub fn new(n: u64, j: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("sample size n must be >= 1".into()));
        }
        if j > MAX_ORDER {
            return Err(Error::OrderOutOfRange { what: "expansion order j", value: j, max: MAX_ORDER });
        }
        Ok(ExpansionSpec { n, j })
    }

    fn root_n_inv(&self) -> f64 {
        1.0 / (self.n as f64).sqrt()
    }
}

/// Coefficient vector `beta_r` of cumulant monomials, Eq.-ordered to pair
/// with `a_basis(r)` / `b_basis(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaVector {
    pub order: u32,
    pub entries: Vec<f64>,
}

/// `beta_1 = (l3)`, `beta_2 = (l4, -l3^2)`, `beta_3 = (l5, -l3 l4, l3^3)`,
/// `beta_4 = (l6, -l4^2, -l3 l5, l3^2 l4, -l3^4)`.
pub fn beta_vector(r: u32, ell: &StandardizedCumulants) -> Result<BetaVector> {
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(Error::OrderOutOfRange { what: "beta order r", value: r, max: MAX_ORDER });
    }
    ell.require_order(r)?;
    let l3 = ell.get(3);
    let entries = match r {
        1 => vec![l3],
        2 => vec![ell.get(4), -l3 * l3],
        3 => vec![ell.get(5), -l3 * ell.get(4), l3.powi(3)],
        _ => {
            let (l4, l5, l6) = (ell.get(4), ell.get(5), ell.get(6));
            vec![l6, -l4 * l4, -l3 * l5, l3 * l3 * l4, -l3.powi(4)]
        }
    };
    Ok(BetaVector { order: r, entries })
}

fn h(r: u32) -> Polynomial {
    Polynomial::hermite(r)
}

static A_BASIS: Lazy<[Vec<Polynomial>; 4]> = Lazy::new(|| {
    [
        vec![h(2).scale(&rational(1, 6))],
        vec![
            h(3).scale(&rational(1, 24)),
            Polynomial::from_integers(&[0, -7, 0, 4]).scale(&rational(1, 36)),
        ],
        vec![
            h(4).scale(&rational(1, 120)),
            Polynomial::from_integers(&[15, 0, -42, 0, 11]).scale(&rational(1, 144)),
            Polynomial::from_integers(&[52, 0, -187, 0, 69]).scale(&rational(1, 648)),
        ],
        vec![
            h(5).scale(&rational(1, 720)),
            Polynomial::from_integers(&[0, 35, 0, -32, 0, 5]).scale(&rational(1, 384)),
            Polynomial::from_integers(&[0, 51, 0, -48, 0, 7]).scale(&rational(1, 360)),
            Polynomial::from_integers(&[0, 456, 0, -547, 0, 111]).scale(&rational(1, 864)),
            Polynomial::from_integers(&[0, 2473, 0, -3628, 0, 948]).scale(&rational(1, 7776)),
        ],
    ]
});

static B_BASIS: Lazy<[Vec<Polynomial>; 4]> = Lazy::new(|| {
    [
        vec![h(2).scale(&rational(1, 6))],
        vec![
            h(3).scale(&rational(1, 24)),
            Polynomial::from_integers(&[0, -5, 0, 2]).scale(&rational(1, 36)),
        ],
        vec![
            h(4).scale(&rational(1, 120)),
            Polynomial::from_integers(&[2, 0, -5, 0, 1]).scale(&rational(1, 24)),
            Polynomial::from_integers(&[17, 0, -53, 0, 12]).scale(&rational(1, 324)),
        ],
        vec![
            h(5).scale(&rational(1, 720)),
            Polynomial::from_integers(&[0, 29, 0, -24, 0, 3]).scale(&rational(1, 384)),
            Polynomial::from_integers(&[0, 21, 0, -17, 0, 2]).scale(&rational(1, 180)),
            Polynomial::from_integers(&[0, 107, 0, -103, 0, 14]).scale(&rational(1, 288)),
            Polynomial::from_integers(&[0, 1511, 0, -1688, 0, 252]).scale(&rational(1, 7776)),
        ],
    ]
});

static A_F64: Lazy<Vec<Vec<Vec<f64>>>> = Lazy::new(|| {
    A_BASIS.iter().map(|row| row.iter().map(|p| p.to_f64_coeffs()).collect()).collect()
});
static B_F64: Lazy<Vec<Vec<Vec<f64>>>> = Lazy::new(|| {
    B_BASIS.iter().map(|row| row.iter().map(|p| p.to_f64_coeffs()).collect()).collect()
});

/// Basis polynomials `a_r` of the normalizing transform, `1 <= r <= 4`.
pub fn a_basis(r: u32) -> Result<&'static [Polynomial]> {
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(Error::OrderOutOfRange { what: "a-basis order r", value: r, max: MAX_ORDER });
    }
    Ok(&A_BASIS[(r - 1) as usize])
}

/// Basis polynomials `b_r` of the quantile transform, `1 <= r <= 4`.
pub fn b_basis(r: u32) -> Result<&'static [Polynomial]> {
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(Error::OrderOutOfRange { what: "b-basis order r", value: r, max: MAX_ORDER });
    }
    Ok(&B_BASIS[(r - 1) as usize])
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// The entries of `b_r` evaluated at `x` in double precision.
pub fn b_basis_values(r: u32, x: f64) -> Result<Vec<f64>> {
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(Error::OrderOutOfRange { what: "b-basis order r", value: r, max: MAX_ORDER });
    }
    Ok(B_F64[(r - 1) as usize].iter().map(|c| horner(c, x)).collect())
}

/// `f_r(x) = beta_r' a_r(x)` evaluated in double precision.
pub fn f_value(r: u32, ell: &StandardizedCumulants, x: f64) -> Result<f64> {
    let beta = beta_vector(r, ell)?;
    let row = &A_F64[(r - 1) as usize];
    Ok(beta.entries.iter().zip(row).map(|(w, c)| w * horner(c, x)).sum())
}

/// `g_r(y) = beta_r' b_r(y)` evaluated in double precision.
pub fn g_value(r: u32, ell: &StandardizedCumulants, y: f64) -> Result<f64> {
    let beta = beta_vector(r, ell)?;
    let row = &B_F64[(r - 1) as usize];
    Ok(beta.entries.iter().zip(row).map(|(w, c)| w * horner(c, y)).sum())
}

/// The Edgeworth polynomial `U_r` as an exact rational polynomial.
///
/// The `f64` cumulants are converted exactly (every finite double is a
/// rational), so e.g. integer `l` values give the printed fractions verbatim.
pub fn edgeworth_polynomial(r: u32, ell: &StandardizedCumulants) -> Result<Polynomial> {
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(Error::OrderOutOfRange { what: "Edgeworth order r", value: r, max: MAX_ORDER });
    }
    ell.require_order(r)?;
    let rat = |r_idx: u32| -> Rational {
        Rational::from_float(ell.get(r_idx)).expect("finite cumulant")
    };
    let l3 = rat(3);
    let terms: Vec<(Rational, u32, i64)> = match r {
        1 => vec![(l3, 2, 6)],
        2 => {
            let l4 = rat(4);
            vec![(l4, 3, 24), (&l3 * &l3, 5, 72)]
        }
        3 => {
            let (l4, l5) = (rat(4), rat(5));
            vec![(l5, 4, 120), (&l3 * &l4, 6, 144), (&l3 * &l3 * &l3, 8, 1296)]
        }
        _ => {
            let (l4, l5, l6) = (rat(4), rat(5), rat(6));
            vec![
                (l6, 5, 720),
                (&l4 * &l4, 7, 1152),
                (&l3 * &l5, 7, 720),
                (&l3 * &l3 * &l4, 9, 1728),
                (&l3 * &l3 * &l3 * &l3, 11, 31104),
            ]
        }
    };
    let mut acc = Polynomial::zero();
    for (w, deg, den) in terms {
        acc = acc.add(&h(deg).scale(&(w / rational(den, 1))));
    }
    Ok(acc)
}

fn u_value(r: u32, ell: &StandardizedCumulants, x: f64) -> f64 {
    let l3 = ell.get(3);
    match r {
        1 => l3 * hermite_f64(2, x) / 6.0,
        2 => {
            ell.get(4) * hermite_f64(3, x) / 24.0 + l3 * l3 * hermite_f64(5, x) / 72.0
        }
        3 => {
            ell.get(5) * hermite_f64(4, x) / 120.0
                + l3 * ell.get(4) * hermite_f64(6, x) / 144.0
                + l3.powi(3) * hermite_f64(8, x) / 1296.0
        }
        _ => {
            let (l4, l5, l6) = (ell.get(4), ell.get(5), ell.get(6));
            l6 * hermite_f64(5, x) / 720.0
                + l4 * l4 * hermite_f64(7, x) / 1152.0
                + l3 * l5 * hermite_f64(7, x) / 720.0
                + l3 * l3 * l4 * hermite_f64(9, x) / 1728.0
                + l3.powi(4) * hermite_f64(11, x) / 31104.0
        }
    }
}

static HERMITE_F64: Lazy<Vec<Vec<f64>>> =
    Lazy::new(|| (0..=11).map(|r| Polynomial::hermite(r).to_f64_coeffs()).collect());

fn hermite_f64(r: u32, x: f64) -> f64 {
    horner(&HERMITE_F64[r as usize], x)
}

/// Edgeworth CDF value together with a tail diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfValue {
    /// `Phi(x) - phi(x) sum_{r=1}^{j} n^(-r/2) U_r(x)`, not clamped.
    pub value: f64,
    /// True when the raw series value left `[0, 1]` (extreme tails).
    pub outside_unit_interval: bool,
}

/// Edgeworth approximation to `P(Y_n <= x)` of order `j`.
pub fn edgeworth_cdf(x: f64, spec: &ExpansionSpec, ell: &StandardizedCumulants) -> Result<CdfValue> {
    if spec.j > MAX_ORDER {
        return Err(Error::OrderOutOfRange { what: "expansion order j", value: spec.j, max: MAX_ORDER });
    }
    ell.require_order(spec.j)?;
    let eps = spec.root_n_inv();
    let mut sum = 0.0;
    for r in 1..=spec.j {
        sum += eps.powi(r as i32) * u_value(r, ell, x);
    }
    let value = std_normal_cdf(x) - std_normal_pdf(x) * sum;
    Ok(CdfValue { value, outside_unit_interval: !(0.0..=1.0).contains(&value) })
}

/// Normalizing transform `xi_nj(x) = x - sum_{r=1}^{j} n^(-r/2) f_r(x)`.
pub fn xi_transform(x: f64, spec: &ExpansionSpec, ell: &StandardizedCumulants) -> Result<f64> {
    ell.require_order(spec.j)?;
    let eps = spec.root_n_inv();
    let mut acc = x;
    for r in 1..=spec.j {
        acc -= eps.powi(r as i32) * f_value(r, ell, x)?;
    }
    Ok(acc)
}

/// Quantile transform `eta_nj(y) = y + sum_{r=1}^{j} n^(-r/2) g_r(y)`.
pub fn eta_transform(y: f64, spec: &ExpansionSpec, ell: &StandardizedCumulants) -> Result<f64> {
    ell.require_order(spec.j)?;
    let eps = spec.root_n_inv();
    let mut acc = y;
    for r in 1..=spec.j {
        acc += eps.powi(r as i32) * g_value(r, ell, y)?;
    }
    Ok(acc)
}

/// Per-order terms `n^(-r/2) g_r(y)` for `r = 1..=j` (diagnostics).
pub fn eta_terms(y: f64, spec: &ExpansionSpec, ell: &StandardizedCumulants) -> Result<Vec<f64>> {
    ell.require_order(spec.j)?;
    let eps = spec.root_n_inv();
    (1..=spec.j).map(|r| Ok(eps.powi(r as i32) * g_value(r, ell, y)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::combine;

    fn exp_ell() -> StandardizedCumulants {
        // l_r = (-1)^r (r-1)! for r = 3..6
        StandardizedCumulants::from_ell3(&[-2.0, 6.0, -24.0, 120.0])
    }

    #[test]
    fn standardized_cumulants_examples() {
        let l = StandardizedCumulants::from_kappa(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!((l.get(1), l.get(2), l.get(3), l.get(4)), (0.0, 0.0, 0.0, 0.0));

        // exponential Lehmann at theta = 1: kappa_r = (-1)^r (r-1)!
        let l = StandardizedCumulants::from_kappa(&[-1.0, 1.0, -2.0, 6.0]).unwrap();
        assert_eq!((l.get(3), l.get(4)), (-2.0, 6.0));

        let l = StandardizedCumulants::from_kappa(&[5.0, 4.0, 16.0, 0.0]).unwrap();
        assert_eq!((l.get(3), l.get(4)), (2.0, 0.0));
        assert_eq!((l.get(1), l.get(2)), (0.0, 0.0));

        assert!(matches!(
            StandardizedCumulants::from_kappa(&[0.0, -1.0]),
            Err(Error::NonPositiveVariance(_))
        ));
        assert!(matches!(
            StandardizedCumulants::from_kappa(&[0.0]),
            Err(Error::InsufficientCumulants { .. })
        ));
    }

    #[test]
    fn beta_vector_examples() {
        let z = StandardizedCumulants::zeros(3);
        assert_eq!(beta_vector(1, &z).unwrap().entries, vec![0.0]);

        let l = exp_ell();
        assert_eq!(beta_vector(2, &l).unwrap().entries, vec![6.0, -4.0]);
        assert_eq!(beta_vector(3, &l).unwrap().entries, vec![-24.0, 12.0, -8.0]);
        assert_eq!(
            beta_vector(4, &l).unwrap().entries,
            vec![120.0, -36.0, -48.0, 24.0, -16.0]
        );
        assert!(beta_vector(0, &l).is_err());
        assert!(beta_vector(5, &l).is_err());
    }

    #[test]
    fn basis_examples() {
        let a1 = &a_basis(1).unwrap()[0];
        assert_eq!(*a1, Polynomial::hermite(2).scale(&rational(1, 6)));

        // a_2 second entry at x = 1: (4 - 7)/36 = -1/12
        let a22 = &a_basis(2).unwrap()[1];
        assert_eq!(a22.eval_rational(&rational(1, 1)), rational(-1, 12));

        // a_3 first entry is H_4/120
        assert_eq!(a_basis(3).unwrap()[0], Polynomial::hermite(4).scale(&rational(1, 120)));

        let b1 = &b_basis(1).unwrap()[0];
        assert_eq!(*b1, Polynomial::hermite(2).scale(&rational(1, 6)));
        // b_2 second entry at y = 1: (2 - 5)/36 = -1/12
        assert_eq!(b_basis(2).unwrap()[1].eval_rational(&rational(1, 1)), rational(-1, 12));
        // b_3 second entry at y = 0: 2/24 = 1/12
        assert_eq!(b_basis(3).unwrap()[1].eval_rational(&rational(0, 1)), rational(1, 12));

        assert!(a_basis(0).is_err() && a_basis(5).is_err());
        assert!(b_basis(0).is_err() && b_basis(5).is_err());

        // lengths match the beta vectors
        for r in 1..=4u32 {
            let len = beta_vector(r, &exp_ell()).unwrap().entries.len();
            assert_eq!(a_basis(r).unwrap().len(), len);
            assert_eq!(b_basis(r).unwrap().len(), len);
        }
    }

    #[test]
    fn edgeworth_polynomial_examples() {
        let z = StandardizedCumulants::zeros(3);
        assert!(edgeworth_polynomial(1, &z).unwrap().is_zero());

        // l3 = -2: U_1 = -(x^2 - 1)/3
        let l = exp_ell();
        let u1 = edgeworth_polynomial(1, &l).unwrap();
        assert_eq!(u1, Polynomial::hermite(2).scale(&rational(-1, 3)));

        // l3 = -2, l4 = 6: U_2 = H_3/4 + H_5/18
        let u2 = edgeworth_polynomial(2, &l).unwrap();
        let want = combine(
            &[rational(1, 4), rational(1, 18)],
            &[Polynomial::hermite(3), Polynomial::hermite(5)],
        )
        .unwrap();
        assert_eq!(u2, want);
    }

    #[test]
    fn edgeworth_cdf_examples() {
        let spec0 = ExpansionSpec::new(50, 0).unwrap();
        let any = exp_ell();
        assert_eq!(edgeworth_cdf(0.0, &spec0, &any).unwrap().value, 0.5);

        // all-zero cumulants reduce to Phi at every order
        let z = StandardizedCumulants::zeros(6);
        for j in 0..=4 {
            let spec = ExpansionSpec::new(20, j).unwrap();
            for &x in &[-2.0, -0.3, 0.7, 1.9] {
                assert_eq!(edgeworth_cdf(x, &spec, &z).unwrap().value, std_normal_cdf(x));
            }
        }

        // H_2(1) = 0 kills the first-order term at x = 1
        let spec1 = ExpansionSpec::new(20, 1).unwrap();
        let got = edgeworth_cdf(1.0, &spec1, &any).unwrap();
        assert!((got.value - std_normal_cdf(1.0)).abs() < 1e-15);
        assert!((got.value - 0.841345).abs() < 5e-7);
        assert!(!got.outside_unit_interval);

        // deep tail with big corrections can leave [0,1]; flag reports it
        let heavy = StandardizedCumulants::from_ell3(&[8.0]);
        let small = ExpansionSpec::new(2, 1).unwrap();
        let v = edgeworth_cdf(-3.5, &small, &heavy).unwrap();
        assert!(v.outside_unit_interval);
    }

    #[test]
    fn xi_eta_examples() {
        let l = exp_ell();
        let spec0 = ExpansionSpec::new(25, 0).unwrap();
        assert_eq!(xi_transform(1.7, &spec0, &l).unwrap(), 1.7);
        assert_eq!(eta_transform(1.7, &spec0, &l).unwrap(), 1.7);

        let spec1 = ExpansionSpec::new(25, 1).unwrap();
        // xi = 1.96 + (1/5) * 2 * (1.96^2 - 1)/6 = 2.14944
        let xi = xi_transform(1.96, &spec1, &l).unwrap();
        assert!((xi - 2.14944).abs() < 1e-12, "{xi}");
        // eta = 1.96 - (1/5) * 2 * (1.96^2 - 1)/6 = 1.77056
        let eta = eta_transform(1.96, &spec1, &l).unwrap();
        assert!((eta - 1.77056).abs() < 1e-12, "{eta}");

        // H_2(0) = -1: xi(0) = c/(6 sqrt(n))
        for &c in &[-1.5, 0.4, 3.0] {
            let lc = StandardizedCumulants::from_ell3(&[c]);
            let spec = ExpansionSpec::new(49, 1).unwrap();
            let got = xi_transform(0.0, &spec, &lc).unwrap();
            assert!((got - c / (6.0 * 7.0)).abs() < 1e-15);
        }

        // zero cumulants: both transforms are the identity at every order
        let z = StandardizedCumulants::zeros(6);
        for j in 0..=4 {
            let spec = ExpansionSpec::new(30, j).unwrap();
            for &x in &[-1.3, 0.0, 0.8, 2.2] {
                assert_eq!(xi_transform(x, &spec, &z).unwrap(), x);
                assert_eq!(eta_transform(x, &spec, &z).unwrap(), x);
            }
        }
    }

    #[test]
    fn f1_equals_g1() {
        // first-order direct and inverse corrections coincide exactly
        assert_eq!(a_basis(1).unwrap(), b_basis(1).unwrap());
    }

    #[test]
    fn spec_validation() {
        assert!(ExpansionSpec::new(0, 1).is_err());
        assert!(ExpansionSpec::new(10, 5).is_err());
        let l = StandardizedCumulants::from_ell3(&[1.0]); // only l_3
        let spec = ExpansionSpec::new(10, 2).unwrap(); // needs l_4
        assert!(matches!(
            eta_transform(1.0, &spec, &l),
            Err(Error::InsufficientCumulants { .. })
        ));
    }
}
