//! Standard-normal and incomplete-gamma kernels.
//!
//! Self-contained double-precision implementations: the normal CDF is routed
//! through the regularized incomplete gamma (`Phi(-|x|) = Q(1/2, x^2/2) / 2`),
//! which is computed by the classic series / continued-fraction split with a
//! Lanczos log-gamma. Relative accuracy is at the 1e-15 level across the
//! range used here, including deep tails (checked against 40-digit reference
//! values in the tests); crate-level accuracy requirements are Phi to 1e-14
//! relative and the gamma CDF to 1e-12.

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI_HALF: f64 = 0.572_364_942_924_700_1; // ln Gamma(1/2)

/// Log-gamma by the nine-term Lanczos sum (g = 7); relative error on Gamma
/// below 1e-13 for positive arguments.
pub fn ln_gamma(z: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z == 0.5 {
        return LN_PI_HALF;
    }
    if z == 1.0 || z == 2.0 {
        return 0.0;
    }
    if z < 0.5 {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::f64::consts::PI.ln() - (std::f64::consts::PI * z).sin().ln()
            - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + 7.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Series for P(a, x), valid (and used) for x < a + 1:
/// `P = x^a e^{-x} / Gamma(a) * sum_k x^k / (a (a+1) ... (a+k))`.
fn gamma_p_series(a: f64, x: f64, log_prefactor: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    let cap = 1000 + 8 * (a.sqrt() as usize);
    for _ in 0..cap {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    (log_prefactor + sum.ln()).exp()
}

/// Modified Lentz continued fraction for Q(a, x), used for x >= a + 1:
/// `Q = x^a e^{-x} / Gamma(a) * 1 / (x + 1 - a + K_n(n(a - n) / (x + 2n + 1 - a)))`.
fn gamma_q_cf(a: f64, x: f64, log_prefactor: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut f = d;
    let cap = 1000 + 8 * (a.sqrt() as usize);
    for n in 1..=cap {
        let an = n as f64 * (a - n as f64);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (log_prefactor + f.ln()).exp()
}

/// `a ln x - x - ln Gamma(a)` without large-log cancellation: for big shapes
/// the Stirling-centered form `a (ln1p(u) - u) + ln(a/2pi)/2 - S(a)` with
/// `u = (x-a)/a` keeps the absolute error near machine epsilon even when the
/// raw logs are of order 1e5.
fn log_prefactor(a: f64, x: f64) -> f64 {
    if a < 15.0 {
        return a * x.ln() - x - ln_gamma(a);
    }
    let u = (x - a) / a;
    let tail = {
        let a2 = a * a;
        (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * a2)) / a2) / a2) / a
    };
    a * (u.ln_1p() - u) + 0.5 * (a / (2.0 * std::f64::consts::PI)).ln() - tail
}

fn gamma_pair(a: f64, x: f64) -> (f64, f64) {
    debug_assert!(a > 0.0, "gamma shape must be positive");
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    let log_prefactor = log_prefactor(a, x);
    if x < a + 1.0 {
        let p = gamma_p_series(a, x, log_prefactor);
        (p, 1.0 - p)
    } else {
        let q = gamma_q_cf(a, x, log_prefactor);
        (1.0 - q, q)
    }
}

/// Regularized lower incomplete gamma P(a, x): CDF of Gamma(a, rate 1).
pub fn reg_gamma_lower(a: f64, x: f64) -> f64 {
    gamma_pair(a, x).0
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn reg_gamma_upper(a: f64, x: f64) -> f64 {
    gamma_pair(a, x).1
}

/// Standard normal CDF. The tail is `Q(1/2, x^2/2) / 2`, so the relative
/// error stays at machine level arbitrarily far out.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let tail = 0.5 * reg_gamma_upper(0.5, 0.5 * x * x);
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal quantile for `p` in (0, 1): Acklam's rational
/// approximation polished by two Newton steps on the CDF above.
pub fn std_normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0,1), got {p}");
    let mut x = acklam(p);
    for _ in 0..2 {
        let d = std_normal_pdf(x);
        if d <= 0.0 {
            break;
        }
        // tail-stable residual: compare on the smaller of the two tails
        let (err, slope) = if x < 0.0 {
            (std_normal_cdf(x) - p, d)
        } else {
            ((1.0 - p) - std_normal_cdf(-x), d)
        };
        x -= err / slope;
    }
    x
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -39.696_830_286_653_8,
        220.946_098_424_521,
        -275.928_510_446_969,
        138.357_751_867_269,
        -30.664_798_066_147_2,
        2.506_628_277_459_24,
    ];
    const B: [f64; 5] = [
        -54.476_098_798_224_1,
        161.585_836_858_041,
        -155.698_979_859_887,
        66.801_311_887_719_7,
        -13.280_681_552_885_7,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_29e-3,
        -0.322_396_458_041_136,
        -2.400_758_277_161_84,
        -2.549_732_539_343_73,
        4.374_664_141_464_97,
        2.938_163_982_698_78,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_46e-3,
        0.322_467_129_070_04,
        2.445_134_137_143,
        3.754_408_661_907_42,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}
