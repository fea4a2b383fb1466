//! Self-contained special-function kernel.
//!
//! Everything the statistical layers need lives here: the log-gamma family,
//! regularized incomplete gammas (series + continued fraction), the Kummer
//! confluent hypergeometric ₁F₁, and the two-variable hypergeometric double
//! series that evaluates the product-channel CDF.
//!
//! All routines are pure `f64` functions; extended precision appears only in
//! the frozen reference values of the tests.

use crate::error::{Error, Result};

/// Convergence control for the series evaluators.
///
/// `rel_tol` is the relative tail tolerance, `max_terms` caps each summation
/// index before a [`Error::NonConvergence`] is raised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    /// Validated constructor: `rel_tol` in (0, 1e-3], `max_terms` >= 64.
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(Error::domain(
                "SeriesControl",
                format!("rel_tol {rel_tol} outside (0, 1e-3]"),
            ));
        }
        if max_terms < 64 {
            return Err(Error::domain(
                "SeriesControl",
                format!("max_terms {max_terms} < 64"),
            ));
        }
        Ok(SeriesControl { rel_tol, max_terms })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 50_000,
        }
    }
}

/// Compensated (Kahan) accumulator. The alternating series below mix terms of
/// very different magnitude; straight summation costs several digits.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

// ---------------------------------------------------------------------------
// gamma family
// ---------------------------------------------------------------------------

// Lanczos approximation, g = 7, 9 coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the Lanczos argument away from the poles
        let s = (std::f64::consts::PI * x).sin();
        std::f64::consts::PI.ln() - s.ln() - ln_gamma_unchecked(1.0 - x)
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be > 0")));
    }
    Ok(ln_gamma_unchecked(x))
}

/// Pochhammer symbol (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..n {
        p *= a + i as f64;
    }
    p
}

const GAMMA_ITMAX: usize = 600;

/// P(a, x): series expansion, accurate for x < a + 1.
fn lower_gamma_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..GAMMA_ITMAX {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * f64::EPSILON {
            return Ok(sum * (a * x.ln() - x - ln_gamma_unchecked(a)).exp());
        }
    }
    Err(Error::NonConvergence {
        op: "reg_lower_gamma",
        terms: GAMMA_ITMAX,
        rel_tol: f64::EPSILON,
    })
}

/// Q(a, x): modified-Lentz continued fraction, accurate for x >= a + 1.
fn upper_gamma_cf(a: f64, x: f64) -> Result<f64> {
    const FPMIN: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=GAMMA_ITMAX {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h * (a * x.ln() - x - ln_gamma_unchecked(a)).exp());
        }
    }
    Err(Error::NonConvergence {
        op: "reg_upper_gamma",
        terms: GAMMA_ITMAX,
        rel_tol: f64::EPSILON,
    })
}

fn check_inc_gamma_args(op: &'static str, a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(op, format!("a = {a} must be > 0")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(op, format!("x = {x} must be >= 0")));
    }
    Ok(())
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
///
/// Series for x < a + 1, continued fraction otherwise, so the small side is
/// always computed directly at full relative precision.
pub fn reg_upper_gamma(a: f64, x: f64) -> Result<f64> {
    check_inc_gamma_args("reg_upper_gamma", a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - lower_gamma_series(a, x)?)
    } else {
        upper_gamma_cf(a, x)
    }
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a) = 1 - Q(a, x).
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    check_inc_gamma_args("reg_lower_gamma", a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        lower_gamma_series(a, x)
    } else {
        Ok(1.0 - upper_gamma_cf(a, x)?)
    }
}

// ---------------------------------------------------------------------------
// Kummer confluent hypergeometric ₁F₁
// ---------------------------------------------------------------------------

fn kummer_series(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut sum = Kahan::default();
    sum.add(1.0);
    let mut term = 1.0f64;
    let mut small = 0;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum.add(term);
        // two consecutive small terms: guards the alternating case where a
        // single term can dip below tolerance before the series has decayed
        if term.abs() <= ctl.rel_tol * sum.value().abs().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 {
                return Ok(sum.value());
            }
        } else {
            small = 0;
        }
        if term == 0.0 {
            return Ok(sum.value()); // terminating (a a nonpositive integer)
        }
    }
    Err(Error::NonConvergence {
        op: "kummer_1f1",
        terms: ctl.max_terms,
        rel_tol: ctl.rel_tol,
    })
}

/// ln ₁F₁(a; b; z) for z >= 0 and a, b > 0 (all series terms positive).
///
/// Direct series up to z = 600; beyond that the large-argument expansion
/// ₁F₁ ~ Γ(b)/Γ(a) e^z z^{a-b} Σ (b-a)_k (1-a)_k / (k! z^k).
pub(crate) fn ln_kummer_1f1_pos(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    debug_assert!(z >= 0.0 && a > 0.0 && b > 0.0);
    if z == 0.0 {
        return Ok(0.0);
    }
    if z <= 600.0 {
        return Ok(kummer_series(a, b, z, ctl)?.ln());
    }
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 0..64u32 {
        let kf = k as f64;
        let next = term * (b - a + kf) * (1.0 - a + kf) / ((kf + 1.0) * z);
        if next.abs() >= prev {
            break; // asymptotic series: truncate at the smallest term
        }
        sum += next;
        prev = next.abs();
        term = next;
        if next.abs() <= ctl.rel_tol * sum.abs() {
            break;
        }
    }
    Ok(ln_gamma_unchecked(b) - ln_gamma_unchecked(a) + z + (a - b) * z.ln() + sum.ln())
}

/// Kummer confluent hypergeometric function ₁F₁(a; b; z).
///
/// Power series with incremental term recurrence; for z < -30 the Kummer
/// transform ₁F₁(a; b; z) = e^z ₁F₁(b-a; b; -z) avoids the catastrophic
/// cancellation of the alternating series.
pub fn kummer_1f1(a: f64, b: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    if b <= 0.0 && b == b.floor() {
        return Err(Error::domain(
            "kummer_1f1",
            format!("b = {b} is a nonpositive integer"),
        ));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < -30.0 {
        let zp = -z;
        if a > 0.0 && b > a && zp > 600.0 {
            return Ok((z + ln_kummer_1f1_pos(b - a, b, zp, ctl)?).exp());
        }
        return Ok(z.exp() * kummer_series(b - a, b, zp, ctl)?);
    }
    if z > 600.0 && a > 0.0 && b > 0.0 {
        return Ok(ln_kummer_1f1_pos(a, b, z, ctl)?.exp());
    }
    kummer_series(a, b, z, ctl)
}

// ---------------------------------------------------------------------------
// two-variable double series (product-channel statistics)
// ---------------------------------------------------------------------------

/// Two-variable hypergeometric double series (Lauricella-type)
///
/// L(k1, k2, u, v) = (1/K) Σ_n Σ_m [(K)_{m+n}/(K+1)_{m+n}] [(k1)_n/(K)_n]
///                    u^n v^m / (n! m!),   K = k1 + k2,
///
/// equivalently Σ_{n,m} (k1)_n u^n v^m / ((K)_n n! m! (K+n+m)). The series is
/// entire in both variables, but the floating-point cancellation of the
/// alternating terms grows like e^{|u|+|v|}, so two evaluation paths are
/// used:
///
/// - small arguments: direct triangular summation over anti-diagonals
///   j = n + m with compensated accumulation, stopping after three
///   consecutive anti-diagonal contributions fall below `rel_tol`;
/// - large arguments: the algebraically equivalent positive-term expansion
///   L = Γ(K) y^{-K} Σ_n [(k1)_n δ^n / n!] P(K+n, y) with y = -v and
///   δ = u/y, after normalising the sign of u through the swap identity
///   L(k1, k2, u, v) = L(k2, k1, -u, u+v).
///
/// Both paths honour `ctl` and raise [`Error::NonConvergence`] when the term
/// cap is exhausted.
pub fn lauricella_ha_series(k1: f64, k2: f64, u: f64, v: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(k1 > 0.0 && k2 > 0.0) {
        return Err(Error::domain(
            "lauricella_ha_series",
            format!("shape parameters must be positive (k1 = {k1}, k2 = {k2})"),
        ));
    }
    if !u.is_finite() || !v.is_finite() {
        return Err(Error::domain(
            "lauricella_ha_series",
            format!("arguments must be finite (u = {u}, v = {v})"),
        ));
    }
    if u == 0.0 && v == 0.0 {
        return Ok(1.0 / (k1 + k2));
    }
    if u.abs() <= 0.9 && v.abs() <= 12.0 && (u + v).abs() <= 12.0 {
        l_direct(k1, k2, u, v, ctl)
    } else {
        l_mixture(k1, k2, u, v, ctl)
    }
}

/// Direct triangular summation of the double series.
fn l_direct(k1: f64, k2: f64, u: f64, v: f64, ctl: &SeriesControl) -> Result<f64> {
    let kk = k1 + k2;
    // a[n] = (k1)_n u^n / ((K)_n n!),  b[m] = v^m / m!
    let mut a = vec![1.0f64];
    let mut b = vec![1.0f64];
    let mut total = Kahan::default();
    let mut consecutive_small = 0;
    let cap = 2 * ctl.max_terms;
    for j in 0..cap {
        if j > 0 {
            let jf = j as f64;
            let an = a[j - 1] * (k1 + jf - 1.0) * u / ((kk + jf - 1.0) * jf);
            let bm = b[j - 1] * v / jf;
            a.push(an);
            b.push(bm);
        }
        let mut diag = Kahan::default();
        for n in 0..=j {
            diag.add(a[n] * b[j - n]);
        }
        // (1/K) (K)_j/(K+1)_j = 1/(K+j)
        let contrib = diag.value() / (kk + j as f64);
        total.add(contrib);
        if contrib.abs() <= ctl.rel_tol * total.value().abs().max(f64::MIN_POSITIVE) {
            consecutive_small += 1;
            if consecutive_small >= 3 {
                return Ok(total.value());
            }
        } else {
            consecutive_small = 0;
        }
    }
    Err(Error::NonConvergence {
        op: "lauricella_ha_series",
        terms: cap,
        rel_tol: ctl.rel_tol,
    })
}

/// Positive-term path: mixture of regularized lower incomplete gammas.
fn l_mixture(k1: f64, k2: f64, u: f64, v: f64, ctl: &SeriesControl) -> Result<f64> {
    // normalise to u >= 0
    let (k1, k2, u, v) = if u < 0.0 {
        (k2, k1, -u, u + v)
    } else {
        (k1, k2, u, v)
    };
    if !(v < 0.0) {
        return Err(Error::NonConvergence {
            op: "lauricella_ha_series",
            terms: 0,
            rel_tol: ctl.rel_tol,
        });
    }
    let y = -v;
    let delta = u / y;
    let kk = k1 + k2;
    if delta >= 1.0 {
        return Err(Error::NonConvergence {
            op: "lauricella_ha_series",
            terms: 0,
            rel_tol: ctl.rel_tol,
        });
    }
    let total_weight = (1.0 - delta).powf(-k1);
    if !total_weight.is_finite() {
        return Err(Error::NonConvergence {
            op: "lauricella_ha_series",
            terms: 0,
            rel_tol: ctl.rel_tol,
        });
    }
    let mut sum = Kahan::default();
    let mut weight = 1.0f64;
    let mut weight_sum = 0.0f64;
    for n in 0..ctl.max_terms {
        let p = reg_lower_gamma(kk + n as f64, y)?;
        sum.add(weight * p);
        weight_sum += weight;
        // P(K+n, y) decreases with n, so the unsummed weight mass bounds the
        // tail; once past the weight peak a geometric bound takes over (the
        // mass difference bottoms out at the rounding floor of weight_sum)
        let next = weight * delta * (k1 + n as f64) / (n as f64 + 1.0);
        let ratio = delta * (k1 + n as f64 + 1.0) / (n as f64 + 2.0);
        let mut tail = (total_weight - weight_sum).max(0.0);
        if ratio < 1.0 {
            tail = tail.min(next / (1.0 - ratio));
        }
        tail *= p;
        if tail <= ctl.rel_tol * sum.value().max(f64::MIN_POSITIVE) || tail < 1e-305 || next == 0.0
        {
            let ln_l =
                ln_gamma_unchecked(kk) - kk * y.ln() + sum.value().max(f64::MIN_POSITIVE).ln();
            return Ok(if sum.value() == 0.0 { 0.0 } else { ln_l.exp() });
        }
        weight = next;
    }
    Err(Error::NonConvergence {
        op: "lauricella_ha_series",
        terms: ctl.max_terms,
        rel_tol: ctl.rel_tol,
    })
}

/// Product-channel CDF kernel: P(h1 h2 <= e^{-w}) for -ln h_i ~
/// Gamma(shape k_i, rate z_i), evaluated as the positive-term mixture
///
/// F = (z1/z2)^{k1} Σ_n [(k1)_n δ^n / n!] Q(k1+k2+n, z2 w),
///
/// with hops labelled so z1 <= z2 and δ = 1 - z1/z2 in [0, 1). Every term is
/// positive, so small tail probabilities keep full relative precision.
pub(crate) fn product_cdf_kernel(
    k1: f64,
    z1: f64,
    k2: f64,
    z2: f64,
    w: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    debug_assert!(k1 > 0.0 && k2 > 0.0 && z1 > 0.0 && z2 > 0.0 && w >= 0.0);
    if w == 0.0 {
        return Ok(1.0);
    }
    let (k1, z1, k2, z2) = if z1 > z2 {
        (k2, z2, k1, z1)
    } else {
        (k1, z1, k2, z2)
    };
    let kk = k1 + k2;
    let delta = 1.0 - z1 / z2;
    let y = z2 * w;
    let prefactor = (z1 / z2).powf(k1);
    let total_weight = 1.0 / prefactor; // Σ_n (k1)_n δ^n / n! = (1-δ)^{-k1}
    let mut sum = Kahan::default();
    let mut weight = 1.0f64;
    let mut weight_sum = 0.0f64;
    for n in 0..ctl.max_terms {
        let q = reg_upper_gamma(kk + n as f64, y)?;
        sum.add(weight * q);
        weight_sum += weight;
        // Q <= 1 bounds the tail by the unsummed weight mass; past the
        // weight peak a geometric bound covers the rounding floor of the
        // accumulated mass difference
        let next = weight * delta * (k1 + n as f64) / (n as f64 + 1.0);
        let ratio = delta * (k1 + n as f64 + 1.0) / (n as f64 + 2.0);
        let mut tail = (total_weight - weight_sum).max(0.0);
        if ratio < 1.0 {
            tail = tail.min(next / (1.0 - ratio));
        }
        if tail <= ctl.rel_tol * sum.value().max(f64::MIN_POSITIVE) || tail < 1e-305 || next == 0.0
        {
            return Ok(prefactor * sum.value());
        }
        weight = next;
    }
    Err(Error::NonConvergence {
        op: "product_cdf",
        terms: ctl.max_terms,
        rel_tol: ctl.rel_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ln_gamma_known_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert!((ln_gamma(2.0).unwrap()).abs() < 1e-14);
        // reference: 50-digit evaluations
        assert!(rel_err(ln_gamma(0.5).unwrap(), 0.5723649429247001).abs() < 1e-13);
        assert!(rel_err(ln_gamma(4.64).unwrap(), 2.6505883301459319).abs() < 1e-13);
        assert!(rel_err(ln_gamma(72.12).unwrap(), 235.21418875616577).abs() < 2e-13);
    }

    #[test]
    fn ln_gamma_domain() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-3.2).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert!((pochhammer(2.5, 3) - 39.375).abs() < 1e-12);
    }

    #[test]
    fn reg_upper_gamma_known_values() {
        // Γ(1, x)/Γ(1) = e^{-x}
        assert!(rel_err(reg_upper_gamma(1.0, 2.0).unwrap(), 0.1353352832366127) < 1e-13);
        assert_eq!(reg_upper_gamma(4.64, 0.0).unwrap(), 1.0);
        // reference: adaptive quadrature of t^{a-1} e^{-t} over [x, inf)
        assert!(
            rel_err(
                reg_upper_gamma(4.64, 19.047).unwrap(),
                2.0978191283277328e-5
            ) < 1e-12
        );
    }

    #[test]
    fn reg_gamma_complement() {
        for &(a, x) in &[(0.7, 0.3), (2.32, 5.0), (11.0, 4.0), (36.06, 40.0)] {
            let p = reg_lower_gamma(a, x).unwrap();
            let q = reg_upper_gamma(a, x).unwrap();
            assert!((p + q - 1.0).abs() < 1e-14, "a={a} x={x}");
        }
    }

    #[test]
    fn reg_gamma_domain() {
        assert!(reg_upper_gamma(0.0, 1.0).is_err());
        assert!(reg_upper_gamma(-1.0, 1.0).is_err());
        assert!(reg_upper_gamma(1.0, -0.5).is_err());
    }

    #[test]
    fn kummer_known_values() {
        let ctl = SeriesControl::default();
        assert_eq!(kummer_1f1(3.1, 4.2, 0.0, &ctl).unwrap(), 1.0);
        // ₁F₁(1; 2; z) = (e^z - 1)/z
        assert!(rel_err(kummer_1f1(1.0, 2.0, 1.0, &ctl).unwrap(), 1.718281828459045) < 1e-13);
        // reference: 200-term extended-precision summation
        assert!(
            rel_err(
                kummer_1f1(2.32, 7.81, -5.3, &ctl).unwrap(),
                0.27523454748033836
            ) < 1e-12
        );
    }

    #[test]
    fn kummer_transform_agrees_with_series() {
        let ctl = SeriesControl::default();
        // z just above the transform threshold: both paths must agree up to
        // the cancellation budget of the direct alternating sum (~e^{|z|/3}
        // of an ulp near z = -30)
        for &z in &[-29.5, -20.0, -8.0, -1.0] {
            let direct = kummer_series(2.32, 7.81, z, &ctl).unwrap();
            let transformed = z.exp() * kummer_series(7.81 - 2.32, 7.81, -z, &ctl).unwrap();
            assert!(rel_err(direct, transformed) < 3e-7, "z = {z}");
        }
    }

    #[test]
    fn kummer_large_positive_argument() {
        let ctl = SeriesControl::default();
        // ₁F₁(a; a; z) = e^z exactly
        let v = ln_kummer_1f1_pos(3.3, 3.3, 650.0, &ctl).unwrap();
        assert!((v - 650.0).abs() < 1e-9);
        // asymptotic vs series continuity around the switch point
        let lo = ln_kummer_1f1_pos(2.32, 8.32, 599.0, &ctl).unwrap();
        let hi = ln_kummer_1f1_pos(2.32, 8.32, 601.0, &ctl).unwrap();
        let mid = hi - lo;
        // d/dz ln 1F1 ~ 1 for z >> b
        assert!((mid - 2.0).abs() < 0.05);
    }

    #[test]
    fn kummer_domain() {
        let ctl = SeriesControl::default();
        assert!(kummer_1f1(1.0, 0.0, 1.0, &ctl).is_err());
        assert!(kummer_1f1(1.0, -3.0, 1.0, &ctl).is_err());
        assert!(kummer_1f1(1.0, -3.5, 1.0, &ctl).is_ok());
    }

    #[test]
    fn kummer_reports_exhausted_term_cap() {
        // 64 terms cannot carry the series out to z = 500
        let tight = SeriesControl::new(1e-12, 64).unwrap();
        let err = kummer_1f1(1.0, 1.0, 500.0, &tight).unwrap_err();
        assert!(
            matches!(err, Error::NonConvergence { terms: 64, .. }),
            "{err}"
        );
    }

    #[test]
    fn series_control_invariants() {
        assert!(SeriesControl::new(1e-2, 128).is_err());
        assert!(SeriesControl::new(0.0, 128).is_err());
        assert!(SeriesControl::new(1e-6, 32).is_err());
        assert!(SeriesControl::new(1e-6, 64).is_ok());
    }

    #[test]
    fn double_series_outside_stable_region_errors() {
        // u >= -v puts the positive-term expansion outside delta < 1
        let ctl = SeriesControl::default();
        let err = lauricella_ha_series(2.0, 2.0, 15.0, -10.0, &ctl).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }), "{err}");
    }

    #[test]
    fn double_series_origin() {
        let ctl = SeriesControl::default();
        let v = lauricella_ha_series(2.32, 6.0, 0.0, 0.0, &ctl).unwrap();
        assert!(rel_err(v, 1.0 / 8.32) < 1e-14);
    }

    #[test]
    fn double_series_direct_frozen() {
        let ctl = SeriesControl::default();
        // reference: extended-precision term-by-term double summation
        let v = lauricella_ha_series(5.49, 5.49, 0.7, -8.0, &ctl).unwrap();
        assert!(rel_err(v, 1.0508733535823842e-4) < 1e-10, "got {v}");
    }

    #[test]
    fn double_series_mixture_frozen() {
        let ctl = SeriesControl::default();
        // u = 0, large |v|: equal-rate reduction to the incomplete gamma
        let v = lauricella_ha_series(2.32, 2.32, 0.0, -19.049868393602731, &ctl).unwrap();
        assert!(rel_err(v, 1.6309025448868586e-5) < 1e-10, "got {v}");
        // asymmetric, outside the direct-path window
        let v2 = lauricella_ha_series(2.32, 6.0, -3.2, -8.5, &ctl).unwrap();
        assert!(rel_err(v2, 5.621289895394114e-5) < 1e-10, "got {v2}");
    }

    #[test]
    fn double_series_swap_identity() {
        let ctl = SeriesControl::default();
        // L(k1,k2,u,v) = L(k2,k1,-u,u+v), checked inside the direct window
        let a = lauricella_ha_series(2.32, 6.0, 0.55, -7.0, &ctl).unwrap();
        let b = lauricella_ha_series(6.0, 2.32, -0.55, -6.45, &ctl).unwrap();
        assert!(rel_err(a, b) < 1e-9);
    }

    #[test]
    fn double_series_single_hypergeometric_reduction() {
        let ctl = SeriesControl::default();
        // v = 0 leaves L = ₁F₁(k1; K+1; u) / K
        let k1 = 2.32;
        let k2 = 6.0;
        let u = 0.63;
        let l = lauricella_ha_series(k1, k2, u, 0.0, &ctl).unwrap();
        let f = kummer_1f1(k1, k1 + k2 + 1.0, u, &ctl).unwrap() / (k1 + k2);
        assert!(rel_err(l, f) < 1e-12);
    }

    #[test]
    fn double_series_paths_agree_on_overlap() {
        // force both paths on arguments where the direct sum is stable
        let loose = SeriesControl::default();
        for &(k1, k2, u, v) in &[
            (2.32, 6.0, -0.8, -9.0),
            (5.49, 5.49, 0.4, -10.0),
            (6.0, 2.32, 0.85, -11.0),
        ] {
            let direct = l_direct(k1, k2, u, v, &loose).unwrap();
            let mix = l_mixture(k1, k2, u, v, &loose).unwrap();
            assert!(
                rel_err(direct, mix) < 1e-9,
                "k1={k1} k2={k2} u={u} v={v}: {direct} vs {mix}"
            );
        }
    }

    #[test]
    fn product_cdf_kernel_equal_rate_is_incomplete_gamma() {
        let ctl = SeriesControl::default();
        let f = product_cdf_kernel(2.32, 11.034, 2.32, 11.034, 1.7269, &ctl).unwrap();
        let q = reg_upper_gamma(4.64, 11.034 * 1.7269).unwrap();
        assert!(rel_err(f, q) < 1e-13);
    }

    #[test]
    fn product_cdf_kernel_asymmetric_frozen() {
        let ctl = SeriesControl::default();
        // light (k=2.32) and thick (k=6) fog hops at 30 m
        let z1 = 4.343 / (13.12 * 0.03);
        let z2 = 4.343 / (23.0 * 0.03);
        // reference: extended-precision quadrature of the hop convolution
        let cases = [
            (0.05, 5.9512963808577095e-4),
            (0.17783, 9.5808561037495772e-2),
            (0.3, 0.41340854728147816),
            (0.6, 0.97323940515804552),
            (0.9, 0.99999926371998307),
        ];
        for (x, expect) in cases {
            let f = product_cdf_kernel(2.32, z1, 6.0, z2, -f64::ln(x), &ctl).unwrap();
            assert!(rel_err(f, expect) < 1e-10, "x = {x}: {f} vs {expect}");
        }
    }

    #[test]
    fn product_cdf_kernel_matches_double_series_assembly() {
        // 1 - [z1^k1 z2^k2 / Γ(K)] w^K L(k1,k2,u,v) must equal the kernel on
        // arguments where the direct double series is numerically safe
        let ctl = SeriesControl::default();
        let (k1, z1, k2, z2) = (2.32, 6.5, 6.0, 6.2942);
        for &x in &[0.35, 0.6, 0.85] {
            let w = -f64::ln(x);
            let u = (z1 - z2) * x.ln();
            let v = z2 * x.ln();
            let l = l_direct(k1, k2, u, v, &ctl).unwrap();
            let kk = k1 + k2;
            let assembled =
                1.0 - (k1 * z1.ln() + k2 * z2.ln() - ln_gamma(kk).unwrap() + kk * w.ln()).exp() * l;
            let kernel = product_cdf_kernel(k1, z1, k2, z2, w, &ctl).unwrap();
            assert!(
                rel_err(assembled, kernel) < 1e-9,
                "x = {x}: {assembled} vs {kernel}"
            );
        }
    }
}
