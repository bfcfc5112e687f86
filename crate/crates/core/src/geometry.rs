//! Lebesgue measures of the unit ball family: balls, spheres, spherical caps
//! `C_n(h) = {x in B_n : x_n >= 1 - h}` and belts `L_n(r) = {x in B_n : x_1^2 + x_2^2 >= r^2}`.
//!
//! "Volume" is the n-dimensional measure of a set; "surface" is the
//! (n-1)-dimensional measure of its intersection with the unit sphere.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Ambient dimension, always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("dimension must be >= 2, got {n}")));
        }
        Ok(Dimension(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Dimension::new(n)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Volume `v_n` of the unit ball in `R^n`, from `v_1 = 2`, `v_2 = pi` and
/// `v_n = 2 pi v_{n-2} / n`.
pub fn ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("ball volume needs n >= 1"));
    }
    Ok(ball_volume_unchecked(n))
}

fn ball_volume_unchecked(n: usize) -> f64 {
    let mut v = if n % 2 == 1 { 2.0 } else { PI };
    let mut k = if n % 2 == 1 { 1 } else { 2 };
    while k < n {
        k += 2;
        v *= 2.0 * PI / k as f64;
    }
    v
}

/// Surface measure `s_n = n v_n` of the unit sphere `S^{n-1}`.
pub fn sphere_surface(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("sphere surface needs n >= 2"));
    }
    Ok(n as f64 * ball_volume_unchecked(n))
}

/// Polar angle of the cap boundary, `arccos(1 - h)`, computed without
/// cancellation for small `h`.
#[inline]
pub(crate) fn cap_angle(h: f64) -> f64 {
    2.0 * (0.5 * h).sqrt().asin()
}

/// Volume of the cap `C_n(h)`.
///
/// Closed forms for `n <= 3`; otherwise [`cap_volume_quadrature`].
pub fn cap_volume(n: Dimension, h: f64) -> Result<f64> {
    check_unit_interval("cap height", h)?;
    let value = match n.get() {
        2 => {
            let theta = cap_angle(h);
            x_minus_sin(2.0 * theta) / 2.0
        }
        3 => PI * h * h * (3.0 - h) / 3.0,
        _ => cap_volume_integral(n.get(), h),
    };
    Ok(value)
}

/// Volume of `C_n(h)` from the slice integral
/// `int_{1-h}^{1} (1 - y^2)^{(n-1)/2} v_{n-1} dy`, always by quadrature.
///
/// The integral is evaluated after the substitution `y = cos t`, which
/// turns it into `v_{n-1} int_0^{arccos(1-h)} sin^n t dt` and removes the
/// square-root endpoint behaviour at `y = 1` for even `n`.
pub fn cap_volume_quadrature(n: Dimension, h: f64) -> Result<f64> {
    check_unit_interval("cap height", h)?;
    Ok(cap_volume_integral(n.get(), h))
}

fn cap_volume_integral(n: usize, h: f64) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    let theta = cap_angle(h);
    let integrand = |t: f64| t.sin().powi(n as i32);
    ball_volume_unchecked(n - 1) * adaptive_gauss_legendre(integrand, 0.0, theta, 1e-13)
}

const GL_ORDER: usize = 20;
const GL_MAX_DEPTH: u32 = 40;

fn legendre_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(GL_ORDER).unwrap()))
}

/// Adaptive composite Gauss–Legendre: split an interval until the one-panel
/// and two-panel estimates agree to `abs_tol` (scaled to the panel length)
/// or to machine precision relative to the panel value.
pub(crate) fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    let rule = legendre_rule();
    let whole = rule.integrate(a, b, &f);
    refine(rule, &f, a, b, whole, abs_tol, 0)
}

fn refine<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let halves = left + right;
    let err = (halves - whole).abs();
    if depth >= GL_MAX_DEPTH || err <= tol || err <= 4.0 * f64::EPSILON * halves.abs() {
        return halves;
    }
    refine(rule, f, a, mid, left, 0.5 * tol, depth + 1)
        + refine(rule, f, mid, b, right, 0.5 * tol, depth + 1)
}

/// Surface measure `SA_n(h)` of the cap of height `h`:
///
/// `s_n ( sqrt(2h - h^2)^{n-1} v_{n-1} (1 - h) / (n v_n) + V(C_n(h)) / v_n )`,
/// i.e. `n` times the volume of the cone from the origin over the cap.
pub fn cap_surface(n: Dimension, h: f64) -> Result<f64> {
    check_unit_interval("cap height", h)?;
    let value = match n.get() {
        2 => 2.0 * cap_angle(h),
        3 => 2.0 * PI * h,
        _ => cap_surface_formula(n, h)?,
    };
    Ok(value)
}

/// The cone-decomposition formula for `SA_n(h)`, evaluated for every `n`
/// (no closed-form fast path).
pub fn cap_surface_formula(n: Dimension, h: f64) -> Result<f64> {
    check_unit_interval("cap height", h)?;
    let nn = n.get();
    let v_n = ball_volume_unchecked(nn);
    let v_nm1 = ball_volume_unchecked(nn - 1);
    let s_n = nn as f64 * v_n;
    let base_radius = (h * (2.0 - h)).sqrt();
    let cone = base_radius.powi(nn as i32 - 1) * v_nm1 * (1.0 - h) / (nn as f64 * v_n);
    let volume = cap_volume_integral(nn, h);
    Ok(s_n * (cone + volume / v_n))
}

/// Fraction `SA_n(h) / s_n` of the sphere covered by a cap of height `h`.
pub fn cap_fraction(n: Dimension, h: f64) -> Result<f64> {
    Ok(cap_surface(n, h)? / sphere_surface(n.get())?)
}

/// Volume `v_n (1 - r^2)^{n/2}` of the belt `L_n(r)`.
pub fn belt_volume(n: Dimension, r: f64) -> Result<f64> {
    check_unit_interval("belt radius", r)?;
    let nn = n.get();
    Ok(ball_volume_unchecked(nn) * (1.0 - r * r).powf(nn as f64 / 2.0))
}

/// Surface `s_n (1 - r^2)^{(n-2)/2}` of the belt `L_n(r)`.
pub fn belt_surface(n: Dimension, r: f64) -> Result<f64> {
    check_unit_interval("belt radius", r)?;
    let nn = n.get();
    let s_n = nn as f64 * ball_volume_unchecked(nn);
    Ok(s_n * (1.0 - r * r).powf((nn as f64 - 2.0) / 2.0))
}

/// Small-height asymptotic `v_{n-1} sqrt(2h - h^2)^{n+1} / (n+1)` of the cap volume.
///
/// This is `v_{n-1} int_{1-h}^{1} (1 - y^2)^{(n-1)/2} y dy`, which differs
/// from the cap volume only by the factor `y` in `[1 - h, 1]`.
pub fn cap_volume_asymptotic(n: Dimension, h: f64) -> Result<f64> {
    check_unit_interval("cap height", h)?;
    let nn = n.get();
    let base = h * (2.0 - h);
    Ok(ball_volume_unchecked(nn - 1) * base.powf((nn as f64 + 1.0) / 2.0) / (nn as f64 + 1.0))
}

/// `x - sin x` without cancellation for small `x`.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() >= 0.1 {
        return x - x.sin();
    }
    // x^3/3! - x^5/5! + ...
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = 0.0;
    for k in 1..10 {
        sum += term;
        term *= -x2 / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
    }
    sum
}

/// Ratio `cap_volume / cap_volume_asymptotic`; undefined at `h = 0`.
pub fn cap_volume_asymptotic_ratio(n: Dimension, h: f64) -> Result<f64> {
    if h == 0.0 {
        return Err(Error::invalid("asymptotic ratio is 0/0 at h = 0"));
    }
    Ok(cap_volume(n, h)? / cap_volume_asymptotic(n, h)?)
}

const BISECTION_MAX_ITER: usize = 200;

/// Cap height whose surface fraction equals `target`, by bisection on `[0, 1]`.
pub fn cap_height_for_fraction(n: Dimension, target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::invalid(format!("target cap fraction must be positive, got {target}")));
    }
    if target > 0.5 {
        return Err(Error::ThresholdUnattainable(target));
    }
    let s_n = sphere_surface(n.get())?;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cap_surface(n, mid)? / s_n < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick whichever bracket end is closer in fraction
    let f_lo = cap_surface(n, lo)? / s_n;
    let f_hi = cap_surface(n, hi)? / s_n;
    Ok(if (f_lo - target).abs() <= (f_hi - target).abs() { lo } else { hi })
}

/// Threshold `delta(n, m)` with `SA_n(delta) / s_n = c log(m) / m`.
pub fn solve_delta(n: Dimension, m: usize, c: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::invalid(format!("solve_delta needs m >= 2, got {m}")));
    }
    if !(c > 0.0) {
        return Err(Error::invalid(format!("constant c must be positive, got {c}")));
    }
    let mf = m as f64;
    cap_height_for_fraction(n, c * mf.ln() / mf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn ball_volumes() {
        assert!(rel(ball_volume(2).unwrap(), PI) < 1e-15);
        assert!(rel(ball_volume(3).unwrap(), 4.0 * PI / 3.0) < 1e-15);
        // v_4 = 2 pi v_2 / 4
        assert!(rel(ball_volume(4).unwrap(), PI * PI / 2.0) < 1e-15);
        assert!(ball_volume(0).is_err());
        assert_eq!(ball_volume(1).unwrap(), 2.0);
    }

    #[test]
    fn sphere_surfaces() {
        assert!(rel(sphere_surface(2).unwrap(), 2.0 * PI) < 1e-15);
        assert!(rel(sphere_surface(3).unwrap(), 4.0 * PI) < 1e-15);
        assert!(rel(sphere_surface(4).unwrap(), 2.0 * PI * PI) < 1e-15);
        assert!(sphere_surface(1).is_err());
    }

    #[test]
    fn dimension_rejects_small() {
        assert!(Dimension::new(1).is_err());
        assert!(Dimension::try_from(0usize).is_err());
    }

    #[test]
    fn cap_volume_examples() {
        assert!(rel(cap_volume(dim(2), 1.0).unwrap(), PI / 2.0) < 1e-14);
        assert!(rel(cap_volume(dim(3), 0.5).unwrap(), 0.654_498_469_497_873_6) < 1e-12);
        for n in 2..9 {
            assert_eq!(cap_volume(dim(n), 0.0).unwrap(), 0.0);
        }
        assert!(cap_volume(dim(3), 1.5).is_err());
        assert!(cap_volume(dim(3), -0.1).is_err());
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        for &h in &[1e-6, 0.01, 0.1, 0.37, 0.5, 0.9, 1.0] {
            for n in [2, 3] {
                let a = cap_volume(dim(n), h).unwrap();
                let b = cap_volume_quadrature(dim(n), h).unwrap();
                assert!(rel(a, b) < 1e-12, "n={n} h={h}: {a} vs {b}");
                let sa = cap_surface(dim(n), h).unwrap();
                let sb = cap_surface_formula(dim(n), h).unwrap();
                assert!(rel(sa, sb) < 1e-12, "surface n={n} h={h}: {sa} vs {sb}");
            }
        }
    }

    #[test]
    fn cap_surface_examples() {
        assert!(rel(cap_surface(dim(3), 0.1).unwrap(), 0.628_318_530_717_958_6) < 1e-12);
        let h = 1.0 - 2f64.sqrt() / 2.0;
        assert!(rel(cap_surface(dim(2), h).unwrap(), PI / 2.0) < 1e-12);
        for n in 2..9 {
            let half = sphere_surface(n).unwrap() / 2.0;
            assert!(rel(cap_surface(dim(n), 1.0).unwrap(), half) < 1e-10);
        }
    }

    #[test]
    fn belt_examples() {
        assert!(rel(belt_volume(dim(3), 0.0).unwrap(), 4.0 * PI / 3.0) < 1e-15);
        assert_eq!(belt_volume(dim(3), 1.0).unwrap(), 0.0);
        assert!(rel(belt_volume(dim(4), 0.6).unwrap(), 2.021_294_981_343_100_7) < 1e-12);
        assert!(rel(belt_surface(dim(3), 0.0).unwrap(), 4.0 * PI) < 1e-15);
        assert!(rel(belt_surface(dim(4), 0.6).unwrap(), 12.633_093_633_394_38) < 1e-12);
        assert!(rel(belt_surface(dim(3), 0.5).unwrap(), 10.882_796_185_405_306) < 1e-12);
        assert!(belt_surface(dim(3), 1.01).is_err());
    }

    #[test]
    fn belt_volume_degenerate_plane() {
        assert!(rel(belt_volume(dim(2), 0.5).unwrap(), PI * 0.75) < 1e-15);
    }

    #[test]
    fn asymptotic_examples() {
        let expected = PI * (2e-4f64 - 1e-8).powi(2) / 4.0;
        assert!(rel(cap_volume_asymptotic(dim(3), 1e-4).unwrap(), expected) < 1e-14);
        let ratio = cap_volume_asymptotic_ratio(dim(3), 1e-4).unwrap();
        assert!((ratio - 1.0).abs() < 1e-3);
        let expected2 = 2.0 * (2e-6f64 - 1e-12).powf(1.5) / 3.0;
        assert!(rel(cap_volume_asymptotic(dim(2), 1e-6).unwrap(), expected2) < 1e-14);
        assert!((cap_volume_asymptotic(dim(2), 1e-6).unwrap() - 1.8856e-9).abs() < 1e-13);
        assert_eq!(cap_volume_asymptotic(dim(5), 0.0).unwrap(), 0.0);
        assert!(cap_volume_asymptotic_ratio(dim(5), 0.0).is_err());
    }

    #[test]
    fn solve_delta_examples() {
        // n = 2: fraction 2 arccos(1 - h) / (2 pi) = 1/4 at h = 1 - cos(pi/4)
        let d = cap_height_for_fraction(dim(2), 0.25).unwrap();
        assert!((d - (1.0 - (PI / 4.0).cos())).abs() < 1e-12);
        assert_eq!(cap_height_for_fraction(dim(4), 0.5).unwrap(), 1.0);
        for &t in &[1e-6, 0.01, 0.2, 0.49] {
            let d = cap_height_for_fraction(dim(3), t).unwrap();
            assert!(rel(d, 2.0 * t) < 1e-12);
        }
        assert!(matches!(
            cap_height_for_fraction(dim(3), 0.6),
            Err(Error::ThresholdUnattainable(_))
        ));
    }

    #[test]
    fn solve_delta_residual_is_tight() {
        for n in 2..7 {
            for &m in &[10usize, 100, 1000, 100_000] {
                let c = 2.0 * (n as f64 + 1.0);
                let target = c * (m as f64).ln() / m as f64;
                match solve_delta(dim(n), m, c) {
                    Ok(d) => {
                        let frac = cap_fraction(dim(n), d).unwrap();
                        assert!(rel(frac, target) < 1e-12, "n={n} m={m}");
                    }
                    Err(Error::ThresholdUnattainable(t)) => assert!(t > 0.5),
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(solve_delta(dim(3), 1, 1.0).is_err());
    }
}
