//! Closed-form constants and bounds.
//!
//! * `gamma_seq` / `facet_constant`: the limit constants `F_n` of
//!   `E f_{n-1}(P(n, m)) ~ F_n m`.
//! * `facet_survival_probability`: chance that a fixed hyperplane at distance
//!   `h` from the origin keeps the remaining `m - n` points on the origin side.
//! * `facet_upper_bound`: the explicit expectation bound `~ C_n (log m)^{n-1} m`.
//! * `borgwardt_bound`: Borgwardt's average pivot bound for the shadow-vertex method.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cap_surface, sphere_surface, Dimension};

/// Largest dimension accepted by [`facet_constant`].
pub const MAX_FACET_CONSTANT_DIM: usize = 50;

/// The `n + FACET_BOUND_SHIFT` factor in the log term of [`facet_upper_bound`].
pub const FACET_BOUND_SHIFT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    FacetLimitConstant,
    FacetUpperBound,
    BorgwardtPivotBound,
    SurvivalProbability,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub kind: BoundKind,
}

/// `gamma_0 .. gamma_K` with `gamma_0 = 1/2`, `gamma_{k+1} = 1 / (2 pi (k+1) gamma_k)`.
pub fn gamma_seq(k_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(0.5);
    for k in 0..k_max {
        let next = 1.0 / (2.0 * PI * (k + 1) as f64 * out[k]);
        out.push(next);
    }
    out
}

/// `F_n = (2/n) gamma_{(n-1)^2} gamma_{n-1}^{-(n-1)}`.
pub fn facet_constant(n: Dimension) -> Result<BoundValue> {
    let n = n.get();
    if n > MAX_FACET_CONSTANT_DIM {
        return Err(Error::invalid(format!(
            "facet constant is only evaluated for n <= {MAX_FACET_CONSTANT_DIM}"
        )));
    }
    let gam = gamma_seq((n - 1) * (n - 1));
    let log_value = (2.0 / n as f64).ln() + gam[(n - 1) * (n - 1)].ln()
        - (n - 1) as f64 * gam[n - 1].ln();
    let value = if n <= 12 {
        2.0 / n as f64 * gam[(n - 1) * (n - 1)] / gam[n - 1].powi((n - 1) as i32)
    } else {
        log_value.exp()
    };
    if !value.is_finite() {
        return Err(Error::invalid(format!("facet constant overflows at n = {n}")));
    }
    Ok(BoundValue {
        value,
        kind: BoundKind::FacetLimitConstant,
    })
}

/// `(1 - SA_n(1 - h) / s_n)^{m - n}`.
pub fn facet_survival_probability(n: Dimension, m: usize, h: f64) -> Result<BoundValue> {
    if m <= n.get() {
        return Err(Error::invalid(format!("need m > n, got m = {m}, n = {n}")));
    }
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::invalid(format!("hyperplane distance must lie in [0, 1], got {h}")));
    }
    let base = 1.0 - cap_surface(n, 1.0 - h)? / sphere_surface(n.get())?;
    let value = base.clamp(0.0, 1.0).powi((m - n.get()) as i32);
    Ok(BoundValue {
        value,
        kind: BoundKind::SurvivalProbability,
    })
}

/// `C(a, b)` as a float.
fn binomial(a: usize, b: usize) -> f64 {
    (1..=b).fold(1.0, |acc, i| acc * (a - b + i) as f64 / i as f64)
}

/// `m C(m-1, n-1) (16 4^{(n-1)/2} (n + shift) log m / m)^{n-1} + 1`.
pub fn facet_upper_bound_with_shift(n: Dimension, m: usize, shift: f64) -> Result<BoundValue> {
    let nn = n.get();
    if m < 2 * nn {
        return Err(Error::invalid(format!("facet upper bound needs m >= 2n, got m = {m}")));
    }
    let mf = m as f64;
    let e = (nn - 1) as f64;
    let inner = 16.0 * 4f64.powf(e / 2.0) * (nn as f64 + shift) * mf.ln() / mf;
    let value = mf * binomial(m - 1, nn - 1) * inner.powf(e) + 1.0;
    Ok(BoundValue {
        value,
        kind: BoundKind::FacetUpperBound,
    })
}

/// [`facet_upper_bound_with_shift`] with [`FACET_BOUND_SHIFT`].
pub fn facet_upper_bound(n: Dimension, m: usize) -> Result<BoundValue> {
    facet_upper_bound_with_shift(n, m, FACET_BOUND_SHIFT)
}

/// `m^{1/(n-1)} (n+1)^4 (2 pi / 5) (1 + e pi / 2)`.
pub fn borgwardt_bound(n: Dimension, m: usize) -> Result<BoundValue> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let nn = n.get() as f64;
    let value = (m as f64).powf(1.0 / (nn - 1.0))
        * (nn + 1.0).powi(4)
        * (2.0 * PI / 5.0)
        * (1.0 + E * PI / 2.0);
    Ok(BoundValue {
        value,
        kind: BoundKind::BorgwardtPivotBound,
    })
}

/// The constant `c = 2(n + 1)` in the threshold `SA_n(delta) / s_n = c log m / m`.
pub fn threshold_constant(n: Dimension) -> f64 {
    2.0 * (n.get() as f64 + 1.0)
}
