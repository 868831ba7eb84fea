//! Globally adaptive 1D quadrature with an embedded error estimate.
//!
//! Each segment is evaluated with a Gauss–Kronrod (7, 15) pair; the worst
//! segment is bisected until the summed error estimate meets the tolerance.
//! Integrands are fallible so nested integrals and series evaluations can
//! surface their own failures.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budgets for the analytic evaluation pipeline.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Relative tolerance on each adaptive integral.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum number of segments per adaptive integral.
    pub max_subdivisions: usize,
    /// Residual Poisson mass at which blockage series are truncated.
    pub poisson_series_mass_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-6,
            abs_tol: 1e-9,
            max_subdivisions: 2000,
            poisson_series_mass_tol: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.poisson_series_mass_tol > 0.0) {
            return Err(Error::Parameter(format!(
                "quadrature tolerances must be > 0, got rel {}, abs {}, series {}",
                self.rel_tol, self.abs_tol, self.poisson_series_mass_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Parameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Derived spec for inner integrals of a nested evaluation, tightened so
    /// inner error stays negligible against the outer estimate.
    pub fn inner(&self) -> Self {
        QuadratureSpec {
            rel_tol: self.rel_tol * 1e-2,
            abs_tol: self.abs_tol * 1e-2,
            ..*self
        }
    }
}

/// Converged integral with diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of per-segment |Kronrod - Gauss| differences; conservative for
    /// smooth integrands.
    pub error_estimate: f64,
    pub segments: usize,
    pub evaluations: usize,
}

// Gauss-Kronrod (7, 15) nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut result_gauss = WG[3] * fc;
    let mut result_kronrod = WGK[7] * fc;
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let lo = f(center - half * x)?;
        let hi = f(center + half * x)?;
        result_kronrod += WGK[i] * (lo + hi);
        if i % 2 == 1 {
            result_gauss += WG[i / 2] * (lo + hi);
        }
    }
    let value = result_kronrod * half;
    let error = ((result_kronrod - result_gauss) * half).abs();
    Ok((value, error))
}

/// Integrates `f` over `[a, b]` to the tolerances of `spec`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Parameter(format!("integration bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, segments: 0, evaluations: 0 });
    }
    if a > b {
        return Err(Error::Parameter(format!(
            "integration bounds reversed: [{a}, {b}]"
        )));
    }

    let mut heap = BinaryHeap::new();
    let (value, error) = kronrod_15(&f, a, b)?;
    heap.push(Segment { a, b, value, error });
    let mut evaluations = 15usize;
    let mut total_value = value;
    let mut total_error = error;

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_error <= tol {
            return Ok(QuadResult {
                value: total_value,
                error_estimate: total_error,
                segments: heap.len(),
                evaluations,
            });
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::Numeric(format!(
                "quadrature did not converge on [{a}, {b}]: {} segments, \
                 error estimate {:.3e} > tolerance {:.3e}, value {:.6e}",
                heap.len(),
                total_error,
                tol,
                total_value
            )));
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Numeric(format!(
                "quadrature segment [{}, {}] cannot be split further; \
                 error estimate {:.3e}",
                worst.a, worst.b, total_error
            )));
        }
        total_value -= worst.value;
        total_error -= worst.error;
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod_15(&f, lo, hi)?;
            evaluations += 15;
            total_value += value;
            total_error += error;
            heap.push(Segment { a: lo, b: hi, value, error });
        }
    }
}
