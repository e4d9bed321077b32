//! Single-mode Gaussian states in measured-variance form.
//!
//! A state is parameterized by the two principal quadrature variances
//! `v_plus` and `v_minus` (shot-noise units, vacuum = 1), the principal-axis
//! angle `phi`, and the phase-space center `delta`. The Wigner function of
//! such a state is a positive bivariate Gaussian, so the same struct doubles
//! as a classical phase-space distribution; physicality (`v_plus * v_minus >= 1`)
//! is an explicit query, not a constructor constraint.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uncertainty-product tolerance: a state is accepted as physical when
/// `v_plus * v_minus >= 1 - PURITY_TOL`.
pub const PURITY_TOL: f64 = 1e-12;

/// Reduce an angle to `[0, pi)`, shifting only by multiples of pi.
/// A result that rounds to exactly pi maps to 0.
fn normalize_phi(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(PI);
    if p >= PI {
        p -= PI;
    }
    if p == 0.0 {
        p = 0.0; // normalize -0.0
    }
    p
}

/// A single-mode Gaussian state (or classical Gaussian distribution) in
/// experimentally measurable variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    v_plus: f64,
    v_minus: f64,
    phi: f64,
    delta: Complex64,
}

impl GaussianState {
    /// Build a state from principal variances (shot-noise units), axis angle
    /// and phase-space center. The angle is normalized to `[0, pi)` without
    /// changing the represented distribution; a `v_plus`/`v_minus` swap is
    /// never performed.
    ///
    /// Physicality is not enforced here; see [`GaussianState::is_physical`].
    pub fn new(
        v_plus: f64,
        v_minus: f64,
        phi: f64,
        delta_re: f64,
        delta_im: f64,
    ) -> Result<Self> {
        if !(v_plus.is_finite() && v_plus > 0.0) {
            return Err(Error::Domain(format!(
                "v_plus must be finite and positive, got {v_plus}"
            )));
        }
        if !(v_minus.is_finite() && v_minus > 0.0) {
            return Err(Error::Domain(format!(
                "v_minus must be finite and positive, got {v_minus}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::Domain(format!("phi must be finite, got {phi}")));
        }
        if !(delta_re.is_finite() && delta_im.is_finite()) {
            return Err(Error::Domain(format!(
                "center must be finite, got ({delta_re}, {delta_im})"
            )));
        }
        Ok(Self {
            v_plus,
            v_minus,
            phi: normalize_phi(phi),
            delta: Complex64::new(delta_re, delta_im),
        })
    }

    /// The vacuum state: unit variances, centered at the origin.
    pub fn vacuum() -> Self {
        Self {
            v_plus: 1.0,
            v_minus: 1.0,
            phi: 0.0,
            delta: Complex64::new(0.0, 0.0),
        }
    }

    /// A coherent state of amplitude `delta`: unit variances.
    pub fn coherent(delta_re: f64, delta_im: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 0.0, delta_re, delta_im)
    }

    /// An isotropic (rotation-symmetric) state of variance `v`, centered at
    /// the origin. Thermal for `v >= 1`.
    pub fn isotropic(v: f64) -> Result<Self> {
        Self::new(v, v, 0.0, 0.0, 0.0)
    }

    pub fn v_plus(&self) -> f64 {
        self.v_plus
    }

    pub fn v_minus(&self) -> f64 {
        self.v_minus
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// Variance product `v_plus * v_minus` (1 for pure states, larger for
    /// mixed ones).
    pub fn breadth(&self) -> f64 {
        self.v_plus * self.v_minus
    }

    /// Whether the variances are compatible with a quantum state:
    /// `v_plus * v_minus >= 1 - 1e-12`.
    pub fn is_physical(&self) -> bool {
        self.breadth() >= 1.0 - PURITY_TOL
    }

    /// Whether the state is pure within `tol` on the variance product.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.breadth() - 1.0).abs() <= tol
    }

    /// Whether the state is isotropic (no preferred axis) within relative
    /// tolerance 1e-12 on the variance split.
    pub fn is_isotropic(&self) -> bool {
        (self.v_plus - self.v_minus).abs() <= 1e-12 * (self.v_plus + self.v_minus)
    }

    /// Squeezing parameter `r = ln(v_plus / v_minus) / 4`. Positive `r`
    /// stretches the principal axis; the axis itself is carried in `phi`.
    pub fn squeezing_parameter(&self) -> f64 {
        0.25 * (self.v_plus / self.v_minus).ln()
    }

    /// Covariance matrix of the phase-space distribution over
    /// `(Re alpha, Im alpha)`. The principal variances map to `v / 4` because
    /// shot-noise units set the vacuum quadrature variance to 1 while the
    /// vacuum Wigner distribution has variance 1/4 per axis.
    pub fn covariance(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.phi.sin_cos();
        let a = self.v_plus / 4.0;
        let b = self.v_minus / 4.0;
        [
            [a * c * c + b * s * s, (a - b) * s * c],
            [(a - b) * s * c, a * s * s + b * c * c],
        ]
    }

    /// Wigner density at the phase-space point `alpha`. Strictly positive.
    pub fn wigner(&self, alpha: Complex64) -> f64 {
        let d = alpha - self.delta;
        let (s, c) = self.phi.sin_cos();
        // components of (alpha - delta) along and across the principal axis
        let u = d.re * c + d.im * s;
        let w = d.im * c - d.re * s;
        let norm = 2.0 / (PI * (self.v_plus * self.v_minus).sqrt());
        norm * (-2.0 * u * u / self.v_plus - 2.0 * w * w / self.v_minus).exp()
    }

    /// Rotate the state rigidly in phase space by `dtheta`: the axis shifts
    /// by `dtheta` and the center co-rotates. The Wigner function of the
    /// result equals the original evaluated at counter-rotated points.
    pub fn rotate(&self, dtheta: f64) -> Self {
        let rot = Complex64::from_polar(1.0, dtheta);
        Self {
            v_plus: self.v_plus,
            v_minus: self.v_minus,
            phi: normalize_phi(self.phi + dtheta),
            delta: self.delta * rot,
        }
    }

    /// Convert to the squeezed-thermal parameterization. Requires a
    /// physical state.
    pub fn to_thermal_params(&self) -> Result<SqueezedThermalParams> {
        if !self.is_physical() {
            return Err(Error::Domain(format!(
                "state with v_plus*v_minus = {} < 1 has no thermal parameterization",
                self.breadth()
            )));
        }
        // clamp tiny negative excursions allowed by PURITY_TOL
        let n_bar = ((self.breadth().sqrt() - 1.0) / 2.0).max(0.0);
        SqueezedThermalParams::new(
            n_bar,
            self.squeezing_parameter(),
            self.phi,
            self.delta.re,
            self.delta.im,
        )
    }
}

/// Squeezed displaced thermal-state parameterization: mean thermal photon
/// number `n_bar` (equivalently inverse temperature `beta`), squeezing
/// magnitude `r` along axis `phi`, and displacement `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedThermalParams {
    n_bar: f64,
    beta: f64,
    r: f64,
    phi: f64,
    x: Complex64,
}

impl SqueezedThermalParams {
    /// Build from the mean thermal photon number. `beta` is derived as
    /// `ln(1 + 1/n_bar)`, with `+inf` as the pure-state sentinel, so that
    /// `n_bar = 1/(exp(beta) - 1)` holds exactly for every finite `beta`.
    pub fn new(n_bar: f64, r: f64, phi: f64, x_re: f64, x_im: f64) -> Result<Self> {
        if !(n_bar.is_finite() && n_bar >= 0.0) {
            return Err(Error::Domain(format!(
                "n_bar must be finite and non-negative, got {n_bar}"
            )));
        }
        if !r.is_finite() || !phi.is_finite() || !x_re.is_finite() || !x_im.is_finite() {
            return Err(Error::Domain(
                "squeezed-thermal parameters must be finite".into(),
            ));
        }
        let beta = if n_bar == 0.0 {
            f64::INFINITY
        } else {
            (1.0 + 1.0 / n_bar).ln()
        };
        Ok(Self {
            n_bar,
            beta,
            r,
            phi,
            x: Complex64::new(x_re, x_im),
        })
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    /// Inverse temperature; `+inf` for a pure state.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    /// Convert back to measured-variance form:
    /// `v_plus = (2 n_bar + 1) e^{2r}`, `v_minus = (2 n_bar + 1) e^{-2r}`,
    /// built in the principal-axis frame and then tagged with the axis angle
    /// and center.
    pub fn to_state(&self) -> Result<GaussianState> {
        let t = 2.0 * self.n_bar + 1.0;
        GaussianState::new(
            t * (2.0 * self.r).exp(),
            t * (-2.0 * self.r).exp(),
            self.phi,
            self.x.re,
            self.x.im,
        )
    }
}
