//! Independent brute-force oracles used to validate every closed form.
//!
//! Three families:
//! * a truncated Fock-basis construction of squeezed displaced thermal
//!   states together with a spectral-decomposition Uhlmann fidelity,
//! * the two-mode-squeezed purification overlap series for thermal states,
//! * midpoint-rule phase-space integrals of Wigner functions.
//!
//! None of these share code with the closed forms in [`crate::fidelity`];
//! that independence is the point.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{GaussianState, SqueezedThermalParams};

/// Smallest accepted Fock truncation.
pub const MIN_FOCK_DIM: usize = 8;
/// Largest Fock truncation the convergence loop will attempt.
pub const MAX_FOCK_DIM: usize = 2048;
/// Max allowed pre-renormalization trace deficit of the thermal tail.
const THERMAL_TAIL_TOL: f64 = 1e-6;
/// Required unitarity of the squeeze and displacement matrices on the
/// kept block: max |(U^H U - I)_{ij}|.
const UNITARITY_TOL: f64 = 1e-10;
/// Negative-eigenvalue noise floor separating truncation roundoff from a
/// genuinely invalid density matrix.
const EIG_CLIP: f64 = 1e-10;
/// Doubling the truncation must change the Uhlmann value by less than this
/// for the result to count as converged.
pub const FOCK_CONVERGENCE_TOL: f64 = 1e-8;

fn eig_error(e: impl std::fmt::Debug) -> Error {
    Error::Internal(format!("hermitian eigendecomposition failed: {e:?}"))
}

/// exp(G) for an anti-Hermitian generator G, via the spectral decomposition
/// of the Hermitian matrix -iG. Exactly unitary up to eigensolver roundoff.
fn exp_antihermitian(g: &Mat<Complex64>) -> Result<Mat<Complex64>> {
    let n = g.nrows();
    let h = Mat::from_fn(n, n, |i, j| Complex64::new(g[(i, j)].im, -g[(i, j)].re));
    let eig = h.self_adjoint_eigen(Side::Lower).map_err(eig_error)?;
    let u = eig.U();
    let lam = eig.S();
    let mut w = Mat::<Complex64>::zeros(n, n);
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, lam.column_vector()[k].re);
        for i in 0..n {
            w[(i, k)] = u[(i, k)] * phase;
        }
    }
    Ok(&w * u.adjoint())
}

fn check_unitarity(u: &Mat<Complex64>, what: &str) -> Result<()> {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    if worst > UNITARITY_TOL {
        return Err(Error::Internal(format!(
            "{what} matrix deviates from unitarity by {worst:.3e} on the kept block"
        )));
    }
    Ok(())
}

/// Squeeze-operator generator `(r/2)(e^{2i phi} adag^2 - e^{-2i phi} a^2)`
/// in the truncated number basis. Positive `r` stretches the quadrature
/// along axis `phi`, matching the measured-variance convention.
fn squeeze_generator(r: f64, phi: f64, dim: usize) -> Mat<Complex64> {
    let up = Complex64::from_polar(r / 2.0, 2.0 * phi);
    let dn = -up.conj();
    let mut g = Mat::<Complex64>::zeros(dim, dim);
    for n in 0..dim.saturating_sub(2) {
        let amp = (((n + 1) * (n + 2)) as f64).sqrt();
        g[(n + 2, n)] = up * amp; // adag^2 band
        g[(n, n + 2)] = dn * amp; // a^2 band
    }
    g
}

/// Displacement-operator generator `x adag - conj(x) a`.
fn displacement_generator(x: Complex64, dim: usize) -> Mat<Complex64> {
    let mut g = Mat::<Complex64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        let amp = ((n + 1) as f64).sqrt();
        g[(n + 1, n)] = x * amp;
        g[(n, n + 1)] = -x.conj() * amp;
    }
    g
}

/// A truncated number-basis density matrix.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    mat: Mat<Complex64>,
    trace_deficit: f64,
}

impl FockDensityMatrix {
    /// Build the density matrix of a squeezed displaced thermal state in a
    /// `dim`-dimensional number basis: the geometric thermal diagonal,
    /// conjugated by the squeeze and displacement matrices (each the
    /// exponential of its truncated generator), then renormalized to unit
    /// trace. The pre-renormalization trace deficit is kept for inspection.
    ///
    /// Fails when the thermal tail alone cannot fit in `dim` levels; the
    /// distortion that squeezing and displacement leakage cause near the top
    /// of the basis does not show up in the trace, which is why results
    /// should go through [`uhlmann_fidelity_converged`] rather than a single
    /// fixed truncation.
    pub fn from_params(params: &SqueezedThermalParams, dim: usize) -> Result<Self> {
        if dim < MIN_FOCK_DIM {
            return Err(Error::Domain(format!(
                "fock dimension must be at least {MIN_FOCK_DIM}, got {dim}"
            )));
        }
        if dim > MAX_FOCK_DIM {
            return Err(Error::Truncation(format!(
                "fock dimension {dim} exceeds the supported maximum {MAX_FOCK_DIM}"
            )));
        }
        let n_bar = params.n_bar();
        let tail = if n_bar > 0.0 {
            (n_bar / (n_bar + 1.0)).powi(dim as i32)
        } else {
            0.0
        };
        if tail > THERMAL_TAIL_TOL {
            return Err(Error::Truncation(format!(
                "dim {dim} leaves a thermal tail of {tail:.3e} for n_bar = {n_bar}"
            )));
        }

        // geometric thermal occupation
        let mut probs = vec![0.0f64; dim];
        if n_bar == 0.0 {
            probs[0] = 1.0;
        } else {
            let q = n_bar / (n_bar + 1.0);
            let mut p = 1.0 / (n_bar + 1.0);
            for slot in probs.iter_mut() {
                *slot = p;
                p *= q;
            }
        }

        let unitary = {
            let squeeze = if params.r() != 0.0 {
                let s = exp_antihermitian(&squeeze_generator(params.r(), params.phi(), dim))?;
                check_unitarity(&s, "squeeze")?;
                Some(s)
            } else {
                None
            };
            let displace = if params.x() != Complex64::new(0.0, 0.0) {
                let d = exp_antihermitian(&displacement_generator(params.x(), dim))?;
                check_unitarity(&d, "displacement")?;
                Some(d)
            } else {
                None
            };
            match (displace, squeeze) {
                (Some(d), Some(s)) => Some(&d * &s),
                (Some(d), None) => Some(d),
                (None, Some(s)) => Some(s),
                (None, None) => None,
            }
        };

        let mat = match unitary {
            None => Mat::from_fn(dim, dim, |i, j| {
                if i == j {
                    Complex64::new(probs[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            Some(u) => {
                let scaled = Mat::from_fn(dim, dim, |i, k| u[(i, k)] * probs[k]);
                &scaled * u.adjoint()
            }
        };

        let trace: f64 = (0..dim).map(|i| mat[(i, i)].re).sum();
        let trace_deficit = 1.0 - trace;
        let inv = 1.0 / trace;
        // renormalize and symmetrize away multiplication roundoff
        let mat = Mat::from_fn(dim, dim, |i, j| {
            (mat[(i, j)] + mat[(j, i)].conj()) * (0.5 * inv)
        });
        Ok(Self { mat, trace_deficit })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    /// Trace lost to truncation before renormalization.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    /// Check the density-matrix invariants: hermiticity to 1e-10 and unit
    /// trace to 1e-10 (after renormalization). Eigenvalue positivity is
    /// checked where the spectrum is computed anyway, in
    /// [`uhlmann_fidelity_fock`].
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let mut herm = 0.0f64;
        for i in 0..n {
            for j in i..n {
                herm = herm.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        if herm > 1e-10 {
            return Err(Error::InvalidDensity(format!(
                "hermiticity violated by {herm:.3e}"
            )));
        }
        let trace: f64 = (0..n).map(|i| self.mat[(i, i)].re).sum();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("trace is {trace}")));
        }
        Ok(())
    }
}

/// Hermitian PSD square root via spectral decomposition. Eigenvalues in
/// `[-EIG_CLIP, 0)` are clipped to zero; anything lower is an invalid
/// density matrix.
fn psd_sqrt(m: &Mat<Complex64>, what: &str) -> Result<Mat<Complex64>> {
    let n = m.nrows();
    let eig = m.self_adjoint_eigen(Side::Lower).map_err(eig_error)?;
    let u = eig.U();
    let lam = eig.S();
    let mut w = Mat::<Complex64>::zeros(n, n);
    for k in 0..n {
        let l = lam.column_vector()[k].re;
        if l < -EIG_CLIP {
            return Err(Error::InvalidDensity(format!(
                "{what} has eigenvalue {l:.3e} below the noise floor"
            )));
        }
        let s = l.max(0.0).sqrt();
        for i in 0..n {
            w[(i, k)] = u[(i, k)] * s;
        }
    }
    Ok(&w * u.adjoint())
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2` evaluated by
/// two Hermitian spectral decompositions.
pub fn uhlmann_fidelity_fock(
    rho1: &FockDensityMatrix,
    rho2: &FockDensityMatrix,
) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let s1 = psd_sqrt(&rho1.mat, "rho1")?;
    let inner = &(&s1 * &rho2.mat) * &s1;
    let n = inner.nrows();
    let eig = inner.self_adjoint_eigen(Side::Lower).map_err(eig_error)?;
    let mut root_trace = 0.0f64;
    for k in 0..n {
        let l = eig.S().column_vector()[k].re;
        if l < -EIG_CLIP {
            return Err(Error::InvalidDensity(format!(
                "sqrt(rho1) rho2 sqrt(rho1) has eigenvalue {l:.3e} below the noise floor"
            )));
        }
        root_trace += l.max(0.0).sqrt();
    }
    Ok(root_trace * root_trace)
}

/// Truncation heuristic for a pair of states: generous enough that one
/// doubling usually certifies convergence.
pub fn suggested_fock_dim(p1: &SqueezedThermalParams, p2: &SqueezedThermalParams) -> usize {
    let n_bar = p1.n_bar().max(p2.n_bar());
    let x2 = p1.x().norm_sqr().max(p2.x().norm_sqr());
    let r = p1.r().abs().max(p2.r().abs());
    let dim = (20.0 + 8.0 * (n_bar + x2 + (2.0 * r).exp())).ceil() as usize;
    dim.max(MIN_FOCK_DIM)
}

/// A convergence-certified Fock-oracle fidelity.
#[derive(Debug, Clone, Copy)]
pub struct ConvergedUhlmann {
    pub value: f64,
    /// truncation at which the value was accepted
    pub dim: usize,
    /// change produced by the final doubling
    pub last_change: f64,
}

/// Uhlmann fidelity with the truncation doubled until the value moves by
/// less than [`FOCK_CONVERGENCE_TOL`].
pub fn uhlmann_fidelity_converged(
    p1: &SqueezedThermalParams,
    p2: &SqueezedThermalParams,
) -> Result<ConvergedUhlmann> {
    let mut dim = suggested_fock_dim(p1, p2);
    let at = |dim: usize| -> Result<f64> {
        let r1 = FockDensityMatrix::from_params(p1, dim)?;
        let r2 = FockDensityMatrix::from_params(p2, dim)?;
        uhlmann_fidelity_fock(&r1, &r2)
    };
    let mut prev = at(dim)?;
    let mut last_change = f64::NAN;
    loop {
        let next_dim = dim * 2;
        if next_dim > MAX_FOCK_DIM {
            return Err(Error::Truncation(format!(
                "no convergence below the {MAX_FOCK_DIM}-dimensional cap \
                 (last change {last_change:.3e} at dim {dim})"
            )));
        }
        let next = at(next_dim)?;
        last_change = (next - prev).abs();
        if last_change < FOCK_CONVERGENCE_TOL {
            return Ok(ConvergedUhlmann {
                value: next,
                dim: next_dim,
                last_change,
            });
        }
        dim = next_dim;
        prev = next;
    }
}

/// Truncated overlap series of two two-mode-squeezed purifications whose
/// partial traces are thermal states of variances `v1, v2`. Converges
/// monotonically from below to the thermal-state Uhlmann fidelity.
pub fn epr_overlap_fidelity(v1: f64, v2: f64, n_terms: usize) -> Result<f64> {
    if !(v1.is_finite() && v1 >= 1.0) || !(v2.is_finite() && v2 >= 1.0) {
        return Err(Error::Domain(format!(
            "purification overlap requires variances >= 1, got ({v1}, {v2})"
        )));
    }
    if n_terms < 16 {
        return Err(Error::Domain(format!(
            "need at least 16 series terms, got {n_terms}"
        )));
    }
    let g1 = (v1 + 1.0) / 2.0;
    let g2 = (v2 + 1.0) / 2.0;
    let q = ((g1 - 1.0) * (g2 - 1.0) / (g1 * g2)).sqrt();
    let mut sum = 0.0f64;
    let mut term = 1.0f64;
    for _ in 0..n_terms {
        sum += term;
        term *= q;
    }
    Ok(sum * sum / (g1 * g2))
}

/// Midpoint-rule integration grid over phase space.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    half_extent_sigmas: f64,
    points_per_axis: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_extent_sigmas: 6.0,
            points_per_axis: 801,
        }
    }
}

impl GridSpec {
    pub fn new(half_extent_sigmas: f64, points_per_axis: usize) -> Result<Self> {
        if !(half_extent_sigmas.is_finite() && half_extent_sigmas > 0.0) {
            return Err(Error::Domain(format!(
                "half extent must be positive, got {half_extent_sigmas}"
            )));
        }
        if points_per_axis < 101 || points_per_axis % 2 == 0 {
            return Err(Error::Domain(format!(
                "points per axis must be odd and at least 101, got {points_per_axis}"
            )));
        }
        Ok(Self {
            half_extent_sigmas,
            points_per_axis,
        })
    }

    pub fn half_extent_sigmas(&self) -> f64 {
        self.half_extent_sigmas
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }
}

/// Wigner evaluation with the per-state constants hoisted out of the
/// grid loops.
struct WignerEval {
    cos_phi: f64,
    sin_phi: f64,
    cx: f64,
    cy: f64,
    wp: f64,
    wm: f64,
    norm: f64,
}

impl WignerEval {
    fn new(s: &GaussianState) -> Self {
        let (sin_phi, cos_phi) = s.phi().sin_cos();
        Self {
            cos_phi,
            sin_phi,
            cx: s.delta().re,
            cy: s.delta().im,
            wp: -2.0 / s.v_plus(),
            wm: -2.0 / s.v_minus(),
            norm: 2.0 / (std::f64::consts::PI * (s.v_plus() * s.v_minus()).sqrt()),
        }
    }

    #[inline]
    fn log_density(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.cx;
        let dy = y - self.cy;
        let u = dx * self.cos_phi + dy * self.sin_phi;
        let w = dy * self.cos_phi - dx * self.sin_phi;
        self.wp * u * u + self.wm * w * w
    }
}

/// The integration box: the union of the two states' centers, padded by
/// `half_extent_sigmas` times the largest principal standard deviation.
fn union_box(s1: &GaussianState, s2: &GaussianState, grid: &GridSpec) -> (f64, f64, f64, f64) {
    let vmax = s1
        .v_plus()
        .max(s1.v_minus())
        .max(s2.v_plus())
        .max(s2.v_minus());
    let half = grid.half_extent_sigmas * (vmax / 4.0).sqrt();
    let (c1, c2) = (s1.delta(), s2.delta());
    (
        c1.re.min(c2.re) - half,
        c1.re.max(c2.re) + half,
        c1.im.min(c2.im) - half,
        c1.im.max(c2.im) + half,
    )
}

fn grid_sum(
    s1: &GaussianState,
    s2: &GaussianState,
    grid: &GridSpec,
    mut combine: impl FnMut(f64, f64) -> f64,
) -> f64 {
    let (x_lo, x_hi, y_lo, y_hi) = union_box(s1, s2, grid);
    let n = grid.points_per_axis;
    let dx = (x_hi - x_lo) / n as f64;
    let dy = (y_hi - y_lo) / n as f64;
    let w1 = WignerEval::new(s1);
    let w2 = WignerEval::new(s2);
    let mut total = 0.0f64;
    for i in 0..n {
        let x = x_lo + (i as f64 + 0.5) * dx;
        let mut row = 0.0f64;
        for j in 0..n {
            let y = y_lo + (j as f64 + 0.5) * dy;
            row += combine(
                w1.norm * w1.log_density(x, y).exp(),
                w2.norm * w2.log_density(x, y).exp(),
            );
        }
        total += row;
    }
    total * dx * dy
}

/// Classical fidelity by direct midpoint-rule integration of
/// `sqrt(W1 W2)` over the union box, squared. Accurate to about 1e-6 for
/// variances in `[0.1, 100]` at the default grid.
pub fn classical_fidelity_grid(s1: &GaussianState, s2: &GaussianState, grid: &GridSpec) -> f64 {
    let bc = grid_sum(s1, s2, grid, |a, b| (a * b).sqrt());
    bc * bc
}

/// Phase-space overlap `pi * integral(W1 W2)`.
#[derive(Debug, Clone, Copy)]
pub struct WignerOverlap {
    pub value: f64,
    /// The overlap equals the Uhlmann fidelity only when at least one state
    /// is pure; otherwise the number is still returned but is not a fidelity.
    pub is_fidelity: bool,
}

pub fn wigner_overlap(s1: &GaussianState, s2: &GaussianState, grid: &GridSpec) -> WignerOverlap {
    let value = std::f64::consts::PI * grid_sum(s1, s2, grid, |a, b| a * b);
    WignerOverlap {
        value,
        is_fidelity: s1.is_pure(1e-9) || s2.is_pure(1e-9),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::{classical_fidelity, quantum_fidelity};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    fn params(n_bar: f64, r: f64, phi: f64, x_re: f64, x_im: f64) -> SqueezedThermalParams {
        SqueezedThermalParams::new(n_bar, r, phi, x_re, x_im).unwrap()
    }

    #[test]
    fn vacuum_is_ground_projector() {
        let rho = FockDensityMatrix::from_params(&params(0.0, 0.0, 0.0, 0.0, 0.0), 8).unwrap();
        assert_eq!(rho.entry(0, 0), Complex64::new(1.0, 0.0));
        for i in 0..8 {
            for j in 0..8 {
                if (i, j) != (0, 0) {
                    assert_eq!(rho.entry(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(rho.trace_deficit(), 0.0);
        rho.validate().unwrap();
    }

    #[test]
    fn thermal_diagonal_geometric() {
        let rho = FockDensityMatrix::from_params(&params(0.5, 0.0, 0.0, 0.0, 0.0), 64).unwrap();
        assert_relative_eq!(rho.entry(0, 0).re, 2.0 / 3.0, max_relative = 1e-12);
        for n in 1..6 {
            assert_relative_eq!(
                rho.entry(n, n).re / rho.entry(n - 1, n - 1).re,
                1.0 / 3.0,
                max_relative = 1e-12
            );
        }
        rho.validate().unwrap();
    }

    #[test]
    fn coherent_poisson_statistics() {
        let rho = FockDensityMatrix::from_params(&params(0.0, 0.0, 0.0, 1.0, 0.0), 48).unwrap();
        let e1 = (-1.0f64).exp();
        assert_relative_eq!(rho.entry(0, 0).re, e1, max_relative = 1e-10);
        let mut fact = 1.0;
        for n in 1..8 {
            fact *= n as f64;
            assert_relative_eq!(rho.entry(n, n).re, e1 / fact, max_relative = 1e-9);
        }
        rho.validate().unwrap();
    }

    #[test]
    fn rejects_small_dim_and_heavy_tail() {
        assert!(matches!(
            FockDensityMatrix::from_params(&params(0.0, 0.0, 0.0, 0.0, 0.0), 4),
            Err(Error::Domain(_))
        ));
        // n_bar = 3 leaves a tail of 0.75^8 = 0.1 at dim 8
        assert!(matches!(
            FockDensityMatrix::from_params(&params(3.0, 0.0, 0.0, 0.0, 0.0), 8),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn uhlmann_self_fidelity() {
        let rho = FockDensityMatrix::from_params(&params(0.7, 0.4, 0.9, 0.5, -0.3), 96).unwrap();
        let f = uhlmann_fidelity_fock(&rho, &rho).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn uhlmann_vacuum_vs_thermal() {
        let vac = FockDensityMatrix::from_params(&params(0.0, 0.0, 0.0, 0.0, 0.0), 64).unwrap();
        let th = FockDensityMatrix::from_params(&params(0.5, 0.0, 0.0, 0.0, 0.0), 64).unwrap();
        let f = uhlmann_fidelity_fock(&vac, &th).unwrap();
        assert_abs_diff_eq!(f, 2.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn uhlmann_thermal_pair() {
        // variances 1 and 3, i.e. n_bar 0 and 1
        let a = FockDensityMatrix::from_params(&params(0.0, 0.0, 0.0, 0.0, 0.0), 96).unwrap();
        let b = FockDensityMatrix::from_params(&params(1.0, 0.0, 0.0, 0.0, 0.0), 96).unwrap();
        let f = uhlmann_fidelity_fock(&a, &b).unwrap();
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn uhlmann_matches_closed_form_squeezed() {
        let vac = GaussianState::vacuum();
        let sq = GaussianState::new(2.0, 0.5, 0.0, 0.0, 0.0).unwrap();
        let expect = quantum_fidelity(&vac, &sq).unwrap().value().unwrap();
        let f = uhlmann_fidelity_converged(
            &vac.to_thermal_params().unwrap(),
            &sq.to_thermal_params().unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(f.value, expect, epsilon = 1e-7);
        assert!(f.last_change < FOCK_CONVERGENCE_TOL);
    }

    #[test]
    fn uhlmann_dimension_mismatch() {
        let a = FockDensityMatrix::from_params(&params(0.0, 0.0, 0.0, 0.0, 0.0), 16).unwrap();
        let b = FockDensityMatrix::from_params(&params(0.0, 0.0, 0.0, 0.0, 0.0), 32).unwrap();
        assert!(uhlmann_fidelity_fock(&a, &b).is_err());
    }

    #[test]
    fn epr_series_examples() {
        assert_eq!(epr_overlap_fidelity(1.0, 1.0, 16).unwrap(), 1.0);
        assert_abs_diff_eq!(
            epr_overlap_fidelity(1.0, 2.0, 256).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            epr_overlap_fidelity(1.02, 3.02, 2048).unwrap(),
            0.570,
            epsilon = 1e-3
        );
        assert!(epr_overlap_fidelity(0.9, 2.0, 256).is_err());
        assert!(epr_overlap_fidelity(1.0, 2.0, 8).is_err());
    }

    #[test]
    fn epr_series_monotone_from_below() {
        let mut prev = 0.0;
        for n_terms in [16, 32, 64, 128, 1024] {
            let f = epr_overlap_fidelity(1.5, 4.0, n_terms).unwrap();
            assert!(f >= prev);
            prev = f;
        }
        assert!(prev <= 1.0);
    }

    #[test]
    fn grid_classical_examples() {
        let grid = GridSpec::default();
        let s = GaussianState::new(2.0, 0.5, 0.4, 0.3, -0.1).unwrap();
        assert_abs_diff_eq!(classical_fidelity_grid(&s, &s, &grid), 1.0, epsilon = 1e-6);

        let v1 = GaussianState::isotropic(1.0).unwrap();
        let v2 = GaussianState::isotropic(2.0).unwrap();
        assert_abs_diff_eq!(
            classical_fidelity_grid(&v1, &v2, &grid),
            8.0 / 9.0,
            epsilon = 1e-6
        );

        let a = GaussianState::new(2.0, 0.5, 0.0, 0.0, 0.0).unwrap();
        let b = GaussianState::new(2.0, 0.5, FRAC_PI_2, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(classical_fidelity_grid(&a, &b, &grid), 0.64, epsilon = 1e-6);
    }

    #[test]
    fn grid_matches_closed_form_general_configuration() {
        let grid = GridSpec::default();
        let s1 = GaussianState::new(1.8, 0.7, 0.3, 0.4, -0.6).unwrap();
        let s2 = GaussianState::new(0.9, 2.4, 1.4, -0.2, 0.5).unwrap();
        let closed = classical_fidelity(&s1, &s2).unwrap().value().unwrap();
        assert_abs_diff_eq!(classical_fidelity_grid(&s1, &s2, &grid), closed, epsilon = 1e-6);
    }

    #[test]
    fn wigner_overlap_examples() {
        let grid = GridSpec::default();
        let vac = GaussianState::vacuum();
        let o = wigner_overlap(&vac, &vac, &grid);
        assert!(o.is_fidelity);
        assert_abs_diff_eq!(o.value, 1.0, epsilon = 1e-6);

        let th = GaussianState::isotropic(2.0).unwrap();
        let o = wigner_overlap(&vac, &th, &grid);
        assert!(o.is_fidelity);
        assert_abs_diff_eq!(o.value, 2.0 / 3.0, epsilon = 1e-6);

        let c = GaussianState::coherent(1.0, 0.0).unwrap();
        let o = wigner_overlap(&vac, &c, &grid);
        assert_abs_diff_eq!(o.value, (-1.0f64).exp(), epsilon = 1e-6);

        let o = wigner_overlap(&th, &th, &grid);
        assert!(!o.is_fidelity);
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(6.0, 801).is_ok());
        assert!(GridSpec::new(6.0, 800).is_err());
        assert!(GridSpec::new(6.0, 99).is_err());
        assert!(GridSpec::new(0.0, 801).is_err());
    }

    #[test]
    fn grid_refinement_is_converged() {
        let s1 = GaussianState::new(2.0, 0.5, 0.9, 0.5, 0.2).unwrap();
        let s2 = GaussianState::new(1.0, 3.0, 0.1, -0.3, 0.4).unwrap();
        let coarse = classical_fidelity_grid(&s1, &s2, &GridSpec::default());
        let fine = classical_fidelity_grid(&s1, &s2, &GridSpec::new(6.0, 1601).unwrap());
        assert!((coarse - fine).abs() < 1e-8);
    }
}
