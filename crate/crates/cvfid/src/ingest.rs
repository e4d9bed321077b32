//! Loading homodyne measurement records and estimating a Gaussian state.
//!
//! Records are `(angle, value)` pairs: the local-oscillator phase and the
//! shot-noise-normalized quadrature outcome. Sweeping the angle turns the
//! per-angle means and variances into sinusoidal profiles from which the
//! state parameters follow by linear least squares:
//!
//! ```text
//! V(theta)  = a + b cos(2 theta) + c sin(2 theta)
//! mu(theta) = d_re cos(theta) + d_im sin(theta)
//! ```
//!
//! with `v_plus = a + sqrt(b^2 + c^2)`, `v_minus = a - sqrt(b^2 + c^2)` and
//! `phi = atan2(c, b) / 2`. No physicality is enforced on the estimate:
//! noisy data may dip below the uncertainty bound, and downstream
//! quantum-fidelity calls are the place where that is rejected explicitly.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::state::GaussianState;

/// Angles closer than this (radians) are treated as the same setting.
const ANGLE_TOL: f64 = 1e-9;
/// Records required per angle before the fit will use it.
const MIN_RECORDS_PER_ANGLE: usize = 100;

/// One homodyne record: local-oscillator angle and normalized outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub angle: f64,
    pub value: f64,
}

/// A batch of tagged homodyne measurement records.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSamples {
    records: Vec<Record>,
}

impl QuadratureSamples {
    pub fn new(records: Vec<Record>) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            if !r.angle.is_finite() || !r.value.is_finite() {
                return Err(Error::Domain(format!(
                    "record {i} is not finite: ({}, {})",
                    r.angle, r.value
                )));
            }
        }
        if records.is_empty() {
            return Err(Error::EmptySamples);
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Parse a sample file. Schema: UTF-8, header line `angle_rad,value`, one
/// `angle,value` record per line, plain decimal floats, LF or CRLF endings,
/// no quoting. Malformed rows are rejected with their 1-based line number.
pub fn load_samples(path: impl AsRef<Path>) -> Result<QuadratureSamples> {
    let text = fs::read_to_string(path.as_ref())?;
    parse_samples(&text)
}

fn parse_samples(text: &str) -> Result<QuadratureSamples> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == "angle_rad,value" => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `angle_rad,value`, got `{header}`"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "file is empty".into(),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        let mut fields = line.split(',');
        let (a, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(v), None) => (a, v),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two comma-separated fields, got `{line}`"),
                })
            }
        };
        let parse = |s: &str, what: &str| -> Result<f64> {
            let x: f64 = s.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("{what} `{s}` is not a number"),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("{what} `{s}` is not finite"),
                });
            }
            Ok(x)
        };
        records.push(Record {
            angle: parse(a, "angle")?,
            value: parse(v, "value")?,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptySamples);
    }
    QuadratureSamples::new(records)
}

/// Mean and unbiased variance of the records at one angle setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleStats {
    pub angle: f64,
    pub mean: f64,
    pub variance: f64,
    pub count: usize,
}

/// Group records by angle (tolerance 1e-9) and compute per-angle mean and
/// unbiased sample variance. Any angle with fewer than two records is an
/// error.
pub fn per_angle_stats(samples: &QuadratureSamples) -> Result<Vec<AngleStats>> {
    let mut sorted: Vec<Record> = samples.records().to_vec();
    sorted.sort_by(|a, b| a.angle.total_cmp(&b.angle));

    let mut out: Vec<AngleStats> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    let mut group_angle = f64::NAN;

    let flush = |group: &mut Vec<f64>, angle: f64, out: &mut Vec<AngleStats>| -> Result<()> {
        if group.is_empty() {
            return Ok(());
        }
        if group.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "angle {angle} has a single record; variance needs at least two"
            )));
        }
        let n = group.len() as f64;
        let mean = group.iter().sum::<f64>() / n;
        let ss: f64 = group.iter().map(|v| (v - mean) * (v - mean)).sum();
        out.push(AngleStats {
            angle,
            mean,
            variance: ss / (n - 1.0),
            count: group.len(),
        });
        group.clear();
        Ok(())
    };

    for r in &sorted {
        if group.is_empty() || (r.angle - group_angle).abs() <= ANGLE_TOL {
            if group.is_empty() {
                group_angle = r.angle;
            }
            group.push(r.value);
        } else {
            flush(&mut group, group_angle, &mut out)?;
            group_angle = r.angle;
            group.push(r.value);
        }
    }
    flush(&mut group, group_angle, &mut out)?;
    Ok(out)
}

/// A fitted state together with the weighted RMS residuals of the two fits.
#[derive(Debug, Clone, Copy)]
pub struct StateEstimate {
    pub state: GaussianState,
    pub variance_residual: f64,
    pub mean_residual: f64,
}

/// Directions modulo pi, clustered with the angle tolerance (wrapping the
/// pi/0 seam). Returns one representative angle per direction.
fn direction_clusters(stats: &[AngleStats]) -> Vec<f64> {
    let mut dirs: Vec<f64> = stats
        .iter()
        .map(|s| s.angle.rem_euclid(std::f64::consts::PI))
        .collect();
    dirs.sort_by(f64::total_cmp);
    let mut clusters: Vec<f64> = Vec::new();
    for d in dirs {
        match clusters.last() {
            Some(&last) if (d - last).abs() <= ANGLE_TOL => {}
            _ => clusters.push(d),
        }
    }
    if clusters.len() > 1 {
        let first = clusters[0];
        let last = *clusters.last().unwrap();
        if first + std::f64::consts::PI - last <= ANGLE_TOL {
            clusters.pop();
        }
    }
    clusters
}

/// Estimate a Gaussian state from tagged homodyne records.
///
/// With three or more distinct directions the full sinusoidal model is fit
/// by count-weighted least squares. With exactly two directions the fit is
/// only determined if they are orthogonal; the two settings then define the
/// axes directly, and `phi` is the direction with the larger variance so
/// the result matches the general fit's `v_plus >= v_minus` output.
pub fn estimate_state(samples: &QuadratureSamples) -> Result<StateEstimate> {
    let stats = per_angle_stats(samples)?;
    for s in &stats {
        if s.count < MIN_RECORDS_PER_ANGLE {
            return Err(Error::InsufficientData(format!(
                "angle {} has {} records; estimation needs at least {}",
                s.angle, s.count, MIN_RECORDS_PER_ANGLE
            )));
        }
    }
    let dirs = direction_clusters(&stats);

    let (v_plus, v_minus, phi) = match dirs.len() {
        0 | 1 => {
            return Err(Error::Unidentifiable(
                "all angles are equal modulo pi; the variance profile is unconstrained".into(),
            ))
        }
        2 => {
            let gap = (dirs[1] - dirs[0]).abs();
            if (gap - std::f64::consts::FRAC_PI_2).abs() > ANGLE_TOL {
                return Err(Error::Unidentifiable(format!(
                    "two measurement directions must be orthogonal to define the axes \
                     (separation {gap} rad)"
                )));
            }
            two_angle_axes(&stats, dirs[0], dirs[1])
        }
        _ => general_variance_fit(&stats)?,
    };

    let (delta_re, delta_im) = center_fit(&stats)?;
    let state = GaussianState::new(v_plus, v_minus, phi, delta_re, delta_im)?;

    // weighted RMS residuals against the fitted profiles
    let mut wsum = 0.0;
    let mut v_ss = 0.0;
    let mut m_ss = 0.0;
    let h = (v_plus - v_minus) / 2.0;
    let mid = (v_plus + v_minus) / 2.0;
    for s in &stats {
        let w = s.count as f64;
        let model_v = mid + h * (2.0 * (s.angle - phi)).cos();
        let model_m = delta_re * s.angle.cos() + delta_im * s.angle.sin();
        wsum += w;
        v_ss += w * (s.variance - model_v) * (s.variance - model_v);
        m_ss += w * (s.mean - model_m) * (s.mean - model_m);
    }
    Ok(StateEstimate {
        state,
        variance_residual: (v_ss / wsum).sqrt(),
        mean_residual: (m_ss / wsum).sqrt(),
    })
}

/// Principal variances and axis from exactly two orthogonal settings.
fn two_angle_axes(stats: &[AngleStats], dir_a: f64, dir_b: f64) -> (f64, f64, f64) {
    // pool per direction (count-weighted), folding angle -> angle + pi
    let pooled = |dir: f64| -> f64 {
        let mut w = 0.0;
        let mut v = 0.0;
        for s in stats {
            let d = s.angle.rem_euclid(std::f64::consts::PI);
            let dist = (d - dir)
                .abs()
                .min(std::f64::consts::PI - (d - dir).abs());
            if dist <= ANGLE_TOL {
                w += s.count as f64;
                v += s.count as f64 * s.variance;
            }
        }
        v / w
    };
    let (va, vb) = (pooled(dir_a), pooled(dir_b));
    if va == vb {
        // isotropic tie: canonical axis
        (va, vb, 0.0)
    } else if va > vb {
        (va, vb, dir_a)
    } else {
        (vb, va, dir_b)
    }
}

/// Count-weighted least-squares fit of the sinusoidal variance profile
/// over three or more directions.
fn general_variance_fit(stats: &[AngleStats]) -> Result<(f64, f64, f64)> {
    // normal equations for V(theta) = a + b cos 2theta + c sin 2theta
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for s in stats {
        let w = s.count as f64;
        let row = [1.0, (2.0 * s.angle).cos(), (2.0 * s.angle).sin()];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += w * row[i] * row[j];
            }
            rhs[i] += w * row[i] * s.variance;
        }
    }
    let sol = solve3(m, rhs).ok_or_else(|| {
        Error::Unidentifiable("variance-profile normal equations are singular".into())
    })?;
    let (a, b, c) = (sol[0], sol[1], sol[2]);
    let h = (b * b + c * c).sqrt();
    if !(a.is_finite() && h.is_finite()) || a <= 0.0 {
        return Err(Error::Unidentifiable(format!(
            "variance fit produced a = {a}"
        )));
    }
    let phi = if h < 1e-9 * a {
        0.0
    } else {
        let p = (0.5 * c.atan2(b)).rem_euclid(std::f64::consts::PI);
        // directions live modulo pi; fold the seam so roundoff below zero
        // does not surface as pi - epsilon
        if std::f64::consts::PI - p <= ANGLE_TOL {
            0.0
        } else {
            p
        }
    };
    Ok((a + h, a - h, phi))
}

/// Count-weighted least-squares fit of the mean profile
/// `mu(theta) = d_re cos theta + d_im sin theta`.
fn center_fit(stats: &[AngleStats]) -> Result<(f64, f64)> {
    let mut m = [[0.0f64; 2]; 2];
    let mut rhs = [0.0f64; 2];
    for s in stats {
        let w = s.count as f64;
        let row = [s.angle.cos(), s.angle.sin()];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += w * row[i] * row[j];
            }
            rhs[i] += w * row[i] * s.mean;
        }
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m[0][0].abs() + m[1][1].abs();
    if det.abs() <= 1e-12 * scale * scale {
        return Err(Error::Unidentifiable(
            "mean-profile normal equations are singular".into(),
        ));
    }
    Ok((
        (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
        (rhs[1] * m[0][0] - rhs[0] * m[1][0]) / det,
    ))
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let scale: f64 = (0..3).map(|i| m[i][i].abs()).sum();
    if d.abs() <= 1e-12 * scale * scale * scale {
        return None;
    }
    let mut out = [0.0f64; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = rhs[i];
        }
        *slot = det(&mk) / d;
    }
    Some(out)
}
