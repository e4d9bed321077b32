//! Fidelity sweep definitions behind the `figure` subcommand.
//!
//! Each figure compares the quantum and classical fidelity along one
//! parameter sweep with the first state held fixed:
//!
//! * `fig1`  — measure-and-reprepare channel on an isotropic input of
//!   variance V, sweeping V (the quantum/classical asymptote picture);
//! * `fig3a` — pure squeezed reference (2, 1/2) against pure states of
//!   varying squeezing, sweeping the partner's major variance;
//! * `fig3b` — the same reference against equally squeezed mixed states,
//!   sweeping the partner's variance product;
//! * `fig4a`/`fig4b` — the fig3 sweeps with the reference breadth
//!   quadrupled, reference (4, 1);
//! * `fig5`  — equal |squeezing|, breadths 1 vs 4, sweeping the relative
//!   axis angle from 0 to pi/2 (the fidelity-ordering crossover).

use clap::ValueEnum;
use std::f64::consts::FRAC_PI_2;

use cvfid::{classical_fidelity, no_entanglement_fidelity, quantum_fidelity, GaussianState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5,
}

#[derive(Debug, Clone, Copy)]
enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy)]
pub struct FigureSpec {
    id: FigureId,
    min: f64,
    max: f64,
    points: usize,
    scale: Scale,
}

impl FigureSpec {
    /// Apply per-figure defaults and validate the requested range against
    /// the figure's domain.
    pub fn build(
        id: FigureId,
        min: Option<f64>,
        max: Option<f64>,
        points: Option<usize>,
    ) -> Result<Self, String> {
        let (def_min, def_max, def_points, scale, lo_bound, hi_bound) = match id {
            FigureId::Fig1 => (1.0, 10.0, 181, Scale::Linear, 1.0, f64::INFINITY),
            FigureId::Fig3a | FigureId::Fig4a => {
                (0.125, 8.0, 161, Scale::Log, 0.0, f64::INFINITY)
            }
            FigureId::Fig3b | FigureId::Fig4b => (1.0, 64.0, 161, Scale::Log, 1.0, f64::INFINITY),
            FigureId::Fig5 => (0.0, FRAC_PI_2, 181, Scale::Linear, 0.0, FRAC_PI_2),
        };
        let min = min.unwrap_or(def_min);
        let max = max.unwrap_or(def_max);
        let points = points.unwrap_or(def_points);
        if points < 2 {
            return Err(format!("need at least 2 sweep points, got {points}"));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(format!("invalid sweep range [{min}, {max}]"));
        }
        if min < lo_bound || max > hi_bound {
            return Err(format!(
                "sweep range [{min}, {max}] outside the figure domain [{lo_bound}, {hi_bound}]"
            ));
        }
        if matches!(scale, Scale::Log) && min <= 0.0 {
            return Err(format!("log sweep requires a positive minimum, got {min}"));
        }
        Ok(Self {
            id,
            min,
            max,
            points,
            scale,
        })
    }

    fn param(&self, i: usize) -> f64 {
        let t = i as f64 / (self.points - 1) as f64;
        match self.scale {
            Scale::Linear => self.min + t * (self.max - self.min),
            Scale::Log => self.min * (self.max / self.min).powf(t),
        }
    }

    /// Evaluate the sweep: `(param, f_quantum, f_classical)` per point.
    pub fn rows(&self) -> cvfid::Result<Vec<(f64, f64, f64)>> {
        let mut rows = Vec::with_capacity(self.points);
        for i in 0..self.points {
            let p = self.param(i);
            let (fq, fc) = self.point(p)?;
            rows.push((p, fq, fc));
        }
        Ok(rows)
    }

    fn point(&self, p: f64) -> cvfid::Result<(f64, f64)> {
        let pair = |s1: GaussianState, s2: GaussianState| -> cvfid::Result<(f64, f64)> {
            let fq = quantum_fidelity(&s1, &s2)?
                .value()
                .expect("coincident-center sweeps stay in closed form");
            let fc = classical_fidelity(&s1, &s2)?
                .value()
                .expect("classical fidelity is always closed-form");
            Ok((fq, fc))
        };
        match self.id {
            FigureId::Fig1 => {
                let fq = no_entanglement_fidelity(p)?;
                let s1 = GaussianState::isotropic(p)?;
                let s2 = GaussianState::isotropic(p + 2.0)?;
                let fc = classical_fidelity(&s1, &s2)?
                    .value()
                    .expect("classical fidelity is always closed-form");
                Ok((fq, fc))
            }
            FigureId::Fig3a => pair(
                GaussianState::new(2.0, 0.5, 0.0, 0.0, 0.0)?,
                GaussianState::new(p, 1.0 / p, 0.0, 0.0, 0.0)?,
            ),
            FigureId::Fig3b => pair(
                GaussianState::new(2.0, 0.5, 0.0, 0.0, 0.0)?,
                partner_of_breadth(p)?,
            ),
            FigureId::Fig4a => pair(
                GaussianState::new(4.0, 1.0, 0.0, 0.0, 0.0)?,
                GaussianState::new(p, 4.0 / p, 0.0, 0.0, 0.0)?,
            ),
            FigureId::Fig4b => pair(
                GaussianState::new(4.0, 1.0, 0.0, 0.0, 0.0)?,
                partner_of_breadth(p)?,
            ),
            FigureId::Fig5 => pair(
                GaussianState::new(4.0, 0.25, 0.0, 0.0, 0.0)?,
                GaussianState::new(8.0, 0.5, p, 0.0, 0.0)?,
            ),
        }
    }
}

/// Mixed partner with variance ratio 4 and variance product `breadth`.
fn partner_of_breadth(breadth: f64) -> cvfid::Result<GaussianState> {
    let root = breadth.sqrt();
    GaussianState::new(2.0 * root, root / 2.0, 0.0, 0.0, 0.0)
}
