use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::model::Calibration;

/// One calibration observation: averaged ADC count and the reference bend
/// level imposed by the indenter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub avg_adc: f64,
    pub ref_bend: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationFit {
    pub k_s: f64,
    pub x_0: f64,
    /// Root-mean-square residual in bend-level units.
    pub rms_residual: f64,
    pub iterations: usize,
}

impl CalibrationFit {
    pub fn calibration(&self, theta: f64) -> Result<Calibration> {
        Calibration::new(self.k_s, self.x_0, theta)
    }
}

fn sigmoid(k: f64, x0: f64, x: f64) -> f64 {
    1.0 / (1.0 + (k * (x - x0)).exp())
}

fn sum_sq(points: &[(f64, f64)], k: f64, x0: f64) -> f64 {
    points.iter().map(|(x, b)| (sigmoid(k, x0, *x) - b).powi(2)).sum()
}

/// Least-squares fit of `b = 1 / (1 + exp(k_s (x - x_0)))` with
/// `x = avg_adc / full_scale`, by Levenberg-Marquardt from a logit-linear
/// starting point.
pub fn fit_calibration(sweep: &[SweepPoint], full_scale: f64) -> Result<CalibrationFit> {
    if sweep.len() < 4 {
        return Err(Error::FitFailure(format!(
            "need at least 4 points, got {}",
            sweep.len()
        )));
    }
    if !(full_scale > 0.0) {
        return Err(Error::FitFailure("full scale must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = sweep.iter().map(|p| (p.avg_adc / full_scale, p.ref_bend)).collect();
    if pts.iter().any(|(x, b)| !x.is_finite() || !b.is_finite()) {
        return Err(Error::FitFailure("non-finite sweep value".into()));
    }
    let mean_b = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let var_b = pts.iter().map(|p| (p.1 - mean_b).powi(2)).sum::<f64>() / pts.len() as f64;
    if var_b < 1e-12 {
        return Err(Error::FitFailure("reference levels are all equal".into()));
    }
    if !(pts.iter().any(|p| p.1 > 0.5) && pts.iter().any(|p| p.1 < 0.5)) {
        return Err(Error::FitFailure("sweep does not span the transition".into()));
    }

    let (mut k, mut x0) = initial_guess(&pts);
    let mut cost = sum_sq(&pts, k, x0);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    for _ in 0..500 {
        iterations += 1;
        // normal equations J^T J and J^T r
        let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, b) in &pts {
            let s = sigmoid(k, x0, x);
            let ds = s * (1.0 - s);
            let jk = -ds * (x - x0);
            let jx = ds * k;
            let r = s - b;
            a11 += jk * jk;
            a12 += jk * jx;
            a22 += jx * jx;
            g1 += jk * r;
            g2 += jx * r;
        }
        if g1.abs().max(g2.abs()) < 1e-15 {
            break;
        }
        let mut improved = false;
        for _ in 0..30 {
            let m11 = a11 * (1.0 + lambda);
            let m22 = a22 * (1.0 + lambda);
            let det = m11 * m22 - a12 * a12;
            if !(det.abs() > 0.0) {
                lambda *= 10.0;
                continue;
            }
            let dk = -(m22 * g1 - a12 * g2) / det;
            let dx = -(m11 * g2 - a12 * g1) / det;
            let (nk, nx) = (k + dk, x0 + dx);
            let ncost = sum_sq(&pts, nk, nx);
            if nk > 0.0 && ncost <= cost {
                let small = dk.abs() <= 1e-13 * k.abs() && dx.abs() <= 1e-13 * x0.abs().max(1e-3);
                k = nk;
                x0 = nx;
                cost = ncost;
                lambda = (lambda * 0.1).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }

    if !(k > 0.0 && k.is_finite() && x0.is_finite()) {
        return Err(Error::FitFailure(format!("fit diverged (k_s = {k}, x_0 = {x0})")));
    }
    Ok(CalibrationFit {
        k_s: k,
        x_0: x0,
        rms_residual: (cost / pts.len() as f64).sqrt(),
        iterations,
    })
}

/// Linear regression of `logit(1 - b) = k x - k x_0` over the points whose
/// level is safely inside (0, 1).
fn initial_guess(pts: &[(f64, f64)]) -> (f64, f64) {
    let usable: Vec<(f64, f64)> = pts
        .iter()
        .filter(|(_, b)| *b > 0.02 && *b < 0.98)
        .map(|&(x, b)| (x, ((1.0 - b) / b).ln()))
        .collect();
    if usable.len() >= 2 {
        let n = usable.len() as f64;
        let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
        let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 && sxy > 0.0 {
            let k = sxy / sxx;
            return (k, mx - my / k);
        }
    }
    // fall back to the midpoint between the closest points either side of 0.5
    let hi = pts
        .iter()
        .filter(|p| p.1 > 0.5)
        .map(|p| p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = pts
        .iter()
        .filter(|p| p.1 < 0.5)
        .map(|p| p.0)
        .fold(f64::INFINITY, f64::min);
    (10.0, 0.5 * (hi + lo))
}

pub fn read_sweep_csv<R: Read>(reader: R) -> Result<Vec<SweepPoint>> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn write_sweep_csv<W: Write>(writer: W, points: &[SweepPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for p in points {
        w.serialize(p)?;
    }
    w.flush().map_err(|e| Error::io("<sweep csv>", e))?;
    Ok(())
}
