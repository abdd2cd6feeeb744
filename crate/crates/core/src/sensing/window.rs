use std::collections::VecDeque;

use crate::error::{Error, Result};

const EDGE_TOLERANCE: f64 = 1e-9;

/// Boxcar average over the trailing `span` seconds, `(t - span, t]`.
#[derive(Debug, Clone)]
pub struct AveragingWindow {
    span: f64,
    samples: VecDeque<(f64, f64)>,
    sum: f64,
    last_t: Option<f64>,
}

impl AveragingWindow {
    pub fn new(span: f64) -> Result<Self> {
        if !(span > 0.0 && span.is_finite()) {
            return Err(Error::InvalidInput(format!("averaging span must be > 0, got {span}")));
        }
        Ok(AveragingWindow {
            span,
            samples: VecDeque::new(),
            sum: 0.0,
            last_t: None,
        })
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Retained samples, oldest first.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples.iter().copied()
    }

    /// Adds a sample at time `t` and returns the mean of the window.
    pub fn push(&mut self, sample: f64, t: f64) -> Result<f64> {
        if let Some(prev) = self.last_t {
            if t < prev {
                return Err(Error::TimeRegression {
                    previous: prev,
                    current: t,
                });
            }
        }
        self.last_t = Some(t);
        self.samples.push_back((t, sample));
        // Samples within EDGE_TOLERANCE of `t - span` count as outside so
        // that rounding in shifted timestamps cannot flip membership.
        while let Some(&(ts, _)) = self.samples.front() {
            if t - ts > self.span - EDGE_TOLERANCE {
                self.samples.pop_front();
            } else {
                break;
            }
        }
        self.sum = self.samples.iter().map(|(_, s)| s).sum();
        Ok(self.sum / self.samples.len() as f64)
    }

    pub fn clear(&mut self) {
        self.samples.clear();
        self.sum = 0.0;
        self.last_t = None;
    }
}
