use rand::Rng;
use serde::Serialize;

use crate::error::Result;

use super::model::{bend_level, contact_state, emulate_adc, Calibration, SensorModel};
use super::window::AveragingWindow;

/// Default averaging window (s).
pub const DEFAULT_AVERAGING_SPAN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Processed reading for one antenna at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideChannel {
    pub raw: u32,
    pub averaged: f64,
    pub bend: f64,
    pub contact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensorFrame {
    pub t: f64,
    pub left: SideChannel,
    pub right: SideChannel,
}

/// Both antenna channels: emulation, averaging, calibration, thresholding.
#[derive(Debug, Clone)]
pub struct SensorPipeline {
    model: SensorModel,
    calib: Calibration,
    left: AveragingWindow,
    right: AveragingWindow,
}

impl SensorPipeline {
    pub fn new(model: SensorModel, calib: Calibration, span: f64) -> Result<Self> {
        model.validate()?;
        calib.validate()?;
        Ok(SensorPipeline {
            model,
            calib,
            left: AveragingWindow::new(span)?,
            right: AveragingWindow::new(span)?,
        })
    }

    pub fn model(&self) -> &SensorModel {
        &self.model
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calib
    }

    /// Sample both antennae given their total bend (rad) at time `t`.
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        t: f64,
        bend_left: f64,
        bend_right: f64,
        rng: &mut R,
    ) -> Result<SensorFrame> {
        let raw_l = emulate_adc(bend_left, &self.model, &self.calib, rng);
        let raw_r = emulate_adc(bend_right, &self.model, &self.calib, rng);
        let left = self.channel(Side::Left, raw_l, t)?;
        let right = self.channel(Side::Right, raw_r, t)?;
        Ok(SensorFrame { t, left, right })
    }

    /// Feed an already-digitised count through the averaging and threshold
    /// stages.
    pub fn channel(&mut self, side: Side, raw: u32, t: f64) -> Result<SideChannel> {
        let window = match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        };
        let averaged = window.push(f64::from(raw), t)?;
        let bend = bend_level(averaged, &self.calib, &self.model);
        Ok(SideChannel {
            raw,
            averaged,
            bend,
            contact: contact_state(bend, &self.calib),
        })
    }

    pub fn reset(&mut self) {
        self.left.clear();
        self.right.clear();
    }
}
