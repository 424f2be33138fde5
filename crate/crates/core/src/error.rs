use thiserror::Error;

/// Errors produced by the analytic and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series diverges: probe radius {radius} is not inside perturber radius {perturber}")]
    OuterProbe { radius: f64, perturber: f64 },

    #[error("pole in zone formula at n = {n} (denominator {denominator})")]
    Pole { n: u32, denominator: f64 },

    #[error("collision geometry at t = {t}: separation {separation} below threshold")]
    Collision { t: f64, separation: f64 },

    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("quadrature did not converge: refinement changed b_{p} by {change:e}")]
    Quadrature { p: usize, change: f64 },

    #[error("no instability tongue found in window [{lo}, {hi}]")]
    NoTongue { lo: f64, hi: f64 },

    #[error("tongue is not bracketed by window [{lo}, {hi}]")]
    Unbracketed { lo: f64, hi: f64 },

    #[error("overlap never occurs: {0}")]
    NoOverlap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
