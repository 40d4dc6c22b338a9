//! Flow-matching numeric kernel: linear interpolant, its constant target
//! velocity, the squared-error objective, and an explicit Euler sampler.
//!
//! Default convention: `x_t = t * x1 + (1 - t) * x0` with target velocity
//! `x1 - x0`; sampling integrates from `t = 1` (noise) down to `t = 0`
//! (data) via `x <- x - dt * v(x, t)`. [`Convention::Reversed`] flips the sign
//! of the target and of the sampler update, for fields trained on
//! `x0 - x1` instead.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SampleVec(Vec<f64>);

impl SampleVec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("sample vector must have at least one entry"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("entry {i} is not finite")));
        }
        Ok(SampleVec(values))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    fn zip_with(&self, other: &SampleVec, f: impl Fn(f64, f64) -> f64) -> Result<SampleVec> {
        check_dims(self, other)?;
        Ok(SampleVec(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect()))
    }
}

impl TryFrom<Vec<f64>> for SampleVec {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        SampleVec::new(v)
    }
}

fn check_dims(a: &SampleVec, b: &SampleVec) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::input(format!("dimension mismatch: {} vs {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// A velocity `v(x, t)`. Conditioning, if any, lives in the implementor.
pub trait VelocityField {
    fn velocity(&self, x: &SampleVec, t: f64) -> SampleVec;
}

impl<F: Fn(&SampleVec, f64) -> SampleVec> VelocityField for F {
    fn velocity(&self, x: &SampleVec, t: f64) -> SampleVec {
        self(x, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Target `x1 - x0`, sampler `x <- x - dt * v`.
    #[default]
    Standard,
    /// Target `x0 - x1`, sampler `x <- x + dt * v`.
    Reversed,
}

impl Convention {
    fn sign(self) -> f64 {
        match self {
            Convention::Standard => 1.0,
            Convention::Reversed => -1.0,
        }
    }
}

pub fn interpolate(x0: &SampleVec, x1: &SampleVec, t: f64) -> Result<SampleVec> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::input(format!("t must be in [0, 1], got {t}")));
    }
    if t == 0.0 {
        check_dims(x0, x1)?;
        return Ok(x0.clone());
    }
    if t == 1.0 {
        check_dims(x0, x1)?;
        return Ok(x1.clone());
    }
    x0.zip_with(x1, |a, b| t * b + (1.0 - t) * a)
}

pub fn target_velocity(x0: &SampleVec, x1: &SampleVec) -> Result<SampleVec> {
    target_velocity_with(Convention::Standard, x0, x1)
}

pub fn target_velocity_with(conv: Convention, x0: &SampleVec, x1: &SampleVec) -> Result<SampleVec> {
    let s = conv.sign();
    x0.zip_with(x1, |a, b| s * (b - a))
}

/// `|v(x_t, t) - u|^2` at one `(x0, x1, t)` triple.
pub fn fm_loss<V: VelocityField + ?Sized>(field: &V, x0: &SampleVec, x1: &SampleVec, t: f64) -> Result<f64> {
    fm_loss_with(Convention::Standard, field, x0, x1, t)
}

pub fn fm_loss_with<V: VelocityField + ?Sized>(
    conv: Convention,
    field: &V,
    x0: &SampleVec,
    x1: &SampleVec,
    t: f64,
) -> Result<f64> {
    let xt = interpolate(x0, x1, t)?;
    let u = target_velocity_with(conv, x0, x1)?;
    let v = field.velocity(&xt, t);
    check_dims(&v, &u)?;
    Ok(v.0.iter().zip(&u.0).map(|(a, b)| (a - b).powi(2)).sum())
}

/// Explicit Euler from `t = 1` to `t = 0` in `steps` equal steps.
pub fn euler_sample<V: VelocityField + ?Sized>(field: &V, x1: &SampleVec, steps: usize) -> Result<SampleVec> {
    euler_sample_with(Convention::Standard, field, x1, steps)
}

pub fn euler_sample_with<V: VelocityField + ?Sized>(
    conv: Convention,
    field: &V,
    x1: &SampleVec,
    steps: usize,
) -> Result<SampleVec> {
    if steps == 0 {
        return Err(Error::input("steps must be at least 1"));
    }
    let dt = 1.0 / steps as f64;
    let s = conv.sign();
    let mut x = x1.0.clone();
    for k in 0..steps {
        let t = 1.0 - k as f64 * dt;
        let v = field.velocity(&SampleVec(x.clone()), t);
        if v.dim() != x.len() {
            return Err(Error::input(format!("field returned dimension {} for input {}", v.dim(), x.len())));
        }
        for (xi, vi) in x.iter_mut().zip(&v.0) {
            *xi -= s * dt * vi;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: k + 1 });
        }
    }
    Ok(SampleVec(x))
}
