use num_complex::Complex64 as C64;

use super::decomp::TolerancePolicy;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

fn eval<F>(curve: &F, t: C64) -> Result<ComplexMatrix>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    let v = curve(t).map_err(|_| Error::EvaluationFailed)?;
    if !v.is_finite() {
        return Err(Error::EvaluationFailed);
    }
    Ok(v)
}

/// Fourth-order central difference of `curve` at `t0` along the complex direction `dir`.
fn central4<F>(curve: &F, t0: C64, dir: C64, h: f64) -> Result<ComplexMatrix>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    let f2p = eval(curve, t0 + dir * (2.0 * h))?;
    let f1p = eval(curve, t0 + dir * h)?;
    let f1m = eval(curve, t0 - dir * h)?;
    let f2m = eval(curve, t0 - dir * (2.0 * h))?;
    let shape = f2p.shape();
    if f1p.shape() != shape || f1m.shape() != shape || f2m.shape() != shape {
        return Err(Error::ShapeMismatch);
    }
    let mut d = f2m.sub(&f2p);
    d.axpy(C64::new(8.0, 0.0), &f1p.sub(&f1m));
    Ok(d.scale(C64::new(1.0 / (12.0 * h), 0.0)))
}

fn richardson<F>(curve: &F, t0: C64, dir: C64, h: f64) -> Result<ComplexMatrix>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    let coarse = central4(curve, t0, dir, h)?;
    let fine = central4(curve, t0, dir, 0.5 * h)?;
    let mut r = fine.scale(C64::new(16.0 / 15.0, 0.0));
    r.axpy(C64::new(-1.0 / 15.0, 0.0), &coarse);
    Ok(r)
}

/// `∂/∂t̄ = ½(∂ₓ + i∂ᵧ)` of a matrix-valued curve at `t0`, using the policy's `fd_step`.
pub fn dbar_derivative<F>(curve: F, t0: C64, policy: &TolerancePolicy) -> Result<ComplexMatrix>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    dbar_derivative_with_step(curve, t0, policy.fd_step)
}

pub fn dbar_derivative_with_step<F>(curve: F, t0: C64, h: f64) -> Result<ComplexMatrix>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    let dx = richardson(&curve, t0, C64::new(1.0, 0.0), h)?;
    let dy = richardson(&curve, t0, C64::new(0.0, 1.0), h)?;
    let mut out = dx;
    out.axpy(C64::new(0.0, 1.0), &dy);
    Ok(out.scale(C64::new(0.5, 0.0)))
}

/// `∂/∂t = ½(∂ₓ − i∂ᵧ)`; used by the gradient oracles.
pub fn d_derivative_with_step<F>(curve: F, t0: C64, h: f64) -> Result<ComplexMatrix>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    let dx = richardson(&curve, t0, C64::new(1.0, 0.0), h)?;
    let dy = richardson(&curve, t0, C64::new(0.0, 1.0), h)?;
    let mut out = dx;
    out.axpy(C64::new(0.0, -1.0), &dy);
    Ok(out.scale(C64::new(0.5, 0.0)))
}

/// Derivative of `s ↦ curve(t0 + s·dir)` at `s = 0` for real `s`.
pub fn directional_derivative<F>(curve: F, t0: C64, dir: C64, h: f64) -> Result<ComplexMatrix>
where
    F: Fn(C64) -> Result<ComplexMatrix>,
{
    richardson(&curve, t0, dir, h)
}
