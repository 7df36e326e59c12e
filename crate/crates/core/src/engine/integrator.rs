use crate::error::{Error, Result};

/// One classical fourth-order Runge–Kutta step of ẋ = f(t, x).
///
/// Errors from `f` propagate unchanged; a non-finite derivative or state is
/// reported as a blow-up at the time it appeared.
pub fn integrate_step<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    t: f64,
    x: &[f64; N],
    dt: f64,
) -> Result<[f64; N]> {
    let mut eval = |t: f64, x: &[f64; N]| -> Result<[f64; N]> {
        let d = f(t, x)?;
        if let Some(i) = d.iter().position(|v| !v.is_finite()) {
            return Err(Error::IntegrationBlowup {
                time_s: t,
                detail: format!("derivative of state {i} is {}", d[i]),
            });
        }
        Ok(d)
    };
    let offset = |k: &[f64; N], h: f64| -> [f64; N] {
        let mut out = *x;
        for i in 0..N {
            out[i] += h * k[i];
        }
        out
    };
    let k1 = eval(t, x)?;
    let k2 = eval(t + 0.5 * dt, &offset(&k1, 0.5 * dt))?;
    let k3 = eval(t + 0.5 * dt, &offset(&k2, 0.5 * dt))?;
    let k4 = eval(t + dt, &offset(&k3, dt))?;
    let mut next = *x;
    for i in 0..N {
        next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if let Some(i) = next.iter().position(|v| !v.is_finite()) {
        return Err(Error::IntegrationBlowup {
            time_s: t + dt,
            detail: format!("state {i} became {}", next[i]),
        });
    }
    Ok(next)
}
