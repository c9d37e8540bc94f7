//! Damped Newton iteration in the complex plane.

#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Stop once `|f| < tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_iter: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonRoot {
    pub root: C64,
    pub residual: f64,
    pub iterations: usize,
}

/// Newton's method for an analytic `f` returning `(f(z), f'(z))`.
///
/// A step that increases `|f|` is halved (up to 40 times). Iteration also
/// stops when the step stalls at the rounding level; the root is then
/// returned only if its residual is within `100 * tol`.
pub fn solve<F>(f: F, seed: C64, opts: &NewtonOptions) -> Option<NewtonRoot>
where
    F: Fn(C64) -> (C64, C64),
{
    let mut z = seed;
    let (mut fz, mut dfz) = f(z);
    if !(fz.re.is_finite() && fz.im.is_finite()) {
        return None;
    }
    for iteration in 0..=opts.max_iter {
        let residual = fz.norm();
        if residual < opts.tol {
            return Some(NewtonRoot {
                root: z,
                residual,
                iterations: iteration,
            });
        }
        if iteration == opts.max_iter || dfz.norm() == 0.0 {
            break;
        }
        let step = fz / dfz;
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let candidate = z - step * scale;
            let (fc, dfc) = f(candidate);
            if fc.re.is_finite() && fc.im.is_finite() && fc.norm() < residual {
                accepted = Some((candidate, fc, dfc));
                break;
            }
            scale *= 0.5;
        }
        match accepted {
            Some((candidate, fc, dfc)) => {
                let moved = (candidate - z).norm();
                z = candidate;
                fz = fc;
                dfz = dfc;
                if moved <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
                    break;
                }
            }
            None => break,
        }
    }
    let residual = fz.norm();
    (residual < 100.0 * opts.tol).then_some(NewtonRoot {
        root: z,
        residual,
        iterations: opts.max_iter,
    })
}

/// Newton's method with a central-difference derivative of step `h`.
pub fn solve_numeric<F>(f: F, seed: C64, h: f64, opts: &NewtonOptions) -> Option<NewtonRoot>
where
    F: Fn(C64) -> Option<C64>,
{
    let wrapped = |z: C64| -> (C64, C64) {
        let nan = C64::new(f64::NAN, f64::NAN);
        let value = f(z).unwrap_or(nan);
        let step = C64::new(h * z.norm().max(1.0), 0.0);
        let derivative = match (f(z + step), f(z - step)) {
            (Some(a), Some(b)) => (a - b) / (step * 2.0),
            _ => nan,
        };
        (value, derivative)
    };
    solve(wrapped, seed, opts)
}
