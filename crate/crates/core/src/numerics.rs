//! Small numerical kernels shared by the physics modules: finite-difference
//! derivatives with Richardson extrapolation, a bracketed scalar root finder
//! and a log-log power fit.

use crate::{Error, Real, Result};

/// Binomial coefficient as a scalar.
fn binomial<T: Real>(n: usize, k: usize) -> T {
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::lit((n - i) as f64) / T::lit((i + 1) as f64);
    }
    acc
}

/// Plain central difference of order `order` at `x0` with spacing `h`.
///
/// Uses the symmetric binomial stencil, sampling at `x0 + (order/2 - i)·h`,
/// which is second-order accurate for every derivative order.
pub fn central_difference<T: Real, F: Fn(T) -> T>(f: &F, x0: T, order: usize, h: T) -> T {
    if order == 0 {
        return f(x0);
    }
    let half = T::lit(order as f64) / T::lit(2.0);
    let mut sum = T::zero();
    for i in 0..=order {
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        let offset = (half - T::lit(i as f64)) * h;
        sum = sum + sign * binomial::<T>(order, i) * f(x0 + offset);
    }
    sum / h.powi(order as i32)
}

/// Step of a plain central difference of order `order`:
/// `max(1, |x0|)·ε^(1/(order+2))`, balancing O(h²) truncation against round-off.
pub fn default_step<T: Real>(x0: T, order: usize) -> T {
    let scale = T::one().max(x0.abs());
    scale * T::epsilon().powf(T::one() / T::lit((order + 2) as f64))
}

/// Coarse step used by [`derivative`]: `max(1, |x0|)·ε^(1/(order+4))`. After
/// one Richardson level the truncation error is O(h⁴), so the balance point
/// moves to a larger step.
pub fn richardson_step<T: Real>(x0: T, order: usize) -> T {
    let scale = T::one().max(x0.abs());
    scale * T::epsilon().powf(T::one() / T::lit((order + 4) as f64))
}

/// Outcome of a finite-difference derivative, with the diagnostics used to
/// reject non-smooth inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeEstimate<T> {
    pub value: T,
    /// |D(h) - D(h/2)| before extrapolation.
    pub richardson_residual: T,
    pub step: T,
}

/// Derivative of order `order` at `x0` by central differences with one level
/// of Richardson extrapolation.
///
/// Fails with [`Error::Differentiation`] when the function has a kink at
/// `x0` (one-sided slopes disagree by an amount that does not shrink with
/// the step), when the two step sizes disagree grossly, or when any sample is
/// non-finite.
pub fn derivative<T: Real, F: Fn(T) -> T>(
    f: &F,
    x0: T,
    order: usize,
) -> Result<DerivativeEstimate<T>> {
    let f0 = f(x0);
    if !f0.is_finite() {
        return Err(Error::Evaluation(format!(
            "non-finite function value {f0} at {x0}"
        )));
    }
    if order == 0 {
        return Ok(DerivativeEstimate {
            value: f0,
            richardson_residual: T::zero(),
            step: T::zero(),
        });
    }

    check_kink(f, x0, f0, order)?;

    let two = T::lit(2.0);
    let h = richardson_step(x0, order);
    let coarse = central_difference(f, x0, order, h);
    let fine = central_difference(f, x0, order, h / two);
    if !coarse.is_finite() || !fine.is_finite() {
        return Err(Error::Differentiation {
            order,
            residual: f64::INFINITY,
            tolerance: 0.0,
        });
    }
    let residual = (coarse - fine).abs();
    let tolerance = T::lit(1e-2) * T::one().max(fine.abs());
    if residual > tolerance {
        return Err(Error::Differentiation {
            order,
            residual: residual.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    let value = (T::lit(4.0) * fine - coarse) / T::lit(3.0);
    Ok(DerivativeEstimate {
        value,
        richardson_residual: residual,
        step: h,
    })
}

/// Slope-jump detector: for smooth `f` the difference between forward and
/// backward slopes scales with the step, for a kink it does not.
fn check_kink<T: Real, F: Fn(T) -> T>(f: &F, x0: T, f0: T, order: usize) -> Result<()> {
    let h = default_step(x0, 1);
    let jump = |step: T| {
        let forward = (f(x0 + step) - f0) / step;
        let backward = (f0 - f(x0 - step)) / step;
        forward - backward
    };
    let d1 = jump(h);
    let d2 = jump(h / T::lit(2.0));
    if !d1.is_finite() || !d2.is_finite() {
        return Err(Error::Differentiation {
            order,
            residual: f64::INFINITY,
            tolerance: 0.0,
        });
    }
    let noise = T::lit(100.0) * T::epsilon() * T::one().max(f0.abs()) / h;
    if d1.abs() > noise && d2.abs() > T::lit(0.75) * d1.abs() {
        return Err(Error::Differentiation {
            order,
            residual: d2.abs().to_f64_lossy(),
            tolerance: noise.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Root of `f` on a sign-changing bracket `[lo, hi]`.
///
/// Bisection narrows the bracket to a thousandth of its width, then a
/// safeguarded secant stage converges to `rel_tol` relative accuracy. Secant
/// iterates are kept strictly inside the bracket and a bisection is forced
/// whenever three consecutive steps fail to halve it.
pub fn bracketed_root<T: Real, F: Fn(T) -> T>(
    f: F,
    lo: T,
    hi: T,
    rel_tol: T,
    max_iterations: usize,
) -> Result<T> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (mut fa, mut fb) = (f(a), f(b));
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Evaluation("non-finite value at bracket end".into()));
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!("no sign change on bracket [{a}, {b}]")));
    }

    let two = T::lit(2.0);
    let coarse_width = T::lit(1e-3) * (b - a);
    let mut last: Option<T> = None;
    let mut reference_width = b - a;
    let mut stalled = 0usize;
    let mut history = Vec::new();
    for _ in 0..max_iterations {
        let width = b - a;
        history.push(width.to_f64_lossy());
        let magnitude = a.abs().max(b.abs());
        if width <= rel_tol * magnitude || width <= T::min_positive_value() {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let secant_phase = width <= coarse_width && stalled < 3;
        let mut x = if secant_phase {
            b - fb * (b - a) / (fb - fa)
        } else {
            (a + b) / two
        };
        if !(x > a && x < b) {
            x = (a + b) / two;
        }
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::Evaluation(format!("non-finite value at {x}")));
        }
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if b - a <= reference_width / two {
            reference_width = b - a;
            stalled = 0;
        } else {
            stalled += 1;
        }
        if secant_phase {
            if let Some(prev) = last {
                if (x - prev).abs() <= rel_tol * x.abs() {
                    return Ok(x);
                }
            }
        }
        last = Some(x);
    }
    Err(Error::Solver {
        iterations: max_iterations,
        history,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> Result<T> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Fit(format!(
            "need at least two matched points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !(*v > T::zero()) || !v.is_finite()) {
        return Err(Error::Fit("log-log fit requires positive finite data".into()));
    }
    let n = T::lit(xs.len() as f64);
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().copied().sum::<T>() / n;
    let my = ly.iter().copied().sum::<T>() / n;
    let sxx: T = lx.iter().map(|x| (*x - mx) * (*x - mx)).sum();
    let sxy: T = lx.iter().zip(&ly).map(|(x, y)| (*x - mx) * (*y - my)).sum();
    if sxx <= T::zero() {
        return Err(Error::Fit("abscissae are all equal".into()));
    }
    Ok(sxy / sxx)
}

/// Max-norm of a slice.
pub fn max_abs<T: Real>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}
