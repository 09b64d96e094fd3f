//! Chebyshev polynomials of the first kind, their monotone inverse branch,
//! and the polynomial derivative bound they are extremal for.
//!
//! For a polynomial `P` of degree `n ≥ 2` whose critical values all lie in
//! the closed unit disk,
//!
//! ```text
//! |P'(z)| ≤ 2^{(1-n)/n} |c_n|^{1/n} · T'_n(T_n⁻¹(|P(z)|))
//! ```
//!
//! at every point, with equality for `P = T_n` on the real ray
//! `|z| ≥ cos(π/(2n))`. `T_n⁻¹` is the continuous inverse branch mapping
//! `[0, +∞)` onto `[cos(π/(2n)), +∞)`.

use num_complex::Complex64;

use crate::poly;
use crate::{Error, Result};

/// First-kind Chebyshev polynomial `T_n` via the three-term recurrence
/// (stable for complex arguments at desk-scale degrees).
pub fn chebyshev_t(n: u32, x: Complex64) -> Complex64 {
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => x,
        _ => {
            let mut prev = Complex64::new(1.0, 0.0);
            let mut cur = x;
            for _ in 2..=n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `T'_n = n·U_{n-1}` via the second-kind recurrence.
pub fn chebyshev_t_derivative(n: u32, x: Complex64) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    // U_{n-1}
    let u = match n - 1 {
        0 => Complex64::new(1.0, 0.0),
        1 => 2.0 * x,
        m => {
            let mut prev = Complex64::new(1.0, 0.0);
            let mut cur = 2.0 * x;
            for _ in 2..=m {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    n as f64 * u
}

/// The inverse branch of `T_n` on `[cos(π/(2n)), +∞)`: the unique
/// `x ≥ cos(π/(2n))` with `T_n(x) = y`, for `y ≥ 0`.
///
/// Solved by safeguarded Newton on the strictly increasing restriction; for
/// `y ≥ 1` the closed form `cosh(arccosh(y)/n)` agrees within `1e-10`
/// (asserted in tests, not used here).
pub fn chebyshev_inverse_branch(n: u32, y: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("inverse branch needs degree n >= 1"));
    }
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("inverse branch needs y >= 0, got {y}")));
    }
    let t = |x: f64| chebyshev_t(n, Complex64::new(x, 0.0)).re;
    let dt = |x: f64| chebyshev_t_derivative(n, Complex64::new(x, 0.0)).re;

    let mut lo = (std::f64::consts::FRAC_PI_2 / n as f64).cos();
    let mut hi = lo.max(1.0);
    while t(hi) < y {
        hi *= 2.0;
        if hi > 1e160 {
            return Err(Error::numeric(format!("inverse branch bracket blew up for y = {y}")));
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = t(x) - y;
        if f.abs() <= 1e-12 * y.max(1.0) {
            break;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = dt(x);
        let newton = if d > 0.0 { x - f / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-16 * hi.max(1.0) {
            break;
        }
    }
    Ok(x)
}

/// A complex polynomial `c_0 + c_1 z + … + c_n z^n` of degree at least 2 with
/// a nonvanishing leading coefficient.
#[derive(Debug, Clone)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let coeffs = poly::trim(coeffs, 0.0);
        if coeffs.len() < 3 {
            return Err(Error::domain("polynomial degree must be at least 2"));
        }
        let lead = coeffs.last().unwrap();
        if lead.norm() <= 1e-14 {
            return Err(Error::domain("leading coefficient must exceed 1e-14"));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly::eval(&self.coeffs, z)
    }

    pub fn derivative_eval(&self, z: Complex64) -> Complex64 {
        poly::eval(&poly::derivative(&self.coeffs), z)
    }

    /// Images of the roots of `P'` — the critical values. Roots come from
    /// the same global root finder the Blaschke layer uses, polished by
    /// Newton on `P'`.
    pub fn critical_values(&self) -> Result<Vec<Complex64>> {
        let dp = poly::derivative(&self.coeffs);
        let ddp = poly::derivative(&dp);
        let mut roots = poly::roots(&dp)?;
        for r in roots.iter_mut() {
            for _ in 0..30 {
                let f = poly::eval(&dp, *r);
                let d = poly::eval(&ddp, *r);
                if d.norm() < 1e-18 {
                    break;
                }
                let step = f / d;
                *r -= step;
                if step.norm() < 1e-15 * (1.0 + r.norm()) {
                    break;
                }
            }
        }
        Ok(roots.iter().map(|&r| self.eval(r)).collect())
    }

    fn scaled(&self, factor: f64) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }
}

/// Outcome of a polynomial bound sweep.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    /// Max over the grid of `lhs - rhs` (nonpositive within 1e-8 confirms
    /// the bound there).
    pub max_violation: f64,
    /// Whether the polynomial was rescaled to pull its critical values into
    /// the closed unit disk.
    pub rescaled: bool,
    /// The factor applied (1 when no rescale was needed).
    pub scale: f64,
}

/// Sweeps the derivative bound over a grid.
///
/// The hypothesis needs all critical values of `P` inside the closed unit
/// disk; when they are not, `P` is multiplied by the reciprocal of the
/// largest critical-value modulus first (recorded in the result), which
/// makes the test exercise the bound tightly.
pub fn verify_polynomial_bound(p: &Polynomial, grid: &[Complex64]) -> Result<BoundCheck> {
    let n = p.degree() as u32;
    let critical = p.critical_values()?;
    let lambda = critical.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    // The hypothesis allows the closed disk; tolerate root-finder rounding
    // on polynomials whose critical values sit exactly on the circle.
    let (work, rescaled, scale) = if lambda > 1.0 + 1e-12 {
        (p.scaled(1.0 / lambda), true, 1.0 / lambda)
    } else {
        (p.clone(), false, 1.0)
    };

    let prefactor =
        2.0_f64.powf((1.0 - n as f64) / n as f64) * work.leading_coefficient().norm().powf(1.0 / n as f64);
    let mut max_violation = f64::NEG_INFINITY;
    for &z in grid {
        let lhs = work.derivative_eval(z).norm();
        let x = chebyshev_inverse_branch(n, work.eval(z).norm())?;
        let rhs = prefactor * chebyshev_t_derivative(n, Complex64::new(x, 0.0)).re;
        max_violation = max_violation.max(lhs - rhs);
    }
    Ok(BoundCheck {
        max_violation,
        rescaled,
        scale,
    })
}
