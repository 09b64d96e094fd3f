//! The Zolotarev fraction `Z_n(ζ; κ)` and its degree/modulus equation.
//!
//! `Z` is defined parametrically through the elliptic sine:
//!
//! ```text
//! Z_n(sn(u; k); κ) = sn(u · K(κ)/K(k); κ)
//! ```
//!
//! where the inner modulus `k` solves `K'(k)K(κ) = n K'(κ)K(k)`. Evaluation
//! goes through `inverse_sn` and `sn` rather than an explicit rational
//! expression — the coefficient form is ill-conditioned already at moderate
//! degree, while the parametric route is stable everywhere it is needed.
//!
//! `Z` is a rational function of degree `n`, odd, fixing `0, ±1`, mapping
//! `[-1, 1]` onto itself and the left half-plane into the left half-plane.
//! Its zeros sit at `ζ = sn(2j·iK'(k)/n; k)`; for even `n` one of the lattice
//! points is the pole of sn, i.e. one zero of `Z` is at `ζ = ∞` (returned as
//! an infinite complex value).

use num_complex::Complex64;

use crate::elliptic::{complete_k, inverse_sn, jacobi_sn, jacobi_sn_cn_dn, EllipticPair, Modulus};
use crate::{Error, Result};

/// Solved parameters of a degree-`n` Zolotarev fraction: the outer modulus
/// `κ`, the inner modulus `k` from the degree equation, both pairs of
/// complete integrals, and the argument scale `K(κ)/K(k)`.
#[derive(Debug, Clone)]
pub struct ZolotarevParams {
    n: u32,
    kappa: Modulus,
    k: Modulus,
    ek: EllipticPair,
    ekappa: EllipticPair,
    ratio: f64,
}

impl ZolotarevParams {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kappa(&self) -> &Modulus {
        &self.kappa
    }

    pub fn k(&self) -> &Modulus {
        &self.k
    }

    /// Complete integrals of the inner modulus `k`.
    pub fn ek(&self) -> &EllipticPair {
        &self.ek
    }

    /// Complete integrals of the outer modulus `κ`.
    pub fn ekappa(&self) -> &EllipticPair {
        &self.ekappa
    }

    /// `K(κ)/K(k)`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Relative residual of `K'(k)K(κ) = n K'(κ)K(k)`.
    pub fn residual(&self) -> f64 {
        let lhs = self.ek.big_k_prime * self.ekappa.big_k;
        let rhs = self.n as f64 * self.ekappa.big_k_prime * self.ek.big_k;
        (lhs - rhs).abs() / rhs
    }
}

/// Solves the degree equation `K'(k)K(κ) = n K'(κ)K(k)` for `k`.
///
/// `r(k) = K'(k)/K(k)` is strictly decreasing from +∞ at 0⁺ to 0 at 1⁻, so
/// bisection brackets the unique root. The bisection runs in `ln k`: for
/// larger `n` the solution is exponentially small (`ln(4/k) ≈ n·ln(4/κ)` as
/// `κ → 0`) and a linear bracket cannot resolve it to relative accuracy.
pub fn solve_modulus(n: u32, kappa: Modulus) -> Result<ZolotarevParams> {
    if n < 1 {
        return Err(Error::domain("degree n must be at least 1"));
    }
    let ekappa = complete_k(&kappa);
    let r_target = n as f64 * ekappa.big_k_prime / ekappa.big_k;

    let (k, ek) = if n == 1 {
        // The equation reduces to r(k) = r(κ).
        (kappa, ekappa)
    } else {
        let r_of = |ln_k: f64| -> Result<f64> {
            let m = Modulus::new(ln_k.exp())?;
            let e = complete_k(&m);
            Ok(e.big_k_prime / e.big_k)
        };
        // r(κ) < n·r(κ), so the root lies below κ. Walk the lower end down
        // until the target is bracketed.
        let mut hi = kappa.k().ln();
        let mut lo = hi - 8.0;
        let mut lo_val = r_of(lo)?;
        while lo_val < r_target {
            hi = lo;
            lo -= 8.0;
            if lo < -660.0 {
                return Err(Error::numeric(format!(
                    "modulus equation bracket failure: n = {n}, κ = {}",
                    kappa.k()
                )));
            }
            lo_val = r_of(lo)?;
        }
        for _ in 0..200 {
            if hi - lo < 1e-15 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let r_mid = r_of(mid)?;
            if (r_mid - r_target).abs() < 1e-13 * r_target {
                lo = mid;
                hi = mid;
                break;
            }
            if r_mid > r_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k = Modulus::new((0.5 * (lo + hi)).exp())?;
        let ek = complete_k(&k);
        (k, ek)
    };

    let ratio = ekappa.big_k / ek.big_k;
    let params = ZolotarevParams {
        n,
        kappa,
        k,
        ek,
        ekappa,
        ratio,
    };
    let residual = params.residual();
    if residual > 1e-10 {
        return Err(Error::numeric(format!(
            "degree-equation residual {residual:.3e} exceeds 1e-10 (n = {n}, κ = {})",
            kappa.k()
        )));
    }
    if n >= 2 && !(params.k.k() < kappa.k()) {
        return Err(Error::consistency(format!(
            "expected k < κ for n ≥ 2, got k = {}, κ = {}",
            params.k.k(),
            kappa.k()
        )));
    }
    Ok(params)
}

/// Evaluates `Z_n(ζ; κ) = sn(inverse_sn(ζ; k) · K(κ)/K(k); κ)`.
///
/// Real `ζ ∈ [-1, 1]` stays on the real path and the result is real in
/// `[-1, 1]`. Pole proximity at either elliptic level propagates as
/// [`Error::Pole`].
pub fn zolotarev_eval(zeta: Complex64, p: &ZolotarevParams) -> Result<Complex64> {
    let u = inverse_sn(zeta, &p.k)?;
    jacobi_sn(u * p.ratio, &p.kappa)
}

/// `dZ/dζ`, from the parametric form:
/// `Z'(ζ) = ratio · cn·dn(ratio·u; κ) / cn·dn(u; k)` with `u = sn⁻¹(ζ; k)`.
///
/// Branch points of `Z` (where `cn·dn(u; k) = 0`, i.e. `ζ = ±1, ±1/k`) are
/// rejected.
pub fn zolotarev_derivative(zeta: Complex64, p: &ZolotarevParams) -> Result<Complex64> {
    let u = inverse_sn(zeta, &p.k)?;
    let (_, cd, dd) = jacobi_sn_cn_dn(u * p.ratio, &p.kappa)?;
    let (_, c, d) = jacobi_sn_cn_dn(u, &p.k)?;
    let denom = c * d;
    if denom.norm() < 1e-13 {
        return Err(Error::numeric(format!(
            "Z'(ζ) evaluated at a branch point (ζ = {zeta})"
        )));
    }
    Ok(p.ratio * cd * dd / denom)
}

/// The `n` zeros of `Z` on the Riemann sphere, from the lattice formula
/// `ζ_j = sn(2j·iK'(k)/n; k)`, `j = 0, …, n-1`.
///
/// For even `n` the `j = n/2` lattice point is the pole of sn and the
/// corresponding zero of `Z` is at infinity; it is returned as
/// `inf + 0i`. Every zero is verified by evaluation.
pub fn zolotarev_zeros(p: &ZolotarevParams) -> Result<Vec<Complex64>> {
    let n = p.n;
    let kp = p.ek.big_k_prime;
    let mut zeros = Vec::with_capacity(n as usize);
    for j in 0..n {
        if n % 2 == 0 && j == n / 2 {
            // Zero at ζ = ∞: verify via the parametric value there, which is
            // sn(i·n·K'(κ); κ) — a period point of sn(·; κ) for even n.
            let w = Complex64::new(0.0, n as f64 * p.ekappa.big_k_prime);
            let value = jacobi_sn(reduce_to_lattice_cell(w, &p.ekappa), &p.kappa)?;
            if value.norm() >= 1e-8 {
                return Err(Error::numeric(format!(
                    "zero of Z at infinity failed verification: |Z(∞)| = {:.3e}",
                    value.norm()
                )));
            }
            zeros.push(Complex64::new(f64::INFINITY, 0.0));
            continue;
        }
        let u = Complex64::new(0.0, 2.0 * j as f64 * kp / (n as f64));
        let zeta = jacobi_sn(u, &p.k)?;
        let value = zolotarev_eval(zeta, p)?;
        if value.norm() >= 1e-8 {
            return Err(Error::numeric(format!(
                "zero ζ_{j} = {zeta} failed verification: |Z| = {:.3e}",
                value.norm()
            )));
        }
        zeros.push(zeta);
    }
    Ok(zeros)
}

fn reduce_to_lattice_cell(w: Complex64, pair: &EllipticPair) -> Complex64 {
    let re_period = 4.0 * pair.big_k;
    let im_period = 2.0 * pair.big_k_prime;
    Complex64::new(
        w.re - re_period * (w.re / re_period).round(),
        w.im - im_period * (w.im / im_period).round(),
    )
}

/// Counts the preimages of `w` under `Z` by grid search plus Newton
/// refinement over the ζ-sphere (two charts: `|ζ| ≤ √2` and the inverted
/// chart `η = 1/ζ`). A regular value of a degree-`n` rational function has
/// exactly `n` preimages.
///
/// `samples` is the grid resolution per chart per axis.
pub fn zolotarev_degree_check(p: &ZolotarevParams, w: Complex64, samples: u32) -> Result<u32> {
    if samples < 4 {
        return Err(Error::domain("degree check needs at least a 4×4 grid"));
    }
    let mut roots: Vec<Complex64> = Vec::new();
    let mut unresolved = 0_u32;
    let step = 2.0 / samples as f64;
    for chart in 0..2 {
        for i in 0..samples {
            for jj in 0..samples {
                let x = -1.0 + step * (i as f64 + 0.53);
                let y = -1.0 + step * (jj as f64 + 0.47);
                let start = Complex64::new(x, y);
                match refine_preimage(p, w, start, chart == 1) {
                    RefineOutcome::Converged(zeta) => {
                        let is_new = roots.iter().all(|r| chordal(*r, zeta) > 1e-6);
                        if is_new {
                            roots.push(zeta);
                        }
                    }
                    RefineOutcome::Unresolved => unresolved += 1,
                    RefineOutcome::Diverged => {}
                }
            }
        }
    }
    if unresolved > 0 {
        return Err(Error::numeric(format!(
            "degree check left {unresolved} unresolved cells near w = {w}"
        )));
    }
    Ok(roots.len() as u32)
}

enum RefineOutcome {
    Converged(Complex64),
    Unresolved,
    Diverged,
}

fn refine_preimage(
    p: &ZolotarevParams,
    w: Complex64,
    start: Complex64,
    inverted_chart: bool,
) -> RefineOutcome {
    let to_zeta = |t: Complex64| -> Complex64 {
        if inverted_chart {
            1.0 / t
        } else {
            t
        }
    };
    let mut t = start;
    if inverted_chart && t.norm() < 1e-6 {
        t += Complex64::new(1e-4, 1e-4);
    }
    let scale = w.norm().max(1.0);
    for _ in 0..60 {
        let zeta = to_zeta(t);
        let Ok(val) = zolotarev_eval(zeta, p) else {
            return RefineOutcome::Diverged;
        };
        let resid = val - w;
        if resid.norm() <= 1e-9 * scale {
            return RefineOutcome::Converged(zeta);
        }
        let Ok(dz) = zolotarev_derivative(zeta, p) else {
            return RefineOutcome::Diverged;
        };
        // Chain rule through the chart map.
        let dt = if inverted_chart { -dz / (t * t) } else { dz };
        if dt.norm() < 1e-16 || !dt.is_finite() {
            return RefineOutcome::Diverged;
        }
        let mut step = resid / dt;
        let cap = 0.25 * (1.0 + t.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        t -= step;
        // Iterates escaping the chart are chasing a preimage the companion
        // chart covers with well-scaled coordinates; drop them here.
        if !t.is_finite() || t.norm() > 4.0 {
            return RefineOutcome::Diverged;
        }
    }
    // Budget exhausted, but the last step may have landed: re-test the final
    // iterate before flagging a genuinely ambiguous ending (residual small
    // yet above the acceptance threshold).
    let zeta = to_zeta(t);
    match zolotarev_eval(zeta, p) {
        Ok(val) if (val - w).norm() <= 1e-9 * scale => RefineOutcome::Converged(zeta),
        Ok(val) if (val - w).norm() < 1e-3 * scale => RefineOutcome::Unresolved,
        _ => RefineOutcome::Diverged,
    }
}

fn chordal(a: Complex64, b: Complex64) -> f64 {
    if !a.is_finite() && !b.is_finite() {
        return 0.0;
    }
    if !a.is_finite() {
        return 1.0 / (1.0 + b.norm_sqr()).sqrt();
    }
    if !b.is_finite() {
        return 1.0 / (1.0 + a.norm_sqr()).sqrt();
    }
    (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
}
