//! The extremal disk map `B_{nτ}` and its normalized companion `f_{nτ}`.
//!
//! For `n ≥ 2` and `τ > 1`,
//!
//! ```text
//! B_{nτ}(z) = Φ(Z((z-1)/(z+1); κ)),   Φ(v) = (v√κ + 1)/(1 - v√κ),
//! √κ = (√τ - 1)/(√τ + 1),
//! ```
//!
//! is a finite Blaschke product of degree `n` with `n` simple real zeros in
//! `((k-1)/(k+1), 0)`, all critical values on `±1/√τ`, and `B_{nτ}(0) = 1/√τ`.
//! Restricted to `[z_β, 1)` — `z_β` the largest zero — it increases strictly
//! from 0 toward 1, and that restriction's inverse is the branch the sharp
//! distortion bound evaluates.
//!
//! Numerically the zeros are parametrized by the vertical segment
//! `u = K(κ) + iv`: there `sn(u; κ) = 1/dn(v; κ')` runs over `[1, 1/κ]`, so
//! `Z = -1/√κ` reduces to one bisection per half-period interval
//! `(jK'(κ), (j+1)K'(κ))`. For small `τ` the left-most zeros approach `-1`
//! to within a few ulps (or beyond), so alongside plain coordinates the
//! construction keeps the shifted coordinates `δ_j = 1 + z_j = 2/(1 - ζ_j)`
//! at full relative precision, and every branch-restricted computation
//! (inverse branch, critical values, Schwarz–Pick data) runs in `δ` form.

use num_complex::Complex64;

use crate::blaschke::{self, BlaschkeProduct, CriticalData};
use crate::elliptic::{inverse_sn, jacobi_sn_cn_dn, Modulus};
use crate::zolotarev::{solve_modulus, zolotarev_derivative, zolotarev_eval, ZolotarevParams};
use crate::{Error, Result};

/// A Möbius map `v ↦ (av + b)/(cv + d)`.
#[derive(Debug, Clone, Copy)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() <= 1e-14 {
            return Err(Error::domain(format!(
                "Möbius map is degenerate: |ad - bc| = {:.3e}",
                det.norm()
            )));
        }
        Ok(MoebiusMap { a, b, c, d })
    }

    pub fn coefficients(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn eval(&self, v: Complex64) -> Complex64 {
        (self.a * v + self.b) / (self.c * v + self.d)
    }

    pub fn derivative(&self, v: Complex64) -> Complex64 {
        let den = self.c * v + self.d;
        (self.a * self.d - self.b * self.c) / (den * den)
    }
}

/// The constructed extremal product for a pair `(n, τ)`.
#[derive(Debug, Clone)]
pub struct ExtremalProduct {
    n: u32,
    tau: f64,
    sqrt_kappa: f64,
    kappa: Modulus,
    zparams: ZolotarevParams,
    /// Zeros in the z-disk, ascending (most negative first).
    zeros_z: Vec<f64>,
    /// `1 + z_j` at full relative precision, same order as `zeros_z`.
    zeros_delta: Vec<f64>,
    /// ζ-coordinates of the zeros, `ζ_j = (z_j - 1)/(z_j + 1)`, same order.
    zeros_zeta: Vec<f64>,
    z_beta: f64,
    zeta_beta: f64,
    delta_beta: f64,
    blaschke_form: BlaschkeProduct,
    alpha_real: f64,
}

/// The modulus `κ` for a parameter `τ > 1`: `√κ = (√τ-1)/(√τ+1)`.
///
/// The complement is computed from `1 - κ = 4√τ/(√τ+1)²` so that `κ` close
/// to 1 (large `τ`) loses nothing to cancellation.
pub fn kappa_from_tau(tau: f64) -> Result<Modulus> {
    if !tau.is_finite() || tau <= 1.0 {
        return Err(Error::domain(format!("tau must exceed 1, got {tau}")));
    }
    let st = tau.sqrt();
    // (√τ-1)/(√τ+1) without the √τ-1 cancellation near τ = 1.
    let s = (tau - 1.0) / ((st + 1.0) * (st + 1.0));
    let kappa = s * s;
    let one_minus_s2 = 4.0 * st / ((st + 1.0) * (st + 1.0));
    let kprime = (one_minus_s2 * (1.0 + s * s)).sqrt();
    Modulus::with_parts(kappa, kprime)
}

fn phi(v: Complex64, sqrt_kappa: f64) -> Complex64 {
    (v * sqrt_kappa + 1.0) / (1.0 - v * sqrt_kappa)
}

/// `sn(K(κ) + iv; κ)` along the vertical edge, where the value is real and
/// sweeps `[1, 1/κ]` with period `2K'(κ)` in `v`.
fn edge_value(v: f64, p: &ZolotarevParams) -> Result<f64> {
    let u = Complex64::new(p.ekappa().big_k, v);
    let (s, _, _) = jacobi_sn_cn_dn(u, p.kappa())?;
    Ok(s.re)
}

/// Constructs `B_{nτ}`: solves the modulus chain, locates all `n` zeros,
/// fits the explicit Blaschke representation and audits it globally.
pub fn build_extremal(n: u32, tau: f64) -> Result<ExtremalProduct> {
    if n < 2 {
        return Err(Error::domain("extremal products need degree n >= 2"));
    }
    let kappa = kappa_from_tau(tau)?;
    let st = tau.sqrt();
    let sqrt_kappa = (tau - 1.0) / ((st + 1.0) * (st + 1.0));
    let zparams = solve_modulus(n, kappa)?;
    let inv_sqrt_kappa = 1.0 / sqrt_kappa;

    // One zero per half-period interval of the edge parametrization: the
    // edge value runs monotonically between 1 and 1/κ on each interval and
    // crosses 1/√κ exactly once.
    let kp_kappa = zparams.ekappa().big_k_prime;
    let mut zeta_zeros = Vec::with_capacity(n as usize);
    for j in 0..n {
        let lo = j as f64 * kp_kappa;
        let hi = (j + 1) as f64 * kp_kappa;
        // Track the endpoints by sign of edge_value - 1/√κ: negative at even
        // multiples (value 1), positive at odd multiples (value 1/κ).
        let (mut neg, mut pos) = if j % 2 == 0 { (lo, hi) } else { (hi, lo) };
        for _ in 0..110 {
            let mid = 0.5 * (neg + pos);
            if mid == neg || mid == pos {
                break;
            }
            if edge_value(mid, &zparams)? < inv_sqrt_kappa {
                neg = mid;
            } else {
                pos = mid;
            }
        }
        let v = 0.5 * (neg + pos);
        // Map to the ζ-plane: u = -(K(k) + i v/ratio), ζ = sn(u; k).
        let y = v / zparams.ratio();
        let u = Complex64::new(-zparams.ek().big_k, -y);
        let (s, _, _) = jacobi_sn_cn_dn(u, zparams.k())?;
        if s.im.abs() > 1e-8 * s.re.abs().max(1.0) {
            return Err(Error::consistency(format!(
                "zero {j} of B_{{nτ}} has imaginary residue {:.3e}",
                s.im
            )));
        }
        let mut zeta = s.re;
        // Polish on the defining equation Z(ζ) = -1/√κ in the ζ-coordinate,
        // where the root is well scaled regardless of how close the z-image
        // sits to -1.
        for _ in 0..3 {
            let h = match zolotarev_eval(Complex64::new(zeta, 0.0), &zparams) {
                Ok(val) => val.re + inv_sqrt_kappa,
                Err(_) => break,
            };
            if h.abs() < 1e-13 * inv_sqrt_kappa {
                break;
            }
            let dz = match zolotarev_derivative(Complex64::new(zeta, 0.0), &zparams) {
                Ok(d) => d.re,
                Err(_) => break,
            };
            if dz.abs() < 1e-300 {
                break;
            }
            let step = h / dz;
            if !step.is_finite() || step.abs() > 0.5 * zeta.abs() {
                break;
            }
            zeta -= step;
        }
        zeta_zeros.push(zeta);
    }

    if zeta_zeros.len() != n as usize {
        return Err(Error::numeric(format!(
            "located {} zeros, expected {n}",
            zeta_zeros.len()
        )));
    }

    // ζ decreases with j (the edge walks away from -1), so reversing gives
    // z ascending.
    zeta_zeros.reverse();
    let mut zeros_delta = Vec::with_capacity(n as usize);
    let mut zeros_z = Vec::with_capacity(n as usize);
    for &zeta in &zeta_zeros {
        if !(zeta < -1.0) {
            return Err(Error::consistency(format!(
                "zero ζ = {zeta} escaped the interval (-1/k, -1)"
            )));
        }
        let delta = 2.0 / (1.0 - zeta);
        // The z-coordinate may be flush against -1; keep it representable
        // strictly inside the disk (δ carries the true offset).
        let z = (delta - 1.0).max(-1.0 + 2.3e-16);
        if !(z <= 0.0) {
            return Err(Error::consistency(format!("zero z = {z} is not in (-1, 0]")));
        }
        zeros_delta.push(delta);
        zeros_z.push(z);
    }
    let z_beta = *zeros_z.last().unwrap();
    let zeta_beta = *zeta_zeros.last().unwrap();
    let delta_beta = *zeros_delta.last().unwrap();

    // Fit the unimodular factor at z = 0 and audit the representation
    // globally. B(0) = Φ(Z(-1)) = Φ(-1) = 1/√τ and the plain product at 0 is
    // ∏(-z_j) > 0, so α comes out at 1 up to rounding.
    let parametric_at_zero = eval_parametric(
        Complex64::new(0.0, 0.0),
        &zparams,
        sqrt_kappa,
    )?;
    let mut plain = Complex64::new(1.0, 0.0);
    for &z in &zeros_z {
        plain *= Complex64::new(-z, 0.0);
    }
    let alpha = parametric_at_zero / plain;
    let blaschke_form = BlaschkeProduct::new(
        alpha / alpha.norm(),
        zeros_z.iter().map(|&z| Complex64::new(z, 0.0)).collect(),
    )?;
    if (alpha.norm() - 1.0).abs() > 1e-10 || alpha.im.abs() > 1e-10 {
        return Err(Error::consistency(format!(
            "fitted alpha = {alpha} is not the expected unimodular real factor"
        )));
    }

    let product = ExtremalProduct {
        n,
        tau,
        sqrt_kappa,
        kappa,
        zparams,
        zeros_z,
        zeros_delta,
        zeros_zeta: zeta_zeros,
        z_beta,
        zeta_beta,
        delta_beta,
        blaschke_form,
        alpha_real: alpha.re,
    };
    product.audit_representations()?;
    Ok(product)
}

/// `B_{nτ}` evaluated parametrically, with a reciprocal fallback when the
/// argument of the outer elliptic sine drifts within guard distance of a
/// pole (there `1/Z` is computed from `sn(w - iK') = 1/(κ·sn w)` instead,
/// and `Φ` is rearranged accordingly).
fn eval_parametric(z: Complex64, p: &ZolotarevParams, sqrt_kappa: f64) -> Result<Complex64> {
    let zeta = (z - 1.0) / (z + 1.0);
    let u = inverse_sn(zeta, p.k())?;
    let w = u * p.ratio();
    match jacobi_sn_cn_dn(w, p.kappa()) {
        Ok((s, _, _)) => Ok(phi(s, sqrt_kappa)),
        Err(Error::Pole { .. }) => {
            let shifted = w - Complex64::new(0.0, p.ekappa().big_k_prime);
            let (s, _, _) = jacobi_sn_cn_dn(shifted, p.kappa())?;
            let inv = p.kappa().k() * s;
            // Φ(v) with v = 1/inv: (√κ + inv)/(inv - √κ).
            Ok((inv + sqrt_kappa) / (inv - sqrt_kappa))
        }
        Err(e) => Err(e),
    }
}

impl ExtremalProduct {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn kappa(&self) -> &Modulus {
        &self.kappa
    }

    pub fn sqrt_kappa(&self) -> f64 {
        self.sqrt_kappa
    }

    pub fn zparams(&self) -> &ZolotarevParams {
        &self.zparams
    }

    /// Zeros in the z-disk, ascending. For very small `τ` the left-most
    /// entries are clamped to the nearest representable point inside the
    /// disk; [`Self::zeros_delta`] carries the exact offsets from -1.
    pub fn zeros(&self) -> &[f64] {
        &self.zeros_z
    }

    /// `1 + z_j` at full relative precision.
    pub fn zeros_delta(&self) -> &[f64] {
        &self.zeros_delta
    }

    /// The zeros in the ζ = (z-1)/(z+1) coordinate (all in `(-1/k, -1)`).
    pub fn zeros_zeta(&self) -> &[f64] {
        &self.zeros_zeta
    }

    /// Largest real zero: the left endpoint of the inverse branch.
    pub fn z_beta(&self) -> f64 {
        self.z_beta
    }

    /// ζ-coordinate of `z_β` (the quantity `β` of the branch interval
    /// `[(1+β)/(1-β), 1]`).
    pub fn zeta_beta(&self) -> f64 {
        self.zeta_beta
    }

    pub fn delta_beta(&self) -> f64 {
        self.delta_beta
    }

    /// The explicit Blaschke-product representation.
    pub fn blaschke_form(&self) -> &BlaschkeProduct {
        &self.blaschke_form
    }

    /// Degree-equation residual of the solved modulus chain.
    pub fn residual(&self) -> f64 {
        self.zparams.residual()
    }

    /// Parametric evaluation `Φ(Z((z-1)/(z+1); κ))` on the closed disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::domain(format!(
                "B_{{nτ}} is defined on the closed disk, got |z| = {}",
                z.norm()
            )));
        }
        if z == Complex64::new(-1.0, 0.0) {
            return Err(Error::domain("z = -1 is the pole of the argument map"));
        }
        eval_parametric(z, &self.zparams, self.sqrt_kappa)
    }

    /// `B'_{nτ}(z)` from the Blaschke representation (logarithmic-derivative
    /// sum, product rule at zeros).
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::domain(format!(
                "B_{{nτ}} is defined on the closed disk, got |z| = {}",
                z.norm()
            )));
        }
        blaschke::derivative(&self.blaschke_form, z)
    }

    /// `B_{nτ}(x)` for real `x = δ - 1`, in shifted coordinates. Exact sign
    /// handling: each factor is `(δ - δ_j)/(δ_j + δ(1 - δ_j))`, a positive
    /// denominator for the zero range `δ_j ∈ (0, 1]`.
    pub fn branch_value_delta(&self, delta: f64) -> f64 {
        let mut acc = self.alpha_real;
        for &dj in &self.zeros_delta {
            acc *= (delta - dj) / (dj + delta * (1.0 - dj));
        }
        acc
    }

    /// `(1-x²)·B'_{nτ}(x)` for real `x = δ - 1` on the branch, in shifted
    /// coordinates (product-rule accumulation, valid at the zeros too).
    pub fn branch_schwarz_pick_delta(&self, delta: f64) -> f64 {
        let n = self.zeros_delta.len();
        let mut factors = Vec::with_capacity(n);
        let mut dfactors = Vec::with_capacity(n);
        for &dj in &self.zeros_delta {
            let den = dj + delta * (1.0 - dj);
            factors.push((delta - dj) / den);
            // (1 - z_j²)/(1 - z_j x)² with 1 - z_j² = δ_j(2 - δ_j).
            dfactors.push(dj * (2.0 - dj) / (den * den));
        }
        let mut deriv = 0.0;
        for j in 0..n {
            let mut term = dfactors[j];
            for (i, f) in factors.iter().enumerate() {
                if i != j {
                    term *= f;
                }
            }
            deriv += term;
        }
        // 1 - x² = δ(2 - δ).
        (delta * (2.0 - delta) * self.alpha_real * deriv).abs()
    }

    /// The monotone inverse branch: the `x ∈ [z_β, 1)` with `B_{nτ}(x) = y`,
    /// for `y ∈ [0, 1)`.
    pub fn inverse_branch(&self, y: f64) -> Result<f64> {
        self.inverse_branch_delta(y).map(|d| d - 1.0)
    }

    /// Inverse branch in shifted coordinates: `δ = 1 + x`.
    pub fn inverse_branch_delta(&self, y: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&y) {
            return Err(Error::domain(format!(
                "inverse branch needs y in [0, 1), got {y}"
            )));
        }
        if y <= 1e-14 {
            return Ok(self.delta_beta);
        }
        // B̂ is strictly increasing on [δ_β, 2), with B̂(δ_β) = 0 and
        // B̂(2) = 1 exactly in this form.
        let mut lo = self.delta_beta;
        let mut hi = 2.0;
        for _ in 0..160 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let f = self.branch_value_delta(mid) - y;
            if f.abs() <= 1e-13 {
                return Ok(mid);
            }
            if f < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        if (self.branch_value_delta(mid) - y).abs() > 1e-12 {
            return Err(Error::numeric(format!(
                "inverse branch failed to meet the 1e-12 residual at y = {y}"
            )));
        }
        Ok(mid)
    }

    /// Critical points and values of `B_{nτ}` inside the disk.
    ///
    /// The points come from the exact half-period lattice of the edge
    /// parametrization (`v = jK'(κ)`, `j = 1..n-1`); the values are computed
    /// independently through the shifted-coordinate Blaschke product and
    /// validated against `±1/√τ` within 1e-6. The generic polynomial route
    /// of [`blaschke::critical_points`] cannot separate the near-boundary
    /// zero clusters extremal products develop at small `τ`, which is why
    /// the lattice points are used here (the two routes agree on moderate
    /// instances; see the module tests).
    pub fn critical_data(&self) -> Result<CriticalData> {
        let kp_kappa = self.zparams.ekappa().big_k_prime;
        let mut points = Vec::with_capacity(self.n as usize - 1);
        let mut values = Vec::with_capacity(self.n as usize - 1);
        let expect = 1.0 / self.tau.sqrt();
        for j in 1..self.n {
            let v = j as f64 * kp_kappa;
            let y = v / self.zparams.ratio();
            let u = Complex64::new(-self.zparams.ek().big_k, -y);
            let (s, _, _) = jacobi_sn_cn_dn(u, self.zparams.k())?;
            let zeta = s.re;
            let delta = 2.0 / (1.0 - zeta);
            let x = delta - 1.0;
            let value = self.branch_value_delta(delta);
            let target = if j % 2 == 0 { expect } else { -expect };
            if (value - target).abs() > 1e-6 {
                return Err(Error::consistency(format!(
                    "critical value {value} at x = {x} is off ±1/√τ = ±{expect} by {:.3e}",
                    (value - target).abs()
                )));
            }
            points.push(Complex64::new(x.max(-1.0 + 2.3e-16), 0.0));
            values.push(Complex64::new(value, 0.0));
        }
        // The lattice walk moves toward -1; report ascending like the zeros.
        points.reverse();
        values.reverse();
        let lambda_min = values.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
        Ok(CriticalData {
            points,
            values,
            lambda_min,
        })
    }

    /// The critical values (all on `±τ^{-1/2}`).
    pub fn critical_values(&self) -> Result<Vec<Complex64>> {
        self.critical_data().map(|cd| cd.values)
    }

    fn audit_representations(&self) -> Result<()> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xEC5E11);
        for _ in 0..500 {
            let r = 0.98 * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let z = Complex64::from_polar(r, t);
            let parametric = self.eval(z)?;
            let explicit = blaschke::eval(&self.blaschke_form, z)?;
            if (parametric - explicit).norm() > 1e-8 {
                return Err(Error::consistency(format!(
                    "representations disagree by {:.3e} at z = {z}",
                    (parametric - explicit).norm()
                )));
            }
        }
        Ok(())
    }
}

/// The normalized extremal `f_{nτ} = B_{nτ} ∘ φ` with
/// `φ(z) = ((1-β)z + (1+β)) / ((1+β)z + (1-β))`, `β = ζ_β`, which sends 0 to
/// the branch start point `z_β` so that `f_{nτ}(0) = 0`.
pub fn build_f_ntau(n: u32, tau: f64) -> Result<(ExtremalProduct, MoebiusMap)> {
    let product = build_extremal(n, tau)?;
    let beta = product.zeta_beta;
    let map = MoebiusMap::new(
        Complex64::new(1.0 - beta, 0.0),
        Complex64::new(1.0 + beta, 0.0),
        Complex64::new(1.0 + beta, 0.0),
        Complex64::new(1.0 - beta, 0.0),
    )?;
    let at_zero = product.eval(map.eval(Complex64::new(0.0, 0.0)))?;
    if at_zero.norm() >= 1e-8 {
        return Err(Error::consistency(format!(
            "f_{{nτ}}(0) = {at_zero} is not a zero"
        )));
    }
    Ok((product, map))
}

/// `|f'_{nτ}(0)| = (1 - z_β²)·|B'_{nτ}(z_β)|`, evaluated parametrically as
/// `|ζ_β|·√κ·|Z'(ζ_β)|`.
///
/// This light path never builds the full product, so it stays valid in the
/// `τ → 1⁺` regime where the far-left zeros of `B_{nτ}` are not
/// representable in binary64 (the full construction cross-checks it at
/// moderate `τ`; see tests).
pub fn dfntau0(n: u32, tau: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("dfntau0 needs degree n >= 2"));
    }
    let kappa = kappa_from_tau(tau)?;
    let st = tau.sqrt();
    let sqrt_kappa = (tau - 1.0) / ((st + 1.0) * (st + 1.0));
    let p = solve_modulus(n, kappa)?;
    let inv_sqrt_kappa = 1.0 / sqrt_kappa;

    // First crossing of the edge value with 1/√κ: v₀ in (0, K'(κ)).
    let (mut neg, mut pos) = (0.0, p.ekappa().big_k_prime);
    for _ in 0..110 {
        let mid = 0.5 * (neg + pos);
        if mid == neg || mid == pos {
            break;
        }
        if edge_value(mid, &p)? < inv_sqrt_kappa {
            neg = mid;
        } else {
            pos = mid;
        }
    }
    let v0 = 0.5 * (neg + pos);
    let y0 = v0 / p.ratio();
    let u = Complex64::new(-p.ek().big_k, -y0);
    let (s, c, d) = jacobi_sn_cn_dn(u, p.k())?;
    let zeta_beta = s.re;
    let w = u * p.ratio();
    let (_, cw, dw) = jacobi_sn_cn_dn(w, p.kappa())?;
    let z_prime = p.ratio() * (cw * dw) / (c * d);
    let value = zeta_beta.abs() * sqrt_kappa * z_prime.norm();
    if !(value > 0.0) || value > 1.0 + 1e-9 {
        return Err(Error::numeric(format!(
            "|f'_{{nτ}}(0)| = {value} escaped (0, 1] at n = {n}, τ = {tau}"
        )));
    }
    Ok(value.min(1.0))
}

/// Solves `|f'_{nτ}(0)| = target` for `τ`, the unique root by strict
/// monotonicity. The bracket starts at `[1 + 1e-6, 2]` and doubles the right
/// endpoint; the left endpoint never touches 1 (κ degenerates there).
pub fn solve_tau(n: u32, target: f64) -> Result<f64> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::domain(format!(
            "target |f'(0)| must lie in (0, 1], got {target}"
        )));
    }
    let lo0 = 1.0 + 1e-6;
    if dfntau0(n, lo0)? < target {
        return Err(Error::Range(format!(
            "target {target} is above the achievable range (τ would be below {lo0})"
        )));
    }
    let mut lo = lo0;
    let mut hi = 2.0;
    while dfntau0(n, hi)? > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Range(format!(
                "target {target} not reached by τ = 1e12"
            )));
        }
    }
    let mut best = 0.5 * (lo + hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        best = mid;
        let f = dfntau0(n, mid)?;
        if (f - target).abs() < 1e-9 {
            return Ok(mid);
        }
        if f > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-14 * hi {
            break;
        }
    }
    let achieved = dfntau0(n, best)?;
    if (achieved - target).abs() > 1e-9 {
        return Err(Error::numeric(format!(
            "solve_tau stalled: |f'(0)| = {achieved} vs target {target}"
        )));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::schwarz_pick;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kappa_from_tau_values() {
        // τ = 9: √κ = 1/2, κ = 1/4. τ = 4: √κ = 1/3, κ = 1/9.
        let k9 = kappa_from_tau(9.0).unwrap();
        assert!((k9.k() - 0.25).abs() < 1e-15);
        let k4 = kappa_from_tau(4.0).unwrap();
        assert!((k4.k() - 1.0 / 9.0).abs() < 1e-15);
        assert!(kappa_from_tau(1.0).is_err());
        assert!(kappa_from_tau(0.5).is_err());
        // τ → 1⁺ drives κ → 0; the modulus stays constructible until κ
        // underflows the open interval.
        let tiny = kappa_from_tau(1.0 + 1e-6).unwrap();
        assert!(tiny.k() > 0.0 && tiny.k() < 1e-12);
    }

    /// Closed-form oracle for n = 2: the degree equation is solved by the
    /// Landen modulus k = (1-κ')/(1+κ'), and B's zeros in ζ come from the
    /// quadratic k·ζ² + (1+k)√κ·ζ + 1 = 0 scaled by 1/√κ.
    fn degree_two_zero_oracle(tau: f64) -> (f64, f64) {
        let kappa = kappa_from_tau(tau).unwrap();
        let k = (1.0 - kappa.kprime()) / (1.0 + kappa.kprime());
        let sk = kappa.k().sqrt();
        // ζ² + (1+k)√κ/k ζ + 1/k = 0
        let b = (1.0 + k) * sk / k;
        let disc = (b * b - 4.0 / k).sqrt();
        let zeta_hi = 0.5 * (-b + disc);
        let zeta_lo = 0.5 * (-b - disc);
        let z = |zeta: f64| (1.0 + zeta) / (1.0 - zeta);
        (z(zeta_lo), z(zeta_hi))
    }

    #[test]
    fn degree_two_zeros_match_quadratic_oracle() {
        let e = build_extremal(2, 9.0).unwrap();
        let (z_lo, z_hi) = degree_two_zero_oracle(9.0);
        assert_eq!(e.zeros().len(), 2);
        assert!(
            (e.zeros()[0] - z_lo).abs() < 1e-12,
            "left zero {} vs oracle {z_lo}",
            e.zeros()[0]
        );
        assert!(
            (e.zeros()[1] - z_hi).abs() < 1e-12,
            "right zero {} vs oracle {z_hi}",
            e.zeros()[1]
        );
    }

    #[test]
    fn zeros_scan_oracle_degree_two() {
        // Independent scan-and-bisect on the real segment using only the
        // parametric evaluator: brackets from a dense scan of B on
        // ((k-1)/(k+1), 0), bisected on sign changes.
        let e = build_extremal(2, 9.0).unwrap();
        let k = e.zparams().k().k();
        let left = (k - 1.0) / (k + 1.0);
        let f = |x: f64| e.eval(c(x, 0.0)).unwrap().re;
        let mut found = Vec::new();
        let samples = 4000;
        let mut prev_x = left + 1e-6;
        let mut prev = f(prev_x);
        for i in 1..=samples {
            let x = left + 1e-6 + (0.0 - left - 2e-6) * i as f64 / samples as f64;
            let val = f(x);
            if (prev <= 0.0) != (val <= 0.0) {
                let (mut lo, mut hi) = (prev_x, x);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if (f(mid) <= 0.0) == (f(lo) <= 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                found.push(0.5 * (lo + hi));
            }
            prev = val;
            prev_x = x;
        }
        assert_eq!(found.len(), 2, "scan must bracket both zeros");
        for (scan, built) in found.iter().zip(e.zeros().iter()) {
            assert!((scan - built).abs() < 1e-9, "scan {scan} vs built {built}");
        }
    }

    #[test]
    fn zero_residuals_and_interval() {
        for &(n, tau) in &[(2_u32, 9.0_f64), (3, 4.0), (4, 25.0), (5, 2.0)] {
            let e = build_extremal(n, tau).unwrap();
            assert_eq!(e.zeros().len(), n as usize);
            let k = e.zparams().k().k();
            let left = (k - 1.0) / (k + 1.0);
            for (&z, &dz) in e.zeros().iter().zip(e.zeros_delta()) {
                assert!(z > left - 1e-12 && z <= 0.0, "zero {z} outside [{left}, 0]");
                let val = e.eval(c(z, 0.0)).unwrap();
                // Zeros flush against -1 carry an unavoidable evaluation
                // floor of |B'(z)|·ulp(z); scale the residual tolerance by
                // the local derivative.
                let deriv = e.branch_schwarz_pick_delta(dz) / (dz * (2.0 - dz));
                let tol = 1e-10 + 1e-15 * deriv;
                assert!(val.norm() < tol, "|B({z})| = {:.3e} (tol {tol:.3e})", val.norm());
            }
            // B(z_β) = 0 and B(x) → 1 as x → 1⁻.
            assert!(e.eval(c(e.z_beta(), 0.0)).unwrap().norm() < 1e-10);
            let near_one = e.eval(c(0.999999, 0.0)).unwrap();
            assert!((near_one.re - 1.0).abs() < 1e-3 && near_one.re < 1.0);
        }
    }

    #[test]
    fn value_at_origin_is_inverse_sqrt_tau() {
        for &(n, tau) in &[(2_u32, 9.0_f64), (3, 4.0), (5, 6.0)] {
            let e = build_extremal(n, tau).unwrap();
            let v = e.eval(c(0.0, 0.0)).unwrap();
            assert!(
                (v.re - 1.0 / tau.sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12,
                "B(0) = {v}, expected {}",
                1.0 / tau.sqrt()
            );
        }
    }

    #[test]
    fn boundary_modulus_one() {
        let e = build_extremal(3, 4.0).unwrap();
        let v = e.eval(Complex64::from_polar(1.0, 1.234)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-8);
        assert!(e.eval(c(-1.0, 0.0)).is_err());
        assert!(e.eval(c(1.5, 0.0)).is_err());
    }

    #[test]
    fn parametric_and_blaschke_forms_agree() {
        use rand::{Rng, SeedableRng};
        let e = build_extremal(4, 9.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let z = Complex64::from_polar(
                0.98 * rng.gen::<f64>().sqrt(),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let a = e.eval(z).unwrap();
            let b = blaschke::eval(e.blaschke_form(), z).unwrap();
            assert!((a - b).norm() < 1e-8, "forms disagree at {z}");
        }
    }

    #[test]
    fn derivative_finite_difference() {
        let e = build_extremal(3, 4.0).unwrap();
        let z = c(0.3, 0.0);
        let d = e.derivative(z).unwrap();
        let h = 1e-6;
        let fd = (e.eval(z + c(h, 0.0)).unwrap() - e.eval(z - c(h, 0.0)).unwrap()) / c(2.0 * h, 0.0);
        assert!(
            (d - fd).norm() < 1e-6 * d.norm(),
            "derivative {d} vs finite difference {fd}"
        );
        // Boundary points carry no critical points: derivative is nonzero.
        let boundary = Complex64::from_polar(1.0, 0.77);
        assert!(e.derivative(boundary).unwrap().norm() > 1e-8);
    }

    #[test]
    fn inverse_branch_round_trip_and_monotonicity() {
        let e = build_extremal(3, 9.0).unwrap();
        assert_eq!(e.inverse_branch(0.0).unwrap(), e.z_beta());
        for &y in &[0.1, 0.5, 0.9] {
            let x = e.inverse_branch(y).unwrap();
            assert!(x >= e.z_beta() && x < 1.0);
            let back = e.eval(c(x, 0.0)).unwrap();
            assert!(
                (back.re - y).abs() < 1e-10,
                "round trip at y = {y}: B({x}) = {}",
                back.re
            );
        }
        assert!(e.inverse_branch(0.2).unwrap() < e.inverse_branch(0.8).unwrap());
        assert!(e.inverse_branch(1.0).is_err());
        assert!(e.inverse_branch(-0.1).is_err());
    }

    #[test]
    fn branch_restriction_strictly_increasing() {
        let e = build_extremal(4, 4.0).unwrap();
        let mut prev = -1.0;
        for i in 0..1000 {
            let delta = e.delta_beta() + (2.0 - e.delta_beta()) * (i as f64 + 0.5) / 1001.0;
            let v = e.branch_value_delta(delta);
            assert!(v > prev, "branch value must increase");
            prev = v;
        }
    }

    #[test]
    fn critical_values_on_pm_inverse_sqrt_tau() {
        for &(n, tau) in &[(3_u32, 4.0_f64), (4, 9.0), (6, 1.5), (5, 25.0)] {
            let e = build_extremal(n, tau).unwrap();
            let cd = e.critical_data().unwrap();
            assert_eq!(cd.points.len(), n as usize - 1);
            let expect = 1.0 / tau.sqrt();
            let mut plus = 0;
            let mut minus = 0;
            for v in &cd.values {
                assert!((v.norm() - expect).abs() < 1e-6);
                if v.re > 0.0 {
                    plus += 1;
                } else {
                    minus += 1;
                }
            }
            if n >= 3 {
                assert!(plus > 0 && minus > 0, "both signs occur for n ≥ 3");
            }
            assert!((cd.lambda_min - expect).abs() < 1e-6);
        }
    }

    #[test]
    fn critical_data_agrees_with_generic_blaschke_route() {
        // Moderate instance: the generic polynomial/gap machinery of the
        // blaschke module must land on the same points.
        let e = build_extremal(4, 9.0).unwrap();
        let from_lattice = e.critical_data().unwrap();
        let generic = blaschke::critical_points(e.blaschke_form()).unwrap();
        assert_eq!(generic.points.len(), from_lattice.points.len());
        for (a, b) in generic.points.iter().zip(from_lattice.points.iter()) {
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn f_ntau_normalization() {
        for &(n, tau) in &[(2_u32, 9.0_f64), (3, 6.0)] {
            let (e, map) = build_f_ntau(n, tau).unwrap();
            let zero = map.eval(c(0.0, 0.0));
            assert!((zero.re - e.z_beta()).abs() < 1e-12 && zero.im == 0.0);
            // φ maps the disk onto itself.
            for i in 0..50 {
                let theta = i as f64 * 0.12566;
                let w = map.eval(Complex64::from_polar(1.0, theta));
                assert!((w.norm() - 1.0).abs() < 1e-10);
            }
            let df = dfntau0(n, tau).unwrap();
            assert!(df > 0.0 && df <= 1.0);
        }
    }

    #[test]
    fn dfntau0_matches_blaschke_route() {
        // (1 - z_β²)|B'(z_β)| through the explicit product versus the
        // parametric light path.
        for &(n, tau) in &[(2_u32, 9.0_f64), (3, 4.0), (4, 2.0), (5, 30.0)] {
            let e = build_extremal(n, tau).unwrap();
            let sp = e.branch_schwarz_pick_delta(e.delta_beta());
            let light = dfntau0(n, tau).unwrap();
            assert!(
                (sp - light).abs() < 1e-9 * light,
                "n={n}, τ={tau}: product form {sp} vs parametric {light}"
            );
            // And against the fully generic Schwarz–Pick path.
            let generic = schwarz_pick(e.blaschke_form(), c(e.z_beta(), 0.0)).unwrap();
            assert!((generic - light).abs() < 1e-8 * light);
        }
    }

    #[test]
    fn dfntau0_strictly_decreasing_and_limits() {
        let taus = [1.5, 2.0, 4.0, 9.0, 25.0, 100.0];
        let mut prev = f64::INFINITY;
        for &tau in &taus {
            let v = dfntau0(2, tau).unwrap();
            assert!(v < prev, "dfntau0 must decrease: {v} at τ = {tau}");
            assert!(v <= 1.0);
            prev = v;
        }
        // Large τ pushes the value toward 0, τ → 1⁺ toward 1. The τ = 1e4
        // level (0.19802) is a recorded regression value.
        let far = dfntau0(2, 1e4).unwrap();
        assert!(far < 0.2 && far < dfntau0(2, 100.0).unwrap());
        assert!(dfntau0(2, 1.0 + 1e-4).unwrap() > 0.95);
    }

    #[test]
    fn solve_tau_round_trip() {
        let target = dfntau0(3, 5.0).unwrap();
        let tau = solve_tau(3, target).unwrap();
        assert!(
            (tau - 5.0).abs() < 1e-6 * 5.0,
            "solve_tau round trip: {tau} vs 5.0"
        );
        // Monotone input/output: larger target → smaller τ.
        let t_small = solve_tau(3, 0.3).unwrap();
        let t_large = solve_tau(3, 0.6).unwrap();
        assert!(t_large < t_small);
        assert!(solve_tau(3, 0.0).is_err());
        assert!(solve_tau(3, 1.5).is_err());
    }

    #[test]
    fn small_tau_deep_zero_construction() {
        // τ = 1.5 at n = 6 pushes the left-most zeros within a few ulps of
        // -1; the construction must survive and the branch machinery must
        // stay accurate (the critical-value check inside critical_data is
        // the sensitive part).
        let e = build_extremal(6, 1.5).unwrap();
        assert_eq!(e.zeros().len(), 6);
        assert!(e.zeros_delta()[0] < 1e-10, "deep zero expected at n=6, τ=1.5");
        let cd = e.critical_data().unwrap();
        assert_eq!(cd.points.len(), 5);
        // Winding and boundary behaviour stay clean.
        let w = blaschke::boundary_winding(e.blaschke_form(), 2048).unwrap();
        assert_eq!(w, 6);
    }
}
