//! Complete elliptic integrals and the Jacobi elliptic sine.
//!
//! Everything here is double precision. `K(k)` and `K'(k)` come from the
//! arithmetic–geometric mean, `K(k) = π / (2·agm(1, k'))`. The elliptic sine
//! is evaluated by descending Landen transformation: the modulus is driven
//! below `1e-12` (quadratic convergence, a handful of steps for any
//! `k ≤ 0.9999`), the trigonometric base case `sn(u; 0) = sin u` is applied,
//! and the Gauss ascent
//!
//! ```text
//! sn(u; k) = (1+k₁) s₁ / (1 + k₁ s₁²),   s₁ = sn(u/(1+k₁); k₁)
//! cn(u; k) = c₁ d₁ / (1 + k₁ s₁²)
//! dn(u; k) = (1 - k₁ s₁²) / (1 + k₁ s₁²)
//! ```
//!
//! with `k₁ = (1-k')/(1+k')` recovers the value at the original modulus.
//! Arguments are reduced modulo the period lattice `(4K, 2iK')` first; an
//! argument within `1e-8` of a pole (`iK'` mod lattice) is rejected rather
//! than evaluated, since callers feed the result into Möbius maps that would
//! amplify the garbage.

use num_complex::Complex64;

use crate::{Error, Result};

/// Landen descent stops once the modulus drops below this. The trigonometric
/// base case carries a truncation error of order `(k_m e^{|Im u|}/4)²`, so
/// together with the half-strip reflection below (which caps `|Im u|` at
/// `K'/2`, i.e. `e^{|Im u|} ≤ 2/√k_m`) the floor bounds the relative error
/// by `k_m/4`.
const LANDEN_FLOOR: f64 = 1e-15;
/// Hard cap on descent depth; 6–8 steps suffice for any k ≤ 0.9999.
const LANDEN_MAX_STEPS: usize = 32;
/// Arguments closer than this to a pole of sn are rejected.
const POLE_GUARD: f64 = 1e-8;

/// An elliptic modulus `k ∈ (0, 1)` together with its complement
/// `k' = √(1-k²)`.
///
/// Endpoints are rejected: `k = 0` and `k = 1` are degenerate (the lattice
/// collapses) and silently returning limits would poison downstream
/// root-finding. Callers that need the limits special-case before
/// constructing a `Modulus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k: f64,
    kprime: f64,
}

impl Modulus {
    /// Builds a modulus from `k ∈ (0, 1)`.
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 || k >= 1.0 {
            return Err(Error::domain(format!("modulus k must lie in (0,1), got {k}")));
        }
        // (1-k)(1+k) avoids the rounding of 1 - k² near k = 1.
        let kprime = ((1.0 - k) * (1.0 + k)).sqrt();
        Ok(Modulus { k, kprime })
    }

    /// Builds a modulus from its complement `k' ∈ (0, 1)`.
    pub fn from_kprime(kprime: f64) -> Result<Self> {
        if !kprime.is_finite() || kprime <= 0.0 || kprime >= 1.0 {
            return Err(Error::domain(format!(
                "complementary modulus must lie in (0,1), got {kprime}"
            )));
        }
        let k = ((1.0 - kprime) * (1.0 + kprime)).sqrt();
        Ok(Modulus { k, kprime })
    }

    /// Builds a modulus from both parts when the caller can compute `k'`
    /// more accurately than `√(1-k²)` (e.g. `κ` from `τ` near 1).
    pub fn with_parts(k: f64, kprime: f64) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 || k >= 1.0 {
            return Err(Error::domain(format!("modulus k must lie in (0,1), got {k}")));
        }
        if !kprime.is_finite() || kprime <= 0.0 || kprime > 1.0 {
            return Err(Error::domain(format!(
                "complementary modulus must lie in (0,1], got {kprime}"
            )));
        }
        let defect = (k * k + kprime * kprime - 1.0).abs();
        if defect > 1e-14 {
            return Err(Error::domain(format!(
                "k² + k'² = 1 violated by {defect:.3e}"
            )));
        }
        Ok(Modulus { k, kprime })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kprime(&self) -> f64 {
        self.kprime
    }

    /// The complementary modulus as a `Modulus` (swaps `k` and `k'`).
    pub fn complement(&self) -> Modulus {
        Modulus {
            k: self.kprime,
            kprime: self.k,
        }
    }
}

/// The complete elliptic integrals `K(k)` and `K'(k) = K(k')` of a modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPair {
    /// K(k); at least π/2.
    pub big_k: f64,
    /// K'(k) = K(k'); at least π/2.
    pub big_k_prime: f64,
}

/// Arithmetic–geometric mean of two positive reals.
///
/// Iteration stops when `|a-b| ≤ 1e-15·max(a,b)`; the result lies between
/// `min(a,b)` and `max(a,b)`.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || a <= 0.0 || b <= 0.0 {
        return Err(Error::domain(format!("agm needs positive inputs, got ({a}, {b})")));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..64 {
        if (a - b).abs() <= 1e-15 * a.max(b) {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
    }
    Ok(0.5 * (a + b))
}

/// Complete elliptic integrals of the first kind for a modulus:
/// `K = π/(2·agm(1, k'))` and `K' = π/(2·agm(1, k))`.
pub fn complete_k(m: &Modulus) -> EllipticPair {
    // Both AGM calls have positive arguments by Modulus construction.
    let big_k = std::f64::consts::FRAC_PI_2 / agm(1.0, m.kprime).expect("valid modulus");
    let big_k_prime = std::f64::consts::FRAC_PI_2 / agm(1.0, m.k).expect("valid modulus");
    EllipticPair { big_k, big_k_prime }
}

/// Descended Landen moduli `k₁, k₂, …, k_m` (last one below the floor) and
/// the accumulated argument scale `∏(1 + kᵢ)`.
#[derive(Debug, Clone)]
struct LandenChain {
    moduli: Vec<f64>,
    scale: f64,
}

fn landen_chain(k: f64) -> Result<LandenChain> {
    let mut moduli = Vec::new();
    let mut scale = 1.0;
    let mut kc = k;
    while kc > LANDEN_FLOOR {
        if moduli.len() >= LANDEN_MAX_STEPS {
            return Err(Error::numeric(format!(
                "Landen descent did not reach modulus {LANDEN_FLOOR:e} within {LANDEN_MAX_STEPS} steps (k = {k})"
            )));
        }
        let kp = ((1.0 - kc) * (1.0 + kc)).sqrt();
        // 1 - k' = k²/(1 + k'), so k₁ = (k/(1+k'))² without cancellation.
        let r = kc / (1.0 + kp);
        let next = r * r;
        moduli.push(next);
        scale *= 1.0 + next;
        kc = next;
    }
    Ok(LandenChain { moduli, scale })
}

fn ascend_complex(w: Complex64, chain: &LandenChain) -> (Complex64, Complex64, Complex64) {
    let mut s = w.sin();
    let mut c = w.cos();
    let mut d = Complex64::new(1.0, 0.0);
    for &ki in chain.moduli.iter().rev() {
        let s2 = s * s;
        let t = 1.0 + ki * s2;
        let sn = (1.0 + ki) * s / t;
        let cn = c * d / t;
        let dn = (1.0 - ki * s2) / t;
        s = sn;
        c = cn;
        d = dn;
    }
    (s, c, d)
}

fn ascend_real(w: f64, chain: &LandenChain) -> (f64, f64, f64) {
    let mut s = w.sin();
    let mut c = w.cos();
    let mut d = 1.0;
    for &ki in chain.moduli.iter().rev() {
        let s2 = s * s;
        let t = 1.0 + ki * s2;
        let sn = (1.0 + ki) * s / t;
        let cn = c * d / t;
        let dn = (1.0 - ki * s2) / t;
        s = sn;
        c = cn;
        d = dn;
    }
    (s, c, d)
}

/// Reduces `u` modulo the period lattice `(4K, 2iK')` to the centered
/// rectangle `|Re| ≤ 2K`, `|Im| ≤ K'`.
fn reduce_lattice(u: Complex64, pair: &EllipticPair) -> Complex64 {
    let re_period = 4.0 * pair.big_k;
    let im_period = 2.0 * pair.big_k_prime;
    let re = u.re - re_period * (u.re / re_period).round();
    let im = u.im - im_period * (u.im / im_period).round();
    Complex64::new(re, im)
}

/// Distance from the reduced argument to the nearest pole of sn, and that
/// pole (in reduced coordinates). Poles sit at `iK'` mod the lattice, which
/// in the centered rectangle means `Re ∈ {-2K, 0, 2K}`, `Im = ±K'`.
fn nearest_pole(u_red: Complex64, pair: &EllipticPair) -> (f64, Complex64) {
    let mut best = (f64::INFINITY, Complex64::new(0.0, pair.big_k_prime));
    for &re0 in &[-2.0 * pair.big_k, 0.0, 2.0 * pair.big_k] {
        for &im0 in &[-pair.big_k_prime, pair.big_k_prime] {
            let p = Complex64::new(re0, im0);
            let d = (u_red - p).norm();
            if d < best.0 {
                best = (d, p);
            }
        }
    }
    best
}

/// Jacobi sn, cn, dn at a complex argument. Shares one lattice reduction,
/// pole check, and Landen chain.
pub(crate) fn jacobi_sn_cn_dn(
    u: Complex64,
    m: &Modulus,
) -> Result<(Complex64, Complex64, Complex64)> {
    if !u.re.is_finite() || !u.im.is_finite() {
        return Err(Error::domain(format!("sn argument must be finite, got {u}")));
    }
    let pair = complete_k(m);
    let u_red = reduce_lattice(u, &pair);
    let (dist, pole) = nearest_pole(u_red, &pair);
    if dist < POLE_GUARD {
        return Err(Error::Pole {
            nearest: u + (pole - u_red),
            distance: dist,
        });
    }

    // Normalize to the upper half-strip by conjugation, then reflect deep
    // arguments through the pole shift sn(u'+iK') = 1/(k·sn u'): the sine
    // base case is only trustworthy for |Im u| ≤ K'/2.
    let conjugated = u_red.im < 0.0;
    let mut u_work = if conjugated { u_red.conj() } else { u_red };
    let shifted = u_work.im > 0.5 * pair.big_k_prime;
    if shifted {
        u_work -= Complex64::new(0.0, pair.big_k_prime);
    }

    let chain = landen_chain(m.k)?;
    let w = u_work / chain.scale;
    if w.im.abs() > 700.0 {
        return Err(Error::numeric(format!(
            "argument too deep in the periodicity strip for binary64 (Im w = {})",
            w.im
        )));
    }
    let (mut s, mut c, mut d) = ascend_complex(w, &chain);
    if shifted {
        // sn(u'+iK') = 1/(k sn),  cn(u'+iK') = -i dn/(k sn),
        // dn(u'+iK') = -i cn/sn; the pole guard keeps sn(u') away from 0.
        let i = Complex64::new(0.0, 1.0);
        let (s0, c0, d0) = (s, c, d);
        s = 1.0 / (m.k * s0);
        c = -i * d0 / (m.k * s0);
        d = -i * c0 / s0;
    }
    if conjugated {
        s = s.conj();
        c = c.conj();
        d = d.conj();
    }
    Ok((s, c, d))
}

/// Jacobi sn, cn, dn at a real argument (no poles on the real axis).
pub(crate) fn jacobi_sn_cn_dn_real(x: f64, m: &Modulus) -> Result<(f64, f64, f64)> {
    if !x.is_finite() {
        return Err(Error::domain(format!("sn argument must be finite, got {x}")));
    }
    let pair = complete_k(m);
    let re_period = 4.0 * pair.big_k;
    let x_red = x - re_period * (x / re_period).round();
    let chain = landen_chain(m.k)?;
    Ok(ascend_real(x_red / chain.scale, &chain))
}

/// The Jacobi elliptic sine `sn(u; k)`.
///
/// Real arguments stay on the real path (the result has zero imaginary
/// part). Arguments within `1e-8` of a pole return [`Error::Pole`] with the
/// offending lattice point.
pub fn jacobi_sn(u: Complex64, m: &Modulus) -> Result<Complex64> {
    if u.im == 0.0 {
        let (s, _, _) = jacobi_sn_cn_dn_real(u.re, m)?;
        return Ok(Complex64::new(s, 0.0));
    }
    jacobi_sn_cn_dn(u, m).map(|(s, _, _)| s)
}

/// Real-path inverse for `s ∈ [-1, 1]`: returns the real `u ∈ [-K, K]`
/// with `sn(u) = s`.
fn inverse_sn_real(s: f64, chain: &LandenChain) -> f64 {
    let mut v = s;
    for &ki in chain.moduli.iter() {
        // Small root of k₁ s v² - (1+k₁) v + s = 0, in the cancellation-free
        // form 2s / ((1+k₁) + √((1+k₁)² - 4k₁s²)); the discriminant is
        // ≥ (1-k₁)² for |s| ≤ 1, so the real path never leaves the reals.
        let disc = (1.0 + ki) * (1.0 + ki) - 4.0 * ki * v * v;
        v = 2.0 * v / ((1.0 + ki) + disc.max(0.0).sqrt());
    }
    // Rounding can push |v| a few ulps past 1; asin would return NaN.
    v = v.clamp(-1.0, 1.0);
    let mut u = v.asin() * chain.scale;
    // One Newton step on sn(u) - s tightens to machine accuracy; skip near
    // ±1 where cn·dn vanishes.
    if v.abs() < 0.99999 {
        let (sn, cn, dn) = ascend_real(u / chain.scale, chain);
        let deriv = cn * dn;
        if deriv.abs() > 1e-12 {
            u -= (sn - s) / deriv;
        }
    }
    u
}

/// Inverse of the elliptic sine: some `u` with `sn(u; k) = s`.
///
/// For real `s ∈ [-1, 1]` the result is the real `u ∈ [-K, K]`. Otherwise
/// the result lies in the centered period rectangle `|Re u| ≤ 2K`,
/// `|Im u| ≤ K'`. Any preimage is equally valid for the consumers here
/// (the Zolotarev fraction is a single-valued rational function), so no
/// branch bookkeeping beyond the fundamental-region normalization is done.
pub fn inverse_sn(s: Complex64, m: &Modulus) -> Result<Complex64> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::domain(format!("inverse_sn argument must be finite, got {s}")));
    }
    let chain = landen_chain(m.k)?;
    if s.im == 0.0 && s.re.abs() <= 1.0 {
        return Ok(Complex64::new(inverse_sn_real(s.re, &chain), 0.0));
    }

    let pair = complete_k(m);
    // Large values live near the poles; fold them back with
    // sn(w + iK') = 1/(k sn w) before inverting.
    let fold_threshold = 4.0_f64.max(2.0 / m.k.sqrt());
    if s.norm() > fold_threshold {
        let folded = 1.0 / (m.k * s);
        let w = inverse_sn(folded, m)?;
        let mut u = w + Complex64::new(0.0, pair.big_k_prime);
        u = polish_inverse(u, s, m).unwrap_or(u);
        return finish_inverse(u, s, m, &pair);
    }

    let mut v = s;
    for &ki in chain.moduli.iter() {
        let disc = (Complex64::new((1.0 + ki) * (1.0 + ki), 0.0) - 4.0 * ki * v * v).sqrt();
        v = 2.0 * v / (Complex64::new(1.0 + ki, 0.0) + disc);
    }
    let mut u = v.asin() * chain.scale;
    u = polish_inverse(u, s, m).unwrap_or(u);
    finish_inverse(u, s, m, &pair)
}

/// Newton refinement of `sn(u) = s`; returns the improved `u` (or `None` if
/// the iteration could not be run, e.g. the iterate strayed onto a pole).
fn polish_inverse(u0: Complex64, s: Complex64, m: &Modulus) -> Option<Complex64> {
    let mut u = u0;
    let target = 1e-13 * s.norm().max(1.0) + 1e-15 * m.k * s.norm_sqr();
    for _ in 0..6 {
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, m).ok()?;
        let resid = sn - s;
        if resid.norm() <= target {
            return Some(u);
        }
        let deriv = cn * dn;
        if deriv.norm() < 1e-18 || !deriv.is_finite() {
            return Some(u);
        }
        let mut step = resid / deriv;
        if step.norm() > 1.0 {
            step /= step.norm();
        }
        u -= step;
    }
    Some(u)
}

fn finish_inverse(
    u: Complex64,
    s: Complex64,
    m: &Modulus,
    pair: &EllipticPair,
) -> Result<Complex64> {
    let u_red = reduce_lattice(u, pair);
    let check = jacobi_sn_cn_dn(u_red, m).map(|(sn, _, _)| sn)?;
    // 1e-10 relative, plus the evaluation floor near poles: at distance δ
    // from a pole, |sn| ≈ 1/(kδ) can only be computed to ~ulp(u)/δ
    // relative, i.e. ~eps·k·|s|² absolute.
    let tol = 1e-10 * s.norm().max(1.0) + 1e-14 * m.k * s.norm_sqr();
    if (check - s).norm() > tol {
        return Err(Error::numeric(format!(
            "inverse_sn did not converge: residual {:.3e} at s = {s}",
            (check - s).norm()
        )));
    }
    Ok(u_red)
}
