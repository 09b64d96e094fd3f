//! Finite Blaschke product algebra.
//!
//! A finite Blaschke product `B(z) = α ∏ (z - z_k)/(1 - z̄_k z)` with
//! `|α| = 1` and all zeros in the open unit disk is a degree-`n` proper
//! self-map of the disk: unimodular on the boundary circle, with exactly
//! `n - 1` critical points inside the disk (counting multiplicity).
//!
//! This module provides evaluation, derivatives, critical points and values,
//! pre-composition with disk automorphisms, the Schwarz–Pick quantity
//! `(1-|z|²)|B'(z)|`, and a raster probe for lemniscate connectivity.

use num_complex::Complex64;

use crate::poly;
use crate::{Error, Result};

/// A finite Blaschke product: unimodular factor `alpha` and the zero list.
///
/// Zeros must lie strictly inside the open disk. No additional margin is
/// imposed: the extremal products of small `τ` legitimately carry zeros
/// within a few ulps of the boundary, and the evaluation paths below are
/// written to tolerate that.
#[derive(Debug, Clone)]
pub struct BlaschkeProduct {
    alpha: Complex64,
    zeros: Vec<Complex64>,
}

/// Critical points of a Blaschke product inside the open disk, their images,
/// and the smallest admissible critical-value radius.
#[derive(Debug, Clone)]
pub struct CriticalData {
    /// Critical points in the open disk, multiplicity expanded.
    pub points: Vec<Complex64>,
    /// `B` evaluated at each critical point.
    pub values: Vec<Complex64>,
    /// Max modulus over `values`: the smallest disk `|w| ≤ λ` containing all
    /// critical values.
    pub lambda_min: f64,
}

impl BlaschkeProduct {
    pub fn new(alpha: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::domain("a Blaschke product needs at least one zero"));
        }
        if (alpha.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "alpha must be unimodular, got |alpha| = {}",
                alpha.norm()
            )));
        }
        for z in &zeros {
            if !z.is_finite() || z.norm() >= 1.0 {
                return Err(Error::domain(format!(
                    "zero {z} is not strictly inside the unit disk"
                )));
            }
        }
        Ok(BlaschkeProduct { alpha, zeros })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn all_zeros_real(&self) -> bool {
        self.zeros.iter().all(|z| z.im == 0.0)
    }
}

/// `1 - z·x` for real `z, x` in (-1, 1) without cancellation: both branches
/// sum terms of one sign, which matters when `z` and `x` sit together near
/// ±1 (the regime extremal products of small τ produce).
fn one_minus_prod(z: f64, x: f64) -> f64 {
    if z >= 0.0 {
        (1.0 - z) + z * (1.0 - x)
    } else {
        (1.0 + z) - z * (1.0 + x)
    }
}

/// Evaluates the product formula factor by factor.
pub fn eval(b: &BlaschkeProduct, z: Complex64) -> Result<Complex64> {
    if b.all_zeros_real() && z.im == 0.0 {
        return Ok(Complex64::new(eval_real_product(b.zeros(), z.re), 0.0) * b.alpha);
    }
    let mut acc = b.alpha;
    for zk in &b.zeros {
        let den = 1.0 - zk.conj() * z;
        if den.norm() < 1e-14 {
            return Err(Error::domain(format!(
                "evaluation at a pole of the Blaschke product (z = {z})"
            )));
        }
        acc *= (z - zk) / den;
    }
    Ok(acc)
}

/// The plain product `∏ (x - z_k)/(1 - z_k x)` over real zeros at a real
/// point, using the stable denominator form.
pub(crate) fn eval_real_product(zeros: &[Complex64], x: f64) -> f64 {
    let mut acc = 1.0;
    for zk in zeros {
        acc *= (x - zk.re) / one_minus_prod(zk.re, x);
    }
    acc
}

/// `B'(z)`: the logarithmic-derivative form away from zeros, the product-rule
/// accumulation within `1e-8` of a zero (where the log form loses digits).
pub fn derivative(b: &BlaschkeProduct, z: Complex64) -> Result<Complex64> {
    let near_zero = b.zeros.iter().any(|zk| (z - zk).norm() < 1e-8);
    if near_zero {
        return derivative_product_rule(b, z);
    }
    let value = eval(b, z)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for zk in &b.zeros {
        let den = 1.0 - zk.conj() * z;
        sum += 1.0 / (z - zk) + zk.conj() / den;
    }
    Ok(value * sum)
}

fn derivative_product_rule(b: &BlaschkeProduct, z: Complex64) -> Result<Complex64> {
    let n = b.degree();
    let mut factors = Vec::with_capacity(n);
    let mut dfactors = Vec::with_capacity(n);
    for zk in &b.zeros {
        let den = 1.0 - zk.conj() * z;
        if den.norm() < 1e-14 {
            return Err(Error::domain(format!(
                "evaluation at a pole of the Blaschke product (z = {z})"
            )));
        }
        factors.push((z - zk) / den);
        dfactors.push((1.0 - zk.norm_sqr()) / (den * den));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let mut term = dfactors[j];
        for i in 0..n {
            if i != j {
                term *= factors[i];
            }
        }
        total += term;
    }
    Ok(b.alpha * total)
}

/// The Schwarz–Pick quantity `(1-|z|²)|B'(z)|` at an interior point.
pub fn schwarz_pick(b: &BlaschkeProduct, z: Complex64) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "Schwarz-Pick quantity needs |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    Ok((1.0 - z.norm_sqr()) * derivative(b, z)?.norm())
}

/// All critical points of `B` inside the open disk, with their values.
///
/// General products go through the numerator polynomial of `B'` (coefficient
/// convolution, global Durand–Kerner, Newton polish on `B'` itself). Products
/// with all-real zeros instead bisect the logarithmic derivative on each gap
/// between consecutive zeros: the monomial route cannot separate the
/// near-boundary zero clusters that extremal products of small τ produce,
/// while the gap form is monotone and bracket-safe there.
pub fn critical_points(b: &BlaschkeProduct) -> Result<CriticalData> {
    let n = b.degree();
    if n < 2 {
        return Err(Error::domain("critical points need degree at least 2"));
    }
    let points = if b.all_zeros_real() {
        real_zero_critical_points(b)?
    } else {
        polynomial_critical_points(b)?
    };
    if points.len() != n - 1 {
        return Err(Error::numeric(format!(
            "found {} interior critical points for degree {n} (expected {})",
            points.len(),
            n - 1
        )));
    }
    let mut values = Vec::with_capacity(points.len());
    for p in &points {
        values.push(eval(b, *p)?);
    }
    let lambda_min = values.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    for v in &values {
        if v.norm() >= 1.0 {
            return Err(Error::consistency(format!(
                "critical value {v} escaped the open disk"
            )));
        }
    }
    Ok(CriticalData {
        points,
        values,
        lambda_min,
    })
}

/// Logarithmic derivative `S(x) = Σ [1/(x - z_k) + z_k/(1 - z_k x)]` over
/// real zeros at a real point, plus an estimate of its evaluation floor
/// (the absolute rounding noise of the summation).
fn log_derivative_real(zeros: &[Complex64], x: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut magnitude = 0.0;
    for zk in zeros {
        let t1 = 1.0 / (x - zk.re);
        let t2 = zk.re / one_minus_prod(zk.re, x);
        sum += t1 + t2;
        magnitude += t1.abs() + t2.abs();
    }
    (sum, magnitude * 1e-15)
}

fn real_zero_critical_points(b: &BlaschkeProduct) -> Result<Vec<Complex64>> {
    let mut zs: Vec<f64> = b.zeros.iter().map(|z| z.re).collect();
    zs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Group exact repeats: a zero of multiplicity m is itself a critical
    // point of multiplicity m - 1.
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &z in &zs {
        match groups.last_mut() {
            Some((v, count)) if z - *v <= 0.0 || z - *v < 1e-15 * (1.0 + z.abs()) => *count += 1,
            _ => groups.push((z, 1)),
        }
    }

    let mut points = Vec::new();
    for &(z, count) in &groups {
        for _ in 1..count {
            points.push(Complex64::new(z, 0.0));
        }
    }
    // One simple critical point in each gap between consecutive distinct
    // zeros: S is strictly decreasing there, from +∞ to -∞.
    for w in groups.windows(2) {
        let (a, bz) = (w[0].0, w[1].0);
        let mut lo = a;
        let mut hi = bz;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (s, _) = log_derivative_real(&b.zeros, mid);
            if s > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        points.push(Complex64::new(0.5 * (lo + hi), 0.0));
    }
    points.sort_by(|p, q| p.re.partial_cmp(&q.re).unwrap());

    // Residual check, with the summation floor folded into the tolerance:
    // near-boundary zero clusters make |S| unresolvable below the floor.
    for p in &points {
        if b.zeros.iter().any(|zk| (p - zk).norm() < 1e-13) {
            continue; // multiple-zero critical point, B' vanishes with B
        }
        let (s, floor) = log_derivative_real(&b.zeros, p.re);
        let bval = eval_real_product(&b.zeros, p.re).abs();
        let residual = bval * s.abs();
        if residual > 1e-10 + 4.0 * bval * floor {
            return Err(Error::numeric(format!(
                "critical point at {} has residual |B'| = {residual:.3e}",
                p.re
            )));
        }
    }
    Ok(points)
}

fn polynomial_critical_points(b: &BlaschkeProduct) -> Result<Vec<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let mut num = vec![one];
    let mut den = vec![one];
    for zk in &b.zeros {
        num = poly::mul(&num, &[-zk, one]);
        den = poly::mul(&den, &[one, -zk.conj()]);
    }
    let dnum = poly::derivative(&num);
    let dden = poly::derivative(&den);
    let lhs = poly::mul(&dnum, &den);
    let rhs = poly::mul(&num, &dden);
    let mut p: Vec<Complex64> = lhs
        .iter()
        .zip(rhs.iter().chain(std::iter::repeat(&Complex64::new(0.0, 0.0))))
        .map(|(a, b)| a - b)
        .collect();
    p = poly::trim(p, 1e-13);

    let raw = poly::roots(&p)?;
    let mut interior: Vec<Complex64> = Vec::new();
    for root in raw {
        if root.norm() >= 1.0 {
            continue;
        }
        let polished = polish_on_derivative(b, root);
        if polished.norm() < 1.0 {
            interior.push(polished);
        }
    }
    // Cluster to account for multiple critical points.
    let mut clustered: Vec<Complex64> = Vec::new();
    for p in interior {
        if !clustered.iter().any(|q| (p - q).norm() < 1e-7) {
            clustered.push(p);
        } else {
            clustered.push(p); // keep multiplicity, merged below
        }
    }
    // Merge cluster members to their mean for a cleaner multiplicity report.
    let mut result: Vec<Complex64> = Vec::new();
    let mut used = vec![false; clustered.len()];
    for i in 0..clustered.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![clustered[i]];
        used[i] = true;
        for j in (i + 1)..clustered.len() {
            if !used[j] && (clustered[j] - clustered[i]).norm() < 1e-7 {
                members.push(clustered[j]);
                used[j] = true;
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        for _ in 0..members.len() {
            result.push(mean);
        }
    }

    for p in &result {
        if b.zeros.iter().any(|zk| (p - zk).norm() < 1e-7) {
            continue;
        }
        let resid = derivative(b, *p)?.norm();
        if resid > 1e-10 {
            return Err(Error::numeric(format!(
                "critical point {p} has residual |B'| = {resid:.3e}"
            )));
        }
    }
    result.sort_by(|a, c| (a.re, a.im).partial_cmp(&(c.re, c.im)).unwrap());
    Ok(result)
}

/// Newton on `B'` using `B'' = B·(S² + S')`; falls back to the input when
/// the iteration stalls (multiple roots make `B''` vanish as well).
fn polish_on_derivative(b: &BlaschkeProduct, start: Complex64) -> Complex64 {
    let mut z = start;
    for _ in 0..50 {
        if b.zeros.iter().any(|zk| (z - zk).norm() < 1e-9) {
            return z; // critical point at a multiple zero
        }
        let Ok(value) = eval(b, z) else { return z };
        let mut s = Complex64::new(0.0, 0.0);
        let mut sp = Complex64::new(0.0, 0.0);
        for zk in &b.zeros {
            let den = 1.0 - zk.conj() * z;
            let a = 1.0 / (z - zk);
            let c = zk.conj() / den;
            s += a + c;
            sp += -a * a + c * c;
        }
        let bp = value * s;
        if bp.norm() < 1e-15 {
            return z;
        }
        let bpp = value * (s * s + sp);
        if bpp.norm() < 1e-18 {
            return z;
        }
        let mut step = bp / bpp;
        if step.norm() > 0.1 {
            step *= 0.1 / step.norm();
        }
        let next = z - step;
        if next.norm() >= 1.0 + 1e-9 {
            return z;
        }
        z = next;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            return z;
        }
    }
    z
}

/// Pre-composition with the disk automorphism `φ(z) = e^{iθ}(z-a)/(1-āz)`:
/// returns the Blaschke product representing `B ∘ φ`.
///
/// The new zeros are `φ⁻¹(z_k)`; the unimodular factor is fitted at one
/// probe point and audited at 200 deterministic interior points.
pub fn compose_automorphism(b: &BlaschkeProduct, a: Complex64, theta: f64) -> Result<BlaschkeProduct> {
    if a.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "automorphism parameter must satisfy |a| < 1, got {}",
            a.norm()
        )));
    }
    let rot = Complex64::from_polar(1.0, theta);
    let inv_rot = Complex64::from_polar(1.0, -theta);
    let phi = |z: Complex64| rot * (z - a) / (1.0 - a.conj() * z);
    let phi_inv = |y: Complex64| {
        let t = y * inv_rot;
        (t + a) / (1.0 + a.conj() * t)
    };

    let new_zeros: Vec<Complex64> = b.zeros.iter().map(|&zk| phi_inv(zk)).collect();

    // Fit alpha at a probe point kept away from the new zero set.
    let candidates = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.31, 0.17),
        Complex64::new(-0.22, 0.43),
        Complex64::new(0.11, -0.57),
    ];
    let probe = candidates
        .iter()
        .find(|p| new_zeros.iter().all(|z| (*p - z).norm() > 0.05))
        .copied()
        .unwrap_or(candidates[0]);

    let target = eval(b, phi(probe))?;
    let mut plain = Complex64::new(1.0, 0.0);
    for zk in &new_zeros {
        plain *= (probe - zk) / (1.0 - zk.conj() * probe);
    }
    if plain.norm() < 1e-14 {
        return Err(Error::numeric("automorphism composition probe degenerated"));
    }
    let mut alpha = target / plain;
    alpha /= alpha.norm();

    let composed = BlaschkeProduct::new(alpha, new_zeros)?;

    // Audit the representation on a deterministic interior sample.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xB1A5C4E);
    for _ in 0..200 {
        let r = 0.97 * rng.gen::<f64>().sqrt();
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = Complex64::from_polar(r, t);
        let lhs = eval(b, phi(z))?;
        let rhs = eval(&composed, z)?;
        if (lhs - rhs).norm() > 1e-9 {
            return Err(Error::numeric(format!(
                "automorphism composition audit failed at z = {z}: |Δ| = {:.3e}",
                (lhs - rhs).norm()
            )));
        }
    }
    Ok(composed)
}

/// Winding number of `θ ↦ B(e^{iθ})` around 0, by adaptive argument
/// accumulation. For a Blaschke product this equals the degree.
///
/// A zero at distance `ε` from the boundary makes the image whip through a
/// full turn within an angular window of width `~ε`, which a uniform sample
/// grid aliases away entirely. The initial partition therefore carries a
/// dyadic fan of nodes around every zero's boundary angle, down to the
/// zero's own distance scale; subdivision then resolves each increment to
/// less than a quarter turn.
pub fn boundary_winding(b: &BlaschkeProduct, base_samples: usize) -> Result<i64> {
    let samples = base_samples.max(16);
    let boundary = |theta: f64| -> Result<Complex64> {
        eval(b, Complex64::from_polar(1.0, theta))
    };

    let start = 0.5 * std::f64::consts::TAU / samples as f64;
    let mut nodes: Vec<f64> = (0..=samples)
        .map(|i| start + i as f64 * std::f64::consts::TAU / samples as f64)
        .collect();
    for zk in &b.zeros {
        let eps = (1.0 - zk.norm()).max(1e-16);
        if eps < 1e-3 {
            let center = zk.arg();
            let mut w = 2e-3_f64;
            while w > 0.25 * eps {
                for t in [center - w, center + w] {
                    // Fold into the swept interval [start, start + 2π].
                    let mut tt = t;
                    while tt < start {
                        tt += std::f64::consts::TAU;
                    }
                    while tt > start + std::f64::consts::TAU {
                        tt -= std::f64::consts::TAU;
                    }
                    nodes.push(tt);
                }
                w *= 0.5;
            }
        }
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-17);

    let mut total = 0.0;
    let mut prev_theta = nodes[0];
    let mut prev_val = boundary(prev_theta)?;
    for &theta in &nodes[1..] {
        let val = boundary(theta)?;
        total += arg_increment(&boundary, prev_theta, theta, prev_val, val, 0)?;
        prev_theta = theta;
        prev_val = val;
    }
    let winding = total / std::f64::consts::TAU;
    let rounded = winding.round();
    if (winding - rounded).abs() > 1e-6 {
        return Err(Error::numeric(format!(
            "winding number did not close up: {winding}"
        )));
    }
    Ok(rounded as i64)
}

fn arg_increment(
    boundary: &dyn Fn(f64) -> Result<Complex64>,
    t0: f64,
    t1: f64,
    v0: Complex64,
    v1: Complex64,
    depth: u32,
) -> Result<f64> {
    let delta = (v1 / v0).arg();
    if delta.abs() <= std::f64::consts::FRAC_PI_2 && (v1 - v0).norm() <= 1.0 {
        return Ok(delta);
    }
    if depth >= 56 {
        return Err(Error::numeric(
            "boundary winding refinement exhausted (value whips too fast)",
        ));
    }
    let tm = 0.5 * (t0 + t1);
    if tm <= t0 || tm >= t1 {
        // Interval below angular resolution; accept the principal value.
        return Ok(delta);
    }
    let vm = boundary(tm)?;
    Ok(arg_increment(boundary, t0, tm, v0, vm, depth + 1)?
        + arg_increment(boundary, tm, t1, vm, v1, depth + 1)?)
}

/// Rasterizes the sublevel set `{z : |B(z)| < t}` on a square grid over the
/// disk and returns its connected-component count (4-connectivity flood
/// fill).
///
/// A cell is marked when its center or one of its corners lies in the
/// sublevel set. The corner test matters when `t` is exactly a critical
/// level: there the set pinches at saddle points, and the pinch region
/// touches the corner lattice even when every nearby cell center sits just
/// outside.
pub(crate) fn sublevel_components(b: &BlaschkeProduct, t: f64, grid_n: usize) -> Result<u32> {
    let h = 2.0 / grid_n as f64;
    let mut corner_in = vec![false; (grid_n + 1) * (grid_n + 1)];
    for j in 0..=grid_n {
        for i in 0..=grid_n {
            let z = Complex64::new(-1.0 + h * i as f64, -1.0 + h * j as f64);
            if z.norm_sqr() < 1.0 && eval(b, z)?.norm() < t {
                corner_in[j * (grid_n + 1) + i] = true;
            }
        }
    }
    let mut marked = vec![false; grid_n * grid_n];
    for j in 0..grid_n {
        for i in 0..grid_n {
            let center = Complex64::new(-1.0 + h * (i as f64 + 0.5), -1.0 + h * (j as f64 + 0.5));
            let center_in = center.norm_sqr() < 1.0 && eval(b, center)?.norm() < t;
            let any_corner = corner_in[j * (grid_n + 1) + i]
                || corner_in[j * (grid_n + 1) + i + 1]
                || corner_in[(j + 1) * (grid_n + 1) + i]
                || corner_in[(j + 1) * (grid_n + 1) + i + 1];
            if center_in || any_corner {
                marked[j * grid_n + i] = true;
            }
        }
    }
    // A zero always lies in the sublevel set; force-mark its cell so a
    // coarse grid cannot lose a component entirely.
    for zk in &b.zeros {
        let i = (((zk.re + 1.0) / h) as isize).clamp(0, grid_n as isize - 1) as usize;
        let j = (((zk.im + 1.0) / h) as isize).clamp(0, grid_n as isize - 1) as usize;
        marked[j * grid_n + i] = true;
    }

    // Flood fill, 4-connectivity.
    let mut component = vec![0_u32; grid_n * grid_n];
    let mut next_label = 0_u32;
    let mut stack = Vec::new();
    for start in 0..marked.len() {
        if !marked[start] || component[start] != 0 {
            continue;
        }
        next_label += 1;
        component[start] = next_label;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (i, j) = (idx % grid_n, idx / grid_n);
            let mut push = |ni: usize, nj: usize, stack: &mut Vec<usize>| {
                let nidx = nj * grid_n + ni;
                if marked[nidx] && component[nidx] == 0 {
                    component[nidx] = next_label;
                    stack.push(nidx);
                }
            };
            if i > 0 {
                push(i - 1, j, &mut stack);
            }
            if i + 1 < grid_n {
                push(i + 1, j, &mut stack);
            }
            if j > 0 {
                push(i, j - 1, &mut stack);
            }
            if j + 1 < grid_n {
                push(i, j + 1, &mut stack);
            }
        }
    }
    Ok(next_label)
}

/// Raster probe for lemniscate connectivity: rasterizes `{|B| < t}` on a
/// `grid_n × grid_n` grid, flood-fills, and reports `true` iff the sublevel
/// set forms a single component (which then necessarily contains every
/// zero). Resolution-limited — this is a probe, not a proof.
pub fn lemniscate_connected(b: &BlaschkeProduct, t: f64, grid_n: usize) -> Result<bool> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("level t must lie in (0,1), got {t}")));
    }
    if grid_n < 256 {
        return Err(Error::domain("lemniscate probe needs grid_n >= 256"));
    }
    Ok(sublevel_components(b, t, grid_n)? == 1)
}

/// Points on the level set `{ |B| = t }`, traced by bisecting every raster
/// edge where `|B| - t` changes sign between adjacent cell centers.
pub(crate) fn trace_level_set(b: &BlaschkeProduct, t: f64, grid_n: usize) -> Result<Vec<Complex64>> {
    let h = 2.0 / grid_n as f64;
    let mut values = vec![f64::NAN; grid_n * grid_n];
    for j in 0..grid_n {
        for i in 0..grid_n {
            let z = Complex64::new(-1.0 + h * (i as f64 + 0.5), -1.0 + h * (j as f64 + 0.5));
            if z.norm_sqr() < 1.0 {
                values[j * grid_n + i] = eval(b, z)?.norm() - t;
            }
        }
    }
    let center = |i: usize, j: usize| {
        Complex64::new(-1.0 + h * (i as f64 + 0.5), -1.0 + h * (j as f64 + 0.5))
    };
    let mut points = Vec::new();
    let mut refine = |a: Complex64, fa: f64, c: Complex64, _fc: f64| -> Result<()> {
        let (mut lo, mut hi) = if fa <= 0.0 { (a, c) } else { (c, a) };
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if eval(b, mid)?.norm() - t <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        points.push(0.5 * (lo + hi));
        Ok(())
    };
    for j in 0..grid_n {
        for i in 0..grid_n {
            let f0 = values[j * grid_n + i];
            if !f0.is_finite() {
                continue;
            }
            if i + 1 < grid_n {
                let f1 = values[j * grid_n + i + 1];
                if f1.is_finite() && (f0 <= 0.0) != (f1 <= 0.0) {
                    refine(center(i, j), f0, center(i + 1, j), f1)?;
                }
            }
            if j + 1 < grid_n {
                let f1 = values[(j + 1) * grid_n + i];
                if f1.is_finite() && (f0 <= 0.0) != (f1 <= 0.0) {
                    refine(center(i, j), f0, center(i, j + 1), f1)?;
                }
            }
        }
    }
    Ok(points)
}
