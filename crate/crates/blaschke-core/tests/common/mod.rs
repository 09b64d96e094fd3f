//! Oracle helpers shared by the integration tests. Everything here is
//! deliberately independent of the library's own numeric paths: quadrature
//! instead of AGM, fixed-point big integers instead of binary64, plain
//! bisection instead of the library solvers.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

const SCALE_BITS: u32 = 384;

fn fixed_from_f64(x: f64) -> BigUint {
    // Exact for inputs with ≤ 53 significant bits (all oracle inputs are).
    let scaled = (x * (1u64 << 53) as f64) as u64;
    BigUint::from(scaled) << (SCALE_BITS - 53)
}

fn fixed_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap() / 2f64.powi(SCALE_BITS as i32)
}

/// Arithmetic–geometric mean in 384-bit fixed point (~115 decimal digits of
/// working precision), converted to f64 only at the end.
pub fn agm_fixed_point_oracle(a0: f64, b0: f64) -> f64 {
    let mut a = fixed_from_f64(a0);
    let mut b = fixed_from_f64(b0);
    let stop = BigUint::from(1u32) << 16; // 2^-368 in value terms
    for _ in 0..256 {
        let diff = if a > b { &a - &b } else { &b - &a };
        if diff <= stop {
            break;
        }
        let sum = (&a + &b) >> 1;
        let geo = (&a * &b).sqrt();
        a = sum;
        b = geo;
    }
    fixed_to_f64(&((&a + &b) >> 1))
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let left = a + p as f64 * h;
        let mid = left + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            total += w * half * f(mid + half * x);
        }
    }
    total
}

/// `K(k)` by direct quadrature of the defining integral.
pub fn quadrature_big_k(k: f64) -> f64 {
    integrate(
        |theta| {
            let s = theta.sin();
            1.0 / (1.0 - k * k * s * s).sqrt()
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        16,
    )
}

/// The incomplete integral `u(φ) = ∫₀^φ dθ/√(1-k²sin²θ)`.
pub fn quadrature_incomplete(k: f64, phi: f64) -> f64 {
    integrate(
        |theta| {
            let s = theta.sin();
            1.0 / (1.0 - k * k * s * s).sqrt()
        },
        0.0,
        phi,
        16,
    )
}

/// Inverts `u(φ) = u_target` by bisection on `φ ∈ [0, π/2]` and returns
/// `sn(u_target; k) = sin(φ)` — a quadrature-only route to the elliptic
/// sine on the fundamental segment.
pub fn sn_by_quadrature_inversion(u_target: f64, k: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = std::f64::consts::FRAC_PI_2;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if quadrature_incomplete(k, mid) < u_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).sin()
}
