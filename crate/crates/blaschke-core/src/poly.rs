//! Polynomial helpers shared by the Blaschke and Chebyshev layers:
//! ascending-coefficient arithmetic and a Durand–Kerner root finder.

use num_complex::Complex64;

use crate::{Error, Result};

/// Horner evaluation, coefficients ascending (`c[0] + c[1] z + …`).
pub(crate) fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

pub(crate) fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

pub(crate) fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Drops leading (highest-power) coefficients smaller than `tol` relative to
/// the largest coefficient magnitude.
pub(crate) fn trim(mut coeffs: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let cutoff = tol * scale;
    while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() <= cutoff) {
        coeffs.pop();
    }
    coeffs
}

/// All complex roots by Durand–Kerner simultaneous iteration.
///
/// Adequate for the desk-scale degrees (≤ ~32) this crate produces; final
/// accuracy is decoupled from the polynomial conditioning by the callers,
/// which polish roots on the analytic function the polynomial came from.
pub(crate) fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let coeffs = trim(coeffs.to_vec(), 1e-13);
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead.norm() < 1e-300 {
        return Err(Error::numeric("root finder given the zero polynomial"));
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }

    // Cauchy-style radius bound scaled start, angles detuned off symmetry.
    let radius = 1.0 + monic.iter().take(degree).map(|c| c.norm()).fold(0.0_f64, f64::max);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * (j as f64) / (degree as f64) + 0.39;
            radius.min(4.0) * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for j in 0..degree {
            let pj = eval(&monic, z[j]);
            let mut denom = Complex64::new(1.0, 0.0);
            for i in 0..degree {
                if i != j {
                    denom *= z[j] - z[i];
                }
            }
            if denom.norm() < 1e-300 {
                // Collided iterates: nudge apart and continue.
                z[j] += Complex64::new(1e-6, 1e-6);
                max_step = f64::INFINITY;
                continue;
            }
            let step = pj / denom;
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step <= 1e-13 {
            return Ok(z);
        }
    }
    // Accept whatever converged well enough; callers polish and validate.
    let residual_ok = z
        .iter()
        .all(|&r| eval(&monic, r).norm() < 1e-6 * (1.0 + r.norm()).powi(degree as i32));
    if residual_ok {
        Ok(z)
    } else {
        Err(Error::numeric(format!(
            "Durand-Kerner did not converge for degree {degree}"
        )))
    }
}
