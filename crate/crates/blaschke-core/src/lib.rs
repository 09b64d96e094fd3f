//! Finite Blaschke products and the extremal functions that govern their
//! distortion.
//!
//! The crate is organized in layers:
//!
//! * [`elliptic`] — complete elliptic integrals `K`, `K'` and the Jacobi
//!   elliptic sine for real and complex arguments (AGM + Landen
//!   transformations, binary64 throughout).
//! * [`zolotarev`] — the degree/modulus equation `K'(k)K(κ) = n K'(κ)K(k)`
//!   and parametric evaluation of the Zolotarev fraction `Z_n(ζ; κ)`.
//! * [`extremal`] — the degree-`n` extremal disk map `B_{nτ}`, built as
//!   `Φ(Z((z-1)/(z+1); κ))` with `√κ = (√τ-1)/(√τ+1)`: zero location, the
//!   monotone inverse branch on `[z_β, 1)`, critical values `±1/√τ`, and the
//!   normalized extremal `f_{nτ}`.
//! * [`blaschke`] — general finite Blaschke product algebra: evaluation,
//!   derivatives, critical points/values, automorphism composition, the
//!   Schwarz–Pick quantity and a lemniscate connectivity probe.
//! * [`chebyshev`] — Chebyshev polynomials, their monotone inverse branch,
//!   and the polynomial derivative bound they are extremal for.
//! * [`verify`] — randomized and structured checks of the sharp distortion
//!   inequality `(1-|z|²)|f'(z)| ≤ (1-x²)|B'_{nτ}(x)|`, `x = B⁻¹_{nτ}(|f(z)|)`,
//!   together with its boundary/equality cases; emits machine-readable
//!   reports.

pub mod blaschke;
pub mod chebyshev;
pub mod elliptic;
pub mod extremal;
pub mod verify;
pub mod zolotarev;

mod error;
pub(crate) mod poly;

pub use error::{Error, Result};

/// The universal value type: a point of the complex plane.
pub type ComplexPoint = num_complex::Complex64;

pub use blaschke::{BlaschkeProduct, CriticalData};
pub use chebyshev::Polynomial;
pub use elliptic::{EllipticPair, Modulus};
pub use extremal::{ExtremalProduct, MoebiusMap};
pub use verify::VerificationReport;
pub use zolotarev::ZolotarevParams;
