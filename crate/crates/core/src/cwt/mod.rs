//! Continuous Clifford-wavelet transform.
//!
//! Daughters `ψ^{a,b,s}(x) = a^{-n/2} s ψ(s̄ (x - b) s / a) s̄` are sampled
//! from the mother wavelet's analytic evaluator on the periodic box, with
//! `x - b` taken as the minimal periodic image. Coefficients
//! `T_ψ[f](a, b, s) = ∫ [ψ^{a,b,s}(x)]† f(x) dV(x)` over a full `b`-grid are
//! computed per `(a, s)` as a correlation in the Fourier domain,
//! `F_b[T](ξ) = (2π)^{n/2} [φ̂_{a,s}(ξ)]† f̂(ξ)` with `φ_{a,s} = ψ^{a,0,s}`.

mod spin;
mod transform;
mod wavelet;

pub use spin::{haar_samples, spin2_from_angle, SpinElement};
pub use transform::{
    daughter, h_inner_product, inverse, transform_direct, transform_grid, ConstantMode, CwtAtlas, CwtQuadrature,
    ScaleQuadrature,
};
pub use wavelet::{calibrate, check_admissibility, Admissibility, Calibration, MotherWavelet, WaveletKind};

/// `2π^{n/2} / Γ(n/2)`, the surface area of the unit sphere in ℝⁿ.
pub fn unit_sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    // Γ(n/2) by recursion from Γ(1) = 1 and Γ(1/2) = √π
    let mut gamma = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut x = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < n as f64 / 2.0 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / gamma
}
