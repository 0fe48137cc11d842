//! Analytic test functions with closed-form partial derivatives, including
//! seeded random band-limited superpositions (modulated Gaussians with
//! random complex multivector coefficients).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{GridSpec, MVField};
use crate::multivector::Multivector;

/// One term `c · exp(-Σ_j (x_j - μ_j)² / (2σ_j²)) · e^{i⟨κ, x⟩}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianTerm {
    pub coefficient: Vec<Complex64>,
    pub center: Vec<f64>,
    pub widths: Vec<f64>,
    pub wavevector: Vec<f64>,
}

impl GaussianTerm {
    fn envelope(&self, x: &[f64]) -> Complex64 {
        let mut q = 0.0;
        let mut phase = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            let d = xj - self.center[j];
            q += d * d / (self.widths[j] * self.widths[j]);
            phase += self.wavevector[j] * xj;
        }
        Complex64::from_polar((-q / 2.0).exp(), phase)
    }

    fn log_derivative(&self, x: &[f64], k: usize) -> Complex64 {
        let j = k - 1;
        let d = x[j] - self.center[j];
        Complex64::new(-d / (self.widths[j] * self.widths[j]), self.wavevector[j])
    }
}

/// A finite sum of [`GaussianTerm`]s in dimension `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub name: String,
    pub dim: usize,
    pub terms: Vec<GaussianTerm>,
}

impl TestFunction {
    /// `e^{-|x|²/2}` times a multivector constant.
    pub fn gaussian(dim: usize, coefficient: &Multivector) -> Self {
        Self::anisotropic_gaussian(dim, coefficient, &vec![1.0; dim], &vec![0.0; dim])
    }

    pub fn scalar_gaussian(dim: usize) -> Result<Self> {
        Ok(Self::gaussian(dim, &Multivector::one(dim)?))
    }

    pub fn anisotropic_gaussian(dim: usize, coefficient: &Multivector, widths: &[f64], center: &[f64]) -> Self {
        Self {
            name: "gaussian".into(),
            dim,
            terms: vec![GaussianTerm {
                coefficient: coefficient.coeffs().to_vec(),
                center: center.to_vec(),
                widths: widths.to_vec(),
                wavevector: vec![0.0; dim],
            }],
        }
    }

    /// Isotropic Gaussian envelope of width `width` carrying the plane wave
    /// `e^{i⟨κ, x⟩}`; its spectrum is a Gaussian of width `1/width` centred
    /// at `κ`.
    pub fn modulated_gaussian(dim: usize, coefficient: &Multivector, width: f64, wavevector: &[f64]) -> Self {
        Self {
            name: "modulated_gaussian".into(),
            dim,
            terms: vec![GaussianTerm {
                coefficient: coefficient.coeffs().to_vec(),
                center: vec![0.0; dim],
                widths: vec![width; dim],
                wavevector: wavevector.to_vec(),
            }],
        }
    }

    /// Seeded random superposition of 2–4 modulated Gaussians: centres within
    /// `|μ_j| ≤ 0.75`, widths in `[0.75, 1.25]`, wavevector components in
    /// `[-1.25, 1.25]`, coefficients uniform in the complex unit square on
    /// every blade.
    pub fn random_band_limited(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 || dim > crate::multivector::MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.gen_range(2..=4);
        let terms = (0..count)
            .map(|_| GaussianTerm {
                coefficient: (0..1 << dim)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
                center: (0..dim).map(|_| rng.gen_range(-0.75..0.75)).collect(),
                widths: (0..dim).map(|_| rng.gen_range(0.75..1.25)).collect(),
                wavevector: (0..dim).map(|_| rng.gen_range(-1.25..1.25)).collect(),
            })
            .collect();
        Ok(Self {
            name: format!("random_band_limited[{seed}]"),
            dim,
            terms,
        })
    }

    /// Seeded random superposition of 1–3 modulated Gaussians whose spectra
    /// sit in a frequency band away from `ξ = 0`: widths in `[2.5, 3]`,
    /// centres within `|μ_j| ≤ 0.5`, carrier `|κ| ∈ [1, 1.5]` in a random
    /// direction, complex coefficients in the unit square on every blade.
    pub fn random_band_pass(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 || dim > crate::multivector::MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.gen_range(1..=3);
        let terms = (0..count)
            .map(|_| {
                let width = rng.gen_range(2.5..3.0);
                let mut direction: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let len = direction.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
                let magnitude = rng.gen_range(1.0..1.5);
                direction.iter_mut().for_each(|v| *v *= magnitude / len);
                GaussianTerm {
                    coefficient: (0..1 << dim)
                        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect(),
                    center: (0..dim).map(|_| rng.gen_range(-0.5..0.5)).collect(),
                    widths: vec![width; dim],
                    wavevector: direction,
                }
            })
            .collect();
        Ok(Self {
            name: format!("random_band_pass[{seed}]"),
            dim,
            terms,
        })
    }

    /// Same as [`TestFunction::random_band_limited`] with every coefficient real.
    pub fn random_real(dim: usize, seed: u64) -> Result<Self> {
        let mut f = Self::random_band_limited(dim, seed)?;
        for t in &mut f.terms {
            t.wavevector.iter_mut().for_each(|k| *k = 0.0);
            t.coefficient.iter_mut().for_each(|c| c.im = 0.0);
        }
        f.name = format!("random_real[{seed}]");
        Ok(f)
    }

    /// `f(x / a)`, widths, centres, and wavevectors rescaled accordingly.
    pub fn dilated(&self, a: f64) -> Self {
        let mut f = self.clone();
        for t in &mut f.terms {
            t.widths.iter_mut().for_each(|w| *w *= a);
            t.center.iter_mut().for_each(|c| *c *= a);
            t.wavevector.iter_mut().for_each(|k| *k /= a);
        }
        f.name = format!("{}@dilate({a})", self.name);
        f
    }

    /// `f(x - c)`
    pub fn translated(&self, shift: &[f64]) -> Self {
        let mut f = self.clone();
        for t in &mut f.terms {
            let phase: f64 = t.wavevector.iter().zip(shift).map(|(k, s)| k * s).sum();
            let rot = Complex64::from_polar(1.0, -phase);
            t.coefficient.iter_mut().for_each(|c| *c *= rot);
            t.center.iter_mut().zip(shift).for_each(|(c, s)| *c += s);
        }
        f.name = format!("{}@shift", self.name);
        f
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut f = self.clone();
        for t in &mut f.terms {
            t.coefficient.iter_mut().for_each(|c| *c *= factor);
        }
        f
    }

    pub fn eval(&self, x: &[f64]) -> Multivector {
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.dim];
        for t in &self.terms {
            let e = t.envelope(x);
            for (o, c) in out.iter_mut().zip(&t.coefficient) {
                *o += c * e;
            }
        }
        Multivector::from_coeffs(self.dim, out).expect("coefficient count matches dimension")
    }

    /// `∂_{x_k} f(x)`, `k` 1-based.
    pub fn partial(&self, x: &[f64], k: usize) -> Multivector {
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.dim];
        for t in &self.terms {
            let e = t.envelope(x) * t.log_derivative(x, k);
            for (o, c) in out.iter_mut().zip(&t.coefficient) {
                *o += c * e;
            }
        }
        Multivector::from_coeffs(self.dim, out).expect("coefficient count matches dimension")
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<MVField> {
        self.check_grid(grid)?;
        Ok(MVField::sample(*grid, |x| self.eval(x)))
    }

    pub fn sample_partial(&self, grid: &GridSpec, k: usize) -> Result<MVField> {
        self.check_grid(grid)?;
        if k == 0 || k > self.dim {
            return Err(Error::InvalidIndex {
                index: k,
                dim: self.dim,
            });
        }
        Ok(MVField::sample(*grid, |x| self.partial(x, k)))
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        if grid.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: grid.dim,
            });
        }
        Ok(())
    }
}
