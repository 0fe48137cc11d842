use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spin::{haar_samples, SpinElement};
use super::wavelet::MotherWavelet;
use crate::cft;
use crate::error::{Error, Result};
use crate::field::{Domain, GridSpec, MVField};
use crate::multivector::{Multivector, Vector};

/// Which constant normalises the inverse transform and the `H_ψ` product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantMode {
    /// `A_ψ`, the admissibility integral.
    Admissibility,
    /// The calibrated isometry constant `C_ψ`.
    Calibrated,
}

impl fmt::Display for ConstantMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantMode::Admissibility => "admissibility",
            ConstantMode::Calibrated => "calibrated",
        })
    }
}

impl FromStr for ConstantMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "admissibility" => Ok(ConstantMode::Admissibility),
            "calibrated" => Ok(ConstantMode::Calibrated),
            other => Err(Error::InvalidParameter(format!("unknown constant mode {other:?}"))),
        }
    }
}

/// Discretisation of `da/a^{n+1} ds`: `scale_count` log-spaced cells on
/// `[scale_min, scale_max]` and `spin_count` Haar samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CwtQuadrature {
    pub scale_min: f64,
    pub scale_max: f64,
    pub scale_count: usize,
    pub spin_count: usize,
}

impl CwtQuadrature {
    pub fn new(scale_min: f64, scale_max: f64, scale_count: usize, spin_count: usize) -> Result<Self> {
        let q = Self {
            scale_min,
            scale_max,
            scale_count,
            spin_count,
        };
        q.validate()?;
        Ok(q)
    }

    /// `a ∈ [1/8, 8]`, 24 scales, 8 spins.
    pub fn documented() -> Self {
        Self {
            scale_min: 0.125,
            scale_max: 8.0,
            scale_count: 24,
            spin_count: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale_min > 0.0 && self.scale_max > self.scale_min && self.scale_max.is_finite()) {
            return Err(Error::InvalidQuadrature(format!(
                "scale range [{}, {}]",
                self.scale_min, self.scale_max
            )));
        }
        if self.scale_count == 0 || self.spin_count == 0 {
            return Err(Error::InvalidQuadrature(
                "scale and spin counts must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn slice_count(&self) -> usize {
        self.scale_count * self.spin_count
    }
}

/// Log-midpoint rule for `∫ g(a) da/a^{n+1}`: with `Δ = ln(a_max/a_min)/M`,
/// nodes `a_i = a_min e^{(i+½)Δ}` and weights `Δ a_i^{-n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ScaleQuadrature {
    pub fn new(quadrature: &CwtQuadrature, dim: usize) -> Result<Self> {
        quadrature.validate()?;
        let m = quadrature.scale_count;
        let delta = (quadrature.scale_max / quadrature.scale_min).ln() / m as f64;
        let nodes: Vec<f64> = (0..m)
            .map(|i| quadrature.scale_min * ((i as f64 + 0.5) * delta).exp())
            .collect();
        let weights = nodes.iter().map(|a| delta * a.powi(-(dim as i32))).collect();
        Ok(Self { nodes, weights })
    }
}

/// Spin samples for the atlas; Spin(1) = {±1} acts trivially, so a single
/// identity sample stands in for it.
pub(crate) fn spin_samples(dim: usize, count: usize) -> Result<Vec<(SpinElement, f64)>> {
    if dim == 1 {
        return Ok(vec![(SpinElement::identity(1)?, 1.0)]);
    }
    haar_samples(dim, count)
}

/// `ψ^{a,b,s}` sampled on `ψ`'s grid, with `x - b` reduced to its minimal
/// periodic image.
pub fn daughter(psi: &MotherWavelet, a: f64, b: &Vector, s: &SpinElement) -> Result<MVField> {
    let grid = *psi.grid();
    check_daughter_args(&grid, a, b, s)?;
    let n = grid.dim;
    let amp = a.powf(-(n as f64) / 2.0);
    let mut field = MVField::zeros(grid, Domain::Space);
    let mut x = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut value = vec![Complex64::new(0.0, 0.0); grid.channel_count()];
    let mut out = value.clone();
    for p in 0..grid.len() {
        grid.coords(Domain::Space, p, &mut x);
        for j in 0..n {
            d[j] = grid.wrap(x[j] - b.0[j]);
        }
        s.rotate_point(&d, &mut y);
        y.iter_mut().for_each(|v| *v /= a);
        psi.eval_into(&y, &mut value);
        out.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        s.sandwich_into(&value, amp, &mut out);
        for (ch, c) in field.channels_mut().iter_mut().zip(&out) {
            ch[p] = *c;
        }
    }
    Ok(field)
}

fn check_daughter_args(grid: &GridSpec, a: f64, b: &Vector, s: &SpinElement) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {a}")));
    }
    for d in [b.dim(), s.dim()] {
        if d != grid.dim {
            return Err(Error::DimensionMismatch {
                left: d,
                right: grid.dim,
            });
        }
    }
    Ok(())
}

/// Spectrum of `ψ^{a,0,s}`.
pub(crate) fn daughter_spectrum(psi: &MotherWavelet, a: f64, s: &SpinElement) -> Result<MVField> {
    let origin = Vector::new(vec![0.0; psi.dim()]);
    cft::forward(&daughter(psi, a, &origin, s)?)
}

/// `T_ψ[f](a, b, s) = ⟨ψ^{a,b,s}, f⟩` by direct quadrature.
pub fn transform_direct(f: &MVField, psi: &MotherWavelet, a: f64, b: &Vector, s: &SpinElement) -> Result<Multivector> {
    f.ensure_compatible(psi.sampled())?;
    daughter(psi, a, b, s)?.inner_product(f)
}

/// Coefficients `T_ψ[f](a_i, b, s_j)` on the full `b`-grid of the analysed
/// field for every scale and spin node of a quadrature.
#[derive(Debug, Clone)]
pub struct CwtAtlas {
    grid: GridSpec,
    quadrature: CwtQuadrature,
    wavelet: String,
    scales: ScaleQuadrature,
    spins: Vec<(SpinElement, f64)>,
    // index i * spin_count + j
    slices: Vec<MVField>,
}

impl CwtAtlas {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn quadrature(&self) -> &CwtQuadrature {
        &self.quadrature
    }

    pub fn wavelet(&self) -> &str {
        &self.wavelet
    }

    pub fn scales(&self) -> &ScaleQuadrature {
        &self.scales
    }

    pub fn spins(&self) -> &[(SpinElement, f64)] {
        &self.spins
    }

    pub fn slices(&self) -> &[MVField] {
        &self.slices
    }

    pub fn slice(&self, scale: usize, spin: usize) -> &MVField {
        &self.slices[scale * self.spins.len() + spin]
    }

    /// `w_i v_j` for the slice at flat index `index`.
    pub fn weight(&self, index: usize) -> f64 {
        let (i, j) = (index / self.spins.len(), index % self.spins.len());
        self.scales.weights[i] * self.spins[j].1
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(MVField::is_zero)
    }

    /// Applies `op` to every slice, keeping scales, spins, and weights.
    pub fn map_slices<F>(&self, op: F) -> Result<CwtAtlas>
    where
        F: Fn(&MVField) -> Result<MVField> + Sync,
    {
        let slices = self.slices.par_iter().map(&op).collect::<Result<Vec<_>>>()?;
        Ok(CwtAtlas {
            slices,
            ..self.without_slices()
        })
    }

    fn without_slices(&self) -> CwtAtlas {
        CwtAtlas {
            grid: self.grid,
            quadrature: self.quadrature.clone(),
            wavelet: self.wavelet.clone(),
            scales: self.scales.clone(),
            spins: self.spins.clone(),
            slices: Vec::new(),
        }
    }

    /// `Σ_{i,j} w_i v_j g(slice_{ij})`, summed in index order.
    pub fn weighted_sum<F>(&self, g: F) -> Result<f64>
    where
        F: Fn(&MVField) -> Result<f64> + Sync,
    {
        let values = self.slices.par_iter().map(&g).collect::<Result<Vec<_>>>()?;
        Ok(values.iter().enumerate().map(|(idx, v)| self.weight(idx) * v).sum())
    }

    /// `Σ w_i v_j ‖T(a_i, ·, s_j)‖²`
    pub fn weighted_norm_sqr(&self) -> f64 {
        self.weighted_sum(|s| Ok(s.norm_sqr())).expect("infallible")
    }

    pub fn ensure_matching(&self, other: &CwtAtlas) -> Result<()> {
        self.grid.ensure_same(&other.grid)?;
        if self.quadrature != other.quadrature {
            return Err(Error::QuadratureMismatch(format!(
                "{:?} vs {:?}",
                self.quadrature, other.quadrature
            )));
        }
        if self.wavelet != other.wavelet {
            return Err(Error::QuadratureMismatch(format!(
                "wavelet {} vs {}",
                self.wavelet, other.wavelet
            )));
        }
        Ok(())
    }

    /// Text table of `|T(a_i, b, s_j)|` over the `b`-grid.
    pub fn write_magnitude_table<W: Write>(&self, scale: usize, spin: usize, mut out: W) -> Result<()> {
        if scale >= self.scales.nodes.len() || spin >= self.spins.len() {
            return Err(Error::InvalidParameter(format!("no slice ({scale}, {spin})")));
        }
        let slice = self.slice(scale, spin);
        let n = self.grid.dim;
        writeln!(
            out,
            "# a={} spin={} {} magnitude",
            self.scales.nodes[scale],
            spin,
            (1..=n).map(|j| format!("b{j}")).collect::<Vec<_>>().join(" ")
        )?;
        let mut b = vec![0.0; n];
        for p in 0..self.grid.len() {
            self.grid.coords(Domain::Space, p, &mut b);
            let mag = slice.channels().iter().map(|ch| ch[p].norm_sqr()).sum::<f64>().sqrt();
            let coords: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{} {}", coords.join(" "), mag)?;
        }
        Ok(())
    }
}

/// Every `(a_i, s_j)` slice through
/// `F_b[T](ξ) = (2π)^{n/2} φ̂_{a,s}(ξ)† f̂(ξ)`.
pub fn transform_grid(f: &MVField, psi: &MotherWavelet, quadrature: &CwtQuadrature) -> Result<CwtAtlas> {
    f.ensure_compatible(psi.sampled())?;
    psi.ensure_usable()?;
    let grid = *f.grid();
    let scales = ScaleQuadrature::new(quadrature, grid.dim)?;
    let spins = spin_samples(grid.dim, quadrature.spin_count)?;
    let f_hat = cft::forward(f)?;
    let factor = Complex64::new((2.0 * PI).powf(grid.dim as f64 / 2.0), 0.0);
    let pairs: Vec<(usize, usize)> = (0..scales.nodes.len())
        .flat_map(|i| (0..spins.len()).map(move |j| (i, j)))
        .collect();
    let slices = pairs
        .par_iter()
        .map(|&(i, j)| {
            if f_hat.is_zero() {
                return Ok(MVField::zeros(grid, Domain::Space));
            }
            let phi_hat = daughter_spectrum(psi, scales.nodes[i], &spins[j].0)?;
            let t_hat = phi_hat.hermitian_conjugation().pointwise_product(&f_hat)?.scale(factor);
            cft::inverse(&t_hat)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CwtAtlas {
        grid,
        quadrature: quadrature.clone(),
        wavelet: psi.name().to_string(),
        scales,
        spins,
        slices,
    })
}

fn check_atlas_wavelet(atlas: &CwtAtlas, psi: &MotherWavelet) -> Result<()> {
    atlas.grid.ensure_same(psi.grid())?;
    if atlas.wavelet != psi.name() {
        return Err(Error::QuadratureMismatch(format!(
            "atlas of {} used with {}",
            atlas.wavelet,
            psi.name()
        )));
    }
    Ok(())
}

/// `(1/const) Σ_{i,j} w_i v_j Σ_b hⁿ ψ^{a_i,b,s_j}(x) T(a_i, b, s_j)`,
/// evaluated per slice as the convolution `(2π)^{n/2} φ̂ F_b[T]`.
pub fn inverse(atlas: &CwtAtlas, psi: &MotherWavelet, mode: ConstantMode) -> Result<MVField> {
    check_atlas_wavelet(atlas, psi)?;
    let constant = psi.constant(mode)?;
    let grid = atlas.grid;
    let factor = Complex64::new((2.0 * PI).powf(grid.dim as f64 / 2.0), 0.0);
    let contributions = atlas
        .slices
        .par_iter()
        .enumerate()
        .map(|(idx, slice)| {
            if slice.is_zero() {
                return Ok(None);
            }
            let (i, j) = (idx / atlas.spins.len(), idx % atlas.spins.len());
            let phi_hat = daughter_spectrum(psi, atlas.scales.nodes[i], &atlas.spins[j].0)?;
            let t_hat = cft::forward(slice)?;
            let w = Complex64::new(atlas.weight(idx), 0.0) * factor;
            Ok(Some(phi_hat.pointwise_product(&t_hat)?.scale(w)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = MVField::zeros(grid, Domain::Frequency);
    for c in contributions.into_iter().flatten() {
        total = total.add_scaled(&c, Complex64::new(1.0, 0.0))?;
    }
    Ok(cft::inverse(&total)?.scale(Complex64::new(1.0 / constant, 0.0)))
}

/// `[T_f, T_g] = (1/const) Σ_{i,j} w_i v_j ⟨T_f(a_i,·,s_j), T_g(a_i,·,s_j)⟩`.
pub fn h_inner_product(
    atlas_f: &CwtAtlas,
    atlas_g: &CwtAtlas,
    psi: &MotherWavelet,
    mode: ConstantMode,
) -> Result<Multivector> {
    atlas_f.ensure_matching(atlas_g)?;
    check_atlas_wavelet(atlas_f, psi)?;
    let constant = psi.constant(mode)?;
    let mut total = Multivector::zero(atlas_f.grid.dim)?;
    for (idx, (tf, tg)) in atlas_f.slices.iter().zip(&atlas_g.slices).enumerate() {
        total += &tf.inner_product(tg)?.scale_real(atlas_f.weight(idx));
    }
    Ok(total.scale_real(1.0 / constant))
}
