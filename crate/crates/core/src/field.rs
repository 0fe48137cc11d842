//! Multivector-valued functions sampled on uniform periodic grids, with the
//! Riemann-sum quadrature of `dV`, the Clifford-valued L² inner product
//! `∫ f(x)† g(x) dV(x)`, and coordinate / derivative operators.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cft;
use crate::error::{Error, Result};
use crate::multivector::{blade_sign, conjugation_sign, Multivector, MAX_DIM};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest number of samples per channel accepted by [`GridSpec::new`].
pub const MAX_SAMPLES: usize = 1 << 24;

/// Isotropic grid on `[-L, L)ⁿ` with `N` points per axis, `h = 2L/N`,
/// nodes `x_m = -L + m h`. The matching frequency grid has spacing
/// `Δξ = 2π/(N h) = π/L` and nodes `ξ_k = (k - N/2) Δξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub points: usize,
    pub half_width: f64,
}

/// Which variable a field is sampled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Space,
    Frequency,
}

impl GridSpec {
    pub fn new(dim: usize, points: usize, half_width: f64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points < 2 || !points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and >= 2, got {points}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        match points.checked_pow(dim as u32) {
            Some(total) if total <= MAX_SAMPLES => {}
            _ => {
                return Err(Error::InvalidGrid(format!(
                    "{points}^{dim} samples exceeds the limit of {MAX_SAMPLES}"
                )))
            }
        }
        Ok(Self {
            dim,
            points,
            half_width,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn frequency_spacing(&self) -> f64 {
        PI / self.half_width
    }

    /// Samples per channel, `Nⁿ`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel_count(&self) -> usize {
        1 << self.dim
    }

    pub fn step(&self, domain: Domain) -> f64 {
        match domain {
            Domain::Space => self.spacing(),
            Domain::Frequency => self.frequency_spacing(),
        }
    }

    /// Quadrature weight of one cell, `hⁿ` or `Δξⁿ`.
    pub fn cell_volume(&self, domain: Domain) -> f64 {
        self.step(domain).powi(self.dim as i32)
    }

    /// Coordinate of node `m` along any axis.
    pub fn node(&self, domain: Domain, m: usize) -> f64 {
        match domain {
            Domain::Space => -self.half_width + m as f64 * self.spacing(),
            Domain::Frequency => (m as f64 - (self.points / 2) as f64) * self.frequency_spacing(),
        }
    }

    pub fn axis_nodes(&self, domain: Domain) -> Vec<f64> {
        (0..self.points).map(|m| self.node(domain, m)).collect()
    }

    /// Per-axis indices of a flat index; axis 0 varies slowest.
    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.points;
            flat /= self.points;
        }
    }

    pub fn coords(&self, domain: Domain, flat: usize, out: &mut [f64]) {
        let mut idx = [0usize; MAX_DIM];
        self.multi_index(flat, &mut idx[..self.dim]);
        for (o, &m) in out.iter_mut().zip(&idx[..self.dim]) {
            *o = self.node(domain, m);
        }
    }

    /// Wraps a displacement into the periodic box `[-L, L)`.
    pub fn wrap(&self, d: f64) -> f64 {
        let period = 2.0 * self.half_width;
        d - period * ((d + self.half_width) / period).floor()
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// A multivector field: one complex array of `Nⁿ` samples per basis blade.
#[derive(Debug, Clone, PartialEq)]
pub struct MVField {
    grid: GridSpec,
    domain: Domain,
    channels: Vec<Vec<Complex64>>,
}

impl MVField {
    pub fn zeros(grid: GridSpec, domain: Domain) -> Self {
        Self {
            grid,
            domain,
            channels: vec![vec![ZERO; grid.len()]; grid.channel_count()],
        }
    }

    pub fn from_channels(grid: GridSpec, domain: Domain, channels: Vec<Vec<Complex64>>) -> Result<Self> {
        if channels.len() != grid.channel_count() || channels.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::GridMismatch(format!(
                "expected {} channels of {} samples",
                grid.channel_count(),
                grid.len()
            )));
        }
        Ok(Self { grid, domain, channels })
    }

    /// Samples `evaluator` at every spatial node.
    pub fn sample<F>(grid: GridSpec, evaluator: F) -> Self
    where
        F: Fn(&[f64]) -> Multivector,
    {
        Self::sample_in(grid, Domain::Space, evaluator)
    }

    pub fn sample_in<F>(grid: GridSpec, domain: Domain, evaluator: F) -> Self
    where
        F: Fn(&[f64]) -> Multivector,
    {
        let mut field = Self::zeros(grid, domain);
        let mut x = vec![0.0; grid.dim];
        for p in 0..grid.len() {
            grid.coords(domain, p, &mut x);
            let v = evaluator(&x);
            debug_assert_eq!(v.dim(), grid.dim);
            for (ch, &c) in field.channels.iter_mut().zip(v.coeffs()) {
                ch[p] = c;
            }
        }
        field
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn channels(&self) -> &[Vec<Complex64>] {
        &self.channels
    }

    pub fn channels_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.channels
    }

    pub fn channel(&self, mask: usize) -> &[Complex64] {
        &self.channels[mask]
    }

    pub fn into_channels(self) -> Vec<Vec<Complex64>> {
        self.channels
    }

    pub(crate) fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// Multivector value at flat node index `p`.
    pub fn value(&self, p: usize) -> Multivector {
        let coeffs = self.channels.iter().map(|ch| ch[p]).collect();
        Multivector::from_coeffs(self.grid.dim, coeffs).expect("channel count matches dimension")
    }

    pub fn is_zero(&self) -> bool {
        self.channels.iter().all(|ch| ch.iter().all(|&c| c == ZERO))
    }

    pub fn ensure_compatible(&self, other: &MVField) -> Result<()> {
        self.grid.ensure_same(&other.grid)?;
        if self.domain != other.domain {
            return Err(Error::GridMismatch(format!(
                "{:?} field vs {:?} field",
                self.domain, other.domain
            )));
        }
        Ok(())
    }

    /// Riemann sum `Σ f(x) · hⁿ`, channel by channel.
    pub fn integral(&self) -> Multivector {
        let vol = self.grid.cell_volume(self.domain);
        let coeffs = self
            .channels
            .iter()
            .map(|ch| ch.iter().fold(ZERO, |acc, &c| acc + c) * vol)
            .collect();
        Multivector::from_coeffs(self.grid.dim, coeffs).expect("channel count matches dimension")
    }

    /// `⟨f, g⟩ = ∫ f(x)† g(x) dV(x)`, Clifford-valued.
    pub fn inner_product(&self, other: &MVField) -> Result<Multivector> {
        self.ensure_compatible(other)?;
        let vol = self.grid.cell_volume(self.domain);
        let mut out = Multivector::zero(self.grid.dim)?;
        let coeffs = out.coeffs_mut();
        for (a, fa) in self.channels.iter().enumerate() {
            if fa.iter().all(|&c| c == ZERO) {
                continue;
            }
            let conj_sign = conjugation_sign(a);
            for (b, gb) in other.channels.iter().enumerate() {
                let s = fa.iter().zip(gb).fold(ZERO, |acc, (x, y)| acc + x.conj() * y);
                coeffs[a ^ b] += s * (conj_sign * blade_sign(a as u32, b as u32) * vol);
            }
        }
        Ok(out)
    }

    /// Channel-sum squared norm `Σ_A ‖f_A‖²`, equal to the scalar part of `⟨f, f⟩`.
    pub fn norm_sqr(&self) -> f64 {
        let vol = self.grid.cell_volume(self.domain);
        self.channels
            .iter()
            .map(|ch| ch.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * vol
    }

    /// `√(scalar part of ⟨f, f⟩)`.
    pub fn l2_norm(&self) -> Result<f64> {
        let sc = self.inner_product(self)?.scalar_part().re;
        if sc < -1e-12 {
            return Err(Error::NegativeNorm(sc));
        }
        Ok(sc.max(0.0).sqrt())
    }

    /// Magnitude of the non-scalar part of `⟨f, f⟩`; zero for real ℝ₂-valued
    /// fields but generally not for complex coefficients or n ≥ 3.
    pub fn norm_residual(&self) -> Result<f64> {
        Ok(self.inner_product(self)?.non_scalar_magnitude())
    }

    /// Pointwise `x_k f(x)` (or `ξ_k F(ξ)` for a frequency-domain field), `k` 1-based.
    pub fn coordinate_multiply(&self, k: usize) -> Result<MVField> {
        self.check_axis(k)?;
        let nodes = self.grid.axis_nodes(self.domain);
        let stride = self.grid.points.pow((self.grid.dim - k) as u32);
        let n = self.grid.points;
        let mut out = self.clone();
        for ch in out.channels.iter_mut() {
            for (p, c) in ch.iter_mut().enumerate() {
                *c *= nodes[(p / stride) % n];
            }
        }
        Ok(out)
    }

    /// `∂_{x_k} f` by the spectral multiplier `i ξ_k`.
    pub fn partial_derivative(&self, k: usize) -> Result<MVField> {
        self.check_axis(k)?;
        if self.domain != Domain::Space {
            return Err(Error::GridMismatch("derivative expects a spatial field".into()));
        }
        let spectrum = cft::forward(self)?;
        let mut shifted = spectrum.coordinate_multiply(k)?;
        for ch in shifted.channels.iter_mut() {
            for c in ch.iter_mut() {
                *c *= Complex64::new(0.0, 1.0);
            }
        }
        cft::inverse(&shifted)
    }

    /// Second-order periodic central difference along axis `k`; an
    /// independent cross-check for [`MVField::partial_derivative`].
    pub fn central_difference(&self, k: usize) -> Result<MVField> {
        self.check_axis(k)?;
        let n = self.grid.points;
        let stride = n.pow((self.grid.dim - k) as u32);
        let inv_2h = 1.0 / (2.0 * self.grid.step(self.domain));
        let mut out = self.clone();
        for (src, dst) in self.channels.iter().zip(out.channels.iter_mut()) {
            for (p, d) in dst.iter_mut().enumerate() {
                let m = (p / stride) % n;
                let base = p - m * stride;
                let up = base + ((m + 1) % n) * stride;
                let down = base + ((m + n - 1) % n) * stride;
                *d = (src[up] - src[down]) * inv_2h;
            }
        }
        Ok(out)
    }

    fn check_axis(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.grid.dim {
            return Err(Error::InvalidIndex {
                index: k,
                dim: self.grid.dim,
            });
        }
        Ok(())
    }

    pub fn scale(&self, factor: Complex64) -> MVField {
        let mut out = self.clone();
        out.channels
            .iter_mut()
            .flat_map(|ch| ch.iter_mut())
            .for_each(|c| *c *= factor);
        out
    }

    /// `self + factor · other`
    pub fn add_scaled(&self, other: &MVField, factor: Complex64) -> Result<MVField> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.channels.iter_mut().zip(&other.channels) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * factor;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MVField) -> Result<MVField> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    /// Pointwise `c · f(x)` for a constant multivector `c`.
    pub fn left_multiply(&self, c: &Multivector) -> Result<MVField> {
        self.constant_product(c, true)
    }

    /// Pointwise `f(x) · c` for a constant multivector `c`.
    pub fn right_multiply(&self, c: &Multivector) -> Result<MVField> {
        self.constant_product(c, false)
    }

    fn constant_product(&self, c: &Multivector, left: bool) -> Result<MVField> {
        if c.dim() != self.grid.dim {
            return Err(Error::DimensionMismatch {
                left: c.dim(),
                right: self.grid.dim,
            });
        }
        let mut out = MVField::zeros(self.grid, self.domain);
        for (a, fa) in self.channels.iter().enumerate() {
            for (b, &cb) in c.coeffs().iter().enumerate() {
                if cb == ZERO {
                    continue;
                }
                let (mask, factor) = if left {
                    (a ^ b, cb * blade_sign(b as u32, a as u32))
                } else {
                    (a ^ b, cb * blade_sign(a as u32, b as u32))
                };
                for (o, &x) in out.channels[mask].iter_mut().zip(fa) {
                    *o += x * factor;
                }
            }
        }
        Ok(out)
    }

    /// Pointwise Clifford product `f(x) g(x)`.
    pub fn pointwise_product(&self, other: &MVField) -> Result<MVField> {
        self.ensure_compatible(other)?;
        let mut out = MVField::zeros(self.grid, self.domain);
        let live = |ch: &[Complex64]| ch.iter().any(|&c| c != ZERO);
        let right: Vec<bool> = other.channels.iter().map(|ch| live(ch)).collect();
        for (a, fa) in self.channels.iter().enumerate() {
            if !live(fa) {
                continue;
            }
            for (b, gb) in other.channels.iter().enumerate() {
                if !right[b] {
                    continue;
                }
                let sign = blade_sign(a as u32, b as u32);
                for ((o, x), y) in out.channels[a ^ b].iter_mut().zip(fa).zip(gb) {
                    *o += x * y * sign;
                }
            }
        }
        Ok(out)
    }

    /// Pointwise Hermitian conjugate `f(x)†`.
    pub fn hermitian_conjugation(&self) -> MVField {
        let mut out = self.clone();
        for (a, ch) in out.channels.iter_mut().enumerate() {
            let s = conjugation_sign(a);
            ch.iter_mut().for_each(|c| *c = c.conj() * s);
        }
        out
    }

    /// `‖self - reference‖ / ‖reference‖` using channel-sum norms.
    pub fn relative_l2_error(&self, reference: &MVField) -> Result<f64> {
        let diff = self.sub(reference)?;
        let denom = reference.norm_sqr();
        if denom == 0.0 {
            return Ok(diff.norm_sqr().sqrt());
        }
        Ok((diff.norm_sqr() / denom).sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.channels
            .iter()
            .flat_map(|ch| ch.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Text table: one row per node with the `n` coordinates followed by
    /// `re im` pairs for each of the `2ⁿ` channels in mask order.
    pub fn write_table<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.grid.dim;
        let axis = match self.domain {
            Domain::Space => "x",
            Domain::Frequency => "xi",
        };
        let mut header: Vec<String> = (1..=n).map(|j| format!("{axis}{j}")).collect();
        for mask in 0..self.grid.channel_count() {
            let name = blade_name(mask, n);
            header.push(format!("re_{name}"));
            header.push(format!("im_{name}"));
        }
        writeln!(out, "# {}", header.join(" "))?;
        let mut x = vec![0.0; n];
        for p in 0..self.grid.len() {
            self.grid.coords(self.domain, p, &mut x);
            let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            for ch in &self.channels {
                row.push(ch[p].re.to_string());
                row.push(ch[p].im.to_string());
            }
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }

    /// Flat little-endian binary: header `dim, points` as u64 and `half_width`
    /// as f64, then the channels in mask order as interleaved `re, im` f64.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(&(self.grid.dim as u64).to_le_bytes())?;
        out.write_all(&(self.grid.points as u64).to_le_bytes())?;
        out.write_all(&self.grid.half_width.to_le_bytes())?;
        for ch in &self.channels {
            for c in ch {
                out.write_all(&c.re.to_le_bytes())?;
                out.write_all(&c.im.to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// `"1"` for the scalar blade, otherwise `"e12"`-style names.
pub fn blade_name(mask: usize, dim: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    let mut s = String::from("e");
    for j in 0..dim {
        if mask & (1 << j) != 0 {
            s.push_str(&(j + 1).to_string());
        }
    }
    s
}

/// `|⟨f, g⟩| / (‖f‖ ‖g‖)` with the coefficient-Euclidean magnitude; zero
/// when either norm vanishes.
pub fn cauchy_schwarz_check(f: &MVField, g: &MVField) -> Result<f64> {
    let ip = f.inner_product(g)?;
    let denom = f.l2_norm()? * g.l2_norm()?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(ip.magnitude() / denom)
}
