//! Clifford-Fourier transform
//! `F[f](ξ) = (2π)^{-n/2} ∫ e^{-i⟨x,ξ⟩} f(x) dV(x)` and its inverse.
//!
//! The kernel is scalar (the complex unit `i` commutes with every blade), so
//! the transform acts channel by channel. Each channel is a plain DFT with
//! twiddles that place node 0 at `x = -L` and centre the output at `ξ = 0`;
//! for an even `N` both twiddles reduce to alternating signs, so the
//! discrete transform samples the continuous one at the frequency nodes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::NdFft;
use crate::field::{Domain, GridSpec, MVField};

/// `(-1)^{Σ_j m_j}` for the flat index `p`.
fn parity_sign(grid: &GridSpec, p: usize) -> f64 {
    let mut rest = p;
    let mut parity = 0;
    for _ in 0..grid.dim {
        parity += rest % grid.points;
        rest /= grid.points;
    }
    if parity % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign pattern shared by both twiddles: `Π_j (-1)^{m_j}` in space and
/// `Π_j (-1)^{k_j - N/2}` in frequency.
fn twiddles(grid: &GridSpec) -> (Vec<f64>, Vec<f64>) {
    let space: Vec<f64> = (0..grid.len()).map(|p| parity_sign(grid, p)).collect();
    let offset = if (grid.points / 2 * grid.dim).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let freq = space.iter().map(|s| s * offset).collect();
    (space, freq)
}

pub fn forward(f: &MVField) -> Result<MVField> {
    if f.domain() != Domain::Space {
        return Err(Error::GridMismatch("forward transform expects a spatial field".into()));
    }
    let grid = *f.grid();
    let (pre, post) = twiddles(&grid);
    let scale = grid.cell_volume(Domain::Space) / (2.0 * PI).powf(grid.dim as f64 / 2.0);
    let fft = NdFft::new(grid.points, grid.dim);
    let mut out = f.clone().with_domain(Domain::Frequency);
    for ch in out.channels_mut() {
        if ch.iter().all(|c| c.re == 0.0 && c.im == 0.0) {
            continue;
        }
        for (c, s) in ch.iter_mut().zip(&pre) {
            *c *= *s;
        }
        fft.forward(ch);
        for (c, s) in ch.iter_mut().zip(&post) {
            *c *= *s * scale;
        }
    }
    Ok(out)
}

pub fn inverse(spectrum: &MVField) -> Result<MVField> {
    if spectrum.domain() != Domain::Frequency {
        return Err(Error::GridMismatch(
            "inverse transform expects a frequency field".into(),
        ));
    }
    let grid = *spectrum.grid();
    let (post, pre) = twiddles(&grid);
    let scale = grid.cell_volume(Domain::Frequency) / (2.0 * PI).powf(grid.dim as f64 / 2.0);
    let fft = NdFft::new(grid.points, grid.dim);
    let mut out = spectrum.clone().with_domain(Domain::Space);
    for ch in out.channels_mut() {
        if ch.iter().all(|c| c.re == 0.0 && c.im == 0.0) {
            continue;
        }
        for (c, s) in ch.iter_mut().zip(&pre) {
            *c *= *s;
        }
        fft.inverse(ch);
        for (c, s) in ch.iter_mut().zip(&post) {
            *c *= *s * scale;
        }
    }
    Ok(out)
}

/// `‖F[f]‖ / ‖f‖`; returns `(1.0, true)` for the zero field, the flag
/// marking that the ratio is a convention rather than a measurement.
pub fn plancherel_ratio(f: &MVField) -> Result<(f64, bool)> {
    let norm = f.l2_norm()?;
    if norm == 0.0 {
        return Ok((1.0, true));
    }
    Ok((forward(f)?.l2_norm()? / norm, false))
}

/// Pointwise `i ξ_k F(ξ)` on a frequency-domain field.
pub fn derivative_multiplier(spectrum: &MVField, k: usize) -> Result<MVField> {
    if spectrum.domain() != Domain::Frequency {
        return Err(Error::GridMismatch("multiplier expects a frequency field".into()));
    }
    Ok(spectrum.coordinate_multiply(k)?.scale(Complex64::new(0.0, 1.0)))
}
