use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multivector::{Multivector, Vector};

const ROTOR_TOL: f64 = 1e-12;

/// An element `s = ω₁ ω₂ ⋯ ω_{2l}` of Spin(n), acting on vectors by
/// `x ↦ s̄ x s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinElement {
    rotor: Multivector,
    factors: Vec<Vector>,
    // column j is the image of e_{j+1}
    rotation: Vec<Vec<f64>>,
    // column B is s e_B s̄
    sandwich: Vec<Vec<Complex64>>,
}

impl SpinElement {
    pub fn identity(dim: usize) -> Result<Self> {
        let mut e1 = vec![0.0; dim];
        e1[0] = 1.0;
        let mut minus_e1 = vec![0.0; dim];
        minus_e1[0] = -1.0;
        // e₁(-e₁) = 1
        Self::from_unit_vectors(vec![Vector::new(e1), Vector::new(minus_e1)])
    }

    /// Product of an even number of unit vectors.
    pub fn from_unit_vectors(factors: Vec<Vector>) -> Result<Self> {
        if factors.is_empty() || !factors.len().is_multiple_of(2) {
            return Err(Error::InvalidRotor(format!(
                "expected an even, non-zero number of unit vectors, got {}",
                factors.len()
            )));
        }
        let dim = factors[0].dim();
        let mut rotor = Multivector::one(dim)?;
        for w in &factors {
            if w.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: w.dim(),
                });
            }
            if (w.norm() - 1.0).abs() > ROTOR_TOL {
                return Err(Error::InvalidRotor(format!("factor {:?} is not a unit vector", w.0)));
            }
            rotor = rotor.geometric_product(&w.embed()?)?;
        }
        Self::build(rotor, factors)
    }

    /// Wraps an even unit multivector, recovering a two-factor provenance.
    /// Only dimensions 2 and 3 are supported, where every unit even element
    /// is a product of two unit vectors.
    pub fn from_rotor(rotor: Multivector) -> Result<Self> {
        let dim = rotor.dim();
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedSpinDimension(dim));
        }
        if !rotor.is_even(ROTOR_TOL) {
            return Err(Error::InvalidRotor("rotor has odd-grade parts".into()));
        }
        let u = plane_vector(&rotor);
        // u⁻¹ = -u since u² = -1
        let v_mv = u.embed()?.scale_real(-1.0).geometric_product(&rotor)?;
        let v = Vector::from_multivector(&v_mv, 1e-10)
            .map_err(|_| Error::InvalidRotor("rotor is not a product of two vectors".into()))?;
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidRotor(format!("rotor norm {norm} is not 1")));
        }
        Self::build(rotor, vec![u, v])
    }

    fn build(rotor: Multivector, factors: Vec<Vector>) -> Result<Self> {
        let dim = rotor.dim();
        let residual = validity_residual(&rotor)?;
        if residual > 1e-10 {
            return Err(Error::InvalidRotor(format!("|s̄s - 1| = {residual:e}")));
        }
        let conj = rotor.conjugation();
        let mut rotation = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            let img = conj
                .geometric_product(&Vector::new(e).embed()?)?
                .geometric_product(&rotor)?;
            let v = Vector::from_multivector(&img, 1e-10)
                .map_err(|e| Error::InvalidRotor(format!("action does not preserve vectors: {e}")))?;
            rotation.push(v.0);
        }
        let mut sandwich = Vec::with_capacity(1 << dim);
        for mask in 0..1u32 << dim {
            let mut e = Multivector::zero(dim)?;
            e.set(mask, Complex64::new(1.0, 0.0));
            sandwich.push(rotor.geometric_product(&e)?.geometric_product(&conj)?.into_coeffs());
        }
        Ok(Self {
            rotor,
            factors,
            rotation,
            sandwich,
        })
    }

    pub fn dim(&self) -> usize {
        self.rotor.dim()
    }

    pub fn rotor(&self) -> &Multivector {
        &self.rotor
    }

    pub fn factors(&self) -> &[Vector] {
        &self.factors
    }

    /// `|s̄ s - 1|`
    pub fn validity_residual(&self) -> f64 {
        validity_residual(&self.rotor).unwrap_or(f64::INFINITY)
    }

    /// `s̄ x s`, computed with geometric products; fails if the result is
    /// not a vector to within 1e-10.
    pub fn rotate_vector(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: x.dim(),
            });
        }
        let img = self
            .rotor
            .conjugation()
            .geometric_product(&x.embed()?)?
            .geometric_product(&self.rotor)?;
        Vector::from_multivector(&img, 1e-10)
            .map_err(|e| Error::InvalidRotor(format!("rotated vector has residual: {e}")))
    }

    /// Same action as [`SpinElement::rotate_vector`] through the cached matrix.
    #[inline]
    pub fn rotate_point(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (xj, col) in x.iter().zip(&self.rotation) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += xj * c;
            }
        }
    }

    /// `s m s̄` through the cached matrix, accumulating `factor · s m s̄` into `out`.
    #[inline]
    pub fn sandwich_into(&self, m: &[Complex64], factor: f64, out: &mut [Complex64]) {
        for (mb, col) in m.iter().zip(&self.sandwich) {
            if mb.re == 0.0 && mb.im == 0.0 {
                continue;
            }
            let w = mb * factor;
            for (o, c) in out.iter_mut().zip(col) {
                *o += w * c;
            }
        }
    }

    pub fn sandwich(&self, m: &Multivector) -> Multivector {
        let mut out = Multivector::zero(self.dim()).expect("valid dimension");
        self.sandwich_into(m.coeffs(), 1.0, out.coeffs_mut());
        out
    }
}

fn validity_residual(rotor: &Multivector) -> Result<f64> {
    let prod = rotor.conjugation().geometric_product(rotor)?;
    Ok((&prod - &Multivector::one(rotor.dim())?).magnitude())
}

/// A unit vector lying in the plane of the rotor's bivector part (or `e₁`
/// when there is none).
fn plane_vector(rotor: &Multivector) -> Vector {
    let dim = rotor.dim();
    let mut e1 = vec![0.0; dim];
    e1[0] = 1.0;
    if dim == 2 {
        return Vector::new(e1);
    }
    // bivector b12 e12 + b13 e13 + b23 e23 has normal (b23, -b13, b12)
    let b12 = rotor.coeff(0b011).re;
    let b13 = rotor.coeff(0b101).re;
    let b23 = rotor.coeff(0b110).re;
    let normal = [b23, -b13, b12];
    let nn = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nn < 1e-14 {
        return Vector::new(e1);
    }
    let axis = if normal[0].abs() <= normal[1].abs() && normal[0].abs() <= normal[2].abs() {
        [1.0, 0.0, 0.0]
    } else if normal[1].abs() <= normal[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let u = [
        normal[1] * axis[2] - normal[2] * axis[1],
        normal[2] * axis[0] - normal[0] * axis[2],
        normal[0] * axis[1] - normal[1] * axis[0],
    ];
    let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    Vector::new(u.iter().map(|v| v / un).collect())
}

/// `cos θ + sin θ e₁e₂` in Spin(2), built as the product of the unit
/// vectors `e₁` and `(-cos θ, sin θ)`. Its action `x ↦ s̄ x s` rotates the
/// plane by `2θ` in the `e₂ → e₁` sense.
pub fn spin2_from_angle(theta: f64) -> SpinElement {
    SpinElement::from_unit_vectors(vec![
        Vector::new(vec![1.0, 0.0]),
        Vector::new(vec![-theta.cos(), theta.sin()]),
    ])
    .expect("unit factors")
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

/// Equal-weight samples of the normalised Haar measure on Spin(n).
///
/// n = 2 uses angles `θ_j = jπ/count`, which visit every rotation once.
/// n = 3 maps a Halton point set (bases 2, 3, 5) to unit quaternions with
/// Shoemake's uniform construction; the first sample is the identity.
pub fn haar_samples(dim: usize, count: usize) -> Result<Vec<(SpinElement, f64)>> {
    if count == 0 {
        return Err(Error::InvalidParameter("spin count must be positive".into()));
    }
    let weight = 1.0 / count as f64;
    match dim {
        2 => Ok((0..count)
            .map(|j| (spin2_from_angle(j as f64 * PI / count as f64), weight))
            .collect()),
        3 => (0..count as u64)
            .map(|i| {
                let u1 = radical_inverse(i, 2);
                let u2 = radical_inverse(i, 3);
                let u3 = radical_inverse(i, 5);
                let (r1, r2) = ((1.0 - u1).sqrt(), u1.sqrt());
                let (w, x) = (r1 * (2.0 * PI * u2).cos(), r1 * (2.0 * PI * u2).sin());
                let (y, z) = (r2 * (2.0 * PI * u3).sin(), r2 * (2.0 * PI * u3).cos());
                let rotor = Multivector::from_real(3, &[w, 0.0, 0.0, z, 0.0, y, x, 0.0])?;
                Ok((SpinElement::from_rotor(rotor)?, weight))
            })
            .collect(),
        _ => Err(Error::UnsupportedSpinDimension(dim)),
    }
}
