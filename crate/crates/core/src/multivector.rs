//! Dense multivectors of the complexified Clifford algebra ℂₙ with
//! generators satisfying `e_i e_j + e_j e_i = -2 δ_ij`.
//!
//! Basis blades are addressed by bitmask: bit `j` set means `e_{j+1}` is a
//! factor of the blade, with factors kept in increasing index order. The
//! empty mask is the scalar blade.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported number of generators.
pub const MAX_DIM: usize = 8;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A basis blade `e_A` of ℝₙ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BladeMask {
    bits: u32,
    dim: usize,
}

impl BladeMask {
    pub fn new(bits: u32, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if bits >= (1u32 << dim) {
            return Err(Error::InvalidBlade { bits, dim });
        }
        Ok(Self { bits, dim })
    }

    pub fn scalar(dim: usize) -> Result<Self> {
        Self::new(0, dim)
    }

    /// The generator `e_j`, 1-based as in the usual notation.
    pub fn generator(j: usize, dim: usize) -> Result<Self> {
        if j == 0 || j > dim {
            return Err(Error::InvalidIndex { index: j, dim });
        }
        Self::new(1 << (j - 1), dim)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn dim(self) -> usize {
        self.dim
    }

    pub fn grade(self) -> u32 {
        self.bits.count_ones()
    }

    /// 1-based generator indices in increasing order.
    pub fn generators(self) -> Vec<usize> {
        (0..self.dim)
            .filter(|j| self.bits & (1 << j) != 0)
            .map(|j| j + 1)
            .collect()
    }
}

/// `e_A e_B = sign · e_{A xor B}`.
pub fn blade_product(a: BladeMask, b: BladeMask) -> Result<(f64, BladeMask)> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let sign = blade_sign(a.bits, b.bits);
    Ok((
        sign,
        BladeMask {
            bits: a.bits ^ b.bits,
            dim: a.dim,
        },
    ))
}

/// Sign of `e_A e_B` for raw masks: one factor of -1 per transposition
/// needed to sort the concatenated generator list, and one per repeated
/// generator (`e_j² = -1`).
#[inline]
pub(crate) fn blade_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn grade_of(mask: usize) -> u32 {
    (mask as u32).count_ones()
}

/// `(-1)^{|A|}`
#[inline]
pub(crate) fn involution_sign(mask: usize) -> f64 {
    if grade_of(mask).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^{|A|(|A|-1)/2}`
#[inline]
pub(crate) fn reversion_sign(mask: usize) -> f64 {
    let k = grade_of(mask);
    if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^{|A|(|A|+1)/2}`
#[inline]
pub(crate) fn conjugation_sign(mask: usize) -> f64 {
    let k = grade_of(mask);
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

/// An element of ℂₙ stored as `2ⁿ` complex coefficients indexed by blade mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            coeffs: vec![ZERO; 1 << dim],
        })
    }

    pub fn scalar(dim: usize, value: Complex64) -> Result<Self> {
        let mut mv = Self::zero(dim)?;
        mv.coeffs[0] = value;
        Ok(mv)
    }

    pub fn one(dim: usize) -> Result<Self> {
        Self::scalar(dim, Complex64::new(1.0, 0.0))
    }

    pub fn blade(blade: BladeMask, value: Complex64) -> Self {
        let mut coeffs = vec![ZERO; 1 << blade.dim];
        coeffs[blade.bits as usize] = value;
        Self { dim: blade.dim, coeffs }
    }

    /// Real-coefficient blade from a 1-based generator list, e.g. `[1, 2]` for `e₁e₂`.
    /// The list must be strictly increasing.
    pub fn basis(dim: usize, generators: &[usize]) -> Result<Self> {
        check_dim(dim)?;
        let mut bits = 0u32;
        let mut last = 0;
        for &j in generators {
            if j == 0 || j > dim || j <= last {
                return Err(Error::InvalidIndex { index: j, dim });
            }
            bits |= 1 << (j - 1);
            last = j;
        }
        Ok(Self::blade(BladeMask { bits, dim }, Complex64::new(1.0, 0.0)))
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if coeffs.len() != 1 << dim {
            return Err(Error::CoefficientCount {
                expected: 1 << dim,
                found: coeffs.len(),
            });
        }
        Ok(Self { dim, coeffs })
    }

    pub fn from_real(dim: usize, coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(dim, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, bits: u32) -> Complex64 {
        self.coeffs.get(bits as usize).copied().unwrap_or(ZERO)
    }

    pub fn set(&mut self, bits: u32, value: Complex64) {
        self.coeffs[bits as usize] = value;
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = vec![ZERO; self.coeffs.len()];
        product_into(&self.coeffs, &other.coeffs, &mut out);
        Ok(Multivector {
            dim: self.dim,
            coeffs: out,
        })
    }

    fn map_signs(&self, sign: impl Fn(usize) -> f64, conj: bool) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| {
                let c = if conj { c.conj() } else { c };
                c * sign(mask)
            })
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    pub fn main_involution(&self) -> Multivector {
        self.map_signs(involution_sign, false)
    }

    pub fn reversion(&self) -> Multivector {
        self.map_signs(reversion_sign, false)
    }

    pub fn conjugation(&self) -> Multivector {
        self.map_signs(conjugation_sign, false)
    }

    /// `λ† = ā - i b̄` for `λ = a + i b`: Clifford conjugation combined with
    /// complex conjugation of every coefficient.
    pub fn hermitian_conjugation(&self) -> Multivector {
        self.map_signs(conjugation_sign, true)
    }

    pub fn grade_projection(&self, k: usize) -> Result<Multivector> {
        if k > self.dim {
            return Err(Error::InvalidGrade {
                grade: k,
                dim: self.dim,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| if grade_of(mask) as usize == k { c } else { ZERO })
            .collect();
        Ok(Multivector { dim: self.dim, coeffs })
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Euclidean norm of the coefficient array.
    pub fn magnitude(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Coefficient-Euclidean magnitude of everything except the scalar part.
    pub fn non_scalar_magnitude(&self) -> f64 {
        self.coeffs[1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(mask, c)| grade_of(mask).is_multiple_of(2) || c.norm() <= tol)
    }

    pub fn scale(&self, factor: Complex64) -> Multivector {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Multivector {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Render with an explicit coefficient formatter; used by `Display`.
    fn render(&self) -> String {
        let mut out = String::new();
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let (negative, body) = if c.im == 0.0 {
                (c.re.is_sign_negative(), format!("{}", c.re.abs()))
            } else if c.re == 0.0 {
                (c.im.is_sign_negative(), format!("{}i", c.im.abs()))
            } else {
                let op = if c.im.is_sign_negative() { '-' } else { '+' };
                (false, format!("({}{}{}i)", c.re, op, c.im.abs()))
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
            if mask != 0 {
                out.push_str(" e");
                for j in 0..self.dim {
                    if mask & (1 << j) != 0 {
                        out.push_str(&(j + 1).to_string());
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parse the textual form produced by `Display`, e.g. `"-11 - 2 e12"`,
    /// `"(1-0.5i) e2 + 3i"`.
    pub fn parse(dim: usize, text: &str) -> Result<Multivector> {
        let mut mv = Multivector::zero(dim)?;
        let bad = |why: &str| Error::Parse(format!("{why} in {text:?}"));
        let mut rest = text.trim();
        if rest == "0" {
            return Ok(mv);
        }
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = 1.0;
            if first {
                if let Some(r) = rest.strip_prefix('-') {
                    sign = -1.0;
                    rest = r;
                }
            } else if let Some(r) = rest.strip_prefix("+ ") {
                rest = r;
            } else if let Some(r) = rest.strip_prefix("- ") {
                sign = -1.0;
                rest = r;
            } else {
                return Err(bad("expected term separator"));
            }
            first = false;
            // coefficient
            let coeff;
            if let Some(r) = rest.strip_prefix('(') {
                let close = r.find(')').ok_or_else(|| bad("unclosed parenthesis"))?;
                coeff = parse_complex(&r[..close]).ok_or_else(|| bad("bad complex coefficient"))?;
                rest = &r[close + 1..];
            } else {
                let end = rest.find(' ').unwrap_or(rest.len());
                let tok = &rest[..end];
                coeff = if let Some(im) = tok.strip_suffix('i') {
                    Complex64::new(0.0, im.parse().map_err(|_| bad("bad number"))?)
                } else {
                    Complex64::new(tok.parse().map_err(|_| bad("bad number"))?, 0.0)
                };
                rest = &rest[end..];
            }
            // optional blade
            let mut bits = 0u32;
            if let Some(r) = rest.strip_prefix(" e") {
                let end = r.find(' ').unwrap_or(r.len());
                let digits = &r[..end];
                if digits.is_empty() {
                    return Err(bad("empty blade"));
                }
                let mut last = 0;
                for ch in digits.chars() {
                    let j = ch.to_digit(10).ok_or_else(|| bad("bad blade digit"))? as usize;
                    if j == 0 || j > dim || j <= last {
                        return Err(bad("blade generators out of order or range"));
                    }
                    last = j;
                    bits |= 1 << (j - 1);
                }
                rest = &r[end..];
            }
            rest = rest.strip_prefix(' ').unwrap_or(rest);
            mv.coeffs[bits as usize] += coeff * sign;
        }
        Ok(mv)
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let body = s.strip_suffix('i')?;
    // split at the last sign that is not part of an exponent or leading
    let bytes = body.as_bytes();
    let pos = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && bytes[p - 1] != b'e')?;
    let re: f64 = body[..pos].parse().ok()?;
    let im: f64 = body[pos..].parse().ok()?;
    Some(Complex64::new(re, im))
}

/// Dense bilinear product of two coefficient arrays of equal length `2ⁿ`,
/// accumulated into `out`.
#[inline]
pub(crate) fn product_into(a: &[Complex64], b: &[Complex64], out: &mut [Complex64]) {
    out.iter_mut().for_each(|c| *c = ZERO);
    for (i, &ai) in a.iter().enumerate() {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == ZERO {
                continue;
            }
            out[i ^ j] += ai * bj * blade_sign(i as u32, j as u32);
        }
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

/// Panics on dimension mismatch; use [`Multivector::geometric_product`] for the fallible form.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs).expect("dimension mismatch")
    }
}

/// A point of ℝⁿ, embedded in ℝₙ as `Σ x_j e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn embed(&self) -> Result<Multivector> {
        let mut mv = Multivector::zero(self.dim())?;
        for (j, &x) in self.0.iter().enumerate() {
            mv.coeffs[1 << j] = Complex64::new(x, 0.0);
        }
        Ok(mv)
    }

    /// `x·y = -⟨x, y⟩`
    pub fn dot(&self, other: &Vector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(-self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum::<f64>())
    }

    /// `x∧y = Σ_{j<k} e_j e_k (x_j y_k - x_k y_j)`
    pub fn wedge(&self, other: &Vector) -> Result<Multivector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let n = self.dim();
        let mut mv = Multivector::zero(n)?;
        for j in 0..n {
            for k in j + 1..n {
                let v = self.0[j] * other.0[k] - self.0[k] * other.0[j];
                mv.coeffs[(1 << j) | (1 << k)] = Complex64::new(v, 0.0);
            }
        }
        Ok(mv)
    }

    /// Reads the grade-1 part of a multivector; fails if other grades carry
    /// more than `tol` or any coefficient has an imaginary part above `tol`.
    pub fn from_multivector(mv: &Multivector, tol: f64) -> Result<Vector> {
        let residual = mv
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| if grade_of(mask) == 1 { c.im.abs() } else { c.norm() })
            .fold(0.0, f64::max);
        if residual > tol {
            return Err(Error::NotAVector(residual));
        }
        Ok(Vector((0..mv.dim).map(|j| mv.coeffs[1 << j].re).collect()))
    }
}

impl FromStr for Vector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(Vector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn blade_product_examples() {
        let e1 = BladeMask::generator(1, 2).unwrap();
        let e2 = BladeMask::generator(2, 2).unwrap();
        let e12 = BladeMask::new(0b11, 2).unwrap();
        assert_eq!(blade_product(e1, e2).unwrap(), (1.0, e12));
        assert_eq!(blade_product(e1, e1).unwrap(), (-1.0, BladeMask::scalar(2).unwrap()));
        assert_eq!(blade_product(e12, e1).unwrap(), (1.0, e2));
        let f1 = BladeMask::generator(1, 3).unwrap();
        assert!(matches!(blade_product(e1, f1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn geometric_product_examples() {
        let one_e1 = Multivector::from_real(2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        let one_e2 = Multivector::from_real(2, &[1.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            &one_e1 * &one_e2,
            Multivector::from_real(2, &[1.0, 1.0, 1.0, 1.0]).unwrap()
        );
        let e12 = Multivector::basis(2, &[1, 2]).unwrap();
        assert_eq!(&e12 * &e12, Multivector::scalar(2, c(-1.0)).unwrap());
        let x = Vector::new(vec![1.0, 2.0]).embed().unwrap();
        let y = Vector::new(vec![3.0, 4.0]).embed().unwrap();
        assert_eq!(&x * &y, Multivector::from_real(2, &[-11.0, 0.0, 0.0, -2.0]).unwrap());
    }

    #[test]
    fn involution_examples() {
        let e12 = Multivector::basis(2, &[1, 2]).unwrap();
        assert_eq!(e12.reversion(), -&e12);
        let e1 = Multivector::basis(2, &[1]).unwrap();
        assert_eq!(e1.conjugation(), -&e1);
        assert_eq!(e12.main_involution(), e12);
        let ie1 = e1.scale(Complex64::new(0.0, 1.0));
        assert_eq!(ie1.hermitian_conjugation(), ie1);
    }

    #[test]
    fn dot_and_wedge_examples() {
        let x = Vector::new(vec![1.0, 0.0]);
        let y = Vector::new(vec![0.0, 1.0]);
        assert_eq!(x.dot(&y).unwrap(), 0.0);
        assert_eq!(x.wedge(&y).unwrap(), Multivector::basis(2, &[1, 2]).unwrap());
        let x = Vector::new(vec![1.0, 2.0]);
        let y = Vector::new(vec![3.0, 4.0]);
        assert_eq!(x.dot(&y).unwrap(), -11.0);
        assert_eq!(
            x.wedge(&y).unwrap(),
            Multivector::from_real(2, &[0.0, 0.0, 0.0, -2.0]).unwrap()
        );
        let xe = x.embed().unwrap();
        assert_eq!(&xe * &xe, Multivector::scalar(2, c(-5.0)).unwrap());
    }

    #[test]
    fn projections_and_magnitude() {
        let a = Multivector::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(a.grade_projection(1).unwrap(), Multivector::basis(2, &[1]).unwrap());
        assert!(a.grade_projection(3).is_err());
        let b = Multivector::from_real(2, &[-11.0, 0.0, 0.0, -2.0]).unwrap();
        assert_eq!(b.scalar_part(), c(-11.0));
        assert_eq!(Multivector::from_real(1, &[3.0, 4.0]).unwrap().magnitude(), 5.0);
    }

    #[test]
    fn render_and_parse() {
        let b = Multivector::from_real(2, &[-11.0, 0.0, 0.0, -2.0]).unwrap();
        assert_eq!(b.to_string(), "-11 - 2 e12");
        assert_eq!(Multivector::parse(2, "-11 - 2 e12").unwrap(), b);
        let mut m = Multivector::zero(3).unwrap();
        m.set(0b010, Complex64::new(1.0, -0.5));
        m.set(0b101, Complex64::new(0.0, 3.25));
        m.set(0, Complex64::new(1e-20, 0.0));
        let text = m.to_string();
        assert_eq!(text, "0.00000000000000000001 + (1-0.5i) e2 + 3.25i e13");
        assert_eq!(Multivector::parse(3, &text).unwrap(), m);
        assert_eq!(Multivector::zero(2).unwrap().to_string(), "0");
        assert!(Multivector::parse(2, "1 e21").is_err());
        assert!(Multivector::parse(2, "1 e3").is_err());
    }

    #[test]
    fn dimension_limits() {
        assert!(Multivector::zero(0).is_err());
        assert!(Multivector::zero(MAX_DIM + 1).is_err());
        assert!(BladeMask::new(4, 2).is_err());
        assert!(Multivector::from_coeffs(2, vec![ZERO; 3]).is_err());
    }
}
