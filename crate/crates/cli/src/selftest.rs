//! Algebra self-test: an independent blade-product oracle and the
//! involution identities on seeded random multivectors.

use cliffwave::{blade_product, BladeMask, Multivector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `e_A e_B` by writing out the generator word, bubble-sorting it while
/// counting transpositions, then cancelling adjacent pairs `e_i e_i = -1`.
pub fn oracle_blade_product(a: u32, b: u32, dim: usize) -> (f64, u32) {
    let mut word: Vec<usize> = (0..dim).filter(|j| a & (1 << j) != 0).collect();
    word.extend((0..dim).filter(|j| b & (1 << j) != 0));
    let mut swaps = 0usize;
    for end in (1..word.len()).rev() {
        for i in 0..end {
            if word[i] > word[i + 1] {
                word.swap(i, i + 1);
                swaps += 1;
            }
        }
    }
    let mut sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut mask = 0u32;
    let mut i = 0;
    while i < word.len() {
        if i + 1 < word.len() && word[i] == word[i + 1] {
            sign = -sign;
            i += 2;
        } else {
            mask |= 1 << word[i];
            i += 1;
        }
    }
    (sign, mask)
}

/// Number of blade pairs, over dimensions `1..=max_dim`, where the library
/// product differs from the oracle; also returns the pair count.
pub fn blade_oracle_mismatches(max_dim: usize) -> (usize, usize) {
    let mut mismatches = 0;
    let mut total = 0;
    for dim in 1..=max_dim {
        for a in 0..1u32 << dim {
            for b in 0..1u32 << dim {
                total += 1;
                let (sign, mask) = blade_product(
                    BladeMask::new(a, dim).expect("in range"),
                    BladeMask::new(b, dim).expect("in range"),
                )
                .expect("same dimension");
                if (sign, mask.bits()) != oracle_blade_product(a, b, dim) {
                    mismatches += 1;
                }
            }
        }
    }
    (mismatches, total)
}

fn random_multivector(rng: &mut ChaCha8Rng, dim: usize) -> Multivector {
    let coeffs = (0..1 << dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Multivector::from_coeffs(dim, coeffs).expect("coefficient count")
}

/// Largest residual of each identity over `samples` random pairs per
/// dimension `1..=max_dim`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InvolutionResiduals {
    pub main_involution_automorphism: f64,
    pub reversion_anti_automorphism: f64,
    pub conjugation_anti_automorphism: f64,
    pub hermitian_anti_automorphism: f64,
    pub involutivity: f64,
}

impl InvolutionResiduals {
    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("main_involution_automorphism", self.main_involution_automorphism),
            ("reversion_anti_automorphism", self.reversion_anti_automorphism),
            ("conjugation_anti_automorphism", self.conjugation_anti_automorphism),
            ("hermitian_anti_automorphism", self.hermitian_anti_automorphism),
            ("involutivity", self.involutivity),
        ]
    }
}

pub fn involution_residuals(max_dim: usize, samples: usize, seed: u64) -> InvolutionResiduals {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = InvolutionResiduals::default();
    let prod = |x: &Multivector, y: &Multivector| x.geometric_product(y).expect("same dimension");
    for dim in 1..=max_dim {
        for _ in 0..samples {
            let x = random_multivector(&mut rng, dim);
            let y = random_multivector(&mut rng, dim);
            let xy = prod(&x, &y);
            r.main_involution_automorphism = r.main_involution_automorphism.max(
                xy.main_involution()
                    .max_abs_diff(&prod(&x.main_involution(), &y.main_involution())),
            );
            r.reversion_anti_automorphism = r
                .reversion_anti_automorphism
                .max(xy.reversion().max_abs_diff(&prod(&y.reversion(), &x.reversion())));
            r.conjugation_anti_automorphism = r
                .conjugation_anti_automorphism
                .max(xy.conjugation().max_abs_diff(&prod(&y.conjugation(), &x.conjugation())));
            r.hermitian_anti_automorphism = r.hermitian_anti_automorphism.max(
                xy.hermitian_conjugation()
                    .max_abs_diff(&prod(&y.hermitian_conjugation(), &x.hermitian_conjugation())),
            );
            let twice = [
                x.main_involution().main_involution(),
                x.reversion().reversion(),
                x.conjugation().conjugation(),
                x.hermitian_conjugation().hermitian_conjugation(),
            ];
            for t in &twice {
                r.involutivity = r.involutivity.max(t.max_abs_diff(&x));
            }
        }
    }
    r
}
