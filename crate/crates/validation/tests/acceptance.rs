//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Run with
//! `cargo test -p cliffwave-validation --test acceptance`.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use cliffwave::cft;
use cliffwave::cwt::{daughter, inverse, transform_direct, transform_grid, ConstantMode, CwtQuadrature, MotherWavelet};
use cliffwave::testfn::TestFunction;
use cliffwave::uncertainty::{self, UncertaintyReport};
use cliffwave::{Domain, GridSpec, MVField, Multivector, Vector};
use cliffwave_cli::scenario::FunctionSpec;
use cliffwave_cli::{run_scenario, selftest, Scenario, EXIT_ASSERTION, EXIT_CONFIG, EXIT_OK};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const HALF_WIDTH: f64 = 8.0;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    fn details(mut self, lines: impl IntoIterator<Item = String>) -> Self {
        self.details.extend(lines);
        self
    }
}

fn grid(points: usize) -> GridSpec {
    GridSpec::new(2, points, HALF_WIDTH).unwrap()
}

fn documented_wavelet(grid: GridSpec) -> MotherWavelet {
    MotherWavelet::mexican_hat(grid)
        .unwrap()
        .calibrated(&CwtQuadrature::documented())
        .unwrap()
}

/// Coarse, intermediate, documented: scale range and count grow together.
fn refinement() -> [CwtQuadrature; 3] {
    [
        CwtQuadrature::new(0.5, 2.0, 8, 8).unwrap(),
        CwtQuadrature::new(0.25, 4.0, 16, 8).unwrap(),
        CwtQuadrature::documented(),
    ]
}

fn label(q: &CwtQuadrature) -> String {
    format!("[{}, {}]x{}x{}", q.scale_min, q.scale_max, q.scale_count, q.spin_count)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn non_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn component(r: &UncertaintyReport, name: &str) -> f64 {
    r.component(name).unwrap_or(f64::NAN)
}

fn algebra_oracle() -> Outcome {
    let (mismatches, pairs) = selftest::blade_oracle_mismatches(4);
    Outcome::new(
        mismatches == 0,
        format!("{mismatches} discrepancies over {pairs} blade pairs, n = 1..4"),
    )
}

fn involutions() -> Outcome {
    let r = selftest::involution_residuals(4, 1000, 2024);
    let worst = r.named().iter().map(|(_, v)| *v).fold(0.0, f64::max);
    Outcome::new(
        worst < 1e-12,
        format!("worst residual {worst:.3e} < 1e-12 (1000 pairs per n, n = 1..4)"),
    )
    .details(r.named().iter().map(|(name, v)| format!("{name}: {v:.3e}")))
}

fn fourier() -> Outcome {
    let grid = grid(128);
    let g = TestFunction::scalar_gaussian(2).unwrap().sample(&grid).unwrap();
    let expected = MVField::sample_in(grid, Domain::Frequency, |xi| {
        let r2 = xi.iter().map(|v| v * v).sum::<f64>();
        Multivector::scalar(2, (-r2 / 2.0).exp().into()).unwrap()
    });
    let fixed_point = cft::forward(&g).unwrap().relative_l2_error(&expected).unwrap();

    let mut roundtrip = 0.0f64;
    let mut plancherel = 0.0f64;
    for seed in 1..=8 {
        let f = TestFunction::random_band_limited(2, seed)
            .unwrap()
            .sample(&grid)
            .unwrap();
        let back = cft::inverse(&cft::forward(&f).unwrap()).unwrap();
        roundtrip = roundtrip.max(back.relative_l2_error(&f).unwrap());
        plancherel = plancherel.max((cft::plancherel_ratio(&f).unwrap().0 - 1.0).abs());
    }

    // narrow enough that the spectrum is negligible at the Nyquist frequency,
    // wide enough that the field is negligible at the box edge
    let width = (2.0 * HALF_WIDTH * HALF_WIDTH / (128.0 * PI)).sqrt();
    let coefficient = Multivector::parse(2, "0.7 - 0.2i e1 + 0.4 e2 + 0.9i e12").unwrap();
    let h = TestFunction::anisotropic_gaussian(2, &coefficient, &[width, width], &[0.0, 0.0]);
    let h_hat = cft::forward(&h.sample(&grid).unwrap()).unwrap();
    let mut derivative = 0.0f64;
    for k in 1..=2 {
        let lhs = cft::forward(&h.sample_partial(&grid, k).unwrap()).unwrap();
        let rhs = cft::derivative_multiplier(&h_hat, k).unwrap();
        derivative = derivative.max(lhs.relative_l2_error(&rhs).unwrap());
    }

    let pass = fixed_point < 1e-6 && roundtrip < 1e-10 && plancherel <= 1e-6 && derivative <= 1e-8;
    Outcome::new(
        pass,
        format!(
            "N=128: fixed point {fixed_point:.2e} < 1e-6, round trip {roundtrip:.2e} < 1e-10, \
             Plancherel {plancherel:.2e} <= 1e-6, derivative {derivative:.2e} <= 1e-8"
        ),
    )
}

fn admissibility() -> Outcome {
    let psi = MotherWavelet::mexican_hat(grid(128)).unwrap();
    let residual = psi.scalarness_residual();
    let exact = 4.0 * PI.powi(3);
    let a = psi.a_psi();
    let dev = rel(a, exact);
    Outcome::new(
        residual < 1e-10 && dev <= 0.01 && !psi.is_divergent(),
        format!("scalarness {residual:.2e} < 1e-10, A_psi = {a:.4} vs 4π³ = {exact:.4} (rel {dev:.2e} <= 1e-2)"),
    )
}

fn cwt_oracle() -> Outcome {
    let grid = grid(32);
    let psi = MotherWavelet::mexican_hat(grid).unwrap();
    let f = TestFunction::random_band_limited(2, 5).unwrap().sample(&grid).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst = 0.0f64;
    let mut b = vec![0.0; 2];
    for _ in 0..20 {
        // a single-node quadrature centred exactly on a random scale
        let a = (rng.gen_range((0.125f64).ln()..(8.0f64).ln())).exp();
        let spins = rng.gen_range(1..=8);
        let j = rng.gen_range(0..spins);
        let q = CwtQuadrature::new(a / 1.01, a * 1.01, 1, spins).unwrap();
        let atlas = transform_grid(&f, &psi, &q).unwrap();
        let p = rng.gen_range(0..grid.len());
        grid.coords(Domain::Space, p, &mut b);
        let slice = atlas.slice(0, j);
        let direct = transform_direct(
            &f,
            &psi,
            atlas.scales().nodes[0],
            &Vector::new(b.clone()),
            &atlas.spins()[j].0,
        )
        .unwrap();
        worst = worst.max(slice.value(p).max_abs_diff(&direct) / slice.max_abs());
    }
    Outcome::new(
        worst < 1e-8,
        format!("20 random (a, b, s), N=32: worst relative error {worst:.2e} < 1e-8"),
    )
}

fn isometry_and_reconstruction() -> Outcome {
    let grid = grid(128);
    let psi = documented_wavelet(grid);
    let c = psi.c_psi().unwrap();
    let quads = refinement();
    let one = Multivector::one(2).unwrap();
    let fields = vec![
        TestFunction::modulated_gaussian(2, &one, 3.0, &[0.8, 0.8]),
        TestFunction::random_band_pass(2, 1).unwrap(),
        TestFunction::random_band_pass(2, 2).unwrap(),
        TestFunction::random_band_pass(2, 3).unwrap(),
    ];
    let measure = |t: &TestFunction| -> (Vec<f64>, Vec<f64>) {
        let f = t.sample(&grid).unwrap();
        let mut iso = Vec::new();
        let mut rec = Vec::new();
        for q in &quads {
            let atlas = transform_grid(&f, &psi, q).unwrap();
            iso.push((atlas.weighted_norm_sqr() / (c * f.norm_sqr()) - 1.0).abs());
            let back = inverse(&atlas, &psi, ConstantMode::Calibrated).unwrap();
            rec.push(back.relative_l2_error(&f).unwrap());
        }
        (iso, rec)
    };
    let mut pass = true;
    let mut details = vec![format!(
        "C_psi = {c:.4} calibrated on {}; errors for {}, {}, {}",
        label(&quads[2]),
        label(&quads[0]),
        label(&quads[1]),
        label(&quads[2])
    )];
    let (mut worst_iso, mut worst_rec) = (0.0f64, 0.0f64);
    for t in &fields {
        let (iso, rec) = measure(t);
        let ok = iso[2] <= 0.05 && rec[2] < 0.02 && strictly_decreasing(&iso) && strictly_decreasing(&rec);
        pass &= ok;
        worst_iso = worst_iso.max(iso[2]);
        worst_rec = worst_rec.max(rec[2]);
        details.push(format!(
            "{}: isometry {iso:.4?}, reconstruction {rec:.4?}{}",
            t.name,
            if ok { "" } else { "  <- fails" }
        ));
    }
    // broadband: energy outside the scale band is not recoverable
    let g = TestFunction::scalar_gaussian(2).unwrap();
    let (iso, rec) = measure(&g);
    details.push(format!(
        "diagnostic, not asserted: {}: isometry {iso:.4?}, reconstruction {rec:.4?}",
        g.name
    ));
    Outcome::new(
        pass,
        format!(
            "band-pass fields, documented quadrature: isometry error {worst_iso:.2e} <= 0.05, \
             reconstruction {worst_rec:.2e} < 0.02, both strictly decreasing under refinement"
        ),
    )
    .details(details)
}

fn heisenberg() -> Outcome {
    let grid = grid(128);
    let g = TestFunction::scalar_gaussian(2).unwrap().sample(&grid).unwrap();
    let gaussian = (1..=2)
        .map(|k| uncertainty::heisenberg_fourier(&g, k).unwrap().ratio.unwrap())
        .fold(0.0f64, |w, r| w.max((r - 1.0).abs()));
    let mut min_ratio = f64::INFINITY;
    let mut count = 0;
    for seed in 1..=64 {
        let f = TestFunction::random_band_limited(2, seed)
            .unwrap()
            .sample(&grid)
            .unwrap();
        for k in 1..=2 {
            min_ratio = min_ratio.min(uncertainty::heisenberg_fourier(&f, k).unwrap().ratio.unwrap());
            count += 1;
        }
    }
    Outcome::new(
        gaussian < 1e-3 && min_ratio >= 1.0 - 1e-6,
        format!(
            "Gaussian |ratio - 1| = {gaussian:.2e} < 1e-3; {count} random band-limited cases (64 fields, k = 1, 2), \
             min ratio {min_ratio:.6} >= 1 - 1e-6"
        ),
    )
}

fn banouh() -> Outcome {
    let grid = grid(128);
    let psi = documented_wavelet(grid);
    let quads = refinement();
    let gaussian = TestFunction::scalar_gaussian(2).unwrap();
    let fields = vec![
        gaussian.clone(),
        gaussian.translated(&[1.0, -0.5]),
        TestFunction::random_band_limited(2, 1).unwrap(),
        TestFunction::random_band_limited(2, 2).unwrap(),
        TestFunction::random_band_pass(2, 1).unwrap(),
    ];
    let mut pass = true;
    let mut min_ratio = f64::INFINITY;
    let mut details = Vec::new();
    for t in &fields {
        let f = t.sample(&grid).unwrap();
        let mut ratios = Vec::new();
        let mut calibrated = 0.0;
        for q in &quads {
            let atlas = transform_grid(&f, &psi, q).unwrap();
            let r = uncertainty::banouh_bound(&f, &psi, &atlas, 1).unwrap();
            ratios.push(r.ratio.unwrap());
            calibrated = component(&r, "ratio_calibrated");
        }
        let ok = ratios[2] >= 0.95 && non_decreasing(&ratios);
        pass &= ok;
        min_ratio = min_ratio.min(ratios[2]);
        details.push(format!(
            "{}: ratio {ratios:.4?}; against ½√C_psi‖f‖² {calibrated:.4}{}",
            t.name,
            if ok { "" } else { "  <- fails" }
        ));
    }
    Outcome::new(
        pass,
        format!("min ratio {min_ratio:.4} under the documented quadrature, required >= 0.95 and non-decreasing"),
    )
    .details(details)
}

/// `acc[A⊕B] += w σ(A,B) d_A c_B` pointwise, using the transposition-count
/// oracle for σ.
fn accumulate_product(acc: &mut [Vec<Complex64>], d: &MVField, c: &Multivector, w: f64) {
    let dim = c.dim();
    for (a, da) in d.channels().iter().enumerate() {
        if da.iter().all(|v| *v == ZERO) {
            continue;
        }
        for (b, cb) in c.coeffs().iter().enumerate() {
            if *cb == ZERO {
                continue;
            }
            let (sign, mask) = selftest::oracle_blade_product(a as u32, b as u32, dim);
            let factor = cb * (sign * w);
            for (o, v) in acc[mask as usize].iter_mut().zip(da) {
                *o += v * factor;
            }
        }
    }
}

struct OracleSums {
    spread_sq: f64,
    f1: Vec<Vec<Complex64>>,
    f2: Vec<Vec<Complex64>>,
}

impl OracleSums {
    fn zero(channels: usize, len: usize) -> Self {
        Self {
            spread_sq: 0.0,
            f1: vec![vec![ZERO; len]; channels],
            f2: vec![vec![ZERO; len]; channels],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.spread_sq += other.spread_sq;
        for (acc, add) in [(&mut self.f1, &other.f1), (&mut self.f2, &other.f2)] {
            for (x, y) in acc.iter_mut().zip(add) {
                x.iter_mut().zip(y).for_each(|(u, v)| *u += v);
            }
        }
        self
    }
}

/// `‖ξ₁ F[f]‖` by a direct sum over the grid, no FFT.
fn naive_frequency_moment(f: &MVField) -> f64 {
    let grid = *f.grid();
    let n = grid.points;
    let h = grid.spacing();
    let xs = grid.axis_nodes(Domain::Space);
    let xis = grid.axis_nodes(Domain::Frequency);
    let kernel: Vec<Vec<Complex64>> = xis
        .iter()
        .map(|xi| xs.iter().map(|x| Complex64::from_polar(1.0, -x * xi)).collect())
        .collect();
    let norm = h * h / (2.0 * PI);
    let mut total = 0.0;
    for ch in f.channels() {
        if ch.iter().all(|v| *v == ZERO) {
            continue;
        }
        // axis 0 varies slowest: ch[j0 * n + j1]
        let mut partial = vec![ZERO; n * n];
        for j0 in 0..n {
            for m1 in 0..n {
                partial[j0 * n + m1] = (0..n).map(|j1| kernel[m1][j1] * ch[j0 * n + j1]).sum();
            }
        }
        for m0 in 0..n {
            for m1 in 0..n {
                let v: Complex64 = (0..n)
                    .map(|j0| kernel[m0][j0] * partial[j0 * n + m1])
                    .sum::<Complex64>()
                    * norm;
                total += xis[m0] * xis[m0] * v.norm_sqr();
            }
        }
    }
    (total * grid.cell_volume(Domain::Frequency)).sqrt()
}

fn sharp_oracle_agreement() -> (bool, String, Vec<String>) {
    let grid = grid(32);
    let psi = documented_wavelet(grid);
    let q = CwtQuadrature::documented();
    let t = TestFunction::gaussian(2, &Multivector::parse(2, "1 + 0.5 e1 - 0.25i e12").unwrap());
    let f = t.sample(&grid).unwrap();
    let df = t.sample_partial(&grid, 1).unwrap();
    let atlas = transform_grid(&f, &psi, &q).unwrap();
    let report = uncertainty::sharp_bound(&f, &psi, &atlas, 1).unwrap();

    // every slice and every translation b by direct quadrature, with the
    // b-derivative taken analytically through the analysed field
    let h2 = grid.cell_volume(Domain::Space);
    let delta = (q.scale_max / q.scale_min).ln() / q.scale_count as f64;
    let spins = atlas.spins().to_vec();
    let nodes: Vec<(usize, usize)> = (0..q.scale_count)
        .flat_map(|i| (0..spins.len()).map(move |j| (i, j)))
        .collect();
    let sums = nodes
        .par_iter()
        .map(|&(i, j)| {
            let a = q.scale_min * ((i as f64 + 0.5) * delta).exp();
            let w = delta / (a * a) / spins.len() as f64;
            let mut acc = OracleSums::zero(grid.channel_count(), grid.len());
            let mut b = vec![0.0; 2];
            for p in 0..grid.len() {
                grid.coords(Domain::Space, p, &mut b);
                let d = daughter(&psi, a, &Vector::new(b.clone()), &spins[j].0).unwrap();
                let coef = d.inner_product(&f).unwrap();
                let dcoef = d.inner_product(&df).unwrap();
                let bcoef = coef.scale_real(b[0]);
                acc.spread_sq += w * h2 * bcoef.norm_sqr();
                accumulate_product(&mut acc.f1, &d, &dcoef, w * h2);
                accumulate_product(&mut acc.f2, &d, &bcoef, w * h2);
            }
            acc
        })
        .reduce(|| OracleSums::zero(grid.channel_count(), grid.len()), OracleSums::merge);

    let a_psi = psi.a_psi();
    let to_field = |ch: Vec<Vec<Complex64>>| {
        let ch = ch
            .into_iter()
            .map(|c| c.into_iter().map(|v| v / a_psi).collect())
            .collect();
        MVField::from_channels(grid, Domain::Space, ch).unwrap()
    };
    let f1 = to_field(sums.f1);
    let f2 = to_field(sums.f2);
    let bracket = f1.inner_product(&f2).unwrap();
    let spread = sums.spread_sq.sqrt();
    let xi_norm = naive_frequency_moment(&f);
    let norm_sq: f64 = f.channels().iter().flatten().map(|v| v.norm_sqr()).sum::<f64>() * h2;
    let lhs = spread * xi_norm;
    let rhs = (8.0 * PI * PI * a_psi).sqrt() * (norm_sq + 2.0 * bracket.magnitude());

    let checks = [
        ("coefficient_spread", component(&report, "coefficient_spread"), spread),
        ("norm_xik_fhat", component(&report, "norm_xik_fhat"), xi_norm),
        ("norm_f_sq", component(&report, "norm_f_sq"), norm_sq),
        (
            "f1_f2_magnitude",
            component(&report, "f1_f2_magnitude"),
            bracket.magnitude(),
        ),
        ("norm_f1", component(&report, "norm_f1"), f1.norm_sqr().sqrt()),
        ("norm_f2", component(&report, "norm_f2"), f2.norm_sqr().sqrt()),
        ("lhs", report.lhs, lhs),
        ("rhs", report.rhs, rhs),
        ("ratio", report.ratio.unwrap_or(f64::NAN), lhs / rhs),
    ];
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for (name, fast, oracle) in checks {
        let e = rel(fast, oracle);
        worst = worst.max(e);
        details.push(format!(
            "(a) {name}: fast {fast:.10e}, oracle {oracle:.10e}, rel {e:.2e}"
        ));
    }
    // the scalar part can vanish; compare it on the bracket's scale
    let scalar_err = (component(&report, "f1_f2_scalar") - bracket.scalar_part().re).abs() / bracket.magnitude();
    worst = worst.max(scalar_err);
    details.push(format!(
        "(a) f1_f2_scalar: error {scalar_err:.2e} relative to |<f1, f2>|"
    ));
    (worst <= 1e-6, format!("(a) oracle {worst:.2e} <= 1e-6"), details)
}

fn sharp_bound_properties() -> Outcome {
    let (oracle_ok, oracle_summary, mut details) = sharp_oracle_agreement();

    let grid128 = grid(128);
    let psi = documented_wavelet(grid128);
    let f = TestFunction::scalar_gaussian(2).unwrap().sample(&grid128).unwrap();
    let atlas = transform_grid(&f, &psi, &CwtQuadrature::documented()).unwrap();
    let report = uncertainty::sharp_bound(&f, &psi, &atlas, 1).unwrap();
    let cross = component(&report, "f1_f2_cross_check_error");
    details.push(format!(
        "(b) gaussian N=128: <f1, f2> calibrated {:.6e}, atlas side {:.6e}",
        component(&report, "f1_f2_calibrated_magnitude"),
        component(&report, "f1_f2_atlas_side_magnitude")
    ));
    details.push(format!(
        "report only: lhs {:.6}, rhs {:.6}, ratio {:.6}",
        report.lhs,
        report.rhs,
        report.ratio.unwrap_or(f64::NAN)
    ));

    let grid32 = grid(32);
    let psi32 = documented_wavelet(grid32);
    let g = TestFunction::random_band_limited(2, 9)
        .unwrap()
        .sample(&grid32)
        .unwrap();
    let emit = || {
        let atlas = transform_grid(&g, &psi32, &CwtQuadrature::documented()).unwrap();
        serde_json::to_string(&uncertainty::sharp_bound(&g, &psi32, &atlas, 1).unwrap()).unwrap()
    };
    let (first, second) = (emit(), emit());
    let deterministic = first == second && first.contains("\"components\"");

    Outcome::new(
        oracle_ok && cross < 0.02 && deterministic,
        format!(
            "{oracle_summary}; (b) cross-check {cross:.2e} < 0.02; (c) report JSON identical across runs: {deterministic}"
        ),
    )
    .details(details)
}

fn proof_identities() -> Outcome {
    let grid = grid(128);
    let psi = documented_wavelet(grid);
    let f = TestFunction::scalar_gaussian(2).unwrap().sample(&grid).unwrap();
    let quads = refinement();
    let mut dev1 = Vec::new();
    let mut dev2 = Vec::new();
    let mut details = Vec::new();
    let mut offset = (f64::NAN, f64::NAN);
    let mut a_psi_ratios = (f64::NAN, f64::NAN);
    for q in &quads {
        let atlas = transform_grid(&f, &psi, q).unwrap();
        let cal = uncertainty::proof_identities_check(&f, &psi, &atlas, 1, ConstantMode::Calibrated, 0.05).unwrap();
        let nominal =
            uncertainty::proof_identities_check(&f, &psi, &atlas, 1, ConstantMode::Admissibility, 0.05).unwrap();
        let r1 = component(&cal, "identity1_ratio_calibrated");
        let r2 = component(&cal, "identity2_ratio_calibrated");
        dev1.push((r1 - 1.0).abs());
        dev2.push((r2 - 1.0).abs());
        let a_over_c = component(&nominal, "a_over_c");
        offset = (a_over_c, a_over_c / (2.0 * PI));
        a_psi_ratios = (
            component(&nominal, "identity1_ratio_a_psi"),
            component(&nominal, "identity2_ratio_a_psi"),
        );
        details.push(format!(
            "{}: identity 1 ratio {r1:.4}, identity 2 ratio {r2:.4}, identity 1 without (2π)^-n {:.4}",
            label(q),
            component(&cal, "identity1_unscaled_ratio_calibrated")
        ));
    }
    details.push(format!(
        "constant A_psi, report only: offset A_psi/C_psi = {:.4} = {:.4} x 2π; identity ratios at {}: {:.4}, {:.4}",
        offset.0,
        offset.1,
        label(&quads[2]),
        a_psi_ratios.0,
        a_psi_ratios.1
    ));
    let pass = dev1[2] <= 0.05 && dev2[2] <= 0.05 && strictly_decreasing(&dev1) && strictly_decreasing(&dev2);
    Outcome::new(
        pass,
        format!(
            "calibrated constant, documented quadrature: |identity 1 - 1| = {:.3e}, |identity 2 - 1| = {:.3e}, \
             required <= 0.05 and decreasing",
            dev1[2], dev2[2]
        ),
    )
    .details(details)
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn cli_determinism() -> Outcome {
    let mut s = Scenario::default_for(2);
    s.name = "acceptance".into();
    s.seed = 7;
    s.grid.points = 32;
    s.quadrature = CwtQuadrature::new(0.25, 4.0, 6, 3).unwrap();
    s.tolerances.algebra_samples = 200;
    s.tolerances.oracle_samples = 5;
    s.suite = vec![
        FunctionSpec::named("gaussian"),
        FunctionSpec {
            count: Some(2),
            ..FunctionSpec::named("random_band_limited")
        },
    ];
    let first = run_scenario(&s).unwrap();
    let second = run_scenario(&s).unwrap();
    let identical = first.payload_json() == second.payload_json();
    let reparsed = cliffwave_cli::RunReport::from_json(&first.to_json())
        .unwrap()
        .payload_json()
        == first.payload_json();

    let forced = run_scenario(&Scenario::load(&scenarios_dir().join("forced_failure.toml")).unwrap()).unwrap();
    let forced_ok = forced.exit_code() == EXIT_ASSERTION
        && forced.summary.failed_checks == ["cwt_roundtrip.isometry[random_band_pass[1]]"];
    let minimal = run_scenario(&Scenario::load(&scenarios_dir().join("minimal.toml")).unwrap()).unwrap();
    let minimal_ok = minimal.exit_code() == EXIT_OK;
    let config_code = Scenario::from_toml("schema = \"other/1\"\ndim = 2\n[grid]\npoints = 32\nhalf_width = 8.0\n")
        .map(|_| EXIT_OK)
        .unwrap_or_else(|e| e.exit_code());

    Outcome::new(
        identical && reparsed && forced_ok && minimal_ok && config_code == EXIT_CONFIG,
        format!(
            "{} checks byte-identical across runs: {identical}; JSON round trip: {reparsed}; \
             exit codes forced failure/minimal/bad schema = {}/{}/{config_code}",
            first.checks.len(),
            forced.exit_code(),
            minimal.exit_code()
        ),
    )
    .detail(format!("forced failure names {:?}", forced.summary.failed_checks))
    .detail(format!(
        "suite run: {} passed, {} failed, {} report-only",
        first.summary.passed, first.summary.failed, first.summary.report_only
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("algebra oracle equivalence", algebra_oracle),
        ("involution identities", involutions),
        ("Clifford-Fourier transform", fourier),
        ("admissibility", admissibility),
        ("CWT oracle equivalence", cwt_oracle),
        ("isometry and reconstruction", isometry_and_reconstruction),
        ("Heisenberg-Fourier corollary", heisenberg),
        ("wavelet spread bound", banouh),
        ("sharp bound properties", sharp_bound_properties),
        ("proof identities", proof_identities),
        ("CLI determinism and exit codes", cli_determinism),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} [{:>2}] {name}: {} ({:.1}s)",
            i + 1,
            outcome.summary,
            t.elapsed().as_secs_f64()
        );
        for d in &outcome.details {
            println!("          {d}");
        }
        if !outcome.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s{}",
        criteria.len() - failed.len(),
        criteria.len(),
        start.elapsed().as_secs_f64(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(", failed: {failed:?}")
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
