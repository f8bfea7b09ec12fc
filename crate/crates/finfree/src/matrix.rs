//! Monte Carlo verification of the random-matrix forms of the convolutions:
//! expected characteristic polynomials under Haar-orthogonal conjugation,
//! compression to random subspaces, and rectangular addition.
//!
//! Machine floats suffice here (dimensions <= 8, benign conditioning).
//! Every target comes from the exact modules; the harness never compares
//! one stochastic estimate against another.

use crate::convolve::{boxplus, rect_boxplus};
use crate::poly::MonicPoly;
use crate::scalar::Scalar;
use crate::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Per-coefficient Monte Carlo statistics against an exact target.
#[derive(Clone, Debug, Serialize)]
pub struct CoeffStat {
    /// Index `k` of the coefficient of `x^{d-k}`.
    pub k: usize,
    pub mean: f64,
    pub std_error: f64,
    pub target: f64,
    pub z_score: f64,
}

/// Outcome of one Monte Carlo check.
#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub check: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    pub coeffs: Vec<CoeffStat>,
    pub max_abs_z: f64,
    /// True when every sampled coefficient was identical (deterministic
    /// identities must be detected exactly, not statistically).
    pub zero_variance: bool,
}

impl McReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Sample a Haar-distributed orthogonal matrix: QR of iid standard normals
/// with the sign fix that makes R's diagonal positive.
pub fn haar_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| standard_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..dim {
        if r[(i, i)] < 0.0 {
            for j in 0..dim {
                q[(j, i)] = -q[(j, i)];
            }
        }
    }
    q
}

/// Box–Muller on the raw stream; kept local so the sampling layout is
/// pinned by this crate rather than an external distribution crate.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Monic characteristic polynomial coefficients (descending powers) of a
/// square matrix: determinants of `x I - M` at the integer nodes
/// `x = -d/2 .. d/2`-ish, then exact Lagrange interpolation on that grid.
fn charpoly_coeffs(m: &DMatrix<f64>) -> Vec<f64> {
    let d = m.nrows();
    let nodes: Vec<f64> = (0..=d).map(|t| t as f64 - d as f64 / 2.0).collect();
    let vals: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let shifted = DMatrix::identity(d, d) * x - m;
            shifted.lu().determinant()
        })
        .collect();
    // Lagrange basis expansion: accumulate coefficients of prod (x - x_j)/w
    let mut coeffs = vec![0.0f64; d + 1];
    for (i, &xi) in nodes.iter().enumerate() {
        // numerator polynomial prod_{j != i} (x - x_j), ascending build
        let mut num = vec![0.0f64; d + 1];
        num[0] = 1.0;
        let mut deg = 0usize;
        let mut denom = 1.0f64;
        for (j, &xj) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            denom *= xi - xj;
            deg += 1;
            for k in (1..=deg).rev() {
                num[k] = num[k - 1] - xj * num[k];
            }
            num[0] *= -xj;
        }
        let scale = vals[i] / denom;
        for k in 0..=d {
            coeffs[k] += scale * num[k];
        }
    }
    // num was built ascending in a reversed sense; normalize to monic and
    // return descending powers
    coeffs.reverse();
    coeffs
}

struct Accumulator {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            count: 0,
            mean: vec![0.0; n],
            m2: vec![0.0; n],
        }
    }

    fn push(&mut self, xs: &[f64]) {
        self.count += 1;
        for (i, &x) in xs.iter().enumerate() {
            let delta = x - self.mean[i];
            self.mean[i] += delta / self.count as f64;
            self.m2[i] += delta * (x - self.mean[i]);
        }
    }

    fn finish(&self, targets: &[f64], check: &str, degree: usize, seed: u64) -> McReport {
        let n = self.count.max(1) as f64;
        let mut coeffs = Vec::new();
        let mut max_abs_z = 0.0f64;
        let mut zero_variance = true;
        for (i, (&mean, &target)) in self.mean.iter().zip(targets).enumerate() {
            let var = if self.count > 1 {
                self.m2[i] / (self.count - 1) as f64
            } else {
                0.0
            };
            if var != 0.0 {
                zero_variance = false;
            }
            let se = (var / n).sqrt();
            let z = if se > 0.0 {
                (mean - target) / se
            } else if (mean - target).abs() <= 1e-9 * (1.0 + target.abs()) {
                0.0
            } else {
                f64::INFINITY
            };
            max_abs_z = max_abs_z.max(z.abs());
            coeffs.push(CoeffStat {
                k: i + 1,
                mean,
                std_error: se,
                target,
                z_score: z,
            });
        }
        McReport {
            check: check.to_string(),
            degree,
            n: None,
            ell: None,
            samples: self.count,
            seed,
            coeffs,
            max_abs_z,
            zero_variance,
        }
    }
}

fn poly_to_f64(p: &MonicPoly) -> Vec<f64> {
    (1..=p.degree()).map(|k| p.coeff(k).to_f64()).collect()
}

fn diag_embed(spec: &[i64], rows: usize, cols: usize, sqrt: bool) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols);
    for (i, &s) in spec.iter().enumerate() {
        m[(i, i)] = if sqrt { (s as f64).sqrt() } else { s as f64 };
    }
    m
}

/// Sampled `det(x - (A + O^T B O))` against the exact convolution of the
/// characteristic polynomials, for symmetric `A`, `B` given by their
/// spectra.
pub fn mc_boxplus(
    spec_a: &[i64],
    spec_b: &[i64],
    samples: u64,
    seed: u64,
) -> Result<McReport> {
    let d = spec_a.len();
    if spec_b.len() != d {
        return Err(Error::DegreeMismatch(d, spec_b.len()));
    }
    let target_poly = boxplus(
        &MonicPoly::from_integer_roots(spec_a),
        &MonicPoly::from_integer_roots(spec_b),
    )?;
    let targets = poly_to_f64(&target_poly);
    let a = diag_embed(spec_a, d, d, false);
    let b = diag_embed(spec_b, d, d, false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Accumulator::new(d);
    for _ in 0..samples {
        let o = haar_orthogonal(d, &mut rng);
        let m = &a + o.transpose() * &b * &o;
        let cs = charpoly_coeffs(&m);
        acc.push(&cs[1..]);
    }
    let mut rep = acc.finish(&targets, "boxplus", d, seed);
    rep.n = None;
    Ok(rep)
}

/// Sampled `det(x - U A U^T)` for `U` the first `ell` rows of a Haar
/// orthogonal matrix, against the normalized derivative of `char(A)`.
pub fn mc_compression(
    spec: &[i64],
    ell: usize,
    samples: u64,
    seed: u64,
) -> Result<McReport> {
    let d = spec.len();
    if ell == 0 || ell >= d {
        return Err(Error::invalid("compression needs 1 <= ell < d"));
    }
    let target_poly = MonicPoly::from_integer_roots(spec).normalized_derivative(ell)?;
    let targets = poly_to_f64(&target_poly);
    let a = diag_embed(spec, d, d, false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Accumulator::new(ell);
    for _ in 0..samples {
        let o = haar_orthogonal(d, &mut rng);
        let u = o.rows(0, ell);
        let m = &u * &a * u.transpose();
        let cs = charpoly_coeffs(&m.into_owned());
        acc.push(&cs[1..]);
    }
    let mut rep = acc.finish(&targets, "compress", ell, seed);
    rep.ell = Some(ell);
    Ok(rep)
}

/// Sampled `det(x - [UAO][UAO]^T)` for `A` a `d x (d+n)` matrix with Gram
/// spectrum `gram_spec`, `U` the first `ell` rows of Haar(d), and `O` the
/// first `ell+n` columns of Haar(d+n); target is the normalized operator
/// power of `char(A A^T)`.
pub fn mc_rect_compression(
    gram_spec: &[i64],
    n: u32,
    ell: usize,
    samples: u64,
    seed: u64,
) -> Result<McReport> {
    let d = gram_spec.len();
    if ell == 0 || ell >= d {
        return Err(Error::invalid("rectangular compression needs 1 <= ell < d"));
    }
    if gram_spec.iter().any(|&s| s < 0) {
        return Err(Error::invalid("Gram spectrum must be nonnegative"));
    }
    let p = MonicPoly::from_integer_roots(gram_spec);
    let target_poly = p.apply_mn_power_normalized(&Scalar::from_int(n as i64), d - ell)?;
    let targets = poly_to_f64(&target_poly);
    let a = diag_embed(gram_spec, d, d + n as usize, true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Accumulator::new(ell);
    for _ in 0..samples {
        let hu = haar_orthogonal(d, &mut rng);
        let ho = haar_orthogonal(d + n as usize, &mut rng);
        let u = hu.rows(0, ell);
        let o = ho.columns(0, ell + n as usize);
        let c = &u * &a * &o;
        let m = &c * c.transpose();
        let cs = charpoly_coeffs(&m.into_owned());
        acc.push(&cs[1..]);
    }
    let mut rep = acc.finish(&targets, "rect-compress", ell, seed);
    rep.n = Some(n);
    rep.ell = Some(ell);
    Ok(rep)
}

/// Sampled `det(x - (A + U B O)^T (A + U B O))` for `(d+n) x d` matrices
/// with Gram spectra `ga`, `gb`, against the exact rectangular convolution.
pub fn mc_rect_boxplus(
    ga: &[i64],
    gb: &[i64],
    n: u32,
    samples: u64,
    seed: u64,
) -> Result<McReport> {
    let d = ga.len();
    if gb.len() != d {
        return Err(Error::DegreeMismatch(d, gb.len()));
    }
    if ga.iter().chain(gb).any(|&s| s < 0) {
        return Err(Error::invalid("Gram spectra must be nonnegative"));
    }
    let target_poly = rect_boxplus(
        &MonicPoly::from_integer_roots(ga),
        &MonicPoly::from_integer_roots(gb),
        &Scalar::from_int(n as i64),
    )?;
    let targets = poly_to_f64(&target_poly);
    let a = diag_embed(ga, d + n as usize, d, true);
    let b = diag_embed(gb, d + n as usize, d, true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Accumulator::new(d);
    for _ in 0..samples {
        let u = haar_orthogonal(d + n as usize, &mut rng);
        let o = haar_orthogonal(d, &mut rng);
        let s = &a + &u * &b * &o;
        let m = s.transpose() * &s;
        let cs = charpoly_coeffs(&m);
        acc.push(&cs[1..]);
    }
    let mut rep = acc.finish(&targets, "rect-boxplus", d, seed);
    rep.n = Some(n);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_orthogonality_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [1usize, 3, 6] {
            let o = haar_orthogonal(dim, &mut rng);
            let res = (o.transpose() * &o - DMatrix::<f64>::identity(dim, dim))
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(res < 1e-12, "dim={dim} residual={res}");
        }
        // dim = 1: +-1 with equal probability
        let mut plus = 0;
        for _ in 0..2000 {
            let o = haar_orthogonal(1, &mut rng);
            assert!((o[(0, 0)].abs() - 1.0).abs() < 1e-12);
            if o[(0, 0)] > 0.0 {
                plus += 1;
            }
        }
        assert!((plus as f64 - 1000.0).abs() < 150.0, "plus={plus}");
    }

    #[test]
    fn haar_column_isotropy() {
        // mean of O e_1 over many samples is 0 within 4 SE
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dim = 4;
        let n = 20_000;
        let mut sums = vec![0.0f64; dim];
        let mut sq = vec![0.0f64; dim];
        for _ in 0..n {
            let o = haar_orthogonal(dim, &mut rng);
            for i in 0..dim {
                sums[i] += o[(i, 0)];
                sq[i] += o[(i, 0)] * o[(i, 0)];
            }
        }
        for i in 0..dim {
            let mean = sums[i] / n as f64;
            let var = sq[i] / n as f64 - mean * mean;
            let se = (var / n as f64).sqrt();
            assert!(mean.abs() <= 4.0 * se, "component {i}: mean {mean}, se {se}");
        }
    }

    #[test]
    fn charpoly_interpolation_exact_on_diagonals() {
        let m = diag_embed(&[1, 2, 3, 4], 4, 4, false);
        let cs = charpoly_coeffs(&m);
        let p = MonicPoly::from_integer_roots(&[1, 2, 3, 4]);
        for k in 0..=4 {
            assert!(
                (cs[k] - p.coeff(k).to_f64()).abs() < 1e-9,
                "k={k}: {} vs {}",
                cs[k],
                p.coeff(k).to_f64()
            );
        }
    }

    #[test]
    fn zero_b_gives_zero_variance() {
        let rep = mc_boxplus(&[1, 2, 4], &[0, 0, 0], 200, 7).unwrap();
        assert!(rep.zero_variance, "samples must all equal char(A)");
        assert!(rep.max_abs_z == 0.0);
    }

    #[test]
    fn scalar_shift_is_deterministic_to_rounding() {
        // A = 2I: spectrum of A + O^T B O is spectrum of B shifted by 2.
        // The sampled matrices differ in their rounding, so the variance
        // sits at the f64 noise floor rather than at exactly zero.
        let rep = mc_boxplus(&[2, 2, 2], &[0, 1, 3], 200, 11).unwrap();
        for c in &rep.coeffs {
            assert!(
                c.std_error <= 1e-12 * (1.0 + c.target.abs()),
                "k={}: se {}",
                c.k,
                c.std_error
            );
            assert!(
                (c.mean - c.target).abs() <= 1e-12 * (1.0 + c.target.abs()),
                "k={}: mean {} target {}",
                c.k,
                c.mean,
                c.target
            );
        }
    }

    #[test]
    fn compression_small_case_matches_half_derivative() {
        // d=2, ell=1, A = diag(0,1): E det(x - U A U^T) = x - 1/2
        let rep = mc_compression(&[0, 1], 1, 30_000, 42).unwrap();
        assert_eq!(rep.coeffs.len(), 1);
        let c = &rep.coeffs[0];
        assert!((c.target + 0.5).abs() < 1e-12, "target {}", c.target);
        assert!(c.z_score.abs() <= 4.0, "z={}", c.z_score);
        assert!(mc_compression(&[0, 1], 2, 10, 1).is_err());
    }

    #[test]
    fn rect_compression_zero_matrix_and_reduction() {
        // A = 0: x^ell exactly
        let rep = mc_rect_compression(&[0, 0, 0], 2, 2, 50, 3).unwrap();
        assert!(rep.zero_variance);
        // n=0 coincides with symmetric-square compression at d=3, ell=2
        let rep0 = mc_rect_compression(&[1, 2, 4], 0, 2, 40_000, 9).unwrap();
        assert!(rep0.max_abs_z <= 4.0, "max z {}", rep0.max_abs_z);
    }

    #[test]
    fn rect_boxplus_b_zero_is_deterministic() {
        let rep = mc_rect_boxplus(&[1, 3], &[0, 0], 1, 100, 13).unwrap();
        assert!(rep.zero_variance);
        assert!(rep.max_abs_z == 0.0);
    }

    #[test]
    fn standard_errors_shrink_like_sqrt_samples() {
        let small = mc_boxplus(&[1, 2, 3, 4], &[0, 0, 1, 1], 20_000, 42).unwrap();
        let large = mc_boxplus(&[1, 2, 3, 4], &[0, 0, 1, 1], 80_000, 42).unwrap();
        for (s, l) in small.coeffs.iter().zip(&large.coeffs) {
            let ratio = 2.0 * l.std_error / s.std_error;
            assert!(
                (0.8..=1.2).contains(&ratio),
                "k={}: SE ratio {ratio}",
                s.k
            );
        }
    }

    #[test]
    fn report_json_shape() {
        let rep = mc_boxplus(&[1, 2], &[0, 1], 500, 17).unwrap();
        let s = rep.to_json();
        assert!(s.contains("\"check\": \"boxplus\""));
        assert!(s.contains("\"seed\": 17"));
    }
}
