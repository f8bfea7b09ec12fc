//! Atomic measures on the real line, reference limit laws with closed-form
//! CDFs, Kolmogorov–Smirnov distances, and analytic transform evaluation.
//!
//! Everything downstream of root extraction lives in f64: atom locations
//! keep their BigFloat values, but distribution functions, distances and
//! transforms are ordinary doubles (the gates they feed are no tighter
//! than 1e-10).

use crate::appell::RadonAtoms;
use crate::bigfloat::BigFloat;
use crate::poly::MonicPoly;
use crate::roots::{find_roots, RootSolveConfig};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Weighted atoms, sorted by location. Empirical root measures have equal
/// weights `1/d` and total mass 1.
#[derive(Clone, Debug)]
pub struct AtomicMeasure {
    atoms: Vec<(BigFloat, f64)>,
}

impl AtomicMeasure {
    /// Build from unsorted atoms; sorts and merges exactly equal locations,
    /// dropping zero weights.
    pub fn new(mut atoms: Vec<(BigFloat, f64)>) -> Self {
        atoms.sort_by(|a, b| a.0.cmp_value(&b.0));
        let mut merged: Vec<(BigFloat, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            if w == 0.0 {
                continue;
            }
            assert!(w > 0.0, "atom weights must be positive");
            if let Some(last) = merged.last_mut() {
                if last.0 == x {
                    last.1 += w;
                    continue;
                }
            }
            merged.push((x, w));
        }
        AtomicMeasure { atoms: merged }
    }

    pub fn atoms(&self) -> &[(BigFloat, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// j-th moment, in f64.
    pub fn moment(&self, j: u32) -> f64 {
        self.atoms
            .iter()
            .map(|(x, w)| w * x.to_f64().powi(j as i32))
            .sum()
    }

    /// Mass inside the closed window `[lo, hi]`.
    pub fn window_mass(&self, lo: f64, hi: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|(x, _)| {
                let v = x.to_f64();
                v >= lo && v <= hi
            })
            .map(|(_, w)| w)
            .sum()
    }

    pub fn is_symmetric_f64(&self, tol: f64) -> bool {
        let n = self.atoms.len();
        for k in 0..n {
            let (x, w) = (&self.atoms[k].0, self.atoms[k].1);
            let (y, v) = (&self.atoms[n - 1 - k].0, self.atoms[n - 1 - k].1);
            if (x.to_f64() + y.to_f64()).abs() > tol || (w - v).abs() > tol {
                return false;
            }
        }
        true
    }
}

/// Empirical root measure: equal weights `1/d` on the given roots.
pub fn erm(roots: &[BigFloat]) -> AtomicMeasure {
    let w = 1.0 / roots.len() as f64;
    AtomicMeasure::new(roots.iter().map(|r| (r.clone(), w)).collect())
}

/// Convenience: solve for the roots of `p` and return its empirical root
/// measure.
pub fn erm_of(p: &MonicPoly, cfg: &RootSolveConfig) -> Result<AtomicMeasure> {
    Ok(erm(&find_roots(p, cfg)?.roots))
}

/// Push-forward by `t -> alpha t`.
pub fn dilate_measure(mu: &AtomicMeasure, alpha: &BigFloat) -> AtomicMeasure {
    AtomicMeasure::new(
        mu.atoms
            .iter()
            .map(|(x, w)| (x.mul(alpha), *w))
            .collect(),
    )
}

/// Symmetrized square root: each atom `(x, w)` with `x >= 0` becomes
/// `(sqrt x, w/2)` and `(-sqrt x, w/2)` (a zero atom keeps its mass).
pub fn sqrt_symmetrize(mu: &AtomicMeasure) -> Result<AtomicMeasure> {
    let mut out = Vec::with_capacity(2 * mu.atoms.len());
    for (x, w) in &mu.atoms {
        if x.is_negative() {
            return Err(Error::invalid(
                "sqrt symmetrization needs nonnegative atom locations",
            ));
        }
        if x.is_zero() {
            out.push((x.clone(), *w));
        } else {
            let s = x.sqrt().expect("nonnegative");
            out.push((s.neg(), w / 2.0));
            out.push((s, w / 2.0));
        }
    }
    Ok(AtomicMeasure::new(out))
}

/// Push-forward by `t -> t^2` (inverse direction of [`sqrt_symmetrize`]).
pub fn square_pushforward(mu: &AtomicMeasure) -> AtomicMeasure {
    AtomicMeasure::new(
        mu.atoms
            .iter()
            .map(|(x, w)| (x.mul(x), *w))
            .collect(),
    )
}

/// Reweight atoms `(x, w) -> (x, d x^2 w)`: the finite point-process
/// measure whose windows converge to the limiting `G_f` atoms.
pub fn radon_t2(mu: &AtomicMeasure, d: usize) -> RadonAtoms {
    let atoms = mu
        .atoms
        .iter()
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, w)| {
            let m = d as f64 * x.to_f64().powi(2) * w;
            (Scalar::Real(x.clone()), Scalar::real_from_f64(m, 64))
        })
        .collect();
    RadonAtoms { atoms }
}

/// Reweight atoms `(x, w) -> (x, d x w)` (rectangular analog).
pub fn radon_t(mu: &AtomicMeasure, d: usize) -> RadonAtoms {
    let atoms = mu
        .atoms
        .iter()
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, w)| {
            let m = d as f64 * x.to_f64() * w;
            (Scalar::Real(x.clone()), Scalar::real_from_f64(m, 64))
        })
        .collect();
    RadonAtoms { atoms }
}

/// Total mass of a reweighted atom list, in f64.
pub fn radon_total_mass(atoms: &RadonAtoms) -> f64 {
    atoms
        .atoms
        .iter()
        .map(|(_, w)| w.to_f64())
        .sum()
}

/// Mass of a reweighted atom list inside `[lo, hi]`.
pub fn radon_window_mass(atoms: &RadonAtoms, lo: f64, hi: f64) -> f64 {
    atoms
        .atoms
        .iter()
        .filter(|(x, _)| {
            let v = x.to_f64();
            v >= lo && v <= hi
        })
        .map(|(_, w)| w.to_f64())
        .sum()
}

// ---------------------------------------------------------------------------
// Reference laws
// ---------------------------------------------------------------------------

/// Closed-form limit laws with CDFs (and transforms where defined).
#[derive(Clone, Debug)]
pub enum ReferenceLaw {
    /// Standard semicircle on [-2, 2].
    Semicircle,
    /// Free-Poisson-type law with rate `c >= 1` scaled by `a`:
    /// density `sqrt(4c - (x/a - 1 - c)^2) / (2 pi x/a)` pushed by `t -> at`.
    MarchenkoPastur { rate: f64, scale: f64 },
    /// Standard Cauchy.
    Cauchy,
    /// Symmetric law whose square is the rate-`1/lambda` law scaled by
    /// `lambda` (the rectangular Gaussian with ratio `lambda`).
    RectGaussian { lambda: f64 },
    /// Free infinitely divisible law given by drift, Gaussian part and a
    /// finite atomic jump measure `nu`.
    FreeIdAtomic {
        gamma: f64,
        sigma2: f64,
        nu: Vec<(f64, f64)>,
    },
    /// Rectangular infinitely divisible law given by ratio and the atomic
    /// measure in its transform representation.
    RectIdAtomic { lambda: f64, g: Vec<(f64, f64)> },
}

impl ReferenceLaw {
    pub fn mp(rate: f64) -> Self {
        ReferenceLaw::MarchenkoPastur { rate, scale: 1.0 }
    }

    /// CDF where a closed form exists; errors otherwise.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        match self {
            ReferenceLaw::Semicircle => Ok(semicircle_cdf(x, 0.0, 1.0)),
            ReferenceLaw::MarchenkoPastur { rate, scale } => Ok(mp_cdf(x / scale, *rate)),
            ReferenceLaw::Cauchy => Ok(0.5 + x.atan() / std::f64::consts::PI),
            ReferenceLaw::RectGaussian { lambda } => Ok(rect_gaussian_cdf(x, *lambda)),
            ReferenceLaw::FreeIdAtomic { gamma, sigma2, nu } => {
                // reducible cases only: pure Gaussian part, or a pure
                // single-atom jump part (shifted/scaled free Poisson)
                if nu.is_empty() && *sigma2 > 0.0 {
                    return Ok(semicircle_cdf(x, *gamma, sigma2.sqrt()));
                }
                if *sigma2 == 0.0 && nu.len() == 1 {
                    let (t, w) = nu[0];
                    // R(z) = gamma + w (z+t) t^2 / ((1-zt)(t^2+1)); the
                    // affine free Poisson has gamma0 = w t/(1+t^2), so the
                    // residual drift is a plain shift
                    let shift = gamma - w * t / (1.0 + t * t);
                    return Ok(mp_cdf((x - shift) / t, w));
                }
                Err(Error::Unsupported(
                    "no closed-form CDF for a mixed free-ID law".into(),
                ))
            }
            ReferenceLaw::RectIdAtomic { lambda, g } => {
                if g.len() == 1 && g[0].0 == 0.0 {
                    let sigma = g[0].1.sqrt();
                    return Ok(rect_gaussian_cdf(x / sigma, *lambda));
                }
                Err(Error::Unsupported(
                    "no closed-form CDF for a mixed rectangular-ID law".into(),
                ))
            }
        }
    }
}

/// Semicircle CDF with mean `c` and variance `s^2` (support `[c-2s, c+2s]`).
fn semicircle_cdf(x: f64, c: f64, s: f64) -> f64 {
    let u = (x - c) / s;
    if u <= -2.0 {
        0.0
    } else if u >= 2.0 {
        1.0
    } else {
        0.5 + (u * (4.0 - u * u).sqrt()) / (4.0 * std::f64::consts::PI)
            + (u / 2.0).asin() / std::f64::consts::PI
    }
}

/// CDF of the rate-`c` law (`c >= 1`) with density
/// `sqrt(4c - (x-1-c)^2) / (2 pi x)` on `[(1-sqrt c)^2, (1+sqrt c)^2]`.
fn mp_cdf(x: f64, c: f64) -> f64 {
    let sc = c.sqrt();
    let a = (1.0 - sc) * (1.0 - sc);
    let b = (1.0 + sc) * (1.0 + sc);
    if x <= a {
        return 0.0;
    }
    if x >= b {
        return 1.0;
    }
    let pi = std::f64::consts::PI;
    // antiderivative of sqrt((x-a)(b-x))/x, fixed so the edges map to 0 / 1
    let r = ((x - a) * (b - x)).max(0.0).sqrt();
    let asin1 = ((2.0 * x - a - b) / (b - a)).clamp(-1.0, 1.0).asin();
    let sab = (a * b).max(0.0).sqrt(); // = |1 - c|
    let asin2 = if x > 0.0 {
        (((a + b) * x - 2.0 * a * b) / (x * (b - a))).clamp(-1.0, 1.0).asin()
    } else {
        -std::f64::consts::FRAC_PI_2
    };
    let val = r + (a + b) / 2.0 * asin1 - sab * asin2;
    // at x = a the bracket evaluates to -(pi/2)(a+b) + sab pi/2... fold the
    // constant so F(a) = 0
    let at_a = -(a + b) / 2.0 * std::f64::consts::FRAC_PI_2 + sab * std::f64::consts::FRAC_PI_2;
    ((val - at_a) / (2.0 * pi)).clamp(0.0, 1.0)
}

/// Rectangular Gaussian CDF via its squared law.
fn rect_gaussian_cdf(x: f64, lambda: f64) -> f64 {
    // square pushforward is the rate-1/lambda law scaled by lambda
    let fsq = |y: f64| -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            mp_cdf(y / lambda, 1.0 / lambda)
        }
    };
    if x >= 0.0 {
        0.5 + 0.5 * fsq(x * x)
    } else {
        0.5 - 0.5 * fsq(x * x)
    }
}

// ---------------------------------------------------------------------------
// Kolmogorov–Smirnov distances
// ---------------------------------------------------------------------------

/// KS distance between an atomic measure and a reference law: the sup of
/// `|F_emp - F|` over atom locations, evaluated one-sided on each side of
/// every atom.
pub fn kolmogorov_distance(mu: &AtomicMeasure, law: &ReferenceLaw) -> Result<f64> {
    let mut best: f64 = 0.0;
    let mut cum = 0.0;
    for (x, w) in &mu.atoms {
        let f = law.cdf(x.to_f64())?;
        best = best.max((f - cum).abs());
        cum += w;
        best = best.max((f - cum).abs());
    }
    Ok(best)
}

/// KS distance between two atomic measures (sup over the union of atoms,
/// one-sided on both sides).
pub fn ks_atomic(mu: &AtomicMeasure, nu: &AtomicMeasure) -> f64 {
    let mut grid: Vec<f64> = mu
        .atoms
        .iter()
        .chain(nu.atoms.iter())
        .map(|(x, _)| x.to_f64())
        .collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    let cdf_at = |m: &AtomicMeasure, t: f64, strict: bool| -> f64 {
        m.atoms
            .iter()
            .take_while(|(x, _)| {
                let v = x.to_f64();
                if strict {
                    v < t
                } else {
                    v <= t
                }
            })
            .map(|(_, w)| w)
            .sum()
    };
    let mut best: f64 = 0.0;
    for &t in &grid {
        best = best.max((cdf_at(mu, t, false) - cdf_at(nu, t, false)).abs());
        best = best.max((cdf_at(mu, t, true) - cdf_at(nu, t, true)).abs());
    }
    best
}

// ---------------------------------------------------------------------------
// Transform evaluation for atomic ID data
// ---------------------------------------------------------------------------

/// Transform of a free-ID law at `z`:
/// `gamma + sigma^2 z + sum_t w (z+t)/(1-zt) * t^2/(t^2+1)`.
pub fn r_transform_eval(gamma: f64, sigma2: f64, nu: &[(f64, f64)], z: f64) -> Result<f64> {
    let mut acc = gamma + sigma2 * z;
    for &(t, w) in nu {
        let den = 1.0 - z * t;
        if den.abs() < 1e-12 {
            return Err(Error::invalid(format!(
                "evaluation point {z} too close to the pole 1/{t}"
            )));
        }
        acc += w * (z + t) / den * t * t / (t * t + 1.0);
    }
    Ok(acc)
}

/// Transform of a rectangular-ID law at `z`:
/// `z * sum_t w (t^2+1)/(1 - z t^2)`.
pub fn c_transform_eval(g: &[(f64, f64)], z: f64) -> Result<f64> {
    let mut acc = 0.0;
    for &(t, w) in g {
        let den = 1.0 - z * t * t;
        if den.abs() < 1e-12 {
            return Err(Error::invalid(format!(
                "evaluation point {z} too close to the pole 1/{}",
                t * t
            )));
        }
        acc += w * (t * t + 1.0) / den;
    }
    Ok(z * acc)
}

/// Numeric rectangular transform of a symmetric atomic measure at a small
/// negative real `z`: `M(z) = sum w z t^2/(1 - t^2 z)` as a finite sum,
/// `H(z) = z (lambda M + 1)(M + 1)` inverted by bisection on a bracketed
/// interval, and `U(y) = (-lambda-1+sqrt((lambda+1)^2+4 lambda y))/(2 lambda)`.
pub fn rect_c_numeric(mu: &AtomicMeasure, lambda: f64, z: f64) -> Result<f64> {
    if !(z < 0.0) {
        return Err(Error::invalid("transform point must be a negative real"));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::invalid("ratio must satisfy 0 < lambda <= 1"));
    }
    if !mu.is_symmetric_f64(1e-9) {
        return Err(Error::invalid("measure must be symmetric"));
    }
    let msum = |x: f64| -> f64 {
        mu.atoms
            .iter()
            .map(|(t, w)| {
                let t2 = t.to_f64().powi(2);
                w * x * t2 / (1.0 - t2 * x)
            })
            .sum()
    };
    let h = |x: f64| -> f64 {
        let m = msum(x);
        x * (lambda * m + 1.0) * (m + 1.0)
    };
    // bracket: walk x downward from 0 until H(x) <= z, aborting if H stops
    // decreasing (the invertibility neighborhood is found empirically)
    let mut lo = z.max(-1e-8);
    let mut prev = h(lo);
    if prev > z {
        loop {
            let next = lo * 2.0;
            let hv = h(next);
            if hv >= prev {
                return Err(Error::invalid(format!(
                    "bracket failure: H turns around before reaching {z}"
                )));
            }
            lo = next;
            prev = hv;
            if hv <= z {
                break;
            }
            if lo < -1e18 {
                return Err(Error::invalid("bracket failure: H never reaches the target"));
            }
        }
    }
    let mut hi = 0.0f64;
    let mut lo = lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) <= z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let hinv = 0.5 * (lo + hi);
    let y = z / hinv - 1.0;
    let disc = (lambda + 1.0) * (lambda + 1.0) + 4.0 * lambda * y;
    if disc < 0.0 {
        return Err(Error::invalid("square root branch leaves the real line"));
    }
    Ok((-lambda - 1.0 + disc.sqrt()) / (2.0 * lambda))
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Fixed-format CSV `(location, weight, F_emp, F_ref)` rows; deterministic
/// byte output for a given measure and law.
pub fn cdf_csv(mu: &AtomicMeasure, law: &ReferenceLaw) -> Result<String> {
    let mut out = String::from("location,weight,F_emp,F_ref\n");
    let mut cum = 0.0;
    for (x, w) in &mu.atoms {
        cum += w;
        let f = law.cdf(x.to_f64())?;
        out.push_str(&format!(
            "{:.12e},{:.12e},{:.12e},{:.12e}\n",
            x.to_f64(),
            w,
            cum,
            f
        ));
    }
    Ok(out)
}
