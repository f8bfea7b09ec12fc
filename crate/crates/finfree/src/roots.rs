//! Simultaneous real-root extraction at arbitrary precision.
//!
//! Aberth–Ehrlich iteration on all roots at once, started from
//! Newton-polygon (convex hull) rings whose angles are fanned over the
//! half planes in proportion to the sign-change root counts. Evaluation is
//! tiered per point: a double-double Horner (~100 bits, allocation free)
//! carries the transport phase, and each point is promoted to full
//! BigFloat evaluation once it reaches the fast tier's noise floor. The
//! repulsion field only needs a few bits and runs in plain f64. Precision
//! auto-doubles (up to a cap) when the noise floor at the working
//! precision blocks convergence.

use crate::bigfloat::{BigComplex, BigFloat};
use crate::poly::MonicPoly;
use crate::{Error, Result};

/// Solver parameters. Defaults: 256 bits, tolerance 1e-20, 500 iterations
/// per precision level, escalation cap 4096 bits.
#[derive(Clone, Debug)]
pub struct RootSolveConfig {
    pub precision_bits: u32,
    pub tol: f64,
    pub max_iterations: u32,
    pub max_precision_bits: u32,
}

impl Default for RootSolveConfig {
    fn default() -> Self {
        RootSolveConfig {
            precision_bits: 256,
            tol: 1e-20,
            max_iterations: 500,
            max_precision_bits: 4096,
        }
    }
}

impl RootSolveConfig {
    pub fn with_precision(prec: u32) -> Self {
        RootSolveConfig {
            precision_bits: prec,
            ..Default::default()
        }
    }
}

/// Converged real roots (ascending) plus solver diagnostics.
#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<BigFloat>,
    pub iterations: u32,
    pub precision_bits: u32,
    /// Largest |imaginary part| among converged iterates, before projection
    /// to the real axis.
    pub max_im_residual: f64,
}

// ---------------------------------------------------------------------------
// Double-double with explicit exponent (fast evaluation tier)
// ---------------------------------------------------------------------------

/// Value `(hi + lo) * 2^e` with `hi` in +-[1,2); about 104 usable bits.
#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
    e: i64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = 134_217_729.0 * a; // 2^27 + 1
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

#[inline]
fn frexp_norm(x: f64) -> (f64, i64) {
    // x must be normal and nonzero
    let e = ((x.abs().to_bits() >> 52) & 0x7ff) as i64 - 1023;
    (x * pow2(-e), e)
}

#[inline]
fn pow2(e: i64) -> f64 {
    f64::from_bits(((e + 1023) as u64) << 52)
}

impl Dd {
    const ZERO: Dd = Dd {
        hi: 0.0,
        lo: 0.0,
        e: 0,
    };

    #[inline]
    fn norm(hi: f64, lo: f64, e: i64) -> Dd {
        let (s, err) = fast_two_sum(hi, lo);
        if s == 0.0 {
            return Dd::ZERO;
        }
        let (m, k) = frexp_norm(s);
        Dd {
            hi: m,
            lo: err * pow2(-k),
            e: e + k,
        }
    }

    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }

    fn neg(&self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
            e: self.e,
        }
    }

    fn add(&self, o: &Dd) -> Dd {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let delta = a.e - b.e;
        if delta > 110 {
            return *a;
        }
        let scale = pow2(-delta);
        let (s, err) = two_sum(a.hi, b.hi * scale);
        let err = err + (a.lo + b.lo * scale);
        Dd::norm(s, err, a.e)
    }

    fn sub(&self, o: &Dd) -> Dd {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Dd) -> Dd {
        if self.is_zero() || o.is_zero() {
            return Dd::ZERO;
        }
        let (p, err) = two_prod(self.hi, o.hi);
        let err = err + (self.hi * o.lo + self.lo * o.hi);
        Dd::norm(p, err, self.e + o.e)
    }

    fn div(&self, o: &Dd) -> Dd {
        assert!(!o.is_zero(), "double-double division by zero");
        if self.is_zero() {
            return Dd::ZERO;
        }
        let q0 = self.hi / o.hi;
        let (p, perr) = two_prod(q0, o.hi);
        let r = (self.hi - p) - perr + self.lo - q0 * o.lo;
        let q1 = r / o.hi;
        Dd::norm(q0, q1, self.e - o.e)
    }

    fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.e as f64 + self.hi.abs().log2()
        }
    }

    fn from_bigfloat(x: &BigFloat) -> Dd {
        if x.is_zero() {
            return Dd::ZERO;
        }
        let l2 = x.log2_abs().floor() as i64;
        let top = x.mul_pow2(-l2);
        let hi = top.to_f64();
        let rest = top.sub(&BigFloat::from_f64(hi, x.precision().max(128)));
        Dd::norm(hi, rest.to_f64(), l2)
    }

    fn to_bigfloat(&self, prec: u32) -> BigFloat {
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        BigFloat::from_f64(self.hi, prec)
            .add(&BigFloat::from_f64(self.lo, prec))
            .mul_pow2(self.e)
    }
}

#[derive(Clone, Copy, Debug)]
struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    fn mul(&self, o: &CDd) -> CDd {
        CDd {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn add_re(&self, re: &Dd) -> CDd {
        CDd {
            re: self.re.add(re),
            im: self.im,
        }
    }

    fn add(&self, o: &CDd) -> CDd {
        CDd {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    fn div(&self, o: &CDd) -> CDd {
        let den = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        CDd {
            re: self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&den),
            im: self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&den),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        hi + 0.5 * (1.0 + 2f64.powf(2.0 * (lo - hi))).log2()
    }
}

// ---------------------------------------------------------------------------
// Newton-polygon initialization
// ---------------------------------------------------------------------------

/// Initial moduli/angles from the upper convex hull of
/// `(k, log2 |coeff of x^k|)`. Each hull edge of horizontal span `m`
/// contributes `m` starting points on a ring of the edge's slope radius.
///
/// Angles are fanned over the positive / negative half planes in proportion
/// to the sign-change root counts (exact for real-rooted inputs), so that a
/// one-sided root field is not approached from the empty side.
fn newton_polygon_init(log2_asc: &[f64], pos_roots: usize, neg_roots: usize) -> Vec<(f64, f64)> {
    let d = log2_asc.len() - 1;
    let pts: Vec<(usize, f64)> = log2_asc
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .map(|(k, &y)| (k, y))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (y - y1) - (x as f64 - x1 as f64) * (y2 - y1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut out = Vec::with_capacity(d);
    let mut p_rem = pos_roots;
    let mut n_rem = neg_roots;
    for (ring, w) in hull.windows(2).enumerate() {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let m = k2 - k1;
        let radius_log2 = (y1 - y2) / m as f64;
        // split this ring between the half planes by remaining budget
        let mut mp = if p_rem + n_rem == 0 {
            m / 2
        } else {
            ((m * p_rem + (p_rem + n_rem) / 2) / (p_rem + n_rem)).min(m)
        };
        let mut mn = m - mp;
        if mp > p_rem && n_rem >= m - p_rem {
            mp = p_rem;
            mn = m - mp;
        }
        if mn > n_rem && p_rem >= m - n_rem {
            mn = n_rem;
            mp = m - mn;
        }
        p_rem = p_rem.saturating_sub(mp);
        n_rem = n_rem.saturating_sub(mn);
        let stagger = 0.073 + 0.377 * ring as f64;
        // fan each side across (-0.45 pi, 0.45 pi) around its axis
        for i in 0..mp {
            let t = (i as f64 + 0.5) / mp as f64 - 0.5;
            let angle = 0.9 * std::f64::consts::PI * t + 0.11 * (stagger + i as f64).sin();
            out.push((radius_log2, angle));
        }
        for i in 0..mn {
            let t = (i as f64 + 0.5) / mn as f64 - 0.5;
            let angle = std::f64::consts::PI
                + 0.9 * std::f64::consts::PI * t
                + 0.11 * (stagger + i as f64).cos();
            out.push((radius_log2, angle));
        }
    }
    out
}

/// Estimate of the evaluation cancellation (in bits) near the root rings:
/// at each Newton-polygon edge radius `r`, the dominant balanced terms sit
/// on the hull line while the largest term can be far above it; the gap
/// `max_j (y_j + j log2 r) - hull(r)` is how many leading bits cancel when
/// the polynomial is evaluated near roots of that magnitude. The working
/// precision must exceed this for those roots to be resolvable at all.
fn cancellation_estimate(log2_asc: &[f64]) -> f64 {
    let pts: Vec<(usize, f64)> = log2_asc
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .map(|(k, &y)| (k, y))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (y - y1) - (x as f64 - x1 as f64) * (y2 - y1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut worst = 0.0f64;
    for w in hull.windows(2) {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let lr = (y1 - y2) / (k2 - k1) as f64;
        let line = y1 + k1 as f64 * lr;
        let mmax = pts
            .iter()
            .map(|&(j, y)| y + j as f64 * lr)
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(mmax - line);
    }
    worst
}

/// Positive-root count by sign changes of the coefficient sequence
/// (descending powers); exact for real-rooted polynomials, a harmless
/// heuristic otherwise.
fn descartes_positive(coeffs: &[BigFloat]) -> usize {
    let mut changes = 0usize;
    let mut last = 0i32;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let s = if c.is_negative() { -1 } else { 1 };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

// ---------------------------------------------------------------------------
// Aberth–Ehrlich core
// ---------------------------------------------------------------------------

struct StageOutcome {
    sweeps_used: u32,
    all_settled: bool,
}

/// One precision level of tiered Aberth iteration. `z` is the master state
/// in BigFloat; per-point evaluation starts on the double-double tier and is
/// promoted to BigFloat once the fast tier's noise floor is reached.
#[allow(clippy::too_many_arguments)]
fn aberth_stage(
    coeffs_bf: &[BigFloat],
    log2c: &[f64],
    z: &mut [BigComplex],
    settled: &mut [bool],
    prec: u32,
    tol_log2: f64,
    max_sweeps: u32,
    max_total_log2: f64,
) -> StageOutcome {
    let d = z.len();
    let n_coeff = coeffs_bf.len();
    let coeffs_dd: Vec<Dd> = coeffs_bf.iter().map(Dd::from_bigfloat).collect();
    let noise_fast = (8.0 * d as f64).log2() + 6.0 - 100.0;
    let noise_exact = (8.0 * d as f64).log2() + 6.0 - prec as f64;
    let fits_f64 = max_total_log2 < 480.0;
    let mut exact_tier = vec![false; d];
    let stagnation_window = 30.max(d as u32 / 3);
    let mut best_corr = f64::INFINITY;
    let mut best_settled = 0usize;
    let mut stagnant = 0u32;
    let mut sweeps = 0u32;
    // f64 projections for the repulsion field, possibly rescaled by 2^-s
    let scale_shift: i64 = if fits_f64 {
        0
    } else {
        (max_total_log2 as i64 - 200).max(0)
    };
    let mut starved_streak = 0u32;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut starved = 0usize;
        let zf: Vec<(f64, f64)> = z
            .iter()
            .map(|w| {
                (
                    w.re.mul_pow2(-scale_shift).to_f64(),
                    w.im.mul_pow2(-scale_shift).to_f64(),
                )
            })
            .collect();
        let mut max_corr = f64::NEG_INFINITY;
        let mut moved_any = false;
        for i in 0..d {
            if settled[i] {
                continue;
            }
            moved_any = true;
            let zi = z[i].clone();
            let mut fast_w: Option<(BigComplex, f64)> = None;
            let lz = if zi.is_zero() {
                f64::NEG_INFINITY
            } else {
                zi.log2_abs()
            };
            // evaluation noise-floor bound at this point (max-term model)
            let mut mmax = f64::NEG_INFINITY;
            for (k, &lc) in log2c.iter().enumerate() {
                if lc.is_finite() {
                    let pw = (n_coeff - 1 - k) as f64;
                    let v = if pw == 0.0 { lc } else { lc + pw * lz };
                    if v > mmax {
                        mmax = v;
                    }
                }
            }
            // --- evaluate p, p' on the appropriate tier ---
            // fast tier first; promote to exact once its noise floor is hit
            // or the Newton step is already deep
            if !exact_tier[i] {
                let zdd = CDd {
                    re: Dd::from_bigfloat(&zi.re),
                    im: Dd::from_bigfloat(&zi.im),
                };
                let mut p = CDd {
                    re: coeffs_dd[0],
                    im: Dd::ZERO,
                };
                let mut dp = CDd {
                    re: Dd::ZERO,
                    im: Dd::ZERO,
                };
                for c in &coeffs_dd[1..] {
                    dp = dp.mul(&zdd).add(&p);
                    p = p.mul(&zdd).add_re(c);
                }
                if p.log2_abs() <= mmax + noise_fast || dp.is_zero() {
                    exact_tier[i] = true;
                } else {
                    let wdd = p.div(&dp);
                    if wdd.log2_abs() - lz.max(0.0) <= -55.0 {
                        exact_tier[i] = true;
                    } else {
                        fast_w = Some((
                            BigComplex::new(wdd.re.to_bigfloat(prec), wdd.im.to_bigfloat(prec)),
                            wdd.log2_abs(),
                        ));
                    }
                }
            }
            let (w, w_log2, at_noise_floor, dp_zero) = match fast_w.take() {
                Some((w, wl)) => (Some(w), wl, false, false),
                None => {
                    let (p, dp) = horner_bf(coeffs_bf, &zi, prec);
                    let floor = log2_cx(&p) <= mmax + noise_exact;
                    if dp.is_zero() {
                        (None, 0.0, floor, true)
                    } else {
                        let w = p.div(&dp);
                        let wl = log2_cx(&w);
                        (Some(w), wl, floor, false)
                    }
                }
            };
            if dp_zero {
                // critical point: nudge and continue
                let bump = BigFloat::from_f64(1.0, prec).mul_pow2(lz.max(0.0) as i64 - 20);
                z[i] = BigComplex::new(zi.re.add(&bump), zi.im.clone());
                max_corr = max_corr.max(-20.0);
                continue;
            }
            let w = w.expect("newton step computed");
            // --- repulsion field in f64 ---
            let (zr, zim) = zf[i];
            let mut sre = 0.0f64;
            let mut sim = 0.0f64;
            let mut degenerate = false;
            for (j, &(or, oim)) in zf.iter().enumerate() {
                if j == i {
                    continue;
                }
                let dr = zr - or;
                let di = zim - oim;
                let n2 = dr * dr + di * di;
                if n2 == 0.0 || !n2.is_finite() {
                    degenerate = true;
                    continue;
                }
                sre += dr / n2;
                sim += -di / n2;
            }
            // rescale the field back: S ~ 1/z has the inverse scaling
            let sscale = pow2_checked(-scale_shift);
            let (sre, sim) = (sre * sscale, sim * sscale);
            // den = 1 - w * S evaluated in f64
            let wre = w.re.to_f64();
            let wim = w.im.to_f64();
            let (wre, wim) = if wre.is_finite() && wim.is_finite() {
                (wre, wim)
            } else {
                (0.0, 0.0)
            };
            let dre = 1.0 - (wre * sre - wim * sim);
            let dim = -(wre * sim + wim * sre);
            let dn2 = dre * dre + dim * dim;
            let corr = if !dn2.is_finite() || dn2 < 1e-24 || degenerate {
                w.clone()
            } else {
                // w / den via f64 reciprocal of den
                let rre = dre / dn2;
                let rim = -dim / dn2;
                complex_scale_f64(&w, rre, rim, prec)
            };
            let corr_log = log2_cx(&corr);
            let rel = corr_log - lz.max(0.0);
            let rel_w = w_log2 - lz.max(0.0);
            // a tiny Aberth correction alone does not witness a root (the
            // denominator can blow up at a crowded non-root): require the
            // bare Newton step small too, and a meaningful evaluation. A
            // point whose evaluation is rounding noise can never settle at
            // this precision; count it as starved so the caller escalates.
            let deep = rel_w <= tol_log2 - 6.0;
            if rel <= tol_log2 && (deep || (!at_noise_floor && rel_w <= tol_log2 + 8.0)) {
                // converged: either a meaningful evaluation with a small
                // Newton step, or one so deep below tolerance that the
                // previous (meaningful) step already witnessed the root
                settled[i] = true;
            } else if at_noise_floor && rel <= -8.0 {
                starved += 1;
            }
            z[i] = zi.sub(&corr);
            max_corr = max_corr.max(rel);
        }
        let settled_count = settled.iter().filter(|&&s| s).count();
        if std::env::var_os("FINFREE_SOLVER_DEBUG").is_some() && sweeps % 5 == 0 {
            let promoted = exact_tier.iter().filter(|&&t| t).count();
            eprintln!(
                "  sweep {sweeps}: settled {settled_count}/{d} exact-tier {promoted} starved {starved} max_corr 2^{max_corr:.1}"
            );
        }
        if !moved_any || settled_count == d {
            return StageOutcome {
                sweeps_used: sweeps,
                all_settled: true,
            };
        }
        // many noise-starved points means this precision level cannot
        // finish: escalate promptly rather than polishing garbage
        if starved > 2.max(d / 20) {
            starved_streak += 1;
            if starved_streak >= 4 {
                return StageOutcome {
                    sweeps_used: sweeps,
                    all_settled: false,
                };
            }
        } else {
            starved_streak = 0;
        }
        let improved = settled_count > best_settled || max_corr < best_corr - 0.25;
        if settled_count > best_settled {
            best_settled = settled_count;
        }
        if max_corr < best_corr - 0.25 {
            best_corr = max_corr;
        }
        if improved {
            stagnant = 0;
        } else {
            stagnant += 1;
            if stagnant >= stagnation_window {
                return StageOutcome {
                    sweeps_used: sweeps,
                    all_settled: false,
                };
            }
        }
    }
    StageOutcome {
        sweeps_used: max_sweeps,
        all_settled: settled.iter().all(|&s| s),
    }
}

fn pow2_checked(e: i64) -> f64 {
    if e == 0 {
        1.0
    } else if (-1020..=1020).contains(&e) {
        pow2(e)
    } else if e < 0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn horner_bf(coeffs: &[BigFloat], z: &BigComplex, prec: u32) -> (BigComplex, BigComplex) {
    let mut p = BigComplex::from_real(coeffs[0].round_to(prec));
    let mut dp = BigComplex::zero(prec);
    for c in &coeffs[1..] {
        dp = dp.mul(z).add(&p);
        p = p.mul(z);
        p.re = p.re.add(c);
    }
    (p, dp)
}

fn log2_cx(z: &BigComplex) -> f64 {
    z.log2_abs()
}

fn complex_scale_f64(w: &BigComplex, a: f64, b: f64, prec: u32) -> BigComplex {
    let fa = BigFloat::from_f64(a, prec);
    let fb = BigFloat::from_f64(b, prec);
    BigComplex::new(
        w.re.mul(&fa).sub(&w.im.mul(&fb)),
        w.re.mul(&fb).add(&w.im.mul(&fa)),
    )
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

/// Find all roots of `p`, which must be nonconstant. Roots whose imaginary
/// residual is at most `tol * max(1, |Re|)` are projected to the real axis;
/// anything larger is reported as [`Error::ComplexRoots`] for the caller to
/// interpret. Precision escalates by doubling (up to the configured cap)
/// whenever the evaluation noise floor blocks convergence.
pub fn find_roots(p: &MonicPoly, cfg: &RootSolveConfig) -> Result<RootReport> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::invalid("cannot extract roots of a constant"));
    }
    let prec0 = cfg.precision_bits;
    // deflate exact zero roots (trailing zero coefficients)
    let coeffs_all = p.coeff_reals(prec0.max(64));
    let mut zeros = 0usize;
    while zeros < d && coeffs_all[d - zeros].is_zero() {
        zeros += 1;
    }
    let dq = d - zeros;
    let mut roots: Vec<BigFloat> = vec![BigFloat::zero(prec0); zeros];
    let mut iterations = 0u32;
    let mut max_im_residual: f64 = 0.0;
    let mut used_prec = prec0;

    if dq >= 1 {
        let tol_log2 = cfg.tol.log2();
        // start at a precision the Newton polygon says can actually resolve
        // the worst-cancelling root ring, instead of burning doomed levels
        let canc = {
            let probe: Vec<f64> = p.coeff_reals(64)[..=dq]
                .iter()
                .rev()
                .map(|c| c.log2_abs())
                .collect();
            cancellation_estimate(&probe)
        };
        let suggested = ((canc - tol_log2 + 48.0) / 64.0).ceil() as u32 * 64;
        let mut prec = prec0.max(suggested.min(cfg.max_precision_bits.max(prec0)));
        let mut state: Option<Vec<BigComplex>> = None;
        loop {
            let coeffs_bf: Vec<BigFloat> = p.coeff_reals(prec)[..=dq].to_vec();
            let log2c: Vec<f64> = coeffs_bf.iter().map(|c| c.log2_abs()).collect();
            let log2_asc: Vec<f64> = log2c.iter().rev().copied().collect();
            let pos = descartes_positive(&coeffs_bf).min(dq);
            let init = newton_polygon_init(&log2_asc, pos, dq - pos);
            let max_radius = init
                .iter()
                .map(|&(r, _)| r)
                .fold(f64::NEG_INFINITY, f64::max);
            let mut z: Vec<BigComplex> = match &state {
                Some(ws) => ws
                    .iter()
                    .map(|w| BigComplex::new(w.re.round_to(prec), w.im.round_to(prec)))
                    .collect(),
                None => init
                    .iter()
                    .map(|&(rl, ang)| {
                        let e = rl.floor();
                        let frac = 2f64.powf(rl - e);
                        BigComplex::new(
                            BigFloat::from_f64(ang.cos() * frac, prec).mul_pow2(e as i64),
                            BigFloat::from_f64(ang.sin() * frac, prec).mul_pow2(e as i64),
                        )
                    })
                    .collect(),
            };
            if std::env::var_os("FINFREE_SOLVER_DEBUG").is_some() {
                eprintln!("[solver] d={dq} prec={prec}");
            }
            let mut settled = vec![false; dq];
            let out = aberth_stage(
                &coeffs_bf,
                &log2c,
                &mut z,
                &mut settled,
                prec,
                tol_log2,
                cfg.max_iterations,
                max_radius + 2.0,
            );
            iterations += out.sweeps_used;
            state = Some(z.clone());
            if out.all_settled {
                used_prec = prec;
                let mut complex_count = 0usize;
                let mut max_im = 0.0f64;
                for zc in &z {
                    let re_l = zc.re.log2_abs().max(0.0);
                    let im_l = zc.im.log2_abs();
                    let resid = 2f64.powf(im_l - re_l);
                    max_im_residual = max_im_residual.max(if im_l.is_finite() {
                        2f64.powf(im_l)
                    } else {
                        0.0
                    });
                    if im_l.is_finite() && resid > cfg.tol {
                        complex_count += 1;
                        max_im = max_im.max(2f64.powf(im_l));
                    } else {
                        roots.push(zc.re.clone());
                    }
                }
                if complex_count > 0 {
                    return Err(Error::ComplexRoots {
                        count: complex_count,
                        max_im,
                    });
                }
                break;
            }
            if prec >= cfg.max_precision_bits.max(prec0) {
                return Err(Error::NonConvergence {
                    unsettled: settled.iter().filter(|&&s| !s).count(),
                    precision_bits: prec,
                    iterations,
                });
            }
            prec = (prec * 2).min(cfg.max_precision_bits.max(prec0));
        }
    }

    roots.sort();
    Ok(RootReport {
        roots,
        iterations,
        precision_bits: used_prec,
        max_im_residual,
    })
}
