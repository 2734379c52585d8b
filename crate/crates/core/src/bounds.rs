//! Quantum uncertainty constants `C_J` and minimum-variance frontiers `F_J`.
//!
//! Both are computed from Legendre duals whose inner problem is the lowest
//! eigenvalue of a real symmetric tridiagonal matrix in the `J^Z` basis:
//!
//! * `C_J = min_ψ Δ²J^X + Δ²J^Y`. Using `Δ²J^X + Δ²J^Y = ⟨J² − (J^Z)²⟩ −
//!   ⟨J^X⟩² − ⟨J^Y⟩²`, rotating so that `⟨J^Y⟩ = 0`, and writing
//!   `−⟨J^X⟩² = min_α (α²/4 − α⟨J^X⟩)` gives
//!   `C_J = min_α [λ_min(J² − (J^Z)² − αJ^X) + α²/4]`.
//! * `F_J(x)` is the smallest `Δ²J^Z/J` at `⟨J^X⟩/J = x`. Its frontier is
//!   traced by minimizing `Δ²J^Z − μ⟨J^X⟩` for a sweep of slopes `μ ≥ 0`,
//!   again trading `−⟨J^Z⟩²` for a multiplier `β`:
//!   `min_β [λ_min((J^Z)² − βJ^Z − μJ^X) + β²/4]`. For integer `J` the
//!   optimum sits at `β = 0`; for half-integer `J` and small `x` it does not.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;
use crate::optimize::scan_then_golden_min;
use crate::spin::{SpinMagnitude, SpinOperators, UnitConvention};

/// Default number of frontier samples per curve.
pub const DEFAULT_FJ_SAMPLES: usize = 1001;

const MULTIPLIER_TOL: f64 = 1e-10;
const MU_MIN: f64 = 1e-7;
const X_COVERAGE: f64 = 1.0 - 1e-6;

/// `C_J` for one spin and convention, with the optimality gap between the
/// dual value and the variance sum of the recovered state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CjValue {
    pub j: SpinMagnitude,
    pub convention: UnitConvention,
    pub value: f64,
    pub dual_gap: f64,
    pub multiplier: f64,
}

/// `(x, J^X)` tridiagonal pieces in the `J^Z` basis.
struct TridiagonalSpin {
    m: Vec<f64>,
    jx_off: Vec<f64>,
    transverse: Vec<f64>,
}

impl TridiagonalSpin {
    fn new(ops: &SpinOperators) -> Self {
        let d = ops.dim();
        let c = ops.convention.factor();
        Self {
            m: ops.magnitude.m_values().map(|m| c * m).collect(),
            jx_off: (0..d - 1).map(|i| ops.jx.get(i, i + 1).re).collect(),
            transverse: ops.transverse_square_diag(),
        }
    }

    fn expect_diag(&self, diag: &[f64], v: &[f64]) -> f64 {
        diag.iter().zip(v).map(|(a, x)| a * x * x).sum()
    }

    fn expect_jx(&self, v: &[f64]) -> f64 {
        self.jx_off.iter().enumerate().map(|(i, e)| 2.0 * e * v[i] * v[i + 1]).sum()
    }

    fn expect_jx_sq(&self, v: &[f64]) -> f64 {
        let n = v.len();
        let w: Vec<f64> = (0..n)
            .map(|i| {
                let mut s = 0.0;
                if i > 0 {
                    s += self.jx_off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.jx_off[i] * v[i + 1];
                }
                s
            })
            .collect();
        w.iter().map(|x| x * x).sum()
    }
}

/// `C_J = min Δ²J^X + Δ²J^Y` over pure spin-`J` states.
pub fn compute_cj(j: SpinMagnitude, convention: UnitConvention) -> Result<CjValue> {
    let ops = SpinOperators::new(j, convention)?;
    let t = TridiagonalSpin::new(&ops);
    let h = |alpha: f64| {
        SymTridiagonal::new(t.transverse.clone(), t.jx_off.iter().map(|e| -alpha * e).collect())
    };
    let dual = |alpha: f64| h(alpha).lowest_eigenvalue() + 0.25 * alpha * alpha;
    let hi = (4.0 * j.j() + 4.0) * convention.factor();
    let (alpha, dual_value) = scan_then_golden_min(dual, 0.0, hi, 200, MULTIPLIER_TOL);

    // Variance sum of the state that attains the dual optimum. ⟨J^Y⟩ = 0 for
    // the real ground state, and ⟨(J^Y)²⟩ = ⟨J² − (J^Z)²⟩ − ⟨(J^X)²⟩.
    let (_, v) = h(alpha).lowest_eigenpair();
    let mean_x = t.expect_jx(&v);
    let var_x = t.expect_jx_sq(&v) - mean_x * mean_x;
    let var_y = t.expect_diag(&t.transverse, &v) - t.expect_jx_sq(&v);
    let direct = var_x + var_y;
    Ok(CjValue {
        j,
        convention,
        value: direct.min(dual_value).max(0.0),
        dual_gap: (dual_value - direct).abs(),
        multiplier: alpha,
    })
}

/// Tabulated frontier `y = F_J(x)` with `x = ⟨J^X⟩/J`, `y = min Δ²J^Z/J`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FjCurve {
    pub j: SpinMagnitude,
    /// Sorted by `x`, starting at `(0, 0)` and ending at `(1, 1/2)`.
    pub samples: Vec<(f64, f64)>,
    /// `F_J'` at each sample: the Legendre multiplier `μ` that produced it,
    /// so `y ≥ y_i + μ_i (x − x_i)` holds on the whole curve. Infinite where
    /// unknown (the `x = 1` endpoint).
    pub slopes: Vec<f64>,
}

/// Upper end of the `β` search for half-integer `J`. The dual has a basin
/// near every `β = 2m`; the winner is the `m = ±1/2` doublet, whose ladder
/// coupling is largest, and `β*` then falls continuously to 0 as `μ` grows.
const BETA_MAX: f64 = 2.0;
// An error δβ moves the frontier point by O(δβ²).
const FRONTIER_BETA_TOL: f64 = 1e-8;

fn frontier_point(t: &TridiagonalSpin, j: f64, half_integer: bool, mu: f64) -> (f64, f64) {
    frontier_point_in(t, j, half_integer, mu, BETA_MAX, 9)
}

fn frontier_point_in(t: &TridiagonalSpin, j: f64, half_integer: bool, mu: f64, beta_max: f64, grid: usize) -> (f64, f64) {
    let m_sq: Vec<f64> = t.m.iter().map(|m| m * m).collect();
    let h = |beta: f64| {
        let diag = m_sq.iter().zip(&t.m).map(|(m2, m)| m2 - beta * m).collect();
        SymTridiagonal::new(diag, t.jx_off.iter().map(|e| -mu * e).collect())
    };
    let beta = if half_integer {
        let dual = |beta: f64| h(beta).lowest_eigenvalue() + 0.25 * beta * beta;
        // The dual is even in β, so only β ≥ 0 is scanned.
        scan_then_golden_min(dual, 0.0, beta_max, grid, FRONTIER_BETA_TOL).0
    } else {
        0.0
    };
    let (_, v) = h(beta).lowest_eigenpair();
    let mean_x = t.expect_jx(&v);
    let mean_z = t.expect_diag(&t.m, &v);
    let var_z = t.expect_diag(&m_sq, &v) - mean_z * mean_z;
    (mean_x.abs() / j, var_z.max(0.0) / j)
}

/// Traces `F_J` from ground states over a geometric sweep of slopes.
pub fn compute_fj_curve(j: SpinMagnitude, n_samples: usize) -> Result<FjCurve> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter(format!("n_samples must be ≥ 2, got {n_samples}")));
    }
    let ops = SpinOperators::new(j, UnitConvention::Standard)?;
    let t = TridiagonalSpin::new(&ops);
    let jv = j.j();
    let half = j.is_half_integer();

    let mut mu_max = 1.0;
    for _ in 0..80 {
        if frontier_point(&t, jv, half, mu_max).0 >= X_COVERAGE {
            break;
        }
        mu_max *= 2.0;
    }

    // A quarter of the points follow a geometric sweep of μ, which resolves
    // the small-x end; the rest are placed at target x values by inverting
    // the sweep's x(ln μ) table.
    let interior = n_samples.saturating_sub(2);
    let n_geo = (interior / 4).max(interior.min(2));
    let span = (mu_max / MU_MIN).ln();
    let denom = (n_geo.max(2) - 1) as f64;
    let geo_mu: Vec<f64> = (0..n_geo).map(|k| MU_MIN * (span * k as f64 / denom).exp()).collect();
    let geo: Vec<(f64, f64)> = geo_mu.par_iter().map(|&mu| frontier_point(&t, jv, half, mu)).collect();

    let n_uniform = interior - n_geo;
    let uniform: Vec<(f64, f64, f64)> = (1..=n_uniform)
        .into_par_iter()
        .map(|k| {
            let u = k as f64 / (n_uniform + 1) as f64;
            // Odd k: uniform in x; even k: uniform in √(1 − x), which
            // resolves the steep approach to the coherent state.
            let target = if k % 2 == 1 { u } else { 1.0 - (1.0 - u) * (1.0 - u) };
            let mu = invert_sweep(&geo_mu, &geo, target);
            let (x, y) = frontier_point(&t, jv, half, mu);
            (x, y, mu)
        })
        .collect();

    let mut points = Vec::with_capacity(n_samples);
    points.push((0.0, 0.0, 0.0));
    points.extend(geo.iter().zip(&geo_mu).map(|(&(x, y), &mu)| (x, y, mu)));
    points.extend(uniform);
    // Coherent state along X: ⟨J^X⟩ = J, Δ²J^Z = J/2.
    points.push((1.0, 0.5, f64::INFINITY));

    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup_by(|b, a| (b.0 - a.0).abs() <= 1e-14);
    let samples = points.iter().map(|&(x, y, _)| (x, y)).collect();
    let slopes = points.iter().map(|&(_, _, mu)| mu).collect();
    Ok(FjCurve { j, samples, slopes })
}

/// `μ` whose frontier point should sit near `target`, by linear
/// interpolation of `x` against `ln μ`.
fn invert_sweep(mus: &[f64], points: &[(f64, f64)], target: f64) -> f64 {
    let i = points.partition_point(|p| p.0 < target);
    if i == 0 {
        return mus[0];
    }
    if i >= points.len() {
        return mus[mus.len() - 1];
    }
    let (x0, x1) = (points[i - 1].0, points[i].0);
    let (l0, l1) = (mus[i - 1].ln(), mus[i].ln());
    let w = if x1 > x0 { (target - x0) / (x1 - x0) } else { 0.5 };
    (l0 + w * (l1 - l0)).exp()
}

/// `x²/(4J)`, the bound obtained from `Δ²J^Y ≤ J²` and the uncertainty
/// relation alone.
pub fn quadratic_separable_bound(j: SpinMagnitude, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(x * x / (4.0 * j.j()))
}

fn check_unit(x: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&x) {
        return Err(Error::OutOfRange(x));
    }
    Ok(x.clamp(0.0, 1.0))
}

impl FjCurve {
    /// Index `i` of the segment `[x_i, x_{i+1}]` containing `x`.
    fn segment(&self, x: f64) -> usize {
        let s = &self.samples;
        match s.binary_search_by(|p| p.0.total_cmp(&x)) {
            Ok(i) => i.min(s.len() - 2),
            Err(i) => i.saturating_sub(1).min(s.len() - 2),
        }
    }

    fn line_at(&self, i: usize, x: f64) -> f64 {
        let (x0, y0) = self.samples[i];
        let (x1, y1) = self.samples[i + 1];
        if x1 == x0 {
            return y0.min(y1);
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn chord(&self, x: f64) -> Result<f64> {
        let x = check_unit(x)?;
        Ok(self.line_at(self.segment(x), x))
    }

    fn tangent(&self, i: usize, x: f64) -> Option<f64> {
        let m = self.slopes.get(i).copied().filter(|m| m.is_finite())?;
        let (xi, yi) = self.samples[i];
        Some(yi + m * (x - xi))
    }

    /// Cubic Hermite interpolation through the samples and their slopes,
    /// clamped to `[lower_bound, chord]`. The chord alone is used where a
    /// slope is unknown.
    pub fn lookup(&self, x: f64) -> Result<f64> {
        let x = check_unit(x)?;
        let i = self.segment(x);
        let chord = self.line_at(i, x);
        let (x0, y0) = self.samples[i];
        let (x1, y1) = self.samples[i + 1];
        let (Some(&m0), Some(&m1)) = (self.slopes.get(i), self.slopes.get(i + 1)) else {
            return Ok(chord);
        };
        if !(m0.is_finite() && m1.is_finite()) || x1 <= x0 {
            return Ok(chord);
        }
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let hermite = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * h * m1;
        Ok(hermite.clamp(self.lower_bound(x)?, chord))
    }

    /// A value that never exceeds `F_J(x)`: the larger of the supporting
    /// tangents at the segment ends and of the neighbouring secants
    /// extended into the segment, floored at zero and capped by the chord.
    pub fn lower_bound(&self, x: f64) -> Result<f64> {
        let x = check_unit(x)?;
        let i = self.segment(x);
        let (x0, y0) = self.samples[i];
        let (x1, y1) = self.samples[i + 1];
        if x == x0 {
            return Ok(y0);
        }
        if x == x1 {
            return Ok(y1);
        }
        let mut best = 0.0f64;
        if i >= 1 {
            best = best.max(self.line_at(i - 1, x));
        }
        if i + 2 < self.samples.len() {
            best = best.max(self.line_at(i + 1, x));
        }
        for k in [i, i + 1] {
            if let Some(t) = self.tangent(k, x) {
                best = best.max(t);
            }
        }
        Ok(best.min(self.line_at(i, x)))
    }
}

/// Interpolated `F_J(x)`; see [`FjCurve::lookup`].
pub fn fj_lookup(curve: &FjCurve, x: f64) -> Result<f64> {
    curve.lookup(x)
}

/// Chord interpolation of `curve` at `x`, which never underestimates a
/// convex `F_J`.
pub fn fj_chord(curve: &FjCurve, x: f64) -> Result<f64> {
    curve.chord(x)
}

/// `F_J` curves for `J = 1/2, 1, …, j_max`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CurveBank {
    curves: BTreeMap<u32, FjCurve>,
}

impl CurveBank {
    /// Computes every curve up to `j_max`; curves are independent and built
    /// in parallel.
    pub fn build(j_max: SpinMagnitude, n_samples: usize) -> Result<Self> {
        let curves = (1..=j_max.twice_j())
            .into_par_iter()
            .map(|tj| {
                let j = SpinMagnitude::from_twice(tj)?;
                compute_fj_curve(j, n_samples).map(|c| (tj, c))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self { curves })
    }

    /// Adds any missing curves up to `j_max`, built in parallel.
    pub fn extend_to(&mut self, j_max: SpinMagnitude, n_samples: usize) -> Result<()> {
        let missing: Vec<u32> = (1..=j_max.twice_j()).filter(|tj| !self.curves.contains_key(tj)).collect();
        let built = missing
            .into_par_iter()
            .map(|tj| compute_fj_curve(SpinMagnitude::from_twice(tj)?, n_samples).map(|c| (tj, c)))
            .collect::<Result<Vec<_>>>()?;
        self.curves.extend(built);
        Ok(())
    }

    pub fn from_curves(curves: impl IntoIterator<Item = FjCurve>) -> Self {
        Self { curves: curves.into_iter().map(|c| (c.j.twice_j(), c)).collect() }
    }

    pub fn get(&self, j: SpinMagnitude) -> Result<&FjCurve> {
        self.curves.get(&j.twice_j()).ok_or(Error::MissingCurve(j.j()))
    }

    /// Largest spin with a curve in the bank.
    pub fn j_max(&self) -> Option<SpinMagnitude> {
        self.curves.values().next_back().map(|c| c.j)
    }

    pub fn curves(&self) -> impl Iterator<Item = &FjCurve> {
        self.curves.values()
    }
}
