//! Brute-force certification of the classical bounds.
//!
//! A local hidden variable average is a convex mixture of deterministic
//! strategies, and the objectives are multilinear in the per-site values,
//! so extremal (vertex) strategies attain every maximum. Each site
//! contributes a complex number `mx + i·my`:
//!
//! * Corner sites (classical, outcomes ±1): `mx, my ∈ {−1, +1}`.
//! * Disk sites (local quantum states, Pauli units): `mx² + my² ≤ 1`. The
//!   optimum is on the unit circle with its phase aligned to the rest of the
//!   product, so disks are handled analytically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, C64};
use crate::moments::{mabk_threshold, MabkForm};
use crate::spin::{SpinMagnitude, SpinOperators, UnitConvention};
use crate::state::random_vector;

/// Objective maximized over local strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    Re,
    RePlusIm,
}

impl Objective {
    pub fn apply(self, z: C64) -> f64 {
        match self {
            Objective::Re => z.re,
            Objective::RePlusIm => z.re + z.im,
        }
    }

    pub fn form(self) -> MabkForm {
        match self {
            Objective::Re => MabkForm::Single,
            Objective::RePlusIm => MabkForm::Sum,
        }
    }

    /// Best value of `apply(z·u)` over unit-modulus `u`, and that `u`.
    fn align(self, z: C64) -> (f64, C64) {
        let r = z.norm();
        if r == 0.0 {
            return (0.0, C64::new(1.0, 0.0));
        }
        let target = match self {
            Objective::Re => 0.0,
            Objective::RePlusIm => std::f64::consts::FRAC_PI_4,
        };
        let gain = match self {
            Objective::Re => 1.0,
            Objective::RePlusIm => std::f64::consts::SQRT_2,
        };
        (gain * r, C64::from_polar(1.0, target - z.arg()))
    }
}

/// Constraint class of one factor of a strategy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Constraint {
    /// One classical site, `mx, my ∈ {−1, +1}`.
    Corner,
    /// One quantum site, `mx² + my² ≤ 1`.
    Disk,
    /// A group of sites whose joint moment has `|Re|, |Im| ≤ half_side`.
    GroupSquare { sites: usize, half_side: f64 },
    /// A group of sites whose joint moment has modulus `≤ radius`.
    GroupDisk { sites: usize, radius: f64 },
}

/// One factor `mx + i·my` of a product strategy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyFactor {
    pub constraint: Constraint,
    pub mx: f64,
    pub my: f64,
}

impl StrategyFactor {
    pub fn value(&self) -> C64 {
        C64::new(self.mx, self.my)
    }

    /// Whether the factor satisfies its constraint (within `1e−12`).
    pub fn is_feasible(&self) -> bool {
        const TOL: f64 = 1e-12;
        match self.constraint {
            Constraint::Corner => (self.mx.abs() - 1.0).abs() <= TOL && (self.my.abs() - 1.0).abs() <= TOL,
            Constraint::Disk => self.mx.hypot(self.my) <= 1.0 + TOL,
            Constraint::GroupSquare { half_side, .. } => {
                self.mx.abs() <= half_side * (1.0 + TOL) && self.my.abs() <= half_side * (1.0 + TOL)
            }
            Constraint::GroupDisk { radius, .. } => self.mx.hypot(self.my) <= radius * (1.0 + TOL),
        }
    }
}

/// Product strategy, one factor per site or per group.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LocalStrategy {
    pub factors: Vec<StrategyFactor>,
}

impl LocalStrategy {
    pub fn product(&self) -> C64 {
        self.factors.iter().fold(C64::new(1.0, 0.0), |acc, f| acc * f.value())
    }

    pub fn is_feasible(&self) -> bool {
        self.factors.iter().all(StrategyFactor::is_feasible)
    }
}

/// Oracle maximum next to the analytic bound it certifies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub inequality_id: String,
    pub objective: Objective,
    pub n: usize,
    pub t: usize,
    pub max_value: f64,
    pub argmax: LocalStrategy,
    pub analytic_bound: f64,
    pub agrees: bool,
}

pub const AGREEMENT_TOL: f64 = 1e-6;

impl OracleReport {
    fn new(
        id: String,
        objective: Objective,
        n: usize,
        t: usize,
        max_value: f64,
        argmax: LocalStrategy,
        analytic_bound: f64,
    ) -> Self {
        let agrees = (max_value - analytic_bound).abs() <= AGREEMENT_TOL;
        Self { inequality_id: id, objective, n, t, max_value, argmax, analytic_bound, agrees }
    }

    /// Overrides the analytic bound, e.g. to exercise the failure path.
    pub fn with_analytic_bound(mut self, bound: f64) -> Self {
        self.analytic_bound = bound;
        self.agrees = (self.max_value - bound).abs() <= AGREEMENT_TOL;
        self
    }
}

/// Analytic bound for `n` sites with `t` trusted: the MABK bound at `t = 0`
/// when the form is defined there, otherwise `2^{(n−t)/2}` (Re) or
/// `2^{(n−t+1)/2}` (Re + Im), which at `t = 0` is the extremal corner value
/// for the other parity.
pub fn hybrid_analytic_bound(n: usize, t: usize, objective: Objective) -> Result<f64> {
    match mabk_threshold(n, t, objective.form()) {
        Ok(b) => Ok(b),
        Err(Error::InvalidForm { .. }) if t == 0 && n > 0 => {
            let extra = if objective == Objective::RePlusIm { 1.0 } else { 0.0 };
            Ok(2f64.powf((n as f64 + extra) / 2.0))
        }
        Err(e) => Err(e),
    }
}

const CORNERS: [C64; 4] = [C64::new(1.0, 1.0), C64::new(1.0, -1.0), C64::new(-1.0, 1.0), C64::new(-1.0, -1.0)];

fn corner_product(mut code: u64, sites: usize) -> C64 {
    let mut z = C64::new(1.0, 0.0);
    for _ in 0..sites {
        z *= CORNERS[(code & 3) as usize];
        code >>= 2;
    }
    z
}

/// Best corner assignment for `sites` classical sites, with the disk factor
/// (if any) aligned analytically. Returns `(value, corner code, disk phase)`.
fn enumerate(sites: usize, with_disk: bool, objective: Objective) -> (f64, u64, C64) {
    let total = 1u64 << (2 * sites);
    let score = |code: u64| {
        let z = corner_product(code, sites);
        if with_disk {
            let (v, u) = objective.align(z);
            (v, code, u)
        } else {
            (objective.apply(z), code, C64::new(1.0, 0.0))
        }
    };
    // Ties resolve to the smallest code so the argmax is deterministic.
    (0..total)
        .into_par_iter()
        .map(score)
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX, C64::new(1.0, 0.0)),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        )
}

fn corner_factors(code: u64, sites: usize) -> Vec<StrategyFactor> {
    (0..sites)
        .map(|k| {
            let c = CORNERS[((code >> (2 * k)) & 3) as usize];
            StrategyFactor { constraint: Constraint::Corner, mx: c.re, my: c.im }
        })
        .collect()
}

fn objective_tag(objective: Objective) -> &'static str {
    match objective {
        Objective::Re => "re",
        Objective::RePlusIm => "re+im",
    }
}

/// Exact maximum over all `4^n` corner strategies.
pub fn corner_max(n: usize, objective: Objective) -> Result<OracleReport> {
    if n == 0 || n > 12 {
        return Err(Error::InvalidParameter(format!("corner_max needs 1 ≤ n ≤ 12, got {n}")));
    }
    let (value, code, _) = enumerate(n, false, objective);
    let argmax = LocalStrategy { factors: corner_factors(code, n) };
    let bound = hybrid_analytic_bound(n, 0, objective)?;
    let id = format!("mabk-{}-n{n}-t0", objective_tag(objective));
    Ok(OracleReport::new(id, objective, n, 0, value, argmax, bound))
}

/// Maximum with sites `0..t` quantum (Disk) and the rest classical (Corner).
/// A product of unit-modulus disk factors is itself one free phase, so it is
/// carried by the first disk site and the others sit at `1 + 0i`.
pub fn hybrid_max(n: usize, t: usize, objective: Objective) -> Result<OracleReport> {
    if n == 0 || n > 10 || t > n {
        return Err(Error::InvalidParameter(format!("hybrid_max needs 1 ≤ n ≤ 10 and t ≤ n, got n = {n}, t = {t}")));
    }
    if t == 0 {
        return corner_max(n, objective);
    }
    let classical = n - t;
    let (value, code, phase) = enumerate(classical, true, objective);
    let mut factors: Vec<StrategyFactor> = (0..t)
        .map(|k| {
            let u = if k == 0 { phase } else { C64::new(1.0, 0.0) };
            StrategyFactor { constraint: Constraint::Disk, mx: u.re, my: u.im }
        })
        .collect();
    factors.extend(corner_factors(code, classical));
    let bound = hybrid_analytic_bound(n, t, objective)?;
    let id = format!("mabk-{}-n{n}-t{t}", objective_tag(objective));
    Ok(OracleReport::new(id, objective, n, t, value, LocalStrategy { factors }, bound))
}

/// Best `objective` over bipartitions `k | n−k` where each group's joint
/// moment is only limited by the algebraic bounds `|Re|, |Im| ≤ 2^{k−1}`.
/// The objective is bilinear in the two group moments, so the square
/// vertices suffice.
fn bipartition_max(n: usize, objective: Objective, disks: bool) -> LocalStrategy {
    let mut best: Option<(f64, LocalStrategy)> = None;
    for k in 1..n {
        let sizes = [k, n - k];
        let scale: Vec<f64> = sizes.iter().map(|&s| 2f64.powi(s as i32 - 1)).collect();
        let candidate = if disks {
            // Disk groups: moduli multiply; one aligned phase.
            let (v, u) = objective.align(C64::new(scale[0] * scale[1], 0.0));
            let first = C64::new(scale[0], 0.0) * u;
            let f = vec![
                StrategyFactor { constraint: Constraint::GroupDisk { sites: k, radius: scale[0] }, mx: first.re, my: first.im },
                StrategyFactor { constraint: Constraint::GroupDisk { sites: n - k, radius: scale[1] }, mx: scale[1], my: 0.0 },
            ];
            (v, LocalStrategy { factors: f })
        } else {
            let mut local: Option<(f64, LocalStrategy)> = None;
            for a in CORNERS {
                for b in CORNERS {
                    let (za, zb) = (a * scale[0], b * scale[1]);
                    let v = objective.apply(za * zb);
                    if local.as_ref().is_none_or(|l| v > l.0) {
                        let f = vec![
                            StrategyFactor {
                                constraint: Constraint::GroupSquare { sites: k, half_side: scale[0] },
                                mx: za.re,
                                my: za.im,
                            },
                            StrategyFactor {
                                constraint: Constraint::GroupSquare { sites: n - k, half_side: scale[1] },
                                mx: zb.re,
                                my: zb.im,
                            },
                        ];
                        local = Some((v, LocalStrategy { factors: f }));
                    }
                }
            }
            local.expect("sixteen vertex pairs")
        };
        if best.as_ref().is_none_or(|b| candidate.0 > b.0) {
            best = Some(candidate);
        }
    }
    best.expect("n ≥ 2 has a bipartition").1
}

/// Svetlichny-type bound: `Re Π + Im Π` over models that are nonlocal only
/// within the two groups of some bipartition. Checked against `2^{n−1}`.
pub fn svetlichny_max(n: usize) -> Result<OracleReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidParameter(format!("svetlichny_max needs 2 ≤ n ≤ 8, got {n}")));
    }
    let argmax = bipartition_max(n, Objective::RePlusIm, false);
    let value = Objective::RePlusIm.apply(argmax.product());
    Ok(OracleReport::new(format!("svetlichny-n{n}"), Objective::RePlusIm, n, 0, value, argmax, 2f64.powi(n as i32 - 1)))
}

/// Genuine-entanglement bound: the maximum over biseparable quantum states,
/// whose group moments lie in disks of radius `2^{k−1}`. Checked against
/// `2^{n−2}` (Re) and `2^{n−3/2}` (Re + Im).
pub fn genuine_entanglement_max(n: usize, objective: Objective) -> Result<OracleReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidParameter(format!("genuine_entanglement_max needs 2 ≤ n ≤ 8, got {n}")));
    }
    let argmax = bipartition_max(n, objective, true);
    let value = objective.apply(argmax.product());
    let bound = match objective {
        Objective::Re => 2f64.powf(n as f64 - 2.0),
        Objective::RePlusIm => 2f64.powf(n as f64 - 1.5),
    };
    let id = format!("genuine-ent-{}-n{n}", objective_tag(objective));
    Ok(OracleReport::new(id, objective, n, n, value, argmax, bound))
}

/// CHSH local bound: the maximum of `E(θ,φ) − E(θ,φ′) + E(θ′,φ) + E(θ′,φ′)`
/// over deterministic outcomes `a, a′, b, b′ ∈ {±1}`.
pub fn chsh_local_max() -> OracleReport {
    let mut best = (f64::NEG_INFINITY, [0.0; 4]);
    for code in 0..16u32 {
        let o: Vec<f64> = (0..4).map(|k| if code >> k & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let (a, ap, b, bp) = (o[0], o[1], o[2], o[3]);
        let v = a * b - a * bp + ap * b + ap * bp;
        if v > best.0 {
            best = (v, [a, ap, b, bp]);
        }
    }
    let [a, ap, b, bp] = best.1;
    let argmax = LocalStrategy {
        factors: vec![
            StrategyFactor { constraint: Constraint::Corner, mx: a, my: ap },
            StrategyFactor { constraint: Constraint::Corner, mx: b, my: bp },
        ],
    };
    OracleReport::new("chsh-n2".into(), Objective::Re, 2, 0, best.0, argmax, 2.0)
}

/// Quantity minimized by [`random_state_min_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanObjective {
    /// `Δ²J^X + Δ²J^Y`, an upper estimate of `C_J`.
    SumVarXY,
    /// Scatter of `(|⟨J^X⟩|/J, Δ²J^Z/J)`, lying on or above `F_J`.
    VarZatMeanX,
}

/// Result of a random-state scan. Every number comes from an actual state,
/// so `minimum` and every scatter point sit on or above the true bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomScan {
    pub j: SpinMagnitude,
    pub objective: ScanObjective,
    pub samples: usize,
    /// Smallest `Δ²J^X + Δ²J^Y` found (after local refinement).
    pub minimum: Option<f64>,
    /// `(x, y)` scatter for [`ScanObjective::VarZatMeanX`].
    pub points: Vec<(f64, f64)>,
    /// Lower envelope of `points` over 50 equal `x` bins (empty bins skipped).
    pub envelope: Vec<(f64, f64)>,
    /// Largest `Δ²J^Y` over all samples.
    pub max_var_y: f64,
}

struct Moments {
    mean: [f64; 3],
    var: [f64; 3],
}

fn moments(v: &[C64], ops: &[Matrix; 3], squares: &[Matrix; 3]) -> Moments {
    let expect = |m: &Matrix| crate::linalg::inner(v, &m.mat_vec(v)).re;
    let mut out = Moments { mean: [0.0; 3], var: [0.0; 3] };
    for a in 0..3 {
        let mean = expect(&ops[a]);
        out.mean[a] = mean;
        out.var[a] = (expect(&squares[a]) - mean * mean).max(0.0);
    }
    out
}

fn normalize(v: &mut [C64]) {
    let n = crate::linalg::norm(v);
    v.iter_mut().for_each(|z| *z /= n);
}

pub const DEFAULT_SEED: u64 = 20_240_601;
const REFINE_CANDIDATES: usize = 8;
const REFINE_STEPS: usize = 4000;

/// Haar-random pure spin-`j` states. For [`ScanObjective::SumVarXY`] the best
/// samples are then polished by a seeded stochastic local search, which
/// keeps every candidate a genuine state; plain sampling concentrates far
/// from the minimum once `d ≥ 4`.
pub fn random_state_min_scan(j: SpinMagnitude, objective: ScanObjective, samples: usize, seed: u64) -> Result<RandomScan> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be ≥ 1".into()));
    }
    let ops = SpinOperators::new(j, UnitConvention::Standard)?;
    let axes = [ops.jx.clone(), ops.jy.clone(), ops.jz.clone()];
    let squares = [ops.jx.matmul(&ops.jx), ops.jy.matmul(&ops.jy), ops.jz.matmul(&ops.jz)];
    let d = ops.dim();
    let jv = j.j();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut max_var_y = 0.0f64;
    let mut points = Vec::new();
    let mut best: Vec<(f64, Vec<C64>)> = Vec::new();
    for _ in 0..samples {
        let mut v = random_vector(d, &mut rng);
        normalize(&mut v);
        let m = moments(&v, &axes, &squares);
        max_var_y = max_var_y.max(m.var[1]);
        match objective {
            ScanObjective::SumVarXY => {
                let f = m.var[0] + m.var[1];
                if best.len() < REFINE_CANDIDATES || f < best[best.len() - 1].0 {
                    best.push((f, v));
                    best.sort_by(|a, b| a.0.total_cmp(&b.0));
                    best.truncate(REFINE_CANDIDATES);
                }
            }
            ScanObjective::VarZatMeanX => points.push((m.mean[0].abs() / jv, m.var[2] / jv)),
        }
    }

    let minimum = match objective {
        ScanObjective::SumVarXY => {
            let mut overall = f64::INFINITY;
            for (mut f, mut v) in best {
                let mut sigma = 0.1;
                for _ in 0..REFINE_STEPS {
                    let mut trial: Vec<C64> = v
                        .iter()
                        .map(|z| {
                            let re: f64 = StandardNormal.sample(&mut rng);
                            let im: f64 = StandardNormal.sample(&mut rng);
                            z + C64::new(re, im) * sigma
                        })
                        .collect();
                    normalize(&mut trial);
                    let m = moments(&trial, &axes, &squares);
                    max_var_y = max_var_y.max(m.var[1]);
                    let ft = m.var[0] + m.var[1];
                    if ft < f {
                        f = ft;
                        v = trial;
                        sigma = (sigma * 1.5).min(0.5);
                    } else {
                        sigma = (sigma * 0.97).max(1e-9);
                    }
                }
                overall = overall.min(f);
            }
            Some(overall)
        }
        ScanObjective::VarZatMeanX => None,
    };

    let envelope = lower_envelope(&points, 50);
    Ok(RandomScan { j, objective, samples, minimum, points, envelope, max_var_y })
}

fn lower_envelope(points: &[(f64, f64)], bins: usize) -> Vec<(f64, f64)> {
    let mut slots: Vec<Option<(f64, f64)>> = vec![None; bins];
    for &(x, y) in points {
        let b = ((x * bins as f64) as usize).min(bins - 1);
        if slots[b].is_none_or(|(_, yb)| y < yb) {
            slots[b] = Some((x, y));
        }
    }
    slots.into_iter().flatten().collect()
}
