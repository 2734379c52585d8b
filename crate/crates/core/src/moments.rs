//! Moment inequalities: MABK with hybrid and genuine thresholds, CHSH, and
//! the spin-J CFRD family.
//!
//! MABK quantities use Pauli units (outcomes ±1); CFRD quantities use the
//! standard spin units.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{compute_cj, CjValue};
use crate::criterion::{CriterionResult, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, C64};
use crate::optimize::golden_section_max;
use crate::spin::{Sign, SpinMagnitude, SpinOperators, UnitConvention};
use crate::state::PureState;
use crate::states::CorrelatedStateSpec;

/// Per-site rotation angle `θ_k` and ladder sign `s_k` of one moment
/// `Π_N = ⟨∏_k (J_k^{θ_k,X} + i s_k J_k^{θ_k,Y})⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSettings {
    angles: Vec<f64>,
    signs: Vec<Sign>,
}

impl MeasurementSettings {
    pub fn new(angles: Vec<f64>, signs: Vec<Sign>) -> Result<Self> {
        if angles.len() != signs.len() {
            return Err(Error::DimensionMismatch { expected: angles.len(), found: signs.len() });
        }
        Ok(Self { angles, signs })
    }

    /// Same angle and sign at every site.
    pub fn uniform(n: usize, theta: f64, sign: Sign) -> Self {
        Self { angles: vec![theta; n], signs: vec![sign; n] }
    }

    /// Raising ladder at every site with angles `θ_k = θ_0 + kδ`.
    pub fn angle_ladder(n: usize, theta0: f64, delta: f64) -> Self {
        Self { angles: (0..n).map(|k| theta0 + k as f64 * delta).collect(), signs: vec![Sign::Plus; n] }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn n_sites(&self) -> usize {
        self.angles.len()
    }

    /// Common phase `e^{−i Σ s_k θ_k}` picked up by the rotated ladders.
    pub fn phase(&self) -> C64 {
        let total: f64 = self.angles.iter().zip(&self.signs).map(|(t, s)| f64::from(s.value()) * t).sum();
        C64::from_polar(1.0, -total)
    }

    fn all_same_sign(&self) -> bool {
        self.signs.windows(2).all(|w| w[0] == w[1])
    }
}

/// Number of trusted (quantum) sites `t` out of `n`; they occupy the first
/// `t` positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HybridPartition {
    n: usize,
    t: usize,
}

impl HybridPartition {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if t > n {
            return Err(Error::InvalidParameter(format!("partition t = {t} exceeds n = {n}")));
        }
        Ok(Self { n, t })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn t(self) -> usize {
        self.t
    }

    pub fn verdict(self) -> Verdict {
        Verdict::for_partition(self.n, self.t)
    }
}

/// Which combination of the MABK moment is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MabkForm {
    /// `Re Π_N`.
    Single,
    /// `Re Π_N + Im Π_N`.
    Sum,
}

impl MabkForm {
    pub fn apply(self, moment: C64) -> f64 {
        match self {
            MabkForm::Single => moment.re,
            MabkForm::Sum => moment.re + moment.im,
        }
    }

    /// Form with a valid `t = 0` bound at this `n`.
    pub fn bell_form(n: usize) -> Self {
        if n % 2 == 1 {
            MabkForm::Single
        } else {
            MabkForm::Sum
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenuineKind {
    /// `Re Π + Im Π ≤ 2^{n−1}`: genuine N-partite Bell nonlocality.
    SvetlichnySum,
    /// `Re Π ≤ 2^{n−2}`: genuine N-partite entanglement.
    GenuineEntSingle,
    /// `Re Π + Im Π ≤ 2^{n−3/2}`: genuine N-partite entanglement.
    GenuineEntSum,
}

impl GenuineKind {
    pub fn form(self) -> MabkForm {
        match self {
            GenuineKind::GenuineEntSingle => MabkForm::Single,
            _ => MabkForm::Sum,
        }
    }

    pub fn verdict(self) -> Verdict {
        match self {
            GenuineKind::SvetlichnySum => Verdict::GenuineBell,
            _ => Verdict::GenuineEntanglement,
        }
    }
}

fn pauli() -> SpinOperators {
    SpinOperators::new(SpinMagnitude::HALF, UnitConvention::Pauli).expect("Pauli spin-1/2 is valid")
}

/// MABK moment `Π_N` of a qubit state, by applying the rotated Pauli
/// ladders site by site.
pub fn mabk_moment(state: &PureState, settings: &MeasurementSettings) -> Result<C64> {
    if settings.n_sites() != state.n_sites() {
        return Err(Error::DimensionMismatch { expected: state.n_sites(), found: settings.n_sites() });
    }
    if let Some(&d) = state.site_dims().iter().find(|&&d| d != 2) {
        return Err(Error::DimensionMismatch { expected: 2, found: d });
    }
    let p = pauli();
    let ladders: Vec<Matrix> =
        settings.angles.iter().zip(&settings.signs).map(|(&t, &s)| p.rotated_ladder(t, s)).collect();
    let factors: Vec<(usize, &Matrix)> = ladders.iter().enumerate().collect();
    state.local_product_expectation(&factors)
}

/// Closed-form MABK moment of the `n`-qubit GHZ state, valid for any `n`:
/// `2^{n−1} e^{−iΣ s_k θ_k}` when all signs agree, zero otherwise.
pub fn ghz_mabk_moment(n: usize, settings: &MeasurementSettings) -> Result<C64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("GHZ needs n ≥ 2, got {n}")));
    }
    if settings.n_sites() != n {
        return Err(Error::DimensionMismatch { expected: n, found: settings.n_sites() });
    }
    if !settings.all_same_sign() {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(settings.phase() * 2f64.powi(n as i32 - 1))
}

/// Local (hybrid LHS) bound on `Re Π` or `Re Π + Im Π` with `t` trusted sites.
///
/// For `t > 0`: `2^{(n−t)/2}` (Single) and `2^{(n−t+1)/2}` (Sum). For
/// `t = 0` only the MABK forms are defined: Single for odd `n` with
/// `2^{(n−1)/2}`, Sum for even `n` with `2^{n/2}`.
pub fn mabk_threshold(n: usize, t: usize, form: MabkForm) -> Result<f64> {
    if n == 0 || t > n {
        return Err(Error::InvalidForm { n, t, reason: "need 1 ≤ n and t ≤ n" });
    }
    let nf = n as f64;
    let tf = t as f64;
    match (t, form) {
        (0, MabkForm::Single) if n % 2 == 1 => Ok(2f64.powf((nf - 1.0) / 2.0)),
        (0, MabkForm::Sum) if n.is_multiple_of(2) => Ok(2f64.powf(nf / 2.0)),
        (0, MabkForm::Single) => Err(Error::InvalidForm { n, t, reason: "t = 0 Single form needs odd n" }),
        (0, MabkForm::Sum) => Err(Error::InvalidForm { n, t, reason: "t = 0 Sum form needs even n" }),
        (_, MabkForm::Single) => Ok(2f64.powf((nf - tf) / 2.0)),
        (_, MabkForm::Sum) => Ok(2f64.powf((nf - tf + 1.0) / 2.0)),
    }
}

/// Thresholds for genuine N-partite nonlocality and entanglement.
pub fn genuine_threshold(n: usize, kind: GenuineKind) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("genuine thresholds need n ≥ 2, got {n}")));
    }
    let nf = n as f64;
    Ok(match kind {
        GenuineKind::SvetlichnySum => 2f64.powf(nf - 1.0),
        GenuineKind::GenuineEntSingle => 2f64.powf(nf - 2.0),
        GenuineKind::GenuineEntSum => 2f64.powf(nf - 1.5),
    })
}

fn form_tag(form: MabkForm) -> &'static str {
    match form {
        MabkForm::Single => "re",
        MabkForm::Sum => "re+im",
    }
}

/// MABK criterion from an already computed moment.
pub fn mabk_result(moment: C64, partition: HybridPartition, form: MabkForm) -> Result<CriterionResult> {
    let (n, t) = (partition.n(), partition.t());
    let rhs = mabk_threshold(n, t, form)?;
    let id = format!("mabk-{}-n{n}-t{t}", form_tag(form));
    Ok(CriterionResult::exceeds(id, form.apply(moment), rhs, partition.verdict()))
}

/// Genuine-multipartite criterion from an already computed moment.
pub fn genuine_result(moment: C64, n: usize, kind: GenuineKind) -> Result<CriterionResult> {
    let rhs = genuine_threshold(n, kind)?;
    let id = match kind {
        GenuineKind::SvetlichnySum => format!("svetlichny-n{n}"),
        GenuineKind::GenuineEntSingle => format!("genuine-ent-re-n{n}"),
        GenuineKind::GenuineEntSum => format!("genuine-ent-re+im-n{n}"),
    };
    Ok(CriterionResult::exceeds(id, kind.form().apply(moment), rhs, kind.verdict()))
}

pub fn evaluate_mabk(
    state: &PureState,
    settings: &MeasurementSettings,
    partition: HybridPartition,
    form: MabkForm,
) -> Result<CriterionResult> {
    if partition.n() != state.n_sites() {
        return Err(Error::DimensionMismatch { expected: state.n_sites(), found: partition.n() });
    }
    mabk_result(mabk_moment(state, settings)?, partition, form)
}

pub fn evaluate_genuine(state: &PureState, settings: &MeasurementSettings, kind: GenuineKind) -> Result<CriterionResult> {
    genuine_result(mabk_moment(state, settings)?, state.n_sites(), kind)
}

/// Maximizes `form(Π)` over raising-ladder settings `θ_k = θ_0 + kδ`: a
/// grid scan of `(θ_0, δ)` followed by alternating golden-section
/// refinement of each coordinate.
pub fn optimize_mabk_settings(
    n: usize,
    form: MabkForm,
    moment: impl Fn(&MeasurementSettings) -> Result<C64>,
) -> Result<(MeasurementSettings, f64)> {
    use std::f64::consts::PI;
    const GRID: usize = 48;
    let value = |t0: f64, d: f64| -> Result<f64> { Ok(form.apply(moment(&MeasurementSettings::angle_ladder(n, t0, d))?)) };
    let step = 2.0 * PI / GRID as f64;
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for a in 0..GRID {
        for b in 0..GRID {
            let (t0, d) = (-PI + a as f64 * step, -PI + b as f64 * step);
            let v = value(t0, d)?;
            if v > best.2 {
                best = (t0, d, v);
            }
        }
    }
    let (mut t0, mut d, mut v) = best;
    let mut failure = None;
    for _ in 0..20 {
        let before = v;
        let mut eval = |x: f64, y: f64| match value(x, y) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        };
        let (nt0, v1) = golden_section_max(|x| eval(x, d), t0 - step, t0 + step, 1e-12);
        if v1 >= v {
            t0 = nt0;
            v = v1;
        }
        let (nd, v2) = golden_section_max(|y| eval(t0, y), d - step, d + step, 1e-12);
        if v2 >= v {
            d = nd;
            v = v2;
        }
        if v - before <= 1e-15 * v.abs().max(1.0) {
            break;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((MeasurementSettings::angle_ladder(n, t0, d), v))
}

/// CHSH combination `B = E(θ,φ) − E(θ,φ′) + E(θ′,φ) + E(θ′,φ′)`.
///
/// Correlations are taken as `E(α, β) = −⟨σ_A^α σ_B^β⟩`, the sign that makes
/// the singlet give `E(α, β) = cos(α − β)`. Local models obey `|B| ≤ 2`.
pub fn chsh_value(state: &PureState, theta: f64, theta_p: f64, phi: f64, phi_p: f64) -> Result<f64> {
    if state.site_dims() != [2, 2] {
        return Err(Error::InvalidParameter("CHSH needs exactly two qubits".into()));
    }
    let p = pauli();
    let e = |a: f64, b: f64| -> Result<f64> {
        let (ma, mb) = (p.rotated_component(a), p.rotated_component(b));
        Ok(-state.local_product_expectation(&[(0, &ma), (1, &mb)])?.re)
    };
    Ok(e(theta, phi)? - e(theta, phi_p)? + e(theta_p, phi)? + e(theta_p, phi_p)?)
}

/// Common spin of all sites, from the site dimensions.
fn common_spin(state: &PureState) -> Result<SpinMagnitude> {
    let dims = state.site_dims();
    let d = dims[0];
    if let Some(&other) = dims.iter().find(|&&x| x != d) {
        return Err(Error::DimensionMismatch { expected: d, found: other });
    }
    SpinMagnitude::from_twice(d as u32 - 1)
}

/// `|⟨∏_k J_k^{s_k}⟩|²` in standard spin units, with rotated ladders.
pub fn cfrd_lhs(state: &PureState, settings: &MeasurementSettings) -> Result<f64> {
    if settings.n_sites() != state.n_sites() {
        return Err(Error::DimensionMismatch { expected: state.n_sites(), found: settings.n_sites() });
    }
    let ops = SpinOperators::new(common_spin(state)?, UnitConvention::Standard)?;
    let ladders: Vec<Matrix> =
        settings.angles.iter().zip(&settings.signs).map(|(&t, &s)| ops.rotated_ladder(t, s)).collect();
    let factors: Vec<(usize, &Matrix)> = ladders.iter().enumerate().collect();
    Ok(state.local_product_expectation(&factors)?.norm_sqr())
}

fn check_cj(cj: &CjValue, j: SpinMagnitude) -> Result<()> {
    if cj.convention != UnitConvention::Standard {
        return Err(Error::InvalidParameter("CFRD bounds use the standard spin convention".into()));
    }
    if cj.j != j {
        return Err(Error::InvalidParameter(format!("C_J computed for j = {}, sites carry j = {j}", cj.j)));
    }
    Ok(())
}

/// `⟨∏_{k<t} (J² − (J_k^Z)² − C_J) ∏_{k≥t} (J² − (J_k^Z)²)⟩`. The operator is
/// diagonal in the product `J^Z` basis, so it is evaluated directly on the
/// amplitudes.
pub fn cfrd_rhs(state: &PureState, partition: HybridPartition, cj: &CjValue) -> Result<f64> {
    let j = common_spin(state)?;
    check_cj(cj, j)?;
    if partition.n() != state.n_sites() {
        return Err(Error::DimensionMismatch { expected: state.n_sites(), found: partition.n() });
    }
    let d = j.dim();
    let transverse: Vec<f64> = j.m_values().map(|m| j.casimir() - m * m).collect();
    let n = state.n_sites();
    let mut total = 0.0;
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut rest = idx;
        let mut factor = 1.0;
        for k in (0..n).rev() {
            let local = transverse[rest % d];
            rest /= d;
            factor *= if k < partition.t() { local - cj.value } else { local };
        }
        total += p * factor;
    }
    Ok(total)
}

pub fn evaluate_cfrd(state: &PureState, settings: &MeasurementSettings, partition: HybridPartition) -> Result<CriterionResult> {
    let cj = compute_cj(common_spin(state)?, UnitConvention::Standard)?;
    let lhs = cfrd_lhs(state, settings)?;
    let rhs = cfrd_rhs(state, partition, &cj)?;
    Ok(CriterionResult::exceeds(cfrd_id(state.n_sites(), partition.t()), lhs, rhs, partition.verdict()))
}

fn cfrd_id(n: usize, t: usize) -> String {
    format!("cfrd-n{n}-t{t}")
}

/// Closed-form `cfrd_lhs` for the correlated family
/// `(1/√n) Σ_m r_m |J,m⟩^{⊗N}`, valid for any `N`.
///
/// With all raising ladders the moment is `(1/n) Σ_m r_{m+1} r_m c_m^N`
/// (`c_m = √(J(J+1) − m(m+1))`), all lowering gives the same modulus, and
/// mixed signs with `N ≥ 2` leave the correlated subspace, giving zero.
pub fn cfrd_lhs_correlated(spec: &CorrelatedStateSpec, settings: &MeasurementSettings) -> Result<f64> {
    if settings.n_sites() != spec.n_sites {
        return Err(Error::DimensionMismatch { expected: spec.n_sites, found: settings.n_sites() });
    }
    if !settings.all_same_sign() {
        return Ok(0.0);
    }
    let j = spec.j;
    let nsites = spec.n_sites as i32;
    let moment: f64 = (0..j.dim() - 1)
        .map(|k| {
            let m = -j.j() + k as f64;
            spec.r[k + 1] * spec.r[k] * j.ladder(m).powi(nsites)
        })
        .sum::<f64>()
        / spec.norm_sqr();
    Ok(moment * moment)
}

/// Closed-form `cfrd_rhs` for the correlated family:
/// `(1/n) Σ_m r_m² (J(J+1) − m² − C)^t (J(J+1) − m²)^{N−t}`.
pub fn cfrd_rhs_correlated(spec: &CorrelatedStateSpec, partition: HybridPartition, cj: &CjValue) -> Result<f64> {
    check_cj(cj, spec.j)?;
    if partition.n() != spec.n_sites {
        return Err(Error::DimensionMismatch { expected: spec.n_sites, found: partition.n() });
    }
    let j = spec.j;
    let (t, rest) = (partition.t() as i32, (partition.n() - partition.t()) as i32);
    let sum: f64 = j
        .m_values()
        .rev()
        .zip(&spec.r)
        .map(|(m, r)| {
            let tr = j.casimir() - m * m;
            r * r * (tr - cj.value).powi(t) * tr.powi(rest)
        })
        .sum();
    Ok(sum / spec.norm_sqr())
}

pub fn evaluate_cfrd_correlated(
    spec: &CorrelatedStateSpec,
    settings: &MeasurementSettings,
    partition: HybridPartition,
    cj: &CjValue,
) -> Result<CriterionResult> {
    let lhs = cfrd_lhs_correlated(spec, settings)?;
    let rhs = cfrd_rhs_correlated(spec, partition, cj)?;
    Ok(CriterionResult::exceeds(cfrd_id(spec.n_sites, partition.t()), lhs, rhs, partition.verdict()))
}

/// Best correlated-family amplitudes found by [`optimize_amplitudes`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeOptimum {
    /// `r_m` for `m = −J … J`, symmetric, largest entry 1.
    pub r: Vec<f64>,
    pub settings: MeasurementSettings,
    pub result: CriterionResult,
}

const RESTARTS: usize = 20;
const AMPLITUDE_SEED: u64 = 0x5EED_CF4D;

/// Maximizes the CFRD ratio over symmetric real amplitudes `r_m = r_{−m}`.
///
/// The free amplitudes `r_m, m ≥ 0` are searched coordinate-wise in
/// `[0, 1]` by golden section from 20 seeded restarts (the ratio is
/// invariant under overall scaling, so the box loses nothing). Settings are
/// all raising ladders at `θ = 0`: a common rotation only changes the phase
/// of the moment, never its modulus.
pub fn optimize_amplitudes(n_sites: usize, j: SpinMagnitude, partition: HybridPartition) -> Result<AmplitudeOptimum> {
    if n_sites < 2 {
        return Err(Error::InvalidParameter(format!("need n_sites ≥ 2, got {n_sites}")));
    }
    if partition.n() != n_sites {
        return Err(Error::DimensionMismatch { expected: n_sites, found: partition.n() });
    }
    let cj = compute_cj(j, UnitConvention::Standard)?;
    let settings = MeasurementSettings::uniform(n_sites, 0.0, Sign::Plus);
    let d = j.dim();
    let free = d.div_ceil(2);
    let expand = |half: &[f64]| -> Vec<f64> {
        // half[i] is r_m for the i-th smallest m ≥ 0.
        (0..d)
            .map(|k| {
                let i = if k < d / 2 { d / 2 - 1 - k + (d % 2) } else { k - d / 2 };
                half[i]
            })
            .collect()
    };
    let ratio = |half: &[f64]| -> f64 {
        if half.iter().all(|&x| x <= 0.0) {
            return 0.0;
        }
        CorrelatedStateSpec::new(n_sites, j, expand(half))
            .and_then(|spec| evaluate_cfrd_correlated(&spec, &settings, partition, &cj))
            .map_or(0.0, |r| r.ratio)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(AMPLITUDE_SEED);
    let mut best_half = vec![1.0; free];
    let mut best = ratio(&best_half);
    for restart in 0..RESTARTS {
        let mut half: Vec<f64> =
            if restart == 0 { vec![1.0; free] } else { (0..free).map(|_| rng.random_range(0.0..1.0)).collect() };
        let mut value = ratio(&half);
        for _ in 0..200 {
            let before = value;
            for i in 0..free {
                let mut trial = half.clone();
                let (x, v) = golden_section_max(
                    |x| {
                        trial[i] = x;
                        ratio(&trial)
                    },
                    0.0,
                    1.0,
                    1e-10,
                );
                if v > value {
                    half[i] = x;
                    value = v;
                }
            }
            if value - before <= 1e-8 * value.abs().max(1e-300) {
                break;
            }
        }
        if value > best {
            best = value;
            best_half = half;
        }
    }
    let max = best_half.iter().cloned().fold(0.0, f64::max);
    let r: Vec<f64> = expand(&best_half).into_iter().map(|x| x / max).collect();
    let spec = CorrelatedStateSpec::new(n_sites, j, r.clone())?;
    let result = evaluate_cfrd_correlated(&spec, &settings, partition, &cj)?;
    Ok(AmplitudeOptimum { r, settings, result })
}
