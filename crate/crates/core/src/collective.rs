//! Collective-spin criteria: squeezing, depth of entanglement, collective
//! steering and EPR inference variances.

use serde::{Deserialize, Serialize};

use crate::bounds::CurveBank;
use crate::criterion::{CriterionResult, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigensolve, Matrix, C64};
use crate::spin::{SpinMagnitude, SpinOperators, UnitConvention};
use crate::state::{embed_on_sites, PureState};

/// Means and variances of the collective spin `J = Σ_k J_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollectiveMoments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub mean_z: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub var_z: f64,
    pub n_atoms: usize,
    /// Largest total spin available to the system, `Σ_k J_k`.
    pub j_tot: f64,
    /// `⟨J²⟩`.
    pub mean_j_sq: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl CollectiveMoments {
    pub fn mean(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.mean_x,
            Axis::Y => self.mean_y,
            Axis::Z => self.mean_z,
        }
    }

    pub fn var(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.var_x,
            Axis::Y => self.var_y,
            Axis::Z => self.var_z,
        }
    }

    /// Collective moments of a state of distinguishable sites, each site's
    /// spin read off from its dimension.
    pub fn from_state(state: &PureState) -> Result<Self> {
        let ops = state
            .site_dims()
            .iter()
            .map(|&d| {
                let j = SpinMagnitude::from_twice(d as u32 - 1)?;
                SpinOperators::new(j, UnitConvention::Standard)
            })
            .collect::<Result<Vec<_>>>()?;
        let n = ops.len();
        let pick = |o: &SpinOperators, a: Axis| -> Matrix {
            match a {
                Axis::X => o.jx.clone(),
                Axis::Y => o.jy.clone(),
                Axis::Z => o.jz.clone(),
            }
        };
        let mut means = [0.0; 3];
        let mut seconds = [0.0; 3];
        for (slot, axis) in [Axis::X, Axis::Y, Axis::Z].into_iter().enumerate() {
            let local: Vec<Matrix> = ops.iter().map(|o| pick(o, axis)).collect();
            for k in 0..n {
                means[slot] += state.local_product_expectation(&[(k, &local[k])])?.re;
                let sq = local[k].matmul(&local[k]);
                seconds[slot] += state.local_product_expectation(&[(k, &sq)])?.re;
                for l in (k + 1)..n {
                    let pair = state.local_product_expectation(&[(k, &local[k]), (l, &local[l])])?;
                    seconds[slot] += 2.0 * pair.re;
                }
            }
        }
        let var = |s: usize| (seconds[s] - means[s] * means[s]).max(0.0);
        Ok(Self {
            mean_x: means[0],
            mean_y: means[1],
            mean_z: means[2],
            var_x: var(0),
            var_y: var(1),
            var_z: var(2),
            n_atoms: n,
            j_tot: ops.iter().map(|o| o.magnitude.j()).sum(),
            mean_j_sq: seconds.iter().sum(),
        })
    }
}

/// Squeezing parameter `ξ = √N ΔJ^{squeezed} / |⟨J^{mean}⟩|`.
pub fn xi_parameter(m: &CollectiveMoments, squeezed: Axis, mean_axis: Axis) -> Result<f64> {
    let mean = m.mean(mean_axis);
    let n = m.n_atoms as f64;
    if mean.abs() <= 1e-9 * n.max(1.0) {
        return Err(Error::UndefinedXi(mean));
    }
    Ok(n.sqrt() * m.var(squeezed).max(0.0).sqrt() / mean.abs())
}

/// Spin-squeezing entanglement test `Δ²J^{squeezed} < ⟨J^{mean}⟩²/N` for
/// spin-1/2 constituents. Fires exactly when `ξ < 1`.
pub fn pairwise_entanglement_test(m: &CollectiveMoments, squeezed: Axis, mean_axis: Axis) -> CriterionResult {
    let mean = m.mean(mean_axis);
    let rhs = mean * mean / m.n_atoms.max(1) as f64;
    CriterionResult::below("spin-squeezing", m.var(squeezed), rhs, Verdict::Entanglement)
}

/// `J_tot · F_{J0}(|⟨J^X⟩| / J_tot)`, the smallest `Δ²J^Z` compatible with
/// blocks of spin at most `J0`. The curve is read through its certified
/// lower envelope, so a violation of the returned value is a violation of
/// the exact bound.
pub fn sm_bound(j_tot: f64, j0: SpinMagnitude, mean_x: f64, bank: &CurveBank) -> Result<f64> {
    if j_tot.is_nan() || j_tot <= 0.0 {
        return Err(Error::InvalidParameter(format!("j_tot must be positive, got {j_tot}")));
    }
    let x = mean_x.abs() / j_tot;
    if x > 1.0 + 1e-12 {
        return Err(Error::OutOfRange(x));
    }
    Ok(j_tot * bank.get(j0)?.lower_bound(x.min(1.0))?)
}

/// Outcome of the depth-of-entanglement search.
///
/// Violating the `F_{J0}` bound proves that some entangled block carries
/// spin above `J0`, hence at least `2J0 + 1` particles; `n0` stores that
/// certified minimum. (Stated as a hypothesis class, "blocks of at most
/// `2J0` particles" is what gets ruled out.)
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthResult {
    pub n0: usize,
    pub violated_curves: Vec<SpinMagnitude>,
}

/// Depth of entanglement from `(Δ²J^Z, ⟨J^X⟩)`.
pub fn depth_of_entanglement(m: &CollectiveMoments, bank: &CurveBank) -> Result<DepthResult> {
    depth_of_entanglement_along(m, Axis::Z, Axis::X, bank)
}

/// Depth of entanglement with explicit axis roles. Spins `J0 = 1/2, 1, …`
/// are tried in order up to `J_tot` (or the largest curve in the bank) and
/// the search stops at the first bound that holds; the curves are nested,
/// so no larger `J0` can be violated after that.
pub fn depth_of_entanglement_along(
    m: &CollectiveMoments,
    squeezed: Axis,
    mean_axis: Axis,
    bank: &CurveBank,
) -> Result<DepthResult> {
    let var = m.var(squeezed);
    let mean = m.mean(mean_axis);
    let cap = bank.j_max().map_or(0, |j| j.twice_j()).min((2.0 * m.j_tot).floor() as u32);
    let slack = 1e-9 * m.j_tot.max(1.0);
    let mut violated = Vec::new();
    for twice in 1..=cap {
        let j0 = SpinMagnitude::from_twice(twice)?;
        let bound = sm_bound(m.j_tot, j0, mean, bank)?;
        if var < bound - slack {
            violated.push(j0);
        } else {
            break;
        }
    }
    let n0 = violated.last().map_or(1, |j| j.twice_j() as usize + 1);
    Ok(DepthResult { n0, violated_curves: violated })
}

/// Collective steering bound `J_tot · F_{J0}(|⟨J_B^Z⟩| / J_tot)` on the
/// inferred variance of group A.
pub fn steering_bound(j_tot: f64, j0: SpinMagnitude, mean_z_of_b: f64, bank: &CurveBank) -> Result<f64> {
    sm_bound(j_tot, j0, mean_z_of_b, bank)
}

/// Steering test: group A steers group B when the inference variance falls
/// below [`steering_bound`].
pub fn collective_steering_test(
    inferred_var: f64,
    j_tot: f64,
    j0: SpinMagnitude,
    mean_z_of_b: f64,
    bank: &CurveBank,
) -> Result<CriterionResult> {
    let bound = steering_bound(j_tot, j0, mean_z_of_b, bank)?;
    Ok(CriterionResult::below(format!("collective-steering-j{j0}"), inferred_var, bound, Verdict::EprSteering))
}

/// Hermitian observable acting on an ordered list of sites.
#[derive(Clone, Debug)]
pub struct LocalObservable {
    pub sites: Vec<usize>,
    pub matrix: Matrix,
}

impl LocalObservable {
    pub fn new(sites: Vec<usize>, matrix: Matrix) -> Self {
        Self { sites, matrix }
    }

    pub fn single(site: usize, matrix: Matrix) -> Self {
        Self { sites: vec![site], matrix }
    }
}

/// Average conditional variances `V(X|O_B)` and `V(P|Q_B)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InferenceVariances {
    pub v_x_given_b: f64,
    pub v_p_given_b: f64,
}

/// `Σ_b P(b) Var(X | b)` over the outcomes `b` of `obs_b`.
fn conditional_variance(state: &PureState, x: &LocalObservable, obs_b: &LocalObservable) -> Result<f64> {
    let dims = state.site_dims();
    let x_full = embed_on_sites(&x.matrix, &x.sites, dims)?.matrix;
    let x_sq = x_full.matmul(&x_full);
    let eig = hermitian_eigensolve(&obs_b.matrix)?;
    let d = obs_b.matrix.dim();
    let psi = state.amplitudes();
    let mut total = 0.0;
    let mut k = 0;
    while k < d {
        // Group (numerically) degenerate eigenvalues into one outcome.
        let mut end = k + 1;
        while end < d && (eig.values[end] - eig.values[k]).abs() <= 1e-9 * (1.0 + eig.values[k].abs()) {
            end += 1;
        }
        let projector = (k..end).fold(Matrix::zeros(d), |acc, i| {
            let v = eig.vector(i);
            &acc + &outer(&v, &v)
        });
        let phi = embed_on_sites(&projector, &obs_b.sites, dims)?.matrix.mat_vec(psi);
        let p = linalg::norm(&phi).powi(2);
        if p > 1e-15 {
            let mean = linalg::inner(&phi, &x_full.mat_vec(&phi)).re / p;
            let second = linalg::inner(&phi, &x_sq.mat_vec(&phi)).re / p;
            total += p * (second - mean * mean).max(0.0);
        }
        k = end;
    }
    Ok(total)
}

fn check_disjoint(a: &[&LocalObservable], b: &[&LocalObservable]) -> Result<()> {
    for oa in a {
        for ob in b {
            if let Some(&s) = oa.sites.iter().find(|s| ob.sites.contains(s)) {
                return Err(Error::OverlappingSupport(s));
            }
        }
    }
    Ok(())
}

/// Inference variances of `obs_a_x` given `obs_b_1` and of `obs_a_p` given
/// `obs_b_2`, from the post-measurement conditional states.
pub fn inference_variances(
    state: &PureState,
    obs_a_x: &LocalObservable,
    obs_a_p: &LocalObservable,
    obs_b_1: &LocalObservable,
    obs_b_2: &LocalObservable,
) -> Result<InferenceVariances> {
    check_disjoint(&[obs_a_x, obs_a_p], &[obs_b_1, obs_b_2])?;
    Ok(InferenceVariances {
        v_x_given_b: conditional_variance(state, obs_a_x, obs_b_1)?,
        v_p_given_b: conditional_variance(state, obs_a_p, obs_b_2)?,
    })
}

/// EPR paradox test `V(X|O_B) V(P|Q_B) < bound`, where `bound` is the
/// uncertainty-product limit of the two A observables.
pub fn epr_paradox_test(iv: &InferenceVariances, bound: f64) -> Result<CriterionResult> {
    if bound.is_nan() || bound <= 0.0 {
        return Err(Error::InvalidParameter(format!("EPR bound must be positive, got {bound}")));
    }
    Ok(CriterionResult::below("epr-inference", iv.v_x_given_b * iv.v_p_given_b, bound, Verdict::EprSteering))
}

/// Outer product `|a⟩⟨b|`.
pub fn outer(a: &[C64], b: &[C64]) -> Matrix {
    Matrix::from_fn(a.len(), |r, c| a[r] * b[c].conj())
}
