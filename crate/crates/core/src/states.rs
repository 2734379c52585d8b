//! Constructors for the states the criteria are evaluated on.

use serde::{Deserialize, Serialize};

use crate::collective::CollectiveMoments;
use crate::error::{Error, Result};
use crate::linalg::{self, SymTridiagonal, C64, ZERO};
use crate::spin::SpinMagnitude;
use crate::state::{composite_dim, PureState};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Two-qubit singlet `(|↑↓⟩ − |↓↑⟩)/√2`.
pub fn singlet_state() -> PureState {
    let mut amps = vec![ZERO; 4];
    amps[0b01] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[0b10] = C64::new(-FRAC_1_SQRT_2, 0.0);
    PureState::from_normalized(amps, vec![2, 2])
}

/// `(|0⟩^⊗N + |1⟩^⊗N)/√2` on `n_sites` qubits (`|0⟩` = spin up).
pub fn ghz_state(n_sites: usize) -> Result<PureState> {
    if n_sites < 2 {
        return Err(Error::InvalidParameter(format!("GHZ state needs n ≥ 2, got {n_sites}")));
    }
    let dims = vec![2; n_sites];
    let dim = composite_dim(&dims)?;
    let mut amps = vec![ZERO; dim];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    Ok(PureState::from_normalized(amps, dims))
}

/// `N` sites of spin `J` in the correlated superposition
/// `Σ_m r_m |J,m⟩^⊗N / √(Σ r_m²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedStateSpec {
    pub n_sites: usize,
    pub j: SpinMagnitude,
    /// Amplitudes ordered `m = −J, −J+1, …, +J`; need not be normalized.
    pub r: Vec<f64>,
}

impl CorrelatedStateSpec {
    pub fn new(n_sites: usize, j: SpinMagnitude, r: Vec<f64>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidParameter("correlated state needs n ≥ 1".into()));
        }
        if r.len() != j.dim() {
            return Err(Error::DimensionMismatch { expected: j.dim(), found: r.len() });
        }
        if r.iter().all(|&x| x == 0.0) {
            return Err(Error::ZeroAmplitudes);
        }
        Ok(Self { n_sites, j, r })
    }

    /// Uniform amplitudes, the maximally entangled member of the family.
    pub fn uniform(n_sites: usize, j: SpinMagnitude) -> Result<Self> {
        Self::new(n_sites, j, vec![1.0; j.dim()])
    }

    /// `Σ r_m²`.
    pub fn norm_sqr(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum()
    }

    /// `r_m` for a given `m`.
    pub fn amplitude(&self, m: f64) -> f64 {
        let idx = (m + self.j.j()).round() as isize;
        if idx < 0 || idx as usize >= self.r.len() {
            0.0
        } else {
            self.r[idx as usize]
        }
    }
}

pub fn correlated_state(spec: &CorrelatedStateSpec) -> Result<PureState> {
    let d = spec.j.dim();
    let dims = vec![d; spec.n_sites];
    let dim = composite_dim(&dims)?;
    if spec.r.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroAmplitudes);
    }
    let mut amps = vec![ZERO; dim];
    // r[k] is m = −J + k, i.e. basis index d − 1 − k.
    let repunit: usize = (0..spec.n_sites).fold(0, |acc, _| acc * d + 1);
    for (k, &rk) in spec.r.iter().enumerate() {
        let idx = d - 1 - k;
        amps[idx * repunit] = C64::new(rk, 0.0);
    }
    PureState::new(amps, dims)
}

/// Parameters of `H = κ(a†b + ab†) + (g/2)[a†a†aa + b†b†bb]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BecParams {
    pub n_atoms: usize,
    pub kappa: f64,
    pub g: f64,
}

impl BecParams {
    pub fn new(n_atoms: usize, kappa: f64, g: f64) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::InvalidParameter("n_atoms must be ≥ 1".into()));
        }
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::InvalidParameter(format!("kappa must be > 0, got {kappa}")));
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameter(format!("g must be ≥ 0, got {g}")));
        }
        Ok(Self { n_atoms, kappa, g })
    }

    /// Parameters at a given `Ng/κ` with `κ = 1`.
    pub fn from_ratio(n_atoms: usize, ng_over_kappa: f64) -> Result<Self> {
        Self::new(n_atoms, 1.0, ng_over_kappa / n_atoms as f64)
    }
}

/// Amplitudes over the Fock basis `|n_a, N − n_a⟩`, indexed by `n_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amplitudes: Vec<C64>,
    n_atoms: usize,
}

impl TwoModeState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("two-mode state needs N ≥ 0 atoms".into()));
        }
        let nrm = linalg::norm(&amplitudes);
        if nrm == 0.0 {
            return Err(Error::ZeroAmplitudes);
        }
        let n_atoms = amplitudes.len() - 1;
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / nrm).collect(), n_atoms })
    }

    /// Fock state with `n_a` atoms in mode `a`.
    pub fn fock(n_atoms: usize, n_a: usize) -> Result<Self> {
        if n_a > n_atoms {
            return Err(Error::InvalidParameter(format!("n_a = {n_a} exceeds N = {n_atoms}")));
        }
        let mut amps = vec![ZERO; n_atoms + 1];
        amps[n_a] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    /// `a†b` applied to the state: `|n_a⟩ → √((n_a+1)(N−n_a)) |n_a+1⟩`.
    fn raise(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n_atoms;
        let mut out = vec![ZERO; n + 1];
        for na in 0..n {
            out[na + 1] = v[na] * (((na + 1) * (n - na)) as f64).sqrt();
        }
        out
    }

    fn lower(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n_atoms;
        let mut out = vec![ZERO; n + 1];
        for na in 1..=n {
            out[na - 1] = v[na] * ((na * (n - na + 1)) as f64).sqrt();
        }
        out
    }

    fn apply_jx(&self, v: &[C64]) -> Vec<C64> {
        let (p, m) = (self.raise(v), self.lower(v));
        p.iter().zip(&m).map(|(a, b)| (a + b) * 0.5).collect()
    }

    fn apply_jy(&self, v: &[C64]) -> Vec<C64> {
        let (p, m) = (self.raise(v), self.lower(v));
        p.iter().zip(&m).map(|(a, b)| (a - b) * C64::new(0.0, -0.5)).collect()
    }

    fn apply_jz(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n_atoms as f64;
        v.iter()
            .enumerate()
            .map(|(na, z)| z * (na as f64 - 0.5 * n))
            .collect()
    }
}

/// Fock-basis matrix of the two-mode Hamiltonian.
pub fn bec_hamiltonian(p: &BecParams) -> SymTridiagonal {
    let n = p.n_atoms;
    let diag = (0..=n)
        .map(|na| {
            let nb = n - na;
            let pairs = |k: usize| (k * k.saturating_sub(1)) as f64;
            0.5 * p.g * (pairs(na) + pairs(nb))
        })
        .collect();
    let off = (0..n)
        .map(|na| p.kappa * (((na + 1) * (n - na)) as f64).sqrt())
        .collect();
    SymTridiagonal::new(diag, off)
}

/// Ground state with the largest-magnitude amplitude made real positive.
pub fn bec_ground_state(p: &BecParams) -> TwoModeState {
    let (_, v) = bec_hamiltonian(p).lowest_eigenpair();
    TwoModeState {
        amplitudes: v.into_iter().map(|x| C64::new(x, 0.0)).collect(),
        n_atoms: p.n_atoms,
    }
}

/// Collective moments from the Schwinger construction
/// `J^Z = (a†a − b†b)/2`, `J^X = (a†b + ab†)/2`, `J^Y = (a†b − ab†)/2i`.
pub fn schwinger_moments(s: &TwoModeState) -> CollectiveMoments {
    let psi = s.amplitudes();
    let jx = s.apply_jx(psi);
    let jy = s.apply_jy(psi);
    let jz = s.apply_jz(psi);
    let mean = |w: &[C64]| linalg::inner(psi, w).re;
    let second = |w: &[C64]| linalg::norm(w).powi(2);
    let (mx, my, mz) = (mean(&jx), mean(&jy), mean(&jz));
    let (sx, sy, sz) = (second(&jx), second(&jy), second(&jz));
    CollectiveMoments {
        mean_x: mx,
        mean_y: my,
        mean_z: mz,
        var_x: (sx - mx * mx).max(0.0),
        var_y: (sy - my * my).max(0.0),
        var_z: (sz - mz * mz).max(0.0),
        n_atoms: s.n_atoms(),
        j_tot: 0.5 * s.n_atoms() as f64,
        mean_j_sq: sx + sy + sz,
    }
}
