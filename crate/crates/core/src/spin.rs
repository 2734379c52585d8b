//! Single-site spin-J operators.
//!
//! The basis of a spin-J site is `|J, m⟩` ordered by *descending* `m`:
//! index 0 is `m = +J` ("up", `|0⟩` in qubit notation) and index `2J` is
//! `m = −J`. With this ordering the Pauli `σ_z` is `diag(1, −1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, C64, I};

/// Spin quantum number stored as the integer `2J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinMagnitude {
    twice_j: u32,
}

impl SpinMagnitude {
    pub const HALF: Self = Self { twice_j: 1 };
    pub const ONE: Self = Self { twice_j: 2 };

    pub fn from_twice(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice_j })
    }

    /// Accepts any positive half-integer, e.g. `0.5`, `1.0`, `1.5`.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(twice));
        }
        Self::from_twice(twice.round() as u32)
    }

    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub fn j(self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    /// Local Hilbert-space dimension `2J + 1`.
    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    /// `m` value of basis index `i` (descending order).
    pub fn m_of(self, i: usize) -> f64 {
        self.j() - i as f64
    }

    /// `m` values in basis order `J, J−1, …, −J`.
    pub fn m_values(self) -> impl DoubleEndedIterator<Item = f64> + ExactSizeIterator {
        let j = self.j();
        (0..self.dim()).map(move |i| j - i as f64)
    }

    pub fn casimir(self) -> f64 {
        let j = self.j();
        j * (j + 1.0)
    }

    /// Ladder element `⟨m+1|J⁺|m⟩ = √(J(J+1) − m(m+1))`.
    pub fn ladder(self, m: f64) -> f64 {
        (self.casimir() - m * (m + 1.0)).max(0.0).sqrt()
    }

    pub fn is_half_integer(self) -> bool {
        self.twice_j % 2 == 1
    }

    /// Next spin up, `J + 1/2`.
    pub fn next_half(self) -> Self {
        Self { twice_j: self.twice_j + 1 }
    }
}

impl fmt::Display for SpinMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// Outcome scaling of the spin components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnitConvention {
    /// Outcomes `m ∈ {−J, …, J}`.
    Standard,
    /// Qubits only: outcomes rescaled to `±1` (Pauli matrices).
    Pauli,
}

impl UnitConvention {
    /// Multiplier applied to the Standard operators.
    pub fn factor(self) -> f64 {
        match self {
            UnitConvention::Standard => 1.0,
            UnitConvention::Pauli => 2.0,
        }
    }
}

/// `J^X, J^Y, J^Z, J^±, J²` for one site.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub jx: Matrix,
    pub jy: Matrix,
    pub jz: Matrix,
    pub jplus: Matrix,
    pub jminus: Matrix,
    pub jsq: Matrix,
    pub magnitude: SpinMagnitude,
    pub convention: UnitConvention,
}

impl SpinOperators {
    /// Build the operator set from the ladder elements.
    pub fn new(magnitude: SpinMagnitude, convention: UnitConvention) -> Result<Self> {
        if convention == UnitConvention::Pauli && magnitude != SpinMagnitude::HALF {
            return Err(Error::Convention(magnitude.j()));
        }
        let d = magnitude.dim();
        let c = convention.factor();
        let mut jplus = Matrix::zeros(d);
        for col in 1..d {
            let m = magnitude.m_of(col);
            jplus.set(col - 1, col, C64::new(c * magnitude.ladder(m), 0.0));
        }
        let jminus = jplus.adjoint();
        let jx = (&jplus + &jminus).scale_real(0.5);
        let jy = (&jplus - &jminus).scale(C64::new(0.0, -0.5));
        let jz = Matrix::from_diag(&magnitude.m_values().map(|m| c * m).collect::<Vec<_>>());
        let jsq = &(&jx.matmul(&jx) + &jy.matmul(&jy)) + &jz.matmul(&jz);
        Ok(Self { jx, jy, jz, jplus, jminus, jsq, magnitude, convention })
    }

    pub fn dim(&self) -> usize {
        self.magnitude.dim()
    }

    /// `cos θ J^X + sin θ J^Y`.
    pub fn rotated_component(&self, theta: f64) -> Matrix {
        &self.jx.scale_real(theta.cos()) + &self.jy.scale_real(theta.sin())
    }

    /// Ladder operator in the frame rotated by `θ` about `z`:
    /// `J^{θ,X} + i·s·J^{θ,Y}` with `J^{θ,Y} = −sin θ J^X + cos θ J^Y`.
    pub fn rotated_ladder(&self, theta: f64, sign: Sign) -> Matrix {
        let x_theta = self.rotated_component(theta);
        let y_theta = &self.jx.scale_real(-theta.sin()) + &self.jy.scale_real(theta.cos());
        let s = f64::from(sign.value());
        &x_theta + &y_theta.scale(I * s)
    }

    /// `(J^X)² + (J^Y)²`, which equals `J² − (J^Z)²`.
    pub fn transverse_square(&self) -> Matrix {
        &self.jx.matmul(&self.jx) + &self.jy.matmul(&self.jy)
    }

    /// Diagonal of `(J^X)² + (J^Y)²` in the `J^Z` basis.
    pub fn transverse_square_diag(&self) -> Vec<f64> {
        let c2 = self.convention.factor().powi(2);
        self.magnitude
            .m_values()
            .map(|m| c2 * (self.magnitude.casimir() - m * m))
            .collect()
    }
}

/// Ladder sign `s_k`: `+1` selects `J⁺`, `−1` selects `J⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    fn is_zero_matrix(m: &Matrix, tol: f64) -> bool {
        m.as_slice().iter().all(|z| (*z - ZERO).norm() <= tol)
    }

    fn ops(twice: u32, conv: UnitConvention) -> SpinOperators {
        SpinOperators::new(SpinMagnitude::from_twice(twice).unwrap(), conv).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        let s = ops(1, UnitConvention::Pauli);
        assert_eq!(s.jx, Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(s.jz, Matrix::from_diag(&[1.0, -1.0]));
        let sy = Matrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => ZERO,
        });
        assert!(s.jy.max_abs_diff(&sy) < 1e-15);
    }

    #[test]
    fn pauli_rejected_above_half() {
        let err = SpinOperators::new(SpinMagnitude::ONE, UnitConvention::Pauli).unwrap_err();
        assert_eq!(err, Error::Convention(1.0));
    }

    #[test]
    fn spin_one_ladder_and_casimir() {
        let s = ops(2, UnitConvention::Standard);
        // ⟨0|J⁺|−1⟩: row index of m=0 is 1, column of m=−1 is 2.
        assert!((s.jplus.get(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.jsq.max_abs_diff(&Matrix::identity(3).scale_real(2.0)) < 1e-12);
    }

    #[test]
    fn algebra_invariants_up_to_spin_four() {
        for twice in 1..=8 {
            let conv_list: &[UnitConvention] = if twice == 1 {
                &[UnitConvention::Standard, UnitConvention::Pauli]
            } else {
                &[UnitConvention::Standard]
            };
            for &conv in conv_list {
                let s = ops(twice, conv);
                let c = conv.factor();
                for m in [&s.jx, &s.jy, &s.jz, &s.jsq] {
                    assert!(m.hermiticity_error() < 1e-12);
                }
                let comm = s.jx.commutator(&s.jy);
                assert!(comm.max_abs_diff(&s.jz.scale(I * c)) < 1e-12, "2j={twice}");
                assert!((&s.jx + &s.jy.scale(I)).max_abs_diff(&s.jplus) == 0.0);
                assert!((&s.jx - &s.jy.scale(I)).max_abs_diff(&s.jminus) == 0.0);
                let cas = c * c * s.magnitude.casimir();
                assert!(s.jsq.max_abs_diff(&Matrix::identity(s.dim()).scale_real(cas)) < 1e-12);
                let diag = s.transverse_square_diag();
                assert!(s.transverse_square().max_abs_diff(&Matrix::from_diag(&diag)) < 1e-12);
            }
        }
    }

    #[test]
    fn rotated_components() {
        let s = ops(1, UnitConvention::Pauli);
        assert!(s.rotated_component(0.0).max_abs_diff(&s.jx) < 1e-15);
        assert!(s.rotated_component(std::f64::consts::FRAC_PI_2).max_abs_diff(&s.jy) < 1e-15);
        let r = s.rotated_component(std::f64::consts::FRAC_PI_4);
        let e = crate::linalg::hermitian_eigensolve(&r).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotated_ladder_is_phase_times_ladder() {
        let s = ops(3, UnitConvention::Standard);
        let theta = 0.37;
        let plus = s.rotated_ladder(theta, Sign::Plus);
        let want = s.jplus.scale(C64::from_polar(1.0, -theta));
        assert!(plus.max_abs_diff(&want) < 1e-14);
        assert!(is_zero_matrix(&(&s.rotated_ladder(0.0, Sign::Minus) - &s.jminus), 1e-15));
    }

    #[test]
    fn display_half_integers() {
        assert_eq!(SpinMagnitude::HALF.to_string(), "1/2");
        assert_eq!(SpinMagnitude::new(2.0).unwrap().to_string(), "2");
        assert!(SpinMagnitude::new(0.75).is_err());
        assert!(SpinMagnitude::new(0.0).is_err());
    }
}
