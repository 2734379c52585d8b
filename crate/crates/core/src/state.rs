//! Pure states and operators on a composite of sites.
//!
//! Site 0 is the slowest-varying index of the product basis, so the basis
//! label of amplitude `k` is the mixed-radix expansion of `k` with digit 0
//! leftmost.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, C64, ZERO};

/// Largest composite dimension handled by the dense tensor path.
pub const DENSE_CAP: usize = 4096;

const NORM_TOL: f64 = 1e-12;

pub(crate) fn composite_dim(site_dims: &[usize]) -> Result<usize> {
    let mut dim = 1usize;
    for &d in site_dims {
        dim = dim.checked_mul(d).ok_or(Error::SizeCap { dim: usize::MAX, cap: DENSE_CAP })?;
        if dim > DENSE_CAP {
            return Err(Error::SizeCap { dim, cap: DENSE_CAP });
        }
    }
    Ok(dim)
}

/// Normalized state vector over `⊗_k C^{d_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    site_dims: Vec<usize>,
}

impl PureState {
    /// Wraps `amplitudes`, normalizing them. Fails on a zero vector or a
    /// length that does not match `site_dims`.
    pub fn new(amplitudes: Vec<C64>, site_dims: Vec<usize>) -> Result<Self> {
        let dim = composite_dim(&site_dims)?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: amplitudes.len() });
        }
        let nrm = linalg::norm(&amplitudes);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::ZeroAmplitudes);
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / nrm).collect();
        Ok(Self { amplitudes, site_dims })
    }

    /// Product state `|ψ_0⟩ ⊗ |ψ_1⟩ ⊗ …`; each factor is normalized.
    pub fn product(factors: &[Vec<C64>]) -> Result<Self> {
        let site_dims: Vec<usize> = factors.iter().map(Vec::len).collect();
        composite_dim(&site_dims)?;
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            let nrm = linalg::norm(f);
            if nrm == 0.0 {
                return Err(Error::ZeroAmplitudes);
            }
            amps = amps
                .iter()
                .flat_map(|&a| f.iter().map(move |&b| a * b / nrm))
                .collect();
        }
        Self::new(amps, site_dims)
    }

    /// Haar-random state (normalized complex Gaussian vector).
    pub fn random<R: Rng + ?Sized>(site_dims: Vec<usize>, rng: &mut R) -> Result<Self> {
        let dim = composite_dim(&site_dims)?;
        let amps = random_vector(dim, rng);
        Self::new(amps, site_dims)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn n_sites(&self) -> usize {
        self.site_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    /// `⟨ψ|op|ψ⟩`.
    pub fn expectation(&self, op: &CompositeOperator) -> Result<C64> {
        self.check_dims(&op.site_dims)?;
        Ok(linalg::inner(&self.amplitudes, &op.matrix.mat_vec(&self.amplitudes)))
    }

    /// `⟨op²⟩ − ⟨op⟩²` for a Hermitian `op`.
    pub fn variance(&self, op: &CompositeOperator) -> Result<f64> {
        self.check_dims(&op.site_dims)?;
        let herr = op.matrix.hermiticity_error();
        if herr > 1e-10 {
            return Err(Error::NotHermitian(herr));
        }
        let v = op.matrix.mat_vec(&self.amplitudes);
        let mean = linalg::inner(&self.amplitudes, &v).re;
        let second = linalg::norm(&v).powi(2);
        Ok(second - mean * mean)
    }

    /// Applies `ops[k]` at `sites[k]` for every k and returns the resulting
    /// (unnormalized) vector. Avoids building the composite matrix.
    pub fn apply_local_product(&self, factors: &[(usize, &Matrix)]) -> Result<Vec<C64>> {
        let mut v = self.amplitudes.clone();
        for &(site, op) in factors {
            v = apply_local(&v, &self.site_dims, site, op)?;
        }
        Ok(v)
    }

    /// `⟨ψ| ∏_k op_k |ψ⟩` with each factor acting on its own site.
    pub fn local_product_expectation(&self, factors: &[(usize, &Matrix)]) -> Result<C64> {
        let v = self.apply_local_product(factors)?;
        Ok(linalg::inner(&self.amplitudes, &v))
    }

    fn check_dims(&self, dims: &[usize]) -> Result<()> {
        if dims != self.site_dims.as_slice() {
            let expected = self.dim();
            let found = dims.iter().product();
            return Err(Error::DimensionMismatch { expected, found });
        }
        Ok(())
    }

    pub(crate) fn from_normalized(amplitudes: Vec<C64>, site_dims: Vec<usize>) -> Self {
        debug_assert!((linalg::norm(&amplitudes) - 1.0).abs() < NORM_TOL);
        Self { amplitudes, site_dims }
    }
}

pub(crate) fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Applies a single-site operator to a composite vector.
pub fn apply_local(v: &[C64], site_dims: &[usize], site: usize, op: &Matrix) -> Result<Vec<C64>> {
    let n_sites = site_dims.len();
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let d = site_dims[site];
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
    }
    let inner_stride: usize = site_dims[site + 1..].iter().product();
    let outer: usize = site_dims[..site].iter().product();
    if v.len() != outer * d * inner_stride {
        return Err(Error::DimensionMismatch { expected: outer * d * inner_stride, found: v.len() });
    }
    let mut out = vec![ZERO; v.len()];
    for o in 0..outer {
        let base = o * d * inner_stride;
        for r in 0..d {
            for c in 0..d {
                let a = op.get(r, c);
                if a == ZERO {
                    continue;
                }
                for i in 0..inner_stride {
                    out[base + r * inner_stride + i] += a * v[base + c * inner_stride + i];
                }
            }
        }
    }
    Ok(out)
}

/// Dense operator on the full composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeOperator {
    pub matrix: Matrix,
    pub site_dims: Vec<usize>,
}

impl CompositeOperator {
    pub fn new(matrix: Matrix, site_dims: Vec<usize>) -> Result<Self> {
        let dim = composite_dim(&site_dims)?;
        if matrix.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.dim() });
        }
        Ok(Self { matrix, site_dims })
    }

    pub fn identity(site_dims: Vec<usize>) -> Result<Self> {
        let dim = composite_dim(&site_dims)?;
        Ok(Self { matrix: Matrix::identity(dim), site_dims })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.site_dims != other.site_dims {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.dim(),
                found: other.matrix.dim(),
            });
        }
        Ok(Self { matrix: self.matrix.matmul(&other.matrix), site_dims: self.site_dims.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.site_dims != other.site_dims {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.dim(),
                found: other.matrix.dim(),
            });
        }
        Ok(Self { matrix: &self.matrix + &other.matrix, site_dims: self.site_dims.clone() })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { matrix: self.matrix.scale(s), site_dims: self.site_dims.clone() }
    }
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at `site`.
pub fn embed_at_site(op: &Matrix, site: usize, site_dims: &[usize]) -> Result<CompositeOperator> {
    embed_on_sites(op, &[site], site_dims)
}

/// Embeds an operator acting on the ordered site subset `sites` (its own
/// tensor factors follow the order of `sites`) into the full composite.
pub fn embed_on_sites(op: &Matrix, sites: &[usize], site_dims: &[usize]) -> Result<CompositeOperator> {
    let n_sites = site_dims.len();
    for (k, &s) in sites.iter().enumerate() {
        if s >= n_sites {
            return Err(Error::SiteOutOfRange { site: s, n_sites });
        }
        if sites[..k].contains(&s) {
            return Err(Error::InvalidParameter(format!("site {s} listed twice")));
        }
    }
    let sub_dim: usize = sites.iter().map(|&s| site_dims[s]).product();
    if op.dim() != sub_dim {
        return Err(Error::DimensionMismatch { expected: sub_dim, found: op.dim() });
    }
    let dim = composite_dim(site_dims)?;
    let digits = |mut k: usize| -> Vec<usize> {
        let mut out = vec![0; n_sites];
        for s in (0..n_sites).rev() {
            out[s] = k % site_dims[s];
            k /= site_dims[s];
        }
        out
    };
    let sub_index = |dg: &[usize]| sites.iter().fold(0, |acc, &s| acc * site_dims[s] + dg[s]);
    let all_digits: Vec<Vec<usize>> = (0..dim).map(digits).collect();
    let matrix = Matrix::from_fn(dim, |i, j| {
        let (di, dj) = (&all_digits[i], &all_digits[j]);
        let spectators_match = (0..n_sites).all(|s| sites.contains(&s) || di[s] == dj[s]);
        if spectators_match {
            op.get(sub_index(di), sub_index(dj))
        } else {
            ZERO
        }
    });
    Ok(CompositeOperator { matrix, site_dims: site_dims.to_vec() })
}
