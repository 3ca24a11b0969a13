//! Finite-dimensional C*-algebras `⊕_b Mat(d_b)` and their *-representations.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{block_diag, c, eye, op_norm, threshold, zeros, Mat, C64, DEFAULT_TOLERANCE};
use crate::report::{Check, ValidationReport};

/// Direct sum of full matrix algebras, basis given by the matrix units `e_ij`
/// of each block, flattened block by block in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixBlocksAlgebra {
    block_dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl MatrixBlocksAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() || block_dims.contains(&0) {
            return Err(Error::InvalidInput(format!("block dimensions must be positive, got {block_dims:?}")));
        }
        let mut offsets = Vec::with_capacity(block_dims.len());
        let mut acc = 0;
        for &d in &block_dims {
            offsets.push(acc);
            acc += d * d;
        }
        Ok(MatrixBlocksAlgebra { block_dims, offsets })
    }

    /// `ℂ^n` as `n` one-dimensional blocks.
    pub fn commutative(n: usize) -> Result<Self> {
        Self::new(alloc::vec![1; n])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Vector-space dimension `Σ d_b²`.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|d| d * d).sum()
    }

    /// Size `Σ d_b` of the block-diagonal faithful representation.
    pub fn faithful_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn basis_index(&self, block: usize, i: usize, j: usize) -> usize {
        self.offsets[block] + i * self.block_dims[block] + j
    }

    pub fn basis_unit(&self, k: usize) -> (usize, usize, usize) {
        let b = match self.offsets.binary_search(&k) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        let d = self.block_dims[b];
        let r = k - self.offsets[b];
        (b, r / d, r % d)
    }

    /// `e_k e_l` as a basis index, or `None` when the product vanishes.
    pub fn unit_product(&self, k: usize, l: usize) -> Option<usize> {
        let (b1, i, j) = self.basis_unit(k);
        let (b2, p, q) = self.basis_unit(l);
        (b1 == b2 && j == p).then(|| self.basis_index(b1, i, q))
    }

    pub fn unit_adjoint(&self, k: usize) -> usize {
        let (b, i, j) = self.basis_unit(k);
        self.basis_index(b, j, i)
    }

    pub fn unit(&self, k: usize) -> AlgebraElement {
        let mut a = AlgebraElement::zero(self);
        let (b, i, j) = self.basis_unit(k);
        a.blocks[b][(i, j)] = c(1.0);
        a
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement { blocks: self.block_dims.iter().map(|&d| eye(d)).collect() }
    }

    /// Central projection onto block `b`.
    pub fn block_unit(&self, b: usize) -> AlgebraElement {
        let mut a = AlgebraElement::zero(self);
        a.blocks[b] = eye(self.block_dims[b]);
        a
    }

    pub fn from_coeffs(&self, coeffs: &[C64]) -> Result<AlgebraElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!("expected {} coefficients, got {}", self.dim(), coeffs.len())));
        }
        let mut a = AlgebraElement::zero(self);
        for (k, &v) in coeffs.iter().enumerate() {
            let (b, i, j) = self.basis_unit(k);
            a.blocks[b][(i, j)] = v;
        }
        Ok(a)
    }

    pub fn coeffs(&self, a: &AlgebraElement) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dim());
        for blk in &a.blocks {
            for i in 0..blk.nrows() {
                for j in 0..blk.ncols() {
                    out.push(blk[(i, j)]);
                }
            }
        }
        out
    }

    pub fn to_faithful(&self, a: &AlgebraElement) -> Mat {
        let refs: Vec<&Mat> = a.blocks.iter().collect();
        block_diag(&refs)
    }

    pub fn contains(&self, a: &AlgebraElement) -> bool {
        a.blocks.len() == self.block_dims.len()
            && a.blocks.iter().zip(&self.block_dims).all(|(m, &d)| m.nrows() == d && m.ncols() == d)
    }
}

/// Element of `⊕_b Mat(d_b)` stored block by block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub blocks: Vec<Mat>,
}

impl AlgebraElement {
    pub fn zero(alg: &MatrixBlocksAlgebra) -> Self {
        AlgebraElement { blocks: alg.block_dims.iter().map(|&d| zeros(d, d)).collect() }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect() }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: C64) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().map(|a| a * s).collect() }
    }

    pub fn add_scaled(&mut self, s: C64, other: &AlgebraElement) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a += b * s;
        }
    }

    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().map(|a| a.adjoint()).collect() }
    }

    /// C*-norm: the largest block operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    /// Trace of the faithful block-diagonal image.
    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }
}

/// Unital *-representation given by the images of the matrix units.
#[derive(Debug, Clone, PartialEq)]
pub struct StarRepresentation {
    algebra: MatrixBlocksAlgebra,
    hilbert_dim: usize,
    images: Vec<Mat>,
    tolerance: f64,
}

impl StarRepresentation {
    pub fn new(algebra: MatrixBlocksAlgebra, hilbert_dim: usize, images: Vec<Mat>) -> Result<Self> {
        if images.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!(
                "representation needs {} images, got {}",
                algebra.dim(),
                images.len()
            )));
        }
        if let Some(m) = images.iter().find(|m| m.nrows() != hilbert_dim || m.ncols() != hilbert_dim) {
            return Err(Error::ShapeMismatch(format!(
                "image of shape {:?} on a space of dimension {hilbert_dim}",
                m.shape()
            )));
        }
        Ok(StarRepresentation { algebra, hilbert_dim, images, tolerance: DEFAULT_TOLERANCE })
    }

    /// Builds the representation whose value on `a` is `f(a)`, evaluated on matrix units.
    pub fn from_fn(algebra: MatrixBlocksAlgebra, hilbert_dim: usize, f: impl Fn(&AlgebraElement) -> Mat) -> Result<Self> {
        let images = (0..algebra.dim()).map(|k| f(&algebra.unit(k))).collect();
        Self::new(algebra, hilbert_dim, images)
    }

    /// The block-diagonal faithful representation on `ℂ^{Σ d_b}`.
    pub fn faithful(algebra: &MatrixBlocksAlgebra) -> Self {
        let n = algebra.faithful_dim();
        Self::from_fn(algebra.clone(), n, |a| algebra.to_faithful(a)).expect("faithful representation is well formed")
    }

    /// `⊕_b I_{m_b} ⊗ ι_b`: block `b` represented with multiplicity `m_b`.
    pub fn with_multiplicities(algebra: &MatrixBlocksAlgebra, mult: &[usize]) -> Result<Self> {
        if mult.len() != algebra.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} multiplicities for {} blocks",
                mult.len(),
                algebra.num_blocks()
            )));
        }
        let n: usize = mult.iter().zip(algebra.block_dims()).map(|(m, d)| m * d).sum();
        Self::from_fn(algebra.clone(), n, |a| {
            let parts: Vec<Mat> = a
                .blocks
                .iter()
                .zip(mult)
                .map(|(blk, &m)| crate::linalg::kron_eye_left(m, blk))
                .collect();
            let refs: Vec<&Mat> = parts.iter().collect();
            block_diag(&refs)
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn algebra(&self) -> &MatrixBlocksAlgebra {
        &self.algebra
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn image(&self, k: usize) -> &Mat {
        &self.images[k]
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<Mat> {
        if !self.algebra.contains(a) {
            return Err(Error::AlgebraMismatch("element does not belong to the represented algebra".into()));
        }
        Ok(self.apply_unchecked(a))
    }

    pub(crate) fn apply_unchecked(&self, a: &AlgebraElement) -> Mat {
        let mut out = zeros(self.hilbert_dim, self.hilbert_dim);
        for (k, v) in self.algebra.coeffs(a).into_iter().enumerate() {
            if v != c(0.0) {
                out += &self.images[k] * v;
            }
        }
        out
    }

    pub fn identity_image(&self) -> Mat {
        self.apply_unchecked(&self.algebra.identity())
    }

    pub fn validate(&self) -> ValidationReport {
        let alg = &self.algebra;
        let tol = self.tolerance;
        let mut mult = 0.0f64;
        let mut star = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..alg.dim() {
            scale = scale.max(op_norm(&self.images[k]));
            star = star.max(op_norm(&(self.images[k].adjoint() - &self.images[alg.unit_adjoint(k)])));
            for l in 0..alg.dim() {
                let lhs = &self.images[k] * &self.images[l];
                let res = match alg.unit_product(k, l) {
                    Some(m) => op_norm(&(lhs - &self.images[m])),
                    None => op_norm(&lhs),
                };
                mult = mult.max(res);
            }
        }
        let unital = op_norm(&(self.identity_image() - eye(self.hilbert_dim)));
        let thr = threshold(tol, scale);
        let mut rep = ValidationReport::default();
        rep.push(Check::within("multiplicative", mult, thr));
        rep.push(Check::within("star_preserving", star, thr));
        rep.push(Check::within("unital", unital, threshold(tol, 1.0)));
        rep
    }

    /// Compression `B* σ(·) B` to the range of an isometry `B`.
    pub fn compress(&self, basis: &Mat) -> Result<Self> {
        if basis.nrows() != self.hilbert_dim {
            return Err(Error::AmbientMismatch { left: basis.nrows(), right: self.hilbert_dim });
        }
        let images = self.images.iter().map(|m| basis.adjoint() * m * basis).collect();
        Ok(StarRepresentation { algebra: self.algebra.clone(), hilbert_dim: basis.ncols(), images, tolerance: self.tolerance })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch("direct sum of representations of different algebras".into()));
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| block_diag(&[a, b])).collect();
        Ok(StarRepresentation {
            algebra: self.algebra.clone(),
            hilbert_dim: self.hilbert_dim + other.hilbert_dim,
            images,
            tolerance: self.tolerance,
        })
    }

    /// Conjugate by a unitary: `U σ(·) U*`.
    pub fn conjugate(&self, u: &Mat) -> Result<Self> {
        if u.nrows() != self.hilbert_dim || u.ncols() != self.hilbert_dim {
            return Err(Error::AmbientMismatch { left: u.nrows(), right: self.hilbert_dim });
        }
        let images = self.images.iter().map(|m| u * m * u.adjoint()).collect();
        Ok(StarRepresentation { images, ..self.clone() })
    }
}
