//! Subspaces of `ℂ^n` held by orthonormal bases.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{eye, herm_eig, hstack, op_norm, zeros, Mat, ANGLE_TOLERANCE, RANK_CUTOFF};

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: eye(ambient) }
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: Mat) -> Result<Self> {
        let k = basis.ncols();
        let res = op_norm(&(basis.adjoint() * &basis - eye(k)));
        if res > 1e-8 {
            return Err(Error::InvalidInput(alloc::format!("basis is not orthonormal (residual {res:e})")));
        }
        Ok(Subspace { ambient: basis.nrows(), basis })
    }

    /// Column span of `a`.
    pub fn image(a: &Mat) -> Self {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Subspace::zero(m);
        }
        let svd = a.clone().svd(true, false);
        let sv = &svd.singular_values;
        let top = sv.iter().cloned().fold(0.0, f64::max);
        let cutoff = RANK_CUTOFF * top.max(1.0);
        let u = svd.u.expect("left singular vectors requested");
        let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > cutoff).collect();
        let mut basis = zeros(m, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            basis.set_column(k, &u.column(i));
        }
        Subspace { ambient: m, basis }
    }

    pub fn kernel(a: &Mat) -> Self {
        Subspace::image(&a.adjoint()).orthocomplement()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn projector(&self) -> Mat {
        &self.basis * self.basis.adjoint()
    }

    pub fn orthocomplement(&self) -> Self {
        let n = self.ambient;
        if self.dim() == 0 {
            return Subspace::full(n);
        }
        if self.dim() == n {
            return Subspace::zero(n);
        }
        let e = herm_eig(&(eye(n) - self.projector()));
        let keep: Vec<usize> = (0..n).filter(|&i| e.values[i] > 0.5).collect();
        let mut basis = zeros(n, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            basis.set_column(k, &e.vectors.column(i));
        }
        Subspace { ambient: n, basis }
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let n = self.ambient;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(n));
        }
        let m = (eye(n) - self.projector()) + (eye(n) - other.projector());
        let e = herm_eig(&m);
        let keep: Vec<usize> = (0..n).filter(|&i| e.values[i] <= RANK_CUTOFF * 2.0).collect();
        let mut basis = zeros(n, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            basis.set_column(k, &e.vectors.column(i));
        }
        Ok(Subspace { ambient: n, basis })
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        Ok(Subspace::image(&hstack(&[&self.basis, &other.basis])))
    }

    /// Image under a linear map.
    pub fn map(&self, a: &Mat) -> Result<Self> {
        if a.ncols() != self.ambient {
            return Err(Error::AmbientMismatch { left: a.ncols(), right: self.ambient });
        }
        Ok(Subspace::image(&(a * &self.basis)))
    }

    /// `‖(I − P_self) B_other‖`: zero iff `other ⊆ self`.
    pub fn containment_residual(&self, other: &Self) -> Result<f64> {
        self.same_ambient(other)?;
        Ok(op_norm(&(other.basis() - self.projector() * other.basis())))
    }

    pub fn contains(&self, other: &Self) -> Result<bool> {
        Ok(self.containment_residual(other)? <= ANGLE_TOLERANCE)
    }

    /// `‖P_self B_other‖`: zero iff the subspaces are orthogonal.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        self.same_ambient(other)?;
        Ok(op_norm(&(self.basis.adjoint() * other.basis())))
    }

    /// Largest principal angle between subspaces of equal dimension; `π/2`
    /// when the dimensions differ.
    pub fn max_principal_angle(&self, other: &Self) -> Result<f64> {
        self.same_ambient(other)?;
        if self.dim() != other.dim() {
            return Ok(core::f64::consts::FRAC_PI_2);
        }
        let s = self.containment_residual(other)?;
        Ok(libm::asin(s.min(1.0)))
    }

    /// Dimensions agree and the largest principal angle is at most the angle tolerance.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.max_principal_angle(other)? <= ANGLE_TOLERANCE)
    }

    /// Embeds a subspace of `ℂ^k` given in the coordinates of `outer`'s basis.
    pub fn embed_in(&self, outer: &Subspace) -> Result<Self> {
        if self.ambient != outer.dim() {
            return Err(Error::AmbientMismatch { left: self.ambient, right: outer.dim() });
        }
        Ok(Subspace { ambient: outer.ambient, basis: outer.basis() * &self.basis })
    }

    /// Coordinates of `self ⊆ outer` in `outer`'s basis.
    pub fn coordinates_in(&self, outer: &Subspace) -> Result<Self> {
        self.same_ambient(outer)?;
        Ok(Subspace::image(&(outer.basis().adjoint() * &self.basis)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real;

    #[test]
    fn basic_lattice_operations() {
        let e1 = Subspace::image(&from_real(2, 1, &[1.0, 0.0]));
        let e2 = Subspace::image(&from_real(2, 1, &[0.0, 1.0]));
        assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
        assert!(e1.intersect(&e1).unwrap().equals(&e1).unwrap());
        assert_eq!(e1.sum(&e2).unwrap().dim(), 2);
        assert!(e1.orthocomplement().equals(&e2).unwrap());
    }

    #[test]
    fn rank_two_matrix() {
        // rows: r1, r2, r1 + r2, r1 − r2 with r1, r2 independent
        let a = from_real(4, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 1.0, 1.0, 3.0, 1.0, 1.0, 1.0, -1.0]);
        let im = Subspace::image(&a);
        let ker = Subspace::kernel(&a);
        assert_eq!(im.dim(), 2);
        assert_eq!(ker.dim(), 1);
        assert!(op_norm(&(&a * ker.basis())) < 1e-12);
    }

    #[test]
    fn ambient_mismatch() {
        assert!(matches!(
            Subspace::full(2).intersect(&Subspace::full(3)),
            Err(Error::AmbientMismatch { left: 2, right: 3 })
        ));
    }
}
