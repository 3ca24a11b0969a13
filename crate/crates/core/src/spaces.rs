//! Nested interior tensor spaces `E_{w_0} ⊗ (E_{w_1} ⊗ ⋯ (E_{w_k} ⊗_σ H))`
//! indexed by words, and amplifications `I ⊗ X` between them.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::StarRepresentation;
use crate::correspondence::{induced_rep, interior_tensor_with_rep, Correspondence, InteriorTensorSpace};
use crate::error::{Error, Result};
use crate::linalg::{eye, kron_eye_left, Mat};

/// `E ⊗_σ K` together with the induced representation on it.
#[derive(Debug, Clone)]
pub struct TensorLevel {
    pub space: InteriorTensorSpace,
    pub sigma: StarRepresentation,
}

impl TensorLevel {
    pub fn new(e: &Correspondence, base: &StarRepresentation) -> Result<Self> {
        let space = interior_tensor_with_rep(e, base)?;
        let sigma = induced_rep(e, base, &space)?;
        Ok(TensorLevel { space, sigma })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Cache of the spaces `S(w)` for words `w` over a fixed family of
/// correspondences, with `S([]) = H` and `S(c·w) = E_c ⊗ S(w)`.
#[derive(Debug, Clone)]
pub struct WordSpaces {
    base: StarRepresentation,
    corrs: Vec<Correspondence>,
    cache: BTreeMap<Vec<usize>, Arc<TensorLevel>>,
}

impl WordSpaces {
    pub fn new(base: StarRepresentation, corrs: Vec<Correspondence>) -> Result<Self> {
        if let Some(e) = corrs.iter().find(|e| e.algebra() != base.algebra()) {
            return Err(Error::AlgebraMismatch(alloc::format!(
                "correspondence over {:?} with representation of {:?}",
                e.algebra().block_dims(),
                base.algebra().block_dims()
            )));
        }
        Ok(WordSpaces { base, corrs, cache: BTreeMap::new() })
    }

    pub fn seed(&mut self, word: Vec<usize>, level: TensorLevel) {
        self.cache.insert(word, Arc::new(level));
    }

    pub fn base(&self) -> &StarRepresentation {
        &self.base
    }

    pub fn correspondence(&self, c: usize) -> &Correspondence {
        &self.corrs[c]
    }

    pub fn num_correspondences(&self) -> usize {
        self.corrs.len()
    }

    /// The level for a nonempty word.
    pub fn level(&mut self, word: &[usize]) -> Result<Arc<TensorLevel>> {
        assert!(!word.is_empty(), "level of the empty word is the base space");
        if let Some(l) = self.cache.get(word) {
            return Ok(l.clone());
        }
        let c = word[0];
        if c >= self.corrs.len() {
            return Err(Error::InvalidInput(alloc::format!("letter {c} out of range")));
        }
        let inner = self.sigma(&word[1..])?;
        let level = Arc::new(TensorLevel::new(&self.corrs[c], &inner)?);
        self.cache.insert(word.to_vec(), level.clone());
        Ok(level)
    }

    pub fn sigma(&mut self, word: &[usize]) -> Result<StarRepresentation> {
        if word.is_empty() {
            Ok(self.base.clone())
        } else {
            Ok(self.level(word)?.sigma.clone())
        }
    }

    pub fn dim(&mut self, word: &[usize]) -> Result<usize> {
        if word.is_empty() {
            Ok(self.base.hilbert_dim())
        } else {
            Ok(self.level(word)?.dim())
        }
    }

    /// `I_{prefix} ⊗ X` as a map `S(prefix·src) → S(prefix·dst)` for `X: S(src) → S(dst)`.
    pub fn amplify(&mut self, prefix: &[usize], x: &Mat, src: &[usize], dst: &[usize]) -> Result<Mat> {
        let (ds, dd) = (self.dim(src)?, self.dim(dst)?);
        if x.nrows() != dd || x.ncols() != ds {
            return Err(Error::ShapeMismatch(alloc::format!(
                "operator of shape {:?} between spaces of dimensions {ds} and {dd}",
                x.shape()
            )));
        }
        let mut out = x.clone();
        let mut s: Vec<usize> = src.to_vec();
        let mut d: Vec<usize> = dst.to_vec();
        for &c in prefix.iter().rev() {
            s.insert(0, c);
            d.insert(0, c);
            let ls = self.level(&s)?;
            let ld = self.level(&d)?;
            out = ld.space.push() * kron_eye_left(self.corrs[c].dim(), &out) * ls.space.lift();
        }
        Ok(out)
    }

    /// Map from the full algebraic tensor `ℂ^{e_{w_0}} ⊗ ⋯ ⊗ ℂ^{e_{w_k}} ⊗ H` onto `S(w)`.
    pub fn nested_push(&mut self, word: &[usize]) -> Result<Mat> {
        if word.is_empty() {
            return Ok(eye(self.base.hilbert_dim()));
        }
        let inner = self.nested_push(&word[1..])?;
        let l = self.level(word)?;
        Ok(l.space.push() * kron_eye_left(self.corrs[word[0]].dim(), &inner))
    }

    /// Right inverse of [`WordSpaces::nested_push`].
    pub fn nested_lift(&mut self, word: &[usize]) -> Result<Mat> {
        if word.is_empty() {
            return Ok(eye(self.base.hilbert_dim()));
        }
        let inner = self.nested_lift(&word[1..])?;
        let l = self.level(word)?;
        Ok(kron_eye_left(self.corrs[word[0]].dim(), &inner) * l.space.lift())
    }
}

/// `I_{prefix} ⊗ X: S_src(prefix) → S_dst(prefix)` for an intertwiner `X`
/// between the base spaces of two towers over the same correspondences.
pub fn amplify_across(src: &mut WordSpaces, dst: &mut WordSpaces, prefix: &[usize], x: &Mat) -> Result<Mat> {
    if x.nrows() != dst.base.hilbert_dim() || x.ncols() != src.base.hilbert_dim() {
        return Err(Error::ShapeMismatch(alloc::format!("intertwiner of shape {:?}", x.shape())));
    }
    let mut out = x.clone();
    for k in (0..prefix.len()).rev() {
        let w = &prefix[k..];
        let ls = src.level(w)?;
        let ld = dst.level(w)?;
        out = ld.space.push() * kron_eye_left(dst.corrs[w[0]].dim(), &out) * ls.space.lift();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, MatrixBlocksAlgebra};
    use crate::linalg::{c, op_norm, zeros};
    use alloc::vec;

    fn two_loops() -> Correspondence {
        let alg = MatrixBlocksAlgebra::commutative(1).unwrap();
        let one = alg.unit(0);
        let z = AlgebraElement::zero(&alg);
        Correspondence::new(alg, 2, vec![eye(2)], vec![eye(2)], vec![one.clone(), z.clone(), z, one]).unwrap()
    }

    #[test]
    fn nested_push_lift_are_inverse() {
        let e = two_loops();
        let sigma = StarRepresentation::with_multiplicities(e.algebra(), &[2]).unwrap();
        let mut s = WordSpaces::new(sigma, vec![e]).unwrap();
        let w = [0, 0, 0];
        assert_eq!(s.dim(&w).unwrap(), 16);
        let p = s.nested_push(&w).unwrap();
        let l = s.nested_lift(&w).unwrap();
        assert!(op_norm(&(p * l - eye(16))) < 1e-10);
    }

    #[test]
    fn amplification_is_multiplicative() {
        let e = two_loops();
        let sigma = StarRepresentation::with_multiplicities(e.algebra(), &[2]).unwrap();
        let mut s = WordSpaces::new(sigma, vec![e]).unwrap();
        let mut a = zeros(2, 2);
        a[(0, 1)] = c(1.0);
        a[(1, 1)] = c(2.0);
        let b = a.adjoint() * c(3.0);
        let lhs = s.amplify(&[0, 0], &(&a * &b), &[], &[]).unwrap();
        let rhs = s.amplify(&[0, 0], &a, &[], &[]).unwrap() * s.amplify(&[0, 0], &b, &[], &[]).unwrap();
        assert!(op_norm(&(lhs - rhs)) < 1e-10);
    }
}
