//! Covariant representations `(σ, T)`, the operator `T̃: E ⊗_σ H → H`, its
//! powers, the property checks and the derived operators `L`, `P`, `Q`, the
//! defect, the Cauchy dual and `U`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::algebra::{MatrixBlocksAlgebra, StarRepresentation};
use crate::correspondence::Correspondence;
use crate::error::{Error, Result};
use crate::linalg::{
    c, eye, herm_eig, hstack, inv_hpd, inv_sqrt_hpd, op_norm, psd_test, sqrt_psd, threshold, zeros, Mat, C64,
    RANK_CUTOFF,
};
use crate::report::{Check, ValidationReport};
use crate::spaces::{TensorLevel, WordSpaces};
use crate::subspace::Subspace;

/// `(σ, T)` with `T` given on the basis of `E`.
#[derive(Debug, Clone)]
pub struct CovariantRep {
    sigma: StarRepresentation,
    corr: Correspondence,
    t: Vec<Mat>,
    level: TensorLevel,
    tilde: Mat,
    tol: f64,
    spaces: RefCell<WordSpaces>,
}

/// `T̃` with its intertwining residual `max_a ‖T̃(φ(a) ⊗ I) − σ(a)T̃‖`.
#[derive(Debug, Clone)]
pub struct TildeOperator {
    pub matrix: Mat,
    pub intertwining_residual: f64,
}

/// `L = (T̃*T̃)⁻¹T̃*` with `Q = T̃L` and `P = I − Q`.
#[derive(Debug, Clone)]
pub struct LeftInverse {
    pub l: Mat,
    pub p: Mat,
    pub q: Mat,
}

#[derive(Debug, Clone)]
pub struct LeftInverseChain {
    pub left: LeftInverse,
    /// `L^0 = I, L^1, …, L^n`, with `L^j: H → E^{⊗j} ⊗ H`.
    pub powers: Vec<Mat>,
    /// `‖LT̃ − I‖`.
    pub left_inverse_residual: f64,
    /// Largest deviation of `P` and `Q` from being orthogonal projections.
    pub projection_residual: f64,
    /// `‖(I − T̃_n L^n) − Σ_{j<n} T̃_j (I ⊗ P) L^j‖`.
    pub telescoping_residual: f64,
}

/// `U h = Σ_n (I_{E^{⊗n}} ⊗ P) L^n h`, with each summand expressed in an
/// orthonormal basis of `E^{⊗n} ⊗ W`.
#[derive(Debug, Clone)]
pub struct UOperator {
    pub matrix: Mat,
    pub level_dims: Vec<usize>,
    pub norm: f64,
    pub kernel: Subspace,
    /// `‖U*U − I‖`.
    pub isometry_residual: f64,
    /// `‖UU* − I‖`.
    pub coisometry_residual: f64,
    pub contraction: bool,
    /// `T̃*T̃ ⪰ I`, which is what makes `U` a contraction.
    pub expansive: bool,
}

impl UOperator {
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.isometry_residual <= tol && self.coisometry_residual <= tol
    }
}

fn word(n: usize) -> Vec<usize> {
    vec![0; n]
}

impl CovariantRep {
    pub fn new(sigma: StarRepresentation, corr: Correspondence, t: Vec<Mat>) -> Result<Self> {
        if sigma.algebra() != corr.algebra() {
            return Err(Error::AlgebraMismatch(format!(
                "representation of {:?} and correspondence over {:?}",
                sigma.algebra().block_dims(),
                corr.algebra().block_dims()
            )));
        }
        let n = sigma.hilbert_dim();
        if t.len() != corr.dim() {
            return Err(Error::ShapeMismatch(format!("T needs {} matrices, got {}", corr.dim(), t.len())));
        }
        if let Some(m) = t.iter().find(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::ShapeMismatch(format!("T(e_i) of shape {:?} on a space of dimension {n}", m.shape())));
        }
        let tol = sigma.tolerance().max(corr.tolerance());
        let scale = t.iter().map(op_norm).fold(0.0, f64::max);
        let thr = threshold(tol, scale);

        let alg = corr.algebra().clone();
        let mut bimod = 0.0f64;
        for k in 0..alg.dim() {
            let sk = sigma.image(k);
            let (lk, rk) = (&corr.left_actions()[k], &corr.right_actions()[k]);
            for i in 0..t.len() {
                let mut left = zeros(n, n);
                let mut right = zeros(n, n);
                for j in 0..t.len() {
                    if lk[(j, i)] != c(0.0) {
                        left += &t[j] * lk[(j, i)];
                    }
                    if rk[(j, i)] != c(0.0) {
                        right += &t[j] * rk[(j, i)];
                    }
                }
                bimod = bimod.max(op_norm(&(left - sk * &t[i]))).max(op_norm(&(right - &t[i] * sk)));
            }
        }
        if bimod > thr {
            return Err(Error::BimoduleViolation { residual: bimod });
        }

        let level = TensorLevel::new(&corr, &sigma)?;
        let refs: Vec<&Mat> = t.iter().collect();
        let t_alg = hstack(&refs);
        let t_alg = if t_alg.ncols() == 0 { zeros(n, corr.dim() * n) } else { t_alg };
        let null = level.space.null_basis();
        if null.ncols() > 0 {
            let res = op_norm(&(&t_alg * null));
            if res > thr {
                return Err(Error::IllDefinedTilde { residual: res });
            }
        }
        let tilde = &t_alg * level.space.lift();
        let mut spaces = WordSpaces::new(sigma.clone(), vec![corr.clone()])?;
        spaces.seed(vec![0], level.clone());
        Ok(CovariantRep { sigma, corr, t, level, tilde, tol, spaces: RefCell::new(spaces) })
    }

    /// The representation with `T(e_i) = T̃ · push(e_i ⊗ ·)`.
    pub fn from_tilde(sigma: StarRepresentation, corr: Correspondence, tilde: Mat) -> Result<Self> {
        let level = TensorLevel::new(&corr, &sigma)?;
        let n = sigma.hilbert_dim();
        if tilde.nrows() != n || tilde.ncols() != level.dim() {
            return Err(Error::ShapeMismatch(format!(
                "tilde operator of shape {:?}, expected {n}×{}",
                tilde.shape(),
                level.dim()
            )));
        }
        let full = &tilde * level.space.push();
        let t = (0..corr.dim()).map(|i| full.columns(i * n, n).into_owned()).collect();
        Self::new(sigma, corr, t)
    }

    /// `M = E = ℂ` acting on `ℂ^n` with `T(1) = A`.
    pub fn scalar(a: Mat) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::ShapeMismatch(format!("scalar operator of shape {:?}", a.shape())));
        }
        let alg = MatrixBlocksAlgebra::commutative(1)?;
        let sigma = StarRepresentation::with_multiplicities(&alg, &[n])?;
        Self::new(sigma, Correspondence::identity(&alg), vec![a])
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.sigma = self.sigma.with_tolerance(tol);
        self.corr = self.corr.with_tolerance(tol);
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn sigma(&self) -> &StarRepresentation {
        &self.sigma
    }

    pub fn correspondence(&self) -> &Correspondence {
        &self.corr
    }

    pub fn t(&self) -> &[Mat] {
        &self.t
    }

    pub fn level(&self) -> &TensorLevel {
        &self.level
    }

    pub fn hilbert_dim(&self) -> usize {
        self.sigma.hilbert_dim()
    }

    /// `T̃` as a matrix from the quotient basis of `E ⊗_σ H` to `H`.
    pub fn tilde(&self) -> &Mat {
        &self.tilde
    }

    pub fn tilde_operator(&self) -> TildeOperator {
        TildeOperator { matrix: self.tilde.clone(), intertwining_residual: self.intertwining_residual() }
    }

    /// `T(ξ)` for coefficients `ξ` in the basis of `E`.
    pub fn evaluate(&self, xi: &[C64]) -> Mat {
        let n = self.hilbert_dim();
        let mut out = zeros(n, n);
        for (m, &v) in self.t.iter().zip(xi) {
            out += m * v;
        }
        out
    }

    pub fn intertwining_residual(&self) -> f64 {
        (0..self.sigma.algebra().dim())
            .map(|k| op_norm(&(&self.tilde * self.level.sigma.image(k) - self.sigma.image(k) * &self.tilde)))
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        rep.extend_prefixed("sigma.", self.sigma.validate());
        rep.extend_prefixed("correspondence.", self.corr.validate());
        let scale = op_norm(&self.tilde);
        rep.push(Check::within("intertwining", self.intertwining_residual(), threshold(self.tol, scale)));
        rep
    }

    /// Runs `f` with the cached tower of spaces `E^{⊗n} ⊗_σ H`.
    pub fn with_spaces<R>(&self, f: impl FnOnce(&mut WordSpaces) -> Result<R>) -> Result<R> {
        f(&mut self.spaces.borrow_mut())
    }

    pub fn power_dim(&self, n: usize) -> Result<usize> {
        self.with_spaces(|s| s.dim(&word(n)))
    }

    /// `I_{E^{⊗k}} ⊗ X` for `X: E^{⊗a} ⊗ H → E^{⊗b} ⊗ H`.
    pub fn amplify(&self, k: usize, x: &Mat, a: usize, b: usize) -> Result<Mat> {
        self.with_spaces(|s| s.amplify(&word(k), x, &word(a), &word(b)))
    }

    /// `T̃_n: E^{⊗n} ⊗_σ H → H`, with `T̃_0 = I`.
    pub fn tilde_power(&self, n: usize) -> Result<Mat> {
        self.with_spaces(|s| tilde_power(s, &self.tilde, n))
    }

    pub fn tilde_gram(&self) -> Mat {
        self.tilde.adjoint() * &self.tilde
    }

    /// `B* σ B`, `B* T B` for an orthonormal basis `B`; no invariance is checked.
    pub fn compress(&self, basis: &Mat) -> Result<Self> {
        let sigma = self.sigma.compress(basis)?;
        let t = self.t.iter().map(|m| basis.adjoint() * m * basis).collect();
        Ok(Self::new(sigma, self.corr.clone(), t)?.with_tolerance(self.tol))
    }

    /// Restriction to an invariant subspace.
    pub fn restrict(&self, k: &Subspace) -> Result<Self> {
        let inv = self.invariance_residuals(k)?;
        let thr = threshold(self.tol, 1.0 + op_norm(&self.tilde));
        if inv.0 > thr {
            return Err(Error::NotSigmaInvariant { residual: inv.0 });
        }
        if inv.1 > thr {
            return Err(Error::NotInvariant { residual: inv.1 });
        }
        self.compress(k.basis())
    }

    /// `(max_a ‖[P_K, σ(a)]‖, max_i ‖(I − P_K) T(e_i) P_K‖)`.
    pub fn invariance_residuals(&self, k: &Subspace) -> Result<(f64, f64)> {
        if k.ambient_dim() != self.hilbert_dim() {
            return Err(Error::AmbientMismatch { left: k.ambient_dim(), right: self.hilbert_dim() });
        }
        let p = k.projector();
        let q = eye(self.hilbert_dim()) - &p;
        let comm = self.sigma.images().iter().map(|s| op_norm(&(&p * s - s * &p))).fold(0.0, f64::max);
        let inv = self.t.iter().map(|m| op_norm(&(&q * m * &p))).fold(0.0, f64::max);
        Ok((comm, inv))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.corr != other.corr {
            return Err(Error::AlgebraMismatch("direct sum over different correspondences".into()));
        }
        let sigma = self.sigma.direct_sum(&other.sigma)?;
        let t = self.t.iter().zip(&other.t).map(|(a, b)| crate::linalg::block_diag(&[a, b])).collect();
        Ok(Self::new(sigma, self.corr.clone(), t)?.with_tolerance(self.tol))
    }

    /// `(U σ U*, U T U*)` for a unitary `U`.
    pub fn conjugate(&self, u: &Mat) -> Result<Self> {
        let sigma = self.sigma.conjugate(u)?;
        let t = self.t.iter().map(|m| u * m * u.adjoint()).collect();
        Ok(Self::new(sigma, self.corr.clone(), t)?.with_tolerance(self.tol))
    }

    pub fn check_isometric(&self) -> Check {
        let g = self.tilde_gram();
        let res = op_norm(&(&g - eye(g.nrows())));
        Check::within("isometric", res, threshold(self.tol, op_norm(&g)))
    }

    pub fn check_fully_coisometric(&self) -> Check {
        let g = &self.tilde * self.tilde.adjoint();
        let res = op_norm(&(&g - eye(g.nrows())));
        Check::within("fully_coisometric", res, threshold(self.tol, op_norm(&g)))
    }

    pub fn check_contractive(&self) -> Check {
        let nrm = op_norm(&self.tilde);
        Check::within("contractive", (nrm - 1.0).max(0.0), threshold(self.tol, 1.0))
    }

    /// Passes iff the smallest eigenvalue of `T̃*T̃` exceeds the rank cutoff.
    pub fn check_left_invertible(&self) -> Check {
        let g = self.tilde_gram();
        if g.nrows() == 0 {
            return Check::new("left_invertible", true, 0.0).vacuous(true);
        }
        let e = herm_eig(&g);
        let low = e.values[0];
        let top = *e.values.last().unwrap();
        let mut ch = Check::new("left_invertible", low > RANK_CUTOFF * top.max(1.0), low.max(0.0));
        ch.min_eigenvalue = Some(low);
        ch
    }

    /// `(T̃*T̃)⁻¹`, or [`Error::NotLeftInvertible`].
    pub fn gram_inverse(&self) -> Result<Mat> {
        let g = self.tilde_gram();
        inv_hpd(&g).ok_or_else(|| Error::NotLeftInvertible { min_eigenvalue: crate::linalg::min_eigenvalue(&g) })
    }

    /// `2(I_E ⊗ T̃*T̃) − I − T̃_2*T̃_2 ⪰ 0` on `E^{⊗2} ⊗_σ H`.
    pub fn check_concave(&self) -> Result<Check> {
        let g = self.tilde_gram();
        let m = self.with_spaces(|s| {
            let t2 = tilde_power(s, &self.tilde, 2)?;
            let ag = s.amplify(&[0], &g, &[0], &[0])?;
            Ok(ag * c(2.0) - eye(t2.ncols()) - t2.adjoint() * t2)
        })?;
        Ok(Check::psd("concave", &psd_test(&m, self.tol)))
    }

    /// `T̃*T̃ − I ⪰ 0`.
    pub fn check_expansive(&self) -> Check {
        let g = self.tilde_gram();
        let m = &g - eye(g.nrows());
        Check::psd("expansive", &psd_test(&m, self.tol))
    }

    /// `n(I ⊗ T̃*T̃) − (n − 1)I − T̃_n*T̃_n ⪰ 0` on `E^{⊗n} ⊗_σ H`.
    pub fn check_growth_bound(&self, n: usize) -> Result<Check> {
        if n == 0 {
            return Ok(Check::new("growth_bound", true, 0.0));
        }
        let g = self.tilde_gram();
        let m = self.with_spaces(|s| {
            let tn = tilde_power(s, &self.tilde, n)?;
            let ag = s.amplify(&word(n - 1), &g, &[0], &[0])?;
            Ok(ag * c(n as f64) - eye(tn.ncols()) * c((n - 1) as f64) - tn.adjoint() * tn)
        })?;
        Ok(Check::psd(format!("growth_bound_{n}"), &psd_test(&m, self.tol)))
    }

    /// `2I − I_E ⊗ T̃T̃* − (T̃*T̃)⁻¹ ⪰ 0`.
    pub fn check_shimorin(&self) -> Result<Check> {
        let ginv = self.gram_inverse()?;
        let tt = &self.tilde * self.tilde.adjoint();
        let a = self.amplify(1, &tt, 0, 0)?;
        let m = eye(ginv.nrows()) * c(2.0) - a - ginv;
        Ok(Check::psd("shimorin", &psd_test(&m, self.tol)))
    }

    /// `2(T̃*T̃)² − T̃*T̃ − T̃*T̃_2T̃_2*T̃ ⪰ 0`.
    pub fn check_eq13(&self) -> Result<Check> {
        self.gram_inverse()?;
        let g = self.tilde_gram();
        let t2 = self.tilde_power(2)?;
        let x = t2.adjoint() * &self.tilde;
        let m = &g * &g * c(2.0) - &g - x.adjoint() * x;
        Ok(Check::psd("eq13", &psd_test(&m, self.tol)))
    }

    /// `‖X‖² ≤ 2` for `X = [I_E ⊗ T̃, (T̃*T̃)^{-1/2}]`, computed from singular values.
    pub fn check_eq12(&self) -> Result<Check> {
        let g = self.tilde_gram();
        let r = inv_sqrt_hpd(&g).ok_or_else(|| Error::NotLeftInvertible {
            min_eigenvalue: crate::linalg::min_eigenvalue(&g),
        })?;
        let a = self.amplify(1, &self.tilde, 1, 0)?;
        let x = hstack(&[&a, &r]);
        let nrm = op_norm(&x);
        Ok(Check::within("eq12", (nrm * nrm - 2.0).max(0.0), threshold(self.tol, 2.0)))
    }

    /// `(σ, T')` with `T̃' = T̃(T̃*T̃)⁻¹`.
    pub fn cauchy_dual(&self) -> Result<Self> {
        let ginv = self.gram_inverse()?;
        Ok(Self::from_tilde(self.sigma.clone(), self.corr.clone(), &self.tilde * ginv)?.with_tolerance(self.tol))
    }

    pub fn left_inverse(&self) -> Result<LeftInverse> {
        let ginv = self.gram_inverse()?;
        let l = ginv * self.tilde.adjoint();
        let q = &self.tilde * &l;
        let p = eye(self.hilbert_dim()) - &q;
        Ok(LeftInverse { l, p, q })
    }

    /// `L^0, …, L^n` and the telescoping identity at depth `n`.
    pub fn left_inverse_chain(&self, n: usize) -> Result<LeftInverseChain> {
        let left = self.left_inverse()?;
        let dim = self.hilbert_dim();
        let (powers, tele) = self.with_spaces(|s| {
            let powers = l_powers(s, &left.l, n)?;
            let mut sum = zeros(dim, dim);
            for (j, lj) in powers.iter().take(n).enumerate() {
                let tj = tilde_power(s, &self.tilde, j)?;
                let pj = s.amplify(&word(j), &left.p, &[], &[])?;
                sum += tj * pj * lj;
            }
            let tn = tilde_power(s, &self.tilde, n)?;
            let lhs = eye(dim) - tn * &powers[n];
            Ok((powers, op_norm(&(lhs - sum))))
        })?;
        let lt = &left.l * &self.tilde;
        let li = op_norm(&(&lt - eye(lt.nrows())));
        let proj = |m: &Mat| op_norm(&(m * m - m)).max(op_norm(&(m - m.adjoint())));
        let projection_residual = proj(&left.p).max(proj(&left.q));
        Ok(LeftInverseChain { left, powers, left_inverse_residual: li, projection_residual, telescoping_residual: tele })
    }

    /// `(T̃*T̃ − I)^{1/2}`; requires `T̃*T̃ ⪰ I`.
    pub fn defect(&self) -> Result<Mat> {
        let exp = self.check_expansive();
        if !exp.pass {
            return Err(Error::HypothesisNotMet(format!(
                "defect needs T*T >= I (min eigenvalue of T*T - I is {:e})",
                exp.min_eigenvalue.unwrap_or(0.0)
            )));
        }
        let g = self.tilde_gram();
        Ok(sqrt_psd(&(&g - eye(g.nrows()))))
    }

    /// Residual of
    /// `‖h‖² = Σ_{j<n} ‖(I ⊗ P)L^j h‖² + ‖L^n h‖² + Σ_{j=1}^{n} ‖(I ⊗ 𝓓)L^j h‖²`
    /// for the restriction to the invariant subspace `K`, measured as the
    /// operator norm of the difference of the two quadratic forms.
    pub fn energy_identity(&self, k: &Subspace, n: usize) -> Result<f64> {
        let r = self.restrict(k)?;
        let conc = r.check_concave()?;
        if !conc.pass {
            return Err(Error::NotConcave { min_eigenvalue: conc.min_eigenvalue.unwrap_or(f64::NEG_INFINITY) });
        }
        r.gram_inverse()?;
        let d = r.defect()?;
        let chain = r.left_inverse_chain(n)?;
        let dim = r.hilbert_dim();
        let form = r.with_spaces(|s| {
            let mut form = zeros(dim, dim);
            for j in 0..n {
                let pj = s.amplify(&word(j), &chain.left.p, &[], &[])?;
                let v = pj * &chain.powers[j];
                form += v.adjoint() * v;
            }
            form += chain.powers[n].adjoint() * &chain.powers[n];
            for j in 1..=n {
                let dj = s.amplify(&word(j - 1), &d, &[0], &[0])?;
                let v = dj * &chain.powers[j];
                form += v.adjoint() * v;
            }
            Ok(form)
        })?;
        Ok(op_norm(&(eye(dim) - form)))
    }

    /// The operator `U` truncated at depth `dim H`, where the ranges of `T̃_n` stabilize.
    pub fn build_u(&self) -> Result<UOperator> {
        let conc = self.check_concave()?;
        if !conc.pass {
            return Err(Error::NotConcave { min_eigenvalue: conc.min_eigenvalue.unwrap_or(f64::NEG_INFINITY) });
        }
        let depth = self.hilbert_dim();
        let chain = self.left_inverse_chain(depth)?;
        let dim = self.hilbert_dim();
        let blocks = self.with_spaces(|s| {
            let mut blocks = Vec::with_capacity(depth + 1);
            for (j, lj) in chain.powers.iter().enumerate() {
                let pj = s.amplify(&word(j), &chain.left.p, &[], &[])?;
                let b = Subspace::image(&pj);
                blocks.push(b.basis().adjoint() * pj * lj);
            }
            Ok(blocks)
        })?;
        let level_dims: Vec<usize> = blocks.iter().map(|b| b.nrows()).collect();
        let refs: Vec<&Mat> = blocks.iter().collect();
        let matrix = crate::linalg::vstack(&refs);
        let matrix = if matrix.ncols() == dim { matrix } else { zeros(0, dim) };
        let norm = op_norm(&matrix);
        let isometry_residual = op_norm(&(matrix.adjoint() * &matrix - eye(dim)));
        let coisometry_residual = op_norm(&(&matrix * matrix.adjoint() - eye(matrix.nrows())));
        Ok(UOperator {
            kernel: Subspace::kernel(&matrix),
            level_dims,
            norm,
            isometry_residual,
            coisometry_residual,
            contraction: norm <= 1.0 + threshold(self.tol, 1.0),
            expansive: self.check_expansive().pass,
            matrix,
        })
    }
}

pub(crate) fn tilde_power(s: &mut WordSpaces, tilde: &Mat, n: usize) -> Result<Mat> {
    let mut out = eye(s.dim(&[])?);
    for k in 0..n {
        out *= s.amplify(&word(k), tilde, &[0], &[])?;
    }
    Ok(out)
}

fn l_powers(s: &mut WordSpaces, l: &Mat, n: usize) -> Result<Vec<Mat>> {
    let mut powers = vec![eye(s.dim(&[])?)];
    for k in 0..n {
        let step = s.amplify(&word(k), l, &[], &[0])?;
        let next = step * powers.last().unwrap();
        powers.push(next);
    }
    Ok(powers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{fourier3, g1_induced, g1_weighted, g2_induced, g2_weighted, scalar_unitary_3};
    use crate::linalg::{cx, from_real};

    fn diag(v: &[f64]) -> Mat {
        let mut m = zeros(v.len(), v.len());
        for (i, &x) in v.iter().enumerate() {
            m[(i, i)] = c(x);
        }
        m
    }

    #[test]
    fn scalar_tilde_is_the_matrix() {
        let a = from_real(2, 2, &[1.0, 2.0, -3.0, 0.5]);
        let r = CovariantRep::scalar(a.clone()).unwrap();
        assert!(op_norm(&(r.tilde() - &a)) < 1e-12);
        let a3 = &a * &a * &a;
        assert!(op_norm(&(r.tilde_power(3).unwrap() - a3)) < 1e-10);
        assert!(op_norm(&(r.tilde_power(0).unwrap() - eye(2))) < 1e-12);
    }

    #[test]
    fn tilde_round_trip() {
        let r = g2_weighted(1.2, 0.7).rep;
        let back = CovariantRep::from_tilde(r.sigma().clone(), r.correspondence().clone(), r.tilde().clone()).unwrap();
        for (x, y) in r.t().iter().zip(back.t()) {
            assert!(op_norm(&(x - y)) < 1e-12);
        }
    }

    #[test]
    fn tilde_power_matches_products() {
        let r = g2_weighted(1.3, 0.4).rep;
        let n = r.hilbert_dim();
        let e = r.correspondence().dim();
        let t2 = r.tilde_power(2).unwrap();
        let push = r.with_spaces(|s| s.nested_push(&[0, 0])).unwrap();
        // T̃_2(e_i ⊗ e_j ⊗ h) = T(e_i) T(e_j) h
        for i in 0..e {
            for j in 0..e {
                let direct = &r.t()[i] * &r.t()[j];
                let cols = push.columns((i * e + j) * n, n).into_owned();
                assert!(op_norm(&(&t2 * cols - direct)) < 1e-10);
            }
        }
        assert_eq!(Subspace::image(&t2).dim(), 1);
    }

    #[test]
    fn isometry_and_coisometry() {
        assert!(g1_induced().rep.check_isometric().pass);
        assert!(g2_induced().rep.check_isometric().pass);
        assert!(scalar_unitary_3().check_isometric().pass);
        let w = g1_weighted(0.5).rep.check_isometric();
        assert!(!w.pass);
        assert!((w.residual - 0.75).abs() < 1e-12);

        assert!(scalar_unitary_3().check_fully_coisometric().pass);
        assert!(!g1_induced().rep.check_fully_coisometric().pass);
        let z = CovariantRep::scalar(zeros(2, 2)).unwrap().check_fully_coisometric();
        assert!(!z.pass);
        assert!((z.residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concavity_examples() {
        let iso = g2_induced().rep.check_concave().unwrap();
        assert!(iso.pass && !iso.vacuous);
        let d = CovariantRep::scalar(diag(&[1.0, 2.0])).unwrap().check_concave().unwrap();
        assert!(!d.pass);
        // per eigenvalue t: 2t² − 1 − t⁴ = −(t² − 1)², so −9 at t = 2
        assert!((d.min_eigenvalue.unwrap() + 9.0).abs() < 1e-9);
        let v = g1_weighted(0.5).rep.check_concave().unwrap();
        assert!(v.pass && v.vacuous);
    }

    #[test]
    fn expansive_examples() {
        assert!(g2_induced().rep.check_expansive().pass);
        let w = g1_weighted(0.5).rep.check_expansive();
        assert!(!w.pass);
        assert!((w.min_eigenvalue.unwrap() + 0.75).abs() < 1e-12);
        let conc = g2_weighted(1.2, 1.1).rep;
        assert!(conc.check_concave().unwrap().pass);
        assert!(conc.check_expansive().pass);
    }

    #[test]
    fn growth_bound_examples() {
        let r = g2_weighted(1.2, 1.1).rep;
        for n in 1..5 {
            assert!(r.check_growth_bound(n).unwrap().pass, "n = {n}");
        }
        assert!(g2_induced().rep.check_growth_bound(3).unwrap().pass);
    }

    #[test]
    fn shimorin_and_equivalent_forms() {
        for r in [g2_induced().rep, scalar_unitary_3()] {
            assert!(r.check_shimorin().unwrap().pass);
            assert!(r.check_eq13().unwrap().pass);
            assert!(r.check_eq12().unwrap().pass);
        }
        let d = CovariantRep::scalar(diag(&[1.0, 2.0])).unwrap();
        let s = d.check_shimorin().unwrap();
        assert!(!s.pass);
        // 2 − 4 − 1/4 at t = 2
        assert!((s.min_eigenvalue.unwrap() + 2.25).abs() < 1e-9);
        assert!(!d.check_eq13().unwrap().pass);
        assert!(!d.check_eq12().unwrap().pass);
        let z = CovariantRep::scalar(diag(&[1.0, 0.0])).unwrap();
        assert!(matches!(z.check_shimorin(), Err(Error::NotLeftInvertible { .. })));
    }

    #[test]
    fn cauchy_dual_examples() {
        let iso = g2_induced().rep;
        let d = iso.cauchy_dual().unwrap();
        assert!(op_norm(&(d.tilde() - iso.tilde())) < 1e-10);
        let w = g1_weighted(0.5).rep.cauchy_dual().unwrap();
        let expect = g1_weighted(2.0).rep;
        assert!(op_norm(&(w.tilde() - expect.tilde())) < 1e-10);
        let a = from_real(2, 2, &[1.0, 0.3, -0.2, 1.4]);
        let r = CovariantRep::scalar(a).unwrap();
        let dd = r.cauchy_dual().unwrap().cauchy_dual().unwrap();
        assert!(op_norm(&(dd.tilde() - r.tilde())) < 1e-10);
    }

    #[test]
    fn left_inverse_examples() {
        let r = g1_induced().rep;
        let ch = r.left_inverse_chain(3).unwrap();
        assert!(op_norm(&(&ch.left.l - r.tilde().adjoint())) < 1e-12);
        assert!(op_norm(&(&ch.left.p - diag(&[1.0, 1.0, 0.0]))) < 1e-12);
        assert!(ch.telescoping_residual < 1e-10);
        assert!(ch.projection_residual < 1e-10);
        assert!(op_norm(&ch.powers[3]) < 1e-12);
        let g = g2_weighted(1.2, 1.1).rep.left_inverse_chain(4).unwrap();
        assert!(g.telescoping_residual < 1e-9);
        assert!(g.left_inverse_residual < 1e-10);
    }

    #[test]
    fn energy_identity_examples() {
        let r = g2_induced().rep;
        let full = Subspace::full(r.hilbert_dim());
        for n in 1..4 {
            assert!(r.energy_identity(&full, n).unwrap() < 1e-9);
        }
        let w = g2_weighted(1.2, 1.1).rep;
        for n in 1..5 {
            assert!(w.energy_identity(&Subspace::full(6), n).unwrap() < 1e-9);
        }
        let bad = CovariantRep::scalar(diag(&[1.0, 2.0])).unwrap();
        assert!(matches!(bad.energy_identity(&Subspace::full(2), 1), Err(Error::NotConcave { .. })));
    }

    #[test]
    fn u_operator_examples() {
        let u = g1_induced().rep.build_u().unwrap();
        assert!(u.is_unitary(1e-10));
        assert!(u.kernel.is_zero());
        let u2 = g2_induced().rep.build_u().unwrap();
        assert!(u2.isometry_residual < 1e-9 && u2.coisometry_residual < 1e-9);
        let s = scalar_unitary_3().build_u().unwrap();
        assert_eq!(s.matrix.nrows(), 0);
        assert_eq!(s.kernel.dim(), 3);
        // concave and analytic but not isometric: U*U = I − Σ_j L^j*(I ⊗ 𝓓²)L^j
        let r = g2_weighted(1.2, 1.1).rep;
        let w = r.build_u().unwrap();
        assert!(w.contraction && w.expansive);
        assert!(w.kernel.is_zero());
        assert!(!w.is_unitary(1e-9));
        let ch = r.left_inverse_chain(6).unwrap();
        let d2 = r.tilde_gram() - eye(r.level().dim());
        let mut defect = zeros(6, 6);
        for j in 1..=6 {
            let a = r.amplify(j - 1, &d2, 1, 1).unwrap();
            defect += ch.powers[j].adjoint() * a * &ch.powers[j];
        }
        assert!(op_norm(&(w.matrix.adjoint() * &w.matrix + defect - eye(6))) < 1e-9);
    }

    #[test]
    fn direct_sum_and_conjugation() {
        let a = CovariantRep::scalar(fourier3()).unwrap();
        let b = CovariantRep::scalar(diag(&[2.0])).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.hilbert_dim(), 4);
        let u = fourier3();
        let cj = a.conjugate(&u).unwrap();
        assert!(cj.check_isometric().pass);
        let z = cx(0.0, 1.0);
        assert!(op_norm(&(cj.evaluate(&[z]) - &u * fourier3() * u.adjoint() * z)) < 1e-12);
    }
}
