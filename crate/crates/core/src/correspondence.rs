//! C*-correspondences over `⊕ Mat(d_b)` with explicit bases, internal tensor
//! products and interior tensor products with representations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraElement, MatrixBlocksAlgebra, StarRepresentation};
use crate::error::{Error, Result};
use crate::linalg::{
    c, canonical_range_basis, eye, herm_eig, hermitian_residual, inv_sqrt_hpd, kron, kron_eye_left, op_norm,
    psd_test, sqrt_psd, threshold, zeros, Mat, C64, DEFAULT_TOLERANCE, RANK_CUTOFF,
};
use crate::report::{Check, ValidationReport};

/// Quotient of an algebraic tensor product `ℂ^N` by the kernel of a positive
/// semidefinite Gram matrix `K`, with `push: ℂ^N → ℂ^r` and `lift: ℂ^r → ℂ^N`
/// satisfying `push · lift = I` and `lift* K lift = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorTensorSpace {
    algebraic_dim: usize,
    push: Mat,
    lift: Mat,
    null_basis: Mat,
}

impl InteriorTensorSpace {
    pub fn from_gram(gram: &Mat, tol: f64) -> Result<Self> {
        let n = gram.nrows();
        if gram.ncols() != n {
            return Err(Error::ShapeMismatch(format!("Gram matrix of shape {:?}", gram.shape())));
        }
        if n == 0 {
            return Ok(InteriorTensorSpace { algebraic_dim: 0, push: zeros(0, 0), lift: zeros(0, 0), null_basis: zeros(0, 0) });
        }
        let scale = op_norm(gram);
        let thr = threshold(tol, scale);
        let hres = hermitian_residual(gram);
        let eig = herm_eig(gram);
        let min = eig.values[0];
        if hres > thr || min < -thr {
            return Err(Error::PositivityFailure { min_eigenvalue: if hres > thr { -hres } else { min } });
        }
        let top = eig.values[n - 1];
        let cutoff = RANK_CUTOFF * top.max(1.0);
        let keep: Vec<usize> = (0..n).filter(|&i| eig.values[i] > cutoff).collect();
        let drop: Vec<usize> = (0..n).filter(|&i| eig.values[i] <= cutoff).collect();
        let mut range = zeros(n, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            range.set_column(k, &eig.vectors.column(i));
        }
        let mut null_basis = zeros(n, drop.len());
        for (k, &i) in drop.iter().enumerate() {
            null_basis.set_column(k, &eig.vectors.column(i));
        }
        let basis = canonical_range_basis(&range);
        let reduced = basis.adjoint() * gram * &basis;
        let reduced = (&reduced + reduced.adjoint()) * c(0.5);
        let push = sqrt_psd(&reduced) * basis.adjoint();
        let lift = &basis * inv_sqrt_hpd(&reduced).unwrap_or_else(|| eye(keep.len()));
        Ok(InteriorTensorSpace { algebraic_dim: n, push, lift, null_basis })
    }

    pub fn algebraic_dim(&self) -> usize {
        self.algebraic_dim
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.push.nrows()
    }

    pub fn push(&self) -> &Mat {
        &self.push
    }

    pub fn lift(&self) -> &Mat {
        &self.lift
    }

    /// Orthonormal basis of the kernel of the Gram matrix.
    pub fn null_basis(&self) -> &Mat {
        &self.null_basis
    }
}

/// Finite-dimensional C*-correspondence with basis `e_1, …, e_n`.
///
/// `right_action[k]` and `left_action[k]` are the matrices of `ξ ↦ ξ·u_k` and
/// `ξ ↦ φ(u_k)ξ` for the matrix unit `u_k`. The Gram `⟨e_i, e_j⟩` is stored per
/// block `b` as a matrix of size `n·d_b` with entry `[(i,p),(j,q)]` equal to
/// `⟨e_i, e_j⟩_b[p,q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    algebra: MatrixBlocksAlgebra,
    dim: usize,
    right_action: Vec<Mat>,
    left_action: Vec<Mat>,
    gram_blocks: Vec<Mat>,
    tolerance: f64,
}

impl Correspondence {
    /// `gram` lists `⟨e_i, e_j⟩` in row-major order `i * n + j`.
    pub fn new(
        algebra: MatrixBlocksAlgebra,
        dim: usize,
        right_action: Vec<Mat>,
        left_action: Vec<Mat>,
        gram: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if gram.len() != dim * dim {
            return Err(Error::ShapeMismatch(format!("expected {} Gram entries, got {}", dim * dim, gram.len())));
        }
        if gram.iter().any(|g| !algebra.contains(g)) {
            return Err(Error::AlgebraMismatch("Gram entry does not belong to the coefficient algebra".into()));
        }
        let mut gram_blocks = Vec::with_capacity(algebra.num_blocks());
        for (b, &d) in algebra.block_dims().iter().enumerate() {
            let mut gb = zeros(dim * d, dim * d);
            for i in 0..dim {
                for j in 0..dim {
                    gb.view_mut((i * d, j * d), (d, d)).copy_from(&gram[i * dim + j].blocks[b]);
                }
            }
            gram_blocks.push(gb);
        }
        Self::from_gram_blocks(algebra, dim, right_action, left_action, gram_blocks)
    }

    pub fn from_gram_blocks(
        algebra: MatrixBlocksAlgebra,
        dim: usize,
        right_action: Vec<Mat>,
        left_action: Vec<Mat>,
        gram_blocks: Vec<Mat>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("correspondence must be nonzero".into()));
        }
        let dm = algebra.dim();
        if right_action.len() != dm || left_action.len() != dm {
            return Err(Error::ShapeMismatch(format!(
                "actions need {dm} matrices, got {} and {}",
                right_action.len(),
                left_action.len()
            )));
        }
        if right_action.iter().chain(&left_action).any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::ShapeMismatch(format!("action matrices must be {dim}×{dim}")));
        }
        if gram_blocks.len() != algebra.num_blocks()
            || gram_blocks
                .iter()
                .zip(algebra.block_dims())
                .any(|(g, &d)| g.nrows() != dim * d || g.ncols() != dim * d)
        {
            return Err(Error::ShapeMismatch("Gram blocks do not match the algebra".into()));
        }
        Ok(Correspondence { algebra, dim, right_action, left_action, gram_blocks, tolerance: DEFAULT_TOLERANCE })
    }

    /// The algebra as a correspondence over itself, with basis the matrix units.
    pub fn identity(algebra: &MatrixBlocksAlgebra) -> Self {
        let d = algebra.dim();
        let mut right = vec![zeros(d, d); d];
        let mut left = vec![zeros(d, d); d];
        for k in 0..d {
            for l in 0..d {
                if let Some(m) = algebra.unit_product(l, k) {
                    right[k][(m, l)] = c(1.0);
                }
                if let Some(m) = algebra.unit_product(k, l) {
                    left[k][(m, l)] = c(1.0);
                }
            }
        }
        let mut gram = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                gram.push(match algebra.unit_product(algebra.unit_adjoint(i), j) {
                    Some(m) => algebra.unit(m),
                    None => AlgebraElement::zero(algebra),
                });
            }
        }
        Self::new(algebra.clone(), d, right, left, gram).expect("identity correspondence is well formed")
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

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn right_actions(&self) -> &[Mat] {
        &self.right_action
    }

    pub fn left_actions(&self) -> &[Mat] {
        &self.left_action
    }

    pub fn gram_blocks(&self) -> &[Mat] {
        &self.gram_blocks
    }

    /// `⟨e_i, e_j⟩`.
    pub fn gram(&self, i: usize, j: usize) -> AlgebraElement {
        let blocks = self
            .gram_blocks
            .iter()
            .zip(self.algebra.block_dims())
            .map(|(g, &d)| g.view((i * d, j * d), (d, d)).into_owned())
            .collect();
        AlgebraElement { blocks }
    }

    /// For each matrix unit `u_k`, the `n×n` matrix of its coefficients in the Gram entries.
    pub fn gram_coefficients(&self) -> Vec<Mat> {
        let n = self.dim;
        let mut out = Vec::with_capacity(self.algebra.dim());
        for k in 0..self.algebra.dim() {
            let (b, p, q) = self.algebra.basis_unit(k);
            let d = self.algebra.block_dims()[b];
            let g = &self.gram_blocks[b];
            out.push(Mat::from_fn(n, n, |i, j| g[(i * d + p, j * d + q)]));
        }
        out
    }

    /// `φ(a)` as a matrix on the basis.
    pub fn left(&self, a: &AlgebraElement) -> Mat {
        combine(&self.left_action, &self.algebra.coeffs(a), self.dim)
    }

    /// `ξ ↦ ξ·a` as a matrix on the basis.
    pub fn right(&self, a: &AlgebraElement) -> Mat {
        combine(&self.right_action, &self.algebra.coeffs(a), self.dim)
    }

    /// `⟨ξ, η⟩`, conjugate-linear in `ξ`.
    pub fn inner(&self, xi: &[C64], eta: &[C64]) -> AlgebraElement {
        let mut blocks = Vec::with_capacity(self.gram_blocks.len());
        for (g, &d) in self.gram_blocks.iter().zip(self.algebra.block_dims()) {
            let x = kron(&Mat::from_column_slice(self.dim, 1, xi), &eye(d));
            let y = kron(&Mat::from_column_slice(self.dim, 1, eta), &eye(d));
            blocks.push(x.adjoint() * g * y);
        }
        AlgebraElement { blocks }
    }

    /// Scalar Gram `[tr ι⟨e_i, e_j⟩]`, the inner product used for quotients.
    pub fn trace_gram(&self) -> Mat {
        trace_form(&self.gram_blocks, self.algebra.block_dims(), self.dim)
    }

    pub fn validate(&self) -> ValidationReport {
        let alg = &self.algebra;
        let n = self.dim;
        let dm = alg.dim();
        let tol = self.tolerance;
        let scale = self
            .left_action
            .iter()
            .chain(&self.right_action)
            .map(op_norm)
            .fold(0.0, f64::max)
            .max(self.gram_blocks.iter().map(op_norm).fold(0.0, f64::max));
        let thr = threshold(tol, scale * scale);
        let mut rep = ValidationReport::default();

        let mut right_mod = 0.0f64;
        let mut left_mult = 0.0f64;
        let mut bimod = 0.0f64;
        for k in 0..dm {
            for l in 0..dm {
                let r = &self.right_action[l] * &self.right_action[k];
                let lm = &self.left_action[k] * &self.left_action[l];
                let (rr, lr) = match alg.unit_product(k, l) {
                    Some(m) => (op_norm(&(r - &self.right_action[m])), op_norm(&(lm - &self.left_action[m]))),
                    None => (op_norm(&r), op_norm(&lm)),
                };
                right_mod = right_mod.max(rr);
                left_mult = left_mult.max(lr);
                bimod = bimod.max(op_norm(
                    &(&self.left_action[k] * &self.right_action[l] - &self.right_action[l] * &self.left_action[k]),
                ));
            }
        }
        let one = alg.identity();
        rep.push(Check::within("right_module", right_mod, thr));
        rep.push(Check::within("right_unital", op_norm(&(self.right(&one) - eye(n))), thr));
        rep.push(Check::within("left_multiplicative", left_mult, thr));
        rep.push(Check::within("left_essential", op_norm(&(self.left(&one) - eye(n))), thr));
        rep.push(Check::within("bimodule", bimod, thr));

        let mut herm = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                herm = herm.max(self.gram(j, i).sub(&self.gram(i, j).adjoint()).norm());
            }
        }
        rep.push(Check::within("gram_hermitian", herm, thr));

        // ⟨e_i, e_j u_k⟩ = ⟨e_i, e_j⟩ u_k and ⟨φ(u_k) e_i, e_j⟩ = ⟨e_i, φ(u_k*) e_j⟩
        let mut lin = 0.0f64;
        let mut adj = 0.0f64;
        let basis = |i: usize| -> Vec<C64> { (0..n).map(|x| if x == i { c(1.0) } else { c(0.0) }).collect() };
        for k in 0..dm {
            let uk = alg.unit(k);
            let lk = &self.left_action[k];
            let lks = &self.left_action[alg.unit_adjoint(k)];
            for i in 0..n {
                let ei = basis(i);
                let lei: Vec<C64> = lk.column(i).iter().cloned().collect();
                for j in 0..n {
                    let ej = basis(j);
                    let rej: Vec<C64> = self.right_action[k].column(j).iter().cloned().collect();
                    lin = lin.max(self.inner(&ei, &rej).sub(&self.gram(i, j).mul(&uk)).norm());
                    let lsej: Vec<C64> = lks.column(j).iter().cloned().collect();
                    adj = adj.max(self.inner(&lei, &ej).sub(&self.inner(&ei, &lsej)).norm());
                }
            }
        }
        rep.push(Check::within("gram_right_linear", lin, thr));
        rep.push(Check::within("left_adjointable", adj, thr));

        let mut min_eig = f64::INFINITY;
        let mut pos_ok = true;
        for g in &self.gram_blocks {
            let out = psd_test(g, tol);
            pos_ok &= out.pass;
            min_eig = min_eig.min(out.min_eigenvalue);
        }
        rep.push(Check::new("gram_positive", pos_ok, (-min_eig).max(0.0)));
        let tg = self.trace_gram();
        let e = herm_eig(&tg);
        let top = e.values.last().cloned().unwrap_or(0.0);
        let low = e.values.first().cloned().unwrap_or(0.0);
        rep.push(Check::new("gram_definite", low > RANK_CUTOFF * top.max(1.0), low));
        rep
    }
}

fn combine(mats: &[Mat], coeffs: &[C64], n: usize) -> Mat {
    let mut out = zeros(n, n);
    for (m, &v) in mats.iter().zip(coeffs) {
        if v != c(0.0) {
            out += m * v;
        }
    }
    out
}

fn trace_form(blocks: &[Mat], dims: &[usize], n: usize) -> Mat {
    let mut out = zeros(n, n);
    for (g, &d) in blocks.iter().zip(dims) {
        for i in 0..n {
            for j in 0..n {
                let mut s = c(0.0);
                for p in 0..d {
                    s += g[(i * d + p, j * d + p)];
                }
                out[(i, j)] += s;
            }
        }
    }
    out
}

fn same_algebra(a: &MatrixBlocksAlgebra, b: &MatrixBlocksAlgebra) -> Result<()> {
    if a != b {
        return Err(Error::AlgebraMismatch(format!(
            "block dimensions {:?} and {:?} differ",
            a.block_dims(),
            b.block_dims()
        )));
    }
    Ok(())
}

/// Internal tensor product `E ⊗_M F` together with the quotient map from the
/// algebraic tensor `ℂ^{n_E n_F}` (index `i * n_F + a`).
pub fn internal_tensor(e: &Correspondence, f: &Correspondence) -> Result<(Correspondence, InteriorTensorSpace)> {
    same_algebra(&e.algebra, &f.algebra)?;
    let alg = &e.algebra;
    let (ne, nf) = (e.dim, f.dim);
    let na = ne * nf;
    let tol = e.tolerance.max(f.tolerance);
    let coeffs = e.gram_coefficients();

    // ⟨e_i ⊗ f_a, e_j ⊗ f_b⟩ = ⟨f_a, φ_F(⟨e_i, e_j⟩) f_b⟩
    let mut big = Vec::with_capacity(alg.num_blocks());
    for (beta, &d) in alg.block_dims().iter().enumerate() {
        let gf = &f.gram_blocks[beta];
        let moved: Vec<Mat> = f.left_action.iter().map(|l| gf * kron(l, &eye(d))).collect();
        let mut g = zeros(na * d, na * d);
        for i in 0..ne {
            for j in 0..ne {
                let mut blk = zeros(nf * d, nf * d);
                for (k, m) in moved.iter().enumerate() {
                    let v = coeffs[k][(i, j)];
                    if v != c(0.0) {
                        blk += m * v;
                    }
                }
                g.view_mut((i * nf * d, j * nf * d), (nf * d, nf * d)).copy_from(&blk);
            }
        }
        big.push(g);
    }
    for g in &big {
        let out = psd_test(g, tol);
        if !out.pass {
            return Err(Error::PositivityFailure { min_eigenvalue: out.min_eigenvalue.min(-out.hermitian_residual) });
        }
    }
    let space = InteriorTensorSpace::from_gram(&trace_form(&big, alg.block_dims(), na), tol)?;
    let r = space.dim();
    if r == 0 {
        return Err(Error::InvalidInput("internal tensor product is zero".into()));
    }
    let gram_blocks: Vec<Mat> = big
        .iter()
        .zip(alg.block_dims())
        .map(|(g, &d)| {
            let l = kron(&space.lift, &eye(d));
            l.adjoint() * g * l
        })
        .collect();
    let left = e.left_action.iter().map(|l| &space.push * kron(l, &eye(nf)) * &space.lift).collect();
    let right = f.right_action.iter().map(|rm| &space.push * kron_eye_left(ne, rm) * &space.lift).collect();
    let out = Correspondence::from_gram_blocks(alg.clone(), r, right, left, gram_blocks)?.with_tolerance(tol);
    Ok((out, space))
}

/// Dimension of `E ⊗ F`, zero when the product vanishes.
pub fn internal_tensor_dim(e: &Correspondence, f: &Correspondence) -> Result<usize> {
    match internal_tensor(e, f) {
        Ok((t, _)) => Ok(t.dim()),
        Err(Error::InvalidInput(_)) => Ok(0),
        Err(err) => Err(err),
    }
}

/// `E^{⊗n}`, left associated; `n = 0` gives the identity correspondence.
/// Returns `None` when the power vanishes.
pub fn tensor_power(e: &Correspondence, n: usize) -> Result<Option<Correspondence>> {
    if n == 0 {
        return Ok(Some(Correspondence::identity(&e.algebra).with_tolerance(e.tolerance)));
    }
    let mut acc = e.clone();
    for _ in 1..n {
        match internal_tensor(&acc, e) {
            Ok((t, _)) => acc = t,
            Err(Error::InvalidInput(_)) => return Ok(None),
            Err(err) => return Err(err),
        }
    }
    Ok(Some(acc))
}

/// `E ⊗_σ H`: the quotient of `ℂ^{n_E} ⊗ H` (index `i * dim H + p`) by the
/// kernel of `[σ(⟨e_i, e_j⟩)]`.
pub fn interior_tensor_with_rep(e: &Correspondence, sigma: &StarRepresentation) -> Result<InteriorTensorSpace> {
    same_algebra(&e.algebra, sigma.algebra())?;
    InteriorTensorSpace::from_gram(&rep_gram(e, sigma), sigma.tolerance().max(e.tolerance))
}

/// `[σ(⟨e_i, e_j⟩)]` as a matrix of size `n_E · dim H`.
pub fn rep_gram(e: &Correspondence, sigma: &StarRepresentation) -> Mat {
    let n = sigma.hilbert_dim();
    let mut g = zeros(e.dim * n, e.dim * n);
    for (k, ck) in e.gram_coefficients().iter().enumerate() {
        if ck.iter().any(|v| *v != c(0.0)) {
            g += kron(ck, sigma.image(k));
        }
    }
    g
}

/// Induced representation `a ↦ push (φ(a) ⊗ I) lift` on `E ⊗_σ H`.
pub fn induced_rep(e: &Correspondence, sigma: &StarRepresentation, space: &InteriorTensorSpace) -> Result<StarRepresentation> {
    let n = sigma.hilbert_dim();
    let images = e.left_action.iter().map(|l| space.push() * kron(l, &eye(n)) * space.lift()).collect();
    Ok(StarRepresentation::new(sigma.algebra().clone(), space.dim(), images)?.with_tolerance(sigma.tolerance()))
}

/// Truncated Fock correspondence `⊕_{n ≤ N} E^{⊗n}`.
#[derive(Debug, Clone)]
pub struct FockTruncation {
    pub levels: Vec<Correspondence>,
    /// `E^{⊗(N+1)} = 0`, so the truncation is the whole Fock correspondence.
    pub exact: bool,
}

impl FockTruncation {
    pub fn level_dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.levels.iter().map(|l| l.dim()).sum()
    }
}

pub fn fock(e: &Correspondence, depth: usize) -> Result<FockTruncation> {
    let mut levels = vec![Correspondence::identity(&e.algebra).with_tolerance(e.tolerance)];
    let mut current = Some(e.clone());
    for _ in 1..=depth {
        match current.take() {
            Some(c) => {
                current = match internal_tensor(&c, e) {
                    Ok((t, _)) => Some(t),
                    Err(Error::InvalidInput(_)) => None,
                    Err(err) => return Err(err),
                };
                levels.push(c);
            }
            None => break,
        }
    }
    let exact = current.is_none();
    Ok(FockTruncation { levels, exact })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Correspondence {
        // δ_e·a = a(s(e)) δ_e, a·δ_e = a(r(e)) δ_e, ⟨δ_e, δ_f⟩ = δ_{ef} p_{s(e)}
        let alg = MatrixBlocksAlgebra::commutative(n).unwrap();
        let m = edges.len();
        let mut right = vec![zeros(m, m); n];
        let mut left = vec![zeros(m, m); n];
        let mut gram = Vec::new();
        for (x, &(s, r)) in edges.iter().enumerate() {
            right[s][(x, x)] = c(1.0);
            left[r][(x, x)] = c(1.0);
        }
        for (x, e) in edges.iter().enumerate() {
            for y in 0..m {
                gram.push(if x == y { alg.unit(e.0) } else { AlgebraElement::zero(&alg) });
            }
        }
        Correspondence::new(alg, m, right, left, gram).unwrap()
    }

    #[test]
    fn graph_correspondences_validate() {
        assert!(graph(2, &[(0, 1)]).validate().pass());
        assert!(graph(3, &[(0, 1), (1, 2), (2, 2)]).validate().pass());
    }

    #[test]
    fn identity_correspondence_validates() {
        let alg = MatrixBlocksAlgebra::new(vec![2, 1]).unwrap();
        let e = Correspondence::identity(&alg);
        assert!(e.validate().pass(), "{:?}", e.validate());
    }

    #[test]
    fn single_edge_squares_to_zero() {
        let e = graph(2, &[(0, 1)]);
        assert_eq!(internal_tensor_dim(&e, &e).unwrap(), 0);
        assert!(tensor_power(&e, 2).unwrap().is_none());
        let f = fock(&e, 3).unwrap();
        assert!(f.exact);
        assert_eq!(f.level_dims(), vec![2, 1]);
    }

    #[test]
    fn path_of_length_two() {
        let e = graph(3, &[(0, 1), (1, 2)]);
        let (t, space) = internal_tensor(&e, &e).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(space.algebraic_dim(), 4);
        assert!(t.validate().pass());
        // surviving vector is δ_{2→3} ⊗ δ_{1→2}, index 1 * 2 + 0
        assert!((space.lift()[(2, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(tensor_power(&e, 3).unwrap().is_none());
    }

    #[test]
    fn interior_tensor_of_single_edge() {
        let e = graph(2, &[(0, 1)]);
        let sigma = StarRepresentation::faithful(e.algebra());
        let s = interior_tensor_with_rep(&e, &sigma).unwrap();
        assert_eq!(s.dim(), 1);
        let ind = induced_rep(&e, &sigma, &s).unwrap();
        assert!(ind.validate().pass());
        // φ(p_2) acts as the identity on δ_e ⊗ δ_1
        assert!((ind.image(1)[(0, 0)] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn indefinite_gram_rejected() {
        let alg = MatrixBlocksAlgebra::commutative(1).unwrap();
        let e = Correspondence::new(alg.clone(), 1, vec![eye(1)], vec![eye(1)], vec![alg.unit(0).scale(c(-1.0))]).unwrap();
        let v = e.validate();
        assert!(!v.get("gram_positive").unwrap().pass);
        let m = Correspondence::identity(&alg);
        assert!(matches!(internal_tensor(&e, &m), Err(Error::PositivityFailure { .. })));
        let sigma = StarRepresentation::faithful(&alg);
        assert!(matches!(interior_tensor_with_rep(&e, &sigma), Err(Error::PositivityFailure { .. })));
    }

    #[test]
    fn loop_powers_have_path_counts() {
        // two loops at one vertex: E^{⊗n} has dimension 2^n
        let e = graph(1, &[(0, 0), (0, 0)]);
        for n in 1..4 {
            assert_eq!(tensor_power(&e, n).unwrap().unwrap().dim(), 1 << n);
        }
    }
}
