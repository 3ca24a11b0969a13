//! Product systems over `ℕ₀ᵏ`, their covariant representations, the doubly
//! commuting condition, the subspaces `W_α` and the verifiers built on them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::algebra::StarRepresentation;
use crate::correspondence::{internal_tensor, Correspondence, InteriorTensorSpace};
use crate::covrep::CovariantRep;
use crate::error::{Error, Result};
use crate::linalg::{eye, kron, op_norm, threshold, zeros, Mat, ANGLE_TOLERANCE};
use crate::report::{Check, Report, ValidationReport};
use crate::spaces::WordSpaces;
use crate::subspace::Subspace;
use crate::wold::{check_reducing, closure_unchecked, geom_threshold, h_infinity, step_unchecked, wold_decompose};

/// `E_i ⊗ E_j` with its quotient map; `None` when the product vanishes.
type PairSpace = Option<(Correspondence, InteriorTensorSpace)>;

fn pair_space(e: &Correspondence, f: &Correspondence) -> Result<PairSpace> {
    match internal_tensor(e, f) {
        Ok(p) => Ok(Some(p)),
        Err(Error::InvalidInput(_)) => Ok(None),
        Err(err) => Err(err),
    }
}

fn pair_dim(p: &PairSpace) -> usize {
    p.as_ref().map(|(c, _)| c.dim()).unwrap_or(0)
}

/// Correspondences `E_1, …, E_k` with flips `t_{i,j}: E_i ⊗ E_j → E_j ⊗ E_i`
/// given for `i > j` on the algebraic tensors (index `a * e_j + b`).
#[derive(Debug, Clone)]
pub struct ProductSystem {
    corrs: Vec<Correspondence>,
    flips_alg: BTreeMap<(usize, usize), Mat>,
    pairs: BTreeMap<(usize, usize), PairSpace>,
    flips: BTreeMap<(usize, usize), Mat>,
    tol: f64,
}

impl ProductSystem {
    pub fn new(corrs: Vec<Correspondence>, flips_alg: BTreeMap<(usize, usize), Mat>) -> Result<Self> {
        let k = corrs.len();
        if k == 0 {
            return Err(Error::InvalidInput("product system needs at least one correspondence".into()));
        }
        let alg = corrs[0].algebra();
        if let Some(e) = corrs.iter().find(|e| e.algebra() != alg) {
            return Err(Error::AlgebraMismatch(format!(
                "correspondences over {:?} and {:?}",
                alg.block_dims(),
                e.algebra().block_dims()
            )));
        }
        if let Some(&(i, j)) = flips_alg.keys().find(|&&(i, j)| i <= j || i >= k) {
            return Err(Error::InvalidInput(format!("flip ({i}, {j}) must satisfy {k} > i > j")));
        }
        let tol = corrs.iter().map(|e| e.tolerance()).fold(0.0, f64::max);
        let mut pairs = BTreeMap::new();
        for i in 0..k {
            for j in 0..k {
                pairs.insert((i, j), pair_space(&corrs[i], &corrs[j])?);
            }
        }
        let mut flips = BTreeMap::new();
        for i in 0..k {
            for j in 0..i {
                let t = flips_alg
                    .get(&(i, j))
                    .ok_or_else(|| Error::ShapeMismatch(format!("missing flip ({i}, {j})")))?;
                let (ei, ej) = (corrs[i].dim(), corrs[j].dim());
                if t.shape() != (ej * ei, ei * ej) {
                    return Err(Error::ShapeMismatch(format!(
                        "flip ({i}, {j}) of shape {:?}, expected {}×{}",
                        t.shape(),
                        ej * ei,
                        ei * ej
                    )));
                }
                let (src, dst) = (&pairs[&(i, j)], &pairs[&(j, i)]);
                let q = match (src, dst) {
                    (Some((_, s)), Some((_, d))) => d.push() * t * s.lift(),
                    _ => zeros(pair_dim(dst), pair_dim(src)),
                };
                let inv = q.clone().try_inverse().unwrap_or_else(|| q.adjoint());
                flips.insert((j, i), inv);
                flips.insert((i, j), q);
            }
            flips.insert((i, i), eye(pair_dim(&pairs[&(i, i)])));
        }
        Ok(ProductSystem { corrs, flips_alg, pairs, flips, tol })
    }

    /// `k` copies of `ℂ` over `ℂ` with trivial flips.
    pub fn scalar(k: usize) -> Result<Self> {
        let alg = crate::algebra::MatrixBlocksAlgebra::commutative(1)?;
        let e = Correspondence::identity(&alg);
        let mut flips = BTreeMap::new();
        for i in 0..k {
            for j in 0..i {
                flips.insert((i, j), eye(1));
            }
        }
        Self::new(vec![e; k], flips)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.corrs = self.corrs.into_iter().map(|e| e.with_tolerance(tol)).collect();
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn rank(&self) -> usize {
        self.corrs.len()
    }

    pub fn correspondence(&self, i: usize) -> &Correspondence {
        &self.corrs[i]
    }

    pub fn correspondences(&self) -> &[Correspondence] {
        &self.corrs
    }

    /// The flips as given, on the algebraic tensors, for `i > j`.
    pub fn flips_algebraic(&self) -> &BTreeMap<(usize, usize), Mat> {
        &self.flips_alg
    }

    /// `t_{i,j}` on the quotient bases of `E_i ⊗ E_j` and `E_j ⊗ E_i`.
    pub fn flip(&self, i: usize, j: usize) -> &Mat {
        &self.flips[&(i, j)]
    }

    /// `E_i ⊗ E_j` with its quotient map, `None` when it is zero.
    pub fn pair(&self, i: usize, j: usize) -> Option<&(Correspondence, InteriorTensorSpace)> {
        self.pairs[&(i, j)].as_ref()
    }

    /// `lift_{ji} t_{i,j} push_{ij}` on `ℂ^{e_i} ⊗ ℂ^{e_j}`; it kills the kernel of the quotient map.
    pub fn flip_on_algebraic(&self, i: usize, j: usize) -> Mat {
        let (ei, ej) = (self.corrs[i].dim(), self.corrs[j].dim());
        match (self.pair(i, j), self.pair(j, i)) {
            (Some((_, s)), Some((_, d))) => d.lift() * self.flip(i, j) * s.push(),
            _ => zeros(ej * ei, ei * ej),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        for (i, e) in self.corrs.iter().enumerate() {
            rep.extend_prefixed(&format!("E{}.", i + 1), e.validate());
        }
        let k = self.rank();
        for i in 0..k {
            for j in 0..i {
                let name = format!("flip_{},{}", i + 1, j + 1);
                let t = self.flip(i, j);
                let (src, dst) = (self.pair(i, j), self.pair(j, i));
                let (Some((ps, sp)), Some((pd, _))) = (src, dst) else {
                    let both_zero = src.is_none() && dst.is_none();
                    rep.push(Check::new(format!("{name}.dimensions"), both_zero, 0.0).vacuous(both_zero));
                    continue;
                };
                let tol = self.tol;
                rep.push(Check::new(format!("{name}.dimensions"), ps.dim() == pd.dim(), 0.0));
                if ps.dim() != pd.dim() {
                    continue;
                }
                let scale = op_norm(t);
                let thr = threshold(tol, scale * scale);
                let talg = &self.flips_alg[&(i, j)];
                let null = sp.null_basis();
                let wd = if null.ncols() == 0 { 0.0 } else { op_norm(&(self.pairs[&(j, i)].as_ref().unwrap().1.push() * talg * null)) };
                rep.push(Check::within(format!("{name}.well_defined"), wd, threshold(tol, scale)));
                let n = t.nrows();
                let uni = op_norm(&(t.adjoint() * t - eye(n))).max(op_norm(&(t * t.adjoint() - eye(n))));
                rep.push(Check::within(format!("{name}.unitary"), uni, thr));
                let mut inner = 0.0f64;
                for (b, &d) in ps.algebra().block_dims().iter().enumerate() {
                    let td = kron(t, &eye(d));
                    inner = inner.max(op_norm(&(td.adjoint() * &pd.gram_blocks()[b] * &td - &ps.gram_blocks()[b])));
                }
                rep.push(Check::within(format!("{name}.inner_product"), inner, thr));
                let mut left = 0.0f64;
                let mut right = 0.0f64;
                for x in 0..ps.algebra().dim() {
                    left = left.max(op_norm(&(t * &ps.left_actions()[x] - &pd.left_actions()[x] * t)));
                    right = right.max(op_norm(&(t * &ps.right_actions()[x] - &pd.right_actions()[x] * t)));
                }
                rep.push(Check::within(format!("{name}.left_action"), left, threshold(tol, scale)));
                rep.push(Check::within(format!("{name}.right_action"), right, threshold(tol, scale)));
            }
        }
        rep
    }
}

/// Nonempty `α ⊆ {0, …, k−1}`, sorted without repetitions.
pub fn alpha_set(k: usize, alpha: &[usize]) -> Result<Vec<usize>> {
    let mut a = alpha.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || a.len() != alpha.len() || a[a.len() - 1] >= k {
        return Err(Error::InvalidInput(format!("{alpha:?} is not a nonempty subset of 0..{k}")));
    }
    Ok(a)
}

/// All nonempty subsets of `{0, …, k−1}`.
pub fn all_alphas(k: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << k)).map(|mask| (0..k).filter(|&i| mask & (1 << i) != 0).collect()).collect()
}

/// `{1,3}`-style label, one-based.
pub fn alpha_label(alpha: &[usize]) -> String {
    let parts: Vec<String> = alpha.iter().map(|i| format!("{}", i + 1)).collect();
    format!("{{{}}}", parts.join(","))
}

/// Residuals of the doubly commuting condition and of its consequence on `H`.
#[derive(Debug, Clone)]
pub struct DoublyCommuting {
    pub pass: bool,
    /// `(i, j)` with `i ≠ j` and the residual of `T̃_j* T̃_i = (I ⊗ T̃_i)(t_{i,j} ⊗ I)(I ⊗ T̃_j*)`.
    pub residuals: Vec<((usize, usize), f64)>,
    /// `‖[T̃_i T̃_i*, T̃_j T̃_j*]‖` for `i < j`.
    pub range_commutators: Vec<((usize, usize), f64)>,
    /// `‖[T̃_i* T̃_i, T̃_j* T̃_j]‖` in the scalar case, where both act on `H`.
    pub gram_commutators: Option<Vec<((usize, usize), f64)>>,
    pub threshold: f64,
}

impl DoublyCommuting {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn consequence_holds(&self) -> bool {
        let gram = self.gram_commutators.iter().flatten();
        self.range_commutators.iter().chain(gram).all(|r| r.1 <= self.threshold)
    }
}

/// How the per-coordinate hypothesis of the generating wandering subspace
/// theorem is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HypothesisMode {
    /// Every coordinate is analytic and concave or satisfies the Shimorin inequality.
    #[default]
    Corollary,
    /// Every restriction to a reducing subspace met in the recursion admits a
    /// Wold-type decomposition, which is what the inequalities are used for.
    Direct,
}

/// Covariant representation `(σ, T^{(1)}, …, T^{(k)})` of a product system.
#[derive(Debug, Clone)]
pub struct ProductRep {
    system: ProductSystem,
    sigma: StarRepresentation,
    reps: Vec<CovariantRep>,
    tol: f64,
    spaces: RefCell<WordSpaces>,
}

impl ProductRep {
    pub fn new(system: ProductSystem, sigma: StarRepresentation, t: Vec<Vec<Mat>>) -> Result<Self> {
        if t.len() != system.rank() {
            return Err(Error::ShapeMismatch(format!("{} coordinates for a system of rank {}", t.len(), system.rank())));
        }
        let reps = t
            .into_iter()
            .enumerate()
            .map(|(i, ti)| CovariantRep::new(sigma.clone(), system.correspondence(i).clone(), ti))
            .collect::<Result<Vec<_>>>()?;
        Self::from_reps(system, reps)
    }

    pub fn from_reps(system: ProductSystem, reps: Vec<CovariantRep>) -> Result<Self> {
        if reps.len() != system.rank() || reps.is_empty() {
            return Err(Error::ShapeMismatch(format!("{} coordinates for a system of rank {}", reps.len(), system.rank())));
        }
        let sigma = reps[0].sigma().clone();
        for (i, r) in reps.iter().enumerate() {
            if r.sigma() != &sigma {
                return Err(Error::InvalidInput(format!("coordinate {} uses a different σ", i + 1)));
            }
            if r.correspondence() != system.correspondence(i) {
                return Err(Error::AlgebraMismatch(format!("coordinate {} is not over E{}", i + 1, i + 1)));
            }
        }
        let tol = system.tolerance().max(sigma.tolerance());
        let mut spaces = WordSpaces::new(sigma.clone(), system.correspondences().to_vec())?;
        for (i, r) in reps.iter().enumerate() {
            spaces.seed(vec![i], r.level().clone());
        }
        let pr = ProductRep { system, sigma, reps, tol, spaces: RefCell::new(spaces) };
        let k = pr.rank();
        for i in 0..k {
            for j in 0..i {
                let (res, thr) = pr.commutation(i, j)?;
                if res > thr {
                    return Err(Error::CommutationViolation { residual: res });
                }
            }
        }
        Ok(pr)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.reps = self.reps.into_iter().map(|r| r.with_tolerance(tol)).collect();
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn system(&self) -> &ProductSystem {
        &self.system
    }

    pub fn sigma(&self) -> &StarRepresentation {
        &self.sigma
    }

    pub fn rep(&self, i: usize) -> &CovariantRep {
        &self.reps[i]
    }

    pub fn reps(&self) -> &[CovariantRep] {
        &self.reps
    }

    pub fn hilbert_dim(&self) -> usize {
        self.sigma.hilbert_dim()
    }

    pub fn with_spaces<R>(&self, f: impl FnOnce(&mut WordSpaces) -> Result<R>) -> Result<R> {
        f(&mut self.spaces.borrow_mut())
    }

    fn scale(&self) -> f64 {
        self.reps.iter().map(|r| op_norm(r.tilde())).fold(0.0, f64::max)
    }

    /// `t_{i,j} ⊗ I_H` from `E_i ⊗ (E_j ⊗ H)` to `E_j ⊗ (E_i ⊗ H)`.
    pub fn flip_operator(&self, i: usize, j: usize) -> Result<Mat> {
        let t = self.system.flip_on_algebraic(i, j);
        let n = self.hilbert_dim();
        self.with_spaces(|s| Ok(s.nested_push(&[j, i])? * kron(&t, &eye(n)) * s.nested_lift(&[i, j])?))
    }

    /// `T̃_{w_0}(I ⊗ T̃_{w_1})⋯(I ⊗ ⋯ ⊗ T̃_{w_{m−1}})` on `E_{w_0} ⊗ ⋯ ⊗ E_{w_{m−1}} ⊗ H`.
    pub fn tilde_word(&self, word: &[usize]) -> Result<Mat> {
        if let Some(&c) = word.iter().find(|&&c| c >= self.rank()) {
            return Err(Error::InvalidInput(format!("coordinate {c} out of range")));
        }
        self.with_spaces(|s| {
            let mut out = eye(s.dim(&[])?);
            for k in 0..word.len() {
                out *= s.amplify(&word[..k], self.reps[word[k]].tilde(), &word[k..k + 1], &[])?;
            }
            Ok(out)
        })
    }

    /// Word `1^{n_1} 2^{n_2} ⋯ k^{n_k}` (coordinate 1 outermost).
    pub fn multi_word(&self, n: &[usize]) -> Result<Vec<usize>> {
        if n.len() != self.rank() {
            return Err(Error::ShapeMismatch(format!("multi-index of length {} for rank {}", n.len(), self.rank())));
        }
        Ok(n.iter().enumerate().flat_map(|(i, &m)| core::iter::repeat_n(i, m)).collect())
    }

    /// `T̃_n: 𝔼(n) ⊗ H → H`.
    pub fn tilde_multi(&self, n: &[usize]) -> Result<Mat> {
        let w = self.multi_word(n)?;
        self.tilde_word(&w)
    }

    fn alpha_word(&self, alpha: &[usize], m: &[usize]) -> Result<Vec<usize>> {
        if alpha.len() != m.len() {
            return Err(Error::ShapeMismatch(format!("{} exponents for {} coordinates", m.len(), alpha.len())));
        }
        Ok(alpha.iter().zip(m).flat_map(|(&i, &e)| core::iter::repeat_n(i, e)).collect())
    }

    /// `T̃^α_m`.
    pub fn tilde_alpha(&self, alpha: &[usize], m: &[usize]) -> Result<Mat> {
        let alpha = alpha_set(self.rank(), alpha)?;
        let w = self.alpha_word(&alpha, m)?;
        self.tilde_word(&w)
    }

    /// Residual of `T̃_i(I ⊗ T̃_j) = T̃_j(I ⊗ T̃_i)(t_{i,j} ⊗ I)` with its threshold.
    pub fn commutation(&self, i: usize, j: usize) -> Result<(f64, f64)> {
        let lhs = self.tilde_word(&[i, j])?;
        let rhs = self.tilde_word(&[j, i])? * self.flip_operator(i, j)?;
        let s = self.scale();
        Ok((op_norm(&(lhs - rhs)), threshold(self.tol, s * s)))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        rep.extend_prefixed("system.", self.system.validate());
        for (i, r) in self.reps.iter().enumerate() {
            rep.extend_prefixed(&format!("T{}.", i + 1), r.validate());
        }
        let k = self.rank();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let name = format!("commutation_{},{}", i + 1, j + 1);
                match self.commutation(i, j) {
                    Ok((res, thr)) => rep.push(Check::within(name, res, thr)),
                    Err(_) => rep.push(Check::new(name, false, f64::INFINITY)),
                }
            }
        }
        rep
    }

    /// `T̃_j* T̃_i − (I_{E_j} ⊗ T̃_i)(t_{i,j} ⊗ I)(I_{E_i} ⊗ T̃_j*)` on `E_i ⊗ H`.
    pub fn doubly_residual(&self, i: usize, j: usize) -> Result<f64> {
        let lhs = self.reps[j].tilde().adjoint() * self.reps[i].tilde();
        let inner = self.with_spaces(|s| s.amplify(&[i], &self.reps[j].tilde().adjoint(), &[], &[j]))?;
        let outer = self.with_spaces(|s| s.amplify(&[j], self.reps[i].tilde(), &[i], &[]))?;
        let rhs = outer * self.flip_operator(i, j)? * inner;
        Ok(op_norm(&(lhs - rhs)))
    }

    fn is_scalar(&self) -> bool {
        let alg = self.sigma.algebra();
        alg.block_dims() == [1] && self.reps.iter().all(|r| r.correspondence() == &Correspondence::identity(alg))
    }

    pub fn check_doubly_commuting(&self) -> Result<DoublyCommuting> {
        let k = self.rank();
        let s = self.scale();
        let thr = threshold(self.tol, s * s);
        let mut residuals = Vec::new();
        let mut ranges = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    residuals.push(((i, j), self.doubly_residual(i, j)?));
                }
            }
        }
        let proj: Vec<Mat> = self.reps.iter().map(|r| r.tilde() * r.tilde().adjoint()).collect();
        for i in 0..k {
            for j in i + 1..k {
                ranges.push(((i, j), op_norm(&(&proj[i] * &proj[j] - &proj[j] * &proj[i]))));
            }
        }
        let gram_commutators = self.is_scalar().then(|| {
            let g: Vec<Mat> = self.reps.iter().map(|r| r.tilde_gram()).collect();
            let mut out = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    out.push(((i, j), op_norm(&(&g[i] * &g[j] - &g[j] * &g[i]))));
                }
            }
            out
        });
        let pass = residuals.iter().all(|r| r.1 <= thr);
        Ok(DoublyCommuting { pass, residuals, range_commutators: ranges, gram_commutators, threshold: threshold(self.tol, s * s * s * s) })
    }

    /// `W_α = ⋂_{i ∈ α} ker T̃_i*`.
    pub fn wandering_alpha(&self, alpha: &[usize]) -> Result<Subspace> {
        let alpha = alpha_set(self.rank(), alpha)?;
        let mut acc = Subspace::full(self.hilbert_dim());
        for &i in &alpha {
            acc = acc.intersect(&crate::wold::wandering_subspace(&self.reps[i]))?;
        }
        Ok(acc)
    }

    fn require_sigma_invariant(&self, k: &Subspace) -> Result<()> {
        let (comm, _) = self.reps[0].invariance_residuals(k)?;
        if comm > geom_threshold(1.0) {
            return Err(Error::NotSigmaInvariant { residual: comm });
        }
        Ok(())
    }

    /// `𝔏^α_m(K) = T̃^α_m(𝔼(m) ⊗ K)`, computed from `T̃^α_m`.
    pub fn script_l_alpha(&self, alpha: &[usize], m: &[usize], k: &Subspace) -> Result<Subspace> {
        self.require_sigma_invariant(k)?;
        let alpha = alpha_set(self.rank(), alpha)?;
        let w = self.alpha_word(&alpha, m)?;
        if w.is_empty() || k.is_zero() {
            return Ok(k.clone());
        }
        let amp = self.with_spaces(|s| s.amplify(&w, &k.projector(), &[], &[]))?;
        Ok(Subspace::image(&(self.tilde_word(&w)? * amp)))
    }

    /// `𝔏^α_m(K)` by single steps, innermost coordinate first.
    pub fn script_l_alpha_iterative(&self, alpha: &[usize], m: &[usize], k: &Subspace) -> Result<Subspace> {
        self.require_sigma_invariant(k)?;
        let alpha = alpha_set(self.rank(), alpha)?;
        let w = self.alpha_word(&alpha, m)?;
        let mut cur = k.clone();
        for &c in w.iter().rev() {
            cur = step_unchecked(&self.reps[c], &cur);
        }
        Ok(cur)
    }

    /// `[K]_{T_α} = ⋁_m 𝔏^α_m(K)`, closing under `α_n` first and `α_1` last.
    pub fn invariant_closure_alpha(&self, alpha: &[usize], k: &Subspace) -> Result<Subspace> {
        self.require_sigma_invariant(k)?;
        let alpha = alpha_set(self.rank(), alpha)?;
        let mut cur = k.clone();
        for &c in alpha.iter().rev() {
            cur = closure_unchecked(&self.reps[c], &cur);
        }
        Ok(cur)
    }

    /// Smallest subspace containing `K` and invariant under every `T^{(i)}`, `i ∈ α`.
    pub fn invariant_closure_fixpoint(&self, alpha: &[usize], k: &Subspace) -> Result<Subspace> {
        self.require_sigma_invariant(k)?;
        let alpha = alpha_set(self.rank(), alpha)?;
        let mut cur = k.clone();
        loop {
            let before = cur.dim();
            for &c in &alpha {
                cur = closure_unchecked(&self.reps[c], &cur);
            }
            if cur.dim() == before {
                return Ok(cur);
            }
        }
    }

    /// `⋁_{m ≠ 0} 𝔏^α_m(K)`.
    fn translates_alpha(&self, alpha: &[usize], k: &Subspace) -> Result<Subspace> {
        let mut full = k.clone();
        let mut moved = Subspace::zero(self.hilbert_dim());
        for &c in alpha.iter().rev() {
            let r = &self.reps[c];
            let fresh = closure_unchecked(r, &step_unchecked(r, &full));
            moved = closure_unchecked(r, &moved).sum(&fresh)?;
            full = closure_unchecked(r, &full);
        }
        Ok(moved)
    }

    /// `K ⟂ 𝔏^α_m(K)` for every `m ≠ 0`.
    pub fn check_wandering_alpha(&self, alpha: &[usize], k: &Subspace) -> Result<Check> {
        let alpha = alpha_set(self.rank(), alpha)?;
        if let Err(Error::NotSigmaInvariant { residual }) = self.require_sigma_invariant(k) {
            return Ok(Check::new("wandering", false, residual));
        }
        let moved = self.translates_alpha(&alpha, k)?;
        let ov = k.overlap(&moved)?;
        Ok(Check::new("wandering", ov <= ANGLE_TOLERANCE, ov))
    }

    /// `W_α` is wandering and generating for `(σ, T^{(α_1)}, …)`.
    pub fn check_gws_alpha(&self, alpha: &[usize]) -> Result<Vec<Check>> {
        let label = alpha_label(alpha);
        let w = self.wandering_alpha(alpha)?;
        let closure = self.invariant_closure_alpha(alpha, &w)?;
        let fix = self.invariant_closure_fixpoint(alpha, &w)?;
        let full = Subspace::full(self.hilbert_dim());
        Ok(vec![
            self.check_wandering_alpha(alpha, &w)?.renamed(format!("W_{label}_wandering")),
            Check::new(format!("W_{label}_generating"), closure.equals(&full)?, closure.max_principal_angle(&full)?),
            Check::new(format!("closure_{label}_order_independent"), fix.equals(&closure)?, fix.max_principal_angle(&closure)?),
        ])
    }

    /// `[W_α]_{T^{(α_i)}} = W_{α∖{α_i}}` for each `α_i ∈ α`, `#α ≥ 2`.
    pub fn check_stepwise(&self, alpha: &[usize]) -> Result<Vec<Check>> {
        let alpha = alpha_set(self.rank(), alpha)?;
        let mut out = Vec::new();
        if alpha.len() < 2 {
            return Ok(out);
        }
        let w = self.wandering_alpha(&alpha)?;
        for &ai in &alpha {
            let rest: Vec<usize> = alpha.iter().copied().filter(|&x| x != ai).collect();
            let lhs = closure_unchecked(&self.reps[ai], &w);
            let rhs = self.wandering_alpha(&rest)?;
            out.push(Check::new(
                format!("stepwise_{}_T{}", alpha_label(&alpha), ai + 1),
                lhs.equals(&rhs)?,
                lhs.max_principal_angle(&rhs)?,
            ));
        }
        Ok(out)
    }

    /// Residual of `(I ⊗ T̃_i)(t_{i,j} ⊗ I)(I ⊗ T̃_j*T̃_j) = T̃_j*T̃_j(I ⊗ T̃_i)(t_{i,j} ⊗ I)` for `i < j`.
    pub fn check_t24_condition_b(&self) -> Result<Vec<Check>> {
        let k = self.rank();
        let s = self.scale();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let gj = self.reps[j].tilde_gram();
                let move_i = self.with_spaces(|sp| sp.amplify(&[j], self.reps[i].tilde(), &[i], &[]))? * self.flip_operator(i, j)?;
                let amp_g = self.with_spaces(|sp| sp.amplify(&[i], &gj, &[j], &[j]))?;
                let res = op_norm(&(&move_i * amp_g - &gj * &move_i));
                out.push(Check::within(format!("b_{},{}", i + 1, j + 1), res, threshold(self.tol, s * s * s)));
            }
        }
        Ok(out)
    }

    fn doubly_check(&self) -> Result<Check> {
        let d = self.check_doubly_commuting()?;
        Ok(Check::new("doubly_commuting", d.pass, d.max_residual()).vacuous(self.rank() == 1))
    }

    /// `W_α` reduces every `T^{(j)}`, `j ∉ α`.
    pub fn verify_p21(&self, alpha: &[usize]) -> Result<Report> {
        let alpha = alpha_set(self.rank(), alpha)?;
        let mut r = Report::new("p21");
        r.hypothesis(self.doubly_check()?);
        let w = self.wandering_alpha(&alpha)?;
        for j in (0..self.rank()).filter(|j| !alpha.contains(j)) {
            r.conclusion(check_reducing(&self.reps[j], &w)?.renamed(format!("W_{}_reducing_T{}", alpha_label(&alpha), j + 1)));
        }
        if r.conclusions.is_empty() {
            r.note(format!("α = {} leaves no coordinate outside it", alpha_label(&alpha)));
        }
        if !r.hypotheses_met() {
            r.note("the tuple is not doubly commuting; conclusions are evaluated but not implied");
        }
        r.dim(&format!("W_{}", alpha_label(&alpha)), w.dim());
        Ok(r)
    }

    /// Per-coordinate hypothesis checks for the given mode.
    pub fn coordinate_hypotheses(&self, mode: HypothesisMode) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        match mode {
            HypothesisMode::Corollary => {
                for (i, rep) in self.reps.iter().enumerate() {
                    let conc = rep.check_concave()?;
                    let shim = match rep.check_shimorin() {
                        Ok(c) => c,
                        Err(Error::NotLeftInvertible { min_eigenvalue }) => Check::new("shimorin", false, -min_eigenvalue),
                        Err(e) => return Err(e),
                    };
                    let which = if conc.pass { "concave" } else if shim.pass { "shimorin" } else { "neither" };
                    let res = if conc.pass || shim.pass { 0.0 } else { conc.residual.min(shim.residual) };
                    out.push(Check::new(format!("T{}_{which}", i + 1), conc.pass || shim.pass, res).vacuous(conc.vacuous && conc.pass));
                }
            }
            HypothesisMode::Direct => {
                let n = self.hilbert_dim();
                let k = self.rank();
                for (i, rep) in self.reps.iter().enumerate() {
                    let others: Vec<usize> = (0..k).filter(|&x| x != i).collect();
                    let mut candidates = vec![Subspace::full(n)];
                    for mask in 1u32..(1 << others.len()) {
                        let beta: Vec<usize> =
                            others.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &x)| x).collect();
                        candidates.push(self.wandering_alpha(&beta)?);
                    }
                    let mut worst = 0.0f64;
                    let mut pass = true;
                    for kk in candidates.iter().filter(|kk| !kk.is_zero()) {
                        if !check_reducing(rep, kk)?.pass {
                            continue;
                        }
                        let d = wold_decompose(&rep.compress(kk.basis())?)?;
                        pass &= d.certificates_pass();
                        worst = d.certificates.iter().filter(|c| !c.pass).map(|c| c.residual).fold(worst, f64::max);
                    }
                    out.push(Check::new(format!("T{}_reducing_restrictions_wold", i + 1), pass, worst));
                }
            }
        }
        Ok(out)
    }

    fn coordinate_analytic(&self) -> Vec<Check> {
        self.reps
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let h = h_infinity(r);
                Check::new(format!("T{}_analytic", i + 1), h.is_zero(), h.dim() as f64)
            })
            .collect()
    }

    /// Generating wandering subspaces `W_α` for every nonempty `α`.
    pub fn verify_t22(&self, mode: HypothesisMode) -> Result<Report> {
        let mut r = Report::new("t22");
        let doubly = self.doubly_check()?;
        r.hypothesis(doubly.clone());
        let coords = self.coordinate_hypotheses(mode)?;
        for c in &coords {
            r.hypothesis(c.clone());
        }
        for c in self.coordinate_analytic() {
            r.hypothesis(c);
        }
        if !r.hypotheses_met() {
            let failed: Vec<String> = r.hypotheses.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            return Err(Error::HypothesisNotMet(format!("failed: {}", failed.join(", "))));
        }
        if mode == HypothesisMode::Direct {
            r.note("Wold-type decompositions checked on the reducing subspaces H and W_β met in the recursion");
        }
        for alpha in all_alphas(self.rank()) {
            for c in self.check_gws_alpha(&alpha)? {
                r.conclusion(c);
            }
            for c in self.check_stepwise(&alpha)? {
                r.conclusion(c);
            }
            r.dim(&format!("W_{}", alpha_label(&alpha)), self.wandering_alpha(&alpha)?.dim());
        }
        Ok(r)
    }

    /// `((1) doubly commuting ∧ (2) analytic) ⇔ ((a) GWS with stepwise identities ∧ (b))`.
    pub fn verify_t24(&self, mode: HypothesisMode) -> Result<Report> {
        let mut r = Report::new("t24");
        let coords = self.coordinate_hypotheses(mode)?;
        for c in &coords {
            r.hypothesis(c.clone());
        }
        if !r.hypotheses_met() {
            let failed: Vec<String> = r.hypotheses.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            return Err(Error::HypothesisNotMet(format!("failed: {}", failed.join(", "))));
        }
        let one = self.doubly_check()?;
        let analytic = self.coordinate_analytic();
        let two = analytic.iter().all(|c| c.pass);
        let mut a_checks = Vec::new();
        for alpha in all_alphas(self.rank()) {
            a_checks.extend(self.check_gws_alpha(&alpha)?.into_iter().filter(|c| !c.name.contains("order_independent")));
            a_checks.extend(self.check_stepwise(&alpha)?);
        }
        let a = a_checks.iter().all(|c| c.pass);
        let b_checks = self.check_t24_condition_b()?;
        let b = b_checks.iter().all(|c| c.pass);
        let a_res = a_checks.iter().filter(|c| !c.pass).map(|c| c.residual).fold(0.0, f64::max);
        let b_res = b_checks.iter().map(|c| c.residual).fold(0.0, f64::max);
        let two_res = analytic.iter().map(|c| c.residual).fold(0.0, f64::max);
        r.conclusion(Check::new("equivalence", (one.pass && two) == (a && b), 0.0));
        r.observe(one.renamed("1_doubly_commuting"));
        r.observe(Check::new("2_analytic", two, two_res));
        r.observe(Check::new("a_generating_wandering", a, a_res));
        r.observe(Check::new("b_condition", b, b_res));
        for c in a_checks.into_iter().chain(b_checks).chain(analytic) {
            r.observe(c);
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{
        jordan, jordan_pair, jordan_square_pair, scalar_tuple, shift_unitary_pair, two_colored_fock,
        two_colored_system, unitary_pair, TwoColoredGraph,
    };
    use crate::linalg::{c, from_real};

    #[test]
    fn trivial_system_validates() {
        let ps = ProductSystem::scalar(2).unwrap();
        assert!(ps.validate().pass());
    }

    #[test]
    fn scaled_flip_fails_unitarity() {
        let alg = crate::algebra::MatrixBlocksAlgebra::commutative(1).unwrap();
        let e = Correspondence::identity(&alg);
        let mut flips = BTreeMap::new();
        flips.insert((1, 0), eye(1) * c(2.0));
        let ps = ProductSystem::new(vec![e.clone(), e], flips).unwrap();
        let v = ps.validate();
        assert!(!v.get("flip_2,1.unitary").unwrap().pass);
        assert!(!v.get("flip_2,1.inner_product").unwrap().pass);
    }

    #[test]
    fn flips_must_be_below_the_diagonal() {
        let alg = crate::algebra::MatrixBlocksAlgebra::commutative(1).unwrap();
        let e = Correspondence::identity(&alg);
        let mut flips = BTreeMap::new();
        flips.insert((0, 1), eye(1));
        assert!(matches!(ProductSystem::new(vec![e.clone(), e], flips), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn two_colored_grid_system() {
        let ps = two_colored_system(&TwoColoredGraph::grid()).unwrap();
        let v = ps.validate();
        assert!(v.pass(), "{:?}", v.failures().collect::<Vec<_>>());
        assert_eq!(ps.flip(1, 0).nrows(), 1);
        let bad = TwoColoredGraph { vertices: 3, red: vec![(0, 1)], blue: vec![(1, 2)] };
        assert!(two_colored_system(&bad).is_err());
    }

    #[test]
    fn tilde_multi_scalar_collapse() {
        let a = from_real(2, 2, &[1.0, 2.0, 0.0, 3.0]);
        let b = &a * &a + eye(2) * c(0.5);
        let pr = scalar_tuple(&[a.clone(), b.clone()]).unwrap();
        assert!(op_norm(&(pr.tilde_multi(&[0, 0]).unwrap() - eye(2))) < 1e-12);
        assert!(op_norm(&(pr.tilde_multi(&[2, 1]).unwrap() - &a * &a * &b)) < 1e-9);
        assert!(op_norm(&(pr.tilde_word(&[1, 0, 0]).unwrap() - &a * &a * &b)) < 1e-9);
    }

    #[test]
    fn non_commuting_scalar_pair_is_rejected() {
        let s = jordan(2);
        assert!(matches!(scalar_tuple(&[s.clone(), s.transpose()]), Err(Error::CommutationViolation { .. })));
    }

    #[test]
    fn doubly_commuting_examples() {
        let jp = jordan_pair();
        let d = jp.check_doubly_commuting().unwrap();
        assert!(d.pass && d.consequence_holds());
        assert!(jp.validate().pass());
        let sq = jordan_square_pair().check_doubly_commuting().unwrap();
        assert!(!sq.pass && sq.max_residual() > 1e-3);
        let s = jordan(2);
        let same = scalar_tuple(&[s.clone(), s]).unwrap().check_doubly_commuting().unwrap();
        assert!(!same.pass);
        let single = scalar_tuple(&[jordan(3)]).unwrap().check_doubly_commuting().unwrap();
        assert!(single.pass && single.residuals.is_empty());
        assert!(unitary_pair().check_doubly_commuting().unwrap().pass);
    }

    #[test]
    fn wandering_alpha_examples() {
        let jp = jordan_pair();
        let w = jp.wandering_alpha(&[0, 1]).unwrap();
        assert_eq!(w.dim(), 1);
        let mut e11 = zeros(4, 1);
        e11[(0, 0)] = c(1.0);
        assert!(w.equals(&Subspace::image(&e11)).unwrap());
        let w0 = jp.wandering_alpha(&[0]).unwrap();
        assert!(w0.equals(&crate::wold::wandering_subspace(jp.rep(0))).unwrap());
        assert!(unitary_pair().wandering_alpha(&[0, 1]).unwrap().is_zero());
        assert!(jp.wandering_alpha(&[]).is_err());
    }

    #[test]
    fn script_l_alpha_examples() {
        let jp = jordan_pair();
        let w = jp.wandering_alpha(&[0, 1]).unwrap();
        assert!(jp.script_l_alpha(&[0, 1], &[0, 0], &w).unwrap().equals(&w).unwrap());
        for m in [[1, 0], [0, 1], [1, 1], [2, 0]] {
            let a = jp.script_l_alpha(&[0, 1], &m, &w).unwrap();
            let b = jp.script_l_alpha_iterative(&[0, 1], &m, &w).unwrap();
            assert!(a.equals(&b).unwrap(), "{m:?}");
        }
        assert_eq!(jp.invariant_closure_alpha(&[0, 1], &w).unwrap().dim(), 4);
        assert!(jp.invariant_closure_alpha(&[0, 1], &Subspace::zero(4)).unwrap().is_zero());
    }

    #[test]
    fn p21_examples() {
        let jp = jordan_pair();
        let r = jp.verify_p21(&[0]).unwrap();
        assert!(r.hypotheses_met() && r.pass());
        let all = jp.verify_p21(&[0, 1]).unwrap();
        assert!(all.conclusions.is_empty());
        let sq = jordan_square_pair().verify_p21(&[0]).unwrap();
        assert!(!sq.hypotheses_met());
        assert!(!sq.pass());
    }

    #[test]
    fn t22_examples() {
        let r = jordan_pair().verify_t22(HypothesisMode::Direct).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.dim_named("W_{1,2}"), Some(1));
        assert!(matches!(jordan_pair().verify_t22(HypothesisMode::Corollary), Err(Error::HypothesisNotMet(_))));
        assert!(matches!(unitary_pair().verify_t22(HypothesisMode::Corollary), Err(Error::HypothesisNotMet(_))));
        let grid = two_colored_fock(&TwoColoredGraph::grid(), 2).unwrap();
        assert_eq!(grid.hilbert_dim(), 9);
        assert!(grid.validate().pass());
        assert!(grid.check_doubly_commuting().unwrap().pass);
        let r = grid.verify_t22(HypothesisMode::Corollary).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn t24_condition_b_examples() {
        assert!(jordan_pair().check_t24_condition_b().unwrap().iter().all(|c| c.pass));
        assert!(unitary_pair().check_t24_condition_b().unwrap().iter().all(|c| c.pass));
        assert!(!jordan_square_pair().check_t24_condition_b().unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn t24_examples() {
        let r = jordan_pair().verify_t24(HypothesisMode::Direct).unwrap();
        assert!(r.pass());
        for name in ["1_doubly_commuting", "2_analytic", "a_generating_wandering", "b_condition"] {
            assert!(r.observation_named(name).unwrap().pass, "{name}");
        }
        let u = unitary_pair().verify_t24(HypothesisMode::Corollary).unwrap();
        assert!(u.pass());
        assert!(!u.observation_named("2_analytic").unwrap().pass);
        assert!(!u.observation_named("a_generating_wandering").unwrap().pass);
        let su = shift_unitary_pair().verify_t24(HypothesisMode::Direct).unwrap();
        assert!(su.pass());
        assert!(su.observation_named("1_doubly_commuting").unwrap().pass);
        assert!(!su.observation_named("2_analytic").unwrap().pass);
        assert!(!su.observation_named("a_generating_wandering").unwrap().pass);
        let sq = jordan_square_pair().verify_t24(HypothesisMode::Direct).unwrap();
        assert!(sq.pass());
        assert!(!sq.observation_named("1_doubly_commuting").unwrap().pass);
        assert!(!sq.observation_named("b_condition").unwrap().pass);
        let grid = two_colored_fock(&TwoColoredGraph::grid(), 2).unwrap();
        let g = grid.verify_t24(HypothesisMode::Corollary).unwrap();
        assert!(g.pass() && g.observation_named("a_generating_wandering").unwrap().pass);
    }
}
