//! Wandering subspaces, the spaces `𝔏_n(K)`, `H∞`, Wold-type decompositions
//! and the theorem verifiers built on them.

use alloc::format;
use alloc::vec::Vec;

use crate::covrep::CovariantRep;
use crate::error::{Error, Result};
use crate::examples::induced_representation;
use crate::linalg::{eye, hstack, op_norm, Mat, ANGLE_TOLERANCE};
use crate::report::{Check, Report};
use crate::spaces::{amplify_across, WordSpaces};
use crate::subspace::Subspace;

/// Threshold for residuals that involve computed subspaces.
pub(crate) fn geom_threshold(scale: f64) -> f64 {
    ANGLE_TOLERANCE * (1.0 + scale)
}

/// `ker T̃* = H ⊖ T̃(E ⊗ H)`.
pub fn wandering_subspace(rep: &CovariantRep) -> Subspace {
    Subspace::kernel(&rep.tilde().adjoint())
}

fn require_sigma_invariant(rep: &CovariantRep, k: &Subspace) -> Result<()> {
    let (comm, _) = rep.invariance_residuals(k)?;
    if comm > geom_threshold(1.0) {
        return Err(Error::NotSigmaInvariant { residual: comm });
    }
    Ok(())
}

/// `𝔏_1(K) = T̃(E ⊗ K)`.
pub fn script_l_step(rep: &CovariantRep, k: &Subspace) -> Result<Subspace> {
    require_sigma_invariant(rep, k)?;
    Ok(step_unchecked(rep, k))
}

pub(crate) fn step_unchecked(rep: &CovariantRep, k: &Subspace) -> Subspace {
    if k.is_zero() {
        return Subspace::zero(rep.hilbert_dim());
    }
    let amp = rep.amplify(1, &k.projector(), 0, 0).expect("projection on the base space");
    Subspace::image(&(rep.tilde() * amp))
}

/// `𝔏_n(K) = T̃_n(E^{⊗n} ⊗ K)`, computed directly from `T̃_n`.
pub fn script_l_n(rep: &CovariantRep, k: &Subspace, n: usize) -> Result<Subspace> {
    require_sigma_invariant(rep, k)?;
    if n == 0 {
        return Ok(k.clone());
    }
    let tn = rep.tilde_power(n)?;
    let amp = rep.amplify(n, &k.projector(), 0, 0)?;
    Ok(Subspace::image(&(tn * amp)))
}

/// `𝔏_n(K)` by iterating `𝔏_1`; agrees with [`script_l_n`] since
/// `T̃_{n+1}(E^{⊗(n+1)} ⊗ K) = T̃(E ⊗ T̃_n(E^{⊗n} ⊗ K))`.
pub fn script_l_n_iterative(rep: &CovariantRep, k: &Subspace, n: usize) -> Result<Subspace> {
    require_sigma_invariant(rep, k)?;
    let mut cur = k.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = step_unchecked(rep, &cur);
    }
    Ok(cur)
}

/// `⋁_{n ≥ 0} 𝔏_n(K)`, the smallest invariant subspace containing `K`.
pub fn invariant_closure(rep: &CovariantRep, k: &Subspace) -> Result<Subspace> {
    require_sigma_invariant(rep, k)?;
    Ok(closure_unchecked(rep, k))
}

pub(crate) fn closure_unchecked(rep: &CovariantRep, k: &Subspace) -> Subspace {
    let mut acc = k.clone();
    let mut frontier = k.clone();
    for _ in 0..=rep.hilbert_dim() {
        if frontier.is_zero() {
            break;
        }
        frontier = step_unchecked(rep, &frontier);
        let next = acc.sum(&frontier).expect("same ambient space");
        if next.dim() == acc.dim() {
            break;
        }
        acc = next;
    }
    acc
}

/// `ran T̃_1, …, ran T̃_m`, each obtained from the previous by `𝔏_1`.
pub fn tilde_ranges(rep: &CovariantRep, m: usize) -> Vec<Subspace> {
    let mut out = Vec::with_capacity(m);
    let mut cur = Subspace::image(rep.tilde());
    for _ in 0..m {
        out.push(cur.clone());
        cur = step_unchecked(rep, &cur);
    }
    out
}

/// `H∞ = ⋂_{n ≥ 1} ran T̃_n`, exact after `dim H + 1` steps.
pub fn h_infinity(rep: &CovariantRep) -> Subspace {
    h_infinity_steps(rep, rep.hilbert_dim() + 1)
}

pub fn h_infinity_steps(rep: &CovariantRep, steps: usize) -> Subspace {
    let mut acc = Subspace::full(rep.hilbert_dim());
    for r in tilde_ranges(rep, steps) {
        acc = acc.intersect(&r).expect("same ambient space");
        if acc.is_zero() {
            break;
        }
    }
    acc
}

pub fn check_analytic(rep: &CovariantRep) -> Check {
    let h = h_infinity(rep);
    Check::new("analytic", h.is_zero(), h.dim() as f64)
}

/// Residuals of `P_K ∈ σ(M)′` and `T(e_i)K ⊆ K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub commutant_residual: f64,
    pub invariance_residual: f64,
    pub pass: bool,
}

pub fn check_invariant(rep: &CovariantRep, k: &Subspace) -> Result<InvarianceReport> {
    let (comm, inv) = rep.invariance_residuals(k)?;
    let scale = rep.t().iter().map(op_norm).fold(0.0, f64::max);
    let pass = comm <= geom_threshold(1.0) && inv <= geom_threshold(scale);
    Ok(InvarianceReport { commutant_residual: comm, invariance_residual: inv, pass })
}

pub fn check_reducing(rep: &CovariantRep, k: &Subspace) -> Result<Check> {
    let a = check_invariant(rep, k)?;
    let b = check_invariant(rep, &k.orthocomplement())?;
    let res = a.commutant_residual.max(a.invariance_residual).max(b.invariance_residual);
    Ok(Check::new("reducing", a.pass && b.pass, res))
}

/// `K ⟂ 𝔏_n(K)` for `n = 1..dim H`; fails if `K` is not σ-invariant.
pub fn check_wandering(rep: &CovariantRep, k: &Subspace) -> Result<Check> {
    if require_sigma_invariant(rep, k).is_err() {
        let (comm, _) = rep.invariance_residuals(k)?;
        return Ok(Check::new("wandering", false, comm));
    }
    let mut worst = 0.0f64;
    let mut cur = k.clone();
    for _ in 0..rep.hilbert_dim() {
        cur = step_unchecked(rep, &cur);
        if cur.is_zero() {
            break;
        }
        worst = worst.max(k.overlap(&cur)?);
    }
    Ok(Check::new("wandering", worst <= ANGLE_TOLERANCE, worst))
}

/// `(W, H_u, H∞)` with certificates, computed whether or not the hypotheses hold.
#[derive(Debug, Clone)]
pub struct WoldDecomposition {
    pub w: Subspace,
    pub h_u: Subspace,
    pub h_inf: Subspace,
    pub hypotheses: Vec<Check>,
    pub certificates: Vec<Check>,
}

impl WoldDecomposition {
    /// Concave or Shimorin.
    pub fn hypotheses_met(&self) -> bool {
        self.hypotheses.iter().any(|c| c.pass)
    }

    pub fn certificates_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }

    pub fn certificate(&self, name: &str) -> Option<&Check> {
        self.certificates.iter().find(|c| c.name == name)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("wold_decomposition");
        for h in &self.hypotheses {
            r.hypothesis(h.clone());
        }
        for c in &self.certificates {
            r.conclusion(c.clone());
        }
        r.dim("W", self.w.dim()).dim("H_u", self.h_u.dim()).dim("H_inf", self.h_inf.dim());
        if !self.hypotheses_met() {
            r.note("neither concavity nor the Shimorin inequality holds; certificates are reported, not asserted");
        }
        r
    }
}

/// Certificates that `H = H_u ⊕ H_inf` is a Wold-type decomposition.
pub fn wold_certificates(rep: &CovariantRep, w: &Subspace, h_u: &Subspace, h_inf: &Subspace) -> Result<Vec<Check>> {
    let n = rep.hilbert_dim();
    let mut out = Vec::new();
    out.push(Check::within("orthogonal", h_u.overlap(h_inf)?, ANGLE_TOLERANCE));
    let sum = h_u.projector() + h_inf.projector();
    let complete = op_norm(&(sum - eye(n)));
    out.push(Check::new("complete", h_u.dim() + h_inf.dim() == n && complete <= ANGLE_TOLERANCE, complete));
    out.push(check_reducing(rep, h_u)?.renamed("reducing_H_u"));
    out.push(check_reducing(rep, h_inf)?.renamed("reducing_H_inf"));
    out.push(check_wandering(rep, w)?);
    if h_inf.is_zero() {
        out.push(Check::new("H_inf_isometric", true, 0.0).vacuous(true));
        out.push(Check::new("H_inf_fully_coisometric", true, 0.0).vacuous(true));
    } else {
        let r = rep.compress(h_inf.basis())?;
        let iso = r.check_isometric();
        let co = r.check_fully_coisometric();
        out.push(Check::within("H_inf_isometric", iso.residual, geom_threshold(1.0)));
        out.push(Check::within("H_inf_fully_coisometric", co.residual, geom_threshold(1.0)));
    }
    Ok(out)
}

pub fn wold_decompose(rep: &CovariantRep) -> Result<WoldDecomposition> {
    let mut hypotheses = Vec::new();
    hypotheses.push(rep.check_concave()?);
    hypotheses.push(match rep.check_shimorin() {
        Ok(c) => c,
        Err(Error::NotLeftInvertible { min_eigenvalue }) => {
            Check::new("shimorin", false, (-min_eigenvalue).max(0.0))
        }
        Err(e) => return Err(e),
    });
    let w = wandering_subspace(rep);
    let h_u = closure_unchecked(rep, &w);
    let h_inf = h_infinity(rep);
    let certificates = wold_certificates(rep, &w, &h_u, &h_inf)?;
    Ok(WoldDecomposition { w, h_u, h_inf, hypotheses, certificates })
}

/// Concave or Shimorin implies a Wold-type decomposition with `W = ker T̃*`,
/// and `H_u = H` when the representation is analytic.
pub fn verify_mt1(rep: &CovariantRep) -> Result<Report> {
    let d = wold_decompose(rep)?;
    if !d.hypotheses_met() {
        let why: Vec<_> = d.hypotheses.iter().map(|c| format!("{} (residual {:e})", c.name, c.residual)).collect();
        return Err(Error::HypothesisNotMet(format!("neither inequality holds: {}", why.join(", "))));
    }
    let mut r = d.to_report();
    r.theorem = "mt1".into();
    let analytic = d.h_inf.is_zero();
    r.conclusion(Check::new("analytic_implies_generating", !analytic || d.h_u.dim() == rep.hilbert_dim(), 0.0));
    Ok(r)
}

/// Richter-type theorem: for an analytic concave representation and an
/// invariant `K`, `W_K = K ⊖ T̃(E ⊗ K)` generates `K`.
pub fn verify_richter(rep: &CovariantRep, k: &Subspace) -> Result<Report> {
    let mut r = Report::new("richter");
    let analytic = check_analytic(rep);
    let concave = rep.check_concave()?;
    r.hypothesis(analytic.clone()).hypothesis(concave.clone());
    if !analytic.pass {
        return Err(Error::HypothesisNotMet("representation is not analytic".into()));
    }
    if !concave.pass {
        return Err(Error::HypothesisNotMet(format!(
            "representation is not concave (min eigenvalue {:e})",
            concave.min_eigenvalue.unwrap_or(f64::NAN)
        )));
    }
    if concave.vacuous {
        r.note("concavity holds vacuously since E⊗E⊗H = 0");
    }
    let inv = check_invariant(rep, k)?;
    if inv.commutant_residual > geom_threshold(1.0) {
        return Err(Error::NotSigmaInvariant { residual: inv.commutant_residual });
    }
    if !inv.pass {
        return Err(Error::NotInvariant { residual: inv.invariance_residual });
    }
    let wk = k.intersect(&step_unchecked(rep, k).orthocomplement())?;
    let closure = closure_unchecked(rep, &wk);
    r.conclusion(Check::new("closure_equals_K", closure.equals(k)?, closure.max_principal_angle(k)?));
    r.conclusion(check_wandering(rep, &wk)?.renamed("W_K_wandering"));
    let again = closure.intersect(&step_unchecked(rep, &closure).orthocomplement())?;
    r.conclusion(Check::new("W_K_unique", again.equals(&wk)?, again.max_principal_angle(&wk)?));
    r.dim("K", k.dim()).dim("W_K", wk.dim());
    Ok(r)
}

/// Outcome of the Muhly–Solel decomposition of an isometric representation.
#[derive(Debug, Clone)]
pub struct MuhlySolel {
    pub report: Report,
    pub w: Subspace,
    pub h1: Subspace,
    pub h2: Subspace,
    /// Isometry from the induced model `⊕_n E^{⊗n} ⊗_π W` onto `H1`.
    pub phi: Mat,
}

pub fn verify_muhly_solel(rep: &CovariantRep) -> Result<MuhlySolel> {
    let iso = rep.check_isometric();
    if !iso.pass {
        return Err(Error::NotIsometric { residual: iso.residual });
    }
    let n = rep.hilbert_dim();
    let mut r = Report::new("muhly_solel");
    r.hypothesis(iso);
    let w = Subspace::image(&(eye(n) - rep.tilde() * rep.tilde().adjoint()));
    let w_ker = wandering_subspace(rep);
    r.conclusion(Check::new("W_equals_ker_T_star", w.equals(&w_ker)?, w.max_principal_angle(&w_ker)?));
    let h1 = closure_unchecked(rep, &w);
    let h2 = h_infinity(rep);
    let certs = wold_certificates(rep, &w, &h1, &h2)?;
    for c in certs {
        r.conclusion(c);
    }

    // grading 𝔏_n(W) pairwise orthogonal
    let mut grades = Vec::new();
    let mut cur = w.clone();
    while !cur.is_zero() && grades.len() <= n {
        grades.push(cur.clone());
        cur = step_unchecked(rep, &cur);
    }
    let mut overlap = 0.0f64;
    for i in 0..grades.len() {
        for j in i + 1..grades.len() {
            overlap = overlap.max(grades[i].overlap(&grades[j])?);
        }
    }
    r.conclusion(Check::within("grading_orthogonal", overlap, ANGLE_TOLERANCE));

    // intertwiner from the induced representation on ⊕_n E^{⊗n} ⊗_π W
    let depth = grades.len().saturating_sub(1);
    let bw = w.basis().clone();
    let pi = rep.sigma().compress(&bw)?;
    let (phi, model_dims) = if w.is_zero() {
        (Mat::zeros(n, 0), alloc::vec![0])
    } else {
        let model = induced_representation(rep.correspondence(), &pi, depth)?;
        let mut src = WordSpaces::new(pi.clone(), alloc::vec![rep.correspondence().clone()])?;
        let mut blocks = Vec::new();
        for k in 0..model.level_dims.len() {
            let word = alloc::vec![0; k];
            let iota = rep.with_spaces(|dst| amplify_across(&mut src, dst, &word, &bw))?;
            blocks.push(rep.tilde_power(k)? * iota);
        }
        let refs: Vec<&Mat> = blocks.iter().collect();
        let phi = hstack(&refs);
        let m = &model.rep;
        let mut inter = 0.0f64;
        for (s, t) in m.t().iter().zip(rep.t()) {
            inter = inter.max(op_norm(&(&phi * s - t * &phi)));
        }
        let mut rho = 0.0f64;
        for k in 0..rep.sigma().algebra().dim() {
            rho = rho.max(op_norm(&(&phi * m.sigma().image(k) - rep.sigma().image(k) * &phi)));
        }
        r.conclusion(Check::new("model_exact", model.exact, 0.0));
        r.conclusion(Check::within("phi_intertwines_T", inter, geom_threshold(1.0)));
        r.conclusion(Check::within("phi_intertwines_sigma", rho, geom_threshold(1.0)));
        (phi, model.level_dims)
    };
    let k = phi.ncols();
    r.conclusion(Check::within("phi_isometric", op_norm(&(phi.adjoint() * &phi - eye(k))), geom_threshold(1.0)));
    r.conclusion(Check::within(
        "phi_onto_H1",
        op_norm(&(&phi * phi.adjoint() - h1.projector())),
        geom_threshold(1.0),
    ));
    r.dim("W", w.dim()).dim("H1", h1.dim()).dim("H2", h2.dim()).dim("model", model_dims.iter().sum());
    r.note("H2 includes the n = 0 term of the intersection, which is H itself");
    Ok(MuhlySolel { report: r, w, h1, h2, phi })
}

/// Cauchy-dual identities and the equivalences between analyticity and the
/// generating wandering subspace property of the dual.
pub fn verify_cauchy_dual_props(rep: &CovariantRep) -> Result<Report> {
    let dual = rep.cauchy_dual()?;
    let mut r = Report::new("cauchy_dual");
    r.hypothesis(rep.check_left_invertible());
    let n = rep.hilbert_dim();
    let w = wandering_subspace(rep);
    let w2 = wandering_subspace(&dual);
    r.conclusion(Check::new("W_dual_equals_W", w2.equals(&w)?, w2.max_principal_angle(&w)?));
    let hu = closure_unchecked(rep, &w);
    let hu_d = closure_unchecked(&dual, &w);
    let hinf = h_infinity(rep);
    let hinf_d = h_infinity(&dual);
    let eq = |name: &str, a: &Subspace, b: &Subspace| -> Result<Check> {
        Ok(Check::new(name, a.equals(b)?, a.max_principal_angle(b)?))
    };
    r.conclusion(eq("dual_H_inf_perp_equals_closure_W", &hinf_d.orthocomplement(), &hu)?);
    r.conclusion(eq("H_inf_perp_equals_dual_closure_W", &hinf.orthocomplement(), &hu_d)?);

    let analytic = hinf.is_zero();
    let analytic_d = hinf_d.is_zero();
    let gws = hu.dim() == n;
    let gws_d = hu_d.dim() == n;
    r.conclusion(Check::new("analytic_iff_dual_generating", analytic == gws_d, 0.0));
    r.conclusion(Check::new("dual_analytic_iff_generating", analytic_d == gws, 0.0));

    let split = |a: &Subspace, b: &Subspace| -> Result<bool> {
        Ok(a.overlap(b)? <= ANGLE_TOLERANCE && a.dim() + b.dim() == n)
    };
    let wold = split(&hu, &hinf)?;
    let wold_d = split(&hu_d, &hinf_d)?;
    r.conclusion(Check::new("orthogonal_split_iff_dual_split", wold == wold_d, 0.0));
    if wold {
        r.conclusion(eq("H_inf_equals_dual_H_inf", &hinf, &hinf_d)?);
        r.conclusion(eq("closure_W_equals_dual_closure_W", &hu, &hu_d)?);
    } else {
        r.note(format!(
            "H = [W] + H_inf is not an orthogonal splitting, so the equalities H_inf = H'_inf and [W] = [W]' are not asserted (dims {} vs {}, {} vs {})",
            hinf.dim(),
            hinf_d.dim(),
            hu.dim(),
            hu_d.dim()
        ));
    }
    r.dim("W", w.dim())
        .dim("closure_W", hu.dim())
        .dim("dual_closure_W", hu_d.dim())
        .dim("H_inf", hinf.dim())
        .dim("dual_H_inf", hinf_d.dim());
    Ok(r)
}

/// If `H'∞` reduces the Cauchy dual then `H'∞ ⊆ H∞`.
pub fn check_dual_reducing_implication(rep: &CovariantRep) -> Result<Report> {
    let dual = rep.cauchy_dual()?;
    let mut r = Report::new("dual_reducing_implication");
    let hinf_d = h_infinity(&dual);
    let hinf = h_infinity(rep);
    let antecedent = check_reducing(&dual, &hinf_d)?;
    r.hypothesis(antecedent.clone().renamed("dual_H_inf_reducing"));
    let res = hinf.containment_residual(&hinf_d)?;
    let contained = res <= ANGLE_TOLERANCE;
    r.conclusion(Check::new("implication", !antecedent.pass || contained, res).vacuous(!antecedent.pass || hinf_d.is_zero()));
    r.dim("H_inf", hinf.dim()).dim("dual_H_inf", hinf_d.dim());
    Ok(r)
}

/// `ker L^n = ⋁_{j<n} 𝔏_j(W)`.
pub fn verify_ker_ln(rep: &CovariantRep, n: usize) -> Result<Report> {
    let chain = rep.left_inverse_chain(n)?;
    let ker = Subspace::kernel(&chain.powers[n]);
    let w = wandering_subspace(rep);
    let mut span = Subspace::zero(rep.hilbert_dim());
    let mut cur = w;
    for _ in 0..n {
        span = span.sum(&cur)?;
        cur = step_unchecked(rep, &cur);
    }
    let mut r = Report::new("ker_L_n");
    r.hypothesis(rep.check_left_invertible());
    r.conclusion(Check::new("ker_L_n_equals_span", ker.equals(&span)?, ker.max_principal_angle(&span)?));
    r.dim("ker_L_n", ker.dim()).dim("n", n);
    Ok(r)
}
