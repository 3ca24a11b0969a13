//! Graph correspondences, induced representations and the fixed instances
//! used throughout the tests and the corpus.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraElement, MatrixBlocksAlgebra, StarRepresentation};
use crate::correspondence::Correspondence;
use crate::covrep::CovariantRep;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, c, cx, zeros, Mat, C64};
use crate::product::{ProductRep, ProductSystem};
use crate::spaces::TensorLevel;

/// Finite directed graph; vertices are `0..vertices`, edges `(source, range)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        if let Some(&(s, r)) = edges.iter().find(|&&(s, r)| s >= vertices || r >= vertices) {
            return Err(Error::InvalidInput(format!("edge ({s}, {r}) leaves the vertex set 0..{vertices}")));
        }
        Ok(DirectedGraph { vertices, edges })
    }

    /// Number of paths of length `n`; a path `e_1 ⋯ e_n` follows `e_n` first
    /// and needs `r(e_{k+1}) = s(e_k)`.
    pub fn path_count(&self, n: usize) -> usize {
        if n == 0 {
            return self.vertices;
        }
        // from[v] = number of paths of the current length starting at v
        let mut from = vec![1usize; self.vertices];
        for _ in 0..n {
            let mut next = vec![0usize; self.vertices];
            for &(s, r) in &self.edges {
                next[s] += from[r];
            }
            from = next;
        }
        from.iter().sum()
    }
}

/// `E(G)` over `ℂ^V`: `δ_e·a = a(s(e))δ_e`, `a·δ_e = a(r(e))δ_e`,
/// `⟨δ_e, δ_f⟩ = δ_{ef} p_{s(e)}`.
pub fn graph_correspondence(g: &DirectedGraph) -> Result<Correspondence> {
    if g.edges.is_empty() {
        return Err(Error::InvalidInput("graph without edges gives the zero correspondence".into()));
    }
    let alg = MatrixBlocksAlgebra::commutative(g.vertices)?;
    let m = g.edges.len();
    let mut right = vec![zeros(m, m); g.vertices];
    let mut left = vec![zeros(m, m); g.vertices];
    for (x, &(s, r)) in g.edges.iter().enumerate() {
        right[s][(x, x)] = c(1.0);
        left[r][(x, x)] = c(1.0);
    }
    let mut gram = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            gram.push(if x == y { alg.unit(g.edges[x].0) } else { AlgebraElement::zero(&alg) });
        }
    }
    Correspondence::new(alg, m, right, left, gram)
}

/// Induced representation on `⊕_{n ≤ N} E^{⊗n} ⊗_π K` by creation operators.
#[derive(Debug, Clone)]
pub struct InducedRep {
    pub rep: CovariantRep,
    pub level_dims: Vec<usize>,
    /// Level `N + 1` vanishes, so no truncation took place.
    pub exact: bool,
}

impl InducedRep {
    /// Orthonormal basis of level `n` inside the total space.
    pub fn level_basis(&self, n: usize) -> Mat {
        let total: usize = self.level_dims.iter().sum();
        let off: usize = self.level_dims[..n].iter().sum();
        let mut b = zeros(total, self.level_dims[n]);
        for k in 0..self.level_dims[n] {
            b[(off + k, k)] = c(1.0);
        }
        b
    }
}

pub fn induced_representation(e: &Correspondence, pi: &StarRepresentation, depth: usize) -> Result<InducedRep> {
    induced_representation_weighted(e, pi, depth, &vec![c(1.0); e.dim()])
}

/// As [`induced_representation`] with `T(e_i) = w_i S(e_i)`; the weights must
/// respect the bimodule structure (for graph correspondences any weights do).
pub fn induced_representation_weighted(
    e: &Correspondence,
    pi: &StarRepresentation,
    depth: usize,
    weights: &[C64],
) -> Result<InducedRep> {
    if weights.len() != e.dim() {
        return Err(Error::ShapeMismatch(format!("{} weights for {} basis vectors", weights.len(), e.dim())));
    }
    let mut sigmas = vec![pi.clone()];
    let mut levels: Vec<TensorLevel> = Vec::new();
    let mut exact = false;
    for _ in 0..=depth {
        let l = TensorLevel::new(e, sigmas.last().unwrap())?;
        if l.dim() == 0 {
            exact = true;
            levels.push(l);
            break;
        }
        sigmas.push(l.sigma.clone());
        levels.push(l);
    }
    let depth = levels.len() - 1;
    sigmas.truncate(depth + 1);
    let level_dims: Vec<usize> = sigmas.iter().map(|s| s.hilbert_dim()).collect();
    let total: usize = level_dims.iter().sum();
    let offsets: Vec<usize> = level_dims.iter().scan(0, |acc, &d| {
        let o = *acc;
        *acc += d;
        Some(o)
    }).collect();

    let alg = pi.algebra().clone();
    let images = (0..alg.dim())
        .map(|k| {
            let blocks: Vec<Mat> = sigmas.iter().map(|s| s.image(k).clone()).collect();
            let refs: Vec<&Mat> = blocks.iter().collect();
            block_diag(&refs)
        })
        .collect();
    let sigma = StarRepresentation::new(alg, total, images)?.with_tolerance(pi.tolerance());
    let mut t = vec![zeros(total, total); e.dim()];
    for n in 0..depth {
        let dn = level_dims[n];
        let push = levels[n].space.push();
        for (i, ti) in t.iter_mut().enumerate() {
            let blk = push.columns(i * dn, dn) * weights[i];
            ti.view_mut((offsets[n + 1], offsets[n]), (level_dims[n + 1], dn)).copy_from(&blk);
        }
    }
    let rep = CovariantRep::new(sigma, e.clone(), t)?.with_tolerance(pi.tolerance());
    Ok(InducedRep { rep, level_dims, exact })
}

/// A single edge `1 → 2`.
pub fn g1() -> DirectedGraph {
    DirectedGraph { vertices: 2, edges: vec![(0, 1)] }
}

/// The path `1 → 2 → 3`.
pub fn g2() -> DirectedGraph {
    DirectedGraph { vertices: 3, edges: vec![(0, 1), (1, 2)] }
}

fn graph_induced(g: &DirectedGraph, weights: Option<&[C64]>) -> InducedRep {
    let e = graph_correspondence(g).expect("fixed graph");
    let pi = StarRepresentation::faithful(e.algebra());
    let w = weights.map(|w| w.to_vec()).unwrap_or_else(|| vec![c(1.0); e.dim()]);
    induced_representation_weighted(&e, &pi, g.vertices, &w).expect("fixed graph")
}

/// Induced representation of `E(G1)` on `𝓕(E) ⊗ ℂ²` (dimension 3).
pub fn g1_induced() -> InducedRep {
    graph_induced(&g1(), None)
}

/// Induced representation of `E(G2)` on `𝓕(E) ⊗ ℂ³` (dimension 6).
pub fn g2_induced() -> InducedRep {
    graph_induced(&g2(), None)
}

/// `G1` induced with its edge weighted by `w`.
pub fn g1_weighted(w: f64) -> InducedRep {
    graph_induced(&g1(), Some(&[c(w)]))
}

/// `G2` induced with edge weights `w1` on `1 → 2` and `w2` on `2 → 3`.
pub fn g2_weighted(w1: f64, w2: f64) -> InducedRep {
    graph_induced(&g2(), Some(&[c(w1), c(w2)]))
}

/// Normalized 3×3 discrete Fourier matrix.
pub fn fourier3() -> Mat {
    let s = 1.0 / libm::sqrt(3.0);
    let w = cx(-0.5, libm::sqrt(3.0) / 2.0);
    Mat::from_fn(3, 3, |i, j| {
        let mut z = c(1.0);
        for _ in 0..(i * j) % 3 {
            z *= w;
        }
        z * s
    })
}

/// `M = E = ℂ` with `T(1)` the 3×3 Fourier unitary.
pub fn scalar_unitary_3() -> CovariantRep {
    CovariantRep::scalar(fourier3()).expect("fixed instance")
}

/// Nilpotent Jordan block of size `n` (ones on the subdiagonal).
pub fn jordan(n: usize) -> Mat {
    let mut s = zeros(n, n);
    for i in 1..n {
        s[(i, i - 1)] = c(1.0);
    }
    s
}

/// Representation of `E(G)` that is the identity on every vertex space:
/// `σ = ⊕_v I_{m_v}` and `T(δ_e) = blocks[e]` of size `m_{r(e)} × m_{s(e)}`.
pub fn graph_block_rep(g: &DirectedGraph, mult: &[usize], blocks: &[Mat]) -> Result<CovariantRep> {
    let e = graph_correspondence(g)?;
    if mult.len() != g.vertices || blocks.len() != g.edges.len() {
        return Err(Error::ShapeMismatch("multiplicities or blocks do not match the graph".into()));
    }
    let sigma = StarRepresentation::with_multiplicities(e.algebra(), mult)?;
    let n = sigma.hilbert_dim();
    let offsets: Vec<usize> = mult.iter().scan(0, |acc, &d| {
        let o = *acc;
        *acc += d;
        Some(o)
    }).collect();
    let mut t = Vec::with_capacity(blocks.len());
    for (b, &(s, r)) in blocks.iter().zip(&g.edges) {
        if b.nrows() != mult[r] || b.ncols() != mult[s] {
            return Err(Error::ShapeMismatch(format!(
                "edge ({s}, {r}) needs a {}×{} block, got {:?}",
                mult[r],
                mult[s],
                b.shape()
            )));
        }
        let mut m = zeros(n, n);
        m.view_mut((offsets[r], offsets[s]), b.shape()).copy_from(b);
        t.push(m);
    }
    CovariantRep::new(sigma, e, t)
}

/// Unitary ⊕ induced: the graph `1 → 2` together with a loop at vertex 3,
/// represented by an induced part over `π` supported at vertex 1 with
/// multiplicity `m_w`, and a unitary `u` at vertex 3.
pub fn unitary_plus_induced(m_w: usize, u: &Mat) -> Result<(CovariantRep, usize, usize)> {
    let g = DirectedGraph::new(3, vec![(0, 1), (2, 2)])?;
    let k = u.nrows();
    let mut b0 = zeros(m_w, m_w);
    b0.fill_with_identity();
    let rep = graph_block_rep(&g, &[m_w, m_w, k], &[b0, u.clone()])?;
    Ok((rep, 2 * m_w, k))
}

/// Human-readable name of the fixed instances in the corpus.
pub fn corpus_names() -> Vec<String> {
    ["G1", "G2", "G1-w(1/2)", "scalar-unitary-3", "jordan-pair", "two-color-path"]
        .iter()
        .map(|s| String::from(*s))
        .collect()
}

/// A single covariant representation or a product representation.
#[derive(Debug, Clone)]
pub enum AnyRep {
    Single(CovariantRep),
    Product(ProductRep),
}

/// The corpus instance called `name`, see [`corpus_names`].
pub fn corpus_instance(name: &str) -> Option<AnyRep> {
    Some(match name {
        "G1" => AnyRep::Single(g1_induced().rep),
        "G2" => AnyRep::Single(g2_induced().rep),
        "G1-w(1/2)" => AnyRep::Single(g1_weighted(0.5).rep),
        "scalar-unitary-3" => AnyRep::Single(scalar_unitary_3()),
        "jordan-pair" => AnyRep::Product(jordan_pair()),
        "two-color-path" => AnyRep::Product(two_colored_fock(&TwoColoredGraph::path(3), 2).ok()?),
        _ => return None,
    })
}

pub fn scalar(a: Mat) -> CovariantRep {
    CovariantRep::scalar(a).expect("square matrix")
}

/// `(σ, A_1, …, A_k)` over `M = E_i = ℂ` with trivial flips.
pub fn scalar_tuple(mats: &[Mat]) -> Result<ProductRep> {
    let n = mats.first().map(|m| m.nrows()).ok_or_else(|| Error::InvalidInput("empty tuple".into()))?;
    if let Some(m) = mats.iter().find(|m| m.shape() != (n, n)) {
        return Err(Error::ShapeMismatch(format!("matrix of shape {:?} in a tuple on ℂ^{n}", m.shape())));
    }
    let ps = ProductSystem::scalar(mats.len())?;
    let alg = ps.correspondence(0).algebra().clone();
    let sigma = StarRepresentation::with_multiplicities(&alg, &[n])?;
    ProductRep::new(ps, sigma, mats.iter().map(|m| vec![m.clone()]).collect())
}

/// `(S ⊗ I, I ⊗ S)` on `ℂ² ⊗ ℂ²` for the nilpotent Jordan block `S`.
pub fn jordan_pair() -> ProductRep {
    let s = jordan(2);
    let i = Mat::identity(2, 2);
    scalar_tuple(&[s.kronecker(&i), i.kronecker(&s)]).expect("commuting pair")
}

/// `(S, S²)` for the 3×3 nilpotent Jordan block: commuting, not doubly commuting.
pub fn jordan_square_pair() -> ProductRep {
    let s = jordan(3);
    scalar_tuple(&[s.clone(), &s * &s]).expect("commuting pair")
}

/// `(F, F²)` for the 3×3 Fourier matrix.
pub fn unitary_pair() -> ProductRep {
    let f = fourier3();
    scalar_tuple(&[f.clone(), &f * &f]).expect("commuting pair")
}

/// `(S ⊗ I, I ⊗ diag(1, −1))`: doubly commuting with a unitary second coordinate.
pub fn shift_unitary_pair() -> ProductRep {
    let i = Mat::identity(2, 2);
    let mut u = zeros(2, 2);
    u[(0, 0)] = c(1.0);
    u[(1, 1)] = c(-1.0);
    scalar_tuple(&[jordan(2).kronecker(&i), i.kronecker(&u)]).expect("commuting pair")
}

/// Two-colored graph: red edges give `E_1`, blue edges `E_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoColoredGraph {
    pub vertices: usize,
    pub red: Vec<(usize, usize)>,
    pub blue: Vec<(usize, usize)>,
}

impl TwoColoredGraph {
    /// `(b, r) ↦ (r', b')` matching each red-then-blue path with a blue-then-red
    /// path between the same vertices, in sorted order within each pair of endpoints.
    pub fn flip_bijection(&self) -> Result<BTreeMap<(usize, usize), (usize, usize)>> {
        let mut rb: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        let mut br: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (x, &(rs, rr)) in self.red.iter().enumerate() {
            for (y, &(bs, br_)) in self.blue.iter().enumerate() {
                if rr == bs {
                    rb.entry((rs, br_)).or_default().push((y, x));
                }
                if br_ == rs {
                    br.entry((bs, rr)).or_default().push((x, y));
                }
            }
        }
        let keys: alloc::collections::BTreeSet<_> = rb.keys().chain(br.keys()).copied().collect();
        let mut out = BTreeMap::new();
        for key in keys {
            let a = rb.get(&key).cloned().unwrap_or_default();
            let b = br.get(&key).cloned().unwrap_or_default();
            if a.len() != b.len() {
                return Err(Error::InvalidInput(format!(
                    "{} red-blue and {} blue-red paths from {} to {}",
                    a.len(),
                    b.len(),
                    key.0,
                    key.1
                )));
            }
            out.extend(a.into_iter().zip(b));
        }
        Ok(out)
    }

    /// The 2×2 grid with red edges moving right and blue edges moving up.
    pub fn grid() -> Self {
        TwoColoredGraph { vertices: 4, red: vec![(0, 1), (2, 3)], blue: vec![(0, 2), (1, 3)] }
    }

    /// The path on `n` vertices with every edge present in both colors.
    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        TwoColoredGraph { vertices: n, red: edges.clone(), blue: edges }
    }
}

/// The product system of a two-colored graph with flips from [`TwoColoredGraph::flip_bijection`].
pub fn two_colored_system(g: &TwoColoredGraph) -> Result<ProductSystem> {
    let e1 = graph_correspondence(&DirectedGraph::new(g.vertices, g.red.clone())?)?;
    let e2 = graph_correspondence(&DirectedGraph::new(g.vertices, g.blue.clone())?)?;
    let (nr, nb) = (g.red.len(), g.blue.len());
    let mut t = zeros(nr * nb, nb * nr);
    for ((b, r), (r2, b2)) in g.flip_bijection()? {
        t[(r2 * nb + b2, b * nr + r)] = c(1.0);
    }
    let mut flips = BTreeMap::new();
    flips.insert((1, 0), t);
    ProductSystem::new(vec![e1, e2], flips)
}

/// Fock representation of a two-colored graph system over the vertex
/// representation: basis vectors are paths of `depth`-bounded shape written
/// as reds after blues, with the blue edges moved through the reds by the flip.
pub fn two_colored_fock(g: &TwoColoredGraph, depth: usize) -> Result<ProductRep> {
    let ps = two_colored_system(g)?;
    let bij = g.flip_bijection()?;
    // state: (reds, last first; blues, last first; start vertex)
    type State = (Vec<usize>, Vec<usize>, usize);
    let end = |s: &State| -> usize {
        if let Some(&r) = s.0.first() {
            g.red[r].1
        } else if let Some(&b) = s.1.first() {
            g.blue[b].1
        } else {
            s.2
        }
    };
    let mut states: Vec<State> = (0..g.vertices).map(|v| (Vec::new(), Vec::new(), v)).collect();
    let mut frontier = states.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            if s.0.is_empty() {
                for (b, &(src, _)) in g.blue.iter().enumerate() {
                    if src == end(s) {
                        let mut blues = s.1.clone();
                        blues.insert(0, b);
                        next.push((Vec::new(), blues, s.2));
                    }
                }
            }
        }
        states.extend(next.iter().cloned());
        frontier = next;
    }
    let with_blues = states.clone();
    let mut frontier = with_blues;
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for (r, &(src, _)) in g.red.iter().enumerate() {
                if src == end(s) {
                    let mut reds = s.0.clone();
                    reds.insert(0, r);
                    next.push((reds, s.1.clone(), s.2));
                }
            }
        }
        states.extend(next.iter().cloned());
        frontier = next;
    }
    let index: BTreeMap<State, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let n = states.len();
    let alg = ps.correspondence(0).algebra().clone();
    let images = (0..g.vertices)
        .map(|v| {
            let mut m = zeros(n, n);
            for (i, s) in states.iter().enumerate() {
                if end(s) == v {
                    m[(i, i)] = c(1.0);
                }
            }
            m
        })
        .collect();
    let sigma = StarRepresentation::new(alg, n, images)?;
    let mut t1 = vec![zeros(n, n); g.red.len()];
    let mut t2 = vec![zeros(n, n); g.blue.len()];
    for (i, s) in states.iter().enumerate() {
        let v = end(s);
        for (r, &(src, _)) in g.red.iter().enumerate() {
            if src != v {
                continue;
            }
            let mut reds = s.0.clone();
            reds.insert(0, r);
            if let Some(&j) = index.get(&(reds, s.1.clone(), s.2)) {
                t1[r][(j, i)] = c(1.0);
            }
        }
        for (b, &(src, _)) in g.blue.iter().enumerate() {
            if src != v {
                continue;
            }
            let mut cur = b;
            let mut reds = Vec::with_capacity(s.0.len());
            for &r in &s.0 {
                let &(r2, b2) = bij.get(&(cur, r)).expect("composable pair has a flip");
                reds.push(r2);
                cur = b2;
            }
            let mut blues = s.1.clone();
            blues.insert(0, cur);
            if let Some(&j) = index.get(&(reds, blues, s.2)) {
                t2[b][(j, i)] = c(1.0);
            }
        }
    }
    ProductRep::new(ps, sigma, vec![t1, t2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::tensor_power;
    use crate::linalg::op_norm;

    #[test]
    fn path_counts_match_tensor_powers() {
        let g = DirectedGraph::new(4, vec![(0, 1), (1, 2), (0, 2), (2, 3), (1, 3)]).unwrap();
        let e = graph_correspondence(&g).unwrap();
        for n in 1..5 {
            let dim = tensor_power(&e, n).unwrap().map(|t| t.dim()).unwrap_or(0);
            assert_eq!(dim, g.path_count(n), "n = {n}");
        }
    }

    #[test]
    fn g1_induced_is_the_creation_operator() {
        let ind = g1_induced();
        assert_eq!(ind.level_dims, vec![2, 1]);
        assert!(ind.exact);
        let t = &ind.rep.t()[0];
        // δ_1 ↦ δ_e ⊗ δ_1, everything else ↦ 0
        let mut expected = zeros(3, 3);
        expected[(2, 0)] = c(1.0);
        assert!(op_norm(&(t - expected)) < 1e-12);
        assert!(ind.rep.validate().pass());
    }

    #[test]
    fn g2_induced_dims() {
        let ind = g2_induced();
        assert_eq!(ind.level_dims, vec![3, 2, 1]);
        assert!(ind.exact);
    }

    #[test]
    fn misplaced_block_is_rejected() {
        // T(e) maps vertex 2 into vertex 1 although e goes 1 → 2
        let e = graph_correspondence(&g1()).unwrap();
        let sigma = StarRepresentation::faithful(e.algebra());
        let mut t = zeros(2, 2);
        t[(0, 1)] = c(1.0);
        let err = CovariantRep::new(sigma, e, vec![t]).unwrap_err();
        match err {
            Error::BimoduleViolation { residual } => assert!((residual - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn graph_without_edges_is_rejected() {
        assert!(graph_correspondence(&DirectedGraph::new(2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn corpus_instances_are_valid() {
        for name in corpus_names() {
            let ok = match corpus_instance(&name).expect("named instance") {
                AnyRep::Single(r) => r.validate().pass(),
                AnyRep::Product(p) => p.validate().pass() && p.system().validate().pass(),
            };
            assert!(ok, "{name}");
        }
        assert!(corpus_instance("G3").is_none());
    }
}
