//! Seeded random instances.  Every generator is a pure function of its seed.

use std::fmt;
use std::str::FromStr;

use covrep_core::covrep::CovariantRep;
use covrep_core::examples::{graph_block_rep, scalar_tuple, AnyRep, DirectedGraph};
use covrep_core::linalg::{cx, eye, kron, Mat};
use covrep_core::product::ProductRep;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

/// Rejection sampling gives up after this many candidates.
pub const MAX_ATTEMPTS: usize = 1000;

/// Largest Hilbert-space dimension produced by the graph generators.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    Isometric,
    Concave,
    Shimorin,
    DoublyCommuting,
    Generic,
}

impl Profile {
    pub const ALL: [Profile; 5] =
        [Profile::Isometric, Profile::Concave, Profile::Shimorin, Profile::DoublyCommuting, Profile::Generic];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Isometric => "isometric",
            Profile::Concave => "concave",
            Profile::Shimorin => "shimorin",
            Profile::DoublyCommuting => "doubly-commuting",
            Profile::Generic => "generic",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CliError::Unknown { what: "profile", name: s.to_string() })
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cmat(rng: &mut impl Rng, r: usize, c: usize, scale: f64) -> Mat {
    Mat::from_fn(r, c, |_, _| cx(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale)))
}

/// Unitary factor of a random square matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> Mat {
    cmat(rng, n, n, 1.0).qr().q()
}

/// Random acyclic graph on at most `max_vertices` vertices with edges `i → j`, `i < j`.
pub fn dag(rng: &mut impl Rng, max_vertices: usize) -> DirectedGraph {
    let v = rng.gen_range(2..=max_vertices.max(2));
    let density = rng.gen_range(0.3..0.9);
    let mut edges = Vec::new();
    for i in 0..v {
        for j in i + 1..v {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    DirectedGraph::new(v, edges).expect("edges within range")
}

/// Vertex multiplicities with `m_v ≥ Σ_{r(e) = v} m_{s(e)}`, so that each
/// vertex can receive its incoming edges injectively.
fn injective_multiplicities(rng: &mut impl Rng, g: &DirectedGraph, extra: usize) -> Vec<usize> {
    let mut mult = vec![0usize; g.vertices];
    for v in 0..g.vertices {
        let incoming: usize = g.edges.iter().filter(|e| e.1 == v && e.0 != v).map(|e| mult[e.0]).sum();
        mult[v] = if incoming == 0 { rng.gen_range(1..=2) } else { incoming + rng.gen_range(0..=extra) };
    }
    mult
}

/// Blocks whose incoming blocks at each vertex `v` are the first columns of `a(m_v)`.
fn blocks_from(g: &DirectedGraph, mult: &[usize], mut a: impl FnMut(usize) -> Mat) -> Vec<Mat> {
    let mut blocks: Vec<Mat> = g.edges.iter().map(|&(s, r)| Mat::zeros(mult[r], mult[s])).collect();
    for v in 0..g.vertices {
        let m = a(mult[v]);
        let mut col = 0;
        for (x, &(s, r)) in g.edges.iter().enumerate() {
            if r == v {
                blocks[x] = m.columns(col, mult[s]).into_owned();
                col += mult[s];
            }
        }
    }
    blocks
}

/// Isometric graph representation, optionally with a unitary loop component.
pub fn isometric(rng: &mut impl Rng) -> CovariantRep {
    loop {
        let mut g = dag(rng, 4);
        let mut mult = injective_multiplicities(rng, &g, 1);
        if rng.gen_bool(0.5) {
            let v = g.vertices;
            g = DirectedGraph::new(v + 1, g.edges.iter().copied().chain([(v, v)]).collect()).expect("loop vertex");
            mult.push(rng.gen_range(1..=2));
        }
        if mult.iter().sum::<usize>() > MAX_DIM {
            continue;
        }
        let blocks = blocks_from(&g, &mult, |m| unitary(rng, m));
        return graph_block_rep(&g, &mult, &blocks).expect("isometric blocks respect the graph");
    }
}

/// Left-invertible graph representation with incoming blocks from `w(I + εR)`.
pub fn left_invertible_graph(rng: &mut impl Rng) -> CovariantRep {
    loop {
        let g = dag(rng, 4);
        let mult = injective_multiplicities(rng, &g, 1);
        if mult.iter().sum::<usize>() > MAX_DIM {
            continue;
        }
        let w = rng.gen_range(0.7..1.5);
        let eps = rng.gen_range(0.0..0.4);
        let blocks = blocks_from(&g, &mult, |m| (eye(m) + cmat(rng, m, m, eps)) * cx(w, 0.0));
        let rep = graph_block_rep(&g, &mult, &blocks).expect("blocks respect the graph");
        if rep.check_left_invertible().pass {
            return rep;
        }
    }
}

/// `w(I + εR)` on `ℂ³`, or a small perturbation of a unitary.
pub fn left_invertible_scalar(rng: &mut impl Rng) -> CovariantRep {
    loop {
        let a = if rng.gen_bool(0.5) {
            let w = rng.gen_range(0.6..1.5);
            let eps = rng.gen_range(0.0..0.5);
            (eye(3) + cmat(rng, 3, 3, eps)) * cx(w, 0.0)
        } else {
            let eps = rng.gen_range(0.0..0.05);
            unitary(rng, 3) + cmat(rng, 3, 3, eps)
        };
        let rep = CovariantRep::scalar(a).expect("square matrix");
        if rep.check_left_invertible().pass {
            return rep;
        }
    }
}

/// Seeded left-invertible instance, graph or scalar.
pub fn left_invertible(seed: u64) -> CovariantRep {
    let mut r = rng(seed);
    match r.gen_range(0..3) {
        0 => left_invertible_scalar(&mut r),
        1 => isometric(&mut r),
        _ => left_invertible_graph(&mut r),
    }
}

/// Graph representation with arbitrary blocks; only the structural axioms hold.
pub fn generic(rng: &mut impl Rng) -> CovariantRep {
    let g = dag(rng, 4);
    let mult: Vec<usize> = (0..g.vertices).map(|_| rng.gen_range(1..=3)).collect();
    let blocks: Vec<Mat> = g.edges.iter().map(|&(s, r)| cmat(rng, mult[r], mult[s], 1.0)).collect();
    graph_block_rep(&g, &mult, &blocks).expect("blocks respect the graph")
}

/// Doubly commuting scalar pair: `(A ⊗ I, I ⊗ B)` or simultaneously diagonal normal matrices.
pub fn doubly_commuting(rng: &mut impl Rng) -> ProductRep {
    let mats = if rng.gen_bool(0.5) {
        let (p, q) = (rng.gen_range(1..=3), rng.gen_range(2..=3));
        let (a, b) = (cmat(rng, p, p, 1.0), cmat(rng, q, q, 1.0));
        [kron(&a, &eye(q)), kron(&eye(p), &b)]
    } else {
        let n = rng.gen_range(2..=4);
        let u = unitary(rng, n);
        let d1 = Mat::from_diagonal(&cmat(rng, n, 1, 1.0).column(0).into_owned());
        let d2 = Mat::from_diagonal(&cmat(rng, n, 1, 1.0).column(0).into_owned());
        [&u * d1 * u.adjoint(), &u * d2 * u.adjoint()]
    };
    scalar_tuple(&mats).expect("commuting pair")
}

/// Seeded commuting pair on `ℂ^n`: doubly commuting families, polynomial
/// pairs `(A, p(A))` and nilpotent tensor pairs.
pub fn commuting_pair(seed: u64) -> (Mat, Mat) {
    let mut r = rng(seed);
    match r.gen_range(0..4) {
        0 => {
            let n = r.gen_range(2..=4);
            let a = cmat(&mut r, n, n, 1.0);
            let cs: Vec<_> = (0..3).map(|_| cx(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
            let b = eye(n) * cs[0] + &a * cs[1] + &a * &a * cs[2];
            (a, b)
        }
        1 => {
            let n = r.gen_range(3..=4);
            let mut s = Mat::zeros(n, n);
            for i in 1..n {
                s[(i, i - 1)] = cx(r.gen_range(0.5..1.5), 0.0);
            }
            let b = &s * &s * cx(r.gen_range(0.5..1.5), 0.0);
            (s, b)
        }
        _ => {
            let pr = doubly_commuting(&mut r);
            (pr.rep(0).t()[0].clone(), pr.rep(1).t()[0].clone())
        }
    }
}

fn reject(profile: Profile, mut rng: ChaCha8Rng, accept: impl Fn(&CovariantRep) -> bool) -> CliResult<AnyRep> {
    for _ in 0..MAX_ATTEMPTS {
        let rep = if rng.gen_bool(0.5) { left_invertible_graph(&mut rng) } else { left_invertible_scalar(&mut rng) };
        if accept(&rep) {
            return Ok(AnyRep::Single(rep));
        }
    }
    Err(CliError::ProfileUnreachable { profile: profile.to_string(), attempts: MAX_ATTEMPTS })
}

/// A seeded instance with the requested profile.
pub fn random_instance(seed: u64, profile: Profile) -> CliResult<AnyRep> {
    let mut r = rng(seed);
    match profile {
        Profile::Isometric => Ok(AnyRep::Single(isometric(&mut r))),
        Profile::Generic => Ok(AnyRep::Single(generic(&mut r))),
        Profile::DoublyCommuting => Ok(AnyRep::Product(doubly_commuting(&mut r))),
        Profile::Concave => reject(profile, r, |rep| rep.check_concave().is_ok_and(|c| c.pass)),
        Profile::Shimorin => reject(profile, r, |rep| rep.check_shimorin().is_ok_and(|c| c.pass)),
    }
}
