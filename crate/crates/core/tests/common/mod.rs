#![allow(dead_code)]

use covrep_core::examples::{graph_block_rep, DirectedGraph};
use covrep_core::linalg::{cx, eye, Mat};
use covrep_core::covrep::CovariantRep;
use proptest::prelude::*;

/// Entropy drawn by proptest and consumed in order.
#[derive(Debug, Clone)]
pub struct Pool {
    values: Vec<f64>,
    at: usize,
}

impl Pool {
    pub fn next(&mut self) -> f64 {
        let v = self.values[self.at % self.values.len()];
        self.at += 1;
        v
    }

    /// Uniform in `lo..hi`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next() + 1.0) / 2.0
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.range(0.0, 1.0) * n as f64) as usize).min(n - 1)
    }

    pub fn cmat(&mut self, r: usize, c: usize, scale: f64) -> Mat {
        Mat::from_fn(r, c, |_, _| cx(self.next() * scale, self.next() * scale))
    }
}

pub fn pool() -> impl Strategy<Value = Pool> {
    proptest::collection::vec(-1.0f64..1.0, 256).prop_map(|values| Pool { values, at: 0 })
}

/// Random acyclic graph with edges `i → j`, `i < j`, and at least one edge.
pub fn dag(p: &mut Pool, max_vertices: usize) -> DirectedGraph {
    let v = 2 + p.below(max_vertices - 1);
    let mut edges = Vec::new();
    for i in 0..v {
        for j in i + 1..v {
            if p.next() > 0.2 {
                edges.push((i, j));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    DirectedGraph::new(v, edges).unwrap()
}

/// Left-invertible representation of a random acyclic graph: the incoming
/// blocks at each vertex are the column blocks of `w(I + εR)`.
pub fn left_invertible_graph_rep(p: &mut Pool) -> CovariantRep {
    loop {
        let g = dag(p, 4);
        let mut mult = vec![0usize; g.vertices];
        for v in 0..g.vertices {
            let incoming: usize = g.edges.iter().filter(|e| e.1 == v).map(|e| mult[e.0]).sum();
            mult[v] = incoming.max(1 + p.below(2));
        }
        if mult.iter().sum::<usize>() > 14 {
            continue;
        }
        let w = p.range(0.7, 1.5);
        let eps = p.range(0.0, 0.4);
        let mut blocks: Vec<Mat> = g.edges.iter().map(|&(s, r)| Mat::zeros(mult[r], mult[s])).collect();
        for v in 0..g.vertices {
            let m = mult[v];
            let a = (eye(m) + p.cmat(m, m, eps)) * cx(w, 0.0);
            let mut col = 0;
            for (x, &(s, r)) in g.edges.iter().enumerate() {
                if r == v {
                    blocks[x] = a.columns(col, mult[s]).into_owned();
                    col += mult[s];
                }
            }
        }
        let rep = graph_block_rep(&g, &mult, &blocks).unwrap();
        if rep.check_left_invertible().pass {
            return rep;
        }
    }
}

/// `w(I + εR)` on `ℂⁿ`.
pub fn scalar_near_identity(p: &mut Pool, n: usize) -> CovariantRep {
    let w = p.range(0.6, 1.5);
    let eps = p.range(0.0, 0.5);
    let a = (eye(n) + p.cmat(n, n, eps)) * cx(w, 0.0);
    CovariantRep::scalar(a).unwrap()
}

/// Either a graph or a scalar left-invertible instance.
pub fn left_invertible(p: &mut Pool) -> CovariantRep {
    loop {
        let rep = if p.next() > 0.0 { left_invertible_graph_rep(p) } else { scalar_near_identity(p, 3) };
        if rep.check_left_invertible().pass {
            return rep;
        }
    }
}
