//! JSON form of covariant representations and product representations.
//!
//! Complex numbers are `[re, im]` pairs (a bare number is read as a real
//! entry), matrices are row-major nested arrays, and flips are keyed by
//! `"i,j"` with 1-based indices `i > j`.

use std::collections::BTreeMap;
use std::path::Path;

use covrep_core::algebra::{MatrixBlocksAlgebra, StarRepresentation};
use covrep_core::examples::AnyRep;
use covrep_core::linalg::{cx, Mat};
use covrep_core::product::{ProductRep, ProductSystem};
use covrep_core::subspace::Subspace;
use covrep_core::covrep::CovariantRep;
use covrep_core::Correspondence;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> (f64, f64) {
        match self {
            Entry::Complex([re, im]) => (re, im),
            Entry::Real(re) => (re, 0.0),
        }
    }
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonMat(pub Vec<Vec<Entry>>);

impl JsonMat {
    pub fn from_mat(m: &Mat) -> Self {
        JsonMat(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| Entry::Complex([m[(i, j)].re, m[(i, j)].im])).collect())
                .collect(),
        )
    }

    /// A matrix with `cols` columns; an empty row list gives a `0 × cols` matrix.
    pub fn to_mat(&self, cols: usize, what: &str) -> CliResult<Mat> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(cols, |r| r.len());
        if let Some(r) = self.0.iter().find(|r| r.len() != cols) {
            return Err(CliError::Schema(format!("{what}: ragged row of length {} in a {cols}-column matrix", r.len())));
        }
        Ok(Mat::from_fn(rows, cols, |i, j| {
            let (re, im) = self.0[i][j].value();
            cx(re, im)
        }))
    }

    fn to_square(&self, n: usize, what: &str) -> CliResult<Mat> {
        let m = self.to_mat(n, what)?;
        if m.shape() != (n, n) {
            return Err(CliError::Schema(format!("{what}: expected {n}×{n}, got {}×{}", m.nrows(), m.ncols())));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceJson {
    pub dim: usize,
    /// Matrix of the right action of each matrix unit.
    pub right: Vec<JsonMat>,
    /// Matrix of the left action of each matrix unit.
    pub left: Vec<JsonMat>,
    /// Per block `b`, the `dim·d_b` square matrix of `⟨e_i, e_j⟩_b`.
    pub gram: Vec<JsonMat>,
}

impl CorrespondenceJson {
    pub fn from_correspondence(e: &Correspondence) -> Self {
        CorrespondenceJson {
            dim: e.dim(),
            right: e.right_actions().iter().map(JsonMat::from_mat).collect(),
            left: e.left_actions().iter().map(JsonMat::from_mat).collect(),
            gram: e.gram_blocks().iter().map(JsonMat::from_mat).collect(),
        }
    }

    pub fn build(&self, alg: &MatrixBlocksAlgebra, tol: f64) -> CliResult<Correspondence> {
        let n = self.dim;
        let right = self.right.iter().map(|m| m.to_square(n, "right action")).collect::<CliResult<Vec<_>>>()?;
        let left = self.left.iter().map(|m| m.to_square(n, "left action")).collect::<CliResult<Vec<_>>>()?;
        let gram = self
            .gram
            .iter()
            .zip(alg.block_dims().iter().chain(std::iter::repeat(&0)))
            .map(|(m, &d)| m.to_square(n * d, "Gram block"))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Correspondence::from_gram_blocks(alg.clone(), n, right, left, gram)?.with_tolerance(tol))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub hilbert_dim: usize,
    /// Image of each matrix unit.
    pub images: Vec<JsonMat>,
}

impl SigmaJson {
    pub fn from_sigma(s: &StarRepresentation) -> Self {
        SigmaJson { hilbert_dim: s.hilbert_dim(), images: s.images().iter().map(JsonMat::from_mat).collect() }
    }

    pub fn build(&self, alg: &MatrixBlocksAlgebra, tol: f64) -> CliResult<StarRepresentation> {
        let n = self.hilbert_dim;
        let images = self.images.iter().map(|m| m.to_square(n, "σ image")).collect::<CliResult<Vec<_>>>()?;
        Ok(StarRepresentation::new(alg.clone(), n, images)?.with_tolerance(tol))
    }
}

/// A serialized instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Covariant {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        algebra: Vec<usize>,
        correspondence: CorrespondenceJson,
        sigma: SigmaJson,
        #[serde(rename = "T")]
        t: Vec<JsonMat>,
        /// Orthonormal columns spanning the subspace used by `verify --theorem richter`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subspace: Option<JsonMat>,
    },
    Product {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        algebra: Vec<usize>,
        k: usize,
        correspondences: Vec<CorrespondenceJson>,
        flips: BTreeMap<String, JsonMat>,
        sigma: SigmaJson,
        #[serde(rename = "T")]
        t: Vec<Vec<JsonMat>>,
    },
}

/// An instance ready for computation.
#[derive(Debug, Clone)]
pub enum Loaded {
    Single { rep: CovariantRep, subspace: Option<Subspace> },
    Product(ProductRep),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Single { .. } => "covariant",
            Loaded::Product(_) => "product",
        }
    }
}

fn flip_key(i: usize, j: usize) -> String {
    format!("{},{}", i + 1, j + 1)
}

fn parse_flip_key(key: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Schema(format!("flip key {key:?} is not of the form \"i,j\" with i > j ≥ 1"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if j == 0 || i <= j {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

impl Instance {
    pub fn from_rep(name: Option<&str>, rep: &CovariantRep) -> Self {
        Instance::Covariant {
            name: name.map(String::from),
            algebra: rep.sigma().algebra().block_dims().to_vec(),
            correspondence: CorrespondenceJson::from_correspondence(rep.correspondence()),
            sigma: SigmaJson::from_sigma(rep.sigma()),
            t: rep.t().iter().map(JsonMat::from_mat).collect(),
            subspace: None,
        }
    }

    pub fn from_product(name: Option<&str>, pr: &ProductRep) -> Self {
        let sys = pr.system();
        Instance::Product {
            name: name.map(String::from),
            algebra: pr.sigma().algebra().block_dims().to_vec(),
            k: sys.rank(),
            correspondences: sys.correspondences().iter().map(CorrespondenceJson::from_correspondence).collect(),
            flips: sys.flips_algebraic().iter().map(|(&(i, j), m)| (flip_key(i, j), JsonMat::from_mat(m))).collect(),
            sigma: SigmaJson::from_sigma(pr.sigma()),
            t: pr.reps().iter().map(|r| r.t().iter().map(JsonMat::from_mat).collect()).collect(),
        }
    }

    pub fn from_any(name: Option<&str>, any: &AnyRep) -> Self {
        match any {
            AnyRep::Single(r) => Self::from_rep(name, r),
            AnyRep::Product(p) => Self::from_product(name, p),
        }
    }

    pub fn with_subspace(mut self, basis: &Mat) -> Self {
        if let Instance::Covariant { subspace, .. } = &mut self {
            *subspace = Some(JsonMat::from_mat(basis));
        }
        self
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Instance::Covariant { name, .. } | Instance::Product { name, .. } => name.as_deref(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Covariant { .. } => "covariant",
            Instance::Product { .. } => "product",
        }
    }

    pub fn algebra(&self) -> CliResult<MatrixBlocksAlgebra> {
        let dims = match self {
            Instance::Covariant { algebra, .. } | Instance::Product { algebra, .. } => algebra,
        };
        Ok(MatrixBlocksAlgebra::new(dims.clone())?)
    }

    pub fn sigma(&self, tol: f64) -> CliResult<StarRepresentation> {
        let alg = self.algebra()?;
        match self {
            Instance::Covariant { sigma, .. } | Instance::Product { sigma, .. } => sigma.build(&alg, tol),
        }
    }

    pub fn correspondences(&self, tol: f64) -> CliResult<Vec<Correspondence>> {
        let alg = self.algebra()?;
        match self {
            Instance::Covariant { correspondence, .. } => Ok(vec![correspondence.build(&alg, tol)?]),
            Instance::Product { k, correspondences, .. } => {
                if correspondences.len() != *k {
                    return Err(CliError::Schema(format!("k = {k} but {} correspondences given", correspondences.len())));
                }
                correspondences.iter().map(|e| e.build(&alg, tol)).collect()
            }
        }
    }

    pub fn product_system(&self, tol: f64) -> CliResult<ProductSystem> {
        let Instance::Product { flips, .. } = self else {
            return Err(CliError::KindMismatch { expected: "product", found: "covariant" });
        };
        let corrs = self.correspondences(tol)?;
        let mut alg_flips = BTreeMap::new();
        for (key, m) in flips {
            let (i, j) = parse_flip_key(key)?;
            let (ei, ej) = (corrs.get(i).map_or(0, |e| e.dim()), corrs.get(j).map_or(0, |e| e.dim()));
            alg_flips.insert((i, j), m.to_mat(ei * ej, "flip")?);
        }
        Ok(ProductSystem::new(corrs, alg_flips)?.with_tolerance(tol))
    }

    pub fn load(&self, tol: f64) -> CliResult<Loaded> {
        let sigma = self.sigma(tol)?;
        let n = sigma.hilbert_dim();
        match self {
            Instance::Covariant { t, subspace, .. } => {
                let corr = self.correspondences(tol)?.remove(0);
                let t = t.iter().map(|m| m.to_square(n, "T")).collect::<CliResult<Vec<_>>>()?;
                let rep = CovariantRep::new(sigma, corr, t)?.with_tolerance(tol);
                let subspace = match subspace {
                    Some(b) => Some(Subspace::from_orthonormal(b.to_mat(0, "subspace")?)?),
                    None => None,
                };
                Ok(Loaded::Single { rep, subspace })
            }
            Instance::Product { t, .. } => {
                let system = self.product_system(tol)?;
                let t = t
                    .iter()
                    .map(|ti| ti.iter().map(|m| m.to_square(n, "T")).collect::<CliResult<Vec<_>>>())
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Loaded::Product(ProductRep::new(system, sigma, t)?.with_tolerance(tol)))
            }
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

pub fn parse_instance(text: &str) -> CliResult<Instance> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn read_instance(path: &Path) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn write_instance(path: &Path, inst: &Instance) -> CliResult<()> {
    std::fs::write(path, inst.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
