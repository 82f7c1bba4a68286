//! H-represented polytopes ⟨μ, X_j⟩ ≥ λ_j, their vertices and face lattices.

mod faces;
mod facet_set;

use std::collections::HashMap;
use std::sync::Arc;

pub use faces::{enumerate_faces, singularity_depth, zero_set, Face, FaceId, FaceLattice};
pub use facet_set::{subsets_of_size, FacetSet};

use crate::error::{Error, Result};
use crate::lattice::Quasilattice;
use crate::linalg;
use crate::scalars::{dot, NumberField, Scalar};

/// A vertex with exact coordinates and its tight facets I_μ.
#[derive(Debug, Clone)]
pub struct Vertex {
    pub coords: Vec<Scalar>,
    pub tight: FacetSet,
}

/// A validated polytope together with its normals, offsets and quasilattice.
#[derive(Debug, Clone)]
pub struct Polytope {
    field: Arc<NumberField>,
    n: usize,
    normals: Vec<Vec<Scalar>>,
    offsets: Vec<Scalar>,
    quasilattice: Quasilattice,
    vertices: Vec<Vertex>,
}

fn affine_rank(points: &[&Vec<Scalar>]) -> Result<usize> {
    if points.is_empty() {
        return Ok(0);
    }
    let base = points[0];
    let diffs: Vec<Vec<Scalar>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        return Ok(0);
    }
    linalg::rank(&diffs)
}

impl Polytope {
    /// Validates the data. Without a quasilattice, Q defaults to the integer span of the normals.
    pub fn new(
        field: &Arc<NumberField>,
        n: usize,
        normals: Vec<Vec<Scalar>>,
        offsets: Vec<Scalar>,
        quasilattice: Option<Quasilattice>,
    ) -> Result<Self> {
        let d = normals.len();
        if n == 0 {
            return Err(Error::Validation("ambient dimension must be positive".into()));
        }
        if d > 64 {
            return Err(Error::Validation(format!("at most 64 facets are supported, got {d}")));
        }
        if offsets.len() != d {
            return Err(Error::Validation(format!("{d} normals but {} offsets", offsets.len())));
        }
        if let Some(j) = normals.iter().position(|x| x.len() != n) {
            return Err(Error::Validation(format!("normal {j} does not have length {n}")));
        }
        if linalg::rank(&normals)? != n {
            return Err(Error::Validation("normals do not span the ambient space".into()));
        }
        let quasilattice = match quasilattice {
            Some(q) => {
                if q.ambient_dim() != n {
                    return Err(Error::Validation("quasilattice has the wrong dimension".into()));
                }
                q
            }
            None => Quasilattice::new(field, n, normals.clone())?,
        };
        let vertices = enumerate_vertices(field, n, &normals, &offsets)?;
        if vertices.is_empty() {
            return Err(Error::Validation("polytope is empty".into()));
        }
        if let Some(ray) = recession_ray(field, n, &normals)? {
            let shown: Vec<String> = ray.iter().map(|s| s.to_string()).collect();
            return Err(Error::Validation(format!("polytope is unbounded along ({})", shown.join(", "))));
        }
        let all: Vec<&Vec<Scalar>> = vertices.iter().map(|v| &v.coords).collect();
        if affine_rank(&all)? != n {
            return Err(Error::Validation("polytope is not full-dimensional".into()));
        }
        let mut facet_vertices: HashMap<Vec<usize>, usize> = HashMap::new();
        for j in 0..d {
            let on: Vec<usize> = (0..vertices.len()).filter(|&v| vertices[v].tight.contains(j)).collect();
            let pts: Vec<&Vec<Scalar>> = on.iter().map(|&v| &vertices[v].coords).collect();
            if pts.is_empty() || affine_rank(&pts)? != n - 1 {
                return Err(Error::Validation(format!("half-space {j} is redundant")));
            }
            if let Some(k) = facet_vertices.insert(on, j) {
                return Err(Error::Validation(format!("half-spaces {k} and {j} define the same facet")));
            }
        }
        for (j, x) in normals.iter().enumerate() {
            if !quasilattice.contains(x) {
                return Err(Error::Validation(format!("normal {j} is not in the quasilattice")));
            }
        }
        Ok(Polytope { field: field.clone(), n, normals, offsets, quasilattice, vertices })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Vec<Scalar>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[Scalar] {
        &self.offsets
    }

    pub fn quasilattice(&self) -> &Quasilattice {
        &self.quasilattice
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Slack ⟨μ, X_j⟩ − λ_j of every constraint.
    pub fn slacks(&self, mu: &[Scalar]) -> Vec<Scalar> {
        self.normals.iter().zip(&self.offsets).map(|(x, l)| &dot(mu, x) - l).collect()
    }

    /// Whether μ ∈ Δ, exactly.
    pub fn contains(&self, mu: &[Scalar]) -> Result<bool> {
        for s in self.slacks(mu) {
            if s.sign()? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact rank of {X_j : j ∈ set}.
    pub fn normal_rank(&self, set: FacetSet) -> Result<usize> {
        let rows: Vec<Vec<Scalar>> = set.indices().iter().map(|&j| self.normals[j].clone()).collect();
        if rows.is_empty() {
            return Ok(0);
        }
        linalg::rank(&rows)
    }
}

fn enumerate_vertices(
    field: &Arc<NumberField>,
    n: usize,
    normals: &[Vec<Scalar>],
    offsets: &[Scalar],
) -> Result<Vec<Vertex>> {
    let d = normals.len();
    let mut found: HashMap<Vec<Scalar>, usize> = HashMap::new();
    let mut vertices: Vec<Vertex> = Vec::new();
    'subsets: for subset in subsets_of_size(d, n) {
        let a: Vec<Vec<Scalar>> = subset.iter().map(|&j| normals[j].clone()).collect();
        let b: Vec<Scalar> = subset.iter().map(|&j| offsets[j].clone()).collect();
        let Some(mu) = linalg::solve_unique(&a, &b, field)? else { continue };
        if found.contains_key(&mu) {
            continue;
        }
        let mut tight = FacetSet::EMPTY;
        for k in 0..d {
            let s = (&dot(&mu, &normals[k]) - &offsets[k]).sign()?;
            if s < 0 {
                continue 'subsets;
            }
            if s == 0 {
                tight.insert(k);
            }
        }
        found.insert(mu.clone(), vertices.len());
        vertices.push(Vertex { coords: mu, tight });
    }
    log::debug!("enumerated {} vertices from {} facets", vertices.len(), d);
    Ok(vertices)
}

/// A nonzero y with ⟨y, X_k⟩ ≥ 0 for all k, if one exists.
fn recession_ray(field: &Arc<NumberField>, n: usize, normals: &[Vec<Scalar>]) -> Result<Option<Vec<Scalar>>> {
    let d = normals.len();
    for subset in subsets_of_size(d, n - 1) {
        let a: Vec<Vec<Scalar>> = subset.iter().map(|&j| normals[j].clone()).collect();
        let ns = linalg::nullspace(&a, n, field)?;
        if ns.len() != 1 {
            continue;
        }
        for y in [ns[0].clone(), ns[0].iter().map(|s| -s).collect()] {
            let mut ok = true;
            for x in normals {
                if dot(&y, x).sign()? < 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some(y));
            }
        }
    }
    Ok(None)
}
