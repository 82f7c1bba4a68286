use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;

use super::{FacetSet, Polytope};
use crate::error::Result;

pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    /// I_F: the facets containing the face.
    pub index_set: FacetSet,
    pub dim: usize,
    /// Cardinality of I_F.
    pub r_f: usize,
    pub regular: bool,
    pub depth: usize,
    /// Indices into [`Polytope::vertices`].
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn singular(&self) -> bool {
        !self.regular
    }
}

/// All faces of a polytope (the interior included), ordered by dimension then index set.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    n: usize,
    d: usize,
    faces: Vec<Face>,
    by_set: HashMap<FacetSet, FaceId>,
    vertex_sets: Vec<FacetSet>,
    /// Cover relations (lower, upper): lower is a facet of upper.
    covers: Vec<(FaceId, FaceId)>,
}

/// Enumerates faces as intersections of vertex tight sets.
pub fn enumerate_faces(p: &Polytope) -> Result<FaceLattice> {
    let vertex_sets: Vec<FacetSet> = p.vertices().iter().map(|v| v.tight).collect();
    let mut sets: BTreeSet<u64> = vertex_sets.iter().map(|s| s.0).collect();
    let mut frontier: Vec<u64> = sets.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &a in &frontier {
            for b in &vertex_sets {
                let c = a & b.0;
                if sets.insert(c) {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    let n = p.n();
    let mut faces = Vec::new();
    for bits in sets {
        let set = FacetSet(bits);
        let rank = p.normal_rank(set)?;
        let dim = n - rank;
        let vertices: Vec<usize> = (0..vertex_sets.len()).filter(|&v| set.is_subset(vertex_sets[v])).collect();
        let r_f = set.len();
        faces.push(Face { id: 0, index_set: set, dim, r_f, regular: r_f == n - dim, depth: 0, vertices });
    }
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then(a.index_set.lex_cmp(b.index_set)));
    let mut by_set = HashMap::new();
    for (i, f) in faces.iter_mut().enumerate() {
        f.id = i;
        by_set.insert(f.index_set, i);
    }
    let mut covers = Vec::new();
    for lo in &faces {
        for hi in &faces {
            if hi.dim == lo.dim + 1 && hi.index_set.is_subset(lo.index_set) {
                covers.push((lo.id, hi.id));
            }
        }
    }
    let mut lat = FaceLattice { n, d: p.d(), faces, by_set, vertex_sets, covers };
    let depths = singularity_depth(&lat).0;
    for (f, dep) in lat.faces.iter_mut().zip(depths) {
        f.depth = dep;
    }
    log::debug!("face lattice: {} faces", lat.faces.len());
    Ok(lat)
}

/// Per-face depth and the polytope depth. A regular face has depth 0; a singular
/// face has depth one more than the largest depth among singular faces strictly
/// above it (so 1 when every face above it is regular).
pub fn singularity_depth(lat: &FaceLattice) -> (Vec<usize>, usize) {
    let mut depth = vec![0usize; lat.faces.len()];
    for f in lat.faces.iter().rev() {
        if f.regular {
            continue;
        }
        let above = lat
            .faces
            .iter()
            .filter(|g| g.dim > f.dim && g.singular() && g.index_set.is_subset(f.index_set))
            .map(|g| depth[g.id])
            .max()
            .unwrap_or(0);
        depth[f.id] = above + 1;
    }
    let max = depth.iter().copied().max().unwrap_or(0);
    (depth, max)
}

impl FaceLattice {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn covers(&self) -> &[(FaceId, FaceId)] {
        &self.covers
    }

    pub fn interior(&self) -> &Face {
        self.faces.last().expect("the interior is always present")
    }

    pub fn by_index_set(&self, set: FacetSet) -> Option<&Face> {
        self.by_set.get(&set).map(|&i| &self.faces[i])
    }

    pub fn polytope_depth(&self) -> usize {
        self.faces.iter().map(|f| f.depth).max().unwrap_or(0)
    }

    pub fn singular_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.singular())
    }

    /// F ≤ G (F contained in the closure of G).
    pub fn leq(&self, f: FaceId, g: FaceId) -> bool {
        self.faces[g].index_set.is_subset(self.faces[f].index_set)
    }

    /// The smallest face whose index set contains `set`, or `None` when no point
    /// of the polytope satisfies all the equalities in `set`.
    pub fn face_of_active_set(&self, set: FacetSet) -> Option<&Face> {
        let mut acc: Option<FacetSet> = None;
        for v in &self.vertex_sets {
            if set.is_subset(*v) {
                acc = Some(acc.map_or(*v, |a| a.intersection(*v)));
            }
        }
        acc.and_then(|s| self.by_index_set(s))
    }

    /// The face F with z ∈ C^F × (C*)^{F^c} given by the zero set of z, or `None` if z ∉ C^d_Δ.
    pub fn cd_delta_membership(&self, z: &[Complex64]) -> Option<&Face> {
        self.face_of_active_set(zero_set(z))
    }
}

/// I_z = {j : z_j = 0}.
pub fn zero_set(z: &[Complex64]) -> FacetSet {
    FacetSet::from_indices(z.iter().enumerate().filter(|(_, c)| c.re == 0.0 && c.im == 0.0).map(|(j, _)| j))
}
