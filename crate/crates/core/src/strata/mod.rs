//! Stratification reports: strata poset, chart models, links and local models.

mod link;

pub use link::{build_link, derived_moment_data, LinkData, LinkKind};

use crate::error::{Error, Result};
use crate::lattice::{chart_index_sets, gamma_check, GroupPresentation};
use crate::linalg::{self, Matrix};
use crate::orbit::StratumLabel;
use crate::polytope::{enumerate_faces, FaceId, FaceLattice, FacetSet, Polytope};
use crate::scalars::Scalar;

/// Chart (C*)^{I \ I_F} / Γ̌_I of a singular stratum.
#[derive(Debug, Clone)]
pub struct ChartModel {
    pub chart: FacetSet,
    pub base_coordinates: FacetSet,
    pub group: GroupPresentation,
}

#[derive(Debug, Clone)]
pub struct Stratum {
    pub label: StratumLabel,
    /// I_F for a singular stratum, empty for the maximal piece.
    pub index_set: FacetSet,
    pub complex_dim: usize,
    pub depth: usize,
    /// Faces whose orbits make up the stratum: the regular faces for the maximal piece.
    pub faces: Vec<FaceId>,
    pub chart: Option<ChartModel>,
    pub link: Option<LinkData>,
}

#[derive(Debug, Clone)]
pub struct StratificationReport {
    pub n: usize,
    pub d: usize,
    pub depth: usize,
    /// Maximal piece first, then one stratum per singular face in face order.
    pub strata: Vec<Stratum>,
    /// Cover relations (lower, upper) of the closure order, as indices into `strata`.
    pub edges: Vec<(usize, usize)>,
}

impl StratificationReport {
    pub fn singular_strata(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.iter().filter(|s| s.label != StratumLabel::Maximal)
    }

    pub fn stratum_of_face(&self, face: FaceId) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.label == StratumLabel::Singular(face))
    }

    /// Number of nested link levels below this report.
    pub fn recursion_levels(&self) -> usize {
        self.singular_strata()
            .filter_map(|s| s.link.as_ref())
            .map(|l| 1 + l.report.recursion_levels())
            .max()
            .unwrap_or(0)
    }
}

pub fn build_stratification(p: &Polytope, lat: &FaceLattice) -> Result<StratificationReport> {
    let n = p.n();
    let charts = chart_index_sets(p, lat)?;
    let mut strata = vec![Stratum {
        label: StratumLabel::Maximal,
        index_set: FacetSet::EMPTY,
        complex_dim: n,
        depth: 0,
        faces: lat.faces().iter().filter(|f| f.regular).map(|f| f.id).collect(),
        chart: None,
        link: None,
    }];
    for f in lat.singular_faces() {
        let need = n - f.dim;
        let chart = charts
            .iter()
            .copied()
            .find(|i| i.intersection(f.index_set).len() == need)
            .ok_or_else(|| Error::Internal(format!("no chart meets I_F = {} in {need} facets", f.index_set)))?;
        let group = gamma_check(p, chart, f)?;
        strata.push(Stratum {
            label: StratumLabel::Singular(f.id),
            index_set: f.index_set,
            complex_dim: f.dim,
            depth: f.depth,
            faces: vec![f.id],
            chart: Some(ChartModel { chart, base_coordinates: chart.difference(f.index_set), group }),
            link: Some(build_link(p, lat, f)?),
        });
    }
    let below = |a: &Stratum, b: &Stratum| {
        b.label == StratumLabel::Maximal
            || (a.label != StratumLabel::Maximal && a.index_set != b.index_set && b.index_set.is_subset(a.index_set))
    };
    let mut edges = Vec::new();
    for (i, a) in strata.iter().enumerate() {
        for (j, b) in strata.iter().enumerate() {
            if i == j || !below(a, b) {
                continue;
            }
            let covered = strata.iter().enumerate().any(|(k, c)| k != i && k != j && below(a, c) && below(c, b));
            if !covered {
                edges.push((i, j));
            }
        }
    }
    Ok(StratificationReport { n, d: p.d(), depth: lat.polytope_depth(), strata, edges })
}

/// One inequality Σ_h a_{hk}|z_h|² + constant > 0 of B̃_F, for a facet k ∉ I ∪ I_F.
#[derive(Debug, Clone)]
pub struct BInequality {
    pub facet: usize,
    pub coefficients: Vec<(usize, Scalar)>,
    pub constant: Scalar,
}

/// Twisted-product datum (B̃_F × C(L_F)) / Γ̌_I around a singular stratum.
#[derive(Debug, Clone)]
pub struct LocalModel {
    pub face: FaceId,
    pub base_dim: usize,
    pub base_coordinates: FacetSet,
    pub group: GroupPresentation,
    /// Coordinates C^F of the cone factor C^F // N^F_C.
    pub cone_coordinates: FacetSet,
    pub n_f_dim: usize,
    pub n_f0_dim: usize,
    pub link_facets: usize,
    pub link_real_dim: usize,
    pub chart: FacetSet,
    /// a[h][k]: coordinate of X_k along X_{I[h]}.
    pub a: Matrix,
    pub inequalities: Vec<BInequality>,
}

pub fn local_model(p: &Polytope, report: &StratificationReport, face: FaceId) -> Result<LocalModel> {
    let s = report
        .stratum_of_face(face)
        .ok_or_else(|| Error::Precondition(format!("face {face} has no singular stratum in the report")))?;
    let (cm, link) = match (&s.chart, &s.link) {
        (Some(c), Some(l)) => (c, l),
        _ => return Err(Error::Internal("singular stratum without chart data".into())),
    };
    let field = p.field();
    let idx = cm.chart.indices();
    let basis: Matrix = idx.iter().map(|&h| p.normals()[h].clone()).collect();
    let inv = linalg::inverse(&linalg::transpose(&basis), field)?;
    let cols: Matrix = p.normals().iter().map(|x| linalg::mat_vec(&inv, x)).collect();
    let a = linalg::transpose(&cols);
    let lam = p.offsets();
    let mut inequalities = Vec::new();
    for k in 0..p.d() {
        if cm.chart.contains(k) || s.index_set.contains(k) {
            continue;
        }
        let coefficients = (0..idx.len())
            .filter(|&h| cm.base_coordinates.contains(idx[h]))
            .map(|h| (idx[h], a[h][k].clone()))
            .collect();
        let shift = (0..idx.len()).fold(Scalar::zero(field), |acc, h| &acc + &(&a[h][k] * &lam[idx[h]]));
        inequalities.push(BInequality { facet: k, coefficients, constant: &shift - &lam[k] });
    }
    Ok(LocalModel {
        face,
        base_dim: s.complex_dim,
        base_coordinates: cm.base_coordinates,
        group: cm.group.clone(),
        cone_coordinates: s.index_set,
        n_f_dim: link.n_f_dim,
        n_f0_dim: link.n_f0_dim,
        link_facets: link.delta_f.d(),
        link_real_dim: link.link_real_dim,
        chart: cm.chart,
        a,
        inequalities,
    })
}

/// Exact check that ker(Δ_F sequence) = ker(Σ_F sequence) ⊕ span(s).
pub fn kernel_split_holds(link: &LinkData) -> Result<bool> {
    let field = link.delta_f.field();
    let r = link.sigma_normals.len();
    let sigma_pi = linalg::transpose(&link.sigma_normals);
    let delta_pi = linalg::transpose(link.delta_f.normals());
    let ks = linalg::nullspace(&sigma_pi, r, field)?;
    let kd = linalg::nullspace(&delta_pi, r, field)?;
    if kd.len() != ks.len() + 1 || ks.len() != link.n_f_dim || kd.len() != link.n_f0_dim {
        return Ok(false);
    }
    let vanishes = |m: &Matrix, v: &[Scalar]| linalg::mat_vec(m, v).iter().all(Scalar::is_zero);
    if !ks.iter().all(|v| vanishes(&delta_pi, v)) || !vanishes(&delta_pi, &link.s_coefficients) {
        return Ok(false);
    }
    let mut all = ks.clone();
    all.push(link.s_coefficients.clone());
    Ok(linalg::rank(&all)? == kd.len())
}

/// Faces of Δ_F matched with the faces of Δ properly containing F: (parent face, link face).
/// Checks the dimension shift q ↦ q − p − 1 and that singularity is preserved.
pub fn link_face_correspondence(lat: &FaceLattice, link: &LinkData) -> Result<Vec<(FaceId, FaceId)>> {
    let sub = enumerate_faces(&link.delta_f)?;
    let idx = link.index_set.indices();
    let mut pairs = Vec::new();
    for g in lat.faces() {
        if g.index_set == link.index_set || !g.index_set.is_subset(link.index_set) {
            continue;
        }
        let local = FacetSet::from_indices((0..idx.len()).filter(|&k| g.index_set.contains(idx[k])));
        let h = sub
            .by_index_set(local)
            .ok_or_else(|| Error::Internal(format!("face {} has no counterpart in the link", g.index_set)))?;
        if h.dim + link.face_dim + 1 != g.dim || h.regular != g.regular {
            return Err(Error::Internal(format!("face {} and its link counterpart disagree", g.index_set)));
        }
        pairs.push((g.id, h.id));
    }
    if pairs.len() != sub.faces().len() {
        return Err(Error::Internal("link has faces with no counterpart".into()));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::lattice::GroupOrder;

    fn report(p: &Polytope) -> (FaceLattice, StratificationReport) {
        let lat = enumerate_faces(p).unwrap();
        let r = build_stratification(p, &lat).unwrap();
        (lat, r)
    }

    #[test]
    fn pyramid_apex_link_is_quadrilateral() {
        let p = instances::pyramid();
        let (lat, r) = report(&p);
        assert_eq!(r.strata.len(), 2);
        assert_eq!(r.edges, vec![(1, 0)]);
        let s = &r.strata[1];
        assert_eq!(s.complex_dim, 0);
        assert_eq!(s.index_set, FacetSet::from_indices([0, 1, 2, 3]));
        let link = s.link.as_ref().unwrap();
        assert_eq!(link.delta_f.n(), 2);
        assert_eq!(link.delta_f.d(), 4);
        assert_eq!(link.delta_f.vertices().len(), 4);
        assert_eq!((link.n_f_dim, link.n_f0_dim), (1, 2));
        assert_eq!(link.link_real_dim, 5);
        assert!(link.report.singular_strata().next().is_none());
        assert!(kernel_split_holds(link).unwrap());
        assert_eq!(link_face_correspondence(&lat, link).unwrap().len(), 9);
        let g = &s.chart.as_ref().unwrap().group;
        assert!(g.finite);
    }

    #[test]
    fn octahedron_vertex_links() {
        let p = instances::octahedron();
        let (lat, r) = report(&p);
        assert_eq!(r.singular_strata().count(), 6);
        for s in r.singular_strata() {
            let link = s.link.as_ref().unwrap();
            assert_eq!((link.delta_f.n(), link.delta_f.d()), (2, 4));
            assert_eq!(link.n_f_dim, 1);
            assert!(kernel_split_holds(link).unwrap());
            link_face_correspondence(&lat, link).unwrap();
        }
        assert_eq!(r.edges.len(), 6);
    }

    #[test]
    fn simple_polytopes_have_only_the_maximal_piece() {
        for p in [instances::square(), instances::triangle(), instances::cube(), instances::weighted_triangle()] {
            let (lat, r) = report(&p);
            assert_eq!(r.strata.len(), 1);
            assert!(r.edges.is_empty());
            assert_eq!(r.strata[0].faces.len(), lat.faces().len());
            assert_eq!(r.depth, 0);
        }
    }

    #[test]
    fn four_pyramid_recurses_twice() {
        let p = instances::pyramid_over_pyramid();
        let (lat, r) = report(&p);
        assert_eq!(r.depth, 2);
        assert_eq!(r.recursion_levels(), 2);
        let deepest = r.singular_strata().max_by_key(|s| s.depth).unwrap();
        assert_eq!(deepest.depth, 2);
        let link = deepest.link.as_ref().unwrap();
        assert_eq!(link.report.depth, 1);
        assert!(link.report.singular_strata().next().is_some());
        for s in r.singular_strata() {
            let l = s.link.as_ref().unwrap();
            assert!(l.report.depth < r.depth);
            assert!(kernel_split_holds(l).unwrap());
            link_face_correspondence(&lat, l).unwrap();
        }
    }

    #[test]
    fn singular_edge_has_positive_base() {
        let p = instances::pyramid_over_pyramid();
        let (lat, r) = report(&p);
        let edge = r.singular_strata().find(|s| s.complex_dim == 1).unwrap();
        let face = match edge.label {
            StratumLabel::Singular(f) => f,
            StratumLabel::Maximal => unreachable!(),
        };
        let m = local_model(&p, &r, face).unwrap();
        assert_eq!(m.base_dim, 1);
        assert_eq!(m.base_coordinates.len(), 1);
        assert_eq!(m.chart.intersection(lat.face(face).index_set).len(), 3);
    }

    #[test]
    fn apex_local_model() {
        let p = instances::pyramid();
        let (lat, r) = report(&p);
        let apex = lat.singular_faces().next().unwrap().id;
        let m = local_model(&p, &r, apex).unwrap();
        assert_eq!(m.base_dim, 0);
        assert!(m.base_coordinates.is_empty());
        assert!(matches!(m.group.order, GroupOrder::Finite(_)));
        assert_eq!(m.link_facets, 4);
        // chart [0,1,2] leaves facet 4 (the base) as the only inequality
        assert_eq!(m.chart, FacetSet::from_indices([0, 1, 2]));
        assert_eq!(m.inequalities.len(), 1);
        assert_eq!(m.inequalities[0].facet, 4);
        assert!(m.inequalities[0].coefficients.is_empty());
        // base height 1 above the apex section: constant is positive
        assert!(m.inequalities[0].constant.sign().unwrap() > 0);
    }

    #[test]
    fn regular_face_is_rejected() {
        let p = instances::pyramid();
        let lat = enumerate_faces(&p).unwrap();
        let f = lat.faces().iter().find(|f| f.regular).unwrap();
        assert!(matches!(build_link(&p, &lat, f), Err(Error::Precondition(_))));
    }

    #[test]
    fn derived_moment_kernels() {
        let p = instances::pyramid();
        let (lat, r) = report(&p);
        let link = r.strata[1].link.as_ref().unwrap();
        let sigma = derived_moment_data(LinkKind::Sigma, link, &lat, 53).unwrap();
        let delta = derived_moment_data(LinkKind::Delta, link, &lat, 53).unwrap();
        assert_eq!(sigma.kernel_dim(), 1);
        assert_eq!(delta.kernel_dim(), 2);
    }

    #[test]
    fn nonrational_pyramid_link() {
        let p = instances::pyramid_sqrt2();
        let (lat, r) = report(&p);
        assert_eq!(r.singular_strata().count(), 1);
        let link = r.strata[1].link.as_ref().unwrap();
        assert!(kernel_split_holds(link).unwrap());
        link_face_correspondence(&lat, link).unwrap();
    }
}
