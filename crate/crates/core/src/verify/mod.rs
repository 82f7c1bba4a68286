//! Reproducible property suites over a problem instance.

mod sampling;

pub use sampling::{NcElement, Sampler};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{self, ProblemInstance};
use crate::lattice::{chart_index_sets, gamma_group, intmat, GroupOrder};
use crate::moment::SolverConfig;
use crate::orbit::{classify_orbit, closing_flow_direction, equivalent, p_function, OrbitPoint, StratumLabel};
use crate::polytope::{FacetSet, Polytope};
use crate::scalars::Scalar;
use crate::space::ToricSpace;
use crate::strata::{build_stratification, kernel_split_holds, link_face_correspondence, StratificationReport};

pub const DECAY_TOLERANCE: f64 = 1e-6;
pub const P_TOLERANCE: f64 = 1e-7;
pub const RETRACTION_AGREEMENT: f64 = 1e-8;
pub const GRADIENT_TOLERANCE: f64 = 1e-5;
/// Flow times at which closing-flow decay is checked.
pub const FLOW_TIMES: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];
const MAX_WITNESSES: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
    pub skipped: Option<String>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        PropertyResult { name, samples: 0, failures: 0, witnesses: Vec::new(), skipped: None }
    }

    fn skip(name: &'static str, why: &str) -> Self {
        PropertyResult { skipped: Some(why.into()), ..Self::new(name) }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(format!("sample {}: {}", self.samples - 1, witness()));
            }
        }
    }

    /// Records the outcome of a fallible check; errors count as failures.
    fn check(&mut self, outcome: Result<std::result::Result<(), String>>) {
        match outcome {
            Ok(Ok(())) => self.record(true, String::new),
            Ok(Err(w)) => self.record(false, || w),
            Err(e) => self.record(false, || format!("error: {e}")),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRun {
    pub instance: String,
    pub seed: u64,
    pub samples: usize,
    pub properties: Vec<PropertyResult>,
}

impl VerificationRun {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instance": self.instance,
            "seed": self.seed,
            "samples": self.samples,
            "passed": self.passed(),
            "tolerances": {
                "decay": DECAY_TOLERANCE,
                "p_function": P_TOLERANCE,
                "retraction_agreement": RETRACTION_AGREEMENT,
                "gradient": GRADIENT_TOLERANCE,
            },
            "properties": self.properties.iter().map(|p| json!({
                "name": p.name,
                "samples": p.samples,
                "failures": p.failures,
                "passed": p.passed(),
                "witnesses": p.witnesses,
                "skipped": p.skipped,
            })).collect::<Vec<_>>(),
        })
    }
}

type Suite = fn(&ToricSpace, &mut Sampler, usize) -> PropertyResult;

/// Property suites sorted by name.
pub const SUITES: &[(&str, Suite)] = &[
    ("closed_orbit_flow", closed_orbit_flow),
    ("equivalence_relation", equivalence_relation),
    ("face_lattice", face_lattice),
    ("gradient_hessian", gradient_hessian),
    ("link_structure", link_structure),
    ("p_invariance", p_invariance),
    ("rational_recovery", rational_recovery),
    ("retraction_invariance", retraction_invariance),
    ("serialization_round_trip", serialization_round_trip),
];

/// Runs every suite with `samples` samples; each suite draws from its own generator seeded
/// from a master generator, so results do not depend on suite order.
pub fn run(instance: &ProblemInstance, samples: usize) -> Result<VerificationRun> {
    let space = ToricSpace::new(instance.polytope.clone(), instance.solver)?;
    let mut master = ChaCha8Rng::seed_from_u64(instance.seed);
    let seeds: Vec<u64> = SUITES.iter().map(|_| master.random()).collect();
    let properties = SUITES
        .iter()
        .zip(seeds)
        .map(|(&(name, suite), seed)| {
            log::info!("running property suite {name}");
            suite(&space, &mut Sampler::new(seed), samples)
        })
        .collect();
    Ok(VerificationRun { instance: instance.name.clone(), seed: instance.seed, samples, properties })
}

fn max_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Oracle for the face E of an orbit closure: the barycenter of the vertices tight on I_z
/// lies in the relative interior of E, so its tight set is I_E.
pub fn barycenter_face(p: &Polytope, zeros: FacetSet) -> Result<Option<FacetSet>> {
    let field = p.field();
    let vs: Vec<&Vec<Scalar>> = p.vertices().iter().filter(|v| zeros.is_subset(v.tight)).map(|v| &v.coords).collect();
    if vs.is_empty() {
        return Ok(None);
    }
    let w = Scalar::from_int(field, vs.len() as i64).inv()?;
    let mut c = vec![Scalar::zero(field); p.n()];
    for v in vs {
        for (ci, vi) in c.iter_mut().zip(v) {
            *ci = &*ci + &(&w * vi);
        }
    }
    Ok(Some(FacetSet::from_indices(p.slacks(&c).iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(j, _)| j))))
}

/// Classification of one point against the barycenter oracle and the closing flow.
pub fn check_closed_orbit(space: &ToricSpace, z: &OrbitPoint) -> Result<std::result::Result<(), String>> {
    let p = &space.polytope;
    let zeros = z.zeros();
    let class = classify_orbit(space, z)?;
    let e = space.faces.face(class.face).index_set;
    let oracle = barycenter_face(p, zeros)?.ok_or_else(|| Error::Internal("sampled point is outside".into()))?;
    if oracle != e || (zeros == oracle) != class.closed {
        return Ok(Err(format!("zeros {zeros}: classified E = {e}, closed {}; oracle E = {oracle}", class.closed)));
    }
    let y = closing_flow_direction(space, z)?;
    match (class.closed, y) {
        (true, None) => Ok(Ok(())),
        (false, Some(y)) => {
            if space.sequence.apply_pi(&y).iter().any(|s| !s.is_zero()) {
                return Ok(Err("flow direction is not in 𝔫".into()));
            }
            let one = Scalar::one(p.field());
            for j in 0..p.d() {
                let ok = if !e.contains(j) {
                    y[j].is_zero()
                } else if !zeros.contains(j) {
                    (&y[j] - &one).sign()? >= 0
                } else {
                    true
                };
                if !ok {
                    return Ok(Err(format!("flow coefficient {j} = {} violates the support pattern", y[j])));
                }
            }
            let yf: Vec<f64> = y.iter().map(Scalar::to_f64).collect();
            let mut last = vec![f64::INFINITY; p.d()];
            for t in FLOW_TIMES {
                for j in 0..p.d() {
                    let m = z.z[j].norm() * (-2.0 * std::f64::consts::PI * t * yf[j]).exp();
                    if !e.contains(j) && m != z.z[j].norm() {
                        return Ok(Err(format!("coordinate {j} off I_E moved")));
                    }
                    if e.contains(j) && !zeros.contains(j) && m >= last[j] {
                        return Ok(Err(format!("coordinate {j} does not decay at t = {t}")));
                    }
                    last[j] = m;
                }
            }
            match (0..p.d()).filter(|&j| e.contains(j)).map(|j| last[j]).fold(0.0, f64::max) {
                m if m < DECAY_TOLERANCE => Ok(Ok(())),
                m => Ok(Err(format!("flow leaves modulus {m:e} on I_E"))),
            }
        }
        (closed, y) => Ok(Err(format!("closed = {closed} but flow direction present = {}", y.is_some()))),
    }
}

fn closed_orbit_flow(space: &ToricSpace, s: &mut Sampler, n: usize) -> PropertyResult {
    let mut r = PropertyResult::new("closed_orbit_flow");
    for _ in 0..n {
        let z = s.domain_point(space);
        r.check(check_closed_orbit(space, &z));
    }
    r
}

/// Reflexivity, symmetry and transitivity on z, g·z, h·g·z.
pub fn check_equivalence_triple(space: &ToricSpace, s: &mut Sampler) -> Result<std::result::Result<(), String>> {
    let z = s.domain_point(space);
    let y = s.nc_element(space)?.act(&z);
    let w = s.nc_element(space)?.act(&y);
    let refl = equivalent(space, &z, &z)?;
    if !refl.equivalent || refl.exactness != crate::orbit::Exactness::Exact {
        return Ok(Err("z is not exactly equivalent to itself".into()));
    }
    let zy = equivalent(space, &z, &y)?.equivalent;
    let yz = equivalent(space, &y, &z)?.equivalent;
    let yw = equivalent(space, &y, &w)?.equivalent;
    let zw = equivalent(space, &z, &w)?.equivalent;
    if zy != yz {
        return Ok(Err("symmetry fails".into()));
    }
    if !(zy && yw && zw) {
        return Ok(Err(format!("N_C-related points judged inequivalent: {zy} {yw} {zw}")));
    }
    Ok(Ok(()))
}

fn equivalence_relation(space: &ToricSpace, s: &mut Sampler, n: usize) -> PropertyResult {
    let mut r = PropertyResult::new("equivalence_relation");
    for _ in 0..n {
        r.check(check_equivalence_triple(space, s));
    }
    r
}

fn face_lattice(space: &ToricSpace, _: &mut Sampler, _: usize) -> PropertyResult {
    let mut r = PropertyResult::new("face_lattice");
    let lat = &space.faces;
    let n = space.polytope.n();
    let euler: i64 = lat.faces().iter().map(|f| if f.dim % 2 == 0 { 1 } else { -1 }).sum();
    r.record(euler == 1, || format!("alternating face count is {euler}"));
    for f in lat.faces() {
        r.record(f.regular == (f.r_f == n - f.dim), || format!("face {} misclassified", f.index_set));
        r.record(f.regular == (f.depth == 0), || format!("face {} has depth {}", f.index_set, f.depth));
    }
    for v in space.polytope.vertices() {
        r.record(v.tight.len() >= n, || format!("vertex with only {} tight facets", v.tight.len()));
    }
    r
}

fn gradient_hessian(space: &ToricSpace, s: &mut Sampler, n: usize) -> PropertyResult {
    let mut r = PropertyResult::new("gradient_hessian");
    for _ in 0..n {
        let z = s.closed_point(space);
        let v: Vec<f64> = (0..space.moment.kernel_dim()).map(|_| s.uniform(-0.5, 0.5)).collect();
        r.check(check_gradient_hessian(space, &z.z, &v));
    }
    r
}

/// Analytic gradient and Hessian of F_z against central differences at a point of 𝔯, and
/// positivity of the smallest Hessian eigenvalue. Uses the leading coordinates of `v`.
pub fn check_gradient_hessian(space: &ToricSpace, z: &[Complex64], v: &[f64]) -> Result<std::result::Result<(), String>> {
    let prob = space.moment.problem(z)?;
    let k = prob.dim();
    if k == 0 {
        return Ok(Ok(()));
    }
    let v = DVector::from_column_slice(&v[..k]);
    let g = prob.gradient(&v);
    let h = prob.hessian(&v);
    let step = 1e-5;
    let mut fd = DVector::zeros(k);
    let mut fdh = DMatrix::zeros(k, k);
    for i in 0..k {
        let mut e = DVector::zeros(k);
        e[i] = step;
        fd[i] = (prob.value(&(&v + &e)) - prob.value(&(&v - &e))) / (2.0 * step);
        let col = (prob.gradient(&(&v + &e)) - prob.gradient(&(&v - &e))) / (2.0 * step);
        fdh.set_column(i, &col);
    }
    let gerr = (&g - &fd).norm() / g.norm().max(1.0);
    let herr = (&h - &fdh).norm() / h.norm().max(1.0);
    let min_eig = h.clone().symmetric_eigenvalues().min();
    if gerr > GRADIENT_TOLERANCE || herr > GRADIENT_TOLERANCE {
        return Ok(Err(format!("finite-difference mismatch: gradient {gerr:e}, Hessian {herr:e}")));
    }
    if min_eig <= 0.0 {
        return Ok(Err(format!("smallest Hessian eigenvalue {min_eig:e}")));
    }
    Ok(Ok(()))
}

/// Checks links, kernel splits, face correspondences and the strata poset of a report.
pub fn check_report(space: &ToricSpace, report: &StratificationReport) -> Vec<std::result::Result<(), String>> {
    let mut out = Vec::new();
    let lat = &space.faces;
    let n = space.polytope.n();
    for s in report.singular_strata() {
        let StratumLabel::Singular(fid) = s.label else { continue };
        let f = lat.face(fid);
        let link = match &s.link {
            Some(l) => l,
            None => {
                out.push(Err(format!("stratum {} lacks a link", s.index_set)));
                continue;
            }
        };
        out.push(if s.complex_dim == f.dim { Ok(()) } else { Err("stratum dimension differs from p".into()) });
        out.push(match kernel_split_holds(link) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("kernel split fails at {}", s.index_set)),
            Err(e) => Err(e.to_string()),
        });
        out.push(link_face_correspondence(lat, link).map(|_| ()).map_err(|e| e.to_string()));
        out.push(if link.n_f_dim + n == f.r_f + f.dim && link.delta_f.n() + 1 + f.dim == n {
            Ok(())
        } else {
            Err(format!("dimension counts fail at {}", s.index_set))
        });
        out.push(if link.report.depth < report.depth { Ok(()) } else { Err("link depth did not drop".into()) });
    }
    // every stratum reaches the maximal piece through the edges, and edges follow face order
    let m = report.strata.len();
    let mut reach = vec![false; m];
    reach[0] = true;
    for _ in 0..m {
        for &(a, b) in &report.edges {
            if reach[b] {
                reach[a] = true;
            }
        }
    }
    out.push(if reach.iter().all(|&x| x) { Ok(()) } else { Err("poset has several maximal elements".into()) });
    for &(a, b) in &report.edges {
        let ok = b == 0 || report.strata[b].index_set.is_subset(report.strata[a].index_set);
        out.push(if ok { Ok(()) } else { Err(format!("edge {a} -> {b} reverses face order")) });
    }
    out
}

fn link_structure(space: &ToricSpace, _: &mut Sampler, _: usize) -> PropertyResult {
    let mut r = PropertyResult::new("link_structure");
    match build_stratification(&space.polytope, &space.faces) {
        Ok(report) => {
            for c in check_report(space, &report) {
                r.check(Ok(c));
            }
        }
        Err(e) => r.record(false, || e.to_string()),
    }
    r
}

/// Relative change of P_{ξ,η} under one N_C element.
pub fn p_relative_change(
    space: &ToricSpace,
    xi: &[Scalar],
    eta: &[Scalar],
    w: &OrbitPoint,
    g: &NcElement,
) -> Result<Option<f64>> {
    let pf = p_function(space, xi, eta)?;
    let gw = g.act(w);
    match (pf.log_eval(&w.z)?, pf.log_eval(&gw.z)?) {
        (Some(a), Some(b)) => Ok(Some((b - a).exp_m1().abs())),
        (None, None) => Ok(Some(0.0)),
        _ => Ok(None),
    }
}

fn p_invariance(space: &ToricSpace, s: &mut Sampler, n: usize) -> PropertyResult {
    let mut r = PropertyResult::new("p_invariance");
    let per_pair = n.clamp(1, 100);
    for _ in 0..n {
        let xi = s.polytope_point(space);
        let eta = s.polytope_point(space);
        let domain = match p_function(space, &xi, &eta) {
            Ok(pf) => space.faces.face(pf.domain_face).index_set,
            Err(e) => {
                r.record(false, || e.to_string());
                continue;
            }
        };
        let zeros = FacetSet::from_indices(domain.indices().into_iter().filter(|_| s.rng().random_bool(0.3)));
        let w = s.point_with_zeros(space, zeros);
        for _ in 0..per_pair {
            let outcome = s.nc_element(space).and_then(|g| p_relative_change(space, &xi, &eta, &w, &g));
            r.check(outcome.map(|c| match c {
                Some(c) if c <= P_TOLERANCE => Ok(()),
                Some(c) => Err(format!("relative change {c:e}")),
                None => Err("P vanishes on one side only".into()),
            }));
        }
    }
    r
}

/// Whether the instance is a rational polytope with Q the standard lattice and integer normals.
pub fn is_classical(p: &Polytope) -> bool {
    let field = p.field();
    if !field.is_rational() {
        return false;
    }
    let q = p.quasilattice();
    let integral = |v: &Vec<Scalar>| v.iter().all(|x| x.as_rational().is_some_and(|r| r.is_integer()));
    q.is_lattice()
        && q.generators().iter().all(integral)
        && (0..p.n()).all(|i| q.contains(&crate::linalg::unit(field, p.n(), i)))
        && p.normals().iter().all(integral)
}

fn integer_matrix(rows: &[&Vec<Scalar>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|x| x.as_rational().expect("rational").to_integer()).collect()).collect()
}

fn rational_recovery(space: &ToricSpace, s: &mut Sampler, _: usize) -> PropertyResult {
    let name = "rational_recovery";
    let p = &space.polytope;
    if !is_classical(p) || space.faces.singular_faces().next().is_some() {
        return PropertyResult::skip(name, "instance is not a rational simple polytope with the standard lattice");
    }
    let mut r = PropertyResult::new(name);
    match chart_index_sets(p, &space.faces) {
        Ok(charts) => {
            for c in charts {
                let rows: Vec<&Vec<Scalar>> = c.indices().iter().map(|&j| &p.normals()[j]).collect();
                let det = intmat::det(&integer_matrix(&rows)).abs();
                r.check(gamma_group(p, c).map(|g| {
                    if g.order == GroupOrder::Finite(det.clone()) {
                        Ok(())
                    } else {
                        Err(format!("chart {c}: |Γ| = {} but |det| = {det}", g.order))
                    }
                }));
            }
        }
        Err(e) => r.record(false, || e.to_string()),
    }
    r.check(check_face_orbit_correspondence(space, s));
    r
}

/// Faces ↔ closed orbits: the orbit with zero set I_F is closed over F, its moment image lies in
/// the relative interior of F, orbits of distinct faces are inequivalent, and closures follow
/// the face order.
pub fn check_face_orbit_correspondence(space: &ToricSpace, s: &mut Sampler) -> Result<std::result::Result<(), String>> {
    let p = &space.polytope;
    let faces = space.faces.faces();
    let points: Vec<OrbitPoint> = faces.iter().map(|f| s.point_with_zeros(space, f.index_set)).collect();
    for (f, z) in faces.iter().zip(&points) {
        let c = classify_orbit(space, z)?;
        if !c.closed || c.face != f.id {
            return Ok(Err(format!("orbit over {} classified to face {}", f.index_set, c.face)));
        }
        for (j, x) in p.normals().iter().enumerate() {
            let slack: f64 = x.iter().zip(&c.retracted.xi).map(|(a, b)| a.to_f64() * b).sum::<f64>() - p.offsets()[j].to_f64();
            if (slack.abs() < 1e-7) != f.index_set.contains(j) {
                return Ok(Err(format!("moment image of the orbit over {} has slack {slack:e} on facet {j}", f.index_set)));
            }
        }
    }
    for (a, za) in faces.iter().zip(&points) {
        for (b, zb) in faces.iter().zip(&points) {
            if a.id < b.id && equivalent(space, za, zb)?.equivalent {
                return Ok(Err(format!("orbits over {} and {} are identified", a.index_set, b.index_set)));
            }
        }
    }
    for &(lo, hi) in space.faces.covers() {
        // shrinking the coordinates in I_lo \ I_hi moves the orbit over hi towards the one over lo
        let (l, h) = (faces[lo].index_set, faces[hi].index_set);
        let mut z = points[hi].clone();
        for j in l.difference(h).indices() {
            z.z[j] *= 1e-3;
        }
        let near = classify_orbit(space, &OrbitPoint::from_complex(z.z.clone()))?;
        for j in l.difference(h).indices() {
            z.z[j] = Complex64::new(0.0, 0.0);
        }
        let limit = classify_orbit(space, &OrbitPoint::from_complex(z.z))?;
        if near.face != hi || limit.face != lo {
            return Ok(Err(format!("closure order fails between {l} and {h}")));
        }
    }
    Ok(Ok(()))
}

/// Retractions from several starting points and of several A-translates agree.
pub fn check_retraction_orbit(space: &ToricSpace, s: &mut Sampler, starts: usize, translates: usize) -> Result<std::result::Result<(), String>> {
    let cfg = SolverConfig { tolerance: 1e-12, ..space.config };
    let z = s.closed_point(space);
    let base = space.moment.retract(&z.z, &cfg)?;
    for _ in 0..starts {
        let y: Vec<f64> = (0..space.polytope.d()).map(|_| s.uniform(-1.0, 1.0)).collect();
        let other = space.moment.retract_from(&z.z, &cfg, Some(&y))?;
        let dist = max_dist(&base.x, &other.x);
        if dist > RETRACTION_AGREEMENT {
            return Ok(Err(format!("starting point changes x by {dist:e}")));
        }
    }
    for _ in 0..translates {
        let w = s.a_element(space).act(&z);
        let other = space.moment.retract(&w.z, &cfg)?;
        let dist = max_dist(&base.x, &other.x);
        if dist > RETRACTION_AGREEMENT {
            return Ok(Err(format!("A-translate changes x by {dist:e}")));
        }
    }
    Ok(Ok(()))
}

fn retraction_invariance(space: &ToricSpace, s: &mut Sampler, n: usize) -> PropertyResult {
    let mut r = PropertyResult::new("retraction_invariance");
    for _ in 0..n {
        r.check(check_retraction_orbit(space, s, 3, 10));
    }
    r
}

fn serialization_round_trip(space: &ToricSpace, _: &mut Sampler, _: usize) -> PropertyResult {
    let mut r = PropertyResult::new("serialization_round_trip");
    let v = io::polytope_json(&space.polytope);
    let text = serde_json::to_string(&v).expect("JSON values serialize");
    let back = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string())).and_then(|v: Value| io::polytope_from_json(&v));
    r.check(back.map(|b| {
        let same = b.normals() == space.polytope.normals()
            && b.offsets() == space.polytope.offsets()
            && b.quasilattice().generators() == space.polytope.quasilattice().generators()
            && io::polytope_json(&b) == v;
        if same { Ok(()) } else { Err("polytope changed in a JSON round trip".into()) }
    }));
    let faces = io::faces_json(&space.polytope, &space.faces);
    r.record(faces == io::faces_json(&space.polytope, &space.faces), || "face export is not deterministic".into());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn pyramid_suites_pass_and_repeat() {
        let inst = ProblemInstance::new("pyramid", instances::pyramid());
        let a = run(&inst, 10).unwrap();
        for p in &a.properties {
            assert!(p.passed(), "{}: {:?}", p.name, p.witnesses);
        }
        let b = run(&inst, 10).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let names: Vec<&str> = a.properties.iter().map(|p| p.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn rational_square_recovers_classical_data() {
        let inst = ProblemInstance::new("square", instances::square());
        let run = run(&inst, 5).unwrap();
        let rec = run.properties.iter().find(|p| p.name == "rational_recovery").unwrap();
        assert!(rec.skipped.is_none());
        assert!(run.passed(), "{:?}", run.to_json());
    }

    #[test]
    fn nonrational_instances_pass() {
        for (name, p) in [("interval_sqrt2", instances::interval_sqrt2()), ("pyramid_sqrt2", instances::pyramid_sqrt2())] {
            let run = run(&ProblemInstance::new(name, p), 5).unwrap();
            assert!(run.passed(), "{name}: {}", run.to_json());
        }
    }
}
