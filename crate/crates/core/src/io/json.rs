use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{chart_index_sets, gamma_group, GroupPresentation, Quasilattice};
use crate::moment::RetractionResult;
use crate::orbit::{Equivalence, OrbitClass, StratumLabel};
use crate::polytope::{FaceLattice, FacetSet, Polytope};
use crate::scalars::{parse_rational, NumberField, Scalar};
use crate::space::ToricSpace;
use crate::strata::{LinkData, LocalModel, StratificationReport};

/// A rational scalar as "p/q"; otherwise its coordinate array in powers of the generator.
pub fn scalar_json(s: &Scalar) -> Value {
    match s.as_rational() {
        Some(r) => json!(r.to_string()),
        None => json!(s.to_strings()),
    }
}

pub fn scalar_from_json(field: &Arc<NumberField>, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(Scalar::from_rational(field, parse_rational(s)?)),
        Value::Number(n) => Ok(Scalar::from_rational(field, parse_rational(&n.to_string())?)),
        Value::Array(parts) => {
            let strs = parts.iter().map(number_text).collect::<Result<Vec<_>>>()?;
            Scalar::from_strings(field, &strs)
        }
        _ => Err(Error::Parse(format!("expected a scalar, got {v}"))),
    }
}

fn number_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::Parse(format!("expected a number or string, got {v}"))),
    }
}

fn vec_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

fn mat_json(m: &[Vec<Scalar>]) -> Value {
    Value::Array(m.iter().map(|r| vec_json(r)).collect())
}

fn vec_from_json(field: &Arc<NumberField>, v: &Value, what: &str) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))?
        .iter()
        .map(|x| scalar_from_json(field, x))
        .collect()
}

fn mat_from_json(field: &Arc<NumberField>, v: &Value, what: &str) -> Result<Vec<Vec<Scalar>>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array of arrays")))?
        .iter()
        .map(|r| vec_from_json(field, r, what))
        .collect()
}

fn set_json(s: FacetSet) -> Value {
    json!(s.indices())
}

fn floats(v: &[f64]) -> Value {
    json!(v)
}

fn complex_json(z: &[Complex64]) -> Value {
    Value::Array(z.iter().map(|c| json!([c.re, c.im])).collect())
}

pub fn field_json(f: &NumberField) -> Value {
    let (lo, hi) = f.root_interval();
    json!({
        "minpoly": f.minpoly().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "root_interval": [lo.to_string(), hi.to_string()],
    })
}

/// Accepts null, "Q", or {"minpoly": [...], "root_interval": [lo, hi]}; a degree-one minimal
/// polynomial also gives Q.
pub fn field_from_json(v: Option<&Value>) -> Result<Arc<NumberField>> {
    let v = match v {
        None | Some(Value::Null) => return Ok(NumberField::rationals()),
        Some(Value::String(s)) if s == "Q" => return Ok(NumberField::rationals()),
        Some(v) => v,
    };
    let minpoly: Vec<BigInt> = v
        .get("minpoly")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("field needs a minpoly array".into()))?
        .iter()
        .map(|c| {
            number_text(c)?.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("minpoly coefficient: {e}")))
        })
        .collect::<Result<_>>()?;
    let iv = v
        .get("root_interval")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse("field needs a two-element root_interval".into()))?;
    let lo: BigRational = parse_rational(&number_text(&iv[0])?)?;
    let hi: BigRational = parse_rational(&number_text(&iv[1])?)?;
    if minpoly.len() == 2 {
        return Ok(NumberField::rationals());
    }
    NumberField::new(minpoly, (lo, hi))
}

pub fn polytope_json(p: &Polytope) -> Value {
    json!({
        "field": field_json(p.field()),
        "n": p.n(),
        "normals": mat_json(p.normals()),
        "offsets": vec_json(p.offsets()),
        "quasilattice": mat_json(p.quasilattice().generators()),
    })
}

pub fn polytope_from_json(v: &Value) -> Result<Polytope> {
    let field = field_from_json(v.get("field"))?;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("polytope needs an integer n".into()))?
        as usize;
    let normals = mat_from_json(&field, v.get("normals").unwrap_or(&Value::Null), "normals")?;
    let offsets = vec_from_json(&field, v.get("offsets").unwrap_or(&Value::Null), "offsets")?;
    let q = match v.get("quasilattice") {
        None | Some(Value::Null) => None,
        Some(g) => Some(Quasilattice::new(&field, n, mat_from_json(&field, g, "quasilattice")?)?),
    };
    Polytope::new(&field, n, normals, offsets, q)
}

/// Faces keyed by their index set, with covers and vertices.
pub fn faces_json(p: &Polytope, lat: &FaceLattice) -> Value {
    let mut faces = Map::new();
    for f in lat.faces() {
        faces.insert(
            f.index_set.to_string(),
            json!({
                "id": f.id,
                "index_set": set_json(f.index_set),
                "dim": f.dim,
                "r_f": f.r_f,
                "regular": f.regular,
                "depth": f.depth,
                "vertices": f.vertices,
            }),
        );
    }
    let vertices: Vec<Value> = p
        .vertices()
        .iter()
        .map(|v| json!({"coords": vec_json(&v.coords), "tight": set_json(v.tight)}))
        .collect();
    let covers: Vec<Value> = lat
        .covers()
        .iter()
        .map(|&(a, b)| json!([lat.face(a).index_set.to_string(), lat.face(b).index_set.to_string()]))
        .collect();
    json!({
        "n": lat.n(),
        "d": lat.d(),
        "depth": lat.polytope_depth(),
        "faces": faces,
        "covers": covers,
        "vertices": vertices,
    })
}

pub fn group_json(g: &GroupPresentation) -> Value {
    json!({
        "chart": set_json(g.chart),
        "coordinates": set_json(g.coordinates),
        "finite": g.finite,
        "order": g.order.to_string(),
        "invariant_factors": g.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "generator_images": mat_json(&g.generator_images),
    })
}

/// Γ_I for every chart I.
pub fn gamma_table(p: &Polytope, lat: &FaceLattice) -> Result<Value> {
    let charts = chart_index_sets(p, lat)?;
    let rows = charts.iter().map(|&c| gamma_group(p, c).map(|g| group_json(&g))).collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(rows))
}

pub fn analyze_report(name: &str, p: &Polytope, lat: &FaceLattice) -> Result<Value> {
    let singular = lat.singular_faces().count();
    let q = p.quasilattice();
    Ok(json!({
        "name": name,
        "field": field_json(p.field()),
        "n": p.n(),
        "d": p.d(),
        "faces": lat.faces().len(),
        "vertices": p.vertices().len(),
        "regular_faces": lat.faces().len() - singular,
        "singular_faces": singular,
        "simple": singular == 0,
        "depth": lat.polytope_depth(),
        "quasilattice_rank": q.z_rank(),
        "is_lattice": q.is_lattice(),
        "gamma": gamma_table(p, lat)?,
    }))
}

fn link_json(link: &LinkData, n: usize) -> Value {
    let stated = 2 * (n - link.face_dim) + 1;
    json!({
        "index_set": set_json(link.index_set),
        "d_f_basis": link.d_f_basis,
        "q_f": mat_json(link.q_f.generators()),
        "sigma_f": {"normals": mat_json(&link.sigma_normals), "offsets": vec_json(&link.sigma_offsets)},
        "s_coefficients": vec_json(&link.s_coefficients),
        "x0": vec_json(&link.x0),
        "slice_level": scalar_json(&link.slice_level),
        "xi0": vec_json(&link.xi0),
        "ann_basis": mat_json(&link.ann_basis),
        "delta_f": polytope_json(&link.delta_f),
        "n_f_dim": link.n_f_dim,
        "n_f0_dim": link.n_f0_dim,
        "link_real_dim": link.link_real_dim,
        "link_real_dim_alternative": stated,
        "link_dim_note": format!(
            "computed 2(n-p)-1 = {} from dim Delta_F plus one circle; the alternative count 2n-2p+1 = {stated} is not adopted",
            link.link_real_dim
        ),
        "report": strata_json(&link.report),
    })
}

pub fn strata_json(r: &StratificationReport) -> Value {
    let strata: Vec<Value> = r
        .strata
        .iter()
        .map(|s| {
            let mut o = json!({
                "label": serde_json::to_value(s.label).expect("labels serialize"),
                "index_set": set_json(s.index_set),
                "complex_dim": s.complex_dim,
                "depth": s.depth,
                "faces": s.faces,
            });
            let obj = o.as_object_mut().expect("object");
            if let Some(c) = &s.chart {
                obj.insert(
                    "chart".into(),
                    json!({
                        "index_set": set_json(c.chart),
                        "base_coordinates": set_json(c.base_coordinates),
                        "model": format!("(C*)^{} / Gamma_check", c.base_coordinates),
                        "group": group_json(&c.group),
                    }),
                );
            }
            if let Some(l) = &s.link {
                obj.insert("link".into(), link_json(l, r.n));
            }
            if s.label == StratumLabel::Maximal {
                obj.insert("description".into(), json!("union of the orbits of the regular faces"));
            }
            o
        })
        .collect();
    json!({
        "n": r.n,
        "d": r.d,
        "depth": r.depth,
        "strata": strata,
        "edges": r.edges.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
    })
}

pub fn local_model_json(m: &LocalModel) -> Value {
    json!({
        "face": m.face,
        "base_dim": m.base_dim,
        "base_coordinates": set_json(m.base_coordinates),
        "group": group_json(&m.group),
        "cone_coordinates": set_json(m.cone_coordinates),
        "n_f_dim": m.n_f_dim,
        "n_f0_dim": m.n_f0_dim,
        "link_facets": m.link_facets,
        "link_real_dim": m.link_real_dim,
        "chart": set_json(m.chart),
        "a": mat_json(&m.a),
        "inequalities": m.inequalities.iter().map(|q| json!({
            "facet": q.facet,
            "coefficients": q.coefficients.iter().map(|(h, c)| json!([h, scalar_json(c)])).collect::<Vec<_>>(),
            "constant": scalar_json(&q.constant),
        })).collect::<Vec<_>>(),
    })
}

pub fn retraction_json(r: &RetractionResult, tolerance: f64) -> Value {
    json!({
        "x": complex_json(&r.x),
        "xi": floats(&r.xi),
        "y_star": floats(&r.y_star),
        "residual": r.residual,
        "iterations": r.iterations,
        "tolerance": tolerance,
    })
}

pub fn orbit_class_json(space: &ToricSpace, c: &OrbitClass) -> Value {
    let tolerance = space.config.tolerance;
    json!({
        "input": complex_json(&c.input.z),
        "zeros": set_json(c.zeros),
        "closed": c.closed,
        "face": c.face,
        "face_index_set": set_json(space.faces.face(c.face).index_set),
        "closed_rep": complex_json(&c.closed_rep.z),
        "retraction": retraction_json(&c.retracted, tolerance),
        "exactness": serde_json::to_value(c.exactness).expect("exactness serializes"),
    })
}

pub fn equivalence_json(space: &ToricSpace, e: &Equivalence) -> Value {
    json!({
        "equivalent": e.equivalent,
        "exactness": serde_json::to_value(e.exactness).expect("exactness serializes"),
        "reason": e.reason,
        "left": orbit_class_json(space, &e.left),
        "right": orbit_class_json(space, &e.right),
    })
}

pub fn error_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}

/// Comma-separated complex numbers such as "1,1" or "0.5+2i,-1i,0".
pub fn parse_points(text: &str) -> Result<Vec<Complex64>> {
    text.split(',')
        .map(|t| {
            let t: String = t.chars().filter(|c| !c.is_whitespace()).collect();
            t.parse::<Complex64>().map_err(|_| Error::Parse(format!("'{t}' is not a complex number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::polytope::enumerate_faces;
    use crate::strata::build_stratification;

    fn same(a: &Polytope, b: &Polytope) -> bool {
        a.n() == b.n()
            && a.normals() == b.normals()
            && a.offsets() == b.offsets()
            && a.quasilattice().generators() == b.quasilattice().generators()
            && *a.field() == *b.field()
    }

    #[test]
    fn polytope_round_trip() {
        for name in instances::NAMES {
            let p = instances::by_name(name).unwrap();
            let v = polytope_json(&p);
            let text = serde_json::to_string(&v).unwrap();
            let back = polytope_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert!(same(&p, &back), "{name}");
            assert_eq!(polytope_json(&back), v);
        }
    }

    #[test]
    fn scalar_forms() {
        let f = instances::sqrt2_field();
        let s = scalar_from_json(&f, &json!(["1/2", "-3"])).unwrap();
        assert_eq!(scalar_json(&s), json!(["1/2", "-3"]));
        let r = scalar_from_json(&f, &json!("0.25")).unwrap();
        assert_eq!(scalar_json(&r), json!("1/4"));
        assert_eq!(scalar_json(&scalar_from_json(&f, &json!(3)).unwrap()), json!("3"));
        assert!(scalar_from_json(&f, &json!(true)).is_err());
    }

    #[test]
    fn analyze_examples() {
        let p = instances::pyramid();
        let lat = enumerate_faces(&p).unwrap();
        let a = analyze_report("pyramid", &p, &lat).unwrap();
        assert_eq!(a["singular_faces"], 1);
        assert_eq!(a["depth"], 1);
        let p = instances::interval_sqrt2();
        let lat = enumerate_faces(&p).unwrap();
        let a = analyze_report("i", &p, &lat).unwrap();
        assert_eq!(a["quasilattice_rank"], 2);
        assert_eq!(a["is_lattice"], false);
        let p = instances::triangle();
        let lat = enumerate_faces(&p).unwrap();
        let a = analyze_report("t", &p, &lat).unwrap();
        for g in a["gamma"].as_array().unwrap() {
            assert_eq!(g["order"], "1");
        }
    }

    #[test]
    fn link_polytope_feeds_back() {
        let p = instances::pyramid_over_pyramid();
        let lat = enumerate_faces(&p).unwrap();
        let r = build_stratification(&p, &lat).unwrap();
        let v = strata_json(&r);
        let link = &v["strata"][1]["link"];
        let q = polytope_from_json(&link["delta_f"]).unwrap();
        assert_eq!(q.n(), link["delta_f"]["n"].as_u64().unwrap() as usize);
        assert!(v["strata"].as_array().unwrap().iter().any(|s| s["link"]["report"]["strata"]
            .as_array()
            .is_some_and(|a| a.iter().any(|t| t.get("link").is_some()))));
    }

    #[test]
    fn parse_and_errors() {
        let z = parse_points("1, 0.5+2i,-1i").unwrap();
        assert_eq!(z, vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 2.0), Complex64::new(0.0, -1.0)]);
        assert!(parse_points("1,x").is_err());
        let bad = json!({"n": 1, "normals": [["1"], ["-1"]], "offsets": ["0", "1"]});
        let e = polytope_from_json(&bad).unwrap_err();
        assert_eq!(error_json(&e)["error"]["kind"], "validation");
        let f = field_from_json(Some(&json!({"minpoly": ["-2", "0", "1"], "root_interval": ["1", "2"]}))).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(field_from_json(Some(&field_json(&f))).unwrap().minpoly(), f.minpoly());
    }
}
