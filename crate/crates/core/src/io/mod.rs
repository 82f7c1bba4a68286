//! JSON and DOT serialization, problem instances and command reports.

mod dot;
mod json;

pub use dot::{faces_dot, strata_dot};
pub use json::{
    analyze_report, equivalence_json, error_json, faces_json, field_from_json, field_json, gamma_table,
    group_json, local_model_json, orbit_class_json, parse_points, polytope_from_json, polytope_json,
    retraction_json, scalar_from_json, scalar_json, strata_json,
};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instances;
use crate::moment::SolverConfig;
use crate::polytope::Polytope;

/// A polytope together with solver settings and a sampling seed.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub name: String,
    pub polytope: Polytope,
    pub solver: SolverConfig,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 2024;

impl ProblemInstance {
    pub fn new(name: impl Into<String>, polytope: Polytope) -> Self {
        ProblemInstance { name: name.into(), polytope, solver: SolverConfig::default(), seed: DEFAULT_SEED }
    }

    pub fn builtin(name: &str) -> Result<Self> {
        instances::by_name(name)
            .map(|p| Self::new(name, p))
            .ok_or_else(|| Error::Parse(format!("unknown instance '{name}' (known: {})", instances::NAMES.join(", "))))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let polytope = polytope_from_json(v)?;
        let name = v.get("name").and_then(Value::as_str).unwrap_or("instance").to_string();
        let solver = match v.get("solver") {
            Some(s) => serde_json::from_value(s.clone()).map_err(|e| Error::Parse(format!("solver: {e}")))?,
            None => SolverConfig::default(),
        };
        solver.validate()?;
        let seed = match v.get("seed") {
            Some(s) => s.as_u64().ok_or_else(|| Error::Parse("seed must be a nonnegative integer".into()))?,
            None => DEFAULT_SEED,
        };
        Ok(ProblemInstance { name, polytope, solver, seed })
    }

    pub fn from_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let mut v = polytope_json(&self.polytope);
        let obj = v.as_object_mut().expect("polytope JSON is an object");
        obj.insert("name".into(), json!(self.name));
        obj.insert("solver".into(), serde_json::to_value(self.solver).expect("solver config serializes"));
        obj.insert("seed".into(), json!(self.seed));
        v
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
