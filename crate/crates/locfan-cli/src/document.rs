//! Machine-readable fan output and its human-readable summary.

use std::collections::BTreeMap;

use locfan_core::polyhedra::{validate_fan, Fan, HCone};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT: &str = "locfan-fan-1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeEntry {
    pub id: usize,
    pub dim: usize,
    /// Inward facet normals in the cone's span (primitive, sorted).
    pub facets: Vec<Vec<i64>>,
    /// Basis of the equations cutting out the span.
    pub equations: Vec<Vec<i64>>,
    pub rays: Vec<Vec<i64>>,
    /// Relative-interior point, rationals as "p/q" strings.
    pub witness: Vec<String>,
    pub initial_ideal: Vec<String>,
    /// Class of a maximal cone; faces carry none.
    pub class: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub id: usize,
    /// Witnesses of the enumerated Gröbner cones glued into this class.
    pub member_witnesses: Vec<Vec<String>>,
    pub standard_basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub format: String,
    pub mode: String,
    pub ring: String,
    pub homogenization: String,
    pub region: String,
    pub ambient_dim: usize,
    pub parameter_dim: usize,
    /// Images of the parameter basis vectors.
    pub subspace: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
    pub cones: Vec<ConeEntry>,
    pub classes: Vec<ClassEntry>,
    /// (face id, cone id) for every facet relation.
    pub incidence: Vec<(usize, usize)>,
    pub provenance: Provenance,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("integer {0} does not fit in 64 bits")]
    Overflow(BigInt),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cone {id}: {msg}")]
    Inconsistent { id: usize, msg: String },
    #[error("fan violation: {0}")]
    Violation(String),
}

pub fn to_i64_rows(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>, DocumentError> {
    rows.iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).map_err(|_| DocumentError::Overflow(x.clone()))).collect())
        .collect()
}

fn to_big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Order key: dimension descending, then facets, then equations.
pub fn cone_order(a: &ConeEntry, b: &ConeEntry) -> std::cmp::Ordering {
    b.dim.cmp(&a.dim).then_with(|| a.facets.cmp(&b.facets)).then_with(|| a.equations.cmp(&b.equations))
}

impl FanDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<FanDocument, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn maximal_count(&self) -> usize {
        let top = self.cones.iter().map(|c| c.dim).max().unwrap_or(0);
        self.cones.iter().filter(|c| c.class.is_some() || (self.classes.is_empty() && c.dim == top)).count()
    }

    pub fn count_by_dim(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for c in &self.cones {
            *m.entry(c.dim).or_insert(0) += 1;
        }
        m
    }

    /// Number of one-dimensional cones modulo lineality.
    pub fn ray_count(&self) -> usize {
        let l = self.lineality.len();
        self.cones.iter().filter(|c| c.dim == l + 1).count()
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mode: {}\n", self.mode));
        out.push_str(&format!("ring: {}; homogenization: {}; region: {}\n", self.ring, self.homogenization, self.region));
        out.push_str(&format!("maximal cones: {}; rays: {}\n", self.maximal_count(), self.ray_count()));
        let dims: Vec<String> = self.count_by_dim().iter().rev().map(|(d, k)| format!("{d}:{k}")).collect();
        out.push_str(&format!("cones by dimension: {}\n", dims.join(" ")));
        if !self.lineality.is_empty() {
            out.push_str(&format!("lineality dimension: {}\n", self.lineality.len()));
        }
        for c in &self.classes {
            if c.member_witnesses.len() > 1 {
                out.push_str(&format!("class {}: {} cones glued\n", c.id, c.member_witnesses.len()));
            }
        }
        out
    }

    /// Rebuild the cones, check each entry against its rays, and validate the fan.
    pub fn check(&self) -> Result<(), DocumentError> {
        let d = self.parameter_dim;
        let lin = to_big_rows(&self.lineality);
        let mut cones = Vec::with_capacity(self.cones.len());
        for (pos, e) in self.cones.iter().enumerate() {
            let bad = |msg: &str| DocumentError::Inconsistent { id: e.id, msg: msg.into() };
            if e.id != pos {
                return Err(bad("ids must be consecutive"));
            }
            let from_h = HCone::new(d, to_big_rows(&e.facets), to_big_rows(&e.equations));
            let from_v = HCone::from_rays(d, &to_big_rows(&e.rays), &lin);
            if from_h != from_v {
                return Err(bad("facets and rays describe different cones"));
            }
            if from_h.dim() != e.dim {
                return Err(bad("wrong dimension"));
            }
            if to_i64_rows(from_h.facets())? != e.facets || to_i64_rows(from_h.equations())? != e.equations {
                return Err(bad("constraints are not in canonical form"));
            }
            cones.push(from_h);
        }
        if self.cones.windows(2).any(|w| cone_order(&w[0], &w[1]) != std::cmp::Ordering::Less) {
            return Err(DocumentError::Violation("cones are not in canonical order".into()));
        }
        validate_fan(&Fan::new(d, cones)).map_err(|v| DocumentError::Violation(v.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(id: usize, dim: usize, facets: Vec<Vec<i64>>, equations: Vec<Vec<i64>>, rays: Vec<Vec<i64>>) -> ConeEntry {
        ConeEntry { id, dim, facets, equations, rays, witness: vec![], initial_ideal: vec![], class: None }
    }

    fn halfline() -> FanDocument {
        FanDocument {
            format: FORMAT.into(),
            mode: "global-fan".into(),
            ring: "poly(n=1, none)".into(),
            homogenization: "alpha(1)".into(),
            region: "local".into(),
            ambient_dim: 1,
            parameter_dim: 1,
            subspace: vec![vec![1]],
            lineality: vec![],
            cones: vec![cone(0, 1, vec![vec![-1]], vec![], vec![vec![-1]]), cone(1, 0, vec![], vec![vec![1]], vec![])],
            classes: vec![],
            incidence: vec![(1, 0)],
            provenance: Provenance { input_sha256: "0".into(), tool_version: "test".into() },
        }
    }

    #[test]
    fn round_trip_and_check() {
        let d = halfline();
        d.check().unwrap();
        let j = d.to_json();
        let back = FanDocument::from_json(&j).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), j);
        assert!(d.summary().contains("maximal cones: 1; rays: 1"));
    }

    #[test]
    fn check_rejects_missing_face_and_bad_rays() {
        let mut d = halfline();
        d.cones.pop();
        assert!(matches!(d.check(), Err(DocumentError::Violation(_))));
        let mut d = halfline();
        d.cones[0].rays = vec![vec![1]];
        assert!(matches!(d.check(), Err(DocumentError::Inconsistent { .. })));
        assert!(FanDocument::from_json("{").is_err());
    }
}
