//! JSON manifold description files.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "parameters": ["a", "b"],
//!   "structure_constants": [{"i": 0, "j": 1, "k": 1, "value": "-b"}],
//!   "phi": [["0","0","0"], ["0","0","-1"], ["0","1","0"]],
//!   "xi": ["1","0","0"],
//!   "eta": ["1","0","0"],
//!   "g": [["1","0","0"], ["0","1","0"], ["0","0","-1"]]
//! }
//! ```
//!
//! `structure_constants` lists `C^k_{ij}` for `i < j`; omitted entries are
//! zero. `g` holds rationals, everything else polynomials in the parameters.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lie::LieAlgebra;
use crate::scalar::{fmt_rational, parse_rational, parse_scalar, Scalar, Vars};
use crate::structure::{AcbmManifold, StructureError};
use crate::tensor::{MetricPair, TensorError};

pub const MAX_DIMENSION: usize = 9;
pub const MAX_PARAMETERS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub dimension: usize,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub structure_constants: Vec<StructureConstant>,
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
    pub eta: Vec<String>,
    pub g: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("`{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> ManifestError {
    ManifestError::Field { field: field.into(), message: message.into() }
}

impl ManifoldFile {
    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        serde_json::from_str(text).map_err(|e| ManifestError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Validate shapes and parse every entry.
    pub fn to_manifold(&self) -> Result<AcbmManifold, ManifestError> {
        let d = self.dimension;
        if !(3..=MAX_DIMENSION).contains(&d) || d.is_multiple_of(2) {
            return Err(field_err("dimension", format!("must be odd and in 3..={MAX_DIMENSION}, got {d}")));
        }
        if self.parameters.len() > MAX_PARAMETERS {
            return Err(field_err("parameters", format!("at most {MAX_PARAMETERS} parameters")));
        }
        let mut seen = BTreeSet::new();
        for (n, p) in self.parameters.iter().enumerate() {
            let ok = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(field_err(format!("parameters[{n}]"), format!("`{p}` is not an identifier")));
            }
            if !seen.insert(p) {
                return Err(field_err(format!("parameters[{n}]"), format!("duplicate parameter `{p}`")));
            }
        }
        let vars = Vars::new(self.parameters.iter().cloned());
        let poly = |field: String, text: &str| parse_scalar(text, &vars).map_err(|e| field_err(field, e.to_string()));

        let mut algebra = LieAlgebra::abelian(d, &vars);
        let mut entries = BTreeSet::new();
        for (n, sc) in self.structure_constants.iter().enumerate() {
            let field = format!("structure_constants[{n}]");
            if sc.i >= d || sc.j >= d || sc.k >= d {
                return Err(field_err(field, format!("index out of range for dimension {d}")));
            }
            if sc.i >= sc.j {
                return Err(field_err(field, "entries must have i < j"));
            }
            if !entries.insert((sc.i, sc.j, sc.k)) {
                return Err(field_err(field, format!("duplicate entry ({}, {}, {})", sc.i, sc.j, sc.k)));
            }
            let v = poly(format!("{field}.value"), &sc.value)?;
            algebra.set_bracket(sc.i, sc.j, sc.k, v).expect("indices checked");
        }

        let square = |name: &str, m: &Vec<Vec<String>>| -> Result<(), ManifestError> {
            if m.len() != d {
                return Err(field_err(name, format!("expected {d} rows, got {}", m.len())));
            }
            for (r, row) in m.iter().enumerate() {
                if row.len() != d {
                    return Err(field_err(format!("{name}[{r}]"), format!("expected {d} entries, got {}", row.len())));
                }
            }
            Ok(())
        };
        square("phi", &self.phi)?;
        square("g", &self.g)?;
        let mut phi = Vec::with_capacity(d);
        for (r, row) in self.phi.iter().enumerate() {
            let parsed = row
                .iter()
                .enumerate()
                .map(|(c, s)| poly(format!("phi[{r}][{c}]"), s))
                .collect::<Result<Vec<Scalar>, _>>()?;
            phi.push(parsed);
        }
        let vector = |name: &str, v: &Vec<String>| -> Result<Vec<Scalar>, ManifestError> {
            if v.len() != d {
                return Err(field_err(name, format!("expected {d} entries, got {}", v.len())));
            }
            v.iter().enumerate().map(|(n, s)| poly(format!("{name}[{n}]"), s)).collect()
        };
        let xi = vector("xi", &self.xi)?;
        let eta = vector("eta", &self.eta)?;
        let mut g = Vec::with_capacity(d);
        for (r, row) in self.g.iter().enumerate() {
            let parsed = row
                .iter()
                .enumerate()
                .map(|(c, s)| parse_rational(s).map_err(|e| field_err(format!("g[{r}][{c}]"), e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            g.push(parsed);
        }
        let metric = MetricPair::new(g).map_err(|e| match e {
            TensorError::NotSymmetric(i, j) => {
                field_err("g", format!("must be symmetric; ({i}, {j}) differs from ({j}, {i})"))
            }
            TensorError::Degenerate => field_err("g", "must be nondegenerate"),
            other => field_err("g", other.to_string()),
        })?;
        Ok(AcbmManifold::new(algebra, phi, xi, eta, metric)?)
    }

    /// Describe `m`, listing nonzero structure constants in index order.
    pub fn from_manifold(m: &AcbmManifold) -> Self {
        let d = m.dim();
        let mut structure_constants = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let c = m.algebra().c(i, j, k);
                    if !c.is_zero() {
                        structure_constants.push(StructureConstant { i, j, k, value: c.to_string() });
                    }
                }
            }
        }
        ManifoldFile {
            dimension: d,
            parameters: m.vars().names().to_vec(),
            structure_constants,
            phi: (0..d).map(|i| (0..d).map(|j| m.phi_at(i, j).to_string()).collect()).collect(),
            xi: (0..d).map(|i| m.xi_at(i).to_string()).collect(),
            eta: (0..d).map(|i| m.eta_at(i).to_string()).collect(),
            g: (0..d).map(|i| (0..d).map(|j| fmt_rational(m.metric().entry(i, j))).collect()).collect(),
        }
    }
}

/// Parse a manifold description.
pub fn parse_manifold(text: &str) -> Result<AcbmManifold, ManifestError> {
    ManifoldFile::from_json(text)?.to_manifold()
}

/// Pretty JSON description of `m`.
pub fn emit_manifold(m: &AcbmManifold) -> String {
    ManifoldFile::from_manifold(m).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_family, FamilySpec};
    use crate::scalar::int;

    #[test]
    fn family_round_trip() {
        for spec in [FamilySpec::symbolic(), FamilySpec::numeric(int(1), int(-2))] {
            let m = build_family(&spec);
            let text = emit_manifold(&m);
            assert_eq!(parse_manifold(&text).unwrap(), m);
            assert_eq!(emit_manifold(&parse_manifold(&text).unwrap()), text);
        }
    }

    #[test]
    fn emitted_family_layout() {
        let f = ManifoldFile::from_manifold(&build_family(&FamilySpec::symbolic()));
        assert_eq!(f.parameters, ["a", "b"]);
        let sc: Vec<(usize, usize, usize, &str)> =
            f.structure_constants.iter().map(|s| (s.i, s.j, s.k, s.value.as_str())).collect();
        assert_eq!(sc, [(0, 1, 1, "-b"), (0, 1, 2, "-a"), (0, 2, 1, "a"), (0, 2, 2, "-b")]);
        assert_eq!(f.g[2], ["0", "0", "-1"]);
    }

    fn family_json() -> serde_json::Value {
        serde_json::from_str(&emit_manifold(&build_family(&FamilySpec::symbolic()))).unwrap()
    }

    fn err(v: serde_json::Value) -> ManifestError {
        parse_manifold(&v.to_string()).unwrap_err()
    }

    #[test]
    fn field_diagnostics() {
        let mut v = family_json();
        v["phi"][1][2] = "c".into();
        assert!(matches!(err(v), ManifestError::Field { field, .. } if field == "phi[1][2]"));

        let mut v = family_json();
        v["g"][0][0] = "a".into();
        assert!(matches!(err(v), ManifestError::Field { field, .. } if field == "g[0][0]"));

        let mut v = family_json();
        v["structure_constants"][0]["i"] = 2.into();
        assert!(matches!(err(v), ManifestError::Field { field, .. } if field == "structure_constants[0]"));

        let mut v = family_json();
        v["dimension"] = 4.into();
        assert!(matches!(err(v), ManifestError::Field { field, .. } if field == "dimension"));

        let mut v = family_json();
        v["xi"] = serde_json::json!(["1", "0"]);
        assert!(matches!(err(v), ManifestError::Field { field, .. } if field == "xi"));

        let mut v = family_json();
        v["g"][0][1] = "1".into();
        assert!(
            matches!(err(v), ManifestError::Field { field, message } if field == "g" && message.contains("symmetric"))
        );

        let mut v = family_json();
        v["parameters"] = serde_json::json!(["a", "a"]);
        assert!(matches!(err(v), ManifestError::Field { field, .. } if field == "parameters[1]"));
    }

    #[test]
    fn json_diagnostics_carry_position() {
        let e = parse_manifold("{\n  \"dimension\": 3,\n  \"bogus\": 1\n}").unwrap_err();
        match e {
            ManifestError::Json { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_manifold("[1,"), Err(ManifestError::Json { .. })));
    }

    #[test]
    fn defaults_for_omitted_fields() {
        let text = r#"{"dimension":3,"phi":[["0","0","0"],["0","0","-1"],["0","1","0"]],
            "xi":["1","0","0"],"eta":["1","0","0"],"g":[["1","0","0"],["0","1","0"],["0","0","-1"]]}"#;
        let m = parse_manifold(text).unwrap();
        assert!(m.vars().is_empty());
        assert_eq!(m, build_family(&FamilySpec::numeric(int(0), int(0))));
    }
}
