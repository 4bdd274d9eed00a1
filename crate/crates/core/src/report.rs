//! Serializable reports. Text output is rendered from the same structure
//! that is written as JSON, so both carry the same content.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::classify;
use crate::connection::{
    fundamental_tensor, is_natural, lee_forms, levi_civita, phi_b_connection, phi_canonical_identity_holds,
    square_norms, Connection,
};
use crate::curvature::{curvature, predicates, section_type, sectional_curvature, Predicate};
use crate::scalar::{int, Rational};
use crate::structure::{validate_structure, AcbmManifold};
use crate::tensor::Tensor;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub index: Vec<usize>,
    pub value: String,
}

fn components(t: &Tensor) -> Vec<Component> {
    t.nonzero().into_iter().map(|(index, v)| Component { index, value: v.to_string() }).collect()
}

fn conn_components(c: &Connection) -> Vec<Component> {
    c.nonzero().into_iter().map(|(i, j, k, v)| Component { index: vec![i, j, k], value: v.to_string() }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSection {
    pub violations: Vec<String>,
    pub jacobi: Vec<String>,
}

impl StructureSection {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.jacobi.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSection {
    /// `Γ^k_{ij}` as index `[i, j, k]`.
    pub levi_civita: Vec<Component>,
    pub fundamental_tensor: Vec<Component>,
    pub theta: Vec<String>,
    pub theta_star: Vec<String>,
    pub omega: Vec<String>,
    pub theta0: String,
    pub theta_star0: String,
    pub norm_nabla_phi: String,
    pub norm_nabla_eta: String,
    pub norm_nabla_xi: String,
    pub phi_b: Vec<Component>,
    pub levi_civita_natural: bool,
    pub phi_b_natural: bool,
    pub phi_b_violations: Vec<String>,
    /// Conditions for the torsion identity of the phi-canonical connection
    /// to hold for the phiB-connection.
    pub phi_b_canonical_identity: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSection {
    pub verdict: String,
    pub f4_f5: Vec<String>,
    pub f4: Vec<String>,
    pub f5: Vec<String>,
    pub f0: Vec<String>,
    pub residual: Vec<Component>,
    pub theta0: String,
    pub theta_star0: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneEntry {
    pub plane: [usize; 2],
    pub section: String,
    /// Sectional curvature, absent for degenerate planes.
    pub k: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureSection {
    /// `R_{ijkl}` with `i < j`, `k < l`, `(i, j) <= (k, l)`.
    pub r: Vec<Component>,
    pub rho: Vec<Component>,
    pub rho_star: Vec<Component>,
    pub tau: String,
    pub tau_star: String,
    pub planes: Vec<PlaneEntry>,
    pub predicates: BTreeMap<String, Vec<String>>,
    pub einstein_lambda: String,
    pub space_form_k: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub dimension: usize,
    pub parameters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionSection>,
    /// Classification, or the reason it does not apply.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Result<ClassSection, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bianchi: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Sections {
    pub structure: bool,
    pub connection: bool,
    pub class: bool,
    pub curvature: bool,
    pub bianchi: bool,
}

impl Sections {
    pub const ALL: Sections =
        Sections { structure: true, connection: true, class: true, curvature: true, bianchi: true };
}

pub fn structure_section(m: &AcbmManifold) -> StructureSection {
    StructureSection {
        violations: validate_structure(m).iter().map(ToString::to_string).collect(),
        jacobi: m.algebra().check_jacobi().to_strings(),
    }
}

pub fn connection_section(m: &AcbmManifold) -> ConnectionSection {
    let lc = levi_civita(m);
    let f = fundamental_tensor(m, &lc);
    let lee = lee_forms(m, &f);
    let norms = square_norms(m, &lc);
    let pb = phi_b_connection(m, &lc);
    let nat = is_natural(m, &pb);
    let strs = |t: &Tensor| t.components().iter().map(ToString::to_string).collect();
    ConnectionSection {
        levi_civita: conn_components(&lc),
        fundamental_tensor: components(&f),
        theta: strs(&lee.theta),
        theta_star: strs(&lee.theta_star),
        omega: strs(&lee.omega),
        theta0: lee.theta0.to_string(),
        theta_star0: lee.theta_star0.to_string(),
        norm_nabla_phi: norms.nabla_phi.to_string(),
        norm_nabla_eta: norms.nabla_eta.to_string(),
        norm_nabla_xi: norms.nabla_xi.to_string(),
        phi_b: conn_components(&pb),
        levi_civita_natural: is_natural(m, &lc).natural,
        phi_b_natural: nat.natural,
        phi_b_violations: nat.violations,
        phi_b_canonical_identity: phi_canonical_identity_holds(m, &pb).to_strings(),
    }
}

pub fn class_section(m: &AcbmManifold) -> Result<ClassSection, String> {
    let r = classify(m).map_err(|e| e.to_string())?;
    Ok(ClassSection {
        verdict: r.verdict.label().to_string(),
        f4_f5: r.in_f4_f5.to_strings(),
        f4: r.in_f4.to_strings(),
        f5: r.in_f5.to_strings(),
        f0: r.in_f0.to_strings(),
        residual: components(&r.residual),
        theta0: r.theta0.to_string(),
        theta_star0: r.theta_star0.to_string(),
        notes: r.notes,
    })
}

pub fn curvature_section(m: &AcbmManifold) -> CurvatureSection {
    let d = m.dim();
    let lc = levi_civita(m);
    let cd = curvature(m, &lc);
    let lee = lee_forms(m, &fundamental_tensor(m, &lc));
    let preds = predicates(m, &cd, &square_norms(m, &lc), &lee);
    let r =
        cd.r.nonzero()
            .into_iter()
            .filter(|(x, _)| x[0] < x[1] && x[2] < x[3] && (x[0], x[1]) <= (x[2], x[3]))
            .map(|(index, v)| Component { index, value: v.to_string() })
            .collect();
    let unit = |i: usize| (0..d).map(|k| int(i64::from(k == i))).collect::<Vec<Rational>>();
    let mut planes = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let (x, y) = (unit(i), unit(j));
            let section = section_type(m, &x, &y).map(|s| s.to_string()).unwrap_or_else(|e| e.to_string());
            let k = sectional_curvature(m, &cd, &x, &y).ok().map(|k| k.to_string());
            planes.push(PlaneEntry { plane: [i, j], section, k });
        }
    }
    CurvatureSection {
        r,
        rho: components(&cd.rho),
        rho_star: components(&cd.rho_star),
        tau: cd.tau.to_string(),
        tau_star: cd.tau_star.to_string(),
        planes,
        predicates: Predicate::ALL.iter().map(|p| (p.name().to_string(), preds.get(*p).to_strings())).collect(),
        einstein_lambda: preds.lambda_on_locus().to_string(),
        space_form_k: preds.k_on_locus().to_string(),
    }
}

/// Bianchi type for constant 3-dimensional algebras.
pub fn bianchi_line(m: &AcbmManifold) -> Option<String> {
    if m.dim() != 3 || !m.vars().is_empty() {
        return None;
    }
    Some(m.algebra().bianchi_classify(&BTreeMap::new()).map_or_else(|e| e.to_string(), |t| t.to_string()))
}

pub fn build_report(m: &AcbmManifold, sections: Sections) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        dimension: m.dim(),
        parameters: m.vars().names().to_vec(),
        structure: sections.structure.then(|| structure_section(m)),
        connection: sections.connection.then(|| connection_section(m)),
        class: sections.class.then(|| class_section(m)),
        curvature: sections.curvature.then(|| curvature_section(m)),
        bianchi: if sections.bianchi { bianchi_line(m) } else { None },
    }
}

/// `{}` holds everywhere, `{1}` nowhere.
fn set(polys: &[String]) -> String {
    let s = format!("{{{}}}", polys.join(", "));
    match polys {
        [] => s + " (always)",
        [one] if one == "1" => s + " (never)",
        _ => s,
    }
}

fn index(ix: &[usize]) -> String {
    ix.iter().map(ToString::to_string).collect()
}

fn component_lines(out: &mut String, name: &str, cs: &[Component]) {
    if cs.is_empty() {
        let _ = writeln!(out, "  {name}: 0");
    }
    for c in cs {
        let _ = writeln!(out, "  {name}_{} = {}", index(&c.index), c.value);
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dimension: {}", self.dimension);
        let _ = writeln!(
            out,
            "parameters: {}",
            if self.parameters.is_empty() { "-".into() } else { self.parameters.join(", ") }
        );
        if let Some(s) = &self.structure {
            out.push_str("== structure ==\n");
            if s.violations.is_empty() {
                out.push_str("axioms: ok\n");
            }
            for v in &s.violations {
                let _ = writeln!(out, "axiom violated: {v}");
            }
            let _ = writeln!(out, "jacobi: {}", if s.jacobi.is_empty() { "ok".into() } else { set(&s.jacobi) });
        }
        if let Some(c) = &self.connection {
            out.push_str("== connection ==\nLevi-Civita (G^k_ij at ijk):\n");
            component_lines(&mut out, "G", &c.levi_civita);
            out.push_str("fundamental tensor:\n");
            component_lines(&mut out, "F", &c.fundamental_tensor);
            let _ = writeln!(out, "theta = ({})", c.theta.join(", "));
            let _ = writeln!(out, "theta* = ({})", c.theta_star.join(", "));
            let _ = writeln!(out, "omega = ({})", c.omega.join(", "));
            let _ = writeln!(out, "theta0 = {}", c.theta0);
            let _ = writeln!(out, "theta0* = {}", c.theta_star0);
            let _ = writeln!(out, "|nabla phi|^2 = {}", c.norm_nabla_phi);
            let _ = writeln!(out, "|nabla eta|^2 = {}", c.norm_nabla_eta);
            let _ = writeln!(out, "|nabla xi|^2 = {}", c.norm_nabla_xi);
            out.push_str("phiB-connection:\n");
            component_lines(&mut out, "G", &c.phi_b);
            let _ = writeln!(out, "Levi-Civita natural: {}", c.levi_civita_natural);
            let _ = writeln!(out, "phiB natural: {}", c.phi_b_natural);
            for v in &c.phi_b_violations {
                let _ = writeln!(out, "  {v}");
            }
            let _ = writeln!(out, "phiB torsion identity: {}", set(&c.phi_b_canonical_identity));
        }
        match &self.class {
            Some(Ok(c)) => {
                out.push_str("== classification ==\n");
                let _ = writeln!(out, "class: {}", c.verdict);
                let _ = writeln!(out, "F4+F5 iff {}", set(&c.f4_f5));
                let _ = writeln!(out, "F4 iff {}", set(&c.f4));
                let _ = writeln!(out, "F5 iff {}", set(&c.f5));
                let _ = writeln!(out, "F0 iff {}", set(&c.f0));
                let _ = writeln!(out, "theta0 = {}", c.theta0);
                let _ = writeln!(out, "theta0* = {}", c.theta_star0);
                out.push_str("residual F-F4-F5:\n");
                component_lines(&mut out, "F", &c.residual);
                for n in &c.notes {
                    let _ = writeln!(out, "note: {n}");
                }
            }
            Some(Err(e)) => {
                let _ = writeln!(out, "== classification ==\nclass: not decided ({e})");
            }
            None => {}
        }
        if let Some(c) = &self.curvature {
            out.push_str("== curvature ==\n");
            component_lines(&mut out, "R", &c.r);
            component_lines(&mut out, "rho", &c.rho);
            component_lines(&mut out, "rho*", &c.rho_star);
            let _ = writeln!(out, "tau = {}", c.tau);
            let _ = writeln!(out, "tau* = {}", c.tau_star);
            for p in &c.planes {
                let k = p.k.as_deref().unwrap_or("undefined");
                let _ = writeln!(out, "plane e{} e{}: {}, k = {}", p.plane[0], p.plane[1], p.section, k);
            }
            for (name, polys) in &c.predicates {
                let _ = writeln!(out, "{name} iff {}", set(polys));
            }
            let _ = writeln!(out, "einstein lambda on locus = {}", c.einstein_lambda);
            let _ = writeln!(out, "space form k on locus = {}", c.space_form_k);
        }
        if let Some(b) = &self.bianchi {
            let _ = writeln!(out, "bianchi: {b}");
        }
        out
    }
}
