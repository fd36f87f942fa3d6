//! JSON workspace files: a field plus named algebras, modules, bimodules,
//! ideals, contexts, gradings and catalogs. Everything is resolved and
//! validated on load.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use morita_core::algebra::{two_sided_ideal_closure, Algebra, Ideal};
use morita_core::context::{corner_context, MoritaContext};
use morita_core::equivalence::Catalog;
use morita_core::exactlin::{Basis, Field, Matrix, Scalar, Vector};
use morita_core::graded::{graded_corner_context, FiniteGroup, GradedAlgebra, GradedContext};
use morita_core::module::{same_algebra, Bimodule, LeftModule};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWorkspace {
    field: RawField,
    #[serde(default)]
    algebras: BTreeMap<String, RawAlgebra>,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
    #[serde(default)]
    bimodules: BTreeMap<String, RawBimodule>,
    #[serde(default)]
    ideals: BTreeMap<String, RawIdeal>,
    #[serde(default)]
    contexts: BTreeMap<String, RawContext>,
    #[serde(default)]
    gradings: BTreeMap<String, RawGrading>,
    #[serde(default)]
    catalogs: BTreeMap<String, RawCatalog>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawField {
    Gf { p: u32 },
    Rationals,
}

/// An integer, or a string such as `"-3/4"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Int(i64),
    Text(String),
}

type RawVector = Vec<RawScalar>;
type RawMatrix = Vec<RawVector>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    dim: usize,
    unit: RawVector,
    mul: Vec<Vec<RawVector>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    algebra: String,
    #[serde(default)]
    regular: bool,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    action: Option<Vec<RawMatrix>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBimodule {
    algebra: String,
    #[serde(default)]
    regular: bool,
    #[serde(default)]
    right_algebra: Option<String>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    action: Option<Vec<RawMatrix>>,
    #[serde(default)]
    right_action: Option<Vec<RawMatrix>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    algebra: String,
    #[serde(default)]
    basis: Option<Vec<RawVector>>,
    #[serde(default)]
    generators: Option<Vec<RawVector>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    /// `raw` (default), `corner` or `identity`.
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    algebra: Option<String>,
    #[serde(default)]
    idempotent: Option<RawVector>,
    #[serde(default, rename = "R")]
    r: Option<String>,
    #[serde(default, rename = "S")]
    s: Option<String>,
    #[serde(default, rename = "M")]
    m: Option<String>,
    #[serde(default, rename = "N")]
    n: Option<String>,
    #[serde(default)]
    phi: Option<RawMatrix>,
    #[serde(default)]
    psi: Option<RawMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    table: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrading {
    group: RawGroup,
    degrees: BTreeMap<String, Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    algebra: String,
    modules: Vec<String>,
}

/// How a context was declared; the graded loader needs this to inherit degrees.
#[derive(Clone, Debug)]
pub enum ContextShape {
    Raw {
        r: String,
        s: String,
        m: String,
        n: String,
    },
    Corner {
        algebra: String,
        idempotent: Vector,
    },
    Identity {
        algebra: String,
    },
}

#[derive(Clone, Debug)]
pub struct NamedContext {
    pub context: MoritaContext,
    pub shape: ContextShape,
}

#[derive(Clone, Debug)]
pub struct Grading {
    pub group: FiniteGroup,
    pub degrees: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: Field,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub modules: BTreeMap<String, LeftModule>,
    pub bimodules: BTreeMap<String, Bimodule>,
    /// Ideal together with the name of its algebra.
    pub ideals: BTreeMap<String, (String, Ideal)>,
    pub contexts: BTreeMap<String, NamedContext>,
    pub gradings: BTreeMap<String, Grading>,
    pub catalogs: BTreeMap<String, Catalog>,
}

pub fn parse_workspace(path: &Path) -> CliResult<Workspace> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_workspace_str(&text)
}

pub fn parse_workspace_str(text: &str) -> CliResult<Workspace> {
    let raw: RawWorkspace = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Loader::default().load(raw)
}

#[derive(Default)]
struct Loader {
    field: Option<Field>,
}

fn lookup<'a, T>(
    map: &'a BTreeMap<String, T>,
    name: &str,
    kind: &'static str,
    loc: &str,
) -> CliResult<&'a T> {
    map.get(name).ok_or_else(|| CliError::Dangling {
        location: loc.to_string(),
        kind,
        name: name.to_string(),
    })
}

fn require<T>(v: Option<T>, loc: &str, what: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::invalid(loc, format!("missing field '{what}'")))
}

impl Loader {
    fn field(&self) -> Field {
        self.field.expect("field resolved first")
    }

    fn scalar(&self, raw: &RawScalar, loc: &str) -> CliResult<Scalar> {
        let f = self.field();
        match raw {
            RawScalar::Int(v) => Ok(f.from_i64(*v)),
            RawScalar::Text(t) => f.parse_scalar(t).map_err(|e| CliError::invalid(loc, e)),
        }
    }

    fn vector(&self, raw: &[RawScalar], len: usize, loc: &str) -> CliResult<Vector> {
        if raw.len() != len {
            return Err(CliError::invalid(
                loc,
                format!("expected {len} entries, got {}", raw.len()),
            ));
        }
        raw.iter().map(|s| self.scalar(s, loc)).collect()
    }

    fn matrix(&self, raw: &RawMatrix, rows: usize, cols: usize, loc: &str) -> CliResult<Matrix> {
        if raw.len() != rows {
            return Err(CliError::invalid(
                loc,
                format!("expected {rows} rows, got {}", raw.len()),
            ));
        }
        let rows: Vec<Vector> = raw
            .iter()
            .enumerate()
            .map(|(i, r)| self.vector(r, cols, &format!("{loc}[{i}]")))
            .collect::<CliResult<_>>()?;
        Ok(Matrix::from_rows(self.field(), cols, &rows))
    }

    fn actions(
        &self,
        raw: &[RawMatrix],
        count: usize,
        dim: usize,
        loc: &str,
    ) -> CliResult<Vec<Matrix>> {
        if raw.len() != count {
            return Err(CliError::invalid(
                loc,
                format!("expected {count} action matrices, got {}", raw.len()),
            ));
        }
        raw.iter()
            .enumerate()
            .map(|(i, m)| self.matrix(m, dim, dim, &format!("{loc}[{i}]")))
            .collect()
    }

    fn load(mut self, raw: RawWorkspace) -> CliResult<Workspace> {
        let field = match raw.field {
            RawField::Gf { p } => Field::prime(p).map_err(|e| CliError::invalid("field", e))?,
            RawField::Rationals => Field::Rationals,
        };
        self.field = Some(field);

        let mut algebras = BTreeMap::new();
        for (name, a) in &raw.algebras {
            algebras.insert(
                name.clone(),
                Arc::new(self.algebra(a, &format!("algebras.{name}"))?),
            );
        }

        let mut modules = BTreeMap::new();
        for (name, m) in &raw.modules {
            let loc = format!("modules.{name}");
            let alg = lookup(&algebras, &m.algebra, "algebra", &format!("{loc}.algebra"))?.clone();
            let module = if m.regular {
                LeftModule::regular(alg)
            } else {
                let dim = require(m.dim, &loc, "dim")?;
                let act = require(m.action.as_ref(), &loc, "action")?;
                let act = self.actions(act, alg.dim(), dim, &format!("{loc}.action"))?;
                LeftModule::new(alg, dim, act).map_err(|e| CliError::invalid(&loc, e))?
            };
            let report = module.validate();
            if !report.is_valid() {
                return Err(CliError::invalid(loc, report));
            }
            modules.insert(name.clone(), module);
        }

        let mut bimodules = BTreeMap::new();
        for (name, b) in &raw.bimodules {
            let loc = format!("bimodules.{name}");
            let left = lookup(&algebras, &b.algebra, "algebra", &format!("{loc}.algebra"))?.clone();
            let bm = if b.regular {
                Bimodule::regular(left)
            } else {
                let rname = require(b.right_algebra.as_ref(), &loc, "right_algebra")?;
                let right =
                    lookup(&algebras, rname, "algebra", &format!("{loc}.right_algebra"))?.clone();
                let dim = require(b.dim, &loc, "dim")?;
                let la = self.actions(
                    require(b.action.as_ref(), &loc, "action")?,
                    left.dim(),
                    dim,
                    &format!("{loc}.action"),
                )?;
                let ra = self.actions(
                    require(b.right_action.as_ref(), &loc, "right_action")?,
                    right.dim(),
                    dim,
                    &format!("{loc}.right_action"),
                )?;
                Bimodule::new(left, right, dim, la, ra).map_err(|e| CliError::invalid(&loc, e))?
            };
            let report = bm.validate();
            if !report.is_valid() {
                return Err(CliError::invalid(loc, report));
            }
            bimodules.insert(name.clone(), bm);
        }

        let mut ideals = BTreeMap::new();
        for (name, i) in &raw.ideals {
            let loc = format!("ideals.{name}");
            let alg = lookup(&algebras, &i.algebra, "algebra", &format!("{loc}.algebra"))?;
            let ideal = match (&i.basis, &i.generators) {
                (Some(b), None) => {
                    let vs = b
                        .iter()
                        .enumerate()
                        .map(|(k, v)| self.vector(v, alg.dim(), &format!("{loc}.basis[{k}]")))
                        .collect::<CliResult<Vec<_>>>()?;
                    Ideal::new(alg, Basis::span(field, alg.dim(), vs))
                        .map_err(|e| CliError::invalid(&loc, e))?
                }
                (None, Some(g)) => {
                    let vs = g
                        .iter()
                        .enumerate()
                        .map(|(k, v)| self.vector(v, alg.dim(), &format!("{loc}.generators[{k}]")))
                        .collect::<CliResult<Vec<_>>>()?;
                    two_sided_ideal_closure(alg, &vs)
                }
                _ => {
                    return Err(CliError::invalid(
                        loc,
                        "give exactly one of 'basis' or 'generators'",
                    ))
                }
            };
            ideals.insert(name.clone(), (i.algebra.clone(), ideal));
        }

        let mut contexts = BTreeMap::new();
        for (name, c) in &raw.contexts {
            let loc = format!("contexts.{name}");
            let nc = self.context(c, &loc, &algebras, &bimodules)?;
            let report = nc.context.validate();
            if !report.is_valid() {
                return Err(CliError::invalid(loc, report));
            }
            contexts.insert(name.clone(), nc);
        }

        let mut gradings = BTreeMap::new();
        for (name, g) in &raw.gradings {
            let loc = format!("gradings.{name}");
            let mut group = FiniteGroup::new(g.group.table.clone())
                .map_err(|e| CliError::invalid(format!("{loc}.group"), e))?;
            if let Some(l) = &g.group.labels {
                group = group
                    .with_labels(l.clone())
                    .map_err(|e| CliError::invalid(format!("{loc}.group.labels"), e))?;
            }
            for (obj, degs) in &g.degrees {
                let dloc = format!("{loc}.degrees.{obj}");
                let dim = if let Some(a) = algebras.get(obj) {
                    let ga = GradedAlgebra::new(a.clone(), group.clone(), degs.clone());
                    ga.map_err(|e| CliError::invalid(&dloc, e))?;
                    a.dim()
                } else if let Some(m) = modules.get(obj) {
                    m.dim()
                } else if let Some(b) = bimodules.get(obj) {
                    b.dim()
                } else {
                    return Err(CliError::Dangling {
                        location: dloc,
                        kind: "algebra, module or bimodule",
                        name: obj.clone(),
                    });
                };
                if degs.len() != dim {
                    return Err(CliError::invalid(
                        dloc,
                        format!("expected {dim} degrees, got {}", degs.len()),
                    ));
                }
            }
            gradings.insert(
                name.clone(),
                Grading {
                    group,
                    degrees: g.degrees.clone(),
                },
            );
        }

        let mut catalogs = BTreeMap::new();
        for (name, c) in &raw.catalogs {
            let loc = format!("catalogs.{name}");
            let alg = lookup(&algebras, &c.algebra, "algebra", &format!("{loc}.algebra"))?;
            let mods = c
                .modules
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    lookup(&modules, m, "module", &format!("{loc}.modules[{k}]")).cloned()
                })
                .collect::<CliResult<Vec<_>>>()?;
            let cat = Catalog::user_supplied(alg.clone(), mods, c.modules.clone())
                .map_err(|e| CliError::invalid(&loc, e))?;
            catalogs.insert(name.clone(), cat);
        }

        Ok(Workspace {
            field,
            algebras,
            modules,
            bimodules,
            ideals,
            contexts,
            gradings,
            catalogs,
        })
    }

    fn algebra(&self, a: &RawAlgebra, loc: &str) -> CliResult<Algebra> {
        let d = a.dim;
        if a.mul.len() != d {
            return Err(CliError::invalid(
                format!("{loc}.mul"),
                format!("expected {d} rows of products"),
            ));
        }
        let mul = a
            .mul
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != d {
                    return Err(CliError::invalid(
                        format!("{loc}.mul[{i}]"),
                        format!("expected {d} products"),
                    ));
                }
                row.iter()
                    .enumerate()
                    .map(|(j, v)| self.vector(v, d, &format!("{loc}.mul[{i}][{j}]")))
                    .collect()
            })
            .collect::<CliResult<Vec<Vec<Vector>>>>()?;
        let unit = self.vector(&a.unit, d, &format!("{loc}.unit"))?;
        let mut alg =
            Algebra::new(self.field(), d, mul, unit).map_err(|e| CliError::invalid(loc, e))?;
        if let Some(l) = &a.labels {
            if l.len() != d {
                return Err(CliError::invalid(
                    format!("{loc}.labels"),
                    format!("expected {d} labels"),
                ));
            }
            alg = alg.with_labels(l.clone());
        }
        let report = alg.validate();
        if !report.is_valid() {
            return Err(CliError::invalid(loc, report));
        }
        Ok(alg)
    }

    fn context(
        &self,
        c: &RawContext,
        loc: &str,
        algebras: &BTreeMap<String, Arc<Algebra>>,
        bimodules: &BTreeMap<String, Bimodule>,
    ) -> CliResult<NamedContext> {
        match c.kind.as_deref().unwrap_or("raw") {
            "corner" => {
                let an = require(c.algebra.as_ref(), loc, "algebra")?;
                let alg = lookup(algebras, an, "algebra", &format!("{loc}.algebra"))?;
                let e = self.vector(
                    require(c.idempotent.as_ref(), loc, "idempotent")?,
                    alg.dim(),
                    &format!("{loc}.idempotent"),
                )?;
                let context =
                    corner_context(alg.clone(), &e).map_err(|err| CliError::invalid(loc, err))?;
                Ok(NamedContext {
                    context,
                    shape: ContextShape::Corner {
                        algebra: an.clone(),
                        idempotent: e,
                    },
                })
            }
            "identity" => {
                let an = require(c.algebra.as_ref(), loc, "algebra")?;
                let alg = lookup(algebras, an, "algebra", &format!("{loc}.algebra"))?;
                Ok(NamedContext {
                    context: MoritaContext::identity(alg.clone()),
                    shape: ContextShape::Identity {
                        algebra: an.clone(),
                    },
                })
            }
            "raw" => {
                let rn = require(c.r.as_ref(), loc, "R")?;
                let sn = require(c.s.as_ref(), loc, "S")?;
                let mn = require(c.m.as_ref(), loc, "M")?;
                let nn = require(c.n.as_ref(), loc, "N")?;
                let r = lookup(algebras, rn, "algebra", &format!("{loc}.R"))?.clone();
                let s = lookup(algebras, sn, "algebra", &format!("{loc}.S"))?.clone();
                let m = lookup(bimodules, mn, "bimodule", &format!("{loc}.M"))?.clone();
                let n = lookup(bimodules, nn, "bimodule", &format!("{loc}.N"))?.clone();
                let phi = self.matrix(
                    require(c.phi.as_ref(), loc, "phi")?,
                    r.dim(),
                    m.dim() * n.dim(),
                    &format!("{loc}.phi"),
                )?;
                let psi = self.matrix(
                    require(c.psi.as_ref(), loc, "psi")?,
                    s.dim(),
                    n.dim() * m.dim(),
                    &format!("{loc}.psi"),
                )?;
                let context = MoritaContext::from_raw(r, s, m, n, phi, psi)
                    .map_err(|e| CliError::invalid(loc, e))?;
                Ok(NamedContext {
                    context,
                    shape: ContextShape::Raw {
                        r: rn.clone(),
                        s: sn.clone(),
                        m: mn.clone(),
                        n: nn.clone(),
                    },
                })
            }
            other => Err(CliError::invalid(
                format!("{loc}.kind"),
                format!("unknown context kind '{other}'"),
            )),
        }
    }
}

impl Workspace {
    pub fn context(&self, name: &str) -> CliResult<&NamedContext> {
        lookup(&self.contexts, name, "context", "--context")
    }

    pub fn module(&self, name: &str) -> CliResult<&LeftModule> {
        lookup(&self.modules, name, "module", "--module")
    }

    pub fn ideal(&self, name: &str) -> CliResult<&(String, Ideal)> {
        lookup(&self.ideals, name, "ideal", "--ideal")
    }

    pub fn algebra(&self, name: &str) -> CliResult<&Arc<Algebra>> {
        lookup(&self.algebras, name, "algebra", "--algebra")
    }

    pub fn catalog(&self, name: &str) -> CliResult<&Catalog> {
        lookup(&self.catalogs, name, "catalog", "--catalog")
    }

    /// Name of an algebra by identity, for reports.
    pub fn algebra_name(&self, a: &Arc<Algebra>) -> Option<&str> {
        self.algebras
            .iter()
            .find(|(_, b)| same_algebra(a, b))
            .map(|(n, _)| n.as_str())
    }

    /// The context with gradings taken from `grading`, or from the only
    /// grading that covers the context's algebras.
    pub fn graded_context(
        &self,
        name: &str,
        grading: Option<&str>,
    ) -> CliResult<(String, GradedContext)> {
        let nc = self.context(name)?;
        let r_name = match &nc.shape {
            ContextShape::Raw { r, .. } => r,
            ContextShape::Corner { algebra, .. } | ContextShape::Identity { algebra } => algebra,
        };
        let (gname, g) = match grading {
            Some(n) => (
                n.to_string(),
                lookup(&self.gradings, n, "grading", "--grading")?,
            ),
            None => {
                let mut found = self
                    .gradings
                    .iter()
                    .filter(|(_, g)| g.degrees.contains_key(r_name));
                match (found.next(), found.next()) {
                    (Some((n, g)), None) => (n.clone(), g),
                    (None, _) => {
                        return Err(CliError::Usage(format!(
                            "no grading declares degrees for '{r_name}'"
                        )))
                    }
                    _ => {
                        return Err(CliError::Usage(format!(
                            "several gradings cover '{r_name}'; pass --grading"
                        )))
                    }
                }
            }
        };
        let loc = format!("gradings.{gname}.degrees");
        let degrees = |obj: &str| {
            g.degrees
                .get(obj)
                .cloned()
                .ok_or_else(|| CliError::Dangling {
                    location: loc.clone(),
                    kind: "graded object",
                    name: obj.to_string(),
                })
        };
        let graded = |alg: &str| -> CliResult<Arc<GradedAlgebra>> {
            let a = self.algebras[alg].clone();
            Ok(Arc::new(GradedAlgebra::new(
                a,
                g.group.clone(),
                degrees(alg)?,
            )?))
        };
        let gc = match &nc.shape {
            ContextShape::Corner {
                algebra,
                idempotent,
            } => graded_corner_context(graded(algebra)?, idempotent)?,
            ContextShape::Identity { algebra } => {
                let gr = graded(algebra)?;
                let d = degrees(algebra)?;
                GradedContext::new(nc.context.clone(), gr.clone(), gr, d.clone(), d)?
            }
            ContextShape::Raw { r, s, m, n } => GradedContext::new(
                nc.context.clone(),
                graded(r)?,
                graded(s)?,
                degrees(m)?,
                degrees(n)?,
            )?,
        };
        Ok((gname, gc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str =
        r#"{"field":{"kind":"gf","p":2},"algebras":{"k":{"dim":1,"unit":[1],"mul":[[[1]]]}}}"#;

    #[test]
    fn minimal_workspace() {
        let ws = parse_workspace_str(MINIMAL).unwrap();
        assert_eq!(ws.algebras["k"].dim(), 1);
    }

    #[test]
    fn dangling_reference_is_named() {
        let text =
            r#"{"field":{"kind":"gf","p":2},"modules":{"X":{"algebra":"nope","regular":true}}}"#;
        let err = parse_workspace_str(text).unwrap_err();
        assert!(matches!(err, CliError::Dangling { ref name, .. } if name == "nope"));
        assert!(err.to_string().contains("modules.X.algebra"));
    }

    #[test]
    fn syntax_error_has_a_location() {
        let err = parse_workspace_str("{\n\"field\": [}").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }));
    }

    #[test]
    fn broken_associativity_is_named() {
        // T2 with e12·e22 := e22, which breaks (e12,e22,e12)-style triples.
        let text = r#"{"field":{"kind":"gf","p":2},"algebras":{"B":{"dim":3,"unit":[1,0,1],
          "labels":["e11","e12","e22"],
          "mul":[[[1,0,0],[0,1,0],[0,0,0]],
                 [[0,0,0],[0,0,0],[0,0,1]],
                 [[0,0,0],[0,0,0],[0,0,1]]]}}}"#;
        let err = parse_workspace_str(text).unwrap_err().to_string();
        assert!(err.starts_with("algebras.B:"), "{err}");
        assert!(err.contains("associativity ("), "{err}");
    }

    #[test]
    fn unknown_field_kind_is_rejected() {
        assert!(matches!(
            parse_workspace_str(r#"{"field":{"kind":"gf","p":4}}"#),
            Err(CliError::Invalid { .. })
        ));
    }
}
