use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use morita_core::algebra::Algebra;
use morita_core::context::{
    compose_contexts, contexts_isomorphic, is_strict, trace_ideals, ContextIsoSearch, MoritaContext,
};
use morita_core::equivalence::{
    build_catalog_with, verify_kato_muller, verify_projective_equivalence,
    verify_strict_equivalence, Catalog, CatalogOptions, Provenance, Report, Summary, Verdict,
};
use morita_core::graded::{build_graded_catalog, verify_graded_kato_muller};
use morita_core::module::{is_isomorphic_with, IsoSearch};
use morita_core::torsion::{
    is_closed, is_torsion, is_torsion_free, localize, torsion_submodule, TorsionTheory,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::workspace::{parse_workspace, Workspace};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "morita",
    version,
    about = "Exact verification of Morita contexts, torsion theories and their equivalences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Workspace file (JSON).
    #[arg(long, short = 'w', global = true, default_value = "workspace.json")]
    pub workspace: PathBuf,

    /// Context name; `compose` and `iso` take it twice or more.
    #[arg(long, global = true)]
    pub context: Vec<String>,

    /// Module name; `iso` takes it twice, `torsion` any number of times.
    #[arg(long, global = true)]
    pub module: Vec<String>,

    #[arg(long, global = true)]
    pub ideal: Option<String>,

    /// Algebra name for `catalog`.
    #[arg(long, global = true)]
    pub algebra: Option<String>,

    /// Grading name for `graded-equiv`; optional when only one grading fits.
    #[arg(long, global = true)]
    pub grading: Option<String>,

    /// Use a catalog declared in the workspace for the R side.
    #[arg(long, global = true)]
    pub r_catalog: Option<String>,

    /// Use a catalog declared in the workspace for the S side.
    #[arg(long, global = true)]
    pub s_catalog: Option<String>,

    /// Largest module dimension in generated catalogs.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_dim: usize,

    /// Catalog bound on the S side (defaults to --max-dim).
    #[arg(long, global = true)]
    pub s_max_dim: Option<usize>,

    /// Exhaustive enumeration limit before sampling kicks in.
    #[arg(long, global = true, default_value_t = 4096)]
    pub budget: u64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Treat a pass reached by sampling as a failure.
    #[arg(long, global = true)]
    pub strict_sampling: bool,

    /// Also write the machine report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Load and validate every object in the workspace.
    Validate,
    /// Trace ideals of a context.
    Trace,
    /// Whether a context is strict.
    Strict,
    /// Torsion theory of an ideal, and torsion parts of modules.
    Torsion,
    /// Localize a module at an ideal.
    Localize,
    /// Whether a module is closed for an ideal.
    Closed,
    /// Quotient-category equivalence via F′ and G′.
    Equiv,
    /// Equivalence of module categories for a strict context.
    EquivStrict,
    /// Correspondence of I-projective modules.
    EquivProj,
    /// Compose contexts left to right.
    Compose,
    /// Isomorphism of two modules or two contexts.
    Iso,
    /// Graded quotient-category equivalence.
    GradedEquiv,
    /// Isomorphism classes of modules up to --max-dim.
    Catalog,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Trace => "trace",
            Command::Strict => "strict",
            Command::Torsion => "torsion",
            Command::Localize => "localize",
            Command::Closed => "closed",
            Command::Equiv => "equiv",
            Command::EquivStrict => "equiv-strict",
            Command::EquivProj => "equiv-proj",
            Command::Compose => "compose",
            Command::Iso => "iso",
            Command::GradedEquiv => "graded-equiv",
            Command::Catalog => "catalog",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

/// The JSON document written for `--format machine` and `--out`.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct MachineReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub seed: u64,
    pub theorem: String,
    pub bounds: Vec<String>,
    pub facts: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    /// Headline lines printed before the report in human format.
    pub lines: Vec<String>,
    pub report: Report,
    pub machine: MachineReport,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.machine.summary.pass {
            0
        } else {
            1
        }
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s.push_str(&self.report.to_string());
        s.push('\n');
        s
    }

    pub fn machine_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.machine).expect("report serializes");
        s.push('\n');
        s
    }
}

fn one<'a>(v: &'a [String], flag: &str) -> CliResult<&'a str> {
    match v {
        [x] => Ok(x),
        [] => Err(CliError::Usage(format!("--{flag} is required"))),
        _ => Err(CliError::Usage(format!("--{flag} given more than once"))),
    }
}

fn two<'a>(v: &'a [String], flag: &str) -> CliResult<(&'a str, &'a str)> {
    match v {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!("give --{flag} exactly twice"))),
    }
}

struct Run<'a> {
    cli: &'a Cli,
    ws: Workspace,
    lines: Vec<String>,
}

impl Run<'_> {
    fn opts(&self) -> CatalogOptions {
        CatalogOptions {
            budget: self.cli.budget,
            allow_sampling: !self.cli.strict_sampling,
            seed: self.cli.seed,
        }
    }

    fn catalog_for(
        &self,
        named: Option<&String>,
        a: &Arc<Algebra>,
        max_dim: usize,
    ) -> CliResult<Catalog> {
        match named {
            Some(n) => Ok(self.ws.catalog(n)?.clone()),
            None => Ok(build_catalog_with(a, max_dim, &self.opts())?),
        }
    }

    fn context(&self) -> CliResult<(&str, &MoritaContext)> {
        let name = one(&self.cli.context, "context")?;
        Ok((name, &self.ws.context(name)?.context))
    }

    fn catalogs(&self, ctx: &MoritaContext) -> CliResult<(Catalog, Catalog)> {
        let s_dim = self.cli.s_max_dim.unwrap_or(self.cli.max_dim);
        Ok((
            self.catalog_for(self.cli.r_catalog.as_ref(), ctx.r(), self.cli.max_dim)?,
            self.catalog_for(self.cli.s_catalog.as_ref(), ctx.s(), s_dim)?,
        ))
    }

    /// Theory from `--ideal`, else the trace ideal `I` of `--context`.
    fn theory(&self) -> CliResult<(String, TorsionTheory)> {
        if let Some(name) = &self.cli.ideal {
            let (alg, ideal) = self.ws.ideal(name)?;
            return Ok((
                name.clone(),
                TorsionTheory::new(self.ws.algebra(alg)?.clone(), ideal.clone()),
            ));
        }
        if !self.cli.context.is_empty() {
            let (name, ctx) = self.context()?;
            let (i, _) = trace_ideals(ctx)?;
            return Ok((format!("I({name})"), TorsionTheory::new(ctx.r().clone(), i)));
        }
        Err(CliError::Usage("--ideal (or --context) is required".into()))
    }

    fn dispatch(&mut self, command: Command) -> CliResult<Report> {
        match command {
            Command::Validate => self.validate(),
            Command::Trace => self.trace(),
            Command::Strict => self.strict(),
            Command::Torsion => self.torsion(),
            Command::Localize => self.localize(),
            Command::Closed => self.closed(),
            Command::Equiv => {
                let (_, ctx) = self.context()?;
                let (cr, cs) = self.catalogs(ctx)?;
                Ok(verify_kato_muller(ctx, &cr, &cs, self.cli.seed)?)
            }
            Command::EquivStrict => {
                let (_, ctx) = self.context()?;
                let (cr, cs) = self.catalogs(ctx)?;
                Ok(verify_strict_equivalence(ctx, &cr, &cs, self.cli.seed)?)
            }
            Command::EquivProj => {
                let (_, ctx) = self.context()?;
                let (cr, cs) = self.catalogs(ctx)?;
                Ok(verify_projective_equivalence(
                    ctx,
                    &cr,
                    &cs,
                    self.cli.budget,
                    self.cli.seed,
                )?)
            }
            Command::Compose => self.compose(),
            Command::Iso => self.iso(),
            Command::GradedEquiv => self.graded_equiv(),
            Command::Catalog => self.catalog(),
        }
    }

    fn validate(&mut self) -> CliResult<Report> {
        let ws = &self.ws;
        let mut report = Report::new("every workspace object satisfies its defining laws");
        for (n, a) in &ws.algebras {
            report.push(Verdict::new(
                format!("algebra:{n}"),
                "associative and unital",
                a.validate().is_valid(),
            ));
        }
        for (n, m) in &ws.modules {
            report.push(Verdict::new(
                format!("module:{n}"),
                "module axioms",
                m.validate().is_valid(),
            ));
        }
        for (n, b) in &ws.bimodules {
            report.push(Verdict::new(
                format!("bimodule:{n}"),
                "bimodule axioms",
                b.validate().is_valid(),
            ));
        }
        for (n, c) in &ws.contexts {
            let v = c.context.validate();
            report.push(
                Verdict::new(format!("context:{n}"), "Morita context laws", v.is_valid())
                    .detail(v.to_string()),
            );
        }
        for n in ws.gradings.keys() {
            report.push(Verdict::new(
                format!("grading:{n}"),
                "homogeneous structure constants",
                true,
            ));
        }
        self.lines.push(format!(
            "workspace: {} algebras, {} modules, {} bimodules, {} ideals, {} contexts, {} gradings, {} catalogs",
            ws.algebras.len(),
            ws.modules.len(),
            ws.bimodules.len(),
            ws.ideals.len(),
            ws.contexts.len(),
            ws.gradings.len(),
            ws.catalogs.len()
        ));
        Ok(report)
    }

    fn trace(&mut self) -> CliResult<Report> {
        let (name, ctx) = self.context()?;
        let (i, j) = trace_ideals(ctx)?;
        let mut report = Report::new("trace ideals I = φ(M⊗N) and J = ψ(N⊗M)");
        report.fact(format!("I has dim {} of {}", i.dim(), ctx.r().dim()));
        report.fact(format!("J has dim {} of {}", j.dim(), ctx.s().dim()));
        report.push(Verdict::new(
            format!("context:{name}"),
            "valid Morita context",
            ctx.validate().is_valid(),
        ));
        let lines = [
            format!("I: dim {} of {}", i.dim(), ctx.r().dim()),
            format!("J: dim {} of {}", j.dim(), ctx.s().dim()),
        ];
        self.lines.extend(lines);
        Ok(report)
    }

    fn strict(&mut self) -> CliResult<Report> {
        let (name, ctx) = self.context()?;
        let strict = is_strict(ctx);
        let (i, j) = trace_ideals(ctx)?;
        let mut report = Report::new("the context is strict (I = R and J = S)");
        report.push(
            Verdict::new(format!("context:{name}"), "strict", strict).detail(format!(
                "I dim {} of {}, J dim {} of {}",
                i.dim(),
                ctx.r().dim(),
                j.dim(),
                ctx.s().dim()
            )),
        );
        self.lines.push(format!("strict: {strict}"));
        Ok(report)
    }

    fn torsion(&mut self) -> CliResult<Report> {
        let (label, t) = self.theory()?;
        let mut report = Report::new("torsion parts and torsion-free quotients");
        report.fact(format!("{label} = {}", t.describe()));
        self.lines.push(format!("{label} = {}", t.describe()));
        for name in &self.cli.module {
            let x = self.ws.module(name)?;
            let tx = torsion_submodule(&t, x)?;
            let (q, _) = x.quotient(&tx);
            let free = is_torsion_free(&t, x)?;
            let tors = is_torsion(&t, x)?;
            self.lines.push(format!(
                "{name}: torsion dim {} of {}, torsion-free: {free}, torsion: {tors}",
                tx.dim(),
                x.dim()
            ));
            report.push(Verdict::new(
                format!("module:{name}"),
                "X / t(X) is torsion-free",
                is_torsion_free(&t, &q)?,
            ));
        }
        Ok(report)
    }

    fn localize(&mut self) -> CliResult<Report> {
        let (label, t) = self.theory()?;
        let name = one(&self.cli.module, "module")?;
        let x = self.ws.module(name)?;
        let mut report =
            Report::new("localization: closed, kernel is the torsion part, cokernel is torsion");
        report.fact(format!("{label} = {}", t.describe()));
        let v = match localize(&t, x) {
            Ok(loc) => {
                self.lines
                    .push(format!("localized dim {}", loc.module.dim()));
                report.fact(format!("torsion part has dim {}", loc.torsion.dim()));
                Verdict::new(format!("module:{name}"), "localization laws", true)
                    .detail(format!("localized dim {}", loc.module.dim()))
                    .witness("canonical map", &loc.map)
            }
            Err(morita_core::Error::Postcondition(msg)) => {
                Verdict::new(format!("module:{name}"), "localization laws", false).detail(msg)
            }
            Err(e) => return Err(e.into()),
        };
        report.push(v);
        Ok(report)
    }

    fn closed(&mut self) -> CliResult<Report> {
        let (label, t) = self.theory()?;
        let name = one(&self.cli.module, "module")?;
        let x = self.ws.module(name)?;
        let test = is_closed(&t, x)?;
        let mut report = Report::new("X → Hom_R(I∞, X) is an isomorphism");
        report.fact(format!("{label} = {}", t.describe()));
        report.push(
            Verdict::new(format!("module:{name}"), "closed", test.closed)
                .witness("alpha", &test.alpha),
        );
        self.lines.push(format!("closed: {}", test.closed));
        Ok(report)
    }

    fn compose(&mut self) -> CliResult<Report> {
        if self.cli.context.len() < 2 {
            return Err(CliError::Usage(
                "compose needs --context at least twice".into(),
            ));
        }
        let mut acc = self.ws.context(&self.cli.context[0])?.context.clone();
        for name in &self.cli.context[1..] {
            acc = compose_contexts(&acc, &self.ws.context(name)?.context)?;
        }
        let v = acc.validate();
        let (i, j) = trace_ideals(&acc)?;
        let mut report = Report::new("composition of Morita contexts");
        report.fact(format!(
            "dim M = {}, dim N = {}",
            acc.m().dim(),
            acc.n().dim()
        ));
        report.fact(format!("I has dim {}, J has dim {}", i.dim(), j.dim()));
        report.push(
            Verdict::new(
                self.cli.context.join("∘"),
                "valid Morita context",
                v.is_valid(),
            )
            .detail(v.to_string())
            .witness("phi", acc.phi()),
        );
        self.lines.push(format!(
            "composed: dim M = {}, dim N = {}",
            acc.m().dim(),
            acc.n().dim()
        ));
        Ok(report)
    }

    fn iso(&mut self) -> CliResult<Report> {
        let mut report = Report::new("isomorphism search");
        if !self.cli.module.is_empty() {
            let (a, b) = two(&self.cli.module, "module")?;
            let found = is_isomorphic_with(self.ws.module(a)?, self.ws.module(b)?, self.cli.seed)?;
            let subject = format!("{a} ≅ {b}");
            let v = match &found {
                IsoSearch::Found(m) => {
                    Verdict::new(subject, "isomorphic", true).witness("isomorphism", m)
                }
                IsoSearch::ProvenNone => {
                    Verdict::new(subject, "isomorphic", false).detail("no isomorphism exists")
                }
                IsoSearch::NotFoundSampled => Verdict::new(subject, "isomorphic", false)
                    .detail("none among sampled candidates")
                    .sampled(true),
            };
            self.lines.push(format!("isomorphic: {}", found.is_found()));
            report.push(v);
        } else {
            let (a, b) = two(&self.cli.context, "context")?;
            let ca = &self.ws.context(a)?.context;
            let cb = &self.ws.context(b)?.context;
            let subject = format!("{a} ≅ {b}");
            let v = match contexts_isomorphic(ca, cb, self.cli.seed)? {
                ContextIsoSearch::Found(iso) => {
                    self.lines.push("isomorphic: true".into());
                    Verdict::new(subject, "isomorphic contexts", iso.verify(ca, cb))
                        .witness("u", &iso.u)
                }
                ContextIsoSearch::ProvenNone => {
                    self.lines.push("isomorphic: false".into());
                    Verdict::new(subject, "isomorphic contexts", false)
                        .detail("no isomorphism exists")
                }
                ContextIsoSearch::NotFoundSampled => {
                    self.lines.push("isomorphic: false".into());
                    Verdict::new(subject, "isomorphic contexts", false)
                        .detail("none among sampled candidates")
                        .sampled(true)
                }
            };
            report.push(v);
        }
        Ok(report)
    }

    fn graded_equiv(&mut self) -> CliResult<Report> {
        let name = one(&self.cli.context, "context")?;
        let (gname, gc) = self.ws.graded_context(name, self.cli.grading.as_deref())?;
        let s_dim = self.cli.s_max_dim.unwrap_or(self.cli.max_dim);
        let cr = build_graded_catalog(&gc.r, self.cli.max_dim, &self.opts())?;
        let cs = build_graded_catalog(&gc.s, s_dim, &self.opts())?;
        let mut report = verify_graded_kato_muller(&gc, &cr, &cs, self.cli.seed)?;
        report.fact(format!("grading {gname}"));
        Ok(report)
    }

    fn catalog(&mut self) -> CliResult<Report> {
        let name = self
            .cli
            .algebra
            .clone()
            .ok_or_else(|| CliError::Usage("--algebra is required".into()))?;
        let a = self.ws.algebra(&name)?.clone();
        let cat = build_catalog_with(&a, self.cli.max_dim, &self.opts())?;
        let mut report = Report::new("isomorphism classes of modules");
        report.bound(cat.describe());
        let sampled = matches!(cat.provenance(), Provenance::Sampled { .. });
        for (n, m) in cat.iter() {
            self.lines.push(format!("{n}: dim {}", m.dim()));
            let v = m.validate().is_valid();
            report.push(Verdict::new(format!("{name}:{n}"), "valid module", v).sampled(sampled));
        }
        report.fact(format!("{} classes", cat.len()));
        Ok(report)
    }
}

fn inputs(cli: &Cli) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert(
        "workspace".into(),
        json!(cli.workspace.display().to_string()),
    );
    if !cli.context.is_empty() {
        m.insert("context".into(), json!(cli.context));
    }
    if !cli.module.is_empty() {
        m.insert("module".into(), json!(cli.module));
    }
    for (k, v) in [
        ("ideal", &cli.ideal),
        ("algebra", &cli.algebra),
        ("grading", &cli.grading),
        ("r_catalog", &cli.r_catalog),
        ("s_catalog", &cli.s_catalog),
    ] {
        if let Some(v) = v {
            m.insert(k.into(), json!(v));
        }
    }
    m.insert("max_dim".into(), json!(cli.max_dim));
    m.insert(
        "s_max_dim".into(),
        json!(cli.s_max_dim.unwrap_or(cli.max_dim)),
    );
    m.insert("budget".into(), json!(cli.budget));
    m.insert("strict_sampling".into(), json!(cli.strict_sampling));
    m
}

/// Loads the workspace and runs one command.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let ws = parse_workspace(&cli.workspace)?;
    run_on(cli, ws)
}

pub fn run_on(cli: &Cli, ws: Workspace) -> CliResult<Outcome> {
    let mut r = Run {
        cli,
        ws,
        lines: Vec::new(),
    };
    let report = r.dispatch(cli.command)?;
    let machine = MachineReport {
        command: cli.command.name().to_string(),
        inputs: inputs(cli),
        seed: cli.seed,
        theorem: report.theorem.clone(),
        bounds: report.bound.clone(),
        facts: report.facts.clone(),
        verdicts: report.verdicts.clone(),
        summary: report.summary(cli.strict_sampling),
    };
    Ok(Outcome {
        lines: r.lines,
        report,
        machine,
    })
}
