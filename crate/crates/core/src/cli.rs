//! Command-line front end: input documents, commands and report rendering.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bipyramid::{classify, eliminate_homology, standard_virtual_labeling, Classification};
use crate::chain::build_complex;
use crate::error::{Error, Result};
use crate::homology::{homology_table, Field};
use crate::labeled::LabeledComplex;
use crate::monomial::{Monomial, MonomialIdeal, ToricContext};
use crate::simplicial::{Face, SimplicialComplex};
use crate::subdivision::{apply_subdivision, compare_homology, plan_subdivision, ReductionReport};
use crate::virtualcheck::{check_virtual, Verdict, Witness};

pub const FIELD_ENV: &str = "VIRTRES_FIELD";

/// The toric variety: either the shorthand `"P n k"` for `P^n × P^k` or an
/// explicit variable list with irrelevant-ideal generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContextSpec {
    Shorthand(String),
    Explicit {
        variables: Vec<String>,
        irrelevant: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        picard: Option<Vec<Vec<i64>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLabel {
    pub face: Vec<String>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub context: ContextSpec,
    pub complex: ComplexSpec,
    pub labels: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_labels: Option<Vec<FaceLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

/// A parsed document.
#[derive(Clone, Debug)]
pub struct Input {
    pub ctx: ToricContext,
    pub labeled: LabeledComplex,
    pub field: Option<Field>,
}

impl ContextSpec {
    pub fn resolve(&self) -> Result<ToricContext> {
        match self {
            ContextSpec::Shorthand(s) => {
                let parts: Vec<&str> = s.split_whitespace().collect();
                match parts.as_slice() {
                    ["P", n, k] => {
                        let n: usize = n.parse().map_err(|_| Error::parse(*n, "expected an integer"))?;
                        let k: usize = k.parse().map_err(|_| Error::parse(*k, "expected an integer"))?;
                        Ok(ToricContext::product_of_projective(n, k))
                    }
                    _ => Err(Error::parse(s.clone(), "expected a context of the form `P n k`")),
                }
            }
            ContextSpec::Explicit {
                variables,
                irrelevant,
                picard,
            } => {
                let bare = ToricContext::new(variables.clone(), MonomialIdeal::unit(variables.len()), None)?;
                let gens = irrelevant
                    .iter()
                    .map(|g| bare.parse_monomial(g))
                    .collect::<Result<Vec<_>>>()?;
                ToricContext::new(
                    variables.clone(),
                    MonomialIdeal::new(variables.len(), gens)?,
                    picard.clone(),
                )
            }
        }
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        serde_json::from_str(text).map_err(|e| Error::parse(json_token(text, &e), e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Document> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        Document::parse(&text)
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn resolve(&self) -> Result<Input> {
        let ctx = self.context.resolve()?;
        let complex = SimplicialComplex::new(&self.complex.vertices, &self.complex.facets)?;
        let mut labels: Vec<(String, Monomial)> = Vec::with_capacity(self.labels.len());
        for (v, m) in &self.labels {
            labels.push((v.clone(), ctx.parse_monomial(m)?));
        }
        let vertex_labeled = LabeledComplex::from_vertex_labels(complex.clone(), ctx.nvars(), labels)?;
        let labeled = match &self.face_labels {
            None => vertex_labeled,
            Some(extra) => {
                let mut all: Vec<Monomial> = vertex_labeled.labels().to_vec();
                let faces = complex.all_faces();
                let mut given = vec![false; faces.len()];
                for fl in extra {
                    let face = complex.face_from_names(&fl.face)?;
                    let i = complex
                        .face_index(face)
                        .ok_or_else(|| Error::invalid(format!("{} is not a face", complex.render_face(face))))?;
                    all[i] = ctx.parse_monomial(&fl.label)?;
                    given[i] = true;
                }
                if let Some(i) = (0..faces.len()).find(|&i| faces[i].len() >= 2 && !given[i]) {
                    return Err(Error::invalid(format!(
                        "face {} has no label",
                        complex.render_face(faces[i])
                    )));
                }
                LabeledComplex::new(complex, ctx.nvars(), all)?
            }
        };
        let field = self.field.as_deref().map(Field::parse).transpose()?;
        Ok(Input { ctx, labeled, field })
    }

    /// A document for `l` keeping the context and field of `self`.
    pub fn with_complex(&self, ctx: &ToricContext, l: &LabeledComplex) -> Document {
        Document {
            context: self.context.clone(),
            complex: complex_spec(l.complex()),
            labels: l
                .vertex_label_map()
                .into_iter()
                .map(|(v, m)| (v, ctx.render_monomial(&m)))
                .collect(),
            face_labels: None,
            field: self.field.clone(),
        }
    }
}

fn complex_spec(k: &SimplicialComplex) -> ComplexSpec {
    ComplexSpec {
        vertices: k.vertices().into_iter().map(|v| k.vertex_name(v).to_string()).collect(),
        facets: k
            .facets()
            .iter()
            .map(|&f| k.face_names(f).into_iter().map(str::to_string).collect())
            .collect(),
    }
}

fn json_token(text: &str, e: &serde_json::Error) -> String {
    let line = text.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
    let start = e.column().saturating_sub(1).min(line.len());
    let token: String = line[start..].chars().take(24).collect();
    if token.trim().is_empty() {
        line.trim().to_string()
    } else {
        token.trim().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "virtres", version, about = "Virtual resolutions from labeled simplicial complexes")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Coefficient field: `QQ`, `GF(p)` or a prime. Overrides the document
    /// and the VIRTRES_FIELD environment variable.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Print progress and details to stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide freeness and virtuality, and list the homology of F_Δ.
    Check { file: PathBuf },
    /// Subdivide a face at a new labeled vertex.
    Subdivide(SubdivideArgs),
    /// Print the vertex-label ideal, the irrelevant ideal and the saturation.
    Saturate { file: PathBuf },
    /// Bipyramid labelings over a product of two projective spaces.
    #[command(subcommand)]
    Bipyramid(BipyramidCommand),
    /// Print the differentials of F_Δ.
    Matrices { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct SubdivideArgs {
    pub file: PathBuf,
    /// Comma-separated vertex names of the face to subdivide.
    #[arg(long, value_delimiter = ',', required = true)]
    pub face: Vec<String>,
    /// Label of the new vertex.
    #[arg(long)]
    pub label: String,
    /// Name of the new vertex.
    #[arg(long)]
    pub vertex: Option<String>,
    /// Check the injectivity hypothesis and compare homology before and after.
    #[arg(long)]
    pub verify: bool,
    /// Write the subdivided document here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BipyramidCommand {
    /// Classify a bipyramid labeling.
    Classify { file: PathBuf },
    /// Subdivide the base to obtain a free resolution.
    Eliminate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The standard virtual non-free labeling over P^n × P^k.
    Standard { n: usize, k: usize },
}

/// Exit status for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TheoremViolation(_) => 2,
        _ => 1,
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let env_field = std::env::var(FIELD_ENV).ok();
    match execute(&cli, env_field.as_deref(), out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Session<'a> {
    format: Format,
    verbose: u8,
    field_flag: Option<&'a str>,
    env_field: Option<&'a str>,
}

impl Session<'_> {
    fn field(&self, doc: Option<Field>) -> Result<Field> {
        if let Some(f) = self.field_flag {
            return Field::parse(f);
        }
        if let Some(f) = doc {
            return Ok(f);
        }
        match self.env_field {
            Some(f) if !f.trim().is_empty() => Field::parse(f),
            _ => Ok(Field::default()),
        }
    }

    fn load(&self, path: &Path, err: &mut dyn Write) -> Result<(Document, Input, Field)> {
        let doc = Document::load(path)?;
        let input = doc.resolve()?;
        let field = self.field(input.field)?;
        if self.verbose > 0 {
            let _ = writeln!(
                err,
                "loaded {}: {} vertices, {} facets, field {field}",
                path.display(),
                input.labeled.complex().num_vertices(),
                input.labeled.complex().facets().len()
            );
        }
        Ok((doc, input, field))
    }
}

fn execute(cli: &Cli, env_field: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let s = Session {
        format: cli.format,
        verbose: cli.verbose,
        field_flag: cli.field.as_deref(),
        env_field,
    };
    let text = match &cli.command {
        Command::Check { file } => {
            let (_, input, field) = s.load(file, err)?;
            check_command(&s, &input, field)?
        }
        Command::Subdivide(args) => {
            let (doc, input, field) = s.load(&args.file, err)?;
            subdivide_command(&s, &doc, &input, field, args, err)?
        }
        Command::Saturate { file } => {
            let (_, input, _) = s.load(file, err)?;
            saturate_command(&s, &input)?
        }
        Command::Matrices { file } => {
            let (_, input, _) = s.load(file, err)?;
            matrices_command(&s, &input)
        }
        Command::Bipyramid(b) => bipyramid_command(&s, b, err)?,
    };
    out.write_all(text.as_bytes())
        .map_err(|e| Error::invalid(format!("cannot write output: {e}")))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn witness_json(ctx: &ToricContext, w: &Witness) -> Value {
    json!({ "index": w.index, "degree": ctx.render_monomial(&w.degree), "dim": w.dim })
}

fn verdict_json(ctx: &ToricContext, v: &Verdict) -> Value {
    json!({
        "virtual": v.is_virtual,
        "free": v.is_free,
        "field": v.field.to_string(),
        "generators": v.generators.iter().map(|g| json!({
            "generator": ctx.render_monomial(&g.generator),
            "free": g.is_free,
            "witnesses": g.witnesses.iter().map(|w| witness_json(ctx, w)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn check_command(s: &Session, input: &Input, field: Field) -> Result<String> {
    let (ctx, l) = (&input.ctx, &input.labeled);
    let verdict = check_virtual(l, ctx, field)?;
    let table = homology_table(l, field, false);
    let ranks = build_complex(l).ranks();
    let k = l.complex();
    Ok(match s.format {
        Format::Json => {
            let mut v = verdict_json(ctx, &verdict);
            v["ranks"] = json!(ranks);
            v["homology"] = table
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "index": e.index,
                        "degree": ctx.render_monomial(&e.degree),
                        "dim": e.dim,
                        "generators": e.representatives.iter().map(|c| c.render(k)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json_text(&v)
        }
        Format::Text => {
            let mut t = format!("virtual: {}, free: {}\n", verdict.is_virtual, verdict.is_free);
            for e in &table.entries {
                let reps: Vec<String> = e.representatives.iter().map(|c| c.render(k)).collect();
                t.push_str(&format!(
                    "H_{} @ {} dim {}: {}\n",
                    e.index,
                    ctx.render_monomial(&e.degree),
                    e.dim,
                    reps.join(", ")
                ));
            }
            if let Some(w) = verdict.failure() {
                t.push_str(&format!(
                    "persistent: H_{} @ {} dim {}\n",
                    w.index,
                    ctx.render_monomial(&w.degree),
                    w.dim
                ));
            }
            let r: Vec<String> = ranks.iter().map(|r| r.to_string()).collect();
            t.push_str(&format!("ranks: ({})\n", r.join(",")));
            t
        }
    })
}

fn reduction_json(ctx: &ToricContext, r: &ReductionReport) -> Value {
    json!({
        "hypothesis": {
            "passed": r.hypothesis.passed,
            "degrees_checked": r.hypothesis.degrees_checked,
            "failures": r.hypothesis.failures.iter().map(|f| json!({
                "degree": ctx.render_monomial(&f.degree),
                "index": f.index,
                "kernel_dim": f.kernel_dim,
            })).collect::<Vec<_>>(),
        },
        "rows": r.rows.iter().filter(|row| row.index >= 1).map(|row| json!({
            "index": row.index,
            "degree": ctx.render_monomial(&row.degree),
            "before": row.before,
            "after": row.after,
            "strict": row.strict,
        })).collect::<Vec<_>>(),
    })
}

fn write_document(path: &Path, doc: &Document) -> Result<()> {
    std::fs::write(path, doc.render())
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

fn subdivide_command(
    s: &Session,
    doc: &Document,
    input: &Input,
    field: Field,
    args: &SubdivideArgs,
    err: &mut dyn Write,
) -> Result<String> {
    let (ctx, l) = (&input.ctx, &input.labeled);
    let omega: Face = l.complex().face_from_names(&args.face)?;
    let label = ctx.parse_monomial(&args.label)?;
    let plan = plan_subdivision(l, omega, label, args.vertex.as_deref(), ctx)?;
    plan.validate(l, ctx)?;
    let sub = apply_subdivision(l, &plan)?;
    let new_doc = doc.with_complex(ctx, &sub);
    let verdict = check_virtual(&sub, ctx, field)?;
    let report = if args.verify {
        let r = compare_homology(l, &sub, &plan, field)?;
        if r.hypothesis.passed && !r.holds() {
            return Err(Error::violation(
                "homology increased although the injectivity hypothesis holds",
            ));
        }
        Some(r)
    } else {
        None
    };
    if s.verbose > 0 {
        let _ = writeln!(
            err,
            "subdivided {} at {} labeled {}",
            l.complex().render_face(omega),
            plan.vertex,
            ctx.render_monomial(&plan.label)
        );
    }
    if let Some(path) = &args.output {
        write_document(path, &new_doc)?;
    }
    let ranks = build_complex(&sub).ranks();
    Ok(match s.format {
        Format::Json => {
            let mut v = json!({
                "face": args.face,
                "vertex": plan.vertex,
                "label": ctx.render_monomial(&plan.label),
                "compatible": plan.is_virtual_compatible(),
                "ranks": ranks,
                "result": verdict_json(ctx, &verdict),
            });
            if let Some(r) = &report {
                v["verification"] = reduction_json(ctx, r);
            }
            if args.output.is_none() {
                v["document"] = serde_json::to_value(&new_doc).expect("documents serialize");
            }
            json_text(&v)
        }
        Format::Text => {
            let r: Vec<String> = ranks.iter().map(|r| r.to_string()).collect();
            let mut t = format!(
                "subdivided {} at {} = {}: virtual compatible\nresult: virtual: {}, free: {}, ranks: ({})\n",
                l.complex().render_face(omega),
                plan.vertex,
                ctx.render_monomial(&plan.label),
                verdict.is_virtual,
                verdict.is_free,
                r.join(",")
            );
            if let Some(rep) = &report {
                if rep.hypothesis.passed {
                    t.push_str(&format!(
                        "hypothesis: pass ({} degrees)\nverification: pass\n",
                        rep.hypothesis.degrees_checked
                    ));
                } else {
                    for f in &rep.hypothesis.failures {
                        t.push_str(&format!(
                            "hypothesis: fail at {} in reduced degree {}\n",
                            ctx.render_monomial(&f.degree),
                            f.index
                        ));
                    }
                }
                for row in rep.rows.iter().filter(|r| r.index >= 1) {
                    let tag = if row.after > row.before {
                        " (new)"
                    } else if row.after < row.before {
                        " (drop)"
                    } else {
                        ""
                    };
                    t.push_str(&format!(
                        "H_{} @ {}: {} -> {}{tag}\n",
                        row.index,
                        ctx.render_monomial(&row.degree),
                        row.before,
                        row.after
                    ));
                }
            }
            if args.output.is_none() {
                t.push_str(&new_doc.render());
            }
            t
        }
    })
}

fn saturate_command(s: &Session, input: &Input) -> Result<String> {
    let ctx = &input.ctx;
    let i = input.labeled.vertex_ideal();
    let b = ctx.irrelevant();
    let sat = i.saturate(b)?;
    Ok(match s.format {
        Format::Json => json_text(&json!({
            "ideal": i.generators().iter().map(|g| ctx.render_monomial(g)).collect::<Vec<_>>(),
            "irrelevant": b.generators().iter().map(|g| ctx.render_monomial(g)).collect::<Vec<_>>(),
            "saturation": sat.generators().iter().map(|g| ctx.render_monomial(g)).collect::<Vec<_>>(),
        })),
        Format::Text => format!(
            "I = {}\nB = {}\nI : B^inf = {}\n",
            ctx.render_ideal(&i),
            ctx.render_ideal(b),
            ctx.render_ideal(&sat)
        ),
    })
}

fn matrices_command(s: &Session, input: &Input) -> String {
    let (ctx, l) = (&input.ctx, &input.labeled);
    let f = build_complex(l);
    match s.format {
        Format::Text => f.render(ctx),
        Format::Json => {
            let k = l.complex();
            let diffs: Vec<Value> = (1..f.len())
                .map(|i| {
                    let d = f.differential(i).expect("in range");
                    let rows: Vec<Vec<String>> = (0..d.rows)
                        .map(|r| {
                            (0..d.cols)
                                .map(|c| match d.entry(r, c) {
                                    None => "0".to_string(),
                                    Some(e) if e.sign < 0 => format!("-{}", ctx.render_monomial(&e.coeff)),
                                    Some(e) => ctx.render_monomial(&e.coeff),
                                })
                                .collect()
                        })
                        .collect();
                    json!({
                        "index": i,
                        "rows": f.terms()[i - 1].iter().map(|g| k.render_face(g.face)).collect::<Vec<_>>(),
                        "columns": f.terms()[i].iter().map(|g| k.render_face(g.face)).collect::<Vec<_>>(),
                        "matrix": rows,
                    })
                })
                .collect();
            json_text(&json!({ "ranks": f.ranks(), "differentials": diffs }))
        }
    }
}

fn bipyramid_command(s: &Session, b: &BipyramidCommand, err: &mut dyn Write) -> Result<String> {
    match b {
        BipyramidCommand::Classify { file } => {
            let (_, input, field) = s.load(file, err)?;
            let (ctx, l) = (&input.ctx, &input.labeled);
            let c = classify(l, ctx, field)?;
            let k = l.complex();
            let detail = match &c.classification {
                Classification::NotVirtual => json!({}),
                Classification::VirtualCase1 { vertex } => json!({ "vertex": k.vertex_name(*vertex) }),
                Classification::VirtualCase2 { block, splits } => json!({
                    "block": block,
                    "splits": splits.iter().map(|sp| json!({
                        "vertex": k.vertex_name(sp.vertex),
                        "variable": ctx.variable_names()[sp.variable],
                        "exponent": sp.exponent,
                        "cofactor": ctx.render_monomial(&sp.cofactor),
                    })).collect::<Vec<_>>(),
                }),
            };
            Ok(match s.format {
                Format::Json => json_text(&json!({
                    "verdict": c.classification.name(),
                    "apexes": [k.vertex_name(c.apexes.0), k.vertex_name(c.apexes.1)],
                    "apex_lcm": ctx.render_monomial(&c.apex_lcm),
                    "witness": detail,
                })),
                Format::Text => {
                    let mut t = format!(
                        "{}\napexes: {}, {} (lcm {})\n",
                        c.classification.name(),
                        k.vertex_name(c.apexes.0),
                        k.vertex_name(c.apexes.1),
                        ctx.render_monomial(&c.apex_lcm)
                    );
                    match &c.classification {
                        Classification::VirtualCase1 { vertex } => {
                            t.push_str(&format!("{} divides the apex lcm\n", k.vertex_name(*vertex)));
                        }
                        Classification::VirtualCase2 { splits, .. } => {
                            for sp in splits {
                                let power = Monomial::variable(ctx.nvars(), sp.variable)
                                    .pow(sp.exponent)
                                    .expect("exponent fits");
                                t.push_str(&format!(
                                    "{} = {} * {}\n",
                                    k.vertex_name(sp.vertex),
                                    ctx.render_monomial(&power),
                                    ctx.render_monomial(&sp.cofactor)
                                ));
                            }
                        }
                        Classification::NotVirtual => {}
                    }
                    t
                }
            })
        }
        BipyramidCommand::Eliminate { file, output } => {
            let (doc, input, field) = s.load(file, err)?;
            let (ctx, l) = (&input.ctx, &input.labeled);
            let e = eliminate_homology(l, ctx, field)?;
            let new_doc = doc.with_complex(ctx, &e.result);
            if let Some(path) = output {
                write_document(path, &new_doc)?;
            }
            let label = ctx.render_monomial(&e.plan.label);
            Ok(match s.format {
                Format::Json => {
                    let mut v = json!({
                        "vertex": e.plan.vertex,
                        "label": label,
                        "ranks": build_complex(&e.result).ranks(),
                        "free": true,
                    });
                    if output.is_none() {
                        v["document"] = serde_json::to_value(&new_doc).expect("documents serialize");
                    }
                    json_text(&v)
                }
                Format::Text => {
                    let mut t = format!(
                        "subdivided {} at {} = {}: free\n",
                        l.complex().render_face(e.plan.omega),
                        e.plan.vertex,
                        label
                    );
                    if output.is_none() {
                        t.push_str(&new_doc.render());
                    }
                    t
                }
            })
        }
        BipyramidCommand::Standard { n, k } => {
            let (ctx, l) = standard_virtual_labeling(*n, *k)?;
            let doc = Document {
                context: ContextSpec::Shorthand(format!("P {n} {k}")),
                complex: complex_spec(l.complex()),
                labels: BTreeMap::new(),
                face_labels: None,
                field: None,
            }
            .with_complex(&ctx, &l);
            Ok(doc.render())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{
  "context": "P 2 1",
  "complex": {
    "vertices": ["v0", "w0", "w1", "v1"],
    "facets": [["v0", "w0", "v1"], ["v0", "w1", "v1"]]
  },
  "labels": {"v0": "x0*y0", "w0": "x1*x2", "w1": "x0*x2^2", "v1": "x1*y1"}
}"#;

    #[test]
    fn documents_round_trip() {
        let doc = Document::parse(FIG1).unwrap();
        assert_eq!(Document::parse(&doc.render()).unwrap(), doc);
        let input = doc.resolve().unwrap();
        assert_eq!(input.labeled.complex().num_vertices(), 4);
        let again = doc.with_complex(&input.ctx, &input.labeled);
        assert_eq!(again, doc);
    }

    #[test]
    fn explicit_context() {
        let ctx = ContextSpec::Explicit {
            variables: vec!["a".into(), "b".into()],
            irrelevant: vec!["a".into(), "b".into()],
            picard: None,
        }
        .resolve()
        .unwrap();
        assert_eq!(ctx.irrelevant().generators().len(), 2);
        assert!(ContextSpec::Shorthand("Q 1 1".into()).resolve().is_err());
    }

    #[test]
    fn bad_label_names_the_token() {
        let text = FIG1.replace("x1*x2\"", "x1*z7\"");
        let e = Document::parse(&text).unwrap().resolve().unwrap_err();
        assert!(e.to_string().contains("z7"), "{e}");
    }

    #[test]
    fn field_precedence() {
        let s = Session {
            format: Format::Text,
            verbose: 0,
            field_flag: None,
            env_field: Some("GF(7)"),
        };
        assert_eq!(s.field(None).unwrap(), Field::Prime(7));
        assert_eq!(s.field(Some(Field::Prime(5))).unwrap(), Field::Prime(5));
        let s = Session { field_flag: Some("QQ"), ..s };
        assert_eq!(s.field(Some(Field::Prime(5))).unwrap(), Field::Rational);
    }
}
