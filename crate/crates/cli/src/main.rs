mod error;
mod input;
mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use burnside_witt::group::{class_table, ClosedFamily, ConjClassTable, GroupDescriptor, Subgroup, SubgroupEmbedding};
use burnside_witt::ring::Ring;
use burnside_witt::selftest;
use burnside_witt::spans::{GroupAction, Span};
use burnside_witt::tower::{QuotientTower, TowerElement};
use burnside_witt::witt::{burnside_embed, unipoly, GhostVector, WittVector};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use error::CliError;
use input::Context;

#[derive(Parser)]
#[command(name = "bwitt", version, about = "Burnside-Witt vectors, spans and quotient towers")]
struct Cli {
    /// Group descriptor: inline JSON or a file, e.g. '{"abelian":[2,2]}'
    #[arg(long, global = true, env = "BWITT_GROUP")]
    group: Option<String>,
    /// Ring descriptor: '{"int":true}', '{"mod":4}' or '{"poly":["x","y"]}'
    #[arg(long, global = true, env = "BWITT_RING")]
    ring: Option<String>,
    /// Closed family: `all` or a JSON list of class ids
    #[arg(long, global = true, env = "BWITT_FAMILY")]
    family: Option<String>,
    /// Directory for cached universal polynomials
    #[arg(long, global = true, env = "BWITT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, env = "BWITT_OUTPUT", value_enum, default_value_t = Format::Json)]
    output: Format,
    /// Seed for randomized commands
    #[arg(long, global = true, env = "BWITT_SEED", default_value_t = 0)]
    seed: u64,
    /// Largest group order accepted
    #[arg(long, global = true, env = "BWITT_GROUP_ORDER_CAP", default_value_t = 255,
          value_parser = clap::value_parser!(u64).range(1..))]
    group_order_cap: u64,
    /// Largest group order for which universal polynomials are generated
    #[arg(long, global = true, env = "BWITT_UNIPOLY_CAP", default_value_t = 16,
          value_parser = clap::value_parser!(u64).range(1..))]
    unipoly_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Subgroup classes and marks of a finite group
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Burnside-Witt vector operations
    Witt {
        #[command(subcommand)]
        cmd: WittCmd,
    },
    /// Spans of finite sets
    Span {
        #[command(subcommand)]
        cmd: SpanCmd,
    },
    /// Quotient towers (Z/p^j)^n
    Tower {
        #[command(subcommand)]
        cmd: TowerCmd,
    },
    /// Run the randomized invariant suites
    Selftest {
        /// Run only the named suites (repeatable)
        #[arg(long = "suite", value_parser = clap::builder::PossibleValuesParser::new(selftest::SUITES))]
        suites: Vec<String>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, hash and element labels
    Info,
    /// Conjugacy classes of subgroups in canonical order
    Classes,
    /// Table of marks
    Marks,
}

#[derive(Subcommand)]
enum WittCmd {
    /// Ghost components of a Witt vector
    Ghost { x: String },
    /// Witt vector with the given ghost components
    FromGhost { w: String },
    /// Sum of two Witt vectors
    Add { x: String, y: String },
    /// Product of two Witt vectors
    Mul { x: String, y: String },
    /// Additive inverse
    Neg { x: String },
    /// Teichmueller vector of a ring element
    Teich { b: String },
    /// Frobenius to a subgroup
    Frob {
        x: String,
        /// Class id (`c2`) or JSON list of element indices
        #[arg(long)]
        subgroup: String,
    },
    /// Verschiebung from a subgroup; the vector's group must be a subgroup
    /// descriptor. --family selects the target family
    Versch { y: String },
    /// Restriction to the quotient by a normal subgroup
    Restrict {
        x: String,
        /// Class id of the normal subgroup
        #[arg(long)]
        normal: String,
    },
    /// Drop coordinates outside --family
    Truncate { x: String },
    /// Witt vector of a finite G-set given by orbit multiplicities, e.g. '{"c1":2}'
    Embed { multiplicities: String },
}

#[derive(Subcommand)]
enum SpanCmd {
    /// Composite by pullback
    Compose {
        s: String,
        t: String,
        /// Compose as relations (support of the composite)
        #[arg(long)]
        rel: bool,
    },
    /// Support of a span
    L { s: String },
    /// Span into X/G to the fixed span into X
    Transport {
        s: String,
        /// Action document
        #[arg(long)]
        action: String,
        /// Fixed span into X back to the span into X/G
        #[arg(long)]
        inverse: bool,
    },
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Levels, projections and embeddings
    Build {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        depth: usize,
    },
    /// R-compatibility of a tower element (array of Witt vectors, lowest level first)
    Check {
        element: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Additive order of one at each level of the cyclic tower
    Probe {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        depth: usize,
    },
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Output {
        Output { json, text, ok: true }
    }

    fn generic(json: Value) -> Output {
        let text = text::generic(&json);
        Output::new(json, text)
    }
}

struct App {
    cli: Cli,
    ctx: Context,
    cap: usize,
}

fn flag_value(raw: &Option<String>) -> Result<Option<Value>, CliError> {
    match raw.as_deref() {
        None => Ok(None),
        Some("all") => Ok(Some(json!("all"))),
        Some(s) => input::read(s).map(Some),
    }
}

fn witt_output(x: &WittVector) -> Output {
    let text = text::vector("coord", x.table(), x.ring(), x.family().ids(), x.values());
    Output::new(x.to_json(), text)
}

fn ghost_output(w: &GhostVector) -> Output {
    let text = text::vector("ghost", w.table(), w.ring(), w.family().ids(), w.values());
    Output::new(w.to_json(), text)
}

fn span_output(s: &Span) -> Output {
    let rows: Vec<Vec<String>> = s
        .matrix()
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect())
        .collect();
    let text = format!("{} => {}\n{}", s.dom(), s.cod(), text::table(&rows));
    Output::new(s.to_json(), text)
}

impl App {
    fn table(&self, desc: &Value) -> Result<Arc<ConjClassTable>, CliError> {
        let d = GroupDescriptor::from_json(desc).map_err(|e| CliError::Input(format!("group descriptor: {e}")))?;
        Ok(class_table(&d, self.cap)?)
    }

    fn ring(&self) -> Result<Ring, CliError> {
        Ok(Ring::from_json(self.ctx.ring()?)?)
    }

    fn family(&self, t: &ConjClassTable) -> Result<ClosedFamily, CliError> {
        match &self.ctx.family {
            Some(f) => Ok(ClosedFamily::from_json(t, f)?),
            None => Ok(ClosedFamily::all(t)),
        }
    }

    /// Reads a Witt vector; with `use_family` the --family flag fills a
    /// missing `family` field.
    fn witt(&self, src: &str, use_family: bool) -> Result<WittVector, CliError> {
        let ctx = Context {
            group: self.ctx.group.clone(),
            ring: self.ctx.ring.clone(),
            family: self.ctx.family.clone().filter(|_| use_family),
        };
        let doc = ctx.complete(input::read(src)?, "coords")?;
        Ok(WittVector::from_json_with_cap(&doc, self.cap)?)
    }

    fn ghost(&self, src: &str) -> Result<GhostVector, CliError> {
        let doc = self.ctx.complete(input::read(src)?, "ghost")?;
        Ok(GhostVector::from_json_with_cap(&doc, self.cap)?)
    }

    fn span(&self, src: &str) -> Result<Span, CliError> {
        Ok(Span::from_json(&input::read(src)?)?)
    }

    fn run(&self) -> Result<Output, CliError> {
        match &self.cli.command {
            Command::Group { cmd } => self.group_cmd(cmd),
            Command::Witt { cmd } => self.witt_cmd(cmd),
            Command::Span { cmd } => self.span_cmd(cmd),
            Command::Tower { cmd } => self.tower_cmd(cmd),
            Command::Selftest { suites } => {
                let names: Vec<&str> = if suites.is_empty() {
                    selftest::SUITES.to_vec()
                } else {
                    suites.iter().map(String::as_str).collect()
                };
                let report = selftest::run_suites(self.cli.seed, &names);
                let mut rows = vec![vec![
                    "suite".into(),
                    "checks".into(),
                    "failures".into(),
                    "status".into(),
                ]];
                for s in &report.suites {
                    rows.push(vec![
                        s.name.clone(),
                        s.checks.to_string(),
                        s.failures.to_string(),
                        if s.passed() { "ok".into() } else { "FAILED".into() },
                    ]);
                }
                let mut text = format!("seed {}\n\n{}", report.seed, text::table(&rows));
                for s in report.suites.iter().filter(|s| !s.passed()) {
                    text.push_str(&format!("{}: {}\n", s.name, s.first_failure.as_deref().unwrap_or("")));
                }
                let json = serde_json::to_value(&report).expect("report serializes");
                Ok(Output {
                    json,
                    text,
                    ok: report.passed,
                })
            }
        }
    }

    fn group_cmd(&self, cmd: &GroupCmd) -> Result<Output, CliError> {
        let t = self.table(self.ctx.group()?)?;
        let g = t.group();
        let ids: Vec<String> = (0..t.num_classes()).map(ConjClassTable::class_id).collect();
        let labels: Vec<String> = t.classes().iter().map(|c| c.label.clone()).collect();
        match cmd {
            GroupCmd::Info => Ok(Output::generic(json!({
                "group": g.origin().to_json(),
                "order": g.order(),
                "abelian": g.is_abelian(),
                "hash": g.canonical_hash(),
                "subgroups": t.subgroups().len(),
                "classes": t.num_classes(),
                "elements": (0..g.order()).map(|a| g.label(a)).collect::<Vec<_>>(),
            }))),
            GroupCmd::Classes => {
                let normal = t.normal_classes();
                let classes: Vec<Value> = t
                    .classes()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        json!({
                            "id": ids[i],
                            "label": c.label,
                            "order": c.subgroup_order,
                            "size": c.size(),
                            "weyl_order": c.weyl_order,
                            "normal": normal.contains(&i),
                            "representative": t.representative(i).elements(),
                        })
                    })
                    .collect();
                let mut rows = vec![["class", "label", "order", "size", "weyl", "normal"]
                    .map(String::from)
                    .to_vec()];
                for (i, c) in t.classes().iter().enumerate() {
                    rows.push(vec![
                        ids[i].clone(),
                        c.label.clone(),
                        c.subgroup_order.to_string(),
                        c.size().to_string(),
                        c.weyl_order.to_string(),
                        if normal.contains(&i) { "yes".into() } else { "no".into() },
                    ]);
                }
                Ok(Output::new(
                    json!({"group": g.origin().to_json(), "classes": classes}),
                    text::table(&rows),
                ))
            }
            GroupCmd::Marks => {
                let mut rows = vec![std::iter::once(String::new())
                    .chain(labels.iter().cloned())
                    .collect::<Vec<_>>()];
                for (i, row) in t.marks().iter().enumerate() {
                    rows.push(
                        std::iter::once(labels[i].clone())
                            .chain(row.iter().map(u64::to_string))
                            .collect(),
                    );
                }
                Ok(Output::new(
                    json!({"group": g.origin().to_json(), "classes": ids, "labels": labels, "marks": t.marks()}),
                    text::table(&rows),
                ))
            }
        }
    }

    fn witt_cmd(&self, cmd: &WittCmd) -> Result<Output, CliError> {
        match cmd {
            WittCmd::Ghost { x } => Ok(ghost_output(&self.witt(x, true)?.ghost())),
            WittCmd::FromGhost { w } => Ok(witt_output(&WittVector::from_ghost(&self.ghost(w)?)?)),
            WittCmd::Add { x, y } => Ok(witt_output(&self.witt(x, true)?.try_add(&self.witt(y, true)?)?)),
            WittCmd::Mul { x, y } => Ok(witt_output(&self.witt(x, true)?.try_mul(&self.witt(y, true)?)?)),
            WittCmd::Neg { x } => Ok(witt_output(&self.witt(x, true)?.try_neg()?)),
            WittCmd::Teich { b } => {
                let t = self.table(self.ctx.group()?)?;
                let ring = self.ring()?;
                let b = ring.element_from_json(&input::read(b)?)?;
                Ok(witt_output(&WittVector::teichmueller(t.clone(), self.family(&t)?, &b)?))
            }
            WittCmd::Frob { x, subgroup } => {
                let x = self.witt(x, true)?;
                let t = x.table();
                let e = if subgroup.starts_with('c') {
                    SubgroupEmbedding::of_class(t, t.parse_class_id(subgroup)?)?
                } else {
                    let elements: Vec<usize> = serde_json::from_value(input::read(subgroup)?)
                        .map_err(|e| CliError::Input(format!("--subgroup: {e}")))?;
                    SubgroupEmbedding::of_subgroup(t, &Subgroup::new(t.group(), elements)?)?
                };
                Ok(witt_output(&x.frobenius(&e)?))
            }
            WittCmd::Versch { y } => {
                let y = self.witt(y, false)?;
                let GroupDescriptor::Subgroup { of, class, elements } = y.table().group().origin() else {
                    return Err(CliError::Input(
                        "versch needs a vector over a subgroup descriptor {\"subgroup\": {\"of\": .., \"class\": ..}}"
                            .into(),
                    ));
                };
                let parent = class_table(of, self.cap)?;
                let e = match (class, elements) {
                    (Some(c), _) => SubgroupEmbedding::of_class(&parent, parent.parse_class_id(c)?)?,
                    (None, Some(els)) => {
                        SubgroupEmbedding::of_subgroup(&parent, &Subgroup::new(parent.group(), els.clone())?)?
                    }
                    (None, None) => return Err(CliError::Input("subgroup descriptor names no subgroup".into())),
                };
                let target = self.family(&parent)?;
                Ok(witt_output(&y.verschiebung(&e, &target)?))
            }
            WittCmd::Restrict { x, normal } => {
                let x = self.witt(x, true)?;
                let n = x.table().parse_class_id(normal)?;
                Ok(witt_output(&x.restriction_to_quotient(n)?.1))
            }
            WittCmd::Truncate { x } => {
                let x = self.witt(x, false)?;
                let f = self
                    .ctx
                    .family
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("truncate needs --family".into()))?;
                let sub = ClosedFamily::from_json(x.table(), f)?;
                Ok(witt_output(&x.truncate(&sub)?))
            }
            WittCmd::Embed { multiplicities } => {
                let t = self.table(self.ctx.group()?)?;
                let doc = input::read(multiplicities)?;
                let obj = doc
                    .as_object()
                    .ok_or_else(|| CliError::Input("multiplicities must be an object {\"c1\": 2, ..}".into()))?;
                let mut mult = Vec::with_capacity(obj.len());
                for (k, v) in obj {
                    let m = v
                        .as_u64()
                        .ok_or_else(|| CliError::Input(format!("multiplicity of {k} is not a non-negative integer")))?;
                    mult.push((t.parse_class_id(k)?, m));
                }
                Ok(witt_output(&burnside_embed(&t, &mult)?))
            }
        }
    }

    fn span_cmd(&self, cmd: &SpanCmd) -> Result<Output, CliError> {
        match cmd {
            SpanCmd::Compose { s, t, rel } => {
                let (s, t) = (self.span(s)?, self.span(t)?);
                let out = if *rel { s.compose_rel(&t)? } else { s.compose(&t)? };
                Ok(span_output(&out))
            }
            SpanCmd::L { s } => Ok(span_output(&self.span(s)?.l_image())),
            SpanCmd::Transport { s, action, inverse } => {
                let act = GroupAction::from_json(&input::read(action)?, self.cap)?;
                let s = self.span(s)?;
                let out = if *inverse {
                    act.transport_inverse(&s)?
                } else {
                    act.transport(&s)?
                };
                Ok(span_output(&out))
            }
        }
    }

    fn tower_cmd(&self, cmd: &TowerCmd) -> Result<Output, CliError> {
        match cmd {
            TowerCmd::Build { n, p, depth } => {
                let t = QuotientTower::build(*n, *p, *depth, self.cap)?;
                let levels: Vec<Value> = t
                    .levels()
                    .iter()
                    .enumerate()
                    .map(|(j, l)| {
                        json!({
                            "level": j,
                            "group": l.group().origin().to_json(),
                            "order": l.group().order(),
                            "classes": l.num_classes(),
                        })
                    })
                    .collect();
                let mut edges = Vec::new();
                for j in 0..*depth {
                    let q = t.projection(j)?;
                    let e = t.embedding(j)?;
                    let image = t.levels()[j + 1].class_of(e.image()).map(ConjClassTable::class_id);
                    edges.push(json!({
                        "from": j + 1,
                        "to": j,
                        "kernel_order": q.kernel().order(),
                        "frobenius_subgroup": image,
                    }));
                }
                let mut rows = vec![["level", "order", "classes"].map(String::from).to_vec()];
                for (j, l) in t.levels().iter().enumerate() {
                    rows.push(vec![
                        j.to_string(),
                        l.group().order().to_string(),
                        l.num_classes().to_string(),
                    ]);
                }
                Ok(Output::new(
                    json!({"n": n, "p": p, "depth": depth, "levels": levels, "edges": edges}),
                    text::table(&rows),
                ))
            }
            TowerCmd::Check { element, n, p } => {
                let e = TowerElement::from_json(&input::read(element)?, self.cap)?;
                let depth = e.vectors.len() - 1;
                let (n, p) = match (n, p) {
                    (Some(n), Some(p)) => (*n, *p),
                    _ => infer_tower(&e).ok_or_else(|| {
                        CliError::Usage("cannot read n and p off the element; pass --n and --p".into())
                    })?,
                };
                let t = QuotientTower::build(n, p, depth, self.cap)?;
                let r = t.check_element(&e)?;
                Ok(Output::generic(json!({
                    "n": n,
                    "p": p,
                    "depth": depth,
                    "compatible": r.compatible(),
                    "steps": r.steps,
                    "first_failure": r.first_failure,
                })))
            }
            TowerCmd::Probe { p, depth } => {
                let t = QuotientTower::build(1, *p, *depth, self.cap)?;
                let ring = match &self.ctx.ring {
                    Some(r) => Ring::from_json(r)?,
                    None => Ring::modulo(*p)?,
                };
                let mut orders = Vec::new();
                let mut rows = vec![["level", "group_order", "additive_order"].map(String::from).to_vec()];
                for j in 0..=*depth {
                    let k = t.additive_order_probe(&ring, j)?;
                    let order = t.levels()[j].group().order();
                    rows.push(vec![j.to_string(), order.to_string(), k.to_string()]);
                    orders.push(json!({"level": j, "group_order": order, "additive_order": k}));
                }
                Ok(Output::new(
                    json!({"p": p, "ring": ring.to_json(), "orders": orders}),
                    format!("ring {ring}\n\n{}", text::table(&rows)),
                ))
            }
        }
    }
}

/// `n` and `p` from the top level's abelian descriptor `[p^depth; n]`.
fn infer_tower(e: &TowerElement) -> Option<(usize, u64)> {
    let top = e.vectors.last()?;
    let GroupDescriptor::Abelian(factors) = top.table().group().origin() else {
        return None;
    };
    let q = *factors.first()?;
    let p = (2..=q).find(|d| q % d == 0)?;
    Some((factors.len(), p))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let setup = || -> Result<App, CliError> {
        let ctx = Context {
            group: flag_value(&cli.group)?,
            ring: flag_value(&cli.ring)?,
            family: flag_value(&cli.family)?,
        };
        unipoly::set_order_cap(cli.unipoly_cap as usize);
        unipoly::set_cache_dir(cli.cache_dir.clone());
        Ok(App {
            cap: cli.group_order_cap as usize,
            ctx,
            cli,
        })
    };
    let result = setup().and_then(|app| app.run().map(|out| (out, app.cli.output)));
    match result {
        Ok((out, format)) => {
            let body = match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Text => out.text,
            };
            // A closed pipe (e.g. `| head`) is not an error.
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("{}", CliError::Input(format!("writing output: {e}")).to_json());
                    return ExitCode::from(1);
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
