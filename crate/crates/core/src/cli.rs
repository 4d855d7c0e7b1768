//! The `fusionring` command line.
//!
//! Exit codes: 0 success, 1 negative answer (witness on stdout), 2 input
//! error, 3 failed oracle cross-check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::automorph::automorphisms;
use crate::catalog::{load_ring, resolve, CATALOG_NAMES};
use crate::central::{
    center_subobject, chain_group, chain_oracle, enumerate_central_subobjects, is_central_subobject, merge_closure,
    merge_graph_dot, sigma_cosets, CosetPartition, NonCentralWitness,
};
use crate::error::{FusionError, Result};
use crate::group::{identify_group, GroupDescriptor, GroupTable, Stability};
use crate::ring::{validate_ring, FusionRing, Subobject, Truncation, ValidationReport};
use crate::search_budget;
use crate::subgroups::{grouplikes, is_central_subgroup, is_normal, load_restriction, Normality, SubgroupCentrality};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

/// Word length used by `--oracle-check` for the chain relation.
const ORACLE_WORD_LENGTH: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "fusionring", version, about = "Centers and chain groups of compact quantum groups from fusion rules")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Ring file, or a catalog name when no such file exists.
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Catalog ring name (see the `catalog` subcommand).
    #[arg(long, global = true)]
    catalog: Option<String>,

    /// Exploration depth for generated rings.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,

    /// Comma-separated labels of a subobject.
    #[arg(long, global = true, conflicts_with = "sigma_file")]
    sigma: Option<String>,

    /// File with subobject labels: a JSON array or whitespace/comma separated.
    #[arg(long, global = true)]
    sigma_file: Option<PathBuf>,

    /// Restriction file for `is-normal` and `is-central`.
    #[arg(long, global = true)]
    restriction: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cross-check finite rings against brute-force oracles.
    #[arg(long, global = true)]
    oracle_check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the fusion ring axioms.
    Validate,
    /// Basis, duals and dimensions.
    Info,
    /// Decompose a product of basis elements.
    Product {
        #[arg(required = true)]
        labels: Vec<String>,
    },
    /// The chain group, i.e. the dual of the center.
    ChainGroup,
    /// The center subobject and the center group.
    Center,
    /// Cosets of the subobject given by --sigma.
    Cosets,
    /// Every central subobject of a finite ring.
    CentralSubobjects,
    /// Normality of the quantum subgroup given by --restriction.
    IsNormal,
    /// Centrality of --restriction, or of the subobject --sigma.
    IsCentral,
    /// The group of 1-dimensional classes.
    Grouplikes,
    /// Fusion-ring automorphisms.
    Automorphisms,
    /// List catalog names.
    Catalog,
}

/// What a subcommand produced, in every format it supports.
struct Output {
    json: String,
    table: String,
    dot: Option<String>,
    code: i32,
}

impl Output {
    fn new(payload: &impl Serialize, table: String) -> Result<Self> {
        Ok(Output { json: serde_json::to_string(payload)?, table, dot: None, code: EXIT_OK })
    }

    fn dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    fn negative(mut self, negative: bool) -> Self {
        if negative {
            self.code = EXIT_NEGATIVE;
        }
        self
    }
}

/// An `--oracle-check` mismatch.
struct OracleFailure(String);

enum Failure {
    Error(FusionError),
    Oracle(OracleFailure),
}

impl From<FusionError> for Failure {
    fn from(e: FusionError) -> Self {
        Failure::Error(e)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let body = match cli.format {
                Format::Json => output.json,
                Format::Table => output.table,
                Format::Dot => match output.dot {
                    Some(d) => d,
                    None => {
                        let _ = writeln!(err, "error: --format dot is not available for this command");
                        return EXIT_INPUT;
                    }
                },
            };
            let _ = out.write_all(body.as_bytes());
            if !body.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            output.code
        }
        Err(Failure::Oracle(OracleFailure(msg))) => {
            let _ = writeln!(err, "oracle check failed: {msg}");
            EXIT_ORACLE
        }
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                FusionError::InternalInconsistency(_) => EXIT_ORACLE,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn execute(cli: &Cli) -> std::result::Result<Output, Failure> {
    let depth = cli.depth as usize;
    let budget = search_budget();
    if let Command::Catalog = cli.command {
        return Ok(catalog_listing()?);
    }
    if let Command::Validate = cli.command {
        return match ring_source(cli) {
            Err(FusionError::AxiomViolation(report)) => Ok(validation_output(&report, None)?),
            Err(e) => Err(e.into()),
            Ok(ring) => {
                let report = validate_ring(&ring, depth)?;
                Ok(validation_output(&report, Some(&ring))?)
            }
        };
    }
    if matches!(cli.command, Command::IsNormal | Command::IsCentral) && cli.restriction.is_some() {
        return restriction_command(cli, depth);
    }

    let ring = ring_source(cli)?;
    let trunc = ring.truncate(depth)?;
    if cli.oracle_check {
        oracle_check(&trunc, budget)?;
    }
    let output = match &cli.command {
        Command::Info => info(&trunc)?,
        Command::Product { labels } => product(&ring, &trunc, labels)?,
        Command::ChainGroup => {
            let cg = chain_group(&ring, depth, budget)?;
            let mut table = format!("chain group: {}\nclasses:\n", cg.descriptor);
            for class in &cg.classes {
                let _ = writeln!(table, "  [{}] = {{{}}}", class[0], class.join(", "));
            }
            Output::new(&cg.descriptor, table)?.dot(merge_graph_dot(&trunc))
        }
        Command::Center => center(&ring, &trunc, depth, budget)?,
        Command::Cosets => cosets(&trunc, &sigma(cli, &trunc)?)?,
        Command::CentralSubobjects => central_subobjects(&trunc, budget)?,
        Command::IsCentral => {
            let Some(sigma) = sigma_opt(cli, &trunc)? else {
                return Err(FusionError::MalformedInput("is-central needs --restriction or --sigma".into()).into());
            };
            subobject_centrality(&trunc, &sigma)?
        }
        Command::IsNormal => {
            return Err(FusionError::MalformedInput("is-normal needs --restriction".into()).into());
        }
        Command::Grouplikes => grouplike_output(&ring, depth)?,
        Command::Automorphisms => {
            let autos = automorphisms(&ring, depth, budget)?;
            let mut table = format!("{} automorphism(s) [{}]\n", autos.count, autos.flag);
            for (k, a) in autos.automorphisms.iter().enumerate() {
                let moved: Vec<String> =
                    a.mapping().into_iter().filter(|(x, y)| x != y).map(|(x, y)| format!("{x} -> {y}")).collect();
                let text = if moved.is_empty() { "identity".to_string() } else { moved.join(", ") };
                let _ = writeln!(table, "  {k}: {text}");
            }
            Output::new(&autos, table)?
        }
        Command::Validate | Command::Catalog => unreachable!("handled above"),
    };
    Ok(output)
}

fn ring_source(cli: &Cli) -> Result<FusionRing> {
    match (&cli.ring, &cli.catalog) {
        (Some(_), Some(_)) => Err(FusionError::MalformedInput("give only one of --ring and --catalog".into())),
        (None, None) => Err(FusionError::MalformedInput("a ring is required: --ring FILE or --catalog NAME".into())),
        (Some(r), None) if Path::new(r).is_file() => load_ring(r),
        (Some(name), None) | (None, Some(name)) => resolve(name),
    }
}

fn read_sigma_labels(cli: &Cli) -> Result<Option<Vec<String>>> {
    if let Some(s) = &cli.sigma {
        return Ok(Some(s.split(',').map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect()));
    }
    let Some(path) = &cli.sigma_file else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        let labels: Vec<String> =
            serde_json::from_str(&text).map_err(|e| FusionError::MalformedFile(format!("{}: {e}", path.display())))?;
        return Ok(Some(labels));
    }
    Ok(Some(text.split(|c: char| c == ',' || c.is_whitespace()).filter(|l| !l.is_empty()).map(String::from).collect()))
}

fn sigma_opt(cli: &Cli, trunc: &Truncation) -> Result<Option<Subobject>> {
    let Some(labels) = read_sigma_labels(cli)? else {
        return Ok(None);
    };
    let sigma = Subobject::from_labels(trunc, &labels)?;
    sigma.check(trunc)?;
    Ok(Some(sigma))
}

fn sigma(cli: &Cli, trunc: &Truncation) -> Result<Subobject> {
    sigma_opt(cli, trunc)?.ok_or_else(|| FusionError::MalformedInput("--sigma or --sigma-file is required".into()))
}

fn flag_of(trunc: &Truncation) -> Stability {
    trunc.depth().map_or(Stability::Exact, Stability::CheckedToDepth)
}

fn catalog_listing() -> Result<Output> {
    #[derive(Serialize)]
    struct Entry {
        name: &'static str,
        description: &'static str,
    }
    let entries: Vec<Entry> = CATALOG_NAMES.iter().map(|&(name, description)| Entry { name, description }).collect();
    let width = CATALOG_NAMES.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    let table = CATALOG_NAMES.iter().map(|(n, d)| format!("{n:width$}  {d}\n")).collect();
    Output::new(&entries, table)
}

fn validation_output(report: &ValidationReport, ring: Option<&FusionRing>) -> Result<Output> {
    #[derive(Serialize)]
    struct Payload<'a> {
        valid: bool,
        #[serde(flatten)]
        report: &'a ValidationReport,
    }
    let mut table = match ring {
        Some(r) => format!("{}: ", r.name()),
        None => String::new(),
    };
    if report.is_valid() {
        table.push_str("valid");
        if let Some(d) = report.checked_to_depth {
            let _ = write!(table, " [checked_to_depth({d})]");
        }
        table.push('\n');
    } else {
        let _ = writeln!(table, "{} violation(s)", report.violations.len());
        for v in &report.violations {
            let _ = writeln!(table, "  {}: ({}) {}", v.axiom, v.witness.join(", "), v.detail);
        }
    }
    Ok(Output::new(&Payload { valid: report.is_valid(), report }, table)?.negative(!report.is_valid()))
}

fn info(trunc: &Truncation) -> Result<Output> {
    #[derive(Serialize)]
    struct Element<'a> {
        label: &'a str,
        dim: u64,
        dual: &'a str,
    }
    #[derive(Serialize)]
    struct Payload<'a> {
        name: &'a str,
        kind: crate::ring::RingKind,
        unit: &'a str,
        generators: Vec<String>,
        explored: usize,
        frontier: usize,
        basis: Vec<Element<'a>>,
        flag: Stability,
    }
    let ring = trunc.ring();
    let basis: Vec<Element> = (0..trunc.explored())
        .map(|i| Element { label: trunc.label(i), dim: trunc.dim(i), dual: trunc.label(trunc.dual(i)) })
        .collect();
    let payload = Payload {
        name: ring.name(),
        kind: ring.kind(),
        unit: trunc.label(trunc.unit()),
        generators: ring.generators(),
        explored: trunc.explored(),
        frontier: trunc.len() - trunc.explored(),
        basis,
        flag: flag_of(trunc),
    };
    let mut table = format!(
        "{} ({:?}), unit {}, generators {{{}}}, {} explored, {} on the frontier [{}]\n",
        payload.name,
        payload.kind,
        payload.unit,
        payload.generators.join(", "),
        payload.explored,
        payload.frontier,
        payload.flag
    );
    let _ = writeln!(table, "{:<12} {:>8}  dual", "label", "dim");
    for e in &payload.basis {
        let _ = writeln!(table, "{:<12} {:>8}  {}", e.label, e.dim, e.dual);
    }
    Output::new(&payload, table)
}

fn product(ring: &FusionRing, trunc: &Truncation, labels: &[String]) -> Result<Output> {
    #[derive(Serialize)]
    struct Term {
        label: String,
        n: String,
    }
    let decomp = ring.product_word(labels)?;
    let terms: Vec<Term> = decomp.iter().map(|(l, m)| Term { label: l.clone(), n: m.to_string() }).collect();
    let text: Vec<String> =
        decomp.iter().map(|(l, m)| if m == &1u32.into() { l.clone() } else { format!("{m}·{l}") }).collect();
    let _ = trunc;
    Output::new(&terms, format!("{} = {}\n", labels.join(" x "), text.join(" + ")))
}

fn center(ring: &FusionRing, trunc: &Truncation, depth: usize, budget: u64) -> Result<Output> {
    #[derive(Serialize)]
    struct Payload<'a> {
        subobject: Vec<String>,
        entire_explored_basis: bool,
        group: &'a GroupDescriptor,
        flag: Stability,
    }
    let sigma = center_subobject(trunc, budget)?;
    let cg = chain_group(ring, depth, budget)?;
    let entire = sigma.explored_members(trunc).count() == trunc.explored();
    let subobject = sigma.explored_members(trunc).map(|i| trunc.label(i).to_string()).collect::<Vec<_>>();
    let described = if entire { "entire explored basis".to_string() } else { format!("{{{}}}", subobject.join(", ")) };
    let group = if cg.descriptor.is_trivial() { "trivial".to_string() } else { cg.descriptor.to_string() };
    let table = format!("center subobject = {described}; center group: {group}\nflag: {}\n", cg.descriptor.flag);
    let payload = Payload { subobject, entire_explored_basis: entire, group: &cg.descriptor, flag: cg.descriptor.flag };
    Ok(Output::new(&payload, table)?.dot(merge_graph_dot(trunc)))
}

fn blocks_dot(trunc: &Truncation, partition: &CosetPartition) -> String {
    let mut s = String::from("graph cosets {\n");
    for (k, block) in partition.explored_blocks(trunc).iter().enumerate() {
        let _ = writeln!(s, "  subgraph cluster_{k} {{");
        for &x in block {
            let _ = writeln!(s, "    \"{}\";", trunc.label(x));
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}

fn coset_group_descriptor(trunc: &Truncation, sigma: &Subobject) -> Result<Option<GroupDescriptor>> {
    Ok(match is_central_subobject(trunc, sigma)? {
        crate::central::Centrality::Central(g) => match g.to_group_table(trunc)? {
            Some(t) => Some(with_flag(identify_group(&t)?, trunc)),
            None => None,
        },
        crate::central::Centrality::NotCentral(_) => None,
    })
}

fn with_flag(mut d: GroupDescriptor, trunc: &Truncation) -> GroupDescriptor {
    d.flag = flag_of(trunc);
    d
}

fn cosets(trunc: &Truncation, sigma: &Subobject) -> Result<Output> {
    #[derive(Serialize)]
    struct Payload {
        sigma: Vec<String>,
        blocks: Vec<Vec<String>>,
        central: bool,
        group: Option<GroupDescriptor>,
        flag: Stability,
    }
    let partition = sigma_cosets(trunc, sigma)?;
    let central = is_central_subobject(trunc, sigma)?.is_central();
    let payload = Payload {
        sigma: sigma.explored_members(trunc).map(|i| trunc.label(i).to_string()).collect(),
        blocks: partition.labelled(trunc),
        central,
        group: coset_group_descriptor(trunc, sigma)?,
        flag: flag_of(trunc),
    };
    let mut table = format!("cosets of {{{}}} [{}]\n", payload.sigma.join(", "), payload.flag);
    for b in &payload.blocks {
        let _ = writeln!(table, "  {{{}}}", b.join(", "));
    }
    let _ = writeln!(table, "central: {}", if central { "yes" } else { "no" });
    if let Some(g) = &payload.group {
        let _ = writeln!(table, "coset group: {g}");
    }
    Ok(Output::new(&payload, table)?.dot(blocks_dot(trunc, &partition)))
}

fn central_subobjects(trunc: &Truncation, budget: u64) -> Result<Output> {
    #[derive(Serialize)]
    struct Item {
        members: Vec<String>,
        group: Option<GroupDescriptor>,
    }
    if !trunc.is_complete() {
        return Err(FusionError::MalformedInput("central-subobjects needs a finite ring".into()));
    }
    let items = enumerate_central_subobjects(trunc, budget)?
        .iter()
        .map(|s| Ok(Item { members: s.labels(trunc), group: coset_group_descriptor(trunc, s)? }))
        .collect::<Result<Vec<_>>>()?;
    let mut table = format!("{} central subobject(s)\n", items.len());
    for item in &items {
        let group = item.group.as_ref().map(|g| g.to_string()).unwrap_or_default();
        let _ = writeln!(table, "  {{{}}}  {}", item.members.join(", "), group);
    }
    Output::new(&items, table)
}

fn subobject_centrality(trunc: &Truncation, sigma: &Subobject) -> Result<Output> {
    #[derive(Serialize)]
    #[serde(tag = "verdict", rename_all = "snake_case")]
    enum Payload {
        Central { group: Option<GroupDescriptor>, flag: Stability },
        NotCentral { left: Vec<String>, right: Vec<String>, representatives: (String, String), spans: Vec<Vec<String>> },
    }
    let (payload, table) = match is_central_subobject(trunc, sigma)? {
        crate::central::Centrality::Central(_) => {
            let group = coset_group_descriptor(trunc, sigma)?;
            let text = match &group {
                Some(g) => format!("central; coset group: {g}\n"),
                None => format!("central [{}]\n", flag_of(trunc)),
            };
            (Payload::Central { group, flag: flag_of(trunc) }, text)
        }
        crate::central::Centrality::NotCentral(NonCentralWitness { left, right, representatives, spans }) => {
            let text =
                format!("not central: {} x {} meets {} cosets\n", representatives.0, representatives.1, spans.len());
            (Payload::NotCentral { left, right, representatives, spans }, text)
        }
    };
    let negative = matches!(payload, Payload::NotCentral { .. });
    Ok(Output::new(&payload, table)?.negative(negative))
}

fn restriction_command(cli: &Cli, depth: usize) -> std::result::Result<Output, Failure> {
    let path = cli.restriction.as_ref().expect("checked by caller");
    let source = match (&cli.ring, &cli.catalog) {
        (None, None) => None,
        _ => Some(ring_source(cli)?),
    };
    let r = load_restriction(path, source)?;
    let output = match cli.command {
        Command::IsNormal => {
            let verdict = is_normal(&r, depth)?;
            let table = match &verdict {
                Normality::Normal { checked_to_depth } => match checked_to_depth {
                    Some(d) => format!("normal [checked_to_depth({d})]\n"),
                    None => "normal\n".to_string(),
                },
                Normality::NotNormal { witness, multiplicity, dim } => {
                    format!(
                        "not normal: {witness} contains the trivial class {multiplicity} time(s), dimension {dim}\n"
                    )
                }
            };
            let negative = !matches!(verdict, Normality::Normal { .. });
            Output::new(&verdict, table)?.negative(negative)
        }
        _ => {
            let verdict = is_central_subgroup(&r, depth)?;
            let table = match &verdict {
                SubgroupCentrality::Central { assignment, checked_to_depth } => {
                    let mut t = match checked_to_depth {
                        Some(d) => format!("central [checked_to_depth({d})]\n"),
                        None => "central\n".to_string(),
                    };
                    for (x, l) in assignment {
                        let _ = writeln!(t, "  {x} -> {l}");
                    }
                    t
                }
                SubgroupCentrality::NotCentral { witness, restriction } => {
                    let parts: Vec<String> = restriction.iter().map(|(l, n)| format!("{n}·{l}")).collect();
                    format!("not central: {witness} restricts to {}\n", parts.join(" + "))
                }
            };
            let negative = !verdict.is_central();
            Output::new(&verdict, table)?.negative(negative)
        }
    };
    Ok(output)
}

fn grouplike_output(ring: &FusionRing, depth: usize) -> Result<Output> {
    #[derive(Serialize)]
    struct Payload<'a> {
        elements: &'a [String],
        group: Option<GroupDescriptor>,
        table: Option<&'a GroupTable>,
        flag: Stability,
    }
    let g = grouplikes(ring, depth)?;
    let flag = g.checked_to_depth.map_or(Stability::Exact, Stability::CheckedToDepth);
    let group = match &g.table {
        Some(t) => {
            let mut d = identify_group(t)?;
            d.flag = flag;
            Some(d)
        }
        None => None,
    };
    let mut table = format!("grouplikes: {{{}}}\n", g.elements.join(", "));
    match &group {
        Some(d) => {
            let _ = writeln!(table, "group: {d}");
        }
        None => {
            let _ = writeln!(table, "group: not closed within the explored region [{flag}]");
        }
    }
    Output::new(&Payload { elements: &g.elements, group, table: g.table.as_ref(), flag }, table)
}

/// Finite rings only: the union-find chain classes against bounded words,
/// and the center against the meet of all central subobjects.
fn oracle_check(trunc: &Truncation, budget: u64) -> std::result::Result<(), Failure> {
    if !trunc.is_complete() {
        log::warn!("--oracle-check skipped: the ring is not finite");
        return Ok(());
    }
    let fast = merge_closure(trunc);
    let slow = chain_oracle(trunc, ORACLE_WORD_LENGTH)?;
    for a in 0..trunc.explored() {
        for b in a + 1..trunc.explored() {
            let together = (fast.block_of(a) == fast.block_of(b), slow.block_of(a) == slow.block_of(b));
            if together.0 != together.1 {
                return Err(Failure::Oracle(OracleFailure(format!(
                    "`{}` and `{}` are {} by union-find but {} by words of length <= {ORACLE_WORD_LENGTH}",
                    trunc.label(a),
                    trunc.label(b),
                    if together.0 { "merged" } else { "separate" },
                    if together.1 { "merged" } else { "separate" },
                ))));
            }
        }
    }
    center_subobject(trunc, budget).map_err(|e| match e {
        FusionError::InternalInconsistency(m) => Failure::Oracle(OracleFailure(m)),
        other => Failure::Error(other),
    })?;
    Ok(())
}
