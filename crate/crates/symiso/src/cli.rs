//! The `symiso` command line.
//!
//! Exit codes: 0 success, 1 a negative answer (not admissible, not
//! isostatic, no placement), 2 unreadable or invalid input, 3 internal error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand, ValueEnum};

use symiso_core::construct::{build_c4_chain, build_chain, hat_graph};
use symiso_core::placement::synthesize;
use symiso_core::polynorm::{coloring, is_isostatic};
use symiso_core::treepack::check_admissible;
use symiso_core::verify::{self, describe, MAX_VERTICES};
use symiso_core::{
    GroupCase, NormError, Placement, PlacementError, QuadNorm, SymError, SymmetricGraph, TreePair,
    VerifyError,
};

use crate::io::{self, GraphFile};
use crate::{render, runner};

#[derive(Parser, Debug)]
#[command(
    name = "symiso",
    version,
    about = "Symmetric isostatic frameworks in polygonal normed planes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Graph or placement file (JSON).
    #[arg(short, long)]
    pub input: PathBuf,
    /// Override the file's group case.
    #[arg(short, long)]
    pub group: Option<String>,
    /// `linf`, `l1`, or `a,b;c,d` for the functionals; overrides the file.
    #[arg(short, long)]
    pub norm: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test the admissibility conditions.
    Check(Common),
    /// Print a construction sequence from the base graph.
    Reduce(Common),
    /// Synthesise a symmetric isostatic placement.
    Place(Common),
    /// Check a placement file exactly.
    Verify(Common),
    /// Draw a placement (synthesised when the file has no coordinates) as SVG.
    Render(Common),
    /// Run an exhaustive or sampled experiment.
    Enumerate(EnumerateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    /// Admissibility against placement on every instance.
    Equivalence,
    /// Instances with forbidden fixed-edge counts.
    FixedEdges,
    /// Reduction chains of admissible instances.
    Chains,
    /// Rank criterion against the tree criterion on random placements.
    Rank,
    /// List the admissible instances.
    List,
}

#[derive(clap::Args, Debug)]
pub struct EnumerateArgs {
    #[arg(short, long, default_value = "C2")]
    pub group: String,
    #[arg(short, long, default_value = "linf")]
    pub norm: String,
    #[arg(short = 'm', long, default_value_t = 6)]
    pub max_vertices: usize,
    #[arg(short, long, value_enum, default_value = "equivalence")]
    pub experiment: Experiment,
    #[arg(short, long, default_value_t = 0)]
    pub seed: u64,
    /// Sample size for the rank experiment.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(short, long)]
    pub threads: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Negative(String),
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn internal(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Internal(e.into())
}

// Variant name for error messages, e.g. `NotAutomorphism`.
fn sym_kind(e: &SymError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn render_error(e: &anyhow::Error) -> String {
    for cause in e.chain() {
        if let Some(s) = cause.downcast_ref::<SymError>() {
            return format!("{}: {s}", sym_kind(s));
        }
    }
    format!("{e:#}")
}

/// Output of a successful or negative run: text for stdout and a code.
pub struct Outcome {
    pub text: String,
    pub negative: bool,
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| input(anyhow!(e).context(format!("writing {}", p.display())))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Loaded {
    file: GraphFile,
    sg: SymmetricGraph,
    norm: QuadNorm,
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    let file = io::load(&c.input).map_err(input)?;
    let group = c
        .group
        .as_deref()
        .map(io::parse_group)
        .transpose()
        .map_err(input)?;
    let sg = file.symmetric_graph(group).map_err(input)?;
    let norm = match &c.norm {
        Some(s) => io::parse_norm_arg(s).map_err(input)?,
        None => file.norm().map_err(input)?,
    };
    Ok(Loaded { file, sg, norm })
}

fn edge_list(set: &std::collections::BTreeSet<symiso_core::Edge>) -> String {
    set.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn pair_lines(s: &mut String, pair: &TreePair) {
    let _ = writeln!(s, "tree1: {}", edge_list(&pair.tree1));
    let _ = writeln!(s, "tree2: {}", edge_list(&pair.tree2));
}

pub fn check(c: &Common) -> Result<Outcome, Failure> {
    let Loaded { sg, .. } = load(c)?;
    let r = check_admissible(&sg);
    let mut s = String::new();
    let _ = writeln!(s, "case: {}", sg.case().name());
    let _ = writeln!(s, "vertices: {}", sg.graph().order());
    let _ = writeln!(s, "edges: {}", sg.graph().size());
    let _ = writeln!(s, "fixed vertices: {}", r.fixed_vertex_count);
    let _ = writeln!(s, "fixed edges: {}", sg.fixed_edges(1).len());
    if sg.case() == GroupCase::C4 {
        let _ = writeln!(s, "square-fixed edges: {}", r.fixed_edge_count);
    }
    let _ = writeln!(s, "admissible: {}", if r.admissible { "yes" } else { "no" });
    if let Some(pair) = &r.tree_pair {
        let _ = writeln!(s, "tree mode: {:?}", pair.mode);
        pair_lines(&mut s, pair);
    }
    if let Some(f) = &r.failure_reason {
        let _ = writeln!(s, "failure: {f}");
    }
    Ok(Outcome {
        text: s,
        negative: !r.admissible,
    })
}

pub fn reduce(c: &Common) -> Result<Outcome, Failure> {
    let Loaded { sg, .. } = load(c)?;
    let r = check_admissible(&sg);
    let mut s = String::new();
    if !r.admissible {
        let reason = r.failure_reason.map(|f| f.to_string()).unwrap_or_default();
        return Err(Failure::Negative(format!("not admissible: {reason}")));
    }
    let chain_text = |s: &mut String, target: &SymmetricGraph| -> Result<(), Failure> {
        let chain = build_chain(target).map_err(internal)?;
        let _ = writeln!(s, "base: W5 as {:?}", chain.base_map);
        for (i, (mv, case)) in chain.moves.iter().zip(&chain.cases).enumerate() {
            let _ = writeln!(s, "step {}: {mv} [{case}]", i + 1);
        }
        let _ = writeln!(s, "length: {}", chain.len());
        let _ = writeln!(s, "searched pairs: {}", chain.searched_pairs);
        Ok(())
    };
    match sg.case() {
        GroupCase::CsSwapping => {
            return Err(Failure::Negative(String::from(
                "no construction sequence for facet-swapping reflections; use `place`",
            )))
        }
        GroupCase::C2 if r.fixed_edge_count == 2 => {
            let pair = r.tree_pair.as_ref().expect("admissible");
            let hat = hat_graph(&sg, pair).map_err(internal)?;
            let _ = writeln!(
                s,
                "hat graph: {} vertices, {} edges, new vertex {} replacing {} and {}",
                hat.graph.graph().order(),
                hat.graph.graph().size(),
                hat.w0,
                hat.fixed[0],
                hat.fixed[1]
            );
            chain_text(&mut s, &hat.graph)?;
        }
        GroupCase::C4 => {
            let chain = build_c4_chain(&sg).map_err(|e| {
                Failure::Negative(format!(
                    "experimental quarter-turn reduction failed ({e}); use `place`"
                ))
            })?;
            let _ = writeln!(s, "experimental quarter-turn sequence");
            let _ = writeln!(s, "base: {:?} as {:?}", chain.base, chain.base_map);
            for (i, mv) in chain.moves.iter().enumerate() {
                let removed = mv
                    .removed
                    .map(|e| format!(" removing orbit of {e}"))
                    .unwrap_or_default();
                let _ = writeln!(
                    s,
                    "step {}: orbit {:?} attached to {:?}{removed}",
                    i + 1,
                    mv.new_ids,
                    mv.attachments
                );
            }
            let _ = writeln!(s, "length: {}", chain.moves.len());
        }
        _ => chain_text(&mut s, &sg)?,
    }
    Ok(Outcome {
        text: s,
        negative: false,
    })
}

fn placement_error(e: PlacementError) -> Failure {
    match e {
        PlacementError::NotAdmissible(f) => Failure::Negative(format!("not admissible: {f}")),
        PlacementError::NoSwappingIsometry | PlacementError::UnsupportedTau(_) => {
            Failure::Negative(format!("{e}"))
        }
        other => internal(other),
    }
}

pub fn place(c: &Common) -> Result<Outcome, Failure> {
    let Loaded { sg, norm, .. } = load(c)?;
    let sp = synthesize(&sg, &norm).map_err(placement_error)?;
    let json = io::to_json(&GraphFile::from_placement(&sg, &norm, &sp));
    let mut s = String::new();
    let _ = writeln!(s, "method: {}", sp.method);
    let _ = writeln!(
        s,
        "rank: {} of {}",
        sp.report.rank,
        2 * sg.graph().order() - 2
    );
    let _ = writeln!(s, "isostatic: yes");
    match &c.output {
        Some(p) => {
            emit(&json, Some(p))?;
            let _ = writeln!(s, "written: {}", p.display());
            Ok(Outcome {
                text: s,
                negative: false,
            })
        }
        None => {
            eprint!("{s}");
            Ok(Outcome {
                text: json,
                negative: false,
            })
        }
    }
}

pub fn verify_cmd(c: &Common) -> Result<Outcome, Failure> {
    let Loaded { file, sg, norm } = load(c)?;
    let coords = file
        .points()
        .map_err(input)?
        .ok_or_else(|| input(anyhow!("file has no coordinates")))?;
    let placement = Placement::new(coords).map_err(input)?;
    let tau_m = file
        .tau_matrix()
        .map_err(input)?
        .ok_or_else(|| input(anyhow!("file has no tau")))?;
    let tau = io::isometry(&norm, &tau_m).map_err(input)?;
    let mut s = String::new();
    let mut ok = true;
    let _ = writeln!(s, "tau: {:?}", tau.class);
    let asym: Vec<usize> = sg
        .graph()
        .vertices()
        .filter(|&v| tau.apply(placement.point(v)) != *placement.point(sg.image(v, 1)))
        .collect();
    if asym.is_empty() {
        let _ = writeln!(s, "symmetric: yes");
    } else {
        ok = false;
        let _ = writeln!(s, "symmetric: no (vertices {asym:?})");
    }
    match is_isostatic(sg.graph(), &placement, &norm) {
        Ok(r) => {
            let col = coloring(sg.graph(), &placement, &norm).map_err(internal)?;
            let pair = TreePair {
                tree1: col.monochrome(symiso_core::FacetClass::F1),
                tree2: col.monochrome(symiso_core::FacetClass::F2),
                mode: sg.case().tree_mode(),
            };
            let _ = writeln!(s, "rank: {} of {}", r.rank, 2 * sg.graph().order() - 2);
            let _ = writeln!(s, "kernel dimension: {}", r.kernel_dim);
            let _ = writeln!(
                s,
                "monochrome trees: {}",
                if r.monochrome_trees { "yes" } else { "no" }
            );
            pair_lines(&mut s, &pair);
            if let Err(e) = pair.validate(&sg) {
                let _ = writeln!(s, "tree pair: {e}");
            }
            ok &= r.isostatic;
        }
        Err(e @ NormError::NotWellPositioned(_)) => {
            ok = false;
            let _ = writeln!(s, "well-positioned: no ({e})");
        }
        Err(e) => return Err(input(e)),
    }
    let _ = writeln!(s, "isostatic: {}", if ok { "yes" } else { "no" });
    Ok(Outcome {
        text: s,
        negative: !ok,
    })
}

pub fn render_cmd(c: &Common) -> Result<Outcome, Failure> {
    let Loaded { file, sg, norm } = load(c)?;
    let svg = match (
        file.points().map_err(input)?,
        file.tau_matrix().map_err(input)?,
    ) {
        (Some(coords), tau_m) => {
            let placement = Placement::new(coords.clone()).map_err(input)?;
            let col = coloring(sg.graph(), &placement, &norm).map_err(input)?;
            let tau = tau_m
                .map(|m| io::isometry(&norm, &m))
                .transpose()
                .map_err(input)?;
            render::render_svg(&sg, &coords, &col, tau.as_ref())
        }
        (None, _) => {
            let sp = synthesize(&sg, &norm).map_err(placement_error)?;
            render::render_svg(&sg, &sp.placement.coords, &sp.coloring, Some(&sp.tau))
        }
    };
    Ok(Outcome {
        text: svg,
        negative: false,
    })
}

fn verify_error(e: VerifyError) -> Failure {
    match e {
        VerifyError::BudgetExceeded { .. } => input(e),
        VerifyError::Placement(p) => placement_error(p),
    }
}

pub fn enumerate(a: &EnumerateArgs) -> Result<Outcome, Failure> {
    let case = io::parse_group(&a.group).map_err(input)?;
    let norm = io::parse_norm_arg(&a.norm).map_err(input)?;
    if a.max_vertices > MAX_VERTICES {
        return Err(verify_error(VerifyError::BudgetExceeded {
            requested: a.max_vertices,
            limit: MAX_VERTICES,
        }));
    }
    let threads = a.threads.unwrap_or_else(runner::default_threads).max(1);
    let n = a.max_vertices;
    if a.experiment == Experiment::List {
        let mut s = String::new();
        let list = verify::enumerate_admissible(n, case).map_err(verify_error)?;
        for sg in &list {
            let _ = writeln!(s, "{}", describe(sg));
        }
        let _ = writeln!(s, "admissible instances: {}", list.len());
        return Ok(Outcome {
            text: s,
            negative: false,
        });
    }
    let report = match a.experiment {
        Experiment::Equivalence => runner::equivalence(n, case, &norm, threads),
        Experiment::FixedEdges => runner::timed(|| verify::fixed_edge_experiment(n, case, &norm)),
        Experiment::Chains => runner::timed(|| verify::chain_experiment(n, case)),
        Experiment::Rank => {
            runner::timed(|| Ok(verify::rank_agreement_experiment(a.count, n, a.seed, &norm)))
        }
        Experiment::List => unreachable!(),
    }
    .map_err(verify_error)?;
    Ok(Outcome {
        text: report.summary(),
        negative: !report.passed(),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check(c) => check(c),
        Command::Reduce(c) => reduce(c),
        Command::Place(c) => place(c),
        Command::Verify(c) => verify_cmd(c),
        Command::Render(c) => render_cmd(c),
        Command::Enumerate(a) => enumerate(a),
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let output = match &cli.command {
        Command::Place(_) => None,
        Command::Check(c) | Command::Reduce(c) | Command::Verify(c) | Command::Render(c) => {
            c.output.clone()
        }
        Command::Enumerate(a) => a.output.clone(),
    };
    let result = run(&cli).and_then(|o| emit(&o.text, output.as_deref()).map(|_| o));
    match result {
        Ok(o) if o.negative => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Negative(m) => eprintln!("{m}"),
                Failure::Input(e) => eprintln!("error: {}", render_error(e)),
                Failure::Internal(e) => eprintln!("internal error: {}", render_error(e)),
            }
            ExitCode::from(f.code())
        }
    }
}
