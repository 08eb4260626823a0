//! Command-line front end over the text formats.
//!
//! Exit codes: 0 success, 1 usage error, 2 a verification counterexample,
//! 3 an operational or pipeline failure. Data goes to files or standard
//! output, diagnostics to standard error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bibd::{bibd_dimension, expand_to_bibd};
use crate::coverage::{build_all, DEFAULT_MAX_V};
use crate::design::{validate_bibd, validate_gdd, validate_pbd, Design, GroupType, KSet};
use crate::error::Error;
use crate::fill::{fill_groups, FillMode, Fillers};
use crate::flats::{dimension, DimensionMode};
use crate::format::{
    gdd_to_string, latin_to_string, parse_latin, parse_triple_system, pbd_to_string, read_design,
    triple_system_to_string, write_text, DesignFile,
};
use crate::geometry::{affine_space, lines_in_subspace, projective_space};
use crate::latin::{back_circulant_ingredients, glue_latin, subsquare_coverage, CoverageOptions};
use crate::recipes::{catalog, describe, Builder, Status};
use crate::report::{reproduction_report, ReportOptions};
use crate::search::{find_gdd, SearchOutcome, DEFAULT_NODE_BUDGET};
use crate::truncate::truncate;
use crate::wfc::{wfc, Weighting};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pbd3", version, about = "Pairwise balanced designs of dimension three")]
pub struct Cli {
    /// Directory for cached ingredient GDDs (default: $PBD3_CACHE_DIR)
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit PG_d(q) or AG_d(q) as a PBD
    Construct {
        kind: GeometryArg,
        d: usize,
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit the planes (as point sets) instead of the design
        #[arg(long)]
        list_planes: bool,
    },
    /// Check the PBD or GDD axioms of a design file
    Verify { file: PathBuf },
    /// Compute or bound the dimension of a PBD
    Dimension {
        file: PathBuf,
        #[arg(long, conflicts_with = "at_least")]
        exact: bool,
        #[arg(long, value_name = "N")]
        at_least: Option<usize>,
    },
    /// Search for a GDD of a given type
    SearchGdd {
        /// Group type, e.g. 2^3,4^1
        #[arg(long = "type")]
        group_type: String,
        /// Block sizes, e.g. 3,4
        #[arg(long = "K")]
        k: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Wilson's fundamental construction on a master PBD or GDD
    Wfc {
        master: PathBuf,
        /// Weights, one per point (comma separated)
        #[arg(long, conflicts_with = "uniform")]
        weights: Option<String>,
        /// Give every point this weight
        #[arg(long)]
        uniform: Option<u32>,
        /// Block sizes of the ingredient GDDs
        #[arg(long = "K")]
        k: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fill the groups of a GDD to obtain a PBD
    Fill {
        gdd: PathBuf,
        #[arg(long, value_enum, default_value_t = FillArg::Plain)]
        mode: FillArg,
        /// PBD files used as fillers (groups whose filler size is missing become single blocks)
        #[arg(long)]
        filler: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Delete points from a PBD
    Truncate {
        file: PathBuf,
        /// Points to delete (comma separated)
        #[arg(long)]
        points: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The recipe catalog
    Recipe {
        #[command(subcommand)]
        command: RecipeCommand,
    },
    /// Latin squares glued over a PBD
    Latin {
        #[command(subcommand)]
        command: LatinCommand,
    },
    /// Triple systems from PBDs
    Bibd {
        #[command(subcommand)]
        command: BibdCommand,
    },
    /// Run the reproduction report
    Report {
        /// Geometric bases only
        #[arg(long)]
        quick: bool,
        /// Write the TSV table here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_V)]
        max_v: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum RecipeCommand {
    List,
    Build {
        id: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Compute the exact dimension even for large outputs
        #[arg(long)]
        exact_dimension: bool,
    },
    BuildAll {
        #[arg(long = "K")]
        k: String,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_V)]
        max_v: usize,
    },
    Describe { id: String },
}

#[derive(Subcommand, Debug)]
pub enum LatinCommand {
    Glue {
        design: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Check {
        square: PathBuf,
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum BibdCommand {
    Expand {
        design: PathBuf,
        #[arg(long)]
        lambda: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a triple system file and bound its dimension
    Check {
        file: PathBuf,
        #[arg(long, value_name = "N", default_value_t = 3)]
        at_least: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GeometryArg {
    Pg,
    Ag,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FillArg {
    Plain,
    PlusPoint,
}

/// A command's failure, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Argument(_) | Error::UnknownRecipe(_) | Error::UnsupportedField(_) => EXIT_USAGE,
            Error::Pipeline { stage, .. } if stage == "verify" || stage == "dimension" => EXIT_COUNTEREXAMPLE,
            _ => EXIT_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn counterexample(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_COUNTEREXAMPLE, message: message.into() }
}

type CmdResult = std::result::Result<(), Failure>;

fn emit(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(path) => Ok(write_text(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_pbd(path: &Path) -> std::result::Result<Design, Failure> {
    Ok(read_design(path)?.into_pbd()?)
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::from(Error::Io { path: path.into(), source: e }))
}

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Failure::from(Error::arg(format!("bad number {p:?}")))))
        .collect()
}

fn parse_k(s: &str) -> std::result::Result<KSet, Failure> {
    Ok(s.parse()?)
}

fn builder(cli: &Cli) -> Builder {
    Builder::new().with_cache_dir(cli.cache_dir.clone())
}

fn run_command(cli: &Cli) -> CmdResult {
    let verbose = cli.verbose > 0;
    match &cli.command {
        Command::Construct { kind, d, q, output, list_planes } => {
            let g = match kind {
                GeometryArg::Pg => projective_space(*d, *q)?,
                GeometryArg::Ag => affine_space(*d, *q)?,
            };
            if *list_planes {
                let mut text = String::new();
                for p in g.planes() {
                    let lines = lines_in_subspace(&g, &p)?.len();
                    let pts: Vec<String> = p.points.iter().map(usize::to_string).collect();
                    text.push_str(&format!("{}\t# {} points, {lines} lines\n", pts.join(" "), p.points.len()));
                }
                return emit(output.as_deref(), &text);
            }
            if verbose {
                eprintln!("{}: {} points, {} blocks", g.name(), g.design().v(), g.design().num_blocks());
            }
            emit(output.as_deref(), &pbd_to_string(g.design(), &[g.name()]))
        }
        Command::Verify { file } => {
            // a file that does not even parse as a design fails verification
            let parsed = read_design(file).map_err(|e| match e {
                Error::Io { .. } => Failure::from(e),
                e => counterexample(e.to_string()),
            })?;
            let report = match parsed {
                DesignFile::Pbd(d) => validate_pbd(&d),
                DesignFile::Gdd(g) => validate_gdd(&g),
            };
            if report.passed {
                println!("{}", report.message);
                Ok(())
            } else {
                Err(counterexample(report.render()))
            }
        }
        Command::Dimension { file, exact, at_least } => {
            let d = read_pbd(file)?;
            let mode = match (exact, at_least) {
                (_, Some(t)) => DimensionMode::AtLeast(*t),
                _ => DimensionMode::Exact,
            };
            let cert = dimension(&d, mode);
            if verbose {
                eprintln!("flats per level: {:?}", cert.flats_per_level);
                for w in &cert.witnesses {
                    eprintln!("witness: {:?} generate a flat of {} points", w.generators, w.flat.len());
                }
            }
            match mode {
                DimensionMode::Exact => {
                    println!("{}", cert.dimension);
                    Ok(())
                }
                DimensionMode::AtLeast(t) if cert.passed => {
                    println!("dimension at least {t}");
                    Ok(())
                }
                DimensionMode::AtLeast(t) => {
                    let cx = cert.counterexample.unwrap_or_default();
                    let pts: Vec<String> = cx.iter().map(usize::to_string).collect();
                    println!("{}", pts.join(" "));
                    Err(counterexample(format!(
                        "dimension {} < {t}: points {} generate the whole design",
                        cert.dimension,
                        pts.join(" ")
                    )))
                }
            }
        }
        Command::SearchGdd { group_type, k, budget, output } => {
            let t: GroupType = group_type.parse()?;
            let k = parse_k(k)?;
            match find_gdd(&t, &k, *budget)? {
                SearchOutcome::Found(g) => {
                    let comment = format!("{{{k}}}-GDD of type {t}");
                    emit(output.as_deref(), &gdd_to_string(&g, &[comment]))
                }
                SearchOutcome::Nonexistent { nodes } => Err(counterexample(format!(
                    "no {{{k}}}-GDD of type {t} exists (search exhausted after {nodes} nodes)"
                ))),
                SearchOutcome::BudgetExceeded { nodes } => Err(Failure {
                    code: EXIT_FAILURE,
                    message: format!("search budget exhausted after {nodes} nodes"),
                }),
            }
        }
        Command::Wfc { master, weights, uniform, k, output } => {
            let g = read_design(master)?.into_gdd();
            let w = match (weights, uniform) {
                (Some(ws), _) => Weighting::new(parse_list(ws)?.into_iter().map(|x| x as u32).collect()),
                (None, Some(u)) => Weighting::uniform(g.v(), *u),
                (None, None) => return Err(Error::arg("give --weights or --uniform").into()),
            };
            if w.len() != g.v() {
                return Err(Error::arg(format!("{} weights for {} points", w.len(), g.v())).into());
            }
            let cat = builder(cli).catalog(&parse_k(k)?)?;
            let out = wfc(&g, &w, &*cat)?;
            emit(output.as_deref(), &gdd_to_string(&out, &[format!("WFC of {}", master.display())]))
        }
        Command::Fill { gdd, mode, filler, output } => {
            let g = read_design(gdd)?.into_gdd();
            let mut fillers = Fillers::single_blocks();
            for f in filler {
                fillers = fillers.with(read_pbd(f)?);
            }
            let mode = match mode {
                FillArg::Plain => FillMode::Plain,
                FillArg::PlusPoint => FillMode::PlusPoint,
            };
            let d = fill_groups(&g, mode, &fillers)?;
            emit(output.as_deref(), &pbd_to_string(&d, &[format!("groups of {} filled", gdd.display())]))
        }
        Command::Truncate { file, points, output } => {
            let d = read_pbd(file)?;
            let t = truncate(&d, &parse_list(points)?)?;
            emit(output.as_deref(), &pbd_to_string(&t, &[format!("truncation of {}", file.display())]))
        }
        Command::Recipe { command } => recipe_command(cli, command),
        Command::Latin { command } => latin_command(cli, command),
        Command::Bibd { command } => bibd_command(command),
        Command::Report { quick, output, max_v } => {
            let report = reproduction_report(
                &builder(cli),
                ReportOptions { quick: *quick, seed: cli.seed, max_v: *max_v },
            )?;
            match output {
                Some(path) => {
                    write_text(path, &report.tsv())?;
                    print!("{}", report.summary());
                }
                None => {
                    print!("{}", report.tsv());
                    eprint!("{}", report.summary());
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(counterexample("some checks failed"))
            }
        }
    }
}

fn recipe_command(cli: &Cli, command: &RecipeCommand) -> CmdResult {
    match command {
        RecipeCommand::List => {
            for r in catalog() {
                let status = match &r.status {
                    Status::InScope => "in-scope".to_string(),
                    Status::ExternalBase { source } => format!("external ({source})"),
                };
                let k = if r.k.is_empty() { "-".to_string() } else { format!("{{{}}}", r.k) };
                println!("{}\t{}\t{k}\t{status}\t{}", r.id, r.v, r.anchor);
            }
            Ok(())
        }
        RecipeCommand::Build { id, output, exact_dimension } => {
            let b = builder(cli).with_exact_dimension(*exact_dimension).build(id)?;
            if cli.verbose > 0 {
                for f in &b.failed_choices {
                    eprintln!("rejected layout: {f}");
                }
            }
            eprintln!(
                "{id}: PBD({},{{{}}}) with {} blocks, {}",
                b.design.v(),
                b.design.k(),
                b.design.num_blocks(),
                match b.exact_dimension {
                    Some(d) => format!("dimension {d}"),
                    None => "dimension at least 3".into(),
                }
            );
            emit(output.as_deref(), &pbd_to_string(&b.design, &b.provenance()))
        }
        RecipeCommand::BuildAll { k, report, max_v } => {
            let k = parse_k(k)?;
            let table = build_all(&builder(cli), &k, *max_v)?;
            for r in &table.rows {
                eprintln!("{}", r.describe(&k));
            }
            emit(report.as_deref(), &table.to_tsv(true))?;
            let failed = table.failures().count();
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure { code: EXIT_FAILURE, message: format!("{failed} order(s) failed or uncovered") })
            }
        }
        RecipeCommand::Describe { id } => {
            print!("{}", describe(id)?);
            Ok(())
        }
    }
}

fn latin_command(cli: &Cli, command: &LatinCommand) -> CmdResult {
    match command {
        LatinCommand::Glue { design, output } => {
            let d = read_pbd(design)?;
            let l = glue_latin(&d, &back_circulant_ingredients(&d)?)?;
            emit(output.as_deref(), &latin_to_string(&l))
        }
        LatinCommand::Check { square, design, exhaustive, samples } => {
            let l = parse_latin(&read_file(square)?)?;
            let d = read_pbd(design)?;
            if !l.is_latin() {
                return Err(counterexample("not a latin square"));
            }
            let opts = CoverageOptions { exhaustive: *exhaustive, samples: *samples, seed: cli.seed };
            let report = subsquare_coverage(&l, &d, opts)?;
            println!(
                "order {}: symmetric {}, idempotent {}, {} triples checked ({})",
                l.order(),
                l.is_symmetric(),
                l.is_idempotent(),
                report.triples_checked,
                if report.exhaustive { "exhaustive" } else { "sampled" }
            );
            if cli.verbose > 0 {
                for w in &report.witnesses {
                    eprintln!("triple {:?} lies in the subsquare on {:?}", w.triple, w.points);
                }
            }
            match report.counterexample {
                None => Ok(()),
                Some(t) => Err(counterexample(format!("triple {t:?} lies in no proper subsquare"))),
            }
        }
    }
}

fn bibd_command(command: &BibdCommand) -> CmdResult {
    match command {
        BibdCommand::Expand { design, lambda, output } => {
            let d = read_pbd(design)?;
            let t = expand_to_bibd(&d, *lambda)?;
            let comment = format!("({},3,{lambda})-design from {}", t.v(), design.display());
            emit(output.as_deref(), &triple_system_to_string(&t, &[comment]))
        }
        BibdCommand::Check { file, at_least } => {
            let t = parse_triple_system(&read_file(file)?)?;
            let report = validate_bibd(&t);
            if !report.report.passed {
                return Err(counterexample(report.report.render()));
            }
            let cert = bibd_dimension(&t, DimensionMode::AtLeast(*at_least));
            println!("{}; dimension at least {at_least}: {}", report.report.message, cert.passed);
            if cert.passed {
                Ok(())
            } else {
                Err(counterexample(format!(
                    "points {:?} generate the whole design",
                    cert.counterexample.unwrap_or_default()
                )))
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(jobs) = cli.jobs {
        // fails only if a pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    match run_command(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

