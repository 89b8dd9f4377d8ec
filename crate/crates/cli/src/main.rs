//! `bss`: binding-site similarity over every unique pair of PDB entries.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bss_core::farm::{FarmConfig, Level, Strategy};
use bss_core::graph::modular_product;
use bss_core::ingest::{
    extract_ligands, normalize_ids, unique_pairs, FetchConfig, LigandFilter, PdbId, StructureStore,
    CACHE_DIR_ENV, DEFAULT_BASE_URL, DEFAULT_URL_TEMPLATE,
};
use bss_core::pipeline::{
    bench, breakdown_report, run_corpus, speedup_report, BenchStats, CorpusRun, PipelineConfig, ResultRecord,
};
use bss_core::site::{ResidueMatching, SiteParams};
use bss_core::synth;

#[derive(Parser)]
#[command(
    name = "bss",
    version,
    about = "Binding-site similarity across protein structures"
)]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download structures into the local cache.
    Fetch {
        #[command(flatten)]
        fetch: FetchArgs,
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// List every unique unordered pair of the given ids.
    Pairs {
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Run the pipeline over every unique pair.
    Run {
        #[command(flatten)]
        farm: FarmArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        fetch: FetchArgs,
        /// Result records, one JSON object per line (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a one-row-per-pair CSV summary.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the run manifest (configuration, parameters, wall time) as JSON.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(required = true, num_args = 2..)]
        ids: Vec<String>,
    },
    /// Time repeated corpus runs, or summarize injected timing samples.
    Bench {
        #[command(flatten)]
        farm: FarmArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        fetch: FetchArgs,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Summarize the samples in this file instead of running anything
        /// (one number per row, last column; repeat to compare several).
        #[arg(long)]
        inject: Vec<PathBuf>,
        /// Write the statistics as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        ids: Vec<String>,
    },
    /// Summarize a results file.
    Report {
        /// Per-pair and aggregate ligand-matching time breakdown.
        #[arg(long, required = true)]
        breakdown: PathBuf,
        /// Emit the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Dump the modular product graph of two ligands.
    Product {
        #[command(flatten)]
        fetch: FetchArgs,
        id_a: String,
        id_b: String,
        /// Ligand index within the first structure.
        #[arg(long, default_value_t = 0)]
        ligand_a: usize,
        /// Ligand index within the second structure.
        #[arg(long, default_value_t = 0)]
        ligand_b: usize,
    },
    /// Write the bundled synthetic structures as PDB files.
    Synth {
        dir: PathBuf,
        /// Subset of ids to write (default: all).
        ids: Vec<String>,
    },
}

#[derive(Args)]
struct FetchArgs {
    /// Directory holding downloaded `<id>.pdb` files.
    #[arg(long, env = CACHE_DIR_ENV, default_value = "pdb_cache")]
    cache_dir: PathBuf,
    /// Substituted for `{base}` in the download URL.
    #[arg(long, default_value = DEFAULT_BASE_URL)]
    base_url: String,
    /// Download URL; `{base}`, `{ID}` and `{id}` are substituted.
    #[arg(long, default_value = DEFAULT_URL_TEMPLATE)]
    url_template: String,
    /// Never touch the network; every structure must already be cached.
    #[arg(long)]
    offline: bool,
}

impl FetchArgs {
    fn config(&self) -> FetchConfig {
        FetchConfig {
            cache_dir: self.cache_dir.clone(),
            base_url: self.base_url.clone(),
            url_template: self.url_template.clone(),
            offline: self.offline,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Broadcast,
    Scatter,
}

#[derive(Args)]
struct FarmArgs {
    /// 1: one pair per task; 2: pairs in turn, candidate ligand pairs fanned out.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
    level: u8,
    /// broadcast: every worker sees all tasks and takes index ≡ rank (mod workers);
    /// scatter: each worker receives one contiguous block.
    #[arg(long, value_enum, default_value = "broadcast")]
    strategy: StrategyArg,
    /// Worker threads; may exceed the core count.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 1)]
    workers: u64,
}

impl FarmArgs {
    fn config(&self) -> anyhow::Result<FarmConfig> {
        let strategy = match self.strategy {
            StrategyArg::Broadcast => Strategy::Broadcast,
            StrategyArg::Scatter => Strategy::ScatterGather,
        };
        Ok(FarmConfig::new(
            self.workers as usize,
            strategy,
            Level::try_from(self.level)?,
        )?)
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Distance from a ligand heavy atom that makes a residue part of the site, Å.
    #[arg(long, default_value_t = 5.0)]
    site_cutoff: f64,
    /// Tolerance on corresponding intra-site distances, Å.
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Intra-site distances at or above this are unconstrained, Å.
    #[arg(long, default_value_t = 15.0)]
    dmax: f64,
    /// Fewest corresponded residues for an accepted site alignment.
    #[arg(long, default_value_t = 10)]
    min_patch: usize,
    /// Largest Cα RMSD of the corresponded patch for an accepted site alignment, Å
    #[arg(long, default_value_t = 2.0)]
    patch_rmsd_cutoff: f64,
    /// Largest surface-vector angle for an accepted site alignment, degrees.
    #[arg(long, default_value_t = 90.0)]
    angle_cutoff: f64,
    /// Largest LigandRMSD (observed minus optimal) for a similar pair, Å
    #[arg(long, default_value_t = 2.0)]
    ligand_rmsd_cutoff: f64,
    /// Require identical residue names instead of the same residue class.
    #[arg(long)]
    exact_residues: bool,
    /// Smallest heavy-atom count for a HETATM group to count as a ligand.
    #[arg(long, default_value_t = 6)]
    min_ligand_atoms: usize,
}

impl ParamArgs {
    fn config(&self) -> anyhow::Result<PipelineConfig> {
        let config = PipelineConfig {
            site: SiteParams {
                site_cutoff: self.site_cutoff,
                eps: self.eps,
                dmax: self.dmax,
                min_patch: self.min_patch,
                patch_rmsd_cutoff: self.patch_rmsd_cutoff,
                angle_cutoff: self.angle_cutoff,
                residue_matching: if self.exact_residues {
                    ResidueMatching::Exact
                } else {
                    ResidueMatching::Classes
                },
            },
            ligand_filter: LigandFilter {
                min_heavy_atoms: self.min_ligand_atoms,
                ..LigandFilter::default()
            },
            ligand_rmsd_cutoff: self.ligand_rmsd_cutoff,
        };
        config.validate()?;
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Fetch { fetch, ids } => cmd_fetch(&fetch, &ids),
        Command::Pairs { ids } => cmd_pairs(&ids),
        Command::Run {
            farm,
            params,
            fetch,
            out,
            csv,
            manifest,
            ids,
        } => {
            let store = StructureStore::new(fetch.config());
            let run = run_corpus(&ids, &params.config()?, &farm.config()?, &store)?;
            write_records(&run, out.as_deref())?;
            if let Some(path) = csv {
                write_csv(&run, &path)?;
            }
            if let Some(path) = manifest {
                let file = create(&path)?;
                serde_json::to_writer_pretty(file, &run.manifest)?;
            }
            eprintln!(
                "{} pairs, {} errors, {:.6} s ({} worker(s), {}, level {})",
                run.manifest.pairs,
                run.manifest.errors,
                run.manifest.wall_seconds,
                run.manifest.run.workers,
                run.manifest.run.strategy,
                run.manifest.run.level
            );
            Ok(if run.has_errors() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Bench {
            farm,
            params,
            fetch,
            reps,
            inject,
            json,
            ids,
        } => {
            let stats = if inject.is_empty() {
                if ids.len() < 2 {
                    bail!("bench needs at least two ids, or --inject");
                }
                let run = bench(&ids, &params.config()?, &farm.config()?, &fetch.config(), reps)?;
                vec![("measured".to_string(), run.stats)]
            } else {
                inject
                    .iter()
                    .map(|p| {
                        Ok((
                            p.display().to_string(),
                            BenchStats::from_samples(read_samples(p)?)?,
                        ))
                    })
                    .collect::<anyhow::Result<Vec<_>>>()?
            };
            print_bench(&stats)?;
            if let Some(path) = json {
                let file = create(&path)?;
                let entries: Vec<_> = stats
                    .iter()
                    .map(|(label, s)| serde_json::json!({ "label": label, "stats": s }))
                    .collect();
                serde_json::to_writer_pretty(file, &entries)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { breakdown, json } => {
            let records = read_records(&breakdown)?;
            let results: Vec<_> = records.into_iter().map(|r| r.result).collect();
            let report = breakdown_report(&results);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Product {
            fetch,
            id_a,
            id_b,
            ligand_a,
            ligand_b,
        } => {
            let store = StructureStore::new(fetch.config());
            let pick = |id: &str, k: usize| -> anyhow::Result<_> {
                let s = store.load(&PdbId::parse(id)?)?;
                let mut ligands = extract_ligands(&s, &LigandFilter::default());
                if k >= ligands.len() {
                    bail!("{id} has {} ligand(s); index {k} is out of range", ligands.len());
                }
                Ok(ligands.swap_remove(k))
            };
            let (a, b) = (pick(&id_a, ligand_a)?, pick(&id_b, ligand_b)?);
            println!("# {} {} x {} {}", id_a, a.key, id_b, b.key);
            print!("{}", modular_product(&a, &b).to_adjacency_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth { dir, ids } => {
            let paths = if ids.is_empty() {
                synth::write_all(&dir)?
            } else {
                synth::write_structures(&dir, &ids)?
            };
            for p in paths {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_fetch(fetch: &FetchArgs, ids: &[String]) -> anyhow::Result<ExitCode> {
    let store = StructureStore::new(fetch.config());
    let mut failed = false;
    for id in normalize_ids(ids)? {
        match store.fetch(&id) {
            Ok(path) => println!("{id}\t{}", path.display()),
            Err(e) => {
                eprintln!("{id}\terror: {e}");
                failed = true;
            }
        }
    }
    Ok(if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_pairs(ids: &[String]) -> anyhow::Result<ExitCode> {
    let pairs = unique_pairs(ids)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for p in &pairs {
        writeln!(out, "{}\t{}\t{}", p.index, p.id_a, p.id_b)?;
    }
    writeln!(out, "pairs: {}", pairs.len())?;
    Ok(ExitCode::SUCCESS)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    ))
}

fn write_records(run: &CorpusRun, path: Option<&Path>) -> anyhow::Result<()> {
    let mut out: Box<dyn Write> = match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for record in run.records() {
        serde_json::to_writer(&mut out, &record)?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn write_csv(run: &CorpusRun, path: &Path) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record([
        "index",
        "id_a",
        "id_b",
        "status",
        "ligand_a",
        "ligand_b",
        "match_kind",
        "tanimoto",
        "ligand_rmsd",
        "patch_rmsd",
        "correspondence",
        "site_accepted",
        "find_iso_calls",
        "find_mcs_calls",
        "total_seconds",
    ])?;
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
    for r in &run.results {
        let (la, lb) = r
            .best_ligand_pair
            .as_ref()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .unwrap_or_default();
        let site = r.site_alignment.as_ref();
        w.write_record([
            r.index.to_string(),
            r.id_a.to_string(),
            r.id_b.to_string(),
            r.status.to_string(),
            la,
            lb,
            r.match_kind
                .map(|k| {
                    serde_json::to_value(k)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default()
                })
                .unwrap_or_default(),
            opt(r.tanimoto),
            opt(r.ligand_rmsd),
            opt(site.and_then(|s| s.patch_rmsd)),
            site.map(|s| s.correspondence_size.to_string())
                .unwrap_or_default(),
            site.map(|s| s.accepted.to_string()).unwrap_or_default(),
            r.timing.find_iso_calls.to_string(),
            r.timing.find_mcs_calls.to_string(),
            format!("{:.6}", r.timing.total_seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn read_records(path: &Path) -> anyhow::Result<Vec<ResultRecord>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut records = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(
            serde_json::from_str(&line)
                .with_context(|| format!("{}:{}: not a result record", path.display(), n + 1))?,
        );
    }
    Ok(records)
}

/// The last field of every row that parses as a number; header, summary
/// and blank rows are skipped. Rows containing a tab are tab-separated and
/// may use a decimal comma (the layout of a pasted timing table); other
/// rows are comma-separated.
fn read_samples(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(text.lines().filter_map(parse_sample).collect())
}

fn parse_sample(line: &str) -> Option<f64> {
    if line.contains('\t') {
        let field = line.rsplit('\t').next()?.trim();
        field
            .parse()
            .ok()
            .or_else(|| field.replace(',', ".").parse().ok())
    } else {
        line.rsplit(',').next()?.trim().parse().ok()
    }
}

fn print_bench(stats: &[(String, BenchStats)]) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (label, s) in stats {
        write!(out, "{}", s.render_table(&format!("== {label}")))?;
        writeln!(out, "mean_seconds: {:.7}", s.mean)?;
        writeln!(out, "ci95_half_width: {:.4}", s.ci_half_width)?;
        writeln!(out)?;
    }
    if let Some((base_label, base)) = stats.first() {
        for (label, s) in &stats[1..] {
            writeln!(
                out,
                "speedup_percent: {:.4} ({label} vs {base_label})",
                speedup_report(base, s)?
            )?;
        }
    }
    Ok(())
}
