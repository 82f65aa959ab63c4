//! `skb-forge`: build, distill, evaluate and query sememe knowledge bases.

mod error;
mod manifest;
mod settings;

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use skb_forge::eval::{evaluate_consistency, EvalConfig};
use skb_forge::extract::{build_skb, distill_skb, Diagnostic, DistillConfig};
use skb_forge::ingest::{
    attach_parses, parse_conllu, parse_dictionary, parse_embeddings, parse_wordlist, read_skb, write_skb,
    IngestError, WordList, WordListKind,
};
use skb_forge::sememe_set::{build_sememe_set, SememeSetConfig, TokenSource};
use skb_forge::substitution::SubstitutionIndex;
use skb_forge::{Lemma, Pos, Skb};

use error::{invalid, CliError};
use manifest::RunManifest;
use settings::{pick, FileSettings};

#[derive(Parser)]
#[command(name = "skb-forge", version, about = "Sememe knowledge bases from dictionary definitions")]
struct Cli {
    /// Worker threads for the parallel stages (0 = all cores).
    #[arg(long, global = true, env = "SKB_FORGE_JOBS", default_value_t = 0)]
    jobs: usize,
    /// TOML file with hyper-parameters; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the run manifest here instead of logging it.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the sememe inventory from the CDV and the dictionary.
    BuildSememeSet(BuildArgs),
    /// Annotate every sense with the inventory lemmas in its definition.
    Annotate(AnnotateArgs),
    /// Keep only the most important sememes of long sememe sets.
    Distill(DistillArgs),
    /// Held-out sememe prediction: MAP and F1.
    EvalConsistency(EvalArgs),
    /// Words sharing a sememe set with WORD, one per line.
    Substitutes(SubstitutesArgs),
    /// SKB size statistics as JSON.
    Stats(StatsArgs),
    /// Re-export an SKB in canonical form or as TSV.
    Export(ExportArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    dict: PathBuf,
    #[arg(long)]
    cdv: PathBuf,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    negators: Option<PathBuf>,
    /// CoNLL-U sidecar whose lemmas replace the fallback normalizer.
    #[arg(long)]
    conllu: Option<PathBuf>,
    /// Fail if any sense lacks a sidecar block.
    #[arg(long, requires = "conllu")]
    annotations_only: bool,
    #[arg(long)]
    top_trim: Option<f64>,
    #[arg(long)]
    bottom_trim: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnnotateArgs {
    #[arg(long)]
    dict: PathBuf,
    /// Inventory file written by build-sememe-set (or any SKB export).
    #[arg(long)]
    inventory: PathBuf,
    #[arg(long)]
    conllu: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Args)]
struct DistillArgs {
    #[arg(long)]
    skb: PathBuf,
    #[arg(long)]
    conllu: PathBuf,
    /// Score slack below the best sememe.
    #[arg(long)]
    t: Option<u32>,
    /// Minimum sememe count for a sense to be distilled.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    skb: PathBuf,
    #[arg(long)]
    embeddings: PathBuf,
    #[arg(long)]
    holdout: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// Rank decay of neighbour contributions.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    f1_ratio: Option<f64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SubstitutesArgs {
    #[arg(long)]
    skb: PathBuf,
    word: String,
    #[arg(long)]
    pos: Option<String>,
    /// Allow substitutes across known, differing POS tags.
    #[arg(long)]
    no_pos_match: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    skb: PathBuf,
    /// Print substitute-count mean and histogram instead.
    #[arg(long)]
    substitutes: bool,
    #[arg(long)]
    no_pos_match: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Skb,
    Tsv,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    skb: PathBuf,
    #[arg(long, value_enum, default_value = "skb")]
    format: ExportFormat,
    /// Drop inventory sememes no record uses.
    #[arg(long)]
    effective: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileSettings::load(p)?,
        None => FileSettings::default(),
    };
    let mut manifest = match &cli.command {
        Command::BuildSememeSet(a) => cmd_build(a, &file)?,
        Command::Annotate(a) => cmd_annotate(a)?,
        Command::Distill(a) => cmd_distill(a, &file)?,
        Command::EvalConsistency(a) => cmd_eval(a, &file)?,
        Command::Substitutes(a) => cmd_substitutes(a, &file)?,
        Command::Stats(a) => cmd_stats(a, &file)?,
        Command::Export(a) => cmd_export(a)?,
    };
    if let Some(p) = &cli.config {
        let bytes = std::fs::read(p).map_err(|source| CliError::Io { path: p.clone(), source })?;
        manifest.add_input(p, &bytes);
    }
    manifest.emit(cli.manifest.as_deref())
}

fn read_input<T>(
    manifest: &mut RunManifest,
    path: &Path,
    parse: impl FnOnce(&[u8]) -> Result<T, IngestError>,
) -> Result<T, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    manifest.add_input(path, &bytes);
    parse(&bytes).map_err(|source| CliError::Input { path: path.into(), source })
}

fn write_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), CliError> {
    let result = match path {
        Some(p) => File::create(p).and_then(|file| {
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()
        }),
        None => {
            let mut w = std::io::stdout().lock();
            f(&mut w).and_then(|_| w.flush())
        }
    };
    result.map_err(|source| CliError::Io { path: path.map_or_else(|| "<stdout>".into(), Path::to_path_buf), source })
}

fn write_diagnostics(path: Option<&Path>, diags: &[Diagnostic]) -> Result<(), CliError> {
    if diags.is_empty() && path.is_none() {
        return Ok(());
    }
    if !diags.is_empty() {
        log::warn!("{} per-sense diagnostics", diags.len());
    }
    let Some(path) = path else { return Ok(()) };
    write_output(Some(path), |w| {
        for d in diags {
            serde_json::to_writer(&mut *w, d)?;
            writeln!(w)?;
        }
        Ok(())
    })
}

fn load_skb(manifest: &mut RunManifest, path: &Path) -> Result<Skb, CliError> {
    read_input(manifest, path, |b| read_skb(b))
}

fn load_list(manifest: &mut RunManifest, path: Option<&Path>, kind: WordListKind) -> Result<WordList, CliError> {
    match path {
        Some(p) => read_input(manifest, p, |b| parse_wordlist(b, kind)),
        None => Ok(WordList::new(kind)),
    }
}

fn cmd_build(a: &BuildArgs, file: &FileSettings) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new("build-sememe-set");
    let top = pick(a.top_trim, file.top_trim, 0.01);
    let bottom = pick(a.bottom_trim, file.bottom_trim, 0.10);
    m.set_config(json!({"top_trim": top, "bottom_trim": bottom, "annotations_only": a.annotations_only}));

    let mut entries = read_input(&mut m, &a.dict, |b| parse_dictionary(b))?;
    let cdv = read_input(&mut m, &a.cdv, |b| parse_wordlist(b, WordListKind::Cdv))?;
    let cfg = SememeSetConfig {
        top_trim_fraction: top,
        bottom_trim_fraction: bottom,
        stopwords: load_list(&mut m, a.stopwords.as_deref(), WordListKind::Stopword)?,
        negators: load_list(&mut m, a.negators.as_deref(), WordListKind::Negator)?,
    };
    if let Some(p) = &a.conllu {
        let parses = read_input(&mut m, p, |b| parse_conllu(b))?;
        let attached = attach_parses(&mut entries, &parses);
        log::info!("attached {attached} parses");
    }
    let source = if a.annotations_only { TokenSource::AnnotationsOnly } else { TokenSource::FallbackNormalizer };
    let inventory = m.time("build-sememe-set", || build_sememe_set(&entries, &cdv, &cfg, source)).map_err(invalid)?;
    log::info!("{} sememes from {} CDV words", inventory.len(), cdv.len());
    write_output(Some(&a.out), |w| write_skb(&Skb::new(inventory), w))?;
    Ok(m)
}

fn cmd_annotate(a: &AnnotateArgs) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new("annotate");
    m.set_config(json!({}));
    let entries = read_input(&mut m, &a.dict, |b| parse_dictionary(b))?;
    let inventory = load_skb(&mut m, &a.inventory)?.into_parts().0;
    let parses = match &a.conllu {
        Some(p) => Some(read_input(&mut m, p, |b| parse_conllu(b))?),
        None => None,
    };
    let outcome = m.time("annotate", || build_skb(&entries, &inventory, parses.as_ref())).map_err(invalid)?;
    log::info!("{} senses annotated", outcome.skb.len());
    write_output(Some(&a.out), |w| write_skb(&outcome.skb, w))?;
    write_diagnostics(a.diagnostics.as_deref(), &outcome.diagnostics)?;
    Ok(m)
}

fn cmd_distill(a: &DistillArgs, file: &FileSettings) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new("distill");
    let cfg = DistillConfig { slack: pick(a.t, file.t, 1), min_sememes: pick(a.m, file.m, 4) };
    m.set_config(json!({"t": cfg.slack, "m": cfg.min_sememes}));
    let skb = load_skb(&mut m, &a.skb)?;
    let parses = read_input(&mut m, &a.conllu, |b| parse_conllu(b))?;
    let outcome = m.time("distill", || distill_skb(&skb, &parses, &cfg)).map_err(invalid)?;
    write_output(Some(&a.out), |w| write_skb(&outcome.skb, w))?;
    write_diagnostics(a.diagnostics.as_deref(), &outcome.diagnostics)?;
    Ok(m)
}

fn cmd_eval(a: &EvalArgs, file: &FileSettings) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new("eval-consistency");
    let d = EvalConfig::default();
    let cfg = EvalConfig {
        holdout_fraction: pick(a.holdout, file.holdout, d.holdout_fraction),
        seed: pick(a.seed, file.seed, d.seed),
        k_neighbors: pick(a.k, file.k, d.k_neighbors),
        rank_decay: pick(a.c, file.c, d.rank_decay),
        f1_score_ratio: pick(a.f1_ratio, file.f1_ratio, d.f1_score_ratio),
    };
    m.set_config(serde_json::to_value(&cfg).expect("config is serializable"));
    let skb = load_skb(&mut m, &a.skb)?;
    let emb = read_input(&mut m, &a.embeddings, |b| parse_embeddings(b))?;
    let report = m.time("eval", || evaluate_consistency(&skb, &emb, &cfg)).map_err(invalid)?;
    eprintln!(
        "MAP {:.4}  F1 {:.4}  ({} senses scored, {} excluded)",
        report.map_score,
        report.f1_score,
        report.per_sense.len(),
        report.excluded
    );
    write_output(a.out.as_deref(), |w| {
        serde_json::to_writer(&mut *w, &report)?;
        writeln!(w)
    })?;
    Ok(m)
}

fn substitution_index(
    m: &mut RunManifest,
    skb_path: &Path,
    no_pos_match: bool,
    file: &FileSettings,
) -> Result<SubstitutionIndex, CliError> {
    let match_pos = if no_pos_match { false } else { file.match_pos.unwrap_or(true) };
    m.set_config(json!({"match_pos": match_pos}));
    let skb = load_skb(m, skb_path)?;
    m.time("index", || SubstitutionIndex::build(&skb, match_pos)).map_err(invalid)
}

fn cmd_substitutes(a: &SubstitutesArgs, file: &FileSettings) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new("substitutes");
    let index = substitution_index(&mut m, &a.skb, a.no_pos_match, file)?;
    let word = Lemma::new(&a.word).map_err(invalid)?;
    let pos = a.pos.as_deref().map(Pos::from);
    let subs = index.substitutes(&word, pos.as_ref()).map_err(invalid)?;
    write_output(None, |w| {
        for s in &subs {
            writeln!(w, "{s}")?;
        }
        Ok(())
    })?;
    Ok(m)
}

fn cmd_stats(a: &StatsArgs, file: &FileSettings) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new("stats");
    let value = if a.substitutes {
        let index = substitution_index(&mut m, &a.skb, a.no_pos_match, file)?;
        serde_json::to_value(m.time("substitute-stats", || index.stats()))
    } else {
        m.set_config(json!({}));
        let skb = load_skb(&mut m, &a.skb)?;
        serde_json::to_value(skb.compute_stats().map_err(invalid)?)
    }
    .expect("stats are serializable");
    write_output(None, |w| {
        serde_json::to_writer(&mut *w, &value)?;
        writeln!(w)
    })?;
    Ok(m)
}

fn cmd_export(a: &ExportArgs) -> Result<RunManifest, CliError> {
    let mut m = RunManifest::new("export");
    m.set_config(json!({"effective": a.effective}));
    let mut skb = load_skb(&mut m, &a.skb)?;
    if a.effective {
        let inventory = skb.effective_inventory();
        let (_, records) = skb.into_parts();
        skb = Skb::from_records(inventory, records).map_err(invalid)?;
    }
    write_output(a.out.as_deref(), |w| match a.format {
        ExportFormat::Skb => write_skb(&skb, w),
        ExportFormat::Tsv => write_tsv(&skb, w),
    })?;
    Ok(m)
}

fn write_tsv(skb: &Skb, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "sense_id\theadword\tpos\tsememes")?;
    for r in skb.records() {
        let sememes: Vec<&str> = r.sememes.iter().map(Lemma::as_str).collect::<BTreeSet<_>>().into_iter().collect();
        writeln!(w, "{}\t{}\t{}\t{}", r.sense_id, r.headword, r.pos.tag().unwrap_or("_"), sememes.join(" "))?;
    }
    Ok(())
}
