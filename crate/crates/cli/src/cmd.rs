use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use mipvu_core::adapters::{decode_predictions, failure_rate, LabelRecord, PredictionRecord};
use mipvu_core::config::RunConfig;
use mipvu_core::corpus::{
    apply_split, check_coverage, corpus_stats, load_corpus, make_split, Corpus, Partition,
    SplitManifest, SplitRatios,
};
use mipvu_core::dict::{
    compute_coverage, compute_dict_stats, load_dump, render_rows, resolve_references,
    ResolvedRecord,
};
use mipvu_core::display::percent;
use mipvu_core::io::{read_json, read_jsonl, to_json_pretty, to_jsonl, write_atomic};
use mipvu_core::metrics::{
    aggregate_runs, confusion, emit_report, per_register, score, Layout, MetricsError,
    ModelAggregate, RegisterScores, ReportFormat, RunScores,
};
use mipvu_core::store::{
    build_index, render_index, EmbeddingStore, EMBEDDING_DIM, INDEX_FILE, WORKLIST_FILE,
};
use mipvu_core::Error;
use serde::Serialize;

use crate::fail::Failure;

type CmdResult = Result<(), Failure>;

fn required(
    flag: Option<PathBuf>,
    fallback: &Option<PathBuf>,
    name: &str,
) -> Result<PathBuf, Failure> {
    flag.or_else(|| fallback.clone()).ok_or_else(|| {
        Failure::usage(format!(
            "--{name} is required (or set it in the config file)"
        ))
    })
}

fn corpus_at(path: &Path) -> Result<Corpus, Failure> {
    load_corpus(path).map_err(|e| {
        let prefix = matches!(e, Error::Corpus(_));
        let mut f = Failure::from(e);
        if prefix {
            f.message = format!("{}: {}", path.display(), f.message);
        }
        f
    })
}

fn write(path: &Path, bytes: &[u8]) -> CmdResult {
    write_atomic(path, bytes)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn stdout(bytes: &[u8]) -> CmdResult {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| Failure {
            kind: "io",
            code: crate::fail::EXIT_OTHER,
            message: format!("stdout: {e}"),
        })
}

#[derive(Serialize)]
struct BuildSummary<'a> {
    dump: &'a mipvu_core::dict::DumpReport,
    resolution: &'a mipvu_core::dict::ResolutionReport,
    stats: &'a mipvu_core::dict::DictStats,
}

pub fn dict_build(cfg: &RunConfig, dump: Option<PathBuf>, out: Option<PathBuf>) -> CmdResult {
    let dump = required(dump, &cfg.dump, "dump")?;
    let out = required(out, &cfg.out_dir, "out")?;
    let table = load_dump(&dump)?;
    let (resolved, report) = resolve_references(&table);
    let stats = compute_dict_stats(resolved.values());
    let (index, worklist) = build_index(&resolved);

    write(&out.join("resolved.jsonl"), &to_jsonl(&resolved.records()))?;
    let summary = BuildSummary {
        dump: &table.report,
        resolution: &report,
        stats: &stats,
    };
    write(&out.join("stats.json"), &to_json_pretty(&summary))?;
    write(&out.join(WORKLIST_FILE), &to_jsonl(&worklist))?;
    let index_text = render_index(index.iter().map(|(h, r)| (h.as_str(), *r)));
    write(&out.join(INDEX_FILE), index_text.as_bytes())?;
    log::info!(
        "{} entries, {} referencing, {} resolved",
        stats.total_entries,
        report.referencing(),
        report.resolved
    );
    Ok(())
}

pub fn dict_stats(resolved: &Path, corpus: Option<&Path>, out: Option<&Path>) -> CmdResult {
    let records: Vec<ResolvedRecord> = read_jsonl(resolved)?;
    let stats = compute_dict_stats(&records);
    let coverage = match corpus {
        Some(path) => {
            let vocab = corpus_at(path)?.vocab();
            Some(compute_coverage(
                records.iter().map(|r| r.headword.as_str()),
                &vocab,
            )?)
        }
        None => None,
    };
    let rows = stats.rows(coverage.as_ref());
    match out {
        Some(path) => {
            #[derive(Serialize)]
            struct Doc<'a> {
                stats: &'a mipvu_core::dict::DictStats,
                rows: &'a [mipvu_core::dict::StatsRow],
            }
            write(
                path,
                &to_json_pretty(&Doc {
                    stats: &stats,
                    rows: &rows,
                }),
            )
        }
        None => stdout(render_rows(&rows).as_bytes()),
    }
}

pub fn coverage(
    cfg: &RunConfig,
    resolved: &Path,
    corpus: Option<PathBuf>,
    out: Option<&Path>,
) -> CmdResult {
    let corpus = required(corpus, &cfg.corpus, "corpus")?;
    let records: Vec<ResolvedRecord> = read_jsonl(resolved)?;
    let vocab = corpus_at(&corpus)?.vocab();
    let report = compute_coverage(records.iter().map(|r| r.headword.as_str()), &vocab)?;
    match out {
        Some(path) => write(path, &to_json_pretty(&report)),
        None => stdout(
            format!(
                "covered {} of {} vocabulary types ({}%)\n",
                report.covered,
                report.vocab_size,
                percent(report.coverage_fraction, 2)
            )
            .as_bytes(),
        ),
    }
}

fn open_store(dir: &Path, dim: Option<usize>) -> Result<EmbeddingStore, Failure> {
    use mipvu_core::store::{INDEX_FILE, MATRIX_FILE};
    Ok(EmbeddingStore::load_with_dim(
        &dir.join(MATRIX_FILE),
        &dir.join(INDEX_FILE),
        dim.unwrap_or(EMBEDDING_DIM),
    )?)
}

pub fn store_validate(dir: &Path, dim: Option<usize>) -> CmdResult {
    let store = open_store(dir, dim)?;
    stdout(format!("ok rows={} dim={}\n", store.rows(), store.dim()).as_bytes())
}

pub fn store_lookup(dir: &Path, dim: Option<usize>, token: &str) -> CmdResult {
    let store = open_store(dir, dim)?;
    let hit = store.lookup(token);
    #[derive(Serialize)]
    struct Line<'a> {
        token: &'a str,
        row: Option<u32>,
        oov: bool,
        vector: &'a [f32],
    }
    let line = Line {
        token,
        row: store.row_id(token),
        oov: hit.oov,
        vector: hit.vector,
    };
    stdout(&to_jsonl(std::iter::once(&line)))
}

fn parse_ratios(text: &str) -> Result<SplitRatios, Failure> {
    let parts: Result<Vec<f64>, _> = text.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let parts = parts.map_err(|e| Failure::usage(format!("--ratios {text:?}: {e}")))?;
    let [train, dev, test] = parts[..] else {
        return Err(Failure::usage(format!(
            "--ratios needs 3 values, got {}",
            parts.len()
        )));
    };
    let ratios = SplitRatios { train, dev, test };
    ratios.validate()?;
    Ok(ratios)
}

pub fn split(
    cfg: &RunConfig,
    corpus: Option<PathBuf>,
    seed: Option<u64>,
    ratios: Option<&str>,
    out: Option<PathBuf>,
) -> CmdResult {
    let corpus = corpus_at(&required(corpus, &cfg.corpus, "corpus")?)?;
    let seed = seed
        .or_else(|| cfg.seeds.first().copied())
        .ok_or_else(|| Failure::usage("--seed is required"))?;
    let ratios = match ratios {
        Some(r) => parse_ratios(r)?,
        None => cfg.ratios,
    };
    let manifest = make_split(&corpus, seed, ratios)?;
    log::info!(
        "split: train={} dev={} test={}",
        manifest.partitions.train.len(),
        manifest.partitions.dev.len(),
        manifest.partitions.test.len()
    );
    let bytes = to_json_pretty(&manifest);
    match out.or_else(|| cfg.out_dir.as_ref().map(|d| d.join("split.json"))) {
        Some(path) => write(&path, &bytes),
        None => stdout(&bytes),
    }
}

pub fn stats(
    cfg: &RunConfig,
    corpus: Option<PathBuf>,
    split: Option<PathBuf>,
    out: Option<&Path>,
) -> CmdResult {
    let corpus = corpus_at(&required(corpus, &cfg.corpus, "corpus")?)?;
    let manifest: Option<SplitManifest> = match split.or_else(|| cfg.split.clone()) {
        Some(path) => Some(read_json(&path)?),
        None => None,
    };
    let stats = corpus_stats(&corpus, manifest.as_ref())?;
    match out {
        Some(path) => write(path, &to_json_pretty(&stats)),
        None => stdout(stats.render_markdown().as_bytes()),
    }
}

pub fn parse_preds(
    cfg: &RunConfig,
    preds: Option<PathBuf>,
    corpus: Option<PathBuf>,
    out: Option<PathBuf>,
    tau: Option<f64>,
) -> CmdResult {
    let preds = required(preds, &cfg.predictions, "preds")?;
    let corpus = corpus_at(&required(corpus, &cfg.corpus, "corpus")?)?;
    let out = out
        .or_else(|| cfg.out_dir.as_ref().map(|d| d.join("labels.jsonl")))
        .ok_or_else(|| Failure::usage("--out is required (or set out_dir in the config file)"))?;
    let records: Vec<PredictionRecord> = read_jsonl(&preds)?;
    let labels = decode_predictions(&corpus, &records, tau.unwrap_or(cfg.tau))?;
    if !labels.is_empty() {
        let outcomes: Vec<_> = labels.iter().map(LabelRecord::outcome).collect();
        log::info!(
            "{} predictions decoded, parse failure rate {}",
            labels.len(),
            failure_rate(&outcomes)?
        );
    }
    write(&out, &to_jsonl(&labels))
}

pub struct EvalRequest {
    pub gold: Option<PathBuf>,
    pub labels: PathBuf,
    pub split: Option<PathBuf>,
    pub partition: String,
    pub register_breakdown: bool,
    pub model: Option<String>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub fn eval(cfg: &RunConfig, req: EvalRequest) -> CmdResult {
    let corpus = corpus_at(&required(req.gold, &cfg.corpus, "gold")?)?;
    let labels: Vec<LabelRecord> = read_jsonl(&req.labels)?;

    let (gold, partition) = match req.split.or_else(|| cfg.split.clone()) {
        Some(path) => {
            let partition: Partition = req.partition.parse().map_err(Failure::usage)?;
            let manifest: SplitManifest = read_json(&path)?;
            check_coverage(&corpus, &manifest)?;
            let parts = apply_split(&corpus, &manifest)?;
            (
                parts.get(partition).clone(),
                Some(partition.as_str().to_string()),
            )
        }
        None => (corpus.clone(), None),
    };

    // Labels may cover the whole corpus; keep those of the evaluated sentences.
    let all_ids: HashSet<&str> = corpus
        .sentences()
        .map(|(_, s)| s.sent_id.as_str())
        .collect();
    let wanted: HashSet<&str> = gold.sentences().map(|(_, s)| s.sent_id.as_str()).collect();
    let mut kept = Vec::new();
    for l in &labels {
        if !all_ids.contains(l.sent_id.as_str()) {
            return Err(MetricsError::UnexpectedSentence(l.sent_id.clone()).into());
        }
        if wanted.contains(l.sent_id.as_str()) {
            kept.push(l);
        }
    }
    let preds: Vec<_> = kept.iter().map(|l| l.token_labels()).collect();
    let counts = confusion(&gold.gold_labels(), &preds)?;

    let registers = if req.register_breakdown {
        let b = per_register(&gold, &preds)?;
        b.counts
            .into_iter()
            .map(|(r, c)| {
                (
                    r,
                    RegisterScores {
                        counts: c,
                        scores: score(&c),
                    },
                )
            })
            .collect()
    } else {
        BTreeMap::new()
    };
    let outcomes: Vec<_> = kept.iter().map(|l| l.outcome()).collect();
    let parse_failure_rate = if outcomes.is_empty() {
        None
    } else {
        Some(failure_rate(&outcomes)?)
    };
    let model = match req.model {
        Some(m) => m,
        None => req
            .labels
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "model".to_string()),
    };
    let run = RunScores {
        model,
        seed: req.seed,
        partition,
        sentences: gold.sentence_count(),
        counts,
        scores: score(&counts),
        registers,
        parse_failure_rate,
    };
    let bytes = to_json_pretty(&run);
    match req.out {
        Some(path) => write(&path, &bytes),
        None => stdout(&bytes),
    }
}

fn file_name_for(model: &str) -> String {
    let safe: String = model
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{safe}.json")
}

pub fn aggregate(patterns: &[String], out: &Path) -> CmdResult {
    let mut paths = BTreeSet::new();
    for pattern in patterns {
        let matches =
            glob::glob(pattern).map_err(|e| Failure::usage(format!("--runs {pattern:?}: {e}")))?;
        let before = paths.len();
        for m in matches {
            let path = m.map_err(|e| Failure {
                kind: "io",
                code: crate::fail::EXIT_OTHER,
                message: e.to_string(),
            })?;
            if path.is_file() {
                paths.insert(path);
            }
        }
        if paths.len() == before {
            return Err(Failure::missing(format!("no run files match {pattern:?}")));
        }
    }
    let mut runs = Vec::with_capacity(paths.len());
    for path in &paths {
        let run: RunScores = read_json(path)?;
        runs.push(run);
    }
    let aggregates = aggregate_runs(&runs)?;
    let mut names = BTreeSet::new();
    for agg in &aggregates {
        let name = file_name_for(&agg.model);
        if !names.insert(name.clone()) {
            return Err(Failure::invalid(
                "metrics",
                format!("two model names map to the same aggregate file {name}"),
            ));
        }
        write(&out.join(name), &to_json_pretty(agg))?;
    }
    Ok(())
}

pub fn report(dir: &Path, format: &str, layout: &str, out: Option<&Path>) -> CmdResult {
    let format: ReportFormat = format.parse().map_err(Failure::usage)?;
    let layout: Layout = layout.parse().map_err(Failure::usage)?;
    let entries = std::fs::read_dir(dir).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Failure::missing(format!("{}: {e}", dir.display()))
        } else {
            Failure::from(Error::Io {
                path: dir.to_path_buf(),
                source: e,
            })
        }
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::missing(format!(
            "no aggregate files in {}",
            dir.display()
        )));
    }
    let mut models: Vec<ModelAggregate> = Vec::with_capacity(paths.len());
    for path in &paths {
        let agg: ModelAggregate = read_json(path)?;
        if models.iter().any(|m| m.model == agg.model) {
            return Err(Failure::invalid(
                "metrics",
                format!(
                    "model {:?} appears in more than one aggregate file",
                    agg.model
                ),
            ));
        }
        models.push(agg);
    }
    models.sort_by(|a, b| a.model.cmp(&b.model));
    let text = emit_report(&models, layout, format);
    match out {
        Some(path) => {
            if path.extension().is_some_and(|x| x == "json") {
                return Err(Failure::usage(
                    "--out must not end in .json; that name is used for the companion",
                ));
            }
            write(path, text.as_bytes())?;
            write(&path.with_extension("json"), &to_json_pretty(&models))
        }
        None => stdout(text.as_bytes()),
    }
}
