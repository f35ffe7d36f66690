use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand};
use log::info;

use pdcch_lab::analysis::{self, Grant};
use pdcch_lab::channel::Preset;
use pdcch_lab::codec::Rnti;
use pdcch_lab::config::ScenarioConfig;
use pdcch_lab::dci::Direction;
use pdcch_lab::decoders::{DecodeCache, DecodedDci, Decoder, DecoderConfig, Pipeline};
use pdcch_lab::io::{read_jsonl, write_jsonl, SubframeReader, SubframeWriter};
use pdcch_lab::sim::{GroundTruthRecord, Simulator};
use pdcch_lab::{Error, Result};

/// LTE PDCCH blind-decoding lab.
///
/// Log verbosity is read from PDCCH_LOG (error, warn, info, debug, trace).
#[derive(Parser)]
#[command(name = "pdcch-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the received subframe stream plus ground truth.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Subframe stream output.
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth trace output [default: <out>.truth.jsonl].
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Blind-decode a subframe stream into a DCI trace.
    Decode {
        /// Subframe stream written by `simulate`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = pipeline_parser())]
        pipeline: Pipeline,
        /// Trace output [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute collision, RNTI and scoring metrics for a decoded trace.
    Analyze {
        /// Decoded trace (JSON lines).
        #[arg(long)]
        trace: PathBuf,
        /// Ground-truth trace enabling precision, recall and noise-floor metrics.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        n_rb: u16,
        /// Observed subframes [default: last ms in the traces + 1].
        #[arg(long)]
        subframes: Option<u64>,
        /// Active-UE counting window.
        #[arg(long, default_value_t = 5000)]
        window_ms: u64,
        /// CSV output [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate several seeds and decode each with all three pipelines.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Number of consecutive seeds, starting at --seed.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// CSV output [default: stdout]; the summary goes to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario TOML; built-in defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the scenario's channel with a named preset.
    #[arg(long, value_parser = preset_parser())]
    preset: Option<Preset>,
}

fn pipeline_parser() -> impl TypedValueParser<Value = Pipeline> {
    PossibleValuesParser::new(Pipeline::ALL.map(Pipeline::name))
        .map(|s| s.parse().expect("listed value"))
}

fn preset_parser() -> impl TypedValueParser<Value = Preset> {
    PossibleValuesParser::new(Preset::ALL.map(Preset::name))
        .map(|s| s.parse().expect("listed value"))
}

impl ScenarioArgs {
    fn load(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(p) => ScenarioConfig::load(p)?,
            None => ScenarioConfig::default(),
        };
        if let Some(p) = self.preset {
            cfg = cfg.with_preset(p);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn simulate(cfg: ScenarioConfig, out: &Path, truth: Option<PathBuf>) -> Result<()> {
    let truth = truth.unwrap_or_else(|| {
        let mut p = out.as_os_str().to_owned();
        p.push(".truth.jsonl");
        PathBuf::from(p)
    });
    let cfg = analysis::seeded(&cfg, cfg.seed);
    info!("simulating {} ms, seed {}", cfg.duration_ms, cfg.seed);
    let mut stream = SubframeWriter::new(create(out)?, cfg.n_rb)?;
    let mut truth_out = create(&truth)?;
    let mut records = 0usize;
    for item in Simulator::new(cfg)?.received() {
        let (sf, recs) = item?;
        stream.write(&sf)?;
        write_jsonl(&recs, &mut truth_out)?;
        records += recs.len();
    }
    stream.finish()?;
    info!(
        "wrote {records} ground-truth records to {}",
        truth.display()
    );
    Ok(())
}

fn decode(input: &Path, pipeline: Pipeline, out: &Option<PathBuf>) -> Result<()> {
    let reader = SubframeReader::new(open(input)?)?;
    let mut dec = Decoder::new(DecoderConfig {
        n_rb: reader.n_rb,
        ..DecoderConfig::new(pipeline)
    })?;
    let mut cache = DecodeCache::new();
    let mut w = output(out)?;
    let mut n = 0usize;
    for sf in reader {
        let sf = sf?;
        let acc = dec.decode_subframe(&sf, &mut cache);
        let recs = dec.records(sf.ms, &acc);
        n += recs.len();
        write_jsonl(&recs, &mut w)?;
    }
    w.flush()?;
    info!(
        "{} decoded {n} DCIs ({} Viterbi runs)",
        pipeline.name(),
        cache.viterbi_runs
    );
    Ok(())
}

fn analyze(
    trace: &Path,
    truth: &Option<PathBuf>,
    n_rb: u16,
    subframes: Option<u64>,
    window_ms: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    if window_ms == 0 {
        return Err(Error::Config("--window-ms must be positive".into()));
    }
    let decoded: Vec<DecodedDci> = read_jsonl(open(trace)?)?;
    let truth: Option<Vec<GroundTruthRecord>> =
        truth.as_ref().map(|p| read_jsonl(open(p)?)).transpose()?;
    let last = decoded
        .iter()
        .map(|d| d.ms)
        .chain(truth.iter().flatten().map(|t| t.ms))
        .max()
        .map_or(0, |m| m + 1);
    let span = subframes.unwrap_or(last);
    let window = 0..span;

    let mut rows: Vec<(String, &'static str, &'static str, f64)> = Vec::new();
    let pipelines: BTreeSet<Pipeline> = decoded.iter().map(|d| d.pipeline).collect();
    for p in pipelines {
        let name = p.name().to_string();
        let trace: Vec<DecodedDci> = decoded
            .iter()
            .filter(|d| d.pipeline == p)
            .cloned()
            .collect();
        let report = analysis::detect_collisions(&trace, n_rb, window.clone());
        for dir in [Direction::Downlink, Direction::Uplink] {
            let c = report.get(dir);
            rows.push((
                name.clone(),
                dir.as_str(),
                "collision_fraction",
                c.fraction(),
            ));
            rows.push((
                name.clone(),
                dir.as_str(),
                "colliding_subframes",
                c.colliding as f64,
            ));
            rows.push((
                name.clone(),
                dir.as_str(),
                "invalid_allocations",
                c.invalid as f64,
            ));
        }
        rows.push((name.clone(), "all", "decoded", trace.len() as f64));
        let counts: Vec<usize> = (0..span.div_ceil(window_ms))
            .map(|k| analysis::active_ue_count(&trace, k * window_ms..(k + 1) * window_ms))
            .collect();
        let mean = counts.iter().sum::<usize>() as f64 / counts.len().max(1) as f64;
        rows.push((name.clone(), "all", "active_ues_mean", mean));
        rows.push((
            name.clone(),
            "all",
            "active_ues_max",
            counts.iter().copied().max().unwrap_or(0) as f64,
        ));
        let truth_rntis: Option<BTreeSet<Rnti>> =
            truth.as_ref().map(|t| t.iter().map(|r| r.rnti()).collect());
        let dist = analysis::rnti_distribution(&trace, window.clone(), truth_rntis.as_ref());
        rows.push((
            name.clone(),
            "all",
            "distinct_rntis",
            dist.counts.len() as f64,
        ));
        if let Some(t) = &truth {
            let s = analysis::score_vs_ground_truth(&trace, t);
            rows.push((name.clone(), "all", "precision", s.precision));
            rows.push((name.clone(), "all", "recall", s.recall));
            rows.push((name.clone(), "all", "fp_noise", s.fp_noise as f64));
            rows.push((name.clone(), "all", "fp_corrupted", s.fp_corrupted as f64));
            rows.push((
                name.clone(),
                "all",
                "noise_floor_mass",
                dist.noise_floor_mass().unwrap_or(0) as f64,
            ));
        }
    }

    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record(["pipeline", "direction", "metric", "value"])
        .map_err(csv_err)?;
    for (p, d, m, v) in rows {
        w.write_record([p.as_str(), d, m, &v.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e.to_string()))
}

fn compare(cfg: ScenarioConfig, runs: u64, out: &Option<PathBuf>) -> Result<()> {
    if runs == 0 {
        return Err(Error::Config("--runs must be positive".into()));
    }
    let seeds: Vec<u64> = (cfg.seed..cfg.seed.saturating_add(runs)).collect();
    info!("comparing pipelines over {} seeds", seeds.len());
    let cmp = analysis::compare_pipelines(&cfg, &seeds)?;
    cmp.write_csv(output(out)?)?;
    eprint!("{}", cmp.summary());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            scenario,
            out,
            truth,
        } => simulate(scenario.load()?, &out, truth),
        Command::Decode {
            input,
            pipeline,
            out,
        } => decode(&input, pipeline, &out),
        Command::Analyze {
            trace,
            truth,
            n_rb,
            subframes,
            window_ms,
            out,
        } => analyze(&trace, &truth, n_rb, subframes, window_ms, &out),
        Command::Compare {
            scenario,
            runs,
            out,
        } => compare(scenario.load()?, runs, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PDCCH_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
