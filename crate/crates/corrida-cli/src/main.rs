//! Batch experiment harness: simulate corridor-loop runs per country preset
//! and population size, analyze trajectories into stats reports, and compare
//! populations.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 data or processing
//! error.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use corrida::analysis::{
    build_report, compare_reports, KlBase, StatsReport, FD_TIME_BIN_S,
};
use corrida::ingest::{emit_trajectories, parse_trajectories, SidecarMeta, DEFAULT_FRAME_RATE_HZ};
use corrida::simulator::run;

use config::{format_preset_line, ConfigDoc, PresetBook, CONFIG_SCHEMA};

#[derive(Parser)]
#[command(name = "corrida", version, about = "Corridor loop simulator and personal-distance statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment: one trajectory CSV + metadata per seed.
    Simulate {
        /// Experiment config document (JSON); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for trajectories and metadata.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
        /// Override the config's seed list with a single seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Extra country presets file.
        #[arg(long)]
        presets: Option<PathBuf>,
    },
    /// Compute the stats report for one trajectory CSV.
    Analyze {
        /// Trajectory CSV file.
        trajectory: PathBuf,
        /// Experiment config document for the geometry; defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Histogram bin count over [0, 2.5] m.
        #[arg(long, default_value_t = 25)]
        bins: usize,
        /// Write the report here (plus plot tables); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Label recorded in the report; defaults to the file stem.
        #[arg(long)]
        label: Option<String>,
    },
    /// Compare two stats reports (means, Pearson, KL both ways, verdict).
    Compare {
        report_a: PathBuf,
        report_b: PathBuf,
        /// Logarithm base for the KL divergences.
        #[arg(long, value_enum, default_value_t = KlBaseArg::E)]
        kl_base: KlBaseArg,
        /// Write the comparison document here; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List bundled country presets (or the config schema).
    Presets {
        /// Print the experiment config schema instead.
        #[arg(long)]
        schema: bool,
        /// Extra country presets file to include in the listing.
        #[arg(long)]
        presets: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KlBaseArg {
    /// Natural logarithm (nats).
    E,
    /// Base-2 logarithm (bits).
    #[value(name = "2")]
    Two,
}

impl From<KlBaseArg> for KlBase {
    fn from(v: KlBaseArg) -> Self {
        match v {
            KlBaseArg::E => KlBase::Nats,
            KlBaseArg::Two => KlBase::Bits,
        }
    }
}

enum CliError {
    /// Bad invocation or bad config: exit 1.
    Usage(String),
    /// Bad data or processing failure: exit 2.
    Data(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Simulate {
            config,
            out,
            seed,
            presets,
        } => cmd_simulate(config.as_deref(), &out, seed, presets.as_deref()),
        Command::Analyze {
            trajectory,
            config,
            bins,
            out,
            label,
        } => cmd_analyze(&trajectory, config.as_deref(), bins, out.as_deref(), label),
        Command::Compare {
            report_a,
            report_b,
            kl_base,
            out,
        } => cmd_compare(&report_a, &report_b, kl_base.into(), out.as_deref()),
        Command::Presets { schema, presets } => cmd_presets(schema, presets.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_presets(path: Option<&Path>) -> Result<PresetBook, CliError> {
    let mut book = PresetBook::bundled();
    if let Some(path) = path {
        book.load_file(path).map_err(CliError::Usage)?;
    }
    Ok(book)
}

fn load_config(path: Option<&Path>) -> Result<ConfigDoc, CliError> {
    match path {
        Some(path) => ConfigDoc::load(path).map_err(CliError::Usage),
        None => Ok(ConfigDoc::default()),
    }
}

fn cmd_simulate(
    config: Option<&Path>,
    out: &Path,
    seed_override: Option<u64>,
    presets: Option<&Path>,
) -> Result<(), CliError> {
    let presets = load_presets(presets)?;
    let doc = load_config(config)?;
    let mut plan = doc.into_plan(&presets).map_err(CliError::Usage)?;
    if let Some(seed) = seed_override {
        plan.seeds = vec![seed];
    }

    // Validate before touching the filesystem so config errors exit 1.
    for &seed in &plan.seeds {
        plan.sim_config(seed)
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }

    fs::create_dir_all(out)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", out.display())))?;

    for &seed in &plan.seeds {
        let sim_config = plan.sim_config(seed);
        let dataset = run(&sim_config).map_err(|e| CliError::Data(e.to_string()))?;

        let stem = format!("{}_{}_{}", plan.country, plan.population, seed);
        let csv_path = out.join(format!("{stem}.csv"));
        let meta_path = out.join(format!("{stem}.meta.json"));

        let mut buffer = Vec::new();
        emit_trajectories(&dataset, &mut buffer)
            .map_err(|e| CliError::Data(e.to_string()))?;
        fs::write(&csv_path, buffer)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", csv_path.display())))?;

        let sidecar = SidecarMeta::for_dataset(&dataset);
        fs::write(&meta_path, sidecar.to_json())
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", meta_path.display())))?;

        println!(
            "wrote {} ({} frames, {} agents, timeout={})",
            csv_path.display(),
            dataset.frame_count(),
            plan.population,
            dataset.metadata.timeout
        );
    }
    Ok(())
}

fn cmd_analyze(
    trajectory: &Path,
    config: Option<&Path>,
    bins: usize,
    out: Option<&Path>,
    label: Option<String>,
) -> Result<(), CliError> {
    let doc = load_config(config)?;
    let presets = PresetBook::bundled();
    let plan = doc.into_plan(&presets).map_err(CliError::Usage)?;
    let geometry = plan
        .sim_config(1)
        .build_geometry()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let bytes = fs::read(trajectory)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", trajectory.display())))?;
    let mut dataset =
        parse_trajectories(bytes.as_slice()).map_err(|e| CliError::Data(e.to_string()))?;
    if dataset.frames.is_empty() {
        return Err(CliError::Data(format!(
            "{} contains no frames",
            trajectory.display()
        )));
    }

    // Pick up the frame rate (and provenance) from the sidecar if present.
    let sidecar_path = trajectory.with_extension("meta.json");
    let mut sidecar_warning = None;
    match fs::read_to_string(&sidecar_path) {
        Ok(text) => {
            let meta = SidecarMeta::from_json(&text).map_err(|e| CliError::Data(e.to_string()))?;
            dataset.frame_rate_hz = meta.frame_rate_hz;
            dataset.metadata = meta.run;
        }
        Err(_) => {
            sidecar_warning = Some(format!(
                "no sidecar {} found; assuming {DEFAULT_FRAME_RATE_HZ} Hz",
                sidecar_path.display()
            ));
        }
    }

    let label = label.unwrap_or_else(|| {
        trajectory
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "trajectory".to_string())
    });
    let mut report = build_report(&dataset, &geometry, &geometry.roi, bins, &label)
        .map_err(|e| CliError::Data(e.to_string()))?;
    if let Some(w) = sidecar_warning {
        report.warnings.push(w);
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }

    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Data(e.to_string()))?;
    match out {
        None => println!("{json}"),
        Some(path) => {
            fs::write(path, json.as_bytes())
                .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
            write_plot_tables(&report, path)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

/// Plot-ready CSV tables next to the report: one row per histogram bin and
/// one row per fundamental-diagram time bin.
fn write_plot_tables(report: &StatsReport, report_path: &Path) -> Result<(), CliError> {
    let stem = report_path.with_extension("");
    let stem = stem.to_string_lossy();

    if let Some(hist) = &report.histogram {
        let mut text = String::from("bin_lo_m,bin_hi_m,probability\n");
        for (k, p) in hist.probabilities.iter().enumerate() {
            text.push_str(&format!(
                "{},{},{}\n",
                hist.bin_edges[k],
                hist.bin_edges[k + 1],
                p
            ));
        }
        let path = PathBuf::from(format!("{stem}_pdf.csv"));
        fs::write(&path, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }

    let mut text = String::from("bin_index,t_start_s,density_per_m2,mean_speed_m_s,flow_per_s\n");
    for p in &report.fd_curve {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            p.bin_index,
            p.bin_index as f64 * FD_TIME_BIN_S,
            p.density,
            p.mean_speed,
            p.flow
        ));
    }
    let path = PathBuf::from(format!("{stem}_fd.csv"));
    fs::write(&path, text)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn cmd_compare(
    report_a: &Path,
    report_b: &Path,
    kl_base: KlBase,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let load = |path: &Path| -> Result<StatsReport, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    };
    let a = load(report_a)?;
    let b = load(report_b)?;
    let doc = compare_reports(&a, &b, kl_base).map_err(|e| CliError::Data(e.to_string()))?;
    let json =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Data(e.to_string()))?;
    match out {
        None => println!("{json}"),
        Some(path) => {
            fs::write(path, json.as_bytes())
                .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
            // Plot-ready means table: one row per compared population.
            let mut text = String::from("label,population,mean_distance_m,full_loop_mean_m\n");
            for row in &doc.mean_table {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    row.label,
                    row.population.map_or(String::new(), |n| n.to_string()),
                    row.mean_distance.map_or(String::new(), |m| m.to_string()),
                    row.full_loop_mean.map_or(String::new(), |m| m.to_string()),
                ));
            }
            let means_path = PathBuf::from(format!(
                "{}_means.csv",
                path.with_extension("").to_string_lossy()
            ));
            fs::write(&means_path, text).map_err(|e| {
                CliError::Data(format!("cannot write {}: {e}", means_path.display()))
            })?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn cmd_presets(schema: bool, presets: Option<&Path>) -> Result<(), CliError> {
    if schema {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(CONFIG_SCHEMA.as_bytes());
        return Ok(());
    }
    let book = load_presets(presets)?;
    for (name, profile) in book.iter() {
        println!("{}", format_preset_line(name, profile));
    }
    Ok(())
}
