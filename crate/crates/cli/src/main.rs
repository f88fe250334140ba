use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gdaf_core::io::{load_gaitset, load_raw_recording, read_gaitset_unvalidated, save_gaitset, RAWREC_EXTENSION};
use gdaf_core::report::{build_report, format_index_table, format_speed, write_bundle};
use gdaf_core::segmentation::{apply_joint_map, segment_recordings};
use gdaf_core::{validate_gaitset, Entity, GaitSet, GdafError, RawRecording, RunConfig, ViewerBundle};

#[derive(Parser)]
#[command(name = "gdaf", version, about = "Gait divergence analysis between human and humanoid-robot walking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment raw recordings into a cycle-normalized gait set.
    Segment {
        /// Directory holding *.rawrec.json recordings.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        entity: EntityArg,
        /// Output .gaitset.json path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "GDAF_CONFIG")]
        config: Option<PathBuf>,
    },
    /// Compare a human gait set against a robot gait set and write a report bundle.
    Analyze {
        #[arg(long)]
        human: PathBuf,
        #[arg(long)]
        robot: PathBuf,
        /// Output directory for the report bundle.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "GDAF_CONFIG")]
        config: Option<PathBuf>,
    },
    /// Package both gait sets and the joint map into one viewer bundle.
    ExportViewer {
        #[arg(long)]
        human: PathBuf,
        #[arg(long)]
        robot: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "GDAF_CONFIG")]
        config: Option<PathBuf>,
    },
    /// Check a gait set file and list every violation.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EntityArg {
    Human,
    Robot,
}

impl From<EntityArg> for Entity {
    fn from(e: EntityArg) -> Self {
        match e {
            EntityArg::Human => Entity::Human,
            EntityArg::Robot => Entity::Robot,
        }
    }
}

/// A fatal outcome: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

const USAGE_HINT: &str = "run `gdaf --help` for usage";

/// Exit code for errors raised while loading inputs or analysing them.
fn code_for(err: &GdafError) -> u8 {
    match err {
        GdafError::NoCommonSpeeds => 4,
        GdafError::Mapping(_) | GdafError::Config(_) => 5,
        _ => 1,
    }
}

fn from_core(err: GdafError) -> Failure {
    let mut message = err.to_string();
    if matches!(err, GdafError::Io { .. }) {
        message = format!("{message}\n{USAGE_HINT}");
    }
    Failure::new(code_for(&err), message)
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => RunConfig::load(p).map_err(|e| match e {
            GdafError::Io { .. } => from_core(e),
            other => Failure::new(5, format!("{}: {other}", p.display())),
        }),
    }
}

fn load_pair(human: &Path, robot: &Path) -> Result<(GaitSet, GaitSet), Failure> {
    Ok((load_gaitset(human).map_err(from_core)?, load_gaitset(robot).map_err(from_core)?))
}

fn recordings_in(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Failure::new(1, format!("cannot read directory {}: {e}\n{USAGE_HINT}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Failure::new(1, format!("cannot read directory {}: {e}", dir.display())))?
            .path();
        let is_rec = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.ends_with(RAWREC_EXTENSION));
        if is_rec && path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn segment(input: &Path, entity: Entity, out: &Path, config: Option<&Path>) -> Result<(), Failure> {
    let cfg = load_config(config)?;
    let files = recordings_in(input)?;
    if files.is_empty() {
        return Err(Failure::new(2, format!("no recordings found in {}", input.display())));
    }
    let recordings = files
        .iter()
        .map(|f| load_raw_recording(f).map_err(from_core))
        .collect::<Result<Vec<RawRecording>, _>>()?;
    let (mut gs, summary) = segment_recordings(&recordings, entity, &cfg.segmentation()).map_err(|(i, e)| {
        let file = i.map_or_else(|| input.display().to_string(), |i| files[i].display().to_string());
        Failure::new(3, format!("segmentation failed for {file}: {e}"))
    })?;
    if entity == Entity::Human {
        if let Some(map) = cfg.joint_map().map_err(from_core)? {
            gs = apply_joint_map(&gs, &map).map_err(from_core)?;
        }
    }
    save_gaitset(&gs, out).map_err(from_core)?;
    println!("speed_mps  recordings  strides  mean_duration_s");
    for s in &summary {
        println!(
            "{:>9}  {:>10}  {:>7}  {:.4}",
            format_speed(s.speed_mps),
            s.recordings,
            s.strides,
            s.mean_duration_s
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn analyze(human: &Path, robot: &Path, out: &Path, config: Option<&Path>) -> Result<(), Failure> {
    let cfg = load_config(config)?;
    let (h, r) = load_pair(human, robot)?;
    let bundle = build_report(&h, &r, &cfg).map_err(from_core)?;
    write_bundle(&bundle, out).map_err(from_core)?;
    print!("{}", format_index_table(&bundle.gdaf_table));
    for note in &bundle.manifest.flags.annotations {
        eprintln!("note: {note}");
    }
    Ok(())
}

fn export_viewer(human: &Path, robot: &Path, out: &Path, config: Option<&Path>) -> Result<(), Failure> {
    let cfg = load_config(config)?;
    let (h, r) = load_pair(human, robot)?;
    let map = cfg.joint_map().map_err(from_core)?;
    let bundle = ViewerBundle::new(&h, &r, map).map_err(from_core)?;
    bundle.save(out).map_err(from_core)?;
    println!("wrote {} ({} speeds)", out.display(), bundle.speeds.len());
    Ok(())
}

fn validate(input: &Path) -> Result<(), Failure> {
    let violations = match read_gaitset_unvalidated::<f64>(input) {
        Ok(gs) => {
            let found = validate_gaitset(&gs);
            if found.is_empty() {
                print_valid(input, &gs);
                return Ok(());
            }
            found
        }
        Err(GdafError::Invalid(found)) => found,
        Err(e) => return Err(from_core(e)),
    };
    for v in &violations {
        println!("{v}");
    }
    Err(Failure::new(
        1,
        format!("{}: {} violation(s)", input.display(), violations.len()),
    ))
}

fn print_valid(input: &Path, gs: &GaitSet) {
    println!(
        "{}: valid {} gait set, {} channels, {} speeds, {} samples per cycle",
        input.display(),
        gs.entity,
        gs.channels.len(),
        gs.speed_grid.len(),
        gs.n_samples()
    );
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Segment {
            input,
            entity,
            out,
            config,
        } => segment(&input, entity.into(), &out, config.as_deref()),
        Command::Analyze {
            human,
            robot,
            out,
            config,
        } => analyze(&human, &robot, &out, config.as_deref()),
        Command::ExportViewer {
            human,
            robot,
            out,
            config,
        } => export_viewer(&human, &robot, &out, config.as_deref()),
        Command::Validate { input } => validate(&input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
