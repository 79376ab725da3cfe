use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coprime_lab::group::set_enumeration_cap;
use coprime_lab::harness::{
    load_error_report, merge_csv, run_suite, summarize, write_csv, Fault, InstanceReport, ModeSelection,
    SuiteOptions,
};
use coprime_lab::instances::{export_instance, load_instance, preset_instances, preset_specs, Instance, PRESETS};
use coprime_lab::{Error, Result};

#[derive(Parser)]
#[command(name = "coprime-lab", version, about = "Coprime-action instances and their verification suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write instance files for the family presets.
    Gen(GenArgs),
    /// Run the verification suite on instance files and presets.
    Check(CheckArgs),
    /// Merge summary CSV files into one.
    Report(ReportArgs),
}

#[derive(Args)]
struct Common {
    /// Preset name (repeatable).
    #[arg(long = "preset")]
    presets: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration cap; takes precedence over COPRIME_LAB_CAP.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "instances")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Derived,
    Gamma,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    CorruptStructureConstant,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Instance files, or directories of `*.json` instance files.
    #[arg(long, num_args = 1..)]
    instances: Vec<PathBuf>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    /// Derived-series depth (default: largest d with 2^d + 2 ≤ k).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Inject a deliberate defect (mutation testing).
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Args)]
struct ReportArgs {
    /// Summary CSV files to merge.
    #[arg(long, num_args = 1..)]
    instances: Vec<PathBuf>,
    #[arg(long, default_value = "reports")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Check(args) => check(args),
        Command::Report(args) => report(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("coprime-lab: {e}");
            ExitCode::from(2)
        }
    }
}

fn apply_cap(common: &Common) {
    if let Some(cap) = common.cap {
        set_enumeration_cap(cap);
    }
}

fn gen(args: GenArgs) -> Result<u8> {
    apply_cap(&args.common);
    let presets: Vec<String> = if args.common.presets.is_empty() {
        PRESETS.iter().map(|s| s.to_string()).collect()
    } else {
        args.common.presets.clone()
    };
    fs::create_dir_all(&args.out)?;
    let mut failures = 0;
    for preset in &presets {
        for (name, spec) in preset_specs(preset, args.common.seed)? {
            match spec.build() {
                Ok(setup) => {
                    let path = args.out.join(format!("{name}.json"));
                    fs::write(&path, export_instance(Some(&name), &setup)?)?;
                    println!("{}", path.display());
                }
                Err(e) => {
                    eprintln!("{name}: {e}");
                    failures += 1;
                }
            }
        }
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn instance_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<Vec<_>>>()?
                .into_iter()
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn check(args: CheckArgs) -> Result<u8> {
    apply_cap(&args.common);
    let mut instances: Vec<Instance> = Vec::new();
    let mut broken: Vec<InstanceReport> = Vec::new();
    for preset in &args.common.presets {
        instances.extend(preset_instances(preset, args.common.seed)?);
    }
    for path in instance_files(&args.instances)? {
        match load_instance(&path) {
            Ok(i) => instances.push(i),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                broken.push(load_error_report(&path.display().to_string(), &e));
            }
        }
    }
    let opts = SuiteOptions {
        seed: args.common.seed,
        mode: match args.mode {
            Mode::Derived => ModeSelection::Derived,
            Mode::Gamma => ModeSelection::Gamma,
            Mode::Both => ModeSelection::Both,
        },
        d: args.d,
        max_degree: args.max_degree,
        jobs: args.jobs,
        fault: args.inject_fault.map(|f| match f {
            FaultArg::CorruptStructureConstant => Fault::CorruptStructureConstant,
        }),
    };
    let result = run_suite(&instances, &opts)?;
    let mut reports = result.reports;
    reports.extend(broken);
    let result = summarize(reports);

    fs::create_dir_all(&args.out)?;
    if matches!(args.format, Format::Json | Format::Both) {
        for r in &result.reports {
            let mut text = serde_json::to_string_pretty(r)?;
            text.push('\n');
            fs::write(args.out.join(format!("{}.json", file_stem(&r.instance))), text)?;
        }
        let mut text = serde_json::to_string_pretty(&result.summary)?;
        text.push('\n');
        fs::write(args.out.join("summary.json"), text)?;
    }
    if matches!(args.format, Format::Csv | Format::Both) {
        write_csv(fs::File::create(args.out.join("summary.csv"))?, &result.reports)?;
    }
    for r in &result.reports {
        println!("{:<40} {}", r.instance, r.status.as_str());
    }
    for (cell, class) in &result.summary.table.cells {
        println!("max class {class:>3}  {cell}");
    }
    println!(
        "{} instances, {} failed, {} errors",
        result.summary.instances, result.summary.failed, result.summary.errors
    );
    Ok(result.exit_code() as u8)
}

/// Instance names become file names; path separators are replaced.
fn file_stem(name: &str) -> String {
    let stem = Path::new(name)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| name.to_string());
    stem.replace(['/', '\\'], "_")
}

fn report(args: ReportArgs) -> Result<u8> {
    if args.instances.is_empty() {
        return Err(Error::Precondition("report needs at least one CSV file via --instances".into()));
    }
    fs::create_dir_all(&args.out)?;
    let inputs: Vec<&Path> = args.instances.iter().map(|p| p.as_path()).collect();
    let target = args.out.join("merged.csv");
    let rows = merge_csv(&inputs, fs::File::create(&target)?)?;
    println!("{} rows -> {}", rows, target.display());
    Ok(0)
}
