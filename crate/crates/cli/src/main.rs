use clap::{Parser, Subcommand, ValueEnum};
use gkcore::calibrate;
use gkcore::lemmas;
use gkcore::scene::{self, Report, RunOptions, Status, TaskReport};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "gkcurv", version, about = "Generalized Kähler curvature checks on scene files")]
struct Cli {
    /// Seed for randomized tasks; overrides the scene seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Significant digits for floating-point values.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the tasks of a scene file.
    Run { scene: PathBuf },
    /// Lemma identity suite and calibration fixture.
    Selftest,
    /// Recompute the sign calibration and compare it with the committed fixture.
    Calibrate {
        /// Also write the recomputed fixture here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print or export a shipped example scene.
    Example {
        /// Example name; omit with --list.
        name: Option<String>,
        /// Write the scene JSON, to `<name>.json` unless a path is given.
        #[arg(long, num_args = 0..=1)]
        export: Option<Option<PathBuf>>,
        #[arg(long)]
        list: bool,
    },
}

fn emit(r: &Report, f: Format) -> String {
    match f {
        Format::Json => scene::emit_json(r),
        Format::Text => scene::emit_text(r),
    }
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("gkcurv: {e}");
    ExitCode::from(2)
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn calibration_task() -> TaskReport {
    let mut values = BTreeMap::new();
    let mut notes = Vec::new();
    let status = match calibrate::run_calibration() {
        Ok(c) => {
            let same = calibrate::to_json(&c) == calibrate::FIXTURE;
            values.insert("matches_fixture".into(), same.to_string());
            for d in &c.dims {
                values.insert(format!("dim{}_checks", d.dim), (d.adjoint_checks + d.polarization_checks + d.symmetry_checks).to_string());
            }
            if same {
                Status::Pass
            } else {
                notes.push("calibration drifted from the committed fixture".into());
                Status::Fail
            }
        }
        Err(e) => {
            notes.push(e.to_string());
            Status::Error
        }
    };
    TaskReport { name: "calibration".into(), status, values, notes }
}

fn selftest(seed: u64) -> Report {
    let mut tasks = vec![calibration_task()];
    match lemmas::run_suite(seed) {
        Ok(rs) => {
            for r in rs {
                let mut values = BTreeMap::new();
                values.insert("instances".into(), r.instances.to_string());
                values.insert("failures".into(), r.failures.to_string());
                values.insert("dims".into(), format!("{:?}", r.dims));
                if let Some(c) = &r.constant {
                    values.insert("constant".into(), c.clone());
                }
                if let Some(c) = &r.expected_constant {
                    values.insert("expected_constant".into(), c.clone());
                }
                let status = if r.ok() { Status::Pass } else { Status::Fail };
                tasks.push(TaskReport { name: r.name.clone(), status, values, notes: r.notes.clone() });
            }
        }
        Err(e) => tasks.push(TaskReport { name: "lemma_suite".into(), status: Status::Error, values: BTreeMap::new(), notes: vec![e.to_string()] }),
    }
    let count = |s: Status| tasks.iter().filter(|t| t.status == s).count();
    Report {
        schema: scene::REPORT_SCHEMA.into(),
        scene: "selftest".into(),
        seed,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        tasks,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions { seed: cli.seed, precision: cli.precision };
    match cli.cmd {
        Cmd::Run { scene: path } => match scene::load_scene(&path) {
            Ok(s) => {
                let r = scene::run(&s, opts);
                print!("{}", emit(&r, cli.format));
                code(r.exit_code())
            }
            Err(e) => usage_error(e),
        },
        Cmd::Selftest => {
            let r = selftest(cli.seed.unwrap_or(2024));
            print!("{}", emit(&r, cli.format));
            code(r.exit_code())
        }
        Cmd::Calibrate { output } => {
            let c = match calibrate::run_calibration() {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let json = calibrate::to_json(&c);
            if let Some(p) = output {
                if let Err(e) = std::fs::write(&p, &json) {
                    return usage_error(format!("{}: {e}", p.display()));
                }
            }
            print!("{json}");
            if json == calibrate::FIXTURE {
                eprintln!("calibration matches the committed fixture");
                ExitCode::SUCCESS
            } else {
                eprintln!("calibration differs from the committed fixture");
                ExitCode::from(1)
            }
        }
        Cmd::Example { name, export, list } => {
            if list || name.is_none() {
                for n in scene::EXAMPLE_NAMES {
                    println!("{n}");
                }
                return ExitCode::SUCCESS;
            }
            let name = name.expect("checked above");
            let f = match scene::example_scene(&name) {
                Ok(f) => f,
                Err(e) => return usage_error(e),
            };
            let json = scene::scene_json(&f);
            match export {
                Some(p) => {
                    let p = p.unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
                    match std::fs::write(&p, json) {
                        Ok(()) => {
                            eprintln!("wrote {}", p.display());
                            ExitCode::SUCCESS
                        }
                        Err(e) => usage_error(format!("{}: {e}", p.display())),
                    }
                }
                None => {
                    print!("{json}");
                    ExitCode::SUCCESS
                }
            }
        }
    }
}
