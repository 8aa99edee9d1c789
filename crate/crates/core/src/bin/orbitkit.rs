use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use orbitkit::cli::{parse_config, run, Assertion, Command, MapSource, RunConfig};
use orbitkit::corpus::list_builtins;

#[derive(Parser)]
#[command(name = "orbitkit", version, about = "Orbit sets, transitivity and sensitivity of set-valued maps on [0,1]")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Semicontinuity, connected values and the transitivity probe.
    Analyze(RunArgs),
    /// Orbit tree, grid cover and the level table.
    Orbit(RunArgs),
    /// Transition graph as JSON, DOT and SVG.
    Transition(RunArgs),
    /// Weak dense orbit probe and dense orbit construction.
    Density(RunArgs),
    /// Strong, ordinary, weak and Li-Yorke sensitivity probes.
    Sensitivity(RunArgs),
    /// Everything above.
    Report(RunArgs),
    /// Machine-readable index of the builtin catalog.
    ListBuiltins,
}

#[derive(Clone, Copy, ValueEnum)]
enum Prop {
    Usc,
    Lsc,
    Transitive,
    WeakDense,
    Strong,
    Sensitive,
    Weak,
    Liyorke,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Builtin reference such as `pin(r=1/3)`, or a piece-list file.
    #[arg(long)]
    map: Option<String>,
    /// Run description file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid resolution, `1/m`.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    #[arg(long)]
    sens_eps: Option<String>,
    #[arg(long)]
    sens_horizon: Option<String>,
    /// Root of the orbit.
    #[arg(long)]
    z: Option<String>,
    /// Base point of the density probe (defaults to z).
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    /// Sensitivity candidates: `standard` or `dense`.
    #[arg(long)]
    candidates: Option<String>,
    /// Exit with 2 if this property is certified not to hold.
    #[arg(long = "assert", value_enum)]
    assertions: Vec<Prop>,
    /// Output directory; without it the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn map_source(arg: &str) -> MapSource {
    if Path::new(arg).is_file() {
        MapSource::File(PathBuf::from(arg))
    } else {
        MapSource::Builtin(arg.to_string())
    }
}

fn config(command: Command, args: RunArgs) -> Result<RunConfig, String> {
    let mut cfg = match (&args.config, &args.map) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut cfg = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
            if let Some(out) = &mut cfg.out {
                if out.is_relative() {
                    *out = path.parent().unwrap_or(Path::new(".")).join(&*out);
                }
            }
            if let Some(m) = &args.map {
                cfg.map = map_source(m);
            }
            cfg
        }
        (None, Some(m)) => RunConfig::new(map_source(m), command),
        (None, None) => return Err("either --map or --config is required".into()),
    };
    cfg.command = command;
    let params = [
        ("eps", &args.eps),
        ("depth", &args.depth),
        ("horizon", &args.horizon),
        ("sens_eps", &args.sens_eps),
        ("sens_horizon", &args.sens_horizon),
        ("z", &args.z),
        ("p", &args.p),
        ("eta", &args.eta),
        ("candidates", &args.candidates),
    ];
    for (key, value) in params {
        if let Some(v) = value {
            cfg.set_param(key, v).map_err(|e| e.to_string())?;
        }
    }
    for a in args.assertions {
        let name = a.to_possible_value().expect("no skipped variants").get_name().replace('-', "_");
        cfg.assertions.push(Assertion::parse(&name).expect("same names"));
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("ORBITKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::ListBuiltins => {
            let index = serde_json::to_string_pretty(&list_builtins()).expect("index serializes");
            let _ = writeln!(std::io::stdout(), "{index}");
            return ExitCode::SUCCESS;
        }
        Cmd::Analyze(a) => (Command::Analyze, a),
        Cmd::Orbit(a) => (Command::Orbit, a),
        Cmd::Transition(a) => (Command::Transition, a),
        Cmd::Density(a) => (Command::Density, a),
        Cmd::Sensitivity(a) => (Command::Sensitivity, a),
        Cmd::Report(a) => (Command::Report, a),
    };
    let cfg = match config(command, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("orbitkit: {e}");
            return ExitCode::from(1);
        }
    };
    let output = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("orbitkit: {e}");
            return ExitCode::from(1);
        }
    };
    match &cfg.out {
        Some(dir) => {
            if let Err(e) = output.write_to(dir) {
                eprintln!("orbitkit: {e}");
                return ExitCode::from(1);
            }
            let mut stdout = std::io::stdout().lock();
            for (name, _) in &output.files {
                let _ = writeln!(stdout, "{}", dir.join(name).display());
            }
        }
        None => {
            let _ = write!(std::io::stdout(), "{}", output.file("report.json").expect("always present"));
        }
    }
    for a in &output.failed_assertions {
        eprintln!("orbitkit: asserted property `{a}` is certified not to hold");
    }
    ExitCode::from(output.exit_code as u8)
}
