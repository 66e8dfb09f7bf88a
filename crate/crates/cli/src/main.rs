mod args;
mod commands;

use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use sha2::{Digest, Sha256};

use args::{Cli, Command};
use commands::Output;

/// Written next to a run with `--manifest`. Re-running `args` reproduces
/// `digest`, the SHA-256 of everything the run wrote (stdout, then each
/// output file in order).
#[derive(Serialize)]
struct RunManifest<'a> {
    subcommand: &'a str,
    args: Vec<String>,
    seed: Option<u64>,
    version: &'static str,
    threads: usize,
    duration_secs: f64,
    exit_code: i32,
    digest: String,
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("HF_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| anyhow::anyhow!("HF_THREADS must be a positive integer, got `{v}`"))?;
    anyhow::ensure!(n > 0, "HF_THREADS must be a positive integer, got `{v}`");
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn digest(out: &Output) -> String {
    let mut h = Sha256::new();
    match &out.digest_override {
        Some(bytes) => h.update(bytes),
        None => {
            h.update(&out.stdout);
            for (_, bytes) in &out.files {
                h.update(bytes);
            }
        }
    }
    hex::encode(h.finalize())
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, bytes).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))
}

fn run(cli: &Cli) -> anyhow::Result<i32> {
    init_threads()?;
    let start = Instant::now();
    let (name, seed, out) = match &cli.command {
        Command::Enumerate(a) => ("enumerate", None, commands::enumerate(a)?),
        Command::Construct(a) => ("construct", Some(a.search.seed), commands::construct(a)?),
        Command::Verify(a) => ("verify", None, commands::verify(a)?),
        Command::Graph(a) => ("graph", None, commands::graph(a)?),
        Command::Analyze(a) => ("analyze", None, commands::analyze(a)?),
        Command::Bench(a) => ("bench", Some(a.search.seed), commands::bench(a)?),
    };
    let duration = start.elapsed().as_secs_f64();

    for (path, bytes) in &out.files {
        write_file(path, bytes)?;
    }
    std::io::stdout().write_all(&out.stdout)?;
    eprint!("{}", out.stderr);

    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            subcommand: name,
            args: std::env::args().skip(1).collect(),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            threads: rayon::current_num_threads(),
            duration_secs: duration,
            exit_code: out.exit,
            digest: digest(&out),
        };
        write_file(path, &serde_json::to_vec_pretty(&manifest)?)?;
    }
    Ok(out.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<shmat::Error>() {
                Some(shmat::Error::Parse { .. }) => commands::EXIT_PARSE,
                Some(shmat::Error::BadOrder(_)) => commands::EXIT_BAD_ORDER,
                _ => 1,
            };
            ExitCode::from(code as u8)
        }
    }
}
