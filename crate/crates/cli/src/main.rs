use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gfdm_spa::harness::{parse_config_text, run_and_write, SimulationConfig};
use gfdm_spa::Error;

/// Monte Carlo BER simulation of Linear GFDM with a sum-product receiver.
#[derive(Debug, Parser)]
#[command(name = "gfdm-spa", version)]
struct Args {
    /// key=value config file; flags given on the command line override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of subcarriers (even)
    #[arg(short = 'K')]
    k: Option<usize>,
    /// Number of subsymbols / overlapping factor
    #[arg(short = 'M')]
    m: Option<usize>,
    #[arg(long, value_parser = ["qpsk"])]
    mapping: Option<String>,
    #[arg(long, value_parser = ["martin", "rect"])]
    filter: Option<String>,
    #[arg(long, value_parser = ["awgn", "rayleigh", "dispersive"])]
    channel: Option<String>,
    /// Dispersive channel taps, comma separated, `re:im` for complex taps
    #[arg(long)]
    taps: Option<String>,
    /// Eb/N0 grid in dB, `start:step:stop` or a single value
    #[arg(long)]
    ebn0: Option<String>,
    /// Comma-separated iteration counts
    #[arg(long)]
    tau: Option<String>,
    #[arg(long, value_parser = ["combined", "genie"])]
    mode: Option<String>,
    #[arg(long, value_parser = ["linear", "gfdm"])]
    waveform: Option<String>,
    #[arg(long, value_parser = ["spa", "mf"])]
    receiver: Option<String>,
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    max_frames: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// BER CSV path; theory and complexity CSVs are written next to it
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_theory: bool,
    #[arg(long)]
    emit_complexity: bool,
    /// Run on a single thread
    #[arg(long)]
    serial: bool,
    /// Write wall_seconds as 0 so output is byte-reproducible
    #[arg(long)]
    no_timing: bool,
}

impl Args {
    fn pairs(&self) -> Vec<(String, String)> {
        let mut pairs = Vec::new();
        let mut push = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                pairs.push((key.to_string(), v));
            }
        };
        push("K", self.k.map(|v| v.to_string()));
        push("M", self.m.map(|v| v.to_string()));
        push("mapping", self.mapping.clone());
        push("filter", self.filter.clone());
        push("channel", self.channel.clone());
        push("taps", self.taps.clone());
        push("ebn0", self.ebn0.clone());
        push("tau", self.tau.clone());
        push("mode", self.mode.clone());
        push("waveform", self.waveform.clone());
        push("receiver", self.receiver.clone());
        push("min-errors", self.min_errors.map(|v| v.to_string()));
        push("max-frames", self.max_frames.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("emit-theory", self.emit_theory.then(|| "true".into()));
        push("emit-complexity", self.emit_complexity.then(|| "true".into()));
        push("serial", self.serial.then(|| "true".into()));
        push("no-timing", self.no_timing.then(|| "true".into()));
        pairs
    }
}

fn load_config(args: &Args) -> Result<SimulationConfig, Error> {
    let mut pairs = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config_text(&text)?
        }
        None => Vec::new(),
    };
    pairs.extend(args.pairs());
    SimulationConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match load_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run_and_write(&cfg) {
        Ok((_, files, stdout)) => {
            print!("{stdout}");
            for path in [files.ber, files.theory, files.complexity].into_iter().flatten() {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
