//! Monte Carlo BER estimation.
//!
//! A sweep is a grid of (Eb/N0, τ) points. Every frame draws from its own RNG
//! stream derived from `(seed, Eb/N0 index, frame index)`, so the τ values at one
//! Eb/N0 see the same frames, and results do not depend on thread count.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::{
    apply_channel, awgn, draw_flat_rayleigh, ebn0_to_sigma2, equivalent_matrices, ChannelKind,
    ChannelRealization, EquivalentMatrix,
};
use crate::oracle::{theory_curve, TheoryChannel, THEORY_CSV_HEADER};
use crate::rng::{frame_rng, point_seed, SimRng};
use crate::spa::{complexity_report, map_decide, ReceiverMode, SpaReceiver};
use crate::waveform::{
    assemble_modulation_matrix, build_prototype_filter, demap_frame, linear_gfdm_matrices,
    map_bits, modulate_linear_gfdm, DataFrame, FilterKind, ModulationMatrix, SymbolAlphabet,
    WaveformParams,
};
use crate::{Error, Result};

/// Frames simulated between stopping-rule checks.
const BATCH_FRAMES: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveformKind {
    /// Zero-padded filter, separate in-phase and quadrature matrices.
    LinearGfdm,
    /// Circular GFDM; `M = 1` with a rect filter is OFDM.
    Gfdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiverKind {
    Spa,
    /// Per-column correlation with the equivalent matrix and a hard decision.
    MatchedFilter,
}

/// Inclusive Eb/N0 grid `start:step:stop` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EbN0Sweep {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl EbN0Sweep {
    pub fn single(ebn0_db: f64) -> Self {
        Self {
            start: ebn0_db,
            step: 1.0,
            stop: ebn0_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.step.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("Eb/N0 sweep values must be finite".into()));
        }
        if self.start > self.stop {
            return Err(Error::Config("Eb/N0 start exceeds stop".into()));
        }
        if !(self.step > 0.0) {
            return Err(Error::Config("Eb/N0 step must be positive".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl std::str::FromStr for EbN0Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad Eb/N0 value `{p}`")))
        };
        let sweep = match parts.as_slice() {
            [v] => Self::single(num(v)?),
            [start, step, stop] => Self {
                start: num(start)?,
                step: num(step)?,
                stop: num(stop)?,
            },
            _ => {
                return Err(Error::Config(format!(
                    "Eb/N0 sweep must be `value` or `start:step:stop`, got `{s}`"
                )))
            }
        };
        sweep.validate()?;
        Ok(sweep)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub params: WaveformParams,
    pub waveform: WaveformKind,
    pub receiver: ReceiverKind,
    pub channel: ChannelKind,
    /// Taps for the dispersive channel.
    pub impulse_response: Vec<Complex64>,
    pub sweep: EbN0Sweep,
    pub taus: Vec<usize>,
    pub mode: ReceiverMode,
    pub min_bit_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub emit_theory: bool,
    pub emit_complexity: bool,
    /// Run frames and points on the rayon pool.
    pub parallel: bool,
    /// Record wall-clock time; when off, `wall_seconds` is written as 0 so output
    /// is byte-reproducible.
    pub timing: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            params: WaveformParams::table1(),
            waveform: WaveformKind::LinearGfdm,
            receiver: ReceiverKind::Spa,
            channel: ChannelKind::Awgn,
            impulse_response: vec![Complex64::new(1.0, 0.0)],
            sweep: EbN0Sweep {
                start: 0.0,
                step: 2.0,
                stop: 8.0,
            },
            taus: vec![1, 7],
            mode: ReceiverMode::Combined,
            min_bit_errors: 200,
            max_frames: 10_000_000,
            seed: 1,
            output: None,
            emit_theory: false,
            emit_complexity: false,
            parallel: true,
            timing: true,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "" | "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Config(format!("`{key}` expects a boolean, got `{value}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}` has invalid value `{value}`")))
}

/// Reads `key=value` lines; blank lines and `#` comments are skipped. Keys may be
/// written with or without leading dashes.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key=value", lineno + 1))
        })?;
        pairs.push((
            key.trim().trim_start_matches('-').to_string(),
            value.trim().to_string(),
        ));
    }
    Ok(pairs)
}

impl SimulationConfig {
    /// Applies `key=value` settings in order, later ones overriding earlier ones.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut cfg = Self::default();
        let mut k = cfg.params.subcarriers();
        let mut m = cfg.params.subsymbols();
        let mut order = cfg.params.order();
        let mut filter = cfg.params.filter().clone();
        for (key, value) in pairs {
            match key {
                "K" | "k" => k = parse_num(key, value)?,
                "M" | "m" => m = parse_num(key, value)?,
                "mapping" => {
                    order = match value {
                        "qpsk" => 4,
                        other => {
                            return Err(Error::Config(format!("unsupported mapping `{other}`")))
                        }
                    }
                }
                "filter" => filter = value.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
                "channel" => cfg.channel = value.parse()?,
                "taps" => cfg.impulse_response = parse_taps(value)?,
                "ebn0" => cfg.sweep = value.parse()?,
                "tau" => {
                    cfg.taus = value
                        .split(',')
                        .map(|t| parse_num(key, t))
                        .collect::<Result<Vec<usize>>>()?
                }
                "mode" => cfg.mode = value.parse()?,
                "waveform" => {
                    cfg.waveform = match value {
                        "linear" | "linear-gfdm" => WaveformKind::LinearGfdm,
                        "gfdm" => WaveformKind::Gfdm,
                        other => return Err(Error::Config(format!("unknown waveform `{other}`"))),
                    }
                }
                "receiver" => {
                    cfg.receiver = match value {
                        "spa" => ReceiverKind::Spa,
                        "mf" | "matched-filter" => ReceiverKind::MatchedFilter,
                        other => return Err(Error::Config(format!("unknown receiver `{other}`"))),
                    }
                }
                "min-errors" => cfg.min_bit_errors = parse_num(key, value)?,
                "max-frames" => cfg.max_frames = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "out" => cfg.output = Some(PathBuf::from(value)),
                "emit-theory" => cfg.emit_theory = parse_bool(key, value)?,
                "emit-complexity" => cfg.emit_complexity = parse_bool(key, value)?,
                "serial" => cfg.parallel = !parse_bool(key, value)?,
                "no-timing" => cfg.timing = !parse_bool(key, value)?,
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        cfg.params = WaveformParams::new(k, m, order, filter)
            .map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        build_prototype_filter(&self.params)?;
        if self.taus.is_empty() || self.taus.contains(&0) {
            return Err(Error::Config("iteration counts must be >= 1".into()));
        }
        if self.min_bit_errors < 1 {
            return Err(Error::Config("min-errors must be >= 1".into()));
        }
        if self.max_frames < 1 {
            return Err(Error::Config("max-frames must be >= 1".into()));
        }
        if self.impulse_response.is_empty() {
            return Err(Error::Config("channel taps must not be empty".into()));
        }
        if self.waveform == WaveformKind::Gfdm && self.receiver == ReceiverKind::Spa {
            // Plain GFDM under the SPA works but is exponential in N with the full
            // circular support; cap it like the oracle does.
            let n = self.params.n() as u32;
            if n > 24 {
                return Err(Error::Config(
                    "SPA on plain GFDM is limited to N <= 24; use the matched filter".into(),
                ));
            }
        }
        Ok(())
    }
}

fn parse_taps(value: &str) -> Result<Vec<Complex64>> {
    // "1,0.5,0.2:0.1" -> real taps, `re:im` for complex ones
    value
        .split(',')
        .map(|t| {
            let t = t.trim();
            let (re, im) = t.split_once(':').unwrap_or((t, "0"));
            Ok(Complex64::new(parse_num("taps", re)?, parse_num("taps", im)?))
        })
        .collect()
}

/// One Monte Carlo measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub channel: ChannelKind,
    pub ebn0_db: f64,
    pub tau: usize,
    pub mode: ReceiverMode,
    pub frames: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub wall_seconds: f64,
}

pub const BER_CSV_HEADER: &str = "channel,ebn0_db,tau,mode,frames,bit_errors,ber,wall_seconds";
pub const COMPLEXITY_CSV_HEADER: &str = "K,M,J,tau,formula_count,measured_multiplications";

impl BerRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:e},{:.3}",
            self.channel,
            self.ebn0_db,
            self.tau,
            self.mode,
            self.frames,
            self.bit_errors,
            self.ber,
            self.wall_seconds
        )
    }
}

pub fn records_to_csv(records: &[BerRecord]) -> String {
    let mut out = String::from(BER_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Hard decisions from correlating `y` with each column of `Ψ_I` and `jΨ_Q`.
pub fn matched_filter_detect(
    y: &[Complex64],
    psi: &EquivalentMatrix,
    alphabet: &SymbolAlphabet,
) -> Result<DataFrame> {
    if y.len() != psi.rows() {
        return Err(Error::DimensionMismatch(format!(
            "received vector has {} samples, equivalent matrix has {} rows",
            y.len(),
            psi.rows()
        )));
    }
    let component = |m: &crate::linalg::CMatrix, c: usize, rot: Complex64| {
        let mut corr = Complex64::new(0.0, 0.0);
        let mut energy = 0.0;
        for (r, yr) in y.iter().enumerate() {
            let w = m[(r, c)] * rot;
            corr += w.conj() * yr;
            energy += w.norm_sqr();
        }
        if energy > 0.0 {
            corr.re / energy
        } else {
            0.0
        }
    };
    let symbols = (0..psi.cols())
        .map(|c| {
            let re = component(psi.psi_i(), c, Complex64::new(1.0, 0.0));
            let im = component(psi.psi_q(), c, Complex64::i());
            alphabet.points()[alphabet.nearest_label(Complex64::new(re, im))]
        })
        .collect();
    Ok(DataFrame::from_symbols(symbols, alphabet))
}

/// Immutable per-configuration state shared by all frames.
struct Link {
    params: WaveformParams,
    alphabet: SymbolAlphabet,
    a_i: ModulationMatrix,
    a_q: ModulationMatrix,
    channel: ChannelKind,
    impulse_response: Vec<Complex64>,
    receiver: ReceiverKind,
    /// Equivalent matrix and SPA graphs for channels that do not change per frame.
    fixed: Option<(ChannelRealization, EquivalentMatrix, Option<SpaReceiver>)>,
}

impl Link {
    fn new(cfg: &SimulationConfig) -> Result<Self> {
        let params = cfg.params.clone();
        let alphabet = SymbolAlphabet::qam(params.order())?;
        let (a_i, a_q) = match cfg.waveform {
            WaveformKind::LinearGfdm => linear_gfdm_matrices(&params)?,
            WaveformKind::Gfdm => {
                let a = assemble_modulation_matrix(&build_prototype_filter(&params)?, &params, 0)?;
                (a.clone(), a)
            }
        };
        let mut link = Self {
            params,
            alphabet,
            a_i,
            a_q,
            channel: cfg.channel,
            impulse_response: cfg.impulse_response.clone(),
            receiver: cfg.receiver,
            fixed: None,
        };
        if cfg.channel != ChannelKind::FlatRayleigh {
            let ch = link.fixed_channel()?;
            let psi = equivalent_matrices(ch.matrix(), &link.a_i, &link.a_q)?;
            let spa = match cfg.receiver {
                ReceiverKind::Spa => Some(SpaReceiver::new(&psi)?),
                ReceiverKind::MatchedFilter => None,
            };
            link.fixed = Some((ch, psi, spa));
        }
        Ok(link)
    }

    fn fixed_channel(&self) -> Result<ChannelRealization> {
        let n = self.a_i.rows();
        match self.channel {
            ChannelKind::Awgn => Ok(awgn(n)),
            ChannelKind::Dispersive => crate::channel::toeplitz_from_impulse(&self.impulse_response, n)
                .map(|c| c.with_kind(ChannelKind::Dispersive)),
            ChannelKind::FlatRayleigh => unreachable!("flat fading is drawn per frame"),
        }
    }

    /// Bit errors of one frame for each τ.
    fn run_frame(
        &self,
        rng: &mut SimRng,
        sigma2: f64,
        taus: &[usize],
        mode: ReceiverMode,
    ) -> Result<Vec<u64>> {
        let bits: Vec<u8> = (0..self.params.bits_per_frame())
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let frame = map_bits(&bits, &self.alphabet, &self.params)?;
        let x = modulate_linear_gfdm(&frame, &self.a_i, &self.a_q)?;

        let drawn;
        let (ch, psi, spa) = match &self.fixed {
            Some((ch, psi, spa)) => (ch, psi, spa.as_ref()),
            None => {
                let ch = draw_flat_rayleigh(rng, self.a_i.rows());
                let psi = equivalent_matrices(ch.matrix(), &self.a_i, &self.a_q)?;
                let spa = match self.receiver {
                    ReceiverKind::Spa => Some(SpaReceiver::new(&psi)?),
                    ReceiverKind::MatchedFilter => None,
                };
                drawn = (ch, psi, spa);
                (&drawn.0, &drawn.1, drawn.2.as_ref())
            }
        };
        let ch = ch.clone().with_noise_variance(sigma2)?;
        let y = apply_channel(&x, &ch, rng)?;

        let count = |estimate: &DataFrame| -> u64 {
            demap_frame(estimate, &self.alphabet)
                .iter()
                .zip(&bits)
                .filter(|(a, b)| a != b)
                .count() as u64
        };
        match spa {
            Some(receiver) => taus
                .iter()
                .map(|&tau| {
                    let out = receiver.run(&y, &self.alphabet, tau, mode)?;
                    let est = map_decide(
                        &out.in_phase.marginals,
                        &out.quadrature.marginals,
                        &self.alphabet,
                    )?;
                    Ok(count(&est))
                })
                .collect(),
            None => {
                let obs = match mode {
                    ReceiverMode::Combined => y.samples().to_vec(),
                    ReceiverMode::GenieSeparated => {
                        return Err(Error::Config(
                            "the matched-filter receiver only supports combined mode".into(),
                        ))
                    }
                };
                let est = matched_filter_detect(&obs, psi, &self.alphabet)?;
                Ok(vec![count(&est); taus.len()])
            }
        }
    }
}

/// Runs frames of one Eb/N0 value for every τ in `taus` until each τ has
/// collected `min_bit_errors` or `max_frames` is reached.
///
/// Frame `f` always uses stream `f` of `seed`, and the stopping point is the
/// first frame at which the cumulative count reaches the threshold, so the
/// result does not depend on batching or threading.
fn run_frames(
    link: &Link,
    cfg: &SimulationConfig,
    ebn0_db: f64,
    taus: &[usize],
    seed: u64,
) -> Result<Vec<BerRecord>> {
    let started = Instant::now();
    let sigma2 = ebn0_to_sigma2(ebn0_db, &link.params);
    let mut frames = vec![0u64; taus.len()];
    let mut errors = vec![0u64; taus.len()];
    let mut done = vec![false; taus.len()];
    let mut next = 0u64;
    while next < cfg.max_frames && done.iter().any(|d| !d) {
        let end = (next + BATCH_FRAMES).min(cfg.max_frames);
        let one = |f: u64| link.run_frame(&mut frame_rng(seed, f), sigma2, taus, cfg.mode);
        let batch: Vec<Vec<u64>> = if cfg.parallel {
            (next..end).into_par_iter().map(one).collect::<Result<_>>()?
        } else {
            (next..end).map(one).collect::<Result<_>>()?
        };
        for per_tau in batch {
            for (t, e) in per_tau.into_iter().enumerate() {
                if done[t] {
                    continue;
                }
                frames[t] += 1;
                errors[t] += e;
                if errors[t] >= cfg.min_bit_errors {
                    done[t] = true;
                }
            }
        }
        next = end;
    }
    let wall_seconds = if cfg.timing {
        started.elapsed().as_secs_f64()
    } else {
        0.0
    };
    let bits_per_frame = link.params.bits_per_frame() as f64;
    Ok(taus
        .iter()
        .enumerate()
        .map(|(t, &tau)| BerRecord {
            channel: cfg.channel,
            ebn0_db,
            tau,
            mode: cfg.mode,
            frames: frames[t],
            bit_errors: errors[t],
            ber: errors[t] as f64 / (frames[t] as f64 * bits_per_frame),
            wall_seconds,
        })
        .collect())
}

/// One (Eb/N0, τ) measurement using RNG substream `point_seed`.
pub fn run_point(cfg: &SimulationConfig, ebn0_db: f64, tau: usize, point_seed: u64) -> Result<BerRecord> {
    cfg.validate()?;
    if tau < 1 {
        return Err(Error::ZeroIterations);
    }
    let link = Link::new(cfg)?;
    Ok(run_frames(&link, cfg, ebn0_db, &[tau], point_seed)?.remove(0))
}

/// All points of the sweep, ordered by Eb/N0 then by the order of `taus`.
pub fn run_sweep(cfg: &SimulationConfig) -> Result<Vec<BerRecord>> {
    cfg.validate()?;
    let link = Link::new(cfg)?;
    let points: Vec<(usize, f64)> = cfg.sweep.points().into_iter().enumerate().collect();
    let per_point = |&(idx, ebn0): &(usize, f64)| {
        run_frames(&link, cfg, ebn0, &cfg.taus, point_seed(cfg.seed, idx as u64))
    };
    let nested: Vec<Vec<BerRecord>> = if cfg.parallel {
        points.par_iter().map(per_point).collect::<Result<_>>()?
    } else {
        points.iter().map(per_point).collect::<Result<_>>()?
    };
    Ok(nested.into_iter().flatten().collect())
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("`{}` is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// `out.csv` -> `out_<suffix>.csv`
pub fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_{suffix}{ext}"))
}

pub fn theory_csv(cfg: &SimulationConfig) -> String {
    let mut out = String::from(THEORY_CSV_HEADER);
    out.push('\n');
    let channel = match cfg.channel {
        ChannelKind::Awgn => Some(TheoryChannel::AwgnQpsk),
        ChannelKind::FlatRayleigh => Some(TheoryChannel::RayleighQpsk),
        ChannelKind::Dispersive => None,
    };
    if let Some(ch) = channel {
        out.push_str(&theory_curve(ch, &cfg.sweep.points()).csv_rows());
    }
    out
}

pub fn complexity_csv(cfg: &SimulationConfig) -> Result<String> {
    let mut out = String::from(COMPLEXITY_CSV_HEADER);
    out.push('\n');
    for &tau in &cfg.taus {
        let report = complexity_report(&cfg.params, tau)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            cfg.params.subcarriers(),
            cfg.params.subsymbols(),
            cfg.params.order(),
            tau,
            report.formula_count,
            report.measured_multiplications
        );
    }
    Ok(out)
}

/// Output files written by [`run_and_write`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WrittenFiles {
    pub ber: Option<PathBuf>,
    pub theory: Option<PathBuf>,
    pub complexity: Option<PathBuf>,
}

/// Runs the sweep and writes the BER CSV (plus optional theory and complexity
/// CSVs) to `cfg.output`, or returns everything concatenated when no path is set.
pub fn run_and_write(cfg: &SimulationConfig) -> Result<(Vec<BerRecord>, WrittenFiles, String)> {
    if let Some(path) = &cfg.output {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !dir.is_dir() {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("output directory `{}` does not exist", dir.display()),
            )));
        }
    }
    let records = run_sweep(cfg)?;
    let ber = records_to_csv(&records);
    let theory = cfg.emit_theory.then(|| theory_csv(cfg));
    let complexity = if cfg.emit_complexity {
        Some(complexity_csv(cfg)?)
    } else {
        None
    };
    let mut files = WrittenFiles::default();
    let mut stdout = String::new();
    match &cfg.output {
        Some(path) => {
            write_atomic(path, &ber)?;
            files.ber = Some(path.clone());
            if let Some(t) = &theory {
                let p = sibling_path(path, "theory");
                write_atomic(&p, t)?;
                files.theory = Some(p);
            }
            if let Some(c) = &complexity {
                let p = sibling_path(path, "complexity");
                write_atomic(&p, c)?;
                files.complexity = Some(p);
            }
        }
        None => {
            stdout.push_str(&ber);
            for extra in [theory, complexity].into_iter().flatten() {
                stdout.push('\n');
                stdout.push_str(&extra);
            }
        }
    }
    Ok((records, files, stdout))
}

/// Plain GFDM OFDM corner case: `K` subcarriers, one subsymbol, rect filter.
pub fn ofdm_params(k: usize) -> Result<WaveformParams> {
    WaveformParams::new(k, 1, 4, FilterKind::Rect)
}
