//! Command-line front end for the generator pipeline.
//!
//! Five subcommands mirror the hardware workflow: `generate` runs the
//! datapath and captures words as hex, `transmit` serializes hex onto the
//! wire byte stream, `capture` reassembles a wire stream back into hex,
//! `analyze` renders the threshold bitmap and statistics, and `pipeline`
//! chains all four, keeping every intermediate artifact.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use rngsim::analysis::{analyze_words, write_image, StatsReport};
use rngsim::datapath::{GeneratorState, SamplerConfig, DEFAULT_CAPTURE_INTERVAL};
use rngsim::entropy::{EntropyConfig, EntropySource};
use rngsim::prng::{Algorithm, Word32};
use rngsim::uart::{
    bytes_to_words, read_hex, read_hex_file, words_to_bytes, write_hex, write_hex_file,
};

#[derive(Parser)]
#[command(name = "rngsim", version, about = "Hardware random-number-generator simulator and analysis toolchain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the generator datapath and write the captured words as hex
    Generate(GenerateArgs),
    /// Serialize a hex capture into the raw wire byte stream
    Transmit(StreamArgs),
    /// Reassemble a raw wire byte stream into a hex capture
    Capture(StreamArgs),
    /// Render the threshold bitmap and uniformity statistics for a capture
    Analyze(AnalyzeArgs),
    /// Generate, transmit, capture, and analyze in one run, keeping all artifacts
    Pipeline(PipelineArgs),
}

/// Knobs shared by `generate` and `pipeline`.
#[derive(Args)]
struct GenOpts {
    /// Scrambling algorithm: xorshift or middle-square
    #[arg(long, value_parser = parse_alg, default_value = "xorshift")]
    alg: Algorithm,

    /// Entropy source: synthetic:seed=S,mean=M,sigma=G | replay:<file> | os
    #[arg(long, value_parser = parse_entropy, default_value = "synthetic:seed=1,mean=2048,sigma=64")]
    entropy: EntropyConfig,

    /// Number of words to capture
    #[arg(long, default_value_t = 490_000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,

    /// Clock cycles between captured words (1 = keep the full stream)
    #[arg(long, default_value_t = DEFAULT_CAPTURE_INTERVAL, value_parser = clap::value_parser!(u64).range(1..))]
    interval: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    opts: GenOpts,

    /// Output hex file ('-' for stdout)
    #[arg(short, long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct StreamArgs {
    /// Input file ('-' for stdin)
    #[arg(default_value = "-")]
    input: PathBuf,

    /// Output file ('-' for stdout)
    #[arg(short, long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input hex capture ('-' for stdin)
    #[arg(default_value = "-")]
    input: PathBuf,

    /// Bitmap width in pixels
    #[arg(long, default_value_t = 700, value_parser = clap::value_parser!(u64).range(1..))]
    width: u64,

    /// Bitmap height in pixels
    #[arg(long, default_value_t = 700, value_parser = clap::value_parser!(u64).range(1..))]
    height: u64,

    /// Bitmap output file, binary PGM ('-' for stdout)
    #[arg(long, default_value = "bitmap.pgm")]
    image: PathBuf,

    /// Statistics report output ('-' for stdout)
    #[arg(long, default_value = "-")]
    report: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    opts: GenOpts,

    /// Bitmap width in pixels
    #[arg(long, default_value_t = 700, value_parser = clap::value_parser!(u64).range(1..))]
    width: u64,

    /// Bitmap height in pixels
    #[arg(long, default_value_t = 700, value_parser = clap::value_parser!(u64).range(1..))]
    height: u64,

    /// Directory for the staged artifacts
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn parse_alg(name: &str) -> Result<Algorithm, String> {
    Algorithm::from_name(name)
        .ok_or_else(|| format!("unknown algorithm {name:?} (expected xorshift or middle-square)"))
}

fn parse_entropy(spec: &str) -> Result<EntropyConfig, String> {
    if spec == "os" {
        return Ok(EntropyConfig::OsRandom);
    }
    if let Some(path) = spec.strip_prefix("replay:") {
        if path.is_empty() {
            return Err("replay needs a file path, e.g. replay:noise.bin".into());
        }
        return Ok(EntropyConfig::Replay(PathBuf::from(path)));
    }
    if let Some(rest) = spec.strip_prefix("synthetic") {
        let rest = match rest.strip_prefix(':') {
            Some(kvs) => kvs,
            None if rest.is_empty() => "",
            None => return Err(unknown_entropy(spec)),
        };
        let (mut seed, mut mean, mut sigma) = (1u64, 2048.0, 64.0);
        for kv in rest.split(',').filter(|kv| !kv.is_empty()) {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {kv:?}"))?;
            match key {
                "seed" => seed = value.parse().map_err(|_| format!("bad seed {value:?}"))?,
                "mean" => mean = value.parse().map_err(|_| format!("bad mean {value:?}"))?,
                "sigma" => sigma = value.parse().map_err(|_| format!("bad sigma {value:?}"))?,
                _ => return Err(format!("unknown synthetic parameter {key:?} (expected seed, mean, or sigma)")),
            }
        }
        return Ok(EntropyConfig::SyntheticNoise { seed, mean, sigma });
    }
    Err(unknown_entropy(spec))
}

fn unknown_entropy(spec: &str) -> String {
    format!("unknown entropy spec {spec:?} (expected os, replay:<file>, or synthetic:key=value,...)")
}

fn is_stdio(path: &Path) -> bool {
    path == Path::new("-")
}

fn read_binary(path: &Path) -> anyhow::Result<Vec<u8>> {
    if is_stdio(path) {
        let mut bytes = Vec::new();
        io::stdin().lock().read_to_end(&mut bytes).context("reading stdin")?;
        Ok(bytes)
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_binary(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if is_stdio(path) {
        io::stdout().lock().write_all(bytes).context("writing stdout")?;
    } else {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn read_hex_input(path: &Path) -> anyhow::Result<Vec<Word32>> {
    if is_stdio(path) {
        Ok(read_hex(io::stdin().lock())?)
    } else {
        read_hex_file(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_hex_output(path: &Path, words: &[Word32]) -> anyhow::Result<()> {
    if is_stdio(path) {
        write_hex(io::stdout().lock(), words)?;
    } else {
        write_hex_file(path, words).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_generator(opts: &GenOpts) -> anyhow::Result<Vec<Word32>> {
    let mut entropy = EntropySource::open(&opts.entropy).context("opening entropy source")?;
    let mut state = GeneratorState::new(opts.alg);
    let words = state.run_sampled(&mut entropy, SamplerConfig::every(opts.interval), opts.n as usize)?;
    Ok(words)
}

fn cmd_generate(args: &GenerateArgs) -> anyhow::Result<()> {
    let words = run_generator(&args.opts)?;
    write_hex_output(&args.out, &words)
}

fn cmd_transmit(args: &StreamArgs) -> anyhow::Result<()> {
    let words = read_hex_input(&args.input)?;
    write_binary(&args.out, &words_to_bytes(&words))
}

fn cmd_capture(args: &StreamArgs) -> anyhow::Result<()> {
    let bytes = read_binary(&args.input)?;
    let whole = bytes.len() - bytes.len() % 4;
    if whole < bytes.len() {
        eprintln!("warning: dropping {} trailing byte(s) short of a whole word", bytes.len() - whole);
    }
    let words = bytes_to_words(&bytes[..whole])?;
    write_hex_output(&args.out, &words)
}

fn run_analysis(
    words: &[Word32],
    width: usize,
    height: usize,
    image: &Path,
    report_out: &Path,
) -> anyhow::Result<StatsReport> {
    let (bitmap, report) = analyze_words(words, width, height)?;
    if is_stdio(image) {
        let mut out = Vec::new();
        rngsim::analysis::write_image_to(&mut out, &bitmap)?;
        io::stdout().lock().write_all(&out).context("writing stdout")?;
    } else {
        write_image(&bitmap, image).with_context(|| format!("writing {}", image.display()))?;
    }
    let text = report.render();
    if is_stdio(report_out) {
        print!("{text}");
    } else {
        fs::write(report_out, text).with_context(|| format!("writing {}", report_out.display()))?;
    }
    Ok(report)
}

fn cmd_analyze(args: &AnalyzeArgs) -> anyhow::Result<()> {
    let words = read_hex_input(&args.input)?;
    run_analysis(&words, args.width as usize, args.height as usize, &args.image, &args.report)?;
    Ok(())
}

fn cmd_pipeline(args: &PipelineArgs) -> anyhow::Result<()> {
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let generated = args.out_dir.join("generated.hex");
    let stream = args.out_dir.join("stream.bin");
    let captured = args.out_dir.join("captured.hex");
    let image = args.out_dir.join("bitmap.pgm");
    let report = args.out_dir.join("report.txt");

    let words = run_generator(&args.opts)?;
    write_hex_file(&generated, &words)?;

    let bytes = words_to_bytes(&read_hex_file(&generated)?);
    fs::write(&stream, &bytes).with_context(|| format!("writing {}", stream.display()))?;

    let recovered = bytes_to_words(&fs::read(&stream)?)?;
    write_hex_file(&captured, &recovered)?;
    if recovered != words {
        bail!("serial round trip corrupted the stream");
    }

    let readback = read_hex_file(&captured)?;
    let stats = run_analysis(&readback, args.width as usize, args.height as usize, &image, &report)?;
    print!("{}", stats.render());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Transmit(args) => cmd_transmit(&args),
        Command::Capture(args) => cmd_capture(&args),
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Pipeline(args) => cmd_pipeline(&args),
    }
}
