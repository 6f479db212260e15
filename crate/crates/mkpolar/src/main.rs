//! `mkpolar`: construct, encode, decode, simulate, and cost-model
//! multi-kernel polar codes from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mkpolar::core::channel::{ChannelConfig, DecoderSelect, FerStatsRow};
use mkpolar::core::code::PolarCodeSpec;
use mkpolar::core::construct::{select_frozen, sweep_kernel_orders_capped};
use mkpolar::core::encode::{encode, extract_message, load_message, BitVector};
use mkpolar::core::hw::{
    code_param_bits, decode_latency_cc, memory_footprint, supported_code_lengths,
    throughput, HardwareConfig,
};
use mkpolar::core::quant::{quantize_llrs, QuantConfig};
use mkpolar::core::sc::{decode as sc_decode, DecodeMode, LlrVector};
use mkpolar::files;
use mkpolar::sim;

#[derive(Parser)]
#[command(name = "mkpolar", version, about = "multi-kernel polar code toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a frozen set by genie-aided Monte Carlo construction.
    Construct(ConstructArgs),
    /// Encode a K-bit message into an N-bit codeword.
    Encode(EncodeArgs),
    /// Decode a received codeword or LLR vector.
    Decode(DecodeArgs),
    /// Measure FER/BER over an Eb/N0 grid and write a CSV.
    Simulate(SimulateArgs),
    /// Report decoder latency, throughput, and memory for a code.
    Hwmodel(HwmodelArgs),
    /// Rank all kernel orders of a multiset by simulated FER.
    SweepOrders(SweepArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Kernel dimensions, leftmost factor first, e.g. 3,2,2,2,2
    #[arg(long, value_parser = parse_dims)]
    kernels: DimList,
    /// Information length K
    #[arg(long)]
    k: usize,
    /// Design Eb/N0 in dB
    #[arg(long, default_value_t = 2.0)]
    design_snr: f64,
    /// Genie simulation frames
    #[arg(long, default_value_t = 100_000)]
    frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Frozen-set text file to write
    #[arg(long)]
    out: PathBuf,
    /// Also write the full code spec as JSON
    #[arg(long)]
    spec_out: Option<PathBuf>,
    /// Simulation worker threads
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct EncodeArgs {
    /// Code spec JSON file
    #[arg(long)]
    spec: PathBuf,
    /// Message as a string of 0/1 characters
    #[arg(long, conflicts_with = "message_file")]
    message: Option<String>,
    /// File containing the message bits (whitespace ignored)
    #[arg(long)]
    message_file: Option<PathBuf>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Code spec JSON file
    #[arg(long)]
    spec: PathBuf,
    /// Input file: codeword bits with --noiseless, else one LLR per value
    #[arg(long = "in")]
    input: PathBuf,
    /// Treat the input as hard bits over a noiseless channel (LLR ±2)
    #[arg(long)]
    noiseless: bool,
    #[arg(long, value_enum, default_value_t = Mode::MinSum)]
    mode: Mode,
    /// Quantization as Q,Q_f (used with --mode quantized)
    #[arg(long, value_parser = parse_quant, default_value = "7,3")]
    quant: QuantPair,
    /// Output file for the decoded message (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Code spec JSON file
    #[arg(long)]
    spec: PathBuf,
    /// Eb/N0 grid: start:stop:step (inclusive), a comma list, or one value
    #[arg(long, value_parser = parse_snr_grid)]
    snr: SnrGrid,
    #[arg(long, default_value_t = 100_000)]
    max_frames: u64,
    /// Stop a point once this many frame errors accumulate (0 = never)
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, value_enum, default_value_t = Mode::MinSum)]
    mode: Mode,
    /// Quantization as Q,Q_f (used with --mode quantized)
    #[arg(long, value_parser = parse_quant, default_value = "7,3")]
    quant: QuantPair,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Simulation worker threads
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Disable channel noise (sanity runs; FER must be 0)
    #[arg(long)]
    noiseless: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("code").required(true).args(["spec", "kernels"]))]
struct HwmodelArgs {
    /// Code spec JSON file
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Kernel dimensions, e.g. 3,3,3,3 (alternative to --spec)
    #[arg(long, value_parser = parse_dims)]
    kernels: Option<DimList>,
    /// Number of processing elements (multiple of 3)
    #[arg(long)]
    p: usize,
    /// Clock frequency in Hz
    #[arg(long, default_value_t = 1.0e9)]
    fclk: f64,
    /// Decoder N_max (power of two) for the memory report
    #[arg(long)]
    nmax: Option<usize>,
    /// LLR quantization bits Q for the memory report
    #[arg(long)]
    q: Option<u32>,
    /// Codeword RAM width
    #[arg(long, default_value_t = 32)]
    wcod: usize,
    /// Frozen-pattern RAM width
    #[arg(long, default_value_t = 32)]
    wfrozen: usize,
    /// Also emit a machine-readable CSV row
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Kernel dimension multiset, e.g. 2,2,3
    #[arg(long, value_parser = parse_dims)]
    dims: DimList,
    #[arg(long)]
    k: usize,
    /// Eb/N0 (dB) for both construction and FER measurement
    #[arg(long)]
    snr: f64,
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Maximum number of distinct kernel orders to evaluate
    #[arg(long, default_value_t = 500)]
    cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    #[value(name = "minsum")]
    MinSum,
    Quantized,
}

#[derive(Clone)]
struct DimList(Vec<usize>);

#[derive(Clone, Copy)]
struct QuantPair(u32, u32);

#[derive(Clone)]
struct SnrGrid(Vec<f64>);

fn parse_dims(s: &str) -> Result<DimList, String> {
    let dims: Vec<usize> = s
        .split(',')
        .map(|part| part.trim().parse().map_err(|_| format!("bad kernel dimension '{part}'")))
        .collect::<Result<_, String>>()?;
    if dims.is_empty() || dims.iter().any(|&d| d != 2 && d != 3) {
        return Err("kernel dimensions must be a comma list of 2s and 3s".into());
    }
    Ok(DimList(dims))
}

fn parse_quant(s: &str) -> Result<QuantPair, String> {
    let (q, qf) = s.split_once(',').ok_or("expected Q,Q_f (e.g. 7,3)")?;
    let q = q.trim().parse().map_err(|_| format!("bad Q '{q}'"))?;
    let qf = qf.trim().parse().map_err(|_| format!("bad Q_f '{qf}'"))?;
    QuantConfig::new(q, qf).map_err(|e| e.to_string())?;
    Ok(QuantPair(q, qf))
}

fn parse_snr_grid(s: &str) -> Result<SnrGrid, String> {
    let parse_one = |v: &str| -> Result<f64, String> {
        v.trim().parse().map_err(|_| format!("bad Eb/N0 value '{v}'"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => single.split(',').map(parse_one).collect::<Result<Vec<_>, _>>()?,
        [start, stop, step] => {
            let (start, stop, step) = (parse_one(start)?, parse_one(stop)?, parse_one(step)?);
            if step <= 0.0 {
                return Err("grid step must be positive".into());
            }
            let mut grid = Vec::new();
            let mut i = 0u32;
            loop {
                let v = start + f64::from(i) * step;
                if v > stop + 1e-9 {
                    break;
                }
                grid.push(v);
                i += 1;
            }
            grid
        }
        _ => return Err("expected start:stop:step, a comma list, or one value".into()),
    };
    if grid.is_empty() {
        return Err("Eb/N0 grid is empty".into());
    }
    Ok(SnrGrid(grid))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl Mode {
    fn select(self, quant: QuantPair) -> anyhow::Result<DecoderSelect> {
        Ok(match self {
            Mode::Exact => DecoderSelect::Exact,
            Mode::MinSum => DecoderSelect::MinSum,
            Mode::Quantized => DecoderSelect::Quantized(QuantConfig::new(quant.0, quant.1)?),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Construct(args) => cmd_construct(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Hwmodel(args) => cmd_hwmodel(args),
        Command::SweepOrders(args) => cmd_sweep(args),
    }
}

fn cmd_construct(args: ConstructArgs) -> anyhow::Result<()> {
    let kernels = files::kernels_from_dims(&args.kernels.0)?;
    let n: usize = args.kernels.0.iter().product();
    if args.k > n {
        bail!("K={} exceeds N={n}", args.k);
    }
    let rate = if args.k == 0 { 0.5 } else { args.k as f64 / n as f64 };
    let table = sim::genie_reliability_parallel(
        &kernels,
        args.design_snr,
        rate,
        args.frames,
        args.seed,
        args.workers,
    )?;
    let frozen = select_frozen(&table, args.k)?;
    let spec = PolarCodeSpec::new(kernels, args.k, frozen)?;
    files::write_frozen(&args.out, &spec)
        .with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(spec_out) = &args.spec_out {
        files::write_spec(spec_out, &spec)
            .with_context(|| format!("writing {}", spec_out.display()))?;
    }
    println!(
        "constructed N={} K={} at {} dB over {} frames; {} frozen indices -> {}",
        spec.n(),
        spec.k(),
        args.design_snr,
        table.frames(),
        spec.frozen().len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_encode(args: EncodeArgs) -> anyhow::Result<()> {
    let spec = read_spec(&args.spec)?;
    let text = match (&args.message, &args.message_file) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        }
        _ => bail!("provide exactly one of --message and --message-file"),
    };
    let msg = parse_bits(&text)?;
    if msg.len() != spec.k() {
        bail!("message has {} bits, expected K={}", msg.len(), spec.k());
    }
    let u = load_message(&spec, &msg)?;
    let x = encode(&spec, &u)?;
    emit(args.out.as_deref(), &format!("{}\n", bits_to_string(&x)))
}

fn cmd_decode(args: DecodeArgs) -> anyhow::Result<()> {
    let spec = read_spec(&args.spec)?;
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let llrs = if args.noiseless {
        let bits = parse_bits(&text)?;
        if bits.len() != spec.n() {
            bail!("codeword has {} bits, expected N={}", bits.len(), spec.n());
        }
        let symbols = mkpolar::core::channel::modulate_bpsk(&bits);
        mkpolar::core::channel::awgn_llr(&symbols, &ChannelConfig::noiseless(0), 0)
    } else {
        let values: Vec<f64> = text
            .split_whitespace()
            .map(|v| v.parse::<f64>().map_err(|_| anyhow::anyhow!("bad LLR value '{v}'")))
            .collect::<anyhow::Result<_>>()?;
        if values.len() != spec.n() {
            bail!("input has {} LLRs, expected N={}", values.len(), spec.n());
        }
        LlrVector::new(values)
    };
    let result = match args.mode {
        Mode::Exact => sc_decode(&spec, &llrs, DecodeMode::Exact)?,
        Mode::MinSum => sc_decode(&spec, &llrs, DecodeMode::MinSum)?,
        Mode::Quantized => {
            let cfg = QuantConfig::new(args.quant.0, args.quant.1)?;
            mkpolar::core::quant::decode_q(&spec, &quantize_llrs(&llrs, &cfg), cfg)?
        }
    };
    let msg = extract_message(&spec, &result.u_hat)?;
    emit(args.out.as_deref(), &format!("{}\n", bits_to_string(&msg)))
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let spec = read_spec(&args.spec)?;
    let select = args.mode.select(args.quant)?;
    let rate = spec.k() as f64 / spec.n() as f64;
    let mut rows: Vec<FerStatsRow> = Vec::with_capacity(args.snr.0.len());
    for &ebn0_db in &args.snr.0 {
        let cfg = if args.noiseless {
            ChannelConfig { ebn0_db, rate, noise_enabled: false, seed: args.seed }
        } else {
            ChannelConfig::awgn(ebn0_db, rate, args.seed)?
        };
        rows.push(sim::run_point_parallel(
            &spec,
            select,
            &cfg,
            args.max_frames,
            args.min_errors,
            args.workers,
        )?);
    }
    emit(args.out.as_deref(), &sim::fer_csv_string(&rows))
}

fn cmd_hwmodel(args: HwmodelArgs) -> anyhow::Result<()> {
    let spec = match (&args.spec, &args.kernels) {
        (Some(path), None) => read_spec(path)?,
        (None, Some(dims)) => {
            let kernels = files::kernels_from_dims(&dims.0)?;
            let n: usize = dims.0.iter().product();
            PolarCodeSpec::new(kernels, n, std::iter::empty())?
        }
        _ => unreachable!("clap group enforces exactly one"),
    };
    let dims: Vec<String> =
        spec.kernels().iter().map(|k| k.dimension().to_string()).collect();
    let kernel_list = dims.join(",");
    let latency = decode_latency_cc(&spec, args.p);
    let (bpc, bps) = throughput(&spec, args.p, args.fclk);
    let param_bits = code_param_bits(spec.n(), spec.kernels().len(), args.p);

    println!("code: N={} kernels={{{kernel_list}}} s_m={}", spec.n(), spec.kernels().len());
    println!("decoder: P={} f_clk={:.3} GHz", args.p, args.fclk / 1e9);
    println!("latency: {latency} CC");
    println!("throughput: {bpc:.2} bpc, {:.1} Mbps", bps / 1e6);
    println!("code parameter storage: {param_bits} bits");

    let memory = match (args.nmax, args.q) {
        (Some(n_max), Some(q)) => {
            let cfg = HardwareConfig::new(n_max, args.p, q, args.wcod, args.wfrozen, args.fclk)?;
            let m = memory_footprint(&cfg)?;
            println!(
                "memory (N_max={n_max}, Q={q}): channel LLR {} + internal LLR {} + \
                 internal beta {} + codeword {} + frozen {} = {} bits",
                m.channel_llr_bits,
                m.internal_llr_bits,
                m.internal_beta_bits,
                m.codeword_bits,
                m.frozen_bits,
                m.total_bits
            );
            println!("supported code lengths: {}", supported_code_lengths(n_max).len());
            Some(m)
        }
        (None, None) => None,
        _ => bail!("--nmax and --q must be given together"),
    };

    if let Some(path) = &args.csv {
        let mem_cols = match &memory {
            Some(m) => format!(
                "{},{},{},{},{},{}",
                m.channel_llr_bits,
                m.internal_llr_bits,
                m.internal_beta_bits,
                m.codeword_bits,
                m.frozen_bits,
                m.total_bits
            ),
            None => ",,,,,".into(),
        };
        let csv = format!(
            "n,kernels,p,latency_cc,bpc,mbps,channel_llr_bits,internal_llr_bits,\
             internal_beta_bits,codeword_bits,frozen_bits,total_bits\n\
             {},\"{kernel_list}\",{},{latency},{bpc:.6},{:.6},{mem_cols}\n",
            spec.n(),
            args.p,
            bps / 1e6,
        );
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let dims = files::kernels_from_dims(&args.dims.0)?;
    let ranked =
        sweep_kernel_orders_capped(&dims, args.k, args.snr, args.frames, args.seed, args.cap)?;
    println!(
        "ranked {} kernel orders at Eb/N0 = {} dB ({} frames each)",
        ranked.len(),
        args.snr,
        args.frames
    );
    for (rank, (order, fer)) in ranked.iter().enumerate() {
        let list: Vec<String> = order.iter().map(|k| k.dimension().to_string()).collect();
        println!("{:>3}. {{{}}} fer={:.6e}", rank + 1, list.join(","), fer);
    }
    Ok(())
}

fn read_spec(path: &Path) -> anyhow::Result<PolarCodeSpec> {
    files::read_spec(path).with_context(|| format!("reading spec {}", path.display()))
}

fn parse_bits(text: &str) -> anyhow::Result<BitVector> {
    let bits: Vec<u8> = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => bail!("bit strings may only contain 0, 1, and whitespace, found '{other}'"),
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(BitVector::new(bits).expect("bits validated"))
}

fn bits_to_string(bits: &BitVector) -> String {
    bits.bits().iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

fn emit(out: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
