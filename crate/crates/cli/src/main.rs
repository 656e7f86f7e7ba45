use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tfzeros::bench::{find_method, methods_by_task, run_config, BenchmarkConfig, MethodOutput, ParamSet, Task};
use tfzeros::detection::{detect_with, EnsembleCache, TestConfig, TestKind};
use tfzeros::error::Error;
use tfzeros::point_process::SummaryKind;
use tfzeros::report::{read_csv, summarize, write_csv, write_report, ReportFormat, ReportSpec};
use tfzeros::signals::{catalog, read_wav_samples, write_wav, Signal, WavFormat};

#[derive(Parser)]
#[command(name = "tfzeros", version, about = "Detection and denoising with spectrogram zeros, and a benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark configuration and write the results CSV.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
    },
    /// Summarize a results CSV into a markdown table or an SVG bar chart.
    Report {
        csv: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Output file; defaults to the CSV path with the format's extension.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        /// Bonferroni comparisons; defaults to the number of method parameter sets.
        #[arg(long)]
        comparisons: Option<usize>,
    },
    /// Print the signal bank.
    ListSignals,
    /// Print the built-in methods by task.
    ListMethods,
    /// Denoise a mono WAV file with a denoising method.
    Denoise {
        wav: PathBuf,
        #[arg(long)]
        method: String,
        /// Method parameter as `key=value`, repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Test a mono WAV file for the presence of a signal.
    Detect {
        wav: PathBuf,
        #[arg(long, value_enum)]
        test: TestArg,
        /// Null ensemble size.
        #[arg(long, default_value_t = tfzeros::bench::DEFAULT_M)]
        m: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = tfzeros::bench::DEFAULT_NULL_SEED)]
        seed: u64,
        /// Use the raw empty space function instead of its variance-stabilized form.
        #[arg(long)]
        unstabilized: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestArg {
    Envelope,
    Mad,
    Rank,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("`{k}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Failure with the process exit code it maps to.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config, out } => run(&config, &out),
        Command::Report {
            csv,
            format,
            out,
            confidence,
            comparisons,
        } => report(&csv, format, out, confidence, comparisons),
        Command::ListSignals => {
            let mut text = String::new();
            for s in catalog() {
                let params: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(text, "{:<18} {} component(s)  {}", s.name, s.components, s.description);
                if !params.is_empty() {
                    let _ = writeln!(text, "{:<18} defaults: {}", "", params.join(", "));
                }
            }
            print_stdout(&text);
            Ok(())
        }
        Command::ListMethods => {
            let mut text = String::new();
            for (task, names) in methods_by_task() {
                let _ = writeln!(text, "{task}:");
                for name in names {
                    let m = find_method(&name)?;
                    let _ = writeln!(text, "  {:<12} {}", m.name, m.description);
                }
            }
            print_stdout(&text);
            Ok(())
        }
        Command::Denoise {
            wav,
            method,
            params,
            out,
        } => denoise(&wav, &method, params, &out),
        Command::Detect {
            wav,
            test,
            m,
            alpha,
            seed,
            unstabilized,
        } => detect(&wav, test, m, alpha, seed, unstabilized),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn print_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn load_config(path: &Path) -> Result<BenchmarkConfig, Failure> {
    BenchmarkConfig::load(path).map_err(|e| match e {
        Error::Io(io) => Failure::Usage(format!("cannot read config {}: {io}", path.display())),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })
}

fn run(config: &Path, out: &Path) -> Result<(), Failure> {
    let cfg = load_config(config)?;
    let table = run_config(&cfg)?;
    let failed = table.errors().count();
    write_csv(&table, out)?;
    eprintln!("wrote {} rows to {}", table.len(), out.display());
    if failed > 0 {
        eprintln!("{failed} rows failed and were recorded as NaN");
    }
    Ok(())
}

fn report(
    csv: &Path,
    format: Format,
    out: Option<PathBuf>,
    confidence: f64,
    comparisons: Option<usize>,
) -> Result<(), Failure> {
    if !csv.exists() {
        return Err(Failure::Usage(format!("results file {} not found", csv.display())));
    }
    let table = read_csv(csv)?;
    let mut spec = ReportSpec::for_table(&table);
    spec.confidence = confidence;
    if let Some(c) = comparisons {
        spec.bonferroni_comparisons = c;
    }
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let summary = summarize(&table, &spec)?;
    let format = match format {
        Format::Markdown => ReportFormat::Markdown,
        Format::Svg => ReportFormat::SvgBars,
    };
    let out = out.unwrap_or_else(|| csv.with_extension(format.extension()));
    write_report(&summary, format, &out)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn read_input(wav: &Path) -> Result<(Signal, u32), Failure> {
    if !wav.exists() {
        return Err(Failure::Usage(format!("input {} not found", wav.display())));
    }
    let (samples, rate) = read_wav_samples(wav)?;
    let name = wav.file_stem().map_or_else(|| "wav".into(), |s| s.to_string_lossy().into_owned());
    Ok((
        Signal {
            name,
            samples,
            components: None,
        },
        rate,
    ))
}

fn denoise(wav: &Path, method: &str, params: Vec<(String, f64)>, out: &Path) -> Result<(), Failure> {
    let adapter = find_method(method).map_err(|e| Failure::Usage(e.to_string()))?;
    if adapter.task != Task::Denoising {
        return Err(Failure::Usage(format!("`{method}` is a detection method")));
    }
    let (signal, rate) = read_input(wav)?;
    let params: ParamSet = params.into_iter().collect();
    let MethodOutput::Denoised(y) = adapter.call(&signal.samples, &signal, &params, 0)? else {
        unreachable!("call checks the output kind");
    };
    write_wav(out, &y, rate, WavFormat::Float32)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn detect(wav: &Path, test: TestArg, m: usize, alpha: f64, seed: u64, unstabilized: bool) -> Result<(), Failure> {
    let kind = if unstabilized { SummaryKind::F } else { SummaryKind::FTilde };
    let cfg = TestConfig::new(kind, m, alpha).map_err(|e| Failure::Usage(e.to_string()))?;
    let test = match test {
        TestArg::Envelope => TestKind::Envelope,
        TestArg::Mad => TestKind::Mad,
        TestArg::Rank => TestKind::Rank,
    };
    let (signal, _) = read_input(wav)?;
    let outcome = detect_with(&signal.samples, test, &cfg, m, seed, Some(EnsembleCache::global()))?;
    print_stdout(&format!(
        "{}: {} (p+ = {:.4}, p- = {:.4})\n",
        test.name(),
        if outcome.reject { "signal detected" } else { "no signal detected" },
        outcome.p_plus,
        outcome.p_minus
    ));
    Ok(())
}
