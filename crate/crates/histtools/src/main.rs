use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use histtools::breaks::parse_breaks_spec;
use histtools::dtrace::{parse_dtrace, Severity};
use histtools::io::{parse_samples, read_histogram, write_histogram, Format};
use histtools::mapreduce::simulate_mapreduce_parallel;
use histtools::{json, study};
use histtools_core::{
    bounds_mean, bounds_mean_var, bounds_pth_moment, emdcc_histogram_with, information_gain, BucketScheme, EmdccMethod,
    HistError, Histogram, MapReduceMethod,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "histtools", version, about = "Mergeable moment-annotated histograms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum MethodArg {
    Closed,
    Quadrature,
}

#[derive(Subcommand)]
enum Command {
    /// Build a histogram from a file with one sample per line.
    Build {
        #[arg(long)]
        input: PathBuf,
        /// `a,b,c`, `lin:start:stop:n` or `log2:kmin:kmax`.
        #[arg(long, allow_hyphen_values = true)]
        breaks: String,
        #[arg(long, default_value_t = 0)]
        moments: u8,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Binary)]
        format: Format,
    },
    /// Merge histograms with identical breaks, left to right.
    Merge {
        #[arg(required = true, num_args = 1..)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Binary)]
        format: Format,
    },
    /// Drop leading and trailing empty bins.
    Trim {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Binary)]
        format: Format,
    },
    /// Print a histogram as JSON.
    Inspect { file: PathBuf },
    /// Count, approximate mean and quantiles as JSON.
    Stats {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        quantiles: Vec<f64>,
    },
    /// EMDCC report as JSON.
    Emdcc {
        file: PathBuf,
        /// `lo,hi`; defaults to the span of the non-empty bins.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// Information gain of a mean-annotated equal-width histogram.
    Gain { file: PathBuf },
    /// CDF bound curves on [0, 1] as CSV (x,lower,upper,regime).
    Bounds {
        /// Mean, or the p-th raw moment when --p is given.
        #[arg(long)]
        m1: f64,
        #[arg(long, conflicts_with = "p")]
        var: Option<f64>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert DTrace aggregation output to JSON lines.
    Dtrace { file: PathBuf },
    /// Check that sharded ingestion reproduces a direct build.
    MapreduceDemo {
        #[arg(long, default_value_t = 4)]
        shards: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        method: u8,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Synthetic per-user information-gain study.
    GainStudy {
        #[arg(long, default_value_t = 315)]
        users: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text.split_once(',').context("expected `lo,hi`")?;
    Ok((a.trim().parse().context("bad lo")?, b.trim().parse().context("bad hi")?))
}

fn summary(h: &Histogram) -> serde_json::Value {
    json!({
        "bins": h.bins(),
        "count": h.count(),
        "mean": h.approx_mean().ok(),
        "moment_order": h.moment_order(),
    })
}

fn build(input: &Path, breaks: &str, moments: u8, name: Option<String>) -> Result<Histogram> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let samples = parse_samples(&text)?;
    let scheme = parse_breaks_spec(breaks)?;
    let mut h = Histogram::build(&samples, &scheme.breaks()?, moments)?;
    if let Some(n) = name {
        h = h.with_name(n)?;
    }
    Ok(h)
}

fn bounds_csv(m1: f64, var: Option<f64>, p: Option<u32>, grid: usize) -> Result<String> {
    if grid < 2 {
        bail!("--grid needs at least 2 points");
    }
    let b = match (var, p) {
        (Some(v), _) => bounds_mean_var(m1, v).map_err(|e| match e {
            HistError::InfeasibleMoments { .. } => {
                anyhow::anyhow!("{e}; attainable variances for mean {m1} are [0, {}]", m1 * (1.0 - m1))
            }
            e => e.into(),
        })?,
        (None, Some(p)) => bounds_pth_moment(m1, p)?,
        (None, None) => bounds_mean(m1)?,
    };
    let mut s = String::from("x,lower,upper,regime\n");
    for i in 0..grid {
        let x = if i + 1 == grid { 1.0 } else { i as f64 / (grid - 1) as f64 };
        let pt = b.eval(x);
        s.push_str(&format!("{x},{},{},{}\n", pt.lower, pt.upper, pt.regime));
    }
    Ok(s)
}

fn mapreduce_demo(shards: usize, method: u8, n: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0)).collect();
    let scheme = BucketScheme::FixedWidth { start: 0.0, width: 2.0, count: 50 };
    let (method, order) = match method {
        1 => (MapReduceMethod::MapperHistograms, 2),
        _ => (MapReduceMethod::BucketPairs, 0),
    };
    let direct = Histogram::build(&samples, &scheme.breaks()?, order)?;
    let sharded = simulate_mapreduce_parallel(&samples, &scheme, shards, method, order)?;
    let counts_ok = sharded.counts() == direct.counts();
    let sums_ok = match (direct.moments(), sharded.moments()) {
        (None, None) => true,
        (Some(a), Some(b)) => {
            a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0))
        }
        _ => false,
    };
    Ok(counts_ok && sums_ok)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build { input, breaks, moments, out, name, format } => {
            let h = build(&input, &breaks, moments, name)?;
            write_histogram(&out, &h, format)?;
            print_json(&summary(&h))?;
        }
        Command::Merge { files, out, format } => {
            let mut acc = read_histogram(&files[0])?;
            for f in &files[1..] {
                let next = read_histogram(f)?;
                acc = acc
                    .merge(&next)
                    .with_context(|| format!("cannot merge {} into {}", f.display(), files[0].display()))?;
            }
            write_histogram(&out, &acc, format)?;
            print_json(&summary(&acc))?;
        }
        Command::Trim { file, out, format } => {
            let h = read_histogram(&file)?;
            if h.count() == 0 {
                eprintln!("warning: {} holds no samples; result is a single empty bin", file.display());
            }
            let t = h.trim();
            write_histogram(&out, &t, format)?;
            print_json(&summary(&t))?;
        }
        Command::Inspect { file } => {
            print_json(&json::to_json_value(&read_histogram(&file)?))?;
        }
        Command::Stats { file, quantiles } => {
            let h = read_histogram(&file)?;
            let values = if quantiles.is_empty() { Vec::new() } else { h.approx_quantile(&quantiles)? };
            let qs: Vec<_> = quantiles.iter().zip(&values).map(|(q, v)| json!({"q": q, "value": v})).collect();
            print_json(&json!({
                "count": h.count(),
                "approx_mean": h.approx_mean().ok(),
                "quantiles": qs,
            }))?;
        }
        Command::Emdcc { file, range, method } => {
            let h = read_histogram(&file)?;
            let range = range.as_deref().map(parse_pair).transpose()?;
            let method = match method {
                MethodArg::Closed => EmdccMethod::ClosedForm,
                MethodArg::Quadrature => EmdccMethod::Quadrature,
            };
            let r = emdcc_histogram_with(&h, range, method)?;
            let per_bin: Vec<_> = r
                .per_bin
                .iter()
                .map(|b| {
                    json!({"bin": b.bin, "weight": b.weight, "normalized": b.normalized, "contribution": b.contribution})
                })
                .collect();
            print_json(&json!({
                "total": r.total,
                "method": r.method.as_str(),
                "range": [r.range.0, r.range.1],
                "per_bin": per_bin,
            }))?;
        }
        Command::Gain { file } => {
            let g = information_gain(&read_histogram(&file)?)?;
            if g.is_infinite() {
                println!("inf");
            } else {
                println!("{g}");
            }
        }
        Command::Bounds { m1, var, p, grid, out } => {
            let csv = bounds_csv(m1, var, p, grid)?;
            match out {
                Some(path) => fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
        }
        Command::Dtrace { file } => {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let (hists, diags) = parse_dtrace(&text);
            for (_, h) in &hists {
                print_json(&json::to_json_value(h))?;
            }
            for d in &diags {
                eprintln!("{}: {d}", file.display());
            }
            if diags.iter().any(|d| d.severity == Severity::Error) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::MapreduceDemo { shards, method, samples, seed } => {
            let ok = mapreduce_demo(shards, method, samples, seed)?;
            println!("{} shards={shards} method={method} samples={samples}", if ok { "PASS" } else { "FAIL" });
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::GainStudy { users, seed, out } => {
            let rows = study::run_gain_study(users, seed)?;
            let mut buf = Vec::new();
            study::write_csv(&mut buf, &rows)?;
            fs::write(&out, buf).with_context(|| format!("writing {}", out.display()))?;
            match study::summarize(&rows, seed) {
                Some(s) => print_json(&serde_json::to_value(s)?)?,
                None => print_json(&json!({"users": 0, "seed": seed}))?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
