//! `teich`: verification suites and evaluators for extremal-length geometry
//! on the once-punctured torus.
//!
//! Exit codes: 0 on success (all checks pass), 1 on verification failure,
//! 2 on usage errors (unknown suite/quantity, malformed numeric input,
//! empty scans).

mod parse;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use teich_core::poisson::{busemann, poisson_integral, poisson_kernel, schwarz_probe};
use teich_core::teich::{
    boundary_pairing, exp_pairing, extremal_length, green, teich_distance, teich_distance_sup,
    teich_ray,
};
use teich_core::testfns::TestFunction;
use teich_core::thurston::BoundaryMeasure;
use teich_core::traintrack::parse_track;
use teich_core::verify::{run_suite, VerifyConfig, SUITES};
use teich_core::TorusPoint;

#[derive(Parser)]
#[command(
    name = "teich",
    version,
    about = "extremal-length geometry verification on the once-punctured torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a machine-readable report.
    Verify {
        /// Suite name; `all` runs every suite.
        suite: String,
        /// Base point x0, e.g. `i`, `1+2i`, `3+i/2`.
        #[arg(long, default_value = "i")]
        base: String,
        /// Target point x.
        #[arg(long, default_value = "2i")]
        target: String,
        /// Override the per-suite default sample counts.
        #[arg(long, visible_alias = "n")]
        samples: Option<usize>,
        /// Seed for the stochastic suites.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Report output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Record suite wall time on the report's checks. Timed reports are
        /// not byte-reproducible; the default (null runtimes) is.
        #[arg(long)]
        timings: bool,
        /// Track file for the thurston-homogeneity suite.
        #[arg(long)]
        track: Option<PathBuf>,
    },
    /// Evaluate a single quantity and print it at full precision.
    Eval {
        /// One of: ext, dist, green, kernel, busemann, density,
        /// poisson-integral.
        quantity: String,
        #[arg(long)]
        x0: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// Boundary slope, e.g. `0`, `3/2`, `inf`.
        #[arg(long)]
        u: Option<String>,
        /// Measured foliation `a,b`.
        #[arg(long)]
        f: Option<String>,
        /// Quadrature tolerance for integral quantities.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Boundary function for `poisson-integral`: `const:<c>`,
        /// `harm-re:<n>`, `harm-im:<n>`, `psh:<n>`, `indicator:<lo>:<hi>`,
        /// `gauss:<scale>`.
        #[arg(long = "fn", default_value = "harm-re:1")]
        func: String,
        /// Center for the `harm-*`/`psh` families (defaults to x0).
        #[arg(long)]
        center: Option<String>,
        /// Compute `dist` through the Kerckhoff sup oracle instead of the
        /// validated closed form.
        #[arg(long)]
        via_sup: bool,
    },
    /// Emit a one-parameter scan as CSV.
    Table {
        /// One of: schwarz, ray-limit.
        scan: String,
        /// Heights for the schwarz scan, comma separated.
        #[arg(long)]
        heights: Option<String>,
        /// Probe slope u0 for the schwarz scan.
        #[arg(long, default_value_t = 0.0)]
        u0: f64,
        /// Largest integer ray time for the ray-limit scan.
        #[arg(long, default_value_t = 20)]
        t_max: u32,
        /// Base point (x0 for schwarz, y0 for ray-limit).
        #[arg(long, default_value = "i")]
        base: String,
        /// Interior pairing point for the ray-limit scan.
        #[arg(long, default_value = "-0.4+1.7i")]
        y: String,
        /// Ray direction slope for the ray-limit scan.
        #[arg(long, default_value = "1.4142135623730951")]
        u: String,
        /// Boundary function for the schwarz scan.
        #[arg(long = "fn", default_value = "gauss:2")]
        func: String,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error with the exit code it should produce.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<parse::ParseError> for CliError {
    fn from(e: parse::ParseError) -> Self {
        CliError::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not usage errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Verify {
            suite,
            base,
            target,
            samples,
            seed,
            out,
            format,
            timings,
            track,
        } => cmd_verify(
            &suite, &base, &target, samples, seed, out, format, timings, track,
        ),
        Command::Eval {
            quantity,
            x0,
            x,
            y,
            u,
            f,
            tol,
            func,
            center,
            via_sup,
        } => cmd_eval(&quantity, x0, x, y, u, f, tol, &func, center, via_sup),
        Command::Table {
            scan,
            heights,
            u0,
            t_max,
            base,
            y,
            u,
            func,
            out,
        } => cmd_table(&scan, heights, u0, t_max, &base, &y, &u, &func, out),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: &str,
    base: &str,
    target: &str,
    samples: Option<usize>,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
    timings: bool,
    track: Option<PathBuf>,
) -> Result<u8, CliError> {
    if !SUITES.contains(&suite) {
        return Err(CliError::usage(format!(
            "unknown suite `{suite}`; valid suites: {}",
            SUITES.join(", ")
        )));
    }
    let track = match track {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            Some(parse_track(&text).map_err(|e| CliError::usage(e.to_string()))?)
        }
        None => None,
    };
    let cfg = VerifyConfig {
        seed,
        base: parse::parse_tau(base)?,
        target: parse::parse_tau(target)?,
        samples,
        track,
    };
    let started = Instant::now();
    let report = run_suite(suite, &cfg).map_err(|e| CliError::runtime(e.to_string()))?;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = if timings {
        // Checks inside a suite share sampling loops, so the suite wall
        // time is recorded on each record rather than a per-record split.
        let times = vec![elapsed_ms; report.checks.len()];
        report.with_runtimes(&times)
    } else {
        report
    };
    for line in report.summary_lines() {
        println!("{line}");
    }
    let bytes = match format {
        Format::Json => report.to_json_bytes(),
        Format::Csv => report.to_csv_bytes(),
    };
    match out {
        Some(path) => std::fs::write(&path, &bytes)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn parse_test_fn(spec: &str, center: &TorusPoint) -> Result<TestFunction, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse_n = |s: &str| -> Result<u32, CliError> {
        s.parse()
            .map_err(|_| CliError::usage(format!("invalid order `{s}` in `{spec}`")))
    };
    let parse_f = |s: &str| -> Result<f64, CliError> {
        s.parse()
            .map_err(|_| CliError::usage(format!("invalid number `{s}` in `{spec}`")))
    };
    match parts.as_slice() {
        ["const", c] => Ok(TestFunction::Constant { c: parse_f(c)? }),
        ["harm-re", n] => Ok(TestFunction::HarmonicRe {
            n: parse_n(n)?,
            center: *center,
        }),
        ["harm-im", n] => Ok(TestFunction::HarmonicIm {
            n: parse_n(n)?,
            center: *center,
        }),
        ["psh", n] => Ok(TestFunction::PshPower {
            n: parse_n(n)?,
            center: *center,
        }),
        ["indicator", lo, hi] => Ok(TestFunction::Indicator {
            lo: parse_f(lo)?,
            hi: parse_f(hi)?,
        }),
        ["gauss", scale] => Ok(TestFunction::GaussBump {
            scale: parse_f(scale)?,
        }),
        _ => Err(CliError::usage(format!(
            "unknown boundary function `{spec}`; expected const:<c>, harm-re:<n>, \
             harm-im:<n>, psh:<n>, indicator:<lo>:<hi> or gauss:<scale>"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    quantity: &str,
    x0: Option<String>,
    x: Option<String>,
    y: Option<String>,
    u: Option<String>,
    f: Option<String>,
    tol: f64,
    func: &str,
    center: Option<String>,
    via_sup: bool,
) -> Result<u8, CliError> {
    let need_tau = |arg: &Option<String>, name: &str| -> Result<TorusPoint, CliError> {
        let s = arg
            .as_deref()
            .ok_or_else(|| CliError::usage(format!("`{quantity}` requires --{name}")))?;
        Ok(parse::parse_tau(s)?)
    };
    let need_slope = |arg: &Option<String>| -> Result<teich_core::Slope, CliError> {
        let s = arg
            .as_deref()
            .ok_or_else(|| CliError::usage(format!("`{quantity}` requires --u")))?;
        Ok(parse::parse_slope(s)?)
    };
    match quantity {
        "ext" => {
            let tau = need_tau(&x, "x")?;
            let fol = parse::parse_foliation(
                f.as_deref()
                    .ok_or_else(|| CliError::usage("`ext` requires --f a,b"))?,
            )?;
            let v = extremal_length(&tau, &fol).map_err(|e| CliError::usage(e.to_string()))?;
            println!("{v}");
        }
        "dist" => {
            let a = need_tau(&x, "x")?;
            let b = need_tau(&y, "y")?;
            let d = if via_sup {
                teich_distance_sup(&a, &b)
            } else {
                teich_distance(&a, &b)
            };
            println!("{d}");
        }
        "green" => {
            let a = need_tau(&x, "x")?;
            let b = need_tau(&y, "y")?;
            let g = green(&a, &b);
            if g.is_pole() {
                println!("-inf");
            } else {
                println!("{}", g.to_f64());
            }
        }
        "kernel" => {
            let a = need_tau(&x0, "x0")?;
            let b = need_tau(&x, "x")?;
            let s = need_slope(&u)?;
            println!("{}", poisson_kernel(&a, &b, &s).value());
        }
        "busemann" => {
            let a = need_tau(&x0, "x0")?;
            let b = need_tau(&x, "x")?;
            let s = need_slope(&u)?;
            println!("{}", busemann(&a, &b, &s));
        }
        "density" => {
            let base = need_tau(&x0, "x0")?;
            let s = need_slope(&u)?;
            println!("{}", BoundaryMeasure::new(base).density(&s));
        }
        "poisson-integral" => {
            let a = need_tau(&x0, "x0")?;
            let b = need_tau(&x, "x")?;
            let c = match center {
                Some(s) => parse::parse_tau(&s)?,
                None => a,
            };
            let test_fn = parse_test_fn(func, &c)?;
            let v = poisson_integral(&test_fn.boundary_fn(), &a, &b, tol)
                .map_err(|e| CliError::runtime(e.to_string()))?;
            if v.im.abs() > 1e-12 {
                println!("{}+{}i", v.re, v.im);
            } else {
                println!("{}", v.re);
            }
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown quantity `{other}`; valid quantities: ext, dist, green, kernel, \
                 busemann, density, poisson-integral"
            )));
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    scan: &str,
    heights: Option<String>,
    u0: f64,
    t_max: u32,
    base: &str,
    y: &str,
    u: &str,
    func: &str,
    out: Option<PathBuf>,
) -> Result<u8, CliError> {
    let base_pt = parse::parse_tau(base)?;
    let mut csv = String::new();
    match scan {
        "schwarz" => {
            let hs = parse::parse_heights(
                heights
                    .as_deref()
                    .ok_or_else(|| CliError::usage("schwarz scan requires --heights"))?,
            )?;
            let test_fn = parse_test_fn(func, &base_pt)?;
            let target = test_fn.trace(u0);
            let values = schwarz_probe(&test_fn.boundary_fn(), &base_pt, u0, &hs, 1e-10)
                .map_err(|e| CliError::runtime(e.to_string()))?;
            csv.push_str("height,value,gap\n");
            for (h, v) in hs.iter().zip(&values) {
                csv.push_str(&format!("{h},{v},{}\n", (v - target).abs()));
            }
        }
        "ray-limit" => {
            if t_max == 0 {
                return Err(CliError::usage("ray-limit scan requires --t-max >= 1"));
            }
            let pair_pt = parse::parse_tau(y)?;
            let slope = parse::parse_slope(u)?;
            let limit = boundary_pairing(&base_pt, &pair_pt, &slope);
            csv.push_str("t,exp_pairing,limit,gap\n");
            for t in 1..=t_max {
                let xt = teich_ray(&base_pt, &slope, t as f64);
                let v = exp_pairing(&base_pt, &xt, &pair_pt);
                csv.push_str(&format!("{t},{v},{limit},{}\n", (v - limit).abs()));
            }
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown scan `{other}`; valid scans: schwarz, ray-limit"
            )));
        }
    }
    match out {
        Some(path) => std::fs::write(&path, csv.as_bytes())
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fn_spec_is_usage_error() {
        let center = TorusPoint::square();
        assert!(parse_test_fn("nope:1", &center).is_err());
        assert!(parse_test_fn("harm-re:x", &center).is_err());
        assert!(parse_test_fn("harm-re:2", &center).is_ok());
        assert!(parse_test_fn("indicator:0:1", &center).is_ok());
    }
}
