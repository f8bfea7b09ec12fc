//! Thin command-line front end over the library: convolutions, transforms,
//! Appell construction, measure comparison, Monte Carlo oracles and the
//! scenario runner.

use clap::{Parser, Subcommand};
use finfree::appell::{
    laguerre_appell, lp_series, lpi_series, normalized_appell, normalized_laguerre_appell,
    LaguerrePolyaData, LpiData,
};
use finfree::convolve::{boxplus, rect_boxplus};
use finfree::cumulants::{ff_cumulant, finite_r, rect_finite_r};
use finfree::matrix::{mc_boxplus, mc_compression, mc_rect_boxplus, mc_rect_compression};
use finfree::measures::{cdf_csv, erm, kolmogorov_distance, ReferenceLaw};
use finfree::poly::MonicPoly;
use finfree::roots::{find_roots, RootSolveConfig};
use finfree::scalar::{FieldTag, Scalar};
use finfree::scenarios;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "finfree", about = "finite free probability toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convolve two monic polynomials (square or rectangular).
    Convolve {
        /// boxplus | rect
        #[arg(long)]
        op: String,
        /// Operator index n (rational, e.g. 1/2) for the rectangular case.
        #[arg(long, default_value = "0")]
        n: String,
        /// Input polynomial JSON files (exactly two).
        #[arg(long = "in", num_args = 2)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a truncated transform or the cumulant sequence of a polynomial.
    Transform {
        /// R | rectR | cumulants
        #[arg(long)]
        what: String,
        #[arg(long, default_value = "0")]
        n: String,
        /// Highest order to print (defaults to the degree).
        #[arg(long)]
        order: Option<usize>,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build an Appell-type polynomial from Laguerre–Pólya data.
    Appell {
        /// JSON data file ({c, sigma2, roots} or {sigma2, roots_sq}).
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        d: usize,
        /// Normalized variant (transform fixed across degrees).
        #[arg(long)]
        normalized: bool,
        /// Rectangular family with this operator index (uses roots_sq data).
        #[arg(long)]
        rect_n: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Root-solve a polynomial and compare its root measure to a law.
    Measure {
        /// semicircle | mp:<rate> | cauchy
        #[arg(long)]
        law: String,
        #[arg(long = "in")]
        input: PathBuf,
        /// Print the Kolmogorov–Smirnov distance.
        #[arg(long)]
        ks: bool,
        /// Write the (location, weight, F_emp, F_ref) table here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        precision_bits: u32,
    },
    /// Monte Carlo matrix oracles.
    Mc {
        /// boxplus | compress | rect-compress | rect-boxplus
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run a named scenario and write its verdict.
    Run {
        scenario: String,
        /// Flat key=value config file overriding the built-in defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for the verdict JSON and CSV artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_rational(s: &str) -> anyhow::Result<Scalar> {
    Ok(Scalar::parse_in_field(s, FieldTag::Rational)?)
}

fn load_poly(path: &PathBuf) -> anyhow::Result<MonicPoly> {
    Ok(MonicPoly::from_json(&std::fs::read_to_string(path)?)?)
}

fn emit_poly(p: &MonicPoly, out: Option<PathBuf>) -> anyhow::Result<()> {
    let json = p.to_json();
    match out {
        Some(path) => std::fs::write(path, json)?,
        None => println!("{json}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Convolve { op, n, inputs, out } => {
            let p = load_poly(&inputs[0])?;
            let q = load_poly(&inputs[1])?;
            let r = match op.as_str() {
                "boxplus" => boxplus(&p, &q)?,
                "rect" => rect_boxplus(&p, &q, &parse_rational(&n)?)?,
                other => anyhow::bail!("unknown convolution: {other}"),
            };
            emit_poly(&r, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform {
            what,
            n,
            order,
            input,
        } => {
            let p = load_poly(&input)?;
            let upto = order.unwrap_or(p.degree());
            let coeffs: Vec<String> = match what.as_str() {
                "R" => {
                    let r = finite_r(&p);
                    (0..=upto.min(r.order()))
                        .map(|k| r.coeff(k).to_exact_string())
                        .collect()
                }
                "rectR" => {
                    let r = rect_finite_r(&p, &parse_rational(&n)?)?;
                    (0..=upto.min(r.order()))
                        .map(|k| r.coeff(k).to_exact_string())
                        .collect()
                }
                "cumulants" => (1..=upto.min(p.degree()))
                    .map(|j| ff_cumulant(&p, j).map(|c| c.to_exact_string()))
                    .collect::<finfree::Result<_>>()?,
                other => anyhow::bail!("unknown transform: {other}"),
            };
            println!("{}", serde_json::to_string_pretty(&coeffs)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Appell {
            data,
            d,
            normalized,
            rect_n,
            out,
        } => {
            let text = std::fs::read_to_string(&data)?;
            let p = match rect_n {
                Some(ns) => {
                    let n = parse_rational(&ns)?;
                    let lpi = LpiData::from_json(&text)?;
                    let g = lpi_series(&lpi, d);
                    if normalized {
                        normalized_laguerre_appell(&g, d, &n)?
                    } else {
                        laguerre_appell(&g, d, &n)?
                    }
                }
                None => {
                    let lp = LaguerrePolyaData::from_json(&text)?;
                    eprintln!(
                        "truncation t^2-mass of the stored zeros: {}",
                        lp.inverse_square_mass().to_f64()
                    );
                    if normalized {
                        normalized_appell(&lp, d)?
                    } else {
                        appell_from_data(&lp, d)?
                    }
                }
            };
            emit_poly(&p, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Measure {
            law,
            input,
            ks,
            csv,
            precision_bits,
        } => {
            let p = load_poly(&input)?;
            let law = parse_law(&law)?;
            let report = find_roots(&p, &RootSolveConfig::with_precision(precision_bits))?;
            let mu = erm(&report.roots);
            if let Some(path) = csv {
                std::fs::write(path, cdf_csv(&mu, &law)?)?;
            }
            if ks {
                println!("{:.12e}", kolmogorov_distance(&mu, &law)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Mc {
            check,
            d,
            n,
            ell,
            samples,
            seed,
        } => {
            let spec_a: Vec<i64> = (1..=d as i64).collect();
            let spec_b: Vec<i64> = (0..d as i64).map(|k| k / 2).collect();
            let report = match check.as_str() {
                "boxplus" => mc_boxplus(&spec_a, &spec_b, samples, seed)?,
                "compress" => mc_compression(&spec_a, ell, samples, seed)?,
                "rect-compress" => mc_rect_compression(&spec_a, n, ell, samples, seed)?,
                "rect-boxplus" => mc_rect_boxplus(&spec_a, &spec_b, n, samples, seed)?,
                other => anyhow::bail!("unknown check: {other}"),
            };
            println!("{}", report.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            scenario,
            config,
            out,
        } => {
            let mut cfg = scenarios::default_config(&scenario)?;
            if let Some(path) = config {
                cfg.apply_file(&std::fs::read_to_string(path)?)?;
            }
            cfg.out_dir = out.clone();
            let verdict = scenarios::run(&scenario, &cfg)?;
            let json = verdict.to_json();
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join(format!("verdict_{scenario}.json")), &json)?;
            }
            print!("{json}");
            eprintln!(
                "runtime: {:.3}s",
                verdict.runtime.as_secs_f64()
            );
            Ok(if verdict.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn parse_law(s: &str) -> anyhow::Result<ReferenceLaw> {
    if s == "semicircle" {
        return Ok(ReferenceLaw::Semicircle);
    }
    if s == "cauchy" {
        return Ok(ReferenceLaw::Cauchy);
    }
    if let Some(rate) = s.strip_prefix("mp:") {
        return Ok(ReferenceLaw::mp(rate.parse()?));
    }
    anyhow::bail!("unknown law: {s} (expected semicircle | mp:<rate> | cauchy)")
}

fn appell_from_data(lp: &LaguerrePolyaData, d: usize) -> finfree::Result<MonicPoly> {
    finfree::appell::appell_poly(&lp_series(lp, d), d)
}
