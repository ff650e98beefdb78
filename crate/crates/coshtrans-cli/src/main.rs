//! Command-line front end: load JSON specifications, run the analyses,
//! and emit JSON reports with CSV curves beside them.

use clap::{Parser, Subcommand, ValueEnum};
use coshtrans::error::{Error, Result};
use coshtrans::measure::MomentSequence;
use coshtrans::moments::{
    carleman_determinacy, factorial_growth_test, is_stieltjes, recover_measure,
};
use coshtrans::operators::{classify_cosubnormal, ClassifyPlan};
use coshtrans::posdef::{is_exponentially_convex, GridPlan};
use coshtrans::support::{support_from_logderiv, support_from_moments, support_from_phi};
use coshtrans::transform::{classify_h, default_x_grid, growth_rate, PsiFunction};
use coshtrans_cli::acceptance;
use coshtrans_cli::io::{
    ensure_out_dir, exit_code_for, load_moments, load_operator, load_psi, out_file, parse_param,
    write_csv, write_json,
};
use coshtrans_cli::reports::{AnalyzeReport, ClassifyReport, EvennessProbe, RecoverReport};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "coshtrans",
    version,
    about = "Hyperbolic-cosine-transform analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a transform: convexity, growth, support, series classes.
    AnalyzePsi {
        /// `catalog:NAME` or a path to a psi JSON file.
        #[arg(long)]
        psi: String,
        /// Catalog parameter, repeatable: --param xi=2 --param eta=5.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hankel order bound for the Stieltjes check.
        #[arg(long = "m-max", default_value_t = 6)]
        m_max: usize,
        /// Grid limit for growth and support estimation.
        #[arg(long = "x-max", default_value_t = 50.0)]
        x_max: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Classify the composition operator induced by an affine map.
    Classify {
        #[arg(long)]
        psi: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Path to the operator JSON: {"kappa":k,"A":[[..]],"a":[..]}.
        #[arg(long)]
        op: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "m-max", default_value_t = 8)]
        m_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recover an atomic measure from a moment prefix.
    Recover {
        /// Moments as a JSON array or CSV/whitespace text file.
        #[arg(long)]
        moments: PathBuf,
        /// Number of atoms.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-run one documented example bundle.
    Reproduce {
        /// One of: sinhc, erf-gauss, bmv, coshcos, expsq, unitary-const,
        /// support-trio.
        #[arg(long)]
        id: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the full acceptance suite.
    Verify {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::AnalyzePsi {
            psi,
            params,
            out,
            seed,
            m_max,
            x_max,
            format,
        } => {
            let p = load_psi(&psi, &params)?;
            ensure_out_dir(&out)?;
            let report = analyze(&p, seed, m_max, x_max)?;
            if matches!(format, Format::Json) {
                write_json(&out_file(&out, "analyze_psi.json"), &report)?;
            }
            if let Some(detail) = report.support_detail.get("logderiv") {
                write_csv(
                    &out_file(&out, "analyze_psi_logderiv.csv"),
                    ("x", "log_derivative"),
                    &detail.curve,
                )?;
            }
            if let Some(detail) = report.support_detail.get("moments") {
                write_csv(
                    &out_file(&out, "analyze_psi_root_test.csv"),
                    ("n", "root"),
                    &detail.curve,
                )?;
            }
            if let Some(trend) = &report.factorial_growth {
                let rows: Vec<(f64, f64)> =
                    trend.curve.iter().map(|&(n, r)| (n as f64, r)).collect();
                write_csv(
                    &out_file(&out, "analyze_psi_growth_trend.csv"),
                    ("n", "r_n"),
                    &rows,
                )?;
            }
            println!("wrote reports under {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify {
            psi,
            params,
            op,
            out,
            seed,
            m_max,
            format: _,
        } => {
            let p = load_psi(&psi, &params)?;
            let t = load_operator(&op)?;
            ensure_out_dir(&out)?;
            let plan = ClassifyPlan {
                sample_points: vec![],
                m: m_max.clamp(1, 10),
                seed,
            };
            let classification = classify_cosubnormal(&p, &t, &plan)?;
            let report = ClassifyReport {
                psi: coshtrans::json::psi_to_wire(&p),
                operator: t,
                seed,
                classification,
            };
            write_json(&out_file(&out, "classify.json"), &report)?;
            println!("wrote {}", out_file(&out, "classify.json").display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Recover {
            moments,
            k,
            out,
            format,
        } => {
            let values = load_moments(&moments)?;
            let seq = MomentSequence::new(values, format!("file {}", moments.display()))?;
            let rec = recover_measure(&seq, k)?;
            ensure_out_dir(&out)?;
            let report = RecoverReport {
                measure: rec.measure,
                residuals: rec.residuals.clone(),
            };
            if matches!(format, Format::Json) {
                write_json(&out_file(&out, "recover.json"), &report)?;
            }
            let rows: Vec<(f64, f64)> = rec.residuals.iter().map(|&(n, r)| (n as f64, r)).collect();
            write_csv(
                &out_file(&out, "recover_residuals.csv"),
                ("n", "relative_residual"),
                &rows,
            )?;
            println!("wrote reports under {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce { id, out } => {
            let Some(results) = acceptance::reproduce(&id) else {
                return Err(Error::InvalidInput(format!(
                    "unknown example id `{id}`; expected one of {:?}",
                    acceptance::EXAMPLE_IDS
                )));
            };
            ensure_out_dir(&out)?;
            let all_pass = results.iter().all(|r| r.pass);
            for r in &results {
                println!("{}", r.summary_line());
                for d in &r.details {
                    println!("    {d}");
                }
            }
            write_json(&out_file(&out, &format!("reproduce_{id}.json")), &results)?;
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Verify { out } => {
            let results = acceptance::run_all();
            ensure_out_dir(&out)?;
            let all_pass = results.iter().all(|r| r.pass);
            for r in &results {
                println!("{}", r.summary_line());
            }
            write_json(&out_file(&out, "verify.json"), &results)?;
            println!(
                "{}: {} / {} criteria passed",
                if all_pass { "PASS" } else { "FAIL" },
                results.iter().filter(|r| r.pass).count(),
                results.len()
            );
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn analyze(p: &PsiFunction, seed: u64, m_max: usize, x_max: f64) -> Result<AnalyzeReport> {
    let mut errors = vec![];
    let x_max = x_max.max(20.0);

    // evenness and positivity probes
    let mut rng = coshtrans::rng::SplitMix64::new(seed);
    let mut max_diff: f64 = 0.0;
    let mut pos_min = f64::INFINITY;
    for _ in 0..16 {
        let x = rng.uniform(-8.0, 8.0);
        if let (Ok(a), Ok(b)) = (p.eval(x), p.eval(-x)) {
            max_diff = max_diff.max((a - b).abs());
            pos_min = pos_min.min(a);
        }
    }

    let exponential_convexity = is_exponentially_convex(p, &GridPlan::default())?;
    let growth = growth_rate(p, &default_x_grid(x_max))?;

    let mut support_estimates = BTreeMap::new();
    let mut support_detail = BTreeMap::new();
    match support_from_logderiv(p, x_max) {
        Ok(est) => {
            support_estimates.insert("logderiv".to_string(), est.estimate);
            support_detail.insert("logderiv".to_string(), est);
        }
        Err(e) => errors.push(format!("logderiv: {e}")),
    }
    match support_from_phi(p, x_max) {
        Ok(est) => {
            support_estimates.insert("phi".to_string(), est.estimate);
            support_detail.insert("phi".to_string(), est);
        }
        Err(e) => errors.push(format!("phi: {e}")),
    }
    support_estimates.insert("growth_b0".to_string(), growth.b0);

    let n_series = (2 * m_max + 1).max(20);
    let mut series_prefix = None;
    let mut stieltjes = None;
    let mut factorial_growth = None;
    let mut carleman = None;
    match p.series_coeffs(n_series) {
        Ok(seq) => {
            series_prefix = seq.values_linear();
            match support_from_moments(&seq) {
                Ok(est) => {
                    support_estimates.insert("moments".to_string(), est.estimate);
                    support_detail.insert("moments".to_string(), est);
                }
                Err(e) => errors.push(format!("moments support: {e}")),
            }
            match is_stieltjes(&seq, m_max) {
                Ok(rep) => stieltjes = Some(rep),
                Err(e) => errors.push(format!("stieltjes: {e}")),
            }
            match factorial_growth_test(&seq) {
                Ok(rep) => factorial_growth = Some(rep),
                Err(e) => errors.push(format!("factorial growth: {e}")),
            }
            match carleman_determinacy(&seq) {
                Ok(rep) => carleman = Some(rep),
                Err(e) => errors.push(format!("carleman: {e}")),
            }
        }
        Err(e) => errors.push(format!("series: {e}")),
    }

    let h_class = match p.taylor_coeffs(24) {
        Ok(coeffs) => Some(classify_h(&coeffs)?),
        Err(e) => {
            errors.push(format!("taylor coefficients: {e}"));
            None
        }
    };
    // the even-series variant classifies the coefficients of psi(sqrt x)
    let h_class_even_series = match p.taylor_coeffs(24) {
        Ok(coeffs) => {
            let compacted: Vec<f64> = coeffs.iter().step_by(2).copied().collect();
            Some(classify_h(&compacted)?)
        }
        Err(_) => None,
    };

    Ok(AnalyzeReport {
        psi: coshtrans::json::psi_to_wire(p),
        seed,
        warnings: p.warnings().to_vec(),
        evenness: EvennessProbe {
            even_by_construction: p.is_even(),
            max_probe_diff: max_diff,
        },
        positivity_min: pos_min,
        exponential_convexity,
        growth,
        support_estimates,
        support_detail,
        h_class,
        h_class_even_series,
        series_prefix,
        stieltjes,
        factorial_growth,
        carleman,
        errors,
    })
}
