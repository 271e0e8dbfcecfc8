use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fracconn::experiments::{
    self, fit_scaling, parse_m_grid, parse_real_list, read_scaling_csv, write_fit_csv,
    write_lonely_csv, write_occupancy_csv, write_ratio_csv, write_regularity_csv,
    write_scaling_csv, Experiment, HarnessOptions, RunConfig,
};
use fracconn::measures::{MeasureKind, MeasureParams};
use fracconn::{
    connectivity_threshold, estimate_regularity, mst_fast, mst_oracle, sample, Error, MeasureSpec,
    Result,
};

#[derive(Parser)]
#[command(
    name = "fracconn",
    version,
    about = "Connectivity-threshold experiments on fractal and semi-uniform measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Args, Clone)]
struct Common {
    /// Measure: a kind name (e.g. unit_square) or a JSON object.
    #[arg(long, default_value = "unit_square")]
    measure: String,
    /// Single sample size.
    #[arg(long)]
    m: Option<usize>,
    /// Geometric grid of sample sizes, `a:b:steps`.
    #[arg(long = "m-grid")]
    m_grid: Option<String>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// JSON run config; its fields override the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one cloud (trial 0 of the run at this m and seed).
    Sample(Common),
    /// Minimum spanning tree edge list of one cloud.
    Mst {
        #[command(flatten)]
        common: Common,
        /// Use the O(m²) reference algorithm.
        #[arg(long)]
        oracle: bool,
    },
    /// Connectivity threshold of one cloud.
    Threshold(Common),
    /// Estimate (d, alpha, beta) from samples.
    Regularity {
        #[command(flatten)]
        common: Common,
        #[arg(long = "reference-size", default_value_t = 100_000)]
        reference_size: usize,
        #[arg(long, default_value_t = 200)]
        centers: usize,
    },
    /// Longest MST edge across an m grid.
    Scaling(Common),
    /// Full-occupancy frequency of maximal packings.
    Occupancy {
        #[command(flatten)]
        common: Common,
        /// Multipliers of the covering radius.
        #[arg(long = "c-grid", default_value = "0.25,0.5,1,2,4")]
        c_grid: String,
    },
    /// Lonely-ball counts at the lower packing radius.
    Lonely(Common),
    /// Divergence of set F from the two-dimensional rate.
    Counterexample {
        #[command(flatten)]
        common: Common,
        #[arg(long = "i-max")]
        i_max: Option<u32>,
        /// Also write the per-trial records here.
        #[arg(long = "records-out")]
        records_out: Option<PathBuf>,
    },
    /// Fit the scaling exponent from a records CSV.
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
    },
}

struct Resolved {
    measure: MeasureSpec,
    m_grid: Vec<usize>,
    trials: usize,
    seed: u64,
    c_grid: Option<Vec<f64>>,
    options: HarnessOptions,
}

impl Common {
    fn resolve(&self, experiment: Option<Experiment>) -> Result<Resolved> {
        let Format::Csv = self.format;
        if let Some(path) = &self.config {
            let cfg = RunConfig::load(path)?;
            if let Some(e) = experiment {
                if cfg.experiment != e {
                    return Err(Error::Usage(format!(
                        "config describes a {:?} run, not {:?}",
                        cfg.experiment, e
                    )));
                }
            }
            return Ok(Resolved {
                measure: cfg.measure,
                m_grid: cfg.m_grid,
                trials: cfg.trials,
                seed: cfg.seed,
                c_grid: cfg.c_grid,
                options: cfg.options.unwrap_or_default(),
            });
        }
        let m_grid = match (&self.m_grid, self.m) {
            (Some(g), None) => parse_m_grid(g)?,
            (None, Some(m)) => vec![m],
            (Some(_), Some(_)) => {
                return Err(Error::Usage("give either --m or --m-grid, not both".into()))
            }
            (None, None) => return Err(Error::Usage("missing --m or --m-grid".into())),
        };
        Ok(Resolved {
            measure: MeasureSpec::parse(&self.measure)?,
            m_grid,
            trials: self.trials,
            seed: self.seed,
            c_grid: None,
            options: HarnessOptions::default(),
        })
    }

    fn single_m(&self) -> Result<(MeasureSpec, usize, u64)> {
        let r = self.resolve(None)?;
        match r.m_grid.as_slice() {
            [m] => Ok((r.measure, *m, r.seed)),
            _ => Err(Error::Usage("this command takes a single --m".into())),
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample(c) => {
            let (measure, m, seed) = c.single_m()?;
            let cloud = sample(
                &measure,
                m,
                &mut experiments::trial_stream(&measure, m, 0, seed),
            );
            let mut w = csv::Writer::from_writer(output(&c.out)?);
            let names = ["x", "y", "z"];
            w.write_record(&names[..cloud.ambient_dim()])?;
            for p in cloud.points() {
                w.write_record(p.coords().iter().map(|&v| experiments::fmt_f64(v)))?;
            }
            w.flush()?;
        }
        Command::Mst { common, oracle } => {
            let (measure, m, seed) = common.single_m()?;
            let cloud = sample(
                &measure,
                m,
                &mut experiments::trial_stream(&measure, m, 0, seed),
            );
            let result = if oracle {
                mst_oracle(&cloud)?
            } else {
                mst_fast(&cloud)?
            };
            result.write_csv(output(&common.out)?)?;
        }
        Command::Threshold(c) => {
            let (measure, m, seed) = c.single_m()?;
            let mut stream = experiments::trial_stream(&measure, m, 0, seed);
            let trial_seed = stream.seed();
            let cloud = sample(&measure, m, &mut stream);
            let r = connectivity_threshold(&cloud)?;
            let mut w = csv::Writer::from_writer(output(&c.out)?);
            w.write_record([
                "measure_id",
                "m",
                "seed",
                "longest_edge",
                "threshold_radius",
            ])?;
            w.write_record([
                measure.id(),
                m.to_string(),
                trial_seed.to_string(),
                experiments::fmt_f64(2.0 * r),
                experiments::fmt_f64(r),
            ])?;
            w.flush()?;
        }
        Command::Regularity {
            common,
            reference_size,
            centers,
        } => {
            let measure = MeasureSpec::parse(&common.measure)?;
            let mut stream = fracconn::derive_stream(common.seed, &[]);
            let est = estimate_regularity(&measure, reference_size, centers, None, &mut stream)?;
            write_regularity_csv(output(&common.out)?, &est, &measure)?;
        }
        Command::Scaling(c) => {
            let r = c.resolve(Some(Experiment::Scaling))?;
            let records = experiments::scaling_run(&r.measure, &r.m_grid, r.trials, r.seed)?;
            write_scaling_csv(output(&c.out)?, &records, Some(&r.measure))?;
            if let Ok(fit) = fit_scaling(&records) {
                eprintln!(
                    "slope = {:.4} (1/d = {:.4}), r2 = {:.4}",
                    fit.slope,
                    1.0 / r.measure.nominal_dim(),
                    fit.r2
                );
            }
        }
        Command::Occupancy { common, c_grid } => {
            let r = common.resolve(Some(Experiment::Occupancy))?;
            let cs = match r.c_grid {
                Some(cs) => cs,
                None => parse_real_list(&c_grid)?,
            };
            let rows = experiments::occupancy_run(
                &r.measure, &r.m_grid, r.trials, &cs, r.seed, &r.options, None,
            )?;
            write_occupancy_csv(output(&common.out)?, &rows, Some(&r.measure))?;
        }
        Command::Lonely(c) => {
            let r = c.resolve(Some(Experiment::Lonely))?;
            let summaries =
                experiments::lonely_run(&r.measure, &r.m_grid, r.trials, r.seed, &r.options, None)?;
            write_lonely_csv(output(&c.out)?, &summaries, Some(&r.measure))?;
            for s in &summaries {
                eprintln!(
                    "m = {}: N(delta) = {}, median Y = {}, Var/E^2 = {:.3e}",
                    s.m,
                    s.n_delta,
                    s.median_y,
                    s.relative_variance()
                );
            }
        }
        Command::Counterexample {
            common,
            i_max,
            records_out,
        } => {
            let r = common.resolve(Some(Experiment::Counterexample))?;
            let i_max = i_max.or(r.measure.params.i_max);
            let report = experiments::counterexample_run(&r.m_grid, r.trials, r.seed, i_max)?;
            write_ratio_csv(output(&common.out)?, &report.series)?;
            if let Some(path) = records_out {
                let measure = MeasureSpec::with_params(
                    MeasureKind::SetF,
                    MeasureParams { depth: None, i_max },
                )?;
                write_scaling_csv(output(&Some(path))?, &report.records, Some(&measure))?;
            }
            eprintln!(
                "strictly_increasing = {}, growth R(max)/R(min) = {:.4}",
                report.strictly_increasing, report.growth
            );
        }
        Command::Fit { common, input } => {
            let records = read_scaling_csv(open(&input)?)?;
            write_fit_csv(output(&common.out)?, &fit_scaling(&records)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
