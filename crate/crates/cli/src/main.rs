use clap::{Args, Parser, Subcommand};
use mla_core::config::{schema_text, SimulationConfig};
use mla_core::driver::run_to_dir;
use mla_core::material::{builtin_material, BUILTIN_NAMES};
use mla_core::output::{convergence_csv, fmt17, write_convergence};
use mla_core::solutions::soliton::SolitonParams;
use mla_core::studies::{convergence_study, energy_check, soliton_config, soliton_study};
use mla_core::{MlaError, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mla", version, about = "FDTD solver for Maxwell's equations coupled to multi-level atomic media")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write snapshots plus manifest.json.
    Run(RunArgs),
    /// Refinement study of a configuration (exact errors or self-convergence).
    Convergence {
        #[command(flatten)]
        run: RunArgs,
        /// Refinement factors applied to every grid.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        refine: Vec<usize>,
    },
    /// Soliton self-convergence study; uses the standard 1D setup without --config.
    Soliton {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        refine: Vec<usize>,
        /// Half-width of the window around the envelope centre used for min D.
        #[arg(long, default_value_t = 10.0)]
        window: f64,
    },
    /// E_PN drift of the 0D restricted system under step halving.
    EnergyCheck {
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 10.0)]
        tfinal: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.02,0.01,0.005")]
        dt: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List builtin materials.
    Materials,
    /// Print the configuration schema and a sample config.
    Schema,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = ["2", "4"])]
    order: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long, conflicts_with = "tfinal")]
    steps: Option<usize>,
    #[arg(long)]
    tfinal: Option<f64>,
    #[arg(long)]
    snapshot_every: Option<usize>,
}

impl RunArgs {
    fn apply(&self, cfg: &mut SimulationConfig) -> Result<()> {
        if let Some(o) = &self.order {
            cfg.order = o.parse().expect("validated by clap");
        }
        if let Some(c) = self.cfl {
            cfg.cfl = c;
        }
        if let Some(n) = self.steps {
            cfg.steps = Some(n);
            cfg.t_final = None;
        }
        if let Some(t) = self.tfinal {
            cfg.t_final = Some(t);
            cfg.steps = None;
        }
        if let Some(k) = self.snapshot_every {
            cfg.output.snapshot_every = k;
        }
        if let Some(d) = &self.out {
            cfg.output.dir = Some(d.clone());
        }
        cfg.validate()
    }

    fn load(&self) -> Result<SimulationConfig> {
        let path = self.config.as_ref().ok_or_else(|| MlaError::Config("--config is required".into()))?;
        let mut cfg = SimulationConfig::load(path)?;
        self.apply(&mut cfg)?;
        Ok(cfg)
    }
}

fn out_dir(cfg: &SimulationConfig) -> PathBuf {
    cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn run(args: &RunArgs) -> Result<()> {
    let cfg = args.load()?;
    let dir = out_dir(&cfg);
    let m = run_to_dir(&cfg, &dir)?;
    println!("scheme {} dt {} (cfl step {}) steps {} t {}", m.scheme, m.dt, m.dt_max, m.steps, m.t_final);
    println!("max|E| {}", m.diagnostics.max_abs_e);
    if let Some(errs) = &m.diagnostics.errors {
        for (k, e) in errs.iter().enumerate() {
            println!("domain {k}: err E {:e} P {:e} N {:e}", e.e, e.p, e.n);
        }
    }
    println!("wrote {} snapshots and manifest.json to {}", m.snapshots.len(), dir.display());
    Ok(())
}

fn convergence(args: &RunArgs, refine: &[usize]) -> Result<()> {
    let cfg = args.load()?;
    let rows = convergence_study(&cfg, refine)?;
    print!("{}", convergence_csv(&rows));
    let dir = out_dir(&cfg);
    std::fs::create_dir_all(&dir)?;
    write_convergence(&dir, &rows)
}

fn soliton(args: &RunArgs, refine: &[usize], window: f64) -> Result<()> {
    let mut cfg = match &args.config {
        Some(_) => args.load()?,
        None => soliton_config(2, SolitonParams::default(), -150.0, 250.0, 800, 100.0),
    };
    args.apply(&mut cfg)?;
    let rep = soliton_study(&cfg, refine, window)?;
    print!("{}", convergence_csv(&rep.rows));
    println!("min D {} within {} of x = {}; max|E| {}", rep.min_d, rep.window, rep.center, rep.max_abs_e);
    let dir = out_dir(&cfg);
    std::fs::create_dir_all(&dir)?;
    write_convergence(&dir, &rep.rows)?;
    std::fs::write(dir.join("soliton.json"), serde_json::to_string_pretty(&rep)?)?;
    let fine = cfg.refined(*refine.last().unwrap());
    run_to_dir(&fine, &dir)?;
    Ok(())
}

fn energy(order: usize, tfinal: f64, dts: &[f64], out: Option<&Path>) -> Result<()> {
    let rows = energy_check(order, dts, tfinal)?;
    let mut csv = String::from("dt,steps,e0,max_drift,rate\n");
    for r in &rows {
        csv += &format!(
            "{},{},{},{},{}\n",
            fmt17(r.dt),
            r.steps,
            fmt17(r.e0),
            fmt17(r.max_drift),
            r.rate.map(fmt17).unwrap_or_default()
        );
    }
    print!("{csv}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("energy.csv"), &csv)?;
        std::fs::write(dir.join("energy.json"), serde_json::to_string_pretty(&rows)?)?;
    }
    Ok(())
}

fn materials() -> Result<()> {
    for name in BUILTIN_NAMES {
        let m = builtin_material(name)?;
        println!(
            "{name}: num_polarization = {}, num_levels = {}, eps0 = {}, mu0 = {}, c = {:.6}",
            m.num_polarization(),
            m.num_levels(),
            m.eps0(),
            m.mu0(),
            m.c()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Command::Run(a) => run(a),
        Command::Convergence { run, refine } => convergence(run, refine),
        Command::Soliton { run, refine, window } => soliton(run, refine, *window),
        Command::EnergyCheck { order, tfinal, dt, out } => {
            if *order != 2 && *order != 4 {
                Err(MlaError::Config(format!("order must be 2 or 4, got {order}")))
            } else {
                energy(*order, *tfinal, dt, out.as_deref())
            }
        }
        Command::Materials => materials(),
        Command::Schema => {
            print!("{}", schema_text());
            Ok(())
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
