use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use mcm_pathloss::pas::{DEFAULT_GRID_POINTS, DEFAULT_KAPPA};
use mcm_pathloss::pdp::TDL_B_DS_NS;
use mcm_pathloss::sweep::{run_oracle_sweep, write_csv, write_oracle_csv};
use mcm_pathloss::{
    parse_pdp, preset, run_sweep, AntennaCatalog, AssamConfig, DelayUnit, DistanceRange, Error,
    MixedPairs, PowerDelayProfile, SweepSpec, TxAodFrame,
};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;

/// Orientation-corrected path loss sweeps over distance and antenna angles.
///
/// Angles are in degrees, counterclockwise from the Rx->Tx direction;
/// alpha=180, beta=0 is the boresight-aligned reference.
#[derive(Parser, Debug)]
#[command(name = "mcm-pathloss", version)]
struct Cli {
    /// Antenna type(s) from the catalog, used at both ends
    #[arg(long, value_delimiter = ',', default_value = "CR")]
    antenna: Vec<String>,

    /// Different Rx antenna type (needs --allow-mixed)
    #[arg(long)]
    rx_antenna: Option<String>,

    /// Accept mixed Tx/Rx types, using the Tx exponent
    #[arg(long)]
    allow_mixed: bool,

    #[arg(long, default_value_t = 10.0)]
    d_min: f64,

    #[arg(long, default_value_t = 400.0)]
    d_max: f64,

    /// Number of distances
    #[arg(long, default_value_t = 79)]
    d_steps: usize,

    /// Logarithmic distance spacing
    #[arg(long)]
    log: bool,

    /// Tx orientations, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "180"
    )]
    alpha: Vec<f64>,

    /// Rx orientations, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "0"
    )]
    beta: Vec<f64>,

    /// PDP CSV (`delay,power_db`); defaults to the shipped TDL-B table
    #[arg(long)]
    pdp: Option<PathBuf>,

    /// Unit of the delay column [default: ns for --pdp, normalized for TDL-B]
    #[arg(long)]
    delay_unit: Option<DelayUnit>,

    /// Delay spread for normalized delays [default: 363 for TDL-B]
    #[arg(long)]
    ds_ns: Option<f64>,

    /// Von Mises concentration of local scattering
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,

    /// Angular grid points (odd, >= 361)
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,

    /// Where the Tx lobe illuminates the ellipses: mirrored | geometric
    #[arg(long, default_value = "mirrored")]
    tx_aod_frame: TxAodFrame,

    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Preset sweep 2..7: 2-5 rotate one CR end, 6-7 compare CR and PG
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=7),
          conflicts_with_all = ["antenna", "rx_antenna", "alpha", "beta", "d_min", "d_max", "d_steps", "log"])]
    fig: Option<u8>,

    /// Print the parsed PDP in canonical form and exit
    #[arg(long, conflicts_with = "dump_catalog")]
    dump_pdp: bool,

    /// Print the antenna catalog in canonical form and exit
    #[arg(long)]
    dump_catalog: bool,

    /// Antenna catalog file
    #[arg(long, env = "MCM_PATHLOSS_CATALOG")]
    catalog: Option<PathBuf>,

    /// TOML overriding d0_m, pl_d0_ref_db, valid_range_m and fc_hz
    #[arg(long)]
    assam_config: Option<PathBuf>,

    /// Compare against the Monte-Carlo estimate (needs --seed)
    #[arg(long, requires = "seed")]
    oracle: bool,

    /// Monte-Carlo draws per tuple
    #[arg(long, default_value_t = 1_000_000, requires = "oracle")]
    samples: u64,

    #[arg(long, requires = "oracle")]
    seed: Option<u64>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(source: &Path, err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_DATA,
            message: format!("{}: {err}", source.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Parse { .. }
            | Error::EmptyProfile
            | Error::Config(_)
            | Error::MissingExponent(_)
            | Error::NoDelayedTaps { .. } => EXIT_DATA,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Self {
            code: EXIT_DATA,
            message: err.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(path, e))
}

fn load_catalog(cli: &Cli) -> Result<AntennaCatalog, Failure> {
    match &cli.catalog {
        Some(path) => AntennaCatalog::parse(&read(path)?).map_err(|e| Failure::data(path, e)),
        None => Ok(AntennaCatalog::builtin()),
    }
}

fn load_pdp(cli: &Cli) -> Result<PowerDelayProfile, Failure> {
    match &cli.pdp {
        Some(path) => {
            let unit = cli.delay_unit.unwrap_or(DelayUnit::Ns);
            let text = read(path)?;
            let mut pdp = parse_pdp(&text, unit, cli.ds_ns).map_err(|e| match e {
                Error::MissingScale => {
                    Failure::usage(format!("{}: {e}; pass --ds-ns", path.display()))
                }
                other => Failure::data(path, other),
            })?;
            pdp.meta.source = path.display().to_string();
            Ok(pdp)
        }
        None => {
            if cli.delay_unit == Some(DelayUnit::Ns) {
                return Err(Failure::usage(
                    "the shipped TDL-B table has normalized delays",
                ));
            }
            Ok(PowerDelayProfile::tdl_b(cli.ds_ns.unwrap_or(TDL_B_DS_NS))?)
        }
    }
}

fn load_assam(cli: &Cli) -> Result<AssamConfig, Failure> {
    match &cli.assam_config {
        Some(path) => AssamConfig::parse(&read(path)?).map_err(|e| Failure::data(path, e)),
        None => Ok(AssamConfig::default()),
    }
}

fn sweep_spec(cli: &Cli) -> Result<SweepSpec, Failure> {
    let mut spec = match cli.fig {
        Some(fig) => preset(fig)?,
        None => SweepSpec {
            antennas: cli.antenna.clone(),
            rx_antenna: cli.rx_antenna.clone(),
            mixed: if cli.allow_mixed {
                MixedPairs::UseTx
            } else {
                MixedPairs::Reject
            },
            distances: DistanceRange {
                min_m: cli.d_min,
                max_m: cli.d_max,
                steps: cli.d_steps,
                log: cli.log,
            },
            alphas_deg: cli.alpha.clone(),
            betas_deg: cli.beta.clone(),
            kappa: cli.kappa,
            grid_points: cli.grid,
            tx_frame: cli.tx_aod_frame,
        },
    };
    spec.kappa = cli.kappa;
    spec.grid_points = cli.grid;
    spec.tx_frame = cli.tx_aod_frame;
    spec.validate()?;
    Ok(spec)
}

fn emit(cli: &Cli, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::data(path, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::data(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let catalog = load_catalog(cli)?;
    if cli.dump_catalog {
        return emit(cli, |w| w.write_all(catalog.to_text().as_bytes()));
    }
    let pdp = load_pdp(cli)?;
    if cli.dump_pdp {
        return emit(cli, |w| w.write_all(pdp.to_csv().as_bytes()));
    }
    let spec = sweep_spec(cli)?;

    if cli.oracle {
        let seed = cli
            .seed
            .ok_or_else(|| Failure::usage("--oracle needs --seed"))?;
        let rows = run_oracle_sweep(&spec, &catalog, &pdp, cli.samples, seed)?;
        return emit(cli, |w| write_oracle_csv(&rows, w));
    }

    let assam = load_assam(cli)?;
    let rows = run_sweep(&spec, &catalog, &pdp, &assam)?;
    let outside = rows.iter().filter(|r| r.result.flags.out_of_range).count();
    if outside > 0 {
        let [lo, hi] = assam.valid_range_m;
        eprintln!("warning: {outside} row(s) outside the {lo}-{hi} m validity range");
    }
    let floored = rows.iter().filter(|r| r.result.flags.k_floored).count();
    if floored > 0 {
        eprintln!("warning: K floored at 1e-12 in {floored} row(s)");
    }
    emit(cli, |w| write_csv(&rows, w))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
