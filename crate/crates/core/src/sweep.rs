//! Parameter sweeps over distance and antenna orientation, and their CSV
//! output.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::antenna::{AntennaCatalog, AntennaSpec};
use crate::error::{Error, Result};
use crate::oracle::{mc_correction_factor, OracleConfig};
use crate::pas::{CorrectionModel, Scenario, TxAodFrame, DEFAULT_GRID_POINTS, DEFAULT_KAPPA};
use crate::pathloss::{assam_pl0, pair_antenna, AssamConfig, MixedPairs, PathLossResult};
use crate::pdp::PowerDelayProfile;

pub const CSV_HEADER: &str = "antenna,d_m,alpha_deg,beta_deg,K_linear,PL0_db,PL_db,k_floored";
pub const ORACLE_CSV_HEADER: &str =
    "antenna,d_m,alpha_deg,beta_deg,K_linear,K_oracle,K_oracle_stderr";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceRange {
    pub min_m: f64,
    pub max_m: f64,
    pub steps: usize,
    /// Logarithmic spacing instead of linear.
    pub log: bool,
}

impl DistanceRange {
    pub fn single(d: f64) -> Self {
        Self {
            min_m: d,
            max_m: d,
            steps: 1,
            log: false,
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let ok = self.min_m > 0.0
            && self.min_m <= self.max_m
            && self.max_m.is_finite()
            && self.steps >= 1;
        if !ok {
            return Err(Error::InvalidScenario(format!(
                "bad distance range {self:?}"
            )));
        }
        if self.steps == 1 {
            if self.min_m != self.max_m {
                return Err(Error::InvalidScenario(
                    "one step needs d_min == d_max".into(),
                ));
            }
            return Ok(vec![self.min_m]);
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.steps {
                    self.max_m
                } else if self.log {
                    self.min_m * (self.max_m / self.min_m).powf(t)
                } else {
                    self.min_m + (self.max_m - self.min_m) * t
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Antenna types, each used at both ends unless `rx_antenna` is set.
    pub antennas: Vec<String>,
    pub rx_antenna: Option<String>,
    pub mixed: MixedPairs,
    pub distances: DistanceRange,
    pub alphas_deg: Vec<f64>,
    pub betas_deg: Vec<f64>,
    pub kappa: f64,
    pub grid_points: usize,
    pub tx_frame: TxAodFrame,
}

impl SweepSpec {
    pub fn new(
        antenna: &str,
        distances: DistanceRange,
        alphas_deg: Vec<f64>,
        betas_deg: Vec<f64>,
    ) -> Self {
        Self {
            antennas: vec![antenna.to_string()],
            rx_antenna: None,
            mixed: MixedPairs::Reject,
            distances,
            alphas_deg,
            betas_deg,
            kappa: DEFAULT_KAPPA,
            grid_points: DEFAULT_GRID_POINTS,
            tx_frame: TxAodFrame::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.antennas.is_empty() || self.alphas_deg.is_empty() || self.betas_deg.is_empty() {
            return Err(Error::InvalidScenario("empty antenna or angle list".into()));
        }
        if self
            .alphas_deg
            .iter()
            .chain(&self.betas_deg)
            .any(|a| !a.is_finite())
        {
            return Err(Error::InvalidScenario("angles must be finite".into()));
        }
        self.distances.values()?;
        Ok(())
    }
}

/// Distances 10..=400 m every 5 m.
fn preset_distances() -> DistanceRange {
    DistanceRange {
        min_m: 10.0,
        max_m: 400.0,
        steps: 79,
        log: false,
    }
}

/// Orientation sets behind the published figures. The exact legend values
/// are not known, so these are representative choices.
pub fn preset(fig: u8) -> Result<SweepSpec> {
    let d = preset_distances();
    let spec = match fig {
        2 | 3 => SweepSpec::new("CR", d, vec![180.0], vec![0.0, 30.0, 60.0, 90.0, 120.0]),
        4 | 5 => SweepSpec::new("CR", d, vec![180.0, 150.0, 120.0, 90.0, 60.0], vec![0.0]),
        6 => SweepSpec {
            antennas: vec!["CR".into(), "PG".into()],
            ..SweepSpec::new("CR", d, vec![180.0], vec![0.0, 10.0, 20.0, 30.0])
        },
        7 => SweepSpec {
            antennas: vec!["CR".into(), "PG".into()],
            ..SweepSpec::new("CR", d, vec![180.0, 165.0, 150.0], vec![0.0, 15.0, 30.0])
        },
        other => {
            return Err(Error::InvalidScenario(format!(
                "no preset for figure {other} (2..=7)"
            )))
        }
    };
    Ok(spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub antenna: String,
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub result: PathLossResult,
}

struct Pair {
    tx: AntennaSpec,
    rx: AntennaSpec,
    label: String,
    pl_antenna: AntennaSpec,
}

fn resolve_pairs(spec: &SweepSpec, catalog: &AntennaCatalog) -> Result<Vec<Pair>> {
    spec.antennas
        .iter()
        .map(|name| {
            let tx = catalog.get(name)?.clone();
            let rx = match &spec.rx_antenna {
                Some(rx) => catalog.get(rx)?.clone(),
                None => tx.clone(),
            };
            let pl_antenna = pair_antenna(&tx, &rx, spec.mixed)?.clone();
            pl_antenna.exponent()?;
            let label = if tx == rx {
                tx.name.clone()
            } else {
                format!("{}/{}", tx.name, rx.name)
            };
            Ok(Pair {
                tx,
                rx,
                label,
                pl_antenna,
            })
        })
        .collect()
}

fn base_scenario(spec: &SweepSpec, pair: &Pair, d: f64) -> Result<Scenario> {
    Ok(
        Scenario::new(d, 180.0, 0.0, pair.tx.clone(), pair.rx.clone())?
            .with_kappa(spec.kappa)?
            .with_grid(spec.grid_points)?
            .with_tx_frame(spec.tx_frame),
    )
}

/// Rows ordered by antenna, then distance, then `α`, then `β`, regardless
/// of how the work was scheduled.
pub fn run_sweep(
    spec: &SweepSpec,
    catalog: &AntennaCatalog,
    pdp: &PowerDelayProfile,
    cfg: &AssamConfig,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let pairs = resolve_pairs(spec, catalog)?;
    let distances = spec.distances.values()?;
    let jobs: Vec<(usize, f64)> = (0..pairs.len())
        .flat_map(|p| distances.iter().map(move |&d| (p, d)))
        .collect();

    let chunks: Vec<Vec<SweepRow>> = jobs
        .par_iter()
        .map(|&(p, d)| {
            let pair = &pairs[p];
            let model = CorrectionModel::new(&base_scenario(spec, pair, d)?, pdp)?;
            let pl0 = assam_pl0(&pair.pl_antenna, d, cfg)?;
            let mut rows = Vec::with_capacity(spec.alphas_deg.len() * spec.betas_deg.len());
            for &alpha in &spec.alphas_deg {
                let ks = model.correction_factors_for_betas(alpha, &spec.betas_deg)?;
                for (&beta, k) in spec.betas_deg.iter().zip(ks) {
                    rows.push(SweepRow {
                        antenna: pair.label.clone(),
                        alpha_deg: alpha,
                        beta_deg: beta,
                        result: PathLossResult::compose(d, pl0, k, cfg),
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub antenna: String,
    pub distance_m: f64,
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub k_linear: f64,
    pub k_oracle: f64,
    pub k_oracle_std_error: f64,
}

/// Deterministic `K` next to its Monte-Carlo estimate for every sweep tuple.
pub fn run_oracle_sweep(
    spec: &SweepSpec,
    catalog: &AntennaCatalog,
    pdp: &PowerDelayProfile,
    samples: u64,
    seed: u64,
) -> Result<Vec<OracleRow>> {
    spec.validate()?;
    let pairs = resolve_pairs(spec, catalog)?;
    let mut rows = Vec::new();
    for pair in &pairs {
        for d in spec.distances.values()? {
            let base = base_scenario(spec, pair, d)?;
            let model = CorrectionModel::new(&base, pdp)?;
            for &alpha in &spec.alphas_deg {
                for &beta in &spec.betas_deg {
                    let k = model.correction_factor(alpha, beta)?;
                    let est = mc_correction_factor(&OracleConfig {
                        samples,
                        seed,
                        scenario: base.clone().with_orientation(alpha, beta)?,
                        pdp: pdp.clone(),
                    })?;
                    rows.push(OracleRow {
                        antenna: pair.label.clone(),
                        distance_m: d,
                        alpha_deg: alpha,
                        beta_deg: beta,
                        k_linear: k.k,
                        k_oracle: est.k,
                        k_oracle_std_error: est.std_error,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// `printf("%.9g")`.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-4..9).contains(&exp) {
        trim(&format!("{:.*}", (8 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    }
}

pub fn write_csv<W: Write + ?Sized>(rows: &[SweepRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let r = &row.result;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.antenna,
            fmt_sig9(r.distance_m),
            fmt_sig9(row.alpha_deg),
            fmt_sig9(row.beta_deg),
            fmt_sig9(r.k_linear),
            fmt_sig9(r.pl0_db),
            fmt_sig9(r.pl_db),
            r.flags.k_floored
        )?;
    }
    Ok(())
}

pub fn write_oracle_csv<W: Write + ?Sized>(rows: &[OracleRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "{ORACLE_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.antenna,
            fmt_sig9(r.distance_m),
            fmt_sig9(r.alpha_deg),
            fmt_sig9(r.beta_deg),
            fmt_sig9(r.k_linear),
            fmt_sig9(r.k_oracle),
            fmt_sig9(r.k_oracle_std_error)
        )?;
    }
    Ok(())
}
