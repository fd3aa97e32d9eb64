//! Log-distance path loss for boresight-aligned antenna pairs and its
//! orientation-corrected form `PL(α, β) = PL0 - 10 log10 K(α, β)`.

use std::path::Path;

use serde::Deserialize;

use crate::antenna::AntennaSpec;
use crate::error::{Error, Result};
use crate::pas::{CorrectionFactor, CorrectionModel, Scenario};
use crate::pdp::PowerDelayProfile;

/// Reference distance, reference loss and validity window of the empirical
/// model. The defaults are the published 2.4 GHz values; other values can
/// only come from an explicit config file.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssamConfig {
    pub d0_m: f64,
    pub pl_d0_ref_db: f64,
    pub valid_range_m: [f64; 2],
    pub fc_hz: f64,
}

impl Default for AssamConfig {
    fn default() -> Self {
        Self {
            d0_m: 5.0,
            pl_d0_ref_db: 53.1,
            valid_range_m: [5.0, 400.0],
            fc_hz: 2.4e9,
        }
    }
}

impl AssamConfig {
    /// TOML with all four keys.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: AssamConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        let [lo, hi] = self.valid_range_m;
        let ok = self.d0_m > 0.0
            && self.d0_m.is_finite()
            && self.pl_d0_ref_db.is_finite()
            && lo > 0.0
            && lo <= hi
            && hi.is_finite()
            && self.fc_hz > 0.0
            && self.fc_hz.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("inconsistent values {self:?}")))
        }
    }

    pub fn in_valid_range(&self, distance_m: f64) -> bool {
        let [lo, hi] = self.valid_range_m;
        (lo..=hi).contains(&distance_m)
    }
}

/// `PL(d0)_ref + 10 n log10(d / d0)` in dB.
pub fn assam_pl0(antenna: &AntennaSpec, distance_m: f64, cfg: &AssamConfig) -> Result<f64> {
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(Error::InvalidDistance(distance_m));
    }
    let n = antenna.exponent()?;
    Ok(cfg.pl_d0_ref_db + 10.0 * n * (distance_m / cfg.d0_m).log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathLossFlags {
    pub k_floored: bool,
    /// Distance outside the model's validity window; the value is an
    /// extrapolation.
    pub out_of_range: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossResult {
    pub distance_m: f64,
    pub pl0_db: f64,
    pub k_linear: f64,
    pub pl_db: f64,
    pub flags: PathLossFlags,
}

impl PathLossResult {
    pub fn compose(distance_m: f64, pl0_db: f64, k: CorrectionFactor, cfg: &AssamConfig) -> Self {
        Self {
            distance_m,
            pl0_db,
            k_linear: k.k,
            pl_db: pl0_db - 10.0 * k.k.log10(),
            flags: PathLossFlags {
                k_floored: k.floored,
                out_of_range: !cfg.in_valid_range(distance_m),
            },
        }
    }
}

/// How to pick the exponent when Tx and Rx types differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixedPairs {
    #[default]
    Reject,
    /// Use the Tx antenna's exponent.
    UseTx,
}

/// Exponent-bearing antenna for the pair, per `mixed`.
pub fn pair_antenna<'a>(
    tx: &'a AntennaSpec,
    rx: &AntennaSpec,
    mixed: MixedPairs,
) -> Result<&'a AntennaSpec> {
    if tx.name.eq_ignore_ascii_case(&rx.name) && tx == rx {
        return Ok(tx);
    }
    match mixed {
        MixedPairs::Reject => Err(Error::MixedAntennaTypes {
            tx: tx.name.clone(),
            rx: rx.name.clone(),
        }),
        MixedPairs::UseTx => Ok(tx),
    }
}

/// Orientation-corrected path loss for `scenario`.
pub fn modified_pl(
    scenario: &Scenario,
    pdp: &PowerDelayProfile,
    cfg: &AssamConfig,
    mixed: MixedPairs,
) -> Result<PathLossResult> {
    let antenna = pair_antenna(&scenario.tx_antenna, &scenario.rx_antenna, mixed)?;
    let pl0 = assam_pl0(antenna, scenario.distance_m, cfg)?;
    let model = CorrectionModel::new(scenario, pdp)?;
    let k = model.correction_factor(scenario.alpha_deg, scenario.beta_deg)?;
    Ok(PathLossResult::compose(scenario.distance_m, pl0, k, cfg))
}
