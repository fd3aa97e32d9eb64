//! Orientation-aware path loss.
//!
//! The empirical log-distance model assumes the two antennas point at each
//! other. For any other pair of orientations the loss is corrected by
//! `K(α, β)`, the ratio of total received power at that orientation to the
//! aligned one, both taken from an azimuth multi-elliptical channel model
//! driven by a power delay profile and Gaussian main-lobe antenna patterns.
//!
//! ```
//! use mcm_pathloss::{AntennaCatalog, AssamConfig, MixedPairs, PowerDelayProfile, Scenario};
//!
//! let cr = AntennaCatalog::builtin().get("CR").unwrap().clone();
//! let pdp = PowerDelayProfile::tdl_b(363.0).unwrap();
//! let s = Scenario::matched(100.0, 180.0, 60.0, &cr).unwrap();
//! let pl = mcm_pathloss::modified_pl(&s, &pdp, &AssamConfig::default(), MixedPairs::Reject).unwrap();
//! assert!(pl.pl_db > pl.pl0_db);
//! ```

pub mod antenna;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod pas;
pub mod pathloss;
pub mod pdp;
pub mod special;
pub mod sweep;

pub use antenna::{
    builtin_catalog, sigma_from_hpbw, AntennaCatalog, AntennaSpec, Pattern, PatternKind,
};
pub use error::{Error, Result};
pub use geometry::{build_ellipses, Ellipse, EllipseSet};
pub use oracle::{mc_correction_factor, OracleConfig, OracleEstimate};
pub use pas::{
    compose_pas, correction_factor, delayed_cluster_density, local_cluster_density, total_power,
    AngularGrid, AngularSpectrum, CorrectionFactor, CorrectionModel, Scenario, TxAodFrame,
};
pub use pathloss::{assam_pl0, modified_pl, AssamConfig, MixedPairs, PathLossResult};
pub use pdp::{normalize, parse_pdp, DelayUnit, PowerDelayProfile, Tap};
pub use sweep::{preset, run_sweep, DistanceRange, SweepSpec};
