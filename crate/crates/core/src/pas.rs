//! Azimuth power angular spectrum (PAS) at the Rx and the orientation
//! correction factor `K(α, β) = P(α, β) / P(180°, 0°)`.
//!
//! The received spectrum has two parts:
//!
//! * the first time cluster (taps with no usable excess delay), scattered
//!   locally around the Rx with a von Mises AOA centred on the Tx direction
//!   and scaled by the Tx gain toward the Rx;
//! * one cluster per delayed tap, whose AOD density is the normalized Tx
//!   pattern and whose AOA density follows from the scattering ellipse.
//!
//! The sum is weighted by the Rx pattern and integrated over the AOA.
//!
//! Orientations use the global convention: `α` and `β` are measured
//! counterclockwise from the Rx->Tx direction, so `α = 180°, β = 0°` is the
//! boresight-aligned reference.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::antenna::{AntennaSpec, Pattern};
use crate::error::{Error, Result};
use crate::geometry::{build_ellipses, wrap_deg, Ellipse, EllipseSet, MIN_EXCESS_DELAY_S};
use crate::pdp::PowerDelayProfile;
use crate::special::bessel_i0_scaled;

pub const DEFAULT_KAPPA: f64 = 10.0;
pub const DEFAULT_GRID_POINTS: usize = 3601;
pub const MIN_GRID_POINTS: usize = 361;
/// Floor applied to `K` so the path loss stays finite.
pub const K_MIN: f64 = 1e-12;

/// Uniform periodic grid over `[-π, π]` with `points` nodes; the first and
/// last node are the same direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngularGrid {
    points: usize,
}

impl AngularGrid {
    pub fn new(points: usize) -> Result<Self> {
        if points < MIN_GRID_POINTS || points.is_multiple_of(2) {
            return Err(Error::InvalidScenario(format!(
                "grid needs an odd number of points >= {MIN_GRID_POINTS}, got {points}"
            )));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Number of distinct directions.
    pub fn cells(&self) -> usize {
        self.points - 1
    }

    pub fn step(&self) -> f64 {
        TAU / self.cells() as f64
    }

    /// Node `k`, symmetric about zero so that node `m + j` mirrors `m - j`.
    pub fn node(&self, k: usize) -> f64 {
        let mid = (self.cells() / 2) as f64;
        (k as f64 - mid) * self.step()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|k| self.node(k))
    }

    /// Periodic trapezoid rule over one turn of grid-sampled values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.points);
        let n = self.cells();
        let interior: f64 = values[1..n].iter().sum();
        self.step() * (interior + 0.5 * (values[0] + values[n]))
    }
}

/// Where the Tx pattern points when it illuminates the scattering ellipses.
///
/// `Mirrored` (default) reflects the Tx lobe across the perpendicular
/// bisector of the link, so the AOD density is centred at `θ_T = -α`; with
/// it, rotating either antenna away from the reference lowers `K`.
/// `Geometric` centres it at the physical boresight `θ_T = α - 180°`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TxAodFrame {
    #[default]
    Mirrored,
    Geometric,
}

impl TxAodFrame {
    /// AOD (Tx frame) at the centre of the delayed-cluster density.
    pub fn aod_boresight(self, alpha_rad: f64) -> f64 {
        match self {
            TxAodFrame::Mirrored => -alpha_rad,
            TxAodFrame::Geometric => alpha_rad - PI,
        }
    }
}

impl std::str::FromStr for TxAodFrame {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mirrored" => Ok(TxAodFrame::Mirrored),
            "geometric" => Ok(TxAodFrame::Geometric),
            other => Err(format!(
                "unknown Tx AOD frame {other:?} (mirrored|geometric)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub distance_m: f64,
    /// Tx boresight, wrapped to `(-180, 180]`.
    pub alpha_deg: f64,
    /// Rx boresight, wrapped to `(-180, 180]`.
    pub beta_deg: f64,
    pub tx_antenna: AntennaSpec,
    pub rx_antenna: AntennaSpec,
    /// Von Mises concentration of the local cluster.
    pub kappa: f64,
    pub grid_points: usize,
    pub tx_frame: TxAodFrame,
    /// Share of the first-cluster power carried by a direct ray at `φ = 0`.
    /// Zero for NLOS profiles.
    pub los_fraction: f64,
}

impl Scenario {
    pub fn new(
        distance_m: f64,
        alpha_deg: f64,
        beta_deg: f64,
        tx_antenna: AntennaSpec,
        rx_antenna: AntennaSpec,
    ) -> Result<Self> {
        let s = Self {
            distance_m,
            alpha_deg: wrap_deg(alpha_deg),
            beta_deg: wrap_deg(beta_deg),
            tx_antenna,
            rx_antenna,
            kappa: DEFAULT_KAPPA,
            grid_points: DEFAULT_GRID_POINTS,
            tx_frame: TxAodFrame::default(),
            los_fraction: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    /// Same antenna type at both ends.
    pub fn matched(
        distance_m: f64,
        alpha_deg: f64,
        beta_deg: f64,
        antenna: &AntennaSpec,
    ) -> Result<Self> {
        Self::new(
            distance_m,
            alpha_deg,
            beta_deg,
            antenna.clone(),
            antenna.clone(),
        )
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        self.kappa = kappa;
        self.validate()?;
        Ok(self)
    }

    pub fn with_grid(mut self, grid_points: usize) -> Result<Self> {
        self.grid_points = grid_points;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tx_frame(mut self, frame: TxAodFrame) -> Self {
        self.tx_frame = frame;
        self
    }

    pub fn with_los_fraction(mut self, fraction: f64) -> Result<Self> {
        self.los_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn with_orientation(mut self, alpha_deg: f64, beta_deg: f64) -> Result<Self> {
        self.alpha_deg = wrap_deg(alpha_deg);
        self.beta_deg = wrap_deg(beta_deg);
        self.validate()?;
        Ok(self)
    }

    pub fn with_distance(mut self, distance_m: f64) -> Result<Self> {
        self.distance_m = distance_m;
        self.validate()?;
        Ok(self)
    }

    /// The boresight-aligned reference with everything else unchanged.
    pub fn reference(&self) -> Self {
        Self {
            alpha_deg: 180.0,
            beta_deg: 0.0,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance_m > 0.0 && self.distance_m.is_finite()) {
            return Err(Error::InvalidDistance(self.distance_m));
        }
        if !(self.alpha_deg.is_finite() && self.beta_deg.is_finite()) {
            return Err(Error::InvalidScenario("orientation must be finite".into()));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::OutOfRange {
                what: "kappa",
                value: self.kappa,
                range: "[0, inf)",
            });
        }
        if !(0.0..=1.0).contains(&self.los_fraction) {
            return Err(Error::OutOfRange {
                what: "los_fraction",
                value: self.los_fraction,
                range: "[0, 1]",
            });
        }
        AngularGrid::new(self.grid_points)?;
        Ok(())
    }

    pub fn grid(&self) -> AngularGrid {
        AngularGrid::new(self.grid_points).expect("validated")
    }

    /// Gain of the Tx toward the Rx, `g_T(α - 180°)`.
    pub fn tx_gain_toward_rx(&self) -> f64 {
        self.tx_antenna
            .pattern(self.alpha_deg.to_radians())
            .gain(PI)
    }

    /// Tx pattern as seen in the AOD frame of the ellipses.
    pub fn aod_pattern(&self) -> Pattern {
        let pattern = self.tx_antenna.pattern(0.0);
        pattern.with_boresight(self.tx_frame.aod_boresight(self.alpha_deg.to_radians()))
    }

    /// Rx pattern in the AOA frame.
    pub fn rx_pattern(&self) -> Pattern {
        self.rx_antenna.pattern(self.beta_deg.to_radians())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum {
    pub grid_deg: Vec<f64>,
    /// Power per radian at each node of `grid_deg`.
    pub density: Vec<f64>,
    /// Point components `(angle_deg, power)`.
    pub discrete_terms: Vec<(f64, f64)>,
}

/// `exp(κ cos φ) / (2π I0(κ))` at the grid nodes.
pub fn local_cluster_density(kappa: f64, grid: &AngularGrid) -> Vec<f64> {
    let norm = TAU * bessel_i0_scaled(kappa);
    grid.nodes()
        .map(|phi| (kappa * (phi.cos() - 1.0)).exp() / norm)
        .collect()
}

/// AOA density of the scatterers on `ellipse` when departure angles follow
/// the normalized `aod_pattern`.
///
/// Each AOD node carries its probability mass to the AOA it maps to, split
/// linearly between the two neighbouring AOA nodes. Total mass is then
/// pinned to exactly one.
pub fn delayed_cluster_density(
    ellipse: &Ellipse,
    aod_pattern: &Pattern,
    grid: &AngularGrid,
) -> Vec<f64> {
    let cells = grid.cells();
    let h = grid.step();
    let mut mass = vec![0.0; cells];
    for k in 0..cells {
        let w = aod_pattern.gain(grid.node(k));
        if w == 0.0 {
            continue;
        }
        let u = (ellipse.aod_to_aoa(grid.node(k)) + PI) / h;
        let lower = u.floor();
        let frac = u - lower;
        let i = (lower as usize) % cells;
        let j = (i + 1) % cells;
        mass[i] += w * (1.0 - frac);
        mass[j] += w * frac;
    }

    // node 0 is -π; the binning above indexed from -π as well
    let deposited: f64 = mass.iter().sum();
    let mut density: Vec<f64> = mass.iter().map(|m| m / (deposited * h)).collect();
    density.push(density[0]);
    density
}

/// Spectrum before the Rx pattern is applied, for a fixed Tx orientation.
#[derive(Debug, Clone)]
struct IncidentSpectrum {
    density: Vec<f64>,
    /// Direct ray power at `φ = 0`, Tx gain included.
    los_power: f64,
}

#[derive(Debug, Clone)]
struct Clusters {
    local_power: f64,
    delayed: Vec<(f64, Ellipse)>,
}

impl Clusters {
    fn new(pdp: &PowerDelayProfile, ellipses: &EllipseSet) -> Result<Self> {
        if pdp.taps.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let total = pdp.total_power();
        let local_power = pdp
            .taps
            .iter()
            .filter(|t| t.excess_delay_s < MIN_EXCESS_DELAY_S)
            .map(|t| t.power_lin)
            .sum::<f64>()
            / total;
        let delayed = ellipses
            .iter()
            .map(|e| {
                let tap = pdp.taps.get(e.tap_index).ok_or_else(|| {
                    Error::InvalidScenario(format!("ellipse refers to missing tap {}", e.tap_index))
                })?;
                Ok((tap.power_lin / total, *e))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            local_power,
            delayed,
        })
    }
}

fn incident_spectrum(
    scenario: &Scenario,
    clusters: &Clusters,
    local: &[f64],
    grid: &AngularGrid,
) -> IncidentSpectrum {
    let g_tx = scenario.tx_gain_toward_rx();
    let aod_pattern = scenario.aod_pattern();
    let scattered = clusters.local_power * (1.0 - scenario.los_fraction) * g_tx;

    let per_tap: Vec<Vec<f64>> = clusters
        .delayed
        .par_iter()
        .map(|(power, ellipse)| {
            let mut d = delayed_cluster_density(ellipse, &aod_pattern, grid);
            d.iter_mut().for_each(|v| *v *= power);
            d
        })
        .collect();

    let mut density: Vec<f64> = local.iter().map(|v| v * scattered).collect();
    for tap in &per_tap {
        for (acc, v) in density.iter_mut().zip(tap) {
            *acc += v;
        }
    }
    IncidentSpectrum {
        density,
        los_power: clusters.local_power * scenario.los_fraction * g_tx,
    }
}

fn received_spectrum(
    incident: &IncidentSpectrum,
    rx: &Pattern,
    grid: &AngularGrid,
) -> AngularSpectrum {
    let density = grid
        .nodes()
        .zip(&incident.density)
        .map(|(phi, v)| v * rx.gain(phi))
        .collect();
    let discrete_terms = if incident.los_power > 0.0 {
        vec![(0.0, incident.los_power * rx.gain(0.0))]
    } else {
        Vec::new()
    };
    AngularSpectrum {
        grid_deg: grid.nodes().map(f64::to_degrees).collect(),
        density,
        discrete_terms,
    }
}

/// PAS at the Rx for `scenario`. `pdp` must be normalized and `ellipses`
/// built from it for `scenario.distance_m`.
pub fn compose_pas(
    scenario: &Scenario,
    pdp: &PowerDelayProfile,
    ellipses: &EllipseSet,
) -> Result<AngularSpectrum> {
    scenario.validate()?;
    if (ellipses.link_distance_m - scenario.distance_m).abs() > 1e-9 * scenario.distance_m {
        return Err(Error::InvalidScenario(format!(
            "ellipses built for {} m, scenario at {} m",
            ellipses.link_distance_m, scenario.distance_m
        )));
    }
    let grid = scenario.grid();
    let clusters = Clusters::new(pdp, ellipses)?;
    let local = local_cluster_density(scenario.kappa, &grid);
    let incident = incident_spectrum(scenario, &clusters, &local, &grid);
    Ok(received_spectrum(&incident, &scenario.rx_pattern(), &grid))
}

/// Periodic trapezoid over the density plus all discrete terms.
pub fn total_power(spectrum: &AngularSpectrum) -> f64 {
    let n = spectrum.density.len();
    let continuous = if n >= 2 {
        let h = TAU / (n - 1) as f64;
        let interior: f64 = spectrum.density[1..n - 1].iter().sum();
        h * (interior + 0.5 * (spectrum.density[0] + spectrum.density[n - 1]))
    } else {
        0.0
    };
    continuous + spectrum.discrete_terms.iter().map(|(_, p)| p).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionFactor {
    /// `P / P0`, floored at [`K_MIN`].
    pub k: f64,
    pub floored: bool,
    pub power: f64,
    pub reference_power: f64,
}

impl CorrectionFactor {
    fn from_powers(power: f64, reference_power: f64) -> Self {
        let raw = power / reference_power;
        let floored = !(raw >= K_MIN);
        Self {
            k: if floored { K_MIN } else { raw },
            floored,
            power,
            reference_power,
        }
    }
}

/// Everything about a link that does not depend on orientation, with the
/// reference power computed once. Use it to evaluate many `(α, β)` pairs.
#[derive(Debug, Clone)]
pub struct CorrectionModel {
    base: Scenario,
    grid: AngularGrid,
    clusters: Clusters,
    local: Vec<f64>,
    reference_power: f64,
}

impl CorrectionModel {
    /// Orientation fields of `scenario` are ignored.
    pub fn new(scenario: &Scenario, pdp: &PowerDelayProfile) -> Result<Self> {
        scenario.validate()?;
        let ellipses = build_ellipses(pdp, scenario.distance_m)?;
        let grid = scenario.grid();
        let clusters = Clusters::new(pdp, &ellipses)?;
        let local = local_cluster_density(scenario.kappa, &grid);
        let base = scenario.reference();
        let mut model = Self {
            base,
            grid,
            clusters,
            local,
            reference_power: f64::NAN,
        };
        model.reference_power = model.power(180.0, 0.0)?;
        Ok(model)
    }

    pub fn scenario(&self, alpha_deg: f64, beta_deg: f64) -> Result<Scenario> {
        self.base.clone().with_orientation(alpha_deg, beta_deg)
    }

    pub fn spectrum(&self, alpha_deg: f64, beta_deg: f64) -> Result<AngularSpectrum> {
        let s = self.scenario(alpha_deg, beta_deg)?;
        let incident = incident_spectrum(&s, &self.clusters, &self.local, &self.grid);
        Ok(received_spectrum(&incident, &s.rx_pattern(), &self.grid))
    }

    pub fn power(&self, alpha_deg: f64, beta_deg: f64) -> Result<f64> {
        Ok(total_power(&self.spectrum(alpha_deg, beta_deg)?))
    }

    pub fn reference_power(&self) -> f64 {
        self.reference_power
    }

    pub fn correction_factor(&self, alpha_deg: f64, beta_deg: f64) -> Result<CorrectionFactor> {
        let p = self.power(alpha_deg, beta_deg)?;
        Ok(CorrectionFactor::from_powers(p, self.reference_power))
    }

    /// `K` for several Rx orientations sharing one Tx orientation.
    pub fn correction_factors_for_betas(
        &self,
        alpha_deg: f64,
        betas_deg: &[f64],
    ) -> Result<Vec<CorrectionFactor>> {
        let s = self.scenario(alpha_deg, 0.0)?;
        let incident = incident_spectrum(&s, &self.clusters, &self.local, &self.grid);
        betas_deg
            .iter()
            .map(|&beta| {
                let rx = self.base.rx_antenna.pattern(wrap_deg(beta).to_radians());
                let p = total_power(&received_spectrum(&incident, &rx, &self.grid));
                Ok(CorrectionFactor::from_powers(p, self.reference_power))
            })
            .collect()
    }
}

/// `K(α, β)` for `scenario`; builds the ellipses and the reference spectrum
/// on the same grid.
pub fn correction_factor(scenario: &Scenario, pdp: &PowerDelayProfile) -> Result<CorrectionFactor> {
    CorrectionModel::new(scenario, pdp)?.correction_factor(scenario.alpha_deg, scenario.beta_deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::{sigma_from_hpbw, AntennaCatalog};
    use crate::pdp::{Tap, TDL_B_DS_NS};
    use approx::assert_relative_eq;

    fn cr() -> AntennaSpec {
        AntennaCatalog::builtin().get("CR").unwrap().clone()
    }

    fn omni() -> AntennaSpec {
        AntennaSpec::new("omni", Some(2.0), None, None).unwrap()
    }

    fn tdl_b() -> PowerDelayProfile {
        PowerDelayProfile::tdl_b(TDL_B_DS_NS).unwrap()
    }

    #[test]
    fn grid_layout() {
        let g = AngularGrid::new(361).unwrap();
        assert_eq!(g.node(0), -PI);
        assert_eq!(g.node(180), 0.0);
        assert_eq!(g.node(360), PI);
        assert_eq!(g.node(170), -g.node(190));
        assert!(AngularGrid::new(360).is_err());
        assert!(AngularGrid::new(359).is_err());
        let ones = vec![1.0 / TAU; 361];
        assert_relative_eq!(g.integrate(&ones), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn von_mises_cases() {
        let g = AngularGrid::new(DEFAULT_GRID_POINTS).unwrap();
        let uniform = local_cluster_density(0.0, &g);
        assert!(uniform.iter().all(|v| (v - 1.0 / TAU).abs() < 1e-15));

        let f = local_cluster_density(10.0, &g);
        let mid = g.cells() / 2;
        // e^10 / (2π I0(10)), I0(10) = 2815.716628466254
        assert_relative_eq!(
            f[mid],
            10f64.exp() / (TAU * 2_815.716_628_466_254),
            max_relative = 1e-12
        );
        assert_relative_eq!(g.integrate(&f), 1.0, epsilon = 1e-6);
        for j in 1..mid {
            assert_eq!(f[mid + j], f[mid - j]);
        }
    }

    #[test]
    fn delayed_density_symmetry() {
        let g = AngularGrid::new(DEFAULT_GRID_POINTS).unwrap();
        let e = Ellipse::new(100.0, 100e-9, 1).unwrap();
        let mid = g.cells() / 2;

        let f = delayed_cluster_density(&e, &Pattern::omnidirectional(), &g);
        assert_relative_eq!(g.integrate(&f), 1.0, epsilon = 1e-12);
        for j in 1..mid {
            assert_relative_eq!(f[mid + j], f[mid - j], max_relative = 1e-9, epsilon = 1e-15);
        }

        let sigma = sigma_from_hpbw(58.0).unwrap();
        for boresight in [0.0, PI] {
            let f = delayed_cluster_density(&e, &Pattern::gaussian(sigma, boresight), &g);
            assert_relative_eq!(g.integrate(&f), 1.0, epsilon = 1e-12);
            for j in 1..mid {
                assert_relative_eq!(f[mid + j], f[mid - j], max_relative = 1e-9, epsilon = 1e-15);
            }
        }
        assert!(f.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn omni_total_power_is_one() {
        let pdp = tdl_b();
        for d in [10.0, 100.0, 400.0] {
            let s = Scenario::new(d, 180.0, 0.0, cr(), omni()).unwrap();
            let e = build_ellipses(&pdp, d).unwrap();
            let pas = compose_pas(&s, &pdp, &e).unwrap();
            assert_relative_eq!(total_power(&pas), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn total_power_simple_spectra() {
        let grid: Vec<f64> = AngularGrid::new(361)
            .unwrap()
            .nodes()
            .map(f64::to_degrees)
            .collect();
        let flat = AngularSpectrum {
            grid_deg: grid.clone(),
            density: vec![1.0 / TAU; 361],
            discrete_terms: vec![],
        };
        assert_relative_eq!(total_power(&flat), 1.0, epsilon = 1e-9);
        let spike = AngularSpectrum {
            grid_deg: grid,
            density: vec![0.0; 361],
            discrete_terms: vec![(0.0, 0.7)],
        };
        assert_eq!(total_power(&spike), 0.7);
    }

    #[test]
    fn reference_is_unity_and_symmetric() {
        let pdp = tdl_b();
        let s = Scenario::matched(100.0, 180.0, 0.0, &cr()).unwrap();
        let k = correction_factor(&s, &pdp).unwrap();
        assert_eq!(k.k, 1.0);
        assert!(!k.floored);

        let e = build_ellipses(&pdp, 100.0).unwrap();
        let pas = compose_pas(&s, &pdp, &e).unwrap();
        let mid = pas.density.len() / 2;
        for j in 1..mid {
            assert_relative_eq!(
                pas.density[mid + j],
                pas.density[mid - j],
                max_relative = 1e-9,
                epsilon = 1e-15
            );
        }
        assert_eq!(total_power(&pas), k.reference_power);
    }

    #[test]
    fn rotating_rx_loses_power() {
        let pdp = tdl_b();
        let model =
            CorrectionModel::new(&Scenario::matched(100.0, 180.0, 0.0, &cr()).unwrap(), &pdp)
                .unwrap();
        let k90 = model.correction_factor(180.0, 90.0).unwrap();
        assert!(k90.k < 1.0);
        let batch = model
            .correction_factors_for_betas(180.0, &[0.0, 90.0])
            .unwrap();
        assert_eq!(batch[0].k, 1.0);
        assert_eq!(batch[1].k, k90.k);
    }

    #[test]
    fn omni_rx_closed_form() {
        // g_R ≡ 1: K = p0 g_T(α - 180°) + Σ p_i
        let pdp = tdl_b();
        let s = Scenario::new(100.0, 120.0, 30.0, cr(), omni()).unwrap();
        let k = correction_factor(&s, &pdp).unwrap().k;
        let p0 = pdp.taps[0].power_lin;
        let g = s.tx_gain_toward_rx();
        assert_relative_eq!(k, p0 * g + (1.0 - p0), max_relative = 1e-9);
    }

    #[test]
    fn los_term() {
        let pdp =
            PowerDelayProfile::from_taps(vec![Tap::new(0.0, 1.0), Tap::new(50e-9, 1.0)]).unwrap();
        let s = Scenario::new(100.0, 180.0, 0.0, cr(), omni())
            .unwrap()
            .with_los_fraction(0.4)
            .unwrap();
        let e = build_ellipses(&pdp, 100.0).unwrap();
        let pas = compose_pas(&s, &pdp, &e).unwrap();
        assert_eq!(pas.discrete_terms.len(), 1);
        assert_relative_eq!(pas.discrete_terms[0].1, 0.2, max_relative = 1e-12);
        assert_relative_eq!(total_power(&pas), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn floor_applies() {
        let k = CorrectionFactor::from_powers(1e-20, 1.0);
        assert!(k.floored);
        assert_eq!(k.k, K_MIN);
        assert!(!CorrectionFactor::from_powers(0.5, 1.0).floored);
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario::matched(0.0, 180.0, 0.0, &cr()).is_err());
        let s = Scenario::matched(50.0, -180.0, 540.0, &cr()).unwrap();
        assert_eq!(s.alpha_deg, 180.0);
        assert_eq!(s.beta_deg, 180.0);
        assert!(s.clone().with_kappa(-1.0).is_err());
        assert!(s.clone().with_grid(1000).is_err());
        assert!(s.clone().with_los_fraction(1.5).is_err());
        let e = build_ellipses(&tdl_b(), 60.0).unwrap();
        assert!(compose_pas(&s, &tdl_b(), &e).is_err());
    }
}
