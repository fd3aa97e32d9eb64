//! Confocal scattering ellipses and the AOD -> AOA mapping.
//!
//! Frame: Tx at the origin, Rx at `(d, 0)`. The angle of departure `θ_T` is
//! measured at the Tx, counterclockwise from the Tx->Rx direction. The angle
//! of arrival `φ` is measured at the Rx, counterclockwise from the Rx->Tx
//! direction. Both are reported in `(-π, π]`.
//!
//! With these conventions the forward ray `θ_T = 0` hits the ellipse beyond
//! the Rx, so the Rx sees that scatterer straight behind it (`φ = π`), while
//! `θ_T = π` lands between the foci on the Tx side and arrives at `φ = 0`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::pdp::PowerDelayProfile;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Taps with excess delay below this merge into the local cluster.
pub const MIN_EXCESS_DELAY_S: f64 = 0.1e-9;

/// Wraps an angle in radians to `(-π, π]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    // rem_euclid can return TAU itself for tiny negative inputs
    if a <= -PI {
        a += TAU;
    }
    a
}

/// Wraps an angle in degrees to `(-180, 180]`.
pub fn wrap_deg(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(360.0);
    if a > 180.0 {
        a -= 360.0;
    }
    if a <= -180.0 {
        a += 360.0;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub semi_major_m: f64,
    pub semi_minor_m: f64,
    /// Half the Tx-Rx distance.
    pub focal_half_m: f64,
    pub eccentricity: f64,
    pub tap_index: usize,
}

impl Ellipse {
    /// Ellipse of all scatterer positions whose path Tx -> S -> Rx is longer
    /// than the direct path by `c * excess_delay_s`.
    pub fn new(distance_m: f64, excess_delay_s: f64, tap_index: usize) -> Result<Self> {
        if !(distance_m > 0.0 && distance_m.is_finite()) {
            return Err(Error::InvalidDistance(distance_m));
        }
        if !(excess_delay_s >= MIN_EXCESS_DELAY_S && excess_delay_s.is_finite()) {
            return Err(Error::DegenerateEllipse {
                delay_s: excess_delay_s,
            });
        }
        let a = 0.5 * (distance_m + SPEED_OF_LIGHT * excess_delay_s);
        let c = 0.5 * distance_m;
        Ok(Self {
            semi_major_m: a,
            semi_minor_m: ((a - c) * (a + c)).sqrt(),
            focal_half_m: c,
            eccentricity: c / a,
            tap_index,
        })
    }

    pub fn link_distance_m(&self) -> f64 {
        2.0 * self.focal_half_m
    }

    fn semi_latus_rectum(&self) -> f64 {
        let a = self.semi_major_m;
        let c = self.focal_half_m;
        (a - c) * (a + c) / a
    }

    /// Distance from the Tx focus to the scatterer hit at AOD `aod`.
    pub fn focal_radius_tx(&self, aod: f64) -> f64 {
        self.semi_latus_rectum() / (1.0 - self.eccentricity * aod.cos())
    }

    /// Distance from the scatterer to the Rx focus, `2a - r_T`.
    pub fn focal_radius_rx(&self, aod: f64) -> f64 {
        2.0 * self.semi_major_m - self.focal_radius_tx(aod)
    }

    /// Cartesian scatterer position in the Tx-origin frame.
    pub fn scatterer(&self, aod: f64) -> (f64, f64) {
        let r = self.focal_radius_tx(aod);
        (r * aod.cos(), r * aod.sin())
    }

    pub fn aod_to_aoa(&self, aod: f64) -> f64 {
        let (sx, sy) = self.scatterer(aod);
        let vx = sx - self.link_distance_m();
        // Rx->S relative to the Rx->Tx direction (-x): rotate by π.
        wrap_pi((-sy).atan2(-vx))
    }

    /// `|dφ/dθ_T|`. Equal tangent angles at the two foci reduce it to `r_T / r_R`.
    pub fn aoa_jacobian(&self, aod: f64) -> f64 {
        let r_tx = self.focal_radius_tx(aod);
        r_tx / (2.0 * self.semi_major_m - r_tx)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipseSet {
    pub ellipses: Vec<Ellipse>,
    pub link_distance_m: f64,
}

impl EllipseSet {
    pub fn len(&self) -> usize {
        self.ellipses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ellipses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Ellipse> {
        self.ellipses.iter()
    }
}

/// One ellipse per tap whose excess delay clears [`MIN_EXCESS_DELAY_S`].
/// `tap_index` refers back to the tap's position in `pdp`.
pub fn build_ellipses(pdp: &PowerDelayProfile, distance_m: f64) -> Result<EllipseSet> {
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(Error::InvalidDistance(distance_m));
    }
    if pdp.taps.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let ellipses: Vec<Ellipse> = pdp
        .taps
        .iter()
        .enumerate()
        .filter(|(_, tap)| tap.excess_delay_s >= MIN_EXCESS_DELAY_S)
        .map(|(i, tap)| Ellipse::new(distance_m, tap.excess_delay_s, i))
        .collect::<Result<_>>()?;
    if ellipses.is_empty() {
        return Err(Error::NoDelayedTaps {
            threshold_ns: MIN_EXCESS_DELAY_S * 1e9,
        });
    }
    Ok(EllipseSet {
        ellipses,
        link_distance_m: distance_m,
    })
}
