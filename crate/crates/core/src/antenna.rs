//! Antenna catalog and normalized azimuth power patterns.
//!
//! Directional antennas are modelled by their main lobe only: a Gaussian in
//! the wrapped angular offset from boresight, scaled so the peak is exactly 1.
//! There is no side-lobe floor and no back lobe.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::wrap_pi;

const BUILTIN_CATALOG: &str = include_str!("../data/antennas.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaSpec {
    pub name: String,
    /// Log-distance exponent for matched pairs of this type. `None` when the
    /// catalog does not carry one (the reference dipole ships that way).
    pub path_loss_exponent: Option<f64>,
    /// Azimuth half-power beamwidth; `None` for omnidirectional antennas.
    pub hpbw_az_deg: Option<f64>,
    pub gain_dbi: Option<f64>,
}

impl AntennaSpec {
    pub fn new(
        name: impl Into<String>,
        path_loss_exponent: Option<f64>,
        hpbw_az_deg: Option<f64>,
        gain_dbi: Option<f64>,
    ) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            path_loss_exponent,
            hpbw_az_deg,
            gain_dbi,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains([',', '\n', '#']) {
            return Err(Error::InvalidScenario(format!(
                "bad antenna name {:?}",
                self.name
            )));
        }
        if let Some(n) = self.path_loss_exponent {
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::OutOfRange {
                    what: "path-loss exponent",
                    value: n,
                    range: "(0, inf)",
                });
            }
        }
        if let Some(hpbw) = self.hpbw_az_deg {
            sigma_from_hpbw(hpbw)?;
        }
        if let Some(g) = self.gain_dbi {
            if !g.is_finite() {
                return Err(Error::OutOfRange {
                    what: "gain",
                    value: g,
                    range: "finite dBi",
                });
            }
        }
        Ok(())
    }

    pub fn exponent(&self) -> Result<f64> {
        self.path_loss_exponent
            .ok_or_else(|| Error::MissingExponent(self.name.clone()))
    }

    pub fn is_omnidirectional(&self) -> bool {
        self.hpbw_az_deg.is_none()
    }

    /// Azimuth pattern with its boresight at `boresight_rad`.
    pub fn pattern(&self, boresight_rad: f64) -> Pattern {
        match self.hpbw_az_deg {
            None => Pattern::omnidirectional(),
            Some(hpbw) => Pattern::gaussian(
                sigma_from_hpbw(hpbw).expect("validated on construction"),
                boresight_rad,
            ),
        }
    }
}

/// Standard deviation of the Gaussian main lobe whose power falls to one
/// half at `±hpbw/2`.
pub fn sigma_from_hpbw(hpbw_deg: f64) -> Result<f64> {
    if !(hpbw_deg > 0.0 && hpbw_deg < 360.0) {
        return Err(Error::OutOfRange {
            what: "HPBW",
            value: hpbw_deg,
            range: "(0, 360) deg",
        });
    }
    Ok(hpbw_deg.to_radians() / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatternKind {
    Omnidirectional,
    Gaussian { sigma_rad: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub boresight_rad: f64,
}

impl Pattern {
    pub fn omnidirectional() -> Self {
        Self {
            kind: PatternKind::Omnidirectional,
            boresight_rad: 0.0,
        }
    }

    pub fn gaussian(sigma_rad: f64, boresight_rad: f64) -> Self {
        assert!(sigma_rad > 0.0, "gaussian pattern needs sigma > 0");
        Self {
            kind: PatternKind::Gaussian { sigma_rad },
            boresight_rad,
        }
    }

    pub fn with_boresight(self, boresight_rad: f64) -> Self {
        Self {
            boresight_rad,
            ..self
        }
    }

    /// Normalized power gain toward `angle`, in `(0, 1]`.
    pub fn gain(&self, angle: f64) -> f64 {
        match self.kind {
            PatternKind::Omnidirectional => 1.0,
            PatternKind::Gaussian { sigma_rad } => {
                let offset = wrap_pi(angle - self.boresight_rad);
                (-0.5 * (offset / sigma_rad).powi(2)).exp()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaCatalog {
    entries: Vec<AntennaSpec>,
}

impl AntennaCatalog {
    /// The shipped catalog: reference dipole, corner reflector, parabolic grid.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOG).expect("builtin catalog parses")
    }

    pub fn from_entries(entries: Vec<AntennaSpec>) -> Self {
        Self { entries }
    }

    /// Parses `name,n,hpbw_deg,gain_dbi?` records. Blank lines and lines
    /// starting with `#` are skipped; empty fields mean "absent".
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<AntennaSpec> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(Error::parse(
                    line_no,
                    format!("expected 3 or 4 fields, found {}", fields.len()),
                ));
            }
            let opt = |i: usize, what: &str| -> Result<Option<f64>> {
                match fields.get(i).copied().unwrap_or("") {
                    "" => Ok(None),
                    s => s
                        .parse::<f64>()
                        .map(Some)
                        .map_err(|_| Error::parse(line_no, format!("bad {what} {s:?}"))),
                }
            };
            let spec = AntennaSpec::new(
                fields[0],
                opt(1, "exponent")?,
                opt(2, "hpbw")?,
                opt(3, "gain")?,
            )
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
            if entries
                .iter()
                .any(|e| e.name.eq_ignore_ascii_case(&spec.name))
            {
                return Err(Error::parse(
                    line_no,
                    format!("duplicate antenna {:?}", spec.name),
                ));
            }
            entries.push(spec);
        }
        Ok(Self { entries })
    }

    /// Canonical text form; `parse(to_text())` reproduces the catalog.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# name,n,hpbw_deg,gain_dbi\n");
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.name,
                fmt(e.path_loss_exponent),
                fmt(e.hpbw_az_deg),
                fmt(e.gain_dbi)
            );
        }
        out
    }

    /// Case-insensitive lookup.
    pub fn get(&self, name: &str) -> Result<&AntennaSpec> {
        self.entries
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownAntenna(name.to_string()))
    }

    pub fn entries(&self) -> &[AntennaSpec] {
        &self.entries
    }
}

pub fn builtin_catalog() -> Vec<AntennaSpec> {
    AntennaCatalog::builtin().entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn sigma_for_shipped_beamwidths() {
        assert_relative_eq!(
            sigma_from_hpbw(58.0).unwrap().to_degrees(),
            24.630,
            epsilon = 1e-3
        );
        assert_relative_eq!(
            sigma_from_hpbw(10.0).unwrap().to_degrees(),
            4.2467,
            epsilon = 1e-4
        );
        assert!(sigma_from_hpbw(0.0).is_err());
        assert!(sigma_from_hpbw(360.0).is_err());
        assert!(sigma_from_hpbw(f64::NAN).is_err());
    }

    #[test]
    fn half_power_at_half_beamwidth() {
        for hpbw in [1.0, 10.0, 58.0, 120.0, 300.0] {
            let p = Pattern::gaussian(sigma_from_hpbw(hpbw).unwrap(), 0.3);
            let half = (hpbw / 2.0).to_radians();
            assert_relative_eq!(p.gain(0.3 + half), 0.5, max_relative = 1e-12);
            assert_relative_eq!(p.gain(0.3 - half), 0.5, max_relative = 1e-12);
            assert_eq!(p.gain(0.3), 1.0);
        }
        assert_eq!(Pattern::omnidirectional().gain(1.234), 1.0);
    }

    #[test]
    fn builtin_entries() {
        let cat = AntennaCatalog::builtin();
        assert_eq!(cat.entries().len(), 3);
        let cr = cat.get("CR").unwrap();
        assert_eq!(cr.path_loss_exponent, Some(5.28));
        assert_eq!(cr.hpbw_az_deg, Some(58.0));
        let pg = cat.get("pg").unwrap();
        assert_eq!(pg.path_loss_exponent, Some(7.08));
        assert_eq!(pg.hpbw_az_deg, Some(10.0));
        let dipole = cat.get("dipole").unwrap();
        assert!(dipole.is_omnidirectional());
        assert!(matches!(dipole.exponent(), Err(Error::MissingExponent(_))));
        assert!(matches!(cat.get("UNKNOWN"), Err(Error::UnknownAntenna(_))));
    }

    #[test]
    fn catalog_rejects_bad_records() {
        assert!(matches!(
            AntennaCatalog::parse("x,1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            AntennaCatalog::parse("# c\nx,abc,10,"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(AntennaCatalog::parse("x,-1,10").is_err());
        assert!(AntennaCatalog::parse("x,1,400").is_err());
        assert!(AntennaCatalog::parse("x,1,10\nX,2,20").is_err());
    }

    #[test]
    fn catalog_round_trip() {
        let cat = AntennaCatalog::builtin();
        let again = AntennaCatalog::parse(&cat.to_text()).unwrap();
        assert_eq!(cat, again);
    }

    proptest! {
        #[test]
        fn gain_is_symmetric_and_periodic(hpbw in 1.0f64..300.0, off in -PI..PI, k in -3i32..3) {
            let p = Pattern::gaussian(sigma_from_hpbw(hpbw).unwrap(), 0.0);
            prop_assert!((p.gain(off) - p.gain(-off)).abs() < 1e-15);
            let shifted = p.gain(off + k as f64 * 2.0 * PI);
            prop_assert!((shifted - p.gain(off)).abs() < 1e-12);
            prop_assert!(p.gain(off) >= 0.0 && p.gain(off) <= 1.0);
        }

        #[test]
        fn gain_decays_away_from_boresight(hpbw in 1.0f64..300.0, a in 0.0f64..PI, b in 0.0f64..PI) {
            prop_assume!((a - b).abs() > 1e-6);
            let p = Pattern::gaussian(sigma_from_hpbw(hpbw).unwrap(), 0.0);
            let (near, far) = if a < b { (a, b) } else { (b, a) };
            // strict in exact arithmetic; underflow makes distant tails equal
            prop_assert!(p.gain(near) >= p.gain(far));
            if p.gain(far) > 1e-300 {
                prop_assert!(p.gain(near) > p.gain(far));
            }
        }
    }
}
