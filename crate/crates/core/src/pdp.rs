//! Power delay profiles.
//!
//! Text form is a small CSV: optional `#` comment lines, an optional
//! `delay,power_db` header, then one `delay,power_db` row per tap. Delays are
//! read either in nanoseconds or normalized to the rms delay spread.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// TDL-B tap table with delays normalized to the rms delay spread.
pub const TDL_B_CSV: &str = include_str!("../data/tdl_b.csv");

/// Nominal UMa NLOS delay spread used with TDL-B at 2.4 GHz.
pub const TDL_B_DS_NS: f64 = 363.0;
pub const TDL_B_FC_HZ: f64 = 2.4e9;

const HEADER: &str = "delay,power_db";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayUnit {
    Ns,
    Normalized,
}

impl FromStr for DelayUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ns" => Ok(DelayUnit::Ns),
            "normalized" => Ok(DelayUnit::Normalized),
            other => Err(format!("unknown delay unit {other:?} (ns|normalized)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub excess_delay_s: f64,
    pub power_lin: f64,
}

impl Tap {
    pub fn new(excess_delay_s: f64, power_lin: f64) -> Self {
        Self {
            excess_delay_s,
            power_lin,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PdpMeta {
    pub source: String,
    pub ds_ns: Option<f64>,
    pub fc_hz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerDelayProfile {
    pub taps: Vec<Tap>,
    pub meta: PdpMeta,
}

impl PowerDelayProfile {
    /// Validates, sorts by delay and normalizes to unit total power.
    pub fn from_taps(taps: Vec<Tap>) -> Result<Self> {
        Self::with_meta(taps, PdpMeta::default())
    }

    pub fn with_meta(mut taps: Vec<Tap>, meta: PdpMeta) -> Result<Self> {
        for (i, tap) in taps.iter().enumerate() {
            if !(tap.excess_delay_s >= 0.0 && tap.excess_delay_s.is_finite()) {
                return Err(Error::parse(
                    i + 1,
                    format!("bad delay {}", tap.excess_delay_s),
                ));
            }
            if !(tap.power_lin > 0.0 && tap.power_lin.is_finite()) {
                return Err(Error::parse(i + 1, format!("bad power {}", tap.power_lin)));
            }
        }
        taps.sort_by(|a, b| a.excess_delay_s.total_cmp(&b.excess_delay_s));
        normalize(&Self { taps, meta })
    }

    /// TDL-B scaled to `ds_ns`.
    pub fn tdl_b(ds_ns: f64) -> Result<Self> {
        let mut pdp = parse_pdp(TDL_B_CSV, DelayUnit::Normalized, Some(ds_ns))?;
        pdp.meta.source = "TDL-B".to_string();
        pdp.meta.fc_hz = Some(TDL_B_FC_HZ);
        Ok(pdp)
    }

    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.power_lin).sum()
    }

    /// Canonical CSV with delays in nanoseconds; re-parse with [`DelayUnit::Ns`].
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.meta.source.is_empty() {
            let _ = writeln!(out, "# source: {}", self.meta.source.replace('\n', " "));
        }
        if let Some(ds) = self.meta.ds_ns {
            let _ = writeln!(out, "# ds_ns: {ds:?}");
        }
        if let Some(fc) = self.meta.fc_hz {
            let _ = writeln!(out, "# fc_hz: {fc:?}");
        }
        out.push_str(HEADER);
        out.push('\n');
        for tap in &self.taps {
            let _ = writeln!(
                out,
                "{:?},{:?}",
                tap.excess_delay_s * 1e9,
                10.0 * tap.power_lin.log10()
            );
        }
        out
    }
}

/// Scales tap powers to unit sum. Idempotent up to rounding.
pub fn normalize(pdp: &PowerDelayProfile) -> Result<PowerDelayProfile> {
    if pdp.taps.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let total = pdp.total_power();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::parse(
            0,
            format!("total power {total} cannot be normalized"),
        ));
    }
    Ok(PowerDelayProfile {
        taps: pdp
            .taps
            .iter()
            .map(|t| Tap::new(t.excess_delay_s, t.power_lin / total))
            .collect(),
        meta: pdp.meta.clone(),
    })
}

fn parse_number(field: &str, line: usize, what: &str) -> Result<f64> {
    // accept the typographic minus that creeps in from copied tables
    let cleaned = field.trim().replace('\u{2212}', "-");
    let value: f64 = cleaned
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {field:?}")))?;
    if !value.is_finite() {
        return Err(Error::parse(line, format!("non-finite {what}")));
    }
    Ok(value)
}

pub fn parse_pdp(text: &str, unit: DelayUnit, ds_ns: Option<f64>) -> Result<PowerDelayProfile> {
    // delays are scaled to ns first and divided, so ns values survive
    // a dump and re-parse unchanged
    let scale_ns = match (unit, ds_ns) {
        (DelayUnit::Ns, _) => 1.0,
        (DelayUnit::Normalized, None) => return Err(Error::MissingScale),
        (DelayUnit::Normalized, Some(ds)) if !(ds > 0.0 && ds.is_finite()) => {
            return Err(Error::OutOfRange {
                what: "ds_ns",
                value: ds,
                range: "(0, inf)",
            })
        }
        (DelayUnit::Normalized, Some(ds)) => ds,
    };

    let mut taps = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_data && line.replace(' ', "").eq_ignore_ascii_case(HEADER) {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let mut fields = line.split(',');
        let (Some(delay), Some(power), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(line_no, "expected `delay,power_db`"));
        };
        let delay = parse_number(delay, line_no, "delay")?;
        let power_db = parse_number(power, line_no, "power")?;
        if delay < 0.0 {
            return Err(Error::parse(line_no, "negative delay"));
        }
        let power_lin = 10f64.powf(power_db / 10.0);
        if !(power_lin > 0.0 && power_lin.is_finite()) {
            return Err(Error::parse(
                line_no,
                format!("power {power_db} dB out of range"),
            ));
        }
        taps.push(Tap::new(delay * scale_ns / 1e9, power_lin));
    }
    if taps.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let meta = PdpMeta {
        source: String::new(),
        ds_ns: match unit {
            DelayUnit::Normalized => ds_ns,
            DelayUnit::Ns => None,
        },
        fc_hz: None,
    };
    PowerDelayProfile::with_meta(taps, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn two_tap_tdl_b_head() {
        let pdp = parse_pdp(
            "0,0\n0.1072,\u{2212}2.2\n",
            DelayUnit::Normalized,
            Some(363.0),
        )
        .unwrap();
        assert_eq!(pdp.taps.len(), 2);
        assert_eq!(pdp.taps[0].excess_delay_s, 0.0);
        assert_relative_eq!(pdp.taps[1].excess_delay_s, 38.9136e-9, max_relative = 1e-12);
        assert_relative_eq!(
            pdp.taps[0].power_lin / pdp.taps[1].power_lin,
            10f64.powf(0.22),
            max_relative = 1e-12
        );
        assert_relative_eq!(pdp.total_power(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn single_tap() {
        let pdp = parse_pdp("# c\ndelay,power_db\n0,0\n", DelayUnit::Ns, None).unwrap();
        assert_eq!(pdp.taps, vec![Tap::new(0.0, 1.0)]);
    }

    #[test]
    fn db_ratio_survives_normalization() {
        let pdp = parse_pdp("0,0\n10,+3\n", DelayUnit::Ns, None).unwrap();
        assert_relative_eq!(
            pdp.taps[1].power_lin / pdp.taps[0].power_lin,
            10f64.powf(0.3),
            max_relative = 1e-14
        );
    }

    #[test]
    fn rows_are_sorted_by_delay() {
        let pdp = parse_pdp("50,-3\n0,0\n20,-1\n", DelayUnit::Ns, None).unwrap();
        let delays: Vec<f64> = pdp.taps.iter().map(|t| t.excess_delay_s * 1e9).collect();
        assert_relative_eq!(delays[0], 0.0);
        assert_relative_eq!(delays[1], 20.0, max_relative = 1e-12);
        assert_relative_eq!(delays[2], 50.0, max_relative = 1e-12);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_pdp("", DelayUnit::Ns, None), Err(Error::EmptyProfile));
        assert_eq!(
            parse_pdp("# only\ndelay,power_db\n", DelayUnit::Ns, None),
            Err(Error::EmptyProfile)
        );
        assert_eq!(
            parse_pdp("0,0", DelayUnit::Normalized, None),
            Err(Error::MissingScale)
        );
        assert!(matches!(
            parse_pdp("0,0\n1;2\n", DelayUnit::Ns, None),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_pdp("0,0,0", DelayUnit::Ns, None),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_pdp("-1,0", DelayUnit::Ns, None),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_pdp("0,nan", DelayUnit::Ns, None),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_pdp("0,-5000", DelayUnit::Ns, None),
            Err(Error::Parse { .. })
        ));
        assert!(parse_pdp("0,0", DelayUnit::Normalized, Some(-1.0)).is_err());
    }

    #[test]
    fn normalize_examples() {
        let pdp =
            PowerDelayProfile::from_taps(vec![Tap::new(0.0, 2.0), Tap::new(1e-9, 2.0)]).unwrap();
        assert_eq!(pdp.taps[0].power_lin, 0.5);
        assert_eq!(pdp.taps[1].power_lin, 0.5);
        let single = PowerDelayProfile::from_taps(vec![Tap::new(0.0, 1.0)]).unwrap();
        assert_eq!(single.taps[0].power_lin, 1.0);
        let empty = PowerDelayProfile {
            taps: vec![],
            meta: PdpMeta::default(),
        };
        assert_eq!(normalize(&empty), Err(Error::EmptyProfile));
    }

    #[test]
    fn shipped_tdl_b() {
        let pdp = PowerDelayProfile::tdl_b(TDL_B_DS_NS).unwrap();
        assert_eq!(pdp.taps.len(), 23);
        assert_eq!(pdp.taps[0].excess_delay_s, 0.0);
        assert!(pdp
            .taps
            .windows(2)
            .all(|w| w[0].excess_delay_s <= w[1].excess_delay_s));
        assert_relative_eq!(pdp.total_power(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(
            pdp.taps[22].excess_delay_s,
            4.7834 * 363e-9,
            max_relative = 1e-12
        );
    }

    fn arb_taps() -> impl Strategy<Value = Vec<Tap>> {
        prop::collection::vec((0.0f64..5000.0, 1e-6f64..1e3), 1..30)
            .prop_map(|v| v.into_iter().map(|(d, p)| Tap::new(d * 1e-9, p)).collect())
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(taps in arb_taps()) {
            let once = PowerDelayProfile::from_taps(taps).unwrap();
            let twice = normalize(&once).unwrap();
            prop_assert!((once.total_power() - 1.0).abs() <= 1e-9);
            for (a, b) in once.taps.iter().zip(&twice.taps) {
                prop_assert!((a.power_lin - b.power_lin).abs() <= 1e-15);
            }
        }

        #[test]
        fn csv_round_trip(taps in arb_taps()) {
            let pdp = PowerDelayProfile::from_taps(taps).unwrap();
            let again = parse_pdp(&pdp.to_csv(), DelayUnit::Ns, None).unwrap();
            prop_assert_eq!(pdp.taps.len(), again.taps.len());
            for (a, b) in pdp.taps.iter().zip(&again.taps) {
                prop_assert!((a.excess_delay_s - b.excess_delay_s).abs() <= 1e-12 * a.excess_delay_s.abs());
                prop_assert!((a.power_lin / b.power_lin - 1.0).abs() <= 1e-12);
            }
        }
    }
}
