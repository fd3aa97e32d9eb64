//! Monte-Carlo estimate of the correction factor.
//!
//! Shares only the ellipse geometry and antenna gains with the grid-based
//! pipeline in [`crate::pas`]: departure and local-scattering angles are
//! drawn directly and each draw is weighted by the Rx gain at its arrival
//! angle. The numerator and the reference denominator reuse the same draws,
//! so most of the sampling noise cancels in their ratio.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::antenna::PatternKind;
use crate::error::{Error, Result};
use crate::geometry::{build_ellipses, wrap_pi, Ellipse, MIN_EXCESS_DELAY_S};
use crate::pas::Scenario;
use crate::pdp::PowerDelayProfile;
use crate::special::CompensatedSum;

pub const MIN_SAMPLES: u64 = 10_000;
const BLOCK: u64 = 1 << 16;

/// Von Mises draws centred on zero (Best & Fisher, wrapped-Cauchy envelope).
#[derive(Debug, Clone, Copy)]
pub struct VonMisesSampler {
    kappa: f64,
    r: f64,
}

impl VonMisesSampler {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::OutOfRange {
                what: "kappa",
                value: kappa,
                range: "[0, inf)",
            });
        }
        let r = if kappa < 1e-8 {
            f64::INFINITY
        } else {
            let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
            let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
            (1.0 + rho * rho) / (2.0 * rho)
        };
        Ok(Self { kappa, r })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.r.is_infinite() {
            return PI * (2.0 * rng.random::<f64>() - 1.0);
        }
        loop {
            let z = (PI * rng.random::<f64>()).cos();
            let f = ((1.0 + self.r * z) / (self.r + z)).clamp(-1.0, 1.0);
            let c = self.kappa * (self.r - f);
            let u2: f64 = rng.random();
            if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
                let angle = f.acos();
                return if rng.random::<f64>() < 0.5 {
                    -angle
                } else {
                    angle
                };
            }
        }
    }
}

/// Offsets from boresight distributed like a normalized azimuth pattern on
/// `(-π, π]`: uniform for omnidirectional antennas, a Gaussian truncated to
/// one turn (by rejection) otherwise.
#[derive(Debug, Clone, Copy)]
pub enum PatternOffsetSampler {
    Uniform,
    Gaussian(Normal<f64>),
}

impl PatternOffsetSampler {
    pub fn new(kind: PatternKind) -> Self {
        match kind {
            PatternKind::Omnidirectional => Self::Uniform,
            PatternKind::Gaussian { sigma_rad } => {
                Self::Gaussian(Normal::new(0.0, sigma_rad).expect("sigma > 0"))
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Uniform => PI * (2.0 * rng.random::<f64>() - 1.0),
            Self::Gaussian(normal) => loop {
                let x = normal.sample(rng);
                if x.abs() <= PI {
                    return x;
                }
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Total draws, split evenly over the clusters.
    pub samples: u64,
    pub seed: u64,
    pub scenario: Scenario,
    pub pdp: PowerDelayProfile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub k: f64,
    pub std_error: f64,
    pub power: f64,
    pub reference_power: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    w: CompensatedSum,
    w0: CompensatedSum,
    ww: CompensatedSum,
    w0w0: CompensatedSum,
    ww0: CompensatedSum,
}

impl Moments {
    fn push(&mut self, w: f64, w0: f64) {
        self.n += 1;
        self.w.add(w);
        self.w0.add(w0);
        self.ww.add(w * w);
        self.w0w0.add(w0 * w0);
        self.ww0.add(w * w0);
    }

    fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.w.merge(&other.w);
        self.w0.merge(&other.w0);
        self.ww.merge(&other.ww);
        self.w0w0.merge(&other.w0w0);
        self.ww0.merge(&other.ww0);
    }

    /// Means and the covariance matrix of the sample means.
    fn summary(&self) -> (f64, f64, f64, f64, f64) {
        let n = self.n as f64;
        let mw = self.w.value() / n;
        let mw0 = self.w0.value() / n;
        let denom = n * (n - 1.0).max(1.0);
        let var_w = ((self.ww.value() - n * mw * mw) / denom).max(0.0);
        let var_w0 = ((self.w0w0.value() - n * mw0 * mw0) / denom).max(0.0);
        let cov = (self.ww0.value() - n * mw * mw0) / denom;
        (mw, mw0, var_w, var_w0, cov)
    }
}

enum Cluster {
    Local { power: f64 },
    Delayed { power: f64, ellipse: Ellipse },
}

fn block_rng(seed: u64, cluster: usize, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((cluster as u64) << 32) | block);
    rng
}

pub fn mc_correction_factor(cfg: &OracleConfig) -> Result<OracleEstimate> {
    let s = &cfg.scenario;
    s.validate()?;
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::OutOfRange {
            what: "samples",
            value: cfg.samples as f64,
            range: ">= 1e4",
        });
    }
    let pdp = &cfg.pdp;
    let total = pdp.total_power();
    if pdp.taps.is_empty() || !(total > 0.0) {
        return Err(Error::EmptyProfile);
    }
    let ellipses = build_ellipses(pdp, s.distance_m)?;

    let local_power: f64 = pdp
        .taps
        .iter()
        .filter(|t| t.excess_delay_s < MIN_EXCESS_DELAY_S)
        .map(|t| t.power_lin / total)
        .sum();
    let mut clusters = vec![Cluster::Local {
        power: local_power * (1.0 - s.los_fraction),
    }];
    clusters.extend(ellipses.iter().map(|e| Cluster::Delayed {
        power: pdp.taps[e.tap_index].power_lin / total,
        ellipse: *e,
    }));

    let per_cluster = cfg.samples.div_ceil(clusters.len() as u64);
    let blocks = per_cluster.div_ceil(BLOCK);

    let reference = s.reference();
    let rx = s.rx_pattern();
    let rx0 = reference.rx_pattern();
    let g_tx = s.tx_gain_toward_rx();
    let g_tx0 = reference.tx_gain_toward_rx();
    let aod_centre = s.aod_pattern().boresight_rad;
    let aod_centre0 = reference.aod_pattern().boresight_rad;
    let offsets = PatternOffsetSampler::new(s.aod_pattern().kind);
    let von_mises = VonMisesSampler::new(s.kappa)?;

    let jobs: Vec<(usize, u64)> = (0..clusters.len())
        .flat_map(|c| (0..blocks).map(move |b| (c, b)))
        .collect();
    let block_moments: Vec<Moments> = jobs
        .par_iter()
        .map(|&(c, b)| {
            let mut rng = block_rng(cfg.seed, c, b);
            let count = BLOCK.min(per_cluster - b * BLOCK);
            let mut m = Moments::default();
            match &clusters[c] {
                Cluster::Local { .. } => {
                    for _ in 0..count {
                        let aoa = von_mises.sample(&mut rng);
                        m.push(g_tx * rx.gain(aoa), g_tx0 * rx0.gain(aoa));
                    }
                }
                Cluster::Delayed { ellipse, .. } => {
                    for _ in 0..count {
                        let x = offsets.sample(&mut rng);
                        let aoa = ellipse.aod_to_aoa(wrap_pi(aod_centre + x));
                        let aoa0 = ellipse.aod_to_aoa(wrap_pi(aod_centre0 + x));
                        m.push(rx.gain(aoa), rx0.gain(aoa0));
                    }
                }
            }
            m
        })
        .collect();

    let mut merged = vec![Moments::default(); clusters.len()];
    for (&(c, _), m) in jobs.iter().zip(&block_moments) {
        merged[c].merge(m);
    }

    let mut p = CompensatedSum::new();
    let mut p0 = CompensatedSum::new();
    let (mut var_p, mut var_p0, mut cov) = (0.0, 0.0, 0.0);
    for (cluster, m) in clusters.iter().zip(&merged) {
        let power = match cluster {
            Cluster::Local { power } | Cluster::Delayed { power, .. } => *power,
        };
        let (mw, mw0, vw, vw0, c) = m.summary();
        p.add(power * mw);
        p0.add(power * mw0);
        var_p += power * power * vw;
        var_p0 += power * power * vw0;
        cov += power * power * c;
    }
    // the direct ray, if any, is deterministic
    let los = local_power * s.los_fraction;
    p.add(los * g_tx * rx.gain(0.0));
    p0.add(los * g_tx0 * rx0.gain(0.0));

    let (p, p0) = (p.value(), p0.value());
    let k = p / p0;
    let var_k = ((var_p - 2.0 * k * cov + k * k * var_p0) / (p0 * p0)).max(0.0);
    Ok(OracleEstimate {
        k,
        std_error: var_k.sqrt(),
        power: p,
        reference_power: p0,
    })
}
