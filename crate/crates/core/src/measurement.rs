//! RSS path-loss model with log-normal shadowing.
//!
//! A source of strength `A` is received at distance `d` with strength
//! `s = ω·A/d^η`, where `10·log10(ω) ~ N(0, σ²)` (σ in dB). Ranges are
//! recovered by inverting the noise-free law, so the reported distance is
//! `d·ω^(−1/η)`.
//!
//! Noise is drawn from ChaCha8 seeded with [`ShadowingSpec::seed`] on stream
//! [`NOISE_STREAM`], one Gaussian per anchor per sample, anchors in order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// ChaCha stream reserved for shadowing draws.
pub const NOISE_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RssModel {
    source_strength: f64,
    path_loss_exponent: f64,
}

impl RssModel {
    pub fn new(source_strength: f64, path_loss_exponent: f64) -> Result<Self> {
        if !(source_strength > 0.0 && source_strength.is_finite()) {
            return Err(Error::InvalidValue {
                what: "source strength",
                value: source_strength,
            });
        }
        if !(path_loss_exponent > 0.0 && path_loss_exponent.is_finite()) {
            return Err(Error::InvalidValue {
                what: "path loss exponent",
                value: path_loss_exponent,
            });
        }
        Ok(Self {
            source_strength,
            path_loss_exponent,
        })
    }

    pub fn source_strength(&self) -> f64 {
        self.source_strength
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowingSpec {
    sigma_db: f64,
    seed: u64,
    /// Readings per anchor, averaged in dB before inversion.
    samples: u32,
}

impl ShadowingSpec {
    pub fn new(sigma_db: f64, seed: u64) -> Result<Self> {
        if !(sigma_db >= 0.0 && sigma_db.is_finite()) {
            return Err(Error::InvalidValue {
                what: "shadowing sigma (dB)",
                value: sigma_db,
            });
        }
        Ok(Self {
            sigma_db,
            seed,
            samples: 1,
        })
    }

    pub fn with_samples(mut self, samples: u32) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidValue {
                what: "samples per estimate",
                value: 0.0,
            });
        }
        self.samples = samples;
        Ok(self)
    }

    pub fn sigma_db(&self) -> f64 {
        self.sigma_db
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> u32 {
        self.samples
    }
}

pub fn rss_at(model: &RssModel, distance: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(model.source_strength / distance.powf(model.path_loss_exponent))
}

pub fn distance_from_rss(model: &RssModel, rss: f64) -> Result<f64> {
    if !(rss > 0.0) {
        return Err(Error::NonPositiveSignal(rss));
    }
    Ok((model.source_strength / rss).powf(1.0 / model.path_loss_exponent))
}

/// Range from each anchor to `source` as seen through a shadowed RSS reading.
pub fn noisy_ranges(
    model: &RssModel,
    spec: &ShadowingSpec,
    source: Point2,
    anchors: &[Point2],
) -> Result<Vec<f64>> {
    let eps = 1e-12 * source.norm().max(1.0);
    let distances: Vec<f64> = anchors.iter().map(|a| a.distance(source)).collect();
    if let Some(anchor) = distances.iter().position(|&d| d <= eps) {
        return Err(Error::SourceOnAnchor { anchor });
    }
    if spec.sigma_db == 0.0 {
        return Ok(distances);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(NOISE_STREAM);
    distances
        .into_iter()
        .map(|d| {
            let mean_z = (0..spec.samples)
                .map(|_| -> f64 { StandardNormal.sample(&mut rng) })
                .sum::<f64>()
                / f64::from(spec.samples);
            let shadow_db = spec.sigma_db * mean_z;
            let omega = 10f64.powf(shadow_db / 10.0);
            distance_from_rss(model, omega * rss_at(model, d)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_anchors() -> Vec<Point2> {
        vec![
            Point2::new(-2.0, -1.0),
            Point2::new(-1.0, -3.0),
            Point2::new(-1.0, 1.0),
            Point2::new(1.0, 0.0),
        ]
    }

    #[test]
    fn power_law_values() {
        let m = RssModel::new(1.0, 3.0).unwrap();
        assert_eq!(rss_at(&m, 2.0).unwrap(), 0.125);
        assert_eq!(distance_from_rss(&m, 0.125).unwrap(), 2.0);
        let m7 = RssModel::new(1.0, 7.3).unwrap();
        assert_eq!(rss_at(&m7, 1.0).unwrap(), 1.0);
        let m5 = RssModel::new(5.0, 2.0).unwrap();
        assert_eq!(distance_from_rss(&m5, 5.0).unwrap(), 1.0);
    }

    #[test]
    fn domain_errors() {
        let m = RssModel::new(1.0, 3.0).unwrap();
        assert!(matches!(rss_at(&m, 0.0), Err(Error::NonPositiveDistance(_))));
        assert!(matches!(distance_from_rss(&m, -1.0), Err(Error::NonPositiveSignal(_))));
        assert!(RssModel::new(0.0, 3.0).is_err());
        assert!(RssModel::new(1.0, -3.0).is_err());
        assert!(ShadowingSpec::new(-1.0, 0).is_err());
        assert!(ShadowingSpec::new(1.0, 0).unwrap().with_samples(0).is_err());
    }

    #[test]
    fn round_trip_is_exact_to_rounding() {
        let m = RssModel::new(3.7, 2.4).unwrap();
        for d in [0.01, 0.5, 1.0, 3.3, 1234.5] {
            let back = distance_from_rss(&m, rss_at(&m, d).unwrap()).unwrap();
            assert!((back - d).abs() <= 1e-12 * d, "{d} -> {back}");
        }
    }

    #[test]
    fn shadowing_scales_recovered_distance() {
        let m = RssModel::new(2.0, 3.0).unwrap();
        let d = 4.2;
        let omega = 10f64.powf(3.1 / 10.0);
        let recovered = distance_from_rss(&m, omega * rss_at(&m, d).unwrap()).unwrap();
        assert!((recovered - d * omega.powf(-1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_sigma_gives_true_distances() {
        let m = RssModel::new(1.0, 3.0).unwrap();
        let src = Point2::new(0.3, -2.2);
        let r = noisy_ranges(&m, &ShadowingSpec::new(0.0, 9).unwrap(), src, &example_anchors()).unwrap();
        for (a, d) in example_anchors().iter().zip(r) {
            assert_eq!(d, a.distance(src));
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let m = RssModel::new(1.0, 3.0).unwrap();
        let spec = ShadowingSpec::new(5.0, 1234).unwrap();
        let src = Point2::new(2.0, 2.0);
        let a = noisy_ranges(&m, &spec, src, &example_anchors()).unwrap();
        let b = noisy_ranges(&m, &spec, src, &example_anchors()).unwrap();
        assert_eq!(a, b);
        let other = noisy_ranges(&m, &ShadowingSpec::new(5.0, 1235).unwrap(), src, &example_anchors()).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn source_on_anchor_is_rejected() {
        let m = RssModel::new(1.0, 3.0).unwrap();
        let err = noisy_ranges(&m, &ShadowingSpec::new(1.0, 0).unwrap(), Point2::new(-1.0, 1.0), &example_anchors())
            .unwrap_err();
        assert!(matches!(err, Error::SourceOnAnchor { anchor: 2 }));
    }

    fn log_ratios(sigma: f64, samples: u32, trials: u64) -> Vec<[f64; 2]> {
        let m = RssModel::new(1.0, 3.0).unwrap();
        let anchors = [Point2::new(-2.0, -1.0), Point2::new(1.0, 0.0)];
        let src = Point2::new(0.5, 0.5);
        let truth: Vec<f64> = anchors.iter().map(|a| a.distance(src)).collect();
        (0..trials)
            .map(|seed| {
                let spec = ShadowingSpec::new(sigma, seed).unwrap().with_samples(samples).unwrap();
                let r = noisy_ranges(&m, &spec, src, &anchors).unwrap();
                [(r[0] / truth[0]).log10(), (r[1] / truth[1]).log10()]
            })
            .collect()
    }

    fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
        let n = xs.clone().count() as f64;
        let mean = xs.clone().sum::<f64>() / n;
        let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var.sqrt())
    }

    #[test]
    fn log_range_error_statistics() {
        // std of log10(reported/true) = σ/(10η) = 5/30
        let samples = log_ratios(5.0, 1, 100_000);
        let (mean, std) = mean_std(samples.iter().map(|s| s[0]));
        assert!((std - 1.0 / 6.0).abs() <= 0.05 / 6.0, "std {std}");
        assert!(mean.abs() < 3.0 * std / (samples.len() as f64).sqrt(), "mean {mean}");

        let (m0, s0) = (mean, std);
        let (m1, s1) = mean_std(samples.iter().map(|s| s[1]));
        let cov = samples.iter().map(|s| (s[0] - m0) * (s[1] - m1)).sum::<f64>() / (samples.len() as f64 - 1.0);
        assert!((cov / (s0 * s1)).abs() < 0.05);
    }

    #[test]
    fn averaging_reduces_spread() {
        let samples = log_ratios(5.0, 4, 20_000);
        let (_, std) = mean_std(samples.iter().map(|s| s[0]));
        assert!((std - 1.0 / 12.0).abs() <= 0.05 / 12.0, "std {std}");
    }
}
