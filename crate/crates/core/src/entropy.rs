//! Entropy sources standing in for the on-chip ADC noise measurement.
//!
//! The hardware reads ambient electrical noise through a 12-bit converter
//! whose result sits left-aligned in a 16-bit bus read. Simulation swaps the
//! physical measurement for one of three pluggable sources: a replay of
//! captured samples, the operating system entropy facility, or a seeded
//! Gaussian noise model.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Error;
use crate::Result;

/// Effective converter resolution: 12 bits, left-aligned in the 16-bit read.
pub const ADC_MAX_COUNTS: u16 = 4095;

/// One raw 16-bit converter read; the significant 12 bits are `raw >> 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdcSample {
    raw: u16,
}

impl AdcSample {
    pub fn new(raw: u16) -> AdcSample {
        AdcSample { raw }
    }

    /// The full 16-bit bus value.
    pub fn raw(self) -> u16 {
        self.raw
    }

    /// The 12 significant bits, in converter counts.
    pub fn counts(self) -> u16 {
        self.raw >> 4
    }
}

/// Converts a sample to integer microvolts with the display pipeline's exact
/// shift/multiply arithmetic: full scale (4095 counts) maps to 999,755 uV.
pub fn adc_to_microvolts(s: AdcSample) -> u32 {
    ((u64::from(s.counts()) * 250_000) >> 10) as u32
}

/// A two-resistor divider feeding the converter input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoltageDivider {
    pub vin: f64,
    pub r_high: f64,
    pub r_low: f64,
}

/// Output of the divider, taken across the bottom resistor.
pub fn divider_vout(d: &VoltageDivider) -> f64 {
    assert!(d.r_high + d.r_low > 0.0, "divider needs nonzero total resistance");
    d.vin * d.r_low / (d.r_high + d.r_low)
}

/// How sample values are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum EntropyConfig {
    /// Raw little-endian 16-bit words from a headerless file, wrapping at EOF.
    Replay(PathBuf),
    /// 16 bits per sample from the operating system entropy facility.
    OsRandom,
    /// Gaussian counts quantized to the 12-bit range, from a seeded generator.
    SyntheticNoise { seed: u64, mean: f64, sigma: f64 },
}

/// Anything the datapath can draw samples from.
pub trait SampleSource {
    fn sample(&mut self) -> Result<AdcSample>;
}

/// Runtime state for an [`EntropyConfig`].
#[derive(Debug)]
pub enum EntropySource {
    Replay { data: Vec<u8>, pos: usize },
    OsRandom,
    Synthetic { rng: Box<ChaCha8Rng>, dist: Normal<f64> },
}

impl EntropySource {
    pub fn open(config: &EntropyConfig) -> Result<EntropySource> {
        match config {
            EntropyConfig::Replay(path) => {
                let mut data = fs::read(path).map_err(|source| Error::ReplayOpen {
                    path: path.clone(),
                    source,
                })?;
                // Samples are 16-bit; a trailing odd byte can never be read.
                data.truncate(data.len() & !1);
                if data.is_empty() {
                    return Err(Error::ReplayEmpty(path.clone()));
                }
                Ok(EntropySource::Replay { data, pos: 0 })
            }
            EntropyConfig::OsRandom => Ok(EntropySource::OsRandom),
            EntropyConfig::SyntheticNoise { seed, mean, sigma } => {
                if !sigma.is_finite() || *sigma < 0.0 {
                    return Err(Error::InvalidSigma(*sigma));
                }
                Ok(EntropySource::Synthetic {
                    rng: Box::new(ChaCha8Rng::seed_from_u64(*seed)),
                    dist: Normal::new(*mean, *sigma).map_err(|_| Error::InvalidSigma(*sigma))?,
                })
            }
        }
    }

    /// Convenience for the common replay case.
    pub fn replay(path: impl AsRef<Path>) -> Result<EntropySource> {
        EntropySource::open(&EntropyConfig::Replay(path.as_ref().to_path_buf()))
    }
}

impl SampleSource for EntropySource {
    fn sample(&mut self) -> Result<AdcSample> {
        let raw = match self {
            EntropySource::Replay { data, pos } => {
                let raw = u16::from_le_bytes([data[*pos], data[*pos + 1]]);
                *pos = (*pos + 2) % data.len();
                raw
            }
            EntropySource::OsRandom => (rand::rngs::OsRng.next_u32() & 0xFFFF) as u16,
            EntropySource::Synthetic { rng, dist } => {
                let counts = dist.sample(rng).round().clamp(0.0, f64::from(ADC_MAX_COUNTS));
                (counts as u16) << 4
            }
        };
        Ok(AdcSample::new(raw))
    }
}

impl SampleSource for &mut EntropySource {
    fn sample(&mut self) -> Result<AdcSample> {
        (**self).sample()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn synthetic(seed: u64, mean: f64, sigma: f64) -> EntropySource {
        EntropySource::open(&EntropyConfig::SyntheticNoise { seed, mean, sigma }).unwrap()
    }

    #[test]
    fn replay_reads_little_endian_and_wraps() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(&[0x34, 0x12, 0xF0, 0xFF]).unwrap();
        let mut src = EntropySource::replay(f.path()).unwrap();
        assert_eq!(src.sample().unwrap().raw(), 0x1234);
        assert_eq!(src.sample().unwrap().raw(), 0xFFF0);
        // wrapped around
        assert_eq!(src.sample().unwrap().raw(), 0x1234);
    }

    #[test]
    fn replay_ignores_trailing_odd_byte() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(&[0x34, 0x12, 0xAA]).unwrap();
        let mut src = EntropySource::replay(f.path()).unwrap();
        assert_eq!(src.sample().unwrap().raw(), 0x1234);
        assert_eq!(src.sample().unwrap().raw(), 0x1234);
    }

    #[test]
    fn replay_missing_file_is_an_error() {
        let err = EntropySource::replay("/nonexistent/noise.bin").unwrap_err();
        assert!(matches!(err, Error::ReplayOpen { .. }));
    }

    #[test]
    fn replay_empty_file_is_an_error() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let err = EntropySource::replay(f.path()).unwrap_err();
        assert!(matches!(err, Error::ReplayEmpty(_)));
    }

    #[test]
    fn synthetic_zero_sigma_is_constant() {
        let mut src = synthetic(1, 2048.0, 0.0);
        for _ in 0..100 {
            assert_eq!(src.sample().unwrap().raw(), 0x8000);
        }
    }

    #[test]
    fn synthetic_is_reproducible_for_a_fixed_seed() {
        let mut a = synthetic(7, 2048.0, 64.0);
        let mut b = synthetic(7, 2048.0, 64.0);
        for _ in 0..1000 {
            assert_eq!(a.sample().unwrap(), b.sample().unwrap());
        }
    }

    #[test]
    fn synthetic_clamps_to_the_converter_range() {
        // sigma large enough that raw Gaussian values spill both sides
        let mut src = synthetic(3, 2048.0, 6.0 * 2048.0);
        for _ in 0..10_000 {
            let s = src.sample().unwrap();
            assert!(s.counts() <= ADC_MAX_COUNTS);
            assert_eq!(s.raw() & 0xF, 0, "synthetic samples are left-aligned");
        }
    }

    #[test]
    fn synthetic_rejects_negative_sigma() {
        let err = EntropySource::open(&EntropyConfig::SyntheticNoise {
            seed: 1,
            mean: 2048.0,
            sigma: -1.0,
        })
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSigma(_)));
    }

    #[test]
    fn os_random_sources_disagree() {
        let mut a = EntropySource::open(&EntropyConfig::OsRandom).unwrap();
        let mut b = EntropySource::open(&EntropyConfig::OsRandom).unwrap();
        let sa: Vec<u16> = (0..16).map(|_| a.sample().unwrap().raw()).collect();
        let sb: Vec<u16> = (0..16).map(|_| b.sample().unwrap().raw()).collect();
        assert_ne!(sa, sb);
    }

    #[test]
    fn microvolt_conversion_known_values() {
        assert_eq!(adc_to_microvolts(AdcSample::new(0x0000)), 0);
        assert_eq!(adc_to_microvolts(AdcSample::new(0xFFF0)), 999_755);
        assert_eq!(adc_to_microvolts(AdcSample::new(0x8000)), 500_000);
    }

    #[test]
    fn microvolt_conversion_is_monotone_and_bounded() {
        let mut last = 0;
        for counts in 0..=ADC_MAX_COUNTS {
            let uv = adc_to_microvolts(AdcSample::new(counts << 4));
            assert!(uv >= last);
            assert!(uv <= 999_755);
            last = uv;
        }
    }

    #[test]
    fn divider_matches_the_bench_measurement() {
        let d = VoltageDivider { vin: 3.3, r_high: 10_000.0, r_low: 1_000.0 };
        assert!((divider_vout(&d) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn divider_degenerate_cases() {
        let no_drop = VoltageDivider { vin: 1.8, r_high: 0.0, r_low: 470.0 };
        assert_eq!(divider_vout(&no_drop), 1.8);
        let dead = VoltageDivider { vin: 0.0, r_high: 10.0, r_low: 10.0 };
        assert_eq!(divider_vout(&dead), 0.0);
    }

    #[test]
    fn divider_never_exceeds_vin() {
        for r_high in [0.0, 1.0, 100.0, 1e6] {
            for r_low in [1.0, 100.0, 1e6] {
                let d = VoltageDivider { vin: 3.3, r_high, r_low };
                assert!(divider_vout(&d) <= d.vin);
            }
        }
    }
}
