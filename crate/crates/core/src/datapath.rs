//! The per-clock generator state machine.
//!
//! One word is produced every clock cycle: the first seed is the squared
//! entropy sample, each output feeds back as the next seed, and every 1000
//! cycles a fresh sample (shifted into the mid bits) replaces the feedback
//! path. A sampler models the serial-link bottleneck by keeping only every
//! k-th word of the full-rate stream.

use crate::entropy::{AdcSample, SampleSource};
use crate::error::Error;
use crate::prng::{Algorithm, Word32};
use crate::Result;

/// Clock cycles between entropy reseeds.
pub const RESEED_INTERVAL: u64 = 1000;

/// Default cycles per captured word: 4 serial bytes at 868 cycles each.
pub const DEFAULT_CAPTURE_INTERVAL: u64 = 3472;

/// First seed of a run: the entropy sample squared.
pub fn initial_seed(s: AdcSample) -> Word32 {
    let r = Word32::from(s.raw());
    r.wrapping_mul(r)
}

/// Reseed value at each 1000-cycle boundary: the sample shifted into the
/// middle bits (a 16-bit value shifted left 8 always fits in 24 bits).
pub fn refresh_seed(s: AdcSample) -> Word32 {
    Word32::from(s.raw()) << 8
}

/// How often the output stream is actually captured, in clock cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub capture_interval: u64,
}

impl SamplerConfig {
    pub fn every(capture_interval: u64) -> SamplerConfig {
        assert!(capture_interval >= 1, "capture interval must be at least 1");
        SamplerConfig { capture_interval }
    }

    /// The full stream, nothing dropped.
    pub fn full_rate() -> SamplerConfig {
        SamplerConfig::every(1)
    }
}

impl Default for SamplerConfig {
    fn default() -> SamplerConfig {
        SamplerConfig::every(DEFAULT_CAPTURE_INTERVAL)
    }
}

/// Registers of the generator: current seed, cycles since last reseed,
/// total cycle count, and the selected algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorState {
    pub seed: Word32,
    pub seed_count: u32,
    pub cycle: u64,
    pub alg: Algorithm,
}

impl GeneratorState {
    pub fn new(alg: Algorithm) -> GeneratorState {
        GeneratorState { seed: 0, seed_count: 0, cycle: 0, alg }
    }

    /// Advances one clock cycle and returns the word produced.
    ///
    /// Entropy is drawn only on cycle 0 (squared seed) and on each
    /// [`RESEED_INTERVAL`] boundary (shifted seed); between boundaries the
    /// previous output is the next seed.
    pub fn step(&mut self, entropy: &mut impl SampleSource) -> Result<Word32> {
        if self.cycle == 0 {
            self.seed = initial_seed(entropy.sample()?);
            self.seed_count = 0;
        } else if self.cycle.is_multiple_of(RESEED_INTERVAL) {
            self.seed = refresh_seed(entropy.sample()?);
            self.seed_count = 0;
        } else {
            // self.seed already holds the previous output (feedback path)
            self.seed_count += 1;
        }
        let word = self.alg.step(self.seed);
        self.seed = word;
        self.cycle += 1;
        Ok(word)
    }

    /// Runs the datapath at full rate but keeps only every
    /// `capture_interval`-th word, starting with the next one, until
    /// `n_words` have been captured.
    pub fn run_sampled(
        &mut self,
        entropy: &mut impl SampleSource,
        sampler: SamplerConfig,
        n_words: usize,
    ) -> Result<Vec<Word32>> {
        assert!(sampler.capture_interval >= 1, "capture interval must be at least 1");
        let mut words = Vec::with_capacity(n_words);
        while words.len() < n_words {
            words.push(self.step(entropy)?);
            if words.len() == n_words {
                break;
            }
            for _ in 1..sampler.capture_interval {
                self.step(entropy)?;
            }
        }
        Ok(words)
    }

    /// One-line text form of the registers, suitable for resuming a run.
    pub fn checkpoint(&self) -> String {
        format!(
            "seed={:08x} seed_count={} cycle={} alg={}",
            self.seed, self.seed_count, self.cycle, self.alg
        )
    }

    /// Parses a [`checkpoint`](Self::checkpoint) line back into registers.
    pub fn restore(line: &str) -> Result<GeneratorState> {
        let bad = |why: &str| Error::BadCheckpoint(format!("{why}: {}", line.trim()));
        let mut fields = line.split_whitespace();
        let mut take = |key: &str| -> Result<String> {
            let field = fields.next().ok_or_else(|| bad("missing field"))?;
            field
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .map(str::to_owned)
                .ok_or_else(|| bad(&format!("expected {key}=")))
        };
        let seed = Word32::from_str_radix(&take("seed")?, 16).map_err(|_| bad("bad seed"))?;
        let seed_count: u32 = take("seed_count")?.parse().map_err(|_| bad("bad seed_count"))?;
        let cycle: u64 = take("cycle")?.parse().map_err(|_| bad("bad cycle"))?;
        let alg = Algorithm::from_name(&take("alg")?).ok_or_else(|| bad("unknown algorithm"))?;
        if fields.next().is_some() {
            return Err(bad("trailing fields"));
        }
        if u64::from(seed_count) >= RESEED_INTERVAL {
            return Err(bad("seed_count out of range"));
        }
        Ok(GeneratorState { seed, seed_count, cycle, alg })
    }
}
