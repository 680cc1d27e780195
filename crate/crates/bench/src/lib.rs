//! Shared input builders for the benchmark suite.

use rngsim::datapath::{GeneratorState, SamplerConfig};
use rngsim::entropy::{EntropyConfig, EntropySource, SampleSource};
use rngsim::prng::Algorithm;

/// Entropy configuration used across benchmarks: deterministic, mid-scale
/// spread so reseed orbits vary.
pub fn bench_entropy() -> EntropyConfig {
    EntropyConfig::SyntheticNoise { seed: 1, mean: 2048.0, sigma: 300.0 }
}

/// Opens the benchmark entropy source.
pub fn open_entropy() -> impl SampleSource {
    EntropySource::open(&bench_entropy()).unwrap()
}

/// A deterministic full-rate xorshift stream to feed the serial and
/// analysis benchmarks.
pub fn sample_words(n: usize) -> Vec<u32> {
    let mut entropy = EntropySource::open(&bench_entropy()).unwrap();
    let mut state = GeneratorState::new(Algorithm::XorShift);
    state.run_sampled(&mut entropy, SamplerConfig::full_rate(), n).unwrap()
}
