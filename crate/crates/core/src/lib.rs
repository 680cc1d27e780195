//! Software model of an FPGA random-number-generator datapath.
//!
//! The pipeline mirrors the hardware it simulates: an ADC noise measurement
//! seeds a 32-bit scrambling algorithm (middle-square or xorshift) running in
//! linear feedback at clock rate, the seed is refreshed from the ADC every
//! 1000 cycles, and the word stream leaves the device through a byte-wide
//! UART link that captures only a strided sample of the generated numbers.
//! The analysis side normalizes captured words and renders the threshold
//! bitmap plus numerical uniformity statistics used to judge randomness.

pub mod analysis;
pub mod datapath;
pub mod entropy;
pub mod error;
pub mod prng;
pub mod uart;

pub use analysis::{Bitmap, StatsReport};
pub use datapath::{GeneratorState, SamplerConfig};
pub use entropy::{AdcSample, EntropyConfig, EntropySource, SampleSource, VoltageDivider};
pub use error::Error;
pub use prng::{Algorithm, Word32};
pub use uart::{Frame, UartConfig, UartTxState};

/// Shorthand for results carrying the crate error type.
pub type Result<T> = std::result::Result<T, Error>;
