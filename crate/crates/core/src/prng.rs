//! The two 32-bit scrambling algorithms and their feedback iteration.
//!
//! Both steps are pure functions on a 32-bit word, matching the combinational
//! hardware they model: all shifts are logical, left shifts truncate to 32
//! bits, and multiplication wraps modulo 2^32.

/// A 32-bit word serving as both seed and generated random number.
pub type Word32 = u32;

/// Selects which scrambling algorithm the datapath runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    MiddleSquare,
    XorShift,
}

impl Algorithm {
    /// Applies one step of the selected algorithm.
    pub fn step(self, seed: Word32) -> Word32 {
        match self {
            Algorithm::MiddleSquare => middle_square_step(seed),
            Algorithm::XorShift => xorshift_step(seed),
        }
    }

    /// Name used in checkpoints and CLI flags.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MiddleSquare => "middle-square",
            Algorithm::XorShift => "xorshift",
        }
    }

    /// Parses the name produced by [`Algorithm::name`].
    pub fn from_name(name: &str) -> Option<Algorithm> {
        match name {
            "middle-square" => Some(Algorithm::MiddleSquare),
            "xorshift" => Some(Algorithm::XorShift),
            _ => None,
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Squares the middle 16 bits (23..8) of the seed.
///
/// (2^16 - 1)^2 < 2^32, so the square never truncates. Any seed whose middle
/// bits are all zero maps to 0, the absorbing state of this algorithm.
pub fn middle_square_step(seed: Word32) -> Word32 {
    let middle = (seed >> 8) & 0xFFFF;
    middle.wrapping_mul(middle)
}

/// One xorshift pass with the (7, 9, 13) right/left/right triple.
pub fn xorshift_step(seed: Word32) -> Word32 {
    let t1 = seed ^ (seed >> 7);
    let t2 = t1 ^ (t1 << 9);
    t2 ^ (t2 >> 13)
}

/// Inverse of [`xorshift_step`].
///
/// Each sub-step x ^ (x >> k) is undone by re-applying the shift-XOR until
/// the shift exhausts the word; same for the left-shift sub-step.
pub fn xorshift_inverse_step(out: Word32) -> Word32 {
    let t2 = invert_xor_shr(out, 13);
    let t1 = invert_xor_shl(t2, 9);
    invert_xor_shr(t1, 7)
}

fn invert_xor_shr(y: Word32, k: u32) -> Word32 {
    let mut x = y;
    let mut shift = k;
    while shift < 32 {
        x = y ^ (x >> k);
        shift += k;
    }
    x
}

fn invert_xor_shl(y: Word32, k: u32) -> Word32 {
    let mut x = y;
    let mut shift = k;
    while shift < 32 {
        x = y ^ (x << k);
        shift += k;
    }
    x
}

/// Runs `n` feedback iterations from `seed`, returning each output in order.
///
/// Models the testbench wiring where the output register is fed straight back
/// into the seed input: x1 = step(seed), x_{k+1} = step(x_k).
pub fn iterate(alg: Algorithm, seed: Word32, n: usize) -> Vec<Word32> {
    let mut out = Vec::with_capacity(n);
    let mut state = seed;
    for _ in 0..n {
        state = alg.step(state);
        out.push(state);
    }
    out
}
