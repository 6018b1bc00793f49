//! Small-scale fading factor `L`: either the deterministic mean (1) or a
//! unit-mean exponential power gain drawn from a counter-based generator.
//!
//! Every draw is a pure function of `(seed, lane, index)`. The generator is
//! ChaCha8 keyed by the seed, with the lane selecting the ChaCha stream and
//! the index selecting the 64-bit word inside it, so draws can be taken in any
//! order or in parallel and still reproduce bit-for-bit.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FadingModel {
    #[default]
    Deterministic,
    RayleighExponential {
        seed: u64,
    },
}

impl FadingModel {
    pub fn is_deterministic(&self) -> bool {
        matches!(self, FadingModel::Deterministic)
    }

    /// Same mode, keyed by `seed` when random.
    pub fn with_seed(self, seed: u64) -> FadingModel {
        match self {
            FadingModel::Deterministic => FadingModel::Deterministic,
            FadingModel::RayleighExponential { .. } => FadingModel::RayleighExponential { seed },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FadingModel::Deterministic => "deterministic",
            FadingModel::RayleighExponential { .. } => "rayleigh",
        }
    }
}

/// Independent draw sequences sharing one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingLane {
    /// Serving link (direct or cascaded).
    Signal,
    /// Modeled interferers.
    Interference,
}

impl FadingLane {
    fn stream_id(self) -> u64 {
        match self {
            FadingLane::Signal => 0,
            FadingLane::Interference => 1,
        }
    }
}

/// Draws the fading factor for `stream_index` on the signal lane.
pub fn sample_fading(model: FadingModel, stream_index: u64) -> f64 {
    sample_fading_on(model, FadingLane::Signal, stream_index)
}

pub fn sample_fading_on(model: FadingModel, lane: FadingLane, stream_index: u64) -> f64 {
    FadingStream::new(model, lane, stream_index).next_factor()
}

/// Sequential draws at consecutive stream indices, starting from `start`.
///
/// Yields exactly the values `sample_fading_on` gives for `start`,
/// `start + 1`, ... without re-keying the generator for each one.
pub struct FadingStream {
    rng: Option<ChaCha8Rng>,
}

impl FadingStream {
    pub fn new(model: FadingModel, lane: FadingLane, start: u64) -> Self {
        let rng = match model {
            FadingModel::Deterministic => None,
            FadingModel::RayleighExponential { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(lane.stream_id());
                rng.set_word_pos(u128::from(start) * 2);
                Some(rng)
            }
        };
        FadingStream { rng }
    }

    pub fn next_factor(&mut self) -> f64 {
        match &mut self.rng {
            None => 1.0,
            Some(rng) => -open_unit(rng.next_u64()).ln(),
        }
    }
}

impl Iterator for FadingStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_factor())
    }
}

/// Maps 64 random bits to the open interval (0, 1) on a 2^-52 grid offset by
/// half a step, so `-ln(u)` is always finite and strictly positive.
fn open_unit(bits: u64) -> f64 {
    const STEP: f64 = 1.0 / (1u64 << 52) as f64;
    ((bits >> 12) as f64 + 0.5) * STEP
}
