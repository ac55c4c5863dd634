//! Simulation and eavesdropper-detection analysis for QFT-based quantum key
//! distribution and three-pass message encryption.
//!
//! * [`statevector`]: dense simulator plus a product-state register.
//! * [`schemes`]: verification layouts, message assembly and key extraction.
//! * [`analytics`]: closed-form detection probabilities.
//! * [`adversary`]: intercept-resend strategies and the many-copies attack.
//! * [`protocols`]: BB84, two-pass QKD and three-pass encryption runs.
//! * [`montecarlo`]: empirical detection estimates and cross-validation.
//! * [`oracle`]: density-matrix reference for small compartments.

pub mod adversary;
pub mod analytics;
pub mod error;
pub mod montecarlo;
pub mod oracle;
pub mod protocols;
pub mod schemes;
pub mod statevector;

pub use error::{Error, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG used throughout.
pub type SimRng = ChaCha8Rng;

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng_for(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
