//! Shared inputs for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sitterloc::{DeSitterParams, ModeBasis, StateCoefficients};

/// Default masses: one per representation series.
pub const MASSES: [f64; 2] = [0.5, 2.5];

pub fn basis(mass: f64, l_max: usize) -> ModeBasis {
    let p = DeSitterParams::new(1.0, mass).expect("benchmark masses are valid");
    ModeBasis::new(&p, l_max).expect("basis builds")
}

/// Seeded random normalized state.
pub fn state(l_max: usize, seed: u64) -> StateCoefficients {
    StateCoefficients::random(l_max, &mut ChaCha8Rng::seed_from_u64(seed))
}
