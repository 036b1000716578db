//! Seeded random streams.
//!
//! Every stochastic component draws from its own ChaCha8 stream, identified
//! by the run seed plus a stream id. Workers that own distinct streams can run
//! in any order or in parallel without changing the outcome.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SolverRng = ChaCha8Rng;

/// Stream used for population initialisation and generational solvers.
pub const MAIN_STREAM: u64 = 0;
const DEME_BASE: u64 = 1;
const MIGRATION_TAG: u64 = 1 << 40;
const REBUILD_TAG: u64 = 2 << 40;

pub fn stream(seed: u64, id: u64) -> SolverRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn deme_stream(seed: u64, deme: usize) -> SolverRng {
    stream(seed, DEME_BASE + deme as u64)
}

pub fn migration_stream(seed: u64, tick: u64) -> SolverRng {
    stream(seed, MIGRATION_TAG | tick)
}

pub fn rebuild_stream(seed: u64, tick: u64) -> SolverRng {
    stream(seed, REBUILD_TAG | tick)
}
