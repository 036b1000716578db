#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::Path;

use coeba_core::harness::INSTANCE_NAMES;
use coeba_core::TspInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small stand-in dimensions for the eight benchmark names.
pub const SYNTHETIC_DIMS: [usize; 8] = [14, 16, 18, 20, 22, 24, 28, 32];

pub fn random_instance(name: &str, n: usize, seed: u64) -> TspInstance {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n)
        .map(|_| {
            (
                r.random_range(0.0..1000.0f64).round(),
                r.random_range(0.0..1000.0f64).round(),
            )
        })
        .collect();
    TspInstance::from_coords(name, coords).unwrap()
}

/// Writes random instances under the benchmark names, with a manifest
/// that lists no optima.
pub fn write_synthetic_library(dir: &Path) {
    let mut manifest = String::from("name,dimension,optimum\n");
    for (i, (name, dim)) in INSTANCE_NAMES.iter().zip(SYNTHETIC_DIMS).enumerate() {
        let inst = random_instance(name, dim, 1000 + i as u64);
        std::fs::write(dir.join(format!("{name}.tsp")), inst.to_tsplib_string()).unwrap();
        let _ = writeln!(manifest, "{name},{dim},");
    }
    std::fs::write(dir.join("manifest.csv"), manifest).unwrap();
}
