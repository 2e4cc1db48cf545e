//! Seeded workloads shared by the benchmarks.

use cpskit::random::{self, Params};
use cpskit::TypeStructure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A Harsanyi structure with `players` players and exactly `types` types
/// each, on `states` states with `events` conditioning events.
pub fn structure(seed: u64, states: usize, events: usize, players: usize, types: usize) -> TypeStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = loop {
        let sp = random::space(&mut rng, states, events);
        if sp.len() == states {
            break sp;
        }
    };
    let names: Vec<String> = (1..=players).map(|j| j.to_string()).collect();
    let sets = (0..players).map(|j| random::type_labels(j, types)).collect();
    let p = Params::default();
    random::structure_on(&mut rng, sp, names, sets, p.duplicate_rate).expect("generated structure is well formed")
}
