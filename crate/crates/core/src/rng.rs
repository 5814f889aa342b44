//! Seed-derived random streams.
//!
//! Every random decision in a run draws from a ChaCha8 generator seeded from
//! the run seed (`seed_from_u64`) and positioned on a 64-bit stream id. The
//! top byte of the stream id names the purpose, the low 56 bits carry either
//! the generation index or an individual id:
//!
//! | domain | low bits | used for |
//! |--------|----------|----------|
//! | `0x01` | 0 | initial population sampling |
//! | `0x02` | generation `k` | mating (pool split and pairing) |
//! | `0x03` | first offspring id of the pair | SBX spread factor and perturbation |
//! | `0x04` | crossover offspring id | mutation membership and polynomial mutation |
//! | `0x05` | generation `k` | Monte Carlo hypervolume (m >= 4 only) |
//!
//! Because no stream depends on how much randomness another stream consumed,
//! a run can be resumed from its log, and per-pair / per-offspring work could
//! run in parallel without changing the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::IndividualId;

/// The generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

const LOW_MASK: u64 = (1 << 56) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Initialization,
    Mating { generation: usize },
    Crossover { first_offspring: IndividualId },
    Mutation { offspring: IndividualId },
    Measures { generation: usize },
}

impl Stream {
    pub fn id(self) -> u64 {
        let (domain, low) = match self {
            Stream::Initialization => (0x01, 0),
            Stream::Mating { generation } => (0x02, generation as u64),
            Stream::Crossover { first_offspring } => (0x03, first_offspring.0),
            Stream::Mutation { offspring } => (0x04, offspring.0),
            Stream::Measures { generation } => (0x05, generation as u64),
        };
        (domain << 56) | (low & LOW_MASK)
    }
}

/// Returns the generator for `stream` under the run `seed`.
pub fn stream(seed: u64, stream: Stream) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}
