//! Seeding conventions.
//!
//! Every random stream in the crate is a ChaCha20 generator built with
//! [`rng`], i.e. `ChaCha20Rng::seed_from_u64(seed)`. Replication-level seeds
//! are derived with [`derive_seed`]: the first eight bytes (little endian) of
//! `SHA-256("arfisma/v1" || master || replication || stage tag)`. Streams for
//! different replications and stages never share state, so results do not
//! depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// Which part of a replication a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Simulation,
    EcfNodes,
    EcfRestart,
    MhChain,
}

impl Stage {
    pub fn tag(self) -> &'static str {
        match self {
            Stage::Simulation => "simulation",
            Stage::EcfNodes => "ecf-nodes",
            Stage::EcfRestart => "ecf-restart",
            Stage::MhChain => "mh-chain",
        }
    }
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn derive_seed(master: u64, replication: u64, stage: Stage) -> u64 {
    let mut h = Sha256::new();
    h.update(b"arfisma/v1");
    h.update(master.to_le_bytes());
    h.update(replication.to_le_bytes());
    h.update(stage.tag().as_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
