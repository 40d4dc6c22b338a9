//! Deterministic per-instance seeds.
//!
//! Every generated instance draws from its own ChaCha8 stream seeded by
//! [`derive_seed`]; no RNG state is shared between instances, so parallel and
//! sequential generation produce identical bytes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG used for all instance generation.
pub type InstanceRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub task_tag: String,
    pub index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, task_tag: impl Into<String>, index: u64) -> Self {
        SeedSpec {
            master_seed,
            task_tag: task_tag.into(),
            index,
        }
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn fmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn absorb(state: u64, word: u64) -> u64 {
    fmix64(state.wrapping_add(GOLDEN) ^ word)
}

/// Canonical byte encoding: master (LE u64), tag length (LE u64), tag bytes
/// zero-padded to 8-byte words, index (LE u64), nonce (LE u64).
fn encode(spec: &SeedSpec, nonce: u64) -> Vec<u64> {
    let tag = spec.task_tag.as_bytes();
    let mut words = vec![spec.master_seed, tag.len() as u64];
    for chunk in tag.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        words.push(u64::from_le_bytes(buf));
    }
    words.push(spec.index);
    words.push(nonce);
    words
}

/// Pure 64-bit seed for one instance.
pub fn derive_seed(spec: &SeedSpec) -> u64 {
    derive_seed_with_nonce(spec, 0)
}

/// Seed for the `nonce`-th retry of an instance whose generation was rejected.
/// `nonce == 0` is identical to [`derive_seed`].
pub fn derive_seed_with_nonce(spec: &SeedSpec, nonce: u64) -> u64 {
    encode(spec, nonce).into_iter().fold(0, absorb)
}

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}
