// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 generator
//! (`rand_chacha::ChaCha8Rng`). A stream is identified by the user seed, a
//! purpose tag and an index: the seed and tag are mixed with SplitMix64 into
//! the 64-bit ChaCha seed, and the index selects the ChaCha stream number.
//! Streams with different tags or indices never overlap, so work split into
//! shards reproduces the same numbers regardless of how shards are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// FNV-1a; only used to turn a tag into a u64.
fn tag_hash(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Derive the 64-bit seed used for `(seed, tag)`.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    splitmix64(splitmix64(seed) ^ tag_hash(tag))
}

/// The generator for stream `index` of purpose `tag` under `seed`.
pub fn stream(seed: u64, tag: &str, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, tag));
    rng.set_stream(index);
    rng
}
