//! Deterministic derivation of RNG sub-seeds from one root seed.
//!
//! Every stochastic pipeline stage draws its seed here instead of consuming a
//! shared RNG stream, so adding or reordering stages never perturbs the
//! randomness of the others, and replicate `k` of a sweep cell gets the same
//! seed no matter how work is scheduled across threads.
//!
//! The mixer is splitmix64 folded over the input words; it is platform
//! independent and stable across releases (unlike `DefaultHasher`).

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a sequence of words into a root seed.
pub fn mix(root: u64, words: &[u64]) -> u64 {
    let mut state = root;
    let mut out = splitmix64(&mut state);
    for &w in words {
        state ^= w;
        out ^= splitmix64(&mut state);
    }
    out
}

/// Sub-seed for a named stream, e.g. `labeled(root, "empirical")`.
pub fn labeled(root: u64, label: &str) -> u64 {
    let mut words = Vec::with_capacity(label.len() / 8 + 1);
    let bytes = label.as_bytes();
    for chunk in bytes.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        words.push(u64::from_le_bytes(buf));
    }
    words.push(bytes.len() as u64);
    mix(root, &words)
}

/// Sub-seed for one replicate of a `(gamma, alpha)` sweep cell.
///
/// The float parameters enter via their bit patterns, so grids built the same
/// way hash the same on every platform.
pub fn cell(root: u64, gamma: f64, alpha: f64, replicate: u64) -> u64 {
    mix(root, &[gamma.to_bits(), alpha.to_bits(), replicate])
}
