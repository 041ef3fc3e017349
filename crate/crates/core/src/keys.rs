//! Key material: per-block evaluation points derived from `K_E`, random
//! polynomial coefficients, and the payload keystream keyed by `K_D`.
//!
//! Both keys drive an IETF ChaCha20 keystream (RFC 8439). The 96-bit nonce
//! is a one-byte domain tag followed by zeros and, for evaluation points,
//! the block index as a big-endian `u64`:
//!
//! ```text
//! derive_x:       nonce = 'x' 00 00 00 | block_index (u64 BE)
//! payload_cipher: nonce = 'p' 00 ... 00
//! ```
//!
//! Evaluation points are drawn from the keystream bytes in order, skipping
//! zero and any byte already chosen, until `n` points are collected.

use std::fs;
use std::path::Path;

use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20::ChaCha20;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::gf256::FieldElement;

pub const KEY_LEN: usize = 32;

const X_DOMAIN: u8 = b'x';
const PAYLOAD_DOMAIN: u8 = b'p';

fn read_key_file(path: &Path) -> Result<[u8; KEY_LEN]> {
    let bytes = fs::read(path)?;
    bytes.as_slice().try_into().map_err(|_| {
        Error::InvalidArgument(format!(
            "key file {} holds {} bytes, expected {KEY_LEN}",
            path.display(),
            bytes.len()
        ))
    })
}

/// `K_E`: determines every block's evaluation points.
#[derive(Clone, PartialEq, Eq)]
pub struct EncryptionKey([u8; KEY_LEN]);

/// `K_D`: enciphers the embedded payload.
#[derive(Clone, PartialEq, Eq)]
pub struct DataHidingKey([u8; KEY_LEN]);

macro_rules! key_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(bytes: [u8; KEY_LEN]) -> Self {
                $ty(bytes)
            }

            pub fn from_slice(bytes: &[u8]) -> Result<Self> {
                bytes.try_into().map($ty).map_err(|_| {
                    Error::InvalidArgument(format!(
                        "key must be {KEY_LEN} bytes, got {}",
                        bytes.len()
                    ))
                })
            }

            pub fn load(path: impl AsRef<Path>) -> Result<Self> {
                read_key_file(path.as_ref()).map($ty)
            }

            pub fn generate(rng: &mut impl RngCore) -> Self {
                let mut k = [0u8; KEY_LEN];
                rng.fill_bytes(&mut k);
                $ty(k)
            }

            pub fn as_bytes(&self) -> &[u8; KEY_LEN] {
                &self.0
            }
        }

        impl std::fmt::Debug for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(concat!(stringify!($ty), "(..)"))
            }
        }
    };
}

key_common!(EncryptionKey);
key_common!(DataHidingKey);

fn keystream(key: &[u8; KEY_LEN], nonce: [u8; 12]) -> ChaCha20 {
    ChaCha20::new(key.into(), &nonce.into())
}

/// Derives the `n` distinct nonzero evaluation points of block `block_index`.
pub fn derive_x(key: &EncryptionKey, block_index: u64, n: usize) -> Result<Vec<FieldElement>> {
    if n == 0 || n > 255 {
        return Err(Error::Params(format!(
            "share count must be in 1..=255, got {n}"
        )));
    }
    let mut nonce = [0u8; 12];
    nonce[0] = X_DOMAIN;
    nonce[4..].copy_from_slice(&block_index.to_be_bytes());
    let mut stream = keystream(&key.0, nonce);

    let mut seen = [false; 256];
    seen[0] = true;
    let mut out = Vec::with_capacity(n);
    let mut buf = [0u8; 64];
    while out.len() < n {
        buf.fill(0);
        stream.apply_keystream(&mut buf);
        for &b in &buf {
            if !seen[b as usize] {
                seen[b as usize] = true;
                out.push(FieldElement(b));
                if out.len() == n {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Draws the `r - 1` random coefficients of one block. These come from the
/// caller's entropy source and never from `K_E`.
pub fn sample_a(rng: &mut impl RngCore, r: usize) -> Vec<FieldElement> {
    let mut bytes = vec![0u8; r.saturating_sub(1)];
    rng.fill_bytes(&mut bytes);
    bytes.into_iter().map(FieldElement).collect()
}

/// XORs `data` with the `K_D` keystream. Applying it twice is the identity.
pub fn payload_cipher(key: &DataHidingKey, data: &[u8]) -> Vec<u8> {
    let mut nonce = [0u8; 12];
    nonce[0] = PAYLOAD_DOMAIN;
    let mut out = data.to_vec();
    keystream(&key.0, nonce).apply_keystream(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ke() -> EncryptionKey {
        EncryptionKey::new(std::array::from_fn(|i| i as u8))
    }

    #[test]
    fn chacha20_block_function_vector() {
        // RFC 8439 2.3.2: key 00..1f, nonce 00:00:00:09:00:00:00:4a:00:00:00:00, counter 1
        let key: [u8; 32] = std::array::from_fn(|i| i as u8);
        let nonce = [0, 0, 0, 9, 0, 0, 0, 0x4a, 0, 0, 0, 0];
        let mut buf = [0u8; 128];
        keystream(&key, nonce).apply_keystream(&mut buf);
        assert_eq!(
            &buf[64..80],
            &[
                0x10, 0xf1, 0xe7, 0xe4, 0xd1, 0x3b, 0x59, 0x15, 0x50, 0x0f, 0xdd, 0x1f, 0xa3, 0x20,
                0x71, 0xc4
            ]
        );
    }

    #[test]
    fn derive_x_pinned_vectors() {
        let xs: Vec<u8> = derive_x(&ke(), 0, 6)
            .unwrap()
            .into_iter()
            .map(u8::from)
            .collect();
        assert_eq!(xs, X_BLOCK0_N6);
        let xs: Vec<u8> = derive_x(&ke(), 4095, 4)
            .unwrap()
            .into_iter()
            .map(u8::from)
            .collect();
        assert_eq!(xs, X_BLOCK4095_N4);
    }

    // Cross-checked against an independent ChaCha20 implementation.
    const X_BLOCK0_N6: [u8; 6] = [208, 53, 195, 98, 240, 116];
    const X_BLOCK4095_N4: [u8; 4] = [211, 231, 198, 251];

    #[test]
    fn derive_x_distinct_nonzero_deterministic() {
        let k = ke();
        for block in 0..200u64 {
            for n in [1usize, 2, 3, 6, 17, 255] {
                let xs = derive_x(&k, block, n).unwrap();
                assert_eq!(xs.len(), n);
                assert!(xs.iter().all(|x| x.0 != 0));
                let mut sorted: Vec<u8> = xs.iter().map(|x| x.0).collect();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), n);
                assert_eq!(xs, derive_x(&k, block, n).unwrap());
            }
        }
        let mut full: Vec<u8> = derive_x(&k, 9, 255).unwrap().iter().map(|x| x.0).collect();
        full.sort_unstable();
        assert_eq!(full, (1..=255).collect::<Vec<u8>>());
    }

    #[test]
    fn derive_x_rejects_too_many() {
        assert!(matches!(derive_x(&ke(), 0, 256), Err(Error::Params(_))));
        assert!(matches!(derive_x(&ke(), 0, 0), Err(Error::Params(_))));
    }

    #[test]
    fn derive_x_varies_across_blocks() {
        // Four-byte outputs collide by chance with probability ~2^-30 per pair.
        let k = ke();
        let prev: Vec<_> = (0..10_000u64)
            .map(|i| derive_x(&k, i, 4).unwrap())
            .collect();
        let differing = prev.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(differing, prev.len() - 1);
        // and the other key gives a different mapping
        let other = EncryptionKey::new([7; 32]);
        assert_ne!(derive_x(&other, 0, 4).unwrap(), prev[0]);
    }

    #[test]
    fn sample_a_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(sample_a(&mut rng, 2).len(), 1);
        assert_eq!(sample_a(&mut rng, 6).len(), 5);
        let a1 = sample_a(&mut ChaCha8Rng::seed_from_u64(9), 4);
        let a2 = sample_a(&mut ChaCha8Rng::seed_from_u64(9), 4);
        assert_eq!(a1, a2);
    }

    #[test]
    fn payload_cipher_involution() {
        let kd = DataHidingKey::new([3; 32]);
        assert!(payload_cipher(&kd, &[]).is_empty());
        let msg: Vec<u8> = (0..1024).map(|i| (i * 7 % 251) as u8).collect();
        let ct = payload_cipher(&kd, &msg);
        assert_eq!(ct.len(), msg.len());
        assert_ne!(ct, msg);
        assert_eq!(payload_cipher(&kd, &ct), msg);
    }

    #[test]
    fn key_from_slice_checks_length() {
        assert!(EncryptionKey::from_slice(&[0; 31]).is_err());
        assert!(DataHidingKey::from_slice(&[0; 32]).is_ok());
    }
}
