//! Long message digest schedule.
//!
//! Both parties derive the same 512-byte long digest from the shared device
//! ID, the shared password and the per-message nonce:
//!
//! ```text
//! seed  = SHA-256((id ^ pw) || rn)
//! v0    = u16::from_be_bytes(seed[0..2])
//! M_i   = seed with bytes 0..2 replaced by rotl16(v0, i)      i = 0..16
//! lmd   = SHA-256(M_0) || SHA-256(M_1) || ... || SHA-256(M_15)
//! ```
//!
//! The long digest is then read as an MSB-first bitstream of 17-bit cell
//! selectors (7-bit address, 3-bit current level, 7-bit order).

use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CREDENTIAL_LEN: usize = 32;
pub const NONCE_LEN: usize = 16;
pub const SEED_LEN: usize = 32;
pub const ROUNDS: usize = 16;
pub const LONG_DIGEST_LEN: usize = ROUNDS * SEED_LEN;
pub const SELECTOR_BITS: usize = 17;
/// floor(4096 / 17); the trailing 16 bits of the long digest are unused.
pub const MAX_SELECTORS: usize = LONG_DIGEST_LEN * 8 / SELECTOR_BITS;

const MAX_RAW_CREDENTIAL: usize = 1024;

/// Truncate or zero-pad raw credential material to 32 bytes.
pub fn normalize_credential(raw: &[u8]) -> Result<[u8; CREDENTIAL_LEN]> {
    if raw.is_empty() {
        return Err(Error::InvalidCredential("empty"));
    }
    if raw.len() > MAX_RAW_CREDENTIAL {
        return Err(Error::InvalidCredential("longer than 1024 bytes"));
    }
    let mut out = [0u8; CREDENTIAL_LEN];
    let n = raw.len().min(CREDENTIAL_LEN);
    out[..n].copy_from_slice(&raw[..n]);
    Ok(out)
}

/// Device ID and shared password, both normalized to 32 bytes.
#[derive(Clone, PartialEq, Eq)]
pub struct Credentials {
    id: [u8; CREDENTIAL_LEN],
    pw: [u8; CREDENTIAL_LEN],
}

impl Credentials {
    pub fn new(id: &[u8], pw: &[u8]) -> Result<Self> {
        Ok(Self {
            id: normalize_credential(id)?,
            pw: normalize_credential(pw)?,
        })
    }

    pub fn from_normalized(id: [u8; CREDENTIAL_LEN], pw: [u8; CREDENTIAL_LEN]) -> Self {
        Self { id, pw }
    }

    pub fn id(&self) -> &[u8; CREDENTIAL_LEN] {
        &self.id
    }

    pub fn pw(&self) -> &[u8; CREDENTIAL_LEN] {
        &self.pw
    }

    fn xored(&self) -> [u8; CREDENTIAL_LEN] {
        let mut out = [0u8; CREDENTIAL_LEN];
        for (o, (a, b)) in out.iter_mut().zip(self.id.iter().zip(self.pw.iter())) {
            *o = a ^ b;
        }
        out
    }
}

impl fmt::Debug for Credentials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Credentials { .. }")
    }
}

/// Per-message random number, sent in clear alongside the cipher.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SessionNonce(pub [u8; NONCE_LEN]);

impl SessionNonce {
    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() != NONCE_LEN * 2 {
            return Err(Error::NonceFormat(format!(
                "expected {} hex characters, got {}",
                NONCE_LEN * 2,
                s.len()
            )));
        }
        let mut out = [0u8; NONCE_LEN];
        hex::decode_to_slice(s, &mut out).map_err(|e| Error::NonceFormat(e.to_string()))?;
        Ok(Self(out))
    }

    pub fn as_bytes(&self) -> &[u8; NONCE_LEN] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for SessionNonce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SessionNonce({})", self.to_hex())
    }
}

impl fmt::Display for SessionNonce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// SHA-256 over `(id ^ pw) || rn`.
pub fn seed_digest(cred: &Credentials, rn: &SessionNonce) -> [u8; SEED_LEN] {
    let mut h = Sha256::new();
    h.update(cred.xored());
    h.update(rn.0);
    h.finalize().into()
}

#[inline]
pub fn rotl16(value: u16, k: u32) -> u16 {
    value.rotate_left(k % 16)
}

/// The 512-byte concatenation of the 16 rotate-and-hash digests.
#[derive(Clone, PartialEq, Eq)]
pub struct LongDigest(Box<[u8; LONG_DIGEST_LEN]>);

impl LongDigest {
    pub fn from_bytes(bytes: [u8; LONG_DIGEST_LEN]) -> Self {
        Self(Box::new(bytes))
    }

    pub fn as_bytes(&self) -> &[u8; LONG_DIGEST_LEN] {
        &self.0
    }

    /// Digest block `i` (32 bytes).
    pub fn block(&self, i: usize) -> &[u8] {
        &self.0[i * SEED_LEN..(i + 1) * SEED_LEN]
    }
}

impl fmt::Debug for LongDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LongDigest({}..)", hex::encode(&self.0[..8]))
    }
}

pub fn build_long_digest(seed: &[u8; SEED_LEN]) -> LongDigest {
    let v0 = u16::from_be_bytes([seed[0], seed[1]]);
    let mut msg = *seed;
    let mut out = Box::new([0u8; LONG_DIGEST_LEN]);
    for (i, chunk) in out.chunks_exact_mut(SEED_LEN).enumerate() {
        msg[..2].copy_from_slice(&rotl16(v0, i as u32).to_be_bytes());
        chunk.copy_from_slice(&Sha256::digest(msg));
    }
    LongDigest(out)
}

/// One 17-bit slice of the long digest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellSelector {
    address: u8,
    current: u8,
    order: u8,
}

impl CellSelector {
    pub const ADDRESS_MAX: u8 = 0x7F;
    pub const CURRENT_MAX: u8 = 0x07;
    pub const ORDER_MAX: u8 = 0x7F;

    pub fn new(address: u8, current: u8, order: u8) -> Option<Self> {
        (address <= Self::ADDRESS_MAX && current <= Self::CURRENT_MAX && order <= Self::ORDER_MAX)
            .then_some(Self {
                address,
                current,
                order,
            })
    }

    /// Split the low 17 bits of `bits` as `address:7 | current:3 | order:7`.
    pub fn from_bits(bits: u32) -> Self {
        Self {
            address: ((bits >> 10) & 0x7F) as u8,
            current: ((bits >> 7) & 0x07) as u8,
            order: (bits & 0x7F) as u8,
        }
    }

    pub fn to_bits(self) -> u32 {
        (u32::from(self.address) << 10) | (u32::from(self.current) << 7) | u32::from(self.order)
    }

    pub fn address(self) -> u8 {
        self.address
    }

    pub fn current(self) -> u8 {
        self.current
    }

    pub fn order(self) -> u8 {
        self.order
    }
}

pub fn extract_selectors(lmd: &LongDigest, count: usize) -> Result<Vec<CellSelector>> {
    if count > MAX_SELECTORS {
        return Err(Error::SelectorBudgetExceeded {
            requested: count,
            max: MAX_SELECTORS,
        });
    }
    let bytes = lmd.as_bytes();
    Ok((0..count)
        .map(|k| {
            let bit = k * SELECTOR_BITS;
            let (at, skew) = (bit / 8, bit % 8);
            // 17 bits starting at any offset fit in the next three bytes.
            let window = (u32::from(bytes[at]) << 16)
                | (u32::from(bytes[at + 1]) << 8)
                | u32::from(bytes[at + 2]);
            CellSelector::from_bits(window >> (24 - SELECTOR_BITS - skew))
        })
        .collect())
}
