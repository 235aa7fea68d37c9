//! Transit-cipher encoding and the order permutation.
//!
//! A plaintext of `n` bytes becomes `2n` nibbles. Each nibble `q` is carried
//! by one memristor reading `r` as `r * (1 + K q)` with `K = 0.2`; one extra
//! leading calibration element `r0 * 2.5` is prepended, giving `N = 2n + 1`
//! transit values. The transit values are then permuted by the stable
//! argsort of the selectors' order fields to form the final cipher.

use crate::digest::{
    build_long_digest, extract_selectors, seed_digest, CellSelector, Credentials, LongDigest,
    SessionNonce, MAX_SELECTORS, SEED_LEN,
};
use crate::error::{Error, Result};
use crate::image::MemristorImage;

/// Longest plaintext whose cipher fits the selector budget: `2n + 1 <= 240`.
pub const MAX_PLAINTEXT: usize = (MAX_SELECTORS - 1) / 2;
pub const MIN_CIPHER_LEN: usize = 3;
pub const MAX_CIPHER_LEN: usize = 2 * MAX_PLAINTEXT + 1;

/// Residual beyond which a recovered nibble is treated as corruption.
pub const RESIDUAL_GUARD: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CipherParams {
    pub k: f64,
    pub calibration_factor: f64,
}

impl CipherParams {
    pub const K: f64 = 0.2;
    pub const CALIBRATION_FACTOR: f64 = 1.0 + 7.5 * Self::K;
}

impl Default for CipherParams {
    fn default() -> Self {
        Self {
            k: Self::K,
            calibration_factor: Self::CALIBRATION_FACTOR,
        }
    }
}

/// Pre-permutation cipher values; element 0 is the calibration element.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitCipher(pub Vec<f64>);

/// The transmitted, permuted cipher values.
#[derive(Clone, Debug, PartialEq)]
pub struct FinalCipher(pub Vec<f64>);

impl FinalCipher {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_plaintext_len(len: usize) -> Result<()> {
    match len {
        0 => Err(Error::EmptyPlaintext),
        n if n > MAX_PLAINTEXT => Err(Error::MessageTooLong {
            len: n,
            max: MAX_PLAINTEXT,
        }),
        _ => Ok(()),
    }
}

/// High nibble first.
pub fn to_nibbles(plaintext: &[u8]) -> Result<Vec<u8>> {
    check_plaintext_len(plaintext.len())?;
    Ok(plaintext.iter().flat_map(|b| [b >> 4, b & 0x0F]).collect())
}

pub fn from_nibbles(nibbles: &[u8]) -> Result<Vec<u8>> {
    if !nibbles.len().is_multiple_of(2) {
        return Err(Error::SizeMismatch {
            expected: nibbles.len() + 1,
            actual: nibbles.len(),
        });
    }
    if let Some((index, &value)) = nibbles.iter().enumerate().find(|(_, &v)| v > 0x0F) {
        return Err(Error::NibbleRange { index, value });
    }
    Ok(nibbles
        .chunks_exact(2)
        .map(|p| (p[0] << 4) | p[1])
        .collect())
}

pub fn encode_transit(
    nibbles: &[u8],
    resistances: &[f64],
    params: &CipherParams,
) -> Result<TransitCipher> {
    if resistances.len() != nibbles.len() + 1 {
        return Err(Error::SizeMismatch {
            expected: nibbles.len() + 1,
            actual: resistances.len(),
        });
    }
    let mut out = Vec::with_capacity(resistances.len());
    out.push(resistances[0] * params.calibration_factor);
    out.extend(
        resistances[1..]
            .iter()
            .zip(nibbles)
            .map(|(&r, &q)| r * (1.0 + params.k * f64::from(q))),
    );
    Ok(TransitCipher(out))
}

/// Unrounded nibble estimate for one transit value.
#[inline]
pub fn recover_estimate(value: f64, resistance: f64, params: &CipherParams) -> f64 {
    (value / resistance - 1.0) / params.k
}

pub fn decode_transit(
    transit: &TransitCipher,
    resistances: &[f64],
    params: &CipherParams,
) -> Result<Vec<u8>> {
    let values = &transit.0;
    if values.len() != resistances.len() {
        return Err(Error::SizeMismatch {
            expected: resistances.len(),
            actual: values.len(),
        });
    }
    if values.is_empty() {
        return Err(Error::MalformedCipher { len: 0 });
    }
    values
        .iter()
        .zip(resistances)
        .enumerate()
        .skip(1)
        .map(|(index, (&v, &r))| {
            let q = recover_estimate(v, r, params);
            // f64::round rounds half away from zero, like C's roundf.
            let n = q.round();
            if q.is_finite() && (0.0..=15.0).contains(&n) && (q - n).abs() < RESIDUAL_GUARD {
                Ok(n as u8)
            } else {
                Err(Error::CorruptCipher { index })
            }
        })
        .collect()
}

/// Stable argsort: `orders[p[0]] <= orders[p[1]] <= ...`, ties by index.
pub fn stable_order_permutation<T: Ord>(orders: &[T]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..orders.len()).collect();
    p.sort_by(|&a, &b| orders[a].cmp(&orders[b]));
    p
}

fn check_permutation(p: &[usize]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &i in p {
        match seen.get_mut(i) {
            None => return Err(Error::Permutation("index out of range")),
            Some(true) => return Err(Error::Permutation("repeated index")),
            Some(s) => *s = true,
        }
    }
    Ok(())
}

/// `out[i] = values[p[i]]`.
pub fn apply_permutation<T: Copy>(values: &[T], p: &[usize]) -> Result<Vec<T>> {
    if values.len() != p.len() {
        return Err(Error::Permutation("length differs from values"));
    }
    check_permutation(p)?;
    Ok(p.iter().map(|&i| values[i]).collect())
}

/// `q[p[i]] = i`.
pub fn invert_permutation(p: &[usize]) -> Result<Vec<usize>> {
    check_permutation(p)?;
    let mut q = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        q[pi] = i;
    }
    Ok(q)
}

/// Per-message material both sides derive from `(cred, rn, img)`.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub seed: [u8; SEED_LEN],
    pub long_digest: LongDigest,
    pub selectors: Vec<CellSelector>,
    pub resistances: Vec<f64>,
    pub permutation: Vec<usize>,
}

impl Schedule {
    /// Derive the schedule for a cipher of `len` elements.
    pub fn derive(
        cred: &Credentials,
        rn: &SessionNonce,
        img: &MemristorImage,
        len: usize,
    ) -> Result<Self> {
        let seed = seed_digest(cred, rn);
        let long_digest = build_long_digest(&seed);
        let selectors = extract_selectors(&long_digest, len)?;
        let resistances = selectors.iter().map(|&s| img.read_cell(s)).collect();
        let orders: Vec<u8> = selectors.iter().map(|s| s.order()).collect();
        let permutation = stable_order_permutation(&orders);
        Ok(Self {
            seed,
            long_digest,
            selectors,
            resistances,
            permutation,
        })
    }
}

/// Every intermediate of one encryption, for known-answer vectors.
#[derive(Clone, Debug)]
pub struct EncryptionTrace {
    pub schedule: Schedule,
    pub nibbles: Vec<u8>,
    pub transit: TransitCipher,
    pub cipher: FinalCipher,
}

pub fn encrypt_traced(
    plaintext: &[u8],
    cred: &Credentials,
    rn: &SessionNonce,
    img: &MemristorImage,
) -> Result<EncryptionTrace> {
    let nibbles = to_nibbles(plaintext)?;
    let schedule = Schedule::derive(cred, rn, img, nibbles.len() + 1)?;
    let transit = encode_transit(&nibbles, &schedule.resistances, &CipherParams::default())?;
    let cipher = FinalCipher(apply_permutation(&transit.0, &schedule.permutation)?);
    Ok(EncryptionTrace {
        schedule,
        nibbles,
        transit,
        cipher,
    })
}

pub fn encrypt_message(
    plaintext: &[u8],
    cred: &Credentials,
    rn: &SessionNonce,
    img: &MemristorImage,
) -> Result<FinalCipher> {
    encrypt_traced(plaintext, cred, rn, img).map(|t| t.cipher)
}

pub fn decrypt_message(
    cipher: &FinalCipher,
    cred: &Credentials,
    rn: &SessionNonce,
    img: &MemristorImage,
) -> Result<Vec<u8>> {
    let len = cipher.len();
    if len.is_multiple_of(2) || !(MIN_CIPHER_LEN..=MAX_CIPHER_LEN).contains(&len) {
        return Err(Error::MalformedCipher { len });
    }
    let schedule = Schedule::derive(cred, rn, img, len)?;
    let restore = invert_permutation(&schedule.permutation)?;
    let transit = TransitCipher(apply_permutation(&cipher.0, &restore)?);
    let nibbles = decode_transit(&transit, &schedule.resistances, &CipherParams::default())?;
    from_nibbles(&nibbles)
}
