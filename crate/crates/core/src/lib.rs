//! Keyless message encryption over a shared memristor-image lookup table.
//!
//! Sender and receiver share a device ID, a password and a 128 x 8 table of
//! memristor resistance readings. For every message the sender draws a fresh
//! 16-byte nonce; both sides expand `(id ^ pw, nonce)` into a 512-byte long
//! digest, slice it into 17-bit cell selectors, and use the selected
//! resistances to carry plaintext nibbles. The order fields of the selectors
//! permute the result. No key is ever transmitted; the nonce travels in clear.
//!
//! ```
//! use keyless_core::{decrypt_message, encrypt_message, Credentials, MemristorImage, SessionNonce};
//!
//! let cred = Credentials::new(b"device-0001", b"shared-password").unwrap();
//! let img = MemristorImage::generate(7);
//! let rn = SessionNonce([0x42; 16]);
//! let cipher = encrypt_message(b"Keyless", &cred, &rn, &img).unwrap();
//! assert_eq!(cipher.len(), 15);
//! assert_eq!(decrypt_message(&cipher, &cred, &rn, &img).unwrap(), b"Keyless");
//! ```

pub mod cipher;
pub mod digest;
pub mod error;
pub mod image;
pub mod kat;
pub mod wire;

pub use cipher::{
    apply_permutation, decode_transit, decrypt_message, encode_transit, encrypt_message,
    encrypt_traced, from_nibbles, invert_permutation, stable_order_permutation, to_nibbles,
    CipherParams, EncryptionTrace, FinalCipher, Schedule, TransitCipher, MAX_PLAINTEXT,
};
pub use digest::{
    build_long_digest, extract_selectors, normalize_credential, rotl16, seed_digest, CellSelector,
    Credentials, LongDigest, SessionNonce, MAX_SELECTORS,
};
pub use error::{Error, Result};
pub use image::MemristorImage;
pub use wire::{
    decode_frame, encode_frame, receive_message, send_message, send_message_with_nonce, NonceMode,
    NonceStore,
};
