//! Message frames and the one-frame-per-message transport.
//!
//! ```text
//! offset  size     field
//! 0       4        magic "KEM1" (4B 45 4D 31)
//! 4       1        version 0x01
//! 5       16       rn
//! 21      2        count, u16 big-endian (odd, 3..=240)
//! 23      8*count  values, IEEE-754 binary64 big-endian
//! ```
//!
//! On a stream each frame is preceded by its length as a big-endian `u32`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use crate::cipher::{
    decrypt_message, encrypt_message, FinalCipher, MAX_CIPHER_LEN, MIN_CIPHER_LEN,
};
use crate::digest::{Credentials, SessionNonce, NONCE_LEN};
use crate::error::{Error, Result};
use crate::image::MemristorImage;

pub const MAGIC: [u8; 4] = *b"KEM1";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 4 + 1 + NONCE_LEN + 2;
pub const MAX_FRAME_LEN: usize = HEADER_LEN + 8 * MAX_CIPHER_LEN;

pub fn frame_len(count: usize) -> usize {
    HEADER_LEN + 8 * count
}

/// Where the next nonce comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonceMode {
    /// Reuse the nonce on record.
    Saved,
    /// Caller-supplied, 32 hex characters.
    Provided(String),
    /// Operating-system CSPRNG.
    System,
}

pub fn system_nonce() -> Result<SessionNonce> {
    let mut rn = [0u8; NONCE_LEN];
    getrandom::fill(&mut rn).map_err(|e| Error::Entropy(e.to_string()))?;
    Ok(SessionNonce(rn))
}

/// Remembers the last nonce handed out, optionally backed by a file holding
/// its hex form.
#[derive(Debug, Default)]
pub struct NonceStore {
    saved: Option<SessionNonce>,
    path: Option<PathBuf>,
}

impl NonceStore {
    pub fn in_memory(saved: Option<SessionNonce>) -> Self {
        Self { saved, path: None }
    }

    /// Open a file-backed store. A missing file means no nonce on record.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let saved = match fs::read_to_string(&path) {
            Ok(s) => Some(SessionNonce::from_hex(&s)?),
            Err(e) if e.kind() == io::ErrorKind::NotFound => None,
            Err(e) => return Err(Error::Io(e)),
        };
        Ok(Self {
            saved,
            path: Some(path),
        })
    }

    pub fn saved(&self) -> Option<SessionNonce> {
        self.saved
    }

    pub fn new_nonce(&mut self, mode: &NonceMode) -> Result<SessionNonce> {
        let rn = match mode {
            NonceMode::Saved => self.saved.ok_or(Error::NoSavedNonce)?,
            NonceMode::Provided(hex) => SessionNonce::from_hex(hex)?,
            NonceMode::System => system_nonce()?,
        };
        self.record(rn)?;
        Ok(rn)
    }

    fn record(&mut self, rn: SessionNonce) -> Result<()> {
        self.saved = Some(rn);
        if let Some(path) = &self.path {
            fs::write(path, format!("{}\n", rn.to_hex())).map_err(Error::Io)?;
        }
        Ok(())
    }
}

pub fn encode_frame(rn: &SessionNonce, cipher: &FinalCipher) -> Vec<u8> {
    let values = cipher.values();
    let mut out = Vec::with_capacity(frame_len(values.len()));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(rn.as_bytes());
    out.extend_from_slice(&(values.len() as u16).to_be_bytes());
    for v in values {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

pub fn decode_frame(bytes: &[u8]) -> Result<(SessionNonce, FinalCipher)> {
    if bytes.len() < MAGIC.len() {
        return Err(Error::MalformedFrame(format!(
            "{} bytes is too short",
            bytes.len()
        )));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::WrongProtocol);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::MalformedFrame(format!(
            "truncated header: {} of {HEADER_LEN} bytes",
            bytes.len()
        )));
    }
    if bytes[4] != VERSION {
        return Err(Error::UnsupportedVersion(bytes[4]));
    }
    let mut rn = [0u8; NONCE_LEN];
    rn.copy_from_slice(&bytes[5..5 + NONCE_LEN]);
    let count = usize::from(u16::from_be_bytes([bytes[21], bytes[22]]));
    if count.is_multiple_of(2) || !(MIN_CIPHER_LEN..=MAX_CIPHER_LEN).contains(&count) {
        return Err(Error::MalformedFrame(format!(
            "invalid value count {count}"
        )));
    }
    if bytes.len() != frame_len(count) {
        return Err(Error::MalformedFrame(format!(
            "expected {} bytes for {count} values, got {}",
            frame_len(count),
            bytes.len()
        )));
    }
    let values = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .enumerate()
        .map(|(index, chunk)| {
            let v = f64::from_be_bytes(chunk.try_into().expect("chunk of 8"));
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::CorruptFrame { index })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((SessionNonce(rn), FinalCipher(values)))
}

/// Write one length-prefixed frame.
pub fn write_frame<W: Write>(stream: &mut W, frame: &[u8]) -> Result<()> {
    stream
        .write_all(&(frame.len() as u32).to_be_bytes())
        .and_then(|_| stream.write_all(frame))
        .and_then(|_| stream.flush())
        .map_err(Error::Transport)
}

/// Read one length-prefixed frame.
pub fn read_frame<R: Read>(stream: &mut R) -> Result<Vec<u8>> {
    let mut prefix = [0u8; 4];
    stream.read_exact(&mut prefix).map_err(Error::Transport)?;
    let len = u32::from_be_bytes(prefix) as usize;
    if len > MAX_FRAME_LEN {
        return Err(Error::MalformedFrame(format!(
            "length prefix {len} exceeds {MAX_FRAME_LEN}"
        )));
    }
    let mut frame = vec![0u8; len];
    stream.read_exact(&mut frame).map_err(Error::Transport)?;
    Ok(frame)
}

/// Encrypt under `rn` and send one frame.
pub fn send_message_with_nonce<W: Write>(
    stream: &mut W,
    plaintext: &[u8],
    cred: &Credentials,
    img: &MemristorImage,
    rn: SessionNonce,
) -> Result<SessionNonce> {
    let cipher = encrypt_message(plaintext, cred, &rn, img)?;
    write_frame(stream, &encode_frame(&rn, &cipher))?;
    Ok(rn)
}

/// Encrypt under a fresh system nonce and send one frame.
pub fn send_message<W: Write>(
    stream: &mut W,
    plaintext: &[u8],
    cred: &Credentials,
    img: &MemristorImage,
) -> Result<SessionNonce> {
    send_message_with_nonce(stream, plaintext, cred, img, system_nonce()?)
}

pub fn receive_message<R: Read>(
    stream: &mut R,
    cred: &Credentials,
    img: &MemristorImage,
) -> Result<Vec<u8>> {
    let frame = read_frame(stream)?;
    let (rn, cipher) = decode_frame(&frame)?;
    decrypt_message(&cipher, cred, &rn, img)
}
