//! C ABI over `keyless-core`.
//!
//! Images and credentials are opaque handles created and released through
//! this API. Every fallible call returns a [`KlStatus`]; output buffers are
//! owned by the caller and sized with [`kl_frame_len`] or the plaintext
//! limit. Status values equal the `keyless` CLI exit codes.

use std::ffi::{c_char, CStr};
use std::fs::File;
use std::ptr;
use std::slice;

use keyless_core::wire::system_nonce;
use keyless_core::{
    decode_frame, decrypt_message, encode_frame, encrypt_message, CellSelector, Credentials, Error,
    MemristorImage, SessionNonce, MAX_PLAINTEXT,
};

/// Opaque memristor image.
pub struct KlImage(MemristorImage);

/// Opaque device ID and password pair.
pub struct KlCredentials(Credentials);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlStatus {
    Ok = 0,
    ImageIo = 3,
    ImageFormat = 4,
    ImageValue = 5,
    Io = 6,
    InvalidCredential = 10,
    NonceFormat = 11,
    NoSavedNonce = 12,
    Entropy = 13,
    EmptyPlaintext = 20,
    MessageTooLong = 21,
    NibbleRange = 22,
    SizeMismatch = 23,
    Permutation = 24,
    SelectorBudgetExceeded = 25,
    CorruptCipher = 30,
    MalformedCipher = 31,
    WrongProtocol = 40,
    UnsupportedVersion = 41,
    MalformedFrame = 42,
    CorruptFrame = 43,
    Transport = 50,
    NullArgument = 60,
    BufferTooSmall = 61,
    InvalidArgument = 62,
}

impl From<&Error> for KlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::ImageIo(_) => KlStatus::ImageIo,
            Error::ImageFormat(_) => KlStatus::ImageFormat,
            Error::ImageValue { .. } => KlStatus::ImageValue,
            Error::Io(_) => KlStatus::Io,
            Error::InvalidCredential(_) => KlStatus::InvalidCredential,
            Error::NonceFormat(_) => KlStatus::NonceFormat,
            Error::NoSavedNonce => KlStatus::NoSavedNonce,
            Error::Entropy(_) => KlStatus::Entropy,
            Error::EmptyPlaintext => KlStatus::EmptyPlaintext,
            Error::MessageTooLong { .. } => KlStatus::MessageTooLong,
            Error::NibbleRange { .. } => KlStatus::NibbleRange,
            Error::SizeMismatch { .. } => KlStatus::SizeMismatch,
            Error::Permutation(_) => KlStatus::Permutation,
            Error::SelectorBudgetExceeded { .. } => KlStatus::SelectorBudgetExceeded,
            Error::CorruptCipher { .. } => KlStatus::CorruptCipher,
            Error::MalformedCipher { .. } => KlStatus::MalformedCipher,
            Error::WrongProtocol => KlStatus::WrongProtocol,
            Error::UnsupportedVersion(_) => KlStatus::UnsupportedVersion,
            Error::MalformedFrame(_) => KlStatus::MalformedFrame,
            Error::CorruptFrame { .. } => KlStatus::CorruptFrame,
            Error::Transport(_) => KlStatus::Transport,
        }
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return KlStatus::from(&err),
        }
    };
}

/// Borrow `len` bytes at `data`; a zero length accepts a null pointer.
unsafe fn bytes<'a>(data: *const u8, len: usize) -> Option<&'a [u8]> {
    match (data.is_null(), len) {
        (_, 0) => Some(&[]),
        (true, _) => None,
        (false, n) => Some(slice::from_raw_parts(data, n)),
    }
}

impl KlStatus {
    const ALL: [KlStatus; 25] = [
        KlStatus::Ok,
        KlStatus::ImageIo,
        KlStatus::ImageFormat,
        KlStatus::ImageValue,
        KlStatus::Io,
        KlStatus::InvalidCredential,
        KlStatus::NonceFormat,
        KlStatus::NoSavedNonce,
        KlStatus::Entropy,
        KlStatus::EmptyPlaintext,
        KlStatus::MessageTooLong,
        KlStatus::NibbleRange,
        KlStatus::SizeMismatch,
        KlStatus::Permutation,
        KlStatus::SelectorBudgetExceeded,
        KlStatus::CorruptCipher,
        KlStatus::MalformedCipher,
        KlStatus::WrongProtocol,
        KlStatus::UnsupportedVersion,
        KlStatus::MalformedFrame,
        KlStatus::CorruptFrame,
        KlStatus::Transport,
        KlStatus::NullArgument,
        KlStatus::BufferTooSmall,
        KlStatus::InvalidArgument,
    ];
}

/// Static, NUL-terminated name for a status code; "Unknown" for values that
/// are not a `KlStatus`.
#[no_mangle]
pub extern "C" fn kl_status_name(status: i32) -> *const c_char {
    let Some(status) = KlStatus::ALL.iter().find(|s| **s as i32 == status) else {
        return c"Unknown".as_ptr();
    };
    let s: &'static CStr = match status {
        KlStatus::Ok => c"Ok",
        KlStatus::ImageIo => c"ImageIoError",
        KlStatus::ImageFormat => c"ImageFormatError",
        KlStatus::ImageValue => c"ImageValueError",
        KlStatus::Io => c"IoError",
        KlStatus::InvalidCredential => c"InvalidCredential",
        KlStatus::NonceFormat => c"NonceFormatError",
        KlStatus::NoSavedNonce => c"NoSavedNonce",
        KlStatus::Entropy => c"EntropyError",
        KlStatus::EmptyPlaintext => c"EmptyPlaintext",
        KlStatus::MessageTooLong => c"MessageTooLong",
        KlStatus::NibbleRange => c"NibbleRangeError",
        KlStatus::SizeMismatch => c"SizeMismatch",
        KlStatus::Permutation => c"PermutationError",
        KlStatus::SelectorBudgetExceeded => c"SelectorBudgetExceeded",
        KlStatus::CorruptCipher => c"CorruptCipher",
        KlStatus::MalformedCipher => c"MalformedCipher",
        KlStatus::WrongProtocol => c"WrongProtocol",
        KlStatus::UnsupportedVersion => c"UnsupportedVersion",
        KlStatus::MalformedFrame => c"MalformedFrame",
        KlStatus::CorruptFrame => c"CorruptFrame",
        KlStatus::Transport => c"TransportError",
        KlStatus::NullArgument => c"NullArgument",
        KlStatus::BufferTooSmall => c"BufferTooSmall",
        KlStatus::InvalidArgument => c"InvalidArgument",
    };
    s.as_ptr()
}

#[no_mangle]
pub extern "C" fn kl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Longest plaintext accepted by [`kl_encrypt`].
#[no_mangle]
pub extern "C" fn kl_max_plaintext() -> usize {
    MAX_PLAINTEXT
}

/// Frame size in bytes for a plaintext of `plaintext_len` bytes, or 0 when
/// that length cannot be encrypted.
#[no_mangle]
pub extern "C" fn kl_frame_len(plaintext_len: usize) -> usize {
    if (1..=MAX_PLAINTEXT).contains(&plaintext_len) {
        keyless_core::wire::frame_len(2 * plaintext_len + 1)
    } else {
        0
    }
}

/// Deterministic image from a 64-bit seed. Release with [`kl_image_free`].
#[no_mangle]
pub extern "C" fn kl_image_generate(seed64: u64) -> *mut KlImage {
    Box::into_raw(Box::new(KlImage(MemristorImage::generate(seed64))))
}

/// Load an image file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kl_image_load(path: *const c_char, out: *mut *mut KlImage) -> KlStatus {
    if path.is_null() || out.is_null() {
        return KlStatus::NullArgument;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        return KlStatus::InvalidArgument;
    };
    let file = try_status!(File::open(path).map_err(Error::ImageIo));
    let img = try_status!(MemristorImage::load(file));
    *out = Box::into_raw(Box::new(KlImage(img)));
    KlStatus::Ok
}

/// Write an image file.
///
/// # Safety
/// `img` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kl_image_save(img: *const KlImage, path: *const c_char) -> KlStatus {
    if img.is_null() || path.is_null() {
        return KlStatus::NullArgument;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        return KlStatus::InvalidArgument;
    };
    let file = try_status!(File::create(path).map_err(Error::ImageIo));
    try_status!((*img).0.save(std::io::BufWriter::new(file)));
    KlStatus::Ok
}

/// Read the resistance at `(address, current)`.
///
/// # Safety
/// `img` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_image_cell(
    img: *const KlImage,
    address: u8,
    current: u8,
    out: *mut f64,
) -> KlStatus {
    if img.is_null() || out.is_null() {
        return KlStatus::NullArgument;
    }
    let Some(sel) = CellSelector::new(address, current, 0) else {
        return KlStatus::InvalidArgument;
    };
    *out = (*img).0.read_cell(sel);
    KlStatus::Ok
}

/// # Safety
/// `img` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kl_image_free(img: *mut KlImage) {
    if !img.is_null() {
        drop(Box::from_raw(img));
    }
}

/// Normalize raw ID and password bytes into a credentials handle.
///
/// # Safety
/// `id`/`pw` must point to `id_len`/`pw_len` readable bytes, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_credentials_new(
    id: *const u8,
    id_len: usize,
    pw: *const u8,
    pw_len: usize,
    out: *mut *mut KlCredentials,
) -> KlStatus {
    if out.is_null() {
        return KlStatus::NullArgument;
    }
    let (Some(id), Some(pw)) = (bytes(id, id_len), bytes(pw, pw_len)) else {
        return KlStatus::NullArgument;
    };
    let cred = try_status!(Credentials::new(id, pw));
    *out = Box::into_raw(Box::new(KlCredentials(cred)));
    KlStatus::Ok
}

/// # Safety
/// `cred` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kl_credentials_free(cred: *mut KlCredentials) {
    if !cred.is_null() {
        drop(Box::from_raw(cred));
    }
}

/// Encrypt `plaintext` into a wire frame.
///
/// `rn` points to 16 nonce bytes, or is null to draw a fresh nonce from the
/// operating system. `frame_out` must hold `kl_frame_len(plaintext_len)`
/// bytes; the written size is stored in `frame_len_out`.
///
/// # Safety
/// All non-null pointers must be valid for the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn kl_encrypt(
    cred: *const KlCredentials,
    img: *const KlImage,
    plaintext: *const u8,
    plaintext_len: usize,
    rn: *const u8,
    frame_out: *mut u8,
    frame_cap: usize,
    frame_len_out: *mut usize,
) -> KlStatus {
    if cred.is_null() || img.is_null() || frame_out.is_null() || frame_len_out.is_null() {
        return KlStatus::NullArgument;
    }
    let Some(plaintext) = bytes(plaintext, plaintext_len) else {
        return KlStatus::NullArgument;
    };
    let rn = if rn.is_null() {
        try_status!(system_nonce())
    } else {
        let mut b = [0u8; 16];
        ptr::copy_nonoverlapping(rn, b.as_mut_ptr(), 16);
        SessionNonce(b)
    };
    let cipher = try_status!(encrypt_message(plaintext, &(*cred).0, &rn, &(*img).0));
    let frame = encode_frame(&rn, &cipher);
    *frame_len_out = frame.len();
    if frame.len() > frame_cap {
        return KlStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(frame.as_ptr(), frame_out, frame.len());
    KlStatus::Ok
}

/// Decrypt a wire frame. `plain_out` should hold `kl_max_plaintext()` bytes;
/// the recovered length is stored in `plain_len_out`.
///
/// # Safety
/// All pointers must be valid for the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn kl_decrypt(
    cred: *const KlCredentials,
    img: *const KlImage,
    frame: *const u8,
    frame_len: usize,
    plain_out: *mut u8,
    plain_cap: usize,
    plain_len_out: *mut usize,
) -> KlStatus {
    if cred.is_null() || img.is_null() || plain_out.is_null() || plain_len_out.is_null() {
        return KlStatus::NullArgument;
    }
    let Some(frame) = bytes(frame, frame_len) else {
        return KlStatus::NullArgument;
    };
    let (rn, cipher) = try_status!(decode_frame(frame));
    let plain = try_status!(decrypt_message(&cipher, &(*cred).0, &rn, &(*img).0));
    *plain_len_out = plain.len();
    if plain.len() > plain_cap {
        return KlStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(plain.as_ptr(), plain_out, plain.len());
    KlStatus::Ok
}
