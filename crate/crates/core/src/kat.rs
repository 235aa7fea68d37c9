//! Known-answer vectors.
//!
//! The vector file is line oriented: `name = hexvalue` records, blank lines
//! and `#` comments. Doubles are IEEE-754 binary64 in big-endian order,
//! selectors are three bytes each (address, current, order) and permutation
//! entries are one byte each.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::cipher::encrypt_traced;
use crate::digest::{Credentials, SessionNonce};
use crate::error::Result;
use crate::image::MemristorImage;
use crate::wire::encode_frame;

/// Inputs of one vector.
#[derive(Clone, Debug)]
pub struct KatInput {
    pub id: Vec<u8>,
    pub pw: Vec<u8>,
    pub rn: [u8; 16],
    pub seed64: u64,
    pub plaintext: Vec<u8>,
}

/// The fixed input tuples emitted by [`generate`].
pub fn vectors() -> Vec<KatInput> {
    vec![
        KatInput {
            id: b"device-0001".to_vec(),
            pw: b"shared-password".to_vec(),
            rn: core::array::from_fn(|i| i as u8),
            seed64: 0,
            plaintext: b"Keyless".to_vec(),
        },
        KatInput {
            id: b"a".to_vec(),
            pw: b"a".to_vec(),
            rn: [0; 16],
            seed64: 1,
            plaintext: vec![0x00],
        },
        KatInput {
            id: b"sensor-node-17".to_vec(),
            pw: b"correct horse battery staple".to_vec(),
            rn: [0xA5; 16],
            seed64: 42,
            plaintext: b"Hello, IoT".to_vec(),
        },
        KatInput {
            id: vec![0xAA; 32],
            pw: (0u8..40).collect(),
            rn: [0xFF; 16],
            seed64: 0xDEAD_BEEF_CAFE_F00D,
            plaintext: (0..119u32).map(|i| (i * 37 + 11) as u8).collect(),
        },
    ]
}

fn doubles_hex(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| hex::encode(v.to_be_bytes()))
        .collect()
}

fn record(out: &mut String, prefix: &str, name: &str, value: impl AsRef<[u8]>) {
    writeln!(out, "{prefix}.{name} = {}", hex::encode(value)).expect("write to String");
}

/// Render the complete vector file.
pub fn generate() -> Result<String> {
    let mut out = String::new();
    out.push_str("# keyless known-answer vectors\n");
    out.push_str("# record: <vector>.<field> = <hex>\n");
    out.push_str(
        "# doubles: IEEE-754 binary64 big-endian; selectors: address,current,order bytes\n",
    );
    for (n, v) in vectors().iter().enumerate() {
        let prefix = format!("v{n}");
        let cred = Credentials::new(&v.id, &v.pw)?;
        let rn = SessionNonce(v.rn);
        let img = MemristorImage::generate(v.seed64);
        let trace = encrypt_traced(&v.plaintext, &cred, &rn, &img)?;
        let mut lut = Vec::new();
        img.save(&mut lut)?;

        writeln!(out, "\n# vector {n}").expect("write to String");
        record(&mut out, &prefix, "id", &v.id);
        record(&mut out, &prefix, "pw", &v.pw);
        record(&mut out, &prefix, "rn", v.rn);
        record(&mut out, &prefix, "seed64", v.seed64.to_be_bytes());
        record(&mut out, &prefix, "plaintext", &v.plaintext);
        record(&mut out, &prefix, "lut_sha256", Sha256::digest(&lut));
        record(&mut out, &prefix, "nibbles", &trace.nibbles);
        record(&mut out, &prefix, "seed_digest", trace.schedule.seed);
        record(
            &mut out,
            &prefix,
            "long_digest",
            trace.schedule.long_digest.as_bytes(),
        );
        let selectors: Vec<u8> = trace
            .schedule
            .selectors
            .iter()
            .flat_map(|s| [s.address(), s.current(), s.order()])
            .collect();
        record(&mut out, &prefix, "selectors", selectors);
        writeln!(
            out,
            "{prefix}.resistances = {}",
            doubles_hex(&trace.schedule.resistances)
        )
        .expect("write to String");
        writeln!(out, "{prefix}.transit = {}", doubles_hex(&trace.transit.0))
            .expect("write to String");
        let perm: Vec<u8> = trace
            .schedule
            .permutation
            .iter()
            .map(|&i| i as u8)
            .collect();
        record(&mut out, &prefix, "permutation", perm);
        writeln!(
            out,
            "{prefix}.final = {}",
            doubles_hex(trace.cipher.values())
        )
        .expect("write to String");
        record(&mut out, &prefix, "frame", encode_frame(&rn, &trace.cipher));
    }
    Ok(out)
}

/// Parse a vector file into `(name, bytes)` records in file order.
pub fn parse(text: &str) -> std::result::Result<Vec<(String, Vec<u8>)>, String> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let (name, value) = l
                .split_once('=')
                .ok_or_else(|| format!("line {}: missing '='", i + 1))?;
            let bytes = hex::decode(value.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
            Ok((name.trim().to_string(), bytes))
        })
        .collect()
}
