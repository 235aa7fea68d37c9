//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

mod common;

use std::net::{TcpListener, TcpStream};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use common::oracle::{oracle_reorder, oracle_restore, records};
use common::{all_sequences, random_case, rng};
use keyless_core::cipher::RESIDUAL_GUARD;
use keyless_core::digest::LONG_DIGEST_LEN;
use keyless_core::{
    apply_permutation, build_long_digest, decode_frame, decode_transit, decrypt_message,
    encode_frame, encode_transit, encrypt_message, extract_selectors, from_nibbles,
    invert_permutation, kat, receive_message, rotl16, send_message, stable_order_permutation,
    to_nibbles, CellSelector, CipherParams, Credentials, Error, LongDigest, MemristorImage,
    SessionNonce, MAX_PLAINTEXT, MAX_SELECTORS,
};
use rand::Rng;

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

fn structural_constants() -> String {
    let lmd = build_long_digest(&[0x42; 32]);
    assert_eq!(lmd.as_bytes().len(), 512);
    assert_eq!(LONG_DIGEST_LEN, 512);
    assert_eq!(MAX_SELECTORS, 240);
    assert_eq!(extract_selectors(&lmd, 240).unwrap().len(), 240);
    assert!(matches!(
        extract_selectors(&lmd, 241),
        Err(Error::SelectorBudgetExceeded { .. })
    ));
    assert_eq!(MAX_PLAINTEXT, 119);
    let cred = Credentials::new(b"id", b"pw").unwrap();
    let img = MemristorImage::generate(0);
    let rn = SessionNonce([1; 16]);
    let c = encrypt_message(&[0x5A; 119], &cred, &rn, &img).unwrap();
    assert_eq!(c.len(), 239);
    assert_eq!(decrypt_message(&c, &cred, &rn, &img).unwrap(), [0x5A; 119]);
    assert!(matches!(
        encrypt_message(&[0x5A; 120], &cred, &rn, &img),
        Err(Error::MessageTooLong { len: 120, .. })
    ));
    "lmd=512 B, selectors=240, max plaintext=119 (120 rejected)".into()
}

fn paper_nibble_vector() -> String {
    let want = [4, 11, 6, 5, 7, 9, 6, 12, 6, 5, 7, 3, 7, 3];
    let n = to_nibbles(b"Keyless").unwrap();
    assert_eq!(n, want);
    assert_eq!(from_nibbles(&n).unwrap(), b"Keyless");
    format!("{n:?}")
}

fn round_trip_suite() -> String {
    let mut r = rng(3);
    let start = Instant::now();
    for _ in 0..1000 {
        let c = random_case(&mut r);
        let cipher = encrypt_message(&c.plaintext, &c.cred, &c.rn, &c.img).unwrap();
        assert_eq!(
            decrypt_message(&cipher, &c.cred, &c.rn, &c.img).unwrap(),
            c.plaintext
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
    format!("1000/1000 in {elapsed:.2?}")
}

fn oracle_equivalence() -> String {
    let check = |orders: &[u8], payloads: &[f64]| {
        let p = stable_order_permutation(orders);
        let fin = apply_permutation(payloads, &p).unwrap();
        assert_eq!(
            bits(&fin),
            bits(&oracle_reorder(&records(orders, payloads)))
        );
        let back = apply_permutation(&fin, &invert_permutation(&p).unwrap()).unwrap();
        assert_eq!(bits(&back), bits(&oracle_restore(&fin, orders)));
        assert_eq!(bits(&back), bits(payloads));
    };
    let exhaustive = all_sequences(6, 3);
    assert_eq!(exhaustive.len(), 729);
    for orders in &exhaustive {
        let payloads: Vec<f64> = (0..6).map(|i| 100.0 + 7.25 * i as f64).collect();
        check(orders, &payloads);
    }
    let mut r = rng(4);
    for _ in 0..10_000 {
        let len = r.random_range(1..=240);
        let orders: Vec<u8> = (0..len).map(|_| r.random_range(0..128)).collect();
        let payloads: Vec<f64> = (0..len).map(|_| r.random_range(100.0..4000.0)).collect();
        check(&orders, &payloads);
    }
    "729 exhaustive + 10000 random, 0 mismatches".into()
}

fn formula_accuracy() -> String {
    let params = CipherParams::default();
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let rs: Vec<f64> = (0..17).map(|_| r.random_range(100.0..1000.0)).collect();
        let nibbles: Vec<u8> = (0..16).collect();
        let t = encode_transit(&nibbles, &rs, &params).unwrap();
        for (i, &q) in nibbles.iter().enumerate() {
            let est = keyless_core::cipher::recover_estimate(t.0[i + 1], rs[i + 1], &params);
            worst = worst.max((est - f64::from(q)).abs());
        }
        assert_eq!(decode_transit(&t, &rs, &params).unwrap(), nibbles);
    }
    assert!(worst < 1e-9, "{worst:e}");
    assert!(worst < RESIDUAL_GUARD);
    format!("max |q̂-Q| = {worst:e}")
}

fn wrong_secret_rejection() -> String {
    let mut r = rng(6);
    let mut rates = Vec::new();
    for which in ["pw", "rn", "lut"] {
        let mut rejected = 0;
        for _ in 0..1000 {
            let c = random_case(&mut r);
            let cipher = encrypt_message(&c.plaintext, &c.cred, &c.rn, &c.img).unwrap();
            let res = match which {
                "pw" => {
                    let mut pw = c.pw.clone();
                    let at = r.random_range(0..pw.len().min(32));
                    pw[at] ^= 1 << r.random_range(0..8);
                    let cred = Credentials::new(&c.id, &pw).unwrap();
                    decrypt_message(&cipher, &cred, &c.rn, &c.img)
                }
                "rn" => {
                    let mut rn = c.rn;
                    rn.0[r.random_range(0..16)] ^= 1 << r.random_range(0..8);
                    decrypt_message(&cipher, &c.cred, &rn, &c.img)
                }
                _ => {
                    let img = MemristorImage::generate(c.seed64.wrapping_add(1));
                    decrypt_message(&cipher, &c.cred, &c.rn, &img)
                }
            };
            if matches!(res, Err(Error::CorruptCipher { .. })) {
                rejected += 1;
            }
        }
        assert!(rejected >= 990, "{which}: {rejected}/1000");
        rates.push(format!("{which} {rejected}/1000"));
    }
    rates.join(", ")
}

fn wire_determinism() -> String {
    let mut r = rng(7);
    for _ in 0..10_000 {
        let half = r.random_range(1..=119);
        let values: Vec<f64> = (0..2 * half + 1)
            .map(|_| r.random_range(100.0..4000.0))
            .collect();
        let rn = SessionNonce(r.random());
        let cipher = keyless_core::FinalCipher(values);
        let frame = encode_frame(&rn, &cipher);
        let (rn2, c2) = decode_frame(&frame).unwrap();
        assert_eq!(rn2, rn);
        assert_eq!(bits(c2.values()), bits(cipher.values()));
        assert_eq!(encode_frame(&rn2, &c2), frame);
    }

    assert_eq!(kat::generate().unwrap(), include_str!("../kat/vectors.txt"));

    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let cases: Vec<_> = (0..100).map(|_| random_case(&mut r)).collect();
    let specs: Vec<_> = cases
        .iter()
        .map(|c| (c.id.clone(), c.pw.clone(), c.seed64))
        .collect();
    let rx = thread::spawn(move || {
        specs
            .iter()
            .map(|(id, pw, seed)| {
                let (mut s, _) = listener.accept().unwrap();
                let cred = Credentials::new(id, pw).unwrap();
                receive_message(&mut s, &cred, &MemristorImage::generate(*seed)).unwrap()
            })
            .collect::<Vec<_>>()
    });
    for c in &cases {
        let mut s = TcpStream::connect(addr).unwrap();
        send_message(&mut s, &c.plaintext, &c.cred, &c.img).unwrap();
    }
    let got = rx.join().unwrap();
    assert!(got.iter().zip(&cases).all(|(g, c)| *g == c.plaintext));
    "10000 frame round trips, KAT golden match, 100/100 loopback".into()
}

fn rotation_and_extraction_kats() -> String {
    assert_eq!(rotl16(0x8001, 1), 0x0003);
    assert_eq!(rotl16(0x1234, 4), 0x2341);
    let ones = extract_selectors(&LongDigest::from_bytes([0xFF; 512]), 240).unwrap();
    assert!(ones
        .iter()
        .all(|s| *s == CellSelector::new(127, 7, 127).unwrap()));
    let mut b = [0u8; 512];
    b[0] = 0xFF;
    b[1] = 0xFF;
    let s = extract_selectors(&LongDigest::from_bytes(b), 2).unwrap();
    assert_eq!(s[0], CellSelector::new(127, 7, 126).unwrap());
    assert_eq!(s[1], CellSelector::new(0, 0, 0).unwrap());
    "rotl16 table, (127,7,127) all-ones, (127,7,126) FF FF 00..".into()
}

type Criterion = (&'static str, fn() -> String);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1 structural constants", structural_constants),
        ("AC2 paper nibble vector", paper_nibble_vector),
        ("AC3 round-trip suite", round_trip_suite),
        ("AC4 oracle equivalence", oracle_equivalence),
        ("AC5 formula accuracy", formula_accuracy),
        ("AC6 wrong-secret rejection", wrong_secret_rejection),
        ("AC7 wire determinism", wire_determinism),
        ("AC8 rotation/extraction KATs", rotation_and_extraction_kats),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, f) in criteria {
        match panic::catch_unwind(AssertUnwindSafe(f)) {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("{} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
