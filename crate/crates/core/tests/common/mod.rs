#![allow(dead_code)]

pub mod oracle;

use keyless_core::{Credentials, MemristorImage, SessionNonce};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_bytes(rng: &mut StdRng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random()).collect()
}

/// Random case: credentials, nonce, image seed, plaintext of 1..=119 bytes.
pub struct Case {
    pub id: Vec<u8>,
    pub pw: Vec<u8>,
    pub cred: Credentials,
    pub rn: SessionNonce,
    pub seed64: u64,
    pub img: MemristorImage,
    pub plaintext: Vec<u8>,
}

pub fn random_case(rng: &mut StdRng) -> Case {
    let id_len = rng.random_range(1..=48);
    let pw_len = rng.random_range(1..=48);
    let id = random_bytes(rng, id_len);
    let pw = random_bytes(rng, pw_len);
    let cred = Credentials::new(&id, &pw).unwrap();
    let rn = SessionNonce(rng.random());
    let seed64 = rng.random();
    let len = rng.random_range(1..=119);
    Case {
        id,
        pw,
        cred,
        rn,
        seed64,
        img: MemristorImage::generate(seed64),
        plaintext: random_bytes(rng, len),
    }
}

/// All sequences of `len` symbols over `0..alphabet`.
pub fn all_sequences(len: usize, alphabet: u8) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..alphabet).map(move |a| {
                    let mut t = s.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}
