//! Literal re-statement of the two adjacent-swap sorts the cipher is defined
//! by. Kept out of the library so the main path never shares code with it.

#[derive(Clone, Copy, Debug)]
pub struct PairedRecord {
    pub order: u8,
    pub payload: f64,
}

/// Bubble-sort records by order (strict `>` so equal orders never swap) and
/// return the payloads in their final positions.
pub fn oracle_reorder(records: &[PairedRecord]) -> Vec<f64> {
    let mut recs = records.to_vec();
    let mut i = recs.len().saturating_sub(1);
    while i > 0 {
        for j in 0..i {
            if recs[j].order > recs[j + 1].order {
                recs.swap(j, j + 1);
            }
        }
        i -= 1;
    }
    recs.iter().map(|r| r.payload).collect()
}

/// Phase one of the receiver: sort a copy of the orders, mirroring every swap
/// onto a helper index array that starts as `0..N`.
pub fn oracle_helper_index(orders: &[u8]) -> Vec<usize> {
    let mut orders = orders.to_vec();
    let mut hia: Vec<usize> = (0..orders.len()).collect();
    let mut i = orders.len().saturating_sub(1);
    while i > 0 {
        for j in 0..i {
            if orders[j] > orders[j + 1] {
                orders.swap(j, j + 1);
                hia.swap(j, j + 1);
            }
        }
        i -= 1;
    }
    hia
}

/// Both receiver phases: build the helper index array, then sort it while
/// mirroring every swap onto the final cipher.
pub fn oracle_restore(final_cipher: &[f64], orders: &[u8]) -> Vec<f64> {
    let mut hia = oracle_helper_index(orders);
    let mut cipher = final_cipher.to_vec();
    let mut i = hia.len().saturating_sub(1);
    while i > 0 {
        for j in 0..i {
            if hia[j] > hia[j + 1] {
                hia.swap(j, j + 1);
                cipher.swap(j, j + 1);
            }
        }
        i -= 1;
    }
    cipher
}

pub fn records(orders: &[u8], payloads: &[f64]) -> Vec<PairedRecord> {
    orders
        .iter()
        .zip(payloads)
        .map(|(&order, &payload)| PairedRecord { order, payload })
        .collect()
}
