//! Image of memristor: a 128 x 8 table of resistance readings.
//!
//! The physical device is replaced by a deterministic table. Cell
//! `(address a, current c)` has linear index `i = 8a + c` and value
//!
//! ```text
//! u    = splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15)
//! cell = 100.0 + 900.0 * ((u >> 11) as f64 * 2^-53)
//! ```
//!
//! where `splitmix64` is the standard finalizer
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z ^ (z >> 31)
//! ```
//!
//! with all arithmetic wrapping modulo 2^64.
//!
//! # File format
//!
//! UTF-8 text with LF line endings. Lines starting with `#` are comments.
//! After the comments come exactly 128 rows, row `k` holding address `k`, each
//! with 8 comma-separated positive decimals for currents 0 through 7.

use std::io::{BufRead, BufReader, Read, Write};

use crate::digest::CellSelector;
use crate::error::{Error, Result};

pub const ADDRESSES: usize = 128;
pub const CURRENTS: usize = 8;
pub const CELLS: usize = ADDRESSES * CURRENTS;

pub const MIN_OHMS: f64 = 100.0;
pub const SPAN_OHMS: f64 = 900.0;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Output `i` (0-based) of the SplitMix64 sequence seeded with `seed`.
pub fn splitmix64(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Shared resistance table. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct MemristorImage {
    cells: Box<[[f64; CURRENTS]; ADDRESSES]>,
}

impl MemristorImage {
    /// Build from raw rows, checking every cell is finite and positive.
    pub fn from_rows(rows: [[f64; CURRENTS]; ADDRESSES]) -> Result<Self> {
        for (address, row) in rows.iter().enumerate() {
            for (current, &value) in row.iter().enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::ImageValue {
                        address,
                        current,
                        value,
                    });
                }
            }
        }
        Ok(Self {
            cells: Box::new(rows),
        })
    }

    pub fn generate(seed64: u64) -> Self {
        let mut cells = Box::new([[0.0; CURRENTS]; ADDRESSES]);
        for (a, row) in cells.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let u = splitmix64(seed64, (a * CURRENTS + c) as u64);
                let f = (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                *cell = MIN_OHMS + SPAN_OHMS * f;
            }
        }
        Self { cells }
    }

    pub fn read_cell(&self, sel: CellSelector) -> f64 {
        self.cells[sel.address() as usize][sel.current() as usize]
    }

    pub fn cell(&self, address: usize, current: usize) -> f64 {
        self.cells[address][current]
    }

    pub fn rows(&self) -> &[[f64; CURRENTS]; ADDRESSES] {
        &self.cells
    }

    /// Smallest and largest cell value.
    pub fn range(&self) -> (f64, f64) {
        self.cells
            .iter()
            .flatten()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Write the text format. Returns the number of bytes written.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<usize> {
        let mut text = String::with_capacity(CELLS * 20);
        text.push_str("# keyless memristor image\n");
        text.push_str("# rows = address 0..127, columns = current level 0..7, unit = ohm\n");
        for row in self.cells.iter() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            text.push_str(&line.join(","));
            text.push('\n');
        }
        sink.write_all(text.as_bytes()).map_err(Error::ImageIo)?;
        sink.flush().map_err(Error::ImageIo)?;
        Ok(text.len())
    }

    pub fn load<R: Read>(source: R) -> Result<Self> {
        let mut rows = [[0.0; CURRENTS]; ADDRESSES];
        let mut n = 0usize;
        for (lineno, line) in BufReader::new(source).lines().enumerate() {
            let line = line.map_err(Error::ImageIo)?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if n == ADDRESSES {
                return Err(Error::ImageFormat(format!(
                    "more than {ADDRESSES} data rows (line {})",
                    lineno + 1
                )));
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != CURRENTS {
                return Err(Error::ImageFormat(format!(
                    "line {}: expected {CURRENTS} columns, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            for (c, field) in fields.iter().enumerate() {
                rows[n][c] = field.parse::<f64>().map_err(|e| {
                    Error::ImageFormat(format!("line {}: {field:?}: {e}", lineno + 1))
                })?;
            }
            n += 1;
        }
        if n != ADDRESSES {
            return Err(Error::ImageFormat(format!(
                "expected {ADDRESSES} data rows, found {n}"
            )));
        }
        Self::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_sequence() {
        // Published SplitMix64 outputs for seed 0.
        assert_eq!(splitmix64(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0, 1), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(splitmix64(0, 2), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn generated_cells_match_oracle() {
        // 100 + 900 * ((u >> 11) / 2**53), evaluated in Python.
        let img = MemristorImage::generate(0);
        assert_eq!(img.cell(0, 0), 894.9797273922784);
        assert_eq!(img.cell(0, 0).to_bits(), 0x408b_f7d6_7b50_a6a6);
        assert_eq!(img.cell(127, 7), 257.7517104106376);
        assert_eq!(MemristorImage::generate(42).cell(5, 3), 797.3048100415134);
    }

    #[test]
    fn generated_range_and_determinism() {
        let a = MemristorImage::generate(7);
        let (lo, hi) = a.range();
        assert!(lo >= 100.0 && hi < 1000.0);
        assert_eq!(a, MemristorImage::generate(7));
    }

    #[test]
    fn distinct_seeds_differ() {
        for s in 0..100u64 {
            assert_ne!(
                MemristorImage::generate(s),
                MemristorImage::generate(s + 1000)
            );
        }
    }

    #[test]
    fn read_cell_indexing() {
        let img = MemristorImage::generate(3);
        let s = |a, c, o| CellSelector::new(a, c, o).unwrap();
        assert_eq!(img.read_cell(s(0, 0, 0)), img.rows()[0][0]);
        assert_eq!(img.read_cell(s(127, 7, 0)), img.rows()[127][7]);
        assert_eq!(img.read_cell(s(9, 2, 0)), img.read_cell(s(9, 2, 99)));
    }

    #[test]
    fn save_load_round_trip() {
        let img = MemristorImage::generate(0xDEAD_BEEF);
        let mut buf = Vec::new();
        let n = img.save(&mut buf).unwrap();
        assert_eq!(n, buf.len());
        let text = String::from_utf8(buf.clone()).unwrap();
        let data_rows = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(data_rows, 128);
        assert!(text.lines().next().unwrap().starts_with('#'));
        let back = MemristorImage::load(&buf[..]).unwrap();
        for (a, b) in img
            .rows()
            .iter()
            .flatten()
            .zip(back.rows().iter().flatten())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    fn rows_text(rows: usize, bad: Option<&str>) -> String {
        let mut s = String::from("# test\n");
        for r in 0..rows {
            if r == 5 {
                if let Some(line) = bad {
                    s.push_str(line);
                    s.push('\n');
                    continue;
                }
            }
            s.push_str("1,2,3,4,5,6,7,8\n");
        }
        s
    }

    #[test]
    fn load_rejects_wrong_shape() {
        assert!(MemristorImage::load(rows_text(128, None).as_bytes()).is_ok());
        assert!(matches!(
            MemristorImage::load(rows_text(127, None).as_bytes()),
            Err(Error::ImageFormat(_))
        ));
        assert!(matches!(
            MemristorImage::load(rows_text(129, None).as_bytes()),
            Err(Error::ImageFormat(_))
        ));
        assert!(matches!(
            MemristorImage::load(rows_text(128, Some("1,2,3")).as_bytes()),
            Err(Error::ImageFormat(_))
        ));
        assert!(matches!(
            MemristorImage::load(rows_text(128, Some("1,2,x,4,5,6,7,8")).as_bytes()),
            Err(Error::ImageFormat(_))
        ));
    }

    #[test]
    fn load_rejects_bad_values() {
        for bad in [
            "1,2,3,4,-5.0,6,7,8",
            "0,2,3,4,5,6,7,8",
            "1,2,3,inf,5,6,7,8",
            "NaN,2,3,4,5,6,7,8",
        ] {
            assert!(
                matches!(
                    MemristorImage::load(rows_text(128, Some(bad)).as_bytes()),
                    Err(Error::ImageValue { address: 5, .. })
                ),
                "{bad}"
            );
        }
    }
}
