//! Side information for the compressed error stream.
//!
//! Layout, big-endian fields:
//!
//! ```text
//! cb_len            ceil(log2(8 * M' * N')) bits
//! count[-255..=255] 511 x ceil(log2(M' * N')) bits
//! ```

use crate::bits::{ceil_log2, BitReader, BitString};
use crate::error::{Error, Result};

/// Number of distinct prediction errors, `-255..=255`.
pub const ALPHABET: usize = 511;
/// Added to an error to get its index in the count table.
pub const SYMBOL_OFFSET: usize = 255;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideInfo {
    /// Length of the compressed bitstream in bits.
    pub cb_len: u64,
    /// Occurrences of each error value, indexed by `error + 255`.
    pub counts: Vec<u64>,
}

impl SideInfo {
    pub fn symbol_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Field widths `(cb_len bits, per-count bits)` for a reduced image of
/// `width x height` pixels.
pub fn si_widths(width: usize, height: usize) -> (u32, u32) {
    let pixels = (width * height) as u64;
    (ceil_log2(8 * pixels), ceil_log2(pixels))
}

/// Total side information size in bits.
pub fn si_len(width: usize, height: usize) -> usize {
    let (len_w, count_w) = si_widths(width, height);
    len_w as usize + ALPHABET * count_w as usize
}

pub fn si_pack(si: &SideInfo, width: usize, height: usize) -> Result<BitString> {
    let (len_w, count_w) = si_widths(width, height);
    if si.counts.len() != ALPHABET {
        return Err(Error::Encode(format!(
            "{} counts, expected {ALPHABET}",
            si.counts.len()
        )));
    }
    let fits = |v: u64, w: u32| w >= 64 || v >> w == 0;
    if !fits(si.cb_len, len_w) {
        return Err(Error::Encode(format!(
            "code length {} does not fit in {len_w} bits",
            si.cb_len
        )));
    }
    let mut out = BitString::new();
    out.push_uint(si.cb_len, len_w);
    for (i, &c) in si.counts.iter().enumerate() {
        if !fits(c, count_w) {
            return Err(Error::Encode(format!(
                "count {c} of error {} does not fit in {count_w} bits",
                i as i64 - SYMBOL_OFFSET as i64
            )));
        }
        out.push_uint(c, count_w);
    }
    Ok(out)
}

/// Reads side information from the front of `reader`.
pub fn si_unpack<I: Iterator<Item = bool>>(
    reader: &mut BitReader<I>,
    width: usize,
    height: usize,
) -> Result<SideInfo> {
    let (len_w, count_w) = si_widths(width, height);
    let short = || Error::Extraction("side information truncated".into());
    let cb_len = reader.read_uint(len_w).ok_or_else(short)?;
    let counts = (0..ALPHABET)
        .map(|_| reader.read_uint(count_w).ok_or_else(short))
        .collect::<Result<Vec<_>>>()?;
    Ok(SideInfo { cb_len, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_for_368() {
        assert_eq!(si_widths(368, 368), (21, 18));
        assert_eq!(si_len(368, 368), 9219);
    }

    #[test]
    fn zero_symbols() {
        let si = SideInfo {
            cb_len: 0,
            counts: vec![0; ALPHABET],
        };
        let bits = si_pack(&si, 16, 16).unwrap();
        assert_eq!(bits.len(), si_len(16, 16));
        assert!(bits.iter().all(|b| !b));
        assert_eq!(
            si_unpack(&mut BitReader::new(bits.iter()), 16, 16).unwrap(),
            si
        );
    }

    #[test]
    fn round_trip() {
        let mut counts = vec![0; ALPHABET];
        counts[0] = 3;
        counts[255] = 200;
        counts[510] = 255;
        let si = SideInfo {
            cb_len: 2047,
            counts,
        };
        let bits = si_pack(&si, 16, 16).unwrap();
        assert_eq!(
            si_unpack(&mut BitReader::new(bits.iter()), 16, 16).unwrap(),
            si
        );
    }

    #[test]
    fn overflow_is_an_encode_error() {
        let mut counts = vec![0; ALPHABET];
        counts[7] = 256;
        let si = SideInfo { cb_len: 0, counts };
        assert!(matches!(si_pack(&si, 16, 16), Err(Error::Encode(_))));
        let si = SideInfo {
            cb_len: 2048,
            counts: vec![0; ALPHABET],
        };
        assert!(matches!(si_pack(&si, 16, 16), Err(Error::Encode(_))));
    }

    #[test]
    fn truncated_input() {
        let bits = BitString::parse("1010");
        assert!(si_unpack(&mut BitReader::new(bits.iter()), 16, 16).is_err());
    }
}
