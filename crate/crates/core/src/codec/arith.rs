//! Static-model arithmetic coding of prediction errors.
//!
//! The model is the symbol count table carried in [`SideInfo`]; encoder and
//! decoder derive identical cumulative frequencies from it. The coder is a
//! range coder with a 64-bit range kept in `[2^56, 2^64)` and byte-wise
//! renormalisation; carries are propagated back into the emitted bytes.
//! Totals are limited to `2^32`, so each step keeps at least 24 bits of
//! precision and the per-symbol rounding loss is below `2^-24`.
//!
//! On termination the shortest value inside the final interval is emitted
//! and trailing zero bits are dropped. The decoder reads zeros past the
//! end of the code, so the stored length is exact.

use crate::bits::BitString;
use crate::error::{Error, Result};

use super::side_info::{SideInfo, ALPHABET, SYMBOL_OFFSET};

const TOP: u64 = 1 << 56;
const MAX_TOTAL: u64 = 1 << 32;

struct Model {
    cum: Vec<u64>,
    total: u64,
}

impl Model {
    fn new(counts: &[u64]) -> Result<Self> {
        let mut cum = Vec::with_capacity(counts.len() + 1);
        let mut total = 0u64;
        cum.push(0);
        for &c in counts {
            total = total
                .checked_add(c)
                .ok_or_else(|| Error::Encode("symbol counts overflow".into()))?;
            cum.push(total);
        }
        if total > MAX_TOTAL {
            return Err(Error::Encode(format!(
                "{total} symbols exceed the coder limit of {MAX_TOTAL}"
            )));
        }
        Ok(Model { cum, total })
    }

    fn freq(&self, s: usize) -> u64 {
        self.cum[s + 1] - self.cum[s]
    }

    /// Symbol whose cumulative interval contains `v`.
    fn find(&self, v: u64) -> usize {
        // largest s with cum[s] <= v, skipping zero-width symbols
        self.cum.partition_point(|&c| c <= v) - 1
    }
}

fn symbol_index(sym: i16) -> Result<usize> {
    let idx = sym as i32 + SYMBOL_OFFSET as i32;
    if !(0..ALPHABET as i32).contains(&idx) {
        return Err(Error::Encode(format!("symbol {sym} outside -255..=255")));
    }
    Ok(idx as usize)
}

struct Encoder {
    out: Vec<u8>,
    low: u64,
    range: u64,
}

impl Encoder {
    fn new() -> Self {
        Encoder {
            out: Vec::new(),
            low: 0,
            range: u64::MAX,
        }
    }

    fn propagate_carry(&mut self) {
        for b in self.out.iter_mut().rev() {
            let (v, overflow) = b.overflowing_add(1);
            *b = v;
            if !overflow {
                return;
            }
        }
        unreachable!("carry out of the first code byte");
    }

    fn add_low(&mut self, v: u64) {
        let (low, carry) = self.low.overflowing_add(v);
        self.low = low;
        if carry {
            self.propagate_carry();
        }
    }

    fn encode(&mut self, cum: u64, freq: u64, total: u64) {
        let r = self.range / total;
        self.add_low(r * cum);
        self.range = r * freq;
        while self.range < TOP {
            self.out.push((self.low >> 56) as u8);
            self.low <<= 8;
            self.range <<= 8;
        }
    }

    fn finish(mut self) -> BitString {
        // pick the value in [low, low + range) with the most trailing zeros
        let low = self.low as u128;
        let high = low + self.range as u128 - 1;
        let mut value = low;
        for k in (0..=64u32).rev() {
            let step = 1u128 << k;
            let v = (low + step - 1) & !(step - 1);
            if v <= high {
                value = v;
                break;
            }
        }
        if value >> 64 != 0 {
            self.propagate_carry();
        }
        self.out.extend_from_slice(&(value as u64).to_be_bytes());
        let len = self.out.len() * 8;
        let mut bits = BitString::from_bytes(self.out, len);
        bits.trim_trailing_zeros();
        bits
    }
}

/// Encodes `symbols` (each in `-255..=255`) with a static model built from
/// their own counts. Returns the code and the matching side information.
pub fn ac_encode(symbols: &[i16]) -> Result<(BitString, SideInfo)> {
    let mut counts = vec![0u64; ALPHABET];
    for &s in symbols {
        counts[symbol_index(s)?] += 1;
    }
    let model = Model::new(&counts)?;
    let mut enc = Encoder::new();
    for &s in symbols {
        let i = symbol_index(s)?;
        enc.encode(model.cum[i], model.freq(i), model.total);
    }
    let bits = enc.finish();
    let si = SideInfo {
        cb_len: bits.len() as u64,
        counts,
    };
    Ok((bits, si))
}

/// Decodes the symbols described by `si` from `bits`. `bits` must hold at
/// least `si.cb_len` bits; anything beyond is ignored.
pub fn ac_decode(bits: &BitString, si: &SideInfo) -> Result<Vec<i16>> {
    let cb_len = si.cb_len as usize;
    if bits.len() < cb_len {
        return Err(Error::Decode(format!(
            "code truncated: {} of {cb_len} bits",
            bits.len()
        )));
    }
    if si.counts.len() != ALPHABET {
        return Err(Error::Decode(format!(
            "{} symbol counts, expected {ALPHABET}",
            si.counts.len()
        )));
    }
    let model = Model::new(&si.counts).map_err(|e| Error::Decode(e.to_string()))?;
    let mut pos = 0usize;
    let mut next_byte = || {
        let mut b = 0u8;
        for _ in 0..8 {
            b <<= 1;
            if pos < cb_len && bits.get(pos) {
                b |= 1;
            }
            pos += 1;
        }
        b
    };
    let mut code = 0u64;
    for _ in 0..8 {
        code = code << 8 | next_byte() as u64;
    }
    let mut range = u64::MAX;
    let mut out = Vec::with_capacity(model.total as usize);
    for _ in 0..model.total {
        let r = range / model.total;
        let v = code / r;
        if v >= model.total {
            return Err(Error::Decode(
                "code value outside the model interval".into(),
            ));
        }
        let s = model.find(v);
        code -= r * model.cum[s];
        range = r * model.freq(s);
        if code >= range {
            return Err(Error::Decode(
                "code value outside the symbol interval".into(),
            ));
        }
        while range < TOP {
            code = code << 8 | next_byte() as u64;
            range <<= 8;
        }
        out.push(s as i16 - SYMBOL_OFFSET as i16);
    }
    Ok(out)
}
