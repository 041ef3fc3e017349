//! MSB-first bit strings.

/// A packed, MSB-first sequence of bits.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitString(")?;
        for i in 0..self.len.min(64) {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        if self.len > 64 {
            write!(f, "... {} bits", self.len)?;
        }
        f.write_str(")")
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// Takes the first `len` bits of `bytes`.
    pub fn from_bytes(mut bytes: Vec<u8>, len: usize) -> Self {
        assert!(len <= bytes.len() * 8, "bit length exceeds buffer");
        bytes.truncate(len.div_ceil(8));
        let mut s = BitString { bytes, len };
        s.clear_tail();
        s
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut s = BitString::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    /// Parses a string of `0`/`1` characters; other characters are ignored.
    pub fn parse(text: &str) -> Self {
        Self::from_bits(text.chars().filter_map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        }))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 8;
        if rem != 0 {
            if let Some(last) = self.bytes.last_mut() {
                *last &= 0xFFu8 << (8 - rem);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.bytes[i / 8] >> (7 - i % 8) & 1 == 1
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            self.push(value >> i & 1 == 1);
        }
    }

    pub fn extend(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Drops trailing zero bits.
    pub fn trim_trailing_zeros(&mut self) {
        while self.len > 0 && !self.get(self.len - 1) {
            self.len -= 1;
        }
        self.bytes.truncate(self.len.div_ceil(8));
    }
}

/// Sequential reader over any source of bits.
pub struct BitReader<I> {
    bits: I,
    consumed: usize,
}

impl<I: Iterator<Item = bool>> BitReader<I> {
    pub fn new(bits: I) -> Self {
        BitReader { bits, consumed: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let b = self.bits.next()?;
        self.consumed += 1;
        Some(b)
    }

    pub fn read_uint(&mut self, width: u32) -> Option<u64> {
        let mut v = 0u64;
        for _ in 0..width {
            v = v << 1 | self.read_bit()? as u64;
        }
        Some(v)
    }

    pub fn read_bits(&mut self, count: usize) -> Option<BitString> {
        let mut s = BitString::new();
        for _ in 0..count {
            s.push(self.read_bit()?);
        }
        Some(s)
    }

    pub fn read_bytes(&mut self, count: usize) -> Option<Vec<u8>> {
        (0..count)
            .map(|_| self.read_uint(8).map(|v| v as u8))
            .collect()
    }

    pub fn skip(&mut self, count: usize) -> Option<()> {
        for _ in 0..count {
            self.read_bit()?;
        }
        Some(())
    }
}

/// Number of bits needed to store values in `0..limit`, i.e. `ceil(log2(limit))`.
pub fn ceil_log2(limit: u64) -> u32 {
    if limit <= 1 {
        0
    } else {
        64 - (limit - 1).leading_zeros()
    }
}
