//! Median edge detector prediction inside one `S x S` block.

use crate::error::{Error, Result};

/// MED on neighbours `a` (above), `b` (left) and `c` (above-left).
#[inline]
pub fn med(a: i32, b: i32, c: i32) -> i32 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if c <= lo {
        hi
    } else if c >= hi {
        lo
    } else {
        a + b - c
    }
}

/// Predicts pixel `(j, k)` of a raster-order `side x side` block. Pixels in
/// the first row or column use their single in-block neighbour for all of
/// `a`, `b` and `c`. Predictions never look outside the block.
pub fn med_predict(block: &[u8], side: usize, j: usize, k: usize) -> u8 {
    assert!(
        (j, k) != (0, 0),
        "the first pixel of a block is never predicted"
    );
    let p = |r: usize, c: usize| block[r * side + c] as i32;
    let v = if j == 0 {
        p(0, k - 1)
    } else if k == 0 {
        p(j - 1, 0)
    } else {
        med(p(j - 1, k), p(j, k - 1), p(j - 1, k - 1))
    };
    // MED of byte neighbours always stays within their range
    v as u8
}

/// Prediction errors of every non-first pixel, in raster order
/// (`side * side - 1` values in `-255..=255`).
pub fn block_errors(block: &[u8], side: usize) -> Vec<i16> {
    debug_assert_eq!(block.len(), side * side);
    (1..side * side)
        .map(|idx| {
            let (j, k) = (idx / side, idx % side);
            block[idx] as i16 - med_predict(block, side, j, k) as i16
        })
        .collect()
}

/// Rebuilds a block from its first pixel and the errors of the rest.
pub fn block_reconstruct(first_pixel: u8, errors: &[i16], side: usize) -> Result<Vec<u8>> {
    if errors.len() + 1 != side * side {
        return Err(Error::Corruption(format!(
            "{} prediction errors for a {side}x{side} block",
            errors.len()
        )));
    }
    let mut block = vec![0u8; side * side];
    block[0] = first_pixel;
    for idx in 1..side * side {
        let (j, k) = (idx / side, idx % side);
        let v = med_predict(&block, side, j, k) as i32 + errors[idx - 1] as i32;
        block[idx] = u8::try_from(v)
            .map_err(|_| Error::Corruption(format!("reconstructed pixel {v} outside 0..=255")))?;
    }
    Ok(block)
}
