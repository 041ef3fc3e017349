//! Which shares each image may give up.
//!
//! For a non-first pixel with EP index `i` (all non-first pixels of all
//! blocks, block-major), image `ID` may overwrite its share iff
//! `(ID - i) mod n` lies in `0..=r-2`. The same window over block indices
//! decides, in the size-reduced scheme, which images keep only a block's
//! first pixel. Every index is therefore released by exactly `r - 1` images
//! and kept by the other `n - r + 1`.

/// `(ID - i) mod n` in `0..=r-2`.
#[inline]
pub fn embeddable(id: usize, i: usize, r: usize, n: usize) -> bool {
    debug_assert!(id < n);
    ((id + n - i % n) % n) <= r - 2
}

/// Retention flag for block `i` in the size-reduced scheme: `true` when
/// image `id` keeps only the first pixel.
#[inline]
pub fn first_pixel_only(id: usize, i: usize, r: usize, n: usize) -> bool {
    embeddable(id, i, r, n)
}

/// The first index of the window containing `id`, i.e. `ID - r + 2 (mod n)`.
fn window_start(id: usize, r: usize, n: usize) -> usize {
    (id + n - (r - 2) % n) % n
}

/// Enumerates the embeddable EP indices of image `id` below `limit` by
/// walking the sliding window: `r - 1` consecutive indices, then a jump of
/// `n - r + 2` to the next window.
pub struct EmbeddableIndices {
    next: usize,
    offset: usize,
    limit: usize,
    r: usize,
    n: usize,
}

impl Iterator for EmbeddableIndices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.next >= self.limit {
            return None;
        }
        let cur = self.next;
        if self.offset == self.r - 2 {
            self.next += self.n - self.r + 2;
            self.offset = 0;
        } else {
            self.next += 1;
            self.offset += 1;
        }
        Some(cur)
    }
}

/// Embeddable indices of image `id` in `0..limit`, ascending.
pub fn iter_embeddable(id: usize, limit: usize, r: usize, n: usize) -> EmbeddableIndices {
    let sp = window_start(id, r, n);
    // offset of index 0 inside the window cycle
    let offset0 = (n - sp) % n;
    let (next, offset) = if offset0 <= r - 2 {
        (0, offset0)
    } else {
        (n - offset0, 0)
    };
    EmbeddableIndices {
        next,
        offset,
        limit,
        r,
        n,
    }
}

/// The embedding map of one image: every EP index in `0..BN*(BS-1)` it may
/// overwrite, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedMap {
    pub id: usize,
    pub indices: Vec<usize>,
}

pub fn embed_indices(id: usize, block_count: usize, side: usize, r: usize, n: usize) -> EmbedMap {
    let limit = block_count * (side * side - 1);
    EmbedMap {
        id,
        indices: iter_embeddable(id, limit, r, n).collect(),
    }
}

/// Number of indices in `0..limit` released by image `id`, in closed form.
pub fn count_embeddable(id: usize, limit: usize, r: usize, n: usize) -> usize {
    let full = limit / n * (r - 1);
    let rem = limit % n;
    let sp = window_start(id, r, n);
    // residues sp, sp+1, .., sp+r-2 (mod n) that fall below rem
    let tail = (0..r - 1).filter(|k| (sp + k) % n < rem).count();
    full + tail
}

/// `|FP|`: blocks of which image `id` keeps only the first pixel.
pub fn count_fp(id: usize, block_count: usize, r: usize, n: usize) -> usize {
    count_embeddable(id, block_count, r, n)
}

/// `|WB|`: blocks image `id` keeps whole.
pub fn count_wb(id: usize, block_count: usize, r: usize, n: usize) -> usize {
    block_count - count_fp(id, block_count, r, n)
}
