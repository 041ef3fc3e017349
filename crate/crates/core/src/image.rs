//! Grayscale images, raster-order block tiling and binary PGM I/O.

use crate::error::{Error, Result};

/// An 8-bit grayscale image stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GrayImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize) -> Self {
        GrayImage {
            width,
            height,
            pixels: vec![0; width * height],
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "{} pixels supplied for a {height}x{width} image",
                pixels.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(f(row, col));
            }
        }
        GrayImage {
            width,
            height,
            pixels,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    /// Copies block `view` out in raster order.
    pub fn block(&self, view: &BlockView) -> Vec<u8> {
        let mut out = Vec::with_capacity(view.side * view.side);
        for r in 0..view.side {
            let start = (view.row + r) * self.width + view.col;
            out.extend_from_slice(&self.pixels[start..start + view.side]);
        }
        out
    }

    pub fn put_block(&mut self, view: &BlockView, data: &[u8]) {
        debug_assert_eq!(data.len(), view.side * view.side);
        for r in 0..view.side {
            let start = (view.row + r) * self.width + view.col;
            self.pixels[start..start + view.side]
                .copy_from_slice(&data[r * view.side..(r + 1) * view.side]);
        }
    }
}

/// One `side x side` tile of an image, identified by its raster index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockView {
    pub index: usize,
    pub row: usize,
    pub col: usize,
    pub side: usize,
}

impl BlockView {
    /// Image coordinates of the `j`-th pixel of the block in raster order.
    #[inline]
    pub fn pixel(&self, j: usize) -> (usize, usize) {
        (self.row + j / self.side, self.col + j % self.side)
    }
}

/// Raster-order tiling of a `height x width` grid into `side x side` blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockGrid {
    pub width: usize,
    pub height: usize,
    pub side: usize,
}

impl BlockGrid {
    pub fn new(width: usize, height: usize, side: usize) -> Result<Self> {
        if side < 2
            || !width.is_multiple_of(side)
            || !height.is_multiple_of(side)
            || width == 0
            || height == 0
        {
            return Err(Error::Dimension {
                height,
                width,
                block: side,
            });
        }
        Ok(BlockGrid {
            width,
            height,
            side,
        })
    }

    pub fn blocks_per_row(&self) -> usize {
        self.width / self.side
    }

    pub fn block_count(&self) -> usize {
        (self.width / self.side) * (self.height / self.side)
    }

    pub fn block_size(&self) -> usize {
        self.side * self.side
    }

    #[inline]
    pub fn view(&self, index: usize) -> BlockView {
        let per_row = self.blocks_per_row();
        BlockView {
            index,
            row: (index / per_row) * self.side,
            col: (index % per_row) * self.side,
            side: self.side,
        }
    }

    /// Raster index of the block containing pixel `(row, col)`.
    pub fn index_of(&self, row: usize, col: usize) -> usize {
        (row / self.side) * self.blocks_per_row() + col / self.side
    }

    /// Image coordinates of position `pos` in the block-major pixel stream
    /// (blocks in raster order, pixels in raster order within a block).
    #[inline]
    pub fn stream_pixel(&self, pos: usize) -> (usize, usize) {
        let bs = self.block_size();
        self.view(pos / bs).pixel(pos % bs)
    }

    /// Inverse of [`BlockGrid::stream_pixel`].
    pub fn stream_pos(&self, row: usize, col: usize) -> usize {
        let b = self.index_of(row, col);
        b * self.block_size() + (row % self.side) * self.side + col % self.side
    }

    pub fn views(&self) -> impl Iterator<Item = BlockView> + '_ {
        (0..self.block_count()).map(move |i| self.view(i))
    }
}

/// Splits `img` into `side x side` blocks in raster order.
pub fn partition(img: &GrayImage, side: usize) -> Result<Vec<BlockView>> {
    let grid = BlockGrid::new(img.width, img.height, side)?;
    Ok(grid.views().collect())
}

fn pgm_err(msg: impl Into<String>) -> Error {
    Error::Pgm(msg.into())
}

/// Parses a binary (`P5`) PGM with maxval 255. Header comments are skipped.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(pgm_err("missing P5 magic"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(pos) {
                        pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                Some(_) => break,
                None => return Err(pgm_err("truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(pgm_err("expected a decimal header field"));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text
            .parse()
            .map_err(|_| pgm_err(format!("header field {text} out of range")))?;
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(pgm_err("missing whitespace after maxval")),
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(pgm_err(format!("unsupported maxval {maxval}")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| pgm_err("dimensions overflow"))?;
    let data = &bytes[pos..];
    if data.len() < count {
        return Err(pgm_err(format!(
            "truncated payload: {} of {count} bytes",
            data.len()
        )));
    }
    GrayImage::from_pixels(width, height, data[..count].to_vec())
}

/// Canonical writer: `P5\n<width> <height>\n255\n` followed by raw rows.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let img = GrayImage::new(512, 512);
        assert_eq!(partition(&img, 8).unwrap().len(), 4096);
        assert_eq!(partition(&GrayImage::new(2, 2), 2).unwrap().len(), 1);
        assert!(matches!(partition(&img, 5), Err(Error::Dimension { .. })));
        assert!(matches!(partition(&img, 1), Err(Error::Dimension { .. })));
    }

    #[test]
    fn partition_is_raster_ordered() {
        let grid = BlockGrid::new(12, 8, 4).unwrap();
        let v = grid.view(4);
        assert_eq!((v.row, v.col), (4, 4));
        assert_eq!(grid.index_of(5, 6), 4);
    }

    #[test]
    fn partition_reassembles() {
        let img = GrayImage::from_fn(24, 16, |r, c| (r * 31 + c * 7) as u8);
        let mut out = GrayImage::new(24, 16);
        for v in partition(&img, 4).unwrap() {
            out.put_block(&v, &img.block(&v));
        }
        assert_eq!(out, img);
    }

    #[test]
    fn stream_positions_are_a_bijection() {
        let grid = BlockGrid::new(12, 8, 4).unwrap();
        let mut seen = [false; 96];
        for pos in 0..96 {
            let (r, c) = grid.stream_pixel(pos);
            assert_eq!(grid.stream_pos(r, c), pos);
            assert!(!std::mem::replace(&mut seen[r * 12 + c], true));
        }
    }

    #[test]
    fn pgm_one_pixel() {
        let bytes = write_pgm(&GrayImage::new(1, 1));
        // 11 header bytes plus the single pixel
        assert_eq!(bytes, b"P5\n1 1\n255\n\0");
        assert_eq!(bytes.len(), 11 + 1);
        assert_eq!(read_pgm(&bytes).unwrap(), GrayImage::new(1, 1));
    }

    #[test]
    fn pgm_round_trip_and_comments() {
        let img = GrayImage::from_fn(5, 3, |r, c| (r * 50 + c) as u8);
        let bytes = write_pgm(&img);
        assert_eq!(read_pgm(&bytes).unwrap(), img);
        assert_eq!(write_pgm(&read_pgm(&bytes).unwrap()), bytes);

        let mut commented = b"P5\n# made by hand\n5 3\n# another\n255\n".to_vec();
        commented.extend_from_slice(img.pixels());
        assert_eq!(read_pgm(&commented).unwrap(), img);
    }

    #[test]
    fn pgm_errors() {
        assert!(matches!(read_pgm(b"P6\n1 1\n255\n\0"), Err(Error::Pgm(_))));
        assert!(matches!(
            read_pgm(b"P5\n1 1\n65535\n\0\0"),
            Err(Error::Pgm(_))
        ));
        assert!(matches!(read_pgm(b"P5\n2 2\n255\n\0"), Err(Error::Pgm(_))));
        assert!(matches!(read_pgm(b"P5\n2"), Err(Error::Pgm(_))));
    }
}
