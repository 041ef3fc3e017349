//! High-capacity scheme: payload bits replace the shares each image is
//! allowed to give up, inside full-size share images.
//!
//! # In-band format
//!
//! The first pixels of blocks 0..3 of every share hold `S`, `r`, `n` and the
//! share ID. The four first-pixel shares they displace are stored as whole
//! bytes in the image's first four embeddable pixels `EP̄(ID, 0..3)`.
//!
//! The remaining embeddable pixels form the payload stream. Within each
//! block the stream fills the least significant bit plane of all of that
//! block's embeddable pixels first, then the next plane, up to the MSB,
//! before moving on to the next block. The stream carries a 32-bit
//! big-endian byte length followed by the `K_D`-enciphered payload.

use rand::RngCore;

use crate::bits::{BitReader, BitString};
use crate::error::{Error, Result};
use crate::gf256::FieldElement;
use crate::image::{BlockGrid, GrayImage};
use crate::keys::{self, DataHidingKey, EncryptionKey};
use crate::sharing::{self, SchemeParams, ShareImage};
use crate::space_alloc::{self, EmbeddableIndices};

/// Parameter bytes carried in the first pixels of blocks 0..3.
const HEADER_BLOCKS: usize = 4;
const LENGTH_BITS: usize = 32;

/// Geometry of one high-capacity share image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HcLayout {
    pub params: SchemeParams,
    pub grid: BlockGrid,
    pub id: usize,
}

impl HcLayout {
    pub fn new(params: SchemeParams, width: usize, height: usize, id: usize) -> Result<Self> {
        if id >= params.shares() {
            return Err(Error::Params(format!(
                "share ID {id} out of range for n={}",
                params.shares()
            )));
        }
        let grid = BlockGrid::new(width, height, params.block())?;
        Ok(HcLayout { params, grid, id })
    }

    /// Length of the EP array: every non-first pixel of every block.
    pub fn ep_len(&self) -> usize {
        self.grid.block_count() * (self.grid.block_size() - 1)
    }

    /// Image coordinates of EP index `e`.
    pub fn ep_pixel(&self, e: usize) -> (usize, usize) {
        let per_block = self.grid.block_size() - 1;
        self.grid.view(e / per_block).pixel(e % per_block + 1)
    }

    pub fn embeddable(&self) -> EmbeddableIndices {
        space_alloc::iter_embeddable(
            self.id,
            self.ep_len(),
            self.params.threshold(),
            self.params.shares(),
        )
    }

    /// Number of embeddable pixels `|EP̄(ID)|`.
    pub fn embeddable_count(&self) -> usize {
        space_alloc::count_embeddable(
            self.id,
            self.ep_len(),
            self.params.threshold(),
            self.params.shares(),
        )
    }

    /// Bits available to the payload stream (length header included).
    pub fn stream_bits(&self) -> usize {
        self.embeddable_count().saturating_sub(HEADER_BLOCKS) * 8
    }

    /// Largest payload in bytes.
    pub fn payload_capacity(&self) -> usize {
        self.stream_bits().saturating_sub(LENGTH_BITS) / 8
    }

    /// Bit slots of the payload stream after skipping the first `skip`
    /// embeddable pixels.
    pub fn slots(&self, skip: usize) -> BitplaneSlots {
        let mut indices = self.embeddable();
        for _ in 0..skip {
            indices.next();
        }
        BitplaneSlots {
            layout: *self,
            indices: indices.peekable(),
            block: Vec::new(),
            plane: 0,
            pos: 0,
        }
    }
}

/// Bit positions `(row, col, plane)` of an embedding stream, bit-plane major
/// within each block.
pub struct BitplaneSlots {
    layout: HcLayout,
    indices: std::iter::Peekable<EmbeddableIndices>,
    block: Vec<(usize, usize)>,
    plane: u8,
    pos: usize,
}

impl Iterator for BitplaneSlots {
    type Item = (usize, usize, u8);

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos == self.block.len() {
            if self.plane < 7 && !self.block.is_empty() {
                self.plane += 1;
            } else {
                let per_block = self.layout.grid.block_size() - 1;
                let first = self.indices.next()?;
                let b = first / per_block;
                self.block.clear();
                self.block.push(self.layout.ep_pixel(first));
                while let Some(&e) = self.indices.peek() {
                    if e / per_block != b {
                        break;
                    }
                    self.block.push(self.layout.ep_pixel(e));
                    self.indices.next();
                }
                self.plane = 0;
            }
            self.pos = 0;
        }
        let (row, col) = self.block[self.pos];
        self.pos += 1;
        Some((row, col, self.plane))
    }
}

/// Overwrites stream bits starting after `skip` embeddable pixels.
pub fn write_stream(
    image: &mut GrayImage,
    layout: &HcLayout,
    skip: usize,
    bits: &BitString,
) -> Result<()> {
    let mut written = 0;
    for ((row, col, plane), bit) in layout.slots(skip).zip(bits.iter()) {
        let v = image.get(row, col) & !(1 << plane) | (bit as u8) << plane;
        image.set(row, col, v);
        written += 1;
    }
    if written < bits.len() {
        return Err(Error::Capacity {
            needed: bits.len(),
            available: written,
        });
    }
    Ok(())
}

/// Iterates the stream bits of `image` starting after `skip` embeddable pixels.
pub fn read_stream<'a>(
    image: &'a GrayImage,
    layout: &HcLayout,
    skip: usize,
) -> impl Iterator<Item = bool> + 'a {
    layout
        .slots(skip)
        .map(move |(row, col, plane)| image.get(row, col) >> plane & 1 == 1)
}

/// Writes the parameter header into a freshly shared image and moves the
/// four displaced first-pixel shares into `EP̄(ID, 0..3)`.
pub fn apply_header(share: &mut GrayImage, layout: &HcLayout) -> Result<()> {
    let targets: Vec<usize> = layout.embeddable().take(HEADER_BLOCKS).collect();
    if targets.len() < HEADER_BLOCKS || layout.grid.block_count() < HEADER_BLOCKS {
        return Err(Error::Params(format!(
            "share {} has {} embeddable pixels and {} blocks; the header needs 4 of each",
            layout.id,
            targets.len(),
            layout.grid.block_count()
        )));
    }
    let p = &layout.params;
    let header = [p.block(), p.threshold(), p.shares(), layout.id];
    for (k, (&e, &value)) in targets.iter().zip(&header).enumerate() {
        let view = layout.grid.view(k);
        let original = share.get(view.row, view.col);
        let (row, col) = layout.ep_pixel(e);
        share.set(row, col, original);
        share.set(view.row, view.col, value as u8);
    }
    Ok(())
}

/// Moves the displaced first-pixel shares back into place.
fn undo_header(share: &mut GrayImage, layout: &HcLayout) {
    let targets: Vec<usize> = layout.embeddable().take(HEADER_BLOCKS).collect();
    for (k, &e) in targets.iter().enumerate() {
        let (row, col) = layout.ep_pixel(e);
        let view = layout.grid.view(k);
        share.set(view.row, view.col, share.get(row, col));
    }
}

/// Reads `S`, `r`, `n` and the ID from a (marked) share image.
pub fn read_header(image: &GrayImage) -> Result<HcLayout> {
    let bad = |msg: String| Error::Extraction(format!("invalid share header: {msg}"));
    if image.is_empty() {
        return Err(bad("empty image".into()));
    }
    let side = image.get(0, 0) as usize;
    let grid =
        BlockGrid::new(image.width(), image.height(), side).map_err(|e| bad(e.to_string()))?;
    if grid.block_count() < HEADER_BLOCKS {
        return Err(bad(format!("only {} blocks", grid.block_count())));
    }
    let field = |k: usize| {
        let v = grid.view(k);
        image.get(v.row, v.col) as usize
    };
    let params = SchemeParams::new(side, field(1), field(2)).map_err(|e| bad(e.to_string()))?;
    let layout = HcLayout::new(params, image.width(), image.height(), field(3))
        .map_err(|e| bad(e.to_string()))?;
    if layout.embeddable_count() < HEADER_BLOCKS {
        return Err(bad("too few embeddable pixels".into()));
    }
    Ok(layout)
}

/// Encrypts `img` into `n` high-capacity share images.
pub fn hc_encrypt(
    img: &GrayImage,
    params: &SchemeParams,
    key: &EncryptionKey,
    rng: &mut impl RngCore,
) -> Result<Vec<ShareImage>> {
    params.grid(img.width(), img.height())?;
    let mut shares = sharing::share_image(img, params, key, rng)?;
    for share in &mut shares {
        let layout = HcLayout::new(*params, img.width(), img.height(), share.id)?;
        apply_header(&mut share.image, &layout)?;
    }
    Ok(shares)
}

/// Embedding-rate summary of one parameter set on an `M x N` image.
#[derive(Clone, Debug, PartialEq)]
pub struct HcCapacity {
    /// `(BS-1)(r-1)8 / (BS n)` bits per pixel of the original image.
    pub rate: f64,
    /// Embeddable bits per share image, by ID.
    pub gross_bits: Vec<usize>,
    /// Payload bits per share image after the relocated header pixels and
    /// the length field.
    pub net_bits: Vec<usize>,
}

/// Closed-form embedding rate of one share image.
pub fn embedding_rate(params: &SchemeParams) -> f64 {
    let bs = params.block_size() as f64;
    (bs - 1.0) * (params.threshold() - 1) as f64 * 8.0 / (bs * params.shares() as f64)
}

pub fn hc_capacity(params: &SchemeParams, width: usize, height: usize) -> Result<HcCapacity> {
    params.grid(width, height)?;
    let layouts = (0..params.shares())
        .map(|id| HcLayout::new(*params, width, height, id))
        .collect::<Result<Vec<_>>>()?;
    Ok(HcCapacity {
        rate: embedding_rate(params),
        gross_bits: layouts.iter().map(|l| l.embeddable_count() * 8).collect(),
        net_bits: layouts
            .iter()
            .map(|l| l.stream_bits().saturating_sub(LENGTH_BITS))
            .collect(),
    })
}

/// Embeds `payload` (enciphered with `K_D`) into a high-capacity share.
pub fn hc_embed(share: &GrayImage, payload: &[u8], key: &DataHidingKey) -> Result<GrayImage> {
    let layout = read_header(share)?;
    let needed = LENGTH_BITS + payload.len() * 8;
    let available = layout.stream_bits();
    if needed > available || payload.len() > u32::MAX as usize {
        return Err(Error::Capacity { needed, available });
    }
    let mut bits = BitString::new();
    bits.push_uint(payload.len() as u64, LENGTH_BITS as u32);
    for b in keys::payload_cipher(key, payload) {
        bits.push_uint(b as u64, 8);
    }
    let mut marked = share.clone();
    write_stream(&mut marked, &layout, HEADER_BLOCKS, &bits)?;
    Ok(marked)
}

/// Extracts and deciphers the payload of a marked share.
pub fn hc_extract(marked: &GrayImage, key: &DataHidingKey) -> Result<Vec<u8>> {
    let layout = read_header(marked)?;
    let mut reader = BitReader::new(read_stream(marked, &layout, HEADER_BLOCKS));
    let len = reader
        .read_uint(LENGTH_BITS as u32)
        .ok_or_else(|| Error::Extraction("stream too short for the length field".into()))?
        as usize;
    if len > layout.payload_capacity() {
        return Err(Error::Extraction(format!(
            "payload length {len} exceeds capacity {}",
            layout.payload_capacity()
        )));
    }
    let data = reader
        .read_bytes(len)
        .ok_or_else(|| Error::Extraction("payload truncated".into()))?;
    Ok(keys::payload_cipher(key, &data))
}

/// Recovers the original image from at least `r` marked shares with
/// distinct IDs.
pub fn hc_recover(marked: &[GrayImage], key: &EncryptionKey) -> Result<GrayImage> {
    let first = marked
        .first()
        .ok_or_else(|| Error::Recovery("no share images supplied".into()))?;
    let layouts = marked
        .iter()
        .map(|m| read_header(m).map_err(|e| Error::Recovery(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let params = layouts[0].params;
    if layouts.iter().any(|l| l.params != params)
        || marked
            .iter()
            .any(|m| m.width() != first.width() || m.height() != first.height())
    {
        return Err(Error::Recovery(
            "share images disagree on parameters or size".into(),
        ));
    }
    let r = params.threshold();
    let n = params.shares();
    sharing::check_ids(layouts.iter().map(|l| l.id), r, n)?;

    let restored: Vec<GrayImage> = marked
        .iter()
        .zip(&layouts)
        .map(|(m, l)| {
            let mut img = m.clone();
            undo_header(&mut img, l);
            img
        })
        .collect();

    let grid = layouts[0].grid;
    let bs = grid.block_size();
    let mut out = GrayImage::new(first.width(), first.height());
    let mut others = Vec::with_capacity(bs - 1);
    for view in grid.views() {
        let xs = keys::derive_x(key, view.index as u64, n)?;
        let firsts: Vec<_> = restored
            .iter()
            .zip(&layouts)
            .map(|(img, l)| (xs[l.id], FieldElement(img.get(view.row, view.col))))
            .collect();
        others.clear();
        for j in 1..bs {
            let e = view.index * (bs - 1) + j - 1;
            let (img, l) = restored
                .iter()
                .zip(&layouts)
                .find(|(_, l)| !space_alloc::embeddable(l.id, e, r, n))
                .ok_or_else(|| Error::Recovery(format!("no retained share of EP index {e}")))?;
            let (row, col) = view.pixel(j);
            others.push((xs[l.id], FieldElement(img.get(row, col))));
        }
        let (block, _) = sharing::recover_block(&firsts, &others, r)?;
        out.put_block(&view, &block);
    }
    Ok(out)
}
