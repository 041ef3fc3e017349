//! Size-reduced scheme: redundant shares are dropped and each share image is
//! repacked into a smaller near-square image.
//!
//! # In-band format
//!
//! A reduced share of `W' x H'` pixels is read as a block-major pixel stream
//! (blocks of the reduced grid in raster order, pixels in raster order within
//! a block). The stream holds, in order:
//!
//! 1. the `|WB|` fully kept blocks,
//! 2. the `|FP|` kept first pixels, packed consecutively,
//! 3. random filler.
//!
//! The last 8 pixels of the last image row are a trailer with `S`, `r`, `n`,
//! the share ID and the original height and width as 16-bit big-endian
//! values.
//!
//! The data hider's embeddable stream is the non-first pixels of the WB
//! blocks followed by the filler pixels (trailer excluded), 8 bits per pixel
//! MSB first. It carries the packed side information, the arithmetic-coded
//! MED errors of all WB blocks, a 32-bit byte length and the enciphered
//! payload.

use rand::RngCore;

use crate::bits::{BitReader, BitString};
use crate::codec::{self, SideInfo};
use crate::error::{Error, Result};
use crate::gf256::FieldElement;
use crate::image::{BlockGrid, GrayImage};
use crate::keys::{self, DataHidingKey, EncryptionKey};
use crate::sharing::{self, SchemeParams, ShareImage, ShareKind};
use crate::space_alloc;

pub const TRAILER_LEN: usize = 8;
const LENGTH_BITS: usize = 32;

/// Geometry of one reduced share image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrLayout {
    pub params: SchemeParams,
    pub id: usize,
    /// Original image width and height.
    pub width: usize,
    pub height: usize,
    /// Kept whole blocks and kept first pixels.
    pub wb: usize,
    pub fp: usize,
    /// Grid of the reduced image.
    pub reduced: BlockGrid,
}

fn ceil_sqrt(v: usize) -> usize {
    let mut k = (v as f64).sqrt() as usize;
    while k * k < v {
        k += 1;
    }
    while k > 0 && (k - 1) * (k - 1) >= v {
        k -= 1;
    }
    k
}

impl SrLayout {
    pub fn new(params: SchemeParams, width: usize, height: usize, id: usize) -> Result<Self> {
        if width > u16::MAX as usize || height > u16::MAX as usize {
            return Err(Error::Params(format!(
                "{width}x{height} exceeds the 16-bit trailer fields"
            )));
        }
        if id >= params.shares() {
            return Err(Error::Params(format!(
                "share ID {id} out of range for n={}",
                params.shares()
            )));
        }
        let bn = params.block_count(width, height)?;
        let (r, n) = (params.threshold(), params.shares());
        let wb = space_alloc::count_wb(id, bn, r, n);
        let fp = space_alloc::count_fp(id, bn, r, n);
        let s = params.block();
        let bs = params.block_size();
        let tp = fp + bs * wb;
        // the trailer needs at least 8 pixels in a row
        let k = ceil_sqrt(tp.div_ceil(bs)).max(TRAILER_LEN.div_ceil(s));
        let mut layout = SrLayout {
            params,
            id,
            width,
            height,
            wb,
            fp,
            reduced: BlockGrid::new(k * s, k * s, s)?,
        };
        // grow by block rows until no trailer pixel overlaps WB/FP data
        while layout.trailer_positions().min().unwrap_or(0) < tp {
            let g = layout.reduced;
            layout.reduced = BlockGrid::new(g.width, g.height + s, s)?;
        }
        Ok(layout)
    }

    /// Stream positions occupied by WB blocks and FP pixels.
    pub fn data_len(&self) -> usize {
        self.fp + self.params.block_size() * self.wb
    }

    pub fn total_pixels(&self) -> usize {
        self.reduced.width * self.reduced.height
    }

    /// Trailer pixel coordinates in trailer order.
    pub fn trailer_pixels(&self) -> impl Iterator<Item = (usize, usize)> {
        let (w, h) = (self.reduced.width, self.reduced.height);
        (w - TRAILER_LEN..w).map(move |c| (h - 1, c))
    }

    pub fn trailer_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.trailer_pixels()
            .map(|(r, c)| self.reduced.stream_pos(r, c))
    }

    fn trailer_values(&self) -> [u8; TRAILER_LEN] {
        let p = &self.params;
        let [m_hi, m_lo] = (self.height as u16).to_be_bytes();
        let [n_hi, n_lo] = (self.width as u16).to_be_bytes();
        [
            p.block() as u8,
            p.threshold() as u8,
            p.shares() as u8,
            self.id as u8,
            m_hi,
            m_lo,
            n_hi,
            n_lo,
        ]
    }

    fn is_trailer(&self, pos: usize) -> bool {
        let (row, col) = self.reduced.stream_pixel(pos);
        row == self.reduced.height - 1 && col >= self.reduced.width - TRAILER_LEN
    }

    /// Stream positions of the filler pixels.
    pub fn filler_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (self.data_len()..self.total_pixels()).filter(move |&p| !self.is_trailer(p))
    }

    pub fn filler_len(&self) -> usize {
        self.total_pixels() - self.data_len() - TRAILER_LEN
    }

    /// Stream positions of the embeddable pixels, in stream order.
    pub fn embeddable_positions(&self) -> impl Iterator<Item = usize> + '_ {
        let bs = self.params.block_size();
        (0..self.wb)
            .flat_map(move |b| (1..bs).map(move |j| b * bs + j))
            .chain(self.filler_positions())
    }

    pub fn embeddable_bits(&self) -> usize {
        (self.wb * (self.params.block_size() - 1) + self.filler_len()) * 8
    }

    /// Number of MED errors coded into the stream.
    pub fn error_count(&self) -> usize {
        self.wb * (self.params.block_size() - 1)
    }
}

/// Reads and validates the trailer of a reduced share.
pub fn read_trailer(image: &GrayImage) -> Result<SrLayout> {
    let bad = |msg: String| Error::Extraction(format!("invalid trailer: {msg}"));
    let (w, h) = (image.width(), image.height());
    if w < TRAILER_LEN || h == 0 {
        return Err(bad(format!("{w}x{h} image is too small")));
    }
    let t: Vec<u8> = (w - TRAILER_LEN..w).map(|c| image.get(h - 1, c)).collect();
    let params = SchemeParams::new(t[0] as usize, t[1] as usize, t[2] as usize)
        .map_err(|e| bad(e.to_string()))?;
    let height = u16::from_be_bytes([t[4], t[5]]) as usize;
    let width = u16::from_be_bytes([t[6], t[7]]) as usize;
    let layout =
        SrLayout::new(params, width, height, t[3] as usize).map_err(|e| bad(e.to_string()))?;
    if (layout.reduced.width, layout.reduced.height) != (w, h) {
        return Err(bad(format!(
            "expected a {}x{} share, found {w}x{h}",
            layout.reduced.width, layout.reduced.height
        )));
    }
    Ok(layout)
}

/// Encrypts `img` into `n` reduced share images.
pub fn sr_encrypt(
    img: &GrayImage,
    params: &SchemeParams,
    key: &EncryptionKey,
    rng: &mut impl RngCore,
) -> Result<Vec<ShareImage>> {
    let full = sharing::share_image(img, params, key, rng)?;
    let grid = params.grid(img.width(), img.height())?;
    let (r, n) = (params.threshold(), params.shares());
    let bs = grid.block_size();
    full.into_iter()
        .map(|share| {
            let layout = SrLayout::new(*params, img.width(), img.height(), share.id)?;
            let g = layout.reduced;
            let mut out = GrayImage::new(g.width, g.height);
            let (mut wb_pos, mut fp_pos) = (0, layout.wb * bs);
            for view in grid.views() {
                if space_alloc::first_pixel_only(share.id, view.index, r, n) {
                    let (row, col) = g.stream_pixel(fp_pos);
                    out.set(row, col, share.image.get(view.row, view.col));
                    fp_pos += 1;
                } else {
                    for j in 0..bs {
                        let (sr, sc) = view.pixel(j);
                        let (row, col) = g.stream_pixel(wb_pos);
                        out.set(row, col, share.image.get(sr, sc));
                        wb_pos += 1;
                    }
                }
            }
            let mut filler = vec![0u8; layout.filler_len()];
            rng.fill_bytes(&mut filler);
            for (pos, v) in layout.filler_positions().zip(filler) {
                let (row, col) = g.stream_pixel(pos);
                out.set(row, col, v);
            }
            for ((row, col), v) in layout.trailer_pixels().zip(layout.trailer_values()) {
                out.set(row, col, v);
            }
            Ok(ShareImage {
                id: share.id,
                image: out,
                kind: ShareKind::Reduced,
            })
        })
        .collect()
}

/// Total reduced-share pixels over all `n` IDs divided by `width * height`.
pub fn sr_expansion(params: &SchemeParams, width: usize, height: usize) -> Result<f64> {
    let mut total = 0usize;
    for id in 0..params.shares() {
        total += SrLayout::new(*params, width, height, id)?.total_pixels();
    }
    Ok(total as f64 / (width * height) as f64)
}

fn stream_bits<'a>(image: &'a GrayImage, layout: &'a SrLayout) -> impl Iterator<Item = bool> + 'a {
    layout.embeddable_positions().flat_map(move |pos| {
        let (row, col) = layout.reduced.stream_pixel(pos);
        let v = image.get(row, col);
        (0..8).rev().map(move |b| v >> b & 1 == 1)
    })
}

fn write_stream_bits(image: &mut GrayImage, layout: &SrLayout, bits: &BitString) {
    let mut it = bits.iter();
    for pos in layout.embeddable_positions() {
        let (row, col) = layout.reduced.stream_pixel(pos);
        let mut v = image.get(row, col);
        for b in (0..8).rev() {
            let Some(bit) = it.next() else {
                image.set(row, col, v);
                return;
            };
            v = v & !(1 << b) | (bit as u8) << b;
        }
        image.set(row, col, v);
    }
}

fn wb_block(image: &GrayImage, layout: &SrLayout, b: usize) -> Vec<u8> {
    let bs = layout.params.block_size();
    (b * bs..(b + 1) * bs)
        .map(|pos| {
            let (row, col) = layout.reduced.stream_pixel(pos);
            image.get(row, col)
        })
        .collect()
}

/// Side information and code of the WB blocks of an unmarked share.
fn compress(share: &GrayImage, layout: &SrLayout) -> Result<(BitString, BitString)> {
    let s = layout.params.block();
    let mut errors = Vec::with_capacity(layout.error_count());
    for b in 0..layout.wb {
        errors.extend(codec::block_errors(&wb_block(share, layout, b), s));
    }
    let (code, si) = codec::ac_encode(&errors)?;
    let si_bits = codec::si_pack(&si, layout.reduced.width, layout.reduced.height)?;
    Ok((si_bits, code))
}

/// Payload bytes that fit into `share` after vacating.
pub fn sr_max_payload(share: &GrayImage) -> Result<usize> {
    let layout = read_trailer(share)?;
    let (si, code) = compress(share, &layout)?;
    let overhead = si.len() + code.len() + LENGTH_BITS;
    let available = layout.embeddable_bits();
    if overhead > available {
        return Err(Error::Vacating {
            needed: overhead,
            available,
        });
    }
    Ok((available - overhead) / 8)
}

/// Vacates room in a reduced share and embeds `payload` enciphered with `K_D`.
pub fn sr_embed(share: &GrayImage, payload: &[u8], key: &DataHidingKey) -> Result<GrayImage> {
    let layout = read_trailer(share)?;
    let (si, code) = compress(share, &layout)?;
    let available = layout.embeddable_bits();
    let overhead = si.len() + code.len() + LENGTH_BITS;
    if overhead > available {
        return Err(Error::Vacating {
            needed: overhead,
            available,
        });
    }
    let needed = overhead + payload.len() * 8;
    if needed > available || payload.len() > u32::MAX as usize {
        return Err(Error::Capacity { needed, available });
    }
    let mut bits = si;
    bits.extend(&code);
    bits.push_uint(payload.len() as u64, LENGTH_BITS as u32);
    for b in keys::payload_cipher(key, payload) {
        bits.push_uint(b as u64, 8);
    }
    let mut marked = share.clone();
    write_stream_bits(&mut marked, &layout, &bits);
    Ok(marked)
}

/// Parses and sanity-checks the side information at the head of the stream.
fn read_side_info<I: Iterator<Item = bool>>(
    reader: &mut BitReader<I>,
    layout: &SrLayout,
) -> Result<SideInfo> {
    let si = codec::si_unpack(reader, layout.reduced.width, layout.reduced.height)?;
    if si.symbol_count() != layout.error_count() as u64 {
        return Err(Error::Extraction(format!(
            "side information lists {} errors, the layout has {}",
            si.symbol_count(),
            layout.error_count()
        )));
    }
    let room =
        layout.embeddable_bits() - codec::si_len(layout.reduced.width, layout.reduced.height);
    if si.cb_len as usize + LENGTH_BITS > room {
        return Err(Error::Extraction(format!(
            "code length {} exceeds the embeddable stream",
            si.cb_len
        )));
    }
    Ok(si)
}

/// Extracts and deciphers the payload of a marked reduced share.
pub fn sr_extract(marked: &GrayImage, key: &DataHidingKey) -> Result<Vec<u8>> {
    let layout = read_trailer(marked)?;
    let mut reader = BitReader::new(stream_bits(marked, &layout));
    let si = read_side_info(&mut reader, &layout)?;
    reader
        .skip(si.cb_len as usize)
        .ok_or_else(|| Error::Extraction("code truncated".into()))?;
    let len = reader
        .read_uint(LENGTH_BITS as u32)
        .ok_or_else(|| Error::Extraction("stream too short for the length field".into()))?
        as usize;
    let used = reader.consumed();
    if len > (layout.embeddable_bits() - used) / 8 {
        return Err(Error::Extraction(format!(
            "payload length {len} exceeds the remaining stream"
        )));
    }
    let data = reader
        .read_bytes(len)
        .ok_or_else(|| Error::Extraction("payload truncated".into()))?;
    Ok(keys::payload_cipher(key, &data))
}

/// Rebuilds the WB blocks (flattened) and the FP pixels of a marked share.
fn restore_share(marked: &GrayImage, layout: &SrLayout) -> Result<(Vec<u8>, Vec<u8>)> {
    let corrupt = |e: Error| match e {
        Error::Extraction(m) | Error::Decode(m) => Error::Corruption(m),
        other => other,
    };
    let mut reader = BitReader::new(stream_bits(marked, layout));
    let si = read_side_info(&mut reader, layout).map_err(corrupt)?;
    let code = reader
        .read_bits(si.cb_len as usize)
        .ok_or_else(|| Error::Corruption("code truncated".into()))?;
    let errors = codec::ac_decode(&code, &si).map_err(corrupt)?;
    let s = layout.params.block();
    let bs = layout.params.block_size();
    let g = layout.reduced;
    let mut wb = Vec::with_capacity(layout.wb * bs);
    for (b, errs) in errors.chunks(bs - 1).take(layout.wb).enumerate() {
        let (row, col) = g.stream_pixel(b * bs);
        wb.extend(codec::block_reconstruct(marked.get(row, col), errs, s)?);
    }
    let fp = (layout.wb * bs..layout.data_len())
        .map(|pos| {
            let (row, col) = g.stream_pixel(pos);
            marked.get(row, col)
        })
        .collect();
    Ok((wb, fp))
}

/// Recovers the original image from at least `r` marked reduced shares with
/// distinct IDs.
pub fn sr_recover(marked: &[GrayImage], key: &EncryptionKey) -> Result<GrayImage> {
    if marked.is_empty() {
        return Err(Error::Recovery("no share images supplied".into()));
    }
    let layouts = marked
        .iter()
        .map(|m| read_trailer(m).map_err(|e| Error::Recovery(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let l0 = layouts[0];
    if layouts
        .iter()
        .any(|l| (l.params, l.width, l.height) != (l0.params, l0.width, l0.height))
    {
        return Err(Error::Recovery("share trailers disagree".into()));
    }
    let (r, n) = (l0.params.threshold(), l0.params.shares());
    sharing::check_ids(layouts.iter().map(|l| l.id), r, n)?;

    let restored = marked
        .iter()
        .zip(&layouts)
        .map(|(m, l)| restore_share(m, l))
        .collect::<Result<Vec<_>>>()?;
    let grid = l0.params.grid(l0.width, l0.height)?;
    let bs = grid.block_size();
    let mut cursors = vec![(0usize, 0usize); marked.len()];
    let mut out = GrayImage::new(l0.width, l0.height);
    let exhausted =
        |what: &str, id: usize| Error::Corruption(format!("{what} array of share {id} exhausted"));
    for view in grid.views() {
        let xs = keys::derive_x(key, view.index as u64, n)?;
        let mut firsts = Vec::with_capacity(marked.len());
        let mut full: Option<(FieldElement, &[u8])> = None;
        for ((l, (wb, fp)), (wb_next, fp_next)) in
            layouts.iter().zip(&restored).zip(cursors.iter_mut())
        {
            let x = xs[l.id];
            if space_alloc::first_pixel_only(l.id, view.index, r, n) {
                let v = *fp.get(*fp_next).ok_or_else(|| exhausted("FP", l.id))?;
                *fp_next += 1;
                firsts.push((x, FieldElement(v)));
            } else {
                let block = wb
                    .get(*wb_next * bs..(*wb_next + 1) * bs)
                    .ok_or_else(|| exhausted("WB", l.id))?;
                *wb_next += 1;
                firsts.push((x, FieldElement(block[0])));
                full.get_or_insert((x, block));
            }
        }
        let (x, block) = full
            .ok_or_else(|| Error::Recovery(format!("no share keeps block {} whole", view.index)))?;
        let others: Vec<_> = block[1..].iter().map(|&v| (x, FieldElement(v))).collect();
        let (plain, _) = sharing::recover_block(&firsts, &others, r)?;
        out.put_block(&view, &plain);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(s: usize, r: usize, n: usize) -> SchemeParams {
        SchemeParams::new(s, r, n).unwrap()
    }

    fn smooth(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |r, c| ((r * 3 + c * 2) / 4) as u8)
    }

    #[test]
    fn ceil_sqrt_edges() {
        for v in 0..2000 {
            let k = ceil_sqrt(v);
            assert!(k * k >= v && (k == 0 || (k - 1) * (k - 1) < v), "{v}");
        }
    }

    #[test]
    fn reduced_sizes_512() {
        for (s, r, n, side) in [
            (4, 2, 2, 376),
            (8, 2, 2, 368),
            (4, 4, 4, 280),
            (8, 4, 4, 264),
        ] {
            for id in 0..n {
                let l = SrLayout::new(params(s, r, n), 512, 512, id).unwrap();
                assert_eq!((l.reduced.width, l.reduced.height), (side, side));
            }
        }
    }

    #[test]
    fn layout_accounting() {
        for (s, r, n) in [
            (2, 2, 2),
            (2, 3, 5),
            (3, 2, 4),
            (4, 3, 3),
            (5, 4, 7),
            (8, 6, 6),
        ] {
            for id in 0..n {
                let l = SrLayout::new(params(s, r, n), 60 * s, 20 * s, id).unwrap();
                assert_eq!(
                    l.data_len() + l.filler_len() + TRAILER_LEN,
                    l.total_pixels()
                );
                assert!(l.trailer_positions().all(|p| p >= l.data_len()));
                assert_eq!(l.filler_positions().count(), l.filler_len());
                assert_eq!(l.embeddable_positions().count() * 8, l.embeddable_bits());
            }
        }
    }

    #[test]
    fn small_block_bump() {
        // S=2 spreads the trailer over four blocks of the last block row
        for w in [8usize, 16, 24, 40, 64] {
            for id in 0..3 {
                let l = SrLayout::new(params(2, 2, 3), w, w, id).unwrap();
                assert!(l.trailer_positions().all(|p| p >= l.data_len()));
                assert!(l.reduced.width >= TRAILER_LEN);
            }
        }
    }

    #[test]
    fn trailer_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let key = EncryptionKey::new([1; 32]);
        let img = smooth(48, 32);
        let p = params(4, 3, 4);
        for share in sr_encrypt(&img, &p, &key, &mut rng).unwrap() {
            let l = read_trailer(&share.image).unwrap();
            assert_eq!((l.params, l.id, l.width, l.height), (p, share.id, 48, 32));
            assert_eq!(share.kind, ShareKind::Reduced);
        }
    }

    #[test]
    fn worked_example_block_vacates_and_restores() {
        // every WB block of a (2,2) share with S=2 holds (150,147,144,145)
        let layout = SrLayout::new(params(2, 2, 2), 64, 64, 1).unwrap();
        let mut share = GrayImage::new(layout.reduced.width, layout.reduced.height);
        for pos in 0..layout.wb * 4 {
            let (row, col) = layout.reduced.stream_pixel(pos);
            share.set(row, col, [150, 147, 144, 145][pos % 4]);
        }
        for ((row, col), v) in layout.trailer_pixels().zip(layout.trailer_values()) {
            share.set(row, col, v);
        }
        assert_eq!(
            codec::block_errors(&wb_block(&share, &layout, 0), 2),
            vec![-3, -6, 1]
        );
        let kd = DataHidingKey::new([5; 32]);
        let marked = sr_embed(&share, b"abc", &kd).unwrap();
        assert_ne!(marked, share);
        let (wb, _) = restore_share(&marked, &layout).unwrap();
        for b in 0..layout.wb {
            assert_eq!(&wb[b * 4..b * 4 + 4], &[150, 147, 144, 145]);
        }
        assert_eq!(sr_extract(&marked, &kd).unwrap(), b"abc");
    }

    #[test]
    fn round_trip_every_subset() {
        let key = EncryptionKey::new([7; 32]);
        let kd = DataHidingKey::new([8; 32]);
        let img = smooth(64, 64);
        for (s, r, n) in [(4, 2, 2), (4, 2, 3), (4, 3, 3), (8, 3, 5)] {
            let mut rng = ChaCha8Rng::seed_from_u64((s * 100 + r * 10 + n) as u64);
            let p = params(s, r, n);
            let shares = sr_encrypt(&img, &p, &key, &mut rng).unwrap();
            let marked: Vec<GrayImage> = shares
                .iter()
                .map(|sh| {
                    let cap = sr_max_payload(&sh.image).unwrap();
                    let payload: Vec<u8> = (0..cap).map(|i| (i * 7) as u8).collect();
                    let m = sr_embed(&sh.image, &payload, &kd).unwrap();
                    assert_eq!(sr_extract(&m, &kd).unwrap(), payload);
                    m
                })
                .collect();
            for mask in 0u32..1 << n {
                if mask.count_ones() as usize != r {
                    continue;
                }
                let subset: Vec<_> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| marked[i].clone())
                    .collect();
                assert_eq!(
                    sr_recover(&subset, &key).unwrap(),
                    img,
                    "({s},{r},{n}) {mask:b}"
                );
            }
        }
    }

    #[test]
    fn capacity_and_vacating_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let key = EncryptionKey::new([7; 32]);
        let kd = DataHidingKey::new([8; 32]);
        let shares = sr_encrypt(&smooth(64, 64), &params(4, 2, 2), &key, &mut rng).unwrap();
        let cap = sr_max_payload(&shares[0].image).unwrap();
        assert!(matches!(
            sr_embed(&shares[0].image, &vec![0; cap + 1], &kd),
            Err(Error::Capacity { .. })
        ));
        let noise = GrayImage::from_fn(64, 64, |_, _| rand::Rng::random(&mut rng));
        let shares = sr_encrypt(&noise, &params(8, 4, 4), &key, &mut rng).unwrap();
        assert!(matches!(
            sr_embed(&shares[0].image, &[], &kd),
            Err(Error::Vacating { .. })
        ));
    }

    #[test]
    fn corrupted_side_info_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let key = EncryptionKey::new([7; 32]);
        let kd = DataHidingKey::new([8; 32]);
        let shares = sr_encrypt(&smooth(64, 64), &params(4, 2, 2), &key, &mut rng).unwrap();
        let mut marked = sr_embed(&shares[0].image, b"hello", &kd).unwrap();
        let layout = read_trailer(&marked).unwrap();
        // the counts start right after the code-length field, inside the
        // first embeddable pixels; flip a high bit of an early count
        let pos = layout.embeddable_positions().nth(4).unwrap();
        let (row, col) = layout.reduced.stream_pixel(pos);
        marked.set(row, col, marked.get(row, col) ^ 0x80);
        assert!(matches!(
            sr_extract(&marked, &kd),
            Err(Error::Extraction(_))
        ));
        assert!(sr_recover(&[marked, shares[1].image.clone()], &key).is_err());
    }

    #[test]
    fn disagreeing_trailers() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let key = EncryptionKey::new([7; 32]);
        let a = sr_encrypt(&smooth(64, 64), &params(4, 2, 2), &key, &mut rng).unwrap();
        let b = sr_encrypt(&smooth(64, 32), &params(4, 2, 2), &key, &mut rng).unwrap();
        let err = sr_recover(&[a[0].image.clone(), b[1].image.clone()], &key).unwrap_err();
        assert!(matches!(err, Error::Recovery(_)));
    }

    #[test]
    fn expansion_decreases_with_r() {
        let e2 = sr_expansion(&params(8, 2, 4), 512, 512).unwrap();
        let e3 = sr_expansion(&params(8, 3, 4), 512, 512).unwrap();
        let e4 = sr_expansion(&params(8, 4, 4), 512, 512).unwrap();
        assert!(e2 > e3 && e3 > e4);
        let e = sr_expansion(&params(8, 2, 2), 512, 512).unwrap();
        assert_eq!(e, 2.0 * 368.0 * 368.0 / (512.0 * 512.0));
    }
}
