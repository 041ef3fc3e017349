//! Block-based `(r, n)` sharing of images and block recovery from the
//! intrinsic correlation between shares of one block.
//!
//! Every pixel of block `i` is shared with the same coefficients `a` and the
//! same evaluation points `x(0..n-1)`, so share `k` of pixel `j` is
//! `B_i(j) + mask(a, x(k))`. Once `r` shares of the block's first pixel
//! have recovered `a`, any single share of another pixel reveals it.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::gf256::{self, FieldElement, SharePoly};
use crate::image::{BlockGrid, GrayImage};
use crate::keys::{self, EncryptionKey};

/// Block side `S`, threshold `r` and share count `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    block: usize,
    threshold: usize,
    shares: usize,
}

impl SchemeParams {
    pub fn new(block: usize, threshold: usize, shares: usize) -> Result<Self> {
        if !(2..=255).contains(&block) {
            return Err(Error::Params(format!(
                "block side must be in 2..=255, got {block}"
            )));
        }
        if threshold < 2 || threshold > shares || shares > 255 {
            return Err(Error::Params(format!(
                "need 2 <= r <= n <= 255, got r={threshold} n={shares}"
            )));
        }
        Ok(SchemeParams {
            block,
            threshold,
            shares,
        })
    }

    /// Block side `S`.
    pub fn block(&self) -> usize {
        self.block
    }

    /// Threshold `r`.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Share count `n`.
    pub fn shares(&self) -> usize {
        self.shares
    }

    /// `BS = S * S`.
    pub fn block_size(&self) -> usize {
        self.block * self.block
    }

    /// Validates the parameters against an image size and returns its grid.
    /// At least four blocks are required.
    pub fn grid(&self, width: usize, height: usize) -> Result<BlockGrid> {
        let grid = BlockGrid::new(width, height, self.block)?;
        if grid.block_count() < 4 {
            return Err(Error::Params(format!(
                "a {height}x{width} image has {} blocks of side {}, need at least 4",
                grid.block_count(),
                self.block
            )));
        }
        Ok(grid)
    }

    /// `BN` for an image of the given size.
    pub fn block_count(&self, width: usize, height: usize) -> Result<usize> {
        self.grid(width, height).map(|g| g.block_count())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShareKind {
    Full,
    Reduced,
}

/// One encrypted image with its identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareImage {
    pub id: usize,
    pub image: GrayImage,
    pub kind: ShareKind,
}

/// Shares one block: `out[k][j] = block[j] + mask(a, xs[k])`.
pub fn share_block(block: &[u8], a: &[FieldElement], xs: &[FieldElement]) -> Vec<Vec<u8>> {
    xs.iter()
        .map(|&x| {
            let m = gf256::mask(a, x).value();
            block.iter().map(|&p| p ^ m).collect()
        })
        .collect()
}

/// Recovers a block from `r` or more shares of its first pixel and one share
/// of each remaining pixel.
///
/// The first `r` first-pixel shares determine the polynomial; any further
/// shares must lie on it, otherwise the block is reported corrupt.
/// Returns the block in raster order together with the recovered polynomial.
pub fn recover_block(
    first_pixel_shares: &[(FieldElement, FieldElement)],
    other_pixel_shares: &[(FieldElement, FieldElement)],
    r: usize,
) -> Result<(Vec<u8>, SharePoly)> {
    if first_pixel_shares.len() < r {
        return Err(Error::Recovery(format!(
            "{} shares of the first pixel, need {r}",
            first_pixel_shares.len()
        )));
    }
    let poly = gf256::recover_coeffs(&first_pixel_shares[..r], r)?;
    for &(x, y) in &first_pixel_shares[r..] {
        if poly.eval(x) != y {
            return Err(Error::Corruption(format!(
                "first-pixel share at x={} disagrees with the other shares",
                x.value()
            )));
        }
    }
    let mut block = Vec::with_capacity(other_pixel_shares.len() + 1);
    block.push(poly.secret().value());
    for &(x, y) in other_pixel_shares {
        block.push((y + gf256::mask(poly.randomness(), x)).value());
    }
    Ok((block, poly))
}

/// Shares `img` with caller-supplied evaluation points and coefficients per
/// block. `xs_for(i)` must return `n` distinct nonzero points and `a_for(i)`
/// `r - 1` coefficients.
pub fn share_image_with<X, A>(
    img: &GrayImage,
    params: &SchemeParams,
    mut xs_for: X,
    mut a_for: A,
) -> Result<Vec<ShareImage>>
where
    X: FnMut(usize) -> Result<Vec<FieldElement>>,
    A: FnMut(usize) -> Vec<FieldElement>,
{
    let grid = params.grid(img.width(), img.height())?;
    let n = params.shares();
    let mut out: Vec<GrayImage> = (0..n)
        .map(|_| GrayImage::new(img.width(), img.height()))
        .collect();
    for view in grid.views() {
        let xs = xs_for(view.index)?;
        let a = a_for(view.index);
        if xs.len() != n || a.len() != params.threshold() - 1 {
            return Err(Error::InvalidArgument(format!(
                "block {}: got {} points and {} coefficients",
                view.index,
                xs.len(),
                a.len()
            )));
        }
        let block = img.block(&view);
        for (share, enc) in out.iter_mut().zip(share_block(&block, &a, &xs)) {
            share.put_block(&view, &enc);
        }
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(id, image)| ShareImage {
            id,
            image,
            kind: ShareKind::Full,
        })
        .collect())
}

/// Encrypts `img` into `n` full-size share images. Block `i` uses
/// `derive_x(K_E, i, n)` and fresh coefficients from `rng`.
pub fn share_image(
    img: &GrayImage,
    params: &SchemeParams,
    key: &EncryptionKey,
    rng: &mut impl RngCore,
) -> Result<Vec<ShareImage>> {
    let n = params.shares();
    let r = params.threshold();
    share_image_with(
        img,
        params,
        |i| keys::derive_x(key, i as u64, n),
        |_| keys::sample_a(rng, r),
    )
}

/// Recovers the original from unmodified full-size shares (at least `r`,
/// distinct IDs).
pub fn recover_image(
    shares: &[ShareImage],
    params: &SchemeParams,
    key: &EncryptionKey,
) -> Result<GrayImage> {
    let r = params.threshold();
    let n = params.shares();
    check_ids(shares.iter().map(|s| s.id), r, n)?;
    let first = &shares[0].image;
    let grid = params.grid(first.width(), first.height())?;
    if shares
        .iter()
        .any(|s| s.image.width() != first.width() || s.image.height() != first.height())
    {
        return Err(Error::Recovery("share images differ in size".into()));
    }
    let mut out = GrayImage::new(first.width(), first.height());
    let bs = grid.block_size();
    for view in grid.views() {
        let xs = keys::derive_x(key, view.index as u64, n)?;
        let firsts: Vec<_> = shares
            .iter()
            .map(|s| (xs[s.id], FieldElement(s.image.get(view.row, view.col))))
            .collect();
        let x0 = xs[shares[0].id];
        let others: Vec<_> = (1..bs)
            .map(|j| {
                let (row, col) = view.pixel(j);
                (x0, FieldElement(first.get(row, col)))
            })
            .collect();
        let (block, _) = recover_block(&firsts, &others, r)?;
        out.put_block(&view, &block);
    }
    Ok(out)
}

/// Checks that at least `r` distinct IDs below `n` are present.
pub(crate) fn check_ids(ids: impl Iterator<Item = usize>, r: usize, n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    let mut count = 0;
    for id in ids {
        if id >= n {
            return Err(Error::Recovery(format!(
                "share ID {id} out of range for n={n}"
            )));
        }
        if std::mem::replace(&mut seen[id], true) {
            return Err(Error::Recovery(format!("share ID {id} supplied twice")));
        }
        count += 1;
    }
    if count < r {
        return Err(Error::Recovery(format!(
            "{count} share images supplied, threshold is {r}"
        )));
    }
    Ok(())
}
