//! Reversible data hiding over encrypted grayscale images.
//!
//! Images are encrypted with block-based `(r, n)` Shamir sharing over
//! GF(2^8): every pixel of an `S x S` block is shared with the same random
//! coefficients and evaluation points. Because of that reuse, a block can be
//! rebuilt from `r` shares of its first pixel plus a single share of every
//! other pixel, which leaves the remaining shares free for other uses.
//!
//! Two schemes build on this:
//!
//! * [`hc`], the high-capacity scheme: the redundant shares stay in full-size
//!   share images and are overwritten with payload bits directly.
//! * [`sr`], the size-reduced scheme: redundant shares are dropped, each share
//!   image is repacked into a smaller square, and room is vacated by MED
//!   prediction plus arithmetic coding of the fully kept blocks.

pub mod bits;
pub mod codec;
pub mod error;
pub mod gf256;
pub mod hc;
pub mod image;
pub mod keys;
pub mod metrics;
pub mod sharing;
pub mod space_alloc;
pub mod sr;

pub use error::{Error, ErrorKind, Result};
pub use gf256::{FieldElement, SharePoly};
pub use image::{read_pgm, write_pgm, GrayImage};
pub use keys::{DataHidingKey, EncryptionKey};
pub use metrics::Scheme;
pub use sharing::{SchemeParams, ShareImage, ShareKind};
