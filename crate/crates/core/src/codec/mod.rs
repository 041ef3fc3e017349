//! Prediction and entropy coding used to vacate room in kept blocks.

pub mod arith;
pub mod med;
pub mod side_info;

pub use arith::{ac_decode, ac_encode};
pub use med::{block_errors, block_reconstruct, med_predict};
pub use side_info::{si_len, si_pack, si_unpack, si_widths, SideInfo, ALPHABET, SYMBOL_OFFSET};
