//! Embedding rates, entropy, expansion and exactness checks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hc;
use crate::image::GrayImage;
use crate::sr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Hc,
    Sr,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hc" => Ok(Scheme::Hc),
            "sr" => Ok(Scheme::Sr),
            _ => Err(Error::InvalidArgument(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Shannon entropy of the 256-bin histogram, in bits per pixel.
pub fn entropy(img: &GrayImage) -> f64 {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total = img.len() as f64;
    hist.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// PSNR in dB; `f64::INFINITY` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::InvalidArgument(format!(
            "cannot compare {}x{} with {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let se: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| (x as i64 - y as i64).pow(2) as u64)
        .sum();
    if se == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = se as f64 / a.len() as f64;
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Original image dimensions recorded in a share, plus its ID.
fn share_info(scheme: Scheme, share: &GrayImage) -> Result<(usize, usize, usize)> {
    Ok(match scheme {
        Scheme::Hc => {
            let l = hc::read_header(share)?;
            (l.grid.width, l.grid.height, l.id)
        }
        Scheme::Sr => {
            let l = sr::read_trailer(share)?;
            (l.width, l.height, l.id)
        }
    })
}

fn original_pixels(scheme: Scheme, shares: &[GrayImage]) -> Result<usize> {
    let mut dims = None;
    for s in shares {
        let (w, h, _) = share_info(scheme, s)?;
        if *dims.get_or_insert((w, h)) != (w, h) {
            return Err(Error::InvalidArgument(
                "shares record different original sizes".into(),
            ));
        }
    }
    let (w, h) = dims.ok_or_else(|| Error::InvalidArgument("no shares".into()))?;
    Ok(w * h)
}

/// Per-share embedding rate in bits per original pixel.
///
/// For `hc` this is the gross rate: every embeddable pixel counts 8 bits.
/// For `sr` it is the payload room left after side information, code and
/// length field, measured on unmarked shares; shares that cannot be
/// vacated report 0.
pub fn measured_er(scheme: Scheme, shares: &[GrayImage]) -> Result<Vec<f64>> {
    let pixels = original_pixels(scheme, shares)? as f64;
    shares
        .iter()
        .map(|s| {
            let bits = match scheme {
                Scheme::Hc => hc::read_header(s)?.embeddable_count() * 8,
                Scheme::Sr => match sr::sr_max_payload(s) {
                    Ok(bytes) => bytes * 8,
                    Err(Error::Vacating { .. }) => 0,
                    Err(e) => return Err(e),
                },
            };
            Ok(bits as f64 / pixels)
        })
        .collect()
}

/// Total share pixels divided by original pixels.
pub fn expansion(scheme: Scheme, shares: &[GrayImage]) -> Result<f64> {
    let pixels = original_pixels(scheme, shares)?;
    let total: usize = shares.iter().map(GrayImage::len).sum();
    Ok(total as f64 / pixels as f64)
}

/// Largest difference in gross hc capacity between two share IDs, in bits.
pub fn hc_balance(params: &crate::SchemeParams, width: usize, height: usize) -> Result<usize> {
    let cap = hc::hc_capacity(params, width, height)?;
    let max = cap.gross_bits.iter().max().copied().unwrap_or(0);
    let min = cap.gross_bits.iter().min().copied().unwrap_or(0);
    Ok(max - min)
}

/// Line-oriented `key=value` summary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub exact: Option<bool>,
    pub psnr: Option<f64>,
    pub entropy: Vec<f64>,
    pub er: Vec<f64>,
    pub expansion: Option<f64>,
    pub balance_bits: Option<usize>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(exact) = self.exact {
            writeln!(f, "exact={exact}")?;
        }
        if let Some(p) = self.psnr {
            if p.is_infinite() {
                writeln!(f, "psnr=inf")?;
            } else {
                writeln!(f, "psnr={p:.4}")?;
            }
        }
        for (i, e) in self.entropy.iter().enumerate() {
            writeln!(f, "entropy.{i}={e:.4}")?;
        }
        for (i, e) in self.er.iter().enumerate() {
            writeln!(f, "er.{i}={e:.4}")?;
        }
        if let Some(x) = self.expansion {
            writeln!(f, "expansion={x:.4}")?;
        }
        if let Some(b) = self.balance_bits {
            writeln!(f, "balance_bits={b}")?;
        }
        Ok(())
    }
}

/// Builds a report from any combination of inputs.
pub fn report(
    scheme: Scheme,
    original: Option<&GrayImage>,
    recovered: Option<&GrayImage>,
    shares: &[GrayImage],
) -> Result<Report> {
    let mut rep = Report::default();
    if let (Some(o), Some(r)) = (original, recovered) {
        rep.exact = Some(o == r);
        rep.psnr = Some(psnr(o, r)?);
    }
    if !shares.is_empty() {
        rep.entropy = shares.iter().map(entropy).collect();
        rep.er = measured_er(scheme, shares)?;
        rep.expansion = Some(expansion(scheme, shares)?);
        if scheme == Scheme::Hc {
            let bits: Vec<usize> = shares
                .iter()
                .map(|s| hc::read_header(s).map(|l| l.embeddable_count() * 8))
                .collect::<Result<_>>()?;
            rep.balance_bits = Some(bits.iter().max().unwrap() - bits.iter().min().unwrap());
        }
    }
    Ok(rep)
}
