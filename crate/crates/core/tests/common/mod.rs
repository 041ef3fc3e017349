#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rdhei_core::GrayImage;

/// Bilinear value noise: random lattice every `cell` pixels.
fn value_noise(rng: &mut impl Rng, size: usize, cell: usize, amp: f64) -> Vec<f64> {
    let lat = size / cell + 2;
    let grid: Vec<f64> = (0..lat * lat)
        .map(|_| rng.random_range(-amp..amp))
        .collect();
    let mut out = vec![0.0; size * size];
    for r in 0..size {
        for c in 0..size {
            let (gy, gx) = (r / cell, c / cell);
            let (fy, fx) = (
                (r % cell) as f64 / cell as f64,
                (c % cell) as f64 / cell as f64,
            );
            let g = |y: usize, x: usize| grid[y * lat + x];
            let top = g(gy, gx) * (1.0 - fx) + g(gy, gx + 1) * fx;
            let bot = g(gy + 1, gx) * (1.0 - fx) + g(gy + 1, gx + 1) * fx;
            out[r * size + c] = top * (1.0 - fy) + bot * fy;
        }
    }
    out
}

fn quantize(size: usize, v: &[f64]) -> GrayImage {
    GrayImage::from_fn(size, size, |r, c| {
        v[r * size + c].round().clamp(0.0, 255.0) as u8
    })
}

/// Three deterministic 512x512 natural-looking test images.
pub fn test_images() -> Vec<(&'static str, GrayImage)> {
    const N: usize = 512;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // layered value noise, like terrain
    let mut terrain = vec![128.0; N * N];
    for (cell, amp) in [(128, 70.0), (32, 30.0), (8, 12.0), (2, 4.0)] {
        for (t, n) in terrain.iter_mut().zip(value_noise(&mut rng, N, cell, amp)) {
            *t += n;
        }
    }

    // interfering waves with fine grain
    let waves: Vec<f64> = (0..N * N)
        .map(|i| {
            let (r, c) = ((i / N) as f64, (i % N) as f64);
            128.0
                + 60.0 * (r / 23.0).sin() * (c / 31.0).cos()
                + 30.0 * ((r + 2.0 * c) / 11.0).sin()
                + rng.random_range(-3.0..3.0)
        })
        .collect();

    // smooth shading with sharp-edged discs
    let discs: Vec<(f64, f64, f64, f64)> = (0..24)
        .map(|_| {
            (
                rng.random_range(0.0..N as f64),
                rng.random_range(0.0..N as f64),
                rng.random_range(10.0..80.0),
                rng.random_range(20.0..235.0),
            )
        })
        .collect();
    let scene: Vec<f64> = (0..N * N)
        .map(|i| {
            let (r, c) = ((i / N) as f64, (i % N) as f64);
            let mut v = 40.0 + 0.3 * r + 0.1 * c;
            for &(y, x, rad, level) in &discs {
                if (r - y).powi(2) + (c - x).powi(2) < rad * rad {
                    v = level + 0.05 * (r - y);
                }
            }
            v + rng.random_range(-2.0..2.0)
        })
        .collect();

    vec![
        ("terrain", quantize(N, &terrain)),
        ("waves", quantize(N, &waves)),
        ("scene", quantize(N, &scene)),
    ]
}

/// A random smooth `size x size` image: low-frequency value noise
/// posterized to multiples of 4.
pub fn random_smooth(seed: u64, size: usize) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = rng.random_range(60.0..190.0);
    let coarse = value_noise(&mut rng, size, 32, 60.0);
    let fine = value_noise(&mut rng, size, 8, 6.0);
    let v: Vec<f64> = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| ((base + a + b) / 4.0).round() * 4.0)
        .collect();
    quantize(size, &v)
}

/// Uniformly random pixels.
pub fn random_noise(seed: u64, width: usize, height: usize) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(width, height, |_, _| rng.random())
}

/// All `r`-element subsets of `0..n`.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}
