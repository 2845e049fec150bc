//! Independent reference implementations and the check suites built on them.
#![allow(dead_code)]

pub mod oracles;
pub mod suites;

use fakery::rng::SplitMix64;

/// Labels with both classes present and scores with frequent ties.
pub fn random_instance(rng: &mut SplitMix64, max_n: usize) -> (Vec<u8>, Vec<f64>) {
    loop {
        let n = 2 + rng.below(max_n as u64 - 1) as usize;
        let y: Vec<u8> = (0..n).map(|_| rng.below(2) as u8).collect();
        if !y.contains(&0) || !y.contains(&1) {
            continue;
        }
        let levels = 1 + rng.below(6);
        let p = (0..n)
            .map(|_| {
                if rng.below(2) == 0 {
                    // coarse grid forces ties
                    rng.below(levels + 1) as f64 / levels as f64
                } else {
                    rng.next_f64()
                }
            })
            .collect();
        return (y, p);
    }
}

pub fn random_gray(rng: &mut SplitMix64) -> fakery::GrayImage {
    fakery::GrayImage::from_fn(|_, _| rng.below(256) as f64).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
