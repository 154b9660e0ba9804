//! Shared fixtures for the criterion benches.

use teich_core::quadrature::{uniform_open01, SeedStream};
use teich_core::{MeasuredFoliation, Slope, TorusPoint};

/// Deterministic batch of interior points.
pub fn points(n: usize, seed: u64) -> Vec<TorusPoint> {
    let mut rng = SeedStream::new(seed, 0).rng();
    (0..n)
        .map(|_| {
            let re = 6.0 * uniform_open01(&mut rng) - 3.0;
            let im = 0.2 + 4.0 * uniform_open01(&mut rng);
            TorusPoint::new(re, im).expect("interior point")
        })
        .collect()
}

/// Deterministic batch of nonzero foliations.
pub fn foliations(n: usize, seed: u64) -> Vec<MeasuredFoliation> {
    let mut rng = SeedStream::new(seed, 1).rng();
    (0..n)
        .map(|_| {
            MeasuredFoliation::new(
                1.0 + 3.0 * uniform_open01(&mut rng),
                8.0 * uniform_open01(&mut rng) - 4.0,
            )
        })
        .collect()
}

/// Deterministic batch of boundary slopes.
pub fn slopes(n: usize, seed: u64) -> Vec<Slope> {
    let mut rng = SeedStream::new(seed, 2).rng();
    (0..n)
        .map(|_| Slope::new((std::f64::consts::PI * (uniform_open01(&mut rng) - 0.5)).tan()))
        .collect()
}
