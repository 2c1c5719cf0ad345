//! Fixtures shared by the benchmarks.

use paraflux::testbank::default_bank;
use paraflux::{DyadicSystem, Field, Grid};

/// The frozen one-dimensional bank on a `size`-point grid.
pub fn bank(size: usize) -> (DyadicSystem, Vec<Field>) {
    let sys = DyadicSystem::new(&Grid::periodic(1, size).expect("valid size"));
    let fields = default_bank(size)
        .iter()
        .map(|s| s.generate(&sys).expect("bank spec"))
        .collect();
    (sys, fields)
}
