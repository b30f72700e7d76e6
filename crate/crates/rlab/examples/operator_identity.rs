//! The inverse of the conjugated Laplacian is an exact isometry between the
//! dual pair of homogeneous frequency-weighted spaces: its operator norm is
//! one, independent of the phase vector. This example estimates the norm by
//! power iteration for a handful of Haar-random rotations and moduli and
//! prints the deviation from one.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rlab::cgo::haar_rotation;
use rlab::grid::make_grid;
use rlab::xb::{inv_delta_operator_norm, symbol_p, PhaseVector};

fn main() {
    let grid = make_grid(3, 32, std::f64::consts::PI).unwrap();
    println!("power-iteration estimates of the inverse-symbol operator norm");
    println!(
        "{:>6} {:>10} {:>22} {:>12}",
        "seed", "tau", "estimated norm", "iterations"
    );
    for seed in 0..8u64 {
        let rot = haar_rotation(seed, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let tau = 2.0 + 30.0 * rng.random::<f64>();
        let pv = PhaseVector::new(rot, 3, tau).unwrap();
        let est = inv_delta_operator_norm(&grid, &pv, 300, 1e-10, seed).unwrap();
        println!(
            "{seed:>6} {tau:>10.4} {:>22.16} {:>12}",
            est.value, est.iterations
        );
    }
    // the symbol vanishes exactly at the origin for every phase vector
    let pv = PhaseVector::axis_aligned(3, 4.0).unwrap();
    println!(
        "\nsymbol at the origin: {:.3e} (the characteristic sphere passes through 0)",
        symbol_p(&[0.0, 0.0, 0.0], &pv).norm()
    );
}
