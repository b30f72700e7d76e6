//! Field storage basics: the unitary transform pair, Parseval, quadrature
//! norms, and the flat binary serialization format.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rlab::grid::{lp_norm, make_grid, read_field, write_field, Field, Representation};

fn main() {
    let grid = make_grid(2, 64, std::f64::consts::PI).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = Field::from_values(
        &grid,
        (0..grid.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect(),
        Representation::Physical,
    )
    .unwrap();

    let hat = f.to_frequency();
    let back = hat.to_physical();
    let err: f64 = f
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    println!("round-trip relative error: {:.3e}", err / f.raw_l2());
    println!(
        "Parseval: physical mass {:.12e}, frequency mass {:.12e}",
        f.raw_l2(),
        hat.raw_l2()
    );
    println!(
        "L2 quadrature norm: {:.6e}",
        lp_norm(&f, 2.0, None).unwrap()
    );

    let mut buf = Vec::new();
    write_field(&f, &mut buf).unwrap();
    let restored = read_field(&mut buf.as_slice()).unwrap();
    println!(
        "serialized {} bytes (magic {:?}); restored bit-exact: {}",
        buf.len(),
        std::str::from_utf8(&buf[..5]).unwrap(),
        restored.values() == f.values()
    );
}
