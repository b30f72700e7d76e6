//! Wave-packet decomposition in action: exact coefficient Parseval, exact
//! reconstruction of the extension operator, and the transverse decay of a
//! single packet away from its tube.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rlab::surface::{extension_eval, SurfaceDensity, SurfaceGraph};
use rlab::wavepacket::{packet_decay_audit, packet_tube, wp_decompose, wp_reconstruct};

fn main() {
    let surface = SurfaceGraph::paraboloid(2, 0.9);
    let big_r = 64.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = SurfaceDensity::from_fn(vec![0.0], 0.5, 256, |_| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let coeffs = wp_decompose(&f, big_r).unwrap();
    let l2 = f.l2();
    println!("caps: {}", coeffs.partition.len());
    println!("coefficients kept: {}", coeffs.entries.len());
    println!(
        "Parseval: sum |a|^2 = {:.12e} vs ||f||^2 = {:.12e}",
        coeffs.mass(),
        l2 * l2
    );

    let points: Vec<Vec<f64>> = (0..5)
        .map(|i| vec![3.0 * i as f64 - 6.0, 10.0 * i as f64 - 20.0])
        .collect();
    let direct = extension_eval(&f, &surface, &points).unwrap();
    let recon = wp_reconstruct(&coeffs, &f, &surface, &points).unwrap();
    println!("\nreconstruction vs direct extension:");
    for (x, (d, r)) in points.iter().zip(direct.iter().zip(&recon)) {
        println!(
            "  x = ({:>6.2}, {:>7.2}): |direct - packets| = {:.2e}",
            x[0],
            x[1],
            (d - r).norm()
        );
    }

    let entry = coeffs
        .entries
        .iter()
        .filter(|e| coeffs.partition.centers[e.cap][0].abs() <= 0.2)
        .max_by(|a, b| a.coeff.norm().partial_cmp(&b.coeff.norm()).unwrap())
        .unwrap()
        .clone();
    let tube = packet_tube(&coeffs, &entry, &surface, big_r).unwrap();
    let (on_axis, m) = packet_decay_audit(&coeffs, &entry, &f, &surface, big_r).unwrap();
    println!(
        "\nlargest interior packet: cap center {:.3}, tube direction ({:.3}, {:.3})",
        coeffs.partition.centers[entry.cap][0], tube.direction[0], tube.direction[1]
    );
    println!("on-axis amplitude {on_axis:.4e}, transverse decay order {m:.2}");
}
