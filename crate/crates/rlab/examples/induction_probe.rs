//! Scale-iteration probe: the localized bilinear constant across a ladder
//! of radii. At the endpoint exponent the estimate saturates, consistent
//! with growth only by delta-losses.

use rlab::induction::induction_probe;
use rlab::surface::SurfaceGraph;

fn main() {
    let surface = SurfaceGraph::paraboloid(2, 0.9);
    let nu = 1.0 / 16.0;
    let probe = induction_probe(&surface, nu, &[16.0, 32.0, 64.0, 128.0], 2.0, 4, 7).unwrap();
    println!("nu = {nu}, p' = 2");
    println!("{:>8} {:>14}", "R", "K estimate");
    for row in &probe.rows {
        println!("{:>8} {:>14.6e}", row.big_r, row.k_estimate);
    }
    println!(
        "\nfitted growth exponent in R: {:.4}",
        probe.growth_exponent.unwrap()
    );
}
