//! Build a conductivity bump, convert it to a potential, and solve the
//! conjugated equation by the fixed-point series at several moduli. The
//! corrector norm shrinks as the modulus grows, which is the quantitative
//! engine behind the uniqueness argument.

use rlab::cgo::{
    haar_rotation, neumann_solve, potential_from_conductivity, ConductivityField, PotentialForm,
};
use rlab::grid::make_grid;
use rlab::xb::PhaseVector;

fn main() {
    let grid = make_grid(3, 64, std::f64::consts::PI).unwrap();
    let cond = ConductivityField::one_plus_bump(&grid, 0.1, 1.4).unwrap();
    let q = potential_from_conductivity(&cond, PotentialForm::Laplacian).unwrap();

    println!("fixed-point corrector solves, one Haar rotation per row");
    println!(
        "{:>6} {:>6} {:>12} {:>14} {:>14}",
        "tau", "iters", "residual", "contraction", "corrector norm"
    );
    for (i, tau) in [8.0f64, 16.0, 32.0].iter().enumerate() {
        for s in 0..3u64 {
            let rot = haar_rotation(10 * i as u64 + s, 3);
            let pv = PhaseVector::new(rot, 3, *tau).unwrap();
            let (_psi, report) = neumann_solve(&q, &pv, 80, 1e-8).unwrap();
            println!(
                "{tau:>6} {:>6} {:>12.3e} {:>14.4} {:>14.6e}",
                report.iterations, report.residual, report.contraction_estimate, report.psi_norm
            );
        }
    }
}
