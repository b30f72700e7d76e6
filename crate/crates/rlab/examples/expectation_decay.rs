//! Monte-Carlo rendering of the vanishing expected value: draw Haar
//! rotations and moduli from dyadic windows, and watch the averaged dual
//! norm and multiplication-operator norm of a derivative field decay.

use num_complex::Complex64;
use rlab::bump::BumpProfile;
use rlab::cgo::expectation_sweep;
use rlab::grid::{make_grid, Field};

fn main() {
    let grid = make_grid(3, 32, std::f64::consts::PI).unwrap();
    let profile = BumpProfile::smooth(0.9);
    let f = Field::from_fn_physical(&grid, |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Complex64::new(profile.eval(r), 0.0)
    });
    let m_list = [8.0, 16.0, 32.0, 64.0];
    let (rows, _) = expectation_sweep(&f, 0, &m_list, 30, 7).unwrap();
    println!("M,samples,mean_qnorm,se_qnorm,mean_mqnorm,se_mqnorm");
    for r in &rows {
        println!(
            "{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
            r.m, r.samples, r.mean_qnorm, r.se_qnorm, r.mean_mqnorm, r.se_mqnorm
        );
    }
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    println!(
        "\nmultiplication-norm mean fell by {:.1}x from M = {} to M = {}",
        first.mean_mqnorm / last.mean_mqnorm,
        first.m,
        last.m
    );
}
