//! Tube-incidence counting: decompose the big ball into cubes, classify
//! them by how many fattened tubes of the second family they meet, and
//! check the plane-constrained count of first-family tubes through a busy
//! cube against the combinatorial bound.

use rlab::tubes::{incidence_stats, kakeya_bound_check, occupied_mu2_classes, random_config};

fn main() {
    let config = random_config(3, 2, 64.0, 0.1, 12, 18);
    println!(
        "R = {}, delta = {}, |T1| = {}, |T2| = {}",
        config.big_r,
        config.delta,
        config.tubes1.len(),
        config.tubes2.len()
    );
    println!("\nR,delta,mu2,lambda1,T1,T2,lhs,rhs");
    for mu2 in occupied_mu2_classes(&config) {
        let stats = incidence_stats(&config, mu2);
        let lmax = stats.lambda_total.iter().cloned().max().unwrap_or(0);
        if lmax == 0 {
            continue;
        }
        let lambda1 = 2.0f64.powi((lmax as f64).log2().floor() as i32);
        match kakeya_bound_check(&config, mu2, lambda1, 25, &[0.5], &[-0.5], 0.25) {
            Ok(check) => println!(
                "{},{},{},{},{},{},{},{:.3}",
                config.big_r,
                config.delta,
                mu2,
                lambda1,
                config.tubes1.len(),
                config.tubes2.len(),
                check.lhs,
                check.rhs
            ),
            Err(e) => println!("# class mu2 = {mu2}: {e}"),
        }
    }
}
