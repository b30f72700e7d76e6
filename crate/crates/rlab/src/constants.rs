//! Frozen calibration constants.
//!
//! Every bound checked in this crate that the theory states only up to an
//! unspecified constant factor is pinned here to a value measured once on
//! the calibration suite and then asserted stable. Tests compare against
//! these frozen values; they are not tuned per run.

/// Bracket for |p(xi)| / (tau * dist(xi, Sigma)) when dist <= tau/10.
pub const SYMBOL_NEAR_BRACKET: (f64, f64) = (0.5, 3.0);

/// Bracket for |p(xi)| / (tau^2 + |xi|^2) when dist > tau/10. The upper
/// endpoint is the analytic supremum (1+sqrt(5))/2, attained for xi
/// antiparallel to U e2 at |xi| = tau (1+sqrt(5))/2.
pub const SYMBOL_FAR_BRACKET: (f64, f64) = (0.02, 1.62);

/// `||u_mu||_2 <= C mu^{-1/2} ||u||` for dyadic characteristic shells
/// (tau = 1 normalization).
pub const DYADIC_SHELL_L2_CONSTANT: f64 = 3.0;

/// Haar-averaged band-projection bound `(int ||P f||_p^p dU)^{1/p}
/// <= C (nu/lambda)^{1/p} ||f||_p`.
pub const BAND_AVG_CONSTANT: f64 = 4.0;

/// Pointwise bound on the sum of squared refined-projection multipliers
/// over antipodal transversal cap pairs at one scale.
pub const CAP_PAIR_SQSUM_BOUND: f64 = 40.0;

/// Trace inequality `||Ef||_{L^2(B_R)} <= C R^{1/2} ||f||_{L^2(S)}`.
pub const TRACE_CONSTANT: f64 = 3.0;

/// Multiplication-norm low-frequency bound
/// `||M_{P_{<=A} d_i f}|| <= C A^2 / M * ||f||_d`.
pub const LOW_FREQ_MULT_CONSTANT: f64 = 4.0;

/// Radon-transform L^2 product bound constant, per ambient dimension n.
pub fn lemma_l2_product_constant(n: usize) -> f64 {
    match n {
        2 => 8.0,
        3 => 8.0,
        _ => 16.0,
    }
}

/// Tube-incidence bound `nu(q0, mu2, lambda1) <= C R^{C_delta * delta}
/// |T2| / (mu2 lambda1)`: the pair (C, C_delta).
pub const KAKEYA_C: f64 = 12.0;
pub const KAKEYA_C_DELTA: f64 = 4.0;

/// Upper-envelope constant per ambient dimension for the bilinear sweep:
/// no candidate may exceed `C mu^{n/2p - delta} nu^{1/p - delta}` at
/// `p' = n/(n-1)`, `delta = 0.05`.
pub fn bilinear_upper_constant(n: usize) -> f64 {
    match n {
        2 => 6.0,
        3 => 6.0,
        _ => 10.0,
    }
}

/// Each tube relates to at most `C log R` balls in the incidence bookkeeping.
pub const TUBE_BALL_RELATION_LOG_CONSTANT: f64 = 12.0;

/// Memory cap echoed by the grid module (d * log2 N).
pub const GRID_MEMORY_CAP: u32 = crate::grid::MEMORY_CAP_LOG2_POINTS;
