//! Corrector construction for the conjugated equation
//! `Delta psi + 2 zeta . grad psi = q (1 + psi)` by fixed-point iteration,
//! conductivity-to-potential conversion, Haar-random rotations, and the
//! Monte-Carlo sweeps that measure how the averaged norms decay in the
//! modulus window `[M, 2M]`.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::CgoError;
use crate::grid::{apply_multiplier, lp_norm, Ball, Field, FourierGrid, Representation};
use crate::stats::mean_se;
use crate::xb::{
    guard_floor, inv_delta_zeta, mult_operator_norm, symbol_p, xb_norm, InverseMode, PhaseVector,
    XbNormSpec,
};

/// A positive conductivity equal to 1 outside a ball of radius `L/2`.
#[derive(Debug, Clone)]
pub struct ConductivityField {
    gamma: Field,
    lower_bound: f64,
}

impl ConductivityField {
    /// Validate positivity and the far-field normalization.
    pub fn new(gamma: Field, lower_bound: f64) -> Result<Self, CgoError> {
        let phys = gamma.to_physical();
        let grid = phys.grid().clone();
        let mut min = f64::INFINITY;
        let mut far_deviation = 0.0f64;
        let ball = Ball::origin(grid.dim(), grid.box_radius(0) / 2.0);
        let mut idx = vec![0usize; grid.dim()];
        let mut x = vec![0.0f64; grid.dim()];
        for flat in 0..grid.len() {
            let v = phys.values()[flat].re;
            min = min.min(v);
            grid.multi_index(flat, &mut idx);
            for a in 0..grid.dim() {
                x[a] = grid.phys_coord_axis(a, idx[a]);
            }
            if !ball.contains(&x) {
                far_deviation = far_deviation.max((v - 1.0).abs());
            }
        }
        if min < lower_bound {
            return Err(CgoError::PositivityViolation {
                min,
                bound: lower_bound,
            });
        }
        if far_deviation > 1e-10 {
            return Err(CgoError::SupportViolation(far_deviation));
        }
        Ok(ConductivityField {
            gamma: phys,
            lower_bound,
        })
    }

    /// `1 + amplitude * bump(|x| / radius)` with the smooth profile.
    pub fn one_plus_bump(
        grid: &FourierGrid,
        amplitude: f64,
        radius: f64,
    ) -> Result<Self, CgoError> {
        let profile = crate::bump::BumpProfile::smooth(radius);
        let gamma = Field::from_fn_physical(grid, |x| {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            Complex64::new(1.0 + amplitude * profile.eval(r), 0.0)
        });
        ConductivityField::new(gamma, (1.0 + amplitude.min(0.0)) * 0.5)
    }

    pub fn gamma(&self) -> &Field {
        &self.gamma
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }
}

/// Which algebraic form of the potential to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialForm {
    /// `gamma^{-1/2} Laplacian(gamma^{1/2})`, all derivatives spectral.
    Laplacian,
    /// `(1/2) Laplacian(log gamma) + (1/4) |grad log gamma|^2`.
    Divergence,
}

/// Potential of a conductivity; the two forms agree on smooth inputs.
pub fn potential_from_conductivity(
    cond: &ConductivityField,
    form: PotentialForm,
) -> Result<Field, CgoError> {
    let gamma = cond.gamma();
    let grid = gamma.grid().clone();
    let laplace = |f: &Field| -> Result<Field, CgoError> {
        let hat = apply_multiplier(f, |xi| {
            Complex64::new(-xi.iter().map(|v| v * v).sum::<f64>(), 0.0)
        })
        .map_err(CgoError::Grid)?;
        Ok(hat.to_physical())
    };
    match form {
        PotentialForm::Laplacian => {
            let sqrt_gamma = {
                let mut f = gamma.clone();
                for v in f.values_mut() {
                    *v = Complex64::new(v.re.sqrt(), 0.0);
                }
                f
            };
            let lap = laplace(&sqrt_gamma)?;
            let mut q = lap;
            for (qv, gv) in q.values_mut().iter_mut().zip(gamma.values()) {
                *qv /= Complex64::new(gv.re.sqrt(), 0.0);
            }
            Ok(q)
        }
        PotentialForm::Divergence => {
            let log_gamma = {
                let mut f = gamma.clone();
                for v in f.values_mut() {
                    *v = Complex64::new(v.re.ln(), 0.0);
                }
                f
            };
            let lap = laplace(&log_gamma)?;
            let mut q = lap;
            for v in q.values_mut() {
                *v *= 0.5;
            }
            for axis in 0..grid.dim() {
                let d = apply_multiplier(&log_gamma, |xi| Complex64::new(0.0, xi[axis]))
                    .map_err(CgoError::Grid)?
                    .to_physical();
                for (qv, dv) in q.values_mut().iter_mut().zip(d.values()) {
                    *qv += 0.25 * dv * dv.conj();
                }
            }
            Ok(q)
        }
    }
}

/// Diagnostics from one corrector solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannReport {
    pub iterations: usize,
    pub residual: f64,
    pub contraction_estimate: f64,
    /// Corrector size in the `+1/2`-weighted norm (sigma = |zeta|).
    pub psi_norm: f64,
    /// True when the pre-check `||M_q|| < 1` held.
    pub contraction_precheck: bool,
    /// Per-iteration term norms, for series-tail diagnostics.
    pub term_norms: Vec<f64>,
}

/// Solve `(I - R M_q) psi = R q` by the fixed-point iteration
/// `psi <- R(q(1 + psi))`, where `R` inverts the symbol off the guarded
/// modes. Converged when the relative projected residual drops below `tol`.
pub fn neumann_solve(
    q: &Field,
    pv: &PhaseVector,
    max_iter: usize,
    tol: f64,
) -> Result<(Field, NeumannReport), CgoError> {
    let q_phys = q.to_physical();
    let inverse = InverseMode::Regularized {
        sigma_floor: guard_floor(pv.tau()),
    };
    let half = XbNormSpec::inhomogeneous(0.5);

    let precheck = mult_operator_norm(&q_phys, pv, 60, 1e-4, 0x5eed)?;
    let contraction_precheck = precheck.value < 1.0;

    let multiply_q = |f: &Field| -> Result<Field, CgoError> {
        let mut out = f.to_physical();
        for (a, b) in out.values_mut().iter_mut().zip(q_phys.values()) {
            *a *= b;
        }
        Ok(out)
    };

    let mut term = inv_delta_zeta(&q_phys, pv, inverse)?; // first series term
    let mut psi = term.clone();
    let mut term_norms = vec![xb_norm(&term, pv, &half)?];
    let mut residual = conjugated_residual(&psi.to_physical(), &q_phys, pv)?;
    let mut best_residual = residual;
    let mut growth_streak = 0usize;
    let mut iterations = 1usize;

    while residual > tol {
        if iterations >= max_iter {
            return Err(CgoError::MaxIterExceeded {
                iters: iterations,
                residual,
            });
        }
        let qt = multiply_q(&term.to_physical())?;
        term = inv_delta_zeta(&qt, pv, inverse)?;
        psi.add_assign(&term).map_err(CgoError::Grid)?;
        term_norms.push(xb_norm(&term, pv, &half)?);
        iterations += 1;
        residual = conjugated_residual(&psi.to_physical(), &q_phys, pv)?;
        if residual > best_residual {
            growth_streak += 1;
            if growth_streak >= 5 {
                return Err(CgoError::Divergence(growth_streak));
            }
        } else {
            best_residual = residual;
            growth_streak = 0;
        }
    }

    let contraction_estimate = term_norms
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .fold(0.0f64, f64::max);
    let psi_norm = xb_norm(&psi, pv, &half)?;
    let psi_phys = psi.to_physical();
    Ok((
        psi_phys,
        NeumannReport {
            iterations,
            residual,
            contraction_estimate,
            psi_norm,
            contraction_precheck,
            term_norms,
        },
    ))
}

/// Relative residual of `Delta_zeta psi = q (1 + psi)` in the
/// `-1/2`-weighted norm, computed spectrally and posed in the range of the
/// discrete symbol: modes with `|p| < 1e-8 tau^2` carry no equation, since
/// the lattice meets the characteristic sphere at the origin.
pub fn conjugated_residual(psi: &Field, q: &Field, pv: &PhaseVector) -> Result<f64, CgoError> {
    let psi_hat = psi.to_frequency();
    let grid = psi_hat.grid().clone();
    let mut lhs = psi_hat;
    {
        let mut xi = vec![0.0f64; grid.dim()];
        let mut idx = vec![0usize; grid.dim()];
        for flat in 0..grid.len() {
            grid.multi_index(flat, &mut idx);
            for a in 0..grid.dim() {
                xi[a] = grid.freq_coord_axis(a, idx[a]);
            }
            lhs.values_mut()[flat] *= symbol_p(&xi, pv);
        }
    }
    // rhs = q (1 + psi) in frequency representation
    let mut rhs_phys = psi.to_physical();
    let q_phys = q.to_physical();
    for (r, qv) in rhs_phys.values_mut().iter_mut().zip(q_phys.values()) {
        *r = qv * (Complex64::new(1.0, 0.0) + *r);
    }
    let rhs = rhs_phys.to_frequency();
    let mut diff = lhs;
    diff.sub_assign(&rhs).map_err(CgoError::Grid)?;
    // project off the guarded modes
    let floor = guard_floor(pv.tau());
    {
        let mut xi = vec![0.0f64; grid.dim()];
        let mut idx = vec![0usize; grid.dim()];
        for flat in 0..grid.len() {
            grid.multi_index(flat, &mut idx);
            for a in 0..grid.dim() {
                xi[a] = grid.freq_coord_axis(a, idx[a]);
            }
            if symbol_p(&xi, pv).norm() < floor {
                diff.values_mut()[flat] = Complex64::ZERO;
            }
        }
    }
    // denominator in the same projected space, so that psi = 0 gives
    // exactly 1
    let mut q_proj = q_phys.to_frequency();
    {
        let mut xi = vec![0.0f64; grid.dim()];
        let mut idx = vec![0usize; grid.dim()];
        for flat in 0..grid.len() {
            grid.multi_index(flat, &mut idx);
            for a in 0..grid.dim() {
                xi[a] = grid.freq_coord_axis(a, idx[a]);
            }
            if symbol_p(&xi, pv).norm() < floor {
                q_proj.values_mut()[flat] = Complex64::ZERO;
            }
        }
    }
    let minus_half = XbNormSpec::inhomogeneous(-0.5);
    let num = xb_norm(&diff, pv, &minus_half)?;
    let den = xb_norm(&q_proj, pv, &minus_half)?;
    if den == 0.0 {
        return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(num / den)
}

/// Haar-distributed orthogonal matrix by Gram-Schmidt on a Gaussian matrix;
/// the triangular factor's diagonal is positive, which fixes the coset.
pub fn haar_rotation(seed: u64, d: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = |rng: &mut ChaCha8Rng| {
        // Box-Muller
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    loop {
        let g: Vec<f64> = (0..d * d).map(|_| normal(&mut rng)).collect();
        // Gram-Schmidt on columns
        let mut q = vec![0.0f64; d * d];
        let mut ok = true;
        for j in 0..d {
            let mut col: Vec<f64> = (0..d).map(|i| g[i * d + j]).collect();
            for jj in 0..j {
                let dot: f64 = (0..d).map(|i| q[i * d + jj] * col[i]).sum();
                for i in 0..d {
                    col[i] -= dot * q[i * d + jj];
                }
            }
            // re-orthogonalize once for numerical tightness
            for jj in 0..j {
                let dot: f64 = (0..d).map(|i| q[i * d + jj] * col[i]).sum();
                for i in 0..d {
                    col[i] -= dot * q[i * d + jj];
                }
            }
            let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-12 {
                ok = false;
                break;
            }
            for i in 0..d {
                q[i * d + j] = col[i] / norm;
            }
        }
        if ok {
            return q;
        }
    }
}

/// One Monte-Carlo draw of the averaged-norm experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationSample {
    pub rotation: Vec<f64>,
    pub tau: f64,
    /// `-1/2`-weighted norm of the derivative field.
    pub q_norm: f64,
    /// Multiplication-operator norm of the derivative field.
    pub mq_norm: f64,
}

/// Aggregate row for one modulus level `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationRow {
    pub m: f64,
    pub samples: usize,
    pub mean_qnorm: f64,
    pub se_qnorm: f64,
    pub mean_mqnorm: f64,
    pub se_mqnorm: f64,
}

/// Stable per-cell seed mixing.
pub fn mix_seed(seed: u64, level: usize, index: usize) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    h = h
        .wrapping_mul(0xff51_afd7_ed55_8ccd)
        .wrapping_add(level as u64);
    h ^= h >> 33;
    h = h
        .wrapping_mul(0xc4ce_b9fe_1a85_ec53)
        .wrapping_add(index as u64);
    h ^= h >> 33;
    h
}

/// For each `M` in `m_list`, draw `(U, tau)` with `tau` uniform in
/// `[M, 2M]` and record the mean and standard error of the derivative
/// field's dual norm and multiplication norm.
pub fn expectation_sweep(
    f: &Field,
    axis: usize,
    m_list: &[f64],
    samples: usize,
    seed: u64,
) -> Result<(Vec<ExpectationRow>, Vec<Vec<ExpectationSample>>), CgoError> {
    if samples < 20 {
        return Err(CgoError::TooFewSamples(samples));
    }
    let f_phys = f.to_physical();
    let grid = f_phys.grid().clone();
    // support must lie in the unit ball
    let total = lp_norm(&f_phys, 2.0, None).map_err(CgoError::Grid)?;
    let inside =
        lp_norm(&f_phys, 2.0, Some(&Ball::origin(grid.dim(), 1.0))).map_err(CgoError::Grid)?;
    if total > 0.0 {
        let outside_frac = ((total * total - inside * inside).max(0.0)).sqrt() / total;
        if outside_frac > 1e-8 {
            return Err(CgoError::SupportViolation(outside_frac));
        }
    }
    let deriv = apply_multiplier(&f_phys, |xi| Complex64::new(0.0, xi[axis]))
        .map_err(CgoError::Grid)?
        .to_physical();
    let minus_half = XbNormSpec::inhomogeneous(-0.5);

    let mut rows = Vec::with_capacity(m_list.len());
    let mut all_samples = Vec::with_capacity(m_list.len());
    for (level, &m) in m_list.iter().enumerate() {
        let mut qn = Vec::with_capacity(samples);
        let mut mqn = Vec::with_capacity(samples);
        let mut cell_samples = Vec::with_capacity(samples);
        for s in 0..samples {
            let cell_seed = mix_seed(seed, level, s);
            let rotation = haar_rotation(cell_seed, grid.dim());
            let mut rng = ChaCha8Rng::seed_from_u64(cell_seed ^ 0xabcd_ef01);
            let tau = m * (1.0 + rng.random::<f64>());
            let pv = PhaseVector::new(rotation.clone(), grid.dim(), tau)?;
            let q_norm = xb_norm(&deriv, &pv, &minus_half)?;
            let est = mult_operator_norm(&deriv, &pv, 100, 1e-6, cell_seed)?;
            qn.push(q_norm);
            mqn.push(est.value);
            cell_samples.push(ExpectationSample {
                rotation,
                tau,
                q_norm,
                mq_norm: est.value,
            });
        }
        let (mean_qnorm, se_qnorm) = mean_se(&qn);
        let (mean_mqnorm, se_mqnorm) = mean_se(&mqn);
        rows.push(ExpectationRow {
            m,
            samples,
            mean_qnorm,
            se_qnorm,
            mean_mqnorm,
            se_mqnorm,
        });
        all_samples.push(cell_samples);
    }
    Ok((rows, all_samples))
}

/// Signed-permutation structure of an orthogonal matrix, when it has one.
fn signed_permutation(rotation: &[f64], d: usize) -> Option<Vec<(usize, f64)>> {
    let mut map = Vec::with_capacity(d);
    for row in 0..d {
        let mut found = None;
        for col in 0..d {
            let v = rotation[row * d + col];
            if v.abs() > 1e-12 {
                if (v.abs() - 1.0).abs() > 1e-12 || found.is_some() {
                    return None;
                }
                found = Some((col, v.signum()));
            }
        }
        match found {
            Some(f) => map.push(f),
            None => return None,
        }
    }
    Some(map)
}

/// The anisotropic dilation-rotation `u -> tau^{-d} u(tau^{-1} U x)`,
/// realized exactly on the lattice: the output lives on a grid with box
/// radius `tau * L`, and samples are gathered through the signed
/// permutation that `U` induces on the periodic lattice.
///
/// `U` must map the lattice to itself (a signed permutation); arbitrary
/// rotations would need off-lattice interpolation and are rejected.
pub fn scale_rotate(u: &Field, pv: &PhaseVector) -> Result<Field, CgoError> {
    let grid = u.grid().clone();
    let d = grid.dim();
    if d != pv.dim() {
        return Err(CgoError::Grid(crate::error::GridError::IncompatibleFields));
    }
    let perm = signed_permutation(pv.rotation(), d).ok_or(CgoError::LatticeIncompatibleRotation)?;
    let tau = pv.tau();
    let n = grid.points_per_axis();
    let target =
        FourierGrid::new_anisotropic(n, (0..d).map(|a| tau * grid.box_radius(a)).collect())
            .map_err(CgoError::Grid)?;
    let u_phys = u.to_physical();
    let scale = tau.powi(-(d as i32));
    let mut values = vec![Complex64::ZERO; grid.len()];
    let mut idx = vec![0usize; d];
    let mut src_idx = vec![0usize; d];
    for flat in 0..grid.len() {
        grid.multi_index(flat, &mut idx);
        // source point is U x_j: row b of U picks a source axis and sign;
        // negation on the periodic lattice is j -> (N - j) mod N
        for b in 0..d {
            let (col, sign) = perm[b];
            src_idx[b] = if sign > 0.0 {
                idx[col]
            } else {
                (n - idx[col]) % n
            };
        }
        let src_flat = grid.flat_index(&src_idx);
        values[flat] = u_phys.values()[src_flat] * scale;
    }
    Field::from_values(&target, values, Representation::Physical).map_err(CgoError::Grid)
}

/// Quadrature pairing `<a, b> = cell * sum a conj(b)` of physical fields.
pub fn pairing(a: &Field, b: &Field) -> Complex64 {
    let cell = a.grid().cell_volume();
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x * y.conj())
        .sum::<Complex64>()
        * cell
}


#[cfg(test)]
mod failure_tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn strong_potential_fails_loudly() {
        // scale the potential far beyond contraction: the fixed point must
        // either diverge or exhaust its iteration budget, never hang
        let g = make_grid(3, 16, std::f64::consts::PI).unwrap();
        let pv = PhaseVector::new(haar_rotation(2, 3), 3, 2.0).unwrap();
        let cond = ConductivityField::one_plus_bump(&g, 0.4, 1.4).unwrap();
        let mut q = potential_from_conductivity(&cond, PotentialForm::Laplacian).unwrap();
        let est = mult_operator_norm(&q, &pv, 150, 1e-8, 5).unwrap();
        q.scale(Complex64::new(3.0 / est.value, 0.0));
        match neumann_solve(&q, &pv, 40, 1e-8) {
            Err(CgoError::Divergence(_)) | Err(CgoError::MaxIterExceeded { .. }) => {}
            other => panic!("expected divergence or iteration exhaustion, got {other:?}"),
        }
    }
}
