//! The conjugated-Laplacian symbol `p(xi) = -|xi|^2 + 2 i zeta . xi`, its
//! characteristic sphere, the frequency-weighted norms built on |p|, the
//! inverse symbol, characteristic/non-characteristic projections, and
//! multiplication-operator norm estimation by power iteration.
//!
//! The phase vector is `zeta(U, tau) = tau (U e1 - i U e2)` for an
//! orthogonal `U` and `tau >= 1`; its characteristic set is the
//! `(d-2)`-sphere of radius `tau` centered at `tau U e2` inside the
//! hyperplane orthogonal to `U e1`.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::bump::{dyadic_shell, low_cap, smooth_step_down, BumpProfile};
use crate::error::XbError;
use crate::grid::{apply_multiplier, Field, FourierGrid, Representation};

/// Guard threshold factor: the homogeneous weight counts as singular on a
/// lattice point when `|p| < GUARD_FACTOR * tau^2`.
pub const GUARD_FACTOR: f64 = 1e-8;

/// Relative coefficient size below which a lattice point does not count as
/// Fourier support for the singularity guard.
const SUPPORT_EPS: f64 = 1e-14;

/// The guard floor for modulus `tau`: lattice modes with `|p|` below this
/// count as characteristic and are excluded from homogeneous inversion.
pub fn guard_floor(tau: f64) -> f64 {
    GUARD_FACTOR * tau * tau
}

/// An orthogonal matrix paired with the modulus `tau`, encoding the phase
/// vector `zeta = tau (U e1 - i U e2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    rotation: Vec<f64>, // row-major d x d
    dim: usize,
    tau: f64,
}

impl PhaseVector {
    /// Validate orthogonality (to 1e-12) and `tau >= 1`.
    pub fn new(rotation: Vec<f64>, dim: usize, tau: f64) -> Result<Self, XbError> {
        assert_eq!(rotation.len(), dim * dim, "rotation must be d x d");
        let mut deviation = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let mut dot = 0.0;
                for k in 0..dim {
                    dot += rotation[k * dim + i] * rotation[k * dim + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((dot - target).abs());
            }
        }
        if deviation > 1e-12 {
            return Err(XbError::NotOrthogonal(deviation));
        }
        if !(tau >= 1.0) {
            return Err(XbError::BadTau(tau));
        }
        Ok(PhaseVector { rotation, dim, tau })
    }

    /// Identity rotation.
    pub fn axis_aligned(dim: usize, tau: f64) -> Result<Self, XbError> {
        let mut rot = vec![0.0; dim * dim];
        for i in 0..dim {
            rot[i * dim + i] = 1.0;
        }
        PhaseVector::new(rot, dim, tau)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn rotation(&self) -> &[f64] {
        &self.rotation
    }

    /// Column `j` of `U`, i.e. `U e_j` (0-based).
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.rotation[i * self.dim + j])
            .collect()
    }

    /// `|zeta| = sqrt(2) tau`.
    pub fn zeta_norm(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.tau
    }

    /// The complex vector `zeta = tau (U e1 - i U e2)`.
    pub fn zeta(&self) -> Vec<Complex64> {
        let u1 = self.column(0);
        let u2 = self.column(1);
        u1.iter()
            .zip(&u2)
            .map(|(a, b)| Complex64::new(self.tau * a, -self.tau * b))
            .collect()
    }

    /// `zeta . zeta` with the bilinear (unconjugated) dot product; zero for
    /// exactly orthogonal `U`.
    pub fn zeta_dot_zeta(&self) -> Complex64 {
        self.zeta().iter().map(|z| z * z).sum()
    }
}

/// `p(xi) = -|xi|^2 + 2 i zeta . xi
///        = -|xi|^2 + 2 tau <U e2, xi> + 2 i tau <U e1, xi>`.
pub fn symbol_p(xi: &[f64], pv: &PhaseVector) -> Complex64 {
    let d = pv.dim;
    debug_assert_eq!(xi.len(), d);
    let mut norm2 = 0.0;
    let mut a1 = 0.0; // <U e1, xi>
    let mut a2 = 0.0; // <U e2, xi>
    for i in 0..d {
        norm2 += xi[i] * xi[i];
        a1 += pv.rotation[i * d] * xi[i];
        a2 += pv.rotation[i * d + 1] * xi[i];
    }
    Complex64::new(-norm2 + 2.0 * pv.tau * a2, 2.0 * pv.tau * a1)
}

/// Distance from `xi` to the characteristic sphere: with `a = <U e1, xi>`
/// and `xi_perp = xi - a U e1`, this is
/// `sqrt(a^2 + (|xi_perp - tau U e2| - tau)^2)`.
pub fn dist_to_sigma(xi: &[f64], pv: &PhaseVector) -> f64 {
    let d = pv.dim;
    let u1 = pv.column(0);
    let u2 = pv.column(1);
    let a: f64 = (0..d).map(|i| u1[i] * xi[i]).sum();
    let mut radial2 = 0.0;
    for i in 0..d {
        let perp = xi[i] - a * u1[i] - pv.tau * u2[i];
        radial2 += perp * perp;
    }
    let radial_gap = radial2.sqrt() - pv.tau;
    (a * a + radial_gap * radial_gap).sqrt()
}

/// Which weight a norm uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XbMode {
    /// weight `|p|`
    Homogeneous,
    /// weight `|p| + sigma`; `sigma` defaults to `|zeta|`
    Inhomogeneous,
}

/// Exponent and weight selection for the frequency-weighted norm
/// `( sum w(xi)^{2b} |u_hat|^2 * cell )^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XbNormSpec {
    pub b: f64,
    pub mode: XbMode,
    pub sigma: Option<f64>,
}

impl XbNormSpec {
    pub fn homogeneous(b: f64) -> Self {
        XbNormSpec {
            b,
            mode: XbMode::Homogeneous,
            sigma: None,
        }
    }

    pub fn inhomogeneous(b: f64) -> Self {
        XbNormSpec {
            b,
            mode: XbMode::Inhomogeneous,
            sigma: None,
        }
    }

    pub fn with_sigma(b: f64, sigma: f64) -> Self {
        XbNormSpec {
            b,
            mode: XbMode::Inhomogeneous,
            sigma: Some(sigma),
        }
    }

    pub fn weight(&self, p_abs: f64, pv: &PhaseVector) -> f64 {
        match self.mode {
            XbMode::Homogeneous => p_abs,
            XbMode::Inhomogeneous => p_abs + self.sigma.unwrap_or_else(|| pv.zeta_norm()),
        }
    }
}

pub(crate) fn symbol_on_lattice(grid: &FourierGrid, pv: &PhaseVector) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut xi = vec![0.0f64; grid.dim()];
    let mut idx = vec![0usize; grid.dim()];
    for flat in 0..grid.len() {
        grid.multi_index(flat, &mut idx);
        for a in 0..grid.dim() {
            xi[a] = grid.freq_coord_axis(a, idx[a]);
        }
        out.push(symbol_p(&xi, pv));
    }
    out
}

fn guard_violation(hat: &Field, symbols: &[Complex64], tau: f64) -> Option<(f64, f64)> {
    let guard = GUARD_FACTOR * tau * tau;
    let max_coeff = hat.values().iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if max_coeff == 0.0 {
        return None;
    }
    let mut min_p = f64::INFINITY;
    let mut bad = false;
    for (v, p) in hat.values().iter().zip(symbols) {
        if v.norm() > SUPPORT_EPS * max_coeff {
            let pa = p.norm();
            if pa < guard {
                bad = true;
                min_p = min_p.min(pa);
            }
        }
    }
    if bad {
        Some((min_p, guard))
    } else {
        None
    }
}

/// Weighted frequency quadrature `( cell * sum w^{2b} |u_hat|^2 )^{1/2}`.
///
/// In homogeneous mode with `b < 0` the coefficients must vanish on lattice
/// points where `|p| < 1e-8 tau^2`; otherwise the norm is declared singular.
pub fn xb_norm(u: &Field, pv: &PhaseVector, spec: &XbNormSpec) -> Result<f64, XbError> {
    let hat = u.to_frequency();
    let symbols = symbol_on_lattice(hat.grid(), pv);
    if matches!(spec.mode, XbMode::Homogeneous) && spec.b < 0.0 {
        if let Some((min_abs_p, guard)) = guard_violation(&hat, &symbols, pv.tau) {
            return Err(XbError::NearCharacteristicSingularity { min_abs_p, guard });
        }
    }
    let cell = hat.grid().cell_volume();
    // for negative homogeneous exponents, transform round-off below the
    // support threshold must not meet the singular weight
    let support_floor = if spec.b < 0.0 && matches!(spec.mode, XbMode::Homogeneous) {
        SUPPORT_EPS * hat.values().iter().map(|v| v.norm()).fold(0.0f64, f64::max)
    } else {
        0.0
    };
    let mut acc = 0.0f64;
    for (v, p) in hat.values().iter().zip(&symbols) {
        let nv = v.norm();
        if nv <= support_floor || nv == 0.0 {
            continue;
        }
        let w = spec.weight(p.norm(), pv);
        acc += w.powf(2.0 * spec.b) * nv * nv;
    }
    Ok((acc * cell).sqrt())
}

/// How to invert the symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseMode {
    /// Divide by `p`; errors when the support touches the singular set.
    Homogeneous,
    /// Divide by `p` where `|p| >= floor`, zero the rest.
    Regularized { sigma_floor: f64 },
}

/// Apply the inverse symbol: divide frequency coefficients by `p(xi)`.
pub fn inv_delta_zeta(f: &Field, pv: &PhaseVector, mode: InverseMode) -> Result<Field, XbError> {
    let hat = f.to_frequency();
    let symbols = symbol_on_lattice(hat.grid(), pv);
    if matches!(mode, InverseMode::Homogeneous) {
        if let Some((min_abs_p, guard)) = guard_violation(&hat, &symbols, pv.tau) {
            return Err(XbError::NearCharacteristicSingularity { min_abs_p, guard });
        }
    }
    let mut out = hat.clone();
    for (v, p) in out.values_mut().iter_mut().zip(&symbols) {
        match mode {
            InverseMode::Homogeneous => {
                if v.norm() == 0.0 {
                    *v = Complex64::ZERO;
                } else {
                    *v /= p;
                }
            }
            InverseMode::Regularized { sigma_floor } => {
                if p.norm() >= sigma_floor {
                    *v /= p;
                } else {
                    *v = Complex64::ZERO;
                }
            }
        }
    }
    Ok(out)
}

/// Apply the forward symbol: multiply frequency coefficients by `p(xi)`.
pub fn apply_delta_zeta(f: &Field, pv: &PhaseVector) -> Result<Field, XbError> {
    let hat = f.to_frequency();
    let symbols = symbol_on_lattice(hat.grid(), pv);
    let mut out = hat;
    for (v, p) in out.values_mut().iter_mut().zip(&symbols) {
        *v *= p;
    }
    Ok(out)
}

/// Split into characteristic and non-characteristic parts with the smooth
/// cutoff `bump(dist/tau)` supported in `(-1/10, 1/10)`. The two parts sum
/// to the input exactly, in the input's representation.
pub fn q_split(u: &Field, pv: &PhaseVector) -> Result<(Field, Field), XbError> {
    let profile = BumpProfile::smooth(0.1);
    let low_hat = apply_multiplier(u, |xi| {
        let s = dist_to_sigma(xi, pv) / pv.tau;
        Complex64::new(profile.eval(s), 0.0)
    })?;
    let (low, mut high) = match u.representation() {
        Representation::Frequency => (low_hat, u.clone()),
        Representation::Physical => (low_hat.to_physical(), u.clone()),
    };
    high.sub_assign(&low).map_err(XbError::Grid)?;
    Ok((low, high))
}

/// Dyadic characteristic shell: frequency support where
/// `dist(xi, Sigma)/tau` lies in `(mu/2, 2 mu)` (`mu` in unit-sphere units).
pub fn dyadic_char_projection(u: &Field, pv: &PhaseVector, mu: f64) -> Result<Field, XbError> {
    Ok(apply_multiplier(u, |xi| {
        let s = dist_to_sigma(xi, pv) / pv.tau;
        Complex64::new(dyadic_shell(s, mu), 0.0)
    })?)
}

/// The matching low cap: support where `dist/tau <= 2 mu`, equal to one
/// for `dist/tau <= mu`. Shells plus this cap telescope exactly.
pub fn dyadic_low_cap(u: &Field, pv: &PhaseVector, mu: f64) -> Result<Field, XbError> {
    Ok(apply_multiplier(u, |xi| {
        let s = dist_to_sigma(xi, pv) / pv.tau;
        Complex64::new(low_cap(s, mu), 0.0)
    })?)
}

/// Descriptor of an antipodal, transversal cap pair at scale `rho` on the
/// unit characteristic sphere (in the rotated frame of `U`).
#[derive(Debug, Clone, PartialEq)]
pub struct CapPair {
    /// Unit direction of the first cap center in the sphere plane.
    pub omega_u: Vec<f64>,
    /// Unit direction of the second cap center.
    pub omega_v: Vec<f64>,
    /// Cap scale.
    pub rho: f64,
    /// Neighborhood widths of the two fields (unit-sphere units).
    pub width_u: f64,
    pub width_v: f64,
}

impl CapPair {
    /// Direction of the Minkowski-difference support, `(w_v - w_u)/|.|`.
    pub fn difference_direction(&self) -> Vec<f64> {
        let mut d: Vec<f64> = self
            .omega_v
            .iter()
            .zip(&self.omega_u)
            .map(|(b, a)| b - a)
            .collect();
        let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut d {
            *x /= n;
        }
        d
    }

    /// `2 - |w_v - w_u|`, the radial shortfall of the difference support on
    /// the doubled sphere.
    pub fn radial_shortfall(&self) -> f64 {
        let n2: f64 = self
            .omega_v
            .iter()
            .zip(&self.omega_u)
            .map(|(b, a)| (b - a) * (b - a))
            .sum();
        2.0 - n2.sqrt()
    }
}

/// Enumerate antipodal transversal cap pairs at scale `rho` on the unit
/// circle (sphere dimension 1, ambient d = 3). Pairs `(k, k')` qualify when
/// the angle between `omega_{k'}` and `-omega_k` lies in `[rho/2, 4 rho]`.
pub fn antipodal_cap_pairs_circle(rho: f64, width_u: f64, width_v: f64) -> Vec<CapPair> {
    let count = (2.0 * std::f64::consts::PI / rho).ceil() as usize;
    let dir = |k: usize| {
        let th = k as f64 * 2.0 * std::f64::consts::PI / count as f64;
        vec![th.cos(), th.sin()]
    };
    let mut pairs = Vec::new();
    for k in 0..count {
        let wu = dir(k);
        let anti = [-wu[0], -wu[1]];
        for kp in 0..count {
            let wv = dir(kp);
            let cosang = (anti[0] * wv[0] + anti[1] * wv[1]).clamp(-1.0, 1.0);
            let ang = cosang.acos();
            if ang >= rho / 2.0 && ang <= 4.0 * rho {
                pairs.push(CapPair {
                    omega_u: wu.clone(),
                    omega_v: wv,
                    rho,
                    width_u,
                    width_v,
                });
            }
        }
    }
    pairs
}

/// Smooth multiplier localizing to the Minkowski-difference support of one
/// antipodal cap pair, in physical frequency coordinates: radial shell
/// `2 tau - |xi_tilde|` near `tau * shortfall`, direction near the pair's
/// difference direction, and `|<U e1, xi>| <= 2 tau nu`.
pub fn cap_pair_multiplier(xi: &[f64], pv: &PhaseVector, pair: &CapPair) -> f64 {
    let d = pv.dim;
    let u1 = pv.column(0);
    let a: f64 = (0..d).map(|i| u1[i] * xi[i]).sum();
    // coordinates in the sphere plane (components along U e2 .. U e_d)
    let mut tilde = vec![0.0f64; d - 1];
    for j in 1..d {
        let col = pv.column(j);
        tilde[j - 1] = (0..d).map(|i| col[i] * xi[i]).sum();
    }
    let r = tilde.iter().map(|x| x * x).sum::<f64>().sqrt();
    if r == 0.0 {
        return 0.0;
    }
    let tau = pv.tau;
    let nu = pair.width_v.max(pair.width_u);

    let axis = smooth_step_down(a.abs(), 2.0 * tau * nu, 4.0 * tau * nu);

    let shortfall = (2.0 * tau - r) / tau;
    let target = pair.radial_shortfall();
    let width_r = 2.0 * (pair.width_u + pair.width_v) + 4.0 * pair.rho * pair.rho;
    let radial = smooth_step_down((shortfall - target).abs(), width_r, 2.0 * width_r);

    let dd = pair.difference_direction();
    let cosang = tilde.iter().zip(&dd).map(|(x, y)| x * y).sum::<f64>() / r;
    let ang = cosang.clamp(-1.0, 1.0).acos();
    let angular = smooth_step_down(ang, 2.0 * pair.rho, 4.0 * pair.rho);

    axis * radial * angular
}

/// Smooth projection onto `|xi| ~ radial_scale` and
/// `|<U e1, xi>| <= 2 axis_scale`, optionally refined by a cap-pair window.
/// Scales are physical; callers working at modulus `tau` pass `tau*lambda`
/// and `tau*nu`.
pub fn freq_band_projection(
    f: &Field,
    pv: &PhaseVector,
    radial_scale: f64,
    axis_scale: f64,
    refine: Option<&CapPair>,
) -> Result<Field, XbError> {
    let d = pv.dim;
    let u1 = pv.column(0);
    Ok(apply_multiplier(f, |xi| {
        let r: f64 = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        let a: f64 = (0..d).map(|i| u1[i] * xi[i]).sum();
        let radial = dyadic_shell(r, radial_scale);
        let axis = smooth_step_down(a.abs(), 2.0 * axis_scale, 4.0 * axis_scale);
        let refine_window = match refine {
            Some(pair) => cap_pair_multiplier(xi, pv, pair),
            None => 1.0,
        };
        Complex64::new(radial * axis * refine_window, 0.0)
    })?)
}

/// Result of an operator-norm estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorNormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Largest singular value of `W^{-1/2} F M_g F^{-1} W^{-1/2}` with
/// `W = diag(|p| + sigma)`, sigma = |zeta|: the norm of multiplication by
/// `g` from the `+1/2`- to the `-1/2`-weighted space. Power iteration on
/// the normal operator with three seeded restarts.
pub fn mult_operator_norm(
    g: &Field,
    pv: &PhaseVector,
    iters: usize,
    tol: f64,
    seed: u64,
) -> Result<OperatorNormEstimate, XbError> {
    if g.values()
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(XbError::NonFiniteInput);
    }
    let g_phys = g.to_physical();
    let grid = g_phys.grid().clone();
    let symbols = symbol_on_lattice(&grid, pv);
    let sigma = pv.zeta_norm();
    let inv_sqrt_w: Vec<f64> = symbols
        .iter()
        .map(|p| 1.0 / (p.norm() + sigma).sqrt())
        .collect();

    let apply_t = |v: &Field, conj_g: bool| -> Field {
        let mut work = v.clone();
        for (x, w) in work.values_mut().iter_mut().zip(&inv_sqrt_w) {
            *x *= *w;
        }
        let mut phys = work.to_physical();
        for (x, gv) in phys.values_mut().iter_mut().zip(g_phys.values()) {
            *x *= if conj_g { gv.conj() } else { *gv };
        }
        let mut hat = phys.to_frequency();
        for (x, w) in hat.values_mut().iter_mut().zip(&inv_sqrt_w) {
            *x *= *w;
        }
        hat
    };

    let mut best = OperatorNormEstimate {
        value: 0.0,
        converged: false,
        iterations: 0,
    };
    let mut any = false;
    for restart in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart));
        let mut v = Field::from_values(
            &grid,
            (0..grid.len())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
            Representation::Frequency,
        )
        .map_err(XbError::Grid)?;
        let norm = v.raw_l2();
        if norm == 0.0 {
            continue;
        }
        v.scale(Complex64::new(1.0 / norm, 0.0));
        let mut lambda = 0.0f64;
        let mut converged = false;
        let mut used = 0;
        for it in 0..iters {
            let tv = apply_t(&v, false);
            let mut ntv = apply_t(&tv, true);
            let new_lambda = ntv.raw_l2(); // |T^H T v| -> sigma_max^2
            used = it + 1;
            if new_lambda == 0.0 {
                lambda = 0.0;
                converged = true;
                break;
            }
            ntv.scale(Complex64::new(1.0 / new_lambda, 0.0));
            v = ntv;
            let change = (new_lambda - lambda).abs() / new_lambda;
            lambda = new_lambda;
            if it > 0 && change < tol {
                converged = true;
                break;
            }
        }
        let sigma_max = lambda.sqrt();
        if !any || sigma_max > best.value {
            best = OperatorNormEstimate {
                value: sigma_max,
                converged,
                iterations: used,
            };
            any = true;
        }
    }
    Ok(best)
}

/// Power-iteration estimate of the operator norm of the inverse symbol from
/// the `-1/2`- to the `+1/2`-homogeneous space; the exact value is 1.
///
/// The lattice always meets the characteristic sphere at the origin, so the
/// homogeneous space is realized on the complement of the guarded modes
/// (`|p| < 1e-8 tau^2`); those modes are annihilated, not inverted.
pub fn inv_delta_operator_norm(
    grid: &FourierGrid,
    pv: &PhaseVector,
    iters: usize,
    tol: f64,
    seed: u64,
) -> Result<OperatorNormEstimate, XbError> {
    let symbols = symbol_on_lattice(grid, pv);
    let guard = GUARD_FACTOR * pv.tau * pv.tau;
    // T = W^{1/2} diag(1/p) W^{1/2} with W = |p|: diagonal with unit moduli
    // on the regular sector, zero on the guarded modes.
    let diag: Vec<Complex64> = symbols
        .iter()
        .map(|p| {
            if p.norm() < guard {
                Complex64::ZERO
            } else {
                p.norm() / p
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let mut lambda = 0.0f64;
    let mut converged = false;
    let mut used = 0;
    for it in 0..iters {
        for (x, m) in v.iter_mut().zip(&diag) {
            *x *= m;
        }
        for (x, m) in v.iter_mut().zip(&diag) {
            *x *= m.conj();
        }
        let new_lambda = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        used = it + 1;
        for x in v.iter_mut() {
            *x /= new_lambda;
        }
        let change = (new_lambda - lambda).abs() / new_lambda;
        lambda = new_lambda;
        if it > 0 && change < tol {
            converged = true;
            break;
        }
    }
    Ok(OperatorNormEstimate {
        value: lambda.sqrt(),
        converged,
        iterations: used,
    })
}
