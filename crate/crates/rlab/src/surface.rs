//! Graph hypersurfaces `{(xi', Phi(xi'))}`, densities sampled on their
//! parameter domain, the oscillatory extension operator, and the
//! hyperplane (Radon) transform used by the `L^2` product bound.
//!
//! Phases follow the `e(z) = exp(2 pi i z)` convention throughout.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::RestrictionError;

const TAU: f64 = std::f64::consts::TAU;

/// Surface family.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    /// `Phi(xi') = |xi'|^2 / 2`
    Paraboloid,
    /// `Phi(xi') = 1 - sqrt(1 - |xi'|^2)`, domain radius below `1/sqrt2 + 1/10`
    Hemisphere,
    /// Paraboloid plus a seeded trigonometric perturbation with Hessian
    /// eigenvalues in `[1 - eps, 1 + eps]`
    Elliptic { eps: f64, seed: u64 },
}

/// A graph hypersurface over a ball in `R^{n-1}`.
///
/// The elliptic kind stores up to three cosine modes, each corrected by its
/// value and slope at the origin so that `Phi(0) = 0` and `grad Phi(0) = 0`,
/// with amplitudes scaled to keep the Hessian inside the stated bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGraph {
    pub kind: SurfaceKind,
    /// Ambient dimension `n`; the graph lives over `R^{n-1}`.
    pub ambient_dim: usize,
    pub domain_radius: f64,
    /// (amplitude, wave vector, phase) per perturbation mode.
    modes: Vec<(f64, Vec<f64>, f64)>,
}

pub const HEMISPHERE_MAX_RADIUS: f64 = 0.807_106_781_186_547_6; // 1/sqrt2 + 1/10

impl SurfaceGraph {
    pub fn new(
        kind: SurfaceKind,
        ambient_dim: usize,
        domain_radius: f64,
    ) -> Result<Self, RestrictionError> {
        assert!(ambient_dim >= 2);
        if let SurfaceKind::Hemisphere = kind {
            if domain_radius >= HEMISPHERE_MAX_RADIUS {
                return Err(RestrictionError::BadHemisphereRadius(domain_radius));
            }
        }
        let modes = if let SurfaceKind::Elliptic { eps, seed } = &kind {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let m = ambient_dim - 1;
            let mut raw: Vec<(f64, Vec<f64>, f64)> = Vec::new();
            let mut hess_budget = 0.0f64;
            for _ in 0..3 {
                let k: Vec<f64> = (0..m).map(|_| rng.random_range(-2i64..=2) as f64).collect();
                let knorm2: f64 = k.iter().map(|v| v * v).sum();
                if knorm2 == 0.0 {
                    continue;
                }
                let amp = 0.5 + rng.random::<f64>();
                let phase = rng.random::<f64>() * TAU;
                hess_budget += amp * knorm2 * TAU * TAU;
                raw.push((amp, k, phase));
            }
            let scale = if hess_budget > 0.0 {
                eps / 2.0 / hess_budget
            } else {
                0.0
            };
            raw.into_iter().map(|(a, k, p)| (a * scale, k, p)).collect()
        } else {
            Vec::new()
        };
        Ok(SurfaceGraph {
            kind,
            ambient_dim,
            domain_radius,
            modes,
        })
    }

    pub fn paraboloid(n: usize, domain_radius: f64) -> Self {
        SurfaceGraph::new(SurfaceKind::Paraboloid, n, domain_radius).expect("paraboloid")
    }

    fn check_domain(&self, xi: &[f64]) -> Result<(), RestrictionError> {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > self.domain_radius + 1e-12 {
            return Err(RestrictionError::DomainViolation(r));
        }
        Ok(())
    }

    /// Graph height `Phi(xi')`.
    pub fn phi(&self, xi: &[f64]) -> Result<f64, RestrictionError> {
        self.check_domain(xi)?;
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        Ok(match &self.kind {
            SurfaceKind::Paraboloid => 0.5 * r2,
            SurfaceKind::Hemisphere => 1.0 - (1.0 - r2).sqrt(),
            SurfaceKind::Elliptic { .. } => {
                let mut v = 0.5 * r2;
                for (amp, k, phase) in &self.modes {
                    let lin: f64 = k.iter().zip(xi).map(|(a, b)| a * b).sum();
                    let arg = TAU * lin + phase;
                    // corrected so value and slope vanish at the origin
                    v += amp * (arg.cos() - phase.cos() + TAU * phase.sin() * lin);
                }
                v
            }
        })
    }

    /// Gradient of the height.
    pub fn grad_phi(&self, xi: &[f64]) -> Result<Vec<f64>, RestrictionError> {
        self.check_domain(xi)?;
        let m = self.ambient_dim - 1;
        Ok(match &self.kind {
            SurfaceKind::Paraboloid => xi.to_vec(),
            SurfaceKind::Hemisphere => {
                let r2: f64 = xi.iter().map(|v| v * v).sum();
                let s = (1.0 - r2).sqrt();
                xi.iter().map(|v| v / s).collect()
            }
            SurfaceKind::Elliptic { .. } => {
                let mut g = xi.to_vec();
                for (amp, k, phase) in &self.modes {
                    let lin: f64 = k.iter().zip(xi).map(|(a, b)| a * b).sum();
                    let arg = TAU * lin + phase;
                    let coeff = amp * TAU * (phase.sin() - arg.sin());
                    for i in 0..m {
                        g[i] += coeff * k[i];
                    }
                }
                g
            }
        })
    }

    /// Hessian of the height, row-major `(n-1) x (n-1)`.
    pub fn hessian_phi(&self, xi: &[f64]) -> Result<Vec<f64>, RestrictionError> {
        self.check_domain(xi)?;
        let m = self.ambient_dim - 1;
        let mut h = vec![0.0f64; m * m];
        match &self.kind {
            SurfaceKind::Paraboloid => {
                for i in 0..m {
                    h[i * m + i] = 1.0;
                }
            }
            SurfaceKind::Hemisphere => {
                let r2: f64 = xi.iter().map(|v| v * v).sum();
                let s = (1.0 - r2).sqrt();
                for i in 0..m {
                    for j in 0..m {
                        let mut v = xi[i] * xi[j] / (s * s * s);
                        if i == j {
                            v += 1.0 / s;
                        }
                        h[i * m + j] = v;
                    }
                }
            }
            SurfaceKind::Elliptic { .. } => {
                for i in 0..m {
                    h[i * m + i] = 1.0;
                }
                for (amp, k, phase) in &self.modes {
                    let lin: f64 = k.iter().zip(xi).map(|(a, b)| a * b).sum();
                    let arg = TAU * lin + phase;
                    let c = -amp * arg.cos() * TAU * TAU;
                    for i in 0..m {
                        for j in 0..m {
                            h[i * m + j] += c * k[i] * k[j];
                        }
                    }
                }
            }
        }
        Ok(h)
    }
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mat: &[f64], m: usize) -> Vec<f64> {
    let mut a = mat.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..m {
            for j in i + 1..m {
                off += a[i * m + j] * a[i * m + j];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}

/// A complex density sampled on a uniform lattice over the box
/// `[center - half_extent, center + half_extent]^{n-1}` in the surface
/// parameter domain. Cell midpoints are the quadrature nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDensity {
    pub center: Vec<f64>,
    pub half_extent: f64,
    /// lattice points per axis
    pub m: usize,
    pub values: Vec<Complex64>,
}

impl SurfaceDensity {
    pub fn from_fn(
        center: Vec<f64>,
        half_extent: f64,
        m: usize,
        mut f: impl FnMut(&[f64]) -> Complex64,
    ) -> Self {
        let dim = center.len();
        let count = m.pow(dim as u32);
        let mut values = Vec::with_capacity(count);
        let mut idx = vec![0usize; dim];
        let mut xi = vec![0.0f64; dim];
        for flat in 0..count {
            Self::unflatten(flat, m, &mut idx);
            for a in 0..dim {
                xi[a] =
                    center[a] - half_extent + 2.0 * half_extent * (idx[a] as f64 + 0.5) / m as f64;
            }
            values.push(f(&xi));
        }
        SurfaceDensity {
            center,
            half_extent,
            m,
            values,
        }
    }

    fn unflatten(mut flat: usize, m: usize, out: &mut [usize]) {
        for a in (0..out.len()).rev() {
            out[a] = flat % m;
            flat /= m;
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.m as f64
    }

    pub fn cell(&self) -> f64 {
        self.spacing().powi(self.dim() as i32)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.dim()];
        Self::unflatten(flat, self.m, &mut idx);
        (0..self.dim())
            .map(|a| {
                self.center[a] - self.half_extent
                    + 2.0 * self.half_extent * (idx[a] as f64 + 0.5) / self.m as f64
            })
            .collect()
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.cell()
    }

    pub fn l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell()).sqrt()
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Modulus interpolated multilinearly; zero outside the box.
    pub fn interpolate_abs(&self, xi: &[f64]) -> f64 {
        let dim = self.dim();
        let h = self.spacing();
        let mut base = vec![0isize; dim];
        let mut frac = vec![0.0f64; dim];
        for a in 0..dim {
            let t = (xi[a] - (self.center[a] - self.half_extent)) / h - 0.5;
            let f = t.floor();
            base[a] = f as isize;
            frac[a] = t - f;
        }
        let mut acc = 0.0f64;
        for corner in 0..(1usize << dim) {
            let mut w = 1.0f64;
            let mut flat = 0usize;
            let mut valid = true;
            for a in 0..dim {
                let step = ((corner >> a) & 1) as isize;
                let ia = base[a] + step;
                if ia < 0 || ia >= self.m as isize {
                    valid = false;
                    break;
                }
                w *= if step == 1 { frac[a] } else { 1.0 - frac[a] };
                flat = flat * self.m + ia as usize;
            }
            if valid && w > 0.0 {
                acc += w * self.values[flat].norm();
            }
        }
        acc
    }
}

/// The extension operator `Ef(x) = sum f(xi') e(<x', xi'> + x_n Phi(xi'))
/// * cell`, a direct oscillatory Riemann sum over the density lattice.
pub fn extension_eval(
    density: &SurfaceDensity,
    surface: &SurfaceGraph,
    x_points: &[Vec<f64>],
) -> Result<Vec<Complex64>, RestrictionError> {
    let dim = density.dim();
    assert_eq!(dim + 1, surface.ambient_dim);
    let cell = density.cell();
    // cache nonzero nodes with their heights
    let mut nodes: Vec<(Vec<f64>, f64, Complex64)> = Vec::new();
    for flat in 0..density.len() {
        let v = density.values[flat];
        if v == Complex64::ZERO {
            continue;
        }
        let xi = density.point(flat);
        let h = surface.phi(&xi)?;
        nodes.push((xi, h, v));
    }
    let mut out = Vec::with_capacity(x_points.len());
    for x in x_points {
        debug_assert_eq!(x.len(), dim + 1);
        let mut acc = Complex64::ZERO;
        for (xi, height, v) in &nodes {
            let mut phase: f64 = xi.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            phase += x[dim] * height;
            acc += v * Complex64::new(0.0, TAU * phase).exp();
        }
        out.push(acc * cell);
    }
    Ok(out)
}

/// Hyperplane transform: quadrature of `|f|` over the hyperplane through
/// `xi'` with normal `theta`, by multilinear interpolation on the density
/// lattice. In one parameter dimension the hyperplane degenerates to the
/// point itself.
pub fn radon_hyperplane(density: &SurfaceDensity, xi: &[f64], theta: &[f64]) -> f64 {
    let dim = density.dim();
    let tn: f64 = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((tn - 1.0).abs() < 1e-9, "theta must be a unit vector");
    if dim == 1 {
        return density.interpolate_abs(xi);
    }
    // orthonormal basis of the orthogonal complement of theta
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for axis in 0..dim {
        let mut v = vec![0.0f64; dim];
        v[axis] = 1.0;
        let d: f64 = v.iter().zip(theta).map(|(a, b)| a * b).sum();
        for i in 0..dim {
            v[i] -= d * theta[i];
        }
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            for i in 0..dim {
                v[i] -= d * b[i];
            }
        }
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            for x in &mut v {
                *x /= n;
            }
            basis.push(v);
            if basis.len() == dim - 1 {
                break;
            }
        }
    }
    let h = density.spacing();
    let reach = 2.0
        * (density.half_extent
            + density
                .center
                .iter()
                .zip(xi)
                .map(|(c, x)| (c - x).abs())
                .fold(0.0, f64::max));
    let steps = (2.0 * reach / h).ceil() as i64;
    let param_dims = basis.len();
    let mut acc = 0.0f64;
    let mut counter = vec![-steps; param_dims];
    'outer: loop {
        let mut point = xi.to_vec();
        for (b, &c) in basis.iter().zip(counter.iter()) {
            for i in 0..dim {
                point[i] += c as f64 * h * b[i];
            }
        }
        acc += density.interpolate_abs(&point);
        for a in 0..param_dims {
            counter[a] += 1;
            if counter[a] <= steps {
                continue 'outer;
            }
            counter[a] = -steps;
        }
        break;
    }
    acc * h.powi(param_dims as i32)
}

/// `L^2` norm over a ball by seeded Monte-Carlo quadrature:
/// `sqrt(vol(B_R) * mean |g|^2)`, deterministic for a fixed seed.
pub fn ball_l2_norm(
    mut eval: impl FnMut(&[f64]) -> Complex64,
    dim: usize,
    radius: f64,
    points: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0f64;
    let mut x = vec![0.0f64; dim];
    let mut used = 0usize;
    while used < points {
        for v in x.iter_mut() {
            *v = (rng.random::<f64>() * 2.0 - 1.0) * radius;
        }
        if x.iter().map(|v| v * v).sum::<f64>() <= radius * radius {
            acc += eval(&x).norm_sqr();
            used += 1;
        }
    }
    let vol = ball_volume(dim, radius);
    (vol * acc / points as f64).sqrt()
}

/// Volume of the n-ball.
pub fn ball_volume(dim: usize, radius: f64) -> f64 {
    let half = dim as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma_half_integer(dim) * radius.powi(dim as i32)
}

/// `Gamma(n/2 + 1)` for integer `n`.
fn gamma_half_integer(n: usize) -> f64 {
    if n % 2 == 0 {
        (1..=n / 2).map(|k| k as f64).product()
    } else {
        let mut acc = std::f64::consts::PI.sqrt();
        let mut v = n as f64 / 2.0;
        while v > 0.0 {
            acc *= v;
            v -= 1.0;
        }
        acc
    }
}
