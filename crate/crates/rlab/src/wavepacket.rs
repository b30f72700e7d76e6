//! Wave-packet decomposition of extension operators: smooth cap partitions
//! with exact squared sum one, local Fourier coefficients with exact
//! Parseval, reconstruction, and the decay audit of a single packet.
//!
//! Caps have support radius `R^{-1/2}` and centers spaced `1.5 R^{-1/2}`;
//! each cap's Fourier series lives on the period box of side `2 R^{-1/2}`,
//! so the packet frequency lattice has spacing `R^{1/2}/2`.

use num_complex::Complex64;

use crate::bump::BumpProfile;
use crate::error::WavePacketError;
use crate::surface::{SurfaceDensity, SurfaceGraph};

const TAU: f64 = std::f64::consts::TAU;

/// A smooth partition of the parameter domain into overlapping caps whose
/// squared sum is exactly one where any cap is positive.
#[derive(Debug, Clone)]
pub struct CapPartition {
    pub dim: usize,
    pub support_radius: f64,
    pub spacing: f64,
    pub centers: Vec<Vec<f64>>,
    profile: BumpProfile,
}

impl CapPartition {
    /// Caps covering `[-domain_radius, domain_radius]^{dim}` at scale
    /// `R^{-1/2}`.
    pub fn new(domain_radius: f64, big_r: f64, dim: usize) -> Self {
        let support_radius = big_r.powf(-0.5);
        let spacing = 1.5 * support_radius;
        let per_axis = (domain_radius / spacing).floor() as i64;
        let mut centers = Vec::new();
        let mut idx = vec![-per_axis; dim];
        'outer: loop {
            centers.push(idx.iter().map(|&k| k as f64 * spacing).collect());
            for a in 0..dim {
                idx[a] += 1;
                if idx[a] <= per_axis {
                    continue 'outer;
                }
                idx[a] = -per_axis;
            }
            break;
        }
        CapPartition {
            dim,
            support_radius,
            spacing,
            centers,
            profile: BumpProfile::smooth(1.0),
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    fn eta(&self, cap: usize, xi: &[f64]) -> f64 {
        let c = &self.centers[cap];
        let mut v = 1.0;
        for a in 0..self.dim {
            v *= self.profile.eval((xi[a] - c[a]) / self.support_radius);
            if v == 0.0 {
                return 0.0;
            }
        }
        v
    }

    fn eta_sum_sq(&self, xi: &[f64]) -> f64 {
        // only caps within one spacing contribute
        let mut acc = 0.0;
        for cap in 0..self.len() {
            let e = self.eta(cap, xi);
            acc += e * e;
        }
        acc
    }

    /// The normalized partition function `zeta_cap`.
    pub fn zeta(&self, cap: usize, xi: &[f64]) -> f64 {
        let e = self.eta(cap, xi);
        if e == 0.0 {
            return 0.0;
        }
        e / self.eta_sum_sq(xi).sqrt()
    }

    /// Squared sum over all caps; exactly one wherever some cap is positive.
    pub fn squared_sum(&self, xi: &[f64]) -> f64 {
        let s = self.eta_sum_sq(xi);
        if s > 0.0 {
            1.0
        } else {
            0.0
        }
    }
}

/// One packet coefficient: cap index, frequency offset, amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketEntry {
    pub cap: usize,
    pub omega: Vec<f64>,
    pub coeff: Complex64,
}

/// The full coefficient table of a decomposition.
#[derive(Debug, Clone)]
pub struct PacketCoefficients {
    pub entries: Vec<PacketEntry>,
    pub partition: CapPartition,
    /// volume of one period box
    pub box_volume: f64,
    /// frequency-lattice spacing of the packets, `R^{1/2}/2`
    pub freq_spacing: f64,
}

impl PacketCoefficients {
    /// `sum |a|^2`.
    pub fn mass(&self) -> f64 {
        self.entries.iter().map(|e| e.coeff.norm_sqr()).sum()
    }
}

/// Check that the density lattice is commensurate with the cap layout; the
/// local Fourier series is exact only when period boxes align with cells.
fn commensurate(
    density: &SurfaceDensity,
    part: &CapPartition,
) -> Result<(usize, usize), WavePacketError> {
    let h = density.spacing();
    let ratio = part.support_radius / h;
    let m_box = (2.0 * ratio).round();
    if (2.0 * ratio - m_box).abs() > 1e-9 || m_box < 4.0 {
        return Err(WavePacketError::ResolutionLoss(part.support_radius));
    }
    let s_ratio = part.spacing / h;
    if (s_ratio - s_ratio.round()).abs() > 1e-9 {
        return Err(WavePacketError::ResolutionLoss(part.spacing));
    }
    Ok((m_box as usize, s_ratio.round() as usize))
}

/// Decompose a density into wave-packet coefficients
/// `a(cap, omega) = |box|^{-1/2} sum f zeta_cap e(-<omega, xi - c>) cell`,
/// with `omega` on the full discrete dual lattice of the period box,
/// truncated below `1e-12` of the maximum. The coefficients satisfy
/// Parseval exactly: `sum |a|^2 = ||f||_2^2`.
pub fn wp_decompose(
    density: &SurfaceDensity,
    big_r: f64,
) -> Result<PacketCoefficients, WavePacketError> {
    let dim = density.dim();
    let part = CapPartition::new(
        density.half_extent + density.center.iter().map(|c| c.abs()).fold(0.0, f64::max),
        big_r,
        dim,
    );
    let (m_box, _) = commensurate(density, &part)?;
    let w = 2.0 * part.support_radius;
    let vbox = w.powi(dim as i32);
    let freq_spacing = 1.0 / w;
    let cell = density.cell();

    let mut raw: Vec<PacketEntry> = Vec::new();
    let mut max_abs = 0.0f64;
    // gather cell values per cap once
    for cap in 0..part.len() {
        let c = &part.centers[cap];
        // collect nonzero f*zeta samples living in the period box
        let mut samples: Vec<(Vec<f64>, Complex64)> = Vec::new();
        for flat in 0..density.len() {
            let v = density.values[flat];
            if v == Complex64::ZERO {
                continue;
            }
            let xi = density.point(flat);
            let z = part.zeta(cap, &xi);
            if z == 0.0 {
                continue;
            }
            samples.push((xi, v * z));
        }
        if samples.is_empty() {
            continue;
        }
        // full discrete dual lattice of the box
        let half = (m_box / 2) as i64;
        let mut widx = vec![-half; dim];
        'omega: loop {
            let omega: Vec<f64> = widx.iter().map(|&k| k as f64 * freq_spacing).collect();
            let mut acc = Complex64::ZERO;
            for (xi, fv) in &samples {
                let phase: f64 = omega
                    .iter()
                    .zip(xi.iter().zip(c.iter()))
                    .map(|(w, (x, cc))| w * (x - cc))
                    .sum();
                acc += fv * Complex64::new(0.0, -TAU * phase).exp();
            }
            let coeff = acc * cell / vbox.sqrt();
            max_abs = max_abs.max(coeff.norm());
            raw.push(PacketEntry { cap, omega, coeff });
            for a in 0..dim {
                widx[a] += 1;
                if widx[a] < half {
                    continue 'omega;
                }
                widx[a] = -half;
            }
            break;
        }
    }
    let keep = 1e-12 * max_abs;
    let entries: Vec<PacketEntry> = raw.into_iter().filter(|e| e.coeff.norm() >= keep).collect();
    Ok(PacketCoefficients {
        entries,
        partition: part,
        box_volume: vbox,
        freq_spacing,
    })
}

/// Evaluate the extension of a single packet
/// `|box|^{-1/2} zeta_cap(xi) e(<omega, xi - c>)` at physical points.
pub fn packet_field(
    coeffs: &PacketCoefficients,
    entry: &PacketEntry,
    density_template: &SurfaceDensity,
    surface: &SurfaceGraph,
    x_points: &[Vec<f64>],
) -> Result<Vec<Complex64>, WavePacketError> {
    let part = &coeffs.partition;
    let c = &part.centers[entry.cap];
    let packet = SurfaceDensity::from_fn(
        density_template.center.clone(),
        density_template.half_extent,
        density_template.m,
        |xi| {
            let z = part.zeta(entry.cap, xi);
            if z == 0.0 {
                return Complex64::ZERO;
            }
            let phase: f64 = entry
                .omega
                .iter()
                .zip(xi.iter().zip(c.iter()))
                .map(|(w, (x, cc))| w * (x - cc))
                .sum();
            Complex64::new(0.0, TAU * phase).exp() * z / coeffs.box_volume.sqrt()
        },
    );
    Ok(crate::surface::extension_eval(&packet, surface, x_points)?)
}

/// Reconstruct the extension `Ef` from packet coefficients at the given
/// physical points: caps are reassembled into densities and extended, which
/// is the same sum as packet-by-packet evaluation.
pub fn wp_reconstruct(
    coeffs: &PacketCoefficients,
    density_template: &SurfaceDensity,
    surface: &SurfaceGraph,
    x_points: &[Vec<f64>],
) -> Result<Vec<Complex64>, WavePacketError> {
    let part = &coeffs.partition;
    let mut out = vec![Complex64::ZERO; x_points.len()];
    for cap in 0..part.len() {
        let cap_entries: Vec<&PacketEntry> =
            coeffs.entries.iter().filter(|e| e.cap == cap).collect();
        if cap_entries.is_empty() {
            continue;
        }
        let c = &part.centers[cap];
        let partial = SurfaceDensity::from_fn(
            density_template.center.clone(),
            density_template.half_extent,
            density_template.m,
            |xi| {
                let z = part.zeta(cap, xi);
                if z == 0.0 {
                    return Complex64::ZERO;
                }
                let mut acc = Complex64::ZERO;
                for e in &cap_entries {
                    let phase: f64 = e
                        .omega
                        .iter()
                        .zip(xi.iter().zip(c.iter()))
                        .map(|(w, (x, cc))| w * (x - cc))
                        .sum();
                    acc += e.coeff * Complex64::new(0.0, TAU * phase).exp();
                }
                acc * z / coeffs.box_volume.sqrt()
            },
        );
        let vals = crate::surface::extension_eval(&partial, surface, x_points)?;
        for (o, v) in out.iter_mut().zip(vals) {
            *o += v;
        }
    }
    Ok(out)
}

/// Geometry of the tube carrying one packet: direction
/// `(-grad Phi(c), 1)`, axis through `(-omega, 0)`, cross radius `R^{1/2}`.
pub fn packet_tube(
    coeffs: &PacketCoefficients,
    entry: &PacketEntry,
    surface: &SurfaceGraph,
    big_r: f64,
) -> Result<crate::tubes::Tube, WavePacketError> {
    let c = &coeffs.partition.centers[entry.cap];
    let grad = surface.grad_phi(c)?;
    let mut dir: Vec<f64> = grad.iter().map(|g| -g).collect();
    dir.push(1.0);
    let norm: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut dir {
        *v /= norm;
    }
    let mut base: Vec<f64> = entry.omega.iter().map(|w| -w).collect();
    base.push(0.0);
    Ok(crate::tubes::Tube {
        direction: dir,
        base,
        cross_radius: big_r.sqrt(),
        length: big_r,
        dilation: 1.0,
    })
}

/// Measured decay of one packet transverse to its tube: amplitudes at
/// offsets `{2, 4, 8} R^{1/2}` from the axis, fitted as
/// `|phi| ~ dist^{-M}`. Returns `(on_axis, fitted_m)`.
pub fn packet_decay_audit(
    coeffs: &PacketCoefficients,
    entry: &PacketEntry,
    density_template: &SurfaceDensity,
    surface: &SurfaceGraph,
    big_r: f64,
) -> Result<(f64, f64), WavePacketError> {
    let dim = density_template.dim();
    let on_axis_point = {
        let mut x: Vec<f64> = entry.omega.iter().map(|w| -w).collect();
        x.push(0.0);
        x
    };
    let mut points = vec![on_axis_point.clone()];
    // offsets perpendicular to the axis at x_n = 0 along the first axis
    for d in [2.0f64, 4.0, 8.0] {
        let mut x = on_axis_point.clone();
        x[0] += d * big_r.sqrt();
        points.push(x);
    }
    let vals = packet_field(coeffs, entry, density_template, surface, &points)?;
    let on_axis = vals[0].norm();
    let xs: Vec<f64> = [2.0f64, 4.0, 8.0].iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = vals[1..]
        .iter()
        .map(|v| v.norm().max(1e-300).ln())
        .collect();
    let fit = crate::stats::fit_line(&xs, &ys).expect("three probes");
    let _ = dim;
    Ok((on_axis, -fit.slope))
}

/// Spectrum of a `nu`-thickened density: horizontal lattice of a cap in
/// the parameter domain, tensor a vertical offset lattice `t` in
/// `[-t_half, t_half]`. The function it represents is
/// `g(x) = sum ghat(xi', t) e(<x', xi'> + x_n (Phi(xi') + t)) cell`.
#[derive(Debug, Clone)]
pub struct NuSpectrum {
    pub horizontal: SurfaceDensity,
    pub t_half: f64,
    pub m_t: usize,
    /// row-major: horizontal flat index times m_t plus t index
    pub values: Vec<Complex64>,
}

impl NuSpectrum {
    pub fn from_fn(
        horizontal_template: SurfaceDensity,
        t_half: f64,
        m_t: usize,
        mut f: impl FnMut(&[f64], f64) -> Complex64,
    ) -> Self {
        let mut values = Vec::with_capacity(horizontal_template.len() * m_t);
        for flat in 0..horizontal_template.len() {
            let xi = horizontal_template.point(flat);
            for it in 0..m_t {
                let t = -t_half + 2.0 * t_half * (it as f64 + 0.5) / m_t as f64;
                values.push(f(&xi, t));
            }
        }
        NuSpectrum {
            horizontal: horizontal_template,
            t_half,
            m_t,
            values,
        }
    }

    pub fn t_spacing(&self) -> f64 {
        2.0 * self.t_half / self.m_t as f64
    }

    pub fn cell(&self) -> f64 {
        self.horizontal.cell() * self.t_spacing()
    }

    /// `L^2` norm of the represented function (Plancherel over the
    /// spectrum lattice).
    pub fn l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell()).sqrt()
    }

    /// Direct evaluation of the represented function.
    pub fn eval(
        &self,
        surface: &SurfaceGraph,
        x_points: &[Vec<f64>],
    ) -> Result<Vec<Complex64>, WavePacketError> {
        let dim = self.horizontal.dim();
        let cell = self.cell();
        let mut nodes = Vec::new();
        for flat in 0..self.horizontal.len() {
            let xi = self.horizontal.point(flat);
            let height = surface.phi(&xi)?;
            for it in 0..self.m_t {
                let v = self.values[flat * self.m_t + it];
                if v == Complex64::ZERO {
                    continue;
                }
                let t = -self.t_half + 2.0 * self.t_half * (it as f64 + 0.5) / self.m_t as f64;
                nodes.push((xi.clone(), height + t, v));
            }
        }
        let mut out = Vec::with_capacity(x_points.len());
        for x in x_points {
            let mut acc = Complex64::ZERO;
            for (xi, h, v) in &nodes {
                let mut phase: f64 = xi.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                phase += x[dim] * h;
                acc += v * Complex64::new(0.0, TAU * phase).exp();
            }
            out.push(acc * cell);
        }
        Ok(out)
    }
}

/// Decompose a thickened spectrum into packets: horizontal caps tensor the
/// full vertical interval, with the vertical frequency lattice
/// `(2 t_half)^{-1} Z`. Exact Parseval as in the thin case.
pub fn wp_decompose_nu(
    spectrum: &NuSpectrum,
    big_r: f64,
) -> Result<PacketCoefficients, WavePacketError> {
    let dim = spectrum.horizontal.dim();
    let part = CapPartition::new(
        spectrum.horizontal.half_extent
            + spectrum
                .horizontal
                .center
                .iter()
                .map(|c| c.abs())
                .fold(0.0, f64::max),
        big_r,
        dim,
    );
    let (m_box, _) = commensurate(&spectrum.horizontal, &part)?;
    let w = 2.0 * part.support_radius;
    let w_t = 2.0 * spectrum.t_half;
    let vbox = w.powi(dim as i32) * w_t;
    let freq_spacing = 1.0 / w;
    let freq_spacing_t = 1.0 / w_t;
    let cell = spectrum.cell();

    let mut raw = Vec::new();
    let mut max_abs = 0.0f64;
    for cap in 0..part.len() {
        let c = &part.centers[cap];
        let mut samples: Vec<(Vec<f64>, f64, Complex64)> = Vec::new();
        for flat in 0..spectrum.horizontal.len() {
            let xi = spectrum.horizontal.point(flat);
            let z = part.zeta(cap, &xi);
            if z == 0.0 {
                continue;
            }
            for it in 0..spectrum.m_t {
                let v = spectrum.values[flat * spectrum.m_t + it];
                if v == Complex64::ZERO {
                    continue;
                }
                let t = -spectrum.t_half
                    + 2.0 * spectrum.t_half * (it as f64 + 0.5) / spectrum.m_t as f64;
                samples.push((xi.clone(), t, v * z));
            }
        }
        if samples.is_empty() {
            continue;
        }
        let half = (m_box / 2) as i64;
        let half_t = (spectrum.m_t / 2) as i64;
        let mut widx = vec![-half; dim];
        'omega: loop {
            let omega: Vec<f64> = widx.iter().map(|&k| k as f64 * freq_spacing).collect();
            for wt in -half_t..half_t.max(1) {
                let omega_t = wt as f64 * freq_spacing_t;
                let mut acc = Complex64::ZERO;
                for (xi, t, fv) in &samples {
                    let mut phase: f64 = omega
                        .iter()
                        .zip(xi.iter().zip(c.iter()))
                        .map(|(w, (x, cc))| w * (x - cc))
                        .sum();
                    phase += omega_t * t;
                    acc += fv * Complex64::new(0.0, -TAU * phase).exp();
                }
                let coeff = acc * cell / vbox.sqrt();
                max_abs = max_abs.max(coeff.norm());
                let mut om = omega.clone();
                om.push(omega_t);
                raw.push(PacketEntry {
                    cap,
                    omega: om,
                    coeff,
                });
            }
            for a in 0..dim {
                widx[a] += 1;
                if widx[a] < half {
                    continue 'omega;
                }
                widx[a] = -half;
            }
            break;
        }
    }
    let keep = 1e-12 * max_abs;
    let entries: Vec<PacketEntry> = raw.into_iter().filter(|e| e.coeff.norm() >= keep).collect();
    Ok(PacketCoefficients {
        entries,
        partition: part,
        box_volume: vbox,
        freq_spacing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_density(seed: u64, he: f64, m: usize, dim: usize) -> SurfaceDensity {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SurfaceDensity::from_fn(vec![0.0; dim], he, m, |_| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn partition_squared_sum_is_one() {
        let part = CapPartition::new(0.5, 64.0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let xi = [(rng.random::<f64>() - 0.5) * 0.9];
            let s: f64 = (0..part.len()).map(|c| part.zeta(c, &xi).powi(2)).sum();
            assert!(
                (s - 1.0).abs() < 1e-10,
                "squared sum {s} at {xi:?} should be 1"
            );
        }
    }

    #[test]
    fn partition_cap_count_scale() {
        for (r, big_r, dim) in [(1.0, 64.0, 1usize), (1.0, 64.0, 2), (0.5, 256.0, 2)] {
            let part = CapPartition::new(r, big_r, dim);
            let ideal = (r * big_r.sqrt()).powi(dim as i32);
            let count = part.len() as f64;
            assert!(
                count <= 2.0 * ideal && count >= ideal / 2.0,
                "cap count {count} not within 2x of {ideal}"
            );
        }
    }

    #[test]
    fn single_cap_partition_is_identity() {
        // domain far smaller than the cap spacing: one cap, zeta = 1
        let part = CapPartition::new(0.05, 16.0, 1);
        assert_eq!(part.len(), 1);
        for xi in [[-0.04], [0.0], [0.04]] {
            assert!((part.zeta(0, &xi) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_density_gives_no_coefficients() {
        let f = SurfaceDensity::from_fn(vec![0.0], 0.5, 32, |_| Complex64::ZERO);
        let coeffs = wp_decompose(&f, 64.0).unwrap();
        assert!(coeffs.entries.is_empty());
    }

    #[test]
    fn parseval_for_random_densities() {
        // R = 64, support radius 1/8 = 4 cells, spacing 3/16 = 6 cells
        for seed in 0..20u64 {
            let f = random_density(seed, 0.5, 32, 1);
            let coeffs = wp_decompose(&f, 64.0).unwrap();
            let mass = coeffs.mass();
            let l2 = f.l2();
            assert!(
                (mass - l2 * l2).abs() / (l2 * l2) < 1e-8,
                "Parseval violated at seed {seed}: {mass} vs {}",
                l2 * l2
            );
        }
        // two-dimensional parameter domain
        for seed in 100..105u64 {
            let f = random_density(seed, 0.25, 16, 2);
            let coeffs = wp_decompose(&f, 256.0).unwrap();
            let mass = coeffs.mass();
            let l2 = f.l2();
            assert!(
                (mass - l2 * l2).abs() / (l2 * l2) < 1e-8,
                "2-d Parseval violated at seed {seed}"
            );
        }
    }

    #[test]
    fn locality_of_coefficients() {
        // density supported well inside one cap: coefficients only there
        let part = CapPartition::new(0.5, 64.0, 1);
        let target_cap = part.len() / 2; // center cap at 0
        let c = part.centers[target_cap][0];
        let f = SurfaceDensity::from_fn(vec![0.0], 0.5, 32, |xi| {
            // support radius 1/32 around the cap center, away from overlaps
            if (xi[0] - c).abs() < 0.03 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let coeffs = wp_decompose(&f, 64.0).unwrap();
        assert!(!coeffs.entries.is_empty());
        for e in &coeffs.entries {
            let cc = coeffs.partition.centers[e.cap][0];
            assert!(
                (cc - c).abs() < 2.0 * coeffs.partition.spacing,
                "coefficient on a distant cap at {cc}"
            );
        }
    }

    #[test]
    fn reconstruction_matches_direct_extension() {
        let surface = SurfaceGraph::paraboloid(2, 0.9);
        let f = random_density(7, 0.5, 32, 1);
        let coeffs = wp_decompose(&f, 64.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let points: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                vec![
                    (rng.random::<f64>() - 0.5) * 32.0,
                    (rng.random::<f64>() - 0.5) * 128.0,
                ]
            })
            .collect();
        let direct = crate::surface::extension_eval(&f, &surface, &points).unwrap();
        let recon = wp_reconstruct(&coeffs, &f, &surface, &points).unwrap();
        let scale = direct.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        for (d, r) in direct.iter().zip(&recon) {
            assert!(
                (d - r).norm() <= 1e-6 * scale,
                "reconstruction differs: {d} vs {r}"
            );
        }
    }

    #[test]
    fn truncation_perturbs_little() {
        let surface = SurfaceGraph::paraboloid(2, 0.9);
        let f = random_density(8, 0.5, 32, 1);
        let coeffs = wp_decompose(&f, 64.0).unwrap();
        let max = coeffs
            .entries
            .iter()
            .map(|e| e.coeff.norm())
            .fold(0.0f64, f64::max);
        let mut coarse = coeffs.clone();
        coarse.entries.retain(|e| e.coeff.norm() >= 1e-6 * max);
        let points: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64 * 0.7 - 17.0, 11.0]).collect();
        let full = wp_reconstruct(&coeffs, &f, &surface, &points).unwrap();
        let trunc = wp_reconstruct(&coarse, &f, &surface, &points).unwrap();
        let scale = full.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        for (a, b) in full.iter().zip(&trunc) {
            assert!((a - b).norm() <= 1e-4 * scale);
        }
    }

    #[test]
    fn packet_concentrates_and_decays() {
        let surface = SurfaceGraph::paraboloid(2, 0.9);
        let big_r = 64.0;
        // fine lattice so probes up to 8 cross-radii stay far from the
        // sampling Nyquist; interior cap so the window is smooth
        let f = random_density(4, 0.5, 256, 1);
        let coeffs = wp_decompose(&f, big_r).unwrap();
        let entry = coeffs
            .entries
            .iter()
            .filter(|e| coeffs.partition.centers[e.cap][0].abs() <= 0.2)
            .max_by(|a, b| a.coeff.norm().partial_cmp(&b.coeff.norm()).unwrap())
            .unwrap()
            .clone();
        let (on_axis, m) = packet_decay_audit(&coeffs, &entry, &f, &surface, big_r).unwrap();
        assert!(
            m >= 4.0,
            "transverse decay order {m} below 4 (on-axis {on_axis})"
        );
        // on-axis amplitude should be near the packet's theoretical peak
        // |box|^{-1/2} * integral of zeta
        let part = &coeffs.partition;
        let c = part.centers[entry.cap].clone();
        let mut zmass = 0.0;
        for flat in 0..f.len() {
            let xi = f.point(flat);
            zmass += part.zeta(entry.cap, &xi) * f.cell();
        }
        let peak = zmass / coeffs.box_volume.sqrt();
        assert!(
            on_axis >= 0.2 * peak && on_axis <= 1.2 * peak,
            "on-axis {on_axis} vs theoretical peak {peak} (center {c:?})"
        );
        // far down the tube, the off-axis point is vastly smaller
        let grad = surface.grad_phi(&part.centers[entry.cap]).unwrap();
        let xn = big_r / 2.0;
        let axis_pt = vec![-entry.omega[0] - xn * grad[0], xn];
        let mut off_pt = axis_pt.clone();
        off_pt[0] += 10.0 * big_r.sqrt();
        let vals = packet_field(&coeffs, &entry, &f, &surface, &[axis_pt, off_pt]).unwrap();
        assert!(
            vals[0].norm() >= 1e3 * vals[1].norm(),
            "off-axis at 10 cross-radii should be 1e3 smaller: {} vs {}",
            vals[0].norm(),
            vals[1].norm()
        );
    }

    #[test]
    fn nu_spectrum_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let horizontal = SurfaceDensity::from_fn(vec![0.0], 0.5, 32, |_| Complex64::ZERO);
        let spec = NuSpectrum::from_fn(horizontal, 0.05, 8, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let coeffs = wp_decompose_nu(&spec, 64.0).unwrap();
        let mass = coeffs.mass();
        let l2 = spec.l2();
        assert!(
            (mass - l2 * l2).abs() / (l2 * l2) < 1e-8,
            "thickened Parseval violated: {mass} vs {}",
            l2 * l2
        );
    }
}
