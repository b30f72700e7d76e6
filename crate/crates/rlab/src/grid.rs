//! Periodic Fourier lattice, complex fields, unitary transforms, `L^p`
//! quadrature and pointwise frequency multipliers.
//!
//! The physical domain is the box `[-L_1, L_1) x ... x [-L_d, L_d)` sampled
//! at `N` points per axis; the dual lattice is `{ pi k / L_a }` for
//! `k in [-N/2, N/2)`. The transform pair is unitary, so Parseval holds
//! exactly and no constants need tracking.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::io::{Read, Write};

use crate::error::GridError;

/// Largest allowed `d * log2(N)`; `N^d` lattice points at 16 bytes each.
pub const MEMORY_CAP_LOG2_POINTS: u32 = 25;

/// A periodic lattice with paired physical/frequency coordinates.
///
/// Axes may carry different box radii (needed by anisotropic rescaling);
/// `make_grid` builds the common uniform case.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierGrid {
    points_per_axis: usize,
    box_radius: Vec<f64>,
}

/// Which side of the transform a field currently lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Frequency,
}

/// Transform direction for [`transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl FourierGrid {
    /// Uniform grid: dimension `d`, `N` points per axis (power of two, >= 8),
    /// physical box `[-L, L)^d`.
    pub fn new(d: usize, n: usize, l: f64) -> Result<Self, GridError> {
        Self::new_anisotropic(n, vec![l; d])
    }

    /// Grid with per-axis box radii.
    pub fn new_anisotropic(n: usize, box_radius: Vec<f64>) -> Result<Self, GridError> {
        let d = box_radius.len();
        if d == 0 {
            return Err(GridError::BadDimension(d));
        }
        if !n.is_power_of_two() || n < 8 {
            return Err(GridError::NotPowerOfTwo(n));
        }
        if d as u32 * n.trailing_zeros() > MEMORY_CAP_LOG2_POINTS {
            return Err(GridError::MemoryCap {
                dim: d,
                points_per_axis: n,
            });
        }
        if box_radius.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(GridError::BadBoxRadius);
        }
        Ok(FourierGrid {
            points_per_axis: n,
            box_radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.box_radius.len()
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Box radius of axis `a`.
    pub fn box_radius(&self, a: usize) -> f64 {
        self.box_radius[a]
    }

    /// Box radius for uniform grids; panics if axes differ.
    pub fn box_radius_uniform(&self) -> f64 {
        let l = self.box_radius[0];
        assert!(
            self.box_radius.iter().all(|&x| x == l),
            "grid is anisotropic"
        );
        l
    }

    pub fn is_uniform(&self) -> bool {
        self.box_radius.iter().all(|&x| x == self.box_radius[0])
    }

    /// Total number of lattice points `N^d`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency-lattice spacing `pi / L_a` on axis `a`.
    pub fn freq_spacing(&self, a: usize) -> f64 {
        std::f64::consts::PI / self.box_radius[a]
    }

    /// Physical-lattice spacing `2 L_a / N` on axis `a`.
    pub fn phys_spacing(&self, a: usize) -> f64 {
        2.0 * self.box_radius[a] / self.points_per_axis as f64
    }

    /// Volume of one physical cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.phys_spacing(a)).product()
    }

    /// Decompose a flat row-major index into per-axis indices.
    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        let n = self.points_per_axis;
        for a in (0..self.dim()).rev() {
            out[a] = flat % n;
            flat /= n;
        }
    }

    /// Flatten per-axis indices (row-major).
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let n = self.points_per_axis;
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    /// Physical coordinate of axis-index `i` on axis `a`: `2 L i / N - L`.
    pub fn phys_coord_axis(&self, a: usize, i: usize) -> f64 {
        2.0 * self.box_radius[a] * i as f64 / self.points_per_axis as f64 - self.box_radius[a]
    }

    /// Frequency coordinate of axis-index `i` on axis `a`: `pi (i - N/2) / L`.
    pub fn freq_coord_axis(&self, a: usize, i: usize) -> f64 {
        (i as f64 - (self.points_per_axis / 2) as f64) * self.freq_spacing(a)
    }

    /// Physical point for a flat index.
    pub fn phys_point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.dim()];
        self.multi_index(flat, &mut idx);
        (0..self.dim())
            .map(|a| self.phys_coord_axis(a, idx[a]))
            .collect()
    }

    /// Frequency point for a flat index.
    pub fn freq_point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.dim()];
        self.multi_index(flat, &mut idx);
        (0..self.dim())
            .map(|a| self.freq_coord_axis(a, idx[a]))
            .collect()
    }

    /// Iterate all flat indices together with a reusable multi-index buffer.
    pub fn for_each_index(&self, mut f: impl FnMut(usize, &[usize])) {
        let mut idx = vec![0usize; self.dim()];
        for flat in 0..self.len() {
            self.multi_index(flat, &mut idx);
            f(flat, &idx);
        }
    }
}

/// Complex samples on a grid, tagged with their current representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: FourierGrid,
    values: Vec<Complex64>,
    repr: Representation,
}

impl Field {
    pub fn zeros(grid: &FourierGrid, repr: Representation) -> Self {
        Field {
            grid: grid.clone(),
            values: vec![Complex64::ZERO; grid.len()],
            repr,
        }
    }

    pub fn from_values(
        grid: &FourierGrid,
        values: Vec<Complex64>,
        repr: Representation,
    ) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Field {
            grid: grid.clone(),
            values,
            repr,
        })
    }

    /// Sample a physical-space function on the lattice.
    pub fn from_fn_physical(grid: &FourierGrid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        let mut x = vec![0.0f64; grid.dim()];
        let mut idx = vec![0usize; grid.dim()];
        for flat in 0..grid.len() {
            grid.multi_index(flat, &mut idx);
            for a in 0..grid.dim() {
                x[a] = grid.phys_coord_axis(a, idx[a]);
            }
            values.push(f(&x));
        }
        Field {
            grid: grid.clone(),
            values,
            repr: Representation::Physical,
        }
    }

    /// Prescribe frequency coefficients directly.
    pub fn from_fn_frequency(grid: &FourierGrid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        let mut xi = vec![0.0f64; grid.dim()];
        let mut idx = vec![0usize; grid.dim()];
        for flat in 0..grid.len() {
            grid.multi_index(flat, &mut idx);
            for a in 0..grid.dim() {
                xi[a] = grid.freq_coord_axis(a, idx[a]);
            }
            values.push(f(&xi));
        }
        Field {
            grid: grid.clone(),
            values,
            repr: Representation::Frequency,
        }
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `l^2` mass of the raw sample vector (no quadrature weight).
    pub fn raw_l2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Return the field in physical representation, transforming if needed.
    pub fn to_physical(&self) -> Field {
        match self.repr {
            Representation::Physical => self.clone(),
            Representation::Frequency => transform(self, Direction::Inverse).expect("repr checked"),
        }
    }

    /// Return the field in frequency representation, transforming if needed.
    pub fn to_frequency(&self) -> Field {
        match self.repr {
            Representation::Frequency => self.clone(),
            Representation::Physical => transform(self, Direction::Forward).expect("repr checked"),
        }
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn add_assign(&mut self, other: &Field) -> Result<(), GridError> {
        self.check_compatible(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        Ok(())
    }

    pub fn sub_assign(&mut self, other: &Field) -> Result<(), GridError> {
        self.check_compatible(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a -= b;
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Field) -> Result<(), GridError> {
        if self.grid != other.grid || self.repr != other.repr {
            return Err(GridError::IncompatibleFields);
        }
        Ok(())
    }
}

/// Make a grid after validating the preconditions.
pub fn make_grid(d: usize, n: usize, l: f64) -> Result<FourierGrid, GridError> {
    FourierGrid::new(d, n, l)
}

/// Unitary transform between representations.
///
/// Forward maps physical samples to coefficients of `e^{i<x,xi_k>}` on the
/// symmetric lattice; inverse is the exact adjoint. A round trip is the
/// identity to machine precision.
pub fn transform(field: &Field, direction: Direction) -> Result<Field, GridError> {
    let expected = match direction {
        Direction::Forward => Representation::Physical,
        Direction::Inverse => Representation::Frequency,
    };
    if field.repr != expected {
        return Err(GridError::RepresentationMismatch {
            have: field.repr,
            want: expected,
        });
    }
    let grid = &field.grid;
    let n = grid.points_per_axis;
    let d = grid.dim();
    let mut values = field.values.clone();

    let mut planner = FftPlanner::<f64>::new();
    let fft = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    let mut line = vec![Complex64::ZERO; n];
    let half = n / 2;

    // Phase factors translating the DFT to the symmetric lattice pairing
    // e^{-i <x_j, xi_k>} = (-1)^k e^{-2 pi i jk / N} with k = pos - N/2.
    for axis in 0..d {
        let stride: usize = n.pow((d - 1 - axis) as u32);
        let blocks = grid.len() / (n * stride);
        for b in 0..blocks {
            for s in 0..stride {
                let base = b * n * stride + s;
                match direction {
                    Direction::Forward => {
                        for (j, slot) in line.iter_mut().enumerate() {
                            *slot = values[base + j * stride];
                        }
                        fft.process(&mut line);
                        // FFT bin m -> lattice position (m + N/2) mod N, sign (-1)^k.
                        for pos in 0..n {
                            let m = (pos + half) % n;
                            let k = pos as isize - half as isize;
                            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                            values[base + pos * stride] = line[m] * sign;
                        }
                    }
                    Direction::Inverse => {
                        for pos in 0..n {
                            let m = (pos + half) % n;
                            let k = pos as isize - half as isize;
                            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                            line[m] = values[base + pos * stride] * sign;
                        }
                        fft.process(&mut line);
                        for (j, slot) in line.iter_mut().enumerate() {
                            values[base + j * stride] = *slot;
                        }
                    }
                }
            }
        }
        let scale = 1.0 / (n as f64).sqrt();
        for v in &mut values {
            *v *= scale;
        }
    }

    Ok(Field {
        grid: grid.clone(),
        values,
        repr: match direction {
            Direction::Forward => Representation::Frequency,
            Direction::Inverse => Representation::Physical,
        },
    })
}

/// Optional region restriction for `lp_norm`: a physical ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn origin(d: usize, radius: f64) -> Self {
        Ball {
            center: vec![0.0; d],
            radius,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let r2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        r2 <= self.radius * self.radius
    }
}

/// Riemann-sum `L^p` norm of a physical field, optionally over a ball.
///
/// `p = f64::INFINITY` returns the max sample modulus over the region.
pub fn lp_norm(field: &Field, p: f64, region: Option<&Ball>) -> Result<f64, GridError> {
    if field.repr != Representation::Physical {
        return Err(GridError::RepresentationMismatch {
            have: field.repr,
            want: Representation::Physical,
        });
    }
    if !(p >= 1.0) {
        return Err(GridError::BadExponent(p));
    }
    let grid = &field.grid;
    let cell = grid.cell_volume();
    let mut x = vec![0.0f64; grid.dim()];
    let mut idx = vec![0usize; grid.dim()];
    if p.is_infinite() {
        let mut m = 0.0f64;
        for flat in 0..grid.len() {
            if let Some(ball) = region {
                grid.multi_index(flat, &mut idx);
                for a in 0..grid.dim() {
                    x[a] = grid.phys_coord_axis(a, idx[a]);
                }
                if !ball.contains(&x) {
                    continue;
                }
            }
            m = m.max(field.values[flat].norm());
        }
        return Ok(m);
    }
    let mut acc = 0.0f64;
    for flat in 0..grid.len() {
        if let Some(ball) = region {
            grid.multi_index(flat, &mut idx);
            for a in 0..grid.dim() {
                x[a] = grid.phys_coord_axis(a, idx[a]);
            }
            if !ball.contains(&x) {
                continue;
            }
        }
        acc += field.values[flat].norm().powf(p);
    }
    Ok((acc * cell).powf(1.0 / p))
}

/// Apply a pointwise frequency multiplier `m(xi)`.
///
/// The field is converted to frequency representation internally and the
/// result is returned in frequency representation.
pub fn apply_multiplier(
    field: &Field,
    mut m: impl FnMut(&[f64]) -> Complex64,
) -> Result<Field, GridError> {
    let mut out = field.to_frequency();
    let grid = out.grid.clone();
    let mut xi = vec![0.0f64; grid.dim()];
    let mut idx = vec![0usize; grid.dim()];
    for flat in 0..grid.len() {
        grid.multi_index(flat, &mut idx);
        for a in 0..grid.dim() {
            xi[a] = grid.freq_coord_axis(a, idx[a]);
        }
        let mv = m(&xi);
        if !mv.re.is_finite() || !mv.im.is_finite() {
            return Err(GridError::NonFiniteMultiplier);
        }
        out.values[flat] *= mv;
    }
    Ok(out)
}

/// Warn-level validator: fraction of spectral mass in the outer quarter of
/// the frequency lattice. Test functions should keep this negligible so the
/// periodic torus is a faithful proxy for free space.
pub fn aliasing_fraction(field: &Field) -> f64 {
    let hat = field.to_frequency();
    let grid = &hat.grid;
    let n = grid.points_per_axis as isize;
    let mut idx = vec![0usize; grid.dim()];
    let mut outer = 0.0;
    let mut total = 0.0;
    for flat in 0..grid.len() {
        grid.multi_index(flat, &mut idx);
        let mass = hat.values[flat].norm_sqr();
        total += mass;
        let is_outer = idx.iter().any(|&i| {
            let k = i as isize - n / 2;
            // outer quarter per axis: |k| >= 3N/8
            8 * k.abs() >= 3 * n
        });
        if is_outer {
            outer += mass;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

const MAGIC: &[u8; 5] = b"RLAB1";

/// Serialize a field on a uniform grid: magic `RLAB1`, then `d`, `N` as
/// little-endian u64, `L` as little-endian f64, then interleaved re/im f64
/// in row-major lattice order. The physical representation is written.
pub fn write_field<W: Write>(field: &Field, w: &mut W) -> Result<(), GridError> {
    if !field.grid.is_uniform() {
        return Err(GridError::AnisotropicSerialization);
    }
    let phys = field.to_physical();
    w.write_all(MAGIC)?;
    w.write_all(&(phys.grid.dim() as u64).to_le_bytes())?;
    w.write_all(&(phys.grid.points_per_axis as u64).to_le_bytes())?;
    w.write_all(&phys.grid.box_radius[0].to_le_bytes())?;
    for v in &phys.values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

/// Read a field written by [`write_field`].
pub fn read_field<R: Read>(r: &mut R) -> Result<Field, GridError> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(GridError::BadMagic);
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let d = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let l = f64::from_le_bytes(b8);
    let grid = FourierGrid::new(d, n, l)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        values.push(Complex64::new(re, im));
    }
    Field::from_values(&grid, values, Representation::Physical)
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &FourierGrid, seed: u64, repr: Representation) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        Field::from_values(grid, values, repr).unwrap()
    }

    #[test]
    fn grid_lattices_match_the_stated_form() {
        // d=1, N=8, L=pi: frequency lattice {-4,...,3} with spacing 1
        let g = make_grid(1, 8, std::f64::consts::PI).unwrap();
        let freqs: Vec<f64> = (0..8).map(|i| g.freq_coord_axis(0, i)).collect();
        for (i, f) in freqs.iter().enumerate() {
            assert!((f - (i as f64 - 4.0)).abs() < 1e-12, "freq {i} = {f}");
        }
        // physical lattice 2Lj/N - L
        let xs: Vec<f64> = (0..8).map(|i| g.phys_coord_axis(0, i)).collect();
        assert!((xs[0] + std::f64::consts::PI).abs() < 1e-12);
        assert!((xs[4]).abs() < 1e-12);
    }

    #[test]
    fn grid_point_count() {
        let g = make_grid(3, 64, std::f64::consts::PI).unwrap();
        assert_eq!(g.len(), 262144);
    }

    #[test]
    fn grid_rejects_non_power_of_two() {
        assert!(matches!(
            make_grid(2, 7, 1.0),
            Err(GridError::NotPowerOfTwo(7))
        ));
        assert!(matches!(
            make_grid(2, 4, 1.0),
            Err(GridError::NotPowerOfTwo(4))
        ));
    }

    #[test]
    fn grid_rejects_memory_blowups() {
        assert!(matches!(
            make_grid(4, 1024, 1.0),
            Err(GridError::MemoryCap { .. })
        ));
    }

    #[test]
    fn constant_field_transforms_to_zero_mode() {
        let g = make_grid(2, 16, 2.0).unwrap();
        let f = Field::from_fn_physical(&g, |_| Complex64::new(1.0, 0.0));
        let hat = f.to_frequency();
        let mut idx = vec![0usize; 2];
        for flat in 0..g.len() {
            g.multi_index(flat, &mut idx);
            let is_zero_mode = idx.iter().all(|&i| i == 8);
            let v = hat.values()[flat].norm();
            if is_zero_mode {
                assert!((v - 16.0).abs() < 1e-10, "zero mode should carry N^{{d/2}}");
            } else {
                assert!(v < 1e-10, "leakage at {idx:?}: {v}");
            }
        }
    }

    #[test]
    fn pure_mode_transforms_to_single_coefficient() {
        let g = make_grid(2, 16, std::f64::consts::PI).unwrap();
        // lattice mode xi0 = (2, -3)
        let xi0 = [2.0, -3.0];
        let f = Field::from_fn_physical(&g, |x| {
            Complex64::new(0.0, x[0] * xi0[0] + x[1] * xi0[1]).exp()
        });
        let hat = f.to_frequency();
        let mut idx = vec![0usize; 2];
        let mut hits = 0;
        for flat in 0..g.len() {
            g.multi_index(flat, &mut idx);
            let xi = [g.freq_coord_axis(0, idx[0]), g.freq_coord_axis(1, idx[1])];
            let v = hat.values()[flat].norm();
            if (xi[0] - xi0[0]).abs() < 1e-9 && (xi[1] - xi0[1]).abs() < 1e-9 {
                assert!((v - 16.0).abs() < 1e-9);
                hits += 1;
            } else {
                assert!(v < 1e-9, "leakage at {xi:?}: {v}");
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn round_trip_is_identity() {
        for (d, n) in [(1usize, 64usize), (2, 32), (3, 16)] {
            let g = make_grid(d, n, 1.5).unwrap();
            for seed in 0..100 {
                let f = random_field(&g, seed, Representation::Physical);
                let back = f.to_frequency().to_physical();
                let num: f64 = f
                    .values()
                    .iter()
                    .zip(back.values())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                let den = f.raw_l2();
                assert!(num / den < 1e-12, "round trip error {}", num / den);
            }
        }
    }

    #[test]
    fn parseval_between_representations() {
        let g = make_grid(2, 32, 0.7).unwrap();
        for seed in 10..15 {
            let f = random_field(&g, seed, Representation::Physical);
            let hat = f.to_frequency();
            let a = f.raw_l2();
            let b = hat.raw_l2();
            assert!((a - b).abs() / a < 1e-12);
        }
    }

    #[test]
    fn transform_rejects_wrong_representation() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let f = Field::zeros(&g, Representation::Frequency);
        assert!(matches!(
            transform(&f, Direction::Forward),
            Err(GridError::RepresentationMismatch { .. })
        ));
    }

    #[test]
    fn lp_norm_of_constant() {
        // constant 1 on [-L, L)^d at p = 2 gives (2L)^{d/2}
        let l = 1.3;
        let g = make_grid(2, 16, l).unwrap();
        let f = Field::from_fn_physical(&g, |_| Complex64::new(1.0, 0.0));
        let n2 = lp_norm(&f, 2.0, None).unwrap();
        assert!((n2 - 2.0 * l).abs() < 1e-12); // (2L)^{2/2}
        let n_inf = lp_norm(&f, f64::INFINITY, None).unwrap();
        assert!((n_inf - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lp_norm_gaussian_matches_integral() {
        // L^1 norm of a Gaussian on a fine grid vs the closed form (2 pi s^2)^{d/2}
        let g = make_grid(1, 512, 12.0).unwrap();
        let s: f64 = 0.8;
        let f = Field::from_fn_physical(&g, |x| {
            Complex64::new((-x[0] * x[0] / (2.0 * s * s)).exp(), 0.0)
        });
        let n1 = lp_norm(&f, 1.0, None).unwrap();
        let exact = (2.0 * std::f64::consts::PI).sqrt() * s;
        assert!(
            (n1 - exact).abs() / exact < 0.01,
            "got {n1}, expected {exact}"
        );
    }

    #[test]
    fn lp_norm_region_restriction() {
        let g = make_grid(2, 32, 2.0).unwrap();
        let f = Field::from_fn_physical(&g, |_| Complex64::new(1.0, 0.0));
        let small = lp_norm(&f, 2.0, Some(&Ball::origin(2, 0.5))).unwrap();
        let big = lp_norm(&f, 2.0, Some(&Ball::origin(2, 1.5))).unwrap();
        let all = lp_norm(&f, 2.0, None).unwrap();
        assert!(small < big && big < all);
    }

    #[test]
    fn multiplier_identity_and_composition() {
        let g = make_grid(2, 16, 1.0).unwrap();
        let f = random_field(&g, 3, Representation::Physical);
        let id = apply_multiplier(&f, |_| Complex64::new(1.0, 0.0)).unwrap();
        let back = id.to_physical();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        // composed multipliers equal the product multiplier
        let m1 = |xi: &[f64]| Complex64::new(1.0 / (1.0 + xi[0] * xi[0]), 0.0);
        let m2 = |xi: &[f64]| Complex64::new(0.5, xi[1] * 0.1);
        let one_then_two = apply_multiplier(&apply_multiplier(&f, m1).unwrap(), m2).unwrap();
        let product = apply_multiplier(&f, |xi| m1(xi) * m2(xi)).unwrap();
        for (a, b) in one_then_two.values().iter().zip(product.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn sharp_frequency_cutoff_is_a_projection() {
        // m = indicator of {|xi| <= A} applied twice equals applied once
        let g = make_grid(2, 32, std::f64::consts::PI).unwrap();
        let f = random_field(&g, 9, Representation::Physical);
        let a = 5.0;
        let proj = |xi: &[f64]| {
            let r: f64 = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            Complex64::new(if r <= a { 1.0 } else { 0.0 }, 0.0)
        };
        let once = apply_multiplier(&f, proj).unwrap();
        let twice = apply_multiplier(&once, proj).unwrap();
        for (x, y) in once.values().iter().zip(twice.values()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn multiplier_rejects_non_finite() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let f = random_field(&g, 0, Representation::Physical);
        let r = apply_multiplier(&f, |xi| Complex64::new(1.0 / xi[0], 0.0));
        assert!(matches!(r, Err(GridError::NonFiniteMultiplier)));
    }

    #[test]
    fn field_serialization_round_trip() {
        let g = make_grid(2, 16, 0.9).unwrap();
        let f = random_field(&g, 44, Representation::Physical);
        let mut buf = Vec::new();
        write_field(&f, &mut buf).unwrap();
        assert_eq!(&buf[..5], b"RLAB1");
        let back = read_field(&mut buf.as_slice()).unwrap();
        assert_eq!(back.grid(), f.grid());
        for (a, b) in f.values().iter().zip(back.values()) {
            assert_eq!(a, b, "serialization must be bit exact");
        }
    }

    #[test]
    fn holder_sanity() {
        let g = make_grid(2, 16, 1.0).unwrap();
        for seed in 0..20 {
            let u = random_field(&g, seed, Representation::Physical);
            let v = random_field(&g, seed + 100, Representation::Physical);
            let mut uv = u.clone();
            for (a, b) in uv.values_mut().iter_mut().zip(v.values()) {
                *a *= b;
            }
            let lhs = lp_norm(&uv, 1.0, None).unwrap();
            let rhs = lp_norm(&u, 2.0, None).unwrap() * lp_norm(&v, 2.0, None).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}
