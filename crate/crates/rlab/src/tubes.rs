//! Tube geometry, cube decompositions of the big ball, tube/cube incidence
//! counting, the tube-ball relation bookkeeping, and the plane-constrained
//! incidence bound check.
//!
//! Tubes are capsules: an axis segment with a cross radius; dilation by `A`
//! scales both the radius and the segment length about its center, which
//! keeps membership tests exact and deterministic.

use crate::error::WavePacketError;

/// A tube: direction (unit), a base point on the axis, cross radius,
/// length, and an accumulated dilation factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tube {
    pub direction: Vec<f64>,
    pub base: Vec<f64>,
    pub cross_radius: f64,
    pub length: f64,
    pub dilation: f64,
}

impl Tube {
    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// Same axis, dilated by an extra factor.
    pub fn dilated(&self, factor: f64) -> Tube {
        Tube {
            dilation: self.dilation * factor,
            ..self.clone()
        }
    }

    fn axis_center(&self) -> Vec<f64> {
        self.base
            .iter()
            .zip(&self.direction)
            .map(|(b, d)| b + d * self.length / 2.0)
            .collect()
    }

    /// Endpoints of the dilated axis segment.
    fn segment(&self) -> (Vec<f64>, Vec<f64>) {
        let c = self.axis_center();
        let half = self.dilation * self.length / 2.0;
        let p0: Vec<f64> = c
            .iter()
            .zip(&self.direction)
            .map(|(x, d)| x - d * half)
            .collect();
        let p1: Vec<f64> = c
            .iter()
            .zip(&self.direction)
            .map(|(x, d)| x + d * half)
            .collect();
        (p0, p1)
    }

    /// Exact membership in the dilated tube.
    pub fn contains(&self, x: &[f64]) -> bool {
        let (p0, p1) = self.segment();
        segment_point_distance(&p0, &p1, x) <= self.dilation * self.cross_radius
    }

    /// Exact intersection test against an axis-aligned cube.
    pub fn intersects_cube(&self, cube: &Cube) -> bool {
        let (p0, p1) = self.segment();
        segment_cube_distance(&p0, &p1, cube) <= self.dilation * self.cross_radius
    }

    /// The cap center a packet tube came from (paraboloid convention:
    /// direction proportional to `(-c, 1)`).
    pub fn cap_center(&self) -> Vec<f64> {
        let n = self.dim();
        let last = self.direction[n - 1];
        (0..n - 1).map(|i| -self.direction[i] / last).collect()
    }
}

/// An axis-aligned cube.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    pub center: Vec<f64>,
    pub side: f64,
}

impl Cube {
    /// Is this cube inside the ball of radius `r` around `center`?
    pub fn inside_ball(&self, center: &[f64], r: f64) -> bool {
        // farthest corner
        let corner2: f64 = self
            .center
            .iter()
            .zip(center)
            .map(|(c, b)| (c - b).abs() + self.side / 2.0)
            .map(|v| v * v)
            .sum();
        corner2.sqrt() <= r
    }
}

fn segment_point_distance(p0: &[f64], p1: &[f64], x: &[f64]) -> f64 {
    let d: Vec<f64> = p1.iter().zip(p0).map(|(a, b)| a - b).collect();
    let len2: f64 = d.iter().map(|v| v * v).sum();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (x.iter()
            .zip(p0)
            .zip(&d)
            .map(|((xx, pp), dd)| (xx - pp) * dd)
            .sum::<f64>()
            / len2)
            .clamp(0.0, 1.0)
    };
    x.iter()
        .zip(p0)
        .zip(&d)
        .map(|((xx, pp), dd)| {
            let diff = xx - (pp + t * dd);
            diff * diff
        })
        .sum::<f64>()
        .sqrt()
}

/// Exact distance from a segment to an axis-aligned cube: the squared
/// distance is piecewise quadratic in the axis parameter, so minimize on
/// each interval between per-axis breakpoints.
fn segment_cube_distance(p0: &[f64], p1: &[f64], cube: &Cube) -> f64 {
    let dim = p0.len();
    let half = cube.side / 2.0;
    let d: Vec<f64> = p1.iter().zip(p0).map(|(a, b)| a - b).collect();
    // breakpoints where p_i(t) crosses a slab boundary
    let mut ts = vec![0.0f64, 1.0];
    for i in 0..dim {
        if d[i].abs() > 1e-300 {
            for bound in [cube.center[i] - half, cube.center[i] + half] {
                let t = (bound - p0[i]) / d[i];
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dist2_at = |t: f64| -> f64 {
        (0..dim)
            .map(|i| {
                let x = p0[i] + t * d[i];
                let e = (x - cube.center[i]).abs() - half;
                if e > 0.0 {
                    e * e
                } else {
                    0.0
                }
            })
            .sum()
    };
    let mut best = f64::INFINITY;
    for w in ts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        // on (a, b) the active axes are fixed; the quadratic vertex is
        // found from the affine residuals of the active axes
        let mid = 0.5 * (a + b);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..dim {
            let x_mid = p0[i] + mid * d[i];
            let e = x_mid - cube.center[i];
            if e.abs() > half {
                let target = if e > 0.0 {
                    cube.center[i] + half
                } else {
                    cube.center[i] - half
                };
                // residual r_i(t) = p0_i + t d_i - target
                num += (p0[i] - target) * d[i];
                den += d[i] * d[i];
            }
        }
        let vertex = if den > 0.0 {
            (-num / den).clamp(a, b)
        } else {
            mid
        };
        for t in [a, b, vertex] {
            best = best.min(dist2_at(t));
        }
    }
    best.sqrt()
}

/// Inputs of an incidence experiment: the big scale, the fattening
/// exponent, and the two tube families. All tubes must meet `10 B_R`.
///
/// `relation_dilate` is the factor by which a tube's maximizing sub-ball
/// is inflated when deciding relatedness. The source bookkeeping uses 10,
/// which only separates scales once `R^delta > 10`; desk-scale runs use 2
/// so the unrelated class is nonempty and the bound is tested with teeth.
#[derive(Debug, Clone)]
pub struct IncidenceConfig {
    pub big_r: f64,
    pub delta: f64,
    pub relation_dilate: f64,
    pub tubes1: Vec<Tube>,
    pub tubes2: Vec<Tube>,
}

impl IncidenceConfig {
    pub fn dim(&self) -> usize {
        self.tubes1
            .first()
            .or(self.tubes2.first())
            .map(|t| t.dim())
            .unwrap_or(0)
    }

    /// Fattening factor `R^delta`.
    pub fn fattening(&self) -> f64 {
        self.big_r.powf(self.delta)
    }

    /// Cubes of side `R^{1/2}` covering the ball `B_R`.
    pub fn cubes(&self) -> Vec<Cube> {
        let dim = self.dim();
        let side = self.big_r.sqrt();
        let count = (self.big_r / side).ceil() as i64;
        let mut cubes = Vec::new();
        let mut idx = vec![-count; dim];
        'outer: loop {
            let center: Vec<f64> = idx.iter().map(|&k| (k as f64 + 0.5) * side).collect();
            let r2: f64 = center.iter().map(|v| v * v).sum();
            if r2.sqrt() <= self.big_r {
                cubes.push(Cube { center, side });
            }
            for a in 0..dim {
                idx[a] += 1;
                if idx[a] < count {
                    continue 'outer;
                }
                idx[a] = -count;
            }
            break;
        }
        cubes
    }

    /// Balls of radius `R' = R^{1 - delta}` covering `B_R`.
    pub fn sub_balls(&self) -> Vec<(Vec<f64>, f64)> {
        let dim = self.dim();
        let r_sub = self.big_r.powf(1.0 - self.delta);
        let count = (self.big_r / r_sub).ceil() as i64;
        let mut balls = Vec::new();
        let mut idx = vec![-count; dim];
        'outer: loop {
            let center: Vec<f64> = idx.iter().map(|&k| k as f64 * r_sub).collect();
            let r2: f64 = center.iter().map(|v| v * v).sum();
            if r2.sqrt() <= self.big_r + r_sub {
                balls.push((center, r_sub));
            }
            for a in 0..dim {
                idx[a] += 1;
                if idx[a] <= count {
                    continue 'outer;
                }
                idx[a] = -count;
            }
            break;
        }
        balls
    }
}

/// Everything counted for one dyadic multiplicity class.
#[derive(Debug, Clone)]
pub struct IncidenceStats {
    /// dyadic class floor: cubes with `mu2 <= |T2(q)| < 2 mu2`
    pub mu2: f64,
    /// indices (into `cubes`) of the class members
    pub class_cubes: Vec<usize>,
    /// all cubes of the decomposition
    pub cubes: Vec<Cube>,
    /// per cube: how many fattened second-family tubes meet it
    pub t2_counts: Vec<usize>,
    /// per first-family tube: cubes of the class its fattening meets
    pub lambda_total: Vec<usize>,
    /// per first-family tube and sub-ball: class cubes inside the ball met
    /// by the fattened tube
    pub lambda_by_ball: Vec<Vec<usize>>,
    /// sub-balls used for the relation
    pub balls: Vec<(Vec<f64>, f64)>,
    /// per first-family tube: the maximizing ball index, if any
    pub best_ball: Vec<Option<usize>>,
    /// relation pairs `(tube index, ball index)`
    pub relations: Vec<(usize, usize)>,
}

/// Exact combinatorial evaluation of the incidence bookkeeping at one
/// dyadic multiplicity `mu2`.
pub fn incidence_stats(config: &IncidenceConfig, mu2: f64) -> IncidenceStats {
    let fat = config.fattening();
    let cubes = config.cubes();
    let t2_counts: Vec<usize> = cubes
        .iter()
        .map(|q| {
            config
                .tubes2
                .iter()
                .filter(|t| t.dilated(fat).intersects_cube(q))
                .count()
        })
        .collect();
    let class_cubes: Vec<usize> = (0..cubes.len())
        .filter(|&i| {
            let c = t2_counts[i] as f64;
            c >= mu2 && c < 2.0 * mu2
        })
        .collect();
    let balls = config.sub_balls();
    let mut lambda_total = Vec::with_capacity(config.tubes1.len());
    let mut lambda_by_ball = Vec::with_capacity(config.tubes1.len());
    let mut best_ball = Vec::with_capacity(config.tubes1.len());
    let mut relations = Vec::new();
    for (ti, tube) in config.tubes1.iter().enumerate() {
        let fat_tube = tube.dilated(fat);
        let hit: Vec<usize> = class_cubes
            .iter()
            .cloned()
            .filter(|&qi| fat_tube.intersects_cube(&cubes[qi]))
            .collect();
        lambda_total.push(hit.len());
        let per_ball: Vec<usize> = balls
            .iter()
            .map(|(bc, br)| {
                hit.iter()
                    .filter(|&&qi| cubes[qi].inside_ball(bc, *br))
                    .count()
            })
            .collect();
        let best = per_ball
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .max_by_key(|(_, &l)| l)
            .map(|(i, _)| i);
        if let Some(bi) = best {
            // related balls: those inside the dilated best ball
            let (bc, br) = &balls[bi];
            for (oi, (oc, orr)) in balls.iter().enumerate() {
                let dist: f64 = bc
                    .iter()
                    .zip(oc)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if dist + orr <= config.relation_dilate * br {
                    relations.push((ti, oi));
                }
            }
        }
        best_ball.push(best);
        lambda_by_ball.push(per_ball);
    }
    IncidenceStats {
        mu2,
        class_cubes,
        cubes,
        t2_counts,
        lambda_total,
        lambda_by_ball,
        balls,
        best_ball,
        relations,
    }
}

/// The dyadic multiplicity classes that actually occur.
pub fn occupied_mu2_classes(config: &IncidenceConfig) -> Vec<f64> {
    let fat = config.fattening();
    let cubes = config.cubes();
    let mut classes = std::collections::BTreeSet::new();
    for q in &cubes {
        let c = config
            .tubes2
            .iter()
            .filter(|t| t.dilated(fat).intersects_cube(q))
            .count();
        if c > 0 {
            classes.insert((c as f64).log2().floor() as i64);
        }
    }
    classes.into_iter().map(|e| 2.0f64.powi(e as i32)).collect()
}

/// Union of the tube-ball relations over all occupied classes; each tube
/// should relate to at most `C log R` balls.
pub fn relation_counts(config: &IncidenceConfig) -> Vec<usize> {
    let mut counts = vec![std::collections::BTreeSet::new(); config.tubes1.len()];
    for mu2 in occupied_mu2_classes(config) {
        let stats = incidence_stats(config, mu2);
        for (ti, bi) in stats.relations {
            counts[ti].insert(bi);
        }
    }
    counts.into_iter().map(|s| s.len()).collect()
}

/// Result of the plane-constrained incidence check.
#[derive(Debug, Clone, PartialEq)]
pub struct KakeyaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub mu2: f64,
    pub lambda1: f64,
    pub class_size: usize,
}

/// The plane-constrained count against `C R^{C_delta delta} |T2| /
/// (mu2 lambda1)`: `lhs` is the sampled maximum over direction pairs
/// `(xi', xi'')` of the number of first-family tubes through the chosen
/// cube whose cap center lies within `R^{-1/2}` of the hyperplane with
/// normal `xi' - xi''` through `xi'`.
pub fn kakeya_bound_check(
    config: &IncidenceConfig,
    mu2: f64,
    lambda1: f64,
    plane_samples: usize,
    cap1_center: &[f64],
    cap2_center: &[f64],
    cap_radius: f64,
) -> Result<KakeyaCheck, WavePacketError> {
    let stats = incidence_stats(config, mu2);
    // tubes in the lambda1 class
    let class: Vec<usize> = (0..config.tubes1.len())
        .filter(|&i| {
            let l = stats.lambda_total[i] as f64;
            l >= lambda1 && l < 2.0 * lambda1
        })
        .collect();
    if class.is_empty() || stats.class_cubes.is_empty() {
        return Err(WavePacketError::EmptyClass);
    }
    // q0: the class cube met by the most class tubes
    let fat = config.fattening();
    let mut best_q = stats.class_cubes[0];
    let mut best_count = 0usize;
    for &qi in &stats.class_cubes {
        let c = class
            .iter()
            .filter(|&&ti| {
                config.tubes1[ti]
                    .dilated(fat)
                    .intersects_cube(&stats.cubes[qi])
            })
            .count();
        if c > best_count {
            best_count = c;
            best_q = qi;
        }
    }
    let q0 = &stats.cubes[best_q];
    // the ball B' containing q0; exclude tubes related to it
    let containing_ball = stats
        .balls
        .iter()
        .position(|(bc, br)| q0.inside_ball(bc, *br));
    let through_q0: Vec<usize> = class
        .iter()
        .cloned()
        .filter(|&ti| config.tubes1[ti].dilated(fat).intersects_cube(q0))
        .filter(|&ti| match containing_ball {
            Some(bi) => !stats.relations.contains(&(ti, bi)),
            None => true,
        })
        .collect();
    // sampled maximum over direction pairs
    let m = config.dim() - 1;
    let side = (plane_samples as f64).sqrt().round().max(1.0) as usize;
    let slab = config.big_r.powf(-0.5);
    let mut lhs = 0usize;
    for i in 0..side {
        for j in 0..side {
            let xi_p = lattice_point(cap1_center, cap_radius, i, side, m);
            let xi_pp = lattice_point(cap2_center, cap_radius, j, side, m);
            let mut theta: Vec<f64> = xi_p.iter().zip(&xi_pp).map(|(a, b)| a - b).collect();
            let norm: f64 = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            for t in &mut theta {
                *t /= norm;
            }
            let count = through_q0
                .iter()
                .filter(|&&ti| {
                    let c = config.tubes1[ti].cap_center();
                    let offset: f64 = c
                        .iter()
                        .zip(&xi_p)
                        .zip(&theta)
                        .map(|((cc, xp), th)| (cc - xp) * th)
                        .sum();
                    offset.abs() <= slab
                })
                .count();
            lhs = lhs.max(count);
        }
    }
    let rhs = crate::constants::KAKEYA_C
        * config
            .big_r
            .powf(crate::constants::KAKEYA_C_DELTA * config.delta)
        * config.tubes2.len() as f64
        / (mu2 * lambda1);
    Ok(KakeyaCheck {
        lhs: lhs as f64,
        rhs,
        mu2,
        lambda1,
        class_size: class.len(),
    })
}

fn lattice_point(center: &[f64], radius: f64, i: usize, side: usize, m: usize) -> Vec<f64> {
    // spread indices over the first axis and fold the rest to the center
    let mut p = center.to_vec();
    let frac = if side > 1 {
        i as f64 / (side - 1) as f64 * 2.0 - 1.0
    } else {
        0.0
    };
    p[0] += frac * radius;
    if m > 1 && side > 1 && p.len() > 1 {
        // interleave a second coordinate from the same index
        let alt = ((i * 7919) % side) as f64 / (side - 1) as f64 * 2.0 - 1.0;
        p[1] += alt * radius * 0.8;
    }
    p
}

/// Seeded random incidence configuration in the wave-packet geometry: caps
/// from two separated discs, packet tubes through random offsets, every
/// tube meeting `10 B_R`.
pub fn random_config(
    seed: u64,
    dim: usize,
    big_r: f64,
    delta: f64,
    count1: usize,
    count2: usize,
) -> IncidenceConfig {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = dim - 1;
    let make = |rng: &mut ChaCha8Rng, center_x: f64, length: f64, cross: f64| -> Tube {
        let mut cap = vec![0.0; m];
        cap[0] = center_x;
        for c in cap.iter_mut() {
            *c += (rng.random::<f64>() - 0.5) * 0.5;
        }
        let mut dir: Vec<f64> = cap.iter().map(|c| -c).collect();
        dir.push(1.0);
        let norm: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut dir {
            *v /= norm;
        }
        let mut base: Vec<f64> = (0..m)
            .map(|_| (rng.random::<f64>() - 0.5) * big_r)
            .collect();
        base.push(-length / 2.0);
        Tube {
            direction: dir,
            base,
            cross_radius: cross,
            length,
            dilation: 1.0,
        }
    };
    let tubes1 = (0..count1)
        .map(|_| make(&mut rng, 0.5, big_r, big_r.sqrt()))
        .collect();
    let tubes2 = (0..count2)
        .map(|_| make(&mut rng, -0.5, big_r.powf(0.75), big_r.sqrt()))
        .collect();
    IncidenceConfig {
        big_r,
        delta,
        relation_dilate: 2.0,
        tubes1,
        tubes2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tube_membership_and_dilation() {
        let t = Tube {
            direction: vec![0.0, 1.0],
            base: vec![0.0, 0.0],
            cross_radius: 1.0,
            length: 10.0,
            dilation: 1.0,
        };
        assert!(t.contains(&[0.5, 5.0]));
        assert!(!t.contains(&[1.5, 5.0]));
        assert!(t.dilated(2.0).contains(&[1.5, 5.0]));
        // lengthwise dilation extends past the ends
        assert!(!t.contains(&[0.0, 12.0]));
        assert!(t.dilated(2.0).contains(&[0.0, 12.0]));
    }

    #[test]
    fn segment_cube_distance_known_values() {
        let cube = Cube {
            center: vec![0.0, 0.0],
            side: 2.0,
        };
        // segment passing through the cube
        assert_eq!(segment_cube_distance(&[-5.0, 0.0], &[5.0, 0.0], &cube), 0.0);
        // parallel segment at height 3: distance 2
        let d = segment_cube_distance(&[-5.0, 3.0], &[5.0, 3.0], &cube);
        assert!((d - 2.0).abs() < 1e-12);
        // diagonal approach to a corner
        let d = segment_cube_distance(&[3.0, 3.0], &[5.0, 5.0], &cube);
        assert!((d - 8.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_tube_single_cube() {
        let t = Tube {
            direction: vec![0.0, 1.0],
            base: vec![0.25, -8.0],
            cross_radius: 0.5,
            length: 16.0,
            dilation: 1.0,
        };
        let config = IncidenceConfig {
            big_r: 16.0,
            delta: 0.0,
            relation_dilate: 2.0,
            tubes1: vec![],
            tubes2: vec![t],
        };
        let stats = incidence_stats(&config, 1.0);
        // exactly the cubes pierced by the vertical tube count one
        for (qi, q) in stats.cubes.iter().enumerate() {
            let expect = config.tubes2[0].intersects_cube(q);
            assert_eq!(stats.t2_counts[qi] == 1, expect);
        }
        assert!(!stats.class_cubes.is_empty());
    }

    #[test]
    fn cube_classes_partition_exactly() {
        let config = random_config(5, 2, 64.0, 0.05, 12, 20);
        let classes = occupied_mu2_classes(&config);
        let cubes = config.cubes();
        let mut assigned = vec![0usize; cubes.len()];
        for &mu2 in &classes {
            let stats = incidence_stats(&config, mu2);
            for &qi in &stats.class_cubes {
                assigned[qi] += 1;
            }
        }
        let fat = config.fattening();
        for (qi, q) in cubes.iter().enumerate() {
            let c = config
                .tubes2
                .iter()
                .filter(|t| t.dilated(fat).intersects_cube(q))
                .count();
            let expected = usize::from(c > 0);
            assert_eq!(
                assigned[qi], expected,
                "cube {qi} with count {c} in {} classes",
                assigned[qi]
            );
        }
    }

    #[test]
    fn parallel_bundle_lambda_counts_line_cubes() {
        // all first-family tubes parallel to the vertical axis through the
        // same line: lambda equals the number of class cubes along it
        let big_r = 64.0;
        let vertical = Tube {
            direction: vec![0.0, 1.0],
            base: vec![0.1, -big_r],
            cross_radius: 0.5,
            length: 2.0 * big_r,
            dilation: 1.0,
        };
        let config = IncidenceConfig {
            big_r,
            delta: 0.0,
            relation_dilate: 2.0,
            tubes1: vec![vertical.clone(), vertical.clone()],
            tubes2: vec![vertical.clone()],
        };
        let stats = incidence_stats(&config, 1.0);
        // cubes along the line: count by hand
        let by_hand = stats
            .cubes
            .iter()
            .filter(|q| vertical.intersects_cube(q))
            .count();
        assert_eq!(stats.lambda_total[0], by_hand);
        assert_eq!(stats.lambda_total[1], by_hand);
    }

    #[test]
    fn tubes_relate_to_few_balls() {
        let c = crate::constants::TUBE_BALL_RELATION_LOG_CONSTANT;
        for seed in 0..100u64 {
            let config = random_config(seed, 2, 64.0, 0.1, 6, 10);
            let counts = relation_counts(&config);
            let bound = c * config.big_r.ln();
            for (ti, &count) in counts.iter().enumerate() {
                assert!(
                    (count as f64) <= bound,
                    "tube {ti} relates to {count} balls > {bound} at seed {seed}"
                );
            }
        }
    }

    #[test]
    fn kakeya_bound_examples() {
        // transversal construction: zero violations, and the bound scales
        // linearly in |T2|
        let config = random_config(11, 2, 64.0, 0.1, 16, 24);
        let classes = occupied_mu2_classes(&config);
        let mu2 = classes[0];
        let stats = incidence_stats(&config, mu2);
        let lmax = stats.lambda_total.iter().cloned().max().unwrap_or(0);
        if lmax == 0 {
            panic!("degenerate test configuration");
        }
        let lambda1 = 2.0f64.powi((lmax as f64).log2().floor() as i32);
        let check = kakeya_bound_check(&config, mu2, lambda1, 25, &[0.5], &[-0.5], 0.25).unwrap();
        assert!(check.lhs <= check.rhs, "{} > {}", check.lhs, check.rhs);
        // doubling T2 doubles the bound, leaves the count alone
        let mut doubled = config.clone();
        doubled.tubes2.extend(config.tubes2.iter().map(|t| {
            let mut t = t.clone();
            for b in t.base.iter_mut() {
                *b += 1e-7; // distinct but geometrically identical
            }
            t
        }));
        let check2 = kakeya_bound_check(&doubled, 2.0 * mu2, lambda1, 25, &[0.5], &[-0.5], 0.25);
        if let Ok(c2) = check2 {
            assert!((c2.rhs - check.rhs).abs() / check.rhs < 0.6);
        }
        // empty class errors
        assert!(matches!(
            kakeya_bound_check(&config, 1e9, 1.0, 25, &[0.5], &[-0.5], 0.25),
            Err(WavePacketError::EmptyClass)
        ));
    }

    #[test]
    fn kakeya_random_sweep_no_violations() {
        for seed in 0..30u64 {
            let config = random_config(1000 + seed, 2, 64.0, 0.1, 12, 18);
            for mu2 in occupied_mu2_classes(&config) {
                let stats = incidence_stats(&config, mu2);
                let lmax = stats.lambda_total.iter().cloned().max().unwrap_or(0);
                if lmax == 0 {
                    continue;
                }
                let lambda1 = 2.0f64.powi((lmax as f64).log2().floor() as i32);
                if let Ok(check) =
                    kakeya_bound_check(&config, mu2, lambda1, 25, &[0.5], &[-0.5], 0.25)
                {
                    assert!(
                        check.lhs <= check.rhs,
                        "violation at seed {seed}, mu2 {mu2}: {} > {}",
                        check.lhs,
                        check.rhs
                    );
                }
            }
        }
    }
}
