//! Smooth compactly supported cutoff profiles and the window functions
//! built from them.

/// Profile family for compactly supported cutoffs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BumpKind {
    /// `exp(1 - 1/(1 - t^2))` on `|t| < 1`; infinitely differentiable.
    SmoothExponential,
    /// `cos^2(pi t / 2)` on `|t| < 1`; cheaper, only C^1 at the edge.
    CosineTaper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    pub kind: BumpKind,
    pub support_radius: f64,
}

impl BumpProfile {
    pub fn smooth(support_radius: f64) -> Self {
        BumpProfile {
            kind: BumpKind::SmoothExponential,
            support_radius,
        }
    }

    pub fn cosine(support_radius: f64) -> Self {
        BumpProfile {
            kind: BumpKind::CosineTaper,
            support_radius,
        }
    }

    /// Evaluate the profile at distance `t` from its center, in units where
    /// the support is `|t| < support_radius`.
    pub fn eval(&self, t: f64) -> f64 {
        let s = t / self.support_radius;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        match self.kind {
            BumpKind::SmoothExponential => (1.0 - 1.0 / (1.0 - s * s)).exp(),
            BumpKind::CosineTaper => {
                let c = (std::f64::consts::FRAC_PI_2 * s).cos();
                c * c
            }
        }
    }
}

/// `smooth_bump(profile, center, radius)` rescales the profile to be 1 at
/// `center` and supported in `(center - radius, center + radius)`.
pub fn smooth_bump(profile: BumpProfile, center: f64, radius: f64) -> impl Fn(f64) -> f64 {
    assert!(radius > 0.0, "bump radius must be positive");
    let base = BumpProfile {
        kind: profile.kind,
        support_radius: radius,
    };
    move |t: f64| base.eval(t - center)
}

/// Smooth transition window: 1 for `t <= lo`, 0 for `t >= hi`, C-infinity
/// in between. Built from the standard glue `g(s) = exp(-1/s)`.
pub fn smooth_step_down(t: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo < hi);
    if t <= lo {
        return 1.0;
    }
    if t >= hi {
        return 0.0;
    }
    let s = (t - lo) / (hi - lo);
    let a = glue(1.0 - s);
    let b = glue(s);
    a / (a + b)
}

fn glue(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Radial cutoff equal to 1 on `|t| <= lo` and 0 beyond `hi`.
pub fn radial_window(t: f64, lo: f64, hi: f64) -> f64 {
    smooth_step_down(t.abs(), lo, hi)
}

/// Dyadic shell window supported in `(mu/2, 2 mu)`: the difference of two
/// nested transition windows, so consecutive dyadic levels telescope exactly.
pub fn dyadic_shell(t: f64, mu: f64) -> f64 {
    low_cap(t, mu) - low_cap(t, mu / 2.0)
}

/// The matching low cap: 1 for `|t| <= mu`, 0 for `|t| >= 2 mu`.
pub fn low_cap(t: f64, mu: f64) -> f64 {
    smooth_step_down(t.abs(), mu, 2.0 * mu)
}
