//! ⟨cos θ⟩ as a function of free-evolution time.
//!
//! For amplitudes a_l the orientation signal is a finite Fourier series,
//! f(x) = 2 Σ_l Re(z_l e^{−2πi (l+1) x}) with z_l = conj(a_l) a_{l+1} c_l,
//! periodic with the rotational period. Everything downstream (maxima search,
//! duration windows, ensemble averages) reduces to evaluating and combining
//! these series.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::basis::CosineOperator;
use crate::propagation::RotorState;

/// Time tolerance for refined extrema locations.
pub(crate) const TIME_TOLERANCE: f64 = 1e-8;

/// Time tolerance for refined threshold crossings.
pub(crate) const CROSSING_TOLERANCE: f64 = 1e-6;

/// Spread below which a signal counts as constant (degenerate maxima).
pub(crate) const FLATNESS_TOLERANCE: f64 = 1e-13;

/// Finite Fourier series for an orientation expectation under free evolution.
/// `coefficients[f]` multiplies e^{−2πi (f+1) x}; frequencies are integer
/// numbers of cycles per rotational period.
#[derive(Debug, Clone)]
pub(crate) struct OrientationSignal {
    coefficients: Vec<Complex64>,
}

impl OrientationSignal {
    pub fn from_state(state: &RotorState) -> Self {
        let spec = state.spec();
        let cosine = CosineOperator::new(spec);
        let amps = state.amplitudes();
        let mut coefficients = vec![Complex64::ZERO; 0];
        for (k, &c) in cosine.off_diagonal().iter().enumerate() {
            // Pair (l, l+1) beats at l+1 cycles per period.
            let freq = spec.level(k) as usize + 1;
            if coefficients.len() < freq {
                coefficients.resize(freq, Complex64::ZERO);
            }
            coefficients[freq - 1] += amps[k].conj() * amps[k + 1] * c;
        }
        Self { coefficients }
    }

    pub fn empty() -> Self {
        Self {
            coefficients: Vec::new(),
        }
    }

    /// Add `weight` times another signal (ensemble averaging).
    pub fn accumulate(&mut self, other: &Self, weight: f64) {
        if self.coefficients.len() < other.coefficients.len() {
            self.coefficients
                .resize(other.coefficients.len(), Complex64::ZERO);
        }
        for (dst, src) in self.coefficients.iter_mut().zip(&other.coefficients) {
            *dst += weight * src;
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let step = Complex64::from_polar(1.0, -TAU * x.rem_euclid(1.0));
        let mut rotor = step;
        let mut acc = 0.0;
        for c in &self.coefficients {
            acc += (c * rotor).re;
            rotor *= step;
        }
        2.0 * acc
    }

    /// True when the signal cannot vary by more than [`FLATNESS_TOLERANCE`].
    pub fn is_flat(&self) -> bool {
        let budget: f64 = self.coefficients.iter().map(|c| c.norm()).sum();
        2.0 * budget < FLATNESS_TOLERANCE
    }
}

/// Golden-section maximum refinement on [a, b].
pub(crate) fn golden_max(
    f: &impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    xtol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Locate the global maximum of `f` on (0, horizon] by grid scan plus
/// golden-section refinement. Returns (x*, f(x*)).
pub(crate) fn global_max_on_grid(
    f: &impl Fn(f64) -> f64,
    horizon: f64,
    grid_points: usize,
) -> (f64, f64) {
    let h = horizon / grid_points as f64;
    let mut best = (horizon, f(horizon));
    for j in 1..grid_points {
        let x = j as f64 * h;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let lo = (best.0 - h).max(h * 1e-3);
    let hi = (best.0 + h).min(horizon);
    let refined = golden_max(f, lo, hi, TIME_TOLERANCE);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

/// Locate the first interior local maximum of `f` on (0, horizon]; falls back
/// to the global maximum when the grid sees no interior peak.
pub(crate) fn first_local_max_on_grid(
    f: &impl Fn(f64) -> f64,
    horizon: f64,
    grid_points: usize,
) -> (f64, f64) {
    let h = horizon / grid_points as f64;
    let mut prev = f(h);
    let mut prev_prev = f(h * 1e-3);
    for j in 2..=grid_points {
        let x = j as f64 * h;
        let v = f(x);
        if prev >= prev_prev && prev > v {
            let lo = (j as f64 - 2.0) * h;
            let hi = x;
            return golden_max(f, lo.max(h * 1e-3), hi, TIME_TOLERANCE);
        }
        prev_prev = prev;
        prev = v;
    }
    global_max_on_grid(f, horizon, grid_points)
}

/// Refine a downward threshold crossing: requires f(lo) ≥ level and
/// f(hi) < level; returns x with f(x) ≈ level to within `xtol` in x.
pub(crate) fn bisect_downward_crossing(
    f: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    level: f64,
    xtol: f64,
) -> f64 {
    debug_assert!(f(lo) >= level && f(hi) < level);
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Length of the contiguous super-level window of a 1-periodic signal around
/// the global maximum: grid scan (`grid_points` per period) for the maximum
/// and the flanking sub-level samples, then bisection refinement of the two
/// crossings. Returns 0 when the maximum never reaches `level`, 1 when the
/// signal never drops below it.
pub(crate) fn duration_above(
    f: &impl Fn(f64) -> f64,
    level: f64,
    grid_points: usize,
) -> f64 {
    let (x_max, peak) = global_max_on_grid(f, 1.0, grid_points);
    if peak < level {
        return 0.0;
    }
    let h = 1.0 / grid_points as f64;

    // Walk right from the maximum to the first sub-level sample.
    let mut right = None;
    for j in 1..grid_points {
        let x = x_max + j as f64 * h;
        if f(x) < level {
            right = Some(bisect_downward_crossing(
                f,
                x - h,
                x,
                level,
                CROSSING_TOLERANCE,
            ));
            break;
        }
    }
    // Walk left, mirroring time (the signal is periodic, so evaluate directly).
    let mut left = None;
    for j in 1..grid_points {
        let x = x_max - j as f64 * h;
        if f(x) < level {
            let g = |y: f64| f(2.0 * x_max - y); // reflect so the crossing is downward
            left = Some(2.0 * x_max - bisect_downward_crossing(
                &g,
                2.0 * x_max - (x + h),
                2.0 * x_max - x,
                level,
                CROSSING_TOLERANCE,
            ));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => (r - l).min(1.0),
        _ => 1.0,
    }
}
