//! State propagation: free rotation, sudden kicks, and finite-duration pulses.
//!
//! Time is measured in units of the rotational period `T_rot = π/B`, so free
//! evolution multiplies level `l` by `exp(−iπ l(l+1) Δx)` and is exactly
//! periodic with period 1 (every `l(l+1)` is even). A sudden pulse of area `A`
//! acts as `exp(i A cos θ)`, built once per area by diagonalizing the
//! tridiagonal cosine operator.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use thiserror::Error;

use crate::basis::{BasisError, BasisSpec, CosineOperator, L2Diagonal};
use crate::linalg::LinalgError;

/// Allowed deviation of Σ|a|² from 1 for anything claiming to be a state.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Minimum step count accepted by [`propagate_pulse_shape`].
pub const MIN_PULSE_STEPS: usize = 100;

#[derive(Debug, Error)]
pub enum PropagationError {
    #[error("state norm² = {norm_sq} deviates from 1 by more than {NORM_TOLERANCE}")]
    NotNormalized { norm_sq: f64 },
    #[error("basis mismatch: state on m={state_m}, l_max={state_l_max} vs operator on m={op_m}, l_max={op_l_max}")]
    SpecMismatch {
        state_m: i32,
        state_l_max: u32,
        op_m: i32,
        op_l_max: u32,
    },
    #[error("magnetic quantum numbers differ: {left} vs {right}")]
    MMismatch { left: i32, right: i32 },
    #[error("comparison state must not be shorter than the target ({state} < {target})")]
    TargetTooLong { state: usize, target: usize },
    #[error("initial level l0 = {l0} lies outside [{l_min}, {l_max}]")]
    LevelOutsideBasis { l0: u32, l_min: u32, l_max: u32 },
    #[error("truncation to {requested} levels exceeds the state dimension {dimension}")]
    TruncationTooLarge { requested: usize, dimension: usize },
    #[error("projected norm² = {remaining:.3e} is below 1e-12; state is orthogonal to the subspace")]
    ProjectionVanishes { remaining: f64 },
    #[error("pulse integration needs at least {MIN_PULSE_STEPS} steps, got {steps}")]
    TooFewSteps { steps: usize },
    #[error("norm drifted by {drift:.3e} during pulse integration; increase the step count")]
    NormDrift { drift: f64 },
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Eigen(#[from] LinalgError),
}

/// Wavefunction over a [`BasisSpec`] window plus a clock in `T_rot` units.
///
/// Values are immutable; every operation returns a new state. The clock never
/// decreases along a trajectory.
#[derive(Debug, Clone)]
pub struct RotorState {
    spec: BasisSpec,
    amplitudes: Array1<Complex64>,
    clock: f64,
}

impl RotorState {
    pub fn new(
        spec: BasisSpec,
        amplitudes: Array1<Complex64>,
        clock: f64,
    ) -> Result<Self, PropagationError> {
        if amplitudes.len() != spec.dimension() {
            return Err(BasisError::DimensionMismatch {
                got: amplitudes.len(),
                expected: spec.dimension(),
            }
            .into());
        }
        let state = Self {
            spec,
            amplitudes,
            clock,
        };
        state.check_norm()?;
        Ok(state)
    }

    /// Pure basis state `|l0, m⟩` at clock 0.
    pub fn basis_state(spec: BasisSpec, l0: u32) -> Result<Self, PropagationError> {
        let index = spec
            .index_of(l0)
            .ok_or(PropagationError::LevelOutsideBasis {
                l0,
                l_min: spec.l_min(),
                l_max: spec.l_max(),
            })?;
        let mut amplitudes = Array1::zeros(spec.dimension());
        amplitudes[index] = Complex64::ONE;
        Ok(Self {
            spec,
            amplitudes,
            clock: 0.0,
        })
    }

    /// Lowest level of the window, `|{|m|}, m⟩`.
    pub fn ground(spec: BasisSpec) -> Self {
        Self::basis_state(spec, spec.l_min()).expect("l_min always inside the window")
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_norm(&self) -> Result<(), PropagationError> {
        let norm_sq = self.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(PropagationError::NotNormalized { norm_sq });
        }
        Ok(())
    }

    /// Free rotation for `dx ≥ 0` rotational periods.
    ///
    /// The phase `π l(l+1) dx` is reduced modulo 2π before evaluation, so
    /// `dx = 1` reproduces the input amplitudes exactly.
    pub fn free_evolve(&self, dx: f64) -> Self {
        assert!(dx >= 0.0, "free evolution runs forward in time");
        let mut amplitudes = self.amplitudes.clone();
        for (k, a) in amplitudes.iter_mut().enumerate() {
            let l = f64::from(self.spec.level(k));
            // l(l+1) is an even integer; work in half-turns and reduce.
            let turns = (l * (l + 1.0) * dx).rem_euclid(2.0);
            *a *= Complex64::from_polar(1.0, -PI * turns);
        }
        Self {
            spec: self.spec,
            amplitudes,
            clock: self.clock + dx,
        }
    }

    /// ⟨cos θ⟩ over the state's own window.
    pub fn expectation_cos(&self) -> f64 {
        CosineOperator::new(self.spec)
            .expectation(self.amplitudes.as_slice().expect("contiguous"))
            .expect("dimensions agree by construction")
    }

    /// |⟨target|state⟩|² with the shorter target zero-padded.
    pub fn overlap_probability(&self, target: &RotorState) -> Result<f64, PropagationError> {
        if self.spec.m() != target.spec.m() {
            return Err(PropagationError::MMismatch {
                left: self.spec.m(),
                right: target.spec.m(),
            });
        }
        if target.dimension() > self.dimension() {
            return Err(PropagationError::TargetTooLong {
                state: self.dimension(),
                target: target.dimension(),
            });
        }
        let inner: Complex64 = target
            .amplitudes
            .iter()
            .zip(self.amplitudes.iter())
            .map(|(t, s)| t.conj() * s)
            .sum();
        Ok(inner.norm_sqr())
    }

    /// Per-level populations |a_k|².
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Population of the highest retained level; the containment diagnostic.
    pub fn top_population(&self) -> f64 {
        self.amplitudes[self.dimension() - 1].norm_sqr()
    }

    /// Restriction to the lowest `n + 1` levels, renormalized, together with
    /// the squared norm that was removed.
    pub fn project_truncate(&self, n: usize) -> Result<(Self, f64), PropagationError> {
        if n + 1 > self.dimension() {
            return Err(PropagationError::TruncationTooLarge {
                requested: n + 1,
                dimension: self.dimension(),
            });
        }
        let kept = self.amplitudes.slice(ndarray::s![..n + 1]).to_owned();
        let kept_norm_sq: f64 = kept.iter().map(|a| a.norm_sqr()).sum();
        if kept_norm_sq < 1e-12 {
            return Err(PropagationError::ProjectionVanishes {
                remaining: kept_norm_sq,
            });
        }
        let leaked = (self.norm_sq() - kept_norm_sq).max(0.0);
        let spec = BasisSpec::new(self.spec.m(), self.spec.l_min() + n as u32)?;
        let scale = kept_norm_sq.sqrt();
        Ok((
            Self {
                spec,
                amplitudes: kept.mapv(|a| a / scale),
                clock: self.clock,
            },
            leaked,
        ))
    }

    /// Zero-pad into a wider window with the same `m`.
    pub fn embed(&self, spec: BasisSpec) -> Result<Self, PropagationError> {
        if spec.m() != self.spec.m() {
            return Err(PropagationError::MMismatch {
                left: self.spec.m(),
                right: spec.m(),
            });
        }
        if spec.dimension() < self.dimension() {
            return Err(PropagationError::TruncationTooLarge {
                requested: self.dimension(),
                dimension: spec.dimension(),
            });
        }
        let mut amplitudes = Array1::zeros(spec.dimension());
        amplitudes
            .slice_mut(ndarray::s![..self.dimension()])
            .assign(&self.amplitudes);
        Ok(Self {
            spec,
            amplitudes,
            clock: self.clock,
        })
    }
}

/// Precomputed sudden-kick unitary `exp(i A cos θ)` on a basis window.
///
/// Built by diagonalizing the cosine operator; reusable across every kick of
/// the same area, and shareable across threads.
#[derive(Debug, Clone)]
pub struct KickPropagator {
    spec: BasisSpec,
    area: f64,
    matrix: Array2<Complex64>,
}

impl KickPropagator {
    pub fn new(spec: BasisSpec, area: f64) -> Result<Self, PropagationError> {
        assert!(area.is_finite(), "pulse area must be finite");
        let d = spec.dimension();
        if area == 0.0 {
            return Ok(Self {
                spec,
                area,
                matrix: Array2::eye(d),
            });
        }
        let eig = CosineOperator::new(spec).eigensystem()?;
        // U = V diag(e^{iAλ}) Vᵀ with V real orthogonal.
        let mut phased = Array2::<Complex64>::zeros((d, d));
        for p in 0..d {
            let phase = Complex64::from_polar(1.0, area * eig.values[p]);
            for j in 0..d {
                phased[[j, p]] = phase * eig.vectors[[j, p]];
            }
        }
        let v_t = eig.vectors.t().mapv(|x| Complex64::new(x, 0.0));
        let matrix = phased.dot(&v_t);
        Ok(Self { spec, area, matrix })
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Apply the kick; the clock is unchanged (sudden limit).
    pub fn apply(&self, state: &RotorState) -> Result<RotorState, PropagationError> {
        if state.spec() != self.spec {
            return Err(PropagationError::SpecMismatch {
                state_m: state.spec().m(),
                state_l_max: state.spec().l_max(),
                op_m: self.spec.m(),
                op_l_max: self.spec.l_max(),
            });
        }
        Ok(RotorState {
            spec: self.spec,
            amplitudes: self.matrix.dot(state.amplitudes()),
            clock: state.clock(),
        })
    }
}

/// Envelope families for finite-duration pulses, all non-negative on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PulseShapeKind {
    /// Constant field over the pulse window.
    Rectangular,
    /// Single half sine lobe, the closest smooth stand-in for a half-cycle pulse.
    HalfSine,
    /// sin² bump.
    SineSquared,
}

impl PulseShapeKind {
    /// E(s) normalized to unit area on s ∈ [0, 1].
    pub fn envelope_unit_area(&self, s: f64) -> f64 {
        match self {
            Self::Rectangular => 1.0,
            Self::HalfSine => 0.5 * PI * (PI * s).sin(),
            Self::SineSquared => 2.0 * (PI * s).sin().powi(2),
        }
    }

    /// Ratio of the time-averaged field to the peak field for this envelope.
    pub fn mean_over_peak(&self) -> f64 {
        match self {
            Self::Rectangular => 1.0,
            Self::HalfSine => 2.0 / PI,
            Self::SineSquared => 0.5,
        }
    }
}

/// Finite-duration pulse: envelope kind, total area `A = ∫₀¹ E(s) ds`, and
/// dimensionless duration `ε = τB`.
#[derive(Debug, Clone, Copy)]
pub struct PulseShape {
    pub kind: PulseShapeKind,
    pub area: f64,
    pub epsilon: f64,
}

impl PulseShape {
    pub fn new(kind: PulseShapeKind, area: f64, epsilon: f64) -> Self {
        assert!(area > 0.0 && epsilon > 0.0, "pulse area and duration must be positive");
        Self {
            kind,
            area,
            epsilon,
        }
    }

    /// E(s) in rescaled time s ∈ [0, 1].
    pub fn envelope(&self, s: f64) -> f64 {
        self.area * self.kind.envelope_unit_area(s)
    }
}

/// Integrate `i ∂ψ/∂s = [ε L² − E(s) cos θ] ψ` over s ∈ [0, 1] by symmetric
/// (Strang) splitting: half-step free phase, full-step kick phase with area
/// `E(s) ds`, half-step free phase. Used to validate the sudden limit.
///
/// The clock advances by the pulse duration `ε/π` in `T_rot` units.
pub fn propagate_pulse_shape(
    state: &RotorState,
    pulse: &PulseShape,
    steps: usize,
) -> Result<RotorState, PropagationError> {
    if steps < MIN_PULSE_STEPS {
        return Err(PropagationError::TooFewSteps { steps });
    }
    state.check_norm()?;

    let spec = state.spec();
    let d = spec.dimension();
    let eig = CosineOperator::new(spec).eigensystem()?;
    let l2 = L2Diagonal::new(spec);
    let ds = 1.0 / steps as f64;

    let half_free: Vec<Complex64> = l2
        .values()
        .iter()
        .map(|&v| Complex64::from_polar(1.0, -pulse.epsilon * v * ds / 2.0))
        .collect();

    let mut amps = state.amplitudes().clone();
    let mut scratch = Array1::<Complex64>::zeros(d);
    for step in 0..steps {
        let s_mid = (step as f64 + 0.5) * ds;
        for (a, ph) in amps.iter_mut().zip(&half_free) {
            *a *= ph;
        }
        // Kick phase in the cosine eigenbasis.
        let a_step = pulse.envelope(s_mid) * ds;
        for p in 0..d {
            let mut acc = Complex64::ZERO;
            for j in 0..d {
                acc += eig.vectors[[j, p]] * amps[j];
            }
            scratch[p] = acc * Complex64::from_polar(1.0, a_step * eig.values[p]);
        }
        for j in 0..d {
            let mut acc = Complex64::ZERO;
            for p in 0..d {
                acc += eig.vectors[[j, p]] * scratch[p];
            }
            amps[j] = acc;
        }
        for (a, ph) in amps.iter_mut().zip(&half_free) {
            *a *= ph;
        }
    }

    let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let drift = (norm_sq - 1.0).abs();
    if drift > 1e-6 {
        return Err(PropagationError::NormDrift { drift });
    }

    Ok(RotorState {
        spec,
        amplitudes: amps,
        clock: state.clock() + pulse.epsilon / PI,
    })
}

/// Convenience free function mirroring [`RotorState::expectation_cos`].
pub fn expectation_cos(state: &RotorState) -> f64 {
    state.expectation_cos()
}

/// Convenience free function mirroring [`RotorState::overlap_probability`].
pub fn overlap_probability(
    state: &RotorState,
    target: &RotorState,
) -> Result<f64, PropagationError> {
    state.overlap_probability(target)
}

/// Default full-propagation window: `l_max = |m| + 4N + 8` gives the kicked
/// dynamics room to leak out of the `N + 1`-level control subspace while the
/// top level stays numerically unpopulated.
pub fn suggested_l_max(m: i32, n: u32) -> u32 {
    m.unsigned_abs() + 4 * n + 8
}
