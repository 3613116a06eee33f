//! Truncated angular-momentum basis at fixed magnetic quantum number.
//!
//! A linearly polarized field conserves `m`, so the working Hilbert space is
//! spanned by `|l, m⟩` with `l = |m| .. l_max`. Basis index `k` maps to
//! `l = |m| + k`. In this basis `cos θ` is symmetric tridiagonal with zero
//! diagonal (parity) and `L²` is diagonal with entries `l (l + 1)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{eigh_tridiagonal, LinalgError, TridiagonalEigen};

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("l_max = {l_max} must be at least |m| = {m_abs}")]
    LMaxBelowM { l_max: u32, m_abs: u32 },
    #[error("cos θ matrix element needs l >= |m|, got l = {l}, m = {m}")]
    LevelBelowM { l: u32, m: i32 },
    #[error("amplitude vector has length {got}, basis dimension is {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// Basis window: conserved `m` plus the highest retained level `l_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    m: i32,
    l_max: u32,
}

impl BasisSpec {
    pub fn new(m: i32, l_max: u32) -> Result<Self, BasisError> {
        if l_max < m.unsigned_abs() {
            return Err(BasisError::LMaxBelowM {
                l_max,
                m_abs: m.unsigned_abs(),
            });
        }
        Ok(Self { m, l_max })
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn l_min(&self) -> u32 {
        self.m.unsigned_abs()
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn dimension(&self) -> usize {
        (self.l_max - self.l_min() + 1) as usize
    }

    /// Level carried by basis index `k`.
    pub fn level(&self, k: usize) -> u32 {
        self.l_min() + k as u32
    }

    pub fn index_of(&self, l: u32) -> Option<usize> {
        (l >= self.l_min() && l <= self.l_max).then(|| (l - self.l_min()) as usize)
    }

    /// Same `m`, higher cutoff.
    pub fn extended(&self, extra_levels: u32) -> Self {
        Self {
            m: self.m,
            l_max: self.l_max + extra_levels,
        }
    }
}

/// ⟨l, m | cos θ | l+1, m⟩ = sqrt(((l+1)² − m²) / ((2l+1)(2l+3))).
///
/// Strictly positive, bounded by 1/√3, and approaching 1/2 from above as
/// `l → ∞` at fixed `m`.
pub fn cos_matrix_element(l: u32, m: i32) -> Result<f64, BasisError> {
    let m_abs = m.unsigned_abs();
    if l < m_abs {
        return Err(BasisError::LevelBelowM { l, m });
    }
    let lf = f64::from(l);
    let mf = f64::from(m_abs);
    let num = (lf + 1.0) * (lf + 1.0) - mf * mf;
    Ok((num / ((2.0 * lf + 1.0) * (2.0 * lf + 3.0))).sqrt())
}

/// `cos θ` restricted to a [`BasisSpec`] window: symmetric tridiagonal with
/// zero diagonal, stored as its single off-diagonal.
#[derive(Debug, Clone)]
pub struct CosineOperator {
    spec: BasisSpec,
    off_diagonal: Vec<f64>,
}

impl CosineOperator {
    pub fn new(spec: BasisSpec) -> Self {
        let off_diagonal = (0..spec.dimension().saturating_sub(1))
            .map(|k| {
                cos_matrix_element(spec.level(k), spec.m())
                    .expect("basis levels start at |m| by construction")
            })
            .collect();
        Self { spec, off_diagonal }
    }

    /// Variant with every coupling replaced by a constant, used for the
    /// large-`l` analytics where all elements are taken as 1/2.
    pub fn uniform(spec: BasisSpec, value: f64) -> Self {
        let off_diagonal = vec![value; spec.dimension().saturating_sub(1)];
        Self { spec, off_diagonal }
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// Matrix-vector product.
    pub fn apply(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>, BasisError> {
        let d = self.dimension();
        if amplitudes.len() != d {
            return Err(BasisError::DimensionMismatch {
                got: amplitudes.len(),
                expected: d,
            });
        }
        let mut out = vec![Complex64::ZERO; d];
        for k in 0..d.saturating_sub(1) {
            let c = self.off_diagonal[k];
            out[k] += c * amplitudes[k + 1];
            out[k + 1] += c * amplitudes[k];
        }
        Ok(out)
    }

    /// ⟨ψ| cos θ |ψ⟩ = 2 Σ_k c_k Re(conj(a_k) a_{k+1}).
    pub fn expectation(&self, amplitudes: &[Complex64]) -> Result<f64, BasisError> {
        if amplitudes.len() != self.dimension() {
            return Err(BasisError::DimensionMismatch {
                got: amplitudes.len(),
                expected: self.dimension(),
            });
        }
        Ok(self
            .off_diagonal
            .iter()
            .enumerate()
            .map(|(k, c)| 2.0 * c * (amplitudes[k].conj() * amplitudes[k + 1]).re)
            .sum())
    }

    pub fn eigensystem(&self) -> Result<TridiagonalEigen, LinalgError> {
        eigh_tridiagonal(&vec![0.0; self.dimension()], &self.off_diagonal)
    }
}

/// Diagonal of `L²`: entry `k` is `l (l + 1)` with `l = |m| + k`.
#[derive(Debug, Clone)]
pub struct L2Diagonal {
    spec: BasisSpec,
    values: Vec<f64>,
}

impl L2Diagonal {
    pub fn new(spec: BasisSpec) -> Self {
        let values = (0..spec.dimension())
            .map(|k| {
                let l = f64::from(spec.level(k));
                l * (l + 1.0)
            })
            .collect();
        Self { spec, values }
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: ∫ Θ_l^m(u) · u · Θ_{l'}^m(u) du by composite
    /// Simpson quadrature, with Θ the normalized associated Legendre factor of
    /// the spherical harmonic (∫ Θ² du = 1 over u = cos θ ∈ [−1, 1]).
    mod quadrature {
        /// Unnormalized associated Legendre P_l^m(u) by upward recurrence.
        fn assoc_legendre(l: u32, m: u32, u: f64) -> f64 {
            assert!(l >= m);
            let mut pmm = 1.0;
            if m > 0 {
                let somx2 = ((1.0 - u) * (1.0 + u)).sqrt();
                let mut fact = 1.0;
                for _ in 0..m {
                    pmm *= -fact * somx2;
                    fact += 2.0;
                }
            }
            if l == m {
                return pmm;
            }
            let mut pmmp1 = u * (2.0 * f64::from(m) + 1.0) * pmm;
            if l == m + 1 {
                return pmmp1;
            }
            let mut pll = 0.0;
            for ll in (m + 2)..=l {
                let llf = f64::from(ll);
                let mf = f64::from(m);
                pll = (u * (2.0 * llf - 1.0) * pmmp1 - (llf + mf - 1.0) * pmm) / (llf - mf);
                pmm = pmmp1;
                pmmp1 = pll;
            }
            pll
        }

        /// sqrt((2l+1)/2 · (l−m)!/(l+m)!)
        fn norm(l: u32, m: u32) -> f64 {
            let mut ratio = 1.0;
            for k in (l - m + 1)..=(l + m) {
                ratio /= f64::from(k);
            }
            ((2.0 * f64::from(l) + 1.0) / 2.0 * ratio).sqrt()
        }

        pub fn theta(l: u32, m: u32, u: f64) -> f64 {
            norm(l, m) * assoc_legendre(l, m, u)
        }

        /// Composite Simpson over u ∈ [−1, 1].
        pub fn integrate(f: impl Fn(f64) -> f64, intervals: usize) -> f64 {
            assert!(intervals % 2 == 0);
            let h = 2.0 / intervals as f64;
            let mut acc = f(-1.0) + f(1.0);
            for i in 1..intervals {
                let u = -1.0 + h * i as f64;
                acc += f(u) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0
        }

        pub fn cos_element(l: u32, m: u32) -> f64 {
            integrate(|u| theta(l, m, u) * u * theta(l + 1, m, u), 1 << 12)
        }

        pub fn cos_squared_diagonal(l: u32, m: u32) -> f64 {
            integrate(|u| theta(l, m, u) * u * u * theta(l, m, u), 1 << 12)
        }
    }

    #[test]
    fn matrix_element_matches_quadrature_oracle() {
        for (l, m) in [(0u32, 0i32), (1, 1), (2, 0), (3, 2), (5, 1), (7, 4)] {
            let closed = cos_matrix_element(l, m).unwrap();
            let oracle = quadrature::cos_element(l, m.unsigned_abs());
            assert!(
                (closed - oracle.abs()).abs() < 1e-9,
                "l={l} m={m}: closed {closed} vs quadrature {oracle}"
            );
        }
    }

    #[test]
    fn frozen_elements() {
        // Values fixed by the quadrature oracle above.
        assert!((cos_matrix_element(0, 0).unwrap() - 0.577_350_269_189_625_8).abs() < 1e-15);
        assert!((cos_matrix_element(1, 1).unwrap() - 0.447_213_595_499_957_94).abs() < 1e-15);
        // Large-l asymptote: approaches 1/2 from above.
        let c50 = cos_matrix_element(50, 0).unwrap();
        assert!(c50 > 0.5 && (c50 - 0.5) < 5e-5, "c50 = {c50}");
    }

    #[test]
    fn element_bounds_and_monotone_approach() {
        // m = 0 approaches 1/2 from above, |m| >= 1 from below; the distance
        // to 1/2 shrinks monotonically either way.
        for m in [0i32, 1, 3, -2] {
            let mut prev_gap: Option<f64> = None;
            for l in m.unsigned_abs()..60 {
                let c = cos_matrix_element(l, m).unwrap();
                assert!(c > 0.0 && c <= 1.0 / 3.0_f64.sqrt() + 1e-15);
                if m == 0 {
                    assert!(c > 0.5, "m=0 elements exceed 1/2 (l={l})");
                } else {
                    assert!(c < 0.5, "|m|>=1 elements sit below 1/2 (l={l}, m={m})");
                }
                let gap = (c - 0.5).abs();
                if let Some(p) = prev_gap {
                    assert!(gap < p, "approach to 1/2 is monotone (l={l}, m={m})");
                }
                prev_gap = Some(gap);
            }
        }
    }

    #[test]
    fn rejects_level_below_m() {
        assert!(matches!(
            cos_matrix_element(1, 2),
            Err(BasisError::LevelBelowM { .. })
        ));
        assert!(matches!(BasisSpec::new(2, 1), Err(BasisError::LMaxBelowM { .. })));
    }

    #[test]
    fn completeness_against_cos_squared() {
        // Σ_{l' = l ± 1} ⟨l|cos|l'⟩² equals ⟨l|cos²|l⟩ (quadrature).
        for (l, m) in [(0u32, 0u32), (1, 0), (2, 1), (4, 2)] {
            let up = cos_matrix_element(l, m as i32).unwrap().powi(2);
            let down = if l > m {
                cos_matrix_element(l - 1, m as i32).unwrap().powi(2)
            } else {
                0.0
            };
            let oracle = quadrature::cos_squared_diagonal(l, m);
            assert!((up + down - oracle).abs() < 1e-9, "l={l} m={m}");
        }
    }

    #[test]
    fn operator_layout() {
        let spec = BasisSpec::new(0, 1).unwrap();
        let c = CosineOperator::new(spec);
        assert_eq!(c.off_diagonal().len(), 1);
        assert!((c.off_diagonal()[0] - 0.577_350_269_189_625_8).abs() < 1e-15);

        // Single-level windows are 1x1 zero matrices.
        for spec in [BasisSpec::new(0, 0).unwrap(), BasisSpec::new(2, 2).unwrap()] {
            let c = CosineOperator::new(spec);
            assert!(c.off_diagonal().is_empty());
            let eig = c.eigensystem().unwrap();
            assert_eq!(eig.values, vec![0.0]);
        }
    }

    #[test]
    fn l2_diagonal_values() {
        let spec = BasisSpec::new(0, 2).unwrap();
        assert_eq!(L2Diagonal::new(spec).values(), &[0.0, 2.0, 6.0]);
        let spec = BasisSpec::new(1, 3).unwrap();
        assert_eq!(L2Diagonal::new(spec).values(), &[2.0, 6.0, 12.0]);
        let spec = BasisSpec::new(0, 0).unwrap();
        assert_eq!(L2Diagonal::new(spec).values(), &[0.0]);
        let spec = BasisSpec::new(-2, 4).unwrap();
        let v = L2Diagonal::new(spec).values().to_vec();
        assert_eq!(v[0], 6.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn spectrum_symmetric_about_zero() {
        let spec = BasisSpec::new(0, 6).unwrap();
        let eig = CosineOperator::new(spec).eigensystem().unwrap();
        let d = eig.values.len();
        for k in 0..d {
            assert!(
                (eig.values[k] + eig.values[d - 1 - k]).abs() < 1e-13,
                "zero-diagonal tridiagonal spectra negate"
            );
            assert!(eig.values[k].abs() < 1.0, "eigenvalues strictly inside (−1, 1)");
        }
    }

    #[test]
    fn expectation_matches_apply() {
        let spec = BasisSpec::new(1, 5).unwrap();
        let c = CosineOperator::new(spec);
        let d = spec.dimension();
        let amps: Vec<Complex64> = (0..d)
            .map(|k| Complex64::new(0.3 + k as f64, 0.1 * k as f64))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm.sqrt()).collect();
        let applied = c.apply(&amps).unwrap();
        let quad: Complex64 = amps
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((quad.im).abs() < 1e-14);
        assert!((quad.re - c.expectation(&amps).unwrap()).abs() < 1e-14);
    }
}
