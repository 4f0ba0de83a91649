//! Pure qudit states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, CMatrix, CVector, GeneratorBasis};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;

/// A normalized amplitude vector `Σ c_k |k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    amplitudes: CVector,
}

impl QuditState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidDimension(amplitudes.len()));
        }
        let state = Self {
            amplitudes: CVector::from_vec(amplitudes),
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::ContractViolation(format!(
                "state is not normalized (norm {norm})"
            )));
        }
        Ok(state)
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = CVector::from_vec(amplitudes);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ContractViolation("cannot normalize a zero vector".into()));
        }
        Self::new(v.unscale(n).iter().copied().collect())
    }

    pub(crate) fn from_vector_unchecked(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuditState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn density_matrix(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// Generator expectations `b_m = Tr(g_m ρ)` of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub coords: Vec<f64>,
}

impl BlochVector {
    pub fn norm_squared(&self) -> f64 {
        self.coords.iter().map(|b| b * b).sum()
    }
}

/// `|0⟩` of a `d`-level system.
pub fn ground_state(d: usize) -> Result<QuditState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut amps = CVector::zeros(d);
    amps[0] = Complex64::new(1.0, 0.0);
    Ok(QuditState::from_vector_unchecked(amps))
}

fn check_dims(expected: usize, m: &CMatrix) -> Result<()> {
    if m.nrows() != expected || m.ncols() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: m.nrows(),
        });
    }
    Ok(())
}

pub fn apply(u: &CMatrix, psi: &QuditState) -> Result<QuditState> {
    check_dims(psi.dim(), u)?;
    let defect = algebra::max_abs(&(u.adjoint() * u - CMatrix::identity(u.nrows(), u.nrows())));
    if defect > UNITARY_TOL {
        return Err(Error::ContractViolation(format!(
            "matrix is not unitary (max |U†U - 1| = {defect:.3e})"
        )));
    }
    Ok(QuditState::from_vector_unchecked(u * &psi.amplitudes))
}

/// `⟨ψ|O|ψ⟩`; the imaginary round-off is discarded.
pub fn expectation(psi: &QuditState, observable: &CMatrix) -> Result<f64> {
    check_dims(psi.dim(), observable)?;
    Ok(expectation_unchecked(&psi.amplitudes, observable))
}

pub(crate) fn expectation_unchecked(psi: &CVector, observable: &CMatrix) -> f64 {
    psi.dotc(&(observable * psi)).re
}

pub fn basis_probabilities(psi: &QuditState) -> Vec<f64> {
    psi.amplitudes.iter().map(|c| c.norm_sqr()).collect()
}

pub fn bloch_vector(psi: &QuditState, basis: &GeneratorBasis) -> Result<BlochVector> {
    if basis.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: psi.dim(),
        });
    }
    let coords = basis
        .generators()
        .iter()
        .map(|g| expectation_unchecked(&psi.amplitudes, g))
        .collect();
    Ok(BlochVector { coords })
}

/// `(⟨L_x⟩, ⟨L_y⟩, ⟨L_z⟩)` of a qutrit state.
pub fn su2_projection(psi: &QuditState) -> Result<(f64, f64, f64)> {
    if psi.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: psi.dim(),
        });
    }
    let gm = algebra::gell_mann_basis();
    let e = |combo| -> Result<f64> {
        let m = algebra::combo_matrix(&gm, &combo)?;
        Ok(expectation_unchecked(&psi.amplitudes, &m))
    };
    Ok((e(algebra::l_x())?, e(algebra::l_y())?, e(algebra::l_z())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{expi, gell_mann_basis, l_z, pauli_basis};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ground_states() {
        assert_eq!(
            ground_state(2).unwrap().amplitudes().as_slice(),
            &[c(1.0, 0.0), c(0.0, 0.0)]
        );
        assert_eq!(ground_state(3).unwrap().dim(), 3);
        assert_eq!(ground_state(4).unwrap().norm(), 1.0);
        assert!(matches!(ground_state(1), Err(Error::InvalidDimension(1))));
    }

    #[test]
    fn apply_rules() {
        let psi = ground_state(2).unwrap();
        assert_eq!(apply(&CMatrix::identity(2, 2), &psi).unwrap(), psi);
        let sx = pauli_basis().generators()[0].clone();
        let out = apply(&sx.map(|z| z * c(0.0, 1.0)), &psi).unwrap();
        assert_eq!(out.amplitudes().as_slice(), &[c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(matches!(
            apply(&CMatrix::identity(3, 3), &psi),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            apply(&sx.scale(2.0), &psi),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn expectations() {
        let sz = pauli_basis().generators()[2].clone();
        assert_eq!(expectation(&ground_state(2).unwrap(), &sz).unwrap(), 1.0);
        let lz = algebra::combo_matrix(&gell_mann_basis(), &l_z()).unwrap();
        let e = expectation(&ground_state(3).unwrap(), &lz).unwrap();
        assert!((e - 2.0).abs() < 1e-14);
        let plus = QuditState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let sx = pauli_basis().generators()[0].clone();
        assert!((expectation(&plus, &sx).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn probabilities() {
        assert_eq!(basis_probabilities(&ground_state(3).unwrap()), vec![1.0, 0.0, 0.0]);
        let s = QuditState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let p = basis_probabilities(&s);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        let sx = pauli_basis().generators()[0].clone();
        let flipped = apply(&expi(&sx.scale(FRAC_PI_2)).unwrap(), &ground_state(2).unwrap()).unwrap();
        let p = basis_probabilities(&flipped);
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_coordinates() {
        let b = bloch_vector(&ground_state(2).unwrap(), &pauli_basis()).unwrap();
        assert_eq!(b.coords, vec![0.0, 0.0, 1.0]);
        let b3 = bloch_vector(&ground_state(3).unwrap(), &gell_mann_basis()).unwrap();
        assert!((b3.norm_squared() - 4.0 / 3.0).abs() < 1e-12);
        assert!(bloch_vector(&ground_state(3).unwrap(), &pauli_basis()).is_err());
    }

    #[test]
    fn su2_projections() {
        let (x, y, z) = su2_projection(&ground_state(3).unwrap()).unwrap();
        assert!(x.abs() < 1e-15 && y.abs() < 1e-15 && (z - 2.0).abs() < 1e-14);
        let mid = QuditState::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let (x, y, z) = su2_projection(&mid).unwrap();
        assert!(x.abs() < 1e-15 && y.abs() < 1e-15 && z.abs() < 1e-14);
        let low = QuditState::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((su2_projection(&low).unwrap().2 + 2.0).abs() < 1e-14);
        assert!(su2_projection(&ground_state(2).unwrap()).is_err());
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(QuditState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        let s = QuditState::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }
}
