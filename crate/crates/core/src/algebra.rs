//! su(d) generator bases and Hermitian exponentials.
//!
//! Generators are indexed from 0. The conventional 1-based label `g_i`
//! (Pauli `σ_x, σ_y, σ_z`, Gell-Mann `λ_1..λ_8`) lives at index `i - 1`.
//!
//! The generalized Gell-Mann construction enumerates, for `k = 1..d-1`,
//! the symmetric and antisymmetric matrices of every pair `(j, k)` with
//! `j < k`, followed by the `k`-th diagonal matrix. This ordering reproduces
//! `(σ_x, σ_y, σ_z)` for `d = 2` and `(λ_1, ..., λ_8)` for `d = 3` exactly.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Generators of su(d) plus the identity element `g_0 = sqrt(G/d) 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    d: usize,
    generators: Vec<CMatrix>,
    hs_constant: f64,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// The `d² - 1` traceless generators, excluding `g_0`.
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, index: usize) -> Option<&CMatrix> {
        self.generators.get(index)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Hilbert-Schmidt normalization `G` in `Tr(g_i† g_j) = G δ_ij`.
    pub fn hs_constant(&self) -> f64 {
        self.hs_constant
    }

    pub fn identity_element(&self) -> CMatrix {
        let scale = (self.hs_constant / self.d as f64).sqrt();
        CMatrix::identity(self.d, self.d).scale(scale)
    }
}

/// Which generator basis a model is written against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Pauli,
    GellMann,
    Generalized,
}

impl BasisKind {
    pub fn build(self, d: usize) -> Result<GeneratorBasis> {
        match self {
            BasisKind::Pauli if d == 2 => Ok(pauli_basis()),
            BasisKind::GellMann if d == 3 => Ok(gell_mann_basis()),
            BasisKind::Generalized => generalized_gell_mann_basis(d),
            BasisKind::Pauli => Err(Error::DimensionMismatch { expected: 2, found: d }),
            BasisKind::GellMann => Err(Error::DimensionMismatch { expected: 3, found: d }),
        }
    }
}

fn matrix(d: usize, entries: &[(usize, usize, Complex64)]) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for &(r, c, v) in entries {
        m[(r, c)] = v;
    }
    m
}

/// `(σ_x, σ_y, σ_z)` with `G = 2`.
pub fn pauli_basis() -> GeneratorBasis {
    let sx = matrix(2, &[(0, 1, ONE), (1, 0, ONE)]);
    let sy = matrix(2, &[(0, 1, -I), (1, 0, I)]);
    let sz = matrix(2, &[(0, 0, ONE), (1, 1, -ONE)]);
    GeneratorBasis {
        d: 2,
        generators: vec![sx, sy, sz],
        hs_constant: 2.0,
    }
}

/// The eight Gell-Mann matrices `λ_1..λ_8` with `G = 2`.
pub fn gell_mann_basis() -> GeneratorBasis {
    let r3 = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let generators = vec![
        matrix(3, &[(0, 1, ONE), (1, 0, ONE)]),
        matrix(3, &[(0, 1, -I), (1, 0, I)]),
        matrix(3, &[(0, 0, ONE), (1, 1, -ONE)]),
        matrix(3, &[(0, 2, ONE), (2, 0, ONE)]),
        matrix(3, &[(0, 2, -I), (2, 0, I)]),
        matrix(3, &[(1, 2, ONE), (2, 1, ONE)]),
        matrix(3, &[(1, 2, -I), (2, 1, I)]),
        matrix(3, &[(0, 0, r3), (1, 1, r3), (2, 2, -2.0 * r3)]),
    ];
    GeneratorBasis {
        d: 3,
        generators,
        hs_constant: 2.0,
    }
}

/// Generalized Gell-Mann matrices of su(d), normalized to `G = 2`.
pub fn generalized_gell_mann_basis(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut generators = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        for j in 0..k {
            generators.push(matrix(d, &[(j, k, ONE), (k, j, ONE)]));
            generators.push(matrix(d, &[(j, k, -I), (k, j, I)]));
        }
        let l = k as f64;
        let scale = (2.0 / (l * (l + 1.0))).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for i in 0..k {
            diag[(i, i)] = Complex64::new(scale, 0.0);
        }
        diag[(k, k)] = Complex64::new(-l * scale, 0.0);
        generators.push(diag);
    }
    Ok(GeneratorBasis {
        d,
        generators,
        hs_constant: 2.0,
    })
}

/// A real linear combination of generators, `Σ c_m g_m`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorCombo {
    pub terms: Vec<(usize, f64)>,
}

impl GeneratorCombo {
    pub fn new(terms: Vec<(usize, f64)>) -> Self {
        Self { terms }
    }

    pub fn single(index: usize) -> Self {
        Self::new(vec![(index, 1.0)])
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks indices against a basis of `len` generators.
    pub fn check(&self, len: usize) -> Result<()> {
        for (pos, &(idx, _)) in self.terms.iter().enumerate() {
            if idx >= len {
                return Err(Error::InvalidCombo(format!(
                    "generator index {idx} out of range for a basis of {len} generators"
                )));
            }
            if self.terms[..pos].iter().any(|&(other, _)| other == idx) {
                return Err(Error::InvalidCombo(format!("duplicate generator index {idx}")));
            }
        }
        Ok(())
    }
}

/// `L_x = λ_1 + λ_6`.
pub fn l_x() -> GeneratorCombo {
    GeneratorCombo::new(vec![(0, 1.0), (5, 1.0)])
}

/// `L_y = λ_2 + λ_7`.
pub fn l_y() -> GeneratorCombo {
    GeneratorCombo::new(vec![(1, 1.0), (6, 1.0)])
}

/// `L_z = λ_3 + √3 λ_8 = diag(2, 0, -2)`.
pub fn l_z() -> GeneratorCombo {
    GeneratorCombo::new(vec![(2, 1.0), (7, 3f64.sqrt())])
}

pub fn combo_matrix(basis: &GeneratorBasis, combo: &GeneratorCombo) -> Result<CMatrix> {
    combo.check(basis.len())?;
    let mut m = CMatrix::zeros(basis.d, basis.d);
    for &(idx, coeff) in &combo.terms {
        m += basis.generators[idx].scale(coeff);
    }
    Ok(m)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    max_abs(&(h - h.adjoint()))
}

fn require_hermitian(h: &CMatrix, what: &str) -> Result<()> {
    if !h.is_square() {
        return Err(Error::ContractViolation(format!("{what} is not square")));
    }
    let defect = hermiticity_defect(h);
    if defect > HERMITIAN_TOL * max_abs(h).max(1.0) {
        return Err(Error::ContractViolation(format!(
            "{what} is not Hermitian (max |H - H†| = {defect:.3e})"
        )));
    }
    Ok(())
}

/// Spectral form of `exp(iH)` for a Hermitian `H = V diag(λ) V†`.
#[derive(Debug, Clone)]
pub struct HermitianExp {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    phases: Vec<Complex64>,
}

impl HermitianExp {
    pub fn new(h: &CMatrix) -> Result<Self> {
        require_hermitian(h, "generator")?;
        Ok(Self::new_unchecked(h))
    }

    pub(crate) fn new_unchecked(h: &CMatrix) -> Self {
        // Symmetrize so round-off in H does not leak into the eigensolver.
        let sym = (h + h.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(sym);
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let phases = eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, l))
            .collect();
        Self {
            eigenvalues,
            eigenvectors: eig.eigenvectors,
            phases,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn unitary(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let mut vp = v.clone();
        for (j, p) in self.phases.iter().enumerate() {
            for z in vp.column_mut(j).iter_mut() {
                *z *= p;
            }
        }
        vp * v.adjoint()
    }

    /// `exp(iH) ψ` without forming the unitary.
    pub fn apply(&self, psi: &CVector) -> CVector {
        let mut t = self.eigenvectors.ad_mul(psi);
        for (z, p) in t.iter_mut().zip(&self.phases) {
            *z *= p;
        }
        &self.eigenvectors * t
    }

    /// `exp(-iH) ψ`.
    pub fn apply_adjoint(&self, psi: &CVector) -> CVector {
        let mut t = self.eigenvectors.ad_mul(psi);
        for (z, p) in t.iter_mut().zip(&self.phases) {
            *z *= p.conj();
        }
        &self.eigenvectors * t
    }

    /// Divided differences of `λ ↦ e^{iλ}` over the spectrum.
    pub fn divided_differences(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |a, b| {
            let (la, lb) = (self.eigenvalues[a], self.eigenvalues[b]);
            if (la - lb).abs() <= DEGENERACY_TOL {
                I * self.phases[a]
            } else {
                (self.phases[a] - self.phases[b]) / (la - lb)
            }
        })
    }

    /// `d/dt exp(i(H + t dH))` at `t = 0`.
    pub fn derivative(&self, dh: &CMatrix) -> CMatrix {
        let v = &self.eigenvectors;
        let rotated = v.ad_mul(dh) * v;
        let weighted = rotated.component_mul(&self.divided_differences());
        v * weighted * v.adjoint()
    }
}

/// `exp(iH)` for Hermitian `H`, via its real spectrum.
pub fn expi(h: &CMatrix) -> Result<CMatrix> {
    Ok(HermitianExp::new(h)?.unitary())
}

/// Directional derivative of `H ↦ exp(iH)` along `dh`.
pub fn expi_directional_derivative(h: &CMatrix, dh: &CMatrix) -> Result<CMatrix> {
    require_hermitian(dh, "direction")?;
    if dh.shape() != h.shape() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: dh.nrows(),
        });
    }
    Ok(HermitianExp::new(h)?.derivative(dh))
}
