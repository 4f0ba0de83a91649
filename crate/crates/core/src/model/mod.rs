//! Encode–rotate–measure models.
//!
//! A [`ModelSpec`] is a declarative list of layers. Each layer is a sum of
//! terms `c(θ, x) · Σ_m a_m g_m` and is exponentiated as one unitary
//! `exp(i Σ terms)`. Layers are applied in order to `|0⟩`, and the class is
//! read either from the mean value of an observable split into segments or
//! from the computational-basis probabilities.
//!
//! [`Model`] is the validated, precomputed form used by training and
//! capacity estimation.

mod zoo;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{self, BasisKind, CMatrix, CVector, GeneratorBasis, GeneratorCombo, HermitianExp};
use crate::qstate::{self, QuditState};
use crate::{Error, Result};

pub use zoo::{builtin_model, zoo_catalog, ZooEntry, ZOO_NAMES};

/// Weight bank a coefficient reads from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bank {
    /// Encoding weights `s`.
    S,
    /// Rotation weights `w`.
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightRef {
    pub bank: Bank,
    pub index: usize,
}

impl WeightRef {
    pub fn s(index: usize) -> Self {
        Self { bank: Bank::S, index }
    }

    pub fn w(index: usize) -> Self {
        Self { bank: Bank::W, index }
    }

    /// 1-based display name such as `s1` or `w3`.
    pub fn label(&self) -> String {
        match self.bank {
            Bank::S => format!("s{}", self.index + 1),
            Bank::W => format!("w{}", self.index + 1),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

/// `constant × weight × input`, where unbound factors are 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientExpr {
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<usize>,
}

impl Default for CoefficientExpr {
    fn default() -> Self {
        Self {
            constant: 1.0,
            weight: None,
            input: None,
        }
    }
}

impl CoefficientExpr {
    pub fn evaluate(&self, params: &ParameterVector, x: &[f64]) -> Result<f64> {
        let mut v = self.constant;
        if let Some(w) = self.weight {
            v *= params.get(w).ok_or_else(|| {
                Error::ContractViolation(format!("unbound weight reference {}", w.label()))
            })?;
        }
        if let Some(i) = self.input {
            v *= x.get(i).ok_or_else(|| {
                Error::ContractViolation(format!("unbound input reference x{}", i + 1))
            })?;
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerTerm {
    #[serde(flatten)]
    pub coeff: CoefficientExpr,
    pub combo: GeneratorCombo,
}

impl LayerTerm {
    pub fn new(weight: Option<WeightRef>, input: Option<usize>, combo: GeneratorCombo) -> Self {
        Self {
            coeff: CoefficientExpr {
                constant: 1.0,
                weight,
                input,
            },
            combo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    Encode,
    Rotate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub kind: LayerKind,
    pub terms: Vec<LayerTerm>,
}

impl Layer {
    pub fn encode(terms: Vec<LayerTerm>) -> Self {
        Self {
            kind: LayerKind::Encode,
            terms,
        }
    }

    pub fn rotate(terms: Vec<LayerTerm>) -> Self {
        Self {
            kind: LayerKind::Rotate,
            terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Readout {
    /// Class `m` when `⟨O⟩ ∈ [y_m, y_{m+1})`; thresholds are fixed.
    Segments { thresholds: Vec<f64> },
    /// Class = most probable computational-basis outcome.
    BasisProbabilities,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub combo: GeneratorCombo,
    pub readout: Readout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "dimension")]
    pub d: usize,
    #[serde(rename = "input_dim")]
    pub k: usize,
    pub num_s: usize,
    pub num_w: usize,
    pub basis: BasisKind,
    pub layers: Vec<Layer>,
    pub observable: Observable,
}

impl ModelSpec {
    pub fn num_params(&self) -> usize {
        self.num_s + self.num_w
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "<custom>".to_string())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Trainable weights, `s` (encoding) and `w` (rotation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub s: Vec<f64>,
    pub w: Vec<f64>,
}

impl ParameterVector {
    pub fn zeros(spec: &ModelSpec) -> Self {
        Self {
            s: vec![0.0; spec.num_s],
            w: vec![0.0; spec.num_w],
        }
    }

    /// Splits a flat vector laid out as `[s..., w...]`.
    pub fn from_flat(spec: &ModelSpec, flat: &[f64]) -> Result<Self> {
        if flat.len() != spec.num_params() {
            return Err(Error::DimensionMismatch {
                expected: spec.num_params(),
                found: flat.len(),
            });
        }
        Ok(Self {
            s: flat[..spec.num_s].to_vec(),
            w: flat[spec.num_s..].to_vec(),
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.s.iter().chain(&self.w).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.s.len() + self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, r: WeightRef) -> Option<f64> {
        match r.bank {
            Bank::S => self.s.get(r.index).copied(),
            Bank::W => self.w.get(r.index).copied(),
        }
    }

    pub(crate) fn check(&self, spec: &ModelSpec) -> Result<()> {
        if self.s.len() != spec.num_s || self.w.len() != spec.num_w {
            return Err(Error::DimensionMismatch {
                expected: spec.num_params(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Offending field and what is wrong with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecViolation {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecReport {
    pub violations: Vec<SpecViolation>,
    pub warnings: Vec<String>,
}

impl SpecReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn violation(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(SpecViolation {
            path: path.into(),
            message: message.into(),
        });
    }
}

fn sorted_spectrum(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = HermitianExp::new_unchecked(m).eigenvalues().to_vec();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Checks every structural invariant of a spec and collects all problems.
pub fn validate_spec(spec: &ModelSpec) -> SpecReport {
    let mut report = SpecReport::default();
    if spec.d < 2 {
        report.violation("dimension", format!("d = {} but a qudit needs d >= 2", spec.d));
        return report;
    }
    let basis = match spec.basis.build(spec.d) {
        Ok(b) => b,
        Err(_) => {
            report.violation(
                "basis",
                format!("basis {:?} is not defined for d = {}", spec.basis, spec.d),
            );
            return report;
        }
    };
    let n_gen = basis.len();
    if spec.k == 0 {
        report.violation("input_dim", "input dimension must be at least 1");
    }
    if spec.k > n_gen {
        report.violation(
            "input_dim",
            format!(
                "k = {} exceeds d²-1 = {n_gen} (the encoding requires k <= d²-1)",
                spec.k
            ),
        );
    }
    if spec.num_s > n_gen {
        report.violation("num_s", format!("S = {} exceeds d²-1 = {n_gen}", spec.num_s));
    }
    if spec.num_w > n_gen {
        report.violation("num_w", format!("W = {} exceeds d²-1 = {n_gen}", spec.num_w));
    }
    if spec.layers.is_empty() {
        report.violation("layers", "model has no layers");
    }

    let mut used: HashMap<WeightRef, usize> = HashMap::new();
    for (li, layer) in spec.layers.iter().enumerate() {
        if layer.terms.is_empty() {
            report.violation(format!("layers[{li}].terms"), "layer has no terms");
        }
        // generator index -> inputs that drive it, for the grouping check
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (ti, term) in layer.terms.iter().enumerate() {
            let path = format!("layers[{li}].terms[{ti}]");
            if term.combo.is_empty() {
                report.violation(format!("{path}.combo"), "combo is empty");
            } else if let Err(e) = term.combo.check(n_gen) {
                report.violation(format!("{path}.combo"), e.to_string());
            }
            if !term.coeff.constant.is_finite() {
                report.violation(format!("{path}.constant"), "constant is not finite");
            }
            if let Some(w) = term.coeff.weight {
                let size = match w.bank {
                    Bank::S => spec.num_s,
                    Bank::W => spec.num_w,
                };
                if w.index >= size {
                    report.violation(
                        format!("{path}.weight"),
                        format!("{} out of range for a bank of {size}", w.label()),
                    );
                } else {
                    *used.entry(w).or_default() += 1;
                }
            }
            if let Some(i) = term.coeff.input {
                if layer.kind == LayerKind::Rotate {
                    report.violation(format!("{path}.input"), "input in rotation layer");
                } else if i >= spec.k {
                    report.violation(
                        format!("{path}.input"),
                        format!("input index {i} out of range for k = {}", spec.k),
                    );
                }
                for &(g, _) in &term.combo.terms {
                    groups.entry(g).or_default().push(i);
                }
            }
        }
        for (g, inputs) in groups {
            let first = inputs[0];
            if inputs.iter().any(|&i| i != first) {
                report.warnings.push(format!(
                    "layers[{li}]: generator {g} is shared by several inputs (overlapping groupings)"
                ));
            }
        }
    }
    for (bank, size) in [(Bank::S, spec.num_s), (Bank::W, spec.num_w)] {
        for index in 0..size {
            let r = WeightRef { bank, index };
            if !used.contains_key(&r) {
                report.warnings.push(format!("weight {} is never used", r.label()));
            }
        }
    }

    let obs = &spec.observable;
    if obs.combo.is_empty() {
        report.violation("observable.combo", "observable combo is empty");
        return report;
    }
    if let Err(e) = obs.combo.check(n_gen) {
        report.violation("observable.combo", e.to_string());
        return report;
    }
    if let Readout::Segments { thresholds } = &obs.readout {
        let m = algebra::combo_matrix(&basis, &obs.combo).expect("checked above");
        let spec_vals = sorted_spectrum(&m);
        let (lo, hi) = (spec_vals[0], spec_vals[spec_vals.len() - 1]);
        if thresholds.is_empty() {
            report.violation("observable.readout.thresholds", "at least one threshold is required");
        }
        for (i, &y) in thresholds.iter().enumerate() {
            if !(y > lo && y < hi) {
                report.violation(
                    format!("observable.readout.thresholds[{i}]"),
                    format!("threshold {y} is outside the open spectral range ({lo}, {hi})"),
                );
            }
            if i > 0 && y <= thresholds[i - 1] {
                report.violation(
                    format!("observable.readout.thresholds[{i}]"),
                    "thresholds must be strictly increasing",
                );
            }
        }
    }
    report
}

/// `M - 1` thresholds splitting `[lo, hi]` into equal segments.
pub fn equal_thresholds(lo: f64, hi: f64, classes: usize) -> Vec<f64> {
    let step = (hi - lo) / classes as f64;
    (1..classes).map(|i| lo + step * i as f64).collect()
}

/// `Σ coefficient · combo` of one layer, without precompilation.
pub fn layer_hamiltonian(
    layer: &Layer,
    x: &[f64],
    params: &ParameterVector,
    basis: &GeneratorBasis,
) -> Result<CMatrix> {
    let d = basis.dim();
    let mut h = CMatrix::zeros(d, d);
    for term in &layer.terms {
        let c = term.coeff.evaluate(params, x)?;
        h += algebra::combo_matrix(basis, &term.combo)?.scale(c);
    }
    Ok(h)
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledTerm {
    pub constant: f64,
    /// Flat parameter index in the `[s..., w...]` layout.
    pub param: Option<usize>,
    pub input: Option<usize>,
    pub matrix: CMatrix,
}

impl CompiledTerm {
    fn coefficient(&self, theta: &[f64], x: &[f64]) -> f64 {
        let mut c = self.constant;
        if let Some(p) = self.param {
            c *= theta[p];
        }
        if let Some(i) = self.input {
            c *= x[i];
        }
        c
    }

    /// Derivative of the coefficient with respect to its parameter.
    pub fn coefficient_slope(&self, x: &[f64]) -> f64 {
        match self.input {
            Some(i) => self.constant * x[i],
            None => self.constant,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledLayer {
    pub terms: Vec<CompiledTerm>,
}

/// Forward pass with every intermediate state kept, used by gradients.
pub(crate) struct Trace {
    /// `states[0] = |0⟩`, `states[l + 1]` after layer `l`.
    pub states: Vec<CVector>,
    pub exps: Vec<HermitianExp>,
}

impl Trace {
    pub fn output(&self) -> &CVector {
        self.states.last().expect("trace has at least the initial state")
    }
}

/// A validated spec with generator combos expanded into matrices.
#[derive(Debug, Clone)]
pub struct Model {
    spec: ModelSpec,
    basis: GeneratorBasis,
    layers: Vec<CompiledLayer>,
    observable: CMatrix,
    spectrum: Vec<f64>,
    warnings: Vec<String>,
    last_encode: Option<usize>,
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let report = validate_spec(&spec);
        if !report.is_ok() {
            return Err(Error::InvalidSpec(report.violations));
        }
        let basis = spec.basis.build(spec.d)?;
        let mut layers = Vec::with_capacity(spec.layers.len());
        for layer in &spec.layers {
            let mut terms = Vec::with_capacity(layer.terms.len());
            for term in &layer.terms {
                let param = term.coeff.weight.map(|w| match w.bank {
                    Bank::S => w.index,
                    Bank::W => spec.num_s + w.index,
                });
                terms.push(CompiledTerm {
                    constant: term.coeff.constant,
                    param,
                    input: term.coeff.input,
                    matrix: algebra::combo_matrix(&basis, &term.combo)?,
                });
            }
            layers.push(CompiledLayer { terms });
        }
        let observable = algebra::combo_matrix(&basis, &spec.observable.combo)?;
        let spectrum = sorted_spectrum(&observable);
        let last_encode = spec.layers.iter().rposition(|l| l.kind == LayerKind::Encode);
        Ok(Self {
            spec,
            basis,
            layers,
            observable,
            spectrum,
            warnings: report.warnings,
            last_encode,
        })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Self::new(builtin_model(name)?)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.spec.d
    }

    pub fn input_dim(&self) -> usize {
        self.spec.k
    }

    pub fn num_params(&self) -> usize {
        self.spec.num_params()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn observable_matrix(&self) -> &CMatrix {
        &self.observable
    }

    /// Observable eigenvalues `o_1 <= ... <= o_d`.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn readout(&self) -> &Readout {
        &self.spec.observable.readout
    }

    pub fn num_classes(&self) -> usize {
        match self.readout() {
            Readout::Segments { thresholds } => thresholds.len() + 1,
            Readout::BasisProbabilities => self.spec.d,
        }
    }

    pub(crate) fn compiled_layers(&self) -> &[CompiledLayer] {
        &self.layers
    }

    /// `[lo, hi]` of the segment belonging to `class`.
    pub fn segment_bounds(&self, class: usize) -> Option<(f64, f64)> {
        let Readout::Segments { thresholds } = self.readout() else {
            return None;
        };
        if class > thresholds.len() {
            return None;
        }
        let lo = if class == 0 { self.spectrum[0] } else { thresholds[class - 1] };
        let hi = if class == thresholds.len() {
            self.spectrum[self.spectrum.len() - 1]
        } else {
            thresholds[class]
        };
        Some((lo, hi))
    }

    /// Segment index of a mean value; ties go to the upper segment.
    pub fn classify_value(&self, value: f64) -> usize {
        match self.readout() {
            Readout::Segments { thresholds } => thresholds.iter().filter(|&&y| value >= y).count(),
            Readout::BasisProbabilities => 0,
        }
    }

    pub(crate) fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.spec.k {
            return Err(Error::DimensionMismatch {
                expected: self.spec.k,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn hamiltonian_flat(&self, layer: usize, theta: &[f64], x: &[f64]) -> CMatrix {
        let d = self.spec.d;
        let mut h = CMatrix::zeros(d, d);
        for t in &self.layers[layer].terms {
            let c = t.coefficient(theta, x);
            if c != 0.0 {
                for (dst, src) in h.iter_mut().zip(t.matrix.iter()) {
                    *dst += src * c;
                }
            }
        }
        h
    }

    pub fn layer_hamiltonian(&self, layer: usize, params: &ParameterVector, x: &[f64]) -> Result<CMatrix> {
        params.check(&self.spec)?;
        self.check_input(x)?;
        if layer >= self.layers.len() {
            return Err(Error::ContractViolation(format!("no layer {layer}")));
        }
        Ok(self.hamiltonian_flat(layer, &params.to_flat(), x))
    }

    pub(crate) fn trace_flat(&self, theta: &[f64], x: &[f64], upto: usize) -> Trace {
        let mut psi = CVector::zeros(self.spec.d);
        psi[0] = 1.0.into();
        let mut states = Vec::with_capacity(upto + 1);
        let mut exps = Vec::with_capacity(upto);
        states.push(psi);
        for l in 0..upto {
            let e = HermitianExp::new_unchecked(&self.hamiltonian_flat(l, theta, x));
            let next = e.apply(states.last().expect("non-empty"));
            states.push(next);
            exps.push(e);
        }
        Trace { states, exps }
    }

    pub(crate) fn state_flat(&self, theta: &[f64], x: &[f64]) -> CVector {
        self.state_upto(theta, x, self.layers.len())
    }

    fn state_upto(&self, theta: &[f64], x: &[f64], upto: usize) -> CVector {
        let mut psi = CVector::zeros(self.spec.d);
        psi[0] = 1.0.into();
        for l in 0..upto {
            psi = HermitianExp::new_unchecked(&self.hamiltonian_flat(l, theta, x)).apply(&psi);
        }
        psi
    }

    pub fn forward(&self, params: &ParameterVector, x: &[f64]) -> Result<QuditState> {
        params.check(&self.spec)?;
        self.check_input(x)?;
        Ok(QuditState::from_vector_unchecked(self.state_flat(&params.to_flat(), x)))
    }

    /// `⟨O⟩` at the output of the circuit.
    pub fn expectation(&self, params: &ParameterVector, x: &[f64]) -> Result<f64> {
        let psi = self.forward(params, x)?;
        Ok(qstate::expectation_unchecked(psi.amplitudes(), &self.observable))
    }

    pub(crate) fn predict_state(&self, psi: &CVector) -> usize {
        match self.readout() {
            Readout::Segments { .. } => {
                self.classify_value(qstate::expectation_unchecked(psi, &self.observable))
            }
            Readout::BasisProbabilities => {
                let mut best = 0;
                let mut best_p = f64::NEG_INFINITY;
                for (j, c) in psi.iter().enumerate() {
                    let p = c.norm_sqr();
                    if p > best_p {
                        best = j;
                        best_p = p;
                    }
                }
                best
            }
        }
    }

    pub fn predict(&self, params: &ParameterVector, x: &[f64]) -> Result<usize> {
        let psi = self.forward(params, x)?;
        Ok(self.predict_state(psi.amplitudes()))
    }

    /// State after every layer up to the last encoding layer. Trailing
    /// rotations are dropped since they cancel in state overlaps.
    pub fn feature_state(&self, params: &ParameterVector, x: &[f64]) -> Result<QuditState> {
        params.check(&self.spec)?;
        self.check_input(x)?;
        let upto = self.last_encode.map_or(0, |l| l + 1);
        Ok(QuditState::from_vector_unchecked(self.state_upto(&params.to_flat(), x, upto)))
    }

    /// Feature-map kernel `|⟨ψ_y|ψ_x⟩|²`.
    pub fn kernel(&self, params: &ParameterVector, x: &[f64], y: &[f64]) -> Result<f64> {
        let a = self.feature_state(params, x)?;
        let b = self.feature_state(params, y)?;
        Ok(b.inner(&a).norm_sqr().min(1.0))
    }
}

pub fn forward(spec: &ModelSpec, params: &ParameterVector, x: &[f64]) -> Result<QuditState> {
    Model::new(spec.clone())?.forward(params, x)
}

pub fn predict(spec: &ModelSpec, params: &ParameterVector, x: &[f64]) -> Result<usize> {
    Model::new(spec.clone())?.predict(params, x)
}

pub fn kernel(spec: &ModelSpec, params: &ParameterVector, x: &[f64], y: &[f64]) -> Result<f64> {
    Model::new(spec.clone())?.kernel(params, x, y)
}

/// Closed-form qubit kernel with encoding weight `s`, transcribed term by
/// term. Undefined when either point is at the origin.
pub fn kernel_qubit_model_a_closed_form(s: f64, xv: [f64; 2], yv: [f64; 2]) -> Result<f64> {
    let [x1, x2] = xv;
    let [y1, y2] = yv;
    let x = x1.hypot(x2);
    let y = y1.hypot(y2);
    if x == 0.0 || y == 0.0 {
        return Err(Error::Domain(
            "closed-form kernel divides by |x|²|y|²; use the numerical kernel at the origin".into(),
        ));
    }
    let (x2s, y2s, xs, ys) = (x * x, y * y, x2 * x2, y2 * y2);
    let dot = x1 * y1 + x2 * y2;
    let cy = (2.0 * s * y).cos();
    let cx = (2.0 * s * x).cos();
    let cp = (2.0 * s * (x + y)).cos();
    let cm = (2.0 * s * (x - y)).cos();
    let body = 2.0 * x2s * y2s * cy + x2s * y2s * cp
        + (x2s * (y2s - ys) - xs * y2s + 2.0 * x1 * x * y * y1 + dot * dot) * cm
        + 2.0 * (x2s * (y2s + ys) - xs * y2s - dot * dot) * cx
        - 2.0 * x2s * ys * cy
        - x2s * ys * cp
        + 2.0 * xs * y2s * cy
        - xs * y2s * cp
        - 2.0 * x * x1 * y1 * y * cp
        - 2.0 * x1 * x1 * y1 * y1 * cy
        + x1 * x1 * y1 * y1 * cp
        - 2.0 * xs * ys * cy
        + xs * ys * cp
        - 4.0 * x1 * x2 * y1 * y2 * cy
        + 2.0 * x1 * x2 * y1 * y2 * cp
        + 2.0 * x2s * y2s
        + 2.0 * x2s * ys
        + 2.0 * xs * y2s
        + 2.0 * x1 * x1 * y1 * y1
        + 2.0 * xs * ys
        + 4.0 * x1 * x2 * y1 * y2;
    Ok(body / (8.0 * x2s * y2s))
}

#[cfg(test)]
mod tests;
