//! Losses, gradients and optimizers.
//!
//! The segment loss penalizes misclassified points by their squared
//! distance to the nearest boundary of the correct segment. The
//! cross-entropy loss scores basis-probability readouts. Exact gradients
//! run one adjoint sweep per data point through the spectral derivatives
//! of every layer exponential.

use log::warn;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{CMatrix, CVector, HermitianExp};
use crate::datasets::{self, Dataset};
use crate::model::{Model, ParameterVector, Readout};
use crate::qstate;
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LossKind {
    Segment,
    CrossEntropy {
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default)]
        use_softmax: bool,
    },
}

fn default_epsilon() -> f64 {
    1e-12
}

impl LossKind {
    pub fn cross_entropy() -> Self {
        LossKind::CrossEntropy {
            epsilon: default_epsilon(),
            use_softmax: false,
        }
    }

    /// The loss that matches a model's readout.
    pub fn for_model(model: &Model) -> Self {
        match model.readout() {
            Readout::Segments { .. } => LossKind::Segment,
            Readout::BasisProbabilities => Self::cross_entropy(),
        }
    }

    fn check(&self, model: &Model) -> Result<()> {
        match (self, model.readout()) {
            (LossKind::Segment, Readout::Segments { .. }) => Ok(()),
            (LossKind::CrossEntropy { epsilon, .. }, Readout::BasisProbabilities) => {
                if *epsilon > 0.0 && *epsilon < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!("epsilon must lie in (0, 1), got {epsilon}")))
                }
            }
            (LossKind::Segment, _) => Err(Error::ReadoutMismatch(
                "segment loss needs a segments readout".into(),
            )),
            (LossKind::CrossEntropy { .. }, _) => Err(Error::ReadoutMismatch(
                "cross-entropy loss needs a basis-probabilities readout".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SgdConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub patience: usize,
    pub validation_fraction: f64,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            batch_size: 8,
            epochs: 200,
            patience: 20,
            validation_fraction: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub restarts: usize,
    pub init_low: f64,
    pub init_high: f64,
    pub learning_rate: f64,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub loss_tol: f64,
    /// Distance the segment-loss target sits inside the correct segment
    /// during training. Should exceed `sqrt(loss_tol)` so that stopping on
    /// `loss_tol` implies a correct classification.
    pub margin: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sgd: Option<SgdConfig>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            init_low: -std::f64::consts::PI,
            init_high: std::f64::consts::PI,
            learning_rate: 0.1,
            max_iters: 1000,
            grad_tol: 1e-8,
            loss_tol: 1e-6,
            margin: 0.1,
            seed: 0,
            sgd: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.restarts == 0 {
            return bad("restarts must be >= 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be > 0, got {}", self.learning_rate));
        }
        if !(self.init_low <= self.init_high) {
            return bad(format!(
                "init range [{}, {}] is empty",
                self.init_low, self.init_high
            ));
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return bad(format!("margin must be >= 0, got {}", self.margin));
        }
        if let Some(sgd) = &self.sgd {
            if sgd.batch_size == 0 {
                return bad("batch_size must be >= 1".into());
            }
            if !(0.0..1.0).contains(&sgd.validation_fraction) {
                return bad(format!(
                    "validation_fraction must lie in [0, 1), got {}",
                    sgd.validation_fraction
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub restart: usize,
    pub final_loss: f64,
    /// Gradient steps (GD) or completed epochs (SGD).
    pub iterations: usize,
    /// Validation loss after each SGD epoch.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curve: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub best_params: ParameterVector,
    pub best_loss: f64,
    pub best_restart_index: usize,
    pub history: Vec<RestartRecord>,
    pub train_accuracy: f64,
}

fn check_data(model: &Model, data: &Dataset) -> Result<()> {
    if !data.is_empty() && data.k() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            found: data.k(),
        });
    }
    if let Some(&l) = data.labels.iter().find(|&&l| l >= model.num_classes()) {
        return Err(Error::ContractViolation(format!(
            "label {l} out of range for a model with {} classes",
            model.num_classes()
        )));
    }
    Ok(())
}

fn check_params(model: &Model, params: &ParameterVector) -> Result<Vec<f64>> {
    params.check(model.spec())?;
    Ok(params.to_flat())
}

/// Per-point loss and its derivative with respect to the readout values:
/// `⟨O⟩` for segments, the basis probabilities for cross-entropy.
struct PointLoss {
    value: f64,
    /// `∂ℓ/∂q`, one entry per readout quantity.
    dq: Vec<f64>,
}

/// With `margin = 0` this is the plain boundary rule. A positive margin
/// moves the target `Y` that far inside the correct segment at every
/// threshold (not at the spectral ends), so a zero loss certifies a
/// correct classification with room to spare.
fn segment_point(model: &Model, v: f64, label: usize, margin: f64) -> PointLoss {
    let (lo, hi) = model.segment_bounds(label).expect("label checked");
    let mid = 0.5 * (lo + hi);
    let last = model.num_classes() - 1;
    let lo_in = if label == 0 { f64::NEG_INFINITY } else { (lo + margin).min(mid) };
    let hi_in = if label == last { f64::INFINITY } else { (hi - margin).max(mid) };
    if model.classify_value(v) == label && v >= lo_in && v <= hi_in {
        return PointLoss {
            value: 0.0,
            dq: vec![0.0],
        };
    }
    let y = if v >= hi_in { hi_in } else { lo_in };
    PointLoss {
        value: (v - y).powi(2),
        dq: vec![2.0 * (v - y)],
    }
}

fn cross_entropy_point(p: &[f64], label: usize, epsilon: f64, use_softmax: bool, scale: f64) -> PointLoss {
    let d = p.len();
    let mut dq = vec![0.0; d];
    if use_softmax {
        let m = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = p.iter().map(|v| (v - m).exp()).collect();
        let z: f64 = e.iter().sum();
        let s: Vec<f64> = e.iter().map(|v| v / z).collect();
        let st = s[label];
        if st > epsilon {
            for j in 0..d {
                let delta = if j == label { 1.0 } else { 0.0 };
                dq[j] = -(delta - s[j]) * scale;
            }
        }
        PointLoss {
            value: -st.clamp(epsilon, 1.0).ln() * scale,
            dq,
        }
    } else {
        let pt = p[label];
        if pt > epsilon {
            dq[label] = -scale / pt;
        }
        PointLoss {
            value: -pt.clamp(epsilon, 1.0).ln() * scale,
            dq,
        }
    }
}

fn readout_values(model: &Model, loss: LossKind, psi: &CVector) -> Vec<f64> {
    match loss {
        LossKind::Segment => vec![qstate::expectation_unchecked(psi, model.observable_matrix())],
        LossKind::CrossEntropy { .. } => psi.iter().map(|c| c.norm_sqr()).collect(),
    }
}

fn point_loss(model: &Model, loss: LossKind, margin: f64, q: &[f64], label: usize, n: usize) -> PointLoss {
    match loss {
        LossKind::Segment => segment_point(model, q[0], label, margin),
        LossKind::CrossEntropy {
            epsilon,
            use_softmax,
        } => cross_entropy_point(q, label, epsilon, use_softmax, 1.0 / n as f64),
    }
}

/// `Σ_q (∂ℓ/∂q) Q` applied to `psi`, where `Q` is the observable or a
/// basis projector.
fn effective_operator_apply(model: &Model, loss: LossKind, dq: &[f64], psi: &CVector) -> CVector {
    match loss {
        LossKind::Segment => model.observable_matrix() * psi * nalgebra::Complex::from(dq[0]),
        LossKind::CrossEntropy { .. } => {
            CVector::from_iterator(psi.len(), psi.iter().zip(dq).map(|(c, &g)| c * g))
        }
    }
}

fn loss_flat(model: &Model, loss: LossKind, margin: f64, theta: &[f64], data: &Dataset) -> f64 {
    let n = data.len();
    data.iter()
        .map(|(x, label)| {
            let psi = model.state_flat(theta, x);
            point_loss(model, loss, margin, &readout_values(model, loss, &psi), label, n).value
        })
        .sum()
}

/// Loss and exact gradient on the given rows.
fn loss_and_gradient_rows<'a>(
    model: &Model,
    loss: LossKind,
    margin: f64,
    theta: &[f64],
    rows: impl Iterator<Item = (&'a [f64], usize)>,
    n: usize,
) -> (f64, Vec<f64>) {
    let layers = model.compiled_layers();
    let mut total = 0.0;
    let mut grad = vec![0.0; theta.len()];
    for (x, label) in rows {
        let trace = model.trace_flat(theta, x, layers.len());
        let psi = trace.output();
        let pl = point_loss(model, loss, margin, &readout_values(model, loss, psi), label, n);
        total += pl.value;
        if pl.dq.iter().all(|&g| g == 0.0) {
            continue;
        }
        let mut beta = effective_operator_apply(model, loss, &pl.dq, psi);
        for l in (0..layers.len()).rev() {
            let exp = &trace.exps[l];
            let has_param = layers[l].terms.iter().any(|t| t.param.is_some());
            if has_param {
                let n_op = adjoint_kernel(exp, &beta, &trace.states[l]);
                for t in &layers[l].terms {
                    if let Some(p) = t.param {
                        let slope = t.coefficient_slope(x);
                        if slope != 0.0 {
                            let s: nalgebra::Complex<f64> =
                                t.matrix.iter().zip(n_op.iter()).map(|(c, m)| c * m).sum();
                            grad[p] += 2.0 * slope * s.re;
                        }
                    }
                }
            }
            if l > 0 {
                beta = exp.apply_adjoint(&beta);
            }
        }
    }
    (total, grad)
}

/// `N` with `⟨β| D_C ψ⟩ = Σ_cd C_cd N_cd`, where `D_C` is the derivative of
/// the layer exponential along `C`, both matrices in column-major order.
fn adjoint_kernel(exp: &HermitianExp, beta: &CVector, psi: &CVector) -> CMatrix {
    let v = exp.eigenvectors();
    let bt = v.ad_mul(beta);
    let pt = v.ad_mul(psi);
    let f = exp.divided_differences();
    let d = v.nrows();
    let m = CMatrix::from_fn(d, d, |a, b| bt[a].conj() * f[(a, b)] * pt[b]);
    v.conjugate() * m * v.transpose()
}

fn data_loss(model: &Model, params: &ParameterVector, data: &Dataset, loss: LossKind) -> Result<f64> {
    loss.check(model)?;
    check_data(model, data)?;
    let theta = check_params(model, params)?;
    Ok(loss_flat(model, loss, 0.0, &theta, data))
}

/// `Σ_{i ∈ T} (⟨O⟩_i − Y_i)²` over the misclassified set `T`.
pub fn segment_loss(model: &Model, params: &ParameterVector, data: &Dataset) -> Result<f64> {
    data_loss(model, params, data, LossKind::Segment)
}

/// Mean negative log-likelihood of the true class.
pub fn cross_entropy_loss(
    model: &Model,
    params: &ParameterVector,
    data: &Dataset,
    epsilon: f64,
    use_softmax: bool,
) -> Result<f64> {
    data_loss(
        model,
        params,
        data,
        LossKind::CrossEntropy {
            epsilon,
            use_softmax,
        },
    )
}

pub fn loss_value(model: &Model, params: &ParameterVector, data: &Dataset, loss: LossKind) -> Result<f64> {
    data_loss(model, params, data, loss)
}

/// Exact gradient in the flat `[s..., w...]` layout. The misclassified set
/// is frozen at `params`.
pub fn gradient(model: &Model, params: &ParameterVector, data: &Dataset, loss: LossKind) -> Result<Vec<f64>> {
    loss.check(model)?;
    check_data(model, data)?;
    let theta = check_params(model, params)?;
    Ok(loss_and_gradient_rows(model, loss, 0.0, &theta, data.iter(), data.len()).1)
}

/// Central differences of an arbitrary scalar function.
pub fn central_differences(f: impl Fn(&[f64]) -> f64, theta: &[f64], h: f64) -> Vec<f64> {
    let mut work = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            work[i] = theta[i] + h;
            let up = f(&work);
            work[i] = theta[i] - h;
            let down = f(&work);
            work[i] = theta[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

pub fn gradient_fd(
    model: &Model,
    params: &ParameterVector,
    data: &Dataset,
    loss: LossKind,
    h: f64,
) -> Result<Vec<f64>> {
    loss.check(model)?;
    check_data(model, data)?;
    let theta = check_params(model, params)?;
    Ok(central_differences(|t| loss_flat(model, loss, 0.0, t, data), &theta, h))
}

const SHIFT_TOL: f64 = 1e-10;

/// Two-point shift rule per parameter occurrence.
///
/// For an occurrence in layer `l` with generator `A = ∂H_l/∂θ`, the rule
/// needs `A² = r² 1` and `[A, H_l − θA] = 0`. Then
/// `∂q/∂θ = r [q(θ + π/(4r)) − q(θ − π/(4r))]` with the shift applied to
/// that occurrence only.
pub fn parameter_shift_gradient(
    model: &Model,
    params: &ParameterVector,
    data: &Dataset,
    loss: LossKind,
) -> Result<Vec<f64>> {
    loss.check(model)?;
    check_data(model, data)?;
    let theta = check_params(model, params)?;
    let layers = model.compiled_layers();
    let n = data.len();
    let d = model.dim();
    let label_of = |p: usize| {
        let spec = model.spec();
        if p < spec.num_s {
            format!("s{}", p + 1)
        } else {
            format!("w{}", p - spec.num_s + 1)
        }
    };
    let mut grad = vec![0.0; theta.len()];
    for (x, label) in data.iter() {
        let psi = model.state_flat(&theta, x);
        let pl = point_loss(model, loss, 0.0, &readout_values(model, loss, &psi), label, n);
        for (l, layer) in layers.iter().enumerate() {
            let h = model.hamiltonian_flat(l, &theta, x);
            for p in 0..theta.len() {
                let mut a = CMatrix::zeros(d, d);
                let mut bound = false;
                for t in layer.terms.iter().filter(|t| t.param == Some(p)) {
                    bound = true;
                    a += t.matrix.scale(t.coefficient_slope(x));
                }
                if !bound {
                    continue;
                }
                let scale = crate::algebra::max_abs(&a);
                if scale == 0.0 {
                    continue;
                }
                let a2 = &a * &a;
                let r2 = a2.trace().re / d as f64;
                let defect = crate::algebra::max_abs(&(a2 - CMatrix::identity(d, d).scale(r2)));
                if r2 <= 0.0 || defect > SHIFT_TOL * r2.max(1.0) {
                    return Err(Error::NotApplicable {
                        parameter: label_of(p),
                        reason: format!("its generator in layer {l} does not square to a multiple of the identity"),
                    });
                }
                let rest = &h - a.scale(theta[p]);
                let comm = &a * &rest - &rest * &a;
                if crate::algebra::max_abs(&comm) > SHIFT_TOL * scale.max(1.0) {
                    return Err(Error::NotApplicable {
                        parameter: label_of(p),
                        reason: format!("its generator in layer {l} does not commute with the rest of the layer"),
                    });
                }
                let r = r2.sqrt();
                let shift = std::f64::consts::FRAC_PI_4 / r;
                let q_at = |delta: f64| {
                    let mut state = CVector::zeros(d);
                    state[0] = 1.0.into();
                    for j in 0..layers.len() {
                        let mut hj = model.hamiltonian_flat(j, &theta, x);
                        if j == l {
                            hj += a.scale(delta);
                        }
                        state = HermitianExp::new_unchecked(&hj).apply(&state);
                    }
                    readout_values(model, loss, &state)
                };
                let up = q_at(shift);
                let down = q_at(-shift);
                for (k, g) in pl.dq.iter().enumerate() {
                    grad[p] += g * r * (up[k] - down[k]);
                }
            }
        }
    }
    Ok(grad)
}

/// Fraction of rows whose predicted class equals the label.
pub fn accuracy(model: &Model, params: &ParameterVector, data: &Dataset) -> Result<f64> {
    check_data(model, data)?;
    let theta = check_params(model, params)?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(accuracy_flat(model, &theta, data))
}

fn accuracy_flat(model: &Model, theta: &[f64], data: &Dataset) -> f64 {
    let hits = data
        .iter()
        .filter(|&(x, label)| model.predict_state(&model.state_flat(theta, x)) == label)
        .count();
    hits as f64 / data.len() as f64
}

fn initial_point(model: &Model, config: &TrainConfig, restart: usize) -> Vec<f64> {
    let mut rng = rng::stream(config.seed, &[restart as u64]);
    (0..model.num_params())
        .map(|_| {
            if config.init_low == config.init_high {
                config.init_low
            } else {
                rng.random_range(config.init_low..config.init_high)
            }
        })
        .collect()
}

struct GdRun {
    theta: Vec<f64>,
    loss: f64,
    iterations: usize,
}

fn gradient_descent(model: &Model, data: &Dataset, config: &TrainConfig, loss: LossKind, mut theta: Vec<f64>) -> GdRun {
    let mut iterations = 0;
    loop {
        let (value, grad) = loss_and_gradient_rows(model, loss, config.margin, &theta, data.iter(), data.len());
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if value <= config.loss_tol || norm <= config.grad_tol || iterations >= config.max_iters || !value.is_finite() {
            return GdRun {
                theta,
                loss: value,
                iterations,
            };
        }
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t -= config.learning_rate * g;
        }
        iterations += 1;
    }
}

fn prepare(model: &Model, data: &Dataset, config: &TrainConfig, loss: LossKind) -> Result<()> {
    config.validate()?;
    loss.check(model)?;
    check_data(model, data)?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(())
}

fn best_of(records: &[RestartRecord]) -> usize {
    let mut best = 0;
    for (i, r) in records.iter().enumerate() {
        if r.final_loss < records[best].final_loss {
            best = i;
        }
    }
    best
}

/// One gradient-descent restart from the initial point of index `restart`.
pub fn fit_restart(
    model: &Model,
    data: &Dataset,
    config: &TrainConfig,
    loss: LossKind,
    restart: usize,
) -> Result<(ParameterVector, RestartRecord)> {
    prepare(model, data, config, loss)?;
    let run = gradient_descent(model, data, config, loss, initial_point(model, config, restart));
    Ok((
        ParameterVector::from_flat(model.spec(), &run.theta)?,
        RestartRecord {
            restart,
            final_loss: run.loss,
            iterations: run.iterations,
            curve: Vec::new(),
        },
    ))
}

/// Lowest-index restart whose run classifies every row correctly.
pub fn first_perfect_restart(
    model: &Model,
    data: &Dataset,
    config: &TrainConfig,
    loss: LossKind,
) -> Result<Option<(usize, ParameterVector)>> {
    prepare(model, data, config, loss)?;
    let found = (0..config.restarts).into_par_iter().find_map_first(|r| {
        let run = gradient_descent(model, data, config, loss, initial_point(model, config, r));
        (accuracy_flat(model, &run.theta, data) == 1.0).then_some((r, run.theta))
    });
    found
        .map(|(r, theta)| Ok((r, ParameterVector::from_flat(model.spec(), &theta)?)))
        .transpose()
}

/// Multi-start fixed-step gradient descent; the restart with the lowest
/// final loss wins, ties going to the lowest index.
pub fn fit_multistart(model: &Model, data: &Dataset, config: &TrainConfig, loss: LossKind) -> Result<FitResult> {
    prepare(model, data, config, loss)?;
    let runs: Vec<GdRun> = (0..config.restarts)
        .into_par_iter()
        .map(|r| gradient_descent(model, data, config, loss, initial_point(model, config, r)))
        .collect();
    let history: Vec<RestartRecord> = runs
        .iter()
        .enumerate()
        .map(|(restart, run)| RestartRecord {
            restart,
            final_loss: run.loss,
            iterations: run.iterations,
            curve: Vec::new(),
        })
        .collect();
    let best = best_of(&history);
    let theta = &runs[best].theta;
    Ok(FitResult {
        best_params: ParameterVector::from_flat(model.spec(), theta)?,
        best_loss: history[best].final_loss,
        best_restart_index: best,
        train_accuracy: accuracy_flat(model, theta, data),
        history,
    })
}

struct SgdRun {
    theta: Vec<f64>,
    best_loss: f64,
    epochs: usize,
    /// Monitored loss after each epoch.
    monitor_losses: Vec<f64>,
}

fn sgd_run(
    model: &Model,
    train: &Dataset,
    monitor: &Dataset,
    config: &TrainConfig,
    sgd: &SgdConfig,
    loss: LossKind,
    restart: usize,
) -> SgdRun {
    let mut theta = initial_point(model, config, restart);
    let mut best_theta = theta.clone();
    let mut best_loss = loss_flat(model, loss, config.margin, &theta, monitor);
    let batch = sgd.batch_size.min(train.len()).max(1);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut stale = 0;
    let mut epochs = 0;
    let mut monitor_losses = Vec::new();
    for epoch in 0..sgd.epochs {
        let mut rng = rng::stream(config.seed, &[restart as u64, 0x736764, epoch as u64]);
        order.shuffle(&mut rng);
        for chunk in order.chunks(batch) {
            let rows = chunk.iter().map(|&i| (train.x[i].as_slice(), train.labels[i]));
            let (_, grad) = loss_and_gradient_rows(model, loss, config.margin, &theta, rows, chunk.len());
            for (t, g) in theta.iter_mut().zip(&grad) {
                *t -= config.learning_rate * g;
            }
        }
        epochs = epoch + 1;
        let value = loss_flat(model, loss, config.margin, &theta, monitor);
        monitor_losses.push(value);
        if value < best_loss {
            best_loss = value;
            best_theta.clone_from(&theta);
            stale = 0;
        } else {
            stale += 1;
            if stale > sgd.patience {
                break;
            }
        }
    }
    SgdRun {
        theta: best_theta,
        best_loss,
        epochs,
        monitor_losses,
    }
}

/// Mini-batch SGD with a stratified validation hold-out and early
/// stopping. Each restart returns the parameters of its best validation
/// epoch; the restart with the lowest validation loss wins.
pub fn fit_sgd(model: &Model, data: &Dataset, config: &TrainConfig, loss: LossKind) -> Result<FitResult> {
    prepare(model, data, config, loss)?;
    let sgd = config
        .sgd
        .clone()
        .ok_or_else(|| Error::InvalidConfig("fit_sgd needs an sgd section in the config".into()))?;
    let (train, monitor) = if sgd.validation_fraction > 0.0 {
        let (t, v) = datasets::stratified_indices(data, 1.0 - sgd.validation_fraction, rng::derive_seed(config.seed, &[0x76616c]))?;
        if t.is_empty() || v.is_empty() {
            warn!("validation split left an empty side; monitoring the training loss");
            (data.clone(), data.clone())
        } else {
            (data.subset(&t), data.subset(&v))
        }
    } else {
        (data.clone(), data.clone())
    };
    if train.len() < sgd.batch_size {
        warn!(
            "training set of {} rows is smaller than batch_size {}; using one batch per epoch",
            train.len(),
            sgd.batch_size
        );
    }
    let runs: Vec<SgdRun> = (0..config.restarts)
        .into_par_iter()
        .map(|r| sgd_run(model, &train, &monitor, config, &sgd, loss, r))
        .collect();
    let history: Vec<RestartRecord> = runs
        .iter()
        .enumerate()
        .map(|(restart, run)| RestartRecord {
            restart,
            final_loss: run.best_loss,
            iterations: run.epochs,
            curve: run.monitor_losses.clone(),
        })
        .collect();
    let best = best_of(&history);
    let theta = &runs[best].theta;
    Ok(FitResult {
        best_params: ParameterVector::from_flat(model.spec(), theta)?,
        best_loss: history[best].final_loss,
        best_restart_index: best,
        train_accuracy: accuracy_flat(model, theta, data),
        history,
    })
}

/// Runs SGD when the config has an `sgd` section and multi-start GD
/// otherwise.
pub fn fit(model: &Model, data: &Dataset, config: &TrainConfig, loss: LossKind) -> Result<FitResult> {
    if config.sgd.is_some() {
        fit_sgd(model, data, config, loss)
    } else {
        fit_multistart(model, data, config, loss)
    }
}
