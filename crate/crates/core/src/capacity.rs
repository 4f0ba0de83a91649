//! Empirical lossless-memory (LM) dimension.
//!
//! A point set is shattered when every binary labeling of it can be
//! trained to zero error. For growing `n`, up to `pattern_budget` random
//! patterns are tried; the estimate is the last `n` for which some pattern
//! was shattered. Small `n` test all `2ⁿ` labelings, larger `n` a random
//! sample of them.

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::Dataset;
use crate::model::{Model, Readout};
use crate::rng::{self, Stream};
use crate::training::{self, LossKind, TrainConfig};
use crate::{Error, Result};

const PATTERN_TAG: u64 = 0x7061;
const LABELING_TAG: u64 = 0x6c62;
const TRAIN_TAG: u64 = 0x7472;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LmConfig {
    /// First `n` to test; `None` means `min(P, 2)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_start: Option<usize>,
    pub n_max: usize,
    pub labeling_budget: usize,
    pub exhaustive_threshold: usize,
    pub pattern_budget: usize,
    pub train: TrainConfig,
    pub seed: u64,
}

impl Default for LmConfig {
    fn default() -> Self {
        Self {
            n_start: None,
            n_max: 20,
            labeling_budget: 50,
            exhaustive_threshold: 6,
            pattern_budget: 10,
            train: TrainConfig::default(),
            seed: 0,
        }
    }
}

impl LmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.labeling_budget == 0 || self.pattern_budget == 0 {
            return Err(Error::InvalidConfig("budgets must be >= 1".into()));
        }
        if self.n_start == Some(0) {
            return Err(Error::InvalidConfig("n_start must be >= 1".into()));
        }
        if self.exhaustive_threshold > 24 {
            return Err(Error::InvalidConfig(format!(
                "exhaustive_threshold {} would enumerate too many labelings",
                self.exhaustive_threshold
            )));
        }
        self.train.validate()
    }

    pub fn start_for(&self, num_params: usize) -> usize {
        self.n_start.unwrap_or_else(|| num_params.clamp(1, 2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NRecord {
    pub n: usize,
    pub patterns_tried: usize,
    pub shattered: bool,
    /// Index of the first shattered pattern.
    pub witness_pattern: Option<usize>,
    /// Seed of the stream that generated the witness pattern.
    pub witness_pattern_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmReport {
    pub model: String,
    pub k: usize,
    pub num_params: usize,
    pub d_lm: usize,
    /// True when the search stopped at `n_max` while still shattering.
    pub capped: bool,
    pub per_n: Vec<NRecord>,
    pub config: LmConfig,
}

/// `n` points with coordinates i.i.d. uniform on `[-0.5, 0.5]`.
pub fn random_pattern(k: usize, n: usize, stream: &mut Stream) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..k).map(|_| stream.random_range(-0.5..=0.5)).collect())
        .collect()
}

fn bits_to_labels(bits: u64, n: usize) -> Vec<usize> {
    (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as usize).collect()
}

/// All `2ⁿ` labelings in counting order when `n <= exhaustive_threshold`,
/// otherwise `labeling_budget` distinct random ones.
pub fn labelings(n: usize, cfg: &LmConfig, stream: &mut Stream) -> Vec<Vec<usize>> {
    assert!(n >= 1 && n < 64, "labelings need 1 <= n < 64");
    let total = 1u64 << n;
    if n <= cfg.exhaustive_threshold || (cfg.labeling_budget as u64) >= total {
        return (0..total).map(|b| bits_to_labels(b, n)).collect();
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(cfg.labeling_budget);
    while out.len() < cfg.labeling_budget {
        let b = stream.random_range(0..total);
        if seen.insert(b) {
            out.push(bits_to_labels(b, n));
        }
    }
    out
}

fn check_binary(model: &Model) -> Result<()> {
    match model.readout() {
        Readout::Segments { thresholds } if thresholds.len() == 1 => Ok(()),
        _ => Err(Error::ReadoutMismatch(
            "LM dimension needs a binary segments readout".into(),
        )),
    }
}

/// Whether every labeling of `pattern` trains to accuracy 1. The
/// labeling sample and the training streams derive from `job_seed`.
pub fn shatters(model: &Model, pattern: &[Vec<f64>], cfg: &LmConfig, job_seed: u64) -> Result<bool> {
    check_binary(model)?;
    if pattern.is_empty() {
        return Ok(true);
    }
    let n = pattern.len();
    let mut stream = rng::stream(job_seed, &[LABELING_TAG]);
    let labels = labelings(n, cfg, &mut stream);
    let failure = labels.par_iter().enumerate().find_map_any(|(j, lab)| {
        let realized = Dataset::new(pattern.to_vec(), lab.clone(), 2).and_then(|data| {
            let train = TrainConfig {
                seed: rng::derive_seed(job_seed, &[TRAIN_TAG, j as u64]),
                ..cfg.train.clone()
            };
            training::first_perfect_restart(model, &data, &train, LossKind::Segment)
        });
        match realized {
            Ok(Some(_)) => None,
            Ok(None) => {
                debug!("labeling {lab:?} not realized");
                Some(Ok(()))
            }
            Err(e) => Some(Err(e)),
        }
    });
    match failure {
        None => Ok(true),
        Some(Ok(())) => Ok(false),
        Some(Err(e)) => Err(e),
    }
}

/// Seed of the stream that draws pattern `p` at size `n`.
pub fn pattern_seed(cfg: &LmConfig, n: usize, p: usize) -> u64 {
    rng::derive_seed(cfg.seed, &[PATTERN_TAG, n as u64, p as u64])
}

/// Regenerates a pattern from its seed and checks it again.
pub fn recheck_pattern(model: &Model, cfg: &LmConfig, n: usize, seed: u64) -> Result<bool> {
    let pattern = random_pattern(model.input_dim(), n, &mut Stream::seed_from_u64(seed));
    shatters(model, &pattern, cfg, seed)
}

pub fn estimate_lm_dimension(model: &Model, cfg: &LmConfig) -> Result<LmReport> {
    check_binary(model)?;
    cfg.validate()?;
    let k = model.input_dim();
    let start = cfg.start_for(model.num_params());
    let mut per_n = Vec::new();
    let mut d_lm = 0;
    let mut capped = false;
    for n in start..=cfg.n_max.max(start) {
        let mut record = NRecord {
            n,
            patterns_tried: 0,
            shattered: false,
            witness_pattern: None,
            witness_pattern_seed: None,
        };
        for p in 0..cfg.pattern_budget {
            record.patterns_tried += 1;
            let seed = pattern_seed(cfg, n, p);
            let pattern = random_pattern(k, n, &mut Stream::seed_from_u64(seed));
            if shatters(model, &pattern, cfg, seed)? {
                record.shattered = true;
                record.witness_pattern = Some(p);
                record.witness_pattern_seed = Some(seed);
                break;
            }
        }
        info!(
            "{} n={n}: {} after {} pattern(s)",
            model.spec().label(),
            if record.shattered { "shattered" } else { "not shattered" },
            record.patterns_tried
        );
        let shattered = record.shattered;
        per_n.push(record);
        if !shattered {
            break;
        }
        d_lm = n;
        if n >= cfg.n_max {
            capped = true;
        }
    }
    Ok(LmReport {
        model: model.spec().label(),
        k,
        num_params: model.num_params(),
        d_lm,
        capped,
        per_n,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> LmConfig {
        LmConfig {
            n_max: 6,
            pattern_budget: 3,
            train: TrainConfig {
                restarts: 10,
                max_iters: 300,
                ..TrainConfig::default()
            },
            ..LmConfig::default()
        }
    }

    #[test]
    fn patterns_in_range_and_reproducible() {
        let a = random_pattern(3, 50, &mut rng::stream(1, &[]));
        let b = random_pattern(3, 50, &mut rng::stream(1, &[]));
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|v| (-0.5..=0.5).contains(v)));
        let big = random_pattern(1, 10_000, &mut rng::stream(2, &[]));
        let mean: f64 = big.iter().map(|r| r[0]).sum::<f64>() / 10_000.0;
        assert!(mean.abs() < 0.02, "{mean}");
    }

    #[test]
    fn labeling_enumeration() {
        let cfg = LmConfig::default();
        let mut s = rng::stream(0, &[]);
        assert_eq!(
            labelings(2, &cfg, &mut s),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let four = labelings(4, &cfg, &mut s);
        assert_eq!(four.len(), 16);
        let uniq: std::collections::HashSet<_> = four.iter().collect();
        assert_eq!(uniq.len(), 16);
        let seven = labelings(7, &cfg, &mut s);
        assert_eq!(seven.len(), 50);
        let uniq: std::collections::HashSet<_> = seven.iter().collect();
        assert_eq!(uniq.len(), 50);
    }

    #[test]
    fn single_point_is_shattered() {
        let model = Model::builtin("qubit-A").unwrap();
        let cfg = small_cfg();
        assert!(shatters(&model, &[vec![0.3, -0.2]], &cfg, 5).unwrap());
    }

    #[test]
    fn non_binary_readout_is_rejected() {
        let model = Model::builtin("qutrit-3class").unwrap();
        assert!(matches!(
            estimate_lm_dimension(&model, &small_cfg()),
            Err(Error::ReadoutMismatch(_))
        ));
        let uci = Model::builtin("qutrit-uci").unwrap();
        assert!(shatters(&uci, &[vec![0.0; 4]], &small_cfg(), 0).is_err());
    }

    #[test]
    fn report_is_contiguous_and_rechecks() {
        let model = Model::builtin("qubit-C").unwrap();
        let cfg = small_cfg();
        let report = estimate_lm_dimension(&model, &cfg).unwrap();
        let ns: Vec<usize> = report.per_n.iter().map(|r| r.n).collect();
        let expected: Vec<usize> = (cfg.start_for(3)..cfg.start_for(3) + ns.len()).collect();
        assert_eq!(ns, expected);
        for r in &report.per_n[..report.per_n.len() - 1] {
            assert!(r.shattered);
        }
        assert_eq!(report.d_lm, report.per_n.iter().filter(|r| r.shattered).map(|r| r.n).max().unwrap_or(0));
        let last = report.per_n.iter().rev().find(|r| r.shattered).unwrap();
        assert!(recheck_pattern(&model, &cfg, last.n, last.witness_pattern_seed.unwrap()).unwrap());
        assert_eq!(report, estimate_lm_dimension(&model, &cfg).unwrap());
    }
}
