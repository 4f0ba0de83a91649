//! Built-in qubit and qutrit models.
//!
//! Generator indices below are 0-based: `g(1)` is the first Pauli or
//! Gell-Mann matrix.

use crate::algebra::{self, BasisKind, GeneratorCombo};
use crate::{Error, Result};

use super::{equal_thresholds, Layer, LayerTerm, ModelSpec, Observable, Readout, WeightRef};

/// Catalog row: name, input dimension, parameter count and the reported
/// empirical LM dimension where one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZooEntry {
    pub name: &'static str,
    pub k: usize,
    pub params: usize,
    pub reported_lm: Option<usize>,
    pub summary: &'static str,
}

const CATALOG: &[ZooEntry] = &[
    ZooEntry { name: "qubit-A", k: 2, params: 2, reported_lm: Some(4), summary: "exp[i s1(x1 g1 + x2 g2)] exp[i w1 g1]" },
    ZooEntry { name: "qubit-B", k: 2, params: 4, reported_lm: Some(7), summary: "exp[i s1(x1 g1 + x2 g2)] exp[i Σ_{j=1..3} wj gj]" },
    ZooEntry { name: "qubit-C", k: 2, params: 3, reported_lm: Some(3), summary: "exp[i(x1 g1 + x2 g2)] exp[i Σ_{j=1..3} wj gj]" },
    ZooEntry { name: "qubit-D", k: 2, params: 5, reported_lm: Some(6), summary: "exp[i(s1 x1 g1 + s2 x2 g2)] exp[i Σ_{j=1..3} wj gj]" },
    ZooEntry { name: "qubit-E", k: 2, params: 4, reported_lm: Some(8), summary: "two re-uploading blocks" },
    ZooEntry { name: "qubit-F", k: 2, params: 6, reported_lm: Some(9), summary: "three re-uploading blocks" },
    ZooEntry { name: "qubit-G", k: 3, params: 3, reported_lm: Some(6), summary: "exp[i s1(x1 g1 + x2 g2 + x3 g3)] exp[i(w1 g1 + w2 g2)]" },
    ZooEntry { name: "qutrit-A", k: 2, params: 4, reported_lm: Some(6), summary: "exp[i(s1 x1 g6 + s2 x2 g7)] exp[i(w1 g1 + w2 g4)], rotation applied first" },
    ZooEntry { name: "qutrit-B", k: 2, params: 8, reported_lm: Some(8), summary: "exp[i x1(s1 g1 + s2 g2) + i x2(s3 g3 + s4 g4)] exp[i Σ_{j=1..4} wj gj]" },
    ZooEntry { name: "qutrit-C", k: 2, params: 8, reported_lm: Some(7), summary: "exp[i x1(s1 g5 + s2 g6) + i x2(s3 g7 + s4 g8)] exp[i Σ_{j=1..4} wj gj]" },
    ZooEntry { name: "qutrit-D1", k: 8, params: 8, reported_lm: Some(13), summary: "exp[i s1 Σ_{j=1..8} xj gj] exp[i Σ_{j=1..7} wj gj]" },
    ZooEntry { name: "qutrit-D2", k: 8, params: 8, reported_lm: Some(16), summary: "exp[i Σ_{j=1..8} xj s_{(j-1) mod 4 + 1} gj] exp[i Σ_{j=1..4} wj(gj + g_{j+4})]" },
    ZooEntry { name: "qutrit-D3", k: 8, params: 9, reported_lm: Some(17), summary: "exp[i Σ_{j=1..8} sj xj gj] exp[i w1 g1]" },
    ZooEntry { name: "qutrit-3class", k: 2, params: 9, reported_lm: None, summary: "exp[i x1(s1 g3 + s2 g5 + s3 g7) + i x2(s4 g4 + s5 g6 + s6 g8)] exp[i(w1 Lx + w2 Ly + w3 Lz)], 3 Lz segments" },
    ZooEntry { name: "qutrit-uci", k: 4, params: 5, reported_lm: None, summary: "exp[i s Σ_{j=1..4} xj gj] exp[i Σ_{j=5..8} w_{j-4} gj], basis-probability readout" },
];

pub const ZOO_NAMES: &[&str] = &[
    "qubit-A", "qubit-B", "qubit-C", "qubit-D", "qubit-E", "qubit-F", "qubit-G", "qutrit-A",
    "qutrit-B", "qutrit-C", "qutrit-D1", "qutrit-D2", "qutrit-D3", "qutrit-3class", "qutrit-uci",
];

pub fn zoo_catalog() -> &'static [ZooEntry] {
    CATALOG
}

/// 1-based generator label to 0-based index.
fn g(label: usize) -> GeneratorCombo {
    GeneratorCombo::single(label - 1)
}

fn s(j: usize) -> Option<WeightRef> {
    Some(WeightRef::s(j - 1))
}

fn w(j: usize) -> Option<WeightRef> {
    Some(WeightRef::w(j - 1))
}

fn x(j: usize) -> Option<usize> {
    Some(j - 1)
}

fn term(weight: Option<WeightRef>, input: Option<usize>, combo: GeneratorCombo) -> LayerTerm {
    LayerTerm::new(weight, input, combo)
}

/// `exp[i Σ_j wj g_{gens[j]}]` with weights numbered from `first`.
fn rotation(first: usize, gens: &[usize]) -> Layer {
    Layer::rotate(
        gens.iter()
            .enumerate()
            .map(|(j, &gen)| term(w(first + j), None, g(gen)))
            .collect(),
    )
}

/// `exp[i s_j (x1 g_a + x2 g_b + ...)]`.
fn shared_weight_encoding(sj: Option<WeightRef>, gens: &[usize]) -> Layer {
    Layer::encode(
        gens.iter()
            .enumerate()
            .map(|(i, &gen)| term(sj, x(i + 1), g(gen)))
            .collect(),
    )
}

fn qubit(name: &str, k: usize, num_s: usize, num_w: usize, layers: Vec<Layer>) -> ModelSpec {
    ModelSpec {
        name: Some(name.to_string()),
        d: 2,
        k,
        num_s,
        num_w,
        basis: BasisKind::Pauli,
        layers,
        observable: Observable {
            combo: g(3),
            readout: Readout::Segments { thresholds: vec![0.0] },
        },
    }
}

fn qutrit(name: &str, k: usize, num_s: usize, num_w: usize, layers: Vec<Layer>) -> ModelSpec {
    ModelSpec {
        name: Some(name.to_string()),
        d: 3,
        k,
        num_s,
        num_w,
        basis: BasisKind::GellMann,
        layers,
        observable: Observable {
            combo: algebra::l_z(),
            readout: Readout::Segments { thresholds: vec![0.0] },
        },
    }
}

/// Spec of a named zoo model; lookup ignores ASCII case.
pub fn builtin_model(name: &str) -> Result<ModelSpec> {
    let canonical = ZOO_NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownModel {
            name: name.to_string(),
            valid: ZOO_NAMES.iter().map(|s| s.to_string()).collect(),
        })?;
    let spec = match *canonical {
        "qubit-A" => qubit(
            canonical,
            2,
            1,
            1,
            vec![shared_weight_encoding(s(1), &[1, 2]), rotation(1, &[1])],
        ),
        "qubit-B" => qubit(
            canonical,
            2,
            1,
            3,
            vec![shared_weight_encoding(s(1), &[1, 2]), rotation(1, &[1, 2, 3])],
        ),
        "qubit-C" => qubit(
            canonical,
            2,
            0,
            3,
            vec![shared_weight_encoding(None, &[1, 2]), rotation(1, &[1, 2, 3])],
        ),
        "qubit-D" => qubit(
            canonical,
            2,
            2,
            3,
            vec![
                Layer::encode(vec![term(s(1), x(1), g(1)), term(s(2), x(2), g(2))]),
                rotation(1, &[1, 2, 3]),
            ],
        ),
        "qubit-E" => qubit(
            canonical,
            2,
            2,
            2,
            vec![
                shared_weight_encoding(s(1), &[1, 2]),
                rotation(1, &[1]),
                shared_weight_encoding(s(2), &[2, 3]),
                rotation(2, &[2]),
            ],
        ),
        "qubit-F" => qubit(
            canonical,
            2,
            3,
            3,
            vec![
                shared_weight_encoding(s(1), &[1, 2]),
                rotation(1, &[1]),
                shared_weight_encoding(s(2), &[2, 3]),
                rotation(2, &[2]),
                shared_weight_encoding(s(3), &[1, 2]),
                rotation(3, &[1]),
            ],
        ),
        "qubit-G" => qubit(
            canonical,
            3,
            1,
            2,
            vec![shared_weight_encoding(s(1), &[1, 2, 3]), rotation(1, &[1, 2])],
        ),
        "qutrit-A" => qutrit(
            canonical,
            2,
            2,
            2,
            // g6 and g7 leave |0⟩ fixed, so the rotation comes first here.
            vec![
                Layer::rotate(vec![term(w(1), None, g(1)), term(w(2), None, g(4))]),
                Layer::encode(vec![term(s(1), x(1), g(6)), term(s(2), x(2), g(7))]),
            ],
        ),
        "qutrit-B" => qutrit(
            canonical,
            2,
            4,
            4,
            vec![
                Layer::encode(vec![
                    term(s(1), x(1), g(1)),
                    term(s(2), x(1), g(2)),
                    term(s(3), x(2), g(3)),
                    term(s(4), x(2), g(4)),
                ]),
                rotation(1, &[1, 2, 3, 4]),
            ],
        ),
        "qutrit-C" => qutrit(
            canonical,
            2,
            4,
            4,
            vec![
                Layer::encode(vec![
                    term(s(1), x(1), g(5)),
                    term(s(2), x(1), g(6)),
                    term(s(3), x(2), g(7)),
                    term(s(4), x(2), g(8)),
                ]),
                rotation(1, &[1, 2, 3, 4]),
            ],
        ),
        "qutrit-D1" => qutrit(
            canonical,
            8,
            1,
            7,
            vec![
                shared_weight_encoding(s(1), &[1, 2, 3, 4, 5, 6, 7, 8]),
                rotation(1, &[1, 2, 3, 4, 5, 6, 7]),
            ],
        ),
        "qutrit-D2" => qutrit(
            canonical,
            8,
            4,
            4,
            vec![
                Layer::encode(
                    (1..=8)
                        .map(|j| term(s((j - 1) % 4 + 1), x(j), g(j)))
                        .collect(),
                ),
                Layer::rotate(
                    (1..=4)
                        .map(|j| term(w(j), None, GeneratorCombo::new(vec![(j - 1, 1.0), (j + 3, 1.0)])))
                        .collect(),
                ),
            ],
        ),
        "qutrit-D3" => qutrit(
            canonical,
            8,
            8,
            1,
            vec![
                Layer::encode((1..=8).map(|j| term(s(j), x(j), g(j))).collect()),
                rotation(1, &[1]),
            ],
        ),
        "qutrit-3class" => {
            let mut spec = qutrit(
                canonical,
                2,
                6,
                3,
                vec![
                    Layer::encode(vec![
                        term(s(1), x(1), g(3)),
                        term(s(2), x(1), g(5)),
                        term(s(3), x(1), g(7)),
                        term(s(4), x(2), g(4)),
                        term(s(5), x(2), g(6)),
                        term(s(6), x(2), g(8)),
                    ]),
                    Layer::rotate(vec![
                        term(w(1), None, algebra::l_x()),
                        term(w(2), None, algebra::l_y()),
                        term(w(3), None, algebra::l_z()),
                    ]),
                ],
            );
            spec.observable.readout = Readout::Segments {
                thresholds: equal_thresholds(-2.0, 2.0, 3),
            };
            spec
        }
        "qutrit-uci" => {
            let mut spec = qutrit(
                canonical,
                4,
                1,
                4,
                vec![shared_weight_encoding(s(1), &[1, 2, 3, 4]), rotation(1, &[5, 6, 7, 8])],
            );
            spec.observable.readout = Readout::BasisProbabilities;
            spec
        }
        other => unreachable!("zoo name {other} has no definition"),
    };
    Ok(spec)
}
