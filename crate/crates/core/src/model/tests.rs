use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::algebra::{gell_mann_basis, l_x, l_y, l_z, max_abs, pauli_basis};

fn params(spec: &ModelSpec, flat: &[f64]) -> ParameterVector {
    ParameterVector::from_flat(spec, flat).unwrap()
}

fn close(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

#[test]
fn zoo_validates_and_matches_catalog() {
    for entry in zoo_catalog() {
        let spec = builtin_model(entry.name).unwrap();
        let report = validate_spec(&spec);
        assert!(report.is_ok(), "{}: {:?}", entry.name, report.violations);
        assert!(report.warnings.is_empty(), "{}: {:?}", entry.name, report.warnings);
        assert_eq!(spec.k, entry.k, "{}", entry.name);
        assert_eq!(spec.num_params(), entry.params, "{}", entry.name);
        assert_eq!(spec.name.as_deref(), Some(entry.name));
    }
    assert_eq!(zoo_catalog().len(), ZOO_NAMES.len());
}

#[test]
fn zoo_rows() {
    let a = builtin_model("qubit-A").unwrap();
    assert_eq!((a.d, a.k, a.num_s, a.num_w), (2, 2, 1, 1));
    let d2 = builtin_model("qutrit-D2").unwrap();
    assert_eq!((d2.d, d2.k, d2.num_params()), (3, 8, 8));
    assert_eq!(d2.layers[1].terms[0].combo, GeneratorCombo::new(vec![(0, 1.0), (4, 1.0)]));
    // s banks are reused cyclically: x5 pairs with s1
    assert_eq!(d2.layers[0].terms[4].coeff.weight, Some(WeightRef::s(0)));
    let uci = builtin_model("qutrit-uci").unwrap();
    assert_eq!((uci.d, uci.k, uci.num_params()), (3, 4, 5));
    assert_eq!(uci.observable.readout, Readout::BasisProbabilities);
    let rot: Vec<usize> = uci.layers[1].terms.iter().map(|t| t.combo.terms[0].0).collect();
    assert_eq!(rot, vec![4, 5, 6, 7]);
    assert!(builtin_model("QUBIT-a").is_ok());
    match builtin_model("qubit-Z") {
        Err(Error::UnknownModel { valid, .. }) => assert!(valid.contains(&"qutrit-uci".to_string())),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn validation_reports_every_violation() {
    let mut spec = builtin_model("qubit-A").unwrap();
    spec.layers[1].terms[0].coeff.input = Some(0);
    spec.k = 4;
    let report = validate_spec(&spec);
    let messages: Vec<&str> = report.violations.iter().map(|v| v.message.as_str()).collect();
    assert!(messages.iter().any(|m| m.contains("input in rotation layer")));
    assert!(messages.iter().any(|m| m.contains("k <= d²-1")));
    assert_eq!(report.violations.len(), 2);
    assert_eq!(report.violations[0].path, "input_dim");

    let mut spec = builtin_model("qutrit-A").unwrap();
    spec.observable.readout = Readout::Segments { thresholds: vec![0.5, 0.1, 2.0] };
    let report = validate_spec(&spec);
    assert_eq!(report.violations.len(), 2);

    let mut spec = builtin_model("qutrit-B").unwrap();
    spec.layers[0].terms[1].combo = GeneratorCombo::single(2);
    let report = validate_spec(&spec);
    assert!(report.is_ok());
    assert!(report.warnings.iter().any(|w| w.contains("overlapping")));
    assert!(matches!(
        Model::new({
            let mut s = builtin_model("qubit-A").unwrap();
            s.num_s = 0;
            s
        }),
        Err(Error::InvalidSpec(_))
    ));
}

#[test]
fn layer_hamiltonians() {
    let spec = builtin_model("qubit-A").unwrap();
    let p = params(&spec, &[0.7, 0.0]);
    let h = layer_hamiltonian(&spec.layers[0], &[1.0, 0.0], &p, &pauli_basis()).unwrap();
    assert!(close(&h, &pauli_basis().generators()[0].scale(0.7)) < 1e-15);
    let h0 = layer_hamiltonian(&spec.layers[0], &[0.0, 0.0], &p, &pauli_basis()).unwrap();
    assert_eq!(h0, CMatrix::zeros(2, 2));

    let spec = builtin_model("qutrit-3class").unwrap();
    let (a, b, c) = (0.3, -1.1, 0.45);
    let p = params(&spec, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, a, b, c]);
    let gm = gell_mann_basis();
    let h = layer_hamiltonian(&spec.layers[1], &[0.2, 0.4], &p, &gm).unwrap();
    let expected = algebra::combo_matrix(&gm, &l_x()).unwrap().scale(a)
        + algebra::combo_matrix(&gm, &l_y()).unwrap().scale(b)
        + algebra::combo_matrix(&gm, &l_z()).unwrap().scale(c);
    assert!(close(&h, &expected) < 1e-14);
}

#[test]
fn forward_examples() {
    let model = Model::builtin("qubit-A").unwrap();
    let spec = model.spec().clone();
    let p = params(&spec, &[0.3, 0.0]);
    let psi = model.forward(&p, &[0.0, 0.0]).unwrap();
    assert_eq!(psi, qstate::ground_state(2).unwrap());
    assert_eq!(model.expectation(&p, &[0.0, 0.0]).unwrap(), 1.0);
    let p = params(&spec, &[FRAC_PI_2, 0.0]);
    assert!((model.expectation(&p, &[1.0, 0.0]).unwrap() + 1.0).abs() < 1e-14);
    assert!(model.forward(&p, &[1.0]).is_err());
}

#[test]
fn reuploading_composes_blocks() {
    let e = builtin_model("qubit-E").unwrap();
    let theta = [0.4, -0.9, 1.3, 0.25];
    let x = [0.31, -0.17];
    let p = params(&e, &theta);
    let full = forward(&e, &p, &x).unwrap();
    let basis = pauli_basis();
    let mut psi = qstate::ground_state(2).unwrap();
    for layer in &e.layers {
        let u = algebra::expi(&layer_hamiltonian(layer, &x, &p, &basis).unwrap()).unwrap();
        psi = qstate::apply(&u, &psi).unwrap();
    }
    assert!((full.inner(&psi).norm() - 1.0).abs() < 1e-12);
    assert!((full.amplitudes() - psi.amplitudes()).norm() < 1e-12);
}

#[test]
fn qutrit_a_depends_on_the_input() {
    let spec = builtin_model("qutrit-A").unwrap();
    let p = params(&spec, &[0.7, -0.4, 0.9, 0.6]);
    let a = forward(&spec, &p, &[0.3, -0.2]).unwrap();
    let b = forward(&spec, &p, &[-0.4, 0.1]).unwrap();
    assert!(1.0 - a.inner(&b).norm_sqr() > 1e-3);

    // encoding first would leave |0⟩ untouched
    let mut swapped = spec.clone();
    swapped.layers.reverse();
    let a = forward(&swapped, &p, &[0.3, -0.2]).unwrap();
    let b = forward(&swapped, &p, &[-0.4, 0.1]).unwrap();
    assert!((a.inner(&b).norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn readout_rules() {
    let binary = Model::builtin("qubit-A").unwrap();
    assert_eq!(binary.classify_value(0.4), 1);
    assert_eq!(binary.classify_value(-0.4), 0);
    // on the threshold: upper class
    assert_eq!(binary.classify_value(0.0), 1);
    let three = Model::builtin("qutrit-3class").unwrap();
    assert_eq!(three.classify_value(-1.5), 0);
    assert_eq!(three.classify_value(0.1), 1);
    assert_eq!(three.classify_value(2.0), 2);
    assert_eq!(three.segment_bounds(0), Some((-2.0, -2.0 + 4.0 / 3.0)));
    let uci = Model::builtin("qutrit-uci").unwrap();
    let mid = CVector::from_vec(vec![0.0.into(), 1.0.into(), 0.0.into()]);
    assert_eq!(uci.predict_state(&mid), 1);
    let tie = CVector::from_vec(vec![0.0.into(), Complex64::new(0.5f64.sqrt(), 0.0), Complex64::new(0.0, 0.5f64.sqrt())]);
    assert_eq!(uci.predict_state(&tie), 1);
}

#[test]
fn kernel_examples() {
    let spec = builtin_model("qubit-A").unwrap();
    let p = params(&spec, &[FRAC_PI_4, 0.8]);
    let k = kernel(&spec, &p, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
    assert!((k - 0.5).abs() < 1e-14);
    assert!((kernel(&spec, &p, &[0.3, 0.2], &[0.3, 0.2]).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn closed_form_kernel_points() {
    assert!((kernel_qubit_model_a_closed_form(1.3, [1.0, 0.0], [1.0, 0.0]).unwrap() - 1.0).abs() < 1e-14);
    assert!((kernel_qubit_model_a_closed_form(FRAC_PI_4, [1.0, 0.0], [0.0, 1.0]).unwrap() - 0.5).abs() < 1e-14);
    assert!(matches!(
        kernel_qubit_model_a_closed_form(1.0, [0.0, 0.0], [1.0, 0.0]),
        Err(Error::Domain(_))
    ));
}

/// The printed closed form is the overlap kernel of
/// `exp[i s (x1 σ_x + x2 σ_z)]|0⟩`.
#[test]
fn closed_form_kernel_is_the_sigma_x_sigma_z_encoding() {
    let mut spec = builtin_model("qubit-A").unwrap();
    spec.layers[0].terms[1].combo = GeneratorCombo::single(2);
    let model = Model::new(spec).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let t = i as f64;
        let s = -2.0 + 4.0 * ((t * 0.618).fract());
        let x = [((t * 0.371).fract() - 0.5) * 2.0, ((t * 0.123 + 0.2).fract() - 0.5) * 2.0];
        let y = [((t * 0.771 + 0.1).fract() - 0.5) * 2.0, ((t * 0.913 + 0.4).fract() - 0.5) * 2.0];
        if x[0].hypot(x[1]) < 1e-3 || y[0].hypot(y[1]) < 1e-3 {
            continue;
        }
        let p = params(model.spec(), &[s, 0.0]);
        let numeric = model.kernel(&p, &x, &y).unwrap();
        let closed = kernel_qubit_model_a_closed_form(s, x, y).unwrap();
        worst = worst.max((numeric - closed).abs());
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn encoding_is_linear_but_readout_is_not() {
    let model = Model::builtin("qutrit-B").unwrap();
    let theta = [0.7, -0.4, 1.1, 0.3, 0.2, -0.8, 0.5, 0.9];
    let p = params(model.spec(), &theta);
    let (a, b) = ([0.21, -0.13], [-0.05, 0.37]);
    let sum = [a[0] + b[0], a[1] + b[1]];
    let h = |x: &[f64]| model.layer_hamiltonian(0, &p, x).unwrap();
    assert!(close(&h(&sum), &(h(&a) + h(&b))) < 1e-14);
    let f = |x: &[f64]| model.expectation(&p, x).unwrap();
    assert!((f(&sum) - (f(&a) + f(&b))).abs() > 1e-3);
}

#[test]
fn spec_json_roundtrip() {
    for name in ZOO_NAMES {
        let spec = builtin_model(name).unwrap();
        let back = ModelSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert_eq!(spec, back);
    }
    let text = r#"{
        "dimension": 2, "input_dim": 1, "num_s": 1, "num_w": 1, "basis": "pauli",
        "layers": [
            {"kind": "encode", "terms": [{"weight": {"bank": "S", "index": 0}, "input": 0, "combo": [[0, 1.0]]}]},
            {"kind": "rotate", "terms": [{"constant": 0.5, "weight": {"bank": "W", "index": 0}, "combo": [[1, 1.0]]}]}
        ],
        "observable": {"combo": [[2, 1.0]], "readout": {"kind": "segments", "thresholds": [0.0]}}
    }"#;
    let spec = ModelSpec::from_json(text).unwrap();
    assert_eq!(spec.layers[1].terms[0].coeff.constant, 0.5);
    assert!(Model::new(spec).is_ok());
}

fn random_model() -> impl Strategy<Value = (String, Vec<f64>, Vec<f64>, Vec<f64>)> {
    prop::sample::select(vec!["qubit-A", "qubit-B", "qubit-G", "qutrit-A", "qutrit-C", "qutrit-3class", "qutrit-uci", "qutrit-D2"])
        .prop_flat_map(|name| {
            let spec = builtin_model(name).unwrap();
            (
                Just(name.to_string()),
                prop::collection::vec(-3.0..3.0f64, spec.num_params()),
                prop::collection::vec(-1.0..1.0f64, spec.k),
                prop::collection::vec(-1.0..1.0f64, spec.k),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forward_preserves_norm((name, theta, x, _y) in random_model()) {
        let model = Model::builtin(&name).unwrap();
        let p = ParameterVector::from_flat(model.spec(), &theta).unwrap();
        let psi = model.forward(&p, &x).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn kernel_symmetric_and_rotation_invariant((name, theta, x, y) in random_model()) {
        let model = Model::builtin(&name).unwrap();
        let p = ParameterVector::from_flat(model.spec(), &theta).unwrap();
        let kxy = model.kernel(&p, &x, &y).unwrap();
        let kyx = model.kernel(&p, &y, &x).unwrap();
        prop_assert!((0.0..=1.0).contains(&kxy));
        prop_assert!((kxy - kyx).abs() <= 1e-12);
        let full = model.forward(&p, &x).unwrap().inner(&model.forward(&p, &y).unwrap()).norm_sqr();
        prop_assert!((full - kxy).abs() <= 1e-12);
    }

    #[test]
    fn predictions_are_piecewise_constant(v in -2.0..2.0f64) {
        let model = Model::builtin("qutrit-3class").unwrap();
        let c = model.classify_value(v);
        let (lo, hi) = model.segment_bounds(c).unwrap();
        prop_assert!(v >= lo && (v < hi || c == 2));
    }
}
