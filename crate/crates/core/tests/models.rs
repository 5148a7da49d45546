mod common;

use std::f64::consts::FRAC_PI_2;

use common::*;
use ionsim::linalg::Operator;
use ionsim::models::{
    color_code_seven, cool_to_ground, excitations, gf2_rank, logical_gate, logical_prepare_zero, syndrome,
    toric_two_plaquette, CodeModel, LogicalGate, StabilizerSpec,
};
use ionsim::{DensityMatrix, PauliString, StateVector};
use proptest::prelude::*;

/// Stabilizer strings written out by hand, qubit 0 first.
const TORIC: [(&str, &str); 8] = [
    ("X_TL", "XXIIIII"),
    ("X_TR", "IIIIXXI"),
    ("X_TM", "XIIXXII"),
    ("X_BL", "IXXIIII"),
    ("X_BM", "IIXXIIX"),
    ("X_BR", "IIIIIXX"),
    ("Z_L", "ZZZZIII"),
    ("Z_R", "IIIZZZZ"),
];

const COLOR: [(&str, &str); 6] = [
    ("A1", "XXXXIII"),
    ("A2", "IXXIXXI"),
    ("A3", "IIXXIXX"),
    ("B1", "ZZZZIII"),
    ("B2", "IZZIZZI"),
    ("B3", "IIZZIZZ"),
];

fn projector(strings: &[&str]) -> Operator {
    let d = 1 << strings[0].len();
    strings.iter().fold(eye(d), |p, s| (eye(d) + pauli_ref(s)) * c(0.5, 0.0) * p)
}

fn trace(m: &Operator) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

#[test]
fn geometry_matches_frozen_tables() {
    let t = toric_two_plaquette();
    for ((name, s), spec) in TORIC.iter().zip(&t.stabilizers) {
        assert_eq!(&spec.name, name);
        assert!(max_diff(&spec.string.to_matrix(), &pauli_ref(s)) < 1e-15, "{name}");
    }
    let cc = color_code_seven();
    for ((name, s), spec) in COLOR.iter().zip(&cc.stabilizers) {
        assert_eq!(&spec.name, name);
        assert!(max_diff(&spec.string.to_matrix(), &pauli_ref(s)) < 1e-15, "{name}");
    }
}

#[test]
fn ground_spaces_have_expected_dimension() {
    let toric: Vec<&str> = TORIC.iter().map(|p| p.1).collect();
    let color: Vec<&str> = COLOR.iter().map(|p| p.1).collect();
    assert!((trace(&projector(&toric)) - 1.0).abs() < 1e-12);
    assert!((trace(&projector(&color)) - 2.0).abs() < 1e-12);
    assert_eq!(toric_two_plaquette().ground_space_dimension(), 1);
    assert_eq!(color_code_seven().ground_space_dimension(), 2);
    assert!(max_diff(&toric_two_plaquette().ground_projector(), &projector(&toric)) < 1e-13);
}

#[test]
fn color_code_logicals() {
    let m = color_code_seven();
    let (x, z) = (m.logical_x.clone().unwrap(), m.logical_z.clone().unwrap());
    assert!(!x.commutes_with(&z));
    for s in &m.stabilizers {
        assert!(s.string.commutes_with(&x) && s.string.commutes_with(&z));
    }
    // Transversal H swaps the logicals, transversal K takes X̄ to ±Ȳ.
    let h = LogicalGate::H.operator(7).unwrap();
    let (xm, zm) = (pauli_ref("XXXXXXX"), pauli_ref("ZZZZZZZ"));
    assert!(max_diff(&(h.adjoint() * &xm * &h), &zm) < 1e-12);
    let k = LogicalGate::K.operator(7).unwrap();
    let y = pauli_ref("YYYYYYY");
    let kx = &k * &xm * k.adjoint();
    assert!(max_diff(&kx, &y).min(max_diff(&kx, &(-&y))) < 1e-12);
}

#[test]
fn pair_of_excitations_is_annihilated_by_one_pump() {
    let model = toric_two_plaquette();
    let ground = logical_free_ground(&model);
    // σz on qubit 1 violates the two X stabilizers that share it.
    let mut excited = ground.clone();
    excited.apply_pauli(&"IZIIIII".parse().unwrap()).unwrap();
    assert_eq!(excitations(&excited, &model).unwrap(), vec!["X_TL", "X_BL"]);
    let out = model.stabilizer("X_TL").unwrap().pump(&excited, FRAC_PI_2).unwrap();
    assert!((model.ground_space_weight(&out).unwrap() - 1.0).abs() < 1e-12);
    // σx on qubit 3 violates both Z plaquettes.
    let mut excited = ground.clone();
    excited.apply_pauli(&"IIIXIII".parse().unwrap()).unwrap();
    assert_eq!(excitations(&excited, &model).unwrap(), vec!["Z_L", "Z_R"]);
    let out = model.stabilizer("Z_L").unwrap().pump(&excited, FRAC_PI_2).unwrap();
    assert!((model.ground_space_weight(&out).unwrap() - 1.0).abs() < 1e-12);
}

fn logical_free_ground(model: &CodeModel) -> DensityMatrix {
    let (rho, _) = cool_to_ground(model, &DensityMatrix::zero(7).unwrap(), FRAC_PI_2, 2).unwrap();
    assert!((model.ground_space_weight(&rho).unwrap() - 1.0).abs() < 1e-12);
    rho
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn one_sweep_cools_any_product_state(seed in 0u64..10_000) {
        let model = toric_two_plaquette();
        let psi = StateVector::random_product(7, &mut rng(seed)).unwrap();
        let (rho, trace) = cool_to_ground(&model, &dm(&psi), FRAC_PI_2, 1).unwrap();
        prop_assert!(model.ground_space_weight(&rho).unwrap() > 1.0 - 1e-10);
        prop_assert_eq!(trace.rows.len(), 9);
        prop_assert!(trace.rows[8].iter().all(|v| (v - 1.0).abs() < 1e-10));
    }

    #[test]
    fn pumps_never_lower_satisfied_stabilizers(seed in 0u64..10_000, theta in 0.1f64..1.5) {
        // Pumps of commuting stabilizers leave the others' expectations alone.
        let model = toric_two_plaquette();
        let rho = random_mixed(7, 2, &mut rng(seed));
        let before = syndrome(&rho, &model).unwrap();
        let out = model.stabilizers[0].pump(&rho, theta).unwrap();
        let after = syndrome(&out, &model).unwrap();
        prop_assert!(after[0] >= before[0] - 1e-12);
        let expected0 = before[0] + (1.0 - before[0]) * theta.sin().powi(2);
        prop_assert!((after[0] - expected0).abs() < 1e-10);
    }
}

#[test]
fn encoded_zero_and_logical_gates() {
    let model = color_code_seven();
    let mut rho = logical_prepare_zero(&model, FRAC_PI_2).unwrap();
    let zbar = model.logical_z.clone().unwrap();
    assert!((rho.expectation(&zbar).unwrap() - 1.0).abs() < 1e-10);
    assert!((rho.purity() - 1.0).abs() < 1e-10);
    let zero = rho.clone();
    assert!(logical_gate(&model, &mut rho, LogicalGate::X).unwrap());
    assert!(syndrome(&rho, &model).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-10));
    let overlap = (zero.matrix().adjoint() * rho.matrix()).trace().re;
    assert!(overlap.abs() < 1e-10);
    // Outside the code space the gate still applies but reports it.
    let mut raw = DensityMatrix::zero(7).unwrap();
    assert!(!logical_gate(&model, &mut raw, LogicalGate::H).unwrap());
}

#[test]
fn schedule_and_flip_overrides() {
    let mut model = toric_two_plaquette();
    model.set_schedule(&["Z_R".into(), "X_TL".into()]).unwrap();
    assert_eq!(model.stabilizers.len(), 2);
    assert_eq!(model.stabilizers[0].name, "Z_R");
    assert!(model.set_schedule(&["nope".into()]).is_err());
    let mut model = toric_two_plaquette();
    model.set_flip("X_TM", 0).unwrap();
    assert_eq!(model.stabilizer("X_TM").unwrap().flip_qubit, 0);
    // A flip outside the support commutes with the stabilizer.
    assert!(model.set_flip("X_TM", 6).is_err());
    assert!(model.set_flip("missing", 0).is_err());
}

#[test]
fn models_reject_anticommuting_stabilizers() {
    let bad = CodeModel {
        name: "bad".into(),
        num_system_qubits: 2,
        stabilizers: vec![
            StabilizerSpec::new("a", "XX".parse().unwrap(), 0, 1.0).unwrap(),
            StabilizerSpec::new("b", "ZI".parse().unwrap(), 0, 1.0).unwrap(),
        ],
        logical_x: None,
        logical_z: None,
    };
    assert!(bad.validate().is_err());
}

#[test]
fn gf2_rank_counts_independent_strings() {
    let s: Vec<PauliString> = COLOR.iter().map(|p| p.1.parse().unwrap()).collect();
    assert_eq!(gf2_rank(&s), 6);
    let dup = vec![s[0].clone(), s[0].clone(), s[0].mul(&s[1]).unwrap(), s[1].clone()];
    assert_eq!(gf2_rank(&dup), 2);
}

#[test]
fn model_hamiltonian_and_json() {
    let m = toric_two_plaquette();
    let h = m.hamiltonian_terms().unwrap();
    assert_eq!(h.len(), 8);
    assert!(h.iter().all(|t| t.coefficient == -1.0));
    let v: serde_json::Value = serde_json::from_str(&m.to_json().unwrap()).unwrap();
    assert_eq!(v["name"], "toric-two-plaquette");
}
