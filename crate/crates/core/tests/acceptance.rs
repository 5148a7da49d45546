//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use common::*;
use ionsim::channels::{integrate_master_equation, stabilizer_pump_channel, KrausChannel, LindbladTerm, MasterEquation};
use ionsim::circuits::*;
use ionsim::experiment::{run, verify_identities, ExperimentConfig};
use ionsim::gates::{CorrectionRow, GateOp};
use ionsim::models::{color_code_seven, excitations, logical_gate, toric_two_plaquette, LogicalGate};
use ionsim::noise::{bootstrap_mean_ci, dephasing_limit_check, ghz_observables, ghz_pump_circuit, repeated_pumping_mc};
use ionsim::{DensityMatrix, Pauli, PauliString, StateVector};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn up_to_phase(u: &ionsim::Operator, v: &ionsim::Operator) -> f64 {
    (1.0 - overlap(u, v)).max(0.0)
}

fn xs(n: usize, p: Pauli) -> PauliString {
    PauliString::uniform(n, &(0..n).collect::<Vec<_>>(), p).unwrap()
}

fn c1() -> Check {
    let start = Instant::now();
    let a = xs(4, Pauli::X);
    let za = pauli_ref("ZXXXX");
    let mut worst = 0.0f64;
    for phi in [0.1, FRAC_PI_4, FRAC_PI_2, 1.3] {
        let u = e2s(e2s(coherent_block(&a, phi))?.unitary())?;
        worst = worst.max(up_to_phase(&u, &pauli_exp(phi, &za)));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst < 1e-10, format!("deviation {worst:e}"))?;
    ensure(secs < 1.0, format!("took {secs:.3} s"))?;
    Ok(format!("max deviation {worst:.1e}, {secs:.3} s"))
}

fn c2() -> Check {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for p in [Pauli::X, Pauli::Y] {
        for n in 1..=6 {
            let a = xs(n, p);
            let block = e2s(coherent_block(&a, 0.7))?;
            let target = pauli_exp(0.7, &a.to_matrix());
            for _ in 0..200 {
                let sys = e2s(StateVector::random(n, &mut r))?;
                let mut psi = e2s(e2s(StateVector::zero(1))?.tensor(&sys))?;
                e2s(block.apply_unitary(&mut psi))?;
                let want = state_of(&(&target * ket(&sys)));
                let want = e2s(e2s(StateVector::zero(1))?.tensor(&want))?;
                let f = expect_overlap(&psi, &want);
                worst = worst.max(1.0 - f);
            }
        }
    }
    ensure(worst < 1e-10, format!("worst infidelity {worst:e}"))?;
    Ok(format!("2400 states, worst infidelity {worst:.1e}"))
}

fn expect_overlap(a: &StateVector, b: &StateVector) -> f64 {
    let v: ionsim::C64 = ket(a).iter().zip(ket(b).iter()).map(|(x, y)| x.conj() * y).sum();
    v.norm_sqr()
}

fn c3() -> Check {
    let a = xs(4, Pauli::X);
    let am = pauli_ref("XXXX");
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for k in 0..=8 {
        let theta = k as f64 * PI / 16.0;
        let ch = e2s(KrausChannel::new(e2s(e2s(dissipative_block(&a, theta, 3))?.system_kraus())?))?;
        for _ in 0..4 {
            let rho = random_mixed(4, 3, &mut r);
            let before = e2s(rho.expectation_operator(&am))?.re;
            let after = e2s(e2s(ch.apply(&rho))?.expectation_operator(&am))?.re;
            let want = before + (1.0 - before) * theta.sin().powi(2);
            worst = worst.max((after - want).abs());
        }
    }
    ensure(worst < 1e-10, format!("worst {worst:e}"))?;
    Ok(format!("9 angles in [0, pi/2], worst {worst:.1e}"))
}

fn c4() -> Check {
    let circuit = e2s(ghz_pump_circuit(FRAC_PI_2))?;
    let mut rho = e2s(DensityMatrix::new_basis_state(5, "01111"))?;
    e2s(circuit.apply_to_density(&mut rho))?;
    let sys = e2s(rho.partial_trace(&[1, 2, 3, 4]))?;
    let f = e2s(sys.fidelity(&ghz4()))?;
    ensure(f >= 1.0 - 1e-10, format!("GHZ fidelity {f}"))?;
    let a = e2s(sys.expectation_operator(&pauli_ref("XXXX")))?.re;
    ensure((a - 1.0).abs() < 1e-10, format!("<A> = {a}"))?;
    for s in ["ZZII", "ZIZI", "ZIIZ", "IZZI", "IZIZ", "IIZZ"] {
        let v = e2s(sys.expectation_operator(&pauli_ref(s)))?.re;
        ensure((v - 1.0).abs() < 1e-10, format!("<{s}> = {v}"))?;
    }
    Ok(format!("infidelity {:.1e}, <A> = +1, all ZZ = +1", (1.0 - f).max(0.0)))
}

fn lindblad_gap(theta: f64, rho0: &DensityMatrix, steps: usize) -> Result<(f64, f64), String> {
    let a = xs(4, Pauli::X);
    let flip = e2s(realized_flip(&a, 3))?;
    let ch = e2s(stabilizer_pump_channel(&a, &flip, theta))?;
    let eq = e2s(MasterEquation::new(vec![], vec![e2s(LindbladTerm::pump(&a, &flip, theta * theta))?]))?;
    let mut pumped = rho0.clone();
    let mut exact = rho0.clone();
    let mut per_step = 0.0f64;
    for _ in 0..steps {
        let one = e2s(integrate_master_equation(&pumped, &eq, 1.0, 1e-2))?;
        pumped = e2s(ch.apply(&pumped))?;
        per_step = per_step.max(e2s(pumped.trace_distance(&one))?);
        exact = e2s(integrate_master_equation(&exact, &eq, 1.0, 1e-2))?;
    }
    Ok((per_step, e2s(pumped.trace_distance(&exact))?))
}

fn c5() -> Check {
    let rho0 = dm(&e2s(StateVector::random(4, &mut rng(5)))?);
    let (step, total) = lindblad_gap(0.05, &rho0, 100)?;
    ensure(step < 1e-4, format!("per-step {step:e}"))?;
    ensure(total < 1e-2, format!("cumulative {total:e}"))?;
    let d: Vec<f64> =
        [0.1, 0.025].iter().map(|&t| lindblad_gap(t, &rho0, 1).map(|x| x.0)).collect::<Result<_, _>>()?;
    let order = (d[0] / d[1]).log2() / 2.0;
    ensure(order >= 3.8, format!("order {order:.2}"))?;
    Ok(format!("per-step {step:.1e}, after 100 steps {total:.1e}, order {order:.2}"))
}

fn c6() -> Check {
    let mut worst = 0.0f64;
    for theta in [FRAC_PI_4, FRAC_PI_2] {
        for n in 3..=5 {
            for e in 0..n {
                let rest: Vec<usize> = (0..n).filter(|&q| q != e).collect();
                let u = e2s(e2s(refocused_ms_excluding(e, theta, 0.3, n))?.unitary())?;
                worst = worst.max(up_to_phase(&u, &ms_oracle(theta, 0.3, &rest, n)));
            }
            let mut star = eye(1 << n);
            for i in 1..n {
                star = ms_oracle(theta, 0.2, &[0, i], n) * star;
                let u = e2s(e2s(two_ion_ms_via_refocus(i, theta, 0.9, n))?.unitary())?;
                worst = worst.max(up_to_phase(&u, &ms_oracle(theta, 0.9, &[0, i], n)));
            }
            let u = e2s(e2s(star_ms(theta, 0.2, n))?.unitary())?;
            worst = worst.max(up_to_phase(&u, &star));
        }
    }
    ensure(worst < 1e-10, format!("deviation {worst:e}"))?;
    Ok(format!("exclusion, star and two-ion sequences, max deviation {worst:.1e}"))
}

fn c7() -> Check {
    let mut worst = 0.0f64;
    for row in CorrectionRow::ALL {
        for theta in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2, 2.5] {
            for refocus in [false, true] {
                let u = e2s(e2s(decompose_correcting_gate(row, theta, 4, 5, refocus))?.unitary())?;
                worst = worst.max(up_to_phase(&u, &correcting_oracle(row.index(), theta, 4, 5)));
            }
        }
    }
    ensure(worst < 1e-10, format!("deviation {worst:e}"))?;
    Ok(format!("4 rows x 5 angles, max deviation {worst:.1e}"))
}

fn c8() -> Check {
    let model = color_code_seven();
    let mut rho = e2s(DensityMatrix::zero(7))?;
    for name in ["A1", "A2", "A3"] {
        rho = e2s(model.stabilizer(name).ok_or("missing stabilizer")?.pump(&rho, FRAC_PI_2))?;
    }
    for (name, s) in [
        ("A1", "XXXXIII"),
        ("A2", "IXXIXXI"),
        ("A3", "IIXXIXX"),
        ("B1", "ZZZZIII"),
        ("B2", "IZZIZZI"),
        ("B3", "IIZZIZZ"),
        ("Zbar", "ZZZZZZZ"),
    ] {
        let v = e2s(rho.expectation_operator(&pauli_ref(s)))?.re;
        ensure((v - 1.0).abs() < 1e-10, format!("<{name}> = {v}"))?;
    }
    let h = e2s(LogicalGate::H.operator(7))?;
    let hh = max_diff(&(&h * &h), &eye(128));
    ensure(hh < 1e-12, format!("H^2 off identity by {hh:e}"))?;
    let mut plus = rho.clone();
    ensure(e2s(logical_gate(&model, &mut plus, LogicalGate::H))?, "H input outside code space")?;
    let xbar = e2s(plus.expectation_operator(&pauli_ref("XXXXXXX")))?.re;
    ensure((xbar - 1.0).abs() < 1e-10, format!("<Xbar> after H = {xbar}"))?;
    let mut one = rho.clone();
    e2s(logical_gate(&model, &mut one, LogicalGate::X))?;
    let ov = (rho.matrix().adjoint() * one.matrix()).trace().re;
    ensure(ov.abs() < 1e-10, format!("overlap {ov:e}"))?;
    let w = e2s(model.ground_space_weight(&one))?;
    ensure((w - 1.0).abs() < 1e-10, format!("Xbar left the code space: {w}"))?;
    Ok("code space reached, Zbar = +1, H^2 = 1, Xbar|0> orthogonal and encoded".into())
}

fn c9() -> Check {
    let model = toric_two_plaquette();
    let bound: usize = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/toric_sweep_bound.txt"))
        .map_err(|e| e.to_string())?
        .trim()
        .parse()
        .map_err(|e: std::num::ParseIntError| e.to_string())?;
    // A ground state, then one σz making a pair of X-type excitations.
    let mut ground = e2s(DensityMatrix::zero(7))?;
    for _ in 0..2 {
        for s in &model.stabilizers {
            ground = e2s(s.pump(&ground, FRAC_PI_2))?;
        }
    }
    e2s(ground.apply_pauli(&e2s("IZIIIII".parse())?))?;
    let ex = e2s(excitations(&ground, &model))?;
    ensure(ex == ["X_TL", "X_BL"], format!("excitations {ex:?}"))?;
    let fixed = e2s(model.stabilizer("X_TL").ok_or("missing")?.pump(&ground, FRAC_PI_2))?;
    ensure(e2s(model.ground_space_weight(&fixed))? > 1.0 - 1e-12, "pair survived one pump")?;

    let mut r = rng(2011);
    let mut worst = 0;
    for k in 0..100 {
        let mut rho = dm(&e2s(StateVector::random_product(7, &mut r))?);
        let mut sweeps = 0;
        while e2s(model.ground_space_weight(&rho))? < 1.0 - 1e-8 {
            ensure(sweeps < 10, format!("state {k} not cooled in 10 sweeps"))?;
            for s in &model.stabilizers {
                rho = e2s(s.pump(&rho, FRAC_PI_2))?;
            }
            sweeps += 1;
        }
        worst = worst.max(sweeps);
    }
    ensure(worst <= bound, format!("needed {worst} sweeps, fixture bound {bound}"))?;
    Ok(format!("pair annihilated; 100 states cooled in at most {worst} sweep(s)"))
}

fn c10() -> Check {
    let start = Instant::now();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let cfg = e2s(ExperimentConfig::load(format!("{dir}/noise_mc_reference.json").as_ref()))?;
    let out = e2s(run(&cfg, None))?;
    let csv = out.files.iter().find(|f| f.0 == "noise_mc.csv").ok_or("no noise_mc.csv")?.1.clone();
    let frozen = std::fs::read_to_string(format!("{dir}/noise_mc_reference.csv")).map_err(|e| e.to_string())?;
    ensure(csv == frozen, "CSV differs from the frozen fixture")?;
    let secs = start.elapsed().as_secs_f64();

    let model = e2s(cfg.noise.clone().ok_or("no noise block")?.model())?;
    let mc = ionsim::noise::McConfig {
        theta: cfg.theta.unwrap_or(FRAC_PI_2),
        steps: cfg.steps.unwrap_or(6),
        trajectories: cfg.trajectories.unwrap_or(10_000),
        seed: cfg.seed.unwrap_or(2011),
        workers: 0,
    };
    let rec = e2s(repeated_pumping_mc(&mc, &model))?;
    ensure(rec.to_csv() == frozen, "library record differs from the fixture")?;
    let a = rec.column("A").ok_or("no A column")?;
    ensure(a.iter().all(|&v| v >= 0.0), format!("<A> negative: {a:?}"))?;
    ensure(a[1] > 0.8, format!("<A> after one step {}", a[1]))?;
    let obs: Vec<PauliString> = ghz_observables().into_iter().map(|o| o.1).collect();
    let exact = averaged_pump_expectations(&e2s(ghz_pump_circuit(mc.theta))?, model.std_dev, &obs, mc.steps);
    for (s, row) in exact.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let err = (rec.mean[s][k] - v).abs();
            ensure(
                err <= 5.0 * rec.stderr[s][k] + 1e-12,
                format!("step {s} {}: {} vs exact {v}", rec.labels[k], rec.mean[s][k]),
            )?;
        }
    }
    let mut highs = Vec::new();
    for s in 2..=mc.steps {
        let (_, hi) = e2s(bootstrap_mean_ci(&rec.flip_ion_gap(s), 2000, 0.95, s as u64))?;
        ensure(hi < 0.0, format!("step {s}: gap interval reaches {hi}"))?;
        highs.push(hi);
    }
    ensure(secs < 60.0, format!("took {secs:.1} s"))?;
    Ok(format!(
        "<A> step 1 {:.4}, matches exact average, gap upper bounds {:?}, fixture bytes equal, {secs:.2} s",
        a[1],
        highs.iter().map(|h| format!("{h:.3}")).collect::<Vec<_>>()
    ))
}

fn c11() -> Check {
    let r = e2s(dephasing_limit_check(0.05, 0.05, 1.0, 100, 2011))?;
    ensure(r.max_trace_distance < 1e-4, format!("distance {:e}", r.max_trace_distance))?;
    let d: Vec<f64> = [0.1, 0.025]
        .iter()
        .map(|&s| dephasing_limit_check(s, s, 1.0, 10, 2011).map(|r| r.max_trace_distance))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let exponent = (d[0] / d[1]).log2() / 2.0;
    ensure(exponent >= 3.5, format!("exponent {exponent:.2}"))?;
    Ok(format!("distance {:.1e}, exponent {exponent:.2}", r.max_trace_distance))
}

fn c12() -> Check {
    let a = xs(4, Pauli::X);
    let am = pauli_ref("IXXXX");
    let mut r = rng(12);
    for t in 0..1000 {
        let sys = e2s(StateVector::random(4, &mut r))?;
        let psi = e2s(e2s(StateVector::zero(1))?.tensor(&sys))?;
        let (first, after) = e2s(read_stabilizer(&psi, &a, &mut r))?;
        let (second, _) = e2s(read_stabilizer(&after, &a, &mut r))?;
        ensure(first == second, format!("trial {t}: {first} then {second}"))?;
    }
    let shots = 400;
    let mut worst = 0.0f64;
    for k in 0..50 {
        let sys = e2s(StateVector::random(4, &mut r))?;
        let psi = e2s(e2s(StateVector::zero(1))?.tensor(&sys))?;
        let p = 0.5 * (1.0 + expect(&psi, &am).re);
        let mut plus = 0;
        for _ in 0..shots {
            if e2s(read_stabilizer(&psi, &a, &mut r))?.0 == 1 {
                plus += 1;
            }
        }
        let sd = (p * (1.0 - p) / shots as f64).sqrt().max(1e-12);
        let z = (plus as f64 / shots as f64 - p).abs() / sd;
        ensure(z <= 3.0, format!("state {k}: frequency off by {z:.2} sigma"))?;
        worst = worst.max(z);
    }
    Ok(format!("1000 repeat pairs agree; 50 states within {worst:.2} sigma"))
}

fn c13() -> Check {
    let mut psi = e2s(StateVector::random(16, &mut rng(13)))?;
    let gate = GateOp::ms(&[0, 3, 7, 11, 15], FRAC_PI_2, 0.4);
    let start = Instant::now();
    e2s(gate.apply(&mut psi))?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    ensure((psi.norm() - 1.0).abs() < 1e-12, "norm drifted")?;
    ensure(ms < 50.0, format!("MS took {ms:.1} ms"))?;
    let start = Instant::now();
    let checks = e2s(verify_identities(false, false))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(checks.iter().all(|c| c.passed), "identity check failed")?;
    ensure(secs < 60.0, format!("verification took {secs:.1} s"))?;
    Ok(format!("5-ion MS on 16 qubits {ms:.2} ms, {} identities in {secs:.2} s", checks.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("coherent block equals exp(i phi Z0 A), n = 4", c1),
        ("coherent block on random states, x and y, n = 1..6", c2),
        ("dissipative block follows the sin^2 law", c3),
        ("one pump at pi/2 turns |1111> into GHZ", c4),
        ("small-angle pumping follows the master equation", c5),
        ("refocused MS sequences match subset gates", c6),
        ("correcting-gate decompositions", c7),
        ("color code encoding and logical gates", c8),
        ("toric code pair annihilation and cooling", c9),
        ("noisy GHZ pumping Monte Carlo", c10),
        ("noisy coherent block averages to dephasing", c11),
        ("QND stabilizer readout statistics", c12),
        ("performance", c13),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
