//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use clifsym_core::certificate::{reference_doubled_matrices, run, Command, InputSpec};
use clifsym_core::clifford::{system_for_with, Extension};
use clifsym_core::models::{model_for, Variant};
use clifsym_core::spectra::{
    density_evolve, dispersion_check, little_group_labels, profile_apply_p2,
    random_rational_momenta, sqrt_dirac_fiber, DensityState, FiberState, MassProfile,
};
use clifsym_core::symmetry::{
    classify, compose, satisfies, solve_tau, solve_tau_with, Ansatz, ClassifyOptions,
    SolveOptions, SymmetryCandidate, SymmetryOperator, CLASSIFICATION_COLUMNS,
};
use clifsym_core::{ExactMatrix, ExactScalar};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAMMA_BUDGET: Duration = Duration::from_secs(5);
const SOLVE_BUDGET: Duration = Duration::from_secs(1);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const DENSITY_TOL: f64 = 1e-12;
const COMPOSITION_TOL: f64 = 1e-10;
const RANDOM_MOMENTA: usize = 100;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cand(name: &str) -> SymmetryCandidate {
    SymmetryCandidate::builtin(name).unwrap()
}

fn gamma_relations() -> Outcome {
    let start = Instant::now();
    for ext in [Extension::Sigma3, Extension::Sigma2] {
        for d in [2, 4, 6, 8, 10] {
            let gs = system_for_with(d, ext).map_err(|e| e.to_string())?;
            ensure(gs.relations_hold(), format!("d={d} {} relations fail", ext.label()))?;
        }
    }
    let t = start.elapsed();
    ensure(t < GAMMA_BUDGET, format!("took {t:?}"))?;
    Ok(format!("d=2..10, both constructions, {t:.2?}"))
}

fn single_d4() -> Outcome {
    let model = model_for(4, Variant::Single, &q(1)).unwrap();
    let start = Instant::now();
    let tp = solve_tau(&model, &cand("Tp")).unwrap();
    let c = solve_tau(&model, &cand("C")).unwrap();
    let tw = solve_tau(&model, &cand("Tw")).unwrap();
    let t = start.elapsed();
    ensure(tp.dim == 0, format!("Tp dim {}", tp.dim))?;
    ensure(c.dim == 0, format!("C dim {}", c.dim))?;
    ensure(tw.dim == 1, format!("Tw dim {}", tw.dim))?;
    let a13 = model.alpha(1) * model.alpha(3);
    ensure(
        tw.representative.as_ref().unwrap().projectively_equal(&a13),
        "Tw representative not ∝ α1α3",
    )?;
    ensure(t < SOLVE_BUDGET, format!("took {t:?}"))?;
    Ok(format!("Tp 0, C 0, Tw 1 ∝ α1α3, {t:.2?}"))
}

fn massless_d4() -> Outcome {
    let model = model_for(4, Variant::Massless, &q(0)).unwrap();
    let a = |k| model.alpha(k).clone();
    let expected = [
        ("Tp", model.gamma().gamma(0).clone()),
        ("C", &a(2) * &a(4)),
        ("Tw", &a(1) * &a(3)),
    ];
    for (name, m) in &expected {
        let s = solve_tau(&model, &cand(name)).unwrap();
        ensure(s.dim == 1, format!("{name} dim {}", s.dim))?;
        ensure(
            s.representative.as_ref().unwrap().projectively_equal(m),
            format!("{name} representative differs"),
        )?;
    }
    Ok("Tp ∝ γ0, C ∝ α2α4, Tw ∝ α1α3".into())
}

fn doubled_d4() -> Outcome {
    let model = model_for(4, Variant::Doubled, &q(1)).unwrap();
    let mut ops = Vec::new();
    for name in ["P", "Tp", "Tw", "C"] {
        let s = solve_tau(&model, &cand(name)).unwrap();
        ensure(s.exists, format!("{name} absent"))?;
        ops.push((name, s));
    }
    for (name, m) in reference_doubled_matrices(4) {
        ensure(
            satisfies(&model, &cand(name), &m).unwrap(),
            format!("reference {name} matrix violates a constraint"),
        )?;
    }
    let op = |i: usize| SymmetryOperator {
        candidate: ops[i].1.candidate.clone(),
        tau: ops[i].1.invertible_representative.clone().unwrap(),
    };
    let ptc = compose(&op(0), &compose(&op(1), &op(3)));
    ensure(
        satisfies(&model, &cand("PTC"), &ptc.tau).unwrap() && ptc.tau.is_invertible(),
        "composed P∘Tp∘C does not solve the PTC system",
    )?;
    Ok("Tp, Tw, C exist; reference matrices verify; P∘Tp∘C certifies PTC".into())
}

fn planar() -> Outcome {
    let single = model_for(2, Variant::Single, &q(1)).unwrap();
    for (name, want) in [("Tp", false), ("Tw", false), ("C", true)] {
        let s = solve_tau(&single, &cand(name)).unwrap();
        ensure(s.exists == want, format!("single {name} exists = {}", s.exists))?;
    }
    let doubled = model_for(2, Variant::Doubled, &q(1)).unwrap();
    for (name, m) in reference_doubled_matrices(2) {
        ensure(
            satisfies(&doubled, &cand(name), &m).unwrap(),
            format!("doubled reference {name} matrix violates a constraint"),
        )?;
    }
    let massless = model_for(2, Variant::Massless, &q(0)).unwrap();
    for (name, m) in [("Tp", ExactMatrix::pauli(3)), ("Tw", ExactMatrix::pauli(2))] {
        let s = solve_tau(&massless, &cand(name)).unwrap();
        ensure(
            s.dim == 1 && s.representative.as_ref().unwrap().projectively_equal(&m),
            format!("massless {name} representative differs"),
        )?;
    }
    Ok("single C only; doubled matrices verify; massless Tp ∝ σ3, Tw ∝ σ2".into())
}

fn sweep() -> Outcome {
    let start = Instant::now();
    let recs = classify(&[2, 4, 6, 8], &Variant::ALL, &ClassifyOptions::default()).unwrap();
    let t = start.elapsed();
    let row = |d: usize, v: Variant| {
        recs.iter()
            .find(|r| r.d == d && r.variant == v)
            .unwrap()
            .verdicts()
    };
    for v in [Variant::Single, Variant::SingleMinus] {
        ensure(row(6, v) == row(2, v), format!("{v}: d=6 row differs from d=2"))?;
        ensure(row(8, v) == row(4, v), format!("{v}: d=8 row differs from d=4"))?;
    }
    ensure(
        recs.iter().flat_map(|r| &r.cells).all(|c| c.composition_verified != Some(false)),
        "a composite cell disagrees with its factors",
    )?;
    let mut input = InputSpec::new(Command::Classify);
    input.dims = vec![8];
    let cert = run(&input).unwrap();
    ensure(
        cert.flags.iter().any(|f| f.id == "d8-tw-contradiction"),
        "d=8 contradiction not flagged",
    )?;
    ensure(cert.all_checks_pass(), "d=8 reference checks fail")?;
    ensure(t < SWEEP_BUDGET, format!("took {t:?}"))?;
    let tw8 = row(8, Variant::Single)["Tw"];
    Ok(format!(
        "period 4 holds, d=8 Tw = {} (flagged), {t:.2?}",
        if tw8 { "yes" } else { "no" }
    ))
}

fn spectra() -> Outcome {
    for d in [2, 4, 6, 8] {
        for v in Variant::ALL {
            let model = model_for(d, v, &q(2)).unwrap();
            for p in random_rational_momenta(SEED, RANDOM_MOMENTA, d) {
                ensure(
                    dispersion_check(&model, &p).unwrap().holds(),
                    format!("d={d} {v}: H² ≠ ω²"),
                )?;
            }
        }
    }
    let m = model_for(4, Variant::Single, &q(3)).unwrap();
    let spot = dispersion_check(&m, &[q(0), q(0), q(0), q(4)]).unwrap();
    ensure(spot.omega_sq == q(25), format!("M² = {}", spot.omega_sq))?;
    let half = BigRational::new(1.into(), 2.into());
    let z = q(0);
    let expect = [
        (Variant::Single, vec![(1, half.clone(), z.clone()), (-1, z.clone(), half.clone())]),
        (Variant::SingleMinus, vec![(1, z.clone(), half.clone()), (-1, half.clone(), z.clone())]),
        (
            Variant::Doubled,
            vec![
                (1, half.clone(), z.clone()),
                (1, z.clone(), half.clone()),
                (-1, half.clone(), z.clone()),
                (-1, z.clone(), half.clone()),
            ],
        ),
    ];
    for (v, want) in expect {
        let model = model_for(4, v, &q(1)).unwrap();
        let labels = little_group_labels(&model).unwrap();
        let mut got: Vec<_> = labels
            .iter()
            .map(|l| (l.energy_sign, l.j1.clone(), l.j2.clone()))
            .collect();
        let mut want = want;
        got.sort();
        want.sort();
        ensure(got == want, format!("{v} labels {got:?}"))?;
        let total: usize = labels.iter().map(|l| l.multiplicity * l.block_dim()).sum();
        ensure(total == model.rep_dim(), format!("{v} multiplicities sum to {total}"))?;
    }
    Ok(format!("{RANDOM_MOMENTA} momenta × 16 models exact; M² = 25; labels match"))
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn fibers() -> Outcome {
    let m0 = q(2);
    let p3 = [q(1), BigRational::new((-3).into(), 4.into()), q(5)];
    let fiber = sqrt_dirac_fiber(&m0, &p3).unwrap();
    ensure(fiber.proof.holds(), "fiber H² ≠ (p² + m²)·I")?;
    let usual = model_for(4, Variant::Single, &m0).unwrap();
    let p4 = [p3[0].clone(), p3[1].clone(), p3[2].clone(), q(0)];
    ensure(
        usual.hamiltonian_at(&p4).unwrap() == fiber.h,
        "fiber differs from the fixed-mass Dirac Hamiltonian",
    )?;
    let m0_sq = &m0 * &m0;
    let prof = MassProfile::delta(m0_sq.clone()).unwrap();
    let mut spinor = vec![ExactScalar::zero(); 4];
    spinor[1] = ExactScalar::one();
    let st = FiberState::new(p3.to_vec(), m0_sq.clone(), spinor).unwrap();
    let act = profile_apply_p2(&prof, std::slice::from_ref(&st)).unwrap();
    ensure(act.expectation == m0_sq, "delta expectation ≠ m0²")?;

    let model = model_for(4, Variant::Single, &q(1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let p: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let v = DVector::from_fn(4, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let w = DVector::from_fn(4, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let v = &v / Complex64::new(v.norm(), 0.0);
        let w = &w / Complex64::new(w.norm(), 0.0);
        let rho = (&v * v.adjoint()) * Complex64::new(0.6, 0.0) + (&w * w.adjoint()) * Complex64::new(0.4, 0.0);
        let rho0 = DensityState::new(p, rho).unwrap();
        let spec0 = rho0.spectrum();
        for step in 0..=20 {
            let t = step as f64 * 0.5;
            let r = density_evolve(&model, &rho0, t, 8).unwrap();
            let tr_err = (r.trace() - Complex64::new(1.0, 0.0)).norm();
            let spec_err = r
                .spectrum()
                .iter()
                .zip(&spec0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let err = tr_err.max(r.hermiticity_error()).max(spec_err);
            worst = worst.max(err);
            ensure(err < DENSITY_TOL, format!("t={t}: invariant error {err:e}"))?;
        }
        let (t1, t2) = (3.7, 6.3);
        let direct = density_evolve(&model, &rho0, t1 + t2, 10).unwrap();
        let split = density_evolve(&model, &density_evolve(&model, &rho0, t1, 4).unwrap(), t2, 6).unwrap();
        let err = max_diff(&direct.rho, &split.rho);
        ensure(err < COMPOSITION_TOL, format!("composition error {err:e}"))?;
    }
    Ok(format!("fiber exact; delta reduces; worst invariant error {worst:.1e}"))
}

fn self_audit() -> Outcome {
    let mut redundancy = Vec::new();
    let mut adequacy = Vec::new();
    for d in [2, 4, 6, 8] {
        for v in Variant::ALL {
            let model = model_for(d, v, &q(1)).unwrap();
            for name in CLASSIFICATION_COLUMNS {
                let c = cand(name);
                let full = solve_tau(&model, &c).unwrap();
                let reduced =
                    solve_tau_with(&model, &c, &SolveOptions::translations_only()).unwrap();
                if full.basis != reduced.basis {
                    redundancy.push(format!("d={d} {v} {name}"));
                }
                if v != Variant::Doubled {
                    let restricted =
                        solve_tau_with(&model, &c, &SolveOptions::with_ansatz(Ansatz::Clifford2))
                            .unwrap();
                    if restricted.exists != full.exists {
                        adequacy.push(format!("d={d} {v} {name}"));
                    }
                }
            }
        }
    }
    ensure(
        redundancy.is_empty(),
        format!("J rows change the solution for {}", redundancy.join(", ")),
    )?;
    ensure(
        adequacy.is_empty(),
        format!(
            "J redundancy holds; degree-≤2 ansatz loses {} verdicts: {}",
            adequacy.len(),
            adequacy.join(", ")
        ),
    )?;
    Ok("J redundancy and ansatz adequacy hold for d ≤ 8".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("gamma relations d=2..10", gamma_relations),
        ("P(1,4) single massive intertwiners", single_d4),
        ("P(1,4) massless intertwiners", massless_d4),
        ("P(1,4) doubled model", doubled_d4),
        ("P(1,2) variants", planar),
        ("classification sweep d=2..8", sweep),
        ("dispersion, mass formula, rest-frame labels", spectra),
        ("mass fibers and density evolution", fibers),
        ("solver self-audit", self_audit),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
