//! The eleven acceptance criteria, each at its stated tolerance and time
//! budget. Prints one line per criterion and fails if any does not pass.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::process::Command;
use std::time::{Duration, Instant};

use multispin::oracle::hybrid_analytic_bound;
use multispin::{
    bec_ground_state, chsh_value, compute_cj, compute_fj_curve, corner_max, depth_of_entanglement, epr_paradox_test,
    genuine_result, ghz_mabk_moment, hybrid_max, inference_variances, mabk_result, mabk_threshold,
    optimize_amplitudes, optimize_mabk_settings, random_state_min_scan, schwinger_moments, singlet_state,
    svetlichny_max, xi_parameter, Axis, BecParams, CollectiveMoments, CurveBank, GenuineKind, HybridPartition,
    LocalObservable, MabkForm, Objective, PureState, ScanObjective, SpinMagnitude, SpinOperators, UnitConvention,
    C64,
};
use multispin_cli::commands::g_grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

fn spin(twice: u32) -> SpinMagnitude {
    SpinMagnitude::from_twice(twice).unwrap()
}

fn ghz_optimum(n: usize, form: MabkForm) -> C64 {
    let (s, _) = optimize_mabk_settings(n, form, |s| ghz_mabk_moment(n, s)).unwrap();
    ghz_mabk_moment(n, &s).unwrap()
}

fn c1_chsh() -> Outcome {
    let b = chsh_value(&singlet_state(), 0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4).map_err(|e| e.to_string())?;
    ensure((b - 2.0 * SQRT_2).abs() <= 1e-10, || format!("B = {b}"))
}

fn c2_mabk_maxima() -> Outcome {
    for n in 2..=10usize {
        let re = ghz_optimum(n, MabkForm::Single).re;
        let z = ghz_optimum(n, MabkForm::Sum);
        let sum = z.re + z.im;
        let top = 2f64.powi(n as i32 - 1);
        ensure(close_rel(re, top, 1e-8), || format!("n={n}: Re Π = {re}"))?;
        ensure(close_rel(sum, top * SQRT_2, 1e-8), || format!("n={n}: Re Π + Im Π = {sum}"))?;
        let form = MabkForm::bell_form(n);
        let value = form.apply(ghz_optimum(n, form));
        let ratio = value / mabk_threshold(n, 0, form).unwrap();
        let law = 2f64.powf((n as f64 - 1.0) / 2.0);
        ensure(close_rel(ratio, law, 1e-8), || format!("n={n}: Bell ratio {ratio}"))?;
    }
    Ok(())
}

fn c3_oracle() -> Outcome {
    for n in 2..=8usize {
        for objective in [Objective::Re, Objective::RePlusIm] {
            let extra = if objective == Objective::Re { 0.0 } else { 1.0 };
            for t in 0..=n {
                let r = if t == 0 { corner_max(n, objective) } else { hybrid_max(n, t, objective) }
                    .map_err(|e| e.to_string())?;
                let bound = if t == 0 {
                    hybrid_analytic_bound(n, 0, objective).unwrap()
                } else {
                    2f64.powf((n - t) as f64 / 2.0 + extra / 2.0)
                };
                ensure((r.max_value - bound).abs() <= 1e-9, || {
                    format!("{} n={n} t={t}: oracle {} vs {bound}", r.inequality_id, r.max_value)
                })?;
                if t == 0 {
                    if let Ok(b) = mabk_threshold(n, 0, objective.form()) {
                        ensure((r.max_value - b).abs() <= 1e-9, || format!("n={n}: MABK corner {}", r.max_value))?;
                    }
                }
            }
        }
        let s = svetlichny_max(n).map_err(|e| e.to_string())?;
        let bound = 2f64.powi(n as i32 - 1);
        ensure((s.max_value - bound).abs() <= 1e-9, || format!("Svetlichny n={n}: {}", s.max_value))?;
    }
    Ok(())
}

fn c4_hybrid_ratio() -> Outcome {
    for n in 2..=10usize {
        for form in [MabkForm::Single, MabkForm::Sum] {
            let z = ghz_optimum(n, form);
            for t in [1, n] {
                let r = mabk_result(z, HybridPartition::new(n, t).unwrap(), form).map_err(|e| e.to_string())?;
                let law = 2f64.powf((n + t) as f64 / 2.0 - 1.0);
                ensure(close_rel(r.ratio, law, 1e-8), || format!("n={n} t={t} {form:?}: {}", r.ratio))?;
            }
        }
    }
    Ok(())
}

fn c5_genuine() -> Outcome {
    for n in 3..=10usize {
        let sum = genuine_result(ghz_optimum(n, MabkForm::Sum), n, GenuineKind::SvetlichnySum).unwrap().ratio;
        let single =
            genuine_result(ghz_optimum(n, MabkForm::Single), n, GenuineKind::GenuineEntSingle).unwrap().ratio;
        ensure((sum - SQRT_2).abs() <= 1e-9, || format!("n={n}: Svetlichny ratio {sum}"))?;
        ensure((single - 2.0).abs() <= 1e-9, || format!("n={n}: genuine entanglement ratio {single}"))?;
    }
    Ok(())
}

fn c6_bounds() -> Outcome {
    let pauli = compute_cj(SpinMagnitude::HALF, UnitConvention::Pauli).unwrap().value;
    let standard = compute_cj(SpinMagnitude::HALF, UnitConvention::Standard).unwrap().value;
    ensure((pauli - 1.0).abs() <= 1e-10 && (standard - 0.25).abs() <= 1e-10, || format!("C_1/2 = {pauli}, {standard}"))?;

    let half = compute_fj_curve(SpinMagnitude::HALF, 1001).unwrap();
    for k in 0..=1000 {
        let x = k as f64 / 1000.0;
        let f = half.lookup(x).unwrap();
        ensure((f - x * x / 2.0).abs() <= 1e-8, || format!("F_1/2({x}) = {f}"))?;
    }

    let bank = CurveBank::build(spin(8), 1001).unwrap();
    for twice in 1..8 {
        let (lo, hi) = (bank.get(spin(twice)).unwrap(), bank.get(spin(twice + 1)).unwrap());
        for &(x, y) in &hi.samples {
            let f = lo.lookup(x).unwrap();
            ensure(y <= f + 1e-9, || format!("nesting 2j={twice} at x={x}: {y} > {f}"))?;
        }
    }

    for twice in 1..=4 {
        let j = spin(twice);
        let cj = compute_cj(j, UnitConvention::Standard).unwrap().value;
        let scan = random_state_min_scan(j, ScanObjective::SumVarXY, 100_000, multispin::oracle::DEFAULT_SEED).unwrap();
        let min = scan.minimum.unwrap();
        ensure(min >= cj - 1e-9 && min - cj <= 1e-3, || format!("C_{j}: random {min} vs {cj}"))?;
        let curve = bank.get(j).unwrap();
        let scan =
            random_state_min_scan(j, ScanObjective::VarZatMeanX, 100_000, multispin::oracle::DEFAULT_SEED).unwrap();
        for &(x, y) in &scan.points {
            let f = curve.lower_bound(x.min(1.0)).unwrap();
            ensure(y >= f - 1e-9, || format!("F_{j}: random point ({x}, {y}) under {f}"))?;
        }
    }
    Ok(())
}

fn c7_fig2() -> Outcome {
    for twice in [1u32, 2] {
        let j = spin(twice);
        let ratio = |n: usize, t: usize| optimize_amplitudes(n, j, HybridPartition::new(n, t).unwrap()).unwrap().result.ratio;
        for (label, pick) in [("T=N", 0usize), ("T=1", 1)] {
            let series: Vec<f64> = (2..=20).map(|n| ratio(n, if pick == 0 { n } else { 1 })).collect();
            ensure(series.windows(2).all(|w| w[1] > w[0]), || format!("j={j} {label} not increasing: {series:?}"))?;
        }
        for (label, t_of) in [("bell", 0usize), ("steer", 1), ("ent", usize::MAX)] {
            let any = (2..=20).any(|n| ratio(n, t_of.min(n)) > 1.0);
            ensure(any, || format!("j={j} {label}: ratio never exceeds 1"))?;
        }
        if twice == 1 {
            for n in 2..=20usize {
                let mabk_law = 2f64.powf((2 * n) as f64 / 2.0 - 1.0);
                let r = ratio(n, n);
                ensure(close_rel(r, mabk_law * mabk_law, 1e-8), || format!("n={n}: {r} vs {}", mabk_law * mabk_law))?;
            }
        }
    }
    Ok(())
}

fn c8_fig4() -> Outcome {
    let n = 100;
    let mut prev: Option<(f64, f64)> = None;
    for (k, g) in g_grid(200.0, 60).into_iter().enumerate() {
        let m = schwinger_moments(&bec_ground_state(&BecParams::from_ratio(n, g).unwrap()));
        let xi = xi_parameter(&m, Axis::Z, Axis::X).map_err(|e| e.to_string())?;
        if k == 0 {
            ensure((xi - 1.0).abs() <= 1e-8, || format!("ξ(0) = {xi}"))?;
        } else {
            ensure(xi < 1.0, || format!("ξ({g}) = {xi}"))?;
        }
        ensure(xi >= 0.1, || format!("ξ({g}) = {xi} below 1/√N"))?;
        let (vz, vx) = (m.var_z / m.j_tot, m.var_x / m.j_tot);
        if let Some((pz, px)) = prev {
            ensure(vz <= pz + 1e-12 && vx >= px - 1e-12, || format!("monotonicity breaks at g={g}"))?;
        }
        prev = Some((vz, vx));
    }
    Ok(())
}

fn product_of(blocks: &[PureState]) -> PureState {
    let mut amps = vec![C64::new(1.0, 0.0)];
    let mut dims = Vec::new();
    for b in blocks {
        amps = amps.iter().flat_map(|&a| b.amplitudes().iter().map(move |&x| a * x)).collect();
        dims.extend_from_slice(b.site_dims());
    }
    PureState::new(amps, dims).unwrap()
}

fn c9_depth() -> Outcome {
    let mut bank = CurveBank::build(spin(8), 201).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..1000 {
        let n = rng.random_range(1..=8);
        let sites: Vec<PureState> = (0..n).map(|_| PureState::random(vec![2], &mut rng).unwrap()).collect();
        let m = CollectiveMoments::from_state(&product_of(&sites)).unwrap();
        let d = depth_of_entanglement(&m, &bank).unwrap();
        ensure(d.n0 == 1, || format!("product state {i} (N={n}) certified n0 = {}", d.n0))?;
    }
    for i in 0..1000 {
        let pairs = rng.random_range(1..=4);
        let blocks: Vec<PureState> = (0..pairs).map(|_| PureState::random(vec![2, 2], &mut rng).unwrap()).collect();
        let m = CollectiveMoments::from_state(&product_of(&blocks)).unwrap();
        let d = depth_of_entanglement(&m, &bank).unwrap();
        ensure(d.n0 <= 2, || format!("pair product {i} certified n0 = {}", d.n0))?;
    }
    bank.extend_to(spin(100), 201).unwrap();
    for g in [50.0, 100.0, 200.0] {
        let m = schwinger_moments(&bec_ground_state(&BecParams::from_ratio(100, g).unwrap()));
        let d = depth_of_entanglement(&m, &bank).unwrap();
        ensure(d.n0 > 2, || format!("BEC Ng/κ={g}: n0 = {}", d.n0))?;
    }
    Ok(())
}

fn c10_epr() -> Outcome {
    let ops = SpinOperators::new(SpinMagnitude::HALF, UnitConvention::Pauli).unwrap();
    let psi = singlet_state();
    for (a, b) in [(&ops.jx, &ops.jx), (&ops.jy, &ops.jy), (&ops.jz, &ops.jz)] {
        let x = LocalObservable::single(0, a.clone());
        let o = LocalObservable::single(1, b.clone());
        let iv = inference_variances(&psi, &x, &x, &o, &o).unwrap();
        ensure(iv.v_x_given_b.abs() <= 1e-12 && iv.v_p_given_b.abs() <= 1e-12, || format!("singlet {iv:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let axes = [&ops.jx, &ops.jy, &ops.jz];
    for i in 0..1000 {
        let a = PureState::random(vec![2], &mut rng).unwrap();
        let b = PureState::random(vec![2], &mut rng).unwrap();
        let psi = product_of(&[a.clone(), b]);
        // Δσx Δσy ≥ |⟨σz⟩| bounds the product of A's variances.
        let mz = a.local_product_expectation(&[(0, &ops.jz)]).unwrap().re;
        let bound = mz * mz;
        if bound < 1e-12 {
            continue;
        }
        let b1 = LocalObservable::single(1, axes[rng.random_range(0..3)].clone());
        let b2 = LocalObservable::single(1, axes[rng.random_range(0..3)].clone());
        let iv = inference_variances(
            &psi,
            &LocalObservable::single(0, ops.jx.clone()),
            &LocalObservable::single(0, ops.jy.clone()),
            &b1,
            &b2,
        )
        .unwrap();
        let r = epr_paradox_test(&iv, bound).unwrap();
        ensure(!r.violated(), || format!("product state {i} passed: {r:?}"))?;
    }
    Ok(())
}

fn run_twice(args: &[&str]) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.out"));
        let status = Command::new(env!("CARGO_BIN_EXE_multispin"))
            .args(args)
            .arg("--out")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("{args:?} exited with {status}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || format!("{args:?}: outputs differ"))
}

fn c11_determinism() -> Outcome {
    run_twice(&["verify", "--seed", "7"])?;
    run_twice(&["verify", "--seed", "7", "--format", "json"])?;
    run_twice(&["fig2", "--j", "1", "--n", "10"])?;
    run_twice(&["fig4", "--format", "json"])?;
    run_twice(&["fig6", "--n", "10,100", "--grid", "12"])
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("CHSH/Tsirelson", Duration::from_secs(1), c1_chsh),
        ("MABK maxima", Duration::from_secs(5), c2_mabk_maxima),
        ("oracle agreement", Duration::from_secs(60), c3_oracle),
        ("hybrid ratio law", Duration::MAX, c4_hybrid_ratio),
        ("genuine thresholds", Duration::MAX, c5_genuine),
        ("C_J and F_J", Duration::from_secs(120), c6_bounds),
        ("figure 2", Duration::MAX, c7_fig2),
        ("figure 4", Duration::from_secs(10), c8_fig4),
        ("SM depth soundness", Duration::from_secs(120), c9_depth),
        ("EPR inference", Duration::MAX, c10_epr),
        ("determinism", Duration::MAX, c11_determinism),
    ];
    let mut failures = 0;
    for (k, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= budget, || format!("took {elapsed:.2?}, budget {budget:.0?}"))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", k + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {msg}", k + 1);
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
