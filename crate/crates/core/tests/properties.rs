use multispin::linalg::inner;
use multispin::{
    bec_ground_state, cfrd_lhs, cfrd_lhs_correlated, cfrd_rhs, cfrd_rhs_correlated, chsh_value, compute_cj,
    correlated_state, embed_at_site, ghz_mabk_moment, ghz_state, hermitian_eigensolve, mabk_moment,
    schwinger_moments, singlet_state, BecParams, CorrelatedStateSpec, HybridPartition, Matrix, MeasurementSettings,
    PureState, Sign, SpinMagnitude, SpinOperators, UnitConvention, C64,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, SQRT_2};

fn spin(twice: u32) -> SpinMagnitude {
    SpinMagnitude::from_twice(twice).unwrap()
}

fn sign(b: bool) -> Sign {
    if b {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn settings(angles: Vec<f64>, signs: Vec<bool>) -> MeasurementSettings {
    MeasurementSettings::new(angles, signs.into_iter().map(sign).collect()).unwrap()
}

#[test]
fn spin_algebra_up_to_four() {
    for twice in 1..=8 {
        let j = spin(twice);
        let o = SpinOperators::new(j, UnitConvention::Standard).unwrap();
        let comm = o.jx.commutator(&o.jy);
        assert!(comm.max_abs_diff(&o.jz.scale(C64::new(0.0, 1.0))) < 1e-12, "2j={twice}");
        let casimir = &(&o.jx.matmul(&o.jx) + &o.jy.matmul(&o.jy)) + &o.jz.matmul(&o.jz);
        assert!(casimir.max_abs_diff(&Matrix::identity(j.dim()).scale_real(j.casimir())) < 1e-12);
        let raising = o.rotated_ladder(0.0, Sign::Plus);
        for k in 1..j.dim() {
            assert!((raising.get(k - 1, k).re - j.ladder(j.m_of(k))).abs() < 1e-12);
        }
    }
}

#[test]
fn pauli_is_twice_standard() {
    let s = SpinOperators::new(SpinMagnitude::HALF, UnitConvention::Standard).unwrap();
    let p = SpinOperators::new(SpinMagnitude::HALF, UnitConvention::Pauli).unwrap();
    assert!(p.jx.max_abs_diff(&s.jx.scale_real(2.0)) < 1e-15);
    assert!(p.jz.max_abs_diff(&Matrix::from_diag(&[1.0, -1.0])) < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn variances_respect_cj(twice in 1u32..=6, seed in any::<u64>()) {
        let j = spin(twice);
        let o = SpinOperators::new(j, UnitConvention::Standard).unwrap();
        let psi = PureState::random(vec![j.dim()], &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let var = |m: &Matrix| psi.variance(&embed_at_site(m, 0, &[j.dim()]).unwrap()).unwrap();
        let (vx, vy, vz) = (var(&o.jx), var(&o.jy), var(&o.jz));
        prop_assert!(vx >= 0.0 && vy >= 0.0 && vz >= 0.0);
        prop_assert!(vx + vy >= compute_cj(j, UnitConvention::Standard).unwrap().value - 1e-9);
        prop_assert!(vy <= j.j() * j.j() + 1e-12);
    }

    #[test]
    fn eigensolve_reconstructs(d in 1usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = PureState::random(vec![d * d], &mut rng).unwrap();
        let a = g.amplitudes();
        let h = Matrix::from_fn(d, |r, c| a[r * d + c] + a[c * d + r].conj());
        let eig = hermitian_eigensolve(&h).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        for k in 0..d {
            let v = eig.vector(k);
            let hv = h.mat_vec(&v);
            let resid: f64 = hv.iter().zip(&v).map(|(x, y)| (x - y * eig.values[k]).norm()).fold(0.0, f64::max);
            prop_assert!(resid < 1e-10);
            for l in 0..d {
                let expect = if k == l { 1.0 } else { 0.0 };
                prop_assert!((inner(&eig.vector(l), &v) - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn ghz_closed_form_matches_tensor(
        n in 2usize..=6,
        angles in prop::collection::vec(-PI..PI, 6),
        signs in prop::collection::vec(any::<bool>(), 6),
    ) {
        let s = settings(angles[..n].to_vec(), signs[..n].to_vec());
        let tensor = mabk_moment(&ghz_state(n).unwrap(), &s).unwrap();
        let closed = ghz_mabk_moment(n, &s).unwrap();
        prop_assert!((tensor - closed).norm() < 1e-10);
    }

    #[test]
    fn random_states_stay_below_quantum_maxima(n in 2usize..=5, seed in any::<u64>(), theta in -PI..PI) {
        let psi = PureState::random(vec![2; n], &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let z = mabk_moment(&psi, &MeasurementSettings::uniform(n, theta, Sign::Plus)).unwrap();
        let cap = 2f64.powi(n as i32 - 1);
        prop_assert!(z.re <= cap + 1e-9);
        prop_assert!(z.re + z.im <= cap * SQRT_2 + 1e-9);
    }

    #[test]
    fn cfrd_closed_form_matches_tensor(
        n in 2usize..=4,
        twice in 1u32..=3,
        r in prop::collection::vec(0.05f64..1.0, 4),
        t_frac in 0.0f64..=1.0,
        angles in prop::collection::vec(-PI..PI, 4),
        signs in prop::collection::vec(any::<bool>(), 4),
    ) {
        let j = spin(twice);
        let spec = CorrelatedStateSpec::new(n, j, r[..j.dim()].to_vec()).unwrap();
        let psi = correlated_state(&spec).unwrap();
        let s = settings(angles[..n].to_vec(), signs[..n].to_vec());
        let t = (t_frac * n as f64).round() as usize;
        let part = HybridPartition::new(n, t).unwrap();
        let cj = compute_cj(j, UnitConvention::Standard).unwrap();
        let (l1, l2) = (cfrd_lhs(&psi, &s).unwrap(), cfrd_lhs_correlated(&spec, &s).unwrap());
        let (r1, r2) = (cfrd_rhs(&psi, part, &cj).unwrap(), cfrd_rhs_correlated(&spec, part, &cj).unwrap());
        prop_assert!((l1 - l2).abs() <= 1e-9 * l1.abs().max(1.0));
        prop_assert!((r1 - r2).abs() <= 1e-9 * r1.abs().max(1.0));
    }

    #[test]
    fn bec_ground_state_is_symmetric(n in 1usize..=60, g in 0.0f64..300.0) {
        let s = bec_ground_state(&BecParams::from_ratio(n, g).unwrap());
        let m = schwinger_moments(&s);
        let j = n as f64 / 2.0;
        prop_assert!((m.mean_j_sq - j * (j + 1.0)).abs() < 1e-8 * j.max(1.0).powi(2));
        let a = s.amplitudes();
        for k in 0..=n {
            prop_assert!((a[k].norm() - a[n - k].norm()).abs() < 1e-8);
        }
        prop_assert!(m.mean_z.abs() < 1e-8);
    }

    #[test]
    fn chsh_respects_tsirelson(angles in prop::collection::vec(-PI..PI, 4), seed in any::<u64>()) {
        let b = chsh_value(&singlet_state(), angles[0], angles[1], angles[2], angles[3]).unwrap();
        prop_assert!(b.abs() <= 2.0 * SQRT_2 + 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = PureState::random(vec![2], &mut rng).unwrap();
        let c = PureState::random(vec![2], &mut rng).unwrap();
        let prod = PureState::product(&[a.amplitudes().to_vec(), c.amplitudes().to_vec()]).unwrap();
        let b = chsh_value(&prod, angles[0], angles[1], angles[2], angles[3]).unwrap();
        prop_assert!(b.abs() <= 2.0 + 1e-12);
    }
}
