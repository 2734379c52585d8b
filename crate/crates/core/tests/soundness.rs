use multispin::{
    depth_of_entanglement, ghz_mabk_moment, mabk_moment, mabk_result, pairwise_entanglement_test, Axis,
    CollectiveMoments, CurveBank, HybridPartition, MabkForm, MeasurementSettings, PureState, Sign, SpinMagnitude,
    Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bank() -> CurveBank {
    CurveBank::build(SpinMagnitude::from_twice(8).unwrap(), 401).unwrap()
}

fn block_product(blocks: &[PureState]) -> PureState {
    let mut amps = vec![multispin::C64::new(1.0, 0.0)];
    let mut dims = Vec::new();
    for b in blocks {
        amps = amps.iter().flat_map(|&a| b.amplitudes().iter().map(move |&x| a * x)).collect();
        dims.extend_from_slice(b.site_dims());
    }
    PureState::new(amps, dims).unwrap()
}

#[test]
fn product_states_never_certify_depth_or_squeezing() {
    let bank = bank();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let sites: Vec<PureState> = (0..n).map(|_| PureState::random(vec![2], &mut rng).unwrap()).collect();
        let psi = block_product(&sites);
        let m = CollectiveMoments::from_state(&psi).unwrap();
        assert_eq!(depth_of_entanglement(&m, &bank).unwrap().n0, 1);
        if m.mean_x.abs() > 1e-3 {
            assert!(!pairwise_entanglement_test(&m, Axis::Z, Axis::X).violated());
        }
    }
}

#[test]
fn pair_blocks_never_certify_more_than_two() {
    let bank = bank();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut saw_two = false;
    for _ in 0..300 {
        let pairs = rng.random_range(1..=4);
        let blocks: Vec<PureState> = (0..pairs).map(|_| PureState::random(vec![2, 2], &mut rng).unwrap()).collect();
        let m = CollectiveMoments::from_state(&block_product(&blocks)).unwrap();
        let n0 = depth_of_entanglement(&m, &bank).unwrap().n0;
        assert!(n0 <= 2, "n0 = {n0}");
        saw_two |= n0 == 2;
    }
    assert!(saw_two, "entangled pairs should sometimes show n0 = 2");
}

#[test]
fn product_states_stay_inside_entanglement_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.random_range(2..=6);
        let sites: Vec<PureState> = (0..n).map(|_| PureState::random(vec![2], &mut rng).unwrap()).collect();
        let psi = block_product(&sites);
        let theta = rng.random_range(-3.0..3.0);
        let z = mabk_moment(&psi, &MeasurementSettings::uniform(n, theta, Sign::Plus)).unwrap();
        for form in [MabkForm::Single, MabkForm::Sum] {
            let r = mabk_result(z, HybridPartition::new(n, n).unwrap(), form).unwrap();
            assert_eq!(r.verdict, Verdict::None);
        }
    }
}

#[test]
fn hybrid_ratio_law() {
    for n in 2..=10usize {
        let s = MeasurementSettings::uniform(n, 0.0, Sign::Plus);
        let z = ghz_mabk_moment(n, &s).unwrap();
        for t in 1..=n {
            let r = mabk_result(z, HybridPartition::new(n, t).unwrap(), MabkForm::Single).unwrap();
            let law = 2f64.powf((n + t) as f64 / 2.0 - 1.0);
            assert!((r.ratio - law).abs() <= 1e-8 * law, "n={n} t={t}");
        }
    }
}
