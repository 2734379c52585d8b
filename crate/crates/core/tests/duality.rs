use multispin::{
    compute_cj, compute_fj_curve, random_state_min_scan, CurveBank, ScanObjective, SpinMagnitude, UnitConvention,
};

fn spin(twice: u32) -> SpinMagnitude {
    SpinMagnitude::from_twice(twice).unwrap()
}

#[test]
fn curves_are_nested() {
    let bank = CurveBank::build(spin(8), 1001).unwrap();
    for twice in 1..8 {
        let (lo, hi) = (bank.get(spin(twice)).unwrap(), bank.get(spin(twice + 1)).unwrap());
        // Sample points of the larger spin sit on its curve; the chord of the
        // smaller spin sits on or above its own.
        for &(x, y) in &hi.samples {
            assert!(y <= lo.lookup(x).unwrap() + 1e-9, "2j={twice} x={x}");
        }
    }
}

#[test]
fn random_states_never_undercut_bounds() {
    for twice in 1..=4 {
        let j = spin(twice);
        let cj = compute_cj(j, UnitConvention::Standard).unwrap().value;
        let scan = random_state_min_scan(j, ScanObjective::SumVarXY, 20_000, 5).unwrap();
        let min = scan.minimum.unwrap();
        assert!(min >= cj - 1e-9 && min - cj <= 1e-3, "2j={twice}: {min} vs {cj}");

        let curve = compute_fj_curve(j, 1001).unwrap();
        let scan = random_state_min_scan(j, ScanObjective::VarZatMeanX, 20_000, 6).unwrap();
        for &(x, y) in &scan.points {
            assert!(y >= curve.lower_bound(x.min(1.0)).unwrap() - 1e-9, "2j={twice} x={x} y={y}");
        }
        assert!(scan.max_var_y <= j.j() * j.j() + 1e-12);
    }
}
