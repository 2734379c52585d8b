//! One function per subcommand, each producing a [`Report`].

use multispin::oracle::AGREEMENT_TOL;
use multispin::{
    bec_ground_state, chsh_local_max, compute_cj, compute_fj_curve, corner_max, depth_of_entanglement,
    genuine_entanglement_max, genuine_result, ghz_mabk_moment, hybrid_max, mabk_result, optimize_amplitudes,
    optimize_mabk_settings, random_state_min_scan, schwinger_moments, svetlichny_max, xi_parameter, Axis, BecParams,
    CurveBank, Error, GenuineKind, HybridPartition, MabkForm, Objective, OracleReport, ScanObjective, SpinMagnitude,
    UnitConvention,
};
use serde_json::{json, Map, Value};

use crate::args::{BoundsArgs, CfrdArgs, Fig2Args, Fig4Args, Fig6Args, MabkArgs, TMode, VerifyArgs};
use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    /// Parameters outside a subcommand's range.
    Usage(String),
    Compute(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Compute(e) => write!(f, "computation failed: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

/// Everything a subcommand emits.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub seed: Option<u64>,
    pub table: Table,
    /// Second table, e.g. the curves next to the `C_J` table.
    pub extra: Option<(&'static str, Table)>,
    /// Set when a verification row disagrees.
    pub failed: bool,
}

impl Report {
    fn new(command: &'static str, config: Value, table: Table) -> Self {
        let Value::Object(config) = config else { unreachable!("config is an object") };
        Self { command, config, seed: None, table, extra: None, failed: false }
    }
}

fn t_label(t: Option<TMode>) -> Value {
    t.map_or(Value::Null, |t| Value::from(t.label()))
}

/// Ng/κ grid: 0, then `grid − 1` geometric points from 0.01 to `g_max`.
pub fn g_grid(g_max: f64, grid: usize) -> Vec<f64> {
    const G_MIN: f64 = 0.01;
    let mut out = vec![0.0];
    let steps = grid - 1;
    for k in 0..steps {
        let f = if steps == 1 { 1.0 } else { k as f64 / (steps - 1) as f64 };
        out.push(G_MIN * (g_max / G_MIN).powf(f));
    }
    if let Some(last) = out.last_mut() {
        *last = g_max;
    }
    out
}

fn check_g(g_max: f64, grid: usize) -> CliResult<()> {
    check(g_max.is_finite() && g_max > 0.01, || format!("--g-max must be > 0.01, got {g_max}"))?;
    check(grid >= 2, || format!("--grid must be ≥ 2, got {grid}"))
}

pub fn fig2(a: &Fig2Args) -> CliResult<Report> {
    check(a.j.twice_j() <= 2, || format!("--j must be 1/2 or 1 for fig2, got {}", a.j))?;
    check((2..=20).contains(&a.n), || format!("--n must be in 2..=20 for fig2, got {}", a.n))?;
    let modes = a.t.map_or_else(|| vec![TMode::Bell, TMode::Steer, TMode::Ent], |t| vec![t]);
    let mut table = Table::new(["n", "t", "mode", "lhs", "rhs", "ratio", "verdict", "r_opt"]);
    for mode in modes {
        for n in 2..=a.n {
            let Some(t) = mode.resolve(n) else { continue };
            let opt = optimize_amplitudes(n, a.j, HybridPartition::new(n, t)?)?;
            let r = &opt.result;
            table.push(vec![
                n.into(),
                t.into(),
                mode.label().into(),
                r.lhs.into(),
                r.rhs.into(),
                r.ratio.into(),
                r.verdict.to_string().into(),
                Cell::Floats(opt.r.clone()),
            ]);
        }
    }
    let config = json!({ "j": a.j.to_string(), "n": a.n, "t": t_label(a.t) });
    Ok(Report::new("fig2", config, table))
}

pub fn fig4(a: &Fig4Args) -> CliResult<Report> {
    check((1..=5000).contains(&a.n), || format!("--n must be in 1..=5000 for fig4, got {}", a.n))?;
    check_g(a.g_max, a.grid)?;
    let mut table = Table::new(["ng_over_kappa", "var_z_over_j", "var_x_over_j", "xi"]);
    for g in g_grid(a.g_max, a.grid) {
        let m = schwinger_moments(&bec_ground_state(&BecParams::from_ratio(a.n, g)?));
        let xi = xi_parameter(&m, Axis::Z, Axis::X).unwrap_or(f64::NAN);
        table.push(vec![g.into(), (m.var_z / m.j_tot).into(), (m.var_x / m.j_tot).into(), xi.into()]);
    }
    let config = json!({ "n": a.n, "g_max": a.g_max, "grid": a.grid });
    Ok(Report::new("fig4", config, table))
}

pub fn fig6(a: &Fig6Args) -> CliResult<Report> {
    check(!a.n.is_empty(), || "--n needs at least one atom number".into())?;
    for &n in &a.n {
        check((1..=5000).contains(&n), || format!("--n entries must be in 1..=5000 for fig6, got {n}"))?;
    }
    check_g(a.g_max, a.grid)?;
    check(a.samples >= 2, || format!("--samples must be ≥ 2, got {}", a.samples))?;
    // Curves are built on demand: the depth search stops at the first bound
    // that holds, so large J0 are rarely needed.
    let mut bank = CurveBank::default();
    let mut table = Table::new(["n", "ng_over_kappa", "x", "y", "n0"]);
    for &n in &a.n {
        for g in g_grid(a.g_max, a.grid) {
            let m = schwinger_moments(&bec_ground_state(&BecParams::from_ratio(n, g)?));
            let cap = (2.0 * m.j_tot).floor() as u32;
            let depth = loop {
                let have = bank.j_max().map_or(0, |j| j.twice_j());
                let d = depth_of_entanglement(&m, &bank)?;
                let reached = d.violated_curves.last().map_or(0, |j| j.twice_j());
                if reached < have || have >= cap {
                    break d;
                }
                let next = (have.max(2) * 2).min(cap);
                bank.extend_to(SpinMagnitude::from_twice(next)?, a.samples)?;
            };
            table.push(vec![
                n.into(),
                g.into(),
                (m.mean_x.abs() / m.j_tot).into(),
                (m.var_z / m.j_tot).into(),
                depth.n0.into(),
            ]);
        }
    }
    let config = json!({ "n": a.n, "g_max": a.g_max, "grid": a.grid, "samples": a.samples });
    Ok(Report::new("fig6", config, table))
}

pub fn bounds(a: &BoundsArgs) -> CliResult<Report> {
    check(a.j.twice_j() <= 8, || format!("--j must be ≤ 4 for bounds, got {}", a.j))?;
    check(a.samples >= 2, || format!("--samples must be ≥ 2, got {}", a.samples))?;
    check(a.grid >= 2, || format!("--grid must be ≥ 2, got {}", a.grid))?;
    let mut cj = Table::new(["j", "convention", "c_j", "dual_gap", "multiplier"]);
    let mut curves = Vec::new();
    for tj in 1..=a.j.twice_j() {
        let j = SpinMagnitude::from_twice(tj)?;
        let mut conventions = vec![UnitConvention::Standard];
        if tj == 1 {
            conventions.push(UnitConvention::Pauli);
        }
        for conv in conventions {
            let v = compute_cj(j, conv)?;
            let name = match conv {
                UnitConvention::Standard => "standard",
                UnitConvention::Pauli => "pauli",
            };
            cj.push(vec![j.to_string().into(), name.into(), v.value.into(), v.dual_gap.into(), v.multiplier.into()]);
        }
        curves.push(compute_fj_curve(j, a.samples)?);
    }
    let mut columns = vec!["x".to_string()];
    columns.extend(curves.iter().map(|c| format!("f_{}", c.j)));
    let mut ft = Table::new(columns);
    for k in 0..a.grid {
        let x = k as f64 / (a.grid - 1) as f64;
        let mut row = vec![Cell::Float(x)];
        for c in &curves {
            row.push(c.lookup(x)?.into());
        }
        ft.push(row);
    }
    let config = json!({ "j": a.j.to_string(), "samples": a.samples, "grid": a.grid });
    let mut report = Report::new("bounds", config, cj);
    report.extra = Some(("curves", ft));
    Ok(report)
}

fn form_label(form: MabkForm) -> &'static str {
    match form {
        MabkForm::Single => "re",
        MabkForm::Sum => "re+im",
    }
}

pub fn mabk(a: &MabkArgs) -> CliResult<Report> {
    check((2..=20).contains(&a.n), || format!("--n must be in 2..=20 for mabk, got {}", a.n))?;
    let mut table =
        Table::new(["n", "t", "inequality_id", "form", "lhs", "rhs", "ratio", "verdict", "theta0", "delta"]);
    for n in 2..=a.n {
        for form in [MabkForm::Single, MabkForm::Sum] {
            let (settings, _) = optimize_mabk_settings(n, form, |s| ghz_mabk_moment(n, s))?;
            let moment = ghz_mabk_moment(n, &settings)?;
            let theta0 = settings.angles()[0];
            let delta = settings.angles()[1] - theta0;
            let mut push = |t: usize, r: multispin::CriterionResult| {
                table.push(vec![
                    n.into(),
                    t.into(),
                    r.inequality_id.clone().into(),
                    form_label(form).into(),
                    r.lhs.into(),
                    r.rhs.into(),
                    r.ratio.into(),
                    r.verdict.to_string().into(),
                    theta0.into(),
                    delta.into(),
                ]);
            };
            let ts: Vec<usize> = match a.t {
                Some(mode) => mode.resolve(n).into_iter().collect(),
                None => (0..=n).collect(),
            };
            for t in ts {
                match mabk_result(moment, HybridPartition::new(n, t)?, form) {
                    Ok(r) => push(t, r),
                    // No Bell bound for this form and parity.
                    Err(Error::InvalidForm { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            if a.t.is_none() && n >= 3 {
                let kinds: &[GenuineKind] = match form {
                    MabkForm::Single => &[GenuineKind::GenuineEntSingle],
                    MabkForm::Sum => &[GenuineKind::SvetlichnySum, GenuineKind::GenuineEntSum],
                };
                for &kind in kinds {
                    push(n, genuine_result(moment, n, kind)?);
                }
            }
        }
    }
    let config = json!({ "n": a.n, "t": t_label(a.t) });
    Ok(Report::new("mabk", config, table))
}

pub fn cfrd(a: &CfrdArgs) -> CliResult<Report> {
    check((2..=20).contains(&a.n), || format!("--n must be in 2..=20 for cfrd, got {}", a.n))?;
    check(a.j.twice_j() <= 8, || format!("--j must be ≤ 4 for cfrd, got {}", a.j))?;
    let ts: Vec<usize> = match a.t {
        Some(mode) => {
            let t = mode.resolve(a.n).ok_or_else(|| usage(format!("--t must be ≤ --n ({}), got {}", a.n, mode.label())))?;
            vec![t]
        }
        None => (0..=a.n).collect(),
    };
    let mut table = Table::new(["n", "t", "inequality_id", "lhs", "rhs", "ratio", "verdict", "r_opt"]);
    for t in ts {
        let opt = optimize_amplitudes(a.n, a.j, HybridPartition::new(a.n, t)?)?;
        let r = &opt.result;
        table.push(vec![
            a.n.into(),
            t.into(),
            r.inequality_id.clone().into(),
            r.lhs.into(),
            r.rhs.into(),
            r.ratio.into(),
            r.verdict.to_string().into(),
            Cell::Floats(opt.r.clone()),
        ]);
    }
    let config = json!({ "n": a.n, "j": a.j.to_string(), "t": t_label(a.t) });
    Ok(Report::new("cfrd", config, table))
}

fn objective_label(o: Objective) -> &'static str {
    match o {
        Objective::Re => "re",
        Objective::RePlusIm => "re+im",
    }
}

/// Largest spin in the random-state `C_J` check.
const VERIFY_CJ_TWICE_MAX: u32 = 4;
/// Allowed excess of the random-state minimum over `C_J`.
const DUALITY_GAP: f64 = 1e-3;

pub fn verify(a: &VerifyArgs) -> CliResult<Report> {
    check((2..=8).contains(&a.n), || format!("--n must be in 2..=8 for verify, got {}", a.n))?;
    check(a.samples >= 1, || "--samples must be ≥ 1".into())?;
    let mut reports: Vec<OracleReport> = Vec::new();
    for n in 2..=a.n {
        for objective in [Objective::Re, Objective::RePlusIm] {
            let ts: Vec<usize> = match a.t {
                Some(mode) => mode.resolve(n).into_iter().collect(),
                None => (0..=n).collect(),
            };
            for t in ts {
                reports.push(if t == 0 { corner_max(n, objective)? } else { hybrid_max(n, t, objective)? });
            }
            if a.t.is_none() {
                reports.push(genuine_entanglement_max(n, objective)?);
            }
        }
        if a.t.is_none() {
            reports.push(svetlichny_max(n)?);
        }
    }
    if a.t.is_none() {
        reports.push(chsh_local_max());
    }
    if a.corrupt_bound {
        if let Some(first) = reports.first_mut() {
            *first = first.clone().with_analytic_bound(first.analytic_bound * 1.5);
        }
    }

    let mut table = Table::new(["inequality_id", "objective", "n", "t", "oracle_max", "analytic_bound", "agrees"]);
    for r in &reports {
        table.push(vec![
            r.inequality_id.clone().into(),
            objective_label(r.objective).into(),
            r.n.into(),
            r.t.into(),
            r.max_value.into(),
            r.analytic_bound.into(),
            r.agrees.into(),
        ]);
    }
    let mut failed = reports.iter().any(|r| !r.agrees);
    if a.t.is_none() {
        for tj in 1..=VERIFY_CJ_TWICE_MAX {
            let j = SpinMagnitude::from_twice(tj)?;
            let bound = compute_cj(j, UnitConvention::Standard)?.value;
            let scan = random_state_min_scan(j, ScanObjective::SumVarXY, a.samples, a.seed)?;
            let min = scan.minimum.unwrap_or(f64::INFINITY);
            let agrees = min >= bound - AGREEMENT_TOL && min - bound <= DUALITY_GAP;
            failed |= !agrees;
            table.push(vec![
                format!("cj-random-j{j}").into(),
                "var-x+var-y".into(),
                1usize.into(),
                0usize.into(),
                min.into(),
                bound.into(),
                agrees.into(),
            ]);
        }
    }
    let config = json!({ "n": a.n, "t": t_label(a.t), "samples": a.samples, "seed": a.seed });
    let mut report = Report::new("verify", config, table);
    report.seed = Some(a.seed);
    report.failed = failed;
    Ok(report)
}
