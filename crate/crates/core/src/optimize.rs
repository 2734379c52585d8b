//! Derivative-free 1-D minimization.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping when the
/// bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iters += 1;
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    // Bracket ends can beat the interior when the minimum sits on a boundary.
    [(mid, fm), (x1, f1), (x2, f2)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Coarse grid scan over `[a, b]` followed by golden-section refinement of
/// every local minimum of the grid; the best refined point wins. Guards
/// against multi-modal objectives whose basins the grid cannot rank.
pub fn scan_then_golden_min(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    grid: usize,
    tol: f64,
) -> (f64, f64) {
    let grid = grid.max(2);
    let step = (b - a) / (grid - 1) as f64;
    let at = |i: usize| a + step * i as f64;
    let values: Vec<f64> = (0..grid).map(|i| f(at(i))).collect();
    let mut best = values
        .iter()
        .enumerate()
        .min_by(|p, q| p.1.total_cmp(q.1))
        .map(|(i, &v)| (at(i), v))
        .unwrap();
    for i in 0..grid {
        let left = i == 0 || values[i] <= values[i - 1];
        let right = i + 1 == grid || values[i] <= values[i + 1];
        if !(left && right) {
            continue;
        }
        let lo = at(i.saturating_sub(1));
        let hi = at((i + 1).min(grid - 1));
        let refined = golden_section_min(&mut f, lo, hi, tol);
        if refined.1 < best.1 {
            best = refined;
        }
    }
    best
}

/// Maximization counterpart of [`golden_section_min`].
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_section_min(|x| -f(x), a, b, tol);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_minimum() {
        let (x, v) = golden_section_min(|x| (x - 1.3).powi(2) + 0.5, -4.0, 7.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-8);
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn boundary_minimum() {
        let (x, _) = golden_section_min(|x| x, 2.0, 5.0, 1e-12);
        assert!((x - 2.0).abs() < 1e-10);
    }

    #[test]
    fn scan_escapes_local_minimum() {
        // Local minimum near x = -1, global near x = 2.
        let f = |x: f64| (x + 1.0).powi(2) * (x - 2.0).powi(2) + 0.3 * (x - 2.0).powi(2) - 0.01 * x;
        let (x, _) = scan_then_golden_min(f, -3.0, 4.0, 50, 1e-10);
        assert!((x - 2.0).abs() < 0.05, "x = {x}");
    }

    #[test]
    fn scan_ranks_close_basins() {
        // Two wells; the deeper one is narrow and misses every grid point.
        let f = |x: f64| ((x - 1.0).powi(2) - 0.001).min((x - 3.0).powi(2) * 50.0 - 0.002);
        let (x, v) = scan_then_golden_min(f, 0.0, 4.0, 10, 1e-12);
        assert!((x - 3.0).abs() < 1e-6 && (v + 0.002).abs() < 1e-12, "x = {x}");
    }

    #[test]
    fn maximum_of_cosine() {
        let (x, v) = golden_section_max(f64::cos, -1.0, 2.0, 1e-10);
        assert!(x.abs() < 1e-7 && (v - 1.0).abs() < 1e-14);
    }
}
