//! Small deterministic Nelder-Mead simplex minimizer used by the EPR
//! optimizer. No randomness: restarts come from fixed seed points supplied by
//! the caller, so results are reproducible bit-for-bit.

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Final spread max(f) - min(f) over the simplex.
    pub spread: f64,
}

/// Minimizes `f` starting from `x0` with initial step `step`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, tol: f64, max_iter: usize) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];
        if values[worst] - values[best] < tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for &i in order.iter().take(n) {
            for d in 0..n {
                centroid[d] += simplex[i][d];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let reflect: Vec<f64> = (0..n)
            .map(|d| centroid[d] + (centroid[d] - simplex[worst][d]))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[best] {
            let expand: Vec<f64> = (0..n)
                .map(|d| centroid[d] + 2.0 * (reflect[d] - centroid[d]))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
            continue;
        }

        let contract: Vec<f64> = (0..n)
            .map(|d| centroid[d] + 0.5 * (simplex[worst][d] - centroid[d]))
            .collect();
        let f_contract = f(&contract);
        if f_contract < values[worst] {
            simplex[worst] = contract;
            values[worst] = f_contract;
            continue;
        }

        let best_point = simplex[best].clone();
        for i in 0..=n {
            if i == best {
                continue;
            }
            for d in 0..n {
                simplex[i][d] = best_point[d] + 0.5 * (simplex[i][d] - best_point[d]);
            }
            values[i] = f(&simplex[i]);
        }
    }

    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().cloned().fold(f64::INFINITY, f64::min);
    NmResult { x: simplex[best].clone(), value: values[best], spread }
}

/// Golden-section minimization of a 1-D function after a coarse bracketing
/// scan over [lo, hi]. Every local minimum of the coarse scan is refined, so
/// multiple basins are handled as long as the scan resolution separates them.
/// Returns the best (x, f(x)) seen.
pub fn scan_golden<F>(mut f: F, lo: f64, hi: f64, coarse: usize, iters: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let n = coarse.max(3);
    let xs: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = (xs[0], vs[0]);
    for i in 0..n {
        if vs[i] < best.1 {
            best = (xs[i], vs[i]);
        }
    }
    for i in 0..n {
        let left_higher = i == 0 || vs[i - 1] >= vs[i];
        let right_higher = i == n - 1 || vs[i + 1] >= vs[i];
        if !(left_higher && right_higher) {
            continue;
        }
        let mut a = xs[i.saturating_sub(1)];
        let mut b = xs[(i + 1).min(n - 1)];
        let phi = 0.5 * (3.0 - 5.0_f64.sqrt());
        let mut x1 = a + phi * (b - a);
        let mut x2 = b - phi * (b - a);
        let mut f1 = f(x1);
        let mut f2 = f(x2);
        for _ in 0..iters {
            if f1 > f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = b - phi * (b - a);
                f2 = f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = a + phi * (b - a);
                f1 = f(x1);
            }
            let (xc, fc) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
            if fc < best.1 {
                best = (xc, fc);
            }
        }
    }
    best
}
