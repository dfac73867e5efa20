//! Bounded derivative-free local search (Nelder-Mead with box clamping).
//!
//! Deterministic: no randomness, fixed expansion/contraction coefficients,
//! ties broken by index. Used by the material fit and the inverse solver,
//! both of which run it from fixed multi-start points.

/// Outcome of one local search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
}

fn clamp(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], hi[i]);
    }
}

/// Minimizes `f` over the box `[lo, hi]` starting from `x0`.
///
/// Terminates when the function spread across the simplex drops below `ftol`
/// or the evaluation budget is exhausted.
pub fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    max_evals: usize,
    ftol: f64,
) -> SearchResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1 && lo.len() == n && hi.len() == n);
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    // Initial simplex: x0 plus a 10%-of-range step per dimension, flipped
    // inward when it would leave the box.
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut base = x0.to_vec();
    clamp(&mut base, lo, hi);
    simplex.push(base.clone());
    for i in 0..n {
        let mut v = base.clone();
        let step = 0.1 * (hi[i] - lo[i]).max(1e-12);
        v[i] = if v[i] + step <= hi[i] { v[i] + step } else { v[i] - step };
        clamp(&mut v, lo, hi);
        simplex.push(v);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    while evals < max_evals {
        // Order by value, stable so ties resolve by index.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap_or(std::cmp::Ordering::Equal));
        let simplex_sorted: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let fv_sorted: Vec<f64> = order.iter().map(|&i| fvals[i]).collect();
        simplex = simplex_sorted;
        fvals = fv_sorted;

        if (fvals[n] - fvals[0]).abs() <= ftol {
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for v in simplex.iter().take(n) {
            for i in 0..n {
                centroid[i] += v[i] / n as f64;
            }
        }

        let worst = simplex[n].clone();
        let mut reflected: Vec<f64> = (0..n)
            .map(|i| centroid[i] + alpha * (centroid[i] - worst[i]))
            .collect();
        clamp(&mut reflected, lo, hi);
        let fr = eval(&reflected, &mut evals);

        if fr < fvals[0] {
            let mut expanded: Vec<f64> = (0..n)
                .map(|i| centroid[i] + gamma * (reflected[i] - centroid[i]))
                .collect();
            clamp(&mut expanded, lo, hi);
            let fe = eval(&expanded, &mut evals);
            if fe < fr {
                simplex[n] = expanded;
                fvals[n] = fe;
            } else {
                simplex[n] = reflected;
                fvals[n] = fr;
            }
        } else if fr < fvals[n - 1] {
            simplex[n] = reflected;
            fvals[n] = fr;
        } else {
            let mut contracted: Vec<f64> = (0..n)
                .map(|i| centroid[i] + rho * (worst[i] - centroid[i]))
                .collect();
            clamp(&mut contracted, lo, hi);
            let fc = eval(&contracted, &mut evals);
            if fc < fvals[n] {
                simplex[n] = contracted;
                fvals[n] = fc;
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].clone();
                for k in 1..=n {
                    for i in 0..n {
                        simplex[k][i] = best[i] + sigma * (simplex[k][i] - best[i]);
                    }
                    let mut v = simplex[k].clone();
                    clamp(&mut v, lo, hi);
                    simplex[k] = v;
                    fvals[k] = eval(&simplex[k], &mut evals);
                }
            }
        }
        if evals >= max_evals {
            break;
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if fvals[i] < fvals[best] {
            best = i;
        }
    }
    SearchResult {
        x: simplex[best].clone(),
        fx: fvals[best],
        evals,
    }
}

/// Compass (coordinate pattern) search: polls +/- steps along each axis,
/// accepts the first improvement, halves all steps after a full sweep with
/// no improvement. Slower than Nelder-Mead on smooth bowls but does not
/// stall on the kinked ridges a collapsed simplex gets stuck on.
pub fn pattern_search<F>(
    mut f: F,
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    max_evals: usize,
    initial_step_frac: f64,
) -> SearchResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1 && lo.len() == n && hi.len() == n);
    let mut steps: Vec<f64> = (0..n)
        .map(|i| initial_step_frac * (hi[i] - lo[i]).max(1e-12))
        .collect();
    let mut x = x0.to_vec();
    clamp(&mut x, lo, hi);
    let mut evals = 0usize;
    let mut fx = f(&x);
    evals += 1;
    while evals < max_evals && steps.iter().any(|s| *s > 1e-12) {
        let mut improved = false;
        'sweep: for i in 0..n {
            for dir in [1.0, -1.0] {
                let mut cand = x.clone();
                cand[i] = (cand[i] + dir * steps[i]).clamp(lo[i], hi[i]);
                if cand[i] == x[i] {
                    continue;
                }
                let fc = f(&cand);
                evals += 1;
                if fc < fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                    break;
                }
                if evals >= max_evals {
                    break 'sweep;
                }
            }
            if evals >= max_evals {
                break;
            }
        }
        if !improved {
            for s in &mut steps {
                *s *= 0.5;
            }
        }
    }
    SearchResult { x, fx, evals }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = nelder_mead(
            |x| (x[0] - 1.5).powi(2) + (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            &[-5.0, -5.0],
            &[5.0, 5.0],
            500,
            1e-14,
        );
        assert!((r.x[0] - 1.5).abs() < 1e-5, "{:?}", r.x);
        assert!((r.x[1] + 0.5).abs() < 1e-5);
    }

    #[test]
    fn respects_bounds() {
        // Unconstrained minimum at x = -3, box keeps it at the boundary.
        let r = nelder_mead(|x| (x[0] + 3.0).powi(2), &[1.0], &[0.0], &[2.0], 200, 1e-14);
        assert!(r.x[0] >= 0.0 && (r.x[0] - 0.0).abs() < 1e-6);
    }

    #[test]
    fn pattern_search_handles_kinks() {
        // |x| + |y - 1| has a non-smooth minimum; pattern search nails it.
        let r = pattern_search(
            |x| x[0].abs() + (x[1] - 1.0).abs(),
            &[3.0, -2.0],
            &[-5.0, -5.0],
            &[5.0, 5.0],
            2000,
            0.1,
        );
        assert!(r.x[0].abs() < 1e-6, "{:?}", r.x);
        assert!((r.x[1] - 1.0).abs() < 1e-6);
        assert!(r.evals <= 2000);
    }

    #[test]
    fn pattern_search_respects_bounds() {
        let r = pattern_search(|x| (x[0] + 3.0).powi(2), &[1.0], &[0.0], &[2.0], 500, 0.2);
        assert!(r.x[0] >= 0.0 && r.x[0] < 1e-9);
    }

    #[test]
    fn deterministic() {
        let run = || {
            nelder_mead(
                |x| x[0].powi(2) + (x[1] - 2.0).powi(2) + x[0].sin() * 0.1,
                &[3.0, -3.0],
                &[-4.0, -4.0],
                &[4.0, 4.0],
                300,
                1e-12,
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.x, b.x);
        assert_eq!(a.fx, b.fx);
        assert_eq!(a.evals, b.evals);
    }
}
