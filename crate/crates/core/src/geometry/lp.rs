#![allow(clippy::needless_range_loop)] // tableau arithmetic reads clearest with indices

//! Dense two-phase simplex for the small LPs used at body-build time
//! (Chebyshev centers, support functions, boundedness checks).

const REDCOST_EPS: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-10;
const MAX_ITERS: usize = 50_000;

#[derive(Debug, Clone)]
pub(crate) enum LpResult {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
    Stalled,
}

enum Status {
    Optimal,
    Unbounded,
    Stalled,
}

/// Maximize `c . x` subject to `a[i] . x <= b[i]` with `x` free.
pub(crate) fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpResult {
    let n = c.len();
    let m = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Columns: x+ (n), x- (n), slack (m), artificial (k). Rows with negative
    // rhs are negated, which flips their slack and requires an artificial.
    let negate: Vec<bool> = b.iter().map(|&bi| bi < 0.0).collect();
    let k = negate.iter().filter(|&&f| f).count();
    let ncols = 2 * n + m + k;
    let rhs_col = ncols;

    let mut tab = vec![vec![0.0f64; ncols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut next_art = 2 * n + m;
    for i in 0..m {
        let sgn = if negate[i] { -1.0 } else { 1.0 };
        for j in 0..n {
            tab[i][j] = sgn * a[i][j];
            tab[i][n + j] = -sgn * a[i][j];
        }
        tab[i][2 * n + i] = sgn;
        tab[i][rhs_col] = sgn * b[i];
        if negate[i] {
            tab[i][next_art] = 1.0;
            basis[i] = next_art;
            next_art += 1;
        } else {
            basis[i] = 2 * n + i;
        }
    }

    // Phase 1: minimize the sum of artificials.
    if k > 0 {
        let mut z = vec![0.0f64; ncols + 1];
        for j in 2 * n + m..ncols {
            z[j] = 1.0;
        }
        for i in 0..m {
            if basis[i] >= 2 * n + m {
                for j in 0..=ncols {
                    z[j] -= tab[i][j];
                }
            }
        }
        match run_simplex(&mut tab, &mut basis, &mut z, ncols) {
            Status::Optimal => {}
            Status::Unbounded => return LpResult::Stalled,
            Status::Stalled => return LpResult::Stalled,
        }
        let scale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if -z[rhs_col] > 1e-8 * scale {
            return LpResult::Infeasible;
        }
        // Drive leftover artificials out of the basis where possible.
        for i in 0..m {
            if basis[i] >= 2 * n + m {
                if let Some(j) = (0..2 * n + m).find(|&j| tab[i][j].abs() > PIVOT_EPS) {
                    pivot(&mut tab, &mut basis, &mut z, i, j);
                }
            }
        }
    }

    // Phase 2: minimize -c . x over the non-artificial columns.
    let col_cost = |j: usize| -> f64 {
        if j < n {
            -c[j]
        } else if j < 2 * n {
            c[j - n]
        } else {
            0.0
        }
    };
    let mut z = vec![0.0f64; ncols + 1];
    for (j, zj) in z.iter_mut().enumerate().take(2 * n + m) {
        *zj = col_cost(j);
    }
    for i in 0..m {
        let cb = col_cost(basis[i].min(2 * n + m));
        let cb = if basis[i] >= 2 * n + m { 0.0 } else { cb };
        if cb != 0.0 {
            for j in 0..=ncols {
                z[j] -= cb * tab[i][j];
            }
        }
    }
    match run_simplex(&mut tab, &mut basis, &mut z, 2 * n + m) {
        Status::Optimal => {}
        Status::Unbounded => return LpResult::Unbounded,
        Status::Stalled => return LpResult::Stalled,
    }

    let mut x = vec![0.0f64; n];
    for i in 0..m {
        let j = basis[i];
        if j < n {
            x[j] += tab[i][rhs_col];
        } else if j < 2 * n {
            x[j - n] -= tab[i][rhs_col];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpResult::Optimal { x, value }
}

/// Bland's-rule simplex over columns `0..allowed`. The objective row `z`
/// holds reduced costs with `-objective` in the rhs slot.
fn run_simplex(tab: &mut [Vec<f64>], basis: &mut [usize], z: &mut [f64], allowed: usize) -> Status {
    let m = tab.len();
    let rhs_col = z.len() - 1;
    for _ in 0..MAX_ITERS {
        let Some(enter) = (0..allowed).find(|&j| z[j] < -REDCOST_EPS) else {
            return Status::Optimal;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let aij = tab[i][enter];
            if aij > PIVOT_EPS {
                let ratio = tab[i][rhs_col] / aij;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - 1e-12 || (ratio < best + 1e-12 && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Status::Unbounded;
        };
        pivot(tab, basis, z, leave, enter);
    }
    Status::Stalled
}

fn pivot(tab: &mut [Vec<f64>], basis: &mut [usize], z: &mut [f64], row: usize, col: usize) {
    let ncols = z.len();
    let p = tab[row][col];
    for j in 0..ncols {
        tab[row][j] /= p;
    }
    for i in 0..tab.len() {
        if i != row {
            let f = tab[i][col];
            if f != 0.0 {
                for j in 0..ncols {
                    tab[i][j] -= f * tab[row][j];
                }
            }
        }
    }
    let f = z[col];
    if f != 0.0 {
        for j in 0..ncols {
            z[j] -= f * tab[row][j];
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_box_max() {
        // max x + y on [0,1]^2
        let c = [1.0, 1.0];
        let a = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let b = [1.0, 0.0, 1.0, 0.0];
        match maximize(&c, &a, &b) {
            LpResult::Optimal { x, value } => {
                assert!((value - 2.0).abs() < 1e-9);
                assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x <= 0 and x >= 1
        let c = [1.0];
        let a = vec![vec![1.0], vec![-1.0]];
        let b = [0.0, -1.0];
        assert!(matches!(maximize(&c, &a, &b), LpResult::Infeasible));
    }

    #[test]
    fn detects_unbounded() {
        // max x with x >= 0 only
        let c = [1.0];
        let a = vec![vec![-1.0]];
        let b = [0.0];
        assert!(matches!(maximize(&c, &a, &b), LpResult::Unbounded));
    }

    #[test]
    fn negative_rhs_feasible() {
        // x >= 1, x <= 3, max -x -> x = 1
        let c = [-1.0];
        let a = vec![vec![-1.0], vec![1.0]];
        let b = [-1.0, 3.0];
        match maximize(&c, &a, &b) {
            LpResult::Optimal { x, value } => {
                assert!((x[0] - 1.0).abs() < 1e-9);
                assert!((value + 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }
}
