//! Phase-1 simplex for feasibility of `{x ≥ 0 : A x ≤ b}`.
//!
//! Systems here are tiny (a handful of variables, a few dozen rows), so a
//! dense tableau with Bland's anti-cycling rule is plenty.

const PIVOT_EPS: f64 = 1e-12;

/// Returns true when some `x ≥ 0` satisfies every row `a · x ≤ b` up to
/// `tol` in the phase-1 objective.
pub(crate) fn feasible(rows: &[Vec<f64>], rhs: &[f64], tol: f64) -> bool {
    let m = rows.len();
    if m == 0 {
        return true;
    }
    let nx = rows[0].len();
    let art_rows: Vec<usize> = (0..m).filter(|&i| rhs[i] < 0.0).collect();
    let na = art_rows.len();
    if na == 0 {
        return true; // x = 0 works
    }
    // columns: x (nx), slacks (m), artificials (na), rhs
    let width = nx + m + na;
    let mut tab = vec![vec![0.0; width + 1]; m];
    let mut basis = vec![0usize; m];
    let mut art_k = 0;
    for i in 0..m {
        let sign = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nx {
            tab[i][j] = sign * rows[i][j];
        }
        tab[i][nx + i] = sign;
        tab[i][width] = sign * rhs[i];
        if rhs[i] < 0.0 {
            tab[i][nx + m + art_k] = 1.0;
            basis[i] = nx + m + art_k;
            art_k += 1;
        } else {
            basis[i] = nx + i;
        }
    }
    // reduced costs of w = Σ artificials
    let mut obj = vec![0.0; width + 1];
    for &i in &art_rows {
        for j in 0..=width {
            obj[j] -= tab[i][j];
        }
    }
    obj[nx + m..width].fill(0.0);

    while let Some(enter) = (0..width).find(|&j| obj[j] < -PIVOT_EPS) {
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let a = tab[i][enter];
            if a > PIVOT_EPS {
                let ratio = tab[i][width] / a;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - PIVOT_EPS
                            || (ratio <= best + PIVOT_EPS && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // unbounded direction: cannot happen for a phase-1 objective bounded below
            break;
        };
        let pivot = tab[r][enter];
        for v in tab[r].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r {
                let f = row[enter];
                if f != 0.0 {
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
        let f = obj[enter];
        for (x, p) in obj.iter_mut().zip(&pivot_row) {
            *x -= f * p;
        }
        basis[r] = enter;
    }
    // obj[width] holds -w
    -obj[width] <= tol
}
