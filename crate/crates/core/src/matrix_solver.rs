//! Exact solutions of small two-player zero-sum matrix games.
//!
//! The row player maximizes, the column player minimizes. A game is solved
//! by shifting the payoff matrix positive, solving the column player's
//! linear program `max 1'y  s.t.  My <= 1, y >= 0` with a dense simplex
//! (Bland's rule, so no cycling), and reading the row player's strategy off
//! the dual values. The returned saddle-point certificate is re-checked on
//! every output before it is handed back.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Dense row-major payoff matrix for the row player (attacker, maximizer).
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl PayoffMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Solver("payoff matrix must have at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Solver(format!(
                "payoff matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(PayoffMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Solver("ragged payoff matrix".into()));
        }
        PayoffMatrix::new(nrows, ncols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Value and optimal mixed strategies of a matrix game. Both strategy
/// vectors sum to one; tiny negative components are clamped to zero.
#[derive(Debug, Clone)]
pub struct MatrixSolution {
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
}

/// Solve a zero-sum matrix game exactly.
///
/// Returns value `v` and strategies `(x, y)` satisfying the saddle-point
/// certificate `min_j (x'M)_j >= v - tol` and `max_i (My)_i <= v + tol`;
/// the certificate is verified before returning.
pub fn solve_matrix_game(m: &PayoffMatrix, tol: f64) -> Result<MatrixSolution> {
    let mut ws = SimplexWorkspace::default();
    solve_parts(&m.data, m.rows, m.cols, tol, &mut ws)
}

/// Core solve over raw row-major data, reusing scratch buffers across calls.
/// The arithmetic is identical to a fresh [`solve_matrix_game`].
pub(crate) fn solve_parts(
    data: &[f64],
    rows: usize,
    cols: usize,
    tol: f64,
    ws: &mut SimplexWorkspace,
) -> Result<MatrixSolution> {
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Solver(format!("tolerance {tol} must be positive")));
    }
    if rows == 0 || cols == 0 || data.len() != rows * cols {
        return Err(Error::Solver("payoff matrix must have at least one row and column".into()));
    }
    if !data.iter().all(|x| x.is_finite()) {
        return Err(Error::Solver("payoff matrix has non-finite entries".into()));
    }

    let min_entry = data.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = if min_entry <= 0.0 { 1.0 - min_entry } else { 0.0 };

    let (obj, y, duals) = ws.maximize(data, rows, cols, shift)?;
    if obj <= 0.0 || obj.is_nan() {
        return Err(Error::Solver("simplex returned a non-positive objective".into()));
    }
    let value = 1.0 / obj - shift;
    let row_strategy = normalize(duals);
    let col_strategy = normalize(y);

    // Saddle-point certificate, checked against the *original* matrix.
    let mut worst_col = f64::INFINITY;
    for j in 0..cols {
        let payoff: f64 = (0..rows).map(|i| row_strategy[i] * data[i * cols + j]).sum();
        worst_col = worst_col.min(payoff);
    }
    let mut worst_row = f64::NEG_INFINITY;
    for i in 0..rows {
        let payoff: f64 = (0..cols).map(|j| data[i * cols + j] * col_strategy[j]).sum();
        worst_row = worst_row.max(payoff);
    }
    if !(worst_col >= value - tol && worst_row <= value + tol) {
        return Err(Error::Solver(format!(
            "saddle certificate violated: value {value}, row guarantee {worst_col}, \
             column guarantee {worst_row}, tol {tol}"
        )));
    }

    Ok(MatrixSolution { value, row_strategy, col_strategy })
}

/// Pure-strategy security level: max over rows of the row minimum.
///
/// Returns `(value, row, col)`; ties resolve to the lowest index.
pub fn pure_minimax(m: &PayoffMatrix) -> Result<(f64, usize, usize)> {
    pure_minimax_parts(&m.data, m.rows, m.cols)
}

pub(crate) fn pure_minimax_parts(
    data: &[f64],
    rows: usize,
    cols: usize,
) -> Result<(f64, usize, usize)> {
    if rows == 0 || cols == 0 || data.len() != rows * cols {
        return Err(Error::Solver("payoff matrix must have at least one row and column".into()));
    }
    if !data.iter().all(|x| x.is_finite()) {
        return Err(Error::Solver("payoff matrix has non-finite entries".into()));
    }
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..rows {
        let mut min_j = 0;
        let mut min_v = data[i * cols];
        for j in 1..cols {
            let v = data[i * cols + j];
            if v < min_v {
                min_v = v;
                min_j = j;
            }
        }
        match best {
            Some((bv, _, _)) if min_v <= bv => {}
            _ => best = Some((min_v, i, min_j)),
        }
    }
    Ok(best.expect("matrix has at least one row"))
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    for x in &mut v {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let sum: f64 = v.iter().sum();
    if sum > 0.0 {
        for x in &mut v {
            *x /= sum;
        }
    }
    v
}

const ENTER_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 100_000;

/// Reusable dense simplex tableau for the column player's LP.
#[derive(Debug, Default)]
pub(crate) struct SimplexWorkspace {
    tableau: Vec<f64>,
    basis: Vec<usize>,
    pivot_row: Vec<f64>,
}

impl SimplexWorkspace {
    /// Maximize `1'y` subject to `(M + shift) y <= 1`, `y >= 0`.
    ///
    /// Returns the objective value, the structural solution `y`, and the
    /// duals attached to the row constraints (the row player's unnormalized
    /// strategy).
    fn maximize(
        &mut self,
        data: &[f64],
        rows: usize,
        cols: usize,
        shift: f64,
    ) -> Result<(f64, Vec<f64>, Vec<f64>)> {
        let width = cols + rows + 1;
        let rhs = width - 1;
        let height = rows + 1;

        self.tableau.clear();
        self.tableau.resize(height * width, 0.0);
        self.pivot_row.clear();
        self.pivot_row.resize(width, 0.0);
        self.basis.clear();
        self.basis.extend((0..rows).map(|i| cols + i));

        let t = &mut self.tableau;
        for i in 0..rows {
            let base = i * width;
            for j in 0..cols {
                t[base + j] = data[i * cols + j] + shift;
            }
            t[base + cols + i] = 1.0;
            t[base + rhs] = 1.0;
        }
        let obj_base = rows * width;
        for j in 0..cols {
            t[obj_base + j] = -1.0;
        }

        let scale = data.iter().fold(1.0_f64, |acc, &x| acc.max((x + shift).abs()));
        let pivot_tol = PIVOT_TOL * scale;

        for _ in 0..MAX_PIVOTS {
            // Bland: entering variable is the lowest index with a negative
            // reduced cost.
            let mut entering = None;
            for j in 0..rhs {
                if t[obj_base + j] < -ENTER_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(self.extract(rows, cols, width));
            };

            // Ratio test; ties resolve to the smallest basis variable.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..rows {
                let a = t[i * width + col];
                if a > pivot_tol {
                    let ratio = t[i * width + rhs] / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr || (ratio == lr && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Solver("simplex detected an unbounded program".into()));
            };

            // Pivot.
            let pr = row * width;
            let inv = 1.0 / t[pr + col];
            for k in 0..width {
                t[pr + k] *= inv;
            }
            t[pr + col] = 1.0;
            self.pivot_row.copy_from_slice(&t[pr..pr + width]);
            for (i, r) in t.chunks_exact_mut(width).enumerate() {
                if i == row {
                    continue;
                }
                let f = r[col];
                if f == 0.0 {
                    continue;
                }
                for (a, b) in r.iter_mut().zip(&self.pivot_row) {
                    *a -= f * *b;
                }
                r[col] = 0.0;
            }
            self.basis[row] = col;
        }
        Err(Error::Solver("simplex exceeded the pivot limit".into()))
    }

    fn extract(&self, rows: usize, cols: usize, width: usize) -> (f64, Vec<f64>, Vec<f64>) {
        let rhs = width - 1;
        let obj_base = rows * width;
        let obj = self.tableau[obj_base + rhs];
        let mut y = vec![0.0; cols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < cols {
                y[b] = self.tableau[i * width + rhs].max(0.0);
            }
        }
        let duals: Vec<f64> = (0..rows).map(|i| self.tableau[obj_base + cols + i]).collect();
        (obj, y, duals)
    }
}
