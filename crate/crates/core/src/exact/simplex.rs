//! Dense two-phase simplex over the rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::linalg::Q;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, y) in self.obj.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes with entering columns restricted to `0..cols`. Returns false if unbounded.
    fn run(&mut self, cols: usize) -> bool {
        let rhs = self.width;
        loop {
            let Some(enter) = (0..cols).find(|&j| self.obj[j].is_negative()) else { return true };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

/// Maximizes `c · x` subject to `a x = b`, `x ≥ 0`.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut row: Vec<Q> = Vec::with_capacity(width + 1);
        for x in ai {
            row.push(if flip { -x.clone() } else { x.clone() });
        }
        for j in 0..m {
            row.push(if i == j { Q::one() } else { Q::zero() });
        }
        row.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(row);
    }
    let mut obj = vec![Q::zero(); width + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width] -= &row[width];
    }
    let mut t = Tableau { rows, obj, basis: (n..n + m).collect(), width };
    t.run(n);
    if !t.obj[width].is_zero() {
        return LpOutcome::Infeasible;
    }

    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut obj = vec![Q::zero(); width + 1];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if !obj[bv].is_zero() {
            let f = obj[bv].clone();
            for (x, y) in obj.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
    }
    t.obj = obj;
    if !t.run(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[width].clone();
    }
    LpOutcome::Optimal { value: t.obj[width].clone(), x }
}
