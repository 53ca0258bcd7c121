//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `maximize c.x subject to A x = b, x >= 0`.

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { solution: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    objective: Vec<Q>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let rhs = self.rhs();
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[row].clone();
        let nonzero: Vec<usize> = (0..=rhs).filter(|&k| !pivot_row[k].is_zero()).collect();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for &k in &nonzero {
                let d = &f * &pivot_row[k];
                r[k] -= d;
            }
        }
        if !self.objective[col].is_zero() {
            let f = self.objective[col].clone();
            for &k in &nonzero {
                let d = &f * &pivot_row[k];
                self.objective[k] -= d;
            }
        }
        self.basis[row] = col;
    }

    /// Loads `maximize cost.x` into the objective row, expressed in the current basis.
    fn set_objective(&mut self, cost: &[Q]) {
        let rhs = self.rhs();
        let mut objective = vec![Q::zero(); rhs + 1];
        for (j, c) in cost.iter().enumerate() {
            objective[j] = -c.clone();
        }
        for (i, &b) in self.basis.iter().enumerate() {
            if objective[b].is_zero() {
                continue;
            }
            let f = objective[b].clone();
            for k in 0..=rhs {
                if !self.rows[i][k].is_zero() {
                    let d = &f * &self.rows[i][k];
                    objective[k] -= d;
                }
            }
        }
        self.objective = objective;
    }

    /// Runs simplex iterations using only columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(col) = (0..allowed).find(|&j| self.objective[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length");
    assert!(a.iter().all(|row| row.len() == n), "constraint width");

    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![Q::zero(); width + 1];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Q::from_integer(1.into());
        row[width] = if flip { -b[i].clone() } else { b[i].clone() };
        rows.push(row);
    }
    let mut t = Tableau { rows, objective: Vec::new(), basis: (n..n + m).collect(), width };

    // Phase 1: maximize -sum(artificials).
    let mut phase1 = vec![Q::zero(); width];
    for cost in phase1.iter_mut().skip(n) {
        *cost = Q::from_integer((-1).into());
    }
    t.set_objective(&phase1);
    t.optimize(width);
    if t.objective[width].is_negative() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2 over the original columns only.
    let mut cost = c.to_vec();
    cost.resize(width, Q::zero());
    t.set_objective(&cost);
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Q::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            solution[bcol] = t.rows[i][width].clone();
        }
    }
    let value = solution.iter().zip(c).fold(Q::zero(), |acc, (x, c)| acc + x * c);
    LpOutcome::Optimal { solution, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn solves_small_program() {
        // max x + y s.t. x + 2y + s = 4, 3x + y + t = 6
        let a = vec![vec![qi(1), qi(2), qi(1), qi(0)], vec![qi(3), qi(1), qi(0), qi(1)]];
        let b = vec![qi(4), qi(6)];
        let c = vec![qi(1), qi(1), qi(0), qi(0)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { solution, value } => {
                assert_eq!(value, q(14, 5));
                assert_eq!(solution[0], q(8, 5));
                assert_eq!(solution[1], q(6, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = -1 with x, y >= 0
        let a = vec![vec![qi(1), qi(1)]];
        assert_eq!(maximize(&a, &[qi(-1)], &[qi(0), qi(0)]), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        // x - y = 1, maximize x
        let a = vec![vec![qi(1), qi(-1)]];
        assert_eq!(maximize(&a, &[qi(1)], &[qi(1), qi(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn handles_redundant_rows() {
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        let b = vec![qi(1), qi(2)];
        match maximize(&a, &b, &[qi(1), qi(0)]) {
            LpOutcome::Optimal { solution, value } => {
                assert_eq!(value, qi(1));
                assert_eq!(solution, vec![qi(1), qi(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic cycling example (Beale), solved with Bland's rule.
        let a = vec![
            vec![q(1, 4), qi(-8), qi(-1), qi(9), qi(1), qi(0), qi(0)],
            vec![q(1, 2), qi(-12), q(-1, 2), qi(3), qi(0), qi(1), qi(0)],
            vec![qi(0), qi(0), qi(1), qi(0), qi(0), qi(0), qi(1)],
        ];
        let b = vec![qi(0), qi(0), qi(1)];
        let c = vec![q(3, 4), qi(-20), q(1, 2), qi(-6), qi(0), qi(0), qi(0)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(5, 4)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
