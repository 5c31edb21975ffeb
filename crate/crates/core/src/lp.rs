//! Exact linear programming over the rationals.
//!
//! Problems are stated in equality standard form
//!
//! ```text
//! minimize  c·x   subject to   A x = b,   x >= 0
//! ```
//!
//! and solved with a dense two-phase tableau simplex. Pivoting follows Bland's
//! rule (lowest-index entering column, lowest-index leaving basic variable on
//! ratio ties), which guarantees termination without any tolerance.

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
            cost: vec![Rational::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds the equality `row · x = rhs`.
    pub fn add_equality(&mut self, row: Vec<Rational>, rhs: Rational) {
        assert_eq!(row.len(), self.num_vars, "constraint width");
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn set_cost(&mut self, cost: Vec<Rational>) {
        assert_eq!(cost.len(), self.num_vars, "cost width");
        self.cost = cost;
    }

    /// Returns some feasible point, or `None` if the system is infeasible.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let mut t = Tableau::phase_one(self);
        t.run(self.num_vars + self.rows.len());
        if !t.objective_value().is_zero() {
            return None;
        }
        Some(t.solution(self.num_vars))
    }

    pub fn minimize(&self) -> LpOutcome {
        let mut t = Tableau::phase_one(self);
        t.run(self.num_vars + self.rows.len());
        if !t.objective_value().is_zero() {
            return LpOutcome::Infeasible;
        }
        t.expel_artificials(self.num_vars);
        t.install_cost(&self.cost);
        match t.run(self.num_vars) {
            Pivoting::Optimal => {
                let x = t.solution(self.num_vars);
                let value = self.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                LpOutcome::Optimal { x, value }
            }
            Pivoting::Unbounded => LpOutcome::Unbounded,
        }
    }
}

enum Pivoting {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Each row holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs followed by minus the current objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn phase_one(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let m = lp.rows.len();
        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
            let flip = b.is_negative();
            let mut r = Vec::with_capacity(width + 1);
            for a in row {
                r.push(if flip { -a } else { a.clone() });
            }
            for j in 0..m {
                r.push(if i == j { Rational::one() } else { Rational::zero() });
            }
            r.push(if flip { -b } else { b.clone() });
            rows.push(r);
        }
        let mut obj = vec![Rational::zero(); width + 1];
        for r in &rows {
            for j in 0..n {
                if !r[j].is_zero() {
                    obj[j] -= &r[j];
                }
            }
            obj[width] -= &r[width];
        }
        Tableau {
            rows,
            obj,
            basis: (n..n + m).collect(),
            width,
        }
    }

    fn objective_value(&self) -> Rational {
        -&self.obj[self.width]
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rows[r][self.width].clone();
            }
        }
        x
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            let inv = p.recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let support: Vec<usize> = (0..=self.width).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                row[j] -= &delta;
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                self.obj[j] -= &delta;
            }
        }
        self.basis[r] = col;
    }

    /// Runs Bland-rule pivoting with entering columns restricted to `0..allowed`.
    fn run(&mut self, allowed: usize) -> Pivoting {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Pivoting::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return Pivoting::Unbounded,
            }
        }
    }

    /// Pivots remaining (zero-valued) artificial variables out of the basis and
    /// drops rows that turn out to be redundant.
    fn expel_artificials(&mut self, n: usize) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= n {
                match (0..n).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(col) => self.pivot(r, col),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    fn install_cost(&mut self, cost: &[Rational]) {
        let n = cost.len();
        let mut obj = vec![Rational::zero(); self.width + 1];
        obj[..n].clone_from_slice(cost);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=self.width {
                if !row[j].is_zero() {
                    let delta = cb * &row[j];
                    obj[j] -= &delta;
                }
            }
        }
        // Artificial columns are never allowed to re-enter.
        for v in obj.iter_mut().take(self.width).skip(n) {
            *v = Rational::zero();
        }
        self.obj = obj;
    }
}
