//! Exact linear programming over ℚ.
//!
//! A dense two-phase simplex with Bland's rule. Variables are free; they are
//! split into nonnegative pairs internally. With rational pivots there are no
//! tolerances and Bland's rule rules out cycling, so the solver terminates
//! with an exact answer. Problem sizes here are tiny (tens of rows), which is
//! exactly what this implementation is for.

use num_traits::{One, Signed, Zero};

use crate::num::{dot_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Rel, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

struct Tableau {
    rows: Vec<Vec<Rat>>, // m × (nv + 1), last column is the rhs
    basis: Vec<usize>,
    banned: Vec<bool>, // columns that may not re-enter (artificials)
    nv: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.nv]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..=self.nv {
                let sub = &self.rows[r][j] * &f;
                self.rows[i][j] = &self.rows[i][j] - sub;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj`; assumes the current basis is feasible.
    fn simplex(&mut self, obj: &[Rat]) -> Option<()> {
        loop {
            // Reduced costs via the basic objective coefficients.
            let cb: Vec<Rat> = self.basis.iter().map(|&b| obj[b].clone()).collect();
            let mut entering = None;
            for j in 0..self.nv {
                if self.banned[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = obj[j].clone();
                for (i, c) in cb.iter().enumerate() {
                    if !c.is_zero() {
                        rc -= c * &self.rows[i][j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j); // Bland: first improving index
                    break;
                }
            }
            let Some(j) = entering else {
                return Some(());
            };
            let mut leaving: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][j].is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / &self.rows[i][j];
                match &leaving {
                    None => leaving = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]) {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return None; // unbounded in the entering direction
            };
            self.pivot(r, j);
        }
    }
}

/// Maximizes `objective · x` over the constraint system with free variables.
pub fn maximize(objective: &[Rat], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel != Rel::Eq).count();
    let nv = 2 * n + n_slack + m; // split vars, slacks, artificials
    let art0 = 2 * n + n_slack;

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack_idx = 2 * n;
    for (i, c) in constraints.iter().enumerate() {
        debug_assert_eq!(c.coeffs.len(), n);
        let mut row = vec![Rat::zero(); nv + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a.clone();
        }
        match c.rel {
            Rel::Le => {
                row[slack_idx] = Rat::one();
                slack_idx += 1;
            }
            Rel::Ge => {
                row[slack_idx] = -Rat::one();
                slack_idx += 1;
            }
            Rel::Eq => {}
        }
        row[nv] = c.rhs.clone();
        if row[nv].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[art0 + i] = Rat::one();
        basis.push(art0 + i);
        rows.push(row);
    }

    let mut t = Tableau { rows, basis, banned: vec![false; nv], nv };

    // Phase 1: drive the artificial variables to zero.
    let mut phase1 = vec![Rat::zero(); nv];
    for j in art0..nv {
        phase1[j] = -Rat::one();
    }
    t.simplex(&phase1).expect("phase-1 objective is bounded");
    let infeas: Rat = (0..m)
        .filter(|&i| t.basis[i] >= art0)
        .map(|i| t.rhs(i).clone())
        .sum();
    if !infeas.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Pivot residual artificials out of the basis where possible.
    for i in 0..m {
        if t.basis[i] >= art0 {
            if let Some(c) = (0..art0).find(|&c| !t.rows[i][c].is_zero()) {
                t.pivot(i, c);
            }
        }
    }
    for j in art0..nv {
        t.banned[j] = true;
    }

    // Phase 2: the real objective on the split variables.
    let mut obj = vec![Rat::zero(); nv];
    for j in 0..n {
        obj[j] = objective[j].clone();
        obj[n + j] = -objective[j].clone();
    }
    if t.simplex(&obj).is_none() {
        return LpOutcome::Unbounded;
    }

    let mut split = vec![Rat::zero(); 2 * n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < 2 * n {
            split[b] = t.rhs(i).clone();
        }
    }
    let point: Vec<Rat> = (0..n).map(|j| &split[j] - &split[n + j]).collect();
    let value = dot_rat(objective, &point);
    LpOutcome::Optimal { value, point }
}

/// Solves `∃ x ≥ 0 : A x = b` with a phase-1 tableau over the native
/// nonnegative variables.
///
/// Convex-hull and cone-membership tests call this in inner loops; avoiding
/// the free-variable split keeps those tableaus small.
pub fn feasible_nonneg(a: &[Vec<Rat>], b: &[Rat], n_vars: usize) -> Option<Vec<Rat>> {
    let m = a.len();
    debug_assert_eq!(b.len(), m);
    let nv = n_vars + m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rat::zero(); nv + 1];
        row[..n_vars].clone_from_slice(&a[i]);
        row[nv] = b[i].clone();
        if row[nv].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[n_vars + i] = Rat::one();
        basis.push(n_vars + i);
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, banned: vec![false; nv], nv };
    let mut phase1 = vec![Rat::zero(); nv];
    for j in n_vars..nv {
        phase1[j] = -Rat::one();
    }
    t.simplex(&phase1).expect("phase-1 objective is bounded");
    let infeas: Rat =
        (0..m).filter(|&i| t.basis[i] >= n_vars).map(|i| t.rhs(i).clone()).sum();
    if !infeas.is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); n_vars];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n_vars {
            x[bv] = t.rhs(i).clone();
        }
    }
    Some(x)
}

/// Is `p` a convex combination of `points`?
pub fn in_convex_hull(p: &[Rat], points: &[Vec<Rat>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = p.len();
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(d + 1);
    for coord in 0..d {
        a.push(points.iter().map(|q| q[coord].clone()).collect());
    }
    a.push(vec![Rat::one(); points.len()]);
    let mut b: Vec<Rat> = p.to_vec();
    b.push(Rat::one());
    feasible_nonneg(&a, &b, points.len()).is_some()
}

/// Is `x` a nonnegative combination of `gens` (with every coefficient at
/// least `min_coeff`)?
pub fn in_cone(x: &[Rat], gens: &[Vec<Rat>], min_coeff: &Rat) -> bool {
    if gens.is_empty() {
        return x.iter().all(|v| v.is_zero()) && min_coeff <= &Rat::zero();
    }
    let d = x.len();
    // c = min_coeff + c', c' >= 0  ⇒  G c' = x - min_coeff * (sum of gens)
    let mut b: Vec<Rat> = x.to_vec();
    for g in gens {
        for (bi, gi) in b.iter_mut().zip(g) {
            *bi -= min_coeff * gi;
        }
    }
    let a: Vec<Vec<Rat>> =
        (0..d).map(|coord| gens.iter().map(|g| g[coord].clone()).collect()).collect();
    feasible_nonneg(&a, &b, gens.len()).is_some()
}

/// Any exact solution of the constraint system, or `None` when infeasible.
pub fn feasible_point(n_vars: usize, constraints: &[Constraint]) -> Option<Vec<Rat>> {
    match maximize(&vec![Rat::zero(); n_vars], constraints) {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat_vec, ratz};

    fn ge(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(rat_vec(coeffs), Rel::Ge, ratz(rhs))
    }
    fn le(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(rat_vec(coeffs), Rel::Le, ratz(rhs))
    }
    fn eq(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(rat_vec(coeffs), Rel::Eq, ratz(rhs))
    }

    #[test]
    fn maximize_over_triangle() {
        // max x + y over x ≥ 0, y ≥ 0, x + y ≤ 1
        let cons = vec![ge(&[1, 0], 0), ge(&[0, 1], 0), le(&[1, 1], 1)];
        match maximize(&rat_vec(&[1, 1]), &cons) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratz(1)),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let cons = vec![ge(&[1], 1), le(&[1], 0)];
        assert_eq!(maximize(&rat_vec(&[1]), &cons), LpOutcome::Infeasible);

        let cons = vec![ge(&[1], 0)];
        assert_eq!(maximize(&rat_vec(&[1]), &cons), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_constraints_and_negative_coordinates() {
        // x + y = 1, x - y = 3 → (2, -1)
        let cons = vec![eq(&[1, 1], 1), eq(&[1, -1], 3)];
        let p = feasible_point(2, &cons).unwrap();
        assert_eq!(p, rat_vec(&[2, -1]));
    }

    #[test]
    fn hull_and_cone_membership() {
        let square = vec![rat_vec(&[0, 0]), rat_vec(&[1, 0]), rat_vec(&[0, 1]), rat_vec(&[1, 1])];
        assert!(in_convex_hull(&[crate::num::rat(1, 2), crate::num::rat(1, 2)], &square));
        assert!(in_convex_hull(&rat_vec(&[1, 1]), &square));
        assert!(!in_convex_hull(&rat_vec(&[2, 0]), &square));

        let quadrant = vec![rat_vec(&[1, 0]), rat_vec(&[0, 1])];
        assert!(in_cone(&rat_vec(&[3, 5]), &quadrant, &ratz(0)));
        assert!(!in_cone(&rat_vec(&[-1, 5]), &quadrant, &ratz(0)));
        // strictly positive combination required
        assert!(!in_cone(&rat_vec(&[3, 0]), &quadrant, &ratz(1)));
        assert!(in_cone(&rat_vec(&[3, 1]), &quadrant, &ratz(1)));
    }

    #[test]
    fn degenerate_system_terminates() {
        // Redundant and degenerate rows exercise Bland's rule.
        let cons = vec![ge(&[1, 0], 0), ge(&[1, 0], 0), le(&[1, 0], 0), le(&[0, 1], 5), ge(&[0, 1], 5)];
        let p = feasible_point(2, &cons).unwrap();
        assert_eq!(p[0], ratz(0));
        assert_eq!(p[1], ratz(5));
    }
}
