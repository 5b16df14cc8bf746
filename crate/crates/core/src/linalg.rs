//! Dense exact linear algebra over ℚ and ℤ.
//!
//! Matrices are `Vec<Vec<_>>` in row-major order; everything here is
//! deterministic so canonical forms built on top of it (reduced echelon
//! kernels, Hermite-style lattice bases) are stable across runs.

use num_traits::{One, Signed, Zero};

use crate::num::{Int, Rat};

pub type RatMat = Vec<Vec<Rat>>;
pub type IntMat = Vec<Vec<Int>>;

pub fn identity_rat(n: usize) -> RatMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn transpose_rat(a: &[Vec<Rat>]) -> RatMat {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec_rat(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter().map(|row| crate::num::dot_rat(row, x)).collect()
}

pub fn mat_mul_rat(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> RatMat {
    let bt = transpose_rat(b);
    a.iter().map(|row| bt.iter().map(|col| crate::num::dot_rat(row, col)).collect()).collect()
}

/// Reduced row echelon form. Returns the transformed matrix and the pivot
/// column of each nonzero row.
pub fn rref(a: &[Vec<Rat>]) -> (RatMat, Vec<usize>) {
    let mut m: RatMat = a.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank_rat(a: &[Vec<Rat>]) -> usize {
    rref(a).1.len()
}

/// Canonical basis of the right kernel `{x : Ax = 0}`.
///
/// Built from the reduced echelon form with the free-variable convention, so
/// the output depends only on the row space of `a`.
pub fn kernel_basis_rat(a: &[Vec<Rat>], cols: usize) -> RatMat {
    let (m, pivots) = rref(a);
    let mut basis = Vec::new();
    let piv_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    for free in 0..cols {
        if piv_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `A x = b` for arbitrary shape; `None` when inconsistent.
///
/// Free variables are set to zero, making the result deterministic.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    if rows == 0 {
        return Some(vec![Rat::zero(); cols]);
    }
    let aug: RatMat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    // Inconsistent iff some pivot lands in the augmented column.
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

/// Solves a square system with the fraction-free Bareiss elimination.
///
/// Rows are first scaled to integers; intermediate entries stay integral
/// (they are minors of the scaled matrix), which keeps large interpolation
/// systems tractable. Returns `None` for singular matrices.
pub fn solve_square_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    debug_assert!(a.iter().all(|r| r.len() == n));
    let mut m: IntMat = Vec::with_capacity(n);
    for (row, rhs) in a.iter().zip(b) {
        let mut full: Vec<Rat> = row.clone();
        full.push(rhs.clone());
        let l = crate::num::denom_lcm(&full);
        m.push(full.iter().map(|x| x.numer() * (&l / x.denom())).collect());
    }
    let mut prev = Int::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rat::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rat::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rat::from_integer(m[i][i].clone());
    }
    Some(x)
}

/// Rank computed fraction-free after clearing row denominators.
pub fn rank_via_bareiss(a: &[Vec<Rat>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut m: IntMat = a
        .iter()
        .map(|row| {
            let l = crate::num::denom_lcm(row);
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut prev = Int::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let num = &m[i][j] * &m[rank][c] - &m[i][c] * &m[rank][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][c] = Int::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

pub fn det_rat(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    if n == 0 {
        return Rat::one();
    }
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        det *= m[k][k].clone();
        let inv = m[k][k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &inv;
            for j in k..n {
                let sub = &m[k][j] * &f;
                m[i][j] = &m[i][j] - sub;
            }
        }
    }
    det
}

pub fn det_int(a: &[Vec<Int>]) -> Int {
    let rat: RatMat =
        a.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let d = det_rat(&rat);
    debug_assert!(d.denom().is_one());
    d.to_integer()
}

/// Column-style Hermite elimination: returns `(h, u)` with `h = a · u`,
/// `u` unimodular and `h` in column echelon form.
pub fn column_hermite(a: &[Vec<Int>], cols: usize) -> (IntMat, IntMat) {
    let rows = a.len();
    let mut h: IntMat = a.to_vec();
    let mut u: IntMat = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    // u is stored row-major as a cols×cols matrix acting on the right; we
    // mutate its *columns* together with the columns of h.
    let col_swap = |m: &mut IntMat, c1: usize, c2: usize| {
        for row in m.iter_mut() {
            row.swap(c1, c2);
        }
    };
    // col[c2] -= q * col[c1]
    let col_axpy = |m: &mut IntMat, c1: usize, c2: usize, q: &Int| {
        for row in m.iter_mut() {
            let sub = &row[c1] * q;
            row[c2] = &row[c2] - sub;
        }
    };
    let mut lead = 0usize;
    for r in 0..rows {
        if lead == cols {
            break;
        }
        loop {
            // Smallest nonzero |entry| in row r among columns >= lead.
            let mut best: Option<usize> = None;
            for c in lead..cols {
                if h[r][c].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(c),
                    Some(b) => {
                        if h[r][c].abs() < h[r][b].abs() {
                            best = Some(c)
                        }
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            if b != lead {
                col_swap(&mut h, lead, b);
                col_swap(&mut u, lead, b);
            }
            let mut done = true;
            for c in lead + 1..cols {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = num_integer::Integer::div_floor(&h[r][c], &h[r][lead]);
                col_axpy(&mut h, lead, c, &q);
                col_axpy(&mut u, lead, c, &q);
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[r][lead].is_zero() {
            if h[r][lead].is_negative() {
                for row in h.iter_mut() {
                    row[lead] = -row[lead].clone();
                }
                for row in u.iter_mut() {
                    row[lead] = -row[lead].clone();
                }
            }
            lead += 1;
        }
    }
    (h, u)
}

/// ℤ-basis of the saturated integer kernel `{x ∈ ℤⁿ : Ax = 0}`.
pub fn integer_kernel_basis(a: &[Vec<Int>], cols: usize) -> IntMat {
    if a.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
    }
    let (h, u) = column_hermite(a, cols);
    let rows = a.len();
    let mut basis = Vec::new();
    for c in 0..cols {
        if (0..rows).all(|r| h[r][c].is_zero()) {
            basis.push(u.iter().map(|row| row[c].clone()).collect());
        }
    }
    basis
}

/// One integer solution of `A x = b`, or `None` when none exists.
pub fn integer_solve(a: &[Vec<Int>], b: &[Int], cols: usize) -> Option<Vec<Int>> {
    let rows = a.len();
    if rows == 0 {
        return Some(vec![Int::zero(); cols]);
    }
    let (h, u) = column_hermite(a, cols);
    // Solve H y = b pivot by pivot; H is column echelon.
    let mut y = vec![Int::zero(); cols];
    let mut pivot_cols: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut c = 0usize;
    for r in 0..rows {
        if c < cols && !h[r][c].is_zero() {
            pivot_cols.push((r, c));
            c += 1;
        }
    }
    let mut residual: Vec<Int> = b.to_vec();
    for &(r, c) in &pivot_cols {
        if (&residual[r] % &h[r][c]).is_zero() {
            let q = &residual[r] / &h[r][c];
            for i in 0..rows {
                let sub = &h[i][c] * &q;
                residual[i] = &residual[i] - sub;
            }
            y[c] = q;
        } else {
            return None;
        }
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let x: Vec<Int> = (0..cols).map(|i| crate::num::dot_int(&u[i], &y)).collect();
    debug_assert!(a.iter().zip(b).all(|(row, rhs)| crate::num::dot_int(row, &x) == *rhs));
    Some(x)
}

/// Lattice basis of the hyperplane `v⊥ ∩ ℤⁿ` for a primitive normal `v`.
pub fn hyperplane_lattice_basis(v: &[Int]) -> IntMat {
    integer_kernel_basis(&[v.to_vec()], v.len())
}
