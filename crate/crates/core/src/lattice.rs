//! Exact lattice-point counting and Ehrhart quasi-polynomials.
//!
//! Counting enumerates the integer bounding box of the vertex set, but with
//! per-level bound propagation: when the loop reaches the last variable of a
//! constraint, that constraint becomes an exact range bound instead of a
//! membership test. For interlacing-type systems (Gelfand-Zetlin patterns)
//! this makes the enumeration proportional to the number of solutions.
//!
//! Lower-dimensional polytopes are not enumerated in the ambient box: the
//! span equations are solved over ℤ first (Hermite elimination) and the
//! enumeration runs in the kernel-lattice coordinates of the span.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::num::{self, dot_int, is_integral, Int, Rat};
use crate::polytope::Polytope;

/// Number of lattice points `|P ∩ ℤⁿ|`.
pub fn count(p: &Polytope) -> u64 {
    match EnumSystem::build(p, false) {
        Some(sys) => sys.enumerate(),
        None => 0,
    }
}

/// Number of lattice points in the relative interior of `P`.
pub fn count_interior(p: &Polytope) -> u64 {
    match EnumSystem::build(p, true) {
        Some(sys) => sys.enumerate(),
        None => 0,
    }
}

/// The lattice points of `P`, lexicographically sorted.
pub fn points(p: &Polytope) -> Vec<Vec<Int>> {
    let Some(sys) = EnumSystem::build(p, false) else {
        return Vec::new();
    };
    let mut out = sys.collect_points();
    out.sort_by(|a, b| crate::num::lex_cmp_int(a, b));
    out
}

struct EnumConstraint {
    coeffs: Vec<Int>,
    rhs: Rat,
    strict: bool,
    last: usize,
}

struct EnumSystem {
    dim: usize,
    lo: Vec<Int>,
    hi: Vec<Int>,
    constraints: Vec<EnumConstraint>,
    by_last: Vec<Vec<usize>>,
    /// Lattice points are `x0 + kernel · t` over the enumerated `t`.
    x0: Vec<Int>,
    kernel: Vec<Vec<Int>>,
}

impl EnumSystem {
    /// Reduces a polytope to an enumeration system over ℤ^dim.
    /// `None` means the count is provably zero.
    fn build(p: &Polytope, strict: bool) -> Option<EnumSystem> {
        if p.is_empty() {
            return None;
        }
        let n = p.ambient_dim();
        // Solve the span equations over ℤ: lattice points are x0 + K t.
        let (x0, kernel): (Vec<Int>, Vec<Vec<Int>>) = if p.span_equations().is_empty() {
            ((0..n).map(|_| Int::zero()).collect(), identity_cols(n))
        } else {
            let a: Vec<Vec<Int>> = p.span_equations().iter().map(|(e, _)| e.clone()).collect();
            let mut b = Vec::with_capacity(a.len());
            for (_, c) in p.span_equations() {
                if !is_integral(c) {
                    return None; // integer normals, fractional offset
                }
                b.push(c.to_integer());
            }
            let x0 = linalg::integer_solve(&a, &b, n)?;
            (x0, linalg::integer_kernel_basis(&a, n))
        };
        let d = kernel.len();
        debug_assert_eq!(d, p.dim());

        // Facet constraints in t-coordinates: ⟨v, x0 + K t⟩ ≥ -a.
        let mut constraints = Vec::new();
        for h in p.facet_halfspaces() {
            let coeffs: Vec<Int> = kernel.iter().map(|k| dot_int(&h.normal, k)).collect();
            let rhs = -&h.offset - Rat::from_integer(dot_int(&h.normal, &x0));
            if coeffs.iter().all(|c| c.is_zero()) {
                // Constant constraint; decide it now.
                let ok = if strict { rhs.is_negative() } else { !rhs.is_positive() };
                if !ok {
                    return None;
                }
                continue;
            }
            let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
            constraints.push(EnumConstraint { coeffs, rhs, strict, last });
        }

        if d == 0 {
            // A single integral point (x0).
            return Some(EnumSystem {
                dim: 0,
                lo: Vec::new(),
                hi: Vec::new(),
                constraints: Vec::new(),
                by_last: Vec::new(),
                x0,
                kernel,
            });
        }

        // Bounding box of the vertices in t-coordinates.
        let kt: Vec<Vec<Rat>> = (0..n)
            .map(|row| kernel.iter().map(|k| Rat::from_integer(k[row].clone())).collect())
            .collect();
        let x0_rat = num::int_to_rat_vec(&x0);
        let mut min: Vec<Option<Rat>> = vec![None; d];
        let mut max: Vec<Option<Rat>> = vec![None; d];
        for v in p.vertices() {
            let rhs = num::sub_rat_vec(v, &x0_rat);
            let t = linalg::solve_rat(&kt, &rhs).expect("vertex lies in its own span");
            for i in 0..d {
                if min[i].as_ref().is_none_or(|m| &t[i] < m) {
                    min[i] = Some(t[i].clone());
                }
                if max[i].as_ref().is_none_or(|m| &t[i] > m) {
                    max[i] = Some(t[i].clone());
                }
            }
        }
        let lo: Vec<Int> = min.iter().map(|m| num::ceil_rat(m.as_ref().unwrap())).collect();
        let hi: Vec<Int> = max.iter().map(|m| num::floor_rat(m.as_ref().unwrap())).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return None;
        }
        let mut by_last = vec![Vec::new(); d];
        for (ci, c) in constraints.iter().enumerate() {
            by_last[c.last].push(ci);
        }
        Some(EnumSystem { dim: d, lo, hi, constraints, by_last, x0, kernel })
    }

    fn point_of(&self, t: &[Int]) -> Vec<Int> {
        let mut x = self.x0.clone();
        for (ti, k) in t.iter().zip(&self.kernel) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += ti * ki;
            }
        }
        x
    }

    fn collect_points(&self) -> Vec<Vec<Int>> {
        let mut out = Vec::new();
        if self.dim == 0 {
            out.push(self.x0.clone());
            return out;
        }
        let mut partials: Vec<Rat> = self.constraints.iter().map(|_| Rat::zero()).collect();
        let mut prefix: Vec<Int> = Vec::with_capacity(self.dim);
        self.collect_rec(0, &mut partials, &mut prefix, &mut out);
        out
    }

    fn collect_rec(
        &self,
        level: usize,
        partials: &mut Vec<Rat>,
        prefix: &mut Vec<Int>,
        out: &mut Vec<Vec<Int>>,
    ) {
        if level == self.dim {
            out.push(self.point_of(prefix));
            return;
        }
        let Some((lo, hi)) = self.level_range(level, partials) else {
            return;
        };
        let mut t = lo.clone();
        self.shift_partials(level, &lo, partials);
        loop {
            prefix.push(t.clone());
            self.collect_rec(level + 1, partials, prefix, out);
            prefix.pop();
            if t == hi {
                break;
            }
            t += 1;
            self.step_partials(level, partials);
        }
        let neg = -hi;
        self.shift_partials(level, &neg, partials);
    }

    fn enumerate(&self) -> u64 {
        if self.dim == 0 {
            return 1;
        }
        let partials: Vec<Rat> = self.constraints.iter().map(|_| Rat::zero()).collect();
        let Some((lo0, hi0)) = self.level_range(0, &partials) else {
            return 0;
        };
        if crate::jobs() > 1 && self.dim > 1 {
            let values: Vec<Int> = int_range(&lo0, &hi0);
            return values
                .par_iter()
                .map(|t0| {
                    let mut partials = partials.clone();
                    for (ci, c) in self.constraints.iter().enumerate() {
                        if c.last > 0 && !c.coeffs[0].is_zero() {
                            partials[ci] += Rat::from_integer(&c.coeffs[0] * t0);
                        }
                    }
                    self.recurse(1, &mut partials)
                })
                .sum();
        }
        let mut partials = partials;
        let mut total = 0;
        let mut t = lo0.clone();
        self.shift_partials(0, &lo0, &mut partials);
        loop {
            total += self.recurse(1, &mut partials);
            if t == hi0 {
                break;
            }
            t += 1;
            self.step_partials(0, &mut partials);
        }
        total
    }

    /// Exact range for variable `level` given the partial sums of the
    /// earlier levels: every constraint whose support ends here becomes a
    /// floor/ceil bound.
    fn level_range(&self, level: usize, partials: &[Rat]) -> Option<(Int, Int)> {
        let mut lo = self.lo[level].clone();
        let mut hi = self.hi[level].clone();
        for &ci in &self.by_last[level] {
            let c = &self.constraints[ci];
            let ck = &c.coeffs[level];
            let r = (&c.rhs - &partials[ci]) / Rat::from_integer(ck.clone());
            if ck.is_positive() {
                // t ≥ r (strict: t > r)
                let b = if c.strict { num::floor_rat(&r) + 1 } else { num::ceil_rat(&r) };
                if b > lo {
                    lo = b;
                }
            } else {
                // t ≤ r (strict: t < r)
                let b = if c.strict { num::ceil_rat(&r) - 1 } else { num::floor_rat(&r) };
                if b < hi {
                    hi = b;
                }
            }
        }
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    }

    /// Adds `coeff * t` to the partial sums touched by `level`.
    fn shift_partials(&self, level: usize, t: &Int, partials: &mut [Rat]) {
        for (ci, c) in self.constraints.iter().enumerate() {
            if c.last > level && !c.coeffs[level].is_zero() {
                partials[ci] += Rat::from_integer(&c.coeffs[level] * t);
            }
        }
    }

    /// Incremental `t → t + 1` update.
    fn step_partials(&self, level: usize, partials: &mut [Rat]) {
        for (ci, c) in self.constraints.iter().enumerate() {
            if c.last > level && !c.coeffs[level].is_zero() {
                partials[ci] += Rat::from_integer(c.coeffs[level].clone());
            }
        }
    }

    fn recurse(&self, level: usize, partials: &mut Vec<Rat>) -> u64 {
        if level == self.dim {
            return 1;
        }
        let Some((lo, hi)) = self.level_range(level, partials) else {
            return 0;
        };
        let mut total = 0;
        let mut t = lo.clone();
        self.shift_partials(level, &lo, partials);
        loop {
            total += self.recurse(level + 1, partials);
            if t == hi {
                break;
            }
            t += 1;
            self.step_partials(level, partials);
        }
        // Restore the partial sums for the caller's loop.
        let neg = -hi;
        self.shift_partials(level, &neg, partials);
        total
    }
}

fn identity_cols(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

fn int_range(lo: &Int, hi: &Int) -> Vec<Int> {
    let mut out = Vec::new();
    let mut t = lo.clone();
    while &t <= hi {
        out.push(t.clone());
        t += 1;
    }
    out
}

/// Ehrhart quasi-polynomial: one degree-`dim` constituent per residue class
/// of the dilation factor modulo the period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhrhartQuasiPolynomial {
    pub period: u32,
    /// `constituents[r]` applies to dilations `m ≡ r (mod period)`;
    /// coefficients are stored lowest degree first.
    pub constituents: Vec<Vec<Rat>>,
}

impl EhrhartQuasiPolynomial {
    pub fn degree(&self) -> usize {
        self.constituents[0].len() - 1
    }

    pub fn evaluate(&self, m: i64) -> Rat {
        let r = m.rem_euclid(self.period as i64) as usize;
        poly_eval(&self.constituents[r], m)
    }
}

fn poly_eval(coeffs: &[Rat], m: i64) -> Rat {
    let mut acc = Rat::zero();
    let mr = Rat::from_integer(Int::from(m));
    for c in coeffs.iter().rev() {
        acc = acc * &mr + c;
    }
    acc
}

/// Fits the Ehrhart quasi-polynomial of `p` by exact interpolation.
///
/// Each constituent is interpolated through `dim(p) + 1` dilation counts and
/// then checked on one extra holdout dilation; a mismatch means the counts
/// are not a quasi-polynomial of this period (typically: the period is
/// wrong for the vertex denominators).
pub fn ehrhart(p: &Polytope, period: u32) -> Result<EhrhartQuasiPolynomial> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let deg = if p.is_empty() { 0 } else { p.dim() };
    let k = period as i64;
    let mut constituents = Vec::with_capacity(period as usize);
    for r in 0..k {
        let nodes: Vec<i64> = (0..=deg as i64).map(|j| r + k * j).collect();
        let a: Vec<Vec<Rat>> = nodes
            .iter()
            .map(|&m| {
                let mut row = Vec::with_capacity(deg + 1);
                let mut pw = Rat::one();
                for _ in 0..=deg {
                    row.push(pw.clone());
                    pw *= Rat::from_integer(Int::from(m));
                }
                row
            })
            .collect();
        let b: Vec<Rat> = nodes
            .iter()
            .map(|&m| Rat::from_integer(Int::from(count_dilation(p, m))))
            .collect();
        let coeffs = linalg::solve_square_rat(&a, &b)
            .expect("distinct interpolation nodes give a nonsingular Vandermonde system");
        let holdout = r + k * (deg as i64 + 1);
        if poly_eval(&coeffs, holdout) != Rat::from_integer(Int::from(count_dilation(p, holdout)))
        {
            return Err(Error::HoldoutMismatch(holdout));
        }
        constituents.push(coeffs);
    }
    Ok(EhrhartQuasiPolynomial { period, constituents })
}

fn count_dilation(p: &Polytope, m: i64) -> u64 {
    let scaled = p.scale(&Rat::from_integer(Int::from(m))).expect("nonnegative dilation");
    count(&scaled)
}

/// Ehrhart–Macdonald reciprocity check on a full-dimensional lattice
/// polytope: `L(-m) = (-1)^dim · |interior(mP) ∩ ℤⁿ|` for `1 ≤ m ≤ m_max`.
pub fn check_reciprocity(p: &Polytope, m_max: u32) -> Result<bool> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { dim: p.dim(), ambient: p.ambient_dim() });
    }
    if p.vertices().iter().any(|v| v.iter().any(|c| !is_integral(c))) {
        return Err(Error::InvalidInput("reciprocity requires a lattice polytope".into()));
    }
    let l = ehrhart(p, 1)?;
    let sign = if p.dim() % 2 == 0 { Rat::one() } else { -Rat::one() };
    for m in 1..=m_max as i64 {
        let interior = count_interior(&p.scale(&Rat::from_integer(Int::from(m))).unwrap());
        if l.evaluate(-m) != &sign * Rat::from_integer(Int::from(interior)) {
            return Ok(false);
        }
    }
    Ok(true)
}
