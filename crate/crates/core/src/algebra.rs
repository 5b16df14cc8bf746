//! The volume polynomial of a linear family and the graded algebra of
//! constant-coefficient differential operators modulo its annihilator.
//!
//! The volume of `Δ(γ)` is a homogeneous polynomial of degree n in the
//! family parameters; it is recovered here by exact interpolation through
//! deterministic integer nodes in the cone interior, with holdout
//! validation. Graded dimensions of the quotient algebra are catalecticant
//! ranks: `dim A_k` is the rank of the pairing between degree-k and
//! degree-(n-k) monomial derivatives applied to the polynomial.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::{family_fan, toric_family, LinearFamily, LinearityVerdict};
use crate::fan::{normal_fan, Fan};
use crate::lattice;
use crate::linalg;
use crate::num::{self, Int, Rat};
use crate::polytope::{HalfSpace, Polytope};

/// Homogeneous polynomial with exact rational coefficients, stored sparsely
/// by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPolynomial {
    num_vars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<u32>, Rat>,
}

impl HomogeneousPolynomial {
    pub fn new(num_vars: usize, degree: usize, coeffs: BTreeMap<Vec<u32>, Rat>) -> Result<Self> {
        for (e, c) in &coeffs {
            if e.len() != num_vars || e.iter().map(|&x| x as usize).sum::<usize>() != degree {
                return Err(Error::InvalidInput("exponent of wrong total degree".into()));
            }
            if c.is_zero() {
                return Err(Error::InvalidInput("zero coefficients must be absent".into()));
            }
        }
        Ok(HomogeneousPolynomial { num_vars, degree, coeffs })
    }

    pub fn zero(num_vars: usize, degree: usize) -> Self {
        HomogeneousPolynomial { num_vars, degree, coeffs: BTreeMap::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn evaluate(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.num_vars);
        let mut acc = Rat::zero();
        for (e, c) in &self.coeffs {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    /// ∂/∂xᵢ.
    pub fn partial(&self, i: usize) -> HomogeneousPolynomial {
        let mut coeffs: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            let term = c * num::ratz(e[i] as i64);
            let entry = coeffs.entry(e2).or_insert_with(Rat::zero);
            *entry += term;
        }
        coeffs.retain(|_, c| !c.is_zero());
        HomogeneousPolynomial {
            num_vars: self.num_vars,
            degree: self.degree.saturating_sub(1),
            coeffs,
        }
    }
}

/// Directional derivative `L_v f = Σ vᵢ ∂f/∂xᵢ`, homogeneous of one degree
/// less (possibly zero).
pub fn directional_derivative(f: &HomogeneousPolynomial, v: &[Rat]) -> HomogeneousPolynomial {
    assert_eq!(v.len(), f.num_vars());
    let mut coeffs: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (e, c) in f.partial(i).coeffs {
            let entry = coeffs.entry(e).or_insert_with(Rat::zero);
            *entry += c * vi;
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    HomogeneousPolynomial {
        num_vars: f.num_vars(),
        degree: f.degree().saturating_sub(1),
        coeffs,
    }
}

/// Exponent vectors of total degree `deg` in `vars` variables, in
/// lexicographic order.
pub(crate) fn monomials(vars: usize, deg: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    if vars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, deg as u32, &mut cur, &mut out);
    out
}

/// Interpolates the homogeneous degree-n volume polynomial of a certified
/// linear family through exact volume evaluations, then validates it on
/// three holdout nodes.
///
/// The nodes form a principal lattice on an affine hyperplane section of
/// the cone interior: `b + Σ uᵢ eᵢ` over `Σ uᵢ ≤ n` with the coordinate
/// hyperplane chosen so it misses the origin. Restriction of homogeneous
/// degree-n polynomials to such a hyperplane is an isomorphism onto
/// polynomials of degree ≤ n, and the principal lattice is poised there, so
/// the Vandermonde system is nonsingular whenever all nodes are interior.
/// The base point is pushed deeper (resampled) until they are;
/// `HoldoutMismatch` means the volumes are not polynomial, i.e. the family
/// is not linear after all.
pub fn volume_polynomial(
    family: &LinearFamily,
    certificate: &LinearityVerdict,
) -> Result<HomogeneousPolynomial> {
    if !certificate.is_verified() {
        return Err(Error::LinearityNotCertified);
    }
    let d = family.param_dim();
    let n = family.ambient_dim();
    let monos = monomials(d, n);
    let m = monos.len();
    let gamma_star = family.cone().interior_lattice_point();
    let pivot = gamma_star
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::InvalidInput("interior point of the cone is zero".into()))?;
    let dirs: Vec<usize> = (0..d).filter(|&i| i != pivot).collect();
    let volume_at = |gamma: &[Rat]| -> Result<Rat> { Ok(family.evaluate(gamma)?.volume()) };

    let mut scale = Rat::one();
    for attempt in 0..40u32 {
        let base = num::scale_rat_vec(&gamma_star, &scale);
        scale *= num::ratz(2);
        // Principal lattice offsets u with Σu ≤ n over the non-pivot
        // coordinates, plus three off-hyperplane holdouts.
        let mut nodes: Vec<Vec<Rat>> = Vec::with_capacity(m + 3);
        for u in simplex_offsets(dirs.len(), n) {
            let mut node = base.clone();
            for (k, &coord) in dirs.iter().enumerate() {
                node[coord] += num::ratz(u[k] as i64);
            }
            nodes.push(node);
        }
        debug_assert_eq!(nodes.len(), m);
        let mut h = base.clone();
        h[pivot] += Rat::one();
        nodes.push(h);
        nodes.push(num::scale_rat_vec(&base, &num::ratz(2)));
        let mut h = base.clone();
        h[pivot] += Rat::one();
        if let Some(&c0) = dirs.first() {
            h[c0] += Rat::one();
        } else {
            h[pivot] += Rat::one();
        }
        nodes.push(h);

        if !nodes.iter().all(|p| family.cone().strictly_contains(p)) {
            if attempt == 39 {
                break;
            }
            continue;
        }
        let vandermonde: Vec<Vec<Rat>> = nodes[..m]
            .iter()
            .map(|p| {
                monos
                    .iter()
                    .map(|e| {
                        let mut term = Rat::one();
                        for (x, &ei) in p.iter().zip(e) {
                            for _ in 0..ei {
                                term *= x;
                            }
                        }
                        term
                    })
                    .collect()
            })
            .collect();
        let values: Result<Vec<Rat>> = nodes[..m].iter().map(|p| volume_at(p)).collect();
        let values = values?;
        let Some(sol) = linalg::solve_square_rat(&vandermonde, &values) else {
            return Err(Error::SingularInterpolation(attempt));
        };
        let mut coeffs = BTreeMap::new();
        for (e, c) in monos.iter().zip(&sol) {
            if !c.is_zero() {
                coeffs.insert(e.clone(), c.clone());
            }
        }
        let f = HomogeneousPolynomial { num_vars: d, degree: n, coeffs };
        for holdout in &nodes[m..] {
            if f.evaluate(holdout) != volume_at(holdout)? {
                return Err(Error::HoldoutMismatch(0));
            }
        }
        return Ok(f);
    }
    Err(Error::SingularInterpolation(5))
}

/// Nonnegative integer vectors of length `k` with coordinate sum ≤ `n`,
/// in lexicographic order.
fn simplex_offsets(k: usize, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, n as u32, &mut cur, &mut out);
    out
}

/// Graded dimensions of the algebra of differential operators modulo the
/// annihilator of `f`, plus the duality check `dims[k] = dims[n-k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebraSummary {
    pub dims: Vec<usize>,
    pub duality_ok: bool,
}

/// `dim A_k` = rank of the catalecticant pairing `(∂^α, ∂^β) ↦ ∂^{α+β} f`
/// between degree-k and degree-(n-k) monomial operators.
pub fn graded_dimensions(f: &HomogeneousPolynomial) -> Result<GradedAlgebraSummary> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.degree();
    let d = f.num_vars();
    let factorial = |e: &[u32]| -> Rat {
        let mut acc = Int::one();
        for &x in e {
            for k in 2..=x as u64 {
                acc *= Int::from(k);
            }
        }
        Rat::from_integer(acc)
    };
    let mut dims = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let rows = monomials(d, k);
        let cols = monomials(d, n - k);
        let matrix: Vec<Vec<Rat>> = rows
            .iter()
            .map(|a| {
                cols.iter()
                    .map(|b| {
                        let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        match f.coefficients().get(&sum) {
                            Some(c) => c * factorial(&sum),
                            None => Rat::zero(),
                        }
                    })
                    .collect()
            })
            .collect();
        dims.push(linalg::rank_via_bareiss(&matrix));
    }
    // Transposed matrices force the symmetry; assert it computationally.
    let duality_ok = (0..=n).all(|k| dims[k] == dims[n - k]);
    Ok(GradedAlgebraSummary { dims, duality_ok })
}

/// Do `v` and `w` represent the same class, i.e. is `L_{v-w} f = 0`?
pub fn class_equal(f: &HomogeneousPolynomial, v: &[Rat], w: &[Rat]) -> bool {
    let diff = num::sub_rat_vec(v, w);
    directional_derivative(f, &diff).is_zero()
}

/// Independent oracle for the graded dimensions of a smooth complete
/// simplicial fan: the h-vector obtained from the face counts.
pub fn h_vector_oracle(fan: &Fan) -> Result<Vec<i64>> {
    let props = fan.properties();
    if !props.simplicial {
        return Err(Error::FanNotSimplicial);
    }
    if !props.complete {
        return Err(Error::FanNotComplete);
    }
    let n = fan.ambient_dim();
    // Distinct cones of each dimension (subsets of simplicial max cones).
    let mut faces: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default(); n + 1];
    for cone in fan.max_cones() {
        let k = cone.len();
        for mask in 0u32..(1 << k) {
            let subset: Vec<usize> =
                (0..k).filter(|i| mask & (1 << i) != 0).map(|i| cone[i]).collect();
            let dim = subset.len();
            faces[dim].insert(subset);
        }
    }
    // f_{j-1} = number of j-dimensional cones; f_{-1} = 1 (the zero cone).
    let f = |j: i64| -> i64 {
        if j == -1 {
            1
        } else {
            faces[(j + 1) as usize].len() as i64
        }
    };
    let binom = |a: i64, b: i64| -> i64 {
        if b < 0 || b > a {
            return 0;
        }
        let mut acc = 1i64;
        for i in 0..b {
            acc = acc * (a - i) / (i + 1);
        }
        acc
    };
    let n = n as i64;
    let mut h = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let mut acc = 0i64;
        for j in 0..=k {
            let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
            acc += sign * binom(n - j, k - j) * f(j - 1);
        }
        h.push(acc);
    }
    Ok(h)
}

/// Does `Δ(κ)` represent the sum of the rays of the family fan in the
/// support-number algebra?
///
/// The parameter space embeds into support-number space by
/// `ι(γ)ᵢ = -min ⟨x, vᵢ⟩` over `Δ(γ)` (linear for a linear family; this is
/// re-verified and `EmbeddingNotLinear` reported otherwise). The check is
/// `L_{ι(κ) - (1,…,1)} f_Σ = 0` where `f_Σ` is the volume polynomial in
/// the support numbers of the fan's rays.
pub fn anticanonical_class_check(
    family: &LinearFamily,
    certificate: &LinearityVerdict,
    kappa: &[Rat],
) -> Result<bool> {
    let fan = family_fan(family, certificate)?;
    let d = family.param_dim();
    let rays = fan.rays().to_vec();

    // Support values of Δ(γ) on the rays, negated.
    let supp = |gamma: &[Rat]| -> Result<Vec<Rat>> {
        let p = family.evaluate(gamma)?;
        rays.iter().map(|r| Ok(-p.support_value(r)?)).collect()
    };

    // Deep interior base point such that base ± e_j stays interior.
    let mut base = family.cone().interior_point();
    loop {
        let ok = (0..d).all(|j| {
            let mut g = base.clone();
            g[j] += Rat::one();
            let mut g2 = base.clone();
            g2[j] -= Rat::one();
            family.cone().strictly_contains(&g) && family.cone().strictly_contains(&g2)
        });
        if ok {
            break;
        }
        base = num::scale_rat_vec(&base, &num::ratz(2));
        if base.iter().any(|x| x.numer().bits() > 64) {
            return Err(Error::EmbeddingNotLinear);
        }
    }
    let supp_base = supp(&base)?;
    let mut iota_cols: Vec<Vec<Rat>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut g = base.clone();
        g[j] += Rat::one();
        iota_cols.push(num::sub_rat_vec(&supp(&g)?, &supp_base));
    }
    let iota = |gamma: &[Rat]| -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); rays.len()];
        for (j, col) in iota_cols.iter().enumerate() {
            for (a, x) in acc.iter_mut().zip(col) {
                *a += &gamma[j] * x;
            }
        }
        acc
    };
    // Linearity sanity of the embedding.
    if iota(&base) != supp_base {
        return Err(Error::EmbeddingNotLinear);
    }
    {
        let probe = num::add_rat_vec(&base, &family.cone().interior_point());
        if family.cone().strictly_contains(&probe) && iota(&probe) != supp(&probe)? {
            return Err(Error::EmbeddingNotLinear);
        }
    }

    let f_sigma = support_volume_polynomial(&fan)?;
    let ones = vec![Rat::one(); rays.len()];
    Ok(class_equal(&f_sigma, &iota(kappa), &ones))
}

/// Volume of `Δ(a)` as a polynomial in the support numbers of the given
/// ray set.
///
/// The interpolation needs a full-dimensional region of support vectors
/// with all facets present; when the fan is not simplicial this region is
/// produced by a generic perturbation of one deep fiber (a simplicial fan
/// on the same rays).
pub fn support_volume_polynomial(fan: &Fan) -> Result<HomogeneousPolynomial> {
    let simplicial = if fan.properties().simplicial {
        fan.clone()
    } else {
        simplicialize_rays(fan)?
    };
    let toric = toric_family(&simplicial)?;
    let cert = toric.verify_linearity(6, 0);
    if !cert.is_verified() {
        return Err(Error::LinearityNotCertified);
    }
    volume_polynomial(&toric, &cert)
}

/// A simplicial complete fan with the same rays, built as the normal fan of
/// a generically perturbed fiber. Every candidate is verified exactly
/// (all facets present, every vertex simple) before acceptance.
fn simplicialize_rays(fan: &Fan) -> Result<Fan> {
    let n = fan.ambient_dim();
    let s = fan.rays().len();
    // A valid interior support vector: Δ(1,…,1) may be degenerate, so start
    // from the support numbers of a real fiber if possible, else ones.
    let base: Vec<Int> = vec![Int::one(); s];
    for scale in [1_000i64, 1_000_000, 1_000_000_000] {
        for power in 1u32..=3 {
            let a: Vec<Rat> = (0..s)
                .map(|i| {
                    let eps = (i as i64 + 1).pow(power);
                    num::ratz(scale) * Rat::from_integer(base[i].clone()) + num::ratz(eps)
                })
                .collect();
            let hs: Vec<HalfSpace> = fan
                .rays()
                .iter()
                .zip(&a)
                .map(|(r, ai)| HalfSpace { normal: r.clone(), offset: ai.clone() })
                .collect();
            let Ok(p) = Polytope::from_halfspaces(n, hs) else {
                continue;
            };
            if !p.is_full_dimensional() || p.facet_halfspaces().len() != s {
                continue;
            }
            let simple = p.vertices().iter().all(|v| {
                p.facet_halfspaces().iter().filter(|h| h.slack(v).is_zero()).count() == n
            });
            if !simple {
                continue;
            }
            // Normal fan with the rays reindexed to the input order.
            let candidate = normal_fan(&p)?;
            let perm: Vec<usize> = fan
                .rays()
                .iter()
                .map(|r| candidate.rays().iter().position(|c| c == r).expect("same ray set"))
                .collect();
            let inverse: std::collections::BTreeMap<usize, usize> =
                perm.iter().enumerate().map(|(new, &old)| (old, new)).collect();
            let cones: Vec<Vec<usize>> = candidate
                .max_cones()
                .iter()
                .map(|c| c.iter().map(|i| inverse[i]).collect())
                .collect();
            return Fan::new(n, fan.rays().to_vec(), cones);
        }
    }
    Err(Error::InvalidInput("no generic perturbation produced a simplicial fan".into()))
}

/// Exact dilation-limit data: the leading Ehrhart coefficient of a lattice
/// polytope equals its volume. Used as a cross-module oracle.
pub fn ehrhart_leading_coefficient(p: &Polytope) -> Result<Rat> {
    let q = lattice::ehrhart(p, 1)?;
    Ok(q.constituents[0].last().expect("nonempty coefficients").clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::gz_family;
    use crate::num::{int_vec, rat, rat_vec, ratz};

    fn p2_fan() -> Fan {
        Fan::new(
            2,
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    fn quadrant_fan() -> Fan {
        Fan::new(
            2,
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, 0]), int_vec(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    fn line_fan() -> Fan {
        Fan::new(1, vec![int_vec(&[1]), int_vec(&[-1])], vec![vec![0], vec![1]]).unwrap()
    }

    fn f1_fan() -> Fan {
        Fan::new(
            2,
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[0, -1]), int_vec(&[-1, 1])],
            vec![vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]],
        )
        .unwrap()
    }

    fn vol_poly(fan: &Fan) -> HomogeneousPolynomial {
        let fam = toric_family(fan).unwrap();
        let cert = fam.verify_linearity(8, 0);
        volume_polynomial(&fam, &cert).unwrap()
    }

    #[test]
    fn segment_family_volume_polynomial() {
        let f = vol_poly(&line_fan());
        // length of [-a₁, a₂] = a₁ + a₂
        assert_eq!(f.evaluate(&rat_vec(&[1, 0])), ratz(1));
        assert_eq!(f.evaluate(&rat_vec(&[3, 4])), ratz(7));
        assert_eq!(f.coefficients().len(), 2);
    }

    #[test]
    fn p2_volume_polynomial_is_half_square_of_sum() {
        let f = vol_poly(&p2_fan());
        // (a₁+a₂+a₃)²/2
        let mut expected = BTreeMap::new();
        for (e, c) in [
            (vec![2u32, 0, 0], rat(1, 2)),
            (vec![0, 2, 0], rat(1, 2)),
            (vec![0, 0, 2], rat(1, 2)),
            (vec![1, 1, 0], ratz(1)),
            (vec![1, 0, 1], ratz(1)),
            (vec![0, 1, 1], ratz(1)),
        ] {
            expected.insert(e, c);
        }
        assert_eq!(f.coefficients(), &expected);
        assert_eq!(f.evaluate(&rat_vec(&[1, 1, 1])), rat(9, 2));
    }

    #[test]
    fn p1xp1_volume_polynomial_factors() {
        let f = vol_poly(&quadrant_fan());
        // (a₁+a₃)(a₂+a₄)
        assert_eq!(f.evaluate(&rat_vec(&[0, 0, 1, 1])), ratz(1));
        assert_eq!(f.evaluate(&rat_vec(&[2, 3, 2, 3])), ratz(24));
        assert_eq!(f.coefficients().len(), 4);
    }

    #[test]
    fn directional_derivatives() {
        let f = vol_poly(&line_fan());
        let df = directional_derivative(&f, &rat_vec(&[1, 1]));
        assert_eq!(df.degree(), 0);
        assert_eq!(df.evaluate(&rat_vec(&[0, 0])), ratz(2));

        let f = vol_poly(&p2_fan());
        let df = directional_derivative(&f, &rat_vec(&[1, 1, 1]));
        // 3(a₁+a₂+a₃)
        assert_eq!(df.evaluate(&rat_vec(&[2, 2, 2])), ratz(18));

        let z = directional_derivative(&f, &rat_vec(&[0, 0, 0]));
        assert!(z.is_zero());
    }

    #[test]
    fn graded_dims_match_h_vectors() {
        let cases: Vec<(Fan, Vec<i64>)> = vec![
            (p2_fan(), vec![1, 1, 1]),
            (quadrant_fan(), vec![1, 2, 1]),
            (f1_fan(), vec![1, 2, 1]),
        ];
        for (fan, expected_h) in cases {
            assert_eq!(h_vector_oracle(&fan).unwrap(), expected_h);
            let f = vol_poly(&fan);
            let summary = graded_dimensions(&f).unwrap();
            let dims_i64: Vec<i64> = summary.dims.iter().map(|&x| x as i64).collect();
            assert_eq!(dims_i64, expected_h);
            assert!(summary.duality_ok);
            assert_eq!(summary.dims[0], 1);
            assert_eq!(*summary.dims.last().unwrap(), 1);
        }
    }

    #[test]
    fn monomial_apolarity() {
        // f = x³ in one variable: dims all 1.
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![3u32], ratz(1));
        let f = HomogeneousPolynomial::new(1, 3, coeffs).unwrap();
        let s = graded_dimensions(&f).unwrap();
        assert_eq!(s.dims, vec![1, 1, 1, 1]);
        assert!(matches!(
            graded_dimensions(&HomogeneousPolynomial::zero(1, 3)),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn class_equality_examples() {
        let f = vol_poly(&line_fan());
        assert!(class_equal(&f, &rat_vec(&[2, 0]), &rat_vec(&[1, 1])));

        let f = vol_poly(&p2_fan());
        // Translation by t maps to (⟨v₁,t⟩, ⟨v₂,t⟩, ⟨v₃,t⟩) = (1, 0, -1).
        assert!(class_equal(&f, &rat_vec(&[1, 0, -1]), &rat_vec(&[0, 0, 0])));
        assert!(!class_equal(&f, &rat_vec(&[1, 1, 1]), &rat_vec(&[0, 0, 0])));
        assert!(class_equal(&f, &rat_vec(&[2, 1, 0]), &rat_vec(&[1, 1, 1])));
    }

    #[test]
    fn euler_identity() {
        // Σ aᵢ ∂ᵢ f = n·f for homogeneous degree-n f.
        let f = vol_poly(&quadrant_fan());
        for gamma in [rat_vec(&[1, 2, 3, 4]), rat_vec(&[0, 1, 1, 0])] {
            let mut acc = Rat::zero();
            for i in 0..4 {
                acc += &gamma[i] * f.partial(i).evaluate(&gamma);
            }
            assert_eq!(acc, ratz(2) * f.evaluate(&gamma));
        }
    }

    #[test]
    fn anticanonical_class_of_toric_families() {
        let fam = toric_family(&p2_fan()).unwrap();
        let cert = fam.verify_linearity(8, 0);
        assert!(anticanonical_class_check(&fam, &cert, &rat_vec(&[1, 1, 1])).unwrap());
        // (2,1,0) = (1,1,1) + translation class (1,0,-1).
        assert!(anticanonical_class_check(&fam, &cert, &rat_vec(&[2, 1, 0])).unwrap());
        assert!(!anticanonical_class_check(&fam, &cert, &rat_vec(&[2, 2, 2])).unwrap());
    }

    #[test]
    fn anticanonical_class_of_gz2() {
        let fam = gz_family(2).unwrap();
        let cert = fam.verify_linearity(8, 0);
        // ι(λ) = (-λ₁, λ₂) on the rays (-1), (1)… ray order is sorted:
        // rays are [(-1), (1)] so ι(κ) for κ = (-1, 1) is (1, 1).
        assert!(anticanonical_class_check(&fam, &cert, &rat_vec(&[-1, 1])).unwrap());
        assert!(!anticanonical_class_check(&fam, &cert, &rat_vec(&[-2, 2])).unwrap());
    }

    #[test]
    fn simplicialization_of_gz3_fan() {
        let fam = gz_family(3).unwrap();
        let cert = fam.verify_linearity(8, 0);
        let fan = family_fan(&fam, &cert).unwrap();
        assert!(!fan.properties().simplicial);
        let simp = simplicialize_rays(&fan).unwrap();
        assert_eq!(simp.rays(), fan.rays());
        let props = simp.properties();
        assert!(props.simplicial && props.complete);
    }
}
