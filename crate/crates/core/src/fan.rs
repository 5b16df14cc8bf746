//! Rational fans, normal fans, support numbers and virtual polytopes.
//!
//! A [`Fan`] stores primitive ray generators and the maximal cones as ray
//! index sets; lower faces are implied. Construction validates the fan
//! axioms at desk scale: every cone is strictly convex and maximal cones
//! pairwise intersect in a common face (for simplicial pairs the
//! intersection cone is enumerated exactly; otherwise disjointness of the
//! relative interiors is checked by LP).
//!
//! The support-number convention follows the `Δ(a)` construction:
//! `polytope_of(Σ, a) = {x : ⟨vᵢ, x⟩ ≥ -aᵢ}`, so `support_numbers` returns
//! the *negated* support values `aᵢ = -min ⟨x, vᵢ⟩` and the two operations
//! round-trip exactly on the normality region.

use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp;
use crate::num::{
    self, dot_int_rat, int_to_rat_vec, lex_cmp_int, primitive_int_vec, primitive_of_rat_vec, Int,
    Rat,
};
use crate::polytope::{halfspace_from_rational, HalfSpace, Polytope};

/// Structural properties of a fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FanProperties {
    pub complete: bool,
    pub simplicial: bool,
    pub smooth: bool,
}

/// A rational fan given by primitive rays and maximal cones.
#[derive(Debug)]
pub struct Fan {
    ambient_dim: usize,
    rays: Vec<Vec<Int>>,
    max_cones: Vec<Vec<usize>>,
    props: OnceLock<FanProperties>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        let props = OnceLock::new();
        if let Some(p) = self.props.get() {
            let _ = props.set(*p);
        }
        Fan {
            ambient_dim: self.ambient_dim,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
            props,
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.rays == other.rays
            && self.max_cones == other.max_cones
    }
}
impl Eq for Fan {}

impl Fan {
    /// Validates and builds a fan. Ray order is preserved: it fixes the
    /// support-number coordinates.
    pub fn new(ambient_dim: usize, rays: Vec<Vec<Int>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if ambient_dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        for r in &rays {
            if r.len() != ambient_dim {
                return Err(Error::DimensionMismatch(ambient_dim, r.len()));
            }
            if r.iter().all(|x| x.is_zero()) {
                return Err(Error::InvalidInput("ray must be nonzero".into()));
            }
            if &primitive_int_vec(r) != r {
                return Err(Error::InvalidInput(format!("ray {r:?} is not primitive")));
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(Error::InvalidInput("duplicate ray".into()));
                }
            }
        }
        let mut cones: Vec<Vec<usize>> = Vec::with_capacity(max_cones.len());
        for mut c in max_cones {
            c.sort_unstable();
            c.dedup();
            if c.is_empty() {
                return Err(Error::InvalidInput("empty cone".into()));
            }
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(Error::InvalidInput("cone ray index out of range".into()));
            }
            cones.push(c);
        }
        cones.sort();
        cones.dedup();
        let fan = Fan { ambient_dim, rays, max_cones: cones, props: OnceLock::new() };
        fan.validate()?;
        Ok(fan)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub(crate) fn cone_rays(&self, cone: &[usize]) -> Vec<Vec<Rat>> {
        cone.iter().map(|&i| int_to_rat_vec(&self.rays[i])).collect()
    }

    fn cone_is_simplicial(&self, cone: &[usize]) -> bool {
        let gens = self.cone_rays(cone);
        linalg::rank_rat(&gens) == cone.len()
    }

    fn validate(&self) -> Result<()> {
        // Strict convexity: a functional strictly positive on the cone.
        for cone in &self.max_cones {
            let cons: Vec<lp::Constraint> = cone
                .iter()
                .map(|&i| {
                    lp::Constraint::new(int_to_rat_vec(&self.rays[i]), lp::Rel::Ge, Rat::one())
                })
                .collect();
            if lp::feasible_point(self.ambient_dim, &cons).is_none() {
                return Err(Error::InvalidInput(format!("cone {cone:?} is not strictly convex")));
            }
        }
        // Pairwise proper intersection.
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                self.check_pair(&self.max_cones[i], &self.max_cones[j])?;
            }
        }
        Ok(())
    }

    /// σ ∩ τ must be the cone on the common rays (and that cone must be a
    /// face of both). For a simplicial pair this is checked exactly by
    /// enumerating the extreme rays of the intersection; otherwise the
    /// relative interiors are checked to be disjoint.
    fn check_pair(&self, sigma: &[usize], tau: &[usize]) -> Result<()> {
        let common: Vec<usize> = sigma.iter().filter(|i| tau.contains(i)).copied().collect();
        if self.cone_is_simplicial(sigma) && self.cone_is_simplicial(tau) {
            let rays = self.intersection_rays(sigma, tau)?;
            for r in &rays {
                if !common.iter().any(|&c| self.rays[c] == *r) {
                    return Err(Error::InvalidInput(format!(
                        "cones {sigma:?} and {tau:?} do not intersect in a common face"
                    )));
                }
            }
            Ok(())
        } else {
            // relint(σ) ∩ relint(τ) = ∅ via a strictly-positive combination:
            // infeasibility of Σ c_i v_i = Σ d_j w_j with c, d ≥ 1.
            let gens: Vec<Vec<Rat>> = sigma
                .iter()
                .map(|&i| int_to_rat_vec(&self.rays[i]))
                .chain(tau.iter().map(|&i| {
                    int_to_rat_vec(&self.rays[i]).iter().map(|x| -x.clone()).collect()
                }))
                .collect();
            let k = gens.len();
            let n = self.ambient_dim;
            let mut b = vec![Rat::zero(); n];
            for g in &gens {
                for (bi, gi) in b.iter_mut().zip(g) {
                    *bi -= gi;
                }
            }
            let a: Vec<Vec<Rat>> =
                (0..n).map(|coord| gens.iter().map(|g| g[coord].clone()).collect()).collect();
            if lp::feasible_nonneg(&a, &b, k).is_some() {
                return Err(Error::InvalidInput(format!(
                    "cones {sigma:?} and {tau:?} overlap in their relative interiors"
                )));
            }
            Ok(())
        }
    }

    /// Extreme rays of σ ∩ τ for simplicial cones, via a hyperplane slice.
    fn intersection_rays(&self, sigma: &[usize], tau: &[usize]) -> Result<Vec<Vec<Int>>> {
        let n = self.ambient_dim;
        let mut hs = Vec::new();
        for cone in [sigma, tau] {
            let (ineqs, eqs) = simplicial_cone_hrep(n, &self.cone_rays(cone));
            for u in ineqs {
                hs.push(halfspace_from_rational(&u, &Rat::zero())?);
            }
            for e in eqs {
                hs.push(halfspace_from_rational(&e, &Rat::zero())?);
                let neg: Vec<Rat> = e.iter().map(|x| -x.clone()).collect();
                hs.push(halfspace_from_rational(&neg, &Rat::zero())?);
            }
        }
        // Functional strictly positive on σ (hence on σ ∩ τ away from 0).
        let cons: Vec<lp::Constraint> = sigma
            .iter()
            .map(|&i| lp::Constraint::new(int_to_rat_vec(&self.rays[i]), lp::Rel::Ge, Rat::one()))
            .collect();
        let w = lp::feasible_point(n, &cons).expect("validated strictly convex cone");
        hs.push(halfspace_from_rational(&w, &Rat::one())?);
        let neg_w: Vec<Rat> = w.iter().map(|x| -x.clone()).collect();
        hs.push(halfspace_from_rational(&neg_w, &-Rat::one())?);
        let slice = Polytope::from_halfspaces(n, hs)?;
        Ok(slice.vertices().iter().map(|v| primitive_of_rat_vec(v)).collect())
    }

    /// Completeness, simpliciality and smoothness.
    ///
    /// Completeness combines the wall-pairing test (every codimension-one
    /// wall lies in exactly two maximal cones) with seeded random point
    /// coverage; a failed sample is a definitive refutation.
    pub fn properties(&self) -> FanProperties {
        *self.props.get_or_init(|| self.compute_properties())
    }

    fn compute_properties(&self) -> FanProperties {
        let n = self.ambient_dim;
        let simplicial = self.max_cones.iter().all(|c| self.cone_is_simplicial(c));
        let smooth = simplicial
            && self.max_cones.iter().all(|c| {
                let gens: Vec<Vec<Int>> = c.iter().map(|&i| self.rays[i].clone()).collect();
                minors_gcd_is_one(&gens, n)
            });

        let pure = self.max_cones.iter().all(|c| linalg::rank_rat(&self.cone_rays(c)) == n);
        let complete = pure && self.walls_paired() && self.sampled_coverage();
        FanProperties { complete, simplicial, smooth }
    }

    fn walls_paired(&self) -> bool {
        use std::collections::BTreeMap;
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &self.max_cones {
            for wall in self.cone_walls(cone) {
                *counts.entry(wall).or_insert(0) += 1;
            }
        }
        counts.values().all(|&c| c == 2)
    }

    /// Ray index sets of the codimension-one faces of a maximal cone.
    fn cone_walls(&self, cone: &[usize]) -> Vec<Vec<usize>> {
        if self.cone_is_simplicial(cone) {
            let mut out = Vec::with_capacity(cone.len());
            for drop in 0..cone.len() {
                let wall: Vec<usize> =
                    cone.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, &i)| i).collect();
                out.push(wall);
            }
            out
        } else {
            let gens = self.cone_rays(cone);
            cone_facets(self.ambient_dim, &gens)
                .into_iter()
                .map(|(_, tight)| tight.iter().map(|&k| cone[k]).collect())
                .collect()
        }
    }

    fn sampled_coverage(&self) -> bool {
        let n = self.ambient_dim;
        let samples = if n <= 3 { 200 } else { 1000 };
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        let cones_rat: Vec<Vec<Vec<Rat>>> =
            self.max_cones.iter().map(|c| self.cone_rays(c)).collect();
        for _ in 0..samples {
            let x: Vec<Rat> =
                (0..n).map(|_| crate::num::ratz(rng.random_range(-20..=20i64))).collect();
            if x.iter().all(|v| v.is_zero()) {
                continue;
            }
            let covered = cones_rat.iter().any(|gens| lp::in_cone(&x, gens, &Rat::zero()));
            if !covered {
                return false;
            }
        }
        true
    }
}

/// `gcd` of the maximal minors equals one: the rows extend to a ℤ-basis.
fn minors_gcd_is_one(gens: &[Vec<Int>], n: usize) -> bool {
    let k = gens.len();
    if k > n {
        return false;
    }
    let cols: Vec<usize> = (0..n).collect();
    let mut g = Int::zero();
    crate::polytope::for_each_combination(&cols, k, &mut |subset| {
        let minor: Vec<Vec<Int>> =
            gens.iter().map(|row| subset.iter().map(|&c| row[c].clone()).collect()).collect();
        g = g.gcd(&linalg::det_int(&minor));
    });
    g.is_one()
}

/// The normal fan of a full-dimensional polytope: rays are the primitive
/// facet normals (sorted), maximal cones collect the facets through each
/// vertex.
pub fn normal_fan(p: &Polytope) -> Result<Fan> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let mut rays: Vec<Vec<Int>> = p.facet_halfspaces().iter().map(|h| h.normal.clone()).collect();
    rays.sort_by(|a, b| lex_cmp_int(a, b));
    rays.dedup();
    let index_of = |normal: &[Int]| rays.iter().position(|r| r == normal).unwrap();
    let mut cones = Vec::new();
    for v in p.vertices() {
        let cone: Vec<usize> = p
            .facet_halfspaces()
            .iter()
            .filter(|h| h.slack(v).is_zero())
            .map(|h| index_of(&h.normal))
            .collect();
        cones.push(cone);
    }
    Fan::new(p.ambient_dim(), rays, cones)
}

/// Is the support function of `p` linear on every maximal cone of `fan`?
///
/// Test per cone: some vertex of `p` must minimize all of the cone's ray
/// generators simultaneously. Points are normal to every complete fan; the
/// empty polytope is normal to none.
pub fn is_normal_to(p: &Polytope, fan: &Fan) -> Result<bool> {
    if !fan.properties().complete {
        return Err(Error::IncompleteFan);
    }
    if p.is_empty() {
        return Ok(false);
    }
    if p.ambient_dim() != fan.ambient_dim {
        return Err(Error::DimensionMismatch(p.ambient_dim(), fan.ambient_dim));
    }
    for cone in &fan.max_cones {
        let minima: Vec<Rat> =
            cone.iter().map(|&i| p.support_value(&fan.rays[i]).expect("nonempty")).collect();
        let has_common_minimizer = p.vertices().iter().any(|v| {
            cone.iter().zip(&minima).all(|(&i, m)| dot_int_rat(&fan.rays[i], v) == *m)
        });
        if !has_common_minimizer {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Support numbers of a polytope normal to the fan: `aᵢ = -min ⟨x, vᵢ⟩`,
/// so that [`polytope_of`] inverts this exactly.
pub fn support_numbers(p: &Polytope, fan: &Fan) -> Result<Vec<Rat>> {
    if !is_normal_to(p, fan)? {
        return Err(Error::NotNormal);
    }
    fan.rays.iter().map(|r| Ok(-p.support_value(r)?)).collect()
}

/// `Δ(a) = {x : ⟨vᵢ, x⟩ ≥ -aᵢ}`. May be empty or lower-dimensional.
pub fn polytope_of(fan: &Fan, a: &[Rat]) -> Result<Polytope> {
    if a.len() != fan.rays.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} support numbers, got {}",
            fan.rays.len(),
            a.len()
        )));
    }
    let hs: Vec<HalfSpace> = fan
        .rays
        .iter()
        .zip(a)
        .map(|(r, ai)| HalfSpace { normal: r.clone(), offset: ai.clone() })
        .collect();
    Polytope::from_halfspaces(fan.ambient_dim, hs)
}

/// A virtual polytope: a support-number vector on a simplicial complete
/// fan. These are exactly the formal differences of polytopes normal to
/// the fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualPolytope {
    fan: Fan,
    support_numbers: Vec<Rat>,
}

impl VirtualPolytope {
    pub fn new(fan: Fan, support_numbers: Vec<Rat>) -> Result<Self> {
        let props = fan.properties();
        if !props.simplicial {
            return Err(Error::FanNotSimplicial);
        }
        if !props.complete {
            return Err(Error::FanNotComplete);
        }
        if support_numbers.len() != fan.rays.len() {
            return Err(Error::InvalidInput("support-number length mismatch".into()));
        }
        Ok(VirtualPolytope { fan, support_numbers })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn support_numbers(&self) -> &[Rat] {
        &self.support_numbers
    }

    pub fn add(&self, other: &VirtualPolytope) -> Result<VirtualPolytope> {
        if self.fan != other.fan {
            return Err(Error::FanMismatch);
        }
        Ok(VirtualPolytope {
            fan: self.fan.clone(),
            support_numbers: num::add_rat_vec(&self.support_numbers, &other.support_numbers),
        })
    }

    pub fn sub(&self, other: &VirtualPolytope) -> Result<VirtualPolytope> {
        if self.fan != other.fan {
            return Err(Error::FanMismatch);
        }
        Ok(VirtualPolytope {
            fan: self.fan.clone(),
            support_numbers: num::sub_rat_vec(&self.support_numbers, &other.support_numbers),
        })
    }

    pub fn scale(&self, c: &Rat) -> VirtualPolytope {
        VirtualPolytope {
            fan: self.fan.clone(),
            support_numbers: num::scale_rat_vec(&self.support_numbers, c),
        }
    }

    /// Writes the virtual polytope as a difference `P - P'` of genuine
    /// polytopes normal to the fan, with `P' = Δ(M·(1,…,1))` for the
    /// smallest `M ≤ bound` such that both offset vectors have exact
    /// support numbers on the fan.
    pub fn realize(&self, bound: u32) -> Result<(Polytope, Polytope)> {
        for m in 0..=bound {
            let shift = num::ratz(m as i64);
            let a_shifted: Vec<Rat> = self.support_numbers.iter().map(|x| x + &shift).collect();
            let ones_shifted = vec![shift.clone(); self.fan.rays.len()];
            let p = polytope_of(&self.fan, &a_shifted)?;
            let p_prime = polytope_of(&self.fan, &ones_shifted)?;
            let ok = |poly: &Polytope, target: &[Rat]| -> bool {
                !poly.is_empty()
                    && support_numbers(poly, &self.fan).ok().as_deref() == Some(target)
            };
            if ok(&p, &a_shifted) && ok(&p_prime, &ones_shifted) {
                return Ok((p, p_prime));
            }
        }
        Err(Error::NoRealizationFound(bound))
    }
}

/// H-representation of a simplicial cone (linearly independent generators):
/// inequality normals dual to the generators plus the span equations.
pub(crate) fn simplicial_cone_hrep(n: usize, gens: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    // Rows u_i with ⟨u_i, v_j⟩ = δ_ij: u_i = y V with y solving (V Vᵀ) y = e_i.
    let vvt = linalg::mat_mul_rat(gens, &linalg::transpose_rat(gens));
    let k = gens.len();
    let mut ineqs = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[i] = Rat::one();
        let y = linalg::solve_square_rat(&vvt, &e).expect("independent generators");
        let mut u = vec![Rat::zero(); n];
        for (cj, yj) in y.iter().enumerate() {
            for (uc, gc) in u.iter_mut().zip(&gens[cj]) {
                *uc += yj * gc;
            }
        }
        ineqs.push(u);
    }
    let eqs = linalg::kernel_basis_rat(gens, n);
    (ineqs, eqs)
}

/// Facets of `cone(gens)` inside its span: primitive normals with the tight
/// generator indices. Brute-force over hyperplanes through zero spanned by
/// generator subsets.
pub(crate) fn cone_facets(n: usize, gens: &[Vec<Rat>]) -> Vec<(Vec<Int>, Vec<usize>)> {
    let span_dim = linalg::rank_rat(gens);
    if span_dim == 0 {
        return Vec::new();
    }
    let idx: Vec<usize> = (0..gens.len()).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out: Vec<(Vec<Int>, Vec<usize>)> = Vec::new();
    crate::polytope::for_each_combination(&idx, span_dim - 1, &mut |subset| {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| gens[i].clone()).collect();
        // Normal inside the span: kernel of the rows and of the span
        // equations together.
        let mut sys = rows.clone();
        for e in linalg::kernel_basis_rat(gens, n) {
            sys.push(e);
        }
        let kernel = linalg::kernel_basis_rat(&sys, n);
        if kernel.len() != 1 {
            return;
        }
        let mut g = kernel.into_iter().next().unwrap();
        let mut lower = false;
        let mut upper = false;
        for v in gens {
            match num::dot_rat(&g, v).cmp(&Rat::zero()) {
                std::cmp::Ordering::Less => lower = true,
                std::cmp::Ordering::Greater => upper = true,
                std::cmp::Ordering::Equal => {}
            }
            if lower && upper {
                return;
            }
        }
        if lower {
            g = g.iter().map(|x| -x.clone()).collect();
        }
        let prim = primitive_of_rat_vec(&g);
        if !seen.insert(prim.clone()) {
            return;
        }
        let tight: Vec<usize> =
            (0..gens.len()).filter(|&i| dot_int_rat(&prim, &gens[i]).is_zero()).collect();
        out.push((prim, tight));
    });
    out.sort_by(|a, b| lex_cmp_int(&a.0, &b.0));
    out
}

/// Decomposes the cone `{x : Ax ≥ 0}` into a lineality basis and the
/// extreme rays of its pointed part (all primitive integer vectors).
///
/// The pointed part is sliced by a functional strictly positive on it and
/// its vertices are enumerated exactly in quotient coordinates.
pub(crate) fn cone_generators_from_hrep(
    n: usize,
    ineqs: &[Vec<Int>],
) -> Result<(Vec<Vec<Int>>, Vec<Vec<Int>>)> {
    if ineqs.is_empty() {
        let lineality = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        return Ok((lineality, Vec::new()));
    }
    let a_rat: Vec<Vec<Rat>> = ineqs.iter().map(|r| int_to_rat_vec(r)).collect();
    let lineality_rat = linalg::kernel_basis_rat(&a_rat, n);
    let lineality: Vec<Vec<Int>> = lineality_rat.iter().map(|l| primitive_of_rat_vec(l)).collect();
    // Pointed part lives in W = (lineality)⊥; parametrize x = Wᵀ y.
    let w_basis = linalg::kernel_basis_rat(&lineality_rat, n);
    if w_basis.is_empty() {
        return Ok((lineality, Vec::new()));
    }
    let wt = linalg::transpose_rat(&w_basis);
    let a_w: Vec<Vec<Rat>> = a_rat.iter().map(|row| linalg::mat_vec_rat(&w_basis, row)).collect();
    let mut slice_hs = Vec::new();
    for row in &a_w {
        if row.iter().all(|x| x.is_zero()) {
            continue;
        }
        slice_hs.push(halfspace_from_rational(row, &Rat::zero())?);
    }
    // Sum of the projected inequality rows is strictly positive on the
    // pointed part, so the slice at value 1 captures every extreme ray.
    let w0: Vec<Rat> = {
        let dimw = w_basis.len();
        let mut acc = vec![Rat::zero(); dimw];
        for row in &a_w {
            for (a, r) in acc.iter_mut().zip(row) {
                *a += r;
            }
        }
        acc
    };
    if w0.iter().all(|x| x.is_zero()) {
        return Ok((lineality, Vec::new()));
    }
    slice_hs.push(halfspace_from_rational(&w0, &Rat::one())?);
    let neg_w0: Vec<Rat> = w0.iter().map(|x| -x.clone()).collect();
    slice_hs.push(halfspace_from_rational(&neg_w0, &-Rat::one())?);
    let slice = Polytope::from_halfspaces(w_basis.len(), slice_hs)?;
    let rays: Vec<Vec<Int>> = slice
        .vertices()
        .iter()
        .map(|y| {
            let x = linalg::mat_vec_rat(&wt, y);
            primitive_of_rat_vec(&x)
        })
        .collect();
    Ok((lineality, rays))
}
