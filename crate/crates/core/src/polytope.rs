//! Exact rational convex polytopes with synchronized H- and V-representations.
//!
//! A `Polytope` is canonical: vertices are the extreme points sorted
//! lexicographically, facet half-spaces carry the unique primitive integer
//! normal inside the affine span's direction space, and the affine span is
//! cut out by a reduced-echelon system of integer equations. Equality is
//! therefore plain structural comparison.
//!
//! Lower-dimensional polytopes are first-class values: the span is tracked
//! explicitly and relative-interior tests are span-relative. The empty
//! polytope is a valid value with no vertices.
//!
//! Vertex and facet enumeration are brute-force over subsets, which is exact
//! and entirely adequate at this scale (ambient dimension ≤ ~6, facet counts
//! ≤ ~40). See the module tests for the worked examples.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp;
use crate::num::{
    self, denom_lcm, dot_int_rat, dot_rat, int_to_rat_vec, lex_cmp_int, lex_cmp_rat,
    primitive_int_vec, primitive_of_rat_vec, Int, Rat,
};

/// Closed half-space `{x : ⟨normal, x⟩ ≥ -offset}` with a primitive integer
/// normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<Int>,
    pub offset: Rat,
}

impl HalfSpace {
    /// Builds a half-space, scaling the normal to its primitive
    /// representative (the offset is rescaled to keep the same set).
    pub fn new(normal: Vec<Int>, offset: Rat) -> Result<Self> {
        if normal.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidInput("half-space normal must be nonzero".into()));
        }
        let prim = primitive_int_vec(&normal);
        if prim == normal {
            return Ok(HalfSpace { normal, offset });
        }
        // normal = g * prim with g > 0, so ⟨prim, x⟩ ≥ -offset/g.
        let g = Rat::new(normal[first_nonzero(&normal)].clone(), prim[first_nonzero(&prim)].clone());
        Ok(HalfSpace { normal: prim, offset: offset / g })
    }

    /// `⟨normal, x⟩ + offset`; the point satisfies the half-space iff ≥ 0.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot_int_rat(&self.normal, x) + &self.offset
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn strictly_contains(&self, x: &[Rat]) -> bool {
        self.slack(x).is_positive()
    }

    fn sort_key(&self) -> (Vec<Int>, Rat) {
        (self.normal.clone(), self.offset.clone())
    }
}

fn first_nonzero(v: &[Int]) -> usize {
    v.iter().position(|x| !x.is_zero()).expect("nonzero vector")
}

/// Membership mode for [`Polytope::contains`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContainsMode {
    BoundaryInclusive,
    RelativeInterior,
}

/// Canonical exact rational polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    ambient_dim: usize,
    /// Extreme points, lexicographically sorted. Empty ⇔ empty polytope.
    vertices: Vec<Vec<Rat>>,
    /// Facet half-spaces of the hull inside the affine span; normals lie in
    /// the span's direction space.
    facets: Vec<HalfSpace>,
    /// Affine span as `⟨e, x⟩ = c` with primitive integer `e` (canonical
    /// reduced-echelon kernel basis of the direction space).
    equations: Vec<(Vec<Int>, Rat)>,
    /// Canonical (reduced-echelon) basis of the span's direction space.
    span_basis: Vec<Vec<Rat>>,
    /// Affine dimension; 0 for points and for the empty polytope.
    dim: usize,
}

impl Polytope {
    pub fn empty(ambient_dim: usize) -> Self {
        Polytope {
            ambient_dim,
            vertices: Vec::new(),
            facets: Vec::new(),
            equations: Vec::new(),
            span_basis: Vec::new(),
            dim: 0,
        }
    }

    /// Convex hull of a point set (the `halfspaces` direction): canonical
    /// polytope with an irredundant H-representation. Lower-dimensional
    /// hulls carry their span equations as opposite half-space pairs in
    /// [`Polytope::hrep`].
    pub fn from_points(ambient_dim: usize, points: Vec<Vec<Rat>>) -> Result<Self> {
        for p in &points {
            if p.len() != ambient_dim {
                return Err(Error::DimensionMismatch(ambient_dim, p.len()));
            }
        }
        Ok(canonicalize(ambient_dim, points, false, None))
    }

    /// Vertex enumeration from a half-space system (the `vertices`
    /// direction).
    ///
    /// Returns the empty polytope for infeasible systems and
    /// `UnboundedRegion` when the feasible set has a recession direction.
    pub fn from_halfspaces(ambient_dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        Self::from_halfspaces_impl(ambient_dim, halfspaces, true)
    }

    /// Vertex enumeration for systems whose recession cone is already known
    /// to be trivial (family fibers: the cone depends only on the fixed
    /// normals and is checked once at family construction).
    pub(crate) fn from_halfspaces_presumed_bounded(
        ambient_dim: usize,
        halfspaces: Vec<HalfSpace>,
    ) -> Result<Self> {
        Self::from_halfspaces_impl(ambient_dim, halfspaces, false)
    }

    fn from_halfspaces_impl(
        ambient_dim: usize,
        halfspaces: Vec<HalfSpace>,
        check_recession: bool,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        let mut hs = Vec::with_capacity(halfspaces.len());
        for h in halfspaces {
            if h.normal.len() != ambient_dim {
                return Err(Error::DimensionMismatch(ambient_dim, h.normal.len()));
            }
            hs.push(h);
        }
        hs.sort_by_key(|h| h.sort_key());
        hs.dedup();
        let n = ambient_dim;

        if check_recession {
            if let Some(dir) = recession_direction(n, &hs) {
                let constraints: Vec<lp::Constraint> = hs
                    .iter()
                    .map(|h| {
                        lp::Constraint::new(
                            int_to_rat_vec(&h.normal),
                            lp::Rel::Ge,
                            -h.offset.clone(),
                        )
                    })
                    .collect();
                // The empty set is bounded no matter what the recession
                // cone of the inequality system looks like.
                if lp::feasible_point(n, &constraints).is_none() {
                    return Ok(Polytope::empty(n));
                }
                return Err(Error::UnboundedRegion(direction_to_i64(&dir)));
            }
        }

        // Candidate vertices: solutions of full-rank n-subsets that satisfy
        // the whole system. Every vertex of the region arises this way, and
        // with a trivial recession cone a nonempty region has a vertex, so
        // no candidates means the system is infeasible.
        let mut candidates: Vec<Vec<Rat>> = Vec::new();
        let idx: Vec<usize> = (0..hs.len()).collect();
        for_each_combination(&idx, n, &mut |subset| {
            let a: Vec<Vec<Rat>> = subset.iter().map(|&i| int_to_rat_vec(&hs[i].normal)).collect();
            let b: Vec<Rat> = subset.iter().map(|&i| -hs[i].offset.clone()).collect();
            if let Some(x) = linalg::solve_square_rat(&a, &b) {
                if hs.iter().all(|h| h.contains(&x)) {
                    candidates.push(x);
                }
            }
        });
        if candidates.is_empty() {
            debug_assert!(
                !check_recession || {
                    let constraints: Vec<lp::Constraint> = hs
                        .iter()
                        .map(|h| {
                            lp::Constraint::new(
                                int_to_rat_vec(&h.normal),
                                lp::Rel::Ge,
                                -h.offset.clone(),
                            )
                        })
                        .collect();
                    lp::feasible_point(n, &constraints).is_none()
                },
                "bounded nonempty regions have vertices"
            );
            return Ok(Polytope::empty(n));
        }
        Ok(canonicalize(ambient_dim, candidates, true, Some(&hs)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Affine dimension. Points have dimension 0; so does the empty
    /// polytope (check [`Polytope::is_empty`] to distinguish them).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.is_empty() && self.dim == self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// Facet half-spaces (span-relative normals), without the span
    /// equations.
    pub fn facet_halfspaces(&self) -> &[HalfSpace] {
        &self.facets
    }

    /// Affine-span equations `⟨e, x⟩ = c`.
    pub fn span_equations(&self) -> &[(Vec<Int>, Rat)] {
        &self.equations
    }

    /// Full canonical H-representation: facet half-spaces plus the span
    /// equations as opposite half-space pairs, sorted.
    pub fn hrep(&self) -> Vec<HalfSpace> {
        let mut out = self.facets.clone();
        for (e, c) in &self.equations {
            out.push(HalfSpace { normal: e.clone(), offset: -c.clone() });
            out.push(HalfSpace { normal: num::neg_int_vec(e), offset: c.clone() });
        }
        out.sort_by_key(|h| h.sort_key());
        out
    }

    /// Minkowski sum: hull of all pairwise vertex sums. The sum with an
    /// empty polytope is empty.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty(self.ambient_dim));
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                sums.push(num::add_rat_vec(p, q));
            }
        }
        Ok(canonicalize(self.ambient_dim, sums, false, None))
    }

    /// Support value `min{⟨x, ξ⟩ : x ∈ P}`, exact over the vertices.
    pub fn support_value(&self, xi: &[Int]) -> Result<Rat> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        assert_eq!(xi.len(), self.ambient_dim);
        Ok(self
            .vertices
            .iter()
            .map(|v| dot_int_rat(xi, v))
            .min()
            .expect("nonempty vertex set"))
    }

    /// Vertex-wise scaling by a nonnegative rational; `scale(P, 0)` is the
    /// origin point (the empty polytope stays empty).
    pub fn scale(&self, c: &Rat) -> Result<Polytope> {
        if c.is_negative() {
            return Err(Error::NegativeScalar);
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if c.is_zero() {
            return Ok(canonicalize(
                self.ambient_dim,
                vec![vec![Rat::zero(); self.ambient_dim]],
                true,
                None,
            ));
        }
        // Positive scaling preserves the whole canonical structure.
        Ok(Polytope {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.iter().map(|v| num::scale_rat_vec(v, c)).collect(),
            facets: self
                .facets
                .iter()
                .map(|h| HalfSpace { normal: h.normal.clone(), offset: &h.offset * c })
                .collect(),
            equations: self.equations.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
            span_basis: self.span_basis.clone(),
            dim: self.dim,
        })
    }

    /// Translation by a rational vector.
    pub fn translate(&self, t: &[Rat]) -> Result<Polytope> {
        if t.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(self.ambient_dim, t.len()));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        Ok(Polytope {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.iter().map(|v| num::add_rat_vec(v, t)).collect(),
            facets: self
                .facets
                .iter()
                .map(|h| HalfSpace {
                    normal: h.normal.clone(),
                    offset: &h.offset - dot_int_rat(&h.normal, t),
                })
                .collect(),
            equations: self
                .equations
                .iter()
                .map(|(e, c)| (e.clone(), c + dot_int_rat(e, t)))
                .collect(),
            span_basis: self.span_basis.clone(),
            dim: self.dim,
        })
    }

    /// Exact membership test. Relative-interior mode requires every facet
    /// inequality to hold strictly and the span equations to hold exactly.
    pub fn contains(&self, x: &[Rat], mode: ContainsMode) -> bool {
        assert_eq!(x.len(), self.ambient_dim, "point dimension mismatch");
        if self.is_empty() {
            return false;
        }
        if !self.equations.iter().all(|(e, c)| dot_int_rat(e, x) == *c) {
            return false;
        }
        match mode {
            ContainsMode::BoundaryInclusive => self.facets.iter().all(|h| h.contains(x)),
            ContainsMode::RelativeInterior => self.facets.iter().all(|h| h.strictly_contains(x)),
        }
    }

    /// Euclidean volume normalized so the unit cube of ℤⁿ has volume 1.
    /// Lower-dimensional polytopes have volume 0.
    pub fn volume(&self) -> Rat {
        if self.is_empty() || self.dim < self.ambient_dim {
            return Rat::zero();
        }
        let n = self.ambient_dim;
        let mut total = Rat::zero();
        for simplex in self.triangulate() {
            let rows: Vec<Vec<Rat>> =
                (1..=n).map(|i| num::sub_rat_vec(&simplex[i], &simplex[0])).collect();
            total += linalg::det_rat(&rows).abs();
        }
        let mut fact = Int::one();
        for k in 2..=n {
            fact *= Int::from(k as u64);
        }
        total / Rat::from_integer(fact)
    }

    /// Fan triangulation from the lexicographically smallest vertex.
    /// Simplices are returned in ambient coordinates with `dim + 1` points.
    fn triangulate(&self) -> Vec<Vec<Vec<Rat>>> {
        if self.dim == 0 {
            return vec![vec![self.vertices[0].clone()]];
        }
        let apex = &self.vertices[0];
        let mut out = Vec::new();
        for (_, facet) in self.facet_polytopes() {
            // Skip facets through the apex; the rest are cone bases.
            if facet.vertices.iter().any(|v| v == apex) {
                continue;
            }
            for mut s in facet.triangulate() {
                s.push(apex.clone());
                out.push(s);
            }
        }
        out
    }

    /// Facet sub-polytopes paired with their half-spaces, for any dimension.
    fn facet_polytopes(&self) -> Vec<(HalfSpace, Polytope)> {
        self.facets
            .iter()
            .map(|h| {
                let tight: Vec<Vec<Rat>> = self
                    .vertices
                    .iter()
                    .filter(|v| h.slack(v).is_zero())
                    .cloned()
                    .collect();
                (h.clone(), canonicalize(self.ambient_dim, tight, true, None))
            })
            .collect()
    }

    /// Facets of a full-dimensional polytope as `(primitive inward normal,
    /// facet polytope)` pairs, one per irredundant half-space.
    pub fn facets(&self) -> Result<Vec<(Vec<Int>, Polytope)>> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional { dim: self.dim, ambient: self.ambient_dim });
        }
        Ok(self
            .facet_polytopes()
            .into_iter()
            .map(|(h, p)| (h.normal, p))
            .collect())
    }

    /// Integer bounding box `[lo, hi]` of the vertices, or `None` if empty.
    pub fn integer_bounding_box(&self) -> Option<(Vec<Int>, Vec<Int>)> {
        if self.is_empty() {
            return None;
        }
        let n = self.ambient_dim;
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for c in 0..n {
            let min = self.vertices.iter().map(|v| &v[c]).min().unwrap();
            let max = self.vertices.iter().map(|v| &v[c]).max().unwrap();
            lo.push(num::ceil_rat(min));
            hi.push(num::floor_rat(max));
        }
        Some((lo, hi))
    }
}

/// Lattice-normalized `(n-1)`-volume of a facet lying in the hyperplane
/// `⟨v, x⟩ = c` with `v` primitive.
///
/// The facet is mapped into coordinates of an integral basis of `v⊥ ∩ ℤⁿ`
/// (computed by Hermite elimination) and measured there, so a facet spanned
/// by lattice basis vectors of the hyperplane has volume 1. For segments in
/// the plane this is the lattice length; single points count as 1.
pub fn facet_lattice_volume(facet: &Polytope, normal: &[Int]) -> Result<Rat> {
    let n = facet.ambient_dim();
    if normal.len() != n {
        return Err(Error::DimensionMismatch(n, normal.len()));
    }
    if primitive_int_vec(normal) != normal || normal.iter().all(|x| x.is_zero()) {
        return Err(Error::NotInHyperplane);
    }
    if facet.is_empty() {
        return Ok(Rat::zero());
    }
    let c0 = dot_int_rat(normal, &facet.vertices()[0]);
    if facet.vertices().iter().any(|v| dot_int_rat(normal, v) != c0) {
        return Err(Error::NotInHyperplane);
    }
    if n == 1 {
        // The hyperplane is the single point; 0-dimensional volume is 1.
        return Ok(Rat::one());
    }
    let basis = linalg::hyperplane_lattice_basis(normal); // (n-1) × n
    let base = facet.vertices()[0].clone();
    // Solve basisᵀ t = u - base for each vertex.
    let bt: Vec<Vec<Rat>> = (0..n)
        .map(|row| basis.iter().map(|b| Rat::from_integer(b[row].clone())).collect())
        .collect();
    let mut mapped = Vec::with_capacity(facet.vertices().len());
    for u in facet.vertices() {
        let rhs = num::sub_rat_vec(u, &base);
        let t = linalg::solve_rat(&bt, &rhs).ok_or(Error::NotInHyperplane)?;
        mapped.push(t);
    }
    let in_lattice_coords = canonicalize(n - 1, mapped, true, None);
    Ok(in_lattice_coords.volume())
}

/// Direction of unboundedness of `{x : ⟨vᵢ, x⟩ ≥ -aᵢ}`, if any.
///
/// The recession cone `{Ax ≥ 0}` is nontrivial iff the normals do not span
/// (a kernel line) or some `x` gives `Ax ≥ 0`, `Ax ≠ 0` (found by one
/// phase-1 solve with the normalization `Σᵢ ⟨vᵢ, x⟩ = 1`).
pub(crate) fn recession_direction(n: usize, hs: &[HalfSpace]) -> Option<Vec<Rat>> {
    let normals: Vec<Vec<Rat>> = hs.iter().map(|h| int_to_rat_vec(&h.normal)).collect();
    if linalg::rank_rat(&normals) < n {
        let kernel = linalg::kernel_basis_rat(&normals, n);
        return kernel.into_iter().next();
    }
    let mut cons: Vec<lp::Constraint> = normals
        .iter()
        .map(|row| lp::Constraint::new(row.clone(), lp::Rel::Ge, Rat::zero()))
        .collect();
    let mut total = vec![Rat::zero(); n];
    for row in &normals {
        for (t, x) in total.iter_mut().zip(row) {
            *t += x;
        }
    }
    cons.push(lp::Constraint::new(total, lp::Rel::Eq, Rat::one()));
    lp::feasible_point(n, &cons)
}

pub(crate) fn direction_to_i64(dir: &[Rat]) -> Vec<i64> {
    use num_traits::ToPrimitive;
    primitive_of_rat_vec(dir).iter().map(|x| x.to_i64().unwrap_or(0)).collect()
}

/// Calls `f` on every `k`-combination of `items`.
pub(crate) fn for_each_combination<T: Copy>(items: &[T], k: usize, f: &mut dyn FnMut(&[T])) {
    if k > items.len() {
        return;
    }
    let mut chosen: Vec<T> = Vec::with_capacity(k);
    fn rec<T: Copy>(items: &[T], k: usize, start: usize, chosen: &mut Vec<T>, f: &mut dyn FnMut(&[T])) {
        if chosen.len() == k {
            f(chosen);
            return;
        }
        let need = k - chosen.len();
        for i in start..=items.len() - need {
            chosen.push(items[i]);
            rec(items, k, i + 1, chosen, f);
            chosen.pop();
        }
    }
    rec(items, k, 0, &mut chosen, f);
}

/// Canonical construction from a candidate point set.
///
/// `extreme_known` skips the convex-position filter (callers guarantee the
/// points are vertices). `facet_hint` supplies half-spaces known to define
/// the set; facets are then read off by tightness instead of enumerating
/// point subsets.
fn canonicalize(
    ambient: usize,
    mut points: Vec<Vec<Rat>>,
    extreme_known: bool,
    facet_hint: Option<&[HalfSpace]>,
) -> Polytope {
    points.sort_by(|a, b| lex_cmp_rat(a, b));
    points.dedup();
    if points.is_empty() {
        return Polytope::empty(ambient);
    }

    // Affine span: canonical reduced-echelon basis of the direction space.
    let p0 = points[0].clone();
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| num::sub_rat_vec(p, &p0)).collect();
    let (echelon, pivots) = linalg::rref(&diffs);
    let span_basis: Vec<Vec<Rat>> = echelon[..pivots.len()].to_vec();
    let d = span_basis.len();

    // Span equations from the canonical kernel basis of the direction space.
    let mut equations: Vec<(Vec<Int>, Rat)> = linalg::kernel_basis_rat(&span_basis, ambient)
        .iter()
        .map(|e| {
            let mut prim = primitive_of_rat_vec(e);
            if num::leading_sign(&prim) < 0 {
                prim = num::neg_int_vec(&prim);
            }
            let c = dot_int_rat(&prim, &p0);
            (prim, c)
        })
        .collect();
    equations.sort_by(|a, b| lex_cmp_int(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));

    if d == 0 {
        return Polytope {
            ambient_dim: ambient,
            vertices: points,
            facets: Vec::new(),
            equations,
            span_basis,
            dim: 0,
        };
    }

    // Map into span coordinates: x = p0 + Bᵀ y.
    let bt: Vec<Vec<Rat>> = linalg::transpose_rat(&span_basis);
    let ys: Vec<Vec<Rat>> = points
        .iter()
        .map(|p| {
            linalg::solve_rat(&bt, &num::sub_rat_vec(p, &p0)).expect("point lies in its own span")
        })
        .collect();

    // Extreme-point filter (LP): drop points inside the hull of the rest.
    let (points, ys): (Vec<Vec<Rat>>, Vec<Vec<Rat>>) = if extreme_known {
        (points, ys)
    } else {
        let mut keep_pts = Vec::new();
        let mut keep_ys = Vec::new();
        for i in 0..points.len() {
            let others: Vec<Vec<Rat>> = ys
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, y)| y.clone())
                .collect();
            if !lp::in_convex_hull(&ys[i], &others) {
                keep_pts.push(points[i].clone());
                keep_ys.push(ys[i].clone());
            }
        }
        (keep_pts, keep_ys)
    };

    let facets = match facet_hint {
        Some(hint) => facets_from_hint(d, &points, &span_basis, &bt, hint),
        None => facets_by_enumeration(d, &points, &ys, &span_basis, &bt),
    };

    Polytope { ambient_dim: ambient, vertices: points, facets, equations, span_basis, dim: d }
}

/// Projection of an ambient vector onto the span direction space, as a
/// rational vector: `Bᵀ (B Bᵀ)⁻¹ B v`.
fn project_to_span(span_basis: &[Vec<Rat>], bt: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    let bv = linalg::mat_vec_rat(span_basis, v);
    let m = linalg::mat_mul_rat(span_basis, bt);
    let y = linalg::solve_square_rat(&m, &bv).expect("Gram matrix of a basis is invertible");
    linalg::mat_vec_rat(bt, &y)
}

/// Facets read off a defining half-space system: a half-space supports a
/// facet iff its tight vertex set has affine rank `d - 1`. The facet normal
/// is re-projected into the span direction space, which makes it canonical.
fn facets_from_hint(
    d: usize,
    points: &[Vec<Rat>],
    span_basis: &[Vec<Rat>],
    bt: &[Vec<Rat>],
    hint: &[HalfSpace],
) -> Vec<HalfSpace> {
    let mut seen = BTreeSet::new();
    let mut facets = Vec::new();
    for h in hint {
        let tight: Vec<&Vec<Rat>> = points.iter().filter(|v| h.slack(v).is_zero()).collect();
        if tight.is_empty() {
            continue;
        }
        let diffs: Vec<Vec<Rat>> =
            tight[1..].iter().map(|p| num::sub_rat_vec(p, tight[0])).collect();
        if linalg::rank_rat(&diffs) + 1 != d {
            continue; // redundant, or a span equation
        }
        let proj = project_to_span(span_basis, bt, &int_to_rat_vec(&h.normal));
        if proj.iter().all(|x| x.is_zero()) {
            continue;
        }
        let prim = primitive_of_rat_vec(&proj);
        let c = dot_int_rat(&prim, tight[0]);
        let key = (prim.clone(), c.clone());
        if seen.insert(key) {
            facets.push(HalfSpace { normal: prim, offset: -c });
        }
    }
    facets.sort_by_key(|h| h.sort_key());
    debug_assert!(facets.iter().all(|h| points.iter().all(|p| h.contains(p))));
    facets
}

/// Brute-force facet enumeration over `d`-subsets of the extreme points in
/// span coordinates, pulled back to canonical ambient half-spaces.
fn facets_by_enumeration(
    d: usize,
    points: &[Vec<Rat>],
    ys: &[Vec<Rat>],
    span_basis: &[Vec<Rat>],
    bt: &[Vec<Rat>],
) -> Vec<HalfSpace> {
    // Lᵀ = Bᵀ (B Bᵀ)⁻¹ pulls a span-coordinate normal back to the ambient
    // normal lying inside the direction space.
    let m = linalg::mat_mul_rat(span_basis, bt);
    let minv = {
        let mm = m.len();
        let mut cols = Vec::with_capacity(mm);
        for j in 0..mm {
            let mut e = vec![Rat::zero(); mm];
            e[j] = Rat::one();
            cols.push(linalg::solve_square_rat(&m, &e).expect("Gram matrix invertible"));
        }
        linalg::transpose_rat(&cols) // minv[i][j]
    };
    let lt = linalg::mat_mul_rat(bt, &minv); // n × d

    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut facets: Vec<HalfSpace> = Vec::new();
    let idx: Vec<usize> = (0..points.len()).collect();
    for_each_combination(&idx, d, &mut |subset| {
        let base = &ys[subset[0]];
        let rows: Vec<Vec<Rat>> =
            subset[1..].iter().map(|&i| num::sub_rat_vec(&ys[i], base)).collect();
        let kernel = linalg::kernel_basis_rat(&rows, d);
        if kernel.len() != 1 {
            return; // affinely dependent subset, or not a hyperplane
        }
        let mut g = kernel.into_iter().next().unwrap();
        let c = dot_rat(&g, base);
        let mut lower = false;
        let mut upper = false;
        for y in ys {
            match dot_rat(&g, y).cmp(&c) {
                std::cmp::Ordering::Less => lower = true,
                std::cmp::Ordering::Greater => upper = true,
                std::cmp::Ordering::Equal => {}
            }
            if lower && upper {
                return; // separates the point set: not a facet
            }
        }
        if lower {
            g = g.iter().map(|x| -x).collect();
        }
        // Dedupe on the primitive (g, c) pair in span coordinates.
        let c_oriented = dot_rat(&g, base);
        let mut key_vec = g.clone();
        key_vec.push(c_oriented.clone());
        let key = primitive_of_rat_vec(&key_vec);
        if !seen.insert(key) {
            return;
        }
        let w = linalg::mat_vec_rat(&lt, &g);
        let prim = primitive_of_rat_vec(&w);
        let tight_pt = &points[subset[0]];
        let c_amb = dot_int_rat(&prim, tight_pt);
        facets.push(HalfSpace { normal: prim, offset: -c_amb });
    });
    facets.sort_by_key(|h| h.sort_key());
    debug_assert!(facets.iter().all(|h| points.iter().all(|p| h.contains(p))));
    facets
}

/// Scales a rational half-space `⟨w, x⟩ ≥ c` to a canonical integer
/// [`HalfSpace`].
pub fn halfspace_from_rational(w: &[Rat], c: &Rat) -> Result<HalfSpace> {
    let l = denom_lcm(w);
    let ints: Vec<Int> = w.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let prim = primitive_int_vec(&ints);
    if prim.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidInput("half-space normal must be nonzero".into()));
    }
    // scale factor from w to prim
    let j = first_nonzero(&prim);
    let s = Rat::from_integer(prim[j].clone()) / &w[j];
    Ok(HalfSpace { normal: prim, offset: -(c * s) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_vec, ratz};

    fn hs(normal: &[i64], offset: i64) -> HalfSpace {
        HalfSpace::new(num::int_vec(normal), ratz(offset)).unwrap()
    }

    fn points(ps: &[&[i64]]) -> Vec<Vec<Rat>> {
        ps.iter().map(|p| rat_vec(p)).collect()
    }

    /// The triangle `conv{(-1,-1),(2,-1),(-1,2)}` = `Δ(1,1,1)` on the ℙ² fan.
    fn p2_triangle() -> Polytope {
        Polytope::from_halfspaces(2, vec![hs(&[1, 0], 1), hs(&[0, 1], 1), hs(&[-1, -1], 1)])
            .unwrap()
    }

    fn unit_square() -> Polytope {
        Polytope::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, 0], 1), hs(&[0, -1], 1)],
        )
        .unwrap()
    }

    #[test]
    fn unit_segment_vertices() {
        let p = Polytope::from_halfspaces(1, vec![hs(&[1], 0), hs(&[-1], 1)]).unwrap();
        assert_eq!(p.vertices(), &[rat_vec(&[0]), rat_vec(&[1])]);
        assert_eq!(p.dim(), 1);
    }

    #[test]
    fn halfspace_normalization() {
        // {2x + 4y ≥ -3} = {x + 2y ≥ -3/2}
        let h = HalfSpace::new(num::int_vec(&[2, 4]), ratz(3)).unwrap();
        assert_eq!(h.normal, num::int_vec(&[1, 2]));
        assert_eq!(h.offset, rat(3, 2));
        assert!(HalfSpace::new(num::int_vec(&[0, 0]), ratz(1)).is_err());
    }

    /// Independent oracle for the ℙ² triangle: intersect every facet pair
    /// and keep the feasible intersection points.
    #[test]
    fn p2_triangle_vertices_match_pairwise_oracle() {
        let hs_list = vec![hs(&[1, 0], 1), hs(&[0, 1], 1), hs(&[-1, -1], 1)];
        let mut oracle = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                let a = vec![int_to_rat_vec(&hs_list[i].normal), int_to_rat_vec(&hs_list[j].normal)];
                let b = vec![-hs_list[i].offset.clone(), -hs_list[j].offset.clone()];
                if let Some(x) = linalg::solve_square_rat(&a, &b) {
                    if hs_list.iter().all(|h| h.contains(&x)) {
                        oracle.push(x);
                    }
                }
            }
        }
        oracle.sort_by(|a, b| lex_cmp_rat(a, b));
        oracle.dedup();
        let p = p2_triangle();
        assert_eq!(p.vertices(), &oracle[..]);
        assert_eq!(
            p.vertices(),
            &[rat_vec(&[-1, -1]), rat_vec(&[-1, 2]), rat_vec(&[2, -1])]
        );
    }

    #[test]
    fn infeasible_system_is_empty() {
        let p = Polytope::from_halfspaces(1, vec![hs(&[1], -1), hs(&[-1], 0)]).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn unbounded_region_detected() {
        let err = Polytope::from_halfspaces(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0)]).unwrap_err();
        assert!(matches!(err, Error::UnboundedRegion(_)));
    }

    #[test]
    fn standard_simplex_halfspaces() {
        let p = Polytope::from_points(2, points(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let hrep = p.hrep();
        assert_eq!(hrep, vec![hs(&[-1, -1], 1), hs(&[0, 1], 0), hs(&[1, 0], 0)]);
    }

    #[test]
    fn single_point_becomes_equality_pairs() {
        let p = Polytope::from_points(2, points(&[&[3, 4]])).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.hrep().len(), 4); // two opposite pairs
        assert!(p.contains(&rat_vec(&[3, 4]), ContainsMode::RelativeInterior));
        assert!(!p.contains(&rat_vec(&[3, 5]), ContainsMode::BoundaryInclusive));
    }

    #[test]
    fn minkowski_segments_add_lengths() {
        let a = Polytope::from_points(1, points(&[&[0], &[1]])).unwrap();
        let b = Polytope::from_points(1, points(&[&[0], &[2]])).unwrap();
        let s = a.minkowski_sum(&b).unwrap();
        assert_eq!(s.vertices(), &[rat_vec(&[0]), rat_vec(&[3])]);
    }

    #[test]
    fn minkowski_triangle_plus_segment() {
        let t = Polytope::from_points(2, points(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let s = Polytope::from_points(2, points(&[&[0, 0], &[1, 0]])).unwrap();
        let sum = t.minkowski_sum(&s).unwrap();
        let expected =
            Polytope::from_points(2, points(&[&[0, 0], &[2, 0], &[1, 1], &[0, 1]])).unwrap();
        assert_eq!(sum, expected);
        assert_eq!(sum.facet_halfspaces().len(), 4);
    }

    #[test]
    fn minkowski_with_point_translates() {
        let t = p2_triangle();
        let pt = Polytope::from_points(2, points(&[&[5, 7]])).unwrap();
        let sum = t.minkowski_sum(&pt).unwrap();
        assert_eq!(sum, t.translate(&rat_vec(&[5, 7])).unwrap());
    }

    #[test]
    fn support_values() {
        let sq = unit_square();
        assert_eq!(sq.support_value(&num::int_vec(&[1, 0])).unwrap(), ratz(0));
        assert_eq!(sq.support_value(&num::int_vec(&[-1, -1])).unwrap(), ratz(-2));
        let t = p2_triangle();
        assert_eq!(t.support_value(&num::int_vec(&[1, 0])).unwrap(), ratz(-1));
        assert!(matches!(
            Polytope::empty(2).support_value(&num::int_vec(&[1, 0])),
            Err(Error::EmptyPolytope)
        ));
    }

    #[test]
    fn scaling() {
        let seg = Polytope::from_points(1, points(&[&[0], &[1]])).unwrap();
        let s3 = seg.scale(&ratz(3)).unwrap();
        assert_eq!(s3.vertices(), &[rat_vec(&[0]), rat_vec(&[3])]);
        let t = p2_triangle();
        assert_eq!(t.scale(&ratz(1)).unwrap(), t);
        let t2 = t.scale(&ratz(2)).unwrap();
        assert_eq!(
            t2.vertices(),
            &[rat_vec(&[-2, -2]), rat_vec(&[-2, 4]), rat_vec(&[4, -2])]
        );
        // scale-by-zero anchors at the origin
        let z = t.scale(&ratz(0)).unwrap();
        assert_eq!(z.vertices(), &[rat_vec(&[0, 0])]);
        assert!(matches!(t.scale(&ratz(-1)), Err(Error::NegativeScalar)));
        // scaling rebuilds the same canonical value as a fresh construction
        let rebuilt = Polytope::from_points(2, t2.vertices().to_vec()).unwrap();
        assert_eq!(t2, rebuilt);
    }

    #[test]
    fn relative_interior_membership() {
        let t = p2_triangle();
        assert!(t.contains(&rat_vec(&[0, 0]), ContainsMode::RelativeInterior));
        assert!(!t.contains(&rat_vec(&[-1, 0]), ContainsMode::RelativeInterior));
        assert!(t.contains(&rat_vec(&[-1, 0]), ContainsMode::BoundaryInclusive));

        // Segment [0,1] × {0} inside the plane.
        let seg = Polytope::from_points(2, points(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(seg.dim(), 1);
        assert!(!seg.contains(&rat_vec(&[1, 0]), ContainsMode::RelativeInterior));
        assert!(seg.contains(&rat_vec(&[1, 0]), ContainsMode::BoundaryInclusive));
        assert!(seg.contains(&vec![rat(1, 2), ratz(0)], ContainsMode::RelativeInterior));
        assert!(!seg.contains(&vec![rat(1, 2), rat(1, 3)], ContainsMode::BoundaryInclusive));
    }

    #[test]
    fn volumes() {
        assert_eq!(unit_square().volume(), ratz(1));
        assert_eq!(p2_triangle().volume(), rat(9, 2));
        let seg = Polytope::from_points(2, points(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(seg.volume(), ratz(0));
        assert_eq!(Polytope::empty(2).volume(), ratz(0));
    }

    #[test]
    fn volume_homogeneity() {
        let t = p2_triangle();
        let c = rat(3, 2);
        let scaled = t.scale(&c).unwrap();
        assert_eq!(scaled.volume(), &c * &c * t.volume());
    }

    #[test]
    fn facet_enumeration() {
        let sq = unit_square();
        let facets = sq.facets().unwrap();
        assert_eq!(facets.len(), 4);
        for (_, f) in &facets {
            assert_eq!(f.dim(), 1);
            let len = num::sub_rat_vec(&f.vertices()[1], &f.vertices()[0]);
            assert_eq!(dot_rat(&len, &len), ratz(1));
        }

        let t = p2_triangle();
        assert_eq!(t.facets().unwrap().len(), 3);

        let simplex = Polytope::from_points(2, points(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(simplex.facets().unwrap().len(), 3);

        let seg = Polytope::from_points(2, points(&[&[0, 0], &[1, 0]])).unwrap();
        assert!(matches!(seg.facets(), Err(Error::NotFullDimensional { .. })));
    }

    #[test]
    fn lattice_facet_volumes() {
        // Horizontal facet of the unit square, normal (0, 1).
        let f = Polytope::from_points(2, points(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(facet_lattice_volume(&f, &num::int_vec(&[0, 1])).unwrap(), ratz(1));

        // Diagonal facet of the ℙ² triangle: 4 lattice points, length 3.
        let diag = Polytope::from_points(2, points(&[&[2, -1], &[-1, 2]])).unwrap();
        assert_eq!(facet_lattice_volume(&diag, &num::int_vec(&[-1, -1])).unwrap(), ratz(3));

        // Homogeneity in the hyperplane: scaling by m scales by m^{n-1}.
        let diag3 = diag.scale(&ratz(3)).unwrap();
        assert_eq!(facet_lattice_volume(&diag3, &num::int_vec(&[-1, -1])).unwrap(), ratz(9));

        let off = Polytope::from_points(2, points(&[&[0, 0], &[1, 1]])).unwrap();
        assert!(matches!(
            facet_lattice_volume(&off, &num::int_vec(&[0, 1])),
            Err(Error::NotInHyperplane)
        ));
    }

    #[test]
    fn round_trip_canonical_form() {
        let t = p2_triangle();
        let back = Polytope::from_points(2, t.vertices().to_vec()).unwrap();
        assert_eq!(t, back);
        let again = Polytope::from_halfspaces(2, back.hrep()).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn lower_dimensional_round_trip() {
        // A segment embedded in ℝ³.
        let seg = Polytope::from_points(3, points(&[&[1, 2, 3], &[3, 2, 1]])).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.span_equations().len(), 2);
        let back = Polytope::from_halfspaces(3, seg.hrep()).unwrap();
        assert_eq!(seg, back);
    }
}
