//! Cross-module invariants: representation round-trips, support-function
//! additivity, Minkowski cancellation, Ehrhart/volume consistency, normal
//! fan refinement, and the family linearity law with coefficients.

mod common;

use common::*;
use polyfam_core::algebra;
use polyfam_core::anticanonical;
use polyfam_core::family::{gz_family, toric_family};
use polyfam_core::fan;
use polyfam_core::lattice;
use polyfam_core::num::{self, dot_int_rat, int_vec, rat_vec, ratz, Int, Rat};
use polyfam_core::polytope::{ContainsMode, Polytope};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_point_set(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, dim), dim + 1..=dim + 4)
}

fn build(dim: usize, pts: &[Vec<i64>]) -> Polytope {
    let points: Vec<Vec<Rat>> = pts.iter().map(|p| rat_vec(p)).collect();
    Polytope::from_points(dim, points).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// halfspaces(vertices(H).vrep) reproduces the same canonical value.
    #[test]
    fn round_trip_2d(pts in small_point_set(2)) {
        let p = build(2, &pts);
        let back = Polytope::from_halfspaces(2, p.hrep()).unwrap();
        prop_assert_eq!(&back, &p);
        let again = Polytope::from_points(2, back.vertices().to_vec()).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn round_trip_3d(pts in small_point_set(3)) {
        let p = build(3, &pts);
        let back = Polytope::from_halfspaces(3, p.hrep()).unwrap();
        prop_assert_eq!(back, p);
    }

    /// Support values add exactly under Minkowski sums.
    #[test]
    fn support_additivity(
        pts1 in small_point_set(2),
        pts2 in small_point_set(2),
        xis in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 20)
    ) {
        let p = build(2, &pts1);
        let q = build(2, &pts2);
        let sum = p.minkowski_sum(&q).unwrap();
        for xi in &xis {
            if xi.iter().all(|&x| x == 0) { continue; }
            let xi = int_vec(xi);
            prop_assert_eq!(
                sum.support_value(&xi).unwrap(),
                p.support_value(&xi).unwrap() + q.support_value(&xi).unwrap()
            );
        }
    }

    /// Minkowski addition is cancellative: P + R = Q + R implies P = Q.
    #[test]
    fn minkowski_cancellation(
        pts1 in small_point_set(2),
        pts2 in small_point_set(2),
        pts3 in small_point_set(2)
    ) {
        let p = build(2, &pts1);
        let q = build(2, &pts2);
        let r = build(2, &pts3);
        let pr = p.minkowski_sum(&r).unwrap();
        let qr = q.minkowski_sum(&r).unwrap();
        if p == q {
            prop_assert_eq!(pr, qr);
        } else {
            prop_assert_ne!(pr, qr);
        }
    }

    /// volume(cP) = cⁿ volume(P), exactly.
    #[test]
    fn volume_homogeneity(pts in small_point_set(3), num in 1i64..=7, den in 1i64..=4) {
        let p = build(3, &pts);
        let c = num::rat(num, den);
        let scaled = p.scale(&c).unwrap();
        prop_assert_eq!(scaled.volume(), &c * &c * &c * p.volume());
    }

    /// count_interior ≤ count, and counts are translation invariant.
    #[test]
    fn count_monotonicity_and_translation(pts in small_point_set(2), t in prop::collection::vec(-9i64..=9, 2)) {
        let p = build(2, &pts);
        prop_assert!(lattice::count_interior(&p) <= lattice::count(&p));
        let moved = p.translate(&rat_vec(&t)).unwrap();
        prop_assert_eq!(lattice::count(&moved), lattice::count(&p));
    }
}

/// The exact dilation limit: the fitted Ehrhart polynomial has the volume
/// as leading coefficient, so |N(mP) - vol(P)·mⁿ| ≤ C·m^{n-1} with
/// C = Σ |lower coefficients|, checked exactly through m = 30.
#[test]
fn dilation_limit_bounds_count_defect() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for dim in 1..=3usize {
        for _ in 0..4 {
            let p = random_lattice_polytope(&mut rng, dim);
            let q = lattice::ehrhart(&p, 1).unwrap();
            let coeffs = &q.constituents[0];
            assert_eq!(coeffs.last().unwrap(), &p.volume());
            let c_bound: Rat = coeffs[..coeffs.len() - 1]
                .iter()
                .map(|c| {
                    use num_traits::Signed;
                    c.abs()
                })
                .sum();
            for m in [1i64, 2, 5, 30] {
                let count = lattice::count(&p.scale(&ratz(m)).unwrap());
                let mn = num::ratz(m.pow(dim as u32));
                let defect = Rat::from_integer(Int::from(count)) - p.volume() * &mn;
                use num_traits::Signed;
                assert!(defect.abs() <= &c_bound * ratz(m.pow(dim as u32 - 1)));
            }
        }
    }
}

/// volume equals the leading Ehrhart coefficient (cross-module oracle) on
/// the worked triangle: N(m·Δ(1,1,1)) fits 9/2·m² + …
#[test]
fn volume_equals_ehrhart_leading_coefficient() {
    let fam = toric_family(&p2_fan()).unwrap();
    let p = fam.evaluate(&rat_vec(&[1, 1, 1])).unwrap();
    assert_eq!(algebra::ehrhart_leading_coefficient(&p).unwrap(), num::rat(9, 2));
    assert_eq!(p.volume(), num::rat(9, 2));
}

/// The worked facet example: Δ(1,1,1) on the ℙ² fan has 3 facets with 4
/// lattice points each.
#[test]
fn p2_triangle_facet_lattice_points() {
    let fam = toric_family(&p2_fan()).unwrap();
    let p = fam.evaluate(&rat_vec(&[1, 1, 1])).unwrap();
    let facets = p.facets().unwrap();
    assert_eq!(facets.len(), 3);
    for (_, facet) in &facets {
        assert_eq!(lattice::count(facet), 4);
    }
}

/// Σ facet lattice volumes equals the all-ones directional derivative of
/// the volume polynomial on toric fibers.
#[test]
fn facet_volume_sum_is_all_ones_derivative() {
    for fan_ in [p2_fan(), p1xp1_fan(), f1_fan()] {
        let fam = toric_family(&fan_).unwrap();
        let cert = fam.verify_linearity(10, 0);
        let f = algebra::volume_polynomial(&fam, &cert).unwrap();
        let ones = vec![Rat::from_integer(Int::from(1)); fam.param_dim()];
        let deriv = algebra::directional_derivative(&f, &ones);
        for gamma in anticanonical::interior_samples(&fam, 3) {
            let p = fam.evaluate(&gamma).unwrap();
            let mut sum = Rat::from_integer(Int::from(0));
            for (normal, facet) in p.facets().unwrap() {
                sum += polyfam_core::facet_lattice_volume(&facet, &normal).unwrap();
            }
            assert_eq!(deriv.evaluate(&gamma), sum);
        }
    }
}

/// Round-trip through support numbers for polytopes normal to a fan, and
/// additivity of Δ(a) on the normality region.
#[test]
fn support_number_round_trip_and_additivity() {
    let fan_ = p1xp1_fan();
    for a in [rat_vec(&[0, 0, 1, 1]), rat_vec(&[2, 1, 1, 3]), rat_vec(&[1, 1, 1, 1])] {
        let p = fan::polytope_of(&fan_, &a).unwrap();
        assert_eq!(fan::support_numbers(&p, &fan_).unwrap(), a);
    }
    let a = rat_vec(&[1, 2, 3, 1]);
    let b = rat_vec(&[2, 1, 1, 4]);
    let ab = num::add_rat_vec(&a, &b);
    let sum = fan::polytope_of(&fan_, &a)
        .unwrap()
        .minkowski_sum(&fan::polytope_of(&fan_, &b).unwrap())
        .unwrap();
    assert_eq!(sum, fan::polytope_of(&fan_, &ab).unwrap());
}

/// A polytope normal to Σ has its normal fan refined by Σ: every maximal
/// cone of Σ sits inside the normal-fan cone of its minimizing face.
#[test]
fn normality_implies_refinement() {
    let fan_ = p2_fan();
    // The triangle is normal to the ℙ² fan; check cone containment on the
    // relative-interior sample of each maximal cone.
    let p = fan::polytope_of(&fan_, &rat_vec(&[2, 1, 1])).unwrap();
    assert!(fan::is_normal_to(&p, &fan_).unwrap());
    let nf = fan::normal_fan(&p).unwrap();
    for cone in fan_.max_cones() {
        // ξ in the relative interior of the cone.
        let mut xi = vec![Rat::from_integer(Int::from(0)); 2];
        for &i in cone {
            for (c, r) in xi.iter_mut().zip(&fan_.rays()[i]) {
                *c += Rat::from_integer(r.clone());
            }
        }
        // Minimizing face of ξ in P, then the normal-fan cone over it.
        let min_val: Rat = p
            .vertices()
            .iter()
            .map(|v| num::dot_rat(&xi, v))
            .min()
            .unwrap();
        let minimizers: Vec<&Vec<Rat>> =
            p.vertices().iter().filter(|v| num::dot_rat(&xi, v) == min_val).collect();
        // Facet normals tight on all minimizers span the containing cone.
        let gens: Vec<Vec<Rat>> = nf
            .rays()
            .iter()
            .filter(|r| {
                minimizers.iter().all(|v| {
                    dot_int_rat(r, v)
                        == p.support_value(r).unwrap()
                })
            })
            .map(|r| num::int_to_rat_vec(r))
            .collect();
        for &i in cone {
            let ray = num::int_to_rat_vec(&fan_.rays()[i]);
            assert!(
                polyfam_core::lp::in_cone(&ray, &gens, &Rat::from_integer(Int::from(0))),
                "ray {i} of the fan must lie in the normal-fan cone"
            );
        }
    }
}

/// Def 1.2 with coefficients: evaluate(c₁γ₁ + c₂γ₂) = c₁Δ(γ₁) + c₂Δ(γ₂)
/// for 20 sampled combinations on every golden family.
#[test]
fn family_linearity_with_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, fam) in golden_families() {
        let gens: Vec<Vec<Rat>> = fam
            .cone()
            .lattice_generators()
            .iter()
            .map(|t| fam.cone().to_gamma(t))
            .collect();
        let mut checked = 0;
        'outer: for i in 0..gens.len() {
            for j in 0..gens.len() {
                if checked >= 20 {
                    break 'outer;
                }
                let c1 = ratz(rng.random_range(1..=3i64));
                let c2 = ratz(rng.random_range(1..=3i64));
                let combo = num::add_rat_vec(
                    &num::scale_rat_vec(&gens[i], &c1),
                    &num::scale_rat_vec(&gens[j], &c2),
                );
                let lhs = fam.evaluate(&combo).unwrap();
                let rhs = fam
                    .evaluate(&gens[i])
                    .unwrap()
                    .scale(&c1)
                    .unwrap()
                    .minkowski_sum(&fam.evaluate(&gens[j]).unwrap().scale(&c2).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "family {name}, sample {checked}");
                checked += 1;
            }
        }
    }
}

/// N(Δ_GZ(λ)) equals the brute-force pattern count for 30 random dominant
/// weights (n = 3).
#[test]
fn gz3_counts_match_pattern_enumeration() {
    let fam = gz_family(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let mut lam: Vec<i64> = (0..3).map(|_| rng.random_range(-5..=5i64)).collect();
        lam.sort_unstable();
        let p = fam.evaluate(&rat_vec(&lam)).unwrap();
        let mut oracle = 0u64;
        for x12 in lam[0]..=lam[1] {
            for x22 in lam[1]..=lam[2] {
                for _x11 in x12..=x22 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(lattice::count(&p), oracle, "λ = {lam:?}");
    }
}

/// Every refuted anticanonical verdict carries a witness that re-checks by
/// an independent recount.
#[test]
fn refutation_witnesses_recheck() {
    let fam = toric_family(&f1_fan()).unwrap();
    for kappa in [rat_vec(&[0, 0, 0, 0]), rat_vec(&[2, 1, 1, 1]), rat_vec(&[1, 1, 1, 2])] {
        let v = anticanonical::is_anticanonical(&fam, &kappa, 4).unwrap();
        if let Some(w) = &v.witness {
            let shifted = num::sub_rat_vec(&w.gamma, &kappa);
            let p = fam.evaluate(&shifted).unwrap();
            let q = fam.evaluate(&w.gamma).unwrap();
            // Independent recount: boundary-inclusive membership over the box.
            let (lo, hi) = p.integer_bounding_box().unwrap();
            let mut recount = 0u64;
            let mut x = lo.clone();
            'scan: loop {
                let xr: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
                if p.contains(&xr, ContainsMode::BoundaryInclusive) {
                    recount += 1;
                }
                let mut pos = 0;
                loop {
                    if pos == x.len() {
                        break 'scan;
                    }
                    x[pos] += 1;
                    if x[pos] <= hi[pos] {
                        break;
                    }
                    x[pos] = lo[pos].clone();
                    pos += 1;
                }
            }
            assert_eq!(recount, w.count);
            assert_eq!(lattice::count_interior(&q), w.interior);
            assert_ne!(w.count, w.interior);
        }
    }
}

/// The pruned enumerator agrees with naive bounding-box membership
/// counting on a random corpus, for both closed and relative-interior
/// counts.
#[test]
fn pruned_counts_match_naive_box_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for dim in 1..=3usize {
        for _ in 0..8 {
            let p = random_lattice_polytope(&mut rng, dim);
            // Scale by 3/2 to exercise fractional offsets as well.
            let p = p.scale(&num::rat(3, 2)).unwrap();
            let (lo, hi) = p.integer_bounding_box().unwrap();
            let mut naive = 0u64;
            let mut naive_interior = 0u64;
            let mut x = lo.clone();
            'scan: loop {
                let xr: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
                if p.contains(&xr, ContainsMode::BoundaryInclusive) {
                    naive += 1;
                }
                if p.contains(&xr, ContainsMode::RelativeInterior) {
                    naive_interior += 1;
                }
                let mut pos = 0;
                loop {
                    if pos == dim {
                        break 'scan;
                    }
                    x[pos] += 1;
                    if x[pos] <= hi[pos] {
                        break;
                    }
                    x[pos] = lo[pos].clone();
                    pos += 1;
                }
            }
            assert_eq!(lattice::count(&p), naive);
            assert_eq!(lattice::count_interior(&p), naive_interior);
            assert_eq!(lattice::points(&p).len() as u64, naive);
        }
    }
}

/// Theorem bridge: the ray-sum identity and the class check agree, also on
/// translation-shifted representatives of the anticanonical class.
#[test]
fn ray_sum_and_class_check_agree() {
    let fam = toric_family(&p2_fan()).unwrap();
    let cert = fam.verify_linearity(12, 0);
    let samples = anticanonical::interior_samples(&fam, 5);
    for (kappa, expected) in [
        (rat_vec(&[1, 1, 1]), true),
        (rat_vec(&[2, 1, 0]), true), // (1,1,1) + translation class
        (rat_vec(&[2, 2, 2]), false),
        (rat_vec(&[0, 0, 0]), false),
    ] {
        let ray_sum = anticanonical::ray_sum_check(&fam, &cert, &kappa, &samples).unwrap();
        let class = algebra::anticanonical_class_check(&fam, &cert, &kappa).unwrap();
        assert_eq!(ray_sum, expected, "ray sum at {kappa:?}");
        assert_eq!(class, expected, "class check at {kappa:?}");
    }
}

/// On the fibered GL(2) families the searched-out parameter κ = (2,2)
/// satisfies the ray-sum identity and is the sum of all rays of the
/// family's own fan in the operator algebra; the all-ones parameter is
/// neither anticanonical nor the ray sum. The two routes agree.
#[test]
fn fibered_kappa_satisfies_the_ray_sum_theorem() {
    let base = polyfam_core::family::box_weight_family(2).unwrap();
    for multiplicity in [1u32, 2] {
        let fam = polyfam_core::family::fibered_family(&base, 2, multiplicity).unwrap();
        let cert = fam.verify_linearity(8, 0);
        assert!(cert.is_verified());
        let samples = anticanonical::interior_samples(&fam, 5);
        let kappa = rat_vec(&[2, 2]);
        assert!(anticanonical::is_anticanonical(&fam, &kappa, 3).unwrap().is_verified());
        assert!(anticanonical::ray_sum_check(&fam, &cert, &kappa, &samples).unwrap());
        assert!(algebra::anticanonical_class_check(&fam, &cert, &kappa).unwrap());
        let ones = rat_vec(&[1, 1]);
        assert!(!anticanonical::is_anticanonical(&fam, &ones, 3).unwrap().is_verified());
        assert!(!algebra::anticanonical_class_check(&fam, &cert, &ones).unwrap());
    }
}

/// Translation classes annihilate the volume polynomial of every golden
/// fan: L_{(⟨v₁,t⟩,…,⟨v_s,t⟩)} f_Σ = 0 for integer translations t.
#[test]
fn translation_classes_vanish() {
    for fan_ in [p2_fan(), p1xp1_fan(), f1_fan()] {
        let fam = toric_family(&fan_).unwrap();
        let cert = fam.verify_linearity(10, 0);
        let f = algebra::volume_polynomial(&fam, &cert).unwrap();
        for t in [int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[2, -3])] {
            let class: Vec<Rat> = fan_
                .rays()
                .iter()
                .map(|v| Rat::from_integer(polyfam_core::num::dot_int(v, &t)))
                .collect();
            let zero = vec![Rat::from_integer(Int::from(0)); class.len()];
            assert!(algebra::class_equal(&f, &class, &zero));
        }
    }
}
