//! Shared fixtures for the integration and acceptance suites.

#![allow(dead_code)]

use polyfam_core::family::{
    box_weight_family, fibered_family, gz_family, segment_family, toric_family, LinearFamily,
};
use polyfam_core::fan::Fan;
use polyfam_core::num::{int_vec, Rat};
use polyfam_core::polytope::Polytope;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn p2_fan() -> Fan {
    Fan::new(
        2,
        vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -1])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
    )
    .unwrap()
}

pub fn p1xp1_fan() -> Fan {
    Fan::new(
        2,
        vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, 0]), int_vec(&[0, -1])],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .unwrap()
}

pub fn f1_fan() -> Fan {
    Fan::new(
        2,
        vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[0, -1]), int_vec(&[-1, 1])],
        vec![vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]],
    )
    .unwrap()
}

pub fn line_fan() -> Fan {
    Fan::new(1, vec![int_vec(&[1]), int_vec(&[-1])], vec![vec![0], vec![1]]).unwrap()
}

/// The golden linear families driving the acceptance criteria.
pub fn golden_families() -> Vec<(&'static str, LinearFamily)> {
    let base = box_weight_family(2).unwrap();
    vec![
        ("toric-p2", toric_family(&p2_fan()).unwrap()),
        ("toric-p1xp1", toric_family(&p1xp1_fan()).unwrap()),
        ("toric-f1", toric_family(&f1_fan()).unwrap()),
        ("gz-2", gz_family(2).unwrap()),
        ("gz-3", gz_family(3).unwrap()),
        ("fibered-gl2-m1", fibered_family(&base, 2, 1).unwrap()),
        ("fibered-gl2-m2", fibered_family(&base, 2, 2).unwrap()),
        ("segment-3", segment_family(3).unwrap()),
    ]
}

/// A full-dimensional random lattice polytope: the hull of `dim + extra`
/// points with coordinates in `[0, 6]`, resampled until full-dimensional.
pub fn random_lattice_polytope(rng: &mut ChaCha8Rng, dim: usize) -> Polytope {
    loop {
        let k = dim + 1 + rng.random_range(0..=3usize);
        let points: Vec<Vec<Rat>> = (0..k)
            .map(|_| (0..dim).map(|_| polyfam_core::num::ratz(rng.random_range(0..=6i64))).collect())
            .collect();
        let p = Polytope::from_points(dim, points).unwrap();
        if p.is_full_dimensional() {
            return p;
        }
    }
}
