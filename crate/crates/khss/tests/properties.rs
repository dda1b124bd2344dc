//! Property suites over random and small diagrams and random matrices.

mod common;

use common::properties as suite;

#[test]
fn total_differential_squares_to_zero_on_random_six_crossing_knots() {
    suite::total_differential_squares_to_zero_on_random_six_crossing_knots();
}

#[test]
fn total_differential_squares_to_zero_on_small_torus_knots() {
    suite::total_differential_squares_to_zero_on_small_torus_knots();
}

#[test]
fn integral_differential_squares_to_zero() {
    suite::integral_differential_squares_to_zero();
}

#[test]
fn bockstein_squares_to_zero() {
    suite::bockstein_squares_to_zero();
}

#[test]
fn bockstein_ignores_basis_sign_flips() {
    suite::bockstein_ignores_basis_sign_flips();
}

#[test]
fn basepoint_map_squares_to_zero_and_commutes_with_d() {
    suite::basepoint_map_squares_to_zero_and_commutes_with_d();
}

#[test]
fn lifted_basepoint_map_is_a_chain_map() {
    suite::lifted_basepoint_map_is_a_chain_map();
}

#[test]
fn reduced_homology_splits_evenly() {
    suite::reduced_homology_splits_evenly();
}

#[test]
fn euler_characteristic_is_the_same_on_every_page() {
    suite::euler_characteristic_is_the_same_on_every_page();
}

#[test]
fn pages_do_not_depend_on_the_orientation_seed() {
    suite::pages_do_not_depend_on_the_orientation_seed();
}

#[test]
fn f2_linear_algebra_matches_dense_oracle() {
    suite::f2_linear_algebra_matches_dense_oracle();
}

#[test]
fn smith_normal_form_matches_determinantal_divisors() {
    suite::smith_normal_form_matches_determinantal_divisors();
}
