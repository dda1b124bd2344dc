//! Library against the frozen dense-oracle values.

mod common;

use common::frozen;

#[test]
fn oracle_reproduces_frozen_values() {
    frozen::oracle_reproduces_frozen_values();
}

#[test]
fn oracle_differential_squares_to_zero() {
    frozen::oracle_differential_squares_to_zero();
}

#[test]
fn library_matches_oracle_on_trefoil() {
    frozen::library_matches_oracle_on_trefoil();
}

#[test]
fn library_matches_oracle_on_t34() {
    frozen::library_matches_oracle_on_t34();
}

#[test]
fn frozen_diagrams_are_the_generated_torus_knots() {
    frozen::frozen_diagrams_are_the_generated_torus_knots();
}
