//! Smith normal form and invariant factors of a small integer matrix.

use khss::linalg::{invariant_factors, smith_normal_form, MatZ};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = MatZ::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    println!("invariant factors: {:?}", invariant_factors(&m)?);

    // the full form also carries unimodular U, V with U M V = D
    let s = smith_normal_form(&m)?;
    let umv = s.u.mul(&m)?.mul(&s.v)?;
    assert_eq!(umv, s.d);
    println!("U M V = D checked, diagonal {:?}", s.invariant_factors());
    Ok(())
}
