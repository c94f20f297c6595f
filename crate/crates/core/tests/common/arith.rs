//! Per-seed checks of Novikov ring arithmetic.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use symtorsion::lattice::{GroupElement, Lattice};
use symtorsion::series::{Agreement, NovikovElement};

use super::*;

fn lattice_for(seed: u64) -> Arc<Lattice> {
    if seed % 2 == 0 {
        laurent()
    } else {
        Arc::new(Lattice::new(vec![q(1, 1), q(3, 2)], vec![0, 0]).unwrap())
    }
}

pub fn ring_axioms(seed: u64) {
    let mut r = rng(seed);
    let l = if seed % 2 == 0 { laurent() } else { lattice2() };
    let [a, b, c] = [0; 3].map(|_| random_element(&mut r, &l, 4, 3));
    let zero = NovikovElement::zero(&l);
    let one = one(&l);
    assert_eq!(&a + &b, &b + &a);
    assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    assert_eq!(&a * &b, &b * &a);
    assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    assert_eq!(&a + &zero, a);
    assert_eq!(&a * &one, a);
    assert!((&a * &zero).is_zero());
    assert!((&a + &(-&a)).is_zero());
    assert_eq!(&a - &b, &a + &(-&b));
}

/// Inverse of a random unit up to a random level `w ≤ 50` (rank 1) or
/// `w ≤ 12` (rank 2); the product must equal 1 below `w`.
pub fn inverse_below(seed: u64) {
    let mut r = rng(seed);
    let l = lattice_for(seed);
    let top = if l.rank() == 1 { 50 } else { 12 };
    let w = q(r.gen_range(1..=top * 4), 4);
    let u = random_unit(&mut r, &l);
    let (_, g) = u.leading_monomial().unwrap();
    let lead_w = l.weight(&g).unwrap();
    let zero = BigRational::from_integer(BigInt::from(0));
    let target = if lead_w < zero { &w - &lead_w } else { w.clone() };
    let inv = u.invert(Some(&target)).unwrap();
    let product = &inv * &u;
    match product.agreement(&one(&l)).unwrap() {
        Agreement::Equal => {}
        Agreement::EqualBelow(level) => assert!(level >= w, "certified {level} < {w}"),
        Agreement::Different => panic!("u·u⁻¹ ≠ 1 below {w}: u = {u}"),
    }
}

/// Geometric series oracle: (1 − c·z)⁻¹ = Σ cᵏ zᵏ.
pub fn geometric_inverse(seed: u64) {
    let mut r = rng(seed);
    let l = laurent();
    let c = small_rational(&mut r);
    let w = r.gen_range(1..=50i64);
    let u = &one(&l) - &monomial(&l, c.clone(), GroupElement::new(vec![1]));
    let inv = u.invert(Some(&q(w, 1))).unwrap();
    let mut power = q(1, 1);
    for k in 0..w {
        assert_eq!(inv.coefficient(&GroupElement::new(vec![k])), power, "k = {k}");
        power = &power * &c;
    }
    assert_eq!(inv.support_len(), w as usize);
}

pub fn leading_term_multiplicative(seed: u64) {
    let mut r = rng(seed);
    let l = if seed % 2 == 0 { laurent() } else { lattice2() };
    let a = random_element(&mut r, &l, 4, 3);
    let b = random_element(&mut r, &l, 4, 3);
    let (Ok((ca, ga)), Ok((cb, gb))) = (a.leading_monomial(), b.leading_monomial()) else {
        return;
    };
    let (c, g) = (&a * &b).leading_monomial().unwrap();
    assert_eq!(c, &ca * &cb);
    assert_eq!(g, &ga + &gb);
}
