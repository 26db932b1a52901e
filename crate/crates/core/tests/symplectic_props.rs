mod common;

use common::{random_similitude, random_unit, random_vec, ring, rng, span_oracle, weil_oracle};
use mu_torsion::{MatrixMod, SymplecticSpace, TorsionSubgroup};
use rand::Rng;

#[test]
fn standard_form_matches_written_out_form() {
    for g in 1..=4 {
        let r = ring(7, 2);
        let s = SymplecticSpace::standard(g, r).unwrap();
        let expected = MatrixMod::from_rows(r, &common::standard_form_rows(g)).unwrap();
        assert_eq!(s.form(), &expected);
    }
}

#[test]
fn pairing_matches_oracle_at_every_level() {
    let mut g = rng(11);
    for _ in 0..300 {
        let ell = [2u64, 3, 5, 7][g.gen_range(0..4)];
        let level = g.gen_range(1..=3);
        let genus = g.gen_range(1..=3);
        let r = ring(ell, level);
        let s = SymplecticSpace::standard(genus, r).unwrap();
        let n = g.gen_range(1..=level);
        let d = ell.pow(level - n);
        let p: Vec<u64> = random_vec(&mut g, r, 2 * genus)
            .iter()
            .map(|&x| r.mul(x, d))
            .collect();
        let q: Vec<u64> = random_vec(&mut g, r, 2 * genus)
            .iter()
            .map(|&x| r.mul(x, d))
            .collect();
        let e = s.weil_pairing(&p, &q, n).unwrap();
        assert_eq!(e.exponent().value(), weil_oracle(r, genus, &p, &q, n));
        assert_eq!(e.level(), n);
    }
}

#[test]
fn pairing_rejects_points_of_too_large_order() {
    let r = ring(3, 2);
    let s = SymplecticSpace::standard(1, r).unwrap();
    assert!(s.weil_pairing(&[1, 0], &[0, 3], 1).is_err());
    assert!(s.weil_pairing(&[3, 0], &[0, 3], 1).is_ok());
    assert!(s.weil_pairing(&[3, 0], &[0, 3], 3).is_err());
    assert!(s.weil_pairing(&[3, 0], &[0, 3], 0).is_err());
}

#[test]
fn random_similitudes_have_the_requested_multiplier() {
    let mut g = rng(12);
    for _ in 0..100 {
        let r = ring([3u64, 5, 7][g.gen_range(0..3)], g.gen_range(1..=3));
        let s = SymplecticSpace::standard(g.gen_range(1..=3), r).unwrap();
        let lambda = random_unit(&mut g, r);
        let m = random_similitude(&mut g, &s, lambda);
        assert_eq!(s.multiplier(&m).unwrap().value(), lambda);
        let inv = m.inverse().unwrap();
        assert_eq!(s.multiplier(&inv).unwrap().value(), r.inv(lambda).unwrap());
    }
}

#[test]
fn m1_invariant_under_similitudes() {
    let mut g = rng(13);
    for _ in 0..100 {
        let r = ring([2u64, 3, 5][g.gen_range(0..3)], g.gen_range(1..=3));
        let genus = g.gen_range(1..=2);
        let s = SymplecticSpace::standard(genus, r).unwrap();
        let gens: Vec<Vec<u64>> = (0..g.gen_range(1..=3))
            .map(|_| random_vec(&mut g, r, 2 * genus))
            .collect();
        let h = TorsionSubgroup::from_generators(r, 2 * genus, &gens).unwrap();
        let lambda = random_unit(&mut g, r);
        let m = random_similitude(&mut g, &s, lambda);
        let moved = h.image(&m).unwrap();
        assert_eq!(s.m1(&moved).unwrap(), s.m1(&h).unwrap());
        assert_eq!(moved.orders(), h.orders());
    }
}

#[test]
fn m1_agrees_with_oracle_on_small_groups() {
    let mut g = rng(14);
    let mut checked = 0;
    while checked < 60 {
        let r = ring([2u64, 3][g.gen_range(0..2)], g.gen_range(1..=2));
        let genus = g.gen_range(1..=2);
        let s = SymplecticSpace::standard(genus, r).unwrap();
        let gens: Vec<Vec<u64>> = (0..g.gen_range(1..=3))
            .map(|_| random_vec(&mut g, r, 2 * genus))
            .collect();
        let h = TorsionSubgroup::from_generators(r, 2 * genus, &gens).unwrap();
        if h.order().unwrap() > 2000 {
            continue;
        }
        let elements = span_oracle(r, 2 * genus, &gens);
        assert_eq!(elements.len() as u128, h.order().unwrap());
        let expected = common::m1_oracle(r, genus, &elements);
        assert_eq!(s.m1(&h).unwrap(), expected);
        assert_eq!(s.m1_exhaustive(&h, 1 << 20).unwrap(), expected);
        checked += 1;
    }
}

#[test]
fn tensor_form_is_a_kronecker_power() {
    let r = ring(5, 1);
    let s = SymplecticSpace::tensor(3, r).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let bits = |x: usize| [(x >> 2) & 1, (x >> 1) & 1, x & 1];
            let (bi, bj) = (bits(i), bits(j));
            let entry: i64 = (0..3)
                .map(|k| match (bi[k], bj[k]) {
                    (0, 1) => 1,
                    (1, 0) => -1,
                    _ => 0,
                })
                .product();
            assert_eq!(s.form().get(i, j), r.reduce(entry));
        }
    }
}
