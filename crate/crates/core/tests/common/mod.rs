#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use mu_torsion::{MatrixMod, ResidueRing, SymplecticSpace};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ring(ell: u64, level: u32) -> ResidueRing {
    ResidueRing::new(ell, level).unwrap()
}

pub fn random_vec(rng: &mut impl Rng, ring: ResidueRing, dim: usize) -> Vec<u64> {
    (0..dim).map(|_| rng.gen_range(0..ring.modulus())).collect()
}

pub fn random_matrix(rng: &mut impl Rng, ring: ResidueRing, rows: usize, cols: usize) -> MatrixMod {
    let m = ring.modulus() as i64;
    MatrixMod::from_fn(ring, rows, cols, |_, _| rng.gen_range(0..m))
}

pub fn random_invertible(rng: &mut impl Rng, ring: ResidueRing, n: usize) -> MatrixMod {
    loop {
        let m = random_matrix(rng, ring, n, n);
        if m.det().is_unit() {
            return m;
        }
    }
}

pub fn random_unit(rng: &mut impl Rng, ring: ResidueRing) -> u64 {
    loop {
        let x = rng.gen_range(1..ring.modulus());
        if x % ring.ell() != 0 {
            return x;
        }
    }
}

/// Antidiagonal form written out independently of the library.
pub fn standard_form_rows(g: usize) -> Vec<Vec<i64>> {
    let n = 2 * g;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i + j + 1 == n {
                        if i < g {
                            1
                        } else {
                            -1
                        }
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// `pᵀ ψ q` over the integers, with `ψ` the antidiagonal form.
pub fn pairing_integer(g: usize, p: &[u64], q: &[u64]) -> i128 {
    let n = 2 * g;
    (0..n)
        .map(|i| {
            let term = p[i] as i128 * q[n - 1 - i] as i128;
            if i < g {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `pᵀ ψ q mod l^N`.
pub fn pairing_oracle(ring: ResidueRing, g: usize, p: &[u64], q: &[u64]) -> u64 {
    pairing_integer(g, p, q).rem_euclid(ring.modulus() as i128) as u64
}

/// `e_{l^n}(P, Q)`: write `P = l^{N-n} p'`, `Q = l^{N-n} q'` and reduce
/// `p'ᵀ ψ q'` modulo `l^n`.
pub fn weil_oracle(ring: ResidueRing, g: usize, p: &[u64], q: &[u64], n: u32) -> u64 {
    let d = ring.ell().pow(ring.level() - n) as i128;
    let raw = pairing_integer(g, p, q);
    assert_eq!(raw % (d * d), 0);
    (raw / (d * d)).rem_euclid(ring.ell().pow(n) as i128) as u64
}

/// A similitude of the antidiagonal form with multiplier `lambda`: a few
/// random transvections followed by `diag(λ,…,λ,1,…,1)`.
pub fn random_similitude(rng: &mut impl Rng, space: &SymplecticSpace, lambda: u64) -> MatrixMod {
    let ring = space.ring();
    let n = space.dim();
    let g = space.g();
    let mut m = MatrixMod::identity(ring, n);
    for _ in 0..3 {
        let v = random_vec(rng, ring, n);
        let w = space.form().transpose().mul_vec(&v);
        let c = rng.gen_range(0..ring.modulus());
        let t = MatrixMod::from_fn(ring, n, n, |i, j| {
            let delta = i64::from(i == j);
            delta + ring.mul(c, ring.mul(v[i], w[j])) as i64
        });
        m = &m * &t;
    }
    let d = MatrixMod::from_fn(ring, n, n, |i, j| match (i == j, i < g) {
        (true, true) => lambda as i64,
        (true, false) => 1,
        _ => 0,
    });
    &m * &d
}

/// Every element of the span of `gens`, by additive closure.
pub fn span_oracle(ring: ResidueRing, dim: usize, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
    let zero = vec![0u64; dim];
    let mut seen = HashSet::from([zero.clone()]);
    let mut stack = vec![zero];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: Vec<u64> = x
                .iter()
                .zip(g)
                .map(|(&a, &b)| ring.add(a, ring.reduce_u(b)))
                .collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Exponent of the order of `v`, computed by repeated multiplication by `l`.
pub fn order_exponent_oracle(ring: ResidueRing, v: &[u64]) -> u32 {
    let mut w = v.to_vec();
    let mut k = 0;
    while w.iter().any(|&x| x != 0) {
        w = w.iter().map(|&x| ring.mul(x, ring.ell())).collect();
        k += 1;
    }
    k
}

/// `m₁(H)` from the definition, over the explicit element set.
pub fn m1_oracle(ring: ResidueRing, g: usize, elements: &HashSet<Vec<u64>>) -> u32 {
    let mut by_order: BTreeMap<u32, Vec<&Vec<u64>>> = BTreeMap::new();
    for e in elements {
        by_order
            .entry(order_exponent_oracle(ring, e))
            .or_default()
            .push(e);
    }
    let ell = ring.ell();
    let mut best = 0;
    for (&n, points) in by_order.iter().rev() {
        if n <= best {
            continue;
        }
        'outer: for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                let mut e = weil_oracle(ring, g, p, q, n);
                let mut k = n;
                while e != 0 && e.is_multiple_of(ell) {
                    e /= ell;
                    k -= 1;
                }
                let k = if e == 0 { 0 } else { k };
                best = best.max(k);
                if best == n {
                    break 'outer;
                }
            }
        }
    }
    best
}

pub fn is_power_of(x: u64, ell: u64) -> bool {
    let mut x = x;
    while x > 1 && x.is_multiple_of(ell) {
        x /= ell;
    }
    x == 1
}
