//! The tensor-cube representation `GL_2 × GL_2 × GL_2 -> GSp_8`,
//! `(a, b, c) ↦ a ⊗ b ⊗ c`, over `F_l`, and the pointwise stabilizer of the
//! Lagrangian `ℋ = ⟨e111, e122, e212, e221⟩` inside its image.
//!
//! Basis order is `e111, e112, e121, e122, e211, e212, e221, e222`, which is
//! exactly the row order of the Kronecker product `a ⊗ b ⊗ c`.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::galois_model::{self, DegreeReport, MatrixGroup};
use crate::modring::{MatrixMod, ResidueRing};
use crate::symplectic::SymplecticSpace;
use crate::torsion::TorsionSubgroup;

/// Basis indices of `e111, e122, e212, e221`.
pub const LAGRANGIAN_INDICES: [usize; 4] = [0, 3, 5, 6];

/// `diag(1,-1,-1,1,-1,1,1,-1)`, the image of `(d, d, d)` with `d = diag(1,-1)`.
pub const SIGN_PATTERN: [i64; 8] = [1, -1, -1, 1, -1, 1, 1, -1];

/// A triple `(a, b, c)` with `a` and `b` normalized to have leading entry 1.
///
/// `ρ(a,b,c) = ρ(λa, μb, νc)` whenever `λμν = 1`, and normalizing `a` and
/// `b` picks one triple per fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorTriple {
    pub a: MatrixMod,
    pub b: MatrixMod,
    pub c: MatrixMod,
}

fn leading_entry(m: &MatrixMod) -> u64 {
    m.entries().iter().copied().find(|&x| x != 0).unwrap_or(0)
}

impl TensorTriple {
    pub fn canonical(a: &MatrixMod, b: &MatrixMod, c: &MatrixMod) -> Result<Self> {
        let ring = a.ring();
        let la = leading_entry(a);
        let lb = leading_entry(b);
        let ia = ring.inv(la).ok_or(Error::NotInvertible)?;
        let ib = ring.inv(lb).ok_or(Error::NotInvertible)?;
        Ok(Self {
            a: a.scale(ia),
            b: b.scale(ib),
            c: c.scale(ring.mul(la, lb)),
        })
    }

    pub fn rho(&self) -> Result<MatrixMod> {
        rho(&self.a, &self.b, &self.c)
    }
}

/// `a ⊗ b ⊗ c` acting on `(F^2)^{⊗3}`.
pub fn rho(a: &MatrixMod, b: &MatrixMod, c: &MatrixMod) -> Result<MatrixMod> {
    let ring = a.ring();
    for m in [a, b, c] {
        if m.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.rows(),
            });
        }
        if !m.is_invertible() {
            return Err(Error::NotInvertible);
        }
    }
    Ok(a.kron(b).kron(c))
}

/// The form `ψ ⊗ ψ ⊗ ψ` on `F_l^8`.
pub fn tensor_space(ell: u64) -> Result<SymplecticSpace> {
    SymplecticSpace::tensor(3, ResidueRing::field(ell)?)
}

/// `ℋ = ⟨e111, e122, e212, e221⟩ ⊂ F_l^8`.
pub fn lagrangian_h(ell: u64) -> Result<TorsionSubgroup> {
    let ring = ResidueRing::field(ell)?;
    let gens: Vec<Vec<u64>> = LAGRANGIAN_INDICES
        .iter()
        .map(|&i| (0..8).map(|j| u64::from(i == j)).collect())
        .collect();
    TorsionSubgroup::from_generators(ring, 8, &gens)
}

pub fn sign_operator(ring: ResidueRing) -> MatrixMod {
    MatrixMod::diagonal(ring, &SIGN_PATTERN)
}

fn pairwise_dependent(vectors: &[Vec<u64>], ring: ResidueRing) -> bool {
    vectors.iter().enumerate().all(|(i, x)| {
        vectors[i + 1..].iter().all(|y| {
            (0..x.len())
                .all(|s| (s + 1..x.len()).all(|t| ring.mul(x[s], y[t]) == ring.mul(x[t], y[s])))
        })
    })
}

fn block(m: &MatrixMod, row: usize, col: usize, size: usize) -> Vec<u64> {
    (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .map(|(i, j)| m.get(row + i, col + j))
        .collect()
}

/// Necessary condition for lying in the image of `ρ`: the four `4×4`
/// quadrants are pairwise linearly dependent, and so are the four `2×2`
/// sub-blocks inside each quadrant.
pub fn block_dependence(m: &MatrixMod) -> bool {
    if m.rows() != 8 || m.cols() != 8 {
        return false;
    }
    let ring = m.ring();
    let quadrants: Vec<Vec<u64>> = [(0, 0), (0, 4), (4, 0), (4, 4)]
        .iter()
        .map(|&(r, c)| block(m, r, c, 4))
        .collect();
    if !pairwise_dependent(&quadrants, ring) {
        return false;
    }
    [(0, 0), (0, 4), (4, 0), (4, 4)].iter().all(|&(r, c)| {
        let subs: Vec<Vec<u64>> = [(0, 0), (0, 2), (2, 0), (2, 2)]
            .iter()
            .map(|&(i, j)| block(m, r + i, c + j, 2))
            .collect();
        pairwise_dependent(&subs, ring)
    })
}

/// All of `GL_2(F_l)`, in row-major lexicographic order.
pub fn gl2_elements(ring: ResidueRing, cap: u64) -> Result<Vec<MatrixMod>> {
    let q = ring.modulus();
    if q.checked_pow(4).is_none_or(|n| n > cap) {
        return Err(Error::CapExceeded { cap });
    }
    let mut out = Vec::new();
    for x in 0..q.pow(4) {
        let e = [x / (q * q * q), (x / (q * q)) % q, (x / q) % q, x % q];
        let m = MatrixMod::from_fn(ring, 2, 2, |i, j| e[2 * i + j] as i64);
        if ring.is_unit(ring.sub(ring.mul(e[0], e[3]), ring.mul(e[1], e[2]))) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Elements of `GL_2(F_l)` whose first nonzero entry is 1.
pub fn canonical_gl2(ring: ResidueRing, cap: u64) -> Result<Vec<MatrixMod>> {
    Ok(gl2_elements(ring, cap)?
        .into_iter()
        .filter(|m| leading_entry(m) == 1)
        .collect())
}

/// `|image(ρ)(F_l)| = (|GL_2(F_l)| / (l-1))^2 · |GL_2(F_l)|`, counted over
/// canonical triples.
pub fn image_order(ell: u64, cap: u64) -> Result<u64> {
    let ring = ResidueRing::field(ell)?;
    let all = gl2_elements(ring, cap)?;
    let canonical = all.iter().filter(|m| leading_entry(m) == 1).count() as u64;
    Ok(canonical * canonical * all.len() as u64)
}

/// Image of `ρ` as an unmaterialized group with its order recorded.
pub fn mumford_group(ell: u64, cap: u64) -> Result<MatrixGroup> {
    let space = tensor_space(ell)?;
    let ring = space.ring();
    let id = MatrixMod::identity(ring, 2);
    let mut gens = Vec::new();
    for gamma in galois_model::gl2_generators(ring) {
        gens.push(rho(&gamma, &id, &id)?);
        gens.push(rho(&id, &gamma, &id)?);
        gens.push(rho(&id, &id, &gamma)?);
    }
    Ok(MatrixGroup::new(space, gens)?.with_order(image_order(ell, cap)?))
}

/// All `ρ(a,b,c)` fixing `e111, e122, e212, e221`.
///
/// For fixed canonical `(a, b)` the conditions `ρ(a,b,c) e = e` are linear in
/// the entries of `c`, so `c` is solved for instead of enumerated. `cap`
/// bounds the number of `(a, b)` pairs visited.
pub fn pointwise_stabilizer_in_image(ell: u64, cap: u64) -> Result<Vec<MatrixMod>> {
    let ring = ResidueRing::field(ell)?;
    let canonical = canonical_gl2(ring, cap)?;
    let pairs = (canonical.len() as u64).pow(2);
    if pairs > cap {
        return Err(Error::CapExceeded { cap });
    }
    let found: BTreeSet<MatrixMod> = canonical
        .par_iter()
        .flat_map_iter(|a| canonical.iter().flat_map(move |b| solve_for_c(a, b)))
        .collect();
    Ok(found.into_iter().collect())
}

/// Column `(i,j,k)` of `a ⊗ b ⊗ c` is `a_{·i} ⊗ b_{·j} ⊗ c_{·k}`; requiring it
/// to equal `e_{ijk}` gives eight equations in `c_{0k}, c_{1k}`.
fn solve_for_c(a: &MatrixMod, b: &MatrixMod) -> Vec<MatrixMod> {
    let ring = a.ring();
    let mut system = MatrixMod::zeros(ring, 32, 4);
    let mut rhs = vec![0u64; 32];
    for (block_idx, &basis) in LAGRANGIAN_INDICES.iter().enumerate() {
        let (i, j, k) = (basis >> 2, (basis >> 1) & 1, basis & 1);
        for row in 0..8 {
            let (p, q, r) = (row >> 2, (row >> 1) & 1, row & 1);
            let eq = block_idx * 8 + row;
            // unknown c[r][k] sits at index 2r + k
            system.set(eq, 2 * r + k, ring.mul(a.get(p, i), b.get(q, j)));
            rhs[eq] = u64::from(row == basis);
        }
    }
    let Some((particular, kernel)) = system.solve_affine(&rhs) else {
        return Vec::new();
    };
    let l = ring.modulus();
    let count = l.pow(kernel.len() as u32);
    (0..count)
        .filter_map(|mut idx| {
            let mut x = particular.clone();
            for k in &kernel {
                let t = idx % l;
                idx /= l;
                for (xi, &ki) in x.iter_mut().zip(k) {
                    *xi = ring.add(*xi, ring.mul(t, ki));
                }
            }
            let c = MatrixMod::from_fn(ring, 2, 2, |r, s| x[2 * r + s] as i64);
            rho(a, b, &c).ok()
        })
        .collect()
}

/// Runs the tensor-cube counterexample for each prime, checking the expected
/// values along the way, and returns one report per prime. `c` is the
/// constant used for the weak-property witness.
pub fn verify_mu_s_failure(ells: &[u64], c: Ratio<u64>, cap: u64) -> Result<Vec<DegreeReport>> {
    ells.iter().map(|&ell| verify_one(ell, c, cap)).collect()
}

fn expect(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ExpectationFailed(what()))
    }
}

fn verify_one(ell: u64, c: Ratio<u64>, cap: u64) -> Result<DegreeReport> {
    let group = mumford_group(ell, cap)?;
    let space = group.space().clone();
    let ring = space.ring();
    let h = lagrangian_h(ell)?;

    let m1 = space.m1(&h)?;
    expect(m1 == 0, || format!("l={ell}: m1(ℋ) = {m1}, expected 0"))?;

    let stab = pointwise_stabilizer_in_image(ell, cap)?;
    let mut expected = BTreeSet::from([MatrixMod::identity(ring, 8)]);
    if ell != 2 {
        expected.insert(sign_operator(ring));
    }
    let got: BTreeSet<MatrixMod> = stab.iter().cloned().collect();
    expect(got == expected, || {
        format!(
            "l={ell}: stabilizer has {} elements, expected {}",
            got.len(),
            expected.len()
        )
    })?;
    let t = MatrixGroup::from_closed_set(space, stab.clone())?;

    let lambda_t = galois_model::multiplier_image(&t, 1)?;
    let expected_lambda: BTreeSet<u64> = [1, ring.neg(1)].into_iter().collect();
    expect(lambda_t == expected_lambda, || {
        format!("l={ell}: λ(T) = {lambda_t:?}")
    })?;

    let mut report = galois_model::degree_report_with_stabilizer(&group, &t, &h, c)?;
    let expected_intersection = (ell - 1) / lambda_t.len() as u64;
    expect(
        report.deg_cyclo_intersection == expected_intersection,
        || {
            format!(
                "l={ell}: intersection degree {} but (l-1)/|λ(T)| = {expected_intersection}",
                report.deg_cyclo_intersection
            )
        },
    )?;
    report.stabilizer_size = Some(stab.len() as u64);
    report.stabilizer_elements = Some(stab.iter().map(|m| m.entries().to_vec()).collect());
    report.image_order = group.order();
    Ok(report)
}
