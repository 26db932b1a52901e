//! Matrix groups standing in for `Gal(K(A[l^n])/K)`, and the field degrees
//! read off from them.
//!
//! The dictionary is the usual one: `[K(H):K]` is the index of the pointwise
//! stabilizer of `H`, the multiplier `λ` plays the cyclotomic character, so
//! `[K(μ_{l^m}):K]` is the size of `λ(G) mod l^m` and
//! `[K(H) ∩ K(μ_{l^∞}):K] = |λ(G)| / |λ(T)|` with `T` the stabilizer. The
//! cyclotomic tower is truncated at the level of the group's ring.

use std::collections::{BTreeSet, HashSet, VecDeque};

use indexmap::IndexSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{MatrixMod, ResidueRing};
use crate::symplectic::SymplecticSpace;
use crate::torsion::TorsionSubgroup;
use crate::DEFAULT_CAP;

/// A finite subgroup of `GSp(ψ)` given by generators, optionally with its
/// full element list.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    space: SymplecticSpace,
    generators: Vec<MatrixMod>,
    elements: Option<IndexSet<MatrixMod>>,
    order: Option<u64>,
}

impl MatrixGroup {
    /// Unmaterialized group; every generator must be a similitude of `space`.
    pub fn new(space: SymplecticSpace, generators: Vec<MatrixMod>) -> Result<Self> {
        for g in &generators {
            space.multiplier(g)?;
        }
        Ok(Self {
            space,
            generators,
            elements: None,
            order: None,
        })
    }

    /// Records a known group order without materializing.
    pub fn with_order(mut self, order: u64) -> Self {
        self.order = Some(order);
        self
    }

    /// Group from an explicit element list; the list must contain the
    /// identity and be closed under products.
    pub fn from_closed_set(space: SymplecticSpace, elements: Vec<MatrixMod>) -> Result<Self> {
        for m in &elements {
            space.multiplier(m)?;
        }
        let set: IndexSet<MatrixMod> = elements.into_iter().collect();
        let id = MatrixMod::identity(space.ring(), space.dim());
        let closed = set.contains(&id)
            && set
                .iter()
                .all(|a| set.iter().all(|b| set.contains(&(a * b))));
        if !closed {
            return Err(Error::ExpectationFailed(
                "element list is not a group".into(),
            ));
        }
        Ok(Self::from_elements(space, set))
    }

    /// Wraps a set already known to be a subgroup (e.g. a stabilizer).
    fn from_elements(space: SymplecticSpace, elements: IndexSet<MatrixMod>) -> Self {
        Self {
            space,
            generators: elements.iter().cloned().collect(),
            order: Some(elements.len() as u64),
            elements: Some(elements),
        }
    }

    /// Materializes the element set by breadth-first closure.
    pub fn materialize(&self, cap: u64) -> Result<Self> {
        if self.elements.is_some() {
            return Ok(self.clone());
        }
        let id = MatrixMod::identity(self.space.ring(), self.space.dim());
        let mut elements = IndexSet::new();
        elements.insert(id);
        let mut next = 0;
        while next < elements.len() {
            let current = elements[next].clone();
            next += 1;
            for g in &self.generators {
                let product = &current * g;
                if !elements.contains(&product) {
                    if elements.len() as u64 >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    elements.insert(product);
                }
            }
        }
        Ok(Self {
            space: self.space.clone(),
            generators: self.generators.clone(),
            order: Some(elements.len() as u64),
            elements: Some(elements),
        })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn ring(&self) -> ResidueRing {
        self.space.ring()
    }

    pub fn generators(&self) -> &[MatrixMod] {
        &self.generators
    }

    pub fn is_materialized(&self) -> bool {
        self.elements.is_some()
    }

    /// Elements in insertion order, if materialized.
    pub fn elements(&self) -> Option<impl Iterator<Item = &MatrixMod>> {
        self.elements.as_ref().map(|e| e.iter())
    }

    pub fn order(&self) -> Option<u64> {
        self.order
    }

    pub fn contains(&self, m: &MatrixMod) -> Result<bool> {
        self.elements
            .as_ref()
            .map(|e| e.contains(m))
            .ok_or(Error::NotMaterialized)
    }

    pub fn is_subgroup_of(&self, other: &Self) -> Result<bool> {
        let mine = self.elements.as_ref().ok_or(Error::NotMaterialized)?;
        let theirs = other.elements.as_ref().ok_or(Error::NotMaterialized)?;
        Ok(mine.iter().all(|m| theirs.contains(m)))
    }

    /// Image under reduction `Z/l^n -> Z/l^m`.
    pub fn reduce(&self, level: u32, cap: u64) -> Result<Self> {
        let space = self.space.at_level(level)?;
        match &self.elements {
            Some(elements) => {
                let reduced: IndexSet<MatrixMod> = elements
                    .iter()
                    .map(|m| m.reduce_level(level))
                    .collect::<Result<_>>()?;
                Ok(Self::from_elements(space, reduced))
            }
            None => {
                let gens = self
                    .generators
                    .iter()
                    .map(|m| m.reduce_level(level))
                    .collect::<Result<_>>()?;
                Self::new(space, gens)?.materialize(cap)
            }
        }
    }

    fn require_elements(&self) -> Result<&IndexSet<MatrixMod>> {
        self.elements.as_ref().ok_or(Error::NotMaterialized)
    }
}

/// Closure of `generators` inside `GSp(space)`.
pub fn close(space: &SymplecticSpace, generators: Vec<MatrixMod>, cap: u64) -> Result<MatrixGroup> {
    MatrixGroup::new(space.clone(), generators)?.materialize(cap)
}

fn check_ambient(g: &MatrixGroup, h: &TorsionSubgroup) -> Result<()> {
    if g.ring() != h.ring() {
        return Err(Error::RingMismatch);
    }
    if g.space.dim() != h.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: g.space.dim(),
            found: h.ambient_dim(),
        });
    }
    Ok(())
}

/// Pointwise stabilizer `{M ∈ G : M ê = ê}` over the Smith basis of `H`.
pub fn stabilizer(g: &MatrixGroup, h: &TorsionSubgroup) -> Result<MatrixGroup> {
    check_ambient(g, h)?;
    let elements = g.require_elements()?;
    let fixed: IndexSet<MatrixMod> = elements
        .iter()
        .filter(|m| h.basis().iter().all(|e| m.mul_vec(e) == *e))
        .cloned()
        .collect();
    Ok(MatrixGroup::from_elements(g.space.clone(), fixed))
}

/// Size of the orbit of the Smith basis tuple of `H`, i.e. `[G : Stab(H)]`,
/// computed from generators alone.
pub fn orbit_size(g: &MatrixGroup, h: &TorsionSubgroup, cap: u64) -> Result<u64> {
    check_ambient(g, h)?;
    let start: Vec<u64> = h.basis().concat();
    let dim = h.ambient_dim();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(tuple) = queue.pop_front() {
        for m in g.generators() {
            let moved: Vec<u64> = tuple.chunks(dim).flat_map(|v| m.mul_vec(v)).collect();
            if !seen.contains(&moved) {
                if seen.len() as u64 >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                seen.insert(moved.clone());
                queue.push_back(moved);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Model of `[K(H):K]`: `|G| / |Stab(H)|`, falling back to the orbit count
/// when `G` is not materialized.
pub fn degree_kh(g: &MatrixGroup, h: &TorsionSubgroup) -> Result<u64> {
    if g.is_materialized() {
        let t = stabilizer(g, h)?;
        Ok(g.order().expect("materialized") / t.order().expect("materialized"))
    } else {
        orbit_size(g, h, DEFAULT_CAP)
    }
}

/// `λ(G) mod l^m` as a set of residues. Since `λ` is a homomorphism this is
/// the subgroup of units generated by the multipliers of the generators.
pub fn multiplier_image(g: &MatrixGroup, m: u32) -> Result<BTreeSet<u64>> {
    let ring = g.ring();
    if m > ring.level() {
        return Err(Error::InvalidLevel(m));
    }
    if m == 0 {
        return Ok(BTreeSet::from([0]));
    }
    let target = ring.at_level(m)?;
    let lambdas: BTreeSet<u64> = g
        .generators()
        .iter()
        .map(|x| g.space.multiplier(x).map(|l| target.reduce_u(l.value())))
        .collect::<Result<_>>()?;
    let mut image = BTreeSet::from([1 % target.modulus()]);
    let mut frontier = vec![1 % target.modulus()];
    while let Some(x) = frontier.pop() {
        for &l in &lambdas {
            let y = target.mul(x, l);
            if image.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(image)
}

/// Model of `[K(μ_{l^m}):K]`.
pub fn cyclo_degree(g: &MatrixGroup, m: u32) -> Result<u64> {
    Ok(multiplier_image(g, m)?.len() as u64)
}

/// `|λ_m(G)| / |λ_m(T)|` for an already computed stabilizer `T`.
pub fn cyclo_intersection_degree_with(g: &MatrixGroup, t: &MatrixGroup, m: u32) -> Result<u64> {
    Ok(cyclo_degree(g, m)? / cyclo_degree(t, m)?)
}

/// Model of `[K(H) ∩ K(μ_{l^m}):K]`; with `m` equal to the level this is the
/// intersection with the whole cyclotomic tower.
pub fn cyclo_intersection_degree(g: &MatrixGroup, h: &TorsionSubgroup, m: u32) -> Result<u64> {
    let t = stabilizer(g, h)?;
    cyclo_intersection_degree_with(g, &t, m)
}

/// `[K(H) ∩ K(μ_{l^∞}):K] / [K(μ_{l^{m₁(H)}}):K]`. A family violates the
/// strong property exactly when this is unbounded in either direction.
pub fn mu_s_ratio(g: &MatrixGroup, h: &TorsionSubgroup) -> Result<Ratio<u64>> {
    let intersection = cyclo_intersection_degree(g, h, g.ring().level())?;
    let m1 = g.space.m1(h)?;
    Ok(Ratio::new(intersection, cyclo_degree(g, m1)?))
}

fn first_weak_level(g: &MatrixGroup, intersection: u64, c: Ratio<u64>) -> Result<Option<u32>> {
    let value = Ratio::from_integer(intersection);
    for n in 0..=g.ring().level() {
        let d = Ratio::from_integer(cyclo_degree(g, n)?);
        if d / c <= value && value <= c * d {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Smallest `n` for which the weak inequality holds with constant `c`.
pub fn mu_w_witness(g: &MatrixGroup, h: &TorsionSubgroup, c: Ratio<u64>) -> Result<Option<u32>> {
    let intersection = cyclo_intersection_degree(g, h, g.ring().level())?;
    first_weak_level(g, intersection, c)
}

/// Condition "`M` fixes every vector of `fixed` modulo `l^cutoff`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCondition {
    pub fixed: Vec<Vec<u64>>,
    pub cutoff: u32,
}

/// The chain `𝒢_1 ⊆ ... ⊆ 𝒢_t` attached to `H`: `𝒢_r` fixes the lifts of the
/// Smith generators of order at least `n_r`, with cutoffs `n_1 < ... < n_t`
/// the distinct orders of `H`.
pub fn congruence_chain(h: &TorsionSubgroup) -> Vec<CongruenceCondition> {
    let distinct: BTreeSet<u32> = h.orders().iter().copied().collect();
    distinct
        .into_iter()
        .map(|cutoff| CongruenceCondition {
            fixed: h
                .lifts()
                .iter()
                .zip(h.orders())
                .filter(|(_, &m)| m >= cutoff)
                .map(|(u, _)| u.clone())
                .collect(),
            cutoff,
        })
        .collect()
}

/// `𝒢(n; n_1, ..., n_t)`: elements of `G` lying in `𝒢_i` modulo
/// `l^{min(n, n_i)}` for every `i`.
pub fn filtered_subgroup(g: &MatrixGroup, chain: &[CongruenceCondition]) -> Result<MatrixGroup> {
    let ring = g.ring();
    let dim = g.space.dim();
    let elements = g.require_elements()?;
    let mut spans = Vec::with_capacity(chain.len());
    for cond in chain {
        if cond.cutoff == 0 {
            return Err(Error::ChainNotIncreasing);
        }
        spans.push(TorsionSubgroup::from_generators(ring, dim, &cond.fixed)?);
    }
    for (i, pair) in chain.windows(2).enumerate() {
        if pair[0].cutoff >= pair[1].cutoff || !spans[i + 1].is_subgroup_of(&spans[i])? {
            return Err(Error::ChainNotIncreasing);
        }
    }
    let conditions: Vec<(u64, Vec<Vec<u64>>)> = chain
        .iter()
        .map(|c| {
            let k = c.cutoff.min(ring.level());
            let vs = c
                .fixed
                .iter()
                .map(|v| v.iter().map(|&x| ring.reduce_u(x)).collect())
                .collect();
            (ring.ell().pow(k), vs)
        })
        .collect();
    let kept: IndexSet<MatrixMod> = elements
        .iter()
        .filter(|m| {
            conditions.iter().all(|(modulus, vs)| {
                vs.iter().all(|v| {
                    m.mul_vec(v)
                        .iter()
                        .zip(v)
                        .all(|(&a, &b)| ring.sub(a, b).is_multiple_of(*modulus))
                })
            })
        })
        .cloned()
        .collect();
    Ok(MatrixGroup::from_elements(g.space.clone(), kept))
}

/// `|GL_2(Z/l^n)| = l^{4(n-1)} (l^2 - 1)(l^2 - l)`.
pub fn gl2_order(ring: ResidueRing) -> u64 {
    let l = ring.ell();
    l.pow(4 * (ring.level() - 1)) * (l * l - 1) * (l * l - l)
}

/// Elementary matrices plus `diag(u, 1)` for generators `u` of the units.
pub fn gl2_generators(ring: ResidueRing) -> Vec<MatrixMod> {
    let mut gens = vec![
        MatrixMod::from_rows(ring, &[vec![1, 1], vec![0, 1]]).expect("2x2"),
        MatrixMod::from_rows(ring, &[vec![1, 0], vec![1, 1]]).expect("2x2"),
    ];
    gens.extend(
        ring.unit_generators()
            .into_iter()
            .map(|u| MatrixMod::diagonal(ring, &[u as i64, 1])),
    );
    gens
}

/// `GL_2(Z/l^n) = GSp_2`, unmaterialized, with its order recorded.
pub fn gl2_group(ring: ResidueRing) -> Result<MatrixGroup> {
    let space = SymplecticSpace::standard(1, ring)?;
    Ok(MatrixGroup::new(space, gl2_generators(ring))?.with_order(gl2_order(ring)))
}

/// Diagonal similitudes of the standard form acting on `(Z/l^n)^{2g}`,
/// with `H` generated by `(1, ..., 1)`.
pub fn scenario_cm(
    g: usize,
    ell: u64,
    level: u32,
    cap: u64,
) -> Result<(MatrixGroup, TorsionSubgroup)> {
    let ring = ResidueRing::new(ell, level)?;
    let space = SymplecticSpace::standard(g, ring)?;
    let n = 2 * g;
    let mut gens = Vec::new();
    for u in ring.unit_generators() {
        let u_inv = ring.inv(u).expect("unit");
        for i in 0..g {
            let mut d = vec![1i64; n];
            d[i] = u as i64;
            d[n - 1 - i] = u_inv as i64;
            gens.push(MatrixMod::diagonal(ring, &d));
        }
        let d: Vec<i64> = (0..n).map(|i| if i < g { 1 } else { u as i64 }).collect();
        gens.push(MatrixMod::diagonal(ring, &d));
    }
    let group = close(&space, gens, cap)?;
    let h = TorsionSubgroup::from_generators(ring, n, &[vec![1; n]])?;
    Ok((group, h))
}

/// `{diag(γ, γ) : γ ∈ GL_2(Z/l^n)}` on `B[l^n]^2` with the form `ψ ⊕ ψ`, and
/// `H = ⟨(P, Q)⟩` for a basis `P, Q` of `B[l^n]`.
pub fn scenario_selfproduct(
    ell: u64,
    level: u32,
    cap: u64,
) -> Result<(MatrixGroup, TorsionSubgroup)> {
    let ring = ResidueRing::new(ell, level)?;
    let psi = SymplecticSpace::standard(1, ring)?;
    let space = psi.direct_sum(&psi)?;
    let gens = gl2_generators(ring)
        .into_iter()
        .map(|gamma| block_diag(&[&gamma, &gamma]))
        .collect();
    let group = close(&space, gens, cap)?;
    let h = TorsionSubgroup::from_rows(ring, 4, &[vec![1, 0, 0, 1]])?;
    Ok((group, h))
}

pub(crate) fn block_diag(blocks: &[&MatrixMod]) -> MatrixMod {
    let ring = blocks[0].ring();
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = MatrixMod::zeros(ring, n, n);
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(offset + i, offset + j, b.get(i, j));
            }
        }
        offset += b.rows();
    }
    out
}

/// Degree data for one `(G, H)` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub ell: u64,
    pub level: u32,
    pub m1: u32,
    #[serde(rename = "deg_KH")]
    pub deg_kh: u64,
    pub deg_cyclo_intersection: u64,
    pub deg_cyclo_at_m1: u64,
    #[serde(with = "ratio_string")]
    pub ratio: Ratio<u64>,
    pub mu_w_witness_n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_elements: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_order: Option<u64>,
}

/// Full report for a materialized group.
pub fn degree_report(g: &MatrixGroup, h: &TorsionSubgroup, c: Ratio<u64>) -> Result<DegreeReport> {
    let t = stabilizer(g, h)?;
    degree_report_with_stabilizer(g, &t, h, c)
}

/// Report built from a stabilizer computed elsewhere; `G` only needs its
/// generators and, ideally, a known order.
pub fn degree_report_with_stabilizer(
    g: &MatrixGroup,
    t: &MatrixGroup,
    h: &TorsionSubgroup,
    c: Ratio<u64>,
) -> Result<DegreeReport> {
    check_ambient(g, h)?;
    let ring = g.ring();
    let level = ring.level();
    let m1 = g.space.m1(h)?;
    let t_order = t.order().ok_or(Error::NotMaterialized)?;
    let deg_kh = match g.order() {
        Some(order) => order / t_order,
        None => orbit_size(g, h, DEFAULT_CAP)?,
    };
    let deg_cyclo_intersection = cyclo_intersection_degree_with(g, t, level)?;
    let deg_cyclo_at_m1 = cyclo_degree(g, m1)?;
    Ok(DegreeReport {
        ell: ring.ell(),
        level,
        m1,
        deg_kh,
        deg_cyclo_intersection,
        deg_cyclo_at_m1,
        ratio: Ratio::new(deg_cyclo_intersection, deg_cyclo_at_m1),
        mu_w_witness_n: first_weak_level(g, deg_cyclo_intersection, c)?,
        stabilizer_size: None,
        stabilizer_elements: None,
        image_order: None,
    })
}

/// Whether `λ(G)` is all of `(Z/l^n)^×`. Groups where it is not are the
/// finite analogue of `l` ramifying in `K`.
pub fn multiplier_surjective(g: &MatrixGroup) -> Result<bool> {
    let ring = g.ring();
    Ok(cyclo_degree(g, ring.level())? == ring.unit_count())
}

/// Serializes rationals as `"p/q"` strings.
pub mod ratio_string {
    use num_rational::Ratio;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let text = String::deserialize(d)?;
        let (p, q) = text
            .split_once('/')
            .ok_or_else(|| D::Error::custom("expected p/q"))?;
        let p: u64 = p.parse().map_err(D::Error::custom)?;
        let q: u64 = q.parse().map_err(D::Error::custom)?;
        if q == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Ratio::new(p, q))
    }
}
