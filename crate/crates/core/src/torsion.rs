//! Finite subgroups of `(Z/l^N)^d`, stored through their Smith data.

use crate::error::{Error, Result};
use crate::modring::{smith_normal_form, MatrixMod, ResidueRing};

/// Exact order exponent of a point: the point has order `l^(N - min valuation)`.
pub fn point_order_exponent(ring: ResidueRing, v: &[u64]) -> u32 {
    let min_val = v
        .iter()
        .map(|&x| ring.valuation(x))
        .min()
        .unwrap_or(ring.level());
    ring.level() - min_val
}

/// A subgroup `H ≅ ∏ Z/l^{m_i}` of `(Z/l^N)^d`.
///
/// `basis[i]` has exact order `l^{orders[i]}` and the orders are
/// non-increasing. `transform` is the left Smith transform `U` of the
/// generator matrix; a vector `v` lies in `H` iff `(U v)_i` is divisible by
/// `l^{N - m_i}` for `i < rank` and vanishes beyond.
#[derive(Clone, Debug)]
pub struct TorsionSubgroup {
    ring: ResidueRing,
    dim: usize,
    basis: Vec<Vec<u64>>,
    lifts: Vec<Vec<u64>>,
    orders: Vec<u32>,
    transform: MatrixMod,
}

impl TorsionSubgroup {
    pub fn trivial(ring: ResidueRing, dim: usize) -> Self {
        Self {
            ring,
            dim,
            basis: Vec::new(),
            lifts: Vec::new(),
            orders: Vec::new(),
            transform: MatrixMod::identity(ring, dim),
        }
    }

    /// The whole group `(Z/l^N)^d`.
    pub fn full(ring: ResidueRing, dim: usize) -> Self {
        let gens: Vec<Vec<u64>> = (0..dim)
            .map(|i| (0..dim).map(|j| u64::from(i == j)).collect())
            .collect();
        Self::from_generators(ring, dim, &gens).expect("standard basis")
    }

    /// Smith-normalizes the subgroup generated by `vectors`.
    pub fn from_generators(ring: ResidueRing, dim: usize, vectors: &[Vec<u64>]) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if vectors.is_empty() {
            return Ok(Self::trivial(ring, dim));
        }
        let a = MatrixMod::from_columns(ring, dim, vectors);
        let smith = smith_normal_form(&a);
        let u_inv = smith.u.inverse().expect("Smith transform is invertible");
        let mut basis = Vec::new();
        let mut lifts = Vec::new();
        let mut orders = Vec::new();
        for (i, shift) in smith.diagonal_valuations().into_iter().enumerate() {
            if shift >= ring.level() {
                break;
            }
            let lift = u_inv.column(i);
            let scale = ring.ell_pow(shift);
            basis.push(lift.iter().map(|&x| ring.mul(x, scale)).collect());
            lifts.push(lift);
            orders.push(ring.level() - shift);
        }
        Ok(Self {
            ring,
            dim,
            basis,
            lifts,
            orders,
            transform: smith.u,
        })
    }

    /// Convenience constructor from signed integer rows.
    pub fn from_rows(ring: ResidueRing, dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let vectors: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| ring.reduce(x)).collect())
            .collect();
        Self::from_generators(ring, dim, &vectors)
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Smith basis `ê_i`.
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// Unimodular lifts `u_i` with `ê_i = l^{N - m_i} u_i`.
    pub fn lifts(&self) -> &[Vec<u64>] {
        &self.lifts
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// `log_l |H|`.
    pub fn log_order(&self) -> u32 {
        self.orders.iter().sum()
    }

    pub fn order(&self) -> Option<u128> {
        (self.ring.ell() as u128).checked_pow(self.log_order())
    }

    /// Largest `m` with an element of order `l^m`.
    pub fn exponent(&self) -> u32 {
        self.orders.first().copied().unwrap_or(0)
    }

    /// Coordinates `c_i` (reduced mod `l^{m_i}`) with `v = Σ c_i ê_i`, or
    /// `None` if `v ∉ H`.
    pub fn coefficients(&self, v: &[u64]) -> Option<Vec<u64>> {
        if v.len() != self.dim {
            return None;
        }
        let v: Vec<u64> = v.iter().map(|&x| self.ring.reduce_u(x)).collect();
        let w = self.transform.mul_vec(&v);
        let n = self.ring.level();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (i, &wi) in w.iter().enumerate() {
            match self.orders.get(i) {
                Some(&m) => {
                    let shift = n - m;
                    if self.ring.valuation(wi) < shift {
                        return None;
                    }
                    coeffs.push(wi / self.ring.ell().pow(shift));
                }
                None if wi != 0 => return None,
                None => {}
            }
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.coefficients(v).is_some()
    }

    /// `H[l^m] = {x ∈ H : l^m x = 0}`.
    pub fn slice(&self, m: u32) -> Self {
        let gens: Vec<Vec<u64>> = self
            .basis
            .iter()
            .zip(&self.orders)
            .filter(|(_, &mi)| m > 0 && mi > 0)
            .map(|(e, &mi)| {
                let scale = self.ring.ell_pow(mi.saturating_sub(m));
                e.iter().map(|&x| self.ring.mul(x, scale)).collect()
            })
            .collect();
        Self::from_generators(self.ring, self.dim, &gens).expect("same ambient space")
    }

    /// Image under the injection `A[l^N] -> A[l^{N'}]`, `N' >= N`.
    pub fn lift(&self, level: u32) -> Result<Self> {
        if level < self.ring.level() {
            return Err(Error::InvalidLevel(level));
        }
        let target = self.ring.at_level(level)?;
        let scale = target.ell_pow(level - self.ring.level());
        let gens: Vec<Vec<u64>> = self
            .basis
            .iter()
            .map(|e| e.iter().map(|&x| target.mul(x, scale)).collect())
            .collect();
        Self::from_generators(target, self.dim, &gens)
    }

    fn at_common_level(&self, other: &Self) -> Result<(Self, Self)> {
        if self.ring.ell() != other.ring.ell() || self.dim != other.dim {
            return Err(Error::RingMismatch);
        }
        let level = self.ring.level().max(other.ring.level());
        Ok((self.lift(level)?, other.lift(level)?))
    }

    pub fn is_subgroup_of(&self, other: &Self) -> Result<bool> {
        let (a, b) = self.at_common_level(other)?;
        Ok(a.basis.iter().all(|e| b.contains(e)))
    }

    /// Equality as subgroups; Smith bases themselves are not unique.
    pub fn same_subgroup(&self, other: &Self) -> Result<bool> {
        Ok(self.is_subgroup_of(other)? && other.is_subgroup_of(self)?)
    }

    /// `M·H`.
    pub fn image(&self, m: &MatrixMod) -> Result<Self> {
        if m.ring() != self.ring {
            return Err(Error::RingMismatch);
        }
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.cols(),
            });
        }
        let gens: Vec<Vec<u64>> = self.basis.iter().map(|e| m.mul_vec(e)).collect();
        Self::from_generators(self.ring, self.dim, &gens)
    }

    /// All elements `Σ c_i ê_i`, in lexicographic order of the coefficients.
    pub fn elements(&self, cap: u64) -> Result<Vec<Vec<u64>>> {
        let size = self
            .order()
            .filter(|&s| s <= cap as u128)
            .ok_or(Error::CapExceeded { cap })?;
        let r = self.ring;
        let mut out = Vec::with_capacity(size as usize);
        let mut coeffs = vec![0u64; self.rank()];
        let bounds: Vec<u64> = self.orders.iter().map(|&m| r.ell().pow(m)).collect();
        loop {
            let mut v = vec![0u64; self.dim];
            for (c, e) in coeffs.iter().zip(&self.basis) {
                for (x, &y) in v.iter_mut().zip(e) {
                    *x = r.add(*x, r.mul(*c, y));
                }
            }
            out.push(v);
            // odometer increment, last coefficient fastest
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < bounds[i] {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }
}

/// Parses generator rows written as `[[c11,...,c1d],...]`, optionally
/// prefixed by `H =`.
pub fn parse_generator_rows(text: &str) -> Result<Vec<Vec<i64>>> {
    let body = text.trim();
    let body = match body.split_once('=') {
        Some((key, rest)) if key.trim() == "H" => rest.trim(),
        _ => body,
    };
    serde_json::from_str(body).map_err(|e| Error::Parse(format!("generator rows {body:?}: {e}")))
}
