//! Alternating forms, similitudes and the Weil pairing on torsion.
//!
//! Roots of unity never appear: the value of the `l^n`-pairing is recorded as
//! its exponent in `Z/l^n` with respect to a fixed primitive `l^n`-th root, so
//! "generates `μ_{l^k}`" becomes `k = n - valuation(exponent)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modring::{MatrixMod, ResidueElem, ResidueRing};
use crate::torsion::{point_order_exponent, TorsionSubgroup};

/// Free module `(Z/l^N)^{2g}` with a non-degenerate alternating form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    g: usize,
    form: MatrixMod,
}

/// Value of `e_{l^n}(P, Q)` written additively.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairingValue {
    exponent: ResidueElem,
}

impl PairingValue {
    pub fn exponent(&self) -> ResidueElem {
        self.exponent
    }

    pub fn level(&self) -> u32 {
        self.exponent.ring().level()
    }

    /// The `k` such that the pairing value generates `μ_{l^k}`.
    pub fn root_order_exponent(&self) -> u32 {
        self.level() - self.exponent.valuation()
    }
}

impl SymplecticSpace {
    fn validated(g: usize, form: MatrixMod) -> Result<Self> {
        let n = form.rows();
        if g == 0 || n != 2 * g || !form.is_square() {
            return Err(Error::InvalidForm);
        }
        let r = form.ring();
        let alternating = (0..n).all(|i| {
            form.get(i, i) == 0 && (0..n).all(|j| form.get(i, j) == r.neg(form.get(j, i)))
        });
        if !alternating || !form.det().is_unit() {
            return Err(Error::InvalidForm);
        }
        Ok(Self { g, form })
    }

    /// Antidiagonal form: `+1` in rows `1..g`, `-1` in rows `g+1..2g`.
    pub fn standard(g: usize, ring: ResidueRing) -> Result<Self> {
        let n = 2 * g;
        let form = MatrixMod::from_fn(ring, n, n, |i, j| match (i + j + 1 == n, i < g) {
            (true, true) => 1,
            (true, false) => -1,
            _ => 0,
        });
        Self::validated(g, form)
    }

    /// `ψ ⊗ ... ⊗ ψ` (`k` factors) on `(Z/l^N)^{2^k}`, basis ordered
    /// lexicographically with the first tensor factor most significant.
    pub fn tensor(k: u32, ring: ResidueRing) -> Result<Self> {
        if k.is_multiple_of(2) {
            return Err(Error::NotAlternating(k));
        }
        let psi = MatrixMod::from_rows(ring, &[vec![0, 1], vec![-1, 0]])?;
        let form = (1..k).fold(psi.clone(), |acc, _| acc.kron(&psi));
        Self::validated(1 << (k - 1), form)
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch);
        }
        let (a, b) = (self.dim(), other.dim());
        let mut form = MatrixMod::zeros(self.ring(), a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                form.set(i, j, self.form.get(i, j));
            }
        }
        for i in 0..b {
            for j in 0..b {
                form.set(a + i, a + j, other.form.get(i, j));
            }
        }
        Self::validated(self.g + other.g, form)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn ring(&self) -> ResidueRing {
        self.form.ring()
    }

    pub fn form(&self) -> &MatrixMod {
        &self.form
    }

    /// The same form over `Z/l^m`.
    pub fn at_level(&self, level: u32) -> Result<Self> {
        Ok(Self {
            g: self.g,
            form: self.form.reduce_level(level)?,
        })
    }

    /// The unit `λ` with `Mᵀ ψ M = λ ψ`.
    pub fn multiplier(&self, m: &MatrixMod) -> Result<ResidueElem> {
        if m.ring() != self.ring() {
            return Err(Error::RingMismatch);
        }
        if !m.is_square() || m.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.rows(),
            });
        }
        let r = self.ring();
        let pulled = &(&m.transpose() * &self.form) * m;
        let n = self.dim();
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| r.is_unit(self.form.get(i, j)))
            .expect("non-degenerate form has a unit entry");
        let lambda = r.mul(pulled.get(i, j), r.inv(self.form.get(i, j)).expect("unit"));
        if !r.is_unit(lambda) || pulled != self.form.scale(lambda) {
            return Err(Error::NotSimilitude);
        }
        Ok(ResidueElem::new(r, lambda))
    }

    pub fn is_similitude(&self, m: &MatrixMod) -> bool {
        self.multiplier(m).is_ok()
    }

    /// `e_{l^n}(P, Q)` for points of order dividing `l^n` in `(Z/l^N)^{2g}`.
    pub fn weil_pairing(&self, p: &[u64], q: &[u64], n: u32) -> Result<PairingValue> {
        let r = self.ring();
        if n == 0 || n > r.level() {
            return Err(Error::InvalidLevel(n));
        }
        for v in [p, q] {
            if v.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: v.len(),
                });
            }
        }
        let target = r.at_level(n)?;
        let divisor = r.ell().pow(r.level() - n);
        let descend = |v: &[u64]| -> Result<Vec<u64>> {
            v.iter()
                .map(|&x| {
                    let x = r.reduce_u(x);
                    if x.is_multiple_of(divisor) {
                        Ok(x / divisor)
                    } else {
                        Err(Error::OrderTooLarge {
                            ell: r.ell(),
                            level: n,
                        })
                    }
                })
                .collect()
        };
        let (p, q) = (descend(p)?, descend(q)?);
        let form = self.form.reduce_level(n)?;
        let fq = form.mul_vec(&q);
        let value = p
            .iter()
            .zip(&fq)
            .fold(0, |acc, (&a, &b)| target.add(acc, target.mul(a, b)));
        Ok(PairingValue {
            exponent: ResidueElem::new(target, value),
        })
    }

    /// `m₁(H)` computed on pairs of Smith generators brought to a common order.
    ///
    /// Bilinearity bounds the root order of any pair of points of `H` by the
    /// value on some generator pair, so this agrees with [`Self::m1_exhaustive`].
    pub fn m1(&self, h: &TorsionSubgroup) -> Result<u32> {
        self.check_ambient(h)?;
        let r = self.ring();
        let (basis, orders) = (h.basis(), h.orders());
        let mut best = 0;
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let n = orders[i].min(orders[j]);
                let scale_i = r.ell_pow(orders[i] - n);
                let scale_j = r.ell_pow(orders[j] - n);
                let p: Vec<u64> = basis[i].iter().map(|&x| r.mul(x, scale_i)).collect();
                let q: Vec<u64> = basis[j].iter().map(|&x| r.mul(x, scale_j)).collect();
                best = best.max(self.weil_pairing(&p, &q, n)?.root_order_exponent());
            }
        }
        Ok(best)
    }

    /// `m₁(H)` straight from the definition: every pair of elements of equal
    /// exact order. Fails with `CapExceeded` when `|H| > cap`.
    pub fn m1_exhaustive(&self, h: &TorsionSubgroup, cap: u64) -> Result<u32> {
        self.check_ambient(h)?;
        let r = self.ring();
        let elements = h.elements(cap)?;
        let mut by_order: Vec<Vec<Vec<u64>>> = vec![Vec::new(); r.level() as usize + 1];
        for e in elements {
            let n = point_order_exponent(r, &e);
            by_order[n as usize].push(e);
        }
        let mut best = 0;
        for (n, points) in by_order.iter().enumerate().skip(1) {
            let n = n as u32;
            if points.len() < 2 || best >= n {
                continue;
            }
            let target = r.at_level(n)?;
            let form = self.form.reduce_level(n)?;
            let divisor = r.ell().pow(r.level() - n);
            let descended: Vec<Vec<u64>> = points
                .iter()
                .map(|p| p.iter().map(|&x| x / divisor).collect())
                .collect();
            let paired: Vec<Vec<u64>> = descended.iter().map(|q| form.mul_vec(q)).collect();
            let k = descended
                .par_iter()
                .enumerate()
                .map(|(i, x)| {
                    paired[i + 1..]
                        .iter()
                        .map(|fy| {
                            let e = x
                                .iter()
                                .zip(fy)
                                .fold(0, |acc, (&a, &b)| target.add(acc, target.mul(a, b)));
                            n - target.valuation(e)
                        })
                        .max()
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(0);
            best = best.max(k);
        }
        Ok(best)
    }

    fn check_ambient(&self, h: &TorsionSubgroup) -> Result<()> {
        if h.ring() != self.ring() {
            return Err(Error::RingMismatch);
        }
        if h.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: h.ambient_dim(),
            });
        }
        Ok(())
    }
}
