//! Exact arithmetic over the local rings `Z/l^n`.
//!
//! Residues are always stored as their least non-negative representative, so
//! equality and hashing of matrices are structural. Products are widened to
//! `u128` before reduction, which is all that is needed while `l^n` fits in a
//! machine word.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin; the base set is a proven witness set for all
/// 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Distinct prime factors by trial division. Only used on small group orders.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The ring `Z/l^n` for a prime `l` and a level `n >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueRing {
    ell: u64,
    level: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(ell: u64, level: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if level == 0 {
            return Err(Error::InvalidLevel(level));
        }
        let modulus = ell
            .checked_pow(level)
            .ok_or(Error::ModulusOverflow { ell, level })?;
        Ok(Self {
            ell,
            level,
            modulus,
        })
    }

    /// The prime field `F_l`.
    pub fn field(ell: u64) -> Result<Self> {
        Self::new(ell, 1)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_field(&self) -> bool {
        self.level == 1
    }

    /// Same prime, different level.
    pub fn at_level(&self, level: u32) -> Result<Self> {
        Self::new(self.ell, level)
    }

    /// `l^k` for `k <= level`, or `0` (the residue) when `k >= level`.
    pub fn ell_pow(&self, k: u32) -> u64 {
        if k >= self.level {
            0
        } else {
            self.ell.pow(k)
        }
    }

    pub fn reduce(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce_u(&self, x: u64) -> u64 {
        x % self.modulus
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.modulus as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.modulus - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.modulus)
    }

    /// Largest `v <= n` with `l^v | x`; zero has valuation `n`.
    pub fn valuation(&self, x: u64) -> u32 {
        let mut x = x % self.modulus;
        if x == 0 {
            return self.level;
        }
        let mut v = 0;
        while x.is_multiple_of(self.ell) {
            x /= self.ell;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.ell)
    }

    pub fn inv(&self, x: u64) -> Option<u64> {
        if !self.is_unit(x) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, (x % self.modulus) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.modulus as i128) as u64)
    }

    /// Returns `c` with `c * pivot == x`, given `valuation(x) >= valuation(pivot)`
    /// and `pivot != 0`.
    pub(crate) fn div_by_pivot(&self, x: u64, pivot: u64) -> u64 {
        let v = self.valuation(pivot);
        debug_assert!(v < self.level);
        debug_assert!(self.valuation(x) >= v);
        let scale = self.ell.pow(v);
        let unit = self.inv(pivot / scale).expect("pivot unit part");
        self.mul(x / scale, unit)
    }

    pub fn elem(&self, x: i64) -> ResidueElem {
        ResidueElem {
            value: self.reduce(x),
            ring: *self,
        }
    }

    /// Order of the unit group, `l^(n-1) (l - 1)`.
    pub fn unit_count(&self) -> u64 {
        self.modulus / self.ell * (self.ell - 1)
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.modulus).filter(move |&x| x % self.ell != 0)
    }

    /// A generating set for the unit group: one primitive root for odd `l`,
    /// `{-1, 5}` for `l = 2` at high enough level.
    pub fn unit_generators(&self) -> Vec<u64> {
        if self.ell == 2 {
            return match self.level {
                1 => vec![],
                2 => vec![3],
                _ => vec![self.modulus - 1, 5],
            };
        }
        let phi = self.unit_count();
        let factors = prime_factors(phi);
        let root = (2..self.modulus)
            .filter(|&g| self.is_unit(g))
            .find(|&g| factors.iter().all(|&q| self.pow(g, phi / q) != 1))
            .expect("unit group of Z/l^n is cyclic for odd l");
        vec![root]
    }
}

impl fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 1 {
            write!(f, "Z/{}", self.ell)
        } else {
            write!(f, "Z/{}^{}", self.ell, self.level)
        }
    }
}

/// A residue class together with the ring it lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElem {
    value: u64,
    ring: ResidueRing,
}

impl ResidueElem {
    pub fn new(ring: ResidueRing, value: u64) -> Self {
        Self {
            value: ring.reduce_u(value),
            ring,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inverse(&self) -> Result<Self> {
        self.ring
            .inv(self.value)
            .map(|value| Self {
                value,
                ring: self.ring,
            })
            .ok_or(Error::NotInvertible)
    }

    /// Signed representative in `(-l^n/2, l^n/2]`, convenient for display.
    pub fn centered(&self) -> i64 {
        let m = self.ring.modulus;
        if self.value > m / 2 {
            -((m - self.value) as i64)
        } else {
            self.value as i64
        }
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! elem_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ResidueElem {
            type Output = ResidueElem;
            fn $method(self, rhs: ResidueElem) -> ResidueElem {
                assert_eq!(self.ring, rhs.ring, "residues over different rings");
                ResidueElem {
                    value: self.ring.$method(self.value, rhs.value),
                    ring: self.ring,
                }
            }
        }
    };
}

elem_binop!(Add, add);
elem_binop!(Sub, sub);
elem_binop!(Mul, mul);

impl Neg for ResidueElem {
    type Output = ResidueElem;
    fn neg(self) -> ResidueElem {
        ResidueElem {
            value: self.ring.neg(self.value),
            ring: self.ring,
        }
    }
}

/// Dense matrix over `Z/l^n`, row-major.
///
/// Group elements, forms and generator sets are all carried by this type;
/// most of the crate uses square matrices but generator matrices for Smith
/// reduction may be rectangular.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixMod {
    ring: ResidueRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl MatrixMod {
    pub fn zeros(ring: ResidueRing, rows: usize, cols: usize) -> Self {
        Self {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: ResidueRing, dim: usize) -> Self {
        let mut m = Self::zeros(ring, dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1 % ring.modulus();
        }
        m
    }

    pub fn diagonal(ring: ResidueRing, diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = ring.reduce(d);
        }
        m
    }

    pub fn from_fn(
        ring: ResidueRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(ring.reduce(f(i, j)));
            }
        }
        Self {
            ring,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from integer rows; every row must have the same length.
    pub fn from_rows(ring: ResidueRing, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| ring.reduce(x)));
        }
        Ok(Self {
            ring,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors (already reduced).
    pub fn from_columns(ring: ResidueRing, dim: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(ring, dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length");
            for (i, &x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = ring.reduce_u(x);
            }
        }
        m
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn elem(&self, i: usize, j: usize) -> ResidueElem {
        ResidueElem {
            value: self.get(i, j),
            ring: self.ring,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = self.ring.reduce_u(value);
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[u64]>::to_vec)
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scale(&self, c: u64) -> Self {
        let r = self.ring;
        Self {
            data: self.data.iter().map(|&x| r.mul(x, c)).collect(),
            ..self.clone()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j) % self.ring.modulus())
            })
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length");
        let r = self.ring;
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let acc: u128 = row.iter().zip(v).fold(0u128, |acc, (&a, &b)| {
                    (acc + a as u128 * b as u128) % r.modulus() as u128
                });
                acc as u64
            })
            .collect()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let m = self.ring.modulus() as u128;
        let mut out = Self::zeros(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u128;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u128 * rhs.get(k, j) as u128) % m;
                }
                out.data[i * rhs.cols + j] = acc as u64;
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let r = self.ring;
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| r.add(a, b))
                .collect(),
            ..self.clone()
        })
    }

    /// Kronecker product `self ⊗ rhs`, with the row index of `self` most
    /// significant.
    pub fn kron(&self, rhs: &Self) -> Self {
        assert_eq!(self.ring, rhs.ring, "kron over different rings");
        let r = self.ring;
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(r, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] =
                            r.mul(a, rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Image under the reduction `Z/l^n -> Z/l^m`, `m <= n`.
    pub fn reduce_level(&self, level: u32) -> Result<Self> {
        let ring = self.ring.at_level(level)?;
        Ok(Self {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| ring.reduce_u(x)).collect(),
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] -= c * row[source]`
    fn row_axpy(&mut self, target: usize, source: usize, c: u64) {
        if c == 0 {
            return;
        }
        let r = self.ring;
        for j in 0..self.cols {
            let s = self.get(source, j);
            let t = &mut self.data[target * self.cols + j];
            *t = r.sub(*t, r.mul(c, s));
        }
    }

    /// `col[target] -= c * col[source]`
    fn col_axpy(&mut self, target: usize, source: usize, c: u64) {
        if c == 0 {
            return;
        }
        let r = self.ring;
        for i in 0..self.rows {
            let s = self.get(i, source);
            let t = &mut self.data[i * self.cols + target];
            *t = r.sub(*t, r.mul(c, s));
        }
    }

    fn scale_row(&mut self, row: usize, c: u64) {
        let r = self.ring;
        for j in 0..self.cols {
            let t = &mut self.data[row * self.cols + j];
            *t = r.mul(*t, c);
        }
    }

    /// Row of minimal valuation in column `col` among rows `from..`.
    fn min_valuation_row(&self, col: usize, from: usize) -> Option<(usize, u32)> {
        (from..self.rows)
            .map(|i| (i, self.ring.valuation(self.get(i, col))))
            .min_by_key(|&(i, v)| (v, i))
    }

    /// Determinant by minimal-valuation row pivoting, which is exact over a
    /// local ring.
    pub fn det(&self) -> ResidueElem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let r = self.ring;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1 % r.modulus();
        for k in 0..n {
            let (p, v) = a.min_valuation_row(k, k).expect("non-empty column");
            if v >= r.level() {
                return r.elem(0);
            }
            if p != k {
                a.swap_rows(p, k);
                det = r.neg(det);
            }
            let pivot = a.get(k, k);
            for i in k + 1..n {
                let c = r.div_by_pivot(a.get(i, k), pivot);
                a.row_axpy(i, k, c);
            }
            det = r.mul(det, pivot);
        }
        ResidueElem {
            value: det,
            ring: r,
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.det().is_unit()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let r = self.ring;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(r, n);
        for k in 0..n {
            let (p, v) = a.min_valuation_row(k, k).ok_or(Error::NotInvertible)?;
            if v > 0 {
                return Err(Error::NotInvertible);
            }
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let u = r.inv(a.get(k, k)).expect("unit pivot");
            a.scale_row(k, u);
            inv.scale_row(k, u);
            for i in 0..n {
                if i != k {
                    let c = a.get(i, k);
                    a.row_axpy(i, k, c);
                    inv.row_axpy(i, k, c);
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = rhs` over a prime field. Returns a particular
    /// solution and a basis of the kernel, or `None` if inconsistent.
    pub fn solve_affine(&self, rhs: &[u64]) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
        assert!(self.ring.is_field(), "solve_affine needs a prime field");
        assert_eq!(rhs.len(), self.rows, "right-hand side length");
        let r = self.ring;
        let (rows, cols) = (self.rows, self.cols);
        let mut aug = Self::zeros(r, rows, cols + 1);
        for (i, &b) in rhs.iter().enumerate() {
            for j in 0..cols {
                aug.data[i * (cols + 1) + j] = self.get(i, j);
            }
            aug.data[i * (cols + 1) + cols] = r.reduce_u(b);
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&i| aug.get(i, col) != 0) else {
                continue;
            };
            aug.swap_rows(p, row);
            let u = r.inv(aug.get(row, col)).expect("nonzero in a field");
            aug.scale_row(row, u);
            for i in 0..rows {
                if i != row {
                    let c = aug.get(i, col);
                    aug.row_axpy(i, row, c);
                }
            }
            pivots.push(col);
            row += 1;
        }
        if (row..rows).any(|i| aug.get(i, cols) != 0) {
            return None;
        }
        let mut particular = vec![0; cols];
        for (i, &c) in pivots.iter().enumerate() {
            particular[c] = aug.get(i, cols);
        }
        let kernel = (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0; cols];
                v[free] = 1;
                for (i, &c) in pivots.iter().enumerate() {
                    v[c] = r.neg(aug.get(i, free));
                }
                v
            })
            .collect();
        Some((particular, kernel))
    }
}

impl Mul for &MatrixMod {
    type Output = MatrixMod;

    fn mul(self, rhs: &MatrixMod) -> MatrixMod {
        self.checked_mul(rhs)
            .expect("matrix product shape/ring mismatch")
    }
}

impl fmt::Display for MatrixMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.elem(i, j).centered().to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: MatrixMod,
    pub d: MatrixMod,
    pub v: MatrixMod,
}

impl SmithForm {
    /// Valuations of the diagonal entries of `d` (zero entries report the level).
    pub fn diagonal_valuations(&self) -> Vec<u32> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d.ring().valuation(self.d.get(i, i)))
            .collect()
    }
}

/// Smith normal form over `Z/l^n` by minimal-valuation pivoting, ties broken
/// in row-major order. Each diagonal entry of `d` is `0` or a pure power of
/// `l`, and valuations are non-decreasing along the diagonal.
pub fn smith_normal_form(m: &MatrixMod) -> SmithForm {
    let r = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = MatrixMod::identity(r, rows);
    let mut v = MatrixMod::identity(r, cols);
    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let val = r.valuation(a.get(i, j));
                if best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let (val, pi, pj) = best.expect("non-empty submatrix");
        if val >= r.level() {
            break;
        }
        a.swap_rows(pi, k);
        u.swap_rows(pi, k);
        a.swap_cols(pj, k);
        v.swap_cols(pj, k);
        let unit = a.get(k, k) / r.ell().pow(val);
        let unit_inv = r.inv(unit).expect("unit part of pivot");
        a.scale_row(k, unit_inv);
        u.scale_row(k, unit_inv);
        let pivot = a.get(k, k);
        for i in k + 1..rows {
            let c = r.div_by_pivot(a.get(i, k), pivot);
            a.row_axpy(i, k, c);
            u.row_axpy(i, k, c);
        }
        for j in k + 1..cols {
            let c = r.div_by_pivot(a.get(k, j), pivot);
            a.col_axpy(j, k, c);
            v.col_axpy(j, k, c);
        }
    }
    SmithForm { u, d: a, v }
}
