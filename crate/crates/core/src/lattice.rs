//! The hyperbolic lattice `Z^{2n}`, its pairing, orthogonal bases and the
//! mod-2 reduction with its quadratic refinement `q0`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{BasisError, Error, GramViolation, Result};

/// Exact integer type used for every coordinate.
pub type Int = i128;

#[inline]
pub(crate) fn add(a: Int, b: Int) -> Result<Int> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn mul(a: Int, b: Int) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn mul_add(acc: Int, a: Int, b: Int) -> Result<Int> {
    add(acc, mul(a, b)?)
}

/// Names a basis column: `x_i` (unprimed) or `x'_i` (primed). `index` is
/// zero-based; `Display` prints it one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnLabel {
    pub index: usize,
    pub primed: bool,
}

impl ColumnLabel {
    pub fn from_column(n: usize, col: usize) -> Self {
        ColumnLabel { index: col % n, primed: col >= n }
    }

    pub fn column(&self, n: usize) -> usize {
        if self.primed {
            n + self.index
        } else {
            self.index
        }
    }
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.primed { "'" } else { "" };
        write!(f, "x{}_{}", prime, self.index + 1)
    }
}

/// An element of `Z^{2n}` in `(p_1..p_n, q_1..q_n)` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmbientVector {
    coords: Vec<Int>,
}

impl AmbientVector {
    pub fn zero(n: usize) -> Self {
        AmbientVector { coords: vec![0; 2 * n] }
    }

    pub fn new(p: &[Int], q: &[Int]) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::LengthMismatch);
        }
        if p.is_empty() {
            return Err(Error::ZeroGenus);
        }
        let mut coords = Vec::with_capacity(2 * p.len());
        coords.extend_from_slice(p);
        coords.extend_from_slice(q);
        Ok(AmbientVector { coords })
    }

    /// Builds a vector from its full `2n` coordinate list.
    pub fn from_coords(coords: Vec<Int>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroGenus);
        }
        if !coords.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch);
        }
        Ok(AmbientVector { coords })
    }

    /// The standard vector `e_i` (or `e'_i` when `primed`), zero-based `i`.
    pub fn unit(n: usize, i: usize, primed: bool) -> Result<Self> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let mut v = Self::zero(n);
        v.coords[if primed { n + i } else { i }] = 1;
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn p(&self) -> &[Int] {
        &self.coords[..self.n()]
    }

    pub fn q(&self) -> &[Int] {
        &self.coords[self.n()..]
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [Int] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<Int> {
        self.coords
    }

    /// The intersection pairing `sum_i (p_i w.q_i + q_i w.p_i)`.
    pub fn pairing(&self, other: &AmbientVector) -> Result<Int> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::GenusMismatch { expected: n, found: other.n() });
        }
        let (p, q) = (self.p(), self.q());
        let (op, oq) = (other.p(), other.q());
        let mut acc: Int = 0;
        for i in 0..n {
            acc = mul_add(acc, p[i], oq[i])?;
            acc = mul_add(acc, q[i], op[i])?;
        }
        Ok(acc)
    }

    pub fn mod2(&self) -> Mod2Vector {
        Mod2Vector { bits: self.coords.iter().map(|c| c & 1 == 1).collect() }
    }
}

impl fmt::Display for AmbientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p=")?;
        write_list(f, self.p())?;
        write!(f, ", q=")?;
        write_list(f, self.q())?;
        write!(f, ")")
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[Int]) -> fmt::Result {
    write!(f, "(")?;
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Dense row-major integer matrix. Columns of a basis matrix are the basis
/// vectors in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for k in 0..dim {
            m.data[k * dim + k] = 1;
        }
        m
    }

    /// Builds a matrix from rows; ragged input is an error.
    pub fn from_rows(rows: &[Vec<Int>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::LengthMismatch);
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a square matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[AmbientVector]) -> Result<Self> {
        let dim = columns.len();
        let mut m = Self::zeros(dim, dim);
        for (c, v) in columns.iter().enumerate() {
            if v.coords.len() != dim {
                return Err(Error::LengthMismatch);
            }
            for (r, &x) in v.coords.iter().enumerate() {
                m.data[r * dim + c] = x;
            }
        }
        Ok(m)
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Int {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: Int) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> AmbientVector {
        AmbientVector { coords: (0..self.rows).map(|r| self.get(r, c)).collect() }
    }

    pub fn data(&self) -> &[Int] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Int> {
        self.data
    }

    /// `row[dst] += factor * row[src]`, `dst != src`.
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: Int) -> Result<()> {
        debug_assert_ne!(dst, src);
        let cols = self.cols;
        for c in 0..cols {
            let v = mul_add(self.data[dst * cols + c], factor, self.data[src * cols + c])?;
            self.data[dst * cols + c] = v;
        }
        Ok(())
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = -*x;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Exact product; skips zero entries of `self` so sparse factors are cheap.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch);
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = mul_add(out.data[idx], a, other.get(k, c))?;
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == Int::from(r == c)))
    }

    pub fn mod2(&self) -> Mod2Matrix {
        Mod2Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x & 1 == 1).collect(),
        }
    }

    /// `true` when every entry is congruent to the identity mod 2.
    pub fn is_congruent_to_identity(&self) -> bool {
        self.mod2().is_identity()
    }

    /// `M^T Q M == Q` for the hyperbolic Gram matrix `Q`.
    pub fn is_isometry(&self) -> Result<bool> {
        if !self.is_square() || !self.rows.is_multiple_of(2) || self.rows == 0 {
            return Ok(false);
        }
        let q = hyperbolic_gram(self.rows / 2);
        Ok(self.transpose().mul(&q)?.mul(self)? == q)
    }

    /// Inverse of an isometry: `Q M^T Q`. Only meaningful when
    /// [`IntMatrix::is_isometry`] holds.
    pub fn isometry_inverse(&self) -> Result<IntMatrix> {
        let q = hyperbolic_gram(self.rows / 2);
        q.mul(&self.transpose())?.mul(&q)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::LengthMismatch);
        }
        let d = self.rows;
        if d == 0 {
            return Ok(1);
        }
        let mut m = self.clone();
        let mut sign: Int = 1;
        let mut prev: Int = 1;
        for k in 0..d - 1 {
            if m.get(k, k) == 0 {
                let Some(swap) = (k + 1..d).find(|&r| m.get(r, k) != 0) else {
                    return Ok(0);
                };
                for c in 0..d {
                    m.data.swap(k * d + c, swap * d + c);
                }
                sign = -sign;
            }
            let pivot = m.get(k, k);
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = mul(m.get(i, j), pivot)?
                        .checked_sub(mul(m.get(i, k), m.get(k, j))?)
                        .ok_or(Error::Overflow)?;
                    m.set(i, j, num / prev);
                }
            }
            prev = pivot;
        }
        mul(sign, m.get(d - 1, d - 1))
    }

    /// Determinant modulo the Mersenne prime `2^61 - 1`.
    pub(crate) fn determinant_mod_prime(&self) -> u128 {
        const P: u128 = (1 << 61) - 1;
        let d = self.rows;
        let mut m: Vec<u128> =
            self.data.iter().map(|&x| x.rem_euclid(P as Int) as u128).collect();
        let mut det: u128 = 1;
        for k in 0..d {
            let Some(piv) = (k..d).find(|&r| m[r * d + k] != 0) else {
                return 0;
            };
            if piv != k {
                for c in 0..d {
                    m.swap(k * d + c, piv * d + c);
                }
                det = (P - det) % P;
            }
            let pivot = m[k * d + k];
            det = det * pivot % P;
            let inv = pow_mod(pivot, P - 2, P);
            for r in k + 1..d {
                let f = m[r * d + k] * inv % P;
                if f == 0 {
                    continue;
                }
                for c in k..d {
                    let sub = f * m[k * d + c] % P;
                    m[r * d + c] = (m[r * d + c] + P - sub) % P;
                }
            }
        }
        det
    }
}

fn pow_mod(mut base: u128, mut exp: u128, p: u128) -> u128 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Gram matrix of the pairing on the standard basis: `[[0, I], [I, 0]]`.
pub fn hyperbolic_gram(n: usize) -> IntMatrix {
    let mut q = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        q.set(i, n + i, 1);
        q.set(n + i, i, 1);
    }
    q
}

/// Reduction of an [`AmbientVector`] mod 2, same coordinate layout.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mod2Vector {
    bits: Vec<bool>,
}

impl Mod2Vector {
    pub fn zero(n: usize) -> Self {
        Mod2Vector { bits: vec![false; 2 * n] }
    }

    pub fn from_bits(bits_p: &[bool], bits_q: &[bool]) -> Result<Self> {
        if bits_p.len() != bits_q.len() {
            return Err(Error::LengthMismatch);
        }
        if bits_p.is_empty() {
            return Err(Error::ZeroGenus);
        }
        let mut bits = bits_p.to_vec();
        bits.extend_from_slice(bits_q);
        Ok(Mod2Vector { bits })
    }

    pub(crate) fn from_flat(bits: Vec<bool>) -> Self {
        debug_assert!(bits.len().is_multiple_of(2));
        Mod2Vector { bits }
    }

    pub fn unit(n: usize, i: usize, primed: bool) -> Self {
        let mut v = Self::zero(n);
        v.bits[if primed { n + i } else { i }] = true;
        v
    }

    pub fn n(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn p(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn q(&self, i: usize) -> bool {
        self.bits[self.n() + i]
    }

    pub(crate) fn set(&mut self, coord: usize, value: bool) {
        self.bits[coord] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    /// The quadratic refinement `q0(v) = sum_i p_i q_i mod 2`.
    pub fn q0(&self) -> bool {
        let n = self.n();
        (0..n).fold(false, |acc, i| acc ^ (self.bits[i] & self.bits[n + i]))
    }

    /// The pairing reduced mod 2 (a symplectic form over F2).
    pub fn pairing(&self, other: &Mod2Vector) -> bool {
        let n = self.n();
        (0..n).fold(false, |acc, i| {
            acc ^ (self.bits[i] & other.bits[n + i]) ^ (self.bits[n + i] & other.bits[i])
        })
    }

    pub fn add(&self, other: &Mod2Vector) -> Mod2Vector {
        Mod2Vector { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() }
    }

    /// The transvection `t_w(x) = x + <x, w> w`.
    pub fn transvect(&self, w: &Mod2Vector) -> Mod2Vector {
        if self.pairing(w) {
            self.add(w)
        } else {
            self.clone()
        }
    }

    /// The 0/1 integral lift.
    pub fn lift(&self) -> AmbientVector {
        AmbientVector { coords: self.bits.iter().map(|&b| Int::from(b)).collect() }
    }
}

/// Dense row-major matrix over F2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mod2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl Mod2Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![false; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = true;
        }
        Mod2Matrix { rows: dim, cols: dim, data }
    }

    pub fn from_columns(columns: &[Mod2Vector]) -> Result<Self> {
        let dim = columns.len();
        let mut data = vec![false; dim * dim];
        for (c, v) in columns.iter().enumerate() {
            if v.bits.len() != dim {
                return Err(Error::LengthMismatch);
            }
            for (r, &b) in v.bits.iter().enumerate() {
                data[r * dim + c] = b;
            }
        }
        Ok(Mod2Matrix { rows: dim, cols: dim, data })
    }

    /// Matrix of the transvection `t_w`.
    pub fn transvection(w: &Mod2Vector) -> Self {
        let n = w.n();
        let columns: Vec<Mod2Vector> = (0..2 * n)
            .map(|k| Mod2Vector::unit(n, k % n, k >= n).transvect(w))
            .collect();
        Self::from_columns(&columns).expect("square by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Mod2Vector {
        Mod2Vector { bits: (0..self.rows).map(|r| self.get(r, c)).collect() }
    }

    pub fn mul(&self, other: &Mod2Matrix) -> Mod2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut data = vec![false; self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for c in 0..other.cols {
                        data[r * other.cols + c] ^= other.get(k, c);
                    }
                }
            }
        }
        Mod2Matrix { rows: self.rows, cols: other.cols, data }
    }

    /// `t_w * self`: applies the transvection to every column.
    pub fn transvect_left(&mut self, w: &Mod2Vector) {
        for c in 0..self.cols {
            let col = self.column(c);
            if col.pairing(w) {
                for r in 0..self.rows {
                    self.data[r * self.cols + c] ^= w.bits[r];
                }
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c)))
    }

    /// `true` when the matrix preserves both the mod-2 pairing and `q0`,
    /// i.e. lies in the orthogonal group of `q0`.
    pub fn preserves_q0(&self) -> bool {
        if self.rows != self.cols || !self.rows.is_multiple_of(2) || self.rows == 0 {
            return false;
        }
        let d = self.rows;
        let n = d / 2;
        let cols: Vec<Mod2Vector> = (0..d).map(|c| self.column(c)).collect();
        cols.iter().all(|v| !v.q0())
            && (0..d).all(|a| {
                (0..d).all(|b| cols[a].pairing(&cols[b]) == (a % n == b % n && a != b))
            })
    }
}

/// A validated orthogonal basis: `2n` columns ordered `(x_1..x_n, x'_1..x'_n)`
/// whose Gram matrix is the standard hyperbolic one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrthogonalBasis {
    n: usize,
    matrix: IntMatrix,
}

impl OrthogonalBasis {
    pub fn standard(n: usize) -> Self {
        assert!(n > 0, "genus must be positive");
        OrthogonalBasis { n, matrix: IntMatrix::identity(2 * n) }
    }

    /// Wraps a matrix already known to satisfy the Gram conditions.
    pub(crate) fn from_isometry_unchecked(matrix: IntMatrix) -> Self {
        debug_assert!(matrix.is_isometry().unwrap_or(false));
        OrthogonalBasis { n: matrix.rows() / 2, matrix }
    }

    pub fn from_columns(columns: &[AmbientVector]) -> Result<Self> {
        Ok(validate_orthogonal_basis(&IntMatrix::from_columns(columns)?)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    /// `x_i`, zero-based.
    pub fn x(&self, i: usize) -> AmbientVector {
        self.matrix.column(i)
    }

    /// `x'_i`, zero-based.
    pub fn x_prime(&self, i: usize) -> AmbientVector {
        self.matrix.column(self.n + i)
    }

    pub fn columns(&self) -> Vec<AmbientVector> {
        (0..2 * self.n).map(|c| self.matrix.column(c)).collect()
    }

    pub fn is_standard(&self) -> bool {
        self.matrix.is_identity()
    }
}

/// Checks the Gram conditions of an orthogonal basis, reporting every
/// violated pair.
pub fn validate_orthogonal_basis(m: &IntMatrix) -> Result<OrthogonalBasis, BasisError> {
    if !m.is_square() {
        return Err(BasisError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let d = m.rows();
    if d == 0 {
        return Err(BasisError::Empty);
    }
    if !d.is_multiple_of(2) {
        return Err(BasisError::OddDimension(d));
    }
    let n = d / 2;
    let q = hyperbolic_gram(n);
    let gram = m
        .transpose()
        .mul(&q)
        .and_then(|t| t.mul(m))
        .map_err(|_| BasisError::Overflow)?;

    let mut violations = Vec::new();
    for a in 0..d {
        for b in a..d {
            let (expected, found) = (q.get(a, b), gram.get(a, b));
            if expected != found {
                violations.push(GramViolation {
                    left: ColumnLabel::from_column(n, a),
                    right: ColumnLabel::from_column(n, b),
                    expected,
                    found,
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(BasisError::GramViolations(violations));
    }

    let unimodular = match m.determinant() {
        Ok(det) => det == 1 || det == -1,
        Err(_) => {
            const P: u128 = (1 << 61) - 1;
            let det = m.determinant_mod_prime();
            det == 1 || det == P - 1
        }
    };
    if !unimodular {
        return Err(BasisError::DeterminantInconsistent);
    }
    Ok(OrthogonalBasis { n, matrix: m.clone() })
}

/// Componentwise reduction of a basis matrix mod 2.
pub fn mod2_reduce(basis: &OrthogonalBasis) -> Mod2Matrix {
    basis.matrix.mod2()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: &[Int], q: &[Int]) -> AmbientVector {
        AmbientVector::new(p, q).unwrap()
    }

    fn naive_pairing(a: &AmbientVector, b: &AmbientVector) -> Int {
        let q = hyperbolic_gram(a.n());
        let mut acc = 0;
        for r in 0..2 * a.n() {
            for c in 0..2 * a.n() {
                acc += a.coords()[r] * q.get(r, c) * b.coords()[c];
            }
        }
        acc
    }

    #[test]
    fn pairing_examples() {
        let e1 = AmbientVector::unit(2, 0, false).unwrap();
        let e1p = AmbientVector::unit(2, 0, true).unwrap();
        let e2 = AmbientVector::unit(2, 1, false).unwrap();
        assert_eq!(e1.pairing(&e1p).unwrap(), 1);
        assert_eq!(e1.pairing(&e2).unwrap(), 0);
        assert_eq!(e1.pairing(&e1).unwrap(), 0);

        let a = v(&[1], &[2]);
        let b = v(&[3], &[4]);
        assert_eq!(naive_pairing(&a, &b), 10);
        assert_eq!(a.pairing(&b).unwrap(), 10);
    }

    #[test]
    fn pairing_rejects_mismatched_genus() {
        let a = AmbientVector::zero(1);
        let b = AmbientVector::zero(2);
        assert_eq!(a.pairing(&b), Err(Error::GenusMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn pairing_overflow_is_reported() {
        let a = v(&[Int::MAX], &[0]);
        let b = v(&[0], &[2]);
        assert_eq!(a.pairing(&b), Err(Error::Overflow));
    }

    #[test]
    fn q0_examples() {
        for i in 0..3 {
            assert!(!AmbientVector::unit(3, i, false).unwrap().mod2().q0());
            assert!(!AmbientVector::unit(3, i, true).unwrap().mod2().q0());
        }
        assert!(v(&[1], &[1]).mod2().q0());
    }

    #[test]
    fn validate_accepts_identity() {
        let b = validate_orthogonal_basis(&IntMatrix::identity(4)).unwrap();
        assert!(b.is_standard());
        assert_eq!(b.n(), 2);
    }

    #[test]
    fn validate_reports_scaled_column() {
        let m = IntMatrix::from_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        let err = validate_orthogonal_basis(&m).unwrap_err();
        let BasisError::GramViolations(list) = err else { panic!("expected Gram violation") };
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].left, ColumnLabel { index: 0, primed: false });
        assert_eq!(list[0].right, ColumnLabel { index: 0, primed: true });
        assert_eq!(list[0].found, 2);
        assert_eq!(list[0].expected, 1);
    }

    #[test]
    fn validate_reports_every_violation() {
        let m = IntMatrix::from_rows(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 1],
        ])
        .unwrap();
        let BasisError::GramViolations(list) = validate_orthogonal_basis(&m).unwrap_err() else {
            panic!("expected Gram violations")
        };
        // x_2 = e_1 + e_2 + e'_2 pairs with x'_1 and with itself
        assert_eq!(list.len(), 2);
    }

    #[test]
    fn validate_shape_errors() {
        let m = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(
            validate_orthogonal_basis(&m).unwrap_err(),
            BasisError::NotSquare { rows: 2, cols: 3 }
        );
        assert_eq!(
            validate_orthogonal_basis(&IntMatrix::identity(3)).unwrap_err(),
            BasisError::OddDimension(3)
        );
        assert_eq!(
            validate_orthogonal_basis(&IntMatrix::zeros(0, 0)).unwrap_err(),
            BasisError::Empty
        );
    }

    fn witness_basis() -> IntMatrix {
        // x_1 = e_1 - 2e_2, x'_1 = e'_1, x_2 = e_2, x'_2 = 2e'_1 + e'_2
        let cols = [
            v(&[1, -2], &[0, 0]),
            v(&[0, 1], &[0, 0]),
            v(&[0, 0], &[1, 0]),
            v(&[0, 0], &[2, 1]),
        ];
        IntMatrix::from_columns(&cols).unwrap()
    }

    #[test]
    fn witness_instance_is_valid() {
        let b = validate_orthogonal_basis(&witness_basis()).unwrap();
        let red = mod2_reduce(&b);
        assert!(red.is_identity());
        assert!(red.preserves_q0());
    }

    #[test]
    fn determinant_matches_mod_prime() {
        let m = witness_basis();
        assert_eq!(m.determinant().unwrap(), 1);
        assert_eq!(m.determinant_mod_prime(), 1);
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.determinant().unwrap(), -1);
        assert_eq!(swap.determinant_mod_prime(), (1u128 << 61) - 2);
    }

    #[test]
    fn isometry_inverse_is_inverse() {
        let m = witness_basis();
        assert!(m.is_isometry().unwrap());
        assert!(m.mul(&m.isometry_inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn mod2_pairing_and_transvection() {
        let w = Mod2Vector::from_bits(&[true], &[true]).unwrap();
        let t = Mod2Matrix::transvection(&w);
        let swap = Mod2Matrix::from_columns(&[
            Mod2Vector::unit(1, 0, true),
            Mod2Vector::unit(1, 0, false),
        ])
        .unwrap();
        assert_eq!(t, swap);
        assert!(t.preserves_q0());
        assert!(!Mod2Matrix::transvection(&Mod2Vector::unit(1, 0, false)).preserves_q0());
    }
}
