//! Elementary isometries of the hyperbolic lattice and words in them.
//!
//! Four families of even operations plus `(-2)`-reflections. Every
//! operation matrix is congruent to the identity mod 2; a reflection reduces
//! mod 2 to the symplectic transvection by its parameter.
//!
//! Word convention: `matrix(g_1 g_2 .. g_k) = G_1 G_2 .. G_k`, so applying a
//! word to the standard basis yields the columns of that product.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::lattice::{mul_add, AmbientVector, Int, IntMatrix, OrthogonalBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> Int {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign of a nonzero integer.
    pub fn of(x: Int) -> Sign {
        if x < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// One elementary isometry. Indices are zero-based; `Display` and the text
/// formats print them one-based.
///
/// Each shear family moves two basis vectors with opposite signs, which is
/// what keeps the pairing intact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `e_i -> -e_i`, `e'_i -> -e'_i`.
    OpI { i: usize },
    /// `e_i -> e_i + 2 eps e_j`, `e'_j -> e'_j - 2 eps e'_i`.
    OpII { i: usize, j: usize, eps: Sign },
    /// `e_i -> e_i + 2 eps e'_j`, `e_j -> e_j - 2 eps e'_i`.
    OpIII { i: usize, j: usize, eps: Sign },
    /// `e'_i -> e'_i + 2 eps e_j`, `e'_j -> e'_j - 2 eps e_i`.
    OpIV { i: usize, j: usize, eps: Sign },
    /// `x -> x + <x, v> v` with `<v, v> = -2`.
    Reflection(AmbientVector),
}

impl Generator {
    pub fn is_reflection(&self) -> bool {
        matches!(self, Generator::Reflection(_))
    }

    /// The family label used by the text formats.
    pub fn kind(&self) -> &'static str {
        match self {
            Generator::OpI { .. } => "I",
            Generator::OpII { .. } => "II",
            Generator::OpIII { .. } => "III",
            Generator::OpIV { .. } => "IV",
            Generator::Reflection(_) => "R",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let check = |index: usize| {
            if index < n {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange { index, n })
            }
        };
        match self {
            Generator::OpI { i } => check(*i),
            Generator::OpII { i, j, .. }
            | Generator::OpIII { i, j, .. }
            | Generator::OpIV { i, j, .. } => {
                check(*i)?;
                check(*j)?;
                if i == j {
                    return Err(Error::RepeatedIndex(*i));
                }
                Ok(())
            }
            Generator::Reflection(v) => {
                if v.n() != n {
                    return Err(Error::GenusMismatch { expected: n, found: v.n() });
                }
                let self_pairing = v.pairing(v)?;
                if self_pairing != -2 {
                    return Err(Error::BadReflection(self_pairing));
                }
                Ok(())
            }
        }
    }

    /// OpI and reflections are involutions; the shears invert by flipping
    /// the sign.
    pub fn inverse(&self) -> Generator {
        match self {
            Generator::OpII { i, j, eps } => Generator::OpII { i: *i, j: *j, eps: eps.flip() },
            Generator::OpIII { i, j, eps } => Generator::OpIII { i: *i, j: *j, eps: eps.flip() },
            Generator::OpIV { i, j, eps } => Generator::OpIV { i: *i, j: *j, eps: eps.flip() },
            g => g.clone(),
        }
    }

    /// Explicit `2n x 2n` matrix; column `k` is the image of the `k`-th
    /// standard vector.
    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        self.validate(n)?;
        let mut m = IntMatrix::identity(2 * n);
        match self {
            Generator::OpI { i } => {
                m.set(*i, *i, -1);
                m.set(n + i, n + i, -1);
            }
            Generator::OpII { i, j, eps } => {
                let t = 2 * eps.value();
                m.set(*j, *i, t);
                m.set(n + i, n + j, -t);
            }
            Generator::OpIII { i, j, eps } => {
                let t = 2 * eps.value();
                m.set(n + j, *i, t);
                m.set(n + i, *j, -t);
            }
            Generator::OpIV { i, j, eps } => {
                let t = 2 * eps.value();
                m.set(*j, n + i, t);
                m.set(*i, n + j, -t);
            }
            Generator::Reflection(v) => {
                // column k: e_k + <e_k, v> v, and <e_k, v> is the coordinate
                // of v on the dual vector
                let c = v.coords();
                for col in 0..2 * n {
                    let dual = c[(col + n) % (2 * n)];
                    if dual == 0 {
                        continue;
                    }
                    for row in 0..2 * n {
                        let entry = mul_add(m.get(row, col), dual, c[row])?;
                        m.set(row, col, entry);
                    }
                }
            }
        }
        Ok(m)
    }

    /// `c <- G c` by row operations.
    pub fn apply_rows(&self, c: &mut IntMatrix) -> Result<()> {
        let n = c.rows() / 2;
        self.validate(n)?;
        match self {
            Generator::OpI { i } => {
                c.negate_row(*i);
                c.negate_row(n + i);
            }
            Generator::OpII { i, j, eps } => {
                let t = 2 * eps.value();
                c.add_row_multiple(*j, *i, t)?;
                c.add_row_multiple(n + i, n + j, -t)?;
            }
            Generator::OpIII { i, j, eps } => {
                let t = 2 * eps.value();
                c.add_row_multiple(n + j, *i, t)?;
                c.add_row_multiple(n + i, *j, -t)?;
            }
            Generator::OpIV { i, j, eps } => {
                let t = 2 * eps.value();
                c.add_row_multiple(*j, n + i, t)?;
                c.add_row_multiple(*i, n + j, -t)?;
            }
            Generator::Reflection(v) => {
                let vc = v.coords();
                for col in 0..c.cols() {
                    let s = c.column(col).pairing(v)?;
                    if s == 0 {
                        continue;
                    }
                    for (row, &vr) in vc.iter().enumerate() {
                        if vr != 0 {
                            let entry = mul_add(c.get(row, col), s, vr)?;
                            c.set(row, col, entry);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::OpI { i } => write!(f, "I({})", i + 1),
            Generator::OpII { i, j, eps }
            | Generator::OpIII { i, j, eps }
            | Generator::OpIV { i, j, eps } => {
                write!(f, "{}({},{},{})", self.kind(), i + 1, j + 1, eps)
            }
            Generator::Reflection(v) => write!(f, "R{v}"),
        }
    }
}

/// Free function form of [`Generator::matrix`].
pub fn generator_matrix(g: &Generator, n: usize) -> Result<IntMatrix> {
    g.matrix(n)
}

pub fn invert_generator(g: &Generator) -> Generator {
    g.inverse()
}

/// An ordered sequence of generators, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MoveWord {
    generators: Vec<Generator>,
}

impl MoveWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, g: Generator) {
        self.generators.push(g);
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Generator> {
        self.generators.iter()
    }

    pub fn as_slice(&self) -> &[Generator] {
        &self.generators
    }

    pub fn into_vec(self) -> Vec<Generator> {
        self.generators
    }

    /// `G_1 G_2 .. G_k`.
    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        let mut m = IntMatrix::identity(2 * n);
        for g in self.generators.iter().rev() {
            g.apply_rows(&mut m)?;
        }
        Ok(m)
    }

    pub fn inverse(&self) -> MoveWord {
        self.generators.iter().rev().map(Generator::inverse).collect()
    }

    /// `true` when no generator is a reflection.
    pub fn is_op_only(&self) -> bool {
        !self.generators.iter().any(Generator::is_reflection)
    }
}

impl From<Vec<Generator>> for MoveWord {
    fn from(generators: Vec<Generator>) -> Self {
        MoveWord { generators }
    }
}

impl FromIterator<Generator> for MoveWord {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        MoveWord { generators: iter.into_iter().collect() }
    }
}

impl IntoIterator for MoveWord {
    type Item = Generator;
    type IntoIter = alloc::vec::IntoIter<Generator>;

    fn into_iter(self) -> Self::IntoIter {
        self.generators.into_iter()
    }
}

impl<'a> IntoIterator for &'a MoveWord {
    type Item = &'a Generator;
    type IntoIter = core::slice::Iter<'a, Generator>;

    fn into_iter(self) -> Self::IntoIter {
        self.generators.iter()
    }
}

impl fmt::Display for MoveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// `matrix(word) * B`; the result is again an orthogonal basis.
pub fn apply_word(word: &MoveWord, basis: &OrthogonalBasis) -> Result<OrthogonalBasis> {
    let mut m = basis.matrix().clone();
    for g in word.iter().rev() {
        g.apply_rows(&mut m)?;
    }
    Ok(OrthogonalBasis::from_isometry_unchecked(m))
}

/// Homology class of the lifted sphere of a 2-handle, from the intersection
/// data of its attaching loop (`s`, `s_prime`) and of its core disk with the
/// reference disks (`m`, `m_prime`): `p_j = s_j + 2 m_j`, `q_j = s'_j + 2 m'_j`.
pub fn sphere_class_from_intersections(
    s: &[Int],
    s_prime: &[Int],
    m: &[Int],
    m_prime: &[Int],
) -> Result<AmbientVector> {
    let n = s.len();
    if s_prime.len() != n || m.len() != n || m_prime.len() != n {
        return Err(Error::LengthMismatch);
    }
    let combine = |base: &[Int], extra: &[Int]| -> Result<Vec<Int>> {
        base.iter()
            .zip(extra)
            .map(|(&b, &e)| mul_add(b, 2, e))
            .collect()
    };
    AmbientVector::new(&combine(s, m)?, &combine(s_prime, m_prime)?)
}

/// Class of the sphere surrounding the `i`-th reference disk: `-e_i`, or
/// `-e'_i` when `primed`.
pub fn surrounding_sphere_class(i: usize, primed: bool, n: usize) -> Result<AmbientVector> {
    let mut v = AmbientVector::unit(n, i, primed)?;
    for x in v.coords_mut() {
        *x = -*x;
    }
    Ok(v)
}
