//! Staged reduction of an isometry congruent to the identity mod 2 into a
//! word of OpI..OpIV.
//!
//! The working matrix `C` holds the target basis in coordinates of a moving
//! reference basis. Emitting a generator `g` replaces the reference basis by
//! its image under `g`, which turns `C` into `G^{-1} C`. When `C` reaches the
//! identity the emitted word multiplies out to the input.
//!
//! Indices are processed from `n - 1` down to `0`. For the active index `a`:
//!
//! 1. unprimed coefficients of `x_a` are cleared with OpII,
//! 2. primed coefficients of `x_a` with OpIII (coefficient side) and OpIV
//!    (pivot side),
//! 3. the pivot sign is fixed with OpI,
//! 4. the unprimed residual of `x'_a` is cleared with OpIV,
//! 5. the primed residual of `x'_a` is cleared with OpII.
//!
//! Every step strictly decreases the stage measure (pivot plus the absolute
//! values of the coefficients being cleared), so each stage terminates.

use alloc::boxed::Box;

use crate::error::{Error, Result};
use crate::generators::{Generator, MoveWord, Sign};
use crate::lattice::{Int, IntMatrix};

use super::size::{size_reduce, SizeReduceLimits};

/// Which entry a descent step modifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentSide {
    /// The even coefficient `c` becomes `c - 2 eps u`.
    Coefficient,
    /// The odd pivot `u` becomes `u - 2 eps c`.
    Pivot,
}

/// Picks the side and sign of one descent step for odd pivot `u` and even
/// nonzero coefficient `c`. The sign is always that of `u * c`.
///
/// When `|c| > |u|` the coefficient shrinks; otherwise (`|c| < |u|`, equality
/// is ruled out by parity) the pivot shrinks and stays odd.
pub fn descent_choice(u: Int, c: Int) -> Result<(DescentSide, Sign)> {
    if u % 2 == 0 || c % 2 != 0 || c == 0 {
        return Err(Error::DescentPrecondition { pivot: u, coefficient: c });
    }
    let eps = if (u < 0) == (c < 0) { Sign::Plus } else { Sign::Minus };
    let side =
        if c.unsigned_abs() > u.unsigned_abs() { DescentSide::Coefficient } else { DescentSide::Pivot };
    Ok((side, eps))
}

/// How the reduction proceeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Two-sided size reduction (see [`size_reduce`](super::size_reduce))
    /// first, then the staged clearing with [`Strategy::Balanced`] on the
    /// small remainder. The staged clearing alone makes entries grow
    /// multiplicatively from one index to the next, which overflows on
    /// products of a few dozen generators.
    #[default]
    Greedy,
    /// Staged clearing only. Always reduce the largest entry among pivot and coefficients by the
    /// largest strictly smaller one, including coefficient-against-coefficient
    /// steps.
    Balanced,
    /// Staged clearing only. Clear coefficients one at a time in ascending
    /// order, each only against the pivot. Word length grows linearly with
    /// the entries.
    PivotOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReduceOptions {
    pub strategy: Strategy,
    /// Re-check after every emitted move that the working matrix is still an
    /// isometry congruent to the identity mod 2. Cubic cost per move.
    pub check_steps: bool,
}

/// Factors `m` (an isometry congruent to the identity mod 2) into OpI..OpIV
/// with the default options.
pub fn reduce_congruence(m: &IntMatrix) -> Result<MoveWord> {
    reduce_congruence_with(m, ReduceOptions::default())
}

pub fn reduce_congruence_with(m: &IntMatrix, options: ReduceOptions) -> Result<MoveWord> {
    if !m.is_isometry()? {
        return Err(Error::NotIsometry);
    }
    if !m.is_congruent_to_identity() {
        return Err(Error::NotCongruent);
    }
    match options.strategy {
        Strategy::Greedy => {
            let (left, rest, right) = size_reduce(m, SizeReduceLimits::default())?;
            let staged_options = ReduceOptions { strategy: Strategy::Balanced, ..options };
            let middle = staged(&rest, staged_options)?;
            Ok(left.into_iter().chain(middle).chain(right).collect())
        }
        Strategy::Balanced | Strategy::PivotOnly => staged(m, options),
    }
}

/// Cap on the length of a word produced by staged clearing.
pub const STAGED_WORD_LIMIT: usize = 1 << 24;

fn staged(m: &IntMatrix, options: ReduceOptions) -> Result<MoveWord> {
    let n = m.rows() / 2;
    let mut state = DescentState { n, c: m.clone(), word: MoveWord::new(), options, active: n };
    for a in (0..n).rev() {
        state.active = a;
        state.reduce_index(a)?;
    }
    if !state.c.is_identity() {
        return Err(state.residual("final identity check", 0));
    }
    Ok(state.word)
}

/// Where a clearing stage reads its values: one column, a pivot row and the
/// coefficient rows `row_offset + j` for `j < a`.
#[derive(Clone, Copy)]
struct Stage {
    name: &'static str,
    column: usize,
    pivot_row: usize,
    row_offset: usize,
    /// The pivot is a fixed unit and never reduced.
    fixed_pivot: bool,
}

/// Reference to one of the values a stage juggles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Slot {
    Pivot,
    Coeff(usize),
}

struct DescentState {
    n: usize,
    c: IntMatrix,
    word: MoveWord,
    options: ReduceOptions,
    active: usize,
}

impl DescentState {
    fn emit(&mut self, g: Generator) -> Result<()> {
        if self.word.len() >= STAGED_WORD_LIMIT {
            return Err(Error::WordTooLong(STAGED_WORD_LIMIT));
        }
        g.inverse().apply_rows(&mut self.c)?;
        self.word.push(g);
        if self.options.check_steps
            && !(self.c.is_isometry()? && self.c.is_congruent_to_identity())
        {
            return Err(self.residual("per-step invariant", self.active));
        }
        Ok(())
    }

    fn residual(&self, stage: &'static str, index: usize) -> Error {
        Error::ResidualNonzero { stage, index, state: Box::new(self.c.clone()) }
    }

    fn value(&self, stage: &Stage, slot: Slot) -> Int {
        match slot {
            Slot::Pivot => self.c.get(stage.pivot_row, stage.column),
            Slot::Coeff(j) => self.c.get(stage.row_offset + j, stage.column),
        }
    }

    fn measure(&self, stage: &Stage, a: usize) -> u128 {
        (0..a).fold(self.value(stage, Slot::Pivot).unsigned_abs(), |acc, j| {
            acc.saturating_add(self.value(stage, Slot::Coeff(j)).unsigned_abs())
        })
    }

    fn reduce_index(&mut self, a: usize) -> Result<()> {
        let n = self.n;

        // x_a: unprimed coefficients, then primed coefficients
        let unprimed = Stage {
            name: "x unprimed coefficients",
            column: a,
            pivot_row: a,
            row_offset: 0,
            fixed_pivot: false,
        };
        self.clear(&unprimed, a)?;
        // <x_a, x_a> = 2 u q_a with u odd
        if self.c.get(n + a, a) != 0 {
            return Err(self.residual("x self-pairing coefficient", a));
        }
        let primed = Stage {
            name: "x primed coefficients",
            column: a,
            pivot_row: a,
            row_offset: n,
            fixed_pivot: false,
        };
        self.clear(&primed, a)?;

        match self.c.get(a, a) {
            1 => {}
            -1 => self.emit(Generator::OpI { i: a })?,
            _ => return Err(self.residual("pivot is not a unit", a)),
        }
        if self.c.get(n + a, n + a) != 1 {
            return Err(self.residual("x' pairing with x", a));
        }

        // x'_a: unprimed residual, then primed residual, against q_a = 1
        let residual_unprimed = Stage {
            name: "x' unprimed residual",
            column: n + a,
            pivot_row: n + a,
            row_offset: 0,
            fixed_pivot: true,
        };
        self.clear(&residual_unprimed, a)?;
        let residual_primed = Stage {
            name: "x' primed residual",
            column: n + a,
            pivot_row: n + a,
            row_offset: n,
            fixed_pivot: true,
        };
        self.clear(&residual_primed, a)?;
        // <x'_a, x'_a> = 2 p_a
        if self.c.get(a, n + a) != 0 {
            return Err(self.residual("x' self-pairing coefficient", a));
        }

        for r in 0..2 * n {
            let (in_x, in_xp) = (self.c.get(r, a), self.c.get(r, n + a));
            if in_x != Int::from(r == a) || in_xp != Int::from(r == n + a) {
                return Err(self.residual("pair not standard after stage", a));
            }
        }
        Ok(())
    }

    fn clear(&mut self, stage: &Stage, a: usize) -> Result<()> {
        loop {
            let Some((target, reducer)) = self.next_step(stage, a) else {
                return Ok(());
            };
            let before = self.measure(stage, a);
            let g = self.step_generator(stage, a, target, reducer)?;
            self.emit(g)?;
            if self.measure(stage, a) >= before {
                return Err(Error::MeasureNotDecreasing { stage: stage.name, index: a });
            }
        }
    }

    /// Chooses which value to shrink and which to shrink it with, or `None`
    /// once every coefficient vanishes.
    fn next_step(&self, stage: &Stage, a: usize) -> Option<(Slot, Slot)> {
        match self.options.strategy {
            Strategy::PivotOnly => {
                let j = (0..a).find(|&j| self.value(stage, Slot::Coeff(j)) != 0)?;
                let u = self.value(stage, Slot::Pivot);
                let c = self.value(stage, Slot::Coeff(j));
                if stage.fixed_pivot || c.unsigned_abs() > u.unsigned_abs() {
                    Some((Slot::Coeff(j), Slot::Pivot))
                } else {
                    Some((Slot::Pivot, Slot::Coeff(j)))
                }
            }
            Strategy::Balanced | Strategy::Greedy => {
                let abs = |s: Slot| self.value(stage, s).unsigned_abs();
                let slots = core::iter::once(Slot::Pivot).chain((0..a).map(Slot::Coeff));
                let candidates = slots.clone().filter(|&s| {
                    self.value(stage, s) != 0 && !(stage.fixed_pivot && s == Slot::Pivot)
                });
                // first maximum in slot order
                let target = candidates.fold(None, |best: Option<Slot>, s| match best {
                    Some(b) if abs(b) >= abs(s) => Some(b),
                    _ => Some(s),
                })?;
                if target == Slot::Pivot && (0..a).all(|j| self.value(stage, Slot::Coeff(j)) == 0) {
                    return None;
                }
                let bound = abs(target);
                let reducer = slots
                    .filter(|&s| s != target && self.value(stage, s) != 0 && abs(s) < bound)
                    .fold(None, |best: Option<Slot>, s| match best {
                        Some(b) if abs(b) >= abs(s) => Some(b),
                        _ => Some(s),
                    })?;
                Some((target, reducer))
            }
        }
    }

    /// Translates "shrink `target` by twice `reducer`" into a generator for
    /// the given stage.
    fn step_generator(&self, stage: &Stage, a: usize, target: Slot, reducer: Slot) -> Result<Generator> {
        let tv = self.value(stage, target);
        let rv = self.value(stage, reducer);
        match (target, reducer) {
            (Slot::Coeff(k), Slot::Pivot) => {
                let (side, eps) = if stage.fixed_pivot {
                    (DescentSide::Coefficient, Sign::of(tv))
                } else {
                    descent_choice(rv, tv)?
                };
                debug_assert_eq!(side, DescentSide::Coefficient);
                Ok(pivot_reduces_coefficient(stage, a, k, eps))
            }
            (Slot::Pivot, Slot::Coeff(j)) => {
                let (side, eps) = descent_choice(tv, rv)?;
                debug_assert_eq!(side, DescentSide::Pivot);
                Ok(coefficient_reduces_pivot(stage, a, j, eps))
            }
            (Slot::Coeff(k), Slot::Coeff(j)) => {
                let eps = if (tv < 0) == (rv < 0) { Sign::Plus } else { Sign::Minus };
                Ok(coefficient_reduces_coefficient(stage, k, j, eps))
            }
            (Slot::Pivot, Slot::Pivot) => unreachable!("target and reducer are distinct"),
        }
    }
}

// In each helper below, `eps` is the sign for which the target entry `t`
// becomes `t - 2 eps r`. The comments give the action of `G^{-1}` on the rows
// that matter for the active column.

fn pivot_reduces_coefficient(stage: &Stage, a: usize, k: usize, eps: Sign) -> Generator {
    match (stage.column == a, stage.row_offset == 0) {
        // p_k -= 2 eps p_a; side effect q_a += 2 eps q_k
        (true, true) => Generator::OpII { i: a, j: k, eps },
        // q_k -= 2 eps p_a; side effect q_a += 2 eps p_k = 0
        (true, false) => Generator::OpIII { i: a, j: k, eps },
        // p_k -= 2 eps q_a; side effect p_a += 2 eps q_k
        (false, true) => Generator::OpIV { i: a, j: k, eps },
        // q_k += 2 eps' q_a with eps' = -eps; side effect p_a -= 2 eps' p_k = 0
        (false, false) => Generator::OpII { i: k, j: a, eps: eps.flip() },
    }
}

fn coefficient_reduces_pivot(stage: &Stage, a: usize, j: usize, eps: Sign) -> Generator {
    debug_assert!(!stage.fixed_pivot);
    if stage.row_offset == 0 {
        // p_a -= 2 eps p_j; side effect q_j += 2 eps q_a
        Generator::OpII { i: j, j: a, eps }
    } else {
        // p_a -= 2 eps q_j; side effect p_j += 2 eps q_a = 0
        Generator::OpIV { i: j, j: a, eps }
    }
}

fn coefficient_reduces_coefficient(stage: &Stage, k: usize, j: usize, eps: Sign) -> Generator {
    if stage.row_offset == 0 {
        // p_k -= 2 eps p_j; side effect q_j += 2 eps q_k
        Generator::OpII { i: j, j: k, eps }
    } else {
        // q_k += 2 eps' q_j with eps' = -eps; side effect p_j -= 2 eps' p_k = 0
        Generator::OpII { i: k, j, eps: eps.flip() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generator;
    use alloc::vec;

    #[test]
    fn descent_choice_examples() {
        assert_eq!(descent_choice(1, 6).unwrap(), (DescentSide::Coefficient, Sign::Plus));
        assert_eq!(descent_choice(5, 2).unwrap(), (DescentSide::Pivot, Sign::Plus));
        assert_eq!(descent_choice(-3, 8).unwrap(), (DescentSide::Coefficient, Sign::Minus));
        assert_eq!(descent_choice(-7, -4).unwrap(), (DescentSide::Pivot, Sign::Plus));
    }

    #[test]
    fn descent_choice_preconditions() {
        assert!(descent_choice(2, 4).is_err());
        assert!(descent_choice(3, 5).is_err());
        assert!(descent_choice(3, 0).is_err());
    }

    #[test]
    fn descent_choice_exhaustive_decrease() {
        for u in (-99..=99).filter(|u: &Int| u % 2 != 0) {
            for c in (-98..=98).filter(|c: &Int| c % 2 == 0 && *c != 0) {
                let (side, eps) = descent_choice(u, c).unwrap();
                let e = eps.value();
                let (nu, nc) = match side {
                    DescentSide::Coefficient => (u, c - 2 * e * u),
                    DescentSide::Pivot => (u - 2 * e * c, c),
                };
                assert!(nu.abs() + nc.abs() < u.abs() + c.abs(), "u={u} c={c}");
                assert!(nu % 2 != 0);
            }
        }
    }

    #[test]
    fn identity_gives_empty_word() {
        assert!(reduce_congruence(&IntMatrix::identity(6)).unwrap().is_empty());
    }

    #[test]
    fn minus_identity_genus_one() {
        let m = IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]).unwrap();
        let w = reduce_congruence(&m).unwrap();
        assert_eq!(w.as_slice(), &[Generator::OpI { i: 0 }]);
    }

    #[test]
    fn rejects_non_congruent_and_non_isometry() {
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(reduce_congruence(&swap), Err(Error::NotCongruent));
        let bad = IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]).unwrap();
        assert_eq!(reduce_congruence(&bad), Err(Error::NotIsometry));
    }

    #[test]
    fn single_shears_round_trip_all_strategies() {
        let n = 3;
        let mut gens = vec![];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for eps in [Sign::Plus, Sign::Minus] {
                    gens.push(Generator::OpII { i, j, eps });
                    gens.push(Generator::OpIII { i, j, eps });
                    gens.push(Generator::OpIV { i, j, eps });
                }
            }
        }
        for strategy in [Strategy::Greedy, Strategy::Balanced, Strategy::PivotOnly] {
            let options = ReduceOptions { strategy, check_steps: true };
            for g in &gens {
                let m = g.matrix(n).unwrap();
                let w = reduce_congruence_with(&m, options).unwrap();
                assert!(w.is_op_only());
                assert_eq!(w.matrix(n).unwrap(), m, "{g} via {w}");
            }
        }
    }
}
