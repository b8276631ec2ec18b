//! Two-sided size reduction inside the congruence subgroup.
//!
//! Each shear family is `I + 2 eps N` for a square-zero `N` with two
//! entries, so a run of `k` equal shears is `X(t) = I + t N` with
//! `t = 2 eps k`. Writing the working matrix as `L * C * R`, a step peels
//! some `X(t)` off either side of `C`, with `t` the even integer that
//! minimizes the squared Frobenius norm of `C`; it is a quadratic in `t`.
//! Steps are taken while the norm strictly drops. At a local minimum a few
//! random shears are applied and the greedy descent restarted; the detour
//! is kept if it ends strictly lower.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generators::{Generator, MoveWord, Sign};
use crate::lattice::{mul_add, Int, IntMatrix};

/// Limits for [`size_reduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeReduceLimits {
    /// Random restarts tried at one local minimum before giving up.
    pub restarts_per_minimum: usize,
    /// Local minima escaped before giving up.
    pub escapes: usize,
    pub seed: u64,
}

impl Default for SizeReduceLimits {
    fn default() -> Self {
        SizeReduceLimits { restarts_per_minimum: 50_000, escapes: 1_000_000, seed: 0x5eed }
    }
}

/// Cap on the combined length of the peeled words.
const WORD_LIMIT: usize = 1 << 24;

/// Square-zero part of one shear family member: `N` has `sign` at
/// `(row, col)` for both entries.
#[derive(Debug, Clone, Copy)]
struct Root {
    entries: [(usize, usize, Int); 2],
    generator: fn(usize, usize, Sign) -> Generator,
    i: usize,
    j: usize,
}

fn roots(n: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            out.push(Root {
                entries: [(j, i, 1), (n + i, n + j, -1)],
                generator: |i, j, eps| Generator::OpII { i, j, eps },
                i,
                j,
            });
            // OpIII(j, i, e) = OpIII(i, j, -e), same for OpIV
            if i < j {
                out.push(Root {
                    entries: [(n + j, i, 1), (n + i, j, -1)],
                    generator: |i, j, eps| Generator::OpIII { i, j, eps },
                    i,
                    j,
                });
                out.push(Root {
                    entries: [(j, n + i, 1), (i, n + j, -1)],
                    generator: |i, j, eps| Generator::OpIV { i, j, eps },
                    i,
                    j,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Step {
    root: usize,
    left: bool,
    t: Int,
}

/// Working matrix with the words peeled off each side.
struct Peeler {
    d: usize,
    c: IntMatrix,
    roots: Vec<Root>,
    left: Vec<Generator>,
    /// Stored last-to-first.
    right: Vec<Generator>,
}

impl Peeler {
    /// `C <- X(t) C` (left) or `C <- C X(t)` (right).
    fn apply(c: &mut IntMatrix, root: &Root, left: bool, t: Int) -> Result<()> {
        let d = c.rows();
        let factor = |s: Int| t.checked_mul(s).ok_or(Error::Overflow);
        // the two entries never read a row or column the other writes
        for &(r, col, s) in &root.entries {
            let f = factor(s)?;
            for k in 0..d {
                if left {
                    let v = mul_add(c.get(r, k), f, c.get(col, k))?;
                    c.set(r, k, v);
                } else {
                    let v = mul_add(c.get(k, col), f, c.get(k, r))?;
                    c.set(k, col, v);
                }
            }
        }
        Ok(())
    }

    /// Records that `X(t)` was removed: the peeled factor is `X(-t)`.
    fn record(&mut self, step: Step) {
        let root = self.roots[step.root];
        let eps = if step.t > 0 { Sign::Minus } else { Sign::Plus };
        let g = (root.generator)(root.i, root.j, eps);
        let count = (step.t.unsigned_abs() / 2) as usize;
        let side = if step.left { &mut self.left } else { &mut self.right };
        side.extend(core::iter::repeat_n(g, count));
    }

    fn take(&mut self, step: Step) -> Result<()> {
        let count = step.t.unsigned_abs() / 2;
        if (self.left.len() + self.right.len()) as u128 + count > WORD_LIMIT as u128 {
            return Err(Error::WordTooLong(WORD_LIMIT));
        }
        Self::apply(&mut self.c, &self.roots[step.root], step.left, step.t)?;
        self.record(step);
        Ok(())
    }
}

/// Squared Frobenius norm, exact when it fits.
fn norm(c: &IntMatrix) -> Option<u128> {
    c.data().iter().try_fold(0u128, |acc, &x| {
        let a = x.unsigned_abs();
        acc.checked_add(a.checked_mul(a)?)
    })
}

fn norm_f64(c: &IntMatrix) -> f64 {
    c.data().iter().map(|&x| (x as f64) * (x as f64)).sum()
}

/// `true` when `a` is strictly smaller than `b`.
fn smaller(a: &IntMatrix, b: &IntMatrix) -> bool {
    match (norm(a), norm(b)) {
        (Some(x), Some(y)) => x < y,
        _ => norm_f64(a) < norm_f64(b) * (1.0 - 1e-12),
    }
}

/// Gram matrices of the rows and of the columns, in floating point. Only
/// used to pick steps; every step is applied and compared exactly.
fn grams(c: &IntMatrix) -> (Vec<f64>, Vec<f64>) {
    let d = c.rows();
    let f: Vec<f64> = c.data().iter().map(|&x| x as f64).collect();
    let mut rows = alloc::vec![0.0; d * d];
    let mut cols = alloc::vec![0.0; d * d];
    for a in 0..d {
        for b in a..d {
            let (mut r, mut k) = (0.0, 0.0);
            for x in 0..d {
                r += f[a * d + x] * f[b * d + x];
                k += f[x * d + a] * f[x * d + b];
            }
            rows[a * d + b] = r;
            rows[b * d + a] = r;
            cols[a * d + b] = k;
            cols[b * d + a] = k;
        }
    }
    (rows, cols)
}

/// The norm-minimizing even `t` for every root and side, best first.
fn best_step(c: &IntMatrix, roots: &[Root]) -> Option<Step> {
    let d = c.rows();
    let (rows, cols) = grams(c);
    let mut best: Option<(f64, Step)> = None;
    for (index, root) in roots.iter().enumerate() {
        for left in [true, false] {
            // |C + tNC|^2 = |C|^2 + 2 t a + t^2 b
            let (mut a, mut b) = (0.0, 0.0);
            for &(r, col, s) in &root.entries {
                let s = s as f64;
                if left {
                    a += s * rows[r * d + col];
                    b += rows[col * d + col];
                } else {
                    a += s * cols[col * d + r];
                    b += cols[r * d + r];
                }
            }
            if b == 0.0 {
                continue;
            }
            let half = -a / b / 2.0;
            if !(half.is_finite() && half > -1e30 && half < 1e30) {
                continue;
            }
            // round half away from zero; the cast truncates
            let q = if half >= 0.0 { (half + 0.5) as Int } else { (half - 0.5) as Int };
            if q == 0 {
                continue;
            }
            let t = 2.0 * q as f64;
            let gain = -(2.0 * t * a + t * t * b);
            if gain > 0.0 && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, Step { root: index, left, t: 2 * q }));
            }
        }
    }
    best.map(|(_, s)| s)
}

/// Greedy descent on `c` alone; returns the steps taken.
fn descend(c: &mut IntMatrix, roots: &[Root]) -> Result<Vec<Step>> {
    let mut steps = Vec::new();
    while let Some(step) = best_step(c, roots) {
        let mut next = c.clone();
        Peeler::apply(&mut next, &roots[step.root], step.left, step.t)?;
        if !smaller(&next, c) {
            break;
        }
        *c = next;
        steps.push(step);
    }
    Ok(steps)
}

/// Shrinks `m` by peeling shears off both sides. Returns `(left, rest,
/// right)` with `m = matrix(left) * rest * matrix(right)` and `rest` a
/// local minimum of the norm that the restarts could not escape.
pub fn size_reduce(
    m: &IntMatrix,
    limits: SizeReduceLimits,
) -> Result<(MoveWord, IntMatrix, MoveWord)> {
    let d = m.rows();
    let n = d / 2;
    let mut p = Peeler { d, c: m.clone(), roots: roots(n), left: Vec::new(), right: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);

    for step in descend(&mut p.c.clone(), &p.roots)? {
        p.take(step)?;
    }
    let mut escapes = 0;
    while escapes < limits.escapes && !p.roots.is_empty() && !is_signed_identity(&p.c) {
        let mut found = None;
        for _ in 0..limits.restarts_per_minimum {
            let mut trial = p.c.clone();
            let mut path = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let step = Step {
                    root: rng.gen_range(0..p.roots.len()),
                    left: rng.gen(),
                    t: if rng.gen() { 2 } else { -2 },
                };
                Peeler::apply(&mut trial, &p.roots[step.root], step.left, step.t)?;
                path.push(step);
            }
            path.extend(descend(&mut trial, &p.roots)?);
            if smaller(&trial, &p.c) {
                found = Some(path);
                break;
            }
        }
        let Some(path) = found else { break };
        for step in path {
            p.take(step)?;
        }
        escapes += 1;
    }
    debug_assert_eq!(p.d, d);
    p.right.reverse();
    Ok((p.left.into(), p.c, p.right.into()))
}

fn is_signed_identity(c: &IntMatrix) -> bool {
    let d = c.rows();
    (0..d).all(|r| (0..d).all(|k| if r == k { c.get(r, k).abs() == 1 } else { c.get(r, k) == 0 }))
}
