//! Certificate checking, a brute-force search oracle for small genus, and
//! seeded random instances.
//!
//! The checker multiplies explicit generator matrices with plain matrix
//! products and never calls the row-operation code the reduction uses.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generators::{generator_matrix, Generator, MoveWord, Sign};
use crate::lattice::{
    AmbientVector, ColumnLabel, Int, IntMatrix, Mod2Matrix, Mod2Vector, OrthogonalBasis,
};
use crate::reduction::{lift_transvection, Certificate};

/// First column where the certificate's product differs from its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub column: ColumnLabel,
    pub expected: AmbientVector,
    pub actual: AmbientVector,
}

/// Structural checks on the two stages, each `true` when it holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageChecks {
    /// Every reflection parameter has self-pairing exactly `-2`.
    pub reflections_are_minus_two: bool,
    /// The operation stage contains no reflections.
    pub op_stage_is_op_only: bool,
    /// Every operation matrix is congruent to the identity mod 2.
    pub ops_congruent_to_identity: bool,
    /// Every generator matrix preserves the Gram matrix.
    pub gram_preserved: bool,
    /// The product of the reflections reduces mod 2 to the target's
    /// reduction.
    pub reflection_stage_matches_mod2: bool,
}

impl StageChecks {
    pub fn all(&self) -> bool {
        self.reflections_are_minus_two
            && self.op_stage_is_op_only
            && self.ops_congruent_to_identity
            && self.gram_preserved
            && self.reflection_stage_matches_mod2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    /// The product reproduces the target exactly and every stage check holds.
    pub ok: bool,
    pub product_matches: bool,
    pub first_divergence: Option<Divergence>,
    pub stage_checks: StageChecks,
    /// Set when the certificate could not be evaluated at all (bad index,
    /// genus mismatch, overflow).
    pub error: Option<Error>,
}

impl VerificationReport {
    fn failed(error: Error) -> Self {
        VerificationReport {
            ok: false,
            product_matches: false,
            first_divergence: None,
            stage_checks: StageChecks {
                reflections_are_minus_two: false,
                op_stage_is_op_only: false,
                ops_congruent_to_identity: false,
                gram_preserved: false,
                reflection_stage_matches_mod2: false,
            },
            error: Some(error),
        }
    }
}

/// Checks that the certificate's word, multiplied out left to right,
/// equals the target, plus the stage checks. Never panics on malformed
/// certificates; problems land in the report.
pub fn verify_certificate(cert: &Certificate) -> VerificationReport {
    match evaluate(cert) {
        Ok(report) => report,
        Err(e) => VerificationReport::failed(e),
    }
}

fn evaluate(cert: &Certificate) -> Result<VerificationReport> {
    let n = cert.n;
    if n == 0 {
        return Err(Error::ZeroGenus);
    }
    if cert.target.n() != n {
        return Err(Error::GenusMismatch { expected: n, found: cert.target.n() });
    }

    let mut checks = StageChecks {
        reflections_are_minus_two: true,
        op_stage_is_op_only: cert.op_stage.is_op_only(),
        ops_congruent_to_identity: true,
        gram_preserved: true,
        reflection_stage_matches_mod2: true,
    };

    let mut product = IntMatrix::identity(2 * n);
    let mut reflection_mod2 = Mod2Matrix::identity(2 * n);
    for v in &cert.reflection_stage {
        if v.n() != n {
            return Err(Error::GenusMismatch { expected: n, found: v.n() });
        }
        if v.pairing(v)? != -2 {
            checks.reflections_are_minus_two = false;
        }
        let g = reflection_matrix(v)?;
        checks.gram_preserved &= g.is_isometry()?;
        reflection_mod2 = reflection_mod2.mul(&g.mod2());
        product = product.mul(&g)?;
    }
    for g in cert.op_stage.iter() {
        let m = generator_matrix(g, n)?;
        checks.gram_preserved &= m.is_isometry()?;
        checks.ops_congruent_to_identity &= m.is_congruent_to_identity();
        product = product.mul(&m)?;
    }
    checks.reflection_stage_matches_mod2 = reflection_mod2 == cert.target.matrix().mod2();

    let target = cert.target.matrix();
    let first_divergence = (0..2 * n).find_map(|col| {
        let expected = target.column(col);
        let actual = product.column(col);
        (expected != actual).then(|| Divergence {
            column: ColumnLabel::from_column(n, col),
            expected,
            actual,
        })
    });
    let product_matches = first_divergence.is_none();
    Ok(VerificationReport {
        ok: product_matches && checks.all(),
        product_matches,
        first_divergence,
        stage_checks: checks,
        error: None,
    })
}

/// `I + v (Q v)^T`, built without assuming `<v, v> = -2` so tampered
/// parameters still get a matrix to compare.
fn reflection_matrix(v: &AmbientVector) -> Result<IntMatrix> {
    let n = v.n();
    let c = v.coords();
    let mut m = IntMatrix::identity(2 * n);
    for col in 0..2 * n {
        let dual = c[(col + n) % (2 * n)];
        for (row, &vr) in c.iter().enumerate() {
            let entry = m
                .get(row, col)
                .checked_add(vr.checked_mul(dual).ok_or(Error::Overflow)?)
                .ok_or(Error::Overflow)?;
            m.set(row, col, entry);
        }
    }
    Ok(m)
}

/// Checks a certificate as a map between two bases: `matrix(word) * from`
/// must equal `to` column by column.
pub fn verify_mapping(
    cert: &Certificate,
    from: &OrthogonalBasis,
    to: &OrthogonalBasis,
) -> VerificationReport {
    let mut report = verify_certificate(cert);
    if report.error.is_some() {
        return report;
    }
    let mapped = cert.target.matrix().mul(from.matrix());
    match mapped {
        Ok(mapped) => {
            let n = from.n();
            let divergence = (0..2 * n).find_map(|col| {
                let expected = to.matrix().column(col);
                let actual = mapped.column(col);
                (expected != actual).then(|| Divergence {
                    column: ColumnLabel::from_column(n, col),
                    expected,
                    actual,
                })
            });
            if divergence.is_some() {
                report.ok = false;
                report.product_matches = false;
                report.first_divergence = divergence;
            }
            report
        }
        Err(e) => VerificationReport::failed(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BfsOutcome {
    /// A shortest word whose matrix equals the target.
    Found(MoveWord),
    /// Every word up to the length bound was explored.
    Absent,
    /// The state cap was hit before the length bound.
    LimitReached,
}

impl BfsOutcome {
    pub fn word(self) -> Option<MoveWord> {
        match self {
            BfsOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Default cap on distinct matrices visited by [`bfs_oracle`].
pub const BFS_STATE_LIMIT: usize = 200_000;

/// Every operation with every index and sign choice, plus the reflections
/// in `(-2)`-vectors with coordinates in `{-1, 0, 1}` (one of each `+-v`
/// pair, since `v` and `-v` give the same reflection).
pub fn bfs_alphabet(n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push(Generator::OpI { i });
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for eps in [Sign::Plus, Sign::Minus] {
                out.push(Generator::OpII { i, j, eps });
                out.push(Generator::OpIII { i, j, eps });
                out.push(Generator::OpIV { i, j, eps });
            }
        }
    }
    let dim = 2 * n;
    let mut coords: Vec<Int> = alloc::vec![-1; dim];
    loop {
        // keep the representative whose first nonzero coordinate is positive
        let leading = coords.iter().find(|&&x| x != 0).copied();
        if leading == Some(1) {
            if let Ok(v) = AmbientVector::from_coords(coords.clone()) {
                if v.pairing(&v) == Ok(-2) {
                    out.push(Generator::Reflection(v));
                }
            }
        }
        let mut k = 0;
        while k < dim && coords[k] == 1 {
            coords[k] = -1;
            k += 1;
        }
        if k == dim {
            break;
        }
        coords[k] += 1;
    }
    out
}

/// Breadth-first search for a shortest word of length at most `max_len`
/// whose matrix is `target`, with the default state cap.
pub fn bfs_oracle(target: &OrthogonalBasis, max_len: usize) -> Result<BfsOutcome> {
    bfs_oracle_with_limit(target, max_len, BFS_STATE_LIMIT)
}

pub fn bfs_oracle_with_limit(
    target: &OrthogonalBasis,
    max_len: usize,
    state_limit: usize,
) -> Result<BfsOutcome> {
    let n = target.n();
    let alphabet = bfs_alphabet(n);
    let matrices =
        alphabet.iter().map(|g| generator_matrix(g, n)).collect::<Result<Vec<IntMatrix>>>()?;
    let goal = target.matrix();

    let start = IntMatrix::identity(2 * n);
    // matrix -> (predecessor, letter)
    let mut parent: BTreeMap<IntMatrix, Option<(IntMatrix, usize)>> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let mut truncated = false;

    while let Some((m, depth)) = queue.pop_front() {
        if &m == goal {
            let mut letters = Vec::new();
            let mut cursor = m;
            while let Some(Some((prev, g))) = parent.get(&cursor).cloned() {
                letters.push(alphabet[g].clone());
                cursor = prev;
            }
            letters.reverse();
            return Ok(BfsOutcome::Found(MoveWord::from(letters)));
        }
        if depth == max_len {
            continue;
        }
        for (g, gm) in matrices.iter().enumerate() {
            let next = m.mul(gm)?;
            if parent.contains_key(&next) {
                continue;
            }
            if parent.len() >= state_limit {
                truncated = true;
                continue;
            }
            parent.insert(next.clone(), Some((m.clone(), g)));
            queue.push_back((next, depth + 1));
        }
    }
    Ok(if truncated { BfsOutcome::LimitReached } else { BfsOutcome::Absent })
}

/// One generator drawn from the fuzzing alphabet: a family uniformly among
/// OpI, OpII, OpIII, OpIV and reflections (only OpI and reflections when
/// `n = 1`), then uniform indices (distinct for the shears) and sign.
/// Reflections lift a uniformly random mod-2 vector with `q0 = 1`.
pub fn random_generator<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Generator {
    assert!(n > 0, "genus must be positive");
    let families = if n == 1 { 2 } else { 5 };
    let sign = |rng: &mut R| if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
    let pair = |rng: &mut R| {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        (i, j)
    };
    match rng.gen_range(0..families) {
        0 => Generator::OpI { i: rng.gen_range(0..n) },
        1 => Generator::Reflection(random_reflection(n, rng)),
        2 => {
            let (i, j) = pair(rng);
            Generator::OpII { i, j, eps: sign(rng) }
        }
        3 => {
            let (i, j) = pair(rng);
            Generator::OpIII { i, j, eps: sign(rng) }
        }
        _ => {
            let (i, j) = pair(rng);
            Generator::OpIV { i, j, eps: sign(rng) }
        }
    }
}

fn random_reflection<R: Rng + ?Sized>(n: usize, rng: &mut R) -> AmbientVector {
    loop {
        let bits: Vec<bool> = (0..2 * n).map(|_| rng.gen()).collect();
        let w = Mod2Vector::from_flat(bits);
        if w.q0() {
            return lift_transvection(&w).expect("q0 = 1");
        }
    }
}

/// Applies `length` random generators to the standard basis. Deterministic
/// in `seed`. The returned word multiplies out to the returned basis.
pub fn random_isometry(n: usize, length: usize, seed: u64) -> Result<(OrthogonalBasis, MoveWord)> {
    if n == 0 {
        return Err(Error::ZeroGenus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word: MoveWord = (0..length).map(|_| random_generator(n, &mut rng)).collect();
    let basis = crate::generators::apply_word(&word, &OrthogonalBasis::standard(n))?;
    Ok((basis, word))
}
