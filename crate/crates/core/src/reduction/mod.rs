//! Two-stage factorization of orthogonal bases.

mod descent;
mod mod2;
mod size;

use alloc::vec::Vec;

pub use descent::{
    descent_choice, reduce_congruence, reduce_congruence_with, DescentSide, ReduceOptions,
    Strategy, STAGED_WORD_LIMIT,
};
pub use mod2::{factor_mod2, lift_transvection};
pub use size::{size_reduce, SizeReduceLimits};

use crate::error::{Error, Result};
use crate::generators::{Generator, MoveWord};
use crate::lattice::{mod2_reduce, AmbientVector, IntMatrix, OrthogonalBasis};

/// A factorization `target = R_1 .. R_k * G_1 .. G_m` of an orthogonal basis
/// into `(-2)`-reflections `R` followed by even elementary operations `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub reflection_stage: Vec<AmbientVector>,
    pub op_stage: MoveWord,
    pub target: OrthogonalBasis,
}

impl Certificate {
    /// Reflections followed by operations, as one word.
    pub fn word(&self) -> MoveWord {
        self.reflection_stage
            .iter()
            .cloned()
            .map(Generator::Reflection)
            .chain(self.op_stage.iter().cloned())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.reflection_stage.len() + self.op_stage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Factors `target` with default reduction options.
pub fn factor_full(target: &OrthogonalBasis) -> Result<Certificate> {
    factor_full_with(target, ReduceOptions::default())
}

pub fn factor_full_with(target: &OrthogonalBasis, options: ReduceOptions) -> Result<Certificate> {
    let n = target.n();
    let parameters = factor_mod2(&mod2_reduce(target))?;
    let reflections =
        parameters.iter().map(lift_transvection).collect::<Result<Vec<AmbientVector>>>()?;

    // residual = R_k .. R_1 * target, each reflection being an involution
    let mut residual = target.matrix().clone();
    for v in &reflections {
        Generator::Reflection(v.clone()).apply_rows(&mut residual)?;
    }
    let op_stage = reduce_congruence_with(&residual, options)?;

    Ok(Certificate { n, reflection_stage: reflections, op_stage, target: target.clone() })
}

/// Certificate for the isometry carrying `from` to `to`, i.e. for
/// `to * from^{-1}`. Its word `w` satisfies `matrix(w) * from = to`.
pub fn transform_between(from: &OrthogonalBasis, to: &OrthogonalBasis) -> Result<Certificate> {
    if from.n() != to.n() {
        return Err(Error::GenusMismatch { expected: from.n(), found: to.n() });
    }
    let inverse = from.matrix().isometry_inverse()?;
    let change = to.matrix().mul(&inverse)?;
    let cert = factor_full(&OrthogonalBasis::from_isometry_unchecked(change))?;
    if &cert.word().matrix(from.n())?.mul(from.matrix())? != to.matrix() {
        return Err(Error::ResidualNonzero {
            stage: "transform check",
            index: 0,
            state: alloc::boxed::Box::new(IntMatrix::clone(to.matrix())),
        });
    }
    Ok(cert)
}
