//! Factorization of the mod-2 image into orthogonal transvections, and the
//! integral `(-2)`-lift of each transvection.
//!
//! Over F2 the pairing is symplectic and `q0` is a quadratic refinement of
//! it. A transvection `t_w(x) = x + <x, w> w` preserves `q0` exactly when
//! `q0(w) = 1`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{AmbientVector, Int, Mod2Matrix, Mod2Vector};

/// Returns parameters `w_1 .. w_m`, all with `q0 = 1`, such that
/// `t_{w_1} t_{w_2} .. t_{w_m} = target`.
///
/// Works pair by pair: for index `k` it maps the current image of `e_k` back
/// to `e_k`, then the image of `e'_k` back to `e'_k`, using at most two
/// transvections each, all supported on indices `>= k`. The only place this
/// can get stuck is the last two indices; the residual there is found by
/// breadth-first search inside that block. For `n = 2` some elements are
/// not products of transvections at all and are rejected.
pub fn factor_mod2(target: &Mod2Matrix) -> Result<Vec<Mod2Vector>> {
    if !target.preserves_q0() {
        return Err(Error::NotInOrthogonalGroup);
    }
    let n = target.rows() / 2;
    let mut current = target.clone();
    let mut applied: Vec<Mod2Vector> = Vec::new();
    let mut apply = |current: &mut Mod2Matrix, w: Mod2Vector| {
        debug_assert!(w.q0());
        current.transvect_left(&w);
        applied.push(w);
    };

    for k in 0..n {
        let e = Mod2Vector::unit(n, k, false);
        let e_prime = Mod2Vector::unit(n, k, true);

        let x = current.column(k);
        if x != e {
            if x.pairing(&e) {
                apply(&mut current, x.add(&e));
            } else {
                let z = bridge_for_unprimed(&x, k);
                apply(&mut current, x.add(&z));
                apply(&mut current, z.add(&e));
            }
        }

        let y = current.column(n + k);
        if y != e_prime {
            if y.pairing(&e_prime) {
                apply(&mut current, y.add(&e_prime));
            } else {
                let r = y.add(&e_prime);
                let Some(s) = odd_orthogonal_to(&r, k + 1) else {
                    // only two indices remain; finish the block by search
                    break;
                };
                let z = e.add(&e_prime).add(&s);
                apply(&mut current, y.add(&z));
                apply(&mut current, z.add(&e_prime));
            }
        }
    }

    // `target = t_{w_1} .. t_{w_m} * current` since each t is an involution
    let mut out = applied;
    if !current.is_identity() {
        out.extend(finish_last_block(&current)?);
    }
    Ok(out)
}

/// `z` with `q0(z) = 0`, `<z, x> = 1`, `<z, e_k> = 1`, supported on indices
/// `>= k`, for `x` with `<x, e_k> = 0` and `x != e_k`.
fn bridge_for_unprimed(x: &Mod2Vector, k: usize) -> Mod2Vector {
    let n = x.n();
    let mut z = Mod2Vector::unit(n, k, true);
    if x.p(k) {
        return z;
    }
    let l = (k + 1..n)
        .find(|&l| x.p(l) || x.q(l))
        .expect("image of e_k is nonzero outside index k");
    if x.p(l) {
        z.set(n + l, true);
    } else {
        z.set(l, true);
    }
    z
}

/// `s` supported on indices `>= from` with `q0(s) = 1` and `<s, r> = 0`.
/// `None` when fewer than two indices are available and no single index
/// works.
fn odd_orthogonal_to(r: &Mod2Vector, from: usize) -> Option<Mod2Vector> {
    let n = r.n();
    let diagonal = |l: usize| {
        let mut s = Mod2Vector::unit(n, l, false);
        s.set(n + l, true);
        s
    };
    if let Some(l) = (from..n).find(|&l| r.p(l) == r.q(l)) {
        return Some(diagonal(l));
    }
    // every index carries exactly one bit of r
    if n < from + 2 {
        return None;
    }
    let (l1, l2) = (from, from + 1);
    let mut s = diagonal(l1);
    if r.p(l2) {
        s.set(n + l2, true);
    } else {
        s.set(l2, true);
    }
    Some(s)
}

/// Writes an element acting only on the last two indices as a product of
/// transvections. When the element lies outside the subgroup generated by
/// block transvections, a third index is used to realize the swap of the two
/// hyperbolic planes.
fn finish_last_block(residual: &Mod2Matrix) -> Result<Vec<Mod2Vector>> {
    let n = residual.rows() / 2;
    if n < 2 {
        return Err(Error::NotGeneratedByTransvections);
    }
    let block = [n - 2, n - 1];
    let generators: Vec<Mod2Vector> = block_transvections(n, &block);
    if let Some(word) = search_word(residual, &generators) {
        return Ok(word);
    }
    if n < 3 {
        return Err(Error::NotGeneratedByTransvections);
    }
    let swap = plane_swap_word(n, n - 3, n - 2, n - 1);
    let swap_matrix = product(n, &swap);
    let shifted = residual.mul(&swap_matrix);
    let mut word = search_word(&shifted, &generators).ok_or(Error::NotGeneratedByTransvections)?;
    word.extend(swap);
    Ok(word)
}

/// All `q0 = 1` parameters supported on the given indices.
fn block_transvections(n: usize, indices: &[usize]) -> Vec<Mod2Vector> {
    let coords: Vec<usize> = indices.iter().flat_map(|&i| [i, n + i]).collect();
    (1u32..1 << coords.len())
        .map(|mask| {
            let mut w = Mod2Vector::zero(n);
            for (b, &coord) in coords.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    w.set(coord, true);
                }
            }
            w
        })
        .filter(Mod2Vector::q0)
        .collect()
}

/// Breadth-first search over products of `generators` for `target`.
fn search_word(target: &Mod2Matrix, generators: &[Mod2Vector]) -> Option<Vec<Mod2Vector>> {
    let dim = target.rows();
    let start = Mod2Matrix::identity(dim);
    let mut parent: BTreeMap<Mod2Matrix, Option<(Mod2Matrix, usize)>> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        if &m == target {
            let mut word = Vec::new();
            let mut cursor = m;
            while let Some(Some((prev, g))) = parent.get(&cursor).cloned() {
                word.push(generators[g].clone());
                cursor = prev;
            }
            word.reverse();
            return Some(word);
        }
        for (g, w) in generators.iter().enumerate() {
            let next = m.mul(&Mod2Matrix::transvection(w));
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((m.clone(), g)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Four transvections on indices `(a, b, c)` whose product exchanges the
/// hyperbolic planes at `b` and `c` and fixes the one at `a`.
fn plane_swap_word(n: usize, a: usize, b: usize, c: usize) -> Vec<Mod2Vector> {
    let vector = |unprimed: &[usize], primed: &[usize]| {
        let mut w = Mod2Vector::zero(n);
        for &i in unprimed {
            w.set(i, true);
        }
        for &i in primed {
            w.set(n + i, true);
        }
        w
    };
    alloc::vec![
        vector(&[a], &[a]),
        vector(&[a], &[a, b, c]),
        vector(&[a, b, c], &[a]),
        vector(&[a, b, c], &[a, b, c]),
    ]
}

fn product(n: usize, word: &[Mod2Vector]) -> Mod2Matrix {
    word.iter()
        .fold(Mod2Matrix::identity(2 * n), |acc, w| acc.mul(&Mod2Matrix::transvection(w)))
}

/// Integral `v` with `v = w (mod 2)` and `<v, v> = -2`.
///
/// Starts from the 0/1 lift, whose half self-pairing `S = sum p_i q_i` is
/// odd, and shifts one `q_i` with `p_i = 1` by `2k`, `k = (-1 - S) / 2`.
pub fn lift_transvection(w: &Mod2Vector) -> Result<AmbientVector> {
    if !w.q0() {
        return Err(Error::EvenTransvection);
    }
    let n = w.n();
    let mut coords = w.lift().into_coords();
    let half: Int = (0..n).map(|i| coords[i] * coords[n + i]).sum();
    let k = (-1 - half) / 2;
    let i = (0..n).find(|&i| w.p(i) && w.q(i)).expect("q0 = 1 needs a doubly odd index");
    coords[n + i] += 2 * k;
    AmbientVector::from_coords(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bits(p: &[u8], q: &[u8]) -> Mod2Vector {
        let b = |x: &[u8]| x.iter().map(|&v| v == 1).collect::<Vec<_>>();
        Mod2Vector::from_bits(&b(p), &b(q)).unwrap()
    }

    #[test]
    fn identity_factors_to_nothing() {
        assert!(factor_mod2(&Mod2Matrix::identity(6)).unwrap().is_empty());
    }

    #[test]
    fn genus_one_swap() {
        let w = bits(&[1], &[1]);
        let swap = Mod2Matrix::transvection(&w);
        assert_eq!(factor_mod2(&swap).unwrap(), vec![w]);
    }

    #[test]
    fn rejects_non_orthogonal() {
        let t = Mod2Matrix::transvection(&bits(&[1, 0], &[0, 0]));
        assert_eq!(factor_mod2(&t), Err(Error::NotInOrthogonalGroup));
    }

    #[test]
    fn plane_swap_word_swaps_planes() {
        let n = 4;
        let m = product(n, &plane_swap_word(n, 1, 2, 3));
        for k in 0..2 * n {
            let i = k % n;
            let image_index = match i {
                2 => 3,
                3 => 2,
                other => other,
            };
            assert_eq!(m.column(k), Mod2Vector::unit(n, image_index, k >= n));
        }
        assert!(plane_swap_word(n, 1, 2, 3).iter().all(Mod2Vector::q0));
    }

    #[test]
    fn genus_two_plane_swap_is_rejected() {
        let n = 2;
        let cols = [
            Mod2Vector::unit(n, 1, false),
            Mod2Vector::unit(n, 0, false),
            Mod2Vector::unit(n, 1, true),
            Mod2Vector::unit(n, 0, true),
        ];
        let swap = Mod2Matrix::from_columns(&cols).unwrap();
        assert!(swap.preserves_q0());
        assert_eq!(factor_mod2(&swap), Err(Error::NotGeneratedByTransvections));
    }

    #[test]
    fn genus_three_plane_swap_factors() {
        let n = 3;
        let cols: Vec<Mod2Vector> = (0..2 * n)
            .map(|k| {
                let i = [0, 2, 1][k % n];
                Mod2Vector::unit(n, i, k >= n)
            })
            .collect();
        let swap = Mod2Matrix::from_columns(&cols).unwrap();
        let word = factor_mod2(&swap).unwrap();
        assert_eq!(product(n, &word), swap);
        assert!(word.iter().all(Mod2Vector::q0));
    }

    #[test]
    fn lift_examples() {
        let v = lift_transvection(&bits(&[1], &[1])).unwrap();
        assert_eq!(v, AmbientVector::new(&[1], &[-1]).unwrap());
        assert_eq!(v.pairing(&v).unwrap(), -2);
        assert_eq!(lift_transvection(&bits(&[1], &[0])), Err(Error::EvenTransvection));
        let v = lift_transvection(&bits(&[1, 1, 1], &[1, 1, 1])).unwrap();
        assert_eq!(v.pairing(&v).unwrap(), -2);
        assert_eq!(v.mod2(), bits(&[1, 1, 1], &[1, 1, 1]));
    }
}
