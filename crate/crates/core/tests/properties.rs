use orthobasis::generators::apply_word;
use orthobasis::lattice::hyperbolic_gram;
use orthobasis::reduction::{factor_mod2, lift_transvection};
use orthobasis::verify::{random_generator, random_isometry, verify_certificate, verify_mapping};
use orthobasis::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gram_of(m: &IntMatrix) -> IntMatrix {
    let q = hyperbolic_gram(m.rows() / 2);
    m.transpose().mul(&q).unwrap().mul(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generator_matrices_preserve_gram(n in 1usize..=8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_generator(n, &mut rng);
        let m = g.matrix(n).unwrap();
        prop_assert_eq!(gram_of(&m), hyperbolic_gram(n));
        let inv = g.inverse().matrix(n).unwrap();
        prop_assert!(inv.mul(&m).unwrap().is_identity());
        if !g.is_reflection() {
            prop_assert!(m.is_congruent_to_identity());
            prop_assert_eq!(m.determinant().unwrap(), 1);
        } else {
            prop_assert_eq!(m.determinant().unwrap(), -1);
        }
    }

    #[test]
    fn apply_word_keeps_bases_valid(n in 1usize..=5, length in 0usize..40, seed: u64) {
        let (basis, word) = random_isometry(n, length, seed).unwrap();
        prop_assert!(validate_orthogonal_basis(basis.matrix()).is_ok());
        prop_assert_eq!(&apply_word(&word, &OrthogonalBasis::standard(n)).unwrap(), &basis);
        for x in basis.columns() {
            prop_assert!(!x.mod2().q0());
            prop_assert_eq!(x.pairing(&x).unwrap() % 2, 0);
        }
        let back = apply_word(&word.inverse(), &basis).unwrap();
        prop_assert!(back.is_standard());
    }

    #[test]
    fn mod2_stage_round_trips(n in 1usize..=6, length in 0usize..40, seed: u64) {
        let (basis, _) = random_isometry(n, length, seed).unwrap();
        let target = mod2_reduce(&basis);
        match factor_mod2(&target) {
            Ok(params) => {
                let mut product = Mod2Matrix::identity(2 * n);
                for w in &params {
                    prop_assert!(w.q0());
                    let v = lift_transvection(w).unwrap();
                    prop_assert_eq!(&v.mod2(), w);
                    prop_assert_eq!(v.pairing(&v).unwrap(), -2);
                    product = product.mul(&Mod2Matrix::transvection(w));
                }
                prop_assert_eq!(product, target);
            }
            // the plane swap at n = 2 is not a product of transvections
            Err(Error::NotGeneratedByTransvections) => prop_assert_eq!(n, 2),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factor_full_round_trips(n in 1usize..=5, length in 0usize..48, seed: u64) {
        let (basis, _) = random_isometry(n, length, seed).unwrap();
        let cert = factor_full(&basis).unwrap();
        let report = verify_certificate(&cert);
        prop_assert!(report.ok, "{:?}", report);
        prop_assert!(cert.op_stage.is_op_only());
        prop_assert!(cert.op_stage.matrix(n).unwrap().is_congruent_to_identity());
    }

    #[test]
    fn transform_between_maps_columns(n in 1usize..=4, a: u64, b: u64) {
        let (from, _) = random_isometry(n, 20, a).unwrap();
        let (to, _) = random_isometry(n, 20, b).unwrap();
        let cert = transform_between(&from, &to).unwrap();
        let report = verify_mapping(&cert, &from, &to);
        prop_assert!(report.ok, "{:?}", report);
    }
}

#[test]
fn transform_between_equal_bases_is_empty() {
    let (basis, _) = random_isometry(3, 30, 7).unwrap();
    assert!(transform_between(&basis, &basis).unwrap().is_empty());
}

#[test]
fn transform_from_standard_matches_factor_full() {
    let (basis, _) = random_isometry(4, 30, 11).unwrap();
    let direct = factor_full(&basis).unwrap();
    let via = transform_between(&OrthogonalBasis::standard(4), &basis).unwrap();
    assert_eq!(direct, via);
}

#[test]
fn transform_rejects_genus_mismatch() {
    let a = OrthogonalBasis::standard(2);
    let b = OrthogonalBasis::standard(3);
    assert!(matches!(transform_between(&a, &b), Err(Error::GenusMismatch { .. })));
}
