use gauss_sums_core::characters::{
    classical_gauss_sum, value_ring, AdditiveCharacter, MultiplicativeCharacter,
};
use gauss_sums_core::cyclotomic::{CyclotomicInteger, CyclotomicRing};
use gauss_sums_core::gauss_sums::{gl_gauss_bruteforce, gl_gauss_closed, sl_gauss_closed};
use gauss_sums_core::{Field, FieldElement, MatrixFq, DEFAULT_ENUMERATION_BUDGET};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL_FIELDS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27];

fn cyclotomic(ring: &std::sync::Arc<CyclotomicRing>, coeffs: &[i64]) -> CyclotomicInteger {
    ring.from_power_coefficients(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

proptest! {
    #[test]
    fn field_ops_agree_with_polynomial_reference(qi in 0usize..SMALL_FIELDS.len(), a in 0u64..1024, b in 0u64..1024) {
        let field = Field::of_order(SMALL_FIELDS[qi]).unwrap();
        let q = field.q();
        let (x, y) = (field.element(a % q).unwrap(), field.element(b % q).unwrap());
        let params = field.params();
        prop_assert_eq!(field.mul(x, y), params.mul(x, y));
        prop_assert_eq!(field.add(x, y), params.add(x, y));
        prop_assert_eq!(field.pow(x, b), params.pow(x, b));
        if !x.is_zero() {
            prop_assert_eq!(field.inv(x).unwrap(), params.inv(x).unwrap());
        }
    }

    #[test]
    fn cyclotomic_ring_axioms(
        m in 1u64..40,
        a in prop::collection::vec(-20i64..20, 1..50),
        b in prop::collection::vec(-20i64..20, 1..50),
        c in prop::collection::vec(-20i64..20, 1..50),
    ) {
        let ring = CyclotomicRing::new(m).unwrap();
        let (a, b, c) = (cyclotomic(&ring, &a), cyclotomic(&ring, &b), cyclotomic(&ring, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &ring.one(), a.clone());
    }

    #[test]
    fn abs_embed_is_multiplicative(
        m in 2u64..60,
        a in prop::collection::vec(-9i64..9, 1..20),
        b in prop::collection::vec(-9i64..9, 1..20),
    ) {
        let ring = CyclotomicRing::new(m).unwrap();
        let (a, b) = (cyclotomic(&ring, &a), cyclotomic(&ring, &b));
        let lhs = (&a * &b).abs_embed();
        let rhs = a.abs_embed() * b.abs_embed();
        prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn matrix_identities(qi in 0usize..5, n in 1usize..5, seed in any::<u64>()) {
        let field = Field::of_order(SMALL_FIELDS[qi]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = MatrixFq::random(&field, n, &mut rng).unwrap();
        let x = MatrixFq::random(&field, n, &mut rng).unwrap();
        let p = MatrixFq::random_invertible(&field, n, &mut rng).unwrap();
        let q = MatrixFq::random_invertible(&field, n, &mut rng).unwrap();

        let rank = u.rank(&field);
        prop_assert_eq!(u.transpose().rank(&field), rank);
        let puq = p.mul(&field, &u).unwrap().mul(&field, &q).unwrap();
        prop_assert_eq!(puq.rank(&field), rank);
        prop_assert_eq!(
            u.frobenius_product(&field, &x).unwrap(),
            u.transpose().mul(&field, &x).unwrap().trace(&field)
        );
        prop_assert_eq!(
            u.mul(&field, &x).unwrap().det(&field),
            field.mul(u.det(&field), x.det(&field))
        );
        prop_assert_eq!(rank == n, !u.det(&field).is_zero());
    }

    #[test]
    fn sl_normal_form_has_unit_determinants(qi in 0usize..5, n in 2usize..5, seed in any::<u64>()) {
        let field = Field::of_order(SMALL_FIELDS[qi]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = (seed % n as u64) as usize;
        let u = MatrixFq::random_of_rank(&field, n, rank, &mut rng).unwrap();
        let nf = u.sl_rank_normal_form(&field).unwrap();
        prop_assert_eq!(nf.rank, rank);
        prop_assert_eq!(nf.p.det(&field), FieldElement::ONE);
        prop_assert_eq!(nf.q.det(&field), FieldElement::ONE);
        let puq = nf.p.mul(&field, &u).unwrap().mul(&field, &nf.q).unwrap();
        prop_assert_eq!(puq, MatrixFq::block_identity(n, rank).unwrap());
    }

    #[test]
    fn sl_gl_relation_below_full_rank(qi in 0usize..SMALL_FIELDS.len(), n in 1usize..6, seed in any::<u64>()) {
        let field = Field::of_order(SMALL_FIELDS[qi]).unwrap();
        let ring = value_ring(&field).unwrap();
        let lambda = AdditiveCharacter::standard(&field, &ring).unwrap();
        let trivial = MultiplicativeCharacter::trivial(&field, &ring).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = (seed % n as u64) as usize;
        let u = MatrixFq::random_of_rank(&field, n, rank, &mut rng).unwrap();
        let sl = sl_gauss_closed(&u, &lambda).unwrap();
        let gl = gl_gauss_closed(&u, &trivial, &lambda).unwrap();
        prop_assert_eq!(sl.scalar_mul(&BigInt::from(field.q() - 1)), gl);
    }
}

#[test]
fn character_homomorphisms_exhaustive() {
    for q in [
        2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53,
        59, 61, 64,
    ] {
        let field = Field::of_order(q).unwrap();
        let ring = value_ring(&field).unwrap();
        let lambdas: Vec<_> = [FieldElement::ONE, field.generator()]
            .into_iter()
            .map(|a| AdditiveCharacter::new(&field, &ring, a).unwrap())
            .collect();
        let chis: Vec<_> = [0, 1, (q - 1) / 2, q - 2]
            .into_iter()
            .filter(|&j| j < q - 1)
            .map(|j| MultiplicativeCharacter::new(&field, &ring, j).unwrap())
            .collect();
        let m = ring.order();
        for x in field.elements() {
            for y in field.elements() {
                for lambda in &lambdas {
                    let lhs = lambda.exponent(field.add(x, y)) % m;
                    let rhs = (lambda.exponent(x) + lambda.exponent(y)) % m;
                    assert_eq!(lhs, rhs, "additive q={q}");
                }
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                for chi in &chis {
                    let lhs = chi.exponent(field.mul(x, y)).unwrap() % m;
                    let rhs = (chi.exponent(x).unwrap() + chi.exponent(y).unwrap()) % m;
                    assert_eq!(lhs, rhs, "multiplicative q={q}");
                }
            }
        }
    }
}

#[test]
fn orthogonality_relations() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let field = Field::of_order(q).unwrap();
        let ring = value_ring(&field).unwrap();
        for a in field.elements() {
            let lambda = AdditiveCharacter::new(&field, &ring, a).unwrap();
            let total = field
                .elements()
                .fold(ring.zero(), |acc, x| &acc + &lambda.eval(x));
            let expected = if a.is_zero() { q as i64 } else { 0 };
            assert_eq!(total, ring.from_integer(expected), "q={q} a={a}");
        }
        for j in 0..q - 1 {
            let chi = MultiplicativeCharacter::new(&field, &ring, j).unwrap();
            let total = field
                .units()
                .fold(ring.zero(), |acc, x| &acc + &chi.eval(x).unwrap());
            let expected = if j == 0 { q as i64 - 1 } else { 0 };
            assert_eq!(total, ring.from_integer(expected), "q={q} j={j}");
        }
    }
}

#[test]
fn gauss_sum_norm_is_exactly_q() {
    // G(χ, λ) · conj(G(χ, λ)) = q, where conj(G(χ, λ)) = χ(-1) G(χ̄, λ).
    for q in [3u64, 4, 5, 7, 8, 9] {
        let field = Field::of_order(q).unwrap();
        let ring = value_ring(&field).unwrap();
        let lambda = AdditiveCharacter::standard(&field, &ring).unwrap();
        let minus_one = field.neg(FieldElement::ONE);
        for j in 1..q - 1 {
            let chi = MultiplicativeCharacter::new(&field, &ring, j).unwrap();
            let g = classical_gauss_sum(&chi, &lambda).unwrap();
            let g_bar = &chi.eval(minus_one).unwrap()
                * &classical_gauss_sum(&chi.conjugate(), &lambda).unwrap();
            assert_eq!(&g * &g_bar, ring.from_integer(q as i64), "q={q} j={j}");
        }
    }
}

#[test]
fn gl_twisted_by_lambda_a() {
    // λ_a(U·X) = λ_1(aU·X), so G(U, χ, λ_a) = G(aU, χ, λ_1).
    let field = Field::of_order(5).unwrap();
    let ring = value_ring(&field).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = field.element(3).unwrap();
    let lambda_a = AdditiveCharacter::new(&field, &ring, a).unwrap();
    let lambda_1 = AdditiveCharacter::standard(&field, &ring).unwrap();
    let scalar = {
        let mut s = MatrixFq::zero(2).unwrap();
        s.set(0, 0, a);
        s.set(1, 1, a);
        s
    };
    for j in 0..4 {
        let chi = MultiplicativeCharacter::new(&field, &ring, j).unwrap();
        for rank in 0..=2 {
            let u = MatrixFq::random_of_rank(&field, 2, rank, &mut rng).unwrap();
            let au = scalar.mul(&field, &u).unwrap();
            let lhs = gl_gauss_bruteforce(&u, &chi, &lambda_a, DEFAULT_ENUMERATION_BUDGET).unwrap();
            let rhs =
                gl_gauss_bruteforce(&au, &chi, &lambda_1, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(lhs, gl_gauss_closed(&u, &chi, &lambda_a).unwrap());
        }
    }
}
