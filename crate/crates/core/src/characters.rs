//! Additive and multiplicative characters of `F_q`, classical Gauss sums and
//! hyper-Kloosterman sums.
//!
//! All values live in `Z[ζ_m]` with `m = p(q - 1)`. Since `gcd(p, q - 1) = 1`
//! both `ζ_p = ζ_m^(q-1)` and `ζ_(q-1) = ζ_m^p` are available in that one
//! ring.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::cyclotomic::{CyclotomicInteger, CyclotomicRing, RootSum};
use crate::field::{Field, FieldElement};
use crate::{Error, Result};

/// The ring `Z[ζ_(p(q-1))]` that holds every character value of `field`.
pub fn value_ring(field: &Field) -> Result<Arc<CyclotomicRing>> {
    CyclotomicRing::new(field.p() * (field.q() - 1))
}

fn check_ring(field: &Field, ring: &CyclotomicRing) -> Result<()> {
    let expected = field.p() * (field.q() - 1);
    if ring.order() != expected {
        return Err(Error::MixedOrders {
            left: ring.order(),
            right: expected,
        });
    }
    Ok(())
}

/// `λ_a(x) = ζ_p^tr(a x)`.
#[derive(Clone, Debug)]
pub struct AdditiveCharacter<'f> {
    field: &'f Field,
    ring: Arc<CyclotomicRing>,
    twist: FieldElement,
}

impl<'f> AdditiveCharacter<'f> {
    pub fn new(field: &'f Field, ring: &Arc<CyclotomicRing>, twist: FieldElement) -> Result<Self> {
        check_ring(field, ring)?;
        field.element(u64::from(twist.encoding()))?;
        Ok(AdditiveCharacter {
            field,
            ring: Arc::clone(ring),
            twist,
        })
    }

    /// `λ_1`, the standard character `x -> exp(2πi tr(x) / p)`.
    pub fn standard(field: &'f Field, ring: &Arc<CyclotomicRing>) -> Result<Self> {
        Self::new(field, ring, FieldElement::ONE)
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn twist(&self) -> FieldElement {
        self.twist
    }

    pub fn is_trivial(&self) -> bool {
        self.twist.is_zero()
    }

    /// `tr(a x)` in `[0, p)`: the exponent of `ζ_p`.
    #[inline]
    pub fn prime_exponent(&self, x: FieldElement) -> u64 {
        self.field.trace(self.field.mul(self.twist, x))
    }

    /// Exponent of `ζ_m` for `λ(x)`.
    #[inline]
    pub fn exponent(&self, x: FieldElement) -> u64 {
        self.prime_exponent(x) * (self.field.q() - 1)
    }

    pub fn eval(&self, x: FieldElement) -> CyclotomicInteger {
        self.ring.zeta_pow(self.exponent(x) as i64)
    }
}

/// `χ_j(x) = ζ_(q-1)^(j · dlog x)`, relative to the field's generator.
#[derive(Clone, Debug)]
pub struct MultiplicativeCharacter<'f> {
    field: &'f Field,
    ring: Arc<CyclotomicRing>,
    index: u64,
}

impl<'f> MultiplicativeCharacter<'f> {
    /// `index` must lie in `[0, q - 1)`.
    pub fn new(field: &'f Field, ring: &Arc<CyclotomicRing>, index: u64) -> Result<Self> {
        check_ring(field, ring)?;
        let order = field.q() - 1;
        if index >= order {
            return Err(Error::CharacterIndexOutOfRange { index, order });
        }
        Ok(MultiplicativeCharacter {
            field,
            ring: Arc::clone(ring),
            index,
        })
    }

    pub fn trivial(field: &'f Field, ring: &Arc<CyclotomicRing>) -> Result<Self> {
        Self::new(field, ring, 0)
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// `χ̄`, index `(q - 1 - j) mod (q - 1)`.
    pub fn conjugate(&self) -> Self {
        let order = self.field.q() - 1;
        MultiplicativeCharacter {
            field: self.field,
            ring: Arc::clone(&self.ring),
            index: (order - self.index) % order,
        }
    }

    /// Exponent of `ζ_m` for `χ(x)`; `None` at zero.
    #[inline]
    pub fn exponent(&self, x: FieldElement) -> Option<u64> {
        let order = self.field.q() - 1;
        let d = u64::from(self.field.dlog(x)?);
        Some(self.field.p() * (self.index * d % order))
    }

    pub fn eval(&self, x: FieldElement) -> Result<CyclotomicInteger> {
        let k = self.exponent(x).ok_or(Error::CharacterAtZero)?;
        Ok(self.ring.zeta_pow(k as i64))
    }
}

fn check_pair(chi: &MultiplicativeCharacter<'_>, lambda: &AdditiveCharacter<'_>) -> Result<()> {
    if !core::ptr::eq(chi.field, lambda.field) && chi.field != lambda.field {
        return Err(Error::MixedFields);
    }
    Ok(())
}

/// `G(χ, λ) = Σ_{x ≠ 0} χ(x) λ(x)`.
pub fn classical_gauss_sum(
    chi: &MultiplicativeCharacter<'_>,
    lambda: &AdditiveCharacter<'_>,
) -> Result<CyclotomicInteger> {
    check_pair(chi, lambda)?;
    let mut sum = RootSum::new(&lambda.ring);
    for x in lambda.field.units() {
        let k = chi.exponent(x).expect("nonzero") + lambda.exponent(x);
        sum.add_root(k);
    }
    Ok(sum.finish())
}

/// Lifts `Σ_t counts[t] ζ_p^t` into `Z[ζ_m]`.
fn lift_prime_counts<T>(lambda: &AdditiveCharacter<'_>, counts: &[T]) -> CyclotomicInteger
where
    T: Clone + Into<num_bigint::BigInt>,
{
    let m = lambda.ring.order() as usize;
    let stride = (lambda.field.q() - 1) as usize;
    let mut coeffs = vec![num_bigint::BigInt::zero(); m];
    for (t, c) in counts.iter().enumerate() {
        coeffs[t * stride] = c.clone().into();
    }
    lambda.ring.from_power_coefficients(coeffs)
}

/// `K_n(λ, y)` for every nonzero `y`, indexed by `dlog y`.
///
/// Runs the recursion `K_1(y) = λ(y)`,
/// `K_n(y) = Σ_{x ≠ 0} λ(x) K_(n-1)(y / x)` on exponent counts of `ζ_p`, so a
/// level costs `(q-1)^2 p` additions.
pub fn kloosterman_table(
    lambda: &AdditiveCharacter<'_>,
    n: usize,
) -> Result<Vec<CyclotomicInteger>> {
    if n == 0 {
        return Err(Error::KloostermanLength(n));
    }
    let bits_per_term = 64 - (lambda.field.q() - 1).leading_zeros() as usize;
    if (n - 1) * bits_per_term < 127 {
        Ok(kloosterman_counts::<u128>(lambda, n)
            .iter()
            .map(|c| lift_prime_counts(lambda, c))
            .collect())
    } else {
        Ok(kloosterman_counts::<BigUint>(lambda, n)
            .iter()
            .map(|c| lift_prime_counts(lambda, c))
            .collect())
    }
}

/// `counts[d][t]`: number of tuples with product `g^d` whose sum has trace `t`.
fn kloosterman_counts<T>(lambda: &AdditiveCharacter<'_>, n: usize) -> Vec<Vec<T>>
where
    T: Clone + Zero + From<u8> + for<'a> core::ops::AddAssign<&'a T>,
{
    let field = lambda.field;
    let p = field.p() as usize;
    let order = (field.q() - 1) as usize;
    let table = field.mult_table();
    // trace exponent of λ(g^s)
    let step: Vec<usize> = (0..order)
        .map(|s| lambda.prime_exponent(table.exp(s as u64)) as usize)
        .collect();

    let mut level: Vec<Vec<T>> = (0..order)
        .map(|d| {
            let mut row = vec![T::zero(); p];
            row[step[d]] = T::from(1u8);
            row
        })
        .collect();
    for _ in 1..n {
        let mut next = vec![vec![T::zero(); p]; order];
        for (d, out) in next.iter_mut().enumerate() {
            for (s, &shift) in step.iter().enumerate() {
                let prev = &level[(d + order - s) % order];
                for (t, c) in prev.iter().enumerate() {
                    if !c.is_zero() {
                        out[(t + shift) % p] += c;
                    }
                }
            }
        }
        level = next;
    }
    level
}

/// `K_n(λ, y) = Σ_{x_1 ⋯ x_n = y} λ(x_1 + ⋯ + x_n)` via the recursion.
pub fn kloosterman(
    lambda: &AdditiveCharacter<'_>,
    n: usize,
    y: FieldElement,
) -> Result<CyclotomicInteger> {
    if n == 0 {
        return Err(Error::KloostermanLength(n));
    }
    let d = lambda.field.dlog(y).ok_or(Error::KloostermanAtZero)?;
    Ok(kloosterman_table(lambda, n)?.swap_remove(d as usize))
}

/// `K_n(λ, y)` by walking all `(q-1)^(n-1)` free tuples; the last variable is
/// forced to `y / (x_1 ⋯ x_(n-1))`.
pub fn kloosterman_bruteforce(
    lambda: &AdditiveCharacter<'_>,
    n: usize,
    y: FieldElement,
) -> Result<CyclotomicInteger> {
    if n == 0 {
        return Err(Error::KloostermanLength(n));
    }
    if y.is_zero() {
        return Err(Error::KloostermanAtZero);
    }
    let field = lambda.field;
    let params = field.params();
    let units: Vec<FieldElement> = field.units().collect();
    let mut idx = vec![0usize; n - 1];
    let mut sum = RootSum::new(&lambda.ring);
    loop {
        let mut prod = FieldElement::ONE;
        let mut total = FieldElement::ZERO;
        for &i in &idx {
            prod = params.mul(prod, units[i]);
            total = params.add(total, units[i]);
        }
        let last = params.mul(y, params.inv(prod)?);
        total = params.add(total, last);
        sum.add_root(lambda.exponent(total));

        // odometer over (q-1)^(n-1)
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(sum.finish());
            }
            idx[pos] += 1;
            if idx[pos] < units.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
