//! Exact arithmetic in the ring of cyclotomic integers `Z[ζ_m]`.
//!
//! Elements are kept in the power basis `1, ζ, ..., ζ^(φ(m)-1)` and always
//! reduced modulo the cyclotomic polynomial `Φ_m`, so ring equality is
//! coefficient equality. Coefficients are arbitrary precision; the hot paths
//! run in `i128` with overflow checks and fall back to [`BigInt`].
//!
//! Character sums are accumulated in a [`RootSum`], which counts how often
//! each `ζ^k` occurs and reduces once at the end.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::prime_factors;
use crate::{Error, Result};

/// Largest root-of-unity order accepted by [`CyclotomicRing::new`].
pub const MAX_ORDER: u64 = 1_000_000;

pub fn euler_phi(m: u64) -> u64 {
    prime_factors(m)
        .into_iter()
        .fold(m, |acc, p| acc / p * (p - 1))
}

/// Exact quotient of `a` by the monic polynomial `b`. Panics if the division
/// leaves a remainder or a coefficient leaves `i64`.
fn div_exact_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let d = b.len() - 1;
    debug_assert_eq!(b[d], 1);
    let mut rem = a.to_vec();
    let mut quot = vec![0i64; a.len() - d];
    for k in (d..a.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - d] = c;
        for (j, &bj) in b.iter().enumerate() {
            let idx = k - d + j;
            rem[idx] = rem[idx]
                .checked_sub(c.checked_mul(bj).expect("coefficient overflow"))
                .expect("coefficient overflow");
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// Substitute `x -> x^k`.
fn inflate(a: &[i64], k: usize) -> Vec<i64> {
    let mut out = vec![0i64; (a.len() - 1) * k + 1];
    for (i, &c) in a.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

/// The `m`-th cyclotomic polynomial, little-endian.
///
/// Uses `Φ_{rp}(x) = Φ_r(x^p) / Φ_r(x)` for primes `p ∤ r` to build the
/// polynomial of the radical of `m`, then `Φ_m(x) = Φ_rad(x^(m/rad))`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut current = vec![-1i64, 1];
    let mut radical = 1u64;
    for p in prime_factors(m) {
        radical *= p;
        current = div_exact_monic(&inflate(&current, p as usize), &current);
    }
    inflate(&current, (m / radical) as usize)
}

/// `Z[ζ_m]` together with its defining polynomial. Shared by reference count
/// between all of its elements.
#[derive(PartialEq, Eq)]
pub struct CyclotomicRing {
    m: u64,
    phi: Vec<i64>,
    /// Nonzero non-leading terms of `Φ_m`, as `(degree, coefficient)`.
    tail: Vec<(usize, i64)>,
}

impl fmt::Debug for CyclotomicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[ζ_{}]", self.m)
    }
}

impl CyclotomicRing {
    pub fn new(m: u64) -> Result<Arc<Self>> {
        if m == 0 || m > MAX_ORDER {
            return Err(Error::InvalidOrder(m));
        }
        let phi = cyclotomic_polynomial(m);
        let degree = phi.len() - 1;
        let tail = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect();
        Ok(Arc::new(CyclotomicRing { m, phi, tail }))
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.m
    }

    /// `φ(m)`, the rank of `Z[ζ_m]` over `Z`.
    #[inline]
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// `Φ_m`, little-endian.
    pub fn polynomial(&self) -> &[i64] {
        &self.phi
    }

    pub fn zero(self: &Arc<Self>) -> CyclotomicInteger {
        CyclotomicInteger {
            ring: Arc::clone(self),
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>) -> CyclotomicInteger {
        self.from_integer(BigInt::one())
    }

    pub fn from_integer(self: &Arc<Self>, n: impl Into<BigInt>) -> CyclotomicInteger {
        let mut z = self.zero();
        z.coeffs[0] = n.into();
        z
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CyclotomicInteger {
        let mut sum = RootSum::new(self);
        sum.add_root(k.rem_euclid(self.m as i64) as u64);
        sum.finish()
    }

    /// Reduces `Σ coeffs[i] ζ^i` (any length) into canonical form.
    pub fn from_power_coefficients(self: &Arc<Self>, coeffs: Vec<BigInt>) -> CyclotomicInteger {
        let small: Option<Vec<i128>> = coeffs.iter().map(ToPrimitive::to_i128).collect();
        if let Some(mut v) = small {
            if self.reduce_i128(&mut v) {
                return self.wrap(v.into_iter().map(BigInt::from).collect());
            }
        }
        let mut v = coeffs;
        self.reduce_big(&mut v);
        self.wrap(v)
    }

    fn wrap(self: &Arc<Self>, mut coeffs: Vec<BigInt>) -> CyclotomicInteger {
        coeffs.resize(self.degree(), BigInt::zero());
        CyclotomicInteger {
            ring: Arc::clone(self),
            coeffs,
        }
    }

    /// In-place reduction modulo `x^m - 1` and then `Φ_m`. Returns false on
    /// `i128` overflow, leaving `v` in an unspecified state.
    fn reduce_i128(&self, v: &mut Vec<i128>) -> bool {
        let m = self.m as usize;
        if v.len() > m {
            for i in m..v.len() {
                let Some(s) = v[i % m].checked_add(v[i]) else {
                    return false;
                };
                v[i % m] = s;
            }
            v.truncate(m);
        }
        let d = self.degree();
        for k in (d..v.len()).rev() {
            let c = v[k];
            if c == 0 {
                continue;
            }
            for &(j, pj) in &self.tail {
                let idx = k - d + j;
                let Some(next) = c
                    .checked_mul(i128::from(pj))
                    .and_then(|t| v[idx].checked_sub(t))
                else {
                    return false;
                };
                v[idx] = next;
            }
            v[k] = 0;
        }
        v.truncate(d);
        true
    }

    fn reduce_big(&self, v: &mut Vec<BigInt>) {
        let m = self.m as usize;
        if v.len() > m {
            let (head, rest) = v.split_at_mut(m);
            for (i, c) in rest.iter().enumerate() {
                head[(m + i) % m] += c;
            }
            v.truncate(m);
        }
        let d = self.degree();
        for k in (d..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = core::mem::take(&mut v[k]);
            for &(j, pj) in &self.tail {
                v[k - d + j] -= &c * pj;
            }
        }
        v.truncate(d);
    }
}

/// A multiset of roots of unity `ζ_m^k`, i.e. an element of the group ring
/// `Z[C_m]`. Summing roots here is a counter increment; [`RootSum::finish`]
/// maps the total into `Z[ζ_m]`.
#[derive(Clone, Debug)]
pub struct RootSum {
    ring: Arc<CyclotomicRing>,
    counts: Vec<i64>,
}

impl RootSum {
    pub fn new(ring: &Arc<CyclotomicRing>) -> Self {
        RootSum {
            ring: Arc::clone(ring),
            counts: vec![0; ring.m as usize],
        }
    }

    /// Adds `ζ^k`; `k` is taken modulo `m`.
    #[inline]
    pub fn add_root(&mut self, k: u64) {
        self.counts[(k % self.ring.m) as usize] += 1;
    }

    #[inline]
    pub fn add_root_times(&mut self, k: u64, times: i64) {
        self.counts[(k % self.ring.m) as usize] += times;
    }

    pub fn merge(&mut self, other: &RootSum) {
        assert_eq!(self.ring.m, other.ring.m, "mixed cyclotomic orders");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Number of roots accumulated, counted with multiplicity.
    pub fn len(&self) -> i64 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn finish(&self) -> CyclotomicInteger {
        let mut v: Vec<i128> = self.counts.iter().map(|&c| i128::from(c)).collect();
        if self.ring.reduce_i128(&mut v) {
            return self.ring.wrap(v.into_iter().map(BigInt::from).collect());
        }
        self.ring
            .from_power_coefficients(self.counts.iter().map(|&c| BigInt::from(c)).collect())
    }
}

/// An element of `Z[ζ_m]` in canonical (reduced) form.
#[derive(Clone)]
pub struct CyclotomicInteger {
    ring: Arc<CyclotomicRing>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for CyclotomicInteger {
    fn eq(&self, other: &Self) -> bool {
        self.ring.m == other.ring.m && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicInteger {}

impl fmt::Debug for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInteger(m={}, {:?})", self.ring.m, self.coeffs)
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "ζ")?,
                (1, false) => write!(f, "{a}ζ")?,
                (_, true) => write!(f, "ζ^{i}")?,
                (_, false) => write!(f, "{a}ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (ζ = ζ_{})", self.ring.m)
    }
}

impl CyclotomicInteger {
    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.ring.m
    }

    /// Power-basis coordinates, length `φ(m)`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        match self.coeffs.split_first() {
            Some((c0, rest)) if rest.iter().all(Zero::is_zero) => Some(c0),
            _ => None,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ring.m != other.ring.m {
            return Err(Error::MixedOrders {
                left: self.ring.m,
                right: other.ring.m,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicInteger {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CyclotomicInteger {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let d = self.ring.degree();
        if let (Some(a), Some(b)) = (to_i128s(&self.coeffs), to_i128s(&other.coeffs)) {
            if let Some(mut prod) = convolve_i128(&a, &b) {
                if self.ring.reduce_i128(&mut prod) {
                    return Ok(self.ring.wrap(prod.into_iter().map(BigInt::from).collect()));
                }
            }
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        self.ring.reduce_big(&mut prod);
        Ok(self.ring.wrap(prod))
    }

    pub fn scalar_mul(&self, k: &BigInt) -> Self {
        CyclotomicInteger {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex embedding `ζ_m -> e^(2πi/m)` as `(re, im)`.
    pub fn embed(&self) -> (f64, f64) {
        let m = self.ring.m as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * core::f64::consts::PI * i as f64 / m;
            re += c * libm::cos(angle);
            im += c * libm::sin(angle);
        }
        (re, im)
    }

    /// Absolute value under the complex embedding. Floating point: use only
    /// for inequality checks with a tolerance.
    pub fn abs_embed(&self) -> f64 {
        let (re, im) = self.embed();
        libm::hypot(re, im)
    }
}

fn to_i128s(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(ToPrimitive::to_i128).collect()
}

fn convolve_i128(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(y)?)?;
        }
    }
    Some(out)
}

impl Add for &CyclotomicInteger {
    type Output = CyclotomicInteger;

    fn add(self, rhs: Self) -> CyclotomicInteger {
        self.checked_add(rhs).expect("mixed cyclotomic orders")
    }
}

impl Sub for &CyclotomicInteger {
    type Output = CyclotomicInteger;

    fn sub(self, rhs: Self) -> CyclotomicInteger {
        self.checked_sub(rhs).expect("mixed cyclotomic orders")
    }
}

impl Mul for &CyclotomicInteger {
    type Output = CyclotomicInteger;

    fn mul(self, rhs: Self) -> CyclotomicInteger {
        self.checked_mul(rhs).expect("mixed cyclotomic orders")
    }
}

impl Neg for &CyclotomicInteger {
    type Output = CyclotomicInteger;

    fn neg(self) -> CyclotomicInteger {
        CyclotomicInteger {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// `ζ_m^k` in a freshly built ring.
pub fn zeta_pow(m: u64, k: i64) -> Result<CyclotomicInteger> {
    Ok(CyclotomicRing::new(m)?.zeta_pow(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// `(x^m - 1) / Π_{d | m, d < m} Φ_d` with plain long division.
    fn cyclotomic_by_division(m: u64) -> Vec<i64> {
        let mut num = vec![0i64; m as usize + 1];
        num[0] = -1;
        num[m as usize] = 1;
        for d in 1..m {
            if m.is_multiple_of(d) {
                num = div_exact_monic(&num, &cyclotomic_by_division(d));
            }
        }
        num
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), [-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), [1, 1]);
        assert_eq!(cyclotomic_polynomial(4), [1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), [1, -1, 1]);
        // Φ_105 is the first with a coefficient outside {-1, 0, 1}.
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn radical_recursion_matches_division_definition() {
        for m in 1..=120 {
            let phi = cyclotomic_polynomial(m);
            assert_eq!(phi, cyclotomic_by_division(m), "m={m}");
            assert_eq!(phi.len() as u64 - 1, euler_phi(m));
        }
    }

    #[test]
    fn zeta_powers() {
        assert_eq!(
            zeta_pow(7, 0).unwrap(),
            CyclotomicRing::new(7).unwrap().one()
        );
        assert_eq!(zeta_pow(2, 1).unwrap().coeffs(), big(&[-1]).as_slice());
        assert_eq!(zeta_pow(4, 3).unwrap().coeffs(), big(&[0, -1]).as_slice());
        assert_eq!(zeta_pow(4, -1).unwrap(), zeta_pow(4, 3).unwrap());
        assert_eq!(zeta_pow(1, 5).unwrap().coeffs(), big(&[1]).as_slice());
        assert!(CyclotomicRing::new(0).is_err());
    }

    #[test]
    fn ring_examples() {
        let r3 = CyclotomicRing::new(3).unwrap();
        let one = r3.one();
        assert!((&one + &(-&one)).is_zero());
        let s = &r3.zeta_pow(1) + &r3.zeta_pow(2);
        assert_eq!(s, r3.from_integer(-1));
        let r4 = CyclotomicRing::new(4).unwrap();
        let i = r4.zeta_pow(1);
        assert_eq!(&i * &i, r4.from_integer(-1));
    }

    #[test]
    fn mixed_orders_rejected() {
        let a = zeta_pow(3, 1).unwrap();
        let b = zeta_pow(5, 1).unwrap();
        assert_eq!(
            a.checked_add(&b),
            Err(Error::MixedOrders { left: 3, right: 5 })
        );
        assert!(a.checked_mul(&b).is_err());
        assert_ne!(a, b);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in 2..=60 {
            let ring = CyclotomicRing::new(m).unwrap();
            let mut sum = RootSum::new(&ring);
            for k in 0..m {
                sum.add_root(k);
            }
            assert!(sum.finish().is_zero(), "m={m}");
            assert_eq!(ring.zeta_pow(1).pow(m as u32), ring.one());
        }
    }

    #[test]
    fn embedding_of_reduced_powers() {
        for m in [1u64, 2, 5, 12, 30, 42, 105, 126] {
            let ring = CyclotomicRing::new(m).unwrap();
            for k in 0..2 * m {
                let (re, im) = ring.zeta_pow(k as i64).embed();
                let angle = 2.0 * core::f64::consts::PI * k as f64 / m as f64;
                assert!((re - libm::cos(angle)).abs() < 1e-9, "m={m} k={k}");
                assert!((im - libm::sin(angle)).abs() < 1e-9, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn abs_embed_basics() {
        let ring = CyclotomicRing::new(12).unwrap();
        assert_eq!(ring.zero().abs_embed(), 0.0);
        assert!((ring.from_integer(-7).abs_embed() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn big_coefficients_fall_back_to_bigint() {
        let ring = CyclotomicRing::new(6).unwrap();
        let huge = BigInt::from(i128::MAX) * BigInt::from(1000);
        let x = &ring.from_integer(huge.clone()) + &ring.zeta_pow(1).scalar_mul(&huge);
        let sq = &x * &x;
        // (h + hζ)^2 = h^2 (1 + 2ζ + ζ^2) = h^2 (1 + 2ζ + ζ - 1) = 3h^2 ζ
        let h2 = &huge * &huge;
        assert_eq!(sq.coeffs(), &[BigInt::zero(), h2 * 3]);
        let reduced = ring.from_power_coefficients(vec![huge.clone(); 7]);
        // 1 + ζ + ... + ζ^5 = 0, plus an extra ζ^6 = 1
        assert_eq!(reduced, ring.from_integer(huge));
    }

    #[test]
    fn display() {
        let ring = CyclotomicRing::new(4).unwrap();
        assert_eq!(std::format!("{}", ring.zero()), "0 (ζ = ζ_4)");
        let x = &ring.from_integer(2) - &ring.zeta_pow(1);
        assert_eq!(std::format!("{x}"), "2 - ζ (ζ = ζ_4)");
    }
}
