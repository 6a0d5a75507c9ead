//! Finite fields `F_q = F_p[x]/(f)`.
//!
//! Elements are stored by their canonical encoding `Σ c_i p^i`, where `c_i`
//! are the little-endian coefficients of the polynomial representative. The
//! encoding order is also the enumeration order, so zero comes first and the
//! prime subfield occupies `[0, p)`.
//!
//! [`FieldParams`] does arithmetic directly on polynomials and is the slow
//! reference path. [`Field`] bundles the parameters with a discrete-log table
//! and a trace table and is what the rest of the crate uses.

use alloc::vec;
use alloc::vec::Vec;

use crate::poly;
use crate::{Error, Result, DEFAULT_FIELD_LIMIT};

/// An element of `F_q`, stored by canonical encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The canonical integer encoding in `[0, q)`.
    #[inline]
    pub fn encoding(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl core::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Factor a prime power `q = p^e`; `None` if `q` is not one.
pub fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    Some((p, e))
}

/// Parameters of `F_q`: characteristic, degree and defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    p: u64,
    e: u32,
    q: u64,
    /// Monic, little-endian, length `e + 1`. For `e = 1` this is the
    /// placeholder `x`.
    modulus: Vec<u64>,
}

impl FieldParams {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_limit(p, e, DEFAULT_FIELD_LIMIT)
    }

    /// Like [`FieldParams::new`] with a custom cap on `q` (at most `u32::MAX`).
    pub fn with_limit(p: u64, e: u32, limit: u64) -> Result<Self> {
        let limit = limit.min(u64::from(u32::MAX));
        if p > 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q > u128::from(limit) {
            return Err(Error::FieldTooLarge { q, limit });
        }
        let q = q as u64;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            first_irreducible(p, e as usize)
        };
        Ok(FieldParams { p, e, q, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic defining polynomial, little-endian coefficients.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn element(&self, encoding: u64) -> Result<FieldElement> {
        if encoding >= self.q {
            return Err(Error::ElementOutOfRange {
                value: encoding,
                q: self.q,
            });
        }
        Ok(FieldElement(encoding as u32))
    }

    /// All `q` elements in canonical order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q as u32).map(FieldElement)
    }

    /// Length-`e` coefficient vector of `x`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut v = u64::from(x.0);
        (0..self.e)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let reduced = if coeffs.len() > self.e as usize {
            poly::rem(coeffs, &self.modulus, self.p)
        } else {
            coeffs.to_vec()
        };
        let enc = reduced
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c % self.p);
        FieldElement(enc as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u64> = x.iter().zip(&y).map(|(s, t)| (s + t) % self.p).collect();
        self.from_coeffs(&sum)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let x: Vec<u64> = self
            .coeffs(a)
            .iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.from_coeffs(&x)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.e == 1 {
            return FieldElement((u64::from(a.0) * u64::from(b.0) % self.p) as u32);
        }
        let prod = poly::mul_mod(&self.coeffs(a), &self.coeffs(b), &self.modulus, self.p);
        self.from_coeffs(&prod)
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via `a^(q-2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::InverseOfZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// `tr(x) = x + x^p + ... + x^(p^(e-1))`, reported as an integer in `[0, p)`.
    pub fn trace_to_prime(&self, x: FieldElement) -> u64 {
        let mut acc = FieldElement::ZERO;
        let mut term = x;
        for _ in 0..self.e {
            acc = self.add(acc, term);
            term = self.pow(term, self.p);
        }
        // The trace lies in the prime subfield, whose encodings are [0, p).
        debug_assert!(u64::from(acc.0) < self.p);
        u64::from(acc.0)
    }
}

/// First monic irreducible of degree `e`, scanning the lower coefficients in
/// the same order as element encodings.
fn first_irreducible(p: u64, e: usize) -> Vec<u64> {
    let count = p.pow(e as u32);
    for k in 0..count {
        let mut f = Vec::with_capacity(e + 1);
        let mut v = k;
        for _ in 0..e {
            f.push(v % p);
            v /= p;
        }
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A generator of `F_q^*` with its power and discrete-log tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultGroupTable {
    generator: FieldElement,
    /// `powers[k] = generator^k` for `k` in `[0, q-1)`.
    powers: Vec<u32>,
    /// `dlog[enc]` for nonzero encodings; slot 0 is unused.
    dlog: Vec<u32>,
}

impl MultGroupTable {
    /// Picks the first element in canonical order whose order is `q - 1`,
    /// then tabulates its powers.
    pub fn build(params: &FieldParams) -> Self {
        let q = params.q;
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = params
            .elements()
            .skip(1)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| params.pow(g, order / r) != FieldElement::ONE)
            })
            .expect("F_q^* is cyclic");

        let mut powers = Vec::with_capacity(order as usize);
        let mut dlog = vec![u32::MAX; q as usize];
        let mut x = FieldElement::ONE;
        for k in 0..order {
            powers.push(x.0);
            dlog[x.0 as usize] = k as u32;
            x = params.mul(x, generator);
        }
        debug_assert_eq!(x, FieldElement::ONE);
        MultGroupTable {
            generator,
            powers,
            dlog,
        }
    }

    #[inline]
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Discrete log base the generator; `None` for zero.
    #[inline]
    pub fn dlog(&self, x: FieldElement) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            Some(self.dlog[x.0 as usize])
        }
    }

    /// `generator^k`, with `k` taken modulo `q - 1`.
    #[inline]
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.powers[(k % self.powers.len() as u64) as usize])
    }

    /// Order of the multiplicative group, `q - 1`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.powers.len() as u64
    }
}

/// `F_q` with precomputed multiplication and trace tables.
///
/// Immutable after construction, so it can be shared freely between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    params: FieldParams,
    table: MultGroupTable,
    trace: Vec<u32>,
}

impl Field {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Ok(Self::from_params(FieldParams::new(p, e)?))
    }

    pub fn with_limit(p: u64, e: u32, limit: u64) -> Result<Self> {
        Ok(Self::from_params(FieldParams::with_limit(p, e, limit)?))
    }

    /// Builds the field for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = factor_prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, e)
    }

    pub fn from_params(params: FieldParams) -> Self {
        let table = MultGroupTable::build(&params);
        // The trace is F_p-linear, so the traces of the basis x^i determine it.
        let basis: Vec<u64> = (0..params.e)
            .map(|i| params.trace_to_prime(FieldElement(params.p.pow(i) as u32)))
            .collect();
        let trace = params
            .elements()
            .map(|x| {
                let t = params
                    .coeffs(x)
                    .iter()
                    .zip(&basis)
                    .fold(0, |acc, (c, b)| (acc + c * b) % params.p);
                t as u32
            })
            .collect();
        Field {
            params,
            table,
            trace,
        }
    }

    #[inline]
    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    #[inline]
    pub fn mult_table(&self) -> &MultGroupTable {
        &self.table
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.params.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.params.e
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.params.q
    }

    pub fn element(&self, encoding: u64) -> Result<FieldElement> {
        self.params.element(encoding)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        self.params.elements()
    }

    /// Nonzero elements in canonical order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> + Clone {
        self.params.elements().skip(1)
    }

    /// Image of the integer `k` in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.params.p as i64) as u32)
    }

    #[inline]
    pub fn generator(&self) -> FieldElement {
        self.table.generator
    }

    #[inline]
    pub fn dlog(&self, x: FieldElement) -> Option<u32> {
        self.table.dlog(x)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.params.p as u32;
        if self.params.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.params.e {
            let d = (x % p + y % p) % p;
            out += d * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.params.p as u32;
        if p == 2 {
            return a;
        }
        if self.params.e == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.params.e {
            out += ((p - x % p) % p) * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        if self.params.e == 1 {
            return FieldElement((u64::from(a.0) * u64::from(b.0) % self.params.p) as u32);
        }
        let k = u64::from(self.table.dlog[a.0 as usize]) + u64::from(self.table.dlog[b.0 as usize]);
        self.table.exp(k)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let k = self.table.dlog(a).ok_or(Error::InverseOfZero)?;
        Ok(self.table.exp(self.table.order() - u64::from(k)))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, exp: u64) -> FieldElement {
        if exp == 0 {
            return FieldElement::ONE;
        }
        match self.table.dlog(a) {
            None => FieldElement::ZERO,
            Some(k) => {
                let order = self.table.order();
                let k = (u128::from(k) * u128::from(exp) % u128::from(order)) as u64;
                self.table.exp(k)
            }
        }
    }

    /// Absolute trace to `F_p`, in `[0, p)`.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u64 {
        u64::from(self.trace[x.0 as usize])
    }
}
