//! Square matrices over `F_q` and the groups `GL_n(F_q)`, `SL_n(F_q)`.
//!
//! A [`MatrixFq`] only stores element encodings; every operation takes the
//! [`Field`] it lives in.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::field::{Field, FieldElement};
use crate::{Error, Result};

pub const MAX_DIMENSION: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixFq {
    n: usize,
    /// Row-major.
    entries: Vec<FieldElement>,
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIMENSION {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

impl MatrixFq {
    pub fn zero(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(MatrixFq {
            n,
            entries: vec![FieldElement::ZERO; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::block_identity(n, n)
    }

    /// `diag(I_u, 0)`.
    pub fn block_identity(n: usize, u: usize) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..u.min(n) {
            m.set(i, i, FieldElement::ONE);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major canonical encodings.
    pub fn from_rows(field: &Field, rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        check_dimension(n)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedMatrix("rows must all have length n"));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&v| field.element(v))
            .collect::<Result<_>>()?;
        Ok(MatrixFq { n, entries })
    }

    pub fn from_entries(field: &Field, n: usize, entries: Vec<FieldElement>) -> Result<Self> {
        check_dimension(n)?;
        if entries.len() != n * n {
            return Err(Error::MalformedMatrix("expected n*n entries"));
        }
        for e in &entries {
            field.element(u64::from(e.encoding()))?;
        }
        Ok(MatrixFq { n, entries })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|e| u64::from(e.encoding())).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = self.clone();
        for i in 0..n {
            for j in 0..n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, field: &Field, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n;
        let mut out = MatrixFq {
            n,
            entries: vec![FieldElement::ZERO; n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElement::ZERO;
                for k in 0..n {
                    acc = field.add(acc, field.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `U·V = Σ u_ij v_ij`.
    pub fn frobenius_product(&self, field: &Field, other: &Self) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(FieldElement::ZERO, |acc, (&a, &b)| {
                field.add(acc, field.mul(a, b))
            }))
    }

    pub fn trace(&self, field: &Field) -> FieldElement {
        self.partial_trace(field, self.n)
    }

    /// `Σ_{i < u} x_ii`; `u` is clamped to `n`.
    pub fn partial_trace(&self, field: &Field, u: usize) -> FieldElement {
        (0..u.min(self.n)).fold(FieldElement::ZERO, |acc, i| field.add(acc, self.get(i, i)))
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, field: &Field) -> FieldElement {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = FieldElement::ONE;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return FieldElement::ZERO;
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = field.neg(det);
            }
            let pv = a[col * n + col];
            det = field.mul(det, pv);
            let pinv = field.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let f = field.mul(a[r * n + col], pinv);
                if f.is_zero() {
                    continue;
                }
                for k in col..n {
                    let v = field.sub(a[r * n + k], field.mul(f, a[col * n + k]));
                    a[r * n + k] = v;
                }
            }
        }
        det
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rank_normal_form(field).rank
    }

    pub fn is_invertible(&self, field: &Field) -> bool {
        !self.det(field).is_zero()
    }

    /// Invertible `P`, `Q` with `P U Q = diag(I_u, 0)`.
    ///
    /// Full elimination: row operations are mirrored into `P`, column
    /// operations into `Q`. The pivot is the first nonzero entry of the
    /// remaining block in row-major order.
    pub fn rank_normal_form(&self, field: &Field) -> RankNormalForm {
        let n = self.n;
        let mut a = self.clone();
        let mut p = MatrixFq::identity(n).expect("valid dimension");
        let mut q = p.clone();
        let mut rank = 0;
        while rank < n {
            let r = rank;
            let pivot = (r..n)
                .flat_map(|i| (r..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).is_zero());
            let Some((pi, pj)) = pivot else { break };
            a.swap_rows(pi, r);
            p.swap_rows(pi, r);
            a.swap_cols(pj, r);
            q.swap_cols(pj, r);

            let inv = field.inv(a.get(r, r)).expect("pivot is nonzero");
            a.scale_row(field, r, inv);
            p.scale_row(field, r, inv);
            for i in 0..n {
                let f = a.get(i, r);
                if i != r && !f.is_zero() {
                    let f = field.neg(f);
                    a.add_row_multiple(field, i, r, f);
                    p.add_row_multiple(field, i, r, f);
                }
            }
            for j in 0..n {
                let f = a.get(r, j);
                if j != r && !f.is_zero() {
                    let f = field.neg(f);
                    a.add_col_multiple(field, j, r, f);
                    q.add_col_multiple(field, j, r, f);
                }
            }
            rank += 1;
        }
        debug_assert_eq!(
            a,
            MatrixFq::block_identity(n, rank).expect("valid dimension")
        );
        RankNormalForm { p, q, rank }
    }

    /// As [`MatrixFq::rank_normal_form`] but with `det P = det Q = 1`.
    ///
    /// Rescales the last row of `P` and the last column of `Q`; when the rank
    /// is below `n` these only meet the zero block of `P U Q`.
    pub fn sl_rank_normal_form(&self, field: &Field) -> Result<RankNormalForm> {
        let mut nf = self.rank_normal_form(field);
        let n = self.n;
        if nf.rank == n {
            return Err(Error::FullRank);
        }
        let dp = field.inv(nf.p.det(field)).expect("P is invertible");
        let dq = field.inv(nf.q.det(field)).expect("Q is invertible");
        nf.p.scale_row(field, n - 1, dp);
        nf.q.scale_col(field, n - 1, dq);
        Ok(nf)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.n {
                self.entries.swap(a * self.n + k, b * self.n + k);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.n {
                self.entries.swap(k * self.n + a, k * self.n + b);
            }
        }
    }

    fn scale_row(&mut self, field: &Field, r: usize, f: FieldElement) {
        for k in 0..self.n {
            let v = field.mul(self.get(r, k), f);
            self.set(r, k, v);
        }
    }

    fn scale_col(&mut self, field: &Field, c: usize, f: FieldElement) {
        for k in 0..self.n {
            let v = field.mul(self.get(k, c), f);
            self.set(k, c, v);
        }
    }

    /// row `dst` += f · row `src`
    fn add_row_multiple(&mut self, field: &Field, dst: usize, src: usize, f: FieldElement) {
        for k in 0..self.n {
            let v = field.add(self.get(dst, k), field.mul(f, self.get(src, k)));
            self.set(dst, k, v);
        }
    }

    /// col `dst` += f · col `src`
    fn add_col_multiple(&mut self, field: &Field, dst: usize, src: usize, f: FieldElement) {
        for k in 0..self.n {
            let v = field.add(self.get(k, dst), field.mul(f, self.get(k, src)));
            self.set(k, dst, v);
        }
    }

    /// Uniform matrix of `M_n(F_q)`.
    pub fn random<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Result<Self> {
        check_dimension(n)?;
        let q = field.q() as u32;
        let entries = (0..n * n)
            .map(|_| {
                field
                    .element(u64::from(rng.gen_range(0..q)))
                    .expect("in range")
            })
            .collect();
        Ok(MatrixFq { n, entries })
    }

    /// Uniform element of `GL_n(F_q)` by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(
        field: &Field,
        n: usize,
        rng: &mut R,
    ) -> Result<Self> {
        loop {
            let m = Self::random(field, n, rng)?;
            if m.is_invertible(field) {
                return Ok(m);
            }
        }
    }

    /// `P diag(I_u, 0) Q` for random invertible `P`, `Q`.
    pub fn random_of_rank<R: Rng + ?Sized>(
        field: &Field,
        n: usize,
        u: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let p = Self::random_invertible(field, n, rng)?;
        let q = Self::random_invertible(field, n, rng)?;
        p.mul(field, &Self::block_identity(n, u)?)?.mul(field, &q)
    }
}

/// `P U Q = diag(I_rank, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankNormalForm {
    pub p: MatrixFq,
    pub q: MatrixFq,
    pub rank: usize,
}

/// Number of candidate matrices `q^(n^2)` an enumeration has to visit.
pub fn candidate_count(q: u64, n: usize) -> u128 {
    (q as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX)
}

fn check_budget(field: &Field, n: usize, budget: u64) -> Result<()> {
    check_dimension(n)?;
    let candidates = candidate_count(field.q(), n);
    if candidates > u128::from(budget) {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    Ok(())
}

/// Walks all of `M_n(F_q)` in odometer order and yields the matrices whose
/// determinant passes a filter, each with its determinant.
#[derive(Debug, Clone)]
pub struct GroupIter<'f> {
    field: &'f Field,
    current: Option<MatrixFq>,
    special: bool,
}

impl<'f> GroupIter<'f> {
    fn advance(&mut self) {
        let q = self.field.q() as u32;
        let Some(m) = self.current.as_mut() else {
            return;
        };
        for e in m.entries.iter_mut().rev() {
            let next = e.encoding() + 1;
            if next < q {
                *e = self.field.element(u64::from(next)).expect("in range");
                return;
            }
            *e = FieldElement::ZERO;
        }
        self.current = None;
    }
}

impl Iterator for GroupIter<'_> {
    type Item = (MatrixFq, FieldElement);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let m = self.current.as_ref()?;
            let det = m.det(self.field);
            let keep = if self.special {
                det == FieldElement::ONE
            } else {
                !det.is_zero()
            };
            let out = keep.then(|| m.clone());
            self.advance();
            if let Some(m) = out {
                return Some((m, det));
            }
        }
    }
}

/// Every element of `GL_n(F_q)` exactly once, together with its determinant.
///
/// This is the single source of truth for the brute-force oracles: it
/// filters all `q^(n^2)` matrices on `det ≠ 0`, so it is only as fast as
/// that is, and refuses to start when `q^(n^2)` exceeds `budget`.
pub fn enumerate_gl(field: &Field, n: usize, budget: u64) -> Result<GroupIter<'_>> {
    check_budget(field, n, budget)?;
    Ok(GroupIter {
        field,
        current: Some(MatrixFq::zero(n)?),
        special: false,
    })
}

/// Every element of `SL_n(F_q)` exactly once (determinant always 1).
pub fn enumerate_sl(field: &Field, n: usize, budget: u64) -> Result<GroupIter<'_>> {
    check_budget(field, n, budget)?;
    Ok(GroupIter {
        field,
        current: Some(MatrixFq::zero(n)?),
        special: true,
    })
}
