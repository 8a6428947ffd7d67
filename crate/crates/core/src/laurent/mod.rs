//! Exact sparse multivariate Laurent polynomials over the integers.
//!
//! Every cluster variable, cluster monomial and basis element in this crate is
//! a [`LaurentPolynomial`] in the fixed initial variables `x1..xn`. Terms are
//! stored in a `BTreeMap` keyed by exponent vector, so the map order is the
//! lexicographic monomial order used by exact division.
//!
//! The text form (see [`LaurentPolynomial::parse`] and the `Display` impl) is
//! a sum of terms `c*x1^e1*x2^e2`, lowest total degree first.

mod pack;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use pack::Packing;

pub use parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible: {dividend} / {divisor}")]
    NotDivisible { dividend: String, divisor: String },
}

/// Exponent vector of a Laurent monomial, one (possibly negative) entry per
/// ambient variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn new(exponents: Vec<i32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// Result of [`LaurentPolynomial::classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Zero,
    Monomial { coefficient: BigInt, monomial: Monomial },
    Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    rank: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(rank: usize) -> Self {
        LaurentPolynomial { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, 1)
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::term(rank, c, Monomial::one(rank))
    }

    /// The initial variable `x_{index+1}` (0-based index).
    pub fn variable(rank: usize, index: usize) -> Self {
        assert!(index < rank, "variable index {index} out of range for rank {rank}");
        let mut e = vec![0; rank];
        e[index] = 1;
        Self::term(rank, 1, Monomial(e))
    }

    pub fn term(rank: usize, c: impl Into<BigInt>, monomial: Monomial) -> Self {
        assert_eq!(monomial.rank(), rank);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(monomial, c);
        }
        LaurentPolynomial { rank, terms }
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated monomials and dropping zero coefficients.
    pub fn from_terms<I, C>(rank: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (C, Vec<i32>)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero(rank);
        for (c, e) in terms {
            assert_eq!(e.len(), rank);
            out.add_term(Monomial(e), c.into());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Leading term under the lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn classify(&self) -> Shape {
        match self.terms.len() {
            0 => Shape::Zero,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                Shape::Monomial { coefficient: c.clone(), monomial: m.clone() }
            }
            _ => Shape::Polynomial,
        }
    }

    /// Minimum and maximum exponent of variable `j` over the support.
    pub fn degree_bounds(&self, j: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.0[j]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// True if every term only involves variables with index in `range`.
    pub fn supported_in(&self, range: std::ops::Range<usize>) -> bool {
        self.terms.keys().all(|m| {
            m.0.iter().enumerate().all(|(j, &e)| e == 0 || range.contains(&j))
        })
    }

    /// Re-expresses this polynomial in a larger ambient ring, placing its
    /// variables at `offset..offset+rank`.
    pub fn embed(&self, new_rank: usize, offset: usize) -> Self {
        assert!(offset + self.rank <= new_rank);
        let mut out = Self::zero(new_rank);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_rank];
            e[offset..offset + self.rank].copy_from_slice(&m.0);
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Evaluates exactly at a point where each variable is a nonzero integer.
    pub fn evaluate(&self, point: &[i64]) -> num_rational::BigRational {
        assert_eq!(point.len(), self.rank);
        let mut acc = num_rational::BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = num_rational::BigRational::from_integer(c.clone());
            for (&x, &e) in point.iter().zip(&m.0) {
                let base = num_rational::BigRational::from_integer(BigInt::from(x));
                v *= num_traits::pow::Pow::pow(&base, e);
            }
            acc += v;
        }
        acc
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<(), LaurentError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(LaurentError::RankMismatch { left: self.rank, right: other.rank })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_rank(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.rank));
        }
        let Some((pa, pb, out)) = self.product_packing(other) else {
            return Ok(self.mul_generic(other));
        };
        let a: Vec<(u128, &BigInt)> = self.terms.iter().map(|(m, c)| (pa.pack(m), c)).collect();
        let b: Vec<(u128, &BigInt)> = other.terms.iter().map(|(m, c)| (pb.pack(m), c)).collect();
        let capacity = (a.len() * b.len()).min(1 << 20);
        let bits = |p: &Self| p.terms.values().map(BigInt::bits).max().unwrap_or(0);
        let count = a.len().min(b.len()) as u64;
        let terms = if bits(self) + bits(other) + u64::from(64 - count.leading_zeros()) < 126 {
            // every partial sum fits in an i128
            let small = |v: &[(u128, &BigInt)]| -> Vec<(u128, i128)> {
                v.iter().map(|&(k, c)| (k, i128::try_from(c).expect("bounded by the bit count"))).collect()
            };
            let (a, b) = (small(&a), small(&b));
            let mut acc: HashMap<u128, i128> = HashMap::with_capacity(capacity);
            for &(ka, ca) in &a {
                for &(kb, cb) in &b {
                    *acc.entry(ka + kb).or_insert(0) += ca * cb;
                }
            }
            acc.into_iter().filter(|&(_, c)| c != 0).map(|(k, c)| (out.unpack(k), BigInt::from(c))).collect()
        } else {
            let mut acc: HashMap<u128, BigInt> = HashMap::with_capacity(capacity);
            for &(ka, ca) in &a {
                for &(kb, cb) in &b {
                    *acc.entry(ka + kb).or_default() += ca * cb;
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (out.unpack(k), c)).collect()
        };
        Ok(LaurentPolynomial { rank: self.rank, terms })
    }

    /// Packings for the two factors and their product, when the exponent
    /// ranges are small enough.
    fn product_packing(&self, other: &Self) -> Option<(Packing, Packing, Packing)> {
        let (mut lo, mut span, mut alo, mut blo) = (vec![], vec![], vec![], vec![]);
        for j in 0..self.rank {
            let (a0, a1) = self.degree_bounds(j)?;
            let (b0, b1) = other.degree_bounds(j)?;
            alo.push(a0);
            blo.push(b0);
            lo.push(a0.checked_add(b0)?);
            span.push(i64::from(a1) - i64::from(a0) + i64::from(b1) - i64::from(b0));
        }
        let out = Packing::new(lo, &span)?;
        Some((out.with_offsets(alo), out.with_offsets(blo), out))
    }

    fn mul_generic(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentPolynomial {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.rank);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division: returns `q` with `q * divisor == self`.
    ///
    /// Uses leading-term elimination in the lexicographic order. Any exact
    /// quotient has its exponent of `x_j` within
    /// `[min_j(self) - min_j(divisor), max_j(self) - max_j(divisor)]`, so the
    /// elimination stops with `NotDivisible` as soon as a quotient term leaves
    /// that box or a coefficient does not divide.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, LaurentError> {
        self.check_rank(divisor)?;
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.rank));
        }
        let fail = || LaurentError::NotDivisible {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let mut lo = Vec::with_capacity(self.rank);
        let mut hi = Vec::with_capacity(self.rank);
        for j in 0..self.rank {
            let (alo, ahi) = self.degree_bounds(j).unwrap();
            let (blo, bhi) = divisor.degree_bounds(j).unwrap();
            if alo - blo > ahi - bhi {
                return Err(fail());
            }
            lo.push(alo - blo);
            hi.push(ahi - bhi);
        }
        let (lead_m, lead_c) = divisor.leading_term().unwrap();
        let span: Vec<i64> = (0..self.rank)
            .map(|j| {
                let (a0, a1) = self.degree_bounds(j).unwrap();
                i64::from(a1) - i64::from(a0)
            })
            .collect();
        let alo: Vec<i32> = (0..self.rank).map(|j| self.degree_bounds(j).unwrap().0).collect();
        let Some(pa) = Packing::new(alo.clone(), &span) else {
            return self.divide_generic(divisor, lead_m, lead_c, &lo, &hi).ok_or_else(fail);
        };
        // Every remainder term stays inside the dividend's exponent box, so
        // one packing covers the whole elimination.
        let pq = pa.with_offsets(lo.clone());
        let pb = pa.with_offsets((0..self.rank).map(|j| divisor.degree_bounds(j).unwrap().0).collect());
        let lead_key = pb.pack(lead_m);
        let others: Vec<(u128, &BigInt)> =
            divisor.terms.iter().map(|(m, c)| (pb.pack(m), c)).filter(|&(k, _)| k != lead_key).collect();
        let mut rem: BTreeMap<u128, BigInt> = self.terms.iter().map(|(m, c)| (pa.pack(m), c.clone())).collect();
        let mut quotient = BTreeMap::new();
        while let Some((k, c)) = rem.pop_last() {
            let t = pa.unpack(k).div(lead_m);
            let in_box = t.0.iter().enumerate().all(|(j, &e)| lo[j] <= e && e <= hi[j]);
            if !in_box {
                return Err(fail());
            }
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(fail());
            }
            let tk = pq.pack(&t);
            for &(bk, bc) in &others {
                match rem.entry(tk + bk) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-(&qc * bc));
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= &qc * bc;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quotient.insert(t, qc);
        }
        Ok(LaurentPolynomial { rank: self.rank, terms: quotient })
    }

    fn divide_generic(
        &self,
        divisor: &Self,
        lead_m: &Monomial,
        lead_c: &BigInt,
        lo: &[i32],
        hi: &[i32],
    ) -> Option<Self> {
        let mut rem = self.terms.clone();
        let mut quotient = BTreeMap::new();
        while let Some((m, c)) = rem.last_key_value() {
            let t = m.div(lead_m);
            if !t.0.iter().enumerate().all(|(j, &e)| lo[j] <= e && e <= hi[j]) {
                return None;
            }
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return None;
            }
            for (bm, bc) in &divisor.terms {
                let key = t.mul(bm);
                let delta = -(&qc * bc);
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quotient.insert(t, qc);
        }
        Some(LaurentPolynomial { rank: self.rank, terms: quotient })
    }

    pub fn parse(text: &str, rank: usize) -> Result<Self, ParseError> {
        parse::parse(text, rank)
    }

    /// Terms in rendering order: ascending total degree, then descending
    /// lexicographic exponent vector (so `x1` precedes `x2`).
    fn display_order(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| match a.total_degree().cmp(&b.total_degree()) {
            Ordering::Equal => b.cmp(a),
            o => o,
        });
        v
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (j, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "x{}", j + 1)?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: Self) -> LaurentPolynomial {
        self.checked_add(rhs).expect("rank mismatch in Laurent addition")
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: Self) -> LaurentPolynomial {
        self.checked_sub(rhs).expect("rank mismatch in Laurent subtraction")
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        self.checked_mul(rhs).expect("rank mismatch in Laurent multiplication")
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl serde::Serialize for LaurentPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, n).unwrap()
    }

    fn x(n: usize, i: usize) -> LaurentPolynomial {
        LaurentPolynomial::variable(n, i)
    }

    #[test]
    fn additive_identity() {
        let a = &x(2, 0) + &x(2, 1);
        assert_eq!(&a + &LaurentPolynomial::zero(2), a);
    }

    #[test]
    fn inverse_monomial_cancels() {
        let inv = LaurentPolynomial::term(1, 1, Monomial::new(vec![-1]));
        assert!((&inv * &x(1, 0)).is_one());
    }

    #[test]
    fn product_of_binomials() {
        let one = LaurentPolynomial::one(2);
        let lhs = &(&one + &x(2, 1)) * &(&one + &x(2, 0));
        // term-by-term: 1*1 + 1*x1 + x2*1 + x2*x1
        let expected = LaurentPolynomial::from_terms(
            2,
            [(1, vec![0, 0]), (1, vec![1, 0]), (1, vec![0, 1]), (1, vec![1, 1])],
        );
        assert_eq!(lhs, expected);
        assert_eq!(lhs.to_string(), "1 + x1 + x2 + x1*x2");
    }

    #[test]
    fn rank_mismatch_rejected() {
        assert_eq!(
            x(1, 0).checked_add(&x(2, 0)),
            Err(LaurentError::RankMismatch { left: 1, right: 2 })
        );
        assert!(x(1, 0).divide_exact(&x(2, 0)).is_err());
    }

    #[test]
    fn monomial_division_shifts_exponents() {
        let q = p("1 + x2", 2).divide_exact(&x(2, 0)).unwrap();
        assert_eq!(q.to_string(), "x1^-1 + x1^-1*x2");
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x1^2 - x2^2", 2);
        let b = p("x1 - x2", 2);
        let q = a.divide_exact(&b).unwrap();
        assert_eq!(q, p("x1 + x2", 2));
        assert_eq!(&q * &b, a);
    }

    #[test]
    fn non_divisible_detected() {
        let err = p("1 + x1", 2).divide_exact(&p("1 + x2", 2)).unwrap_err();
        assert!(matches!(err, LaurentError::NotDivisible { .. }));
        // coefficient obstruction
        assert!(p("1 + x1", 1).divide_exact(&LaurentPolynomial::constant(1, 2)).is_err());
        assert_eq!(
            p("x1", 1).divide_exact(&LaurentPolynomial::zero(1)),
            Err(LaurentError::DivisionByZero)
        );
    }

    #[test]
    fn classification() {
        assert_eq!(LaurentPolynomial::zero(2).classify(), Shape::Zero);
        assert_eq!(
            p("3*x1^-2*x2", 2).classify(),
            Shape::Monomial { coefficient: BigInt::from(3), monomial: Monomial::new(vec![-2, 1]) }
        );
        assert_eq!(p("1 + x1", 2).classify(), Shape::Polynomial);
    }

    #[test]
    fn big_coefficients() {
        let f = p("x1 + 1", 1).pow(40);
        assert_eq!(f.num_terms(), 41);
        // C(40,20)
        let mid = f.coefficient(&Monomial::new(vec![20]));
        assert_eq!(mid.to_string(), "137846528820");
        let q = f.divide_exact(&p("x1 + 1", 1).pow(39)).unwrap();
        assert_eq!(q, p("1 + x1", 1));
    }

    #[test]
    fn display_signs() {
        assert_eq!(p("-2*x1 + 3 - x2^-1", 2).to_string(), "-x2^-1 + 3 - 2*x1");
        assert_eq!(LaurentPolynomial::zero(3).to_string(), "0");
        assert_eq!(p("-1", 1).to_string(), "-1");
    }

    #[test]
    fn embed_into_larger_ring() {
        let a = p("(1 + x2)/x1", 2);
        let b = a.embed(5, 2);
        assert_eq!(b.to_string(), "x3^-1 + x3^-1*x4");
        assert!(b.supported_in(2..4));
        assert!(!b.supported_in(0..3));
    }
}
