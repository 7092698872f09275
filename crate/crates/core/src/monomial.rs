//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector `x^a`, one `u32` per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn variable(nvars: usize, index: usize, exp: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = exp;
        m
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Product `x^a * x^b`; overflow is reported, never wrapped.
    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(
                a.checked_add(*b)
                    .ok_or_else(|| Error::ExponentOverflow(format!("{a} + {b}")))?,
            );
        }
        Ok(Monomial(out))
    }

    /// Product for exponents already known to be in range (engine hot path).
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Scales every exponent by `k` (used by the Frobenius map).
    pub fn checked_scale(&self, k: u32) -> Result<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for a in self.0.iter() {
            out.push(
                a.checked_mul(k)
                    .ok_or_else(|| Error::ExponentOverflow(format!("{a} * {k}")))?,
            );
        }
        Ok(Monomial(out))
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// If this monomial is a pure power `x_i^k` with k > 0, returns `(i, k)`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    pub(crate) fn insert_front(&self, count: usize) -> Monomial {
        let mut v: SmallVec<[u32; 6]> = SmallVec::from_elem(0, count);
        v.extend_from_slice(&self.0);
        Monomial(v)
    }

    pub(crate) fn push_back(&self, count: usize) -> Monomial {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat(0).take(count));
        Monomial(v)
    }

    pub(crate) fn select(&self, range: std::ops::Range<usize>) -> Monomial {
        Monomial(SmallVec::from_slice(&self.0[range]))
    }
}

/// A total, multiplicative well-order on monomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    /// Two grevlex blocks; anything involving the first `k` variables beats
    /// everything in the remaining variables.
    Elimination(usize),
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Elimination(k) => {
                let k = k.min(a.len());
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Grevlex => "grevlex".into(),
            MonomialOrder::Elimination(k) => format!("elim({k})"),
        }
    }

    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::Grevlex)
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[inline]
fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // smaller exponent in the last differing variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::Grevlex;
        // x^2 > xy > y^2 > xz > yz > z^2 in three variables
        let chain = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in chain.windows(2) {
            assert_eq!(
                o.cmp(&w[0], &w[1]),
                Ordering::Greater,
                "{:?} vs {:?}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn elimination_block_ranks_first_block_higher() {
        let o = MonomialOrder::Elimination(1);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn overflow_is_detected() {
        let a = m(&[u32::MAX, 0]);
        assert!(a.checked_mul(&m(&[1, 0])).is_err());
        assert!(m(&[1 << 20, 1]).checked_scale(1 << 12).is_err());
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..6, 3).prop_map(|v| Monomial::from_exponents(&v))
    }

    fn arb_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Lex),
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::Elimination(1)),
            Just(MonomialOrder::Elimination(2)),
        ]
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative_well_orders(a in arb_mono(), b in arb_mono(), c in arb_mono(), o in arb_order()) {
            let one = Monomial::one(3);
            prop_assert_ne!(o.cmp(&a, &one), Ordering::Less);
            let lhs = o.cmp(&a, &b);
            prop_assert_eq!(lhs, o.cmp(&a.mul_unchecked(&c), &b.mul_unchecked(&c)));
            prop_assert_eq!(lhs == Ordering::Equal, a == b);
            prop_assert_eq!(lhs.reverse(), o.cmp(&b, &a));
        }
    }
}
