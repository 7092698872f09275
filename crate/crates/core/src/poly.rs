//! Sparse multivariate polynomials over F_p.
//!
//! Terms are kept sorted in decreasing order under the ring's monomial order,
//! with no zero coefficients and no repeated exponent vectors. The zero
//! polynomial is the empty term list.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::monomial::{Monomial, MonomialOrder};
use crate::ring::PolyRing;

pub type Term = (Monomial, Coeff);

#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

/// Selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Context-checked ring arithmetic.
pub fn poly_arith(f: &Polynomial, g: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    if !f.ring.same_as(&g.ring) {
        return Err(Error::ContextMismatch);
    }
    Ok(match op {
        ArithOp::Add => f + g,
        ArithOp::Sub => f - g,
        ArithOp::Mul => f * g,
    })
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self {
            ring: Arc::clone(ring),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        let c = ring.field().from_u64(c as u64);
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Coeff) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let c = ring.field().from_u64(c as u64);
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Self {
            ring: Arc::clone(ring),
            terms,
        }
    }

    /// Normalizes an arbitrary term list: sorts, merges duplicates, drops zeros.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<Term>) -> Self {
        let order = ring.order();
        let field = ring.field();
        for t in terms.iter_mut() {
            t.1 = field.from_u64(t.1 as u64);
        }
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Self {
            ring: Arc::clone(ring),
            terms: out,
        }
    }

    /// Builds from terms already sorted and normalized for `ring`.
    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Self {
            ring: Arc::clone(ring),
            terms,
        }
    }

    #[inline]
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms[0].1 == 1
    }

    #[inline]
    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    #[inline]
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Coeff {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => {
                let d = t.0.degree();
                self.terms.iter().all(|s| s.0.degree() == d)
            }
        }
    }

    /// Whether the variable `index` appears in any term.
    pub fn involves(&self, index: usize) -> bool {
        self.terms.iter().any(|t| t.0.exponents()[index] > 0)
    }

    pub fn scale(&self, c: Coeff) -> Self {
        let field = self.ring.field();
        let c = field.from_u64(c as u64);
        if c == 0 {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), field.mul(*a, c)))
            .collect();
        Self {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, c)) => self.scale(self.ring.field().inv(c)),
        }
    }

    /// Multiplies by `c * m`. Ordering is preserved because orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: Coeff) -> Self {
        let field = self.ring.field();
        if c == 0 {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(a, b)| (a.mul_unchecked(m), field.mul(*b, c)))
            .collect();
        Self {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    /// Checked version of [`mul_term`](Self::mul_term).
    pub fn checked_mul_term(&self, m: &Monomial, c: Coeff) -> Result<Self> {
        let field = self.ring.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        if c != 0 {
            for (a, b) in &self.terms {
                terms.push((a.checked_mul(m)?, field.mul(*b, c)));
            }
        }
        Ok(Self {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    /// `self - c * m * g`, merged in one pass.
    pub(crate) fn sub_scaled_shift(&self, c: Coeff, m: &Monomial, g: &Polynomial) -> Polynomial {
        let field = self.ring.field();
        let terms = merge_sub_shift(&self.terms, c, m, &g.terms, field, self.ring.order());
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(&self.ring, 1);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f^(p^e)`: every exponent vector is scaled by `p^e`; coefficients of F_p
    /// are fixed by Frobenius, so the term count is unchanged.
    pub fn frobenius_pow(&self, e: u32) -> Result<Self> {
        let q = frobenius_q(self.ring.characteristic(), e)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.checked_scale(q)?, *c));
        }
        // scaling preserves every supported order
        Ok(Self {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    /// Exact square root `d` with `d * d == self`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let field = self.ring.field();
        let halve = |m: &Monomial| -> Option<Monomial> {
            let ex: Option<Vec<u32>> = m
                .exponents()
                .iter()
                .map(|&e| (e % 2 == 0).then_some(e / 2))
                .collect();
            ex.map(|ex| Monomial::from_exponents(&ex))
        };
        if self.is_zero() {
            return Some(self.clone());
        }
        if field.characteristic() == 2 {
            let terms = self
                .terms
                .iter()
                .map(|(m, c)| halve(m).map(|h| (h, *c)))
                .collect::<Option<Vec<_>>>()?;
            return Some(Self::from_terms(&self.ring, terms));
        }
        let grevlex = self.ring.with_order(MonomialOrder::Grevlex);
        let target = self.to_ring(&grevlex);
        let (lm, lc) = target.leading_term()?.clone();
        let lead = (halve(&lm)?, field.sqrt(lc)?);
        let two_lead_inv = field.inv(field.mul(2, lead.1));
        let max_deg = lead.0.degree();
        let mut root = Polynomial::monomial(&grevlex, lead.0.clone(), lead.1);
        loop {
            let rest = &target - &(&root * &root);
            let Some((rm, rc)) = rest.leading_term().cloned() else {
                break;
            };
            if !lead.0.divides(&rm) {
                return None;
            }
            let t = lead.0.quotient_of(&rm);
            // each new term is strictly below the lead, so degrees stay bounded
            if t.degree() > max_deg || MonomialOrder::Grevlex.cmp(&t, &lead.0) != Ordering::Less {
                return None;
            }
            let next = Polynomial::monomial(&grevlex, t, field.mul(rc, two_lead_inv));
            root = &root + &next;
        }
        Some(root.to_ring(&self.ring))
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Self {
        let field = self.ring.field();
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponents()[index];
            if e == 0 {
                continue;
            }
            let c2 = field.mul(*c, field.from_u64(e as u64));
            if c2 == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[index] -= 1;
            terms.push((Monomial::from_exponents(&ex), c2));
        }
        Self::from_terms(&self.ring, terms)
    }

    /// Substitutes the polynomial `value` (same ring) for variable `index`.
    pub fn substitute(&self, index: usize, value: &Polynomial) -> Self {
        assert!(self.ring.same_as(&value.ring), "substitute: ring mismatch");
        let mut acc = Polynomial::zero(&self.ring);
        let mut powers: Vec<Polynomial> = vec![Polynomial::constant(&self.ring, 1)];
        for (m, c) in &self.terms {
            let e = m.exponents()[index] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut ex = m.exponents().to_vec();
            ex[index] = 0;
            acc = &acc + &powers[e].mul_term(&Monomial::from_exponents(&ex), *c);
        }
        acc
    }

    /// Re-expresses the polynomial in a ring with identical field and
    /// variables but possibly another order.
    pub fn to_ring(&self, ring: &Arc<PolyRing>) -> Self {
        if self.ring.same_as(ring) {
            return Self {
                ring: Arc::clone(ring),
                terms: self.terms.clone(),
            };
        }
        assert_eq!(
            self.ring.variables(),
            ring.variables(),
            "to_ring: variable mismatch"
        );
        let mut terms = self.terms.clone();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Self {
            ring: Arc::clone(ring),
            terms,
        }
    }

    /// Embeds into `ring`, whose variables are `count` fresh ones followed by ours.
    pub(crate) fn embed_front(&self, ring: &Arc<PolyRing>, count: usize) -> Self {
        debug_assert_eq!(ring.nvars(), self.ring.nvars() + count);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.insert_front(count), *c))
            .collect();
        Self::from_terms(ring, terms)
    }

    /// Embeds into `ring`, whose variables are ours followed by `count` fresh ones.
    pub(crate) fn embed_back(&self, ring: &Arc<PolyRing>, count: usize) -> Self {
        debug_assert_eq!(ring.nvars(), self.ring.nvars() + count);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.push_back(count), *c))
            .collect();
        Self::from_terms(ring, terms)
    }

    /// Drops the first `count` variables, which must not occur.
    pub(crate) fn restrict_front(&self, ring: &Arc<PolyRing>, count: usize) -> Self {
        let n = self.ring.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.exponents()[..count].iter().all(|&e| e == 0));
                (m.select(count..n), *c)
            })
            .collect();
        Self::from_terms(ring, terms)
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let field = self.ring.field();
        let order = self.ring.order();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: Coeff| if negate { field.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = field.add(a[i].1, sign(b[j].1));
                    if v != 0 {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(*c))));
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms: out,
        }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(m, *c);
        }
        let field = self.ring.field();
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                terms.push((m1.mul_unchecked(m2), field.mul(*c1, *c2)));
            }
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    fn assert_same_ring(&self, other: &Polynomial) {
        assert!(
            self.ring.same_as(&other.ring),
            "polynomials from different rings: {} vs {}",
            self.ring,
            other.ring
        );
    }
}

/// `a - c * m * b` for descending term lists.
pub(crate) fn merge_sub_shift(
    a: &[Term],
    c: Coeff,
    m: &Monomial,
    b: &[Term],
    field: crate::field::PrimeField,
    order: crate::monomial::MonomialOrder,
) -> Vec<Term> {
    let neg = field.neg(c);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let mut pending: Option<Term> = None;
    loop {
        if pending.is_none() && j < b.len() {
            pending = Some((b[j].0.mul_unchecked(m), field.mul(b[j].1, neg)));
            j += 1;
        }
        let Some(s) = pending.as_ref() else { break };
        if i >= a.len() {
            out.push(pending.take().unwrap());
            continue;
        }
        match order.cmp(&a[i].0, &s.0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => out.push(pending.take().unwrap()),
            Ordering::Equal => {
                let v = field.add(a[i].1, s.1);
                if v != 0 {
                    out.push((pending.take().unwrap().0, v));
                } else {
                    pending = None;
                }
                i += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out
}

/// `p^e` as a `u32`, or an overflow error.
pub fn frobenius_q(p: u32, e: u32) -> Result<u32> {
    p.checked_pow(e)
        .ok_or_else(|| Error::ExponentOverflow(format!("{p}^{e} does not fit in 32 bits")))
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.variables() == other.ring.variables()
            && self.ring.field() == other.ring.field()
            && if self.ring.order() == other.ring.order() {
                self.terms == other.terms
            } else {
                self.terms == other.to_ring(&self.ring).terms
            }
    }
}

impl Eq for Polynomial {}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        self.product(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let field = self.ring.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), field.neg(*c)))
            .collect();
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let vars = self.ring.variables();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_of_polynomials() {
        for p in [2u64, 5, 7] {
            let r = PolyRing::new(PrimeField::new(p).unwrap(), &["x", "y"], MonomialOrder::Lex)
                .unwrap();
            let d = crate::parse::parse_poly("x^2*y + 3*x + y^3 + 1", &r).unwrap();
            let c = &d * &d;
            let root = c.sqrt().expect("square has a root");
            assert_eq!(&root * &root, c);
            let not_square = crate::parse::parse_poly("x^2 + y", &r).unwrap();
            assert!(not_square.sqrt().is_none());
        }
        let r7 =
            PolyRing::new(PrimeField::new(7).unwrap(), &["u"], MonomialOrder::Grevlex).unwrap();
        // 3 is not a square mod 7
        assert!(crate::parse::parse_poly("3*u^2", &r7)
            .unwrap()
            .sqrt()
            .is_none());
    }
    use crate::field::PrimeField;
    use crate::monomial::MonomialOrder;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(PrimeField::new(p).unwrap(), vars, MonomialOrder::Grevlex).unwrap()
    }

    fn parse(r: &Arc<PolyRing>, s: &str) -> Polynomial {
        crate::parse::parse_poly(s, r).unwrap()
    }

    #[test]
    fn additive_inverse() {
        let r = ring(7, &["x", "y"]);
        let y6 = parse(&r, "6*y");
        assert_eq!(&parse(&r, "x+y") + &y6, parse(&r, "x"));
    }

    #[test]
    fn annihilator_and_difference_of_squares() {
        let r = ring(5, &["x", "y"]);
        let f = parse(&r, "x+y");
        assert!((&f * &r.zero()).is_zero());
        let g = &f * &parse(&r, "x-y");
        assert_eq!(g.to_string(), "x^2 + 4*y^2");
    }

    #[test]
    fn frobenius_examples() {
        let r2 = ring(2, &["x", "y"]);
        assert_eq!(
            parse(&r2, "x+y").frobenius_pow(1).unwrap().to_string(),
            "x^2 + y^2"
        );
        let r5 = ring(5, &["x", "y"]);
        assert_eq!(
            parse(&r5, "3*x^2*y").frobenius_pow(1).unwrap().to_string(),
            "3*x^10*y^5"
        );
        assert!(r5.zero().frobenius_pow(3).unwrap().is_zero());
    }

    #[test]
    fn frobenius_overflow_is_an_error() {
        let r = ring(7, &["x"]);
        let f = parse(&r, "x^100000");
        assert!(matches!(
            f.frobenius_pow(6),
            Err(Error::ExponentOverflow(_))
        ));
        assert!(matches!(
            f.frobenius_pow(40),
            Err(Error::ExponentOverflow(_))
        ));
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = ring(5, &["x", "y"]);
        let b = ring(7, &["x", "y"]);
        let err = poly_arith(&a.var(0), &b.var(0), ArithOp::Add).unwrap_err();
        assert_eq!(err, Error::ContextMismatch);
    }

    #[test]
    fn derivative_in_char_p_drops_multiples_of_p() {
        let r = ring(7, &["x", "y"]);
        let f = parse(&r, "x^7 + x^2*y");
        assert_eq!(f.derivative(0).to_string(), "2*x*y");
    }

    #[test]
    fn substitute_variable() {
        let r = ring(5, &["x", "y"]);
        let f = parse(&r, "x^2 + y");
        let g = f.substitute(0, &parse(&r, "y+1"));
        assert_eq!(g, parse(&r, "y^2 + 3*y + 1"));
    }
}
