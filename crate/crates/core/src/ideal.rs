//! Ideal calculus in `R = S/F`.
//!
//! Every ideal of a quotient context is represented by its preimage in the
//! ambient ring `S`, i.e. its generators together with the defining ideal.
//! Membership, equality, colon and colength all operate on those lifts.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::groebner::{buchberger_in, divide, GroebnerBasis};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{frobenius_q, Polynomial};
use crate::ring::{PolyRing, RingContext};

/// Order used for membership and colength.
pub const MEMBERSHIP_ORDER: MonomialOrder = MonomialOrder::Grevlex;

/// Cap on colon iterations in [`saturation`].
const MAX_SATURATION_STEPS: usize = 10_000;

/// An ideal of a [`RingContext`], with memoized reduced Groebner bases.
#[derive(Clone)]
pub struct IdealHandle(Arc<IdealInner>);

struct IdealInner {
    ctx: Arc<RingContext>,
    gens: Vec<Polynomial>,
    cache: RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl IdealHandle {
    pub fn new(ctx: &Arc<RingContext>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if !g.ring().same_as(ctx.ambient()) {
                return Err(Error::ContextMismatch);
            }
        }
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.to_ring(ctx.ambient()))
            .collect();
        Ok(Self::from_parts(ctx, gens))
    }

    fn from_parts(ctx: &Arc<RingContext>, gens: Vec<Polynomial>) -> Self {
        IdealHandle(Arc::new(IdealInner {
            ctx: Arc::clone(ctx),
            gens,
            cache: RwLock::new(HashMap::new()),
        }))
    }

    pub fn unit(ctx: &Arc<RingContext>) -> Self {
        Self::from_parts(ctx, vec![ctx.ambient().one()])
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Self::from_parts(ctx, Vec::new())
    }

    /// The homogeneous maximal ideal `m`, generated by all variables.
    pub fn maximal(ctx: &Arc<RingContext>) -> Self {
        Self::from_parts(ctx, ctx.ambient().variables_as_polys())
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.0.ctx
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.0.ctx.ambient()
    }

    /// Generators as given (without the defining ideal).
    pub fn generators(&self) -> &[Polynomial] {
        &self.0.gens
    }

    /// Generators of the preimage in `S`: the given ones followed by `F`.
    pub fn lifted_generators(&self) -> Vec<Polynomial> {
        let mut out = self.0.gens.clone();
        out.extend(self.0.ctx.defining_ideal().iter().cloned());
        out
    }

    /// Reduced Groebner basis of the lifted ideal in `order`, memoized.
    pub fn groebner(&self, order: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.0.cache.read().expect("cache poisoned").get(&order) {
            return Ok(Arc::clone(gb));
        }
        let ring = self.ring().with_order(order);
        let gens = self
            .lifted_generators()
            .iter()
            .map(|g| g.to_ring(&ring))
            .collect();
        let gb = Arc::new(buchberger_in(&ring, gens, self.0.ctx.limits())?);
        // concurrent fills compute the same canonical basis; first writer wins
        let mut cache = self.0.cache.write().expect("cache poisoned");
        Ok(Arc::clone(cache.entry(order).or_insert(gb)))
    }

    pub fn basis(&self) -> Result<Arc<GroebnerBasis>> {
        self.groebner(MEMBERSHIP_ORDER)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Ok(true);
        }
        Ok(self.basis()?.contains(f))
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.basis()?.is_unit())
    }

    /// Normal form in `R` modulo this ideal, in the ring's display order.
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        self.check_poly(f)?;
        Ok(self.basis()?.normal_form(f))
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        self.check_ideal(other)?;
        let gb = self.basis()?;
        Ok(other.generators().iter().all(|g| gb.contains(g)))
    }

    /// Equality as ideals of `R` (reduced bases coincide).
    pub fn same_ideal(&self, other: &IdealHandle) -> Result<bool> {
        self.check_ideal(other)?;
        Ok(self.basis()?.basis() == other.basis()?.basis())
    }

    fn check_poly(&self, f: &Polynomial) -> Result<()> {
        if !f.ring().variables().eq(self.ring().variables())
            || f.ring().field() != self.ring().field()
        {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    fn check_ideal(&self, other: &IdealHandle) -> Result<()> {
        if !self.context().same_as(other.context()) {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// A handle on the reduced basis (without the defining polynomials
    /// separated out), useful as a canonical generating set.
    pub fn canonical(&self) -> Result<IdealHandle> {
        let gb = self.basis()?;
        let gens = gb.basis().iter().map(|g| g.to_ring(self.ring())).collect();
        Ok(Self::from_parts(self.context(), gens))
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.0.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealHandle{self}")
    }
}

/// `f ∈ I` (in a quotient context: `f ∈ I + F` in `S`).
pub fn ideal_member(f: &Polynomial, ideal: &IdealHandle) -> Result<bool> {
    ideal.contains(f)
}

pub fn ideal_sum(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.check_ideal(b)?;
    let mut gens = a.generators().to_vec();
    gens.extend(b.generators().iter().cloned());
    Ok(IdealHandle::from_parts(a.context(), gens))
}

pub fn ideal_product(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.check_ideal(b)?;
    let mut gens = Vec::with_capacity(a.generators().len() * b.generators().len());
    for f in a.generators() {
        for g in b.generators() {
            gens.push(f * g);
        }
    }
    Ok(IdealHandle::from_parts(a.context(), gens))
}

/// `(t*A + (1-t)*B) ∩ S` for generator lists of the ambient ring.
fn intersect_gens(
    ctx: &RingContext,
    a: &[Polynomial],
    b: &[Polynomial],
) -> Result<Vec<Polynomial>> {
    let ring = ctx.ambient();
    let ext = ring.extend_front("t", 1, MonomialOrder::Elimination(1));
    let t = ext.var(0);
    let one_minus_t = &ext.one() - &t;
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for f in a {
        gens.push(&t * &f.embed_front(&ext, 1));
    }
    for g in b {
        gens.push(&one_minus_t * &g.embed_front(&ext, 1));
    }
    let gb = buchberger_in(&ext, gens, ctx.limits())?;
    Ok(gb
        .basis()
        .iter()
        .filter(|g| !g.involves(0))
        .map(|g| g.restrict_front(ring, 1))
        .collect())
}

pub fn ideal_intersect(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    a.check_ideal(b)?;
    if a.is_unit()? {
        return Ok(b.clone());
    }
    if b.is_unit()? {
        return Ok(a.clone());
    }
    let gens = intersect_gens(a.context(), &a.lifted_generators(), &b.lifted_generators())?;
    Ok(IdealHandle::from_parts(a.context(), gens))
}

/// `I : f = {g : g*f ∈ I}`, computed as `(I ∩ (f)) / f`.
pub fn ideal_colon(ideal: &IdealHandle, f: &Polynomial) -> Result<IdealHandle> {
    ideal.check_poly(f)?;
    let ctx = ideal.context();
    let f = f.to_ring(ctx.ambient());
    if IdealHandle::zero(ctx).contains(&f)? {
        return Err(Error::IllPosed(
            "colon by an element that is zero in the ring".into(),
        ));
    }
    if ideal.contains(&f)? {
        return Ok(IdealHandle::unit(ctx));
    }
    if f.is_constant() {
        return Ok(ideal.clone());
    }
    let inter = intersect_gens(ctx, &ideal.lifted_generators(), std::slice::from_ref(&f))?;
    let mut gens = Vec::with_capacity(inter.len());
    for h in &inter {
        let d = divide(h, std::slice::from_ref(&f), MonomialOrder::Grevlex)?;
        debug_assert!(d.remainder.is_zero(), "element of (f) not divisible by f");
        gens.push(d.cofactors.into_iter().next().unwrap());
    }
    Ok(IdealHandle::from_parts(ctx, gens))
}

/// `I : J`, as the intersection of the element colons over generators of `J`.
pub fn ideal_colon_ideal(ideal: &IdealHandle, by: &IdealHandle) -> Result<IdealHandle> {
    ideal.check_ideal(by)?;
    let zero = IdealHandle::zero(ideal.context());
    let mut acc = IdealHandle::unit(ideal.context());
    for g in by.generators() {
        if zero.contains(g)? {
            continue;
        }
        let c = ideal_colon(ideal, g)?;
        acc = ideal_intersect(&acc, &c)?;
    }
    Ok(acc)
}

/// `I : J^∞` and the number of colon steps taken before the chain stabilized.
pub fn saturation(ideal: &IdealHandle, by: &IdealHandle) -> Result<(IdealHandle, usize)> {
    ideal.check_ideal(by)?;
    let ctx = ideal.context();
    if by.is_unit()? {
        return Ok((ideal.clone(), 0));
    }
    if ideal.is_unit()? {
        return Ok((ideal.clone(), 0));
    }
    // m-primary ideal saturated by m: the chain reaches R after exactly
    // m_power_index(I) steps
    if by.same_ideal(&IdealHandle::maximal(ctx))? && is_m_primary(ideal)? {
        return Ok((IdealHandle::unit(ctx), m_power_index(ideal)? as usize));
    }
    let mut current = ideal.clone();
    for step in 0..MAX_SATURATION_STEPS {
        let next = ideal_colon_ideal(&current, by)?;
        if next.same_ideal(&current)? {
            return Ok((current, step));
        }
        current = next.canonical()?;
    }
    Err(Error::ResourceLimit(format!(
        "saturation did not stabilize in {MAX_SATURATION_STEPS} steps"
    )))
}

/// `I^[q]` with `q = p^e`.
#[derive(Clone, Debug)]
pub struct BracketPower {
    pub base: IdealHandle,
    pub e: u32,
    pub q: u32,
    pub handle: IdealHandle,
}

/// Frobenius bracket power: generated by the `q`-th powers of the generators;
/// in a quotient context `F` is appended unpowered.
pub fn bracket_power(ideal: &IdealHandle, e: u32) -> Result<BracketPower> {
    let q = frobenius_q(ideal.context().characteristic(), e)?;
    let gens = ideal
        .generators()
        .iter()
        .map(|g| g.frobenius_pow(e))
        .collect::<Result<Vec<_>>>()?;
    Ok(BracketPower {
        base: ideal.clone(),
        e,
        q,
        handle: IdealHandle::from_parts(ideal.context(), gens),
    })
}

/// `f ∈ √I` via Rabinowitsch: `1 ∈ I + (t*f - 1)`.
pub fn radical_member(f: &Polynomial, ideal: &IdealHandle) -> Result<bool> {
    ideal.check_poly(f)?;
    if ideal.contains(f)? {
        return Ok(true);
    }
    let ctx = ideal.context();
    let ring = ctx.ambient().with_order(MonomialOrder::Grevlex);
    let ext = ring.extend_back("t", 1, MonomialOrder::Grevlex);
    let n = ring.nvars();
    let mut gens: Vec<Polynomial> = ideal
        .lifted_generators()
        .iter()
        .map(|g| g.to_ring(&ring).embed_back(&ext, 1))
        .collect();
    let tf = &ext.var(n) * &f.to_ring(&ring).embed_back(&ext, 1);
    gens.push(&tf - &ext.one());
    Ok(buchberger_in(&ext, gens, ctx.limits())?.is_unit())
}

/// Every variable has a pure power among the leading monomials.
pub fn is_zero_dimensional(ideal: &IdealHandle) -> Result<bool> {
    let gb = ideal.basis()?;
    Ok(staircase_bounds(&gb.leading_monomials(), ideal.ring().nvars()).is_some())
}

fn staircase_bounds(leads: &[Monomial], n: usize) -> Option<Vec<u32>> {
    let mut bounds = vec![None; n];
    for m in leads {
        if m.is_one() {
            return Some(vec![0; n]);
        }
        if let Some((i, k)) = m.pure_power() {
            bounds[i] = Some(bounds[i].map_or(k, |b: u32| b.min(k)));
        }
    }
    bounds.into_iter().collect()
}

/// Count and maximum degree of the standard monomials of a zero-dimensional
/// leading-term ideal.
fn staircase_stats(leads: &[Vec<u32>], width: usize) -> (u128, Option<u64>) {
    if leads.iter().any(|l| l.iter().all(|&e| e == 0)) {
        return (0, None);
    }
    if width == 0 {
        return (1, Some(0));
    }
    // pure power of the first variable bounds its exponent
    let bound = leads
        .iter()
        .filter(|l| l[1..].iter().all(|&e| e == 0))
        .map(|l| l[0])
        .min()
        .expect("zero-dimensional staircase lacks a pure power");
    let mut cuts: Vec<u32> = leads.iter().map(|l| l[0]).filter(|&a| a < bound).collect();
    cuts.push(0);
    cuts.push(bound);
    cuts.sort_unstable();
    cuts.dedup();
    let mut count = 0u128;
    let mut max_deg: Option<u64> = None;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let sub: Vec<Vec<u32>> = leads
            .iter()
            .filter(|l| l[0] <= lo)
            .map(|l| l[1..].to_vec())
            .collect();
        let (c, d) = staircase_stats(&sub, width - 1);
        count += c * (hi - lo) as u128;
        if let Some(d) = d {
            let cand = d + (hi - 1) as u64;
            max_deg = Some(max_deg.map_or(cand, |m| m.max(cand)));
        }
    }
    (count, max_deg)
}

fn zero_dim_stats(ideal: &IdealHandle) -> Result<(u128, Option<u64>)> {
    let gb = ideal.basis()?;
    let leads = gb.leading_monomials();
    if staircase_bounds(&leads, ideal.ring().nvars()).is_none() {
        return Err(Error::NotZeroDimensional);
    }
    let leads: Vec<Vec<u32>> = leads.iter().map(|m| m.exponents().to_vec()).collect();
    Ok(staircase_stats(&leads, ideal.ring().nvars()))
}

/// `λ(R/I)`: the number of standard monomials, when finite.
pub fn colength(ideal: &IdealHandle) -> Result<u128> {
    Ok(zero_dim_stats(ideal)?.0)
}

/// Zero-dimensional with every variable nilpotent modulo `I` (unit excluded).
pub fn is_m_primary(ideal: &IdealHandle) -> Result<bool> {
    if ideal.is_unit()? || !is_zero_dimensional(ideal)? {
        return Ok(false);
    }
    let lifted = ideal.lifted_generators();
    if lifted.iter().all(|g| g.is_homogeneous()) {
        // a homogeneous zero-dimensional ideal only vanishes at the origin
        return Ok(true);
    }
    for x in ideal.ring().variables_as_polys() {
        if !radical_member(&x, ideal)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal `N` with `m^N ⊆ I`: one more than the top degree of the staircase.
pub fn m_power_index(ideal: &IdealHandle) -> Result<u64> {
    if ideal.is_unit()? {
        return Ok(0);
    }
    if !is_m_primary(ideal)? {
        return Err(Error::NotMPrimary);
    }
    let (_, max_deg) = zero_dim_stats(ideal)?;
    Ok(max_deg.expect("proper ideal has a nonempty staircase") + 1)
}

/// Eliminates the listed variables: returns `I ∩ F_p[remaining variables]`,
/// still expressed in the context's ring.
pub fn eliminate(ideal: &IdealHandle, vars: &[usize]) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if vars.iter().any(|&v| v >= n) {
        return Err(Error::IllPosed("variable index out of range".into()));
    }
    if vars.is_empty() {
        return Ok(ideal.clone());
    }
    let mut perm: Vec<usize> = vars.to_vec();
    perm.sort_unstable();
    perm.dedup();
    let k = perm.len();
    perm.extend((0..n).filter(|i| !vars.contains(i)));
    let names: Vec<String> = perm.iter().map(|&i| ring.variables()[i].clone()).collect();
    let order = if k == n {
        MonomialOrder::Lex
    } else {
        MonomialOrder::Elimination(k)
    };
    let permuted = PolyRing::new(ring.field(), &names, order)?;
    let to_perm = |f: &Polynomial| {
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| {
                let ex: Vec<u32> = perm.iter().map(|&i| m.exponents()[i]).collect();
                (Monomial::from_exponents(&ex), *c)
            })
            .collect();
        Polynomial::from_terms(&permuted, terms)
    };
    let from_perm = |f: &Polynomial| {
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut ex = vec![0u32; n];
                for (slot, &i) in perm.iter().enumerate() {
                    ex[i] = m.exponents()[slot];
                }
                (Monomial::from_exponents(&ex), *c)
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    };
    let gens = ideal.lifted_generators().iter().map(to_perm).collect();
    let gb = buchberger_in(&permuted, gens, ideal.context().limits())?;
    let kept = gb
        .basis()
        .iter()
        .filter(|g| (0..k).all(|i| !g.involves(i)))
        .map(from_perm)
        .collect();
    Ok(IdealHandle::from_parts(ideal.context(), kept))
}
