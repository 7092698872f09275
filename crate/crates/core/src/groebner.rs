//! Buchberger's algorithm, reduced Groebner bases and multivariate division.
//!
//! Pairs are selected by the normal strategy (smallest lcm, graded by total
//! degree first) and pruned with the Gebauer–Möller installation of
//! Buchberger's product and chain criteria. The same driver can track, for
//! every basis element, its expression in the input generators; [`lift`] uses
//! that to produce explicit ideal-membership cofactors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Coeff, PrimeField};
use crate::limits::{check_deadline, GbLimits};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{merge_sub_shift, Polynomial, Term};
use crate::ring::PolyRing;

/// A Groebner basis in a fixed monomial order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    basis: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    /// The ring the basis lives in; its order is the basis order.
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect()
    }

    /// Normal form of `f` (any order over the same variables); the result is
    /// expressed in `f`'s ring.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let g = f.to_ring(&self.ring);
        let table = LeadTable::new(&self.basis);
        let r = reduce(
            g.into_terms(),
            &self.basis,
            &table,
            None,
            self.ring.field(),
            self.ring.order(),
        )
        .expect("untracked reduction cannot fail");
        Polynomial::from_sorted_terms(&self.ring, r).to_ring(f.ring())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.basis == other.basis
    }
}

/// `dividend = sum(cofactors[i] * divisors[i]) + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult {
    pub cofactors: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Leading monomials with a cheap support mask used to skip divisibility tests.
struct LeadTable {
    entries: Vec<(Monomial, u64)>,
}

fn support_mask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            mask |= 1 << (i % 64);
        }
    }
    mask
}

impl LeadTable {
    fn new(basis: &[Polynomial]) -> Self {
        let entries = basis
            .iter()
            .map(|g| {
                let m = g
                    .leading_monomial()
                    .expect("basis elements are nonzero")
                    .clone();
                let mask = support_mask(&m);
                (m, mask)
            })
            .collect();
        Self { entries }
    }

    fn push(&mut self, m: Monomial) {
        let mask = support_mask(&m);
        self.entries.push((m, mask));
    }

    /// First index (in insertion order) among `active` whose lead divides `m`.
    #[inline]
    fn find_divisor(&self, m: &Monomial, active: Option<&[bool]>) -> Option<usize> {
        let mm = support_mask(m);
        self.entries.iter().enumerate().position(|(i, (lt, mask))| {
            active.is_none_or(|a| a[i]) && mask & !mm == 0 && lt.divides(m)
        })
    }
}

/// Cofactor bookkeeping while reducing.
struct Tracking<'a> {
    reprs: &'a [Vec<Polynomial>],
    acc: Vec<Polynomial>,
}

/// Full reduction of `p` (descending terms) by monic `basis`.
fn reduce(
    mut p: Vec<Term>,
    basis: &[Polynomial],
    table: &LeadTable,
    mut tracking: Option<&mut Tracking<'_>>,
    field: PrimeField,
    order: MonomialOrder,
) -> Result<Vec<Term>> {
    reduce_active(
        &mut p,
        basis,
        table,
        None,
        tracking.as_deref_mut(),
        field,
        order,
    )
}

fn reduce_active(
    p: &mut Vec<Term>,
    basis: &[Polynomial],
    table: &LeadTable,
    active: Option<&[bool]>,
    mut tracking: Option<&mut Tracking<'_>>,
    field: PrimeField,
    order: MonomialOrder,
) -> Result<Vec<Term>> {
    let mut remainder: Vec<Term> = Vec::new();
    let mut start = 0usize;
    let mut steps = 0usize;
    while start < p.len() {
        let (m, c) = (&p[start].0, p[start].1);
        match table.find_divisor(m, active) {
            Some(j) => {
                let g = &basis[j];
                let lc = g.leading_coeff();
                let c = if lc == 1 {
                    c
                } else {
                    field.mul(c, field.inv(lc))
                };
                let shift = table.entries[j].0.quotient_of(m);
                if let Some(t) = tracking.as_deref_mut() {
                    for (acc, r) in t.acc.iter_mut().zip(t.reprs[j].iter()) {
                        if !r.is_zero() {
                            *acc = acc.sub_scaled_shift(c, &shift, r);
                        }
                    }
                }
                *p = merge_sub_shift(&p[start..], c, &shift, g.terms(), field, order);
                start = 0;
                steps += 1;
                if steps % 256 == 0 {
                    check_deadline()?;
                }
            }
            None => {
                remainder.push(p[start].clone());
                start += 1;
            }
        }
    }
    Ok(remainder)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    degree: u64,
}

fn select_pair(pairs: &[Pair], order: MonomialOrder) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let better = match a.degree.cmp(&b.degree) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => order.cmp(&a.lcm, &b.lcm) == std::cmp::Ordering::Less,
        };
        if better {
            best = k;
        }
    }
    best
}

/// Gebauer–Möller update after inserting element `h`.
fn update_pairs(table: &LeadTable, active: &mut [bool], pairs: &mut Vec<Pair>, h: usize) {
    let lt_h = &table.entries[h].0;
    // candidate pairs (g, h)
    let mut cands: Vec<(Pair, bool)> = (0..h)
        .filter(|&g| active[g])
        .map(|g| {
            let lcm = table.entries[g].0.lcm(lt_h);
            let degree = lcm.degree();
            let coprime = table.entries[g].0.is_coprime(lt_h);
            (
                Pair {
                    i: g,
                    j: h,
                    lcm,
                    degree,
                },
                coprime,
            )
        })
        .collect();

    // chain criterion among the new pairs: drop those whose lcm is a proper
    // multiple of another candidate's lcm
    let keep: Vec<bool> = (0..cands.len())
        .map(|a| {
            !cands.iter().enumerate().any(|(b, other)| {
                b != a && other.0.lcm != cands[a].0.lcm && other.0.lcm.divides(&cands[a].0.lcm)
            })
        })
        .collect();
    let mut filtered: Vec<(Pair, bool)> = cands
        .drain(..)
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(c, _)| c)
        .collect();

    // among equal lcms keep one; if any of them is coprime, drop the whole class
    let mut new_pairs: Vec<Pair> = Vec::new();
    let mut used = vec![false; filtered.len()];
    for a in 0..filtered.len() {
        if used[a] {
            continue;
        }
        let mut any_coprime = filtered[a].1;
        for b in a + 1..filtered.len() {
            if !used[b] && filtered[b].0.lcm == filtered[a].0.lcm {
                used[b] = true;
                any_coprime |= filtered[b].1;
            }
        }
        if !any_coprime {
            new_pairs.push(filtered[a].0.clone());
        }
    }
    filtered.clear();

    // chain criterion on old pairs
    pairs.retain(|pr| {
        if !lt_h.divides(&pr.lcm) {
            return true;
        }
        let li = table.entries[pr.i].0.lcm(lt_h);
        let lj = table.entries[pr.j].0.lcm(lt_h);
        li == pr.lcm || lj == pr.lcm
    });
    pairs.extend(new_pairs);

    for g in 0..h {
        if active[g] && lt_h.divides(&table.entries[g].0) {
            active[g] = false;
        }
    }
}

struct RawBasis {
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    reprs: Option<Vec<Vec<Polynomial>>>,
}

/// Runs Buchberger on `gens` (already in the target ring, nonzero).
fn run_buchberger(
    ring: &Arc<PolyRing>,
    gens: Vec<Polynomial>,
    track: bool,
    limits: &GbLimits,
) -> Result<RawBasis> {
    let field = ring.field();
    let order = ring.order();
    let m = gens.len();
    let mut polys: Vec<Polynomial> = Vec::new();
    let mut reprs: Vec<Vec<Polynomial>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut table = LeadTable {
        entries: Vec::new(),
    };
    let mut pairs: Vec<Pair> = Vec::new();

    let unit_vector = |k: usize, c: Coeff| -> Vec<Polynomial> {
        (0..m)
            .map(|i| {
                if i == k {
                    Polynomial::constant(ring, c)
                } else {
                    Polynomial::zero(ring)
                }
            })
            .collect()
    };

    // insert generators one by one, reducing each against what is present
    let mut queue: Vec<(Polynomial, Option<Vec<Polynomial>>)> = gens
        .into_iter()
        .enumerate()
        .map(|(k, g)| (g, if track { Some(unit_vector(k, 1)) } else { None }))
        .collect();
    queue.reverse();

    let insert = |h_terms: Vec<Term>,
                  repr: Option<Vec<Polynomial>>,
                  polys: &mut Vec<Polynomial>,
                  reprs: &mut Vec<Vec<Polynomial>>,
                  active: &mut Vec<bool>,
                  table: &mut LeadTable,
                  pairs: &mut Vec<Pair>|
     -> Result<bool> {
        let h = Polynomial::from_sorted_terms(ring, h_terms);
        let lc = h.leading_coeff();
        let inv = field.inv(lc);
        let h = h.scale(inv);
        if h.total_degree() > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "basis element of degree {} exceeds the cap {}",
                h.total_degree(),
                limits.max_degree
            )));
        }
        if polys.len() >= limits.max_basis {
            return Err(Error::ResourceLimit(format!(
                "basis grew beyond {} elements",
                limits.max_basis
            )));
        }
        let is_unit = h.is_constant();
        table.push(h.leading_monomial().unwrap().clone());
        polys.push(h);
        if let Some(r) = repr {
            reprs.push(r.iter().map(|p| p.scale(inv)).collect());
        }
        active.push(true);
        let idx = polys.len() - 1;
        update_pairs(table, active, pairs, idx);
        Ok(is_unit)
    };

    while let Some((g, repr)) = queue.pop() {
        check_deadline()?;
        let mut tracking = repr.map(|acc| Tracking { reprs: &reprs, acc });
        let mut p = g.into_terms();
        let reduced = reduce_active(
            &mut p,
            &polys,
            &table,
            Some(&active),
            tracking.as_mut(),
            field,
            order,
        )?;
        if reduced.is_empty() {
            continue;
        }
        let repr = tracking.map(|t| t.acc);
        if insert(
            reduced,
            repr,
            &mut polys,
            &mut reprs,
            &mut active,
            &mut table,
            &mut pairs,
        )? {
            return Ok(unit_basis(
                polys,
                active,
                if track { Some(reprs) } else { None },
            ));
        }
    }

    while !pairs.is_empty() {
        check_deadline()?;
        let k = select_pair(&pairs, order);
        let pair = pairs.swap_remove(k);
        let (gi, gj) = (&polys[pair.i], &polys[pair.j]);
        let si = table.entries[pair.i].0.quotient_of(&pair.lcm);
        let sj = table.entries[pair.j].0.quotient_of(&pair.lcm);
        // both monic: S = si*gi - sj*gj; leading terms cancel
        let s_terms = merge_sub_shift(
            &gi.mul_term(&si, 1).terms()[1..],
            1,
            &sj,
            &gj.terms()[1..],
            field,
            order,
        );
        let mut tracking = if track {
            let acc: Vec<Polynomial> = reprs[pair.i]
                .iter()
                .zip(reprs[pair.j].iter())
                .map(|(a, b)| &a.mul_term(&si, 1) - &b.mul_term(&sj, 1))
                .collect();
            Some(Tracking { reprs: &reprs, acc })
        } else {
            None
        };
        let mut p = s_terms;
        let reduced = reduce_active(
            &mut p,
            &polys,
            &table,
            Some(&active),
            tracking.as_mut(),
            field,
            order,
        )?;
        if reduced.is_empty() {
            continue;
        }
        let repr = tracking.map(|t| t.acc);
        if insert(
            reduced,
            repr,
            &mut polys,
            &mut reprs,
            &mut active,
            &mut table,
            &mut pairs,
        )? {
            return Ok(unit_basis(
                polys,
                active,
                if track { Some(reprs) } else { None },
            ));
        }
    }

    Ok(RawBasis {
        polys,
        active,
        reprs: if track { Some(reprs) } else { None },
    })
}

fn unit_basis(
    polys: Vec<Polynomial>,
    _active: Vec<bool>,
    reprs: Option<Vec<Vec<Polynomial>>>,
) -> RawBasis {
    let last = polys.len() - 1;
    let mut active = vec![false; polys.len()];
    active[last] = true;
    RawBasis {
        polys,
        active,
        reprs,
    }
}

fn target_ring_gens(
    gens: &[Polynomial],
    order: MonomialOrder,
) -> Result<(Arc<PolyRing>, Vec<Polynomial>)> {
    let first = gens
        .first()
        .ok_or_else(|| Error::IllPosed("empty generator list has no ring".into()))?;
    if gens.iter().any(|g| {
        !g.ring().variables().eq(first.ring().variables())
            || g.ring().field() != first.ring().field()
    }) {
        return Err(Error::ContextMismatch);
    }
    let ring = first.ring().with_order(order);
    Ok((
        Arc::clone(&ring),
        gens.iter().map(|g| g.to_ring(&ring)).collect(),
    ))
}

/// The reduced Groebner basis of the ideal generated by `gens` in `order`.
pub fn buchberger(
    gens: &[Polynomial],
    order: MonomialOrder,
    limits: &GbLimits,
) -> Result<GroebnerBasis> {
    let (ring, gens) = target_ring_gens(gens, order)?;
    buchberger_in(&ring, gens, limits)
}

pub(crate) fn buchberger_in(
    ring: &Arc<PolyRing>,
    gens: Vec<Polynomial>,
    limits: &GbLimits,
) -> Result<GroebnerBasis> {
    let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(GroebnerBasis {
            ring: Arc::clone(ring),
            basis: Vec::new(),
            reduced: true,
        });
    }
    let raw = run_buchberger(ring, gens, false, limits)?;
    let minimal: Vec<Polynomial> = raw
        .polys
        .into_iter()
        .zip(raw.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    Ok(GroebnerBasis {
        ring: Arc::clone(ring),
        basis: interreduce(ring, minimal),
        reduced: true,
    })
}

/// Turns a minimal basis (distinct, mutually non-dividing monic leads) into
/// the reduced basis, sorted by increasing leading monomial.
fn interreduce(ring: &Arc<PolyRing>, mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let order = ring.order();
    basis.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let field = ring.field();
    let mut out: Vec<Polynomial> = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<Polynomial> = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, g)| g.clone())
            .collect();
        let table = LeadTable::new(&others);
        let g = &basis[k];
        let head = g.terms()[0].clone();
        let tail = g.terms()[1..].to_vec();
        let mut reduced_tail =
            reduce(tail, &others, &table, None, field, order).expect("untracked");
        let mut terms = Vec::with_capacity(reduced_tail.len() + 1);
        terms.push(head);
        terms.append(&mut reduced_tail);
        out.push(Polynomial::from_sorted_terms(ring, terms));
    }
    out
}

/// Expresses `f` as a combination of `gens` when `f` lies in their ideal.
///
/// Returns `Ok(None)` for non-members. The cofactors are in `f`'s ring.
pub fn lift(
    f: &Polynomial,
    gens: &[Polynomial],
    order: MonomialOrder,
    limits: &GbLimits,
) -> Result<Option<Vec<Polynomial>>> {
    let back = Arc::clone(f.ring());
    if gens.iter().any(|g| !g.ring().same_as(&back)) {
        return Err(Error::ContextMismatch);
    }
    let ring = back.with_order(order);
    let nonzero: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].is_zero()).collect();
    let mut cof = vec![Polynomial::zero(&back); gens.len()];
    if f.is_zero() {
        return Ok(Some(cof));
    }
    if nonzero.is_empty() {
        return Ok(None);
    }
    let inputs: Vec<Polynomial> = nonzero.iter().map(|&i| gens[i].to_ring(&ring)).collect();
    let raw = run_buchberger(&ring, inputs, true, limits)?;
    let reprs = raw.reprs.expect("tracked run");
    let basis: Vec<Polynomial> = raw.polys.clone();
    let mut active = raw.active.clone();
    // inactive elements are still valid divisors; allow all of them
    active.iter_mut().for_each(|a| *a = true);
    let table = LeadTable::new(&basis);
    let mut tracking = Tracking {
        reprs: &reprs,
        acc: vec![Polynomial::zero(&ring); nonzero.len()],
    };
    let mut p = f.to_ring(&ring).into_terms();
    let r = reduce_active(
        &mut p,
        &basis,
        &table,
        Some(&active),
        Some(&mut tracking),
        ring.field(),
        order,
    )?;
    if !r.is_empty() {
        return Ok(None);
    }
    // the accumulator represents (current - f); everything reduced to zero
    for (slot, a) in nonzero.iter().zip(tracking.acc) {
        cof[*slot] = (-&a).to_ring(&back);
    }
    Ok(Some(cof))
}

/// Multivariate division; at each step the first divisor (in list order)
/// whose leading term divides the current leading term is used.
pub fn divide(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: MonomialOrder,
) -> Result<DivisionResult> {
    let back = Arc::clone(f.ring());
    if divisors.iter().any(|g| !g.ring().same_as(&back)) {
        return Err(Error::ContextMismatch);
    }
    if divisors.iter().any(|g| g.is_zero()) {
        return Err(Error::IllPosed("division by the zero polynomial".into()));
    }
    let ring = back.with_order(order);
    let field = ring.field();
    let divs: Vec<Polynomial> = divisors.iter().map(|g| g.to_ring(&ring)).collect();
    let table = LeadTable::new(&divs);
    let mut quotients: Vec<Vec<Term>> = vec![Vec::new(); divs.len()];
    let mut remainder: Vec<Term> = Vec::new();
    let mut p = f.to_ring(&ring).into_terms();
    let mut start = 0;
    while start < p.len() {
        let (m, c) = (p[start].0.clone(), p[start].1);
        match table.find_divisor(&m, None) {
            Some(j) => {
                let lc = divs[j].leading_coeff();
                let c = field.mul(c, field.inv(lc));
                let shift = table.entries[j].0.quotient_of(&m);
                quotients[j].push((shift.clone(), c));
                p = merge_sub_shift(&p[start..], c, &shift, divs[j].terms(), field, ring.order());
                start = 0;
            }
            None => {
                remainder.push(p[start].clone());
                start += 1;
            }
        }
    }
    Ok(DivisionResult {
        cofactors: quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(&ring, q).to_ring(&back))
            .collect(),
        remainder: Polynomial::from_sorted_terms(&ring, remainder).to_ring(&back),
    })
}

/// S-polynomial of two nonzero polynomials in their common ring order.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let field = f.ring().field();
    let (mf, cf) = f.leading_term().expect("nonzero").clone();
    let (mg, cg) = g.leading_term().expect("nonzero").clone();
    let l = mf.lcm(&mg);
    let a = f.mul_term(&mf.quotient_of(&l), field.inv(cf));
    let b = g.mul_term(&mg.quotient_of(&l), field.inv(cg));
    &a - &b
}
