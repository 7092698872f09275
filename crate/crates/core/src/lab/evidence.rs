//! Tight-closure evidence rows, Frobenius closure, and test-exponent probes.

use crate::error::Result;
use crate::ideal::{bracket_power, IdealHandle};
use crate::poly::{frobenius_q, Polynomial};

use super::{exponents, same_context, sweep, Row, TestElementDecl};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every tested row holds.
    MemberEvidence,
    /// Some row fails and `c` was asserted as a test element: `u ∉ I*`.
    Excluded,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::MemberEvidence => "member-evidence",
            Verdict::Excluded => "excluded",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceRow {
    pub e: u32,
    pub q: u32,
    pub holds: Row<bool>,
}

#[derive(Clone, Debug)]
pub struct TightClosureEvidence {
    pub u: Polynomial,
    pub ideal: IdealHandle,
    pub c: TestElementDecl,
    pub rows: Vec<EvidenceRow>,
    pub verdict: Verdict,
    /// The verdict is a proof: an exclusion, or member evidence at or above
    /// a caller-supplied test exponent.
    pub proven: bool,
}

impl TightClosureEvidence {
    pub fn first_false(&self) -> Option<&EvidenceRow> {
        self.rows.iter().find(|r| r.holds == Row::Exact(false))
    }
}

fn rows_for(
    u: &Polynomial,
    ideal: &IdealHandle,
    c: &Polynomial,
    es: &[u32],
) -> Result<Vec<EvidenceRow>> {
    same_context(ideal, &[u, c])?;
    let p = ideal.context().characteristic();
    let holds = sweep(ideal.context(), es, |e| {
        let target = c * &u.frobenius_pow(e)?;
        bracket_power(ideal, e)?.handle.contains(&target)
    })?;
    es.iter()
        .zip(holds)
        .map(|(&e, holds)| {
            Ok(EvidenceRow {
                e,
                q: frobenius_q(p, e)?,
                holds,
            })
        })
        .collect()
}

fn verdict_of(rows: &[EvidenceRow], asserted: bool) -> Verdict {
    if rows.iter().any(|r| r.holds == Row::Exact(false)) {
        if asserted {
            Verdict::Excluded
        } else {
            Verdict::Inconclusive
        }
    } else if rows.iter().all(|r| r.holds == Row::Exact(true)) {
        Verdict::MemberEvidence
    } else {
        Verdict::Inconclusive
    }
}

/// Rows `c*u^q ∈ I^[q]` for `e = 0..=e_max`. With `known_test_exponent`
/// (a `q₀` the caller knows to be a test exponent for `c`), a true row at
/// some `q ≥ q₀` upgrades member evidence to proof.
pub fn tc_evidence(
    u: &Polynomial,
    ideal: &IdealHandle,
    c: &TestElementDecl,
    e_max: u32,
    known_test_exponent: Option<u32>,
) -> Result<TightClosureEvidence> {
    let rows = rows_for(u, ideal, c.c(), &exponents(e_max))?;
    let verdict = verdict_of(&rows, c.is_asserted());
    let proven = match verdict {
        Verdict::Excluded => true,
        Verdict::MemberEvidence => {
            known_test_exponent.is_some_and(|q0| rows.iter().any(|r| r.q >= q0))
        }
        Verdict::Inconclusive => false,
    };
    Ok(TightClosureEvidence {
        u: u.clone(),
        ideal: ideal.clone(),
        c: c.clone(),
        rows,
        verdict,
        proven,
    })
}

#[derive(Clone, Debug)]
pub struct FrobeniusClosureReport {
    pub rows: Vec<EvidenceRow>,
    /// First exponent with `u^q ∈ I^[q]`; proves `u ∈ I^F ⊆ I*`.
    pub first_member: Option<u32>,
    /// A true row followed by a false one (impossible in exact arithmetic).
    pub monotone: bool,
}

/// Rows `u^q ∈ I^[q]`, i.e. evidence with `c = 1`.
pub fn frobenius_closure_test(
    u: &Polynomial,
    ideal: &IdealHandle,
    e_max: u32,
) -> Result<FrobeniusClosureReport> {
    let one = ideal.ring().one();
    let rows = rows_for(u, ideal, &one, &exponents(e_max))?;
    let first_member = rows
        .iter()
        .find(|r| r.holds == Row::Exact(true))
        .map(|r| r.e);
    let monotone = rows
        .iter()
        .filter_map(|r| r.holds.exact().copied())
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| !w[0] || w[1]);
    Ok(FrobeniusClosureReport {
        rows,
        first_member,
        monotone,
    })
}

#[derive(Clone, Debug)]
pub struct CandidateRows {
    pub u: Polynomial,
    pub rows: Vec<EvidenceRow>,
    pub verdict: Verdict,
    /// With square `c`: once a row is false, all later rows are false.
    /// `None` when `c` is not a recorded square.
    pub prefix_law: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct TestExponentReport {
    pub candidates: Vec<CandidateRows>,
    /// Smallest tested `q₀` such that no excluded candidate has a true row
    /// at any tested `q ≥ q₀`. This is a consistency bound only. `None` if
    /// no tested exponent qualifies.
    pub consistent_exponent: Option<u32>,
}

pub(crate) fn prefix_law_holds(rows: &[EvidenceRow]) -> bool {
    let mut seen_false = false;
    for r in rows {
        match r.holds {
            Row::Exact(false) => seen_false = true,
            Row::Exact(true) if seen_false => return false,
            _ => {}
        }
    }
    true
}

pub fn test_exponent_probe(
    c: &TestElementDecl,
    ideal: &IdealHandle,
    candidates: &[Polynomial],
    e_max: u32,
) -> Result<TestExponentReport> {
    let es = exponents(e_max);
    let mut out = Vec::with_capacity(candidates.len());
    for u in candidates {
        let rows = rows_for(u, ideal, c.c(), &es)?;
        let verdict = verdict_of(&rows, c.is_asserted());
        let prefix_law = c.is_square().then(|| prefix_law_holds(&rows));
        out.push(CandidateRows {
            u: u.clone(),
            rows,
            verdict,
            prefix_law,
        });
    }
    // last exponent at which some excluded candidate still had a true row
    let mut last_true: Option<u32> = None;
    for cand in out.iter().filter(|c| c.verdict == Verdict::Excluded) {
        for r in &cand.rows {
            if r.holds == Row::Exact(true) {
                last_true = Some(last_true.map_or(r.e, |m| m.max(r.e)));
            }
        }
    }
    let p = ideal.context().characteristic();
    let consistent_exponent = match last_true {
        None => Some(1),
        Some(e) if e < e_max => Some(frobenius_q(p, e + 1)?),
        Some(_) => None,
    };
    Ok(TestExponentReport {
        candidates: out,
        consistent_exponent,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::PrimeField;
    use crate::monomial::MonomialOrder;
    use crate::ring::{PolyRing, RingContext};

    fn ctx(p: u64, vars: &[&str], defining: &[&str]) -> Arc<RingContext> {
        let ring =
            PolyRing::new(PrimeField::new(p).unwrap(), vars, MonomialOrder::Grevlex).unwrap();
        let f = defining
            .iter()
            .map(|s| crate::parse::parse_poly(s, &ring).unwrap())
            .collect();
        RingContext::quotient(ring, f).unwrap()
    }

    fn ideal(c: &Arc<RingContext>, gens: &[&str]) -> IdealHandle {
        IdealHandle::new(c, gens.iter().map(|s| c.parse(s).unwrap()).collect()).unwrap()
    }

    fn bits(rows: &[EvidenceRow]) -> Vec<Option<bool>> {
        rows.iter().map(|r| r.holds.exact().copied()).collect()
    }

    #[test]
    fn regular_ring_evidence_is_membership() {
        let c = ctx(3, &["x", "y"], &[]);
        let i = ideal(&c, &["x^2", "x*y"]);
        let one = TestElementDecl::one(&c);
        let inside = tc_evidence(&c.parse("x^2+x*y").unwrap(), &i, &one, 2, None).unwrap();
        assert_eq!(inside.verdict, Verdict::MemberEvidence);
        let outside = tc_evidence(&c.parse("x").unwrap(), &i, &one, 2, Some(1)).unwrap();
        assert_eq!(outside.verdict, Verdict::Excluded);
        assert!(outside.proven);
        assert_eq!(bits(&outside.rows), [Some(false); 3]);
    }

    #[test]
    fn fermat_cubic_z_squared() {
        let c = ctx(7, &["z", "u", "v"], &["z^3+u^3+v^3"]);
        let i = ideal(&c, &["u", "v"]);
        let u2 = TestElementDecl::asserted(
            &c,
            c.parse("u^2").unwrap(),
            super::super::TestElementProvenance::UserAsserted,
        )
        .unwrap();
        let ev = tc_evidence(&c.parse("z^2").unwrap(), &i, &u2, 2, None).unwrap();
        assert_eq!(bits(&ev.rows), [Some(true); 3]);
        assert_eq!(ev.verdict, Verdict::MemberEvidence);
        assert!(!ev.proven);
    }

    #[test]
    fn unasserted_candidate_never_excludes() {
        let c = ctx(5, &["x", "y"], &[]);
        let i = ideal(&c, &["x^2"]);
        let cand = TestElementDecl::candidate(&c, c.parse("y").unwrap()).unwrap();
        let ev = tc_evidence(&c.parse("x").unwrap(), &i, &cand, 1, None).unwrap();
        assert_eq!(ev.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn frobenius_closure_rows() {
        let c = ctx(2, &["z", "u", "v"], &["z^3+u^3+v^3"]);
        let i = ideal(&c, &["u", "v"]);
        let fc = frobenius_closure_test(&c.parse("z^2").unwrap(), &i, 2).unwrap();
        assert_eq!(bits(&fc.rows), [Some(false), Some(true), Some(true)]);
        assert_eq!(fc.first_member, Some(1));
        assert!(fc.monotone);
        let reg = ctx(5, &["x", "y"], &[]);
        let fc = frobenius_closure_test(&reg.parse("y").unwrap(), &ideal(&reg, &["x"]), 2).unwrap();
        assert_eq!(fc.first_member, None);
    }

    #[test]
    fn exponent_probe_regular_and_empty() {
        let c = ctx(3, &["x", "y"], &[]);
        let i = ideal(&c, &["x^2", "y^2"]);
        let one = TestElementDecl::one(&c);
        let cands: Vec<Polynomial> = ["x", "x*y", "x^2"]
            .iter()
            .map(|s| c.parse(s).unwrap())
            .collect();
        let rep = test_exponent_probe(&one, &i, &cands, 2).unwrap();
        assert_eq!(rep.consistent_exponent, Some(1));
        assert!(rep.candidates.iter().all(|c| c.prefix_law == Some(true)));
        let empty = test_exponent_probe(&one, &i, &[], 2).unwrap();
        assert_eq!(empty.consistent_exponent, Some(1));
    }

    #[test]
    fn prefix_law_detects_reentry() {
        let row = |e, b| EvidenceRow {
            e,
            q: 1,
            holds: Row::Exact(b),
        };
        assert!(prefix_law_holds(&[
            row(0, true),
            row(1, false),
            row(2, false)
        ]));
        assert!(!prefix_law_holds(&[row(0, false), row(1, true)]));
    }
}
