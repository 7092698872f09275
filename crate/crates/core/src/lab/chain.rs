//! Colon chains `J_q = I^[q] : c*x^q`, their radicals, clearing and C2 probes.
//!
//! All localized conditions are probed globally and at the homogeneous
//! maximal ideal only.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::ideal::{
    bracket_power, colength, ideal_colon, is_m_primary, m_power_index, radical_member, IdealHandle,
};
use crate::poly::{frobenius_q, Polynomial};

use super::{exponents, same_context, sweep, Row, TestElementDecl};

#[derive(Clone, Debug)]
pub struct ChainRow {
    pub e: u32,
    pub q: u32,
    /// `J_q`, generated by its reduced basis.
    pub ideal: IdealHandle,
    pub is_unit: bool,
    pub is_m_primary: bool,
    /// `m_power_index(J_q)` when `J_q` is m-primary or the unit ideal.
    pub n_q: Option<u64>,
    /// `λ(R/J_q)` when `J_q` is zero-dimensional.
    pub colength: Option<u128>,
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub ideal: IdealHandle,
    pub x: Polynomial,
    pub c: TestElementDecl,
    pub rows: Vec<Row<ChainRow>>,
    /// Smallest `e₀` with `√J_{p^e₀} = √J_{p^(e₀+1)}`, if seen.
    pub stabilization: Option<u32>,
    /// False when `c` is not a recorded square; monotonicity verdicts are
    /// then suppressed.
    pub monotonicity_applies: bool,
}

impl ChainReport {
    pub fn exact_rows(&self) -> impl Iterator<Item = &ChainRow> {
        self.rows.iter().filter_map(|r| r.exact())
    }
}

fn chain_row(ideal: &IdealHandle, x: &Polynomial, c: &Polynomial, e: u32) -> Result<ChainRow> {
    let q = frobenius_q(ideal.context().characteristic(), e)?;
    let bracket = bracket_power(ideal, e)?;
    let j = ideal_colon(&bracket.handle, &(c * &x.frobenius_pow(e)?))?.canonical()?;
    let is_unit = j.is_unit()?;
    let (is_mp, n_q, colength) = if is_unit {
        (false, Some(0), Some(0))
    } else {
        let mp = is_m_primary(&j)?;
        let n = if mp { Some(m_power_index(&j)?) } else { None };
        let len = match colength(&j) {
            Ok(l) => Some(l),
            Err(Error::NotZeroDimensional) => None,
            Err(err) => return Err(err),
        };
        (mp, n, len)
    };
    Ok(ChainRow {
        e,
        q,
        ideal: j,
        is_unit,
        is_m_primary: is_mp,
        n_q,
        colength,
    })
}

/// Generator-wise: `√a ⊆ √b`.
fn radical_within(a: &IdealHandle, b: &IdealHandle) -> Result<Option<Polynomial>> {
    if b.is_unit()? {
        return Ok(None);
    }
    for g in a.generators() {
        if !radical_member(g, b)? {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

fn same_radical(a: &IdealHandle, b: &IdealHandle) -> Result<bool> {
    Ok(radical_within(a, b)?.is_none() && radical_within(b, a)?.is_none())
}

pub fn colon_chain(
    ideal: &IdealHandle,
    x: &Polynomial,
    c: &TestElementDecl,
    e_max: u32,
) -> Result<ChainReport> {
    same_context(ideal, &[x, c.c()])?;
    let rows = sweep(ideal.context(), &exponents(e_max), |e| {
        chain_row(ideal, x, c.c(), e)
    })?;
    let mut stabilization = None;
    for w in rows.windows(2) {
        if let (Row::Exact(a), Row::Exact(b)) = (&w[0], &w[1]) {
            if same_radical(&a.ideal, &b.ideal)? {
                stabilization = Some(a.e);
                break;
            }
        }
    }
    Ok(ChainReport {
        ideal: ideal.clone(),
        x: x.clone(),
        c: c.clone(),
        rows,
        stabilization,
        monotonicity_applies: c.is_square(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadicalCheck {
    Pass,
    /// Monotonicity does not apply (non-square `c`).
    Skipped,
    /// A unit row follows a non-unit row.
    PrefixViolation {
        earlier: u32,
        later: u32,
    },
    /// `witness` generates `J_{p^later}` but is not in `√J_{p^earlier}`.
    Fail {
        earlier: u32,
        later: u32,
        witness: Polynomial,
    },
}

impl RadicalCheck {
    pub fn passed(&self) -> bool {
        matches!(self, RadicalCheck::Pass)
    }
}

/// Checks `√J_{q'} ⊆ √J_q` for every tested pair `q < q'`, and that unit
/// rows form a prefix.
pub fn radical_chain_check(report: &ChainReport) -> Result<RadicalCheck> {
    if !report.monotonicity_applies {
        return Ok(RadicalCheck::Skipped);
    }
    let rows: Vec<&ChainRow> = report.exact_rows().collect();
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            if b.is_unit && !a.is_unit {
                return Ok(RadicalCheck::PrefixViolation {
                    earlier: a.e,
                    later: b.e,
                });
            }
        }
    }
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            if let Some(witness) = radical_within(&b.ideal, &a.ideal)? {
                return Ok(RadicalCheck::Fail {
                    earlier: a.e,
                    later: b.e,
                    witness,
                });
            }
        }
    }
    Ok(RadicalCheck::Pass)
}

/// `√J_q` for all tested `q ≥ p^stabilized_at`. When the radical is not
/// known in closed form, `radical` is a representative ideal with the same
/// radical and `exact` is false; use [`StableRadical::contains`].
#[derive(Clone, Debug)]
pub struct StableRadical {
    pub radical: IdealHandle,
    pub exact: bool,
    pub stabilized_at: u32,
    pub confirmed_through: u32,
}

impl StableRadical {
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        radical_member(f, &self.radical)
    }

    pub fn is_unit(&self) -> Result<bool> {
        self.radical.is_unit()
    }
}

#[derive(Clone, Debug)]
pub enum StableRadicalOutcome {
    Stable(StableRadical),
    /// No tail of equal radicals of length two within `e_max`; this does not
    /// disprove that the stable primes are finite in number.
    NotStabilized {
        e_max: u32,
    },
}

pub fn stable_radical(
    ideal: &IdealHandle,
    x: &Polynomial,
    c: &TestElementDecl,
    e_max: u32,
) -> Result<StableRadicalOutcome> {
    if !c.is_square() {
        return Err(Error::InvalidTestElement(
            "stable radical requires a square test element".into(),
        ));
    }
    stable_radical_of(&colon_chain(ideal, x, c, e_max)?)
}

/// The stable radical read off an already computed chain.
pub fn stable_radical_of(report: &ChainReport) -> Result<StableRadicalOutcome> {
    if !report.c.is_square() {
        return Err(Error::InvalidTestElement(
            "stable radical requires a square test element".into(),
        ));
    }
    let e_max = report.rows.len().saturating_sub(1) as u32;
    let mut rows = Vec::with_capacity(report.rows.len());
    for r in &report.rows {
        match r {
            Row::Exact(row) => rows.push(row),
            Row::Limited(msg) | Row::Unavailable(msg) => {
                return Err(Error::ResourceLimit(msg.clone()))
            }
        }
    }
    // longest tail of rows sharing one radical
    let Some(last) = rows.last() else {
        return Ok(StableRadicalOutcome::NotStabilized { e_max });
    };
    let mut start = rows.len() - 1;
    while start > 0 && same_radical(&rows[start - 1].ideal, &last.ideal)? {
        start -= 1;
    }
    if start + 1 >= rows.len() {
        return Ok(StableRadicalOutcome::NotStabilized { e_max });
    }
    let rep = &rows[start];
    let ctx = report.ideal.context();
    let (radical, exact) = if rep.is_unit {
        (IdealHandle::unit(ctx), true)
    } else if rep.is_m_primary {
        (IdealHandle::maximal(ctx), true)
    } else {
        (rep.ideal.clone(), false)
    };
    Ok(StableRadicalOutcome::Stable(StableRadical {
        radical,
        exact,
        stabilized_at: rep.e,
        confirmed_through: last.e,
    }))
}

/// Rows `y^q ∈ J_q`, tested as `c*x^q*y^q ∈ I^[q]`.
pub fn clearing_check(
    y: &Polynomial,
    ideal: &IdealHandle,
    x: &Polynomial,
    c: &TestElementDecl,
    e_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<(u32, Row<bool>)>> {
    same_context(ideal, &[y, x, c.c()])?;
    let es: Vec<u32> = e_range.collect();
    let xy = x * y;
    let rows = sweep(ideal.context(), &es, |e| {
        let target = c.c() * &xy.frobenius_pow(e)?;
        bracket_power(ideal, e)?.handle.contains(&target)
    })?;
    Ok(es.into_iter().zip(rows).collect())
}

#[derive(Clone, Debug)]
pub struct C2Report {
    /// Per row: `N_q`, or unavailable when `J_q` is neither unit nor m-primary.
    pub rows: Vec<(u32, Row<u64>)>,
    pub max_ratio: Option<Ratio<u64>>,
    pub bounded: bool,
}

pub fn c2_from_chain(report: &ChainReport, tolerance: Ratio<u64>) -> C2Report {
    let mut rows = Vec::with_capacity(report.rows.len());
    let mut max_ratio: Option<Ratio<u64>> = None;
    for (e, r) in report.rows.iter().enumerate() {
        let row = match r {
            Row::Exact(row) => match row.n_q {
                Some(n) => {
                    let ratio = Ratio::new(n, row.q as u64);
                    max_ratio = Some(max_ratio.map_or(ratio, |m| m.max(ratio)));
                    Row::Exact(n)
                }
                None => Row::Unavailable("inapplicable at m: row is not m-primary".into()),
            },
            Row::Limited(msg) => Row::Limited(msg.clone()),
            Row::Unavailable(msg) => Row::Unavailable(msg.clone()),
        };
        rows.push((e as u32, row));
    }
    let bounded = max_ratio.is_some_and(|m| m <= tolerance);
    C2Report {
        rows,
        max_ratio,
        bounded,
    }
}

pub fn c2_probe(
    ideal: &IdealHandle,
    x: &Polynomial,
    c: &TestElementDecl,
    e_max: u32,
    tolerance: Ratio<u64>,
) -> Result<C2Report> {
    Ok(c2_from_chain(&colon_chain(ideal, x, c, e_max)?, tolerance))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::PrimeField;
    use crate::ideal::ideal_colon;
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

    #[test]
    fn regular_chain_staircase() {
        let c = ctx(3, &["x", "y"], &[]);
        let i = ideal(&c, &["x^2", "y^3"]);
        let rep = colon_chain(&i, &c.parse("x").unwrap(), &TestElementDecl::one(&c), 2).unwrap();
        for row in rep.exact_rows() {
            let q = row.q;
            assert!(row
                .ideal
                .same_ideal(&ideal(&c, &[&format!("x^{q}"), &format!("y^{}", 3 * q)]))
                .unwrap());
            assert_eq!(row.n_q, Some(4 * q as u64 - 1));
            assert_eq!(row.colength, Some(3 * (q as u128).pow(2)));
        }
        assert_eq!(rep.stabilization, Some(0));
        assert!(radical_chain_check(&rep).unwrap().passed());
        let c2 = c2_from_chain(&rep, Ratio::from_integer(4));
        assert_eq!(c2.max_ratio, Some(Ratio::new(35, 9)));
        assert!(c2.bounded);
    }

    #[test]
    fn member_gives_unit_chain() {
        let c = ctx(5, &["x", "y"], &[]);
        let i = ideal(&c, &["x", "y^2"]);
        let rep = colon_chain(&i, &c.parse("x*y").unwrap(), &TestElementDecl::one(&c), 1).unwrap();
        assert!(rep.exact_rows().all(|r| r.is_unit && r.n_q == Some(0)));
        let StableRadicalOutcome::Stable(sr) =
            stable_radical(&i, &c.parse("x").unwrap(), &TestElementDecl::one(&c), 1).unwrap()
        else {
            panic!("expected stabilization")
        };
        assert!(sr.is_unit().unwrap());
        assert_eq!(sr.stabilized_at, 0);
    }

    #[test]
    fn regular_stable_radical_is_radical_of_colon() {
        let c = ctx(3, &["x", "y", "z"], &[]);
        let i = ideal(&c, &["x^2*y", "y*z^2"]);
        let x = c.parse("y").unwrap();
        let StableRadicalOutcome::Stable(sr) =
            stable_radical(&i, &x, &TestElementDecl::one(&c), 2).unwrap()
        else {
            panic!("expected stabilization")
        };
        let colon = ideal_colon(&i, &x).unwrap();
        for g in colon.generators() {
            assert!(sr.contains(g).unwrap());
        }
        assert!(sr.contains(&c.parse("x*z").unwrap()).unwrap());
        assert!(!sr.contains(&c.parse("y").unwrap()).unwrap());
    }

    #[test]
    fn corrupted_report_fails_check() {
        let c = ctx(3, &["x", "y"], &[]);
        let i = ideal(&c, &["x^2", "y^2"]);
        let mut rep =
            colon_chain(&i, &c.parse("x").unwrap(), &TestElementDecl::one(&c), 1).unwrap();
        assert!(radical_chain_check(&rep).unwrap().passed());
        // replace the later row by one with a strictly larger radical
        if let Row::Exact(row) = &mut rep.rows[1] {
            row.ideal = ideal(&c, &["x", "y-1"]);
        }
        assert!(matches!(
            radical_chain_check(&rep).unwrap(),
            RadicalCheck::Fail {
                earlier: 0,
                later: 1,
                ..
            }
        ));
        if let Row::Exact(row) = &mut rep.rows[1] {
            row.is_unit = true;
        }
        assert!(matches!(
            radical_chain_check(&rep).unwrap(),
            RadicalCheck::PrefixViolation { .. }
        ));
    }

    #[test]
    fn non_square_skips_monotonicity() {
        let c = ctx(5, &["x", "y"], &[]);
        let i = ideal(&c, &["x^2"]);
        let cand = TestElementDecl::candidate(&c, c.parse("y").unwrap()).unwrap();
        let rep = colon_chain(&i, &c.parse("x").unwrap(), &cand, 1).unwrap();
        assert_eq!(radical_chain_check(&rep).unwrap(), RadicalCheck::Skipped);
        assert!(stable_radical(&i, &c.parse("x").unwrap(), &cand, 1).is_err());
    }

    #[test]
    fn clearing_trivial_rows() {
        let c = ctx(3, &["x", "y"], &[]);
        let i = ideal(&c, &["x^2", "y^3"]);
        let one = TestElementDecl::one(&c);
        let x = c.parse("x").unwrap();
        let rows = clearing_check(&c.parse("y^3").unwrap(), &i, &x, &one, 0..=2).unwrap();
        assert!(rows.iter().all(|(_, r)| *r == Row::Exact(true)));
        let rows = clearing_check(&c.parse("1").unwrap(), &i, &x, &one, 0..=1).unwrap();
        assert!(rows.iter().all(|(_, r)| *r == Row::Exact(false)));
        let rows = clearing_check(&c.parse("x").unwrap(), &i, &x, &one, 1..=2).unwrap();
        assert_eq!(rows.iter().map(|(e, _)| *e).collect::<Vec<_>>(), [1, 2]);
        assert!(rows.iter().all(|(_, r)| *r == Row::Exact(true)));
    }
}
