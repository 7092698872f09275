//! Local-cohomology annihilator probe and Hilbert-Kunz length series.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::ideal::{bracket_power, colength, ideal_colon, is_m_primary, saturation, IdealHandle};
use crate::poly::{frobenius_q, Polynomial};

use super::{exponents, same_context, sweep, Row, TestElementDecl};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcRow {
    pub e: u32,
    pub q: u32,
    /// Minimal `N` with `m^N * (J^[q] : m^∞) ⊆ J^[q]`.
    pub n_q: u64,
    pub saturated: bool,
}

#[derive(Clone, Debug)]
pub struct LcProbeReport {
    pub ideal: IdealHandle,
    pub rows: Vec<Row<LcRow>>,
    pub ratio_sup: Option<Ratio<u64>>,
    pub bounded: bool,
}

/// For each `e`, the least `N` with `m^N` killing `H⁰_m(R/J^[q])`.
///
/// The chain `J^[q] : m^k` increases with `k` and first repeats exactly at
/// `k = N`, so `N` is the number of colon steps the saturation takes.
pub fn lc_probe(j: &IdealHandle, e_max: u32, tolerance: Ratio<u64>) -> Result<LcProbeReport> {
    let m = IdealHandle::maximal(j.context());
    let p = j.context().characteristic();
    let rows = sweep(j.context(), &exponents(e_max), |e| {
        let q = frobenius_q(p, e)?;
        let bracket = bracket_power(j, e)?;
        let (_, steps) = saturation(&bracket.handle, &m)?;
        Ok(LcRow {
            e,
            q,
            n_q: steps as u64,
            saturated: steps == 0,
        })
    })?;
    let ratio_sup = rows
        .iter()
        .filter_map(|r| r.exact())
        .map(|r| Ratio::new(r.n_q, r.q as u64))
        .max();
    let bounded =
        ratio_sup.is_some_and(|r| r <= tolerance) && rows.iter().all(|r| r.exact().is_some());
    Ok(LcProbeReport {
        ideal: j.clone(),
        rows,
        ratio_sup,
        bounded,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkRow {
    pub e: u32,
    pub q: u32,
    /// `λ(R/I^[q])` and its normalization by `q^d`.
    pub length: Row<(u128, Ratio<u128>)>,
    /// `λ(R/J_q)` and normalization, when a chain is attached.
    pub chain_length: Option<Row<(u128, Ratio<u128>)>>,
}

#[derive(Clone, Debug)]
pub struct HkSeries {
    pub ideal: IdealHandle,
    pub dimension: u32,
    pub rows: Vec<HkRow>,
    /// Least normalized value among the computed rows (chain rows when a
    /// chain is attached, else bracket-power rows). An empirical candidate
    /// only.
    pub eps_inf: Option<Ratio<u128>>,
}

fn normalized(len: u128, q: u32, d: u32) -> Result<(u128, Ratio<u128>)> {
    let denom = (q as u128)
        .checked_pow(d)
        .ok_or_else(|| Error::ExponentOverflow(format!("{q}^{d} does not fit in 128 bits")))?;
    Ok((len, Ratio::new(len, denom)))
}

fn length_row(ideal: &IdealHandle, q: u32, d: u32) -> Result<Row<(u128, Ratio<u128>)>> {
    match colength(ideal) {
        Ok(len) => Ok(Row::Exact(normalized(len, q, d)?)),
        Err(Error::NotZeroDimensional) => Ok(Row::Unavailable("not zero-dimensional".into())),
        Err(err) => Err(err),
    }
}

/// Hilbert-Kunz length rows. `dimension` is required for quotient contexts
/// and must equal the number of variables in polynomial contexts (where it
/// defaults to that).
pub fn hk_series(
    ideal: &IdealHandle,
    chain: Option<(&Polynomial, &TestElementDecl)>,
    e_max: u32,
    dimension: Option<u32>,
) -> Result<HkSeries> {
    let ctx = ideal.context();
    let n = ctx.nvars() as u32;
    let d = match (ctx.is_quotient(), dimension) {
        (true, Some(d)) => d,
        (true, None) => {
            return Err(Error::IllPosed(
                "a dimension must be declared for a quotient ring".into(),
            ))
        }
        (false, Some(d)) if d != n => {
            return Err(Error::IllPosed(format!(
                "declared dimension {d} but the polynomial ring has dimension {n}"
            )))
        }
        (false, _) => n,
    };
    if let Some((x, c)) = chain {
        same_context(ideal, &[x, c.c()])?;
    }
    let m_primary = is_m_primary(ideal)?;
    let p = ctx.characteristic();
    let es = exponents(e_max);
    let rows = sweep(ctx, &es, |e| {
        let q = frobenius_q(p, e)?;
        let bracket = bracket_power(ideal, e)?;
        let length = if m_primary {
            length_row(&bracket.handle, q, d)?
        } else {
            Row::Unavailable("ideal is not m-primary".into())
        };
        let chain_length = match chain {
            Some((x, c)) => {
                let j = ideal_colon(&bracket.handle, &(c.c() * &x.frobenius_pow(e)?))?;
                Some(length_row(&j, q, d)?)
            }
            None => None,
        };
        Ok(HkRow {
            e,
            q,
            length,
            chain_length,
        })
    })?;
    let mut out = Vec::with_capacity(rows.len());
    for (e, row) in es.iter().zip(rows) {
        out.push(match row {
            Row::Exact(r) => r,
            Row::Limited(msg) | Row::Unavailable(msg) => {
                let marker = Row::Limited(msg);
                HkRow {
                    e: *e,
                    q: frobenius_q(p, *e)?,
                    length: marker.clone(),
                    chain_length: chain.map(|_| marker),
                }
            }
        });
    }
    let eps_inf = out
        .iter()
        .filter_map(|r| match &r.chain_length {
            Some(row) => row.exact().map(|v| v.1),
            None => r.length.exact().map(|v| v.1),
        })
        .min();
    Ok(HkSeries {
        ideal: ideal.clone(),
        dimension: d,
        rows: out,
        eps_inf,
    })
}
