//! Frobenius and tight-closure probes.
//!
//! Every sweep runs one independent computation per exponent `e` (rows may
//! run in parallel) and assembles the report by exponent index. Rows that hit
//! a resource cap are kept and marked instead of failing the whole sweep.

mod certificate;
mod chain;
mod evidence;
mod series;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ideal::IdealHandle;
use crate::limits::with_row_deadline;
use crate::poly::Polynomial;
use crate::ring::RingContext;

pub use certificate::{
    strong_test_certificate, two_variable_certificate, verify_certificate, verify_two_variable,
    IntegralDependenceCertificate, TwoVariableCertificate,
};
pub use chain::{
    c2_from_chain, c2_probe, clearing_check, colon_chain, radical_chain_check, stable_radical,
    stable_radical_of, C2Report, ChainReport, ChainRow, RadicalCheck, StableRadical,
    StableRadicalOutcome,
};
pub use evidence::{
    frobenius_closure_test, tc_evidence, test_exponent_probe, CandidateRows, EvidenceRow,
    FrobeniusClosureReport, TestExponentReport, TightClosureEvidence, Verdict,
};
pub use series::{hk_series, lc_probe, HkRow, HkSeries, LcProbeReport, LcRow};

/// Result of one row of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Row<T> {
    Exact(T),
    /// A resource cap stopped the computation.
    Limited(String),
    /// The quantity is undefined for this row (e.g. not zero-dimensional).
    Unavailable(String),
}

impl<T> Row<T> {
    pub fn exact(&self) -> Option<&T> {
        match self {
            Row::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_limited(&self) -> bool {
        matches!(self, Row::Limited(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Row<U> {
        match self {
            Row::Exact(v) => Row::Exact(f(v)),
            Row::Limited(s) => Row::Limited(s),
            Row::Unavailable(s) => Row::Unavailable(s),
        }
    }
}

/// Runs `f` for every exponent in `es`, in parallel, under the row deadline.
/// Resource-limit errors become [`Row::Limited`]; other errors abort.
pub(crate) fn sweep<T, F>(ctx: &RingContext, es: &[u32], f: F) -> Result<Vec<Row<T>>>
where
    T: Send,
    F: Fn(u32) -> Result<T> + Sync,
{
    let limits = *ctx.limits();
    let rows: Vec<Result<Row<T>>> = es
        .par_iter()
        .map(|&e| match with_row_deadline(&limits, || f(e)) {
            Ok(v) => Ok(Row::Exact(v)),
            Err(Error::ResourceLimit(msg)) => Ok(Row::Limited(msg)),
            Err(err) => Err(err),
        })
        .collect();
    rows.into_iter().collect()
}

/// Where a test-element candidate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestElementProvenance {
    UserAsserted,
    /// A multiple of a partial derivative of a hypersurface equation.
    JacobianDerived,
}

impl TestElementProvenance {
    pub fn name(self) -> &'static str {
        match self {
            TestElementProvenance::UserAsserted => "user-asserted",
            TestElementProvenance::JacobianDerived => "jacobian-derived",
        }
    }
}

/// A declared test element `c`. The toolkit never proves that `c` is a test
/// element; verdicts that need it are conditional on `asserted`.
#[derive(Clone, Debug)]
pub struct TestElementDecl {
    c: Polynomial,
    provenance: TestElementProvenance,
    asserted: bool,
    square_root: Option<Polynomial>,
}

impl TestElementDecl {
    /// Declares `c` as an asserted test element. `c` must be nonzero in `R`;
    /// with Jacobian provenance it must also lie in the Jacobian ideal.
    pub fn asserted(
        ctx: &Arc<RingContext>,
        c: Polynomial,
        provenance: TestElementProvenance,
    ) -> Result<Self> {
        let mut decl = Self::candidate(ctx, c)?;
        if provenance == TestElementProvenance::JacobianDerived {
            let jac = IdealHandle::new(ctx, jacobian_candidates(ctx)?)?;
            if !jac.contains(&decl.c)? {
                return Err(Error::InvalidTestElement(format!(
                    "{} is not in the Jacobian ideal",
                    decl.c
                )));
            }
        }
        decl.provenance = provenance;
        decl.asserted = true;
        Ok(decl)
    }

    /// An unasserted candidate: exclusion verdicts are never drawn from it.
    pub fn candidate(ctx: &Arc<RingContext>, c: Polynomial) -> Result<Self> {
        if !c.ring().same_as(ctx.ambient()) {
            return Err(Error::ContextMismatch);
        }
        if IdealHandle::zero(ctx).contains(&c)? {
            return Err(Error::InvalidTestElement(format!(
                "{c} is zero in the ring"
            )));
        }
        Ok(Self {
            c,
            provenance: TestElementProvenance::UserAsserted,
            asserted: false,
            square_root: None,
        })
    }

    /// The constant `1`, a test element of every regular ring.
    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self {
            c: ctx.ambient().one(),
            provenance: TestElementProvenance::UserAsserted,
            asserted: true,
            square_root: Some(ctx.ambient().one()),
        }
    }

    /// Records `c = d*d`; fails unless this holds exactly in `S`.
    pub fn with_square_root(mut self, d: Polynomial) -> Result<Self> {
        if &d * &d != self.c {
            return Err(Error::InvalidTestElement(format!(
                "{} is not the square of {d}",
                self.c
            )));
        }
        self.square_root = Some(d);
        Ok(self)
    }

    /// Looks for an exact square root of `c` and records it.
    pub fn detect_square(mut self) -> Result<Self> {
        match self.c.sqrt() {
            Some(d) => {
                self.square_root = Some(d);
                Ok(self)
            }
            None => Err(Error::InvalidTestElement(format!(
                "{} is not a square",
                self.c
            ))),
        }
    }

    pub fn c(&self) -> &Polynomial {
        &self.c
    }

    pub fn provenance(&self) -> TestElementProvenance {
        self.provenance
    }

    pub fn is_asserted(&self) -> bool {
        self.asserted
    }

    pub fn is_square(&self) -> bool {
        self.square_root.is_some()
    }

    pub fn square_root(&self) -> Option<&Polynomial> {
        self.square_root.as_ref()
    }
}

/// Nonzero partial derivatives of the defining polynomial of a hypersurface,
/// reduced modulo it.
pub fn jacobian_candidates(ctx: &Arc<RingContext>) -> Result<Vec<Polynomial>> {
    let [f] = ctx.defining_ideal() else {
        return Err(Error::NotHypersurface);
    };
    let zero = IdealHandle::zero(ctx);
    let mut out = Vec::new();
    for i in 0..ctx.nvars() {
        let d = zero.reduce(&f.derivative(i))?;
        if !d.is_zero() {
            out.push(d);
        }
    }
    Ok(out)
}

pub(crate) fn same_context(ideal: &IdealHandle, polys: &[&Polynomial]) -> Result<()> {
    for f in polys {
        if !f.ring().same_as(ideal.ring()) {
            return Err(Error::ContextMismatch);
        }
    }
    Ok(())
}

pub(crate) fn exponents(e_max: u32) -> Vec<u32> {
    (0..=e_max).collect()
}
