//! Built-in fixture rings with tables of expected results.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::ideal::{bracket_power, colength, ideal_colon, IdealHandle};
use crate::lab::{
    clearing_check, colon_chain, frobenius_closure_test, jacobian_candidates, radical_chain_check,
    stable_radical_of, strong_test_certificate, tc_evidence, verify_certificate, ChainReport, Row,
    StableRadicalOutcome, TestElementDecl, TestElementProvenance, Verdict,
};
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{PolyRing, RingContext};

type ChainCache = HashMap<(String, String, String, u32), ChainReport>;

pub const FIXTURE_NAMES: [&str; 3] = ["fermat_cubic", "example_2_13", "regular"];

/// Where an expected value comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// A fact stated for this ring in the literature the fixture reproduces.
    Literature(String),
    /// Immediate from definitions.
    Trivial(String),
    /// Computed and cross-checked by the named independent method.
    Derived { oracle: String },
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Literature(_) => "literature",
            Provenance::Trivial(_) => "trivial",
            Provenance::Derived { .. } => "derived",
        }
    }

    pub fn note(&self) -> &str {
        match self {
            Provenance::Literature(s) | Provenance::Trivial(s) => s,
            Provenance::Derived { oracle } => oracle,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicalShape {
    Unit,
    Maximal,
}

#[derive(Clone, Debug)]
pub enum Expectation {
    Member {
        elem: String,
        ideal: String,
        expect: bool,
    },
    JacobianContains {
        test_element: String,
    },
    TcRows {
        elem: String,
        ideal: String,
        c: String,
        expect: Vec<bool>,
        verdict: Verdict,
    },
    FrobeniusRows {
        elem: String,
        ideal: String,
        expect: Vec<bool>,
    },
    BracketColength {
        ideal: String,
        e: u32,
        expect: u128,
    },
    ChainMonotone {
        ideal: String,
        x: String,
        c: String,
        e_max: u32,
    },
    StableRadical {
        ideal: String,
        x: String,
        c: String,
        e_max: u32,
        shape: RadicalShape,
        stabilized_at: u32,
    },
    Clearing {
        y: String,
        ideal: String,
        x: String,
        c: String,
        expect: Vec<bool>,
    },
    Certificate {
        elem: String,
        ideal: String,
        j: String,
    },
    /// `(I : x)^[q] = I^[q] : x^q` as reduced bases.
    BracketColon {
        ideal: String,
        x: String,
        e: u32,
    },
    /// With `c = 1`, every evidence row equals plain membership.
    TcIsMembership {
        elem: String,
        ideal: String,
        e_max: u32,
    },
}

#[derive(Clone, Debug)]
pub struct ExpectedEntry {
    pub label: String,
    pub check: Expectation,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub p: u32,
    pub ctx: Arc<RingContext>,
    pub dimension: u32,
    pub ideals: Vec<(String, IdealHandle)>,
    pub elements: Vec<(String, Polynomial)>,
    pub test_elements: Vec<(String, TestElementDecl)>,
    pub expected: Vec<ExpectedEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryOutcome {
    pub label: String,
    pub provenance: Provenance,
    pub passed: bool,
    pub observed: String,
    /// A resource cap was hit; `passed` is then false.
    pub limited: bool,
}

struct Builder {
    ctx: Arc<RingContext>,
    fixture: Fixture,
}

impl Builder {
    fn new(name: &str, p: u64, vars: &[&str], defining: &[&str], dimension: u32) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let ring = PolyRing::new(field, vars, MonomialOrder::Grevlex)?;
        let f = defining
            .iter()
            .map(|s| crate::parse::parse_poly(s, &ring))
            .collect::<Result<Vec<_>>>()?;
        let ctx = RingContext::quotient(ring, f)?;
        let fixture = Fixture {
            name: name.to_string(),
            p: field.characteristic(),
            ctx: Arc::clone(&ctx),
            dimension,
            ideals: Vec::new(),
            elements: Vec::new(),
            test_elements: Vec::new(),
            expected: Vec::new(),
        };
        Ok(Self { ctx, fixture })
    }

    fn ideal(&mut self, name: &str, gens: &[&str]) -> Result<()> {
        let gens = gens
            .iter()
            .map(|s| self.ctx.parse(s))
            .collect::<Result<Vec<_>>>()?;
        self.fixture
            .ideals
            .push((name.into(), IdealHandle::new(&self.ctx, gens)?));
        Ok(())
    }

    fn elem(&mut self, name: &str, text: &str) -> Result<()> {
        self.fixture
            .elements
            .push((name.into(), self.ctx.parse(text)?));
        Ok(())
    }

    fn test_element(
        &mut self,
        name: &str,
        text: &str,
        provenance: TestElementProvenance,
        square: bool,
    ) -> Result<()> {
        let mut decl = TestElementDecl::asserted(&self.ctx, self.ctx.parse(text)?, provenance)?;
        if square {
            decl = decl.detect_square()?;
        }
        self.fixture.test_elements.push((name.into(), decl));
        Ok(())
    }

    fn expect(&mut self, label: &str, check: Expectation, provenance: Provenance) {
        self.fixture.expected.push(ExpectedEntry {
            label: label.into(),
            check,
            provenance,
        });
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

fn derived(oracle: &str) -> Provenance {
    Provenance::Derived {
        oracle: oracle.into(),
    }
}

fn literature(note: &str) -> Provenance {
    Provenance::Literature(note.into())
}

fn trivial(note: &str) -> Provenance {
    Provenance::Trivial(note.into())
}

fn reject_three(p: u64, name: &str) -> Result<()> {
    if p == 3 {
        return Err(Error::Fixture(format!(
            "{name} requires characteristic different from 3"
        )));
    }
    Ok(())
}

/// `K[z,u,v]/(z^3+u^3+v^3)`, `I = (u,v)`, `c = u^2`.
pub fn fixture_fermat_cubic(p: u64) -> Result<Fixture> {
    reject_three(p, "fermat_cubic")?;
    let mut b = Builder::new("fermat_cubic", p, &["z", "u", "v"], &["z^3+u^3+v^3"], 2)?;
    // in characteristic 2, c = u^2 already lies in I^[2], so the first
    // informative row moves up by one
    let shift = u32::from(p == 2);
    b.ideal("I", &["u", "v"])?;
    b.ideal("m", &["z", "u", "v"])?;
    b.ideal("J", &["z", "u", "v"])?;
    b.elem("z", "z")?;
    b.elem("z2", "z^2")?;
    b.elem("z3", "z^3")?;
    b.test_element("c", "u^2", TestElementProvenance::JacobianDerived, true)?;
    b.expect(
        "u^2 is a unit multiple of a partial derivative",
        Expectation::JacobianContains {
            test_element: s("c"),
        },
        trivial("formal partials of z^3+u^3+v^3"),
    );
    b.expect(
        "z^3 lies in (u,v)",
        Expectation::Member {
            elem: s("z3"),
            ideal: s("I"),
            expect: true,
        },
        trivial("z^3 = -u^3 - v^3 in R"),
    );
    b.expect(
        "z does not lie in (u,v)",
        Expectation::Member {
            elem: s("z"),
            ideal: s("I"),
            expect: false,
        },
        trivial("degree one part of (u,v) + F"),
    );
    b.expect(
        "z^2 has tight-closure evidence in (u,v)",
        Expectation::TcRows { elem: s("z2"), ideal: s("I"), c: s("c"), expect: vec![true; 3], verdict: Verdict::MemberEvidence },
        literature("z^2 belongs to the tight closure of (u,v); rows cross-checked by dense linear algebra at q = p"),
    );
    b.expect(
        "determinantal certificate for z^2 over (u,v) with J = m",
        Expectation::Certificate { elem: s("z2"), ideal: s("I"), j: s("J") },
        derived("independent verifier: relations by multiplication, determinant by permutation expansion"),
    );
    b.expect(
        "radicals of the z-chain are nonincreasing",
        Expectation::ChainMonotone {
            ideal: s("I"),
            x: s("z"),
            c: s("c"),
            e_max: 2 + shift,
        },
        literature("radical monotonicity of I^[q] : c x^q for square test elements"),
    );
    b.expect(
        "the z^2-chain is the unit ideal from the start",
        Expectation::StableRadical {
            ideal: s("I"),
            x: s("z2"),
            c: s("c"),
            e_max: 1,
            shape: RadicalShape::Unit,
            stabilized_at: 0,
        },
        trivial("c z^2 = u^2 z^2 lies in (u,v)"),
    );
    b.expect(
        "the z-chain has stable radical m",
        Expectation::StableRadical {
            ideal: s("I"),
            x: s("z"),
            c: s("c"),
            e_max: 2 + shift,
            shape: RadicalShape::Maximal,
            stabilized_at: 1 + shift,
        },
        derived("engine run; m-primary rows confirmed by staircase counts"),
    );
    if let Some(len) = fermat_hk_length(p) {
        b.expect(
            "length of R/m^[p]",
            Expectation::BracketColength {
                ideal: s("m"),
                e: 1,
                expect: len,
            },
            derived("staircase count vs per-degree dense enumeration"),
        );
    }
    if p == 2 {
        b.expect(
            "z^2 in the Frobenius closure of (u,v)",
            Expectation::FrobeniusRows {
                elem: s("z2"),
                ideal: s("I"),
                expect: vec![false, true, true],
            },
            derived("dense linear algebra at q = 2, 4"),
        );
    }
    Ok(b.fixture)
}

/// `λ(R/m^[p])` for the Fermat cubic, for the characteristics whose value
/// the test suite cross-checks.
fn fermat_hk_length(p: u64) -> Option<u128> {
    match p {
        2 => Some(8),
        5 => Some(55),
        7 => Some(109),
        _ => None,
    }
}

/// `K[x,y,u,v]/(x^3 y^3 + u^3 + v^3)`, `I = (u,v,x^3)`.
pub fn fixture_example_2_13(p: u64) -> Result<Fixture> {
    reject_three(p, "example_2_13")?;
    let mut b = Builder::new(
        "example_2_13",
        p,
        &["x", "y", "u", "v"],
        &["x^3*y^3+u^3+v^3"],
        3,
    )?;
    let shift = u32::from(p == 2);
    b.ideal("I", &["u", "v", "x^3"])?;
    b.ideal("m", &["x", "y", "u", "v"])?;
    b.elem("x2y2", "x^2*y^2")?;
    b.elem("x2", "x^2")?;
    b.elem("x3", "x^3")?;
    b.elem("ux2", "u*x^2")?;
    b.elem("vx2", "v*x^2")?;
    b.elem("y2", "y^2")?;
    b.test_element("c1", "3*u^2", TestElementProvenance::JacobianDerived, false)?;
    b.test_element("csq", "u^2", TestElementProvenance::JacobianDerived, true)?;
    b.expect(
        "x^3 lies in I",
        Expectation::Member {
            elem: s("x3"),
            ideal: s("I"),
            expect: true,
        },
        trivial("generator"),
    );
    for (label, elem) in [
        ("u*x^2 lies in I", "ux2"),
        ("v*x^2 lies in I", "vx2"),
        ("x*x^2 lies in I", "x3"),
    ] {
        b.expect(
            label,
            Expectation::Member {
                elem: s(elem),
                ideal: s("I"),
                expect: true,
            },
            literature("multiplying x^2 by m into I; supports m being associated to R/I*"),
        );
    }
    b.expect(
        "3u^2 is a partial derivative",
        Expectation::JacobianContains {
            test_element: s("c1"),
        },
        literature("the partial derivatives include 3U^2 and 3V^2"),
    );
    b.expect(
        "x^2 y^2 has tight-closure evidence in I",
        Expectation::TcRows {
            elem: s("x2y2"),
            ideal: s("I"),
            c: s("c1"),
            expect: vec![true; 3],
            verdict: Verdict::MemberEvidence,
        },
        literature("x^2 y^2 is in the tight closure of (u,v); rows derived"),
    );
    b.expect(
        "x^2 is excluded from the tight closure of I",
        Expectation::TcRows {
            elem: s("x2"),
            ideal: s("I"),
            c: s("c1"),
            expect: if shift == 1 {
                vec![true, true, false]
            } else {
                vec![true, false]
            },
            verdict: Verdict::Excluded,
        },
        literature("x^2 is not in I*; failing row derived"),
    );
    b.expect(
        "radicals of the x^2-chain are nonincreasing",
        Expectation::ChainMonotone {
            ideal: s("I"),
            x: s("x2"),
            c: s("csq"),
            e_max: 2 + shift,
        },
        literature("radical monotonicity of I^[q] : c x^q for square test elements"),
    );
    b.expect(
        "stable radical of the x^2-chain is m",
        Expectation::StableRadical {
            ideal: s("I"),
            x: s("x2"),
            c: s("csq"),
            e_max: 2 + shift,
            shape: RadicalShape::Maximal,
            stabilized_at: 1 + shift,
        },
        derived("engine run; m-primary rows confirmed by staircase counts"),
    );
    b.expect(
        "y^2 clears the x^2-chain",
        Expectation::Clearing {
            y: s("y2"),
            ideal: s("I"),
            x: s("x2"),
            c: s("csq"),
            expect: vec![true; 3],
        },
        literature("x^2 y^2 lies in I*, so the chain of x^2 y^2 is the unit ideal"),
    );
    Ok(b.fixture)
}

/// `F_p[x_1..x_n]`, where tight closure is trivial.
pub fn fixture_regular(p: u64, n: usize) -> Result<Fixture> {
    if n == 0 {
        return Err(Error::Fixture(
            "regular fixture needs at least one variable".into(),
        ));
    }
    let names: Vec<String> = if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|v| v.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    };
    let vars: Vec<&str> = names.iter().map(|v| v.as_str()).collect();
    let mut b = Builder::new("regular", p, &vars, &[], n as u32)?;
    let x = vars[0];
    let y = vars.get(1).copied().unwrap_or(x);
    let i_gens = [format!("{x}^2"), format!("{x}*{y}^2")];
    b.ideal("I", &[&i_gens[0], &i_gens[1]])?;
    b.ideal("m", &vars)?;
    b.elem("x", x)?;
    b.elem("y", y)?;
    b.elem("xy", &format!("{x}*{y}"))?;
    b.elem("x2y", &format!("{x}^2*{y}"))?;
    let q = p as u128;
    for e in 1..=2u32 {
        let qe = q.pow(e);
        b.expect(
            &format!("length of R/m^[p^{e}] is p^{}", e as usize * n),
            Expectation::BracketColength {
                ideal: s("m"),
                e,
                expect: qe.pow(n as u32),
            },
            trivial("Frobenius is flat on a regular ring"),
        );
        b.expect(
            &format!("(I : x)^[p^{e}] = I^[p^{e}] : x^(p^{e})"),
            Expectation::BracketColon {
                ideal: s("I"),
                x: s("x"),
                e,
            },
            trivial("Frobenius is flat on a regular ring"),
        );
    }
    for elem in ["x", "xy", "x2y"] {
        b.expect(
            &format!("tight-closure rows of {elem} equal membership"),
            Expectation::TcIsMembership {
                elem: s(elem),
                ideal: s("I"),
                e_max: 2,
            },
            trivial("tight closure is the identity on a regular ring"),
        );
    }
    Ok(b.fixture)
}

/// Looks up a fixture by name; `regular` uses two variables.
pub fn fixture_by_name(name: &str, p: u64) -> Result<Fixture> {
    match name {
        "fermat_cubic" => fixture_fermat_cubic(p),
        "example_2_13" => fixture_example_2_13(p),
        "regular" => fixture_regular(p, 2),
        other => Err(Error::Fixture(format!(
            "unknown fixture `{other}`; known: {}",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

impl Fixture {
    pub fn ideal(&self, name: &str) -> Result<&IdealHandle> {
        lookup(&self.ideals, name, "ideal")
    }

    pub fn element(&self, name: &str) -> Result<&Polynomial> {
        lookup(&self.elements, name, "element")
    }

    pub fn test_element(&self, name: &str) -> Result<&TestElementDecl> {
        lookup(&self.test_elements, name, "test element")
    }

    /// Evaluates every expected entry in table order.
    pub fn run(&self) -> Result<Vec<EntryOutcome>> {
        let mut chains = ChainCache::new();
        self.expected
            .iter()
            .map(|entry| self.run_entry(entry, &mut chains))
            .collect()
    }

    fn chain(
        &self,
        cache: &mut ChainCache,
        ideal: &str,
        x: &str,
        c: &str,
        e_max: u32,
    ) -> Result<ChainReport> {
        let key = (ideal.to_string(), x.to_string(), c.to_string(), e_max);
        if let Some(rep) = cache.get(&key) {
            return Ok(rep.clone());
        }
        let rep = colon_chain(
            self.ideal(ideal)?,
            self.element(x)?,
            self.test_element(c)?,
            e_max,
        )?;
        cache.insert(key, rep.clone());
        Ok(rep)
    }

    fn run_entry(&self, entry: &ExpectedEntry, chains: &mut ChainCache) -> Result<EntryOutcome> {
        let outcome = |passed: bool, observed: String, limited: bool| EntryOutcome {
            label: entry.label.clone(),
            provenance: entry.provenance.clone(),
            passed: passed && !limited,
            observed,
            limited,
        };
        let result = self.evaluate(&entry.check, chains);
        match result {
            Ok((passed, observed, limited)) => Ok(outcome(passed, observed, limited)),
            Err(Error::ResourceLimit(msg)) => {
                Ok(outcome(false, format!("resource limit: {msg}"), true))
            }
            Err(err) => Err(err),
        }
    }

    fn evaluate(
        &self,
        check: &Expectation,
        chains: &mut ChainCache,
    ) -> Result<(bool, String, bool)> {
        match check {
            Expectation::Member {
                elem,
                ideal,
                expect,
            } => {
                let got = self.ideal(ideal)?.contains(self.element(elem)?)?;
                Ok((got == *expect, format!("member={got}"), false))
            }
            Expectation::JacobianContains { test_element } => {
                let jac = IdealHandle::new(&self.ctx, jacobian_candidates(&self.ctx)?)?;
                let got = jac.contains(self.test_element(test_element)?.c())?;
                Ok((got, format!("in_jacobian_ideal={got}"), false))
            }
            Expectation::TcRows {
                elem,
                ideal,
                c,
                expect,
                verdict,
            } => {
                let e_max = expect.len() as u32 - 1;
                let ev = tc_evidence(
                    self.element(elem)?,
                    self.ideal(ideal)?,
                    self.test_element(c)?,
                    e_max,
                    None,
                )?;
                let (rows, limited) = bool_rows(ev.rows.iter().map(|r| &r.holds));
                let passed = rows == expect.iter().map(|b| Some(*b)).collect::<Vec<_>>()
                    && ev.verdict == *verdict;
                Ok((
                    passed,
                    format!("rows={} verdict={}", show_rows(&rows), ev.verdict.name()),
                    limited,
                ))
            }
            Expectation::FrobeniusRows {
                elem,
                ideal,
                expect,
            } => {
                let e_max = expect.len() as u32 - 1;
                let fc = frobenius_closure_test(self.element(elem)?, self.ideal(ideal)?, e_max)?;
                let (rows, limited) = bool_rows(fc.rows.iter().map(|r| &r.holds));
                let passed =
                    rows == expect.iter().map(|b| Some(*b)).collect::<Vec<_>>() && fc.monotone;
                Ok((passed, format!("rows={}", show_rows(&rows)), limited))
            }
            Expectation::BracketColength { ideal, e, expect } => {
                let len = colength(&bracket_power(self.ideal(ideal)?, *e)?.handle)?;
                Ok((len == *expect, format!("length={len}"), false))
            }
            Expectation::ChainMonotone { ideal, x, c, e_max } => {
                let rep = self.chain(chains, ideal, x, c, *e_max)?;
                let limited = rep.rows.iter().any(|r| r.is_limited());
                let check = radical_chain_check(&rep)?;
                let units: Vec<bool> = rep.exact_rows().map(|r| r.is_unit).collect();
                Ok((
                    check.passed(),
                    format!("check={check:?} unit_rows={units:?}"),
                    limited,
                ))
            }
            Expectation::StableRadical {
                ideal,
                x,
                c,
                e_max,
                shape,
                stabilized_at,
            } => match stable_radical_of(&self.chain(chains, ideal, x, c, *e_max)?)? {
                StableRadicalOutcome::Stable(sr) => {
                    let got = if sr.is_unit()? {
                        Some(RadicalShape::Unit)
                    } else if sr.exact && sr.radical.same_ideal(&IdealHandle::maximal(&self.ctx))? {
                        Some(RadicalShape::Maximal)
                    } else {
                        None
                    };
                    let passed = got == Some(*shape) && sr.stabilized_at == *stabilized_at;
                    Ok((
                        passed,
                        format!("radical={got:?} stabilized_at={}", sr.stabilized_at),
                        false,
                    ))
                }
                StableRadicalOutcome::NotStabilized { e_max } => {
                    Ok((false, format!("not stabilized within e_max={e_max}"), false))
                }
            },
            Expectation::Clearing {
                y,
                ideal,
                x,
                c,
                expect,
            } => {
                let e_max = expect.len() as u32 - 1;
                let rows = clearing_check(
                    self.element(y)?,
                    self.ideal(ideal)?,
                    self.element(x)?,
                    self.test_element(c)?,
                    0..=e_max,
                )?;
                let (rows, limited) = bool_rows(rows.iter().map(|(_, r)| r));
                let passed = rows == expect.iter().map(|b| Some(*b)).collect::<Vec<_>>();
                Ok((passed, format!("rows={}", show_rows(&rows)), limited))
            }
            Expectation::Certificate { elem, ideal, j } => {
                let j_gens = self.ideal(j)?.generators().to_vec();
                let cert =
                    strong_test_certificate(self.element(elem)?, self.ideal(ideal)?, &j_gens)?;
                let verified = verify_certificate(&cert).is_ok();
                Ok((
                    cert.valid && verified,
                    format!("valid={} verified={verified}", cert.valid),
                    false,
                ))
            }
            Expectation::BracketColon { ideal, x, e } => {
                let i = self.ideal(ideal)?;
                let x = self.element(x)?;
                let lhs = bracket_power(&ideal_colon(i, x)?, *e)?.handle;
                let rhs = ideal_colon(&bracket_power(i, *e)?.handle, &x.frobenius_pow(*e)?)?;
                let equal = lhs.same_ideal(&rhs)?;
                Ok((equal, format!("equal={equal}"), false))
            }
            Expectation::TcIsMembership { elem, ideal, e_max } => {
                let i = self.ideal(ideal)?;
                let u = self.element(elem)?;
                let member = i.contains(u)?;
                let ev = tc_evidence(u, i, &TestElementDecl::one(&self.ctx), *e_max, None)?;
                let (rows, limited) = bool_rows(ev.rows.iter().map(|r| &r.holds));
                let passed = rows.iter().all(|r| *r == Some(member));
                Ok((
                    passed,
                    format!("member={member} rows={}", show_rows(&rows)),
                    limited,
                ))
            }
        }
    }

    /// The fixture in the line-oriented session format of the command line tool.
    pub fn to_session_text(&self) -> String {
        let mut out = String::new();
        let ring = self.ctx.ambient();
        let _ = writeln!(out, "# fixture {} (p = {})", self.name, self.p);
        let _ = writeln!(out, "char: {}", self.p);
        let _ = writeln!(out, "vars: {}", ring.variables().join(", "));
        let _ = writeln!(out, "order: {}", ring.order());
        for f in self.ctx.defining_ideal() {
            let _ = writeln!(out, "mod: {f}");
        }
        let _ = writeln!(out, "dim: {}", self.dimension);
        for (name, ideal) in &self.ideals {
            let gens: Vec<String> = ideal.generators().iter().map(|g| g.to_string()).collect();
            let _ = writeln!(out, "ideal {name}: {}", gens.join(", "));
        }
        for (name, f) in &self.elements {
            let _ = writeln!(out, "elem {name}: {f}");
        }
        for (name, t) in &self.test_elements {
            let square = if t.is_square() { " square" } else { "" };
            let prov = match t.provenance() {
                TestElementProvenance::UserAsserted => "asserted",
                TestElementProvenance::JacobianDerived => "jacobian",
            };
            let _ = writeln!(out, "testelem {name}: {}{square} {prov}", t.c());
        }
        out
    }
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str, kind: &str) -> Result<&'a T> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v)
        .ok_or_else(|| Error::Fixture(format!("fixture has no {kind} named `{name}`")))
}

fn bool_rows<'a>(rows: impl Iterator<Item = &'a Row<bool>>) -> (Vec<Option<bool>>, bool) {
    let mut limited = false;
    let out = rows
        .map(|r| {
            limited |= r.is_limited();
            r.exact().copied()
        })
        .collect();
    (out, limited)
}

fn show_rows(rows: &[Option<bool>]) -> String {
    let parts: Vec<&str> = rows
        .iter()
        .map(|r| match r {
            Some(true) => "T",
            Some(false) => "F",
            None => "?",
        })
        .collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_three_is_rejected() {
        assert!(matches!(fixture_fermat_cubic(3), Err(Error::Fixture(_))));
        assert!(matches!(fixture_example_2_13(3), Err(Error::Fixture(_))));
        assert!(fixture_fermat_cubic(7).is_ok());
    }

    #[test]
    fn every_entry_has_provenance_note() {
        for name in FIXTURE_NAMES {
            let f = fixture_by_name(name, 5).unwrap();
            assert!(!f.expected.is_empty());
            assert!(f.expected.iter().all(|e| !e.provenance.note().is_empty()));
        }
    }

    #[test]
    fn regular_table_passes() {
        for p in [2, 3, 5] {
            for n in 1..=3 {
                let f = fixture_regular(p, n).unwrap();
                for out in f.run().unwrap() {
                    assert!(out.passed, "p={p} n={n}: {} -> {}", out.label, out.observed);
                }
            }
        }
    }

    #[test]
    fn session_text_lists_everything() {
        let text = fixture_fermat_cubic(7).unwrap().to_session_text();
        assert!(text.contains("char: 7"));
        assert!(text.contains("mod: z^3 + u^3 + v^3"));
        assert!(text.contains("testelem c: u^2 square jacobian"));
    }
}
