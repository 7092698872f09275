//! Line-oriented session files.
//!
//! ```text
//! char: 7
//! vars: z, u, v
//! order: grevlex
//! mod: z^3 + u^3 + v^3
//! dim: 2
//! ideal I: u, v
//! elem z2: z^2
//! testelem c: u^2 square jacobian
//! ```
//! Header lines come first; `mod:` may repeat. `#` starts a comment line.

use std::collections::HashSet;
use std::sync::Arc;

use frobenius_core::lab::{TestElementDecl, TestElementProvenance};
use frobenius_core::{
    GbLimits, IdealHandle, MonomialOrder, PolyRing, Polynomial, PrimeField, RingContext,
};

use crate::error::{CliError, CliResult};

pub struct Session {
    pub ctx: Arc<RingContext>,
    pub dimension: Option<u32>,
    pub ideals: Vec<(String, IdealHandle)>,
    pub elements: Vec<(String, Polynomial)>,
    pub test_elements: Vec<(String, TestElementDecl)>,
}

#[derive(Default)]
struct Header {
    p: Option<u64>,
    vars: Option<Vec<String>>,
    order: Option<MonomialOrder>,
    defining: Vec<(usize, String)>,
    dim: Option<u32>,
}

fn err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("line {line}: {msg}"))
}

fn engine_err(line: usize, what: String, e: frobenius_core::Error) -> CliError {
    match e {
        frobenius_core::Error::ResourceLimit(_) => {
            CliError::Limit(format!("line {line}: {what}: {e}"))
        }
        other => err(line, format!("{what}: {other}")),
    }
}

impl Header {
    fn build(&self, line: usize, limits: GbLimits) -> CliResult<Arc<RingContext>> {
        let p = self
            .p
            .ok_or_else(|| err(line, "missing `char:` before first declaration"))?;
        let vars = self
            .vars
            .as_ref()
            .ok_or_else(|| err(line, "missing `vars:` before first declaration"))?;
        let field = PrimeField::new(p).map_err(|e| err(line, e))?;
        let ring = PolyRing::new(field, vars, self.order.unwrap_or(MonomialOrder::Grevlex))
            .map_err(|e| err(line, e))?;
        let mut defining = Vec::new();
        for (l, text) in &self.defining {
            defining.push(
                frobenius_core::parse_poly(text, &ring)
                    .map_err(|e| err(*l, format!("in `mod: {text}`: {e}")))?,
            );
        }
        let ctx = if defining.is_empty() {
            RingContext::polynomial_ring(ring)
        } else {
            RingContext::quotient(ring, defining).map_err(|e| err(line, e))?
        };
        Ok(ctx.with_limits(limits))
    }
}

const FLAGS: [&str; 3] = ["square", "asserted", "jacobian"];

impl Session {
    pub fn parse(text: &str, limits: GbLimits) -> CliResult<Self> {
        let mut header = Header::default();
        let mut session: Option<Session> = None;
        let mut names = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, rest)) = line.split_once(':') else {
                return Err(err(
                    line_no,
                    format!("expected `key: value`, found `{line}`"),
                ));
            };
            let rest = rest.trim();
            let mut words = key.split_whitespace();
            let kind = words.next().unwrap_or("");
            let name = words.next();
            if words.next().is_some() {
                return Err(err(line_no, format!("malformed key `{key}`")));
            }
            match (kind, name) {
                ("char" | "vars" | "order" | "mod" | "dim", None) => {
                    if session.is_some() {
                        return Err(err(
                            line_no,
                            format!("`{kind}:` must precede all declarations"),
                        ));
                    }
                    header.set(kind, rest, line_no)?;
                }
                ("ideal" | "elem" | "testelem", Some(name)) => {
                    if !names.insert(name.to_string()) {
                        return Err(err(line_no, format!("name `{name}` is declared twice")));
                    }
                    if session.is_none() {
                        let ctx = header.build(line_no, limits)?;
                        session = Some(Session {
                            ctx,
                            dimension: header.dim,
                            ideals: Vec::new(),
                            elements: Vec::new(),
                            test_elements: Vec::new(),
                        });
                    }
                    let s = session.as_mut().expect("just built");
                    s.declare(kind, name, rest, line_no)?;
                }
                (_, Some(_)) | (_, None) => {
                    return Err(err(line_no, format!("unknown key `{key}`")));
                }
            }
        }
        match session {
            Some(s) => Ok(s),
            None => {
                let ctx = header.build(text.lines().count().max(1), limits)?;
                Ok(Session {
                    ctx,
                    dimension: header.dim,
                    ideals: Vec::new(),
                    elements: Vec::new(),
                    test_elements: Vec::new(),
                })
            }
        }
    }

    fn poly(&self, text: &str, line: usize) -> CliResult<Polynomial> {
        self.ctx
            .parse(text)
            .map_err(|e| err(line, format!("in `{text}`: {e}")))
    }

    fn declare(&mut self, kind: &str, name: &str, rest: &str, line: usize) -> CliResult<()> {
        match kind {
            "ideal" => {
                let mut gens = Vec::new();
                for part in rest.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        if rest.trim().is_empty() {
                            break;
                        }
                        return Err(err(line, format!("empty generator in ideal `{name}`")));
                    }
                    gens.push(self.poly(part, line)?);
                }
                let ideal = IdealHandle::new(&self.ctx, gens).map_err(|e| err(line, e))?;
                self.ideals.push((name.to_string(), ideal));
            }
            "elem" => {
                let f = self.poly(rest, line)?;
                self.elements.push((name.to_string(), f));
            }
            _ => {
                let mut words: Vec<&str> = rest.split_whitespace().collect();
                let mut flags = Vec::new();
                while let Some(w) = words.last() {
                    if FLAGS.contains(w) {
                        flags.push(*w);
                        words.pop();
                    } else {
                        break;
                    }
                }
                let c = self.poly(&words.join(" "), line)?;
                let has = |f: &str| flags.contains(&f);
                if has("asserted") && has("jacobian") {
                    return Err(err(line, "use one of `asserted` or `jacobian`, not both"));
                }
                let decl = if has("jacobian") {
                    TestElementDecl::asserted(&self.ctx, c, TestElementProvenance::JacobianDerived)
                } else if has("asserted") {
                    TestElementDecl::asserted(&self.ctx, c, TestElementProvenance::UserAsserted)
                } else {
                    TestElementDecl::candidate(&self.ctx, c)
                }
                .map_err(|e| engine_err(line, format!("test element `{name}`"), e))?;
                let decl = if has("square") {
                    decl.detect_square()
                        .map_err(|e| err(line, format!("test element `{name}`: {e}")))?
                } else {
                    decl
                };
                self.test_elements.push((name.to_string(), decl));
            }
        }
        Ok(())
    }

    pub fn ideal(&self, name: &str) -> CliResult<&IdealHandle> {
        lookup(&self.ideals, name, "ideal")
    }

    pub fn element(&self, name: &str) -> CliResult<&Polynomial> {
        lookup(&self.elements, name, "element")
    }

    pub fn test_element(&self, name: &str) -> CliResult<&TestElementDecl> {
        lookup(&self.test_elements, name, "test element")
    }
}

impl Header {
    fn set(&mut self, kind: &str, value: &str, line: usize) -> CliResult<()> {
        let dup = |present: bool| {
            if present {
                Err(err(line, format!("`{kind}:` given twice")))
            } else {
                Ok(())
            }
        };
        match kind {
            "char" => {
                dup(self.p.is_some())?;
                let p = value.parse::<u64>().map_err(|_| {
                    err(line, format!("characteristic `{value}` is not an integer"))
                })?;
                PrimeField::new(p).map_err(|e| err(line, e))?;
                self.p = Some(p);
            }
            "vars" => {
                dup(self.vars.is_some())?;
                let vars: Vec<String> = value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                if let Some(v) = vars.iter().find(|v| FLAGS.contains(&v.as_str())) {
                    return Err(err(
                        line,
                        format!("`{v}` is reserved and cannot name a variable"),
                    ));
                }
                self.vars = Some(vars);
            }
            "order" => {
                dup(self.order.is_some())?;
                self.order = Some(match value {
                    "grevlex" => MonomialOrder::Grevlex,
                    "lex" => MonomialOrder::Lex,
                    other => {
                        return Err(err(
                            line,
                            format!("unknown order `{other}` (lex or grevlex)"),
                        ))
                    }
                });
            }
            "mod" => self.defining.push((line, value.to_string())),
            _ => {
                dup(self.dim.is_some())?;
                self.dim =
                    Some(value.parse().map_err(|_| {
                        err(line, format!("dimension `{value}` is not an integer"))
                    })?);
            }
        }
        Ok(())
    }
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str, kind: &str) -> CliResult<&'a T> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v)
        .ok_or_else(|| CliError::Input(format!("session has no {kind} named `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FERMAT: &str = "char: 7\nvars: z, u, v\nmod: z^3+u^3+v^3\ndim: 2\nideal I: u, v\nelem z2: z^2\ntestelem c: u^2 square jacobian\n";

    #[test]
    fn parses_fermat_session() {
        let s = Session::parse(FERMAT, GbLimits::default()).unwrap();
        assert_eq!(s.ctx.characteristic(), 7);
        assert_eq!(s.dimension, Some(2));
        assert_eq!(s.ideal("I").unwrap().generators().len(), 2);
        let c = s.test_element("c").unwrap();
        assert!(c.is_square() && c.is_asserted());
        assert_eq!(c.provenance(), TestElementProvenance::JacobianDerived);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = FERMAT.replace("elem z2: z^2", "elem z2: z^^2");
        let e = Session::parse(&bad, GbLimits::default()).err().unwrap();
        assert!(e.to_string().starts_with("line 6:"), "{e}");
        let e = Session::parse("char: 6\nvars: x\n", GbLimits::default())
            .err()
            .unwrap();
        assert!(e.to_string().contains("line 1"), "{e}");
        let e = Session::parse("char: 5\nvars: x\nelem a: w\n", GbLimits::default())
            .err()
            .unwrap();
        assert!(e.to_string().contains("`w`"), "{e}");
        let e = Session::parse(
            "char: 5\nvars: x\nelem a: x\nideal a: x\n",
            GbLimits::default(),
        )
        .err()
        .unwrap();
        assert!(e.to_string().contains("twice"), "{e}");
        let e = Session::parse("char: 5\nvars: x\nelem a: x\ndim: 1\n", GbLimits::default())
            .err()
            .unwrap();
        assert!(e.to_string().contains("precede"), "{e}");
    }

    #[test]
    fn test_element_flags_are_checked() {
        let bad = FERMAT.replace("u^2 square jacobian", "3*u^2 square asserted");
        assert!(Session::parse(&bad, GbLimits::default()).is_err());
        let bad = FERMAT.replace("u^2 square jacobian", "z+u jacobian");
        assert!(Session::parse(&bad, GbLimits::default()).is_err());
        let plain = FERMAT.replace("u^2 square jacobian", "u^2");
        let s = Session::parse(&plain, GbLimits::default()).unwrap();
        assert!(!s.test_element("c").unwrap().is_asserted());
    }
}
