//! JSON reports. Key order is fixed by construction; integers stay integers
//! and rationals are rendered as `"a/b"` strings.

use std::fmt::Display;

use frobenius_core::lab::{Row, TestElementDecl};
use frobenius_core::{GbLimits, IdealHandle, Polynomial, Ratio, RingContext};
use serde_json::{json, Map, Value};

pub const ENGINE: &str = "froblab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const LOCAL_SCOPE: &str = "global, and localized at the homogeneous maximal ideal only";

pub struct Report {
    command: Vec<String>,
    inputs: Vec<Value>,
    ring: Option<Value>,
    limits: Option<GbLimits>,
    scope: Option<&'static str>,
    notes: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            ring: None,
            limits: None,
            scope: None,
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, value: Value) {
        self.inputs.push(value);
    }

    pub fn ring(&mut self, ctx: &RingContext, dimension: Option<u32>) {
        let ring = ctx.ambient();
        self.ring = Some(json!({
            "characteristic": ctx.characteristic(),
            "variables": ring.variables(),
            "order": ring.order().name(),
            "defining": ctx.defining_ideal().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "dimension": dimension,
        }));
        self.limits = Some(*ctx.limits());
    }

    pub fn localized(&mut self) {
        self.scope = Some(LOCAL_SCOPE);
    }

    /// Renders a sweep row, recording resource-limit notes.
    pub fn row<T>(
        &mut self,
        e: u32,
        q: Option<u32>,
        row: &Row<T>,
        value: impl FnOnce(&T) -> Value,
    ) -> Value {
        let mut m = Map::new();
        m.insert("e".into(), json!(e));
        if let Some(q) = q {
            m.insert("q".into(), json!(q));
        }
        match row {
            Row::Exact(v) => {
                m.insert("status".into(), json!("exact"));
                m.insert("value".into(), value(v));
            }
            Row::Limited(msg) => {
                m.insert("status".into(), json!("limited"));
                m.insert("note".into(), json!(msg));
                self.notes.push(format!("row e={e}: {msg}"));
            }
            Row::Unavailable(msg) => {
                m.insert("status".into(), json!("unavailable"));
                m.insert("note".into(), json!(msg));
            }
        }
        Value::Object(m)
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn finish(self, result: Value) -> Value {
        let mut m = Map::new();
        m.insert(
            "engine".into(),
            json!({ "name": ENGINE, "version": VERSION }),
        );
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), Value::Array(self.inputs));
        if let Some(ring) = self.ring {
            m.insert("ring".into(), ring);
        }
        if let Some(l) = self.limits {
            m.insert(
                "limits".into(),
                json!({
                    "max_basis": l.max_basis,
                    "max_degree": l.max_degree,
                    "row_seconds": l.row_timeout.map(|d| d.as_secs()),
                }),
            );
        }
        if let Some(scope) = self.scope {
            m.insert("scope".into(), json!(scope));
        }
        m.insert("result".into(), result);
        m.insert("limited".into(), json!(!self.notes.is_empty()));
        m.insert("notes".into(), json!(self.notes));
        Value::Object(m)
    }
}

pub fn error_report(command: Vec<String>, kind: &str, code: u8, message: &str) -> Value {
    json!({
        "engine": { "name": ENGINE, "version": VERSION },
        "command": command,
        "error": { "kind": kind, "exit_code": code, "message": message },
    })
}

pub fn poly(f: &Polynomial) -> Value {
    json!(f.to_string())
}

pub fn polys<'a>(fs: impl IntoIterator<Item = &'a Polynomial>) -> Value {
    Value::Array(fs.into_iter().map(poly).collect())
}

pub fn ideal(name: Option<&str>, i: &IdealHandle) -> Value {
    let mut m = Map::new();
    if let Some(n) = name {
        m.insert("name".into(), json!(n));
    }
    m.insert("generators".into(), polys(i.generators()));
    Value::Object(m)
}

pub fn ratio<T: Display>(r: &Ratio<T>) -> Value {
    json!(format!("{}/{}", r.numer(), r.denom()))
}

pub fn test_element(name: &str, c: &TestElementDecl) -> Value {
    json!({
        "name": name,
        "c": c.c().to_string(),
        "provenance": c.provenance().name(),
        "asserted": c.is_asserted(),
        "square_root": c.square_root().map(|d| d.to_string()),
    })
}

pub fn bool_row(holds: &bool) -> Value {
    json!(holds)
}
