//! Polynomial rings `S = F_p[x_1..x_n]` and quotient contexts `R = S/F`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::limits::GbLimits;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;

/// The ambient polynomial ring: field, ordered variable names, monomial order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyRing {
    field: PrimeField,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(
        field: PrimeField,
        vars: &[S],
        order: MonomialOrder,
    ) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        if vars.is_empty() {
            return Err(Error::InvalidRing(
                "at least one variable is required".into(),
            ));
        }
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!(
                    "`{v}` is not a valid variable name"
                )));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let MonomialOrder::Elimination(k) = order {
            if k == 0 || k > vars.len() {
                return Err(Error::InvalidRing(format!(
                    "elimination block {k} out of range"
                )));
            }
        }
        Ok(Arc::new(Self { field, vars, order }))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same field and variables, different monomial order.
    pub fn with_order(self: &Arc<Self>, order: MonomialOrder) -> Arc<Self> {
        if self.order == order {
            return Arc::clone(self);
        }
        Arc::new(Self {
            field: self.field,
            vars: self.vars.clone(),
            order,
        })
    }

    /// Prepends fresh variables (named to avoid clashes) under the given order.
    pub(crate) fn extend_front(&self, base: &str, count: usize, order: MonomialOrder) -> Arc<Self> {
        let mut vars = self.fresh_names(base, count);
        vars.extend(self.vars.iter().cloned());
        Arc::new(Self {
            field: self.field,
            vars,
            order,
        })
    }

    pub(crate) fn extend_back(&self, base: &str, count: usize, order: MonomialOrder) -> Arc<Self> {
        let mut vars = self.vars.clone();
        vars.extend(self.fresh_names(base, count));
        Arc::new(Self {
            field: self.field,
            vars,
            order,
        })
    }

    fn fresh_names(&self, base: &str, count: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(count);
        let mut k = 0usize;
        while out.len() < count {
            let name = if k == 0 && count == 1 {
                base.to_string()
            } else {
                format!("{base}{k}")
            };
            k += 1;
            if !self.vars.contains(&name) && !out.contains(&name) {
                out.push(name);
            }
        }
        out
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial::zero(self)
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        Polynomial::constant(self, 1)
    }

    /// The variable `x_i` as a polynomial.
    pub fn var(self: &Arc<Self>, index: usize) -> Polynomial {
        Polynomial::monomial(self, Monomial::variable(self.nvars(), index, 1), 1)
    }

    /// All variables as polynomials, in ring order; they generate `m`.
    pub fn variables_as_polys(self: &Arc<Self>) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}] ({})",
            self.field,
            self.vars.join(","),
            self.order
        )
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A ring `R = S/F` presented by its ambient polynomial ring and the
/// generators of the defining ideal `F` (empty for `R = S`).
#[derive(Clone, Debug)]
pub struct RingContext {
    ambient: Arc<PolyRing>,
    defining: Vec<Polynomial>,
    limits: GbLimits,
}

impl RingContext {
    pub fn polynomial_ring(ambient: Arc<PolyRing>) -> Arc<Self> {
        Arc::new(Self {
            ambient,
            defining: Vec::new(),
            limits: GbLimits::default(),
        })
    }

    pub fn quotient(ambient: Arc<PolyRing>, defining: Vec<Polynomial>) -> Result<Arc<Self>> {
        for f in &defining {
            if !f.ring().same_as(&ambient) {
                return Err(Error::ContextMismatch);
            }
        }
        let defining: Vec<Polynomial> = defining.into_iter().filter(|f| !f.is_zero()).collect();
        if defining.iter().any(|f| f.is_constant()) {
            return Err(Error::InvalidRing(
                "defining ideal is the unit ideal".into(),
            ));
        }
        Ok(Arc::new(Self {
            ambient,
            defining,
            limits: GbLimits::default(),
        }))
    }

    /// Same ring with different resource caps.
    pub fn with_limits(&self, limits: GbLimits) -> Arc<Self> {
        Arc::new(Self {
            ambient: Arc::clone(&self.ambient),
            defining: self.defining.clone(),
            limits,
        })
    }

    pub fn limits(&self) -> &GbLimits {
        &self.limits
    }

    #[inline]
    pub fn ambient(&self) -> &Arc<PolyRing> {
        &self.ambient
    }

    pub fn defining_ideal(&self) -> &[Polynomial] {
        &self.defining
    }

    pub fn is_quotient(&self) -> bool {
        !self.defining.is_empty()
    }

    pub fn characteristic(&self) -> u32 {
        self.ambient.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn same_as(&self, other: &RingContext) -> bool {
        self.ambient.same_as(&other.ambient) && self.defining == other.defining
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        crate::parse::parse_poly(text, &self.ambient)
    }

    pub fn var(&self, name: &str) -> Option<Polynomial> {
        self.ambient.index_of(name).map(|i| self.ambient.var(i))
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ambient)?;
        if self.is_quotient() {
            let gens: Vec<String> = self.defining.iter().map(|g| g.to_string()).collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_and_bad_names() {
        let f = PrimeField::new(5).unwrap();
        assert!(PolyRing::new(f, &["x", "x"], MonomialOrder::Grevlex).is_err());
        assert!(PolyRing::new(f, &["x", "2y"], MonomialOrder::Grevlex).is_err());
        assert!(PolyRing::new::<&str>(f, &[], MonomialOrder::Grevlex).is_err());
    }

    #[test]
    fn fresh_names_avoid_clashes() {
        let f = PrimeField::new(5).unwrap();
        let r = PolyRing::new(f, &["t", "x"], MonomialOrder::Grevlex).unwrap();
        let e = r.extend_front("t", 1, MonomialOrder::Elimination(1));
        assert_eq!(e.variables(), &["t1", "t", "x"]);
    }
}
