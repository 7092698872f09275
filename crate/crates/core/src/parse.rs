//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//! Whitespace is insignificant. Integer literals are reduced modulo p.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::PolyRing;

pub fn parse_poly(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if let Some(b'-') = self.peek() {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(-&inner);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let exp = self.exponent()?;
            if let Some(b'^') = self.peek() {
                return Err(self.error("chained exponents need parentheses"));
            }
            return raise(&base, exp).map_err(|_| Error::Syntax {
                pos: start,
                message: format!("exponent {exp} overflows the exponent range"),
            });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("malformed exponent: expected a non-negative integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse::<u32>().map_err(|_| Error::Syntax {
            pos: start,
            message: format!("malformed exponent `{digits}`"),
        })
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.ring.characteristic() as u64;
                let mut v = 0u64;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    v = (v * 10 + (self.src[self.pos] - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(Polynomial::constant(self.ring, v as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.index_of(name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(Error::UnknownVariable {
                        name: name.to_string(),
                        pos: start,
                    }),
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn raise(base: &Polynomial, exp: u32) -> Result<Polynomial> {
    if base.len() == 1 {
        let (m, c) = &base.terms()[0];
        let field = base.ring().field();
        let m: Monomial = m.checked_scale(exp)?;
        return Ok(Polynomial::monomial(
            base.ring(),
            m,
            field.pow(*c, exp as u64),
        ));
    }
    if base.total_degree().saturating_mul(exp as u64) > u32::MAX as u64 {
        return Err(Error::ExponentOverflow(format!(
            "degree {} * {exp}",
            base.total_degree()
        )));
    }
    Ok(base.pow(exp as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::monomial::MonomialOrder;
    use proptest::prelude::*;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(PrimeField::new(p).unwrap(), vars, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn simple_sum() {
        let r = ring(7, &["x", "y"]);
        let f = parse_poly("x^3*y + 2", &r).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.to_string(), "x^3*y + 2");
    }

    #[test]
    fn char_two_square() {
        let r = ring(2, &["x", "y"]);
        assert_eq!(parse_poly("(x+y)^2", &r).unwrap().to_string(), "x^2 + y^2");
    }

    #[test]
    fn example_defining_polynomial() {
        let r = ring(7, &["x", "y", "u", "v"]);
        let f = parse_poly("x^3*y^3 + u^3 + v^3", &r).unwrap();
        assert_eq!(f.to_string(), "x^3*y^3 + u^3 + v^3");
    }

    #[test]
    fn precedence_and_unary_minus() {
        let r = ring(7, &["x", "y"]);
        assert_eq!(parse_poly("-x^2", &r).unwrap().to_string(), "6*x^2");
        assert_eq!(parse_poly("2*x^2*3", &r).unwrap().to_string(), "6*x^2");
        assert_eq!(parse_poly(" x -  - y", &r).unwrap().to_string(), "x + y");
        assert_eq!(parse_poly("12", &r).unwrap().to_string(), "5");
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring(7, &["x", "y"]);
        assert_eq!(
            parse_poly("x + w", &r).unwrap_err(),
            Error::UnknownVariable {
                name: "w".into(),
                pos: 4
            }
        );
        assert!(matches!(
            parse_poly("x^", &r),
            Err(Error::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly("x^-1", &r),
            Err(Error::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly("x^99999999999", &r),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("(x+y", &r),
            Err(Error::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly("x y", &r),
            Err(Error::Syntax { pos: 2, .. })
        ));
        assert!(matches!(parse_poly("x^2^3", &r), Err(Error::Syntax { .. })));
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            (0u32..20).prop_map(|c| c.to_string()),
            Just("x".to_string()),
            Just("y".to_string()),
            Just("z".to_string()),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
                (inner.clone(), 0u32..3).prop_map(|(a, e)| format!("({a})^{e}")),
                inner.prop_map(|a| format!("-({a})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_is_a_fixed_point(src in arb_expr()) {
            let r = ring(5, &["x", "y", "z"]);
            let f = parse_poly(&src, &r).unwrap();
            let printed = f.to_string();
            let g = parse_poly(&printed, &r).unwrap();
            prop_assert_eq!(&f, &g);
            prop_assert_eq!(printed, g.to_string());
        }
    }
}
