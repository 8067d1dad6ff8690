//! Reading and printing field elements.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := atom ("^" nat)?
//! atom   := var | nat | "(" expr ")"
//! ```
//! A leading "-" on an expression is also accepted.

use super::poly::SparsePoly;
use super::{FieldError, RatField, RatFunc};

/// A field together with printable variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Notation {
    field: RatField,
    names: Vec<String>,
}

const DEFAULT_NAMES: [&str; 3] = ["t", "u", "v"];

impl Notation {
    pub fn new(field: RatField, names: Vec<String>) -> Result<Self, FieldError> {
        if names.len() != field.nvars() {
            return Err(FieldError::ArityMismatch {
                expected: field.nvars(),
                got: names.len(),
            });
        }
        Ok(Notation { field, names })
    }

    /// Variables named t, u, v in order.
    pub fn standard(field: RatField) -> Self {
        let names = DEFAULT_NAMES[..field.nvars()]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Notation { field, names }
    }

    pub fn field(&self) -> RatField {
        self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parse(&self, s: &str) -> Result<RatFunc, FieldError> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            ctx: self,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(v)
    }

    pub fn parse_all(&self, items: &[String]) -> Result<Vec<RatFunc>, FieldError> {
        items.iter().map(|s| self.parse(s)).collect()
    }

    pub fn render(&self, x: &RatFunc) -> String {
        let num = self.render_poly(x.num());
        if x.is_polynomial() {
            return num;
        }
        let num = if x.num().terms().len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den_atomic = x.den().terms().len() == 1 && {
            let (m, c) = x.den().terms()[0];
            c == 1 && m.0.iter().filter(|&&e| e > 0).count() <= 1
        };
        let den = self.render_poly(x.den());
        if den_atomic {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }

    fn render_poly(&self, f: &SparsePoly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = f
            .terms()
            .iter()
            .map(|&(m, c)| {
                let vars: Vec<String> = (0..self.field.nvars())
                    .filter(|&j| m.0[j] > 0)
                    .map(|j| match m.0[j] {
                        1 => self.names[j].clone(),
                        e => format!("{}^{e}", self.names[j]),
                    })
                    .collect();
                match (c, vars.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => vars.join("*"),
                    _ => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        terms.join("+")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a Notation,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> FieldError {
        FieldError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn expr(&mut self) -> Result<RatFunc, FieldError> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, FieldError> {
        let mut acc = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.factor()?;
            acc = if op == b'*' {
                &acc * &rhs
            } else {
                acc.try_div(&rhs).map_err(|_| FieldError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc, FieldError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.nat()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<u64, FieldError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| FieldError::Parse {
                pos: start,
                msg: "number too large".into(),
            })
    }

    fn atom(&mut self) -> Result<RatFunc, FieldError> {
        let k = self.ctx.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                Ok(k.constant((n % k.p() as u64) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ctx.names.iter().position(|n| n == name) {
                    Some(i) => Ok(k.var(i)),
                    None => Err(FieldError::Parse {
                        pos: start,
                        msg: format!("unknown variable '{name}'"),
                    }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nt(p: u32, n: usize) -> Notation {
        Notation::standard(RatField::new(p, n).unwrap())
    }

    #[test]
    fn parses_polynomial() {
        let c = nt(2, 2);
        let k = c.field();
        let x = c.parse("t^2+u").unwrap();
        assert_eq!(x, &k.var(0).pow(2) + &k.var(1));
        assert_eq!(c.render(&x), "t^2+u");
    }

    #[test]
    fn parses_and_reduces_fractions() {
        let c = nt(2, 3);
        let x = c.parse("(1+t)/(u*v)").unwrap();
        assert_eq!(c.render(&x), "(t+1)/(u*v)");
        assert!(c.parse("t/(t)").unwrap().is_one());
        assert_eq!(c.parse(&c.render(&x)).unwrap(), x);
    }

    #[test]
    fn error_positions() {
        let c = nt(2, 2);
        assert_eq!(
            c.parse("t+").unwrap_err(),
            FieldError::Parse {
                pos: 2,
                msg: "unexpected end of input".into()
            }
        );
        assert!(matches!(
            c.parse("t+w"),
            Err(FieldError::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            c.parse("1/(t+t)"),
            Err(FieldError::Parse { pos: 2, .. })
        ));
        assert!(matches!(c.parse("(t"), Err(FieldError::Parse { .. })));
        assert!(matches!(
            c.parse("t)"),
            Err(FieldError::Parse { pos: 1, .. })
        ));
    }

    #[test]
    fn char3_coefficients_render_in_range() {
        let c = Notation::new(RatField::new(3, 2).unwrap(), vec!["s".into(), "v".into()]).unwrap();
        let x = c.parse("-s*v + 4").unwrap();
        assert_eq!(c.render(&x), "2*s*v+1");
        let y = c.parse("1/(2*s)").unwrap();
        assert_eq!(c.render(&y), "2/s");
        assert_eq!(c.parse(&c.render(&y)).unwrap(), y);
    }
}
