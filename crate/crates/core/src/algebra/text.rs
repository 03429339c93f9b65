//! Plain-text operator syntax.
//!
//! ```text
//! expr    := "0" | term (("+" | "-") term)*
//! term    := [coeff ["·" | "*"]] (factor+ | "1")
//! coeff   := "(" real [("+" | "-") real "i"] ")"
//! factor  := ("b" | "d") ("+" | "-") "(" spin "," nx "," ny "," nz ")"
//! ```
//!
//! `b+`/`b-` are electron creation/annihilation, `d+`/`d-` the positron
//! ones. Printing uses the shortest round-trip float representation, so
//! `parse(print(A))` reproduces every finite coefficient bit for bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::expr::{OperatorExpr, Term};
use super::mode::{Ladder, LadderKind, Mode, Species};
use crate::error::{Error, Result};

fn write_coeff(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    write!(f, "({:?}{sign}{:?}i)", c.re, c.im.abs())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coeff(f, self.coeff)?;
        f.write_str("·")?;
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms().iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for OperatorExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

pub fn parse_expr(s: &str) -> Result<OperatorExpr> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.peek() == Some(b'0') {
        let save = p.pos;
        p.pos += 1;
        p.skip_ws();
        if p.at_end() {
            return Ok(OperatorExpr::zero());
        }
        p.pos = save;
    }
    let mut terms = vec![p.term()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                terms.push(p.term()?);
            }
            Some(b'-') => {
                p.pos += 1;
                let mut t = p.term()?;
                t.coeff = -t.coeff;
                terms.push(t);
            }
            Some(_) => return Err(p.error("expected '+', '-' or end of input")),
        }
    }
    Ok(OperatorExpr::from_terms(terms))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn eat_multiply(&mut self) {
        self.skip_ws();
        if self.peek() == Some(b'*') {
            self.pos += 1;
        } else if self.src[self.pos..].starts_with("·".as_bytes()) {
            self.pos += "·".len();
        }
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let coeff = if self.peek() == Some(b'(') {
            let c = self.coeff()?;
            self.eat_multiply();
            c
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.skip_ws();
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Term::new(coeff, Vec::new()));
        }
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'b') | Some(b'd') => factors.push(self.factor()?),
                _ => break,
            }
        }
        if factors.is_empty() {
            return Err(self.error("expected a ladder factor or '1'"));
        }
        Ok(Term::new(coeff, factors))
    }

    fn coeff(&mut self) -> Result<Complex64> {
        self.expect(b'(')?;
        self.skip_ws();
        let re = self.real()?;
        self.skip_ws();
        let im = match self.peek() {
            Some(b')') => 0.0,
            Some(sign @ (b'+' | b'-')) => {
                self.pos += 1;
                self.skip_ws();
                let v = self.real()?;
                self.skip_ws();
                self.expect(b'i')?;
                self.skip_ws();
                if sign == b'-' {
                    -v
                } else {
                    v
                }
            }
            _ => return Err(self.error("expected imaginary part or ')'")),
        };
        self.expect(b')')?;
        Ok(Complex64::new(re, im))
    }

    fn real(&mut self) -> Result<f64> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let digits = |p: &mut Self| {
            let s = p.pos;
            while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let v: f64 = text.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("invalid number '{text}'"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse { pos: start, msg: "coefficient out of range".into() });
        }
        Ok(v)
    }

    fn int(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let v = text.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("invalid integer '{text}'"),
        })?;
        self.skip_ws();
        Ok(v)
    }

    fn factor(&mut self) -> Result<Ladder> {
        let species = match self.peek() {
            Some(b'b') => Species::Electron,
            Some(b'd') => Species::Positron,
            _ => return Err(self.error("expected 'b' or 'd'")),
        };
        self.pos += 1;
        let kind = match self.peek() {
            Some(b'+') => LadderKind::Create,
            Some(b'-') => LadderKind::Annihilate,
            _ => return Err(self.error("expected '+' or '-' after species")),
        };
        self.pos += 1;
        self.expect(b'(')?;
        let spin_pos = self.pos;
        let spin = self.int()?;
        if spin != 1 && spin != 2 {
            return Err(Error::Parse { pos: spin_pos, msg: format!("spin must be 1 or 2, got {spin}") });
        }
        let mut momentum = [0i32; 3];
        for c in &mut momentum {
            self.expect(b',')?;
            *c = self.int()?;
        }
        self.expect(b')')?;
        Ok(Ladder { mode: Mode::new(species, spin as u8, momentum), kind })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_products_and_sums() {
        let a: OperatorExpr = "(2+0.5i)·b+(1,0,0,0) b-(2,1,0,0) + d+(1,0,-1,0)".parse().unwrap();
        assert_eq!(a.len(), 2);
        let shown = a.to_string();
        assert_eq!(shown.parse::<OperatorExpr>().unwrap(), a);
    }

    #[test]
    fn parses_identity_zero_and_minus() {
        assert!(parse_expr("0").unwrap().is_empty());
        assert!(parse_expr("  0 ").unwrap().is_empty());
        let a = parse_expr("(3)*1 - b+(1,0,0,0) b-(1,0,0,0)").unwrap();
        assert_eq!(a.constant(), Complex64::new(3.0, 0.0));
        assert_eq!(a.terms()[1].coeff, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn scientific_coefficients() {
        let a = parse_expr("(1e-5-2.5E+3i)·b-(2,0,0,0)").unwrap();
        assert_eq!(a.terms()[0].coeff, Complex64::new(1e-5, -2.5e3));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "b*(1,0,0,0)", "b+(3,0,0,0)", "b+(1,0,0)", "(1+2)·b+(1,0,0,0)", "b+(1,0,0,0) )", "(1e999)·1", "(1+1i)·"] {
            assert!(parse_expr(bad).is_err(), "accepted {bad:?}");
        }
    }

    fn arb_ladder() -> impl Strategy<Value = Ladder> {
        (any::<bool>(), 1u8..=2, -3i32..=3, -3i32..=3, -3i32..=3, any::<bool>()).prop_map(
            |(el, spin, x, y, z, create)| {
                let m = if el { Mode::electron(spin, [x, y, z]) } else { Mode::positron(spin, [x, y, z]) };
                if create { m.create() } else { m.annihilate() }
            },
        )
    }

    fn arb_finite() -> impl Strategy<Value = f64> {
        prop_oneof![
            any::<f64>().prop_filter("finite", |v| v.is_finite()),
            -10.0f64..10.0,
        ]
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(
            terms in prop::collection::vec(
                (arb_finite(), arb_finite(), prop::collection::vec(arb_ladder(), 0..5)),
                0..6,
            )
        ) {
            let a = OperatorExpr::from_terms(
                terms.into_iter().map(|(re, im, f)| Term::new(Complex64::new(re, im), f)),
            );
            let text = a.to_string();
            let b = parse_expr(&text).unwrap();
            prop_assert_eq!(b.to_string(), text);
            prop_assert_eq!(b, a);
        }

        #[test]
        fn parser_never_panics(s in "\\PC{0,64}") {
            let _ = parse_expr(&s);
        }
    }
}
