//! Text formats: field elements (`0`, `1`, `g`, `g^k`), representatives
//! (`g^3*t^-5 + t^-1`), sparse series (`2:1, 6:g^7`), and JSON polynomial
//! files over `R`.

use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

use crate::char2::{Gf, Gf2nField, LaurentPolynomial, TruncatedSeries, Variable};
use crate::padic::{PadicPolynomial, PadicRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        text.parse().or_else(|_| err(start, format!("expected an integer, found {:?}", self.rest(start))))
    }

    fn rest(&self, from: usize) -> String {
        String::from_utf8_lossy(&self.s[from..self.s.len().min(from + 12)]).into_owned()
    }
}

fn element(cur: &mut Cursor, field: &'static Gf2nField) -> Result<Gf, ParseError> {
    let start = {
        cur.skip_ws();
        cur.pos
    };
    match cur.peek() {
        Some(b'0') => {
            cur.pos += 1;
            Ok(field.zero())
        }
        Some(b'1') => {
            cur.pos += 1;
            Ok(field.one())
        }
        Some(b'g') => {
            cur.pos += 1;
            if cur.eat(b'^') {
                Ok(field.gen_pow(cur.integer()?))
            } else {
                Ok(field.generator())
            }
        }
        _ => err(start, format!("expected a field element (0, 1, g, g^k), found {:?}", cur.rest(start))),
    }
}

/// Parses `0`, `1`, `g` or `g^k`.
pub fn parse_element(s: &str, field: &'static Gf2nField) -> Result<Gf, ParseError> {
    let mut cur = Cursor::new(s);
    let x = element(&mut cur, field)?;
    if !cur.at_end() {
        return err(cur.pos, "trailing input after field element");
    }
    Ok(x)
}

/// Parses a sum of terms `c*t^k`, `t^k`, or `c`; `-` is accepted as `+`.
/// The result is in `t^-1`: the term `t^-5` is stored at exponent 5.
pub fn parse_representative(
    s: &str,
    field: &'static Gf2nField,
) -> Result<LaurentPolynomial<Gf>, ParseError> {
    let mut cur = Cursor::new(s);
    if cur.at_end() {
        return err(0, "empty representative");
    }
    let mut p = LaurentPolynomial::zero(Variable::TInv);
    loop {
        let (exp, c) = term(&mut cur, field)?;
        p.add_term(-exp, &c);
        if cur.at_end() {
            break;
        }
        if !(cur.eat(b'+') || cur.eat(b'-')) {
            return err(cur.pos, format!("expected '+' or end of input, found {:?}", cur.rest(cur.pos)));
        }
    }
    Ok(p)
}

fn term(cur: &mut Cursor, field: &'static Gf2nField) -> Result<(i64, Gf), ParseError> {
    if cur.peek() == Some(b't') {
        return Ok((monomial(cur)?, field.one()));
    }
    let c = element(cur, field)?;
    if cur.eat(b'*') {
        if cur.peek() != Some(b't') {
            return err(cur.pos, "expected 't' after '*'");
        }
        return Ok((monomial(cur)?, c));
    }
    Ok((0, c))
}

fn monomial(cur: &mut Cursor) -> Result<i64, ParseError> {
    cur.pos += 1;
    if cur.eat(b'^') {
        cur.integer()
    } else {
        Ok(1)
    }
}

/// Parses a sparse series `e:c, e:c, ...` known modulo `w^precision`.
pub fn parse_series(
    s: &str,
    field: &'static Gf2nField,
    precision: i64,
) -> Result<TruncatedSeries, ParseError> {
    let mut cur = Cursor::new(s);
    let mut terms = Vec::new();
    if cur.at_end() {
        return err(0, "empty series");
    }
    loop {
        let e = cur.integer()?;
        if !cur.eat(b':') {
            return err(cur.pos, "expected ':' between exponent and coefficient");
        }
        let c = element(&mut cur, field)?;
        terms.push((e, c));
        if cur.at_end() {
            break;
        }
        if !cur.eat(b',') {
            return err(cur.pos, "expected ',' between terms");
        }
    }
    if let Some((e, _)) = terms.iter().find(|(e, _)| *e >= precision) {
        return err(0, format!("exponent {e} is beyond the series precision {precision}"));
    }
    Ok(TruncatedSeries::new(field, terms, Some(precision)))
}

/// The sparse text form of a series, as accepted by [`parse_series`].
pub fn format_series_terms(s: &TruncatedSeries) -> String {
    s.terms().map(|(e, c)| format!("{e}:{c}")).collect::<Vec<_>>().join(", ")
}

fn json_int(v: &Value, what: &str) -> Result<i64, ParseError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .or_else(|| n.as_u64().map(|u| u as i64))
            .ok_or_else(|| ParseError {
                position: 0,
                message: format!("{what}: {n} is not an integer"),
            }),
        Value::String(s) => s.trim().parse().map_err(|_| ParseError {
            position: 0,
            message: format!("{what}: {s:?} is not an integer"),
        }),
        other => err(0, format!("{what}: expected an integer, found {other}")),
    }
}

fn json_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| ParseError {
        position: 0,
        message: format!("{what}: expected an array"),
    })
}

/// Reads a polynomial over `R` from the sparse JSON form
/// `[[exp, [[w_00, w_01, ...], [w_10, ...], ...]], ...]`: for each exponent,
/// the coefficients of `pi^0, pi^1, ...`, each a list of integers in the
/// Witt basis. Integers may be JSON numbers or strings and are reduced
/// modulo `2^N`.
pub fn parse_padic_polynomial(text: &str, ring: &Arc<PadicRing>) -> Result<PadicPolynomial, ParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ParseError {
        position: e.column(),
        message: format!("invalid JSON on line {}: {e}", e.line()),
    })?;
    let mut terms = Vec::new();
    for (i, entry) in json_array(&v, "polynomial")?.iter().enumerate() {
        let pair = json_array(entry, &format!("term {i}"))?;
        if pair.len() != 2 {
            return err(0, format!("term {i}: expected [exponent, coefficient]"));
        }
        let exp = json_int(&pair[0], &format!("term {i} exponent"))?;
        if exp < 0 {
            return err(0, format!("term {i}: negative exponent {exp}"));
        }
        let digits = json_array(&pair[1], &format!("term {i} coefficient"))?
            .iter()
            .map(|w| {
                json_array(w, &format!("term {i} Witt coefficient"))?
                    .iter()
                    .map(|x| json_int(x, &format!("term {i} digit")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let c = ring.element_from_digits(&digits).map_err(|e| ParseError {
            position: 0,
            message: format!("term {i}: {e}"),
        })?;
        terms.push((exp as usize, c));
    }
    Ok(PadicPolynomial::from_sparse(ring, terms))
}

/// The sparse JSON value read by [`parse_padic_polynomial`], with integers as strings.
pub fn padic_polynomial_json(p: &PadicPolynomial) -> Value {
    Value::Array(
        p.sparse()
            .into_iter()
            .map(|(i, c)| {
                let digits = c
                    .compact_digits()
                    .into_iter()
                    .map(|w| Value::Array(w.into_iter().map(|x| Value::String(x.to_string())).collect()))
                    .collect();
                Value::Array(vec![Value::String(i.to_string()), Value::Array(digits)])
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicConfig;

    fn k() -> &'static Gf2nField {
        Gf2nField::get(8).unwrap()
    }

    #[test]
    fn representatives() {
        let p = parse_representative("t^-5 + g^3*t^-1", k()).unwrap();
        assert_eq!(p.to_string(), "t^-5 + g^3*t^-1");
        let p = parse_representative(" t^-2 - t^-2 + 1 + g*t", k()).unwrap();
        assert_eq!(p.to_string(), "1 + g*t");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_representative("t^-5 + h", k()).unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse_representative("t^-5 t", k()).unwrap_err();
        assert_eq!(e.position, 5);
        assert!(parse_representative("", k()).is_err());
        assert!(parse_representative("g*", k()).is_err());
    }

    #[test]
    fn elements_and_series() {
        assert_eq!(parse_element("g^255", k()).unwrap(), k().one());
        let s = parse_series("2:1, 6:g^7", k(), 40).unwrap();
        assert_eq!(format_series_terms(&s), "2:1, 6:g^7");
        assert_eq!(s.precision(), Some(40));
        assert!(parse_series("2:1, 40:1", k(), 40).is_err());
    }

    #[test]
    fn padic_round_trip() {
        let r = PadicRing::new(PadicConfig::default()).unwrap();
        let p = parse_padic_polynomial(r#"[[0, [[1]]], [1, [[-4, 0, "3"], [], [5]]]]"#, &r).unwrap();
        assert_eq!(p.coeff(1).digits()[0], vec![252, 0, 3, 0]);
        let text = padic_polynomial_json(&p).to_string();
        assert_eq!(parse_padic_polynomial(&text, &r).unwrap(), p);
    }
}
