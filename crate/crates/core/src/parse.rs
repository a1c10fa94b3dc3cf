//! Germ input: expression text such as `u; u^2+v^2; 2u^2+u v` and the
//! structured JSON document `{"components": [[{"i","j","c"}], ...], "order"}`.
//!
//! Grammar, with whitespace ignored:
//!
//! ```text
//! germ        := expression ';' expression ';' expression
//! expression  := sign? term (sign term)*
//! term        := coefficient? monomial? ('/' integer)?
//! monomial    := ('u' ('^' integer)?)? ('v' ('^' integer)?)?
//! coefficient := decimal | decimal '/' decimal
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{monomial_name, MapGerm, TruncatedPoly2, DEFAULT_ORDER};

/// Germ as given on input, before it is checked and truncated.
#[derive(Debug, Clone, PartialEq)]
pub enum GermSource {
    Text(String),
    Document(GermDocument),
}

impl GermSource {
    /// JSON when the first non-blank character is `{`, expression text otherwise.
    pub fn detect(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            let doc = serde_json::from_str(input).map_err(|e| Error::Document(e.to_string()))?;
            Ok(GermSource::Document(doc))
        } else {
            Ok(GermSource::Text(input.to_owned()))
        }
    }

    /// Builds the germ; `order` overrides both the default and the
    /// document's own order.
    pub fn to_germ(&self, order: Option<usize>) -> Result<MapGerm> {
        match self {
            GermSource::Text(text) => parse_germ(text, order.unwrap_or(DEFAULT_ORDER)),
            GermSource::Document(doc) => doc.to_germ(order),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GermDocument {
    pub components: Vec<Vec<DocTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTerm {
    pub i: usize,
    pub j: usize,
    pub c: DocCoefficient,
}

/// A number, or a string holding a decimal or a fraction `p/q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DocCoefficient {
    Number(f64),
    Text(String),
}

impl<'de> Deserialize<'de> for DocCoefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(DocCoefficient::Number)
                .ok_or_else(|| D::Error::custom(format!("coefficient {n} is not a finite number"))),
            serde_json::Value::String(s) => Ok(DocCoefficient::Text(s)),
            other => Err(D::Error::custom(format!("coefficient must be a number or a string, found {other}"))),
        }
    }
}

impl DocCoefficient {
    fn value(&self) -> Result<f64> {
        match self {
            DocCoefficient::Number(x) => Ok(*x),
            DocCoefficient::Text(s) => {
                let mut p = Parser::new(s);
                p.skip_ws();
                let neg = p.eat('-');
                if !neg {
                    p.eat('+');
                }
                let x = p.coefficient()?.ok_or_else(|| p.error("expected a number"))?;
                p.skip_ws();
                if p.peek().is_some() {
                    return Err(p.error("unexpected trailing characters"));
                }
                Ok(if neg { -x } else { x })
            }
        }
    }
}

impl GermDocument {
    pub fn from_germ(f: &MapGerm) -> Self {
        Self {
            components: f
                .components()
                .iter()
                .map(|p| {
                    p.terms()
                        .map(|(i, j, c)| DocTerm {
                            i,
                            j,
                            c: DocCoefficient::Number(c),
                        })
                        .collect()
                })
                .collect(),
            order: Some(f.order()),
        }
    }

    pub fn to_germ(&self, order: Option<usize>) -> Result<MapGerm> {
        let order = order.or(self.order).unwrap_or(DEFAULT_ORDER);
        if self.components.len() != 3 {
            return Err(Error::Document(format!("expected 3 components, found {}", self.components.len())));
        }
        let mut comps = Vec::with_capacity(3);
        for terms in &self.components {
            let mut p = TruncatedPoly2::zero(order);
            for t in terms {
                let c = t.c.value()?;
                add_term(&mut p, t.i, t.j, c)?;
            }
            comps.push(p);
        }
        MapGerm::new(comps.try_into().expect("three components"))
    }
}

fn add_term(p: &mut TruncatedPoly2, i: usize, j: usize, c: f64) -> Result<()> {
    if i + j > p.order() {
        if c == 0.0 {
            return Ok(());
        }
        return Err(Error::DegreeAboveOrder {
            monomial: monomial_name(i, j),
            degree: i + j,
            order: p.order(),
        });
    }
    p.set_coeff(i, j, p.coeff(i, j) + c);
    Ok(())
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(pos);
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let message = match self.chars.get(self.pos) {
            Some(c) => format!("{}, found '{c}'", message.into()),
            None => format!("{}, found end of input", message.into()),
        };
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error_at(start, "integer out of range"))
    }

    fn decimal(&mut self) -> Result<Option<f64>> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.chars.get(p.pos).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Ok(None);
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+' | '-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.error("expected exponent digits"));
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<f64>()
            .map(Some)
            .map_err(|_| self.error_at(start, format!("invalid number '{s}'")))
    }

    fn coefficient(&mut self) -> Result<Option<f64>> {
        let Some(p) = self.decimal()? else {
            return Ok(None);
        };
        if self.peek() == Some('/') {
            self.pos += 1;
            let q = self.decimal()?.ok_or_else(|| self.error("expected a denominator"))?;
            return self.divide(p, q).map(Some);
        }
        Ok(Some(p))
    }

    fn divide(&self, p: f64, q: f64) -> Result<f64> {
        if q == 0.0 {
            return Err(self.error_at(self.pos.saturating_sub(1), "division by zero"));
        }
        Ok(p / q)
    }

    fn power(&mut self) -> Result<usize> {
        if self.eat('^') {
            self.integer()
        } else {
            Ok(1)
        }
    }

    /// Returns `(i, j, coefficient)`.
    fn term(&mut self) -> Result<(usize, usize, f64)> {
        let coefficient = self.coefficient()?;
        let (mut i, mut j) = (0, 0);
        let mut has_monomial = false;
        if self.eat('u') {
            i = self.power()?;
            has_monomial = true;
        }
        if self.eat('v') {
            j = self.power()?;
            has_monomial = true;
        }
        if coefficient.is_none() && !has_monomial {
            return Err(self.error("expected a term"));
        }
        let mut c = coefficient.unwrap_or(1.0);
        if has_monomial && self.peek() == Some('/') {
            self.pos += 1;
            let q = self.integer()? as f64;
            c = self.divide(c, q)?;
        }
        Ok((i, j, c))
    }

    fn expression(&mut self, order: usize) -> Result<TruncatedPoly2> {
        let mut p = TruncatedPoly2::zero(order);
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let (i, j, c) = self.term()?;
            add_term(&mut p, i, j, sign * c)?;
            sign = match self.peek() {
                Some('+') => 1.0,
                Some('-') => -1.0,
                Some(';') | None => return Ok(p),
                Some(_) => return Err(self.error("expected '+', '-', ';' or end of input")),
            };
            self.pos += 1;
        }
    }
}

/// Parses three `;`-separated expressions in `u`, `v` truncated at `order`.
pub fn parse_germ(text: &str, order: usize) -> Result<MapGerm> {
    let mut p = Parser::new(text);
    let mut comps = Vec::with_capacity(3);
    for k in 0..3 {
        if k > 0 && !p.eat(';') {
            return Err(p.error(format!("expected ';' before component {}", k + 1)));
        }
        comps.push(p.expression(order)?);
    }
    p.eat(';');
    if p.peek().is_some() {
        return Err(p.error("expected end of input after three components"));
    }
    MapGerm::new(comps.try_into().expect("three components"))
}

/// Expression text for one component; coefficients use the shortest
/// representation that reads back to the same `f64`.
pub fn poly_to_text(p: &TruncatedPoly2) -> String {
    let mut out = String::new();
    for (i, j, c) in p.terms() {
        if c == 0.0 {
            continue;
        }
        let a = c.abs();
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        let mono = monomial_name(i, j);
        if i + j == 0 {
            out.push_str(&format!("{a}"));
        } else if a == 1.0 {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{a}{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn germ_to_text(f: &MapGerm) -> String {
    f.components().iter().map(poly_to_text).collect::<Vec<_>>().join("; ")
}
