//! Parser for class expressions such as `O(2H-L)`, `O_x`, `2*O - U` or
//! `kappa(1,0)`, evaluated to Chern characters on a model.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := '-' term | [int ['*']] atom
//! atom  := '0' | O | O(div) | O_X(div) | O_x | O_p | O_L | O_H | I_x | U | Uv
//!        | mu(a,b) | kappa(p,q) | lambda(p,q) | '(' expr ')'
//! div   := [sign] [int] (H | L) ...
//! ```

use std::sync::Arc;

use crate::chow::{GradedClass, ModelClasses, VarietyKind, VarietyModel};
use crate::error::{Error, Result};
use crate::grr::{ch_dual_tautological, ch_line_bundle};
use crate::knum::KuBasis;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at position {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Zero,
    /// Line bundle `O(Σ k_i D_i)`, divisor given by generator name.
    Line(Vec<(String, i64)>),
    Point,
    /// Structure sheaf of a curve or divisor named by its class.
    Structure(String),
    IdealOfPoint,
    DualTautological,
    Basis(String, i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<(i64, Atom)>,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

/// Parses a class expression; `−` (U+2212) is accepted as a minus sign.
pub fn parse(src: &str) -> std::result::Result<Expr, ParseError> {
    let chars: Vec<char> =
        src.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '−' { '-' } else { c }).collect();
    let mut p = Parser { chars, pos: 0, _src: src };
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { message: message.to_string(), position: self.pos }
    }

    fn peek(&self) -> Option<char> {
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

    fn expect(&mut self, c: char) -> std::result::Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        let s: Vec<char> = s.chars().collect();
        self.chars.len() >= self.pos + s.len() && self.chars[self.pos..self.pos + s.len()] == s[..]
    }

    fn int(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn signed_int(&mut self) -> std::result::Result<i64, ParseError> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let n = self.int().ok_or_else(|| self.error("expected an integer"))?;
        Ok(if neg { -n } else { n })
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = 1;
        if self.eat('-') {
            sign = -1;
        } else {
            self.eat('+');
        }
        loop {
            for (k, a) in self.term()? {
                terms.push((sign * k, a));
            }
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> std::result::Result<Vec<(i64, Atom)>, ParseError> {
        if self.eat('-') {
            return Ok(self.term()?.into_iter().map(|(k, a)| (-k, a)).collect());
        }
        let start = self.pos;
        let coeff = self.int();
        if let Some(k) = coeff {
            let starred = self.eat('*');
            let at_end = matches!(self.peek(), None | Some('+') | Some('-') | Some(')'));
            if at_end && !starred {
                // A bare integer is only meaningful as zero.
                if k == 0 {
                    return Ok(vec![(1, Atom::Zero)]);
                }
                self.pos = start;
                return Err(self.error("bare integers other than 0 are not classes"));
            }
        }
        let k = coeff.unwrap_or(1);
        if self.eat('(') {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner.terms.into_iter().map(|(c, a)| (k * c, a)).collect());
        }
        Ok(vec![(k, self.atom()?)])
    }

    fn divisor(&mut self) -> std::result::Result<Vec<(String, i64)>, ParseError> {
        let mut out: Vec<(String, i64)> = Vec::new();
        let mut first = true;
        while self.peek() != Some(')') {
            let sign = if self.eat('-') {
                -1
            } else if self.eat('+') || first {
                1
            } else {
                return Err(self.error("expected `+` or `-` in divisor"));
            };
            first = false;
            let k = self.int().unwrap_or(1);
            let name = match self.peek() {
                Some(c @ ('H' | 'L')) => c.to_string(),
                _ => return Err(self.error("expected divisor generator H or L")),
            };
            self.pos += 1;
            match out.iter_mut().find(|(n, _)| *n == name) {
                Some(entry) => entry.1 += sign * k,
                None => out.push((name, sign * k)),
            }
        }
        Ok(out)
    }

    fn atom(&mut self) -> std::result::Result<Atom, ParseError> {
        for name in ["kappa", "mu", "lambda"] {
            if self.rest_starts_with(name) {
                self.pos += name.len();
                self.expect('(')?;
                let a = self.signed_int()?;
                self.expect(',')?;
                let b = self.signed_int()?;
                self.expect(')')?;
                return Ok(Atom::Basis(name.to_string(), a, b));
            }
        }
        for name in ["U^v", "Uv", "U"] {
            if self.rest_starts_with(name) {
                self.pos += name.len();
                return Ok(Atom::DualTautological);
            }
        }
        if self.rest_starts_with("I_x") {
            self.pos += 3;
            return Ok(Atom::IdealOfPoint);
        }
        if !self.eat('O') {
            return Err(self.error("unknown generator"));
        }
        if self.eat('_') {
            match self.peek() {
                Some('x' | 'p') => {
                    self.pos += 1;
                    return Ok(Atom::Point);
                }
                Some(c @ ('L' | 'H')) => {
                    self.pos += 1;
                    return Ok(Atom::Structure(c.to_string()));
                }
                Some('X' | 'Y' | 'S' | 'W') => {
                    self.pos += 1;
                }
                _ => return Err(self.error("unknown subscript")),
            }
        }
        if self.eat('(') {
            let d = self.divisor()?;
            self.expect(')')?;
            return Ok(Atom::Line(d));
        }
        Ok(Atom::Line(Vec::new()))
    }
}

fn generator(model: &Arc<VarietyModel>, name: &str) -> Result<GradedClass> {
    match name {
        "H" => Ok(model.hyperplane()),
        "L" if model.picard_gram().is_some_and(|g| g.len() > 1) => model.divisor(&[0, 1]),
        _ => Err(Error::UnknownBasisClass { variety: model.id().into(), name: name.into() }),
    }
}

fn eval_atom(model: &Arc<VarietyModel>, atom: &Atom) -> Result<GradedClass> {
    match atom {
        Atom::Zero => Ok(model.zero()),
        Atom::Line(terms) => {
            let mut d = model.zero();
            for (name, k) in terms {
                d = &d + &generator(model, name)?.scale_int(*k);
            }
            ch_line_bundle(&d)
        }
        Atom::Point => Ok(model.point()),
        Atom::Structure(name) => {
            let d = generator(model, name)?;
            Ok(&model.unit() - &ch_line_bundle(&-&d)?)
        }
        Atom::IdealOfPoint => Ok(&model.unit() - &model.point()),
        Atom::DualTautological => ch_dual_tautological(model),
        Atom::Basis(name, a, b) => {
            let basis = match (name.as_str(), model.kind()) {
                ("mu", VarietyKind::QuarticDoubleSolid) => KuBasis::mu(model)?,
                ("kappa", VarietyKind::Gm3fold) => KuBasis::kappa(model)?,
                ("lambda", VarietyKind::Gm4fold) => KuBasis::lambda(model)?,
                _ => {
                    return Err(Error::UnknownBasisClass {
                        variety: model.id().into(),
                        name: name.clone(),
                    })
                }
            };
            basis.ch_of(&basis.class(*a, *b))
        }
    }
}

/// Chern character of a parsed expression on `model`.
pub fn evaluate(model: &Arc<VarietyModel>, expr: &Expr) -> Result<GradedClass> {
    let mut acc = model.zero();
    for (k, atom) in &expr.terms {
        acc = &acc + &eval_atom(model, atom)?.scale_int(*k);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{make_variety_model, VarietySpec};
    use crate::linalg::qi;

    fn k3_line() -> Arc<VarietyModel> {
        make_variety_model(&VarietySpec::with_gram(
            VarietyKind::QuarticK3,
            vec![vec![4, 1], vec![1, -2]],
        ))
        .unwrap()
    }

    #[test]
    fn parses_named_classes() {
        let e = parse("O(2H-L) + 3*O_x - I_x").unwrap();
        assert_eq!(
            e.terms,
            vec![
                (1, Atom::Line(vec![("H".into(), 2), ("L".into(), -1)])),
                (3, Atom::Point),
                (-1, Atom::IdealOfPoint),
            ]
        );
        assert_eq!(parse("kappa(1,-2)").unwrap().terms, vec![(1, Atom::Basis("kappa".into(), 1, -2))]);
        assert_eq!(parse("0").unwrap().terms, vec![(1, Atom::Zero)]);
        assert_eq!(parse("O_X(−H)").unwrap().terms, vec![(1, Atom::Line(vec![("H".into(), -1)]))]);
        assert_eq!(parse("2(O - O_x)").unwrap().terms, vec![(2, Atom::Line(vec![])), (-2, Atom::Point)]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("O(").is_err());
        assert!(parse("Q").is_err());
        assert!(parse("3").is_err());
        assert!(parse("O_x O").is_err());
        assert!(parse("O(2K)").is_err());
    }

    #[test]
    fn evaluates_on_a_k3() {
        let x = k3_line();
        let o_l = evaluate(&x, &parse("O_L").unwrap()).unwrap();
        assert_eq!(o_l, x.class(&[("L", qi(1)), ("pt", qi(1))]).unwrap());
        let o_h = evaluate(&x, &parse("O_H").unwrap()).unwrap();
        assert_eq!(o_h, x.class(&[("H", qi(1)), ("pt", qi(-2))]).unwrap());
        let zero = evaluate(&x, &parse("O - O").unwrap()).unwrap();
        assert!(zero.is_zero());

        let rank_one = make_variety_model(&VarietySpec::new(VarietyKind::QuarticK3)).unwrap();
        let err = evaluate(&rank_one, &parse("O(L)").unwrap()).unwrap_err();
        assert!(matches!(err, Error::UnknownBasisClass { .. }));
        assert!(evaluate(&rank_one, &parse("kappa(1,0)").unwrap()).is_err());
    }
}
