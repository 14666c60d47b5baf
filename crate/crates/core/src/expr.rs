//! A small evaluator for quantum-number expressions.
//!
//! Reference Hecke matrices are stored as text such as
//! `sqrt([a][a+2])/[a+1]` or `conj(eps(l))*sqrt([2]^3)/sqrt([3][4])` and
//! evaluated for each parameter assignment. The language has
//!
//! * integer and decimal literals, `+ - * / ^`, parentheses and implicit
//!   multiplication between adjacent factors (`[2][3]`);
//! * `[e]`, the quantum integer of the integer value of `e`;
//! * integer variables supplied by the caller;
//! * the constants `I` (imaginary unit) and `w` (`exp(2*pi*i/3)`);
//! * the functions `sqrt` (principal branch), `conj`, `abs` and `eps(l)`
//!   (`w^(l-1)`, so `eps(1) = 1`, `eps(2) = w`, `eps(3) = conj(w)`).
//!
//! Label templates such as `j_{l-1}` or `({a+1},{b})` are expanded with
//! [`render_template`].

use num_complex::Complex64;

use crate::error::{CellforgeError, Result};
use crate::qnum::QContext;

/// Integer variable bindings.
pub type Env<'a> = &'a [(&'a str, i64)];

fn err(msg: impl Into<String>) -> CellforgeError {
    CellforgeError::Expression(msg.into())
}

/// Evaluates `src` with quantum integers taken from `ctx`.
pub fn eval(src: &str, ctx: &QContext, env: Env<'_>) -> Result<Complex64> {
    let mut p = Parser {
        chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        ctx,
        env,
        src,
    };
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(err(format!("unexpected `{}` in `{src}`", p.chars[p.pos])));
    }
    Ok(v)
}

/// Evaluates an integer-valued expression (no quantum brackets needed).
pub fn eval_int(src: &str, ctx: &QContext, env: Env<'_>) -> Result<i64> {
    let v = eval(src, ctx, env)?;
    as_integer(v).ok_or_else(|| err(format!("`{src}` is not an integer ({v})")))
}

fn as_integer(v: Complex64) -> Option<i64> {
    let r = v.re.round();
    ((v.re - r).abs() < 1e-9 && v.im.abs() < 1e-9 && r.abs() < 1e15).then_some(r as i64)
}

/// Replaces every `{expr}` in `template` by its integer value. With
/// `modulus = Some(m)` the value is wrapped into `1..=m`.
pub fn render_template(
    template: &str,
    ctx: &QContext,
    env: Env<'_>,
    modulus: Option<i64>,
) -> Result<String> {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| err(format!("unclosed `{{` in `{template}`")))?
            + open;
        let mut v = eval_int(&rest[open + 1..close], ctx, env)?;
        if let Some(m) = modulus {
            v = (v - 1).rem_euclid(m) + 1;
        }
        out.push_str(&v.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    ctx: &'a QContext,
    env: Env<'a>,
    src: &'a str,
}

impl Parser<'_> {
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

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(format!(
                "expected `{c}` at offset {} in `{}`",
                self.pos, self.src
            )))
        }
    }

    fn expr(&mut self) -> Result<Complex64> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c == '[' || c == '(' || c.is_ascii_alphanumeric() || c == '.')
    }

    fn term(&mut self) -> Result<Complex64> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                v /= self.unary()?;
            } else if self.starts_factor() {
                v *= self.power()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Complex64> {
        let base = self.primary()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(match as_integer(exp) {
                Some(k) if base.im == 0.0 => Complex64::new(base.re.powi(k as i32), 0.0),
                Some(k) => base.powi(k as i32),
                None => base.powc(exp),
            });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Complex64> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('[') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(']')?;
                let m = as_integer(v)
                    .ok_or_else(|| err(format!("quantum bracket needs an integer, got {v}")))?;
                Ok(Complex64::new(self.ctx.qint(m), 0.0))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.ident(),
            Some(c) => Err(err(format!("unexpected `{c}` in `{}`", self.src))),
            None => Err(err(format!("unexpected end of `{}`", self.src))),
        }
    }

    fn number(&mut self) -> Result<Complex64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map(|x| Complex64::new(x, 0.0))
            .map_err(|_| err(format!("bad number `{text}`")))
    }

    fn ident(&mut self) -> Result<Complex64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if self.eat('(') {
            let arg = self.expr()?;
            self.expect(')')?;
            return match name.as_str() {
                "sqrt" => Ok(arg.sqrt()),
                "conj" => Ok(arg.conj()),
                "abs" => Ok(Complex64::new(arg.norm(), 0.0)),
                "eps" => {
                    let l = as_integer(arg)
                        .ok_or_else(|| err(format!("eps needs an integer, got {arg}")))?;
                    Ok(omega().powi((l - 1).rem_euclid(3) as i32))
                }
                _ => Err(err(format!("unknown function `{name}`"))),
            };
        }
        match name.as_str() {
            "I" => Ok(Complex64::new(0.0, 1.0)),
            "w" => Ok(omega()),
            _ => self
                .env
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| Complex64::new(*v as f64, 0.0))
                .ok_or_else(|| err(format!("unbound variable `{name}` in `{}`", self.src))),
        }
    }
}

/// `exp(2*pi*i/3)`.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext {
        QContext::root_of_unity(12).unwrap()
    }

    #[test]
    fn arithmetic_and_brackets() {
        let c = ctx();
        let v = eval("[2][3] - 2*[2]^2/[4]", &c, &[]).unwrap();
        let q = |m| c.qint(m);
        assert!((v.re - (q(2) * q(3) - 2.0 * q(2) * q(2) / q(4))).abs() < 1e-12);
        let v = eval("sqrt([a][a+2])/[a+1]", &c, &[("a", 3)]).unwrap();
        assert!((v.re - (q(3) * q(5)).sqrt() / q(4)).abs() < 1e-12);
        let v = eval("(-1)^(i+1)", &c, &[("i", 2)]).unwrap();
        assert_eq!(v.re, -1.0);
    }

    #[test]
    fn phases() {
        let c = ctx();
        assert!((eval("eps(1)", &c, &[]).unwrap() - 1.0).norm() < 1e-15);
        assert!((eval("eps(3) - conj(w)", &c, &[]).unwrap()).norm() < 1e-15);
        assert!((eval("I*I + 1", &c, &[]).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn templates() {
        let c = ctx();
        let s = render_template("j_{l-1}", &c, &[("l", 1)], Some(6)).unwrap();
        assert_eq!(s, "j_6");
        let s = render_template("({a+1},{b})", &c, &[("a", 2), ("b", 0)], None).unwrap();
        assert_eq!(s, "(3,0)");
    }

    #[test]
    fn errors() {
        let c = ctx();
        assert!(eval("[1.5]", &c, &[]).is_err());
        assert!(eval("x", &c, &[]).is_err());
        assert!(eval("(1", &c, &[]).is_err());
        assert!(eval("foo(2)", &c, &[]).is_err());
    }
}
