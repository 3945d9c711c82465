use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{FiberError, Polynomial, Root};
use crate::Real;

/// A point of `P^1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Proj<F> {
    Finite(Complex<F>),
    Infinity,
}

impl<F: Real> Proj<F> {
    pub fn finite(self) -> Option<Complex<F>> {
        match self {
            Proj::Finite(z) => Some(z),
            Proj::Infinity => None,
        }
    }

    /// Chordal distance `|a - b| / (sqrt(1+|a|^2) sqrt(1+|b|^2))`, bounded by 1.
    pub fn chordal(self, other: Proj<F>) -> F {
        let one = F::one();
        match (self, other) {
            (Proj::Infinity, Proj::Infinity) => F::zero(),
            (Proj::Infinity, Proj::Finite(b)) | (Proj::Finite(b), Proj::Infinity) => one / (one + b.norm_sqr()).sqrt(),
            (Proj::Finite(a), Proj::Finite(b)) => chordal_diff(a - b, a, b),
        }
    }
}

/// Chordal distance when `a - b` is known more accurately than by subtraction.
pub(crate) fn chordal_diff<F: Real>(diff: Complex<F>, a: Complex<F>, b: Complex<F>) -> F {
    let one = F::one();
    diff.norm() / ((one + a.norm_sqr()).sqrt() * (one + b.norm_sqr()).sqrt())
}

/// `num / den` with coprime numerator and monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction<F> {
    num: Polynomial<Complex<F>>,
    den: Polynomial<Complex<F>>,
    poles: Vec<Root<F>>,
}

/// Relative distance below which two roots count as one repeated root.
pub(crate) fn cluster_tol<F: Real>() -> F {
    F::epsilon().powf(F::lit(0.25))
}

impl<F: Real> RationalFunction<F> {
    /// Normalises the denominator to be monic and checks coprimality by
    /// evaluating the numerator at every root of the denominator.
    pub fn new(num: Polynomial<Complex<F>>, den: Polynomial<Complex<F>>) -> Result<Self, FiberError> {
        let lead = *den.leading().ok_or(FiberError::ZeroDenominator)?;
        let inv = Complex::<F>::one() / lead;
        let num = num.scale(&inv);
        let den = den.scale(&inv);
        let poles = den.distinct_roots(cluster_tol());
        let scale = num.norm_inf();
        for p in &poles {
            let weight = (F::one() + p.at.norm()).powi(num.degree().unwrap_or(0) as i32);
            if num.eval(&p.at).norm() <= F::lit(1e3) * cluster_tol::<F>() * scale * weight {
                return Err(FiberError::NotCoprime { at: fmt_c(p.at) });
            }
        }
        Ok(RationalFunction { num, den, poles })
    }

    pub fn polynomial(p: Polynomial<Complex<F>>) -> Self {
        RationalFunction { num: p, den: Polynomial::one(), poles: Vec::new() }
    }

    pub fn parse(src: &str) -> Result<Self, FiberError> {
        let (n, d) = parse_fraction::<F>(src)?;
        Self::new(n, d)
    }

    pub fn numerator(&self) -> &Polynomial<Complex<F>> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<Complex<F>> {
        &self.den
    }

    /// Distinct poles with their orders.
    pub fn poles(&self) -> &[Root<F>] {
        &self.poles
    }

    pub fn eval(&self, z: Complex<F>) -> Proj<F> {
        let d = self.den.eval(&z);
        if d.is_zero() {
            Proj::Infinity
        } else {
            Proj::Finite(self.num.eval(&z) / d)
        }
    }

    /// Value at `z`, or an error naming the pole.
    pub fn eval_finite(&self, z: Complex<F>) -> Result<Complex<F>, FiberError> {
        self.eval(z).finite().ok_or_else(|| FiberError::Pole { at: fmt_c(z) })
    }

    pub fn is_pole(&self, z: Complex<F>) -> bool {
        self.den.eval(&z).is_zero()
    }
}

impl<F: Real> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", fmt_poly(&self.num), fmt_poly(&self.den))
    }
}

pub(crate) fn fmt_c<F: Real>(z: Complex<F>) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn fmt_poly<F: Real>(p: &Polynomial<Complex<F>>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => format!("({})", fmt_c(*c)),
            1 => format!("({})z", fmt_c(*c)),
            _ => format!("({})z^{k}", fmt_c(*c)),
        })
        .collect();
    terms.join(" + ")
}

type Frac<F> = (Polynomial<Complex<F>>, Polynomial<Complex<F>>);

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    I,
    Z,
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, FiberError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let ch = b[i] as char;
        match ch {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push((i, Tok::Op(ch)));
                i += 1;
            }
            'i' | 'j' => {
                out.push((i, Tok::I));
                i += 1;
            }
            'z' | 'Z' => {
                out.push((i, Tok::Z));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut k = i + 1;
                    if k < b.len() && (b[k] == b'+' || b[k] == b'-') {
                        k += 1;
                    }
                    if k < b.len() && b[k].is_ascii_digit() {
                        i = k;
                        while i < b.len() && b[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let v: f64 = src[start..i]
                    .parse()
                    .map_err(|_| FiberError::Parse { pos: start, msg: format!("bad number `{}`", &src[start..i]) })?;
                out.push((start, Tok::Num(v)));
            }
            _ => return Err(FiberError::Parse { pos: i, msg: format!("unexpected `{ch}`") }),
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    _f: std::marker::PhantomData<F>,
}

impl<F: Real> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, FiberError> {
        Err(FiberError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Frac<F>, FiberError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.at += 1;
            let rhs = self.term()?;
            let rhs = if c == '-' { (-&rhs.0, rhs.1) } else { rhs };
            acc = (&(&acc.0 * &rhs.1) + &(&rhs.0 * &acc.1), &acc.1 * &rhs.1);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac<F>, FiberError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.at += 1;
                    let r = self.unary()?;
                    acc = (&acc.0 * &r.0, &acc.1 * &r.1);
                }
                Some(Tok::Op('/')) => {
                    self.at += 1;
                    let r = self.unary()?;
                    if r.0.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = (&acc.0 * &r.1, &acc.1 * &r.0);
                }
                Some(Tok::Num(_) | Tok::I | Tok::Z | Tok::Op('(')) => {
                    let r = self.power()?;
                    acc = (&acc.0 * &r.0, &acc.1 * &r.1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac<F>, FiberError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.at += 1;
            let (n, d) = self.unary()?;
            return Ok((-&n, d));
        }
        if let Some(Tok::Op('+')) = self.peek() {
            self.at += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac<F>, FiberError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.at += 1;
            let n = match self.peek() {
                Some(Tok::Num(v)) if v.fract() == 0.0 && *v >= 0.0 && *v <= 64.0 => *v as u32,
                _ => return self.err("exponent must be an integer in 0..=64"),
            };
            self.at += 1;
            return Ok((base.0.pow(n), base.1.pow(n)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac<F>, FiberError> {
        let one = Polynomial::one();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        self.at += 1;
        match tok {
            Tok::Num(v) => {
                let mut c = Complex::new(F::lit(v), F::zero());
                if let Some(Tok::I) = self.peek() {
                    self.at += 1;
                    c = Complex::new(F::zero(), F::lit(v));
                }
                Ok((Polynomial::constant(c), one))
            }
            Tok::I => Ok((Polynomial::constant(Complex::i()), one)),
            Tok::Z => Ok((Polynomial::x(), one)),
            Tok::Op('(') => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.at += 1;
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            _ => {
                self.at -= 1;
                self.err("expected a number, `i`, `z` or `(`")
            }
        }
    }
}

/// Parses expressions such as `((1+2i)z^2 - 3) / ((z - 1)(z + i))`.
///
/// Numbers may carry an `i` suffix; juxtaposition multiplies. The result is
/// an unreduced numerator/denominator pair.
pub fn parse_fraction<F: Real>(src: &str) -> Result<Frac<F>, FiberError> {
    let toks = lex(src)?;
    let mut p = Parser::<F> { toks: &toks, at: 0, end: src.len(), _f: std::marker::PhantomData };
    let e = p.expr()?;
    if p.at != toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{RatFn64, C64};

    #[test]
    fn parses_complex_coefficients() {
        let s = RatFn64::parse("(1+2i)z^2 - 3.5").unwrap();
        assert_eq!(s.numerator().coeffs(), &[C64::new(-3.5, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 2.0)]);
        assert!(s.poles().is_empty());
    }

    #[test]
    fn parses_sum_of_simple_poles() {
        let s = RatFn64::parse("1/(z-1) + 1/(z+1)").unwrap();
        assert_eq!(s.poles().len(), 2);
        let v = s.eval(C64::new(2.0, 0.0)).finite().unwrap();
        assert!((v - C64::new(1.0 + 1.0 / 3.0, 0.0)).norm() < 1e-14);
        assert_eq!(s.eval(C64::new(1.0, 0.0)), Proj::Infinity);
    }

    #[test]
    fn rejects_common_factor() {
        assert!(matches!(RatFn64::parse("(z-1)/(z^2-1)"), Err(FiberError::NotCoprime { .. })));
    }

    #[test]
    fn parse_errors_carry_position() {
        match RatFn64::parse("z + * 2") {
            Err(FiberError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chordal_distance_basics() {
        let a = Proj::Finite(C64::new(0.0, 0.0));
        assert!((a.chordal(Proj::Infinity) - 1.0).abs() < 1e-15);
        assert_eq!(Proj::<f64>::Infinity.chordal(Proj::Infinity), 0.0);
    }
}
