use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{FromPrimitive, Num, Zero};

use crate::Real;

/// Dense polynomial in one variable, coefficients in ascending degree.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is
/// the empty vector and `degree` is well defined.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Zero> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }
}

impl<T: Clone + Num> Polynomial<T> {
    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The identity polynomial `z`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `prod (z - r)`.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::new(vec![T::zero() - r.clone(), T::one()]))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dn = d.coeffs.len();
        let mut r = self.coeffs.clone();
        if r.len() < dn {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() + 1 - dn];
        for k in (0..q.len()).rev() {
            let c = r[k + dn - 1].clone() / dl.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
        }
        r.truncate(dn - 1);
        (Self::new(q), Self::new(r))
    }

    /// Coefficients of `p(z0 + t)` in powers of `t`.
    pub fn taylor_at(&self, z0: &T) -> Vec<T> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1].clone();
                c[j] = c[j].clone() + z0.clone() * next;
            }
        }
        c
    }
}

impl<T: Clone + Num + FromPrimitive> Polynomial<T> {
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_usize(k).expect("degree fits scalar"))
                .collect(),
        )
    }
}

impl<T: Clone + Num> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, o: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(T::zero);
                    let b = o.coeffs.get(k).cloned().unwrap_or_else(T::zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl<T: Clone + Num> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| T::zero() - c.clone()).collect())
    }
}

impl<T: Clone + Num> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, o: &Polynomial<T>) -> Polynomial<T> {
        self + &(-o)
    }
}

impl<T: Clone + Num> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, o: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<T: Clone + Num> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, o: Polynomial<T>) -> Polynomial<T> {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

/// A root of multiplicity `mult`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<F> {
    pub at: Complex<F>,
    pub mult: usize,
}

impl<F: Real> Polynomial<Complex<F>> {
    /// Largest coefficient modulus, used to scale residual tolerances.
    pub fn norm_inf(&self) -> F {
        self.coeffs.iter().fold(F::zero(), |m, c| m.max(c.norm()))
    }

    /// All roots with multiplicity, by Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Vec<Complex<F>> {
        let n = match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(n) => n,
        };
        let lead = *self.leading().expect("nonzero");
        let monic = self.scale(&(Complex::new(F::one(), F::zero()) / lead));
        if n == 1 {
            return vec![-monic.coeffs[0]];
        }
        let dp = monic.derivative();
        // Cauchy bound for the initial circle.
        let radius = F::one() + monic.coeffs[..n].iter().fold(F::zero(), |m, c| m.max(c.norm()));
        let r0 = radius.min(F::lit(1e3)).max(F::lit(0.5));
        let offset = F::lit(0.4);
        let mut z: Vec<Complex<F>> = (0..n)
            .map(|k| {
                let theta = F::TAU() * F::from_usize(k).unwrap() / F::from_usize(n).unwrap() + offset;
                Complex::from_polar(r0, theta)
            })
            .collect();
        let tol = F::epsilon() * F::lit(4.0);
        for _ in 0..1000 {
            let mut moved = F::zero();
            for k in 0..n {
                let pv = monic.eval(&z[k]);
                if pv.is_zero() {
                    continue;
                }
                let ratio = pv / dp.eval(&z[k]);
                let mut sum = Complex::zero();
                for j in 0..n {
                    if j != k {
                        let d = z[k] - z[j];
                        if !d.is_zero() {
                            sum = sum + Complex::new(F::one(), F::zero()) / d;
                        }
                    }
                }
                let denom = Complex::new(F::one(), F::zero()) - ratio * sum;
                let step = if denom.norm().is_finite() && !denom.is_zero() { ratio / denom } else { ratio };
                if step.norm().is_finite() {
                    z[k] = z[k] - step;
                    moved = moved.max(step.norm() / (F::one() + z[k].norm()));
                }
            }
            if moved <= tol {
                break;
            }
        }
        z
    }

    /// Roots grouped into clusters closer than `cluster_tol` (relative),
    /// each refined by Newton iteration on the `(m-1)`-th derivative.
    pub fn distinct_roots(&self, cluster_tol: F) -> Vec<Root<F>> {
        let raw = self.roots();
        let mut groups: Vec<Vec<Complex<F>>> = Vec::new();
        for r in raw {
            let hit = groups.iter().position(|g| {
                g.iter().any(|s| (*s - r).norm() <= cluster_tol * (F::one() + r.norm()))
            });
            match hit {
                Some(i) => groups[i].push(r),
                None => groups.push(vec![r]),
            }
        }
        let mut out: Vec<Root<F>> = groups
            .into_iter()
            .map(|g| {
                let m = g.len();
                let cnt = F::from_usize(m).unwrap();
                let mut at = g.iter().fold(Complex::zero(), |a: Complex<F>, b| a + b) / cnt;
                let mut d = self.clone();
                for _ in 1..m {
                    d = d.derivative();
                }
                let dd = d.derivative();
                for _ in 0..8 {
                    let den = dd.eval(&at);
                    if den.is_zero() {
                        break;
                    }
                    let step = d.eval(&at) / den;
                    if !step.norm().is_finite() || step.norm() > cluster_tol * (F::one() + at.norm()) {
                        break;
                    }
                    at = at - step;
                }
                Root { at, mult: m }
            })
            .collect();
        out.sort_by(|a, b| {
            (a.at.re, a.at.im).partial_cmp(&(b.at.re, b.at.im)).unwrap_or(std::cmp::Ordering::Equal)
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, C64};
    use num_bigint::BigInt;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Polynomial::<C64>::new(vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn div_rem_exact_over_rationals() {
        let r = |n: i64| Rational::from_integer(BigInt::from(n));
        let a = Polynomial::new(vec![r(-1), r(0), r(1)]);
        let b = Polynomial::new(vec![r(-1), r(1)]);
        let (q, rem) = a.div_rem(&b);
        assert_eq!(q, Polynomial::new(vec![r(1), r(1)]));
        assert!(rem.is_zero());
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let t = p.taylor_at(&c(2.0, 0.0));
        assert_eq!(t, vec![c(17.0, 0.0), c(14.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn roots_with_multiplicity() {
        let p = Polynomial::from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 1.0), c(0.0, 3.0)]);
        let rs = p.distinct_roots(1e-4);
        assert_eq!(rs.len(), 3);
        let double = rs.iter().find(|r| r.mult == 2).unwrap();
        assert!((double.at - c(1.0, 0.0)).norm() < 1e-10);
        for r in &rs {
            assert!(p.eval(&r.at).norm() < 1e-9);
        }
    }
}
