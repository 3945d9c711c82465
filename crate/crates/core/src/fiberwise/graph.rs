use num_complex::Complex;
use num_traits::{One, Zero};

use super::psi::eval_psi;
use super::rational::fmt_c;
use super::{FiberError, Polynomial, Proj, RationalFunction, Root};
use crate::Real;

const LOCAL_TERMS: usize = 24;

/// Fiber map `phi(z, w) = h(z) - psi(g(z), w)` whose fiber over `z` omits
/// exactly `s(z)` when `g(z) != 0`.
///
/// `g = f1 * exp(-g1)` is kept factored so its zeros are those of `f1`.
#[derive(Debug, Clone)]
pub struct GraphComplementMap<F> {
    s: RationalFunction<F>,
    g1: Polynomial<Complex<F>>,
    local: Vec<LocalSeries<F>>,
}

/// Power series of `h` around one pole of `s`, valid on `|z - at| <= radius`.
#[derive(Debug, Clone)]
struct LocalSeries<F> {
    at: Complex<F>,
    radius: F,
    coeffs: Vec<Complex<F>>,
}

/// Taylor coefficients of `exp(p(at + t))` up to `t^(n-1)`.
fn exp_series<F: Real>(p: &[Complex<F>], n: usize) -> Vec<Complex<F>> {
    let mut e = vec![Complex::zero(); n];
    if n == 0 {
        return e;
    }
    e[0] = p.first().copied().unwrap_or_else(Complex::zero).exp();
    for k in 1..n {
        let mut acc = Complex::zero();
        for j in 1..=k.min(p.len().saturating_sub(1)) {
            acc = acc + p[j] * e[k - j] * F::from_usize(j).unwrap();
        }
        e[k] = acc / F::from_usize(k).unwrap();
    }
    e
}

/// Taylor coefficients `L_0..L_{n-1}` of the principal `log f(at + t)`.
fn log_series<F: Real>(c: &[Complex<F>], n: usize) -> Vec<Complex<F>> {
    let get = |k: usize| c.get(k).copied().unwrap_or_else(Complex::zero);
    let mut l = vec![Complex::zero(); n];
    if n == 0 {
        return l;
    }
    l[0] = get(0).ln();
    for k in 1..n {
        let acc = (1..k).fold(Complex::zero(), |acc, j| acc + l[j] * get(k - j) * F::from_usize(j).unwrap());
        l[k] = (get(k) - acc / F::from_usize(k).unwrap()) / get(0);
    }
    l
}

/// Confluent Newton interpolation: the polynomial whose Taylor coefficients
/// at each node match `jets[i]` (length = multiplicity).
pub fn hermite_interpolate<F: Real>(nodes: &[(Complex<F>, Vec<Complex<F>>)]) -> Polynomial<Complex<F>> {
    let xs: Vec<(usize, Complex<F>)> =
        nodes.iter().enumerate().flat_map(|(i, (z, jet))| std::iter::repeat_n((i, *z), jet.len())).collect();
    let n = xs.len();
    if n == 0 {
        return Polynomial::zero();
    }
    let mut col: Vec<Complex<F>> = xs.iter().map(|(i, _)| nodes[*i].1[0]).collect();
    let mut newton = vec![col[0]];
    for k in 1..n {
        let next: Vec<Complex<F>> = (0..n - k)
            .map(|i| {
                let (ni, zi) = xs[i];
                let (nk, zk) = xs[i + k];
                if ni == nk {
                    nodes[ni].1[k]
                } else {
                    (col[i + 1] - col[i]) / (zk - zi)
                }
            })
            .collect();
        newton.push(next[0]);
        col = next;
    }
    let mut p = Polynomial::constant(newton[n - 1]);
    for k in (0..n - 1).rev() {
        let lin = Polynomial::new(vec![-xs[k].1, Complex::one()]);
        p = &(&p * &lin) + &Polynomial::constant(newton[k]);
    }
    p
}

impl<F: Real> GraphComplementMap<F> {
    /// Builds `g1` matching `log f` to the order of each pole, then the
    /// local expansions of `h` used near the poles.
    pub fn principal_part_inverse(s: RationalFunction<F>) -> Result<Self, FiberError> {
        let f = s.numerator().clone();
        let f1 = s.denominator().clone();
        let poles: Vec<Root<F>> = s.poles().to_vec();
        let mut nodes = Vec::with_capacity(poles.len());
        for p in &poles {
            let c = f.taylor_at(&p.at);
            if c.first().is_none_or(|c0| c0.is_zero()) {
                return Err(FiberError::NotCoprime { at: fmt_c(p.at) });
            }
            nodes.push((p.at, log_series(&c, p.mult)));
        }
        let g1 = hermite_interpolate(&nodes);
        let sep = poles
            .iter()
            .enumerate()
            .flat_map(|(i, a)| poles[i + 1..].iter().map(move |b| (a.at - b.at).norm()))
            .fold(F::infinity(), F::min);
        let radius = (sep * F::lit(0.1)).min(F::lit(0.05));
        let local = poles
            .iter()
            .map(|p| {
                let m = p.mult;
                let n = m + LOCAL_TERMS;
                let fc = f.taylor_at(&p.at);
                let ec = exp_series(&g1.taylor_at(&p.at), n);
                let dc = f1.taylor_at(&p.at);
                let get = |v: &[Complex<F>], k: usize| v.get(k).copied().unwrap_or_else(Complex::zero);
                let a: Vec<Complex<F>> = (0..LOCAL_TERMS).map(|k| get(&fc, k + m) - ec[k + m]).collect();
                let b: Vec<Complex<F>> = (0..LOCAL_TERMS).map(|k| get(&dc, k + m)).collect();
                let mut q: Vec<Complex<F>> = Vec::with_capacity(LOCAL_TERMS);
                for k in 0..LOCAL_TERMS {
                    let mut acc = a[k];
                    for j in 1..=k {
                        acc = acc - b[j] * q[k - j];
                    }
                    q.push(acc / b[0]);
                }
                LocalSeries { at: p.at, radius, coeffs: q }
            })
            .collect();
        Ok(GraphComplementMap { s, g1, local })
    }

    pub fn section(&self) -> &RationalFunction<F> {
        &self.s
    }

    pub fn f1(&self) -> &Polynomial<Complex<F>> {
        self.s.denominator()
    }

    pub fn g1(&self) -> &Polynomial<Complex<F>> {
        &self.g1
    }

    /// `g(z) = f1(z) exp(-g1(z))`.
    pub fn g(&self, z: Complex<F>) -> Complex<F> {
        self.f1().eval(&z) * (-self.g1.eval(&z)).exp()
    }

    /// The entire function `h = s - 1/g = (f - e^{g1})/f1`.
    pub fn h(&self, z: Complex<F>) -> Complex<F> {
        for l in &self.local {
            let t = z - l.at;
            if t.norm() <= l.radius {
                return l.coeffs.iter().rev().fold(Complex::zero(), |acc, c| acc * t + c);
            }
        }
        (self.s.numerator().eval(&z) - self.g1.eval(&z).exp()) / self.f1().eval(&z)
    }

    /// `phi(z, w)`; over a zero of `g` this is `h(z) - w`.
    pub fn eval(&self, z: Complex<F>, w: Complex<F>) -> Complex<F> {
        self.h(z) - eval_psi(self.g(z), w)
    }

    /// `phi(z, w) - s(z) = -e^{w g}/g` in closed form, `None` over a pole.
    pub fn avoidance_gap(&self, z: Complex<F>, w: Complex<F>) -> Option<Complex<F>> {
        let g = self.g(z);
        if g.is_zero() {
            None
        } else {
            Some(-(w * g).exp() / g)
        }
    }

    /// Solves `phi(z, w) = c` for `w`.
    pub fn solve_fiber(&self, z: Complex<F>, c: Complex<F>) -> Result<Complex<F>, FiberError> {
        let g = self.g(z);
        if g.is_zero() {
            return Ok(self.h(z) - c);
        }
        let s = match self.s.eval(z) {
            Proj::Finite(s) => s,
            Proj::Infinity => return Ok(self.h(z) - c),
        };
        let arg = g * (s - c);
        if arg.is_zero() {
            return Err(FiberError::OmittedValue { z: fmt_c(z), c: fmt_c(c) });
        }
        Ok(arg.ln() / g)
    }

    /// Largest `|h|` on a circle of the given radius around each pole.
    pub fn max_h_near_poles(&self, radius: F, samples: usize) -> F {
        let mut m = F::zero();
        for p in self.s.poles() {
            for k in 0..samples {
                let th = F::TAU() * F::from_usize(k).unwrap() / F::from_usize(samples).unwrap();
                m = m.max(self.h(p.at + Complex::from_polar(radius, th)).norm());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{RatFn64, C64};

    #[test]
    fn hermite_matches_jets() {
        let nodes = vec![
            (C64::new(0.0, 0.0), vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]),
            (C64::new(1.0, 0.0), vec![C64::new(-1.0, 0.0)]),
        ];
        let p = hermite_interpolate(&nodes);
        assert!((p.eval(&C64::new(0.0, 0.0)) - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((p.derivative().eval(&C64::new(0.0, 0.0)) - C64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((p.eval(&C64::new(1.0, 0.0)) - C64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn double_pole_h_is_bounded() {
        let s = RatFn64::parse("(z+3)/(z-1)^2").unwrap();
        let m = GraphComplementMap::principal_part_inverse(s).unwrap();
        assert!(m.max_h_near_poles(1e-2, 64) < 1e3);
        assert!(m.max_h_near_poles(0.2, 64) < 1e3);
    }
}
