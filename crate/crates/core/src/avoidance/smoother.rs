use num_complex::Complex;
use num_traits::Zero;

use super::AvoidanceError;
use crate::Real;

/// Piecewise constant `f: R -> [-C, C]`.
///
/// `values[i]` holds on the open interval between `breaks[i-1]` and
/// `breaks[i]`, with the ends extended to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<F> {
    c: F,
    breaks: Vec<F>,
    values: Vec<F>,
}

impl<F: Real> StepFunction<F> {
    pub fn constant(c: F, value: F) -> Self {
        StepFunction { c, breaks: Vec::new(), values: vec![value] }
    }

    /// `0` on the union of the closed `intervals`, `c` elsewhere.
    pub fn from_zero_intervals(c: F, intervals: &[(F, F)]) -> Self {
        let mut iv: Vec<(F, F)> = intervals.iter().copied().filter(|(a, b)| a <= b).collect();
        iv.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut merged: Vec<(F, F)> = Vec::new();
        for (a, b) in iv {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        let mut breaks = Vec::with_capacity(2 * merged.len());
        let mut values = vec![c];
        for (a, b) in merged {
            breaks.push(a);
            values.push(F::zero());
            breaks.push(b);
            values.push(c);
        }
        StepFunction { c, breaks, values }
    }

    /// General step function: `values[i]` between `breaks[i-1]` and
    /// `breaks[i]`. Breaks must be strictly increasing and `|values| <= c`.
    pub fn from_breaks(c: F, breaks: Vec<F>, values: Vec<F>) -> Result<Self, AvoidanceError> {
        if values.len() != breaks.len() + 1 {
            return Err(AvoidanceError::config("values = breaks + 1", format!("{} breaks, {} values", breaks.len(), values.len())));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(AvoidanceError::config("breaks increasing", format!("{breaks:?}")));
        }
        if values.iter().any(|v| !(v.abs() <= c)) {
            return Err(AvoidanceError::config("|f| <= C", format!("C = {c}, values {values:?}")));
        }
        Ok(StepFunction { c, breaks, values })
    }

    pub fn bound(&self) -> F {
        self.c
    }

    pub fn breaks(&self) -> &[F] {
        &self.breaks
    }

    /// Value at `x`; at a breakpoint the smaller adjacent value, which
    /// makes zero intervals closed.
    pub fn eval(&self, x: F) -> F {
        let i = self.breaks.partition_point(|b| *b < x);
        if i < self.breaks.len() && self.breaks[i] == x {
            return self.values[i].min(self.values[i + 1]);
        }
        self.values[i]
    }

    /// The constant value on `[a, b]`, if there is one.
    pub fn constant_on(&self, a: F, b: F) -> Option<F> {
        let i = self.breaks.partition_point(|x| *x < a);
        let j = self.breaks.partition_point(|x| *x <= b);
        (i == j).then(|| self.values[i])
    }

    /// Constant pieces `(a, b, value)` covering `[lo, hi]`.
    pub fn pieces(&self, lo: F, hi: F) -> Vec<(F, F, F)> {
        let mut out = Vec::new();
        let mut a = lo;
        let mut i = self.breaks.partition_point(|x| *x <= lo);
        while a < hi {
            let b = if i < self.breaks.len() { self.breaks[i].min(hi) } else { hi };
            if b > a {
                out.push((a, b, self.values[i]));
            }
            a = b;
            i += 1;
        }
        out
    }
}

/// Result of one smoother evaluation with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothed<F> {
    pub value: Complex<F>,
    /// Estimated quadrature error plus the analytic tail bound.
    pub error_bound: F,
}

/// Holomorphic smoothing of a step function on the strip
/// `|Im z - gamma| < epsilon`:
/// `g(z) = (1/pi) int f(x) eps / ((x - z')^2 + eps^2) dx`, `z' = z - i gamma`.
#[derive(Debug, Clone)]
pub struct StripSmoother<F> {
    pub step: StepFunction<F>,
    pub epsilon: F,
    pub gamma: F,
    pub x_max: F,
    pub tolerance: F,
}

const MAX_DEPTH: u32 = 60;

impl<F: Real> StripSmoother<F> {
    /// Uses the smallest truncation radius (at least `1e3`) whose two-sided
    /// tail bound `2 C eps / (pi X)` is within `tolerance`.
    pub fn new(step: StepFunction<F>, epsilon: F, gamma: F, tolerance: F) -> Result<Self, AvoidanceError> {
        let x_max = default_x_max(step.bound(), epsilon, tolerance);
        Self::with_truncation(step, epsilon, gamma, tolerance, x_max)
    }

    pub fn with_truncation(
        step: StepFunction<F>,
        epsilon: F,
        gamma: F,
        tolerance: F,
        x_max: F,
    ) -> Result<Self, AvoidanceError> {
        if !(epsilon > F::zero() && epsilon < F::one()) {
            return Err(AvoidanceError::config("0 < epsilon < 1", format!("epsilon = {epsilon}")));
        }
        if !(tolerance > F::zero()) {
            return Err(AvoidanceError::config("tolerance > 0", format!("tolerance = {tolerance}")));
        }
        let sm = StripSmoother { step, epsilon, gamma, x_max, tolerance };
        if sm.tail_bound() > tolerance {
            return Err(AvoidanceError::config(
                "C eps / (pi X_max) <= tolerance",
                format!("tail bound {} exceeds tolerance {tolerance} at X_max = {x_max}", sm.tail_bound()),
            ));
        }
        Ok(sm)
    }

    /// Per-side truncation error bound `C eps / (pi X_max)`.
    pub fn tail_bound(&self) -> F {
        self.step.bound() * self.epsilon / (F::PI() * self.x_max)
    }

    pub fn in_strip(&self, z: Complex<F>) -> bool {
        (z.im - self.gamma).abs() < self.epsilon
    }

    pub fn eval(&self, z: Complex<F>) -> Result<Smoothed<F>, AvoidanceError> {
        if !self.in_strip(z) {
            return Err(AvoidanceError::OutsideStrip {
                z: [z.re.to64(), z.im.to64()],
                gamma: self.gamma.to64(),
                epsilon: self.epsilon.to64(),
            });
        }
        let zl = Complex::new(z.re, z.im - self.gamma);
        let x0 = zl.re;
        let eps = self.epsilon;
        // Substituting x = x0 + eps tan(t) turns the kernel measure into
        // dt / (1 - s^2 cos^2 t - i s sin 2t), s = Im z' / eps, which is
        // bounded on the strip and needs no special care at large |x|.
        let s = zl.im / eps;
        let kernel = |t: F| {
            let (sin, cos) = t.sin_cos();
            Complex::new(F::one(), F::zero()) / Complex::new(F::one() - s * s * cos * cos, -s * F::lit(2.0) * sin * cos)
        };
        let angle = |x: F| ((x - x0) / eps).atan();
        let inv_pi = F::one() / F::PI();
        let tail = self.effective_tail_bound();
        // The kernel has total mass pi on every line in the strip, so when f
        // takes the same value v outside a bounded set,
        // g = v - (1/pi) int (v - f) K over that bounded set, with no tail.
        let (base, pieces, lo, hi) = match self.outer_value() {
            Some(v) => {
                let b = &self.step.breaks;
                let pieces = match (b.first(), b.last()) {
                    (Some(a), Some(z)) => self.step.pieces(*a, *z),
                    _ => Vec::new(),
                };
                (v, pieces, v, true)
            }
            None => (F::zero(), self.step.pieces(x0 - self.x_max, x0 + self.x_max), F::zero(), false),
        };
        let weighted: Vec<(F, F, F)> = pieces
            .into_iter()
            .map(|(a, b, v)| (a, b, if hi { v - lo } else { v }))
            .filter(|p| !p.2.is_zero())
            .collect();
        let n = F::from_usize(weighted.len().max(1)).unwrap();
        let piece_tol = self.tolerance / n;
        let mut total = Complex::zero();
        let mut err = F::zero();
        for (a, b, v) in weighted {
            // Split at x0 (t = 0) so the kernel peak sits on a node.
            let (a, b) = (angle(a), angle(b));
            let cuts: Vec<(F, F)> = if a < F::zero() && F::zero() < b { vec![(a, F::zero()), (F::zero(), b)] } else { vec![(a, b)] };
            for (lo, hi) in cuts {
                let (val, e) = adaptive_simpson(&kernel, lo, hi, piece_tol);
                total = total + val * v;
                err = err + e * v.abs();
            }
        }
        Ok(Smoothed {
            value: Complex::new(base, F::zero()) + total * inv_pi,
            error_bound: err * inv_pi + F::lit(2.0) * tail,
        })
    }

    /// The common value of `f` near both infinities, if they agree.
    fn outer_value(&self) -> Option<F> {
        let v = &self.step.values;
        (v[0] == v[v.len() - 1]).then(|| v[0])
    }

    /// Per-side tail error actually incurred by [`eval`](Self::eval): zero
    /// when `f` is constant outside a bounded set.
    pub fn effective_tail_bound(&self) -> F {
        if self.outer_value().is_some() {
            F::zero()
        } else {
            self.tail_bound()
        }
    }

    /// Exact value via the antiderivative `atan((x - z')/eps)`, valid on the
    /// strip where the principal branch is analytic along the real axis.
    pub fn eval_closed_form(&self, z: Complex<F>) -> Result<Complex<F>, AvoidanceError> {
        if !self.in_strip(z) {
            return Err(AvoidanceError::OutsideStrip {
                z: [z.re.to64(), z.im.to64()],
                gamma: self.gamma.to64(),
                epsilon: self.epsilon.to64(),
            });
        }
        let zl = Complex::new(z.re, z.im - self.gamma);
        let half_pi = Complex::new(F::PI() / F::lit(2.0), F::zero());
        let at = |x: F| ((Complex::new(x, F::zero()) - zl) / self.epsilon).atan();
        let b = &self.step.breaks;
        let mut total = Complex::zero();
        for (i, v) in self.step.values.iter().enumerate() {
            let upper = if i < b.len() { at(b[i]) } else { half_pi };
            let lower = if i > 0 { at(b[i - 1]) } else { -half_pi };
            total = total + (upper - lower) * *v;
        }
        Ok(total / F::PI())
    }
}

pub fn default_x_max<F: Real>(c: F, epsilon: F, tolerance: F) -> F {
    (F::lit(2.0) * c * epsilon / (F::PI() * tolerance)).max(F::lit(1e3))
}

/// `min(delta/2, pi delta log(3/2) / (2C))`.
pub fn max_epsilon<F: Real>(c: F, delta: F) -> F {
    let two = F::lit(2.0);
    (delta / two).min(F::PI() * delta * F::lit(1.5).ln() / (two * c))
}

fn simpson<F: Real>(a: F, b: F, fa: Complex<F>, fm: Complex<F>, fb: Complex<F>) -> Complex<F> {
    (fa + fm * F::lit(4.0) + fb) * ((b - a) / F::lit(6.0))
}

/// Adaptive Simpson with Richardson correction; returns the value and the
/// accumulated error estimate.
fn adaptive_simpson<F: Real>(f: &impl Fn(F) -> Complex<F>, a: F, b: F, tol: F) -> (Complex<F>, F) {
    let two = F::lit(2.0);
    let m = (a + b) / two;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Real>(
    f: &impl Fn(F) -> Complex<F>,
    a: F,
    b: F,
    fa: Complex<F>,
    fm: Complex<F>,
    fb: Complex<F>,
    whole: Complex<F>,
    tol: F,
    depth: u32,
) -> (Complex<F>, F) {
    let two = F::lit(2.0);
    let m = (a + b) / two;
    let (lm, rm) = ((a + m) / two, (m + b) / two);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let fifteen = F::lit(15.0);
    if depth == 0 || delta.norm() <= fifteen * tol {
        return (left + right + delta / fifteen, delta.norm() / fifteen);
    }
    let (l, le) = recurse(f, a, m, fa, flm, fm, left, tol / two, depth - 1);
    let (r, re) = recurse(f, m, b, fm, frm, fb, right, tol / two, depth - 1);
    (l + r, le + re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn constant_is_reproduced() {
        let c = 32f64.ln();
        let sm = StripSmoother::new(StepFunction::constant(c, c), 0.01, 0.0, 1e-9).unwrap();
        let g = sm.eval(C64::new(3.0, 0.004)).unwrap();
        assert!((g.value - C64::new(c, 0.0)).norm() <= g.error_bound + 1e-9, "{:?}", g);
    }

    #[test]
    fn zero_function() {
        let sm = StripSmoother::new(StepFunction::constant(1.0, 0.0), 0.01, 0.0, 1e-9).unwrap();
        assert_eq!(sm.eval(C64::new(0.0, 0.0)).unwrap().value, C64::new(0.0, 0.0));
    }

    #[test]
    fn step_pieces_and_constancy() {
        let s = StepFunction::from_zero_intervals(2.0, &[(0.0, 1.0), (0.5, 2.0), (5.0, 6.0)]);
        assert_eq!(s.breaks(), &[0.0, 2.0, 5.0, 6.0]);
        assert_eq!(s.eval(1.0), 0.0);
        assert_eq!(s.eval(2.0), 0.0);
        assert_eq!(s.eval(3.0), 2.0);
        assert_eq!(s.constant_on(2.5, 4.5), Some(2.0));
        assert_eq!(s.constant_on(1.5, 2.5), None);
        assert_eq!(s.pieces(-1.0, 7.0).len(), 5);
    }

    #[test]
    fn outside_strip_is_error() {
        let sm = StripSmoother::new(StepFunction::constant(1.0, 1.0), 0.01, 2.0, 1e-9).unwrap();
        assert!(matches!(sm.eval(C64::new(0.0, 0.0)), Err(AvoidanceError::OutsideStrip { .. })));
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let c = 32f64.ln();
        let step = StepFunction::from_zero_intervals(c, &[(-0.1, 0.1), (0.9, 1.1), (3.0, 3.2)]);
        let sm = StripSmoother::new(step, 0.0114, 1.0, 1e-10).unwrap();
        for z in [C64::new(0.0, 1.0), C64::new(0.95, 1.005), C64::new(2.0, 0.99), C64::new(-40.0, 1.01)] {
            let q = sm.eval(z).unwrap();
            let exact = sm.eval_closed_form(z).unwrap();
            assert!((q.value - exact).norm() <= q.error_bound + 1e-12, "{z}: {:?} vs {exact}", q);
            assert!(q.value.re >= -1e-10);
        }
    }
}
