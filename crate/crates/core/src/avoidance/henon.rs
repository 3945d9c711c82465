use num_complex::Complex;
use num_traits::{Num, Zero};
use serde::Serialize;

use super::AvoidanceError;
use crate::Real;

/// Consecutive small steps needed before the basin map iteration stops.
const SETTLED_STEPS: usize = 3;

/// `H(z, w) = (w, w^2 - z/2)`, exact in any ring with division by 2.
pub fn henon_forward<T: Clone + Num>(p: &[T; 2]) -> [T; 2] {
    let two = T::one() + T::one();
    let [z, w] = p.clone();
    [w.clone(), w.clone() * w - z / two]
}

/// `H^{-1}(u, v) = (2(u^2 - v), u)`.
pub fn henon_backward<T: Clone + Num>(p: &[T; 2]) -> [T; 2] {
    let two = T::one() + T::one();
    let [u, v] = p.clone();
    [two * (u.clone() * u.clone() - v), u]
}

/// The linear part `D = [[0, 1], [-1/2, 0]]` of `H` at the origin.
pub fn linear_part<T: Clone + Num>(p: &[T; 2]) -> [T; 2] {
    let two = T::one() + T::one();
    let [z, w] = p.clone();
    [w, T::zero() - z / two]
}

/// Smallest `R` such that `|w| >= max(|z|, R)` forces `|H_2| >= 2|w|`:
/// the positive root of `t^2 - t/2 - 2t = 0`.
pub fn escape_radius<F: Real>() -> F {
    F::lit(2.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Outside,
    Unresolved,
}

/// The Hénon map with iteration limits. Inside is certified by entering
/// the ball `max(|z|, sqrt 2 |w|) < attract_radius` (on which `H` contracts
/// when the radius is below `sqrt 2 - 1`); outside by
/// `|w| >= max(|z|, escape_radius)`.
#[derive(Debug, Clone, Serialize)]
pub struct HenonSystem<F> {
    pub n_max: usize,
    pub attract_radius: F,
    pub escape_radius: F,
    /// `V_R` radius containing the basin; equals the escape radius, since a
    /// point with `|w| >= max(|z|, R_esc)` escapes.
    pub basin_radius: F,
}

impl<F: Real> Default for HenonSystem<F> {
    fn default() -> Self {
        let esc = escape_radius::<F>();
        HenonSystem { n_max: 200, attract_radius: F::lit(0.25), escape_radius: esc, basin_radius: esc }
    }
}

/// `max(|z|, sqrt 2 |w|)`, the norm in which `D` is a contraction by `1/sqrt 2`.
pub fn adapted_norm<F: Real>(p: &[Complex<F>; 2]) -> F {
    p[0].norm().max(F::SQRT_2() * p[1].norm())
}

/// Smallest `R` with `p` in the closure of `V_R`.
pub fn v_r_radius<F: Real>(p: &[Complex<F>; 2]) -> F {
    if p[1].norm() < p[0].norm() {
        F::zero()
    } else {
        p[1].norm()
    }
}

/// `V_R = {|z| <= R, |w| < R} u {|z| >= R, |w| < |z|}`.
pub fn in_v_r<F: Real>(p: &[Complex<F>; 2], r: F) -> bool {
    let (a, b) = (p[0].norm(), p[1].norm());
    (a <= r && b < r) || (a >= r && b < a)
}

/// `V = {|w| < 1 + |z|^2}`.
pub fn in_v<F: Real>(p: &[Complex<F>; 2]) -> bool {
    p[1].norm() < F::one() + p[0].norm_sqr()
}

impl<F: Real> HenonSystem<F> {
    pub fn validate(&self) -> Result<(), AvoidanceError> {
        if !(self.attract_radius > F::zero() && self.attract_radius < F::SQRT_2() - F::one()) {
            return Err(AvoidanceError::config(
                "0 < attract_radius < sqrt(2) - 1",
                format!("attract_radius = {}", self.attract_radius),
            ));
        }
        if self.escape_radius < escape_radius::<F>() {
            return Err(AvoidanceError::config(
                "escape_radius >= 5/2",
                format!("escape_radius = {}", self.escape_radius),
            ));
        }
        Ok(())
    }

    pub fn forward(&self, p: &[Complex<F>; 2]) -> [Complex<F>; 2] {
        henon_forward(p)
    }

    pub fn backward(&self, p: &[Complex<F>; 2]) -> [Complex<F>; 2] {
        henon_backward(p)
    }

    pub fn basin_membership(&self, p: &[Complex<F>; 2]) -> Membership {
        let mut x = *p;
        for _ in 0..=self.n_max {
            if adapted_norm(&x) < self.attract_radius {
                return Membership::Inside;
            }
            if x[1].norm() >= x[0].norm().max(self.escape_radius) {
                return Membership::Outside;
            }
            x = henon_forward(&x);
            if !(x[0].norm().is_finite() && x[1].norm().is_finite()) {
                return Membership::Unresolved;
            }
        }
        Membership::Unresolved
    }

    /// `Psi(q) = lim H^{-n}(D^n q)`, stopped once successive iterates have
    /// differed by less than `tol / 10` for `SETTLED_STEPS` steps in a row.
    pub fn fb_map(&self, q: &[Complex<F>; 2], tol: F) -> Result<[Complex<F>; 2], AvoidanceError> {
        if q[0].is_zero() && q[1].is_zero() {
            return Ok(*q);
        }
        let stop = tol * F::lit(0.1);
        let mut dq = *q;
        let mut prev: Option<[Complex<F>; 2]> = None;
        let mut last_diff = F::infinity();
        let mut settled = 0;
        for n in 1..=self.n_max {
            dq = linear_part(&dq);
            let mut x = dq;
            for _ in 0..n {
                x = henon_backward(&x);
            }
            if let Some(p) = prev {
                last_diff = ((x[0] - p[0]).norm_sqr() + (x[1] - p[1]).norm_sqr()).sqrt();
                // Isolated coincidences happen (e.g. q = (0, w) repeats its
                // first iterate), so a run of small steps is required.
                settled = if last_diff < stop { settled + 1 } else { 0 };
                if settled == SETTLED_STEPS {
                    return Ok(x);
                }
            }
            prev = Some(x);
        }
        Err(AvoidanceError::NoConvergence { n_max: self.n_max, residual: last_diff.to64() })
    }

    /// `Phi = Psi / R`, landing in `V_1`.
    pub fn fb_scaled(&self, q: &[Complex<F>; 2], tol: F) -> Result<[Complex<F>; 2], AvoidanceError> {
        let p = self.fb_map(q, tol)?;
        Ok([p[0] / self.basin_radius, p[1] / self.basin_radius])
    }

    /// Twice the largest `V_R` radius over the given basin points.
    pub fn empirical_radius(&self, pts: &[[Complex<F>; 2]]) -> F {
        F::lit(2.0) * pts.iter().map(v_r_radius).fold(F::zero(), F::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExactComplex, Rational, C64};
    use num_bigint::BigInt;

    #[test]
    fn exact_round_trip() {
        let q = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
        let p = [ExactComplex::new(q(3, 7), q(-1, 2)), ExactComplex::new(q(5, 3), q(2, 9))];
        assert_eq!(henon_backward(&henon_forward(&p)), p);
        assert_eq!(henon_forward(&henon_backward(&p)), p);
    }

    #[test]
    fn origin_is_fixed_and_attracting() {
        let sys = HenonSystem::<f64>::default();
        let o = [C64::new(0.0, 0.0); 2];
        assert_eq!(henon_forward(&o), o);
        assert_eq!(sys.basin_membership(&o), Membership::Inside);
        assert_eq!(sys.basin_membership(&[C64::new(0.0, 0.0), C64::new(1e6, 0.0)]), Membership::Outside);
    }

    #[test]
    fn fb_map_conjugates() {
        let sys = HenonSystem::<f64>::default();
        let q = [C64::new(0.5, -0.3), C64::new(-0.2, 0.7)];
        let a = sys.fb_map(&linear_part(&q), 1e-12).unwrap();
        let b = henon_forward(&sys.fb_map(&q, 1e-12).unwrap());
        assert!((a[0] - b[0]).norm() + (a[1] - b[1]).norm() < 1e-9);
    }
}
