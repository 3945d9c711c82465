use num_complex::Complex;
use num_traits::Zero;

use crate::Real;

/// Below this value of `|t w|` the Taylor series branch is used.
pub const PSI_SWITCHOVER: f64 = 1e-3;
const PSI_TERMS: usize = 12;

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1<F: Real>(z: Complex<F>) -> Complex<F> {
    let half = F::lit(0.5);
    let s = (z.im * half).sin();
    Complex::new(z.re.exp_m1() * z.im.cos() - F::lit(2.0) * s * s, z.re.exp() * z.im.sin())
}

/// `(e^{tw} - 1)/t`, extended by `w` at `t = 0`.
pub fn eval_psi<F: Real>(t: Complex<F>, w: Complex<F>) -> Complex<F> {
    let x = t * w;
    if x.norm() < F::lit(PSI_SWITCHOVER) {
        psi_series(t, w)
    } else {
        expm1(x) / t
    }
}

/// Truncated series `w * sum (tw)^k/(k+1)!`.
pub fn psi_series<F: Real>(t: Complex<F>, w: Complex<F>) -> Complex<F> {
    let x = t * w;
    let mut term = Complex::new(F::one(), F::zero());
    let mut sum = Complex::zero();
    for k in 0..PSI_TERMS {
        sum = sum + term;
        term = term * x / F::from_usize(k + 2).unwrap();
    }
    w * sum
}

/// `psi(t, w) + 1/t` in closed form `e^{tw}/t`. Nonzero whenever it is
/// representable, which is the avoidance property of `psi`.
pub fn psi_graph_gap<F: Real>(t: Complex<F>, w: Complex<F>) -> Complex<F> {
    (t * w).exp() / t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn zero_parameter_is_identity() {
        let w = C64::new(0.3, -2.0);
        assert_eq!(eval_psi(C64::new(0.0, 0.0), w), w);
    }

    #[test]
    fn full_period_vanishes() {
        let v = eval_psi(C64::new(1.0, 0.0), C64::new(0.0, std::f64::consts::TAU));
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn generic_over_f32() {
        let v = eval_psi(Complex::new(1.0f32, 0.0), Complex::new(1.0f32, 0.0));
        assert!((v.re - (1f32.exp() - 1.0)).abs() < 1e-6);
    }
}
