use num_complex::Complex;

use super::{FiberError, Polynomial, RationalFunction};
use crate::Real;

/// `H(z, w) = p(z) w + q(z)`. Over a zero of `p` of order `n` the fiber
/// collapses to `q(z0)` and `H(., w)` agrees with `q` to order `n - 1`.
pub fn twist_map<F: Real>(
    p: &Polynomial<Complex<F>>,
    q: &RationalFunction<F>,
    z: Complex<F>,
    w: Complex<F>,
) -> Result<Complex<F>, FiberError> {
    let qz = q.eval_finite(z)?;
    Ok(p.eval(&z) * w + qz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Poly64, RatFn64, C64};

    #[test]
    fn zero_of_p_collapses_fiber() {
        let p = Poly64::from_roots(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let q = RatFn64::parse("1/z").unwrap();
        for w in [C64::new(0.0, 0.0), C64::new(5.0, -3.0)] {
            assert_eq!(twist_map(&p, &q, C64::new(1.0, 0.0), w).unwrap(), C64::new(1.0, 0.0));
        }
        assert!(matches!(twist_map(&p, &q, C64::new(0.0, 0.0), C64::new(1.0, 0.0)), Err(FiberError::Pole { .. })));
    }
}
