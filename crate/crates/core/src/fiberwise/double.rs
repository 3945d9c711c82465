use num_complex::Complex;
use num_traits::Zero;

use super::psi::expm1;
use super::rational::{chordal_diff, cluster_tol, fmt_c};
use super::{FiberError, Polynomial, Proj, RationalFunction};
use crate::Real;

/// Below this `|w sigma|` the even series of `x coth x` is used.
const CONFLUENT_SWITCH: f64 = 0.05;
/// Coefficients of `x coth x = sum c_n x^{2n}`.
const XCOTHX: [f64; 8] = [
    1.0,
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638512875.0,
    4.0 / 18243225.0,
];

/// A double section `w = h(z) +- sqrt(g(z))` stored through its symmetric
/// functions `sum = 2h` and `product = h^2 - g`.
#[derive(Debug, Clone)]
pub struct DoubleSectionData<F> {
    pub sum: RationalFunction<F>,
    pub product: RationalFunction<F>,
    branch_points: Vec<Complex<F>>,
}

impl<F: Real> DoubleSectionData<F> {
    pub fn new(sum: RationalFunction<F>, product: RationalFunction<F>) -> Self {
        // sum^2 - 4 product = 4g
        let (a, b) = (sum.numerator(), sum.denominator());
        let (c, d) = (product.numerator(), product.denominator());
        let four = Complex::new(F::lit(4.0), F::zero());
        let disc_num = &(&(a * a) * d) - &(&(b * b) * c).scale(&four);
        let branch_points = disc_num.distinct_roots(cluster_tol()).into_iter().map(|r| r.at).collect();
        DoubleSectionData { sum, product, branch_points }
    }

    /// Builds the data from `h` and `g` directly.
    pub fn from_h_g(h: RationalFunction<F>, g: RationalFunction<F>) -> Result<Self, FiberError> {
        let two = Complex::new(F::lit(2.0), F::zero());
        let sum = RationalFunction::new(h.numerator().scale(&two), h.denominator().clone())?;
        let (hn, hd) = (h.numerator(), h.denominator());
        let (gn, gd) = (g.numerator(), g.denominator());
        let num = &(&(hn * hn) * gd) - &(&(hd * hd) * gn);
        let den: Polynomial<Complex<F>> = &(hd * hd) * gd;
        let product = reduce(num, den)?;
        Ok(Self::new(sum, product))
    }

    /// Builds the data from the two sections `v+ = u`, `v- = v`.
    pub fn from_sections(u: &RationalFunction<F>, v: &RationalFunction<F>) -> Result<Self, FiberError> {
        let (un, ud) = (u.numerator(), u.denominator());
        let (vn, vd) = (v.numerator(), v.denominator());
        let den = ud * vd;
        let sum = reduce(&(un * vd) + &(vn * ud), den.clone())?;
        let product = reduce(un * vn, den)?;
        Ok(Self::new(sum, product))
    }

    /// Zeros of the discriminant numerator, where `v+ = v-`.
    pub fn branch_points(&self) -> &[Complex<F>] {
        &self.branch_points
    }

    /// `(h(z), g(z))`.
    pub fn h_g(&self, z: Complex<F>) -> Result<(Complex<F>, Complex<F>), FiberError> {
        let sum = self.sum.eval(z).finite().ok_or_else(|| FiberError::Pole { at: fmt_c(z) })?;
        let prod = self.product.eval(z).finite().ok_or_else(|| FiberError::Pole { at: fmt_c(z) })?;
        let h = sum * F::lit(0.5);
        Ok((h, h * h - prod))
    }

    /// The two sections `(v+, v-)` with the principal square root.
    pub fn sections(&self, z: Complex<F>) -> Result<(Complex<F>, Complex<F>), FiberError> {
        let (h, g) = self.h_g(z)?;
        let s = g.sqrt();
        Ok((h + s, h - s))
    }

    /// `H(z, w) = h + sigma coth(w sigma)`, `sigma^2 = g`; omits `v+(z)`
    /// and `v-(z)` and equals `h + 1/w` over branch points.
    pub fn eval(&self, z: Complex<F>, w: Complex<F>) -> Result<Proj<F>, FiberError> {
        let (h, g) = self.h_g(z)?;
        Ok(h0_from_hg(h, g, w))
    }

    /// Smallest chordal distance from `H(z, w)` to `{v+(z), v-(z)}`, with
    /// the differences taken in closed form.
    pub fn avoidance_gap(&self, z: Complex<F>, w: Complex<F>) -> Result<F, FiberError> {
        let (h, g) = self.h_g(z)?;
        let s0 = g.sqrt();
        let x0 = w * s0;
        // Either square root works; pick Re x <= 0 so e^{2x} stays bounded.
        let (s, x) = if x0.re > F::zero() { (-s0, -x0) } else { (s0, x0) };
        let (vp, vm) = (h + s, h - s);
        let hv = h0_from_hg(h, g, w);
        let Proj::Finite(hz) = hv else {
            return Ok(hv.chordal(Proj::Finite(vp)).min(hv.chordal(Proj::Finite(vm))));
        };
        // H - v+ = sigma (coth x - 1), H - v- = sigma (coth x + 1)
        let (dp, dm) = if x.norm() < F::lit(CONFLUENT_SWITCH) {
            let xc = xcothx(x);
            ((xc - x) / w, (xc + x) / w)
        } else {
            // coth x - 1 = 2/(e^{2x} - 1), coth x + 1 = 2 e^{2x}/(e^{2x} - 1)
            let two = F::lit(2.0);
            let em = expm1(x * two);
            (s * two / em, s * two * (x * two).exp() / em)
        };
        Ok(chordal_diff(dp, hz, vp).min(chordal_diff(dm, hz, vm)))
    }
}

fn reduce<F: Real>(
    num: Polynomial<Complex<F>>,
    den: Polynomial<Complex<F>>,
) -> Result<RationalFunction<F>, FiberError> {
    if num.is_zero() {
        return Ok(RationalFunction::polynomial(num));
    }
    let mut num = num;
    let mut den = den;
    let tol = cluster_tol::<F>() * F::lit(1e3);
    for r in den.clone().distinct_roots(cluster_tol()) {
        for _ in 0..r.mult {
            let scale = num.norm_inf() * (F::one() + r.at.norm()).powi(num.degree().unwrap_or(0) as i32);
            if num.is_zero() || num.eval(&r.at).norm() > tol * scale {
                break;
            }
            let lin = Polynomial::new(vec![-r.at, Complex::new(F::one(), F::zero())]);
            num = num.div_rem(&lin).0;
            den = den.div_rem(&lin).0;
        }
    }
    RationalFunction::new(num, den)
}

fn xcothx<F: Real>(x: Complex<F>) -> Complex<F> {
    let x2 = x * x;
    XCOTHX.iter().rev().fold(Complex::zero(), |acc, c| acc * x2 + F::lit(*c))
}

/// `H0(u, v, w)` written in `h = (u+v)/2`, `g = ((u-v)/2)^2`; symmetric in
/// `u, v` by construction.
pub fn h0_from_hg<F: Real>(h: Complex<F>, g: Complex<F>, w: Complex<F>) -> Proj<F> {
    if w.is_zero() {
        return Proj::Infinity;
    }
    let s = g.sqrt();
    let x = w * s;
    if x.norm() < F::lit(CONFLUENT_SWITCH) {
        return Proj::Finite(h + xcothx(x) / w);
    }
    let (s, x) = if x.re < F::zero() { (-s, -x) } else { (s, x) };
    let two = F::lit(2.0);
    // coth x = -(2 - expm1(-2x))/expm1(-2x) with Re x >= 0
    let em = expm1(-x * two);
    if em.is_zero() {
        return Proj::Infinity;
    }
    let coth = -(Complex::new(two, F::zero()) + em) / em;
    Proj::Finite(h + s * coth)
}

/// `H0(u, v, w) = (u G - v)/(G - 1)`, `G = e^{w(u - v)}`.
pub fn h0<F: Real>(u: Complex<F>, v: Complex<F>, w: Complex<F>) -> Proj<F> {
    let h = (u + v) * F::lit(0.5);
    let d = (u - v) * F::lit(0.5);
    h0_from_hg(h, d * d, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn coth_case() {
        let w = C64::new(0.7, 0.3);
        let v = h0(C64::new(1.0, 0.0), C64::new(-1.0, 0.0), w).finite().unwrap();
        let e = (w * 2.0).exp();
        assert!((v - (e + 1.0) / (e - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn confluent_limit() {
        let h = C64::new(0.5, -1.0);
        let w = C64::new(2.0, 1.0);
        let v = h0(h, h, w).finite().unwrap();
        assert!((v - (h + C64::new(1.0, 0.0) / w)).norm() < 1e-15);
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let g = C64::new(0.0, 1.0);
        let s = g.sqrt();
        for k in 0..16 {
            let th = k as f64 * 0.39;
            let w = C64::from_polar(CONFLUENT_SWITCH, th) / s;
            let a = h0_from_hg(C64::new(0.0, 0.0), g, w * 0.999_999).finite().unwrap();
            let b = h0_from_hg(C64::new(0.0, 0.0), g, w * 1.000_001).finite().unwrap();
            assert!((a - b).norm() / a.norm() < 1e-5, "{a} {b}");
        }
    }

    #[test]
    fn expm1_coth_identity() {
        let x = C64::new(0.3, 2.0);
        let em = expm1(-x * 2.0);
        let coth = -(C64::new(2.0, 0.0) + em) / em;
        assert!((coth - x.cosh() / x.sinh()).norm() < 1e-14);
    }
}
