use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

use super::Proj;
use crate::Real;

/// One evaluation `(z, w) -> out`; an output at infinity is written as
/// `inf, inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSample<F> {
    pub z: Complex<F>,
    pub w: Complex<F>,
    pub out: Proj<F>,
}

#[derive(Serialize)]
struct Row {
    re_z: f64,
    im_z: f64,
    re_w: f64,
    im_w: f64,
    re_out: f64,
    im_out: f64,
}

/// Writes `re z, im z, re w, im w, re out, im out` with a header row.
pub fn write_grid_csv<F: Real, W: Write>(out: W, samples: &[GridSample<F>]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    for s in samples {
        let (re_out, im_out) = match s.out {
            Proj::Finite(v) => (v.re.to64(), v.im.to64()),
            Proj::Infinity => (f64::INFINITY, f64::INFINITY),
        };
        wr.serialize(Row {
            re_z: s.z.re.to64(),
            im_z: s.z.im.to64(),
            re_w: s.w.re.to64(),
            im_w: s.w.im.to64(),
            re_out,
            im_out,
        })?;
    }
    wr.flush()?;
    Ok(())
}

/// `n x n` points of the square `[-half, half]^2` around `center`.
pub fn square_grid<F: Real>(center: Complex<F>, half: F, n: usize) -> Vec<Complex<F>> {
    let step = |k: usize| {
        if n <= 1 {
            F::zero()
        } else {
            -half + half * F::lit(2.0) * F::from_usize(k).unwrap() / F::from_usize(n - 1).unwrap()
        }
    };
    (0..n).flat_map(|i| (0..n).map(move |j| center + Complex::new(step(i), step(j)))).collect()
}
