//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, nodes: &mut Option<&mut Vec<f64>>) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut eval = |x: f64| {
        if let Some(v) = nodes.as_deref_mut() {
            v.push(x);
        }
        f(x)
    };
    let fc = eval(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = eval(c - dx) + eval(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Piece { a, b, value: k * h, err: ((k - g) * h).abs() }
}

/// Integral of `f` over [a, b] to absolute tolerance `tol`.
pub fn adaptive_quad<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    run(f, a, b, tol, None)
}

/// As [`adaptive_quad`], also returning every abscissa at which `f` was sampled.
pub fn adaptive_quad_with_nodes<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(QuadResult, Vec<f64>)> {
    let mut nodes = Vec::new();
    let r = run(f, a, b, tol, Some(&mut nodes))?;
    Ok((r, nodes))
}

fn run<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    mut nodes: Option<&mut Vec<f64>>,
) -> Result<QuadResult> {
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("quadrature over [{a}, {b}] with tol {tol}")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_err: 0.0, intervals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b, &mut nodes);
    let mut err = first.err;
    heap.push(first);
    // pieces too narrow to split further are retired here
    let (mut frozen_value, mut frozen_err) = (0.0, 0.0);
    while err > tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence { what: "adaptive quadrature", iterations: heap.len() });
        }
        let Some(p) = heap.pop() else { break };
        let mid = 0.5 * (p.a + p.b);
        if (p.b - p.a).abs() <= 64.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            frozen_value += p.value;
            frozen_err += p.err;
            if frozen_err > tol {
                return Err(Error::NoConvergence {
                    what: "adaptive quadrature (resolution limit)",
                    iterations: heap.len(),
                });
            }
            continue;
        }
        let l = kronrod(&mut f, p.a, mid, &mut nodes);
        let r = kronrod(&mut f, mid, p.b, &mut nodes);
        err += l.err + r.err - p.err;
        heap.push(l);
        heap.push(r);
    }
    let value = heap.iter().map(|p| p.value).sum::<f64>() + frozen_value;
    let abs_err = heap.iter().map(|p| p.err).sum::<f64>() + frozen_err;
    let intervals = heap.len();
    Ok(QuadResult { value, abs_err, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        let r = adaptive_quad(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_circle() {
        let r = adaptive_quad(|x: f64| (1.0 - x * x).sqrt(), 0.0, 1.0, 1e-11).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let r = adaptive_quad(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = adaptive_quad(|x: f64| x * x, 1.0, 0.0, 1e-12).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let r = adaptive_quad(|x: f64| (1.0 / x).sin() / x, 1e-9, 1.0, 1e-14);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn records_nodes() {
        let (_, nodes) = adaptive_quad_with_nodes(|x: f64| x.exp(), 0.0, 1.0, 1e-10).unwrap();
        assert!(nodes.len() >= 15 && nodes.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }
}
