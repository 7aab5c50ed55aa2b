//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! Infinite endpoints are mapped onto the unit interval with
//! `x = lo + L s / (1 - s)` (or its mirror for a `-inf` lower limit), so every
//! panel the refinement sees is bounded. The algebraic map keeps both
//! exponential and power-law tails integrable at `s = 1`. A doubly infinite
//! range is split at zero.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

/// Maximum number of panels before giving up.
pub const MAX_PANELS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    if !value.is_finite() {
        return Err(Error::Accuracy {
            achieved: f64::INFINITY,
            requested: 0.0,
        });
    }
    Ok(Panel { a, b, value, error })
}

fn adapt(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadResult> {
    let first = gk15(&mut f, a, b).map_err(|_| Error::Accuracy {
        achieved: f64::INFINITY,
        requested: abs_tol,
    })?;
    let mut err = first.error;
    let mut total = first.value;
    let mut heap = BinaryHeap::from([first]);
    while err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_PANELS {
            return Err(Error::Accuracy {
                achieved: err,
                requested: abs_tol,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            return Err(Error::Accuracy {
                achieved: err,
                requested: abs_tol,
            });
        }
        let bad = |_| Error::Accuracy {
            achieved: f64::INFINITY,
            requested: abs_tol,
        };
        let left = gk15(&mut f, worst.a, mid).map_err(bad)?;
        let right = gk15(&mut f, mid, worst.b).map_err(bad)?;
        err += left.error + right.error - worst.error;
        total += left.value + right.value - worst.value;
        heap.push(left);
        heap.push(right);
    }
    // resum to shed the drift of incremental updates
    let value = heap.iter().map(|p| p.value).sum();
    let abs_error = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        abs_error,
        panels: heap.len(),
    })
}

/// `∫_lo^hi f(x) dx` within `abs_tol`; either limit may be infinite.
pub fn quad_adaptive(f: impl Fn(f64) -> f64, lo: f64, hi: f64, abs_tol: f64) -> Result<f64> {
    quad_adaptive_scaled(f, lo, hi, abs_tol, 1.0).map(|r| r.value)
}

/// As [`quad_adaptive`], with length scale `scale` in the tail map
/// `x = lo + scale * s / (1 - s)`. A scale near the integrand's decay length
/// puts the bulk of the mass in the middle of the mapped interval.
pub fn quad_adaptive_scaled(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    scale: f64,
) -> Result<QuadResult> {
    scaled(&f, lo, hi, abs_tol, 0.0, scale)
}

/// As [`quad_adaptive_scaled`], stopping once the error estimate is within
/// `abs_tol` or within `rel_tol` of the running value, whichever is looser.
pub fn quad_adaptive_rel(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    scale: f64,
) -> Result<QuadResult> {
    if !(rel_tol >= 0.0) {
        return Err(Error::Domain(format!("quadrature needs rel_tol >= 0, got {rel_tol}")));
    }
    scaled(&f, lo, hi, abs_tol, rel_tol, scale)
}

fn scaled(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, abs_tol: f64, rel: f64, c: f64) -> Result<QuadResult> {
    if !(abs_tol > 0.0) || !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!(
            "quadrature needs abs_tol > 0 and a positive tail scale, got {abs_tol}, {c}"
        )));
    }
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::Domain("quadrature limits must not be NaN".into()));
    }
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }
    if lo > hi {
        let r = scaled(f, hi, lo, abs_tol, rel, c)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => adapt(f, lo, hi, abs_tol, rel),
        (true, false) => adapt(
            |s| {
                let r = 1.0 / (1.0 - s);
                f(lo + c * s * r) * c * r * r
            },
            0.0,
            1.0,
            abs_tol,
            rel,
        ),
        (false, true) => adapt(
            |s| {
                let r = 1.0 / (1.0 - s);
                f(hi - c * s * r) * c * r * r
            },
            0.0,
            1.0,
            abs_tol,
            rel,
        ),
        (false, false) => {
            let left = scaled(f, f64::NEG_INFINITY, 0.0, abs_tol / 2.0, rel, c)?;
            let right = scaled(f, 0.0, f64::INFINITY, abs_tol / 2.0, rel, c)?;
            Ok(QuadResult {
                value: left.value + right.value,
                abs_error: left.abs_error + right.abs_error,
                panels: left.panels + right.panels,
            })
        }
    }
}
