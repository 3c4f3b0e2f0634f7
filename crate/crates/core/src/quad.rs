//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integral of `f` over `[a, b]` to within `max(abs_tol, rel_tol·|I|)`.
pub fn integrate(f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, _, ok) = adaptive(f, &[a, b], abs_tol, rel_tol)?;
    if !ok {
        return Err(Error::NoConvergence(MAX_SEGMENTS));
    }
    Ok(v)
}

/// As [`integrate`], starting from a partition graded geometrically toward
/// both endpoints, so peaks of width down to `1e-8·(b − a)` are seen.
pub fn integrate_graded(f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let (v, _, ok) = integrate_graded_estimate(f, a, b, abs_tol, rel_tol)?;
    if !ok {
        return Err(Error::NoConvergence(MAX_SEGMENTS));
    }
    Ok(v)
}

/// `(value, error estimate, converged)`; stops at the segment budget instead of failing.
pub fn integrate_graded_estimate(
    f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64, bool)> {
    if a == b {
        return Ok((0.0, 0.0, true));
    }
    let len = b - a;
    let fracs = [1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1];
    let mut pts = vec![a];
    pts.extend(fracs.iter().map(|r| a + r * len));
    pts.push(a + 0.5 * len);
    pts.extend(fracs.iter().rev().map(|r| b - r * len));
    pts.push(b);
    adaptive(f, &pts, abs_tol, rel_tol)
}

pub const MAX_SEGMENTS: usize = 4000;

fn adaptive(mut f: impl FnMut(f64) -> f64, pts: &[f64], abs_tol: f64, rel_tol: f64) -> Result<(f64, f64, bool)> {
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for w in pts.windows(2) {
        let (v, e) = gk15(&mut f, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Segment { a: w[0], b: w[1], value: v, error: e });
    }
    let mut converged = true;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_SEGMENTS {
            converged = false;
            break;
        }
        let seg = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            heap.push(seg);
            break;
        }
        let (v1, e1) = gk15(&mut f, seg.a, mid);
        let (v2, e2) = gk15(&mut f, mid, seg.b);
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
    if !total.is_finite() {
        return Err(Error::NumericalInconsistency("non-finite integral".into()));
    }
    // Resum to remove drift from the running updates.
    let value = heap.iter().map(|s| s.value).sum();
    let err = heap.iter().map(|s| s.error).sum();
    Ok((value, err, converged))
}
