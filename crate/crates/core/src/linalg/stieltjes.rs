use num_complex::Complex64;

use super::{ComplexPoint, Spectrum};

/// `m_N(z) = (1/N) Σ 1/(λ_i − z)`.
pub fn stieltjes_mn(spectrum: &Spectrum, z: ComplexPoint) -> Complex64 {
    let zc = z.z();
    let n = spectrum.n() as f64;
    spectrum.values().iter().map(|&l| (Complex64::new(l, 0.0) - zc).inv()).sum::<Complex64>() / n
}

/// Semicircle Stieltjes transform: the root of `m² + zm + 1 = 0` with `Im m > 0`.
pub fn m_sc(z: ComplexPoint) -> Complex64 {
    m_sc_complex(z.z())
}

pub(crate) fn m_sc_complex(z: Complex64) -> Complex64 {
    let s = (z * z - 4.0).sqrt();
    // The larger root in modulus is computed without cancellation; the roots multiply to 1.
    let r1 = (-z + s) * 0.5;
    let r2 = (-z - s) * 0.5;
    let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
    let small = big.inv();
    if small.im > 0.0 || (small.im == 0.0 && big.im <= 0.0) {
        small
    } else {
        big
    }
}
