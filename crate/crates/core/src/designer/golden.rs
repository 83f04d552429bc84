//! Golden-section minimization on a bracket certified unimodal by a coarse scan.

pub const SCAN_POINTS: usize = 11;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Uniform coarse scan `(x, f(x))` over `[lo, hi]`.
pub fn coarse_scan<E>(f: &impl Fn(f64) -> Result<f64, E>, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>, E> {
    (0..SCAN_POINTS)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / (SCAN_POINTS - 1) as f64;
            f(x).map(|y| (x, y))
        })
        .collect()
}

/// Non-increasing then non-decreasing.
pub fn is_unimodal(scan: &[(f64, f64)]) -> bool {
    let mut rising = false;
    for w in scan.windows(2) {
        let step = w[1].1 - w[0].1;
        if step > 0.0 {
            rising = true;
        } else if step < 0.0 && rising {
            return false;
        }
    }
    true
}

/// Minimize `f` on `[lo, hi]` until the bracket is narrower than `xtol`; returns the bracket midpoint.
pub fn golden_section<E>(f: &impl Fn(f64) -> Result<f64, E>, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64, E> {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > xtol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}
