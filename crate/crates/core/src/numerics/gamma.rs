use crate::error::{domain, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Shift below which the Stirling series is not used directly.
const STIRLING_MIN: f64 = 10.0;

/// Tail of the Stirling series, `lnΓ(x) - [(x-1/2)ln x - x + ln(2π)/2]`.
fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0))))))
}

/// `(shift, ln(x (x+1) ... (x+shift-1)))` bringing `x` up to `STIRLING_MIN`.
fn upshift(x: f64) -> (f64, f64) {
    let mut shift = 0.0;
    let mut prod = 1.0;
    let mut ln_prod = 0.0;
    while x + shift < STIRLING_MIN {
        prod *= x + shift;
        shift += 1.0;
        if !(1e-200..=1e200).contains(&prod) {
            ln_prod += prod.ln();
            prod = 1.0;
        }
    }
    (shift, ln_prod + prod.ln())
}

pub(crate) fn lgamma(x: f64) -> f64 {
    let (shift, ln_prod) = upshift(x);
    let y = x + shift;
    (y - 0.5) * y.ln() - y + HALF_LN_2PI + stirling_tail(y) - ln_prod
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires a finite positive argument, got {x}"));
    }
    Ok(lgamma(x))
}

/// `ln Γ(a) - ln Γ(b)` without cancellation when `a` and `b` are large and close.
pub fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let lo = a.min(b);
    let (shift, _) = upshift(lo);
    let (sa, pa) = if shift > 0.0 { shift_exact(a, shift) } else { (a, 0.0) };
    let (sb, pb) = if shift > 0.0 { shift_exact(b, shift) } else { (b, 0.0) };
    // (a-1/2)ln a - (b-1/2)ln b - (a-b), arranged around ln(a/b).
    let diff = sa - sb;
    let main = (sa - 0.5) * (diff / sb).ln_1p() + diff * sb.ln() - diff;
    main + stirling_tail(sa) - stirling_tail(sb) - pa + pb
}

fn shift_exact(x: f64, shift: f64) -> (f64, f64) {
    let mut ln_prod = 0.0;
    let mut i = 0.0;
    while i < shift {
        ln_prod += (x + i).ln();
        i += 1.0;
    }
    (x + shift, ln_prod)
}

/// `ln C(n, k)` for real `n >= k >= 0`.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k == 0.0 || k == n {
        return 0.0;
    }
    ln_gamma_ratio(n + 1.0, n - k + 1.0) - lgamma(k + 1.0)
}
