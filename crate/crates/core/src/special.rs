//! Legendre polynomials and spherical Bessel functions.

use crate::error::{Result, ScatterError};

/// `P_l(x)` by the three-term recurrence.
pub fn legendre_polynomial(l: usize, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    Ok(legendre_table(l, x)[l])
}

/// `P_0(x) … P_lmax(x)`.
pub fn legendre_all(lmax: usize, x: f64) -> Result<Vec<f64>> {
    check_unit_interval(x)?;
    Ok(legendre_table(lmax, x))
}

fn check_unit_interval(x: f64) -> Result<()> {
    if x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(ScatterError::InvalidParameter {
            name: "x",
            value: x,
            reason: "Legendre argument must lie in [-1, 1]",
        })
    }
}

pub(crate) fn legendre_table(lmax: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(lmax + 1);
    p.push(1.0);
    if lmax >= 1 {
        p.push(x);
    }
    for l in 1..lmax {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * x * p[l] - lf * p[l - 1]) / (lf + 1.0);
        p.push(next);
    }
    p
}

fn double_factorial_odd(l: usize) -> f64 {
    // (2l+1)!!
    (0..=l).map(|n| (2 * n + 1) as f64).product()
}

/// Spherical Bessel function of the first kind `j_l(x)` for `x ≥ 0`.
///
/// Upward recurrence when `x > l`, Miller's downward recurrence otherwise,
/// normalized with `Σ (2n+1) j_n(x)² = 1`.
pub fn spherical_jn(l: usize, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if x < 1e-4 {
        let lf = l as f64;
        let lead = x.powi(l as i32) / double_factorial_odd(l);
        return lead * (1.0 - x * x / (2.0 * (2.0 * lf + 3.0)));
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    if x > l as f64 {
        let mut prev = j0;
        let mut cur = (j0 - c) / x;
        for n in 1..l {
            let next = (2 * n + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    miller(l, x, j0, c)
}

fn miller(l: usize, x: f64, j0: f64, cos_x: f64) -> f64 {
    let start = l + 50 + x.ceil() as usize;
    let mut next = 0.0;
    let mut cur = 1.0;
    let mut norm = 0.0;
    let mut at_l = 0.0;
    let mut f1 = 0.0;
    for n in (0..=start).rev() {
        norm += (2 * n + 1) as f64 * cur * cur;
        if n == l {
            at_l = cur;
        }
        if n == 1 {
            f1 = cur;
        }
        if n == 0 {
            break;
        }
        let prev = (2 * n + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e100 {
            cur *= 1e-100;
            next *= 1e-100;
            at_l *= 1e-100;
            f1 *= 1e-100;
            norm *= 1e-200;
        }
    }
    let f0 = cur;
    let scale = 1.0 / norm.sqrt();
    // fix the overall sign with whichever of j0, j1 is better determined
    let sign = if x < 1.0 || j0.abs() >= 0.1 {
        (j0 * f0).signum()
    } else {
        let j1 = (j0 - cos_x) / x;
        (j1 * f1).signum()
    };
    sign * at_l * scale
}

/// Spherical Bessel function of the second kind `y_l(x)` for `x > 0`, by
/// upward recurrence.
pub fn spherical_yn(l: usize, x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let (s, c) = x.sin_cos();
    let y0 = -c / x;
    if l == 0 {
        return y0;
    }
    let mut prev = y0;
    let mut cur = -c / (x * x) - s / x;
    for n in 1..l {
        let next = (2 * n + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Riccati–Bessel `x j_l(x)`, the regular free radial solution; tends to
/// `sin(x − lπ/2)` for large `x`.
pub fn riccati_j(l: usize, x: f64) -> f64 {
    x * spherical_jn(l, x)
}

/// Riccati–Neumann `x y_l(x)`; tends to `−cos(x − lπ/2)` for large `x`.
pub fn riccati_y(l: usize, x: f64) -> f64 {
    x * spherical_yn(l, x)
}

/// `x j_l(x) · x y_l(x)`, finite at the origin where it behaves as
/// `−x/(2l+1)`.
pub fn riccati_jy(l: usize, x: f64) -> f64 {
    if x < 1e-8 {
        return -x / (2 * l + 1) as f64;
    }
    riccati_j(l, x) * riccati_y(l, x)
}
