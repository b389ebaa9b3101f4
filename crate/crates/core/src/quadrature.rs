//! Numerical integration used by the Born engine and the phase-shift
//! integrals.
//!
//! Radial integrals have the form `∫₀^∞ f(r) dr` with `f` oscillating at a
//! known wave number and damped either exponentially or by compact support.
//! The half-line is cut into cells one half-period `π/k` long. Cells are
//! generated outward until three consecutive cells past one decay length each
//! contribute less than `abs_tol/100`; the discarded tail is bounded by a
//! geometric-series estimate. All cells then go into a single global
//! adaptive Gauss–Kronrod (7, 15) pass that bisects the segment with the
//! largest error until the total estimate meets the tolerance.
//!
//! Each integral is evaluated sequentially and summed in a fixed order, so
//! results are bit-identical across runs and threads.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{require_positive, Result, ScatterError};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-14;

/// Upper bound on the number of segments (cells plus bisections).
pub const MAX_CELLS: usize = 100_000;

const TAIL_RUN: usize = 3;

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Number of segments in the final partition.
    pub subdivisions: usize,
}

impl QuadratureResult {
    pub fn converged(&self, rel_tol: f64, abs_tol: f64) -> bool {
        self.abs_error_estimate <= abs_tol.max(rel_tol * self.value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

fn check_tolerances(rel_tol: f64, abs_tol: f64) -> Result<()> {
    require_positive("rel_tol", rel_tol)?;
    require_positive("abs_tol", abs_tol)?;
    Ok(())
}

fn half_period(k: f64, fallback: f64) -> Result<f64> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(ScatterError::InvalidParameter {
            name: "k",
            value: k,
            reason: "oscillation wave number must be non-negative and finite",
        });
    }
    Ok(if k > 0.0 { PI / k } else { fallback })
}

/// Global adaptive refinement over an initial partition.
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    cells: Vec<Segment>,
    tail_error: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    let mut value: f64 = cells.iter().map(|s| s.value).sum();
    let mut error: f64 = cells.iter().map(|s| s.error).sum::<f64>() + tail_error;
    let mut heap: BinaryHeap<Segment> = cells.into_iter().collect();
    let mut stalled = false;

    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= MAX_CELLS {
            stalled = true;
            break;
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            stalled = true;
            break;
        }
        let left = kronrod(f, worst.a, mid);
        let right = kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum::<f64>() + tail_error;
    let result = QuadratureResult {
        value,
        abs_error_estimate: error,
        subdivisions: segments.len(),
    };
    if stalled && !result.converged(rel_tol, abs_tol) {
        return Err(ScatterError::QuadratureNotConverged {
            value: result.value,
            error_estimate: result.abs_error_estimate,
            subdivisions: result.subdivisions,
        });
    }
    Ok(result)
}

/// `∫₀^∞ f(r) dr` for an integrand oscillating at wave number `k` and damped
/// on the length scale `decay_scale`.
///
/// `k = 0` means no oscillation; cells are then one decay length long.
pub fn integrate_radial_oscillatory<F: Fn(f64) -> f64>(
    f: F,
    k: f64,
    decay_scale: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    integrate_radial_oscillatory_from(f, k, decay_scale, 0.0, rel_tol, abs_tol)
}

/// As [`integrate_radial_oscillatory`] for integrands that stay negligible up
/// to `onset` before switching on (centrifugally suppressed partial waves).
/// Truncation is only considered past both `onset` and `decay_scale`.
pub fn integrate_radial_oscillatory_from<F: Fn(f64) -> f64>(
    f: F,
    k: f64,
    decay_scale: f64,
    onset: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    let decay_scale = require_positive("decay_scale", decay_scale)?;
    let onset = onset.max(0.0);
    check_tolerances(rel_tol, abs_tol)?;
    let h = half_period(k, decay_scale)?;
    let threshold = 1e-2 * abs_tol;

    let mut cells = Vec::new();
    let mut small_run = 0;
    let mut index = 0usize;
    loop {
        let a = index as f64 * h;
        let b = (index + 1) as f64 * h;
        let cell = kronrod(&f, a, b);
        if !cell.value.is_finite() {
            return Err(ScatterError::QuadratureNotConverged {
                value: cell.value,
                error_estimate: f64::INFINITY,
                subdivisions: cells.len(),
            });
        }
        let small = cell.value.abs() < threshold;
        cells.push(cell);
        index += 1;
        if b >= decay_scale && b >= onset && small {
            small_run += 1;
            if small_run >= TAIL_RUN {
                break;
            }
        } else {
            small_run = 0;
        }
        if cells.len() >= MAX_CELLS {
            let value = cells.iter().map(|s| s.value).sum();
            return Err(ScatterError::QuadratureNotConverged {
                value,
                error_estimate: f64::INFINITY,
                subdivisions: cells.len(),
            });
        }
    }

    // geometric tail: a cell ratio of e^{-h/d} sums to about (1 + d/h) cells
    let last: f64 = cells[cells.len() - TAIL_RUN..]
        .iter()
        .map(|s| s.value.abs())
        .fold(0.0, f64::max);
    let tail_error = last * (1.0 + decay_scale / h);

    refine(&f, cells, tail_error, rel_tol, abs_tol)
}

/// `∫₀^upper f(r) dr` with half-period cells of wave number `k`; used for
/// integrands with compact support.
pub fn integrate_compact_oscillatory<F: Fn(f64) -> f64>(
    f: F,
    k: f64,
    upper: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    let upper = require_positive("upper", upper)?;
    check_tolerances(rel_tol, abs_tol)?;
    let h = half_period(k, upper)?.min(upper);
    let n = (upper / h).ceil() as usize;
    if n >= MAX_CELLS {
        return Err(ScatterError::QuadratureNotConverged {
            value: f64::NAN,
            error_estimate: f64::INFINITY,
            subdivisions: n,
        });
    }
    let cells = (0..n)
        .map(|i| {
            let a = i as f64 * h;
            let b = ((i + 1) as f64 * h).min(upper);
            kronrod(&f, a, b)
        })
        .collect();
    refine(&f, cells, 0.0, rel_tol, abs_tol)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                dp = legendre_with_derivative(n, x).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for l in 1..n {
        let lf = l as f64;
        let p2 = ((2.0 * lf + 1.0) * x * p1 - lf * p0) / (lf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `2π ∫₀^π g(θ) sin θ dθ` with an `n_nodes`-point Gauss–Legendre rule in
/// `cos θ`; exact when `g` is a polynomial in `cos θ` of degree below
/// `2 n_nodes`.
pub fn integrate_angular<G: Fn(f64) -> f64>(g: G, n_nodes: usize) -> Result<f64> {
    if n_nodes < 2 {
        return Err(ScatterError::InvalidParameter {
            name: "n_nodes",
            value: n_nodes as f64,
            reason: "need at least two Gauss-Legendre nodes",
        });
    }
    let (nodes, weights) = gauss_legendre(n_nodes);
    let sum: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| w * g(x.clamp(-1.0, 1.0).acos()))
        .sum();
    Ok(2.0 * PI * sum)
}
