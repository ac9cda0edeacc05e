//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.
//!
//! Semi-infinite integrals are truncated at a multiple of the integrand's
//! decay scale. All integrands in this crate carry a Gaussian cutoff
//! `exp(-ν²/ν_c²)`, which is below 1e-27 at eight cutoff widths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Accuracy and truncation settings for [`integrate_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Upper integration limit in units of the integrand decay scale.
    pub truncation_multiplier: f64,
    /// Refinement budget: maximum number of live subintervals.
    pub max_subintervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-11,
            absolute_tolerance: 1e-15,
            truncation_multiplier: 8.0,
            max_subintervals: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if !(self.truncation_multiplier >= 8.0) {
            return Err(Error::Domain(format!(
                "truncation multiplier {} must be at least 8",
                self.truncation_multiplier
            )));
        }
        if self.max_subintervals == 0 {
            return Err(Error::Domain("refinement budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
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

fn kronrod_panel<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, error }
}

/// Adaptive integral of `f` over `[a, b]`, starting from `initial_panels`
/// equal subintervals. Oscillatory integrands should be seeded with roughly
/// one panel per half period.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, initial_panels: usize, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Domain(format!("invalid integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n0 = initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut heap: BinaryHeap<Panel> = (0..n0)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
            kronrod_panel(&f, lo, hi)
        })
        .collect();

    loop {
        let total: Complex64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let tolerance = spec.absolute_tolerance.max(spec.relative_tolerance * total.norm());
        if error <= tolerance {
            return Ok(total);
        }
        if !error.is_finite() || heap.len() >= spec.max_subintervals.max(n0 + 1) {
            return Err(Error::Quadrature {
                estimate: error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: error,
                intervals: heap.len() + 1,
            });
        }
        heap.push(kronrod_panel(&f, worst.a, mid));
        heap.push(kronrod_panel(&f, mid, worst.b));
    }
}

/// Nodes and weights of the 15-point Kronrod rule repeated on `panels`
/// equal subintervals of `[a, b]`. For integrals of one smooth factor
/// against many oscillating kernels, where adaptive refinement per kernel
/// would repeat the expensive evaluations.
pub fn composite_kronrod(a: f64, b: f64, panels: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(a.is_finite() && b.is_finite()) || b <= a || panels == 0 {
        return Err(Error::Domain(format!(
            "invalid composite rule on [{a}, {b}] with {panels} panels"
        )));
    }
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut nodes = Vec::with_capacity(15 * panels);
    let mut weights = Vec::with_capacity(15 * panels);
    for i in 0..panels {
        let center = a + width * (i as f64 + 0.5);
        for j in 0..7 {
            nodes.extend([center - half * XGK[j], center + half * XGK[j]]);
            weights.extend([half * WGK[j]; 2]);
        }
        nodes.push(center);
        weights.push(half * WGK[7]);
    }
    Ok((nodes, weights))
}

/// `∫₀^∞ f(ν) dν`, truncated at `truncation_multiplier · decay_scale`.
pub fn integrate_semi_infinite<F>(f: F, decay_scale: f64, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_semi_infinite_oscillatory(f, decay_scale, 0.0, spec)
}

/// As [`integrate_semi_infinite`], for integrands oscillating as `e^{±iων}`.
/// The oscillation frequency only seeds the initial subdivision.
pub fn integrate_semi_infinite_oscillatory<F>(
    f: F,
    decay_scale: f64,
    frequency: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(Error::Domain(format!("decay scale {decay_scale} must be positive")));
    }
    spec.validate()?;
    let upper = spec.truncation_multiplier * decay_scale;
    let half_periods = (frequency.abs() * upper / std::f64::consts::PI).ceil() as usize;
    integrate_interval(f, 0.0, upper, half_periods.clamp(4, spec.max_subintervals / 2), spec)
}
