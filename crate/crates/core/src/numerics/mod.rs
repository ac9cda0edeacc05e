//! Numerical kernels shared by the physics modules.

pub mod convolution;
pub mod eigen;
pub mod fourier;
pub mod quadrature;

pub use convolution::{convolve_gaussian, discrete_response, gaussian_response};
pub use eigen::{eig_decompose, CMatrix4, CVector4, EigenSystem};
pub use fourier::{half_line_fourier, ExpTerm};
pub use quadrature::{
    composite_kronrod, integrate_interval, integrate_semi_infinite, integrate_semi_infinite_oscillatory, QuadratureSpec,
};

/// Composite trapezoid rule on an arbitrary ascending grid.
pub(crate) fn trapezoid<T>(x: &[f64], y: &[T]) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    x.windows(2).zip(y.windows(2)).fold(T::default(), |acc, (xs, ys)| {
        acc + (ys[0] + ys[1]) * (0.5 * (xs[1] - xs[0]))
    })
}

/// Composite Simpson rule on a uniform grid. An even sample count closes the
/// last interval with the trapezoid rule.
pub(crate) fn simpson_uniform<T>(step: f64, y: &[T]) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    let n = y.len();
    if n < 2 {
        return T::default();
    }
    let (body, tail) = if n % 2 == 1 {
        (n, None)
    } else {
        (n - 1, Some((y[n - 2], y[n - 1])))
    };
    let mut acc = T::default();
    if body >= 3 {
        acc = acc + y[0] + y[body - 1];
        for (i, v) in y.iter().enumerate().take(body - 1).skip(1) {
            acc = acc + *v * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc = acc * (step / 3.0);
    }
    if let Some((a, b)) = tail {
        acc = acc + (a + b) * (0.5 * step);
    }
    acc
}
