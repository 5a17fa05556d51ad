//! Dense complex matrices and the phase-invariant operator-norm distance.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entry of |U†U − I|.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let prod = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - c(target, 0.0)).norm());
        }
    }
    worst
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `min_θ ‖a − e^{iθ} b‖` in operator norm.
///
/// The minimisation starts from the Frobenius-optimal phase, scans a grid
/// and refines the best cell by golden-section search.
pub fn matrix_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "matrix_distance: shape mismatch");
    let dist = |theta: f64| operator_norm(&(a - b * Complex64::from_polar(1.0, theta)));

    // tr(b† a)
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let mut best_theta = if overlap.norm() > 1e-14 {
        overlap.arg()
    } else {
        0.0
    };
    let mut best = dist(best_theta);

    const GRID: usize = 64;
    let step = std::f64::consts::TAU / GRID as f64;
    for k in 0..GRID {
        let theta = k as f64 * step;
        let d = dist(theta);
        if d < best {
            best = d;
            best_theta = theta;
        }
    }

    let (mut lo, mut hi) = (best_theta - step, best_theta + step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (dist(x1), dist(x2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = dist(x2);
        }
    }
    best.min(f1).min(f2)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `|0⟩⟨0| ⊗ top + |1⟩⟨1| ⊗ bottom`, the first tensor factor being the
/// most significant index bit.
pub fn block_diag(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    let n = top.nrows();
    assert_eq!(bottom.nrows(), n);
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(top);
    out.view_mut((n, n), (n, n)).copy_from(bottom);
    out
}
