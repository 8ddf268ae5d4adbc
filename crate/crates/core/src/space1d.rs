//! Linear finite elements on a uniform grid over `(0, L)` with
//! homogeneous Dirichlet boundary conditions.
//!
//! With `M` elements of width `h = L/M`, the unknowns are the `M - 1`
//! interior nodal values. Mass and stiffness matrices are symmetric
//! tridiagonal:
//!
//! ```text
//!   M = h/6 * tridiag(1, 4, 1),     K = 1/h * tridiag(-1, 2, -1),
//! ```
//!
//! and all linear solves go through an LDL^T factorization that fails
//! loudly if a pivot is not positive. Initial data and right-hand sides
//! enter via [`DataDescriptor`]s that carry their own kink locations, so
//! element quadrature never integrates across a corner.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SforError};

/// Symmetric tridiagonal matrix stored as a main diagonal and one
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(SforError::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        Ok(SymTridiag { diag, off })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Matrix-vector product `A v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(v.len(), n, "dimension mismatch in apply");
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * v[i];
            if i > 0 {
                s += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * v[i + 1];
            }
            out[i] = s;
        }
        out
    }

    /// Quadratic form `v^T A v` (the square of an energy norm when `A` is
    /// positive definite).
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let n = self.n();
        assert_eq!(v.len(), n, "dimension mismatch in quadratic_form");
        let mut s = 0.0;
        for i in 0..n {
            s += self.diag[i] * v[i] * v[i];
            if i + 1 < n {
                s += 2.0 * self.off[i] * v[i] * v[i + 1];
            }
        }
        s
    }

    /// Solves `A x = b` by LDL^T factorization. Fails with
    /// [`SforError::NotSpd`] when a pivot is not strictly positive.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if rhs.len() != n {
            return Err(SforError::InvalidArgument(format!(
                "rhs length {} does not match matrix size {n}",
                rhs.len()
            )));
        }
        // d[i]: pivots; e[i]: subdiagonal multipliers L_{i+1,i}.
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n.saturating_sub(1)];
        d[0] = self.diag[0];
        if d[0] <= 0.0 || d[0].is_nan() {
            return Err(SforError::NotSpd(format!("pivot 0 is {:.3e}", d[0])));
        }
        for i in 1..n {
            e[i - 1] = self.off[i - 1] / d[i - 1];
            d[i] = self.diag[i] - e[i - 1] * self.off[i - 1];
            if d[i] <= 0.0 || d[i].is_nan() {
                return Err(SforError::NotSpd(format!("pivot {i} is {:.3e}", d[i])));
            }
        }
        let mut x = rhs.to_vec();
        for i in 1..n {
            x[i] -= e[i - 1] * x[i - 1];
        }
        for i in 0..n {
            x[i] /= d[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= e[i] * x[i + 1];
        }
        Ok(x)
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

/// Solves `A x = b` and verifies the residual satisfies
/// `||A x - b|| <= 1e-10 (||b|| + 1)`, returning a numerical error
/// otherwise.
pub fn solve_spd_tridiagonal(matrix: &SymTridiag, rhs: &[f64]) -> Result<Vec<f64>> {
    let x = matrix.solve(rhs)?;
    let ax = matrix.apply(&x);
    let res: Vec<f64> = ax.iter().zip(rhs).map(|(a, b)| a - b).collect();
    let bound = 1e-10 * (norm2(rhs) + 1.0);
    let achieved = norm2(&res);
    if achieved > bound {
        return Err(SforError::Numerical(format!(
            "tridiagonal solve residual {achieved:.3e} exceeds contract {bound:.3e}"
        )));
    }
    Ok(x)
}

/// Spatial data (initial values, forcing profiles) with known kink
/// locations so quadrature can split elements at corners.
#[derive(Clone)]
pub enum DataDescriptor {
    /// `min(x, L - x)`: a hat centred at `L/2`.
    Hat,
    /// Indicator of `(0, L/2]`.
    IndicatorLeftHalf,
    /// `sin(pi x / L)`: the first Dirichlet eigenfunction.
    Sine,
    /// Arbitrary profile with explicit breakpoints (absolute coordinates).
    Closure {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        breakpoints: Vec<f64>,
    },
}

impl fmt::Debug for DataDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataDescriptor::Hat => write!(f, "Hat"),
            DataDescriptor::IndicatorLeftHalf => write!(f, "IndicatorLeftHalf"),
            DataDescriptor::Sine => write!(f, "Sine"),
            DataDescriptor::Closure { breakpoints, .. } => {
                write!(f, "Closure {{ breakpoints: {breakpoints:?} }}")
            }
        }
    }
}

impl DataDescriptor {
    /// Point value on `(0, length)`.
    pub fn eval(&self, x: f64, length: f64) -> f64 {
        match self {
            DataDescriptor::Hat => x.min(length - x),
            DataDescriptor::IndicatorLeftHalf => {
                if x > 0.0 && x <= 0.5 * length {
                    1.0
                } else {
                    0.0
                }
            }
            DataDescriptor::Sine => (std::f64::consts::PI * x / length).sin(),
            DataDescriptor::Closure { f, .. } => f(x),
        }
    }

    /// Kink locations in `(0, length)`.
    pub fn breakpoints(&self, length: f64) -> Vec<f64> {
        match self {
            DataDescriptor::Hat | DataDescriptor::IndicatorLeftHalf => vec![0.5 * length],
            DataDescriptor::Sine => vec![],
            DataDescriptor::Closure { breakpoints, .. } => breakpoints.clone(),
        }
    }
}

/// Uniform P1 discretization of `(0, length)` with Dirichlet conditions.
#[derive(Debug, Clone)]
pub struct SpatialDisc {
    pub length: f64,
    pub m_elems: usize,
    pub h: f64,
    /// Interior nodes `x_j = j h`, `j = 1..m_elems-1`.
    pub nodes: Vec<f64>,
    pub mass: SymTridiag,
    pub stiffness: SymTridiag,
}

/// Builds the interior-node mass and stiffness matrices for `m_elems >= 2`
/// uniform elements.
pub fn build_fem(length: f64, m_elems: usize) -> Result<SpatialDisc> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(SforError::InvalidArgument(format!(
            "domain length must be positive and finite, got {length}"
        )));
    }
    if m_elems < 2 {
        return Err(SforError::InvalidArgument(format!(
            "need at least 2 elements for an interior node, got {m_elems}"
        )));
    }
    let h = length / m_elems as f64;
    let n = m_elems - 1;
    let nodes: Vec<f64> = (1..=n).map(|j| j as f64 * h).collect();
    let mass = SymTridiag::new(vec![2.0 * h / 3.0; n], vec![h / 6.0; n - 1])?;
    let stiffness = SymTridiag::new(vec![2.0 / h; n], vec![-1.0 / h; n - 1])?;
    Ok(SpatialDisc {
        length,
        m_elems,
        h,
        nodes,
        mass,
        stiffness,
    })
}

// Four-point Gauss-Legendre rule on [-1, 1]: exact through degree 7,
// which is more than enough for (smooth data) x (linear hat) products.
const GAUSS_X: [f64; 4] = [
    -0.8611363115940526,
    -0.3399810435848563,
    0.3399810435848563,
    0.8611363115940526,
];
const GAUSS_W: [f64; 4] = [
    0.3478548451374538,
    0.6521451548625461,
    0.6521451548625461,
    0.3478548451374538,
];

/// `int_a^b g(x) dx` by 4-point Gauss on each piece of `[a, b]` cut at the
/// supplied breakpoints.
fn gauss_on_pieces(g: &dyn Fn(f64) -> f64, a: f64, b: f64, cuts: &[f64]) -> f64 {
    let mut edges = vec![a];
    for &c in cuts {
        if c > a && c < b {
            edges.push(c);
        }
    }
    edges.push(b);
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (xi, wi) in GAUSS_X.iter().zip(GAUSS_W) {
            total += wi * half * g(mid + half * xi);
        }
    }
    total
}

/// L2 projection of `data` onto the interior P1 space: solves
/// `M c = (data, phi_j)` with element loads integrated piecewise between
/// the descriptor's breakpoints.
pub fn l2_project(disc: &SpatialDisc, data: &DataDescriptor) -> Result<Vec<f64>> {
    let n = disc.m_elems - 1;
    let cuts = data.breakpoints(disc.length);
    for &c in &cuts {
        if !(c.is_finite() && c > 0.0 && c < disc.length) {
            return Err(SforError::InvalidArgument(format!(
                "breakpoint {c} outside (0, {})",
                disc.length
            )));
        }
    }
    let mut load = vec![0.0; n];
    for e in 1..=disc.m_elems {
        let a = (e - 1) as f64 * disc.h;
        let b = e as f64 * disc.h;
        // Left node index e-1, right node index e (global; 0 and m are
        // boundary nodes and are skipped).
        if e >= 2 {
            let j = e - 1;
            let phi = |x: f64| (b - x) / disc.h;
            load[j - 1] += gauss_on_pieces(&|x| data.eval(x, disc.length) * phi(x), a, b, &cuts);
        }
        if e < disc.m_elems {
            let j = e;
            let phi = |x: f64| (x - a) / disc.h;
            load[j - 1] += gauss_on_pieces(&|x| data.eval(x, disc.length) * phi(x), a, b, &cuts);
        }
    }
    solve_spd_tridiagonal(&disc.mass, &load)
}

/// `||v_h||_{L2}` of the P1 function with interior coefficients `v`.
pub fn l2_norm(disc: &SpatialDisc, v: &[f64]) -> f64 {
    disc.mass.quadratic_form(v).max(0.0).sqrt()
}

/// `|v_h|_{H1}` (seminorm): the L2 norm of the derivative.
pub fn h1_seminorm(disc: &SpatialDisc, v: &[f64]) -> f64 {
    disc.stiffness.quadratic_form(v).max(0.0).sqrt()
}

/// Full H1 norm `sqrt(||v||^2 + |v|^2)`.
pub fn h1_norm(disc: &SpatialDisc, v: &[f64]) -> f64 {
    (disc.mass.quadratic_form(v) + disc.stiffness.quadratic_form(v))
        .max(0.0)
        .sqrt()
}
