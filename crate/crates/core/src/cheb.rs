//! Chebyshev–Gauss–Lobatto collocation on `z ∈ [0, h]`.
//!
//! Nodes are `z_i = h (1 + ζ_i) / 2` with `ζ_i = cos(π i / N)`, so index 0 is
//! the upper wall `z = h` and index `N` the lower wall `z = 0`. A nodal vector
//! represents the unique polynomial of degree `N` through its values.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, LazyLock, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::quadrature::gauss_legendre;

/// Discrete Dirichlet eigenbasis of `−d²/dz²` on polynomials of degree `N`
/// vanishing at both walls.
///
/// Columns of `phi` are interior nodal vectors, orthonormal in `L²(0,h)` and
/// orthogonal in `H¹₀`; `mu` holds the eigenvalues `∫φ'² / ∫φ²`, ascending.
#[derive(Debug)]
pub struct DirichletBasis {
    pub mu: Vec<f64>,
    pub phi: DMatrix<f64>,
    /// `Φᵀ M`: maps interior nodal values to eigen-coefficients.
    pub project: DMatrix<f64>,
}

#[derive(Debug)]
pub struct ChebGrid {
    pub n: usize,
    pub h: f64,
    pub zeta: Vec<f64>,
    pub z: Vec<f64>,
    /// `d/dz` on nodal values.
    pub d: DMatrix<f64>,
    pub d2: DMatrix<f64>,
    /// Nodal values to Chebyshev coefficients.
    pub to_coef: DMatrix<f64>,
    /// Exact `L²(0,h)` Gram matrix of nodal interpolants.
    pub mass: DMatrix<f64>,
    /// `Dᵀ M D`, the Gram matrix of derivatives.
    pub stiff: DMatrix<f64>,
    /// Clenshaw–Curtis weights on `[0, h]`.
    pub cc_weights: Vec<f64>,
    dirichlet: OnceLock<DirichletBasis>,
}

type GridCache = Mutex<HashMap<(usize, u64), Arc<ChebGrid>>>;

static GRIDS: LazyLock<GridCache> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Shared grid for `nz` points on `[0, h]`.
pub fn grid(nz: usize, h: f64) -> Arc<ChebGrid> {
    let key = (nz, h.to_bits());
    if let Some(g) = GRIDS.lock().unwrap().get(&key) {
        return g.clone();
    }
    let g = Arc::new(ChebGrid::new(nz, h));
    GRIDS.lock().unwrap().entry(key).or_insert(g).clone()
}

impl ChebGrid {
    /// `nz ≥ 2` points on `[0, h]`.
    pub fn new(nz: usize, h: f64) -> Self {
        assert!(nz >= 2, "need at least two Chebyshev points");
        let n = nz - 1;
        let nf = n as f64;
        let zeta: Vec<f64> = (0..=n).map(|i| (PI * i as f64 / nf).cos()).collect();
        let z: Vec<f64> = zeta.iter().map(|t| 0.5 * h * (1.0 + t)).collect();

        let cbar = |i: usize| if i == 0 || i == n { 2.0 } else { 1.0 };
        let mut d = DMatrix::zeros(nz, nz);
        for i in 0..=n {
            let mut row = 0.0;
            for j in 0..=n {
                if i == j {
                    continue;
                }
                // ζ_i − ζ_j without cancellation.
                let diff = -2.0
                    * (PI * (i + j) as f64 / (2.0 * nf)).sin()
                    * (PI * (i as f64 - j as f64) / (2.0 * nf)).sin();
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let v = cbar(i) / cbar(j) * sign / diff;
                d[(i, j)] = v;
                row += v;
            }
            d[(i, i)] = -row;
        }
        d *= 2.0 / h;
        let d2 = &d * &d;

        let mut to_coef = DMatrix::zeros(nz, nz);
        for m in 0..=n {
            for j in 0..=n {
                to_coef[(m, j)] =
                    2.0 / (nf * cbar(m) * cbar(j)) * (PI * (m * j) as f64 / nf).cos();
            }
        }

        let q = DMatrix::from_fn(nz, nz, cheb_product_integral);
        let mass = to_coef.transpose() * q * &to_coef * (0.5 * h);
        let stiff = d.transpose() * &mass * &d;

        let cc_weights = (0..=n)
            .map(|j| {
                0.5 * h
                    * (0..=n)
                        .step_by(2)
                        .map(|m| 2.0 / (1.0 - (m * m) as f64) * to_coef[(m, j)])
                        .sum::<f64>()
            })
            .collect();

        Self {
            n,
            h,
            zeta,
            z,
            d,
            d2,
            to_coef,
            mass,
            stiff,
            cc_weights,
            dirichlet: OnceLock::new(),
        }
    }

    pub fn nz(&self) -> usize {
        self.n + 1
    }

    /// `ζ ∈ [−1, 1]` for `z ∈ [0, h]`.
    pub fn zeta_of(&self, z: f64) -> f64 {
        2.0 * z / self.h - 1.0
    }

    pub fn coefficients(&self, f: &[f64]) -> Vec<f64> {
        mat_vec(&self.to_coef, f)
    }

    /// Rows: evaluation of the nodal interpolant at `zetas`.
    pub fn eval_matrix(&self, zetas: &[f64]) -> DMatrix<f64> {
        let nz = self.nz();
        let mut t = DMatrix::zeros(zetas.len(), nz);
        for (p, &x) in zetas.iter().enumerate() {
            let (mut t0, mut t1) = (1.0, x);
            for m in 0..nz {
                t[(p, m)] = t0;
                let t2 = 2.0 * x * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
        }
        t * &self.to_coef
    }

    /// Interpolation from this grid onto `other` (same `h`).
    pub fn interp_to(&self, other: &ChebGrid) -> DMatrix<f64> {
        self.eval_matrix(&other.zeta)
    }

    /// Chebyshev truncation from the finer grid `fine` onto this one: keeps the
    /// first `N + 1` coefficients of the fine interpolant.
    pub fn truncate_from(&self, fine: &ChebGrid) -> DMatrix<f64> {
        let nz = self.nz();
        let mut b = DMatrix::zeros(nz, nz);
        for i in 0..nz {
            for m in 0..nz {
                b[(i, m)] = (PI * (i * m) as f64 / self.n as f64).cos();
            }
        }
        b * fine.to_coef.rows(0, nz)
    }

    /// Gauss–Legendre nodes (in `ζ`) and weights (in `z`) with the evaluation
    /// matrix of the nodal interpolant at those nodes.
    pub fn gauss_evaluation(&self, nq: usize) -> (Vec<f64>, Vec<f64>, DMatrix<f64>) {
        let (x, w) = gauss_legendre(nq);
        let e = self.eval_matrix(&x);
        (x, w.iter().map(|wi| 0.5 * self.h * wi).collect(), e)
    }

    pub fn dirichlet(&self) -> &DirichletBasis {
        self.dirichlet.get_or_init(|| self.build_dirichlet())
    }

    fn build_dirichlet(&self) -> DirichletBasis {
        let m = self.n - 1;
        if m == 0 {
            return DirichletBasis {
                mu: vec![],
                phi: DMatrix::zeros(0, 0),
                project: DMatrix::zeros(0, 0),
            };
        }
        let mass = self.mass.view((1, 1), (m, m)).into_owned();
        let stiff = self.stiff.view((1, 1), (m, m)).into_owned();
        let chol = mass.clone().cholesky().expect("mass matrix is positive definite");
        let l = chol.l();
        let linv = l.clone().try_inverse().expect("triangular factor is invertible");
        let mut a = &linv * stiff * linv.transpose();
        a = (&a + a.transpose()) * 0.5;
        let eig = a.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        // Ritz values bound the continuous ones from above; clamp round-off
        // so that μ₁ ≥ π²/h² holds exactly.
        let floor = (PI / self.h).powi(2);
        let mu = order.iter().map(|&i| eig.eigenvalues[i].max(floor)).collect();
        let psi = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
        let phi = linv.transpose() * psi;
        let project = phi.transpose() * mass;
        DirichletBasis { mu, phi, project }
    }
}

/// `∫_{-1}^{1} T_m T_k dζ`.
pub fn cheb_product_integral(m: usize, k: usize) -> f64 {
    if (m + k) % 2 == 1 {
        return 0.0;
    }
    let s = (m + k) as f64;
    let d = m.abs_diff(k) as f64;
    1.0 / (1.0 - s * s) + 1.0 / (1.0 - d * d)
}

/// Clenshaw evaluation of `Σ a_m T_m(ζ)`.
pub fn cheb_eval(a: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in a.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    a.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// Coefficients of `d/dζ` of a Chebyshev series (same length, last entry 0).
pub fn cheb_derivative(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut b = vec![0.0; n];
    if n < 2 {
        return b;
    }
    for k in (0..n - 1).rev() {
        let next = if k + 2 < n { b[k + 2] } else { 0.0 };
        b[k] = next + 2.0 * (k + 1) as f64 * a[k + 1];
    }
    b[0] *= 0.5;
    b
}

/// Values of a Chebyshev series at `ζ = −1` and `ζ = 1`.
pub fn cheb_endpoints(a: &[f64]) -> (f64, f64) {
    let top: f64 = a.iter().sum();
    let bottom: f64 = a
        .iter()
        .enumerate()
        .map(|(m, c)| if m % 2 == 0 { *c } else { -*c })
        .sum();
    (bottom, top)
}

pub fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.nrows()];
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        for (o, &mij) in out.iter_mut().zip(m.column(j).iter()) {
            *o += mij * xj;
        }
    }
    out
}

/// Real matrix times complex vector.
pub fn mat_vec_c(m: &DMatrix<f64>, x: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m.nrows()];
    mat_vec_c_into(m, x, &mut out);
    out
}

pub fn mat_vec_c_into(m: &DMatrix<f64>, x: &[Complex64], out: &mut [Complex64]) {
    out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
    for (j, &xj) in x.iter().enumerate() {
        for (o, &mij) in out.iter_mut().zip(m.column(j).iter()) {
            *o += xj * mij;
        }
    }
}

/// `xᴴ M y` for a real symmetric `M`.
pub fn inner_c(m: &DMatrix<f64>, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let my = mat_vec_c(m, y);
    x.iter().zip(&my).map(|(a, b)| a.conj() * b).sum()
}
