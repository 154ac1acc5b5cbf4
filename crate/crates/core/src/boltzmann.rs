//! Fourier-Galerkin collision operator for the spatially homogeneous
//! Boltzmann equation with 2D Maxwell molecules, plus the BKW solution.
//!
//! The velocity box `[-L, L]^2` is periodized and `f` is expanded on the
//! modes `exp(i xi k.v)`, `xi = pi / L`, `k in [-N/2, N/2)^2`. Writing the
//! collision integral in Carleman form with both relative displacements cut
//! off at `R = 2L / (3 + sqrt 2)` gives
//!
//! ```text
//! Q_k = sum_{l + m = k} beta(l, m) f_l f_m,    beta(l, m) = B(l, m) - B(l, l),
//! B(l, m) = (1/pi) int_0^pi 2R sinc(xi R l.e) 2R sinc(xi R m.e_perp) d theta,
//! ```
//!
//! where the angle integral uses `M` midpoint points. Since
//! `B(l, -l) = B(l, l)` the zero mode of `Q` vanishes identically.
//! Transforms are direct separable sums on the cell centers, so no FFT is
//! needed at the mode counts used here.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::mesh::{Field, Grid2D, Shape};
use crate::residual::{ReferenceTrajectory, ResidualEquilibrium, SemiDiscreteOperator};

/// Weight of the Carleman kernel for the cross section `1 / (2 pi)`.
pub const KERNEL_CONSTANT: f64 = 1.0 / core::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub n_modes: usize,
    pub half_width: f64,
    pub m_angles: usize,
}

impl SpectralConfig {
    pub fn new(n_modes: usize, half_width: f64, m_angles: usize) -> Result<Self> {
        if n_modes < 2 || !n_modes.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "n_modes",
                reason: "must be even and at least two",
            });
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter {
                name: "half_width",
                reason: "must be positive",
            });
        }
        if m_angles == 0 {
            return Err(Error::InvalidParameter {
                name: "m_angles",
                reason: "must be positive",
            });
        }
        Ok(Self {
            n_modes,
            half_width,
            m_angles,
        })
    }

    pub fn grid(&self) -> Grid2D {
        Grid2D::square(self.n_modes, -self.half_width, self.half_width)
            .expect("validated configuration")
    }

    /// Truncation radius `2L / (3 + sqrt 2)`.
    pub fn radius(&self) -> f64 {
        2.0 * self.half_width / (3.0 + math::sqrt(2.0))
    }

    pub fn xi(&self) -> f64 {
        math::PI / self.half_width
    }

    fn mode(&self, index: usize) -> f64 {
        index as f64 - (self.n_modes / 2) as f64
    }
}

/// `B(l, m)` and `beta(l, m)` for every pair of modes, indexed by
/// `l_index * N^2 + m_index` with `index = (k_y + N/2) N + (k_x + N/2)`.
#[derive(Debug, Clone)]
pub struct KernelTable {
    n: usize,
    b_hat: Vec<f64>,
    beta: Vec<f64>,
}

impl KernelTable {
    fn index(&self, l: (isize, isize), m: (isize, isize)) -> usize {
        let n2 = self.n * self.n;
        let h = (self.n / 2) as isize;
        let li = ((l.1 + h) as usize) * self.n + (l.0 + h) as usize;
        let mi = ((m.1 + h) as usize) * self.n + (m.0 + h) as usize;
        li * n2 + mi
    }

    /// `B(l, m)` for modes given as signed `(k_x, k_y)` pairs.
    pub fn b_hat(&self, l: (isize, isize), m: (isize, isize)) -> f64 {
        self.b_hat[self.index(l, m)]
    }

    pub fn beta(&self, l: (isize, isize), m: (isize, isize)) -> f64 {
        self.beta[self.index(l, m)]
    }
}

pub fn build_kernel_modes(config: &SpectralConfig) -> KernelTable {
    let n = config.n_modes;
    let n2 = n * n;
    let m_ang = config.m_angles;
    let r = config.radius();
    let xr = config.xi() * r;
    // a[p][l] = 2R sinc(xi R l.e_p), b[p][m] = 2R sinc(xi R m.e_p^perp)
    let mut a = vec![0.0; m_ang * n2];
    let mut b = vec![0.0; m_ang * n2];
    for p in 0..m_ang {
        let theta = (p as f64 + 0.5) * math::PI / m_ang as f64;
        let (c, s) = (math::cos(theta), math::sin(theta));
        for iy in 0..n {
            for ix in 0..n {
                let (kx, ky) = (config.mode(ix), config.mode(iy));
                let idx = p * n2 + iy * n + ix;
                a[idx] = 2.0 * r * math::sinc(xr * (kx * c + ky * s));
                b[idx] = 2.0 * r * math::sinc(xr * (-kx * s + ky * c));
            }
        }
    }
    let w = KERNEL_CONSTANT * math::PI / m_ang as f64;
    let mut b_hat = vec![0.0; n2 * n2];
    for l in 0..n2 {
        for m in 0..n2 {
            let mut sum = 0.0;
            for p in 0..m_ang {
                sum += a[p * n2 + l] * b[p * n2 + m];
            }
            b_hat[l * n2 + m] = w * sum;
        }
    }
    let mut beta = vec![0.0; n2 * n2];
    for l in 0..n2 {
        let loss = b_hat[l * n2 + l];
        for m in 0..n2 {
            beta[l * n2 + m] = b_hat[l * n2 + m] - loss;
        }
    }
    KernelTable { n, b_hat, beta }
}

/// The spectral collision operator `f -> Q_h(f, f)`.
pub struct SpectralCollision {
    config: SpectralConfig,
    table: KernelTable,
    /// `exp(-i xi k v_j)` indexed by `k_index * N + j`.
    phase: Vec<Complex64>,
}

impl SpectralCollision {
    pub fn new(config: SpectralConfig) -> Self {
        let table = build_kernel_modes(&config);
        let n = config.n_modes;
        let axis = config.grid().x;
        let xi = config.xi();
        let mut phase = Vec::with_capacity(n * n);
        for a in 0..n {
            let k = config.mode(a);
            for j in 0..n {
                let arg = -xi * k * axis.center(j);
                phase.push(Complex64::new(math::cos(arg), math::sin(arg)));
            }
        }
        Self {
            config,
            table,
            phase,
        }
    }

    pub fn config(&self) -> &SpectralConfig {
        &self.config
    }

    pub fn table(&self) -> &KernelTable {
        &self.table
    }

    /// Mode coefficients `f_k = N^-2 sum_j f(v_j) exp(-i xi k.v_j)`, laid out like the field.
    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let n = self.config.n_modes;
        let mut rows = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for a in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    s += self.phase[a * n + i] * f[j * n + i];
                }
                rows[j * n + a] = s;
            }
        }
        let scale = 1.0 / (n * n) as f64;
        let mut hat = vec![Complex64::new(0.0, 0.0); n * n];
        for b in 0..n {
            for a in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    s += self.phase[b * n + j] * rows[j * n + a];
                }
                hat[b * n + a] = s * scale;
            }
        }
        hat
    }

    /// Real part of `sum_k c_k exp(i xi k.v_j)` at the cell centers.
    pub fn inverse(&self, hat: &[Complex64]) -> Vec<f64> {
        let n = self.config.n_modes;
        let mut rows = vec![Complex64::new(0.0, 0.0); n * n];
        for b in 0..n {
            for i in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for a in 0..n {
                    s += hat[b * n + a] * self.phase[a * n + i].conj();
                }
                rows[b * n + i] = s;
            }
        }
        let mut out = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                let mut s = 0.0;
                for b in 0..n {
                    s += (rows[b * n + i] * self.phase[b * n + j].conj()).re;
                }
                out[j * n + i] = s;
            }
        }
        out
    }

    /// `Q_k = sum_{l + m = k} beta(l, m) f_l g_m` over modes inside the box.
    pub fn collision_modes(&self, f_hat: &[Complex64], g_hat: &[Complex64]) -> Vec<Complex64> {
        let n = self.config.n_modes;
        let n2 = n * n;
        let h = n / 2;
        let mut q = vec![Complex64::new(0.0, 0.0); n2];
        for ly in 0..n {
            let my_lo = h.saturating_sub(ly);
            let my_hi = (n + h - ly).min(n);
            for lx in 0..n {
                let mx_lo = h.saturating_sub(lx);
                let mx_hi = (n + h - lx).min(n);
                let li = ly * n + lx;
                let fl = f_hat[li];
                let beta = &self.table.beta[li * n2..(li + 1) * n2];
                for my in my_lo..my_hi {
                    let ky = ly + my - h;
                    for mx in mx_lo..mx_hi {
                        let mi = my * n + mx;
                        let kx = lx + mx - h;
                        q[ky * n + kx] += fl * g_hat[mi] * beta[mi];
                    }
                }
            }
        }
        q
    }

    /// Bilinear form `Q_h(f, g)` in physical space.
    pub fn bilinear(&self, f: &Field, g: &Field) -> Result<Field> {
        f.check_shape(self.shape())?;
        g.check_shape(self.shape())?;
        let fh = self.forward(f.as_slice());
        let gh = self.forward(g.as_slice());
        let q = self.collision_modes(&fh, &gh);
        Ok(Field::from_vec_unchecked(self.shape(), self.inverse(&q)))
    }

    /// Mean of `Q_h(f)` over the box, i.e. its zero mode.
    pub fn zero_mode(&self, f: &Field) -> Result<Complex64> {
        f.check_shape(self.shape())?;
        let fh = self.forward(f.as_slice());
        let q = self.collision_modes(&fh, &fh);
        let h = self.config.n_modes / 2;
        Ok(q[h * self.config.n_modes + h])
    }
}

impl SemiDiscreteOperator for SpectralCollision {
    fn name(&self) -> &str {
        "boltzmann-fs"
    }

    /// Spectral accuracy has no finite order; zero marks that.
    fn order(&self) -> u32 {
        0
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn shape(&self) -> Shape {
        self.config.grid().shape()
    }

    fn eval(&self, u: &Field, _t: f64) -> Result<Field> {
        self.bilinear(u, u)
    }
}

pub fn collision_spectral(op: &SpectralCollision, f: &Field) -> Result<Field> {
    op.bilinear(f, f)
}

/// Residual equilibrium wrapper `Q_h(f) - Q_h(f_eq)`.
pub fn re_collision(
    op: SpectralCollision,
    f_eq: Field,
) -> Result<ResidualEquilibrium<SpectralCollision>> {
    ResidualEquilibrium::new(op, f_eq)
}

/// 2D Maxwellian `rho / (2 pi T) exp(-|v - u|^2 / 2T)`.
pub fn maxwellian_2d(grid: &Grid2D, rho: f64, u: [f64; 2], temperature: f64) -> Result<Field> {
    if !(rho > 0.0 && temperature > 0.0) {
        return Err(Error::InvalidParameter {
            name: "maxwellian",
            reason: "density and temperature must be positive",
        });
    }
    let norm = rho / (2.0 * math::PI * temperature);
    grid.project(|x, y| {
        let (a, b) = (x - u[0], y - u[1]);
        norm * math::exp(-(a * a + b * b) / (2.0 * temperature))
    })
}

/// `S(t) = 1 - exp(-t/8) / 2`.
pub fn bkw_s(t: f64) -> f64 {
    1.0 - 0.5 * math::exp(-t / 8.0)
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::TrajectoryUndefined { t })
    }
}

/// BKW solution `exp(-v^2/2S) / (2 pi S^2) [2S - 1 + (1 - S)/(2S) v^2]`.
pub fn bkw_field(grid: &Grid2D, t: f64) -> Result<Field> {
    check_time(t)?;
    let s = bkw_s(t);
    let norm = 1.0 / (2.0 * math::PI * s * s);
    grid.project(|x, y| {
        let r2 = x * x + y * y;
        norm * math::exp(-r2 / (2.0 * s)) * (2.0 * s - 1.0 + (1.0 - s) / (2.0 * s) * r2)
    })
}

/// Exact time derivative of [`bkw_field`].
pub fn bkw_rate_field(grid: &Grid2D, t: f64) -> Result<Field> {
    check_time(t)?;
    let s = bkw_s(t);
    let norm = 1.0 / (2.0 * math::PI * s * s);
    let c = (1.0 - s) * (1.0 - s) / (32.0 * s * s * s);
    grid.project(|x, y| {
        let r2 = x * x + y * y;
        norm * math::exp(-r2 / (2.0 * s)) * c * (8.0 * s * s - 8.0 * s * r2 + r2 * r2)
    })
}

/// The projected BKW solution as a reference trajectory.
#[derive(Debug, Clone, Copy)]
pub struct BkwTrajectory {
    pub grid: Grid2D,
}

impl ReferenceTrajectory for BkwTrajectory {
    fn state(&self, t: f64) -> Result<Field> {
        bkw_field(&self.grid, t)
    }
    fn rate(&self, t: f64) -> Result<Field> {
        bkw_rate_field(&self.grid, t)
    }
}

pub fn count_negative(f: &Field) -> usize {
    f.as_slice().iter().filter(|&&v| v < 0.0).count()
}
