//! Porous medium equation in self-similar variables,
//! `du/dt = div(v u) + lap(u^m)`, on a rectangle with no-flux boundaries.
//!
//! The upwind scheme works axis by axis. Across an edge at coordinate `x_e`
//! the flux is `x_e u_up + (w_R - w_L) / dx` with `w = max(u, 0)^m`, where
//! the confinement is upwinded on the sign of `x_e`: the transport velocity
//! is `-x_e`, so the upwind cell is the one closer to the origin.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::mesh::{Field, Grid1D, Grid2D, Shape};
use crate::residual::SemiDiscreteOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmeParams {
    pub m: f64,
    pub grid: Grid2D,
}

impl PmeParams {
    pub fn new(m: f64, grid: Grid2D) -> Result<Self> {
        if !(m.is_finite() && m > 1.0) {
            return Err(Error::InvalidParameter {
                name: "m",
                reason: "must be greater than one",
            });
        }
        Ok(Self { m, grid })
    }
}

/// Ring-shaped initial datum `|v|^2 exp(-|v|^2 / 2)`, whose mass in the plane is `4 pi`.
pub fn ring_initial_datum(grid: &Grid2D) -> Result<Field> {
    grid.project(|x, y| {
        let r2 = x * x + y * y;
        r2 * math::exp(-r2 / 2.0)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarenblattProfile {
    pub c: f64,
    pub field: Field,
}

/// `(C - (m-1)/(2m) |v|^2)_+^{1/(m-1)}` at the cell centers.
pub fn barenblatt_with_constant(params: &PmeParams, c: f64) -> Result<Field> {
    let m = params.m;
    let k = (m - 1.0) / (2.0 * m);
    let p = 1.0 / (m - 1.0);
    params.grid.project(|x, y| {
        let s = c - k * (x * x + y * y);
        if s > 0.0 {
            math::powf(s, p)
        } else {
            0.0
        }
    })
}

/// Support radius `sqrt(2 m C / (m - 1))`.
pub fn barenblatt_radius(m: f64, c: f64) -> f64 {
    math::sqrt(2.0 * m * c / (m - 1.0))
}

/// Barenblatt profile whose discrete mass equals `target_mass`.
///
/// The constant is found by bisection down to adjacent floating-point
/// values, so the mass is matched to rounding. Fails if the support comes
/// within two cells of the boundary.
pub fn barenblatt(params: &PmeParams, target_mass: f64) -> Result<BarenblattProfile> {
    if !(target_mass.is_finite() && target_mass > 0.0) {
        return Err(Error::InvalidParameter {
            name: "target_mass",
            reason: "must be positive",
        });
    }
    let area = params.grid.cell_area();
    let mass = |c: f64| -> Result<f64> { Ok(barenblatt_with_constant(params, c)?.sum() * area) };

    let mut hi = 1.0;
    let mut iterations = 0;
    while mass(hi)? < target_mass {
        hi *= 2.0;
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Domain("barenblatt mass cannot reach the target"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid)? < target_mass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = if (mass(lo)? - target_mass).abs() <= (mass(hi)? - target_mass).abs() {
        lo
    } else {
        hi
    };

    let g = params.grid;
    let r = barenblatt_radius(params.m, c);
    let margin = 2.0 * g.x.dx().max(g.y.dx());
    let room = (-g.x.x_min())
        .min(g.x.x_max())
        .min(-g.y.x_min())
        .min(g.y.x_max());
    if r + margin > room {
        return Err(Error::Domain("barenblatt support reaches the boundary"));
    }
    Ok(BarenblattProfile {
        c,
        field: barenblatt_with_constant(params, c)?,
    })
}

/// Parabolic time step `0.9 min(dx,dy)^2 / (4 m max(u, 1e-12)^(m-1))`, capped
/// by the confinement condition `min(dx,dy) / max|v|`, where `max|v|` is the
/// largest edge coordinate on either axis.
pub fn pme_stable_dt(params: &PmeParams, u: &Field) -> f64 {
    let g = params.grid;
    let h = g.x.dx().min(g.y.dx());
    let umax = u.as_slice().iter().fold(1e-12_f64, |a, &b| a.max(b));
    let parabolic = 0.9 * h * h / (4.0 * params.m * math::powf(umax, params.m - 1.0));
    let vmax = g
        .x
        .x_min()
        .abs()
        .max(g.x.x_max().abs())
        .max(g.y.x_min().abs())
        .max(g.y.x_max().abs());
    if vmax > 0.0 {
        parabolic.min(h / vmax)
    } else {
        parabolic
    }
}

pub struct PmeUpwind {
    params: PmeParams,
}

pub fn pme_upwind(params: PmeParams) -> PmeUpwind {
    PmeUpwind { params }
}

impl PmeUpwind {
    pub fn params(&self) -> &PmeParams {
        &self.params
    }
}

/// Flux across the right edge of cell `l` on `axis`, between values `(ul, ur)`.
#[inline]
fn edge_flux(axis: &Grid1D, l: usize, ul: f64, ur: f64, wl: f64, wr: f64) -> f64 {
    let xe = axis.edge(l);
    let up = if xe > 0.0 { ur } else { ul };
    xe * up + (wr - wl) / axis.dx()
}

impl SemiDiscreteOperator for PmeUpwind {
    fn name(&self) -> &str {
        "pme-upwind"
    }

    fn order(&self) -> u32 {
        1
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn shape(&self) -> Shape {
        self.params.grid.shape()
    }

    fn eval(&self, u: &Field, _t: f64) -> Result<Field> {
        u.check_shape(self.shape())?;
        let g = &self.params.grid;
        let (nx, ny) = (g.nx(), g.ny());
        let m = self.params.m;
        let u = u.as_slice();
        let w: Vec<f64> = u.iter().map(|&v| math::powf(v.max(0.0), m)).collect();
        let mut out = vec![0.0; nx * ny];

        let dx = g.x.dx();
        for j in 0..ny {
            let row = j * nx;
            for i in 0..nx - 1 {
                let (a, b) = (row + i, row + i + 1);
                let f = edge_flux(&g.x, i, u[a], u[b], w[a], w[b]) / dx;
                out[a] += f;
                out[b] -= f;
            }
        }
        let dy = g.y.dx();
        let mut gy = vec![0.0; nx * ny];
        for j in 0..ny - 1 {
            for i in 0..nx {
                let (a, b) = (j * nx + i, (j + 1) * nx + i);
                let f = edge_flux(&g.y, j, u[a], u[b], w[a], w[b]) / dy;
                gy[a] += f;
                gy[b] -= f;
            }
        }
        for (o, y) in out.iter_mut().zip(&gy) {
            *o += y;
        }
        Ok(Field::from_vec_unchecked(self.shape(), out))
    }
}
