//! One-dimensional linear Fokker-Planck operator
//! `L(f) = d/dv [ (v - u) f + T df/dv ]` on a bounded velocity interval.
//!
//! All schemes are written in flux form with the edge flux
//! `F_{i+1/2} = (v_{i+1/2} - u) f_{i+1/2} + T (f_{i+1} - f_i) / dv`
//! and `L_h(f)_i = (F_{i+1/2} - F_{i-1/2}) / dv`; they differ only in the
//! edge value `f_{i+1/2}` used by the drift. No-flux conditions are imposed
//! at both ends, so every scheme conserves the discrete mass exactly up to
//! rounding.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::mesh::{Field, Grid1D, Shape};
use crate::residual::SemiDiscreteOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpParams {
    pub u_mean: f64,
    pub temperature: f64,
    pub grid: Grid1D,
}

impl FpParams {
    pub fn new(u_mean: f64, temperature: f64, grid: Grid1D) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: "must be positive",
            });
        }
        if !u_mean.is_finite() {
            return Err(Error::InvalidParameter {
                name: "u_mean",
                reason: "must be finite",
            });
        }
        Ok(Self { u_mean, temperature, grid })
    }
}

/// Gaussian equilibrium `rho / sqrt(2 pi T) exp(-(v - u)^2 / 2T)` at cell centers.
pub fn maxwellian(params: &FpParams, rho: f64) -> Result<Field> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            reason: "must be positive",
        });
    }
    let t = params.temperature;
    let norm = rho / math::sqrt(2.0 * math::PI * t);
    params
        .grid
        .project(|v| norm * math::exp(-(v - params.u_mean) * (v - params.u_mean) / (2.0 * t)))
}

/// Maxwellian whose discrete (midpoint) mass equals `mass` exactly up to
/// rounding, rather than its continuous mass.
pub fn maxwellian_with_discrete_mass(params: &FpParams, mass: f64) -> Result<Field> {
    let m = maxwellian(params, mass)?;
    let discrete = m.sum() * params.grid.dx();
    maxwellian(params, mass * mass / discrete)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpScheme {
    Upwind,
    Central,
    ChangCooper,
}

impl FpScheme {
    fn name(self) -> &'static str {
        match self {
            FpScheme::Upwind => "fp-upwind",
            FpScheme::Central => "fp-central",
            FpScheme::ChangCooper => "fp-chang-cooper",
        }
    }
}

/// Chang-Cooper weight `delta(w) = 1/w - 1/(e^w - 1)`.
pub fn chang_cooper_delta(w: f64) -> f64 {
    if w.abs() < 1e-8 {
        0.5 - w / 12.0
    } else {
        1.0 / w - 1.0 / math::expm1(w)
    }
}

pub struct FokkerPlanck {
    params: FpParams,
    scheme: FpScheme,
    /// `v_{i+1/2} - u` for the interior edges.
    drift: Vec<f64>,
    /// Weight on `f_i` in the drift edge value; `1 - weight` goes to `f_{i+1}`.
    weight: Vec<f64>,
}

impl FokkerPlanck {
    pub fn new(params: FpParams, scheme: FpScheme) -> Self {
        let grid = params.grid;
        let n = grid.n_cells();
        let drift: Vec<f64> = (0..n - 1).map(|i| grid.edge(i) - params.u_mean).collect();
        let weight = drift
            .iter()
            .map(|&c| match scheme {
                // transport velocity is -(v - u): upwind cell is i+1 when c > 0
                FpScheme::Upwind => {
                    if c > 0.0 {
                        0.0
                    } else {
                        1.0
                    }
                }
                FpScheme::Central => 0.5,
                FpScheme::ChangCooper => chang_cooper_delta(grid.dx() * c / params.temperature),
            })
            .collect();
        Self { params, scheme, drift, weight }
    }

    pub fn params(&self) -> &FpParams {
        &self.params
    }

    /// Interior edge fluxes `F_{1/2}, ..., F_{N-3/2}`.
    pub fn edge_fluxes(&self, f: &[f64]) -> Vec<f64> {
        let dx = self.params.grid.dx();
        let t = self.params.temperature;
        (0..f.len() - 1)
            .map(|i| {
                let w = self.weight[i];
                let edge = w * f[i] + (1.0 - w) * f[i + 1];
                self.drift[i] * edge + t * (f[i + 1] - f[i]) / dx
            })
            .collect()
    }
}

pub fn fp_upwind(params: FpParams) -> FokkerPlanck {
    FokkerPlanck::new(params, FpScheme::Upwind)
}

pub fn fp_central(params: FpParams) -> FokkerPlanck {
    FokkerPlanck::new(params, FpScheme::Central)
}

pub fn fp_chang_cooper(params: FpParams) -> FokkerPlanck {
    FokkerPlanck::new(params, FpScheme::ChangCooper)
}

impl SemiDiscreteOperator for FokkerPlanck {
    fn name(&self) -> &str {
        self.scheme.name()
    }

    fn order(&self) -> u32 {
        match self.scheme {
            FpScheme::Upwind => 1,
            FpScheme::Central | FpScheme::ChangCooper => 2,
        }
    }

    fn is_linear(&self) -> bool {
        true
    }

    fn shape(&self) -> Shape {
        self.params.grid.shape(1)
    }

    fn eval(&self, u: &Field, _t: f64) -> Result<Field> {
        u.check_shape(self.shape())?;
        let f = u.as_slice();
        let n = f.len();
        let dx = self.params.grid.dx();
        let flux = self.edge_fluxes(f);
        let mut out = vec![0.0; n];
        for i in 0..n {
            let right = if i + 1 < n { flux[i] } else { 0.0 };
            let left = if i > 0 { flux[i - 1] } else { 0.0 };
            out[i] = (right - left) / dx;
        }
        Ok(Field::from_vec_unchecked(self.shape(), out))
    }
}

/// BGK relaxation `mu (M_h - f)`.
pub struct Bgk {
    mu: f64,
    target: Field,
}

pub fn bgk_operator(params: &FpParams, mu: f64, rho_target: f64) -> Result<Bgk> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: "must be positive",
        });
    }
    Ok(Bgk {
        mu,
        target: maxwellian(params, rho_target)?,
    })
}

impl Bgk {
    pub fn target(&self) -> &Field {
        &self.target
    }
}

impl SemiDiscreteOperator for Bgk {
    fn name(&self) -> &str {
        "bgk"
    }
    fn order(&self) -> u32 {
        2
    }
    fn is_linear(&self) -> bool {
        false
    }
    fn shape(&self) -> Shape {
        self.target.shape()
    }
    fn eval(&self, u: &Field, _t: f64) -> Result<Field> {
        let mu = self.mu;
        self.target.zip_with(u, |m, f| mu * (m - f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub rho: f64,
    pub momentum: f64,
    pub temperature: f64,
}

impl Moments {
    pub fn mean_velocity(&self) -> f64 {
        self.momentum / self.rho
    }
}

/// Midpoint quadrature of mass, momentum and temperature.
pub fn moments(field: &Field, grid: &Grid1D) -> Result<Moments> {
    field.check_shape(grid.shape(1))?;
    let dx = grid.dx();
    let f = field.as_slice();
    let rho: f64 = f.iter().sum::<f64>() * dx;
    if !(rho > 0.0) {
        return Err(Error::NonAdmissible(alloc::format!(
            "non-positive mass {rho}"
        )));
    }
    let momentum: f64 = f.iter().enumerate().map(|(i, v)| v * grid.center(i)).sum::<f64>() * dx;
    let u = momentum / rho;
    let second: f64 = f
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let c = grid.center(i) - u;
            v * c * c
        })
        .sum::<f64>()
        * dx;
    Ok(Moments {
        rho,
        momentum,
        temperature: second / rho,
    })
}
