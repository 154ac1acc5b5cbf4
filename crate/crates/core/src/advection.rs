//! Linear advection with relaxation, `du/dt = -a du/dx - u`, and the
//! equilibrium-limited explicit scheme used to check the TVD bound.
//!
//! The transport flux is upwind with a Van Leer limited slope,
//! `U_{i+1/2} = a (u_i + s_i / 2)`. The left boundary is an inflow held at
//! `u_B`; the right boundary extrapolates.
//!
//! One step of the limited scheme is
//!
//! ```text
//! u_i <- u_i - nu (dU_i - phi(r_i) dU_eq_i) / a - dt (u_i - u_eq_i),   r_i = dU_i / dU_eq_i
//! ```
//!
//! so `phi = 1` is the residual equilibrium scheme and `phi = 0` keeps the
//! plain transport flux.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::total_variation;
use crate::error::{Error, Result};
use crate::limiter::{indicator_scalar, limited_slope, phi, LimiterConfig};
use crate::math;
use crate::mesh::{Field, Grid1D, Shape};
use crate::residual::SemiDiscreteOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvectionParams {
    pub a: f64,
    pub grid: Grid1D,
    pub u_b: f64,
}

impl AdvectionParams {
    pub fn new(a: f64, grid: Grid1D, u_b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: "must be positive",
            });
        }
        if !u_b.is_finite() {
            return Err(Error::InvalidParameter {
                name: "u_b",
                reason: "must be finite",
            });
        }
        Ok(Self { a, grid, u_b })
    }

    /// `a = 1`, `u_B = 1`, 100 cells on `[0, 5]`.
    pub fn standard() -> Self {
        Self {
            a: 1.0,
            grid: Grid1D::new(100, 0.0, 5.0).expect("valid grid"),
            u_b: 1.0,
        }
    }

    pub fn shape(&self) -> Shape {
        self.grid.shape(1)
    }
}

/// `u_B exp(-x / a)` at the cell centers.
pub fn advection_equilibrium(params: &AdvectionParams) -> Field {
    let data = params
        .grid
        .centers()
        .into_iter()
        .map(|x| params.u_b * math::exp(-x / params.a))
        .collect();
    Field::from_vec(params.shape(), data).expect("one value per cell")
}

/// Interface fluxes `U_{i-1/2}` for `i = 0..=n` (the first one is the inflow
/// face).
pub fn interface_fluxes(params: &AdvectionParams, u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let at = |k: isize| -> f64 {
        if k < 0 {
            params.u_b
        } else {
            u[(k as usize).min(n - 1)]
        }
    };
    (0..=n as isize)
        .map(|f| {
            let up = f - 1;
            let s = limited_slope(at(up) - at(up - 1), at(up + 1) - at(up));
            params.a * (at(up) + 0.5 * s)
        })
        .collect()
}

/// Flux differences `dU_i = U_{i+1/2} - U_{i-1/2}`.
pub fn flux_differences(params: &AdvectionParams, u: &[f64]) -> Vec<f64> {
    interface_fluxes(params, u)
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect()
}

/// Total variation with the inflow value prepended.
pub fn total_variation_with_inflow(params: &AdvectionParams, u: &[f64]) -> f64 {
    let first = u.first().map_or(0.0, |&u0| (u0 - params.u_b).abs());
    first + total_variation(u)
}

pub struct AdvectionTvd2 {
    params: AdvectionParams,
}

/// `-dU_i / dx - u_i`.
pub fn advection_tvd2_operator(params: AdvectionParams) -> AdvectionTvd2 {
    AdvectionTvd2 { params }
}

impl AdvectionTvd2 {
    pub fn params(&self) -> &AdvectionParams {
        &self.params
    }
}

impl SemiDiscreteOperator for AdvectionTvd2 {
    fn name(&self) -> &str {
        "advect-tvd2"
    }

    fn order(&self) -> u32 {
        2
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn shape(&self) -> Shape {
        self.params.shape()
    }

    fn eval(&self, u: &Field, _t: f64) -> Result<Field> {
        u.check_shape(self.shape())?;
        if let Some(cell) = u.first_non_finite() {
            return Err(Error::NonFinite { cell });
        }
        let dx = self.params.grid.dx();
        let du = flux_differences(&self.params, u.as_slice());
        let out = du
            .iter()
            .zip(u.as_slice())
            .map(|(d, v)| -d / dx - v)
            .collect();
        Field::from_vec(self.shape(), out)
    }
}

/// How `phi_i` is obtained from the indicator `r_i`.
#[derive(Clone, Copy)]
pub enum EquilibriumLimiter<'a> {
    Standard(LimiterConfig),
    /// Fixed value, for consistency checks.
    Constant(f64),
    /// Any limiter function, including ones that break the TVD bound.
    Custom(&'a dyn Fn(f64) -> f64),
}

impl EquilibriumLimiter<'_> {
    fn eval(&self, r: f64) -> f64 {
        match self {
            Self::Standard(c) => phi(r, c),
            Self::Constant(p) => *p,
            Self::Custom(f) => f(r),
        }
    }

    fn epsilon(&self) -> f64 {
        match self {
            Self::Standard(c) => c.epsilon,
            _ => LimiterConfig::default().epsilon,
        }
    }
}

/// Explicit equilibrium-limited scheme with fixed `dt`.
#[derive(Debug, Clone)]
pub struct LimitedScheme {
    params: AdvectionParams,
    u_eq: Vec<f64>,
    flux_eq: Vec<f64>,
    du_eq: Vec<f64>,
    dt: f64,
}

impl LimitedScheme {
    pub fn new(params: AdvectionParams, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "must be positive",
            });
        }
        let u_eq = advection_equilibrium(&params).into_vec();
        let flux_eq = interface_fluxes(&params, &u_eq);
        let du_eq = flux_eq.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            params,
            u_eq,
            flux_eq,
            du_eq,
            dt,
        })
    }

    /// Time step with `2 nu + dt = cfl`, where `nu = a dt / dx`. The Van
    /// Leer flux has `0 <= dU_i / du_{i-1/2} <= 2 a`, so this keeps every
    /// incremental coefficient below `1 - dt`.
    pub fn dt_for_cfl(params: &AdvectionParams, cfl: f64) -> Result<f64> {
        if !(cfl > 0.0 && cfl < 1.0) {
            return Err(Error::InvalidParameter {
                name: "cfl",
                reason: "must lie in (0, 1)",
            });
        }
        Ok(cfl / (2.0 * params.a / params.grid.dx() + 1.0))
    }

    pub fn params(&self) -> &AdvectionParams {
        &self.params
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nu(&self) -> f64 {
        self.params.a * self.dt / self.params.grid.dx()
    }

    pub fn equilibrium(&self) -> &[f64] {
        &self.u_eq
    }

    /// Indicator values and limiter values at `u`.
    pub fn limiter_values(&self, u: &[f64], limiter: &EquilibriumLimiter) -> Vec<(f64, f64)> {
        let flux = interface_fluxes(&self.params, u);
        self.limiter_from_fluxes(&flux, limiter)
    }

    fn limiter_from_fluxes(&self, flux: &[f64], limiter: &EquilibriumLimiter) -> Vec<(f64, f64)> {
        let config = LimiterConfig {
            alpha: 2.0,
            epsilon: limiter.epsilon(),
        };
        (0..flux.len() - 1)
            .map(|i| {
                let du = flux[i + 1] - flux[i];
                let scale = flux[i].abs().max(flux[i + 1].abs())
                    + self.flux_eq[i].abs().max(self.flux_eq[i + 1].abs())
                    + 1.0;
                let r = indicator_scalar(du, self.du_eq[i], scale, &config);
                (r, limiter.eval(r))
            })
            .collect()
    }

    pub fn step(&self, u: &[f64], limiter: &EquilibriumLimiter) -> Result<Vec<f64>> {
        if u.len() != self.u_eq.len() {
            return Err(Error::ShapeMismatch {
                expected: self.params.shape(),
                found: Shape::new_1d(u.len(), 1),
            });
        }
        let flux = interface_fluxes(&self.params, u);
        let phis = self.limiter_from_fluxes(&flux, limiter);
        let lambda = self.dt / self.params.grid.dx();
        Ok((0..u.len())
            .map(|i| {
                let du = flux[i + 1] - flux[i];
                u[i] - lambda * (du - phis[i].1 * self.du_eq[i]) - self.dt * (u[i] - self.u_eq[i])
            })
            .collect())
    }
}

/// Semi-discrete form of the limited scheme,
/// `-(dU_i - phi(r_i) dU_eq_i) / dx - (u_i - u_eq_i)`. A forward Euler step
/// of it is [`LimitedScheme::step`] up to rounding.
pub struct LimitedAdvection {
    scheme: LimitedScheme,
    config: LimiterConfig,
}

pub fn limited_advection_operator(params: AdvectionParams, config: LimiterConfig) -> LimitedAdvection {
    LimitedAdvection {
        scheme: LimitedScheme::new(params, 1.0).expect("unit step is valid"),
        config,
    }
}

impl LimitedAdvection {
    pub fn equilibrium(&self) -> Field {
        Field::from_vec(self.scheme.params.shape(), self.scheme.u_eq.clone()).expect("one value per cell")
    }
}

impl SemiDiscreteOperator for LimitedAdvection {
    fn name(&self) -> &str {
        "advect-fl"
    }

    fn order(&self) -> u32 {
        2
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn shape(&self) -> Shape {
        self.scheme.params.shape()
    }

    fn eval(&self, u: &Field, _t: f64) -> Result<Field> {
        u.check_shape(self.shape())?;
        if let Some(cell) = u.first_non_finite() {
            return Err(Error::NonFinite { cell });
        }
        let s = &self.scheme;
        let flux = interface_fluxes(&s.params, u.as_slice());
        let phis = s.limiter_from_fluxes(&flux, &EquilibriumLimiter::Standard(self.config));
        let dx = s.params.grid.dx();
        let out = (0..u.len())
            .map(|i| {
                let du = flux[i + 1] - flux[i];
                -(du - phis[i].1 * s.du_eq[i]) / dx - (u.as_slice()[i] - s.u_eq[i])
            })
            .collect();
        Field::from_vec(self.shape(), out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvdRecord {
    pub case: String,
    pub step: usize,
    pub tv: f64,
    /// `TV(u^n) - TV(u^{n-1})`; zero on the first row.
    pub increase: f64,
    /// Whether `TV(u_eq) <= TV(u^{n-1})`, the premise of the bound.
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvdReport {
    pub records: Vec<TvdRecord>,
    pub dt: f64,
    pub nu: f64,
    /// Largest increase over the checked steps.
    pub max_increase: f64,
    /// Checked steps whose increase exceeds the tolerance.
    pub violations: usize,
    pub tolerance: f64,
}

impl TvdReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Named initial data: a step, a ramp, a constant, `n_random` uniform random
/// fields, and the equilibrium itself.
pub fn tvd_battery(params: &AdvectionParams, n_random: usize, seed: u64) -> Vec<(String, Vec<f64>)> {
    let grid = params.grid;
    let n = grid.n_cells();
    let length = grid.x_max() - grid.x_min();
    let mut cases = Vec::with_capacity(n_random + 4);
    let step = grid
        .centers()
        .into_iter()
        .map(|x| if x < grid.x_min() + 0.3 * length { 2.0 } else { 0.0 })
        .collect();
    cases.push((String::from("step"), step));
    let ramp = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
    cases.push((String::from("ramp"), ramp));
    cases.push((String::from("constant"), vec![0.5; n]));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..n_random {
        let u = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
        cases.push((alloc::format!("random-{k:02}"), u));
    }
    cases.push((String::from("equilibrium"), advection_equilibrium(params).into_vec()));
    cases
}

/// Runs the limited scheme from every case for `n_steps` and checks
/// `TV(u^{n+1}) <= TV(u^n)` (inflow value included) at every step whose
/// start satisfies `TV(u_eq) <= TV(u^n)`.
pub fn tvd_sweep(
    params: &AdvectionParams,
    limiter: &EquilibriumLimiter,
    cfl: f64,
    n_steps: usize,
    cases: &[(String, Vec<f64>)],
) -> Result<TvdReport> {
    let dt = LimitedScheme::dt_for_cfl(params, cfl)?;
    let scheme = LimitedScheme::new(*params, dt)?;
    let tolerance = 1e-12;
    let tv_eq = total_variation_with_inflow(params, scheme.equilibrium());
    let mut records = Vec::with_capacity(cases.len() * (n_steps + 1));
    let (mut max_increase, mut violations) = (f64::NEG_INFINITY, 0);
    for (name, u0) in cases {
        let mut u = u0.clone();
        let mut tv = total_variation_with_inflow(params, &u);
        records.push(TvdRecord {
            case: name.clone(),
            step: 0,
            tv,
            increase: 0.0,
            checked: false,
        });
        for step in 1..=n_steps {
            u = scheme.step(&u, limiter)?;
            if let Some(cell) = u.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { cell });
            }
            let next = total_variation_with_inflow(params, &u);
            let increase = next - tv;
            let checked = tv_eq <= tv;
            if checked {
                max_increase = max_increase.max(increase);
                if increase > tolerance {
                    violations += 1;
                }
            }
            records.push(TvdRecord {
                case: name.clone(),
                step,
                tv: next,
                increase,
                checked,
            });
            tv = next;
        }
    }
    Ok(TvdReport {
        records,
        dt,
        nu: scheme.nu(),
        max_increase,
        violations,
        tolerance,
    })
}
