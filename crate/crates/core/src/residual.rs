//! Residual equilibrium wrappers and explicit time integration.
//!
//! Given an underlying operator `G_h` and a discrete equilibrium `u_eq`, the
//! residual `r_h = G_h(u_eq)` is computed once and subtracted from every
//! later evaluation. Because both evaluations of `G_h` at `u_eq` run the
//! same floating-point operations, the wrapped operator returns an exact
//! zero field at `u_eq`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mesh::{Field, Shape};

/// An evaluable right-hand side `u -> G_h(u, t)` of a method-of-lines system.
pub trait SemiDiscreteOperator {
    fn name(&self) -> &str;

    /// Formal order of accuracy in space.
    fn order(&self) -> u32;

    fn is_linear(&self) -> bool;

    /// Shape of the fields this operator accepts and returns.
    fn shape(&self) -> Shape;

    fn eval(&self, u: &Field, t: f64) -> Result<Field>;
}

impl<T: SemiDiscreteOperator + ?Sized> SemiDiscreteOperator for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn order(&self) -> u32 {
        (**self).order()
    }
    fn is_linear(&self) -> bool {
        (**self).is_linear()
    }
    fn shape(&self) -> Shape {
        (**self).shape()
    }
    fn eval(&self, u: &Field, t: f64) -> Result<Field> {
        (**self).eval(u, t)
    }
}

impl<T: SemiDiscreteOperator + ?Sized> SemiDiscreteOperator for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn order(&self) -> u32 {
        (**self).order()
    }
    fn is_linear(&self) -> bool {
        (**self).is_linear()
    }
    fn shape(&self) -> Shape {
        (**self).shape()
    }
    fn eval(&self, u: &Field, t: f64) -> Result<Field> {
        (**self).eval(u, t)
    }
}

/// A discrete steady state together with the residual the underlying
/// operator leaves on it.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumProfile {
    u_eq: Field,
    residual: Field,
}

impl EquilibriumProfile {
    pub fn new<G: SemiDiscreteOperator + ?Sized>(op: &G, u_eq: Field) -> Result<Self> {
        u_eq.check_shape(op.shape())?;
        let residual = op.eval(&u_eq, 0.0)?;
        Ok(Self { u_eq, residual })
    }

    pub fn u_eq(&self) -> &Field {
        &self.u_eq
    }

    pub fn residual(&self) -> &Field {
        &self.residual
    }
}

/// `u -> G_h(u) - G_h(u_eq)`.
pub struct ResidualEquilibrium<G> {
    inner: G,
    profile: EquilibriumProfile,
    name: String,
}

impl<G: SemiDiscreteOperator> ResidualEquilibrium<G> {
    pub fn new(inner: G, u_eq: Field) -> Result<Self> {
        let profile = EquilibriumProfile::new(&inner, u_eq)?;
        Ok(Self::with_profile(inner, profile))
    }

    /// Reuses a profile computed earlier. The caller guarantees it was built
    /// from the same operator.
    pub fn with_profile(inner: G, profile: EquilibriumProfile) -> Self {
        let name = format!("re-{}", inner.name());
        Self { inner, profile, name }
    }

    pub fn inner(&self) -> &G {
        &self.inner
    }

    pub fn profile(&self) -> &EquilibriumProfile {
        &self.profile
    }
}

impl<G: SemiDiscreteOperator> SemiDiscreteOperator for ResidualEquilibrium<G> {
    fn name(&self) -> &str {
        &self.name
    }
    fn order(&self) -> u32 {
        self.inner.order()
    }
    fn is_linear(&self) -> bool {
        self.inner.is_linear()
    }
    fn shape(&self) -> Shape {
        self.inner.shape()
    }
    fn eval(&self, u: &Field, t: f64) -> Result<Field> {
        self.inner.eval(u, t)?.sub(&self.profile.residual)
    }
}

/// A discrete reference solution `u_s(t)` and its exact time derivative.
pub trait ReferenceTrajectory {
    fn state(&self, t: f64) -> Result<Field>;
    fn rate(&self, t: f64) -> Result<Field>;
}

/// `u -> G_h(u) - [G_h(u_s(t)) - du_s/dt(t)]`, which propagates the
/// discrete reference trajectory exactly under exact time integration.
pub struct TimeDependentResidual<G, R> {
    inner: G,
    trajectory: R,
    name: String,
}

impl<G: SemiDiscreteOperator, R: ReferenceTrajectory> TimeDependentResidual<G, R> {
    pub fn new(inner: G, trajectory: R) -> Self {
        let name = format!("tdr-{}", inner.name());
        Self { inner, trajectory, name }
    }

    pub fn residual_at(&self, t: f64) -> Result<Field> {
        let us = self.trajectory.state(t)?;
        us.check_shape(self.inner.shape())?;
        let g = self.inner.eval(&us, t)?;
        g.sub(&self.trajectory.rate(t)?)
    }
}

impl<G: SemiDiscreteOperator, R: ReferenceTrajectory> SemiDiscreteOperator
    for TimeDependentResidual<G, R>
{
    fn name(&self) -> &str {
        &self.name
    }
    fn order(&self) -> u32 {
        self.inner.order()
    }
    fn is_linear(&self) -> bool {
        false
    }
    fn shape(&self) -> Shape {
        self.inner.shape()
    }
    fn eval(&self, u: &Field, t: f64) -> Result<Field> {
        self.inner.eval(u, t)?.sub(&self.residual_at(t)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepperKind {
    ForwardEuler,
    SspRk2,
    SspRk3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepper {
    pub kind: StepperKind,
    dt: f64,
}

impl TimeStepper {
    pub fn new(kind: StepperKind, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "time step must be positive and finite",
            });
        }
        Ok(Self { kind, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(self.kind, dt)
    }
}

fn stage<G: SemiDiscreteOperator + ?Sized>(op: &G, u: &Field, t: f64) -> Result<Field> {
    let k = op.eval(u, t)?;
    if k.first_non_finite().is_some() {
        return Err(Error::BlowUp { t });
    }
    Ok(k)
}

fn offset(u: &Field, h: f64, k: &Field) -> Result<Field> {
    let mut v = u.clone();
    v.axpy(h, k)?;
    Ok(v)
}

/// One step of size `stepper.dt()` from time `t`.
///
/// The SSP Runge-Kutta schemes are written in increment form
/// (`u + dt * sum(b_i k_i)`), which is algebraically identical to the
/// Shu-Osher convex combinations and leaves `u` bit-for-bit unchanged when
/// every stage derivative is exactly zero.
pub fn advance<G: SemiDiscreteOperator + ?Sized>(
    stepper: &TimeStepper,
    op: &G,
    u: &Field,
    t: f64,
) -> Result<Field> {
    let dt = stepper.dt;
    let next = match stepper.kind {
        StepperKind::ForwardEuler => {
            let k1 = stage(op, u, t)?;
            offset(u, dt, &k1)?
        }
        StepperKind::SspRk2 => {
            let k1 = stage(op, u, t)?;
            let k2 = stage(op, &offset(u, dt, &k1)?, t + dt)?;
            let incr = k1.zip_with(&k2, |a, b| a + b)?;
            offset(u, 0.5 * dt, &incr)?
        }
        StepperKind::SspRk3 => {
            let k1 = stage(op, u, t)?;
            let k2 = stage(op, &offset(u, dt, &k1)?, t + dt)?;
            let k12 = k1.zip_with(&k2, |a, b| a + b)?;
            let k3 = stage(op, &offset(u, 0.25 * dt, &k12)?, t + 0.5 * dt)?;
            let incr = k12.zip_with(&k3, |a, b| a + 4.0 * b)?;
            offset(u, dt / 6.0, &incr)?
        }
    };
    if next.first_non_finite().is_some() {
        return Err(Error::BlowUp { t: t + dt });
    }
    Ok(next)
}

/// Sample times `0, every, 2 every, ...` up to `t_end`, with `t_end` appended
/// when it is not already on the lattice.
pub fn uniform_samples(t_end: f64, every: f64) -> Result<Vec<f64>> {
    if !(every.is_finite() && every > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sample_every",
            reason: "must be positive",
        });
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: "must be non-negative",
        });
    }
    let mut times = Vec::new();
    let mut k = 0usize;
    loop {
        let t = k as f64 * every;
        if t > t_end * (1.0 + 1e-12) {
            break;
        }
        times.push(t.min(t_end));
        k += 1;
    }
    if times.last().is_none_or(|&t| t < t_end) {
        times.push(t_end);
    }
    Ok(times)
}

#[derive(Debug, Clone)]
pub struct Simulation<R> {
    pub final_time: f64,
    pub final_field: Field,
    pub series: Vec<R>,
}

/// Integrates `op` from `u0` at `t = 0` up to `t_end`.
///
/// Steps are shortened so the trajectory lands exactly on every requested
/// sample time and on `t_end`; `hook` is called at each sample time (times
/// outside `[0, t_end]` are ignored).
pub fn run_simulation<G, R>(
    op: &G,
    u0: Field,
    stepper: &TimeStepper,
    t_end: f64,
    sample_times: &[f64],
    mut hook: impl FnMut(f64, &Field) -> R,
) -> Result<Simulation<R>>
where
    G: SemiDiscreteOperator + ?Sized,
{
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: "must be non-negative",
        });
    }
    u0.check_shape(op.shape())?;
    let mut stops: Vec<f64> = sample_times
        .iter()
        .copied()
        .filter(|&s| (0.0..=t_end).contains(&s))
        .collect();
    stops.sort_by(|a, b| a.total_cmp(b));
    stops.dedup();

    let mut u = u0;
    let mut t = 0.0;
    let mut series = Vec::with_capacity(stops.len());
    let mut targets = stops.iter().peekable();
    if targets.peek() == Some(&&0.0) {
        series.push(hook(0.0, &u));
        targets.next();
    }
    let dt = stepper.dt;
    let snap = 1e-9 * dt;
    let mut goal_iter = targets.copied().chain(core::iter::once(t_end));
    let mut goal = goal_iter.next();
    while let Some(target) = goal {
        while t < target {
            if t + dt >= target - snap {
                u = advance(&stepper.with_dt(target - t)?, op, &u, t)?;
                t = target;
            } else {
                u = advance(stepper, op, &u, t)?;
                t += dt;
            }
        }
        goal = goal_iter.next();
        if goal.is_some() {
            // `target` was a sample time rather than the trailing t_end marker
            series.push(hook(target, &u));
        }
    }
    Ok(Simulation {
        final_time: t,
        final_field: u,
        series,
    })
}
