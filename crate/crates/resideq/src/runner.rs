//! Builds the operator, data and diagnostics for a [`RunConfig`] and
//! integrates it.

use std::io;
use std::path::PathBuf;

use resideq_core::advection::{
    advection_equilibrium, advection_tvd2_operator, limited_advection_operator, total_variation_with_inflow,
    tvd_battery, tvd_sweep, AdvectionParams, EquilibriumLimiter, LimitedScheme, TvdReport,
};
use resideq_core::boltzmann::{
    bkw_field, count_negative, maxwellian_2d, re_collision, BkwTrajectory, SpectralCollision, SpectralConfig,
};
use resideq_core::diagnostics::{
    lp_errors, relative_entropy_boltzmann, relative_entropy_fp, relative_entropy_pme, total_variation,
    DiagnosticsRecord,
};
use resideq_core::fokker_planck::{fp_central, fp_chang_cooper, fp_upwind, maxwellian_with_discrete_mass, FpParams};
use resideq_core::limiter::LimiterConfig;
use resideq_core::porous_medium::{barenblatt, pme_stable_dt, pme_upwind, ring_initial_datum, PmeParams};
use resideq_core::shallow_water::{
    fl_relf_operator_with, froude_max, lake_at_rest_equilibrium, lake_bump, lf2_operator, perturbed_lake,
    relf_operator, still_water, swe_stable_dt, transcritical_bump, transcritical_equilibrium, Boundary, SweParams,
};
use resideq_core::{
    run_simulation, uniform_samples, Field, Grid1D, Grid2D, ResidualEquilibrium, SemiDiscreteOperator,
    TimeDependentResidual, TimeStepper,
};

use crate::config::{ConfigError, Init, Model, RunConfig, TimeStep};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] resideq_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("total variation grew in {violations} steps (max increase {max_increase:e})")]
    TvdViolation { violations: usize, max_increase: f64 },
}

impl RunError {
    pub fn is_blow_up(&self) -> bool {
        matches!(
            self,
            Self::Model(resideq_core::Error::BlowUp { .. } | resideq_core::Error::NonFinite { .. })
        )
    }
}

/// Cell center coordinates, used to label snapshot lines.
#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Line(Vec<f64>),
    Plane { x: Vec<f64>, y: Vec<f64> },
}

type Probe = Box<dyn Fn(f64, &Field) -> resideq_core::Result<DiagnosticsRecord>>;

/// Everything needed to integrate one configured run.
pub struct Experiment {
    pub op: Box<dyn SemiDiscreteOperator>,
    pub u0: Field,
    pub u_eq: Field,
    pub stepper: TimeStepper,
    pub coords: Coords,
    probe: Probe,
}

impl Experiment {
    pub fn diagnostics(&self, t: f64, u: &Field) -> resideq_core::Result<DiagnosticsRecord> {
        (self.probe)(t, u)
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub field: Field,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
    pub coords: Coords,
    pub final_field: Field,
}

#[derive(Debug, Clone)]
pub enum RunOutput {
    Trajectory(Trajectory),
    Tvd(TvdReport),
}

fn limiter_config(c: &RunConfig) -> resideq_core::Result<LimiterConfig> {
    LimiterConfig::new(c.alpha, c.indicator_epsilon)
}

fn pick(init: Init, preset: &Field, eq: &Field) -> Field {
    match init {
        Init::Preset => preset.clone(),
        Init::Equilibrium => eq.clone(),
    }
}

fn fixed_or(dt: TimeStep, auto: impl FnOnce() -> f64) -> f64 {
    match dt {
        TimeStep::Fixed(v) => v,
        TimeStep::Auto => auto(),
    }
}

/// `exp(-5 (v + 2.5)^2) + exp(-5 (v - 2.5)^2)`.
pub fn two_gaussians(v: f64) -> f64 {
    (-5.0 * (v + 2.5) * (v + 2.5)).exp() + (-5.0 * (v - 2.5) * (v - 2.5)).exp()
}

pub fn build_experiment(c: &RunConfig) -> Result<Experiment, RunError> {
    match (c.model, c.test.as_str()) {
        (Model::Fp, _) => fp(c),
        (Model::Pme, _) => pme(c),
        (Model::Boltzmann, _) => boltzmann(c),
        (Model::Swe, "lake") => swe(c, false),
        (Model::Swe, _) => swe(c, true),
        (Model::Advect, _) => advect(c),
    }
}

fn fp(c: &RunConfig) -> Result<Experiment, RunError> {
    let grid = Grid1D::new(c.n_cells, -5.0, 5.0)?;
    let p = FpParams::new(0.0, 1.0, grid)?;
    let start = grid.project(two_gaussians)?;
    let m = maxwellian_with_discrete_mass(&p, start.sum() * grid.dx())?;
    let op: Box<dyn SemiDiscreteOperator> = match c.scheme.as_str() {
        "su" => Box::new(fp_upwind(p)),
        "sc" => Box::new(fp_central(p)),
        "cc" => Box::new(fp_chang_cooper(p)),
        "reu" => Box::new(ResidualEquilibrium::new(fp_upwind(p), m.clone())?),
        _ => Box::new(ResidualEquilibrium::new(fp_central(p), m.clone())?),
    };
    let dt = fixed_or(c.dt, || 1.5e-4 * (100.0 / c.n_cells as f64).powi(2));
    let eq = m.clone();
    let probe: Probe = Box::new(move |t, u| {
        let dx = grid.dx();
        let e = relative_entropy_fp(u, &eq, dx)?;
        let (l1, linf) = lp_errors(u, &eq, dx)?;
        let centers = grid.centers();
        let s = u.as_slice();
        Ok(DiagnosticsRecord {
            t,
            entropy: Some(e.value),
            l1_error: l1,
            linf_error: linf,
            tv: None,
            mass: s.iter().sum::<f64>() * dx,
            momentum: Some(s.iter().zip(&centers).map(|(f, v)| f * v).sum::<f64>() * dx),
            energy: Some(s.iter().zip(&centers).map(|(f, v)| 0.5 * f * v * v).sum::<f64>() * dx),
            neg_cells: Some(e.neg_cells),
            froude_max: None,
        })
    });
    Ok(Experiment {
        op,
        u0: pick(c.init, &start, &m),
        u_eq: m,
        stepper: TimeStepper::new(c.stepper, dt)?,
        coords: Coords::Line(grid.centers()),
        probe,
    })
}

fn pme(c: &RunConfig) -> Result<Experiment, RunError> {
    let grid = Grid2D::square(c.n_cells, -10.0, 10.0)?;
    let p = PmeParams::new(5.0, grid)?;
    let area = grid.cell_area();
    let ring = ring_initial_datum(&grid)?;
    let b = barenblatt(&p, ring.sum() * area)?.field;
    let op: Box<dyn SemiDiscreteOperator> = match c.scheme.as_str() {
        "su" => Box::new(pme_upwind(p)),
        _ => Box::new(ResidualEquilibrium::new(pme_upwind(p), b.clone())?),
    };
    let u0 = pick(c.init, &ring, &b);
    let dt = fixed_or(c.dt, || pme_stable_dt(&p, &u0).min(pme_stable_dt(&p, &b)));
    let eq = b.clone();
    let probe: Probe = Box::new(move |t, u| {
        let (l1, linf) = lp_errors(u, &eq, area)?;
        Ok(DiagnosticsRecord {
            t,
            entropy: Some(relative_entropy_pme(u, &eq, area, p.m)?),
            l1_error: l1,
            linf_error: linf,
            mass: u.sum() * area,
            ..Default::default()
        })
    });
    Ok(Experiment {
        op,
        u0,
        u_eq: b,
        stepper: TimeStepper::new(c.stepper, dt)?,
        coords: Coords::Plane {
            x: grid.x.centers(),
            y: grid.y.centers(),
        },
        probe,
    })
}

fn boltzmann(c: &RunConfig) -> Result<Experiment, RunError> {
    let cfg = SpectralConfig::new(c.n_cells, 8.0, 8)?;
    let grid = cfg.grid();
    let area = grid.cell_area();
    let m = maxwellian_2d(&grid, 1.0, [0.0, 0.0], 1.0)?;
    let op: Box<dyn SemiDiscreteOperator> = match c.scheme.as_str() {
        "fs" => Box::new(SpectralCollision::new(cfg)),
        "tdr" => Box::new(TimeDependentResidual::new(SpectralCollision::new(cfg), BkwTrajectory { grid })),
        _ => Box::new(re_collision(SpectralCollision::new(cfg), m.clone())?),
    };
    let u0 = pick(c.init, &bkw_field(&grid, 0.0)?, &m);
    let dt = fixed_or(c.dt, || 0.01);
    let eq = m.clone();
    let init = c.init;
    let probe: Probe = Box::new(move |t, u| {
        let e = relative_entropy_boltzmann(u, &eq, area)?;
        let reference = match init {
            Init::Preset => bkw_field(&grid, t)?,
            Init::Equilibrium => eq.clone(),
        };
        let (l1, linf) = lp_errors(u, &reference, area)?;
        let (mut px, mut py, mut en) = (0.0, 0.0, 0.0);
        for j in 0..grid.ny() {
            let y = grid.y.center(j);
            for i in 0..grid.nx() {
                let x = grid.x.center(i);
                let f = u.as_slice()[j * grid.nx() + i];
                px += f * x;
                py += f * y;
                en += 0.5 * f * (x * x + y * y);
            }
        }
        Ok(DiagnosticsRecord {
            t,
            entropy: Some(e.value),
            l1_error: l1,
            linf_error: linf,
            tv: None,
            mass: u.sum() * area,
            momentum: Some((px * px + py * py).sqrt() * area),
            energy: Some(en * area),
            neg_cells: Some(count_negative(u)),
            froude_max: None,
        })
    });
    Ok(Experiment {
        op,
        u0,
        u_eq: m,
        stepper: TimeStepper::new(c.stepper, dt)?,
        coords: Coords::Plane {
            x: grid.x.centers(),
            y: grid.y.centers(),
        },
        probe,
    })
}

fn swe(c: &RunConfig, transcritical: bool) -> Result<Experiment, RunError> {
    let (p, eq, start) = if transcritical {
        let grid = Grid1D::new(c.n_cells, 0.0, 25.0)?;
        let boundary = Boundary::InflowOutflow { q_in: 0.18, h_out: 0.33 };
        let p = SweParams::with_bottom(c.g, grid, transcritical_bump, boundary)?;
        let eq = transcritical_equilibrium(&p, 0.18, 0.33)?.state;
        let start = still_water(&p, 0.33)?;
        (p, eq, start)
    } else {
        let grid = Grid1D::new(c.n_cells, 0.0, 1.0)?;
        let p = SweParams::with_bottom(c.g, grid, lake_bump, Boundary::FarField { h_far: 1.0 })?;
        let eq = lake_at_rest_equilibrium(&p)?;
        let start = perturbed_lake(&p, 0.1, 0.1, 0.2)?;
        (p, eq, start)
    };
    let u0 = pick(c.init, &start, &eq);
    let dt = fixed_or(c.dt, || swe_stable_dt(&p, &u0).min(swe_stable_dt(&p, &eq)));
    let op: Box<dyn SemiDiscreteOperator> = match c.scheme.as_str() {
        "lf" => Box::new(lf2_operator(p.clone())),
        "fl-relf" => Box::new(fl_relf_operator_with(p.clone(), eq.clone(), limiter_config(c)?)?),
        _ => Box::new(relf_operator(p.clone(), eq.clone())?),
    };
    let (g, dx) = (p.g, p.grid.dx());
    let heq = eq.component(0);
    let bottom = p.topography.clone();
    let probe: Probe = Box::new(move |t, u| {
        let h = u.component(0);
        let hv = u.component(1);
        let (l1, linf) = h
            .iter()
            .zip(&heq)
            .fold((0.0, 0.0_f64), |(s, m), (a, b)| (s + (a - b).abs(), m.max((a - b).abs())));
        let energy: f64 = h
            .iter()
            .zip(&hv)
            .zip(&bottom)
            .map(|((&h, &q), &b)| 0.5 * q * q / h + 0.5 * g * h * h + g * h * b)
            .sum();
        Ok(DiagnosticsRecord {
            t,
            entropy: None,
            l1_error: l1 * dx,
            linf_error: linf,
            tv: Some(total_variation(&h)),
            mass: h.iter().sum::<f64>() * dx,
            momentum: Some(hv.iter().sum::<f64>() * dx),
            energy: Some(energy * dx),
            neg_cells: None,
            froude_max: Some(froude_max(u, g)),
        })
    });
    Ok(Experiment {
        op,
        u0,
        u_eq: eq,
        stepper: TimeStepper::new(c.stepper, dt)?,
        coords: Coords::Line(p.grid.centers()),
        probe,
    })
}

fn advection_params(c: &RunConfig) -> Result<AdvectionParams, RunError> {
    Ok(AdvectionParams::new(1.0, Grid1D::new(c.n_cells, 0.0, 5.0)?, 1.0)?)
}

fn advect(c: &RunConfig) -> Result<Experiment, RunError> {
    let p = advection_params(c)?;
    let eq = advection_equilibrium(&p);
    let op: Box<dyn SemiDiscreteOperator> = match c.scheme.as_str() {
        "tvd2" => Box::new(advection_tvd2_operator(p)),
        "re" => Box::new(ResidualEquilibrium::new(advection_tvd2_operator(p), eq.clone())?),
        _ => Box::new(limited_advection_operator(p, limiter_config(c)?)),
    };
    let dt = match c.dt {
        TimeStep::Fixed(v) => v,
        TimeStep::Auto => LimitedScheme::dt_for_cfl(&p, c.cfl)?,
    };
    let reference = eq.clone();
    let probe: Probe = Box::new(move |t, u| {
        let (l1, linf) = lp_errors(u, &reference, p.grid.dx())?;
        Ok(DiagnosticsRecord {
            t,
            l1_error: l1,
            linf_error: linf,
            tv: Some(total_variation_with_inflow(&p, u.as_slice())),
            mass: u.sum() * p.grid.dx(),
            ..Default::default()
        })
    });
    Ok(Experiment {
        op,
        u0: pick(c.init, &Field::zeros(p.shape()), &eq),
        u_eq: eq,
        stepper: TimeStepper::new(c.stepper, dt)?,
        coords: Coords::Line(p.grid.centers()),
        probe,
    })
}

/// Diagnostics at every `sample_every` and snapshots at `snapshot_times`.
pub fn integrate(c: &RunConfig, exp: &Experiment) -> Result<Trajectory, RunError> {
    let samples = uniform_samples(c.t_end, c.sample_every)?;
    let mut stops = samples.clone();
    stops.extend(c.snapshot_times.iter().copied().filter(|&t| t <= c.t_end));
    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut failure = None;
    let sim = run_simulation(&exp.op, exp.u0.clone(), &exp.stepper, c.t_end, &stops, |t, u| {
        if samples.contains(&t) {
            match exp.diagnostics(t, u) {
                Ok(r) => records.push(r),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        if c.snapshot_times.contains(&t) {
            snapshots.push(Snapshot { t, field: u.clone() });
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(Trajectory {
        records,
        snapshots,
        coords: exp.coords.clone(),
        final_field: sim.final_field,
    })
}

pub fn tvd_report(c: &RunConfig) -> Result<TvdReport, RunError> {
    let p = advection_params(c)?;
    let cases = tvd_battery(&p, c.n_random, c.seed);
    let doubled = |r: f64| 2.0 * r;
    let limiter = match c.scheme.as_str() {
        "adversarial" => EquilibriumLimiter::Custom(&doubled),
        _ => EquilibriumLimiter::Standard(limiter_config(c)?),
    };
    Ok(tvd_sweep(&p, &limiter, c.cfl, c.n_steps, &cases)?)
}

pub fn simulate(c: &RunConfig) -> Result<RunOutput, RunError> {
    if c.model == Model::Advect && c.test == "tvd-sweep" {
        return Ok(RunOutput::Tvd(tvd_report(c)?));
    }
    let exp = build_experiment(c)?;
    Ok(RunOutput::Trajectory(integrate(c, &exp)?))
}
