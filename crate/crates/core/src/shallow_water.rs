//! One-dimensional shallow water equations with topography,
//!
//! ```text
//! h_t + (hv)_x = 0,
//! (hv)_t + (hv^2 + g h^2 / 2)_x = -g h B_x,
//! ```
//!
//! discretized by a second-order Lax-Friedrichs scheme: Van Leer limited
//! reconstruction of `(h, hv)` and a local Lax-Friedrichs (Rusanov) flux at
//! each interface, with the source taken as `-g h_i (B_{i+1} - B_{i-1}) / 2dx`.
//! Two ghost cells on each side carry the boundary condition.
//!
//! The residual equilibrium variants subtract interface fluxes and sources
//! of a precomputed equilibrium: fully (RELF) or scaled by a per-cell
//! equilibrium limiter `phi_i` (FL-RELF).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::limiter::{indicator_system, limited_slope, phi, LimiterConfig};
use crate::math;
use crate::mesh::{Field, Grid1D, Shape};
use crate::residual::SemiDiscreteOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    ReflectiveWalls,
    /// Characteristic far field at rest with depth `h_far`: the outgoing
    /// Riemann invariant is extrapolated, the incoming one is taken from the
    /// far field.
    FarField { h_far: f64 },
    /// Left ghost: `hv = q_in`, `h` extrapolated. Right ghost: `h = h_out`,
    /// `hv` extrapolated.
    InflowOutflow { q_in: f64, h_out: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweParams {
    pub g: f64,
    pub grid: Grid1D,
    pub topography: Vec<f64>,
    pub boundary: Boundary,
}

impl SweParams {
    pub fn new(g: f64, grid: Grid1D, topography: Vec<f64>, boundary: Boundary) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: "must be positive",
            });
        }
        if topography.len() != grid.n_cells() || topography.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "topography",
                reason: "needs one finite value per cell",
            });
        }
        if let Boundary::FarField { h_far } = boundary {
            if !(h_far.is_finite() && h_far > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "boundary",
                    reason: "far-field depth must be positive",
                });
            }
        }
        if let Boundary::InflowOutflow { q_in, h_out } = boundary {
            if !(q_in.is_finite() && h_out.is_finite() && h_out > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "boundary",
                    reason: "inflow discharge must be finite and outflow depth positive",
                });
            }
        }
        Ok(Self {
            g,
            grid,
            topography,
            boundary,
        })
    }

    /// Samples `bottom` at the cell centers.
    pub fn with_bottom(
        g: f64,
        grid: Grid1D,
        bottom: impl Fn(f64) -> f64,
        boundary: Boundary,
    ) -> Result<Self> {
        let topography = grid.centers().into_iter().map(bottom).collect();
        Self::new(g, grid, topography, boundary)
    }

    pub fn shape(&self) -> Shape {
        self.grid.shape(2)
    }
}

/// Smooth bump `0.25 (cos(pi (x - 0.5) / 0.1) + 1)` on `|x - 0.5| < 0.1`.
pub fn lake_bump(x: f64) -> f64 {
    if (x - 0.5).abs() < 0.1 {
        0.25 * (math::cos(math::PI * (x - 0.5) / 0.1) + 1.0)
    } else {
        0.0
    }
}

/// Parabolic bump `0.2 - 0.05 (x - 10)^2` on `|x - 10| < 2`.
pub fn transcritical_bump(x: f64) -> f64 {
    if (x - 10.0).abs() < 2.0 {
        0.2 - 0.05 * (x - 10.0) * (x - 10.0)
    } else {
        0.0
    }
}

/// Physical flux `(hv, (hv)^2 / h + g h^2 / 2)`.
pub fn swe_flux(h: f64, hv: f64, g: f64) -> Result<[f64; 2]> {
    if !(h > 0.0) {
        return Err(Error::DryState { cell: 0, h });
    }
    Ok([hv, hv * hv / h + 0.5 * g * h * h])
}

#[inline]
fn flux_unchecked(u: [f64; 2], g: f64) -> [f64; 2] {
    [u[1], u[1] * u[1] / u[0] + 0.5 * g * u[0] * u[0]]
}

#[inline]
fn wave_speed(u: [f64; 2], g: f64) -> f64 {
    (u[1] / u[0]).abs() + math::sqrt(g * u[0])
}

/// Largest `|v| / sqrt(g h)` over the cells.
pub fn froude_max(state: &Field, g: f64) -> f64 {
    state
        .as_slice()
        .chunks_exact(2)
        .map(|c| (c[1] / c[0]).abs() / math::sqrt(g * c[0]))
        .fold(0.0, f64::max)
}

/// Largest stable step `min(dx / 10, 0.9 dx / max(|v| + sqrt(g h)))`.
pub fn swe_stable_dt(params: &SweParams, state: &Field) -> f64 {
    let dx = params.grid.dx();
    let speed = state
        .as_slice()
        .chunks_exact(2)
        .map(|c| wave_speed([c[0], c[1]], params.g))
        .fold(0.0, f64::max);
    if speed > 0.0 {
        (dx / 10.0).min(0.9 * dx / speed)
    } else {
        dx / 10.0
    }
}

/// Interface fluxes `F_{-1/2} .. F_{N-1/2}` and cell sources of the
/// second-order Lax-Friedrichs scheme.
pub struct Discretization {
    pub fluxes: Vec<[f64; 2]>,
    pub sources: Vec<[f64; 2]>,
}

fn discretize(params: &SweParams, u: &Field) -> Result<Discretization> {
    u.check_shape(params.shape())?;
    let n = params.grid.n_cells();
    let g = params.g;
    let data = u.as_slice();
    for (cell, c) in data.chunks_exact(2).enumerate() {
        if !(c[0] > 0.0) {
            return Err(Error::DryState { cell, h: c[0] });
        }
    }
    // ext[k] holds cell k - 2
    let mut ext = Vec::with_capacity(n + 4);
    let cell = |i: usize| [data[2 * i], data[2 * i + 1]];
    let (left, right) = match params.boundary {
        Boundary::ReflectiveWalls => {
            let m = |c: [f64; 2]| [c[0], -c[1]];
            ([m(cell(1)), m(cell(0))], [m(cell(n - 1)), m(cell(n - 2))])
        }
        Boundary::FarField { h_far } => {
            let c_far = 2.0 * math::sqrt(g * h_far);
            // (w+, w-) = (v + 2c, v - 2c)
            let ghost = |wp: f64, wm: f64| {
                let c = 0.25 * (wp - wm);
                let h = c * c / g;
                [h, h * 0.5 * (wp + wm)]
            };
            let invariants = |c: [f64; 2]| {
                let v = c[1] / c[0];
                let s = 2.0 * math::sqrt(g * c[0]);
                (v + s, v - s)
            };
            let (_, wm) = invariants(cell(0));
            let (wp, _) = invariants(cell(n - 1));
            let l = ghost(c_far, wm);
            let r = ghost(wp, -c_far);
            ([l, l], [r, r])
        }
        Boundary::InflowOutflow { q_in, h_out } => {
            let l = [cell(0)[0], q_in];
            let r = [h_out, cell(n - 1)[1]];
            ([l, l], [r, r])
        }
    };
    ext.extend_from_slice(&left);
    ext.extend((0..n).map(cell));
    ext.extend_from_slice(&right);

    // limited slopes for cells -1 .. n
    let mut slope = vec![[0.0; 2]; n + 2];
    for (k, s) in slope.iter_mut().enumerate() {
        let e = k + 1;
        for c in 0..2 {
            s[c] = limited_slope(ext[e][c] - ext[e - 1][c], ext[e + 1][c] - ext[e][c]);
        }
    }

    let mut fluxes = Vec::with_capacity(n + 1);
    for f in 0..=n {
        // interface between cells f - 1 and f
        let (a, b) = (ext[f + 1], ext[f + 2]);
        let (sa, sb) = (slope[f], slope[f + 1]);
        let ul = [a[0] + 0.5 * sa[0], a[1] + 0.5 * sa[1]];
        let ur = [b[0] - 0.5 * sb[0], b[1] - 0.5 * sb[1]];
        if !(ul[0] > 0.0 && ur[0] > 0.0) {
            return Err(Error::DryState {
                cell: f.min(n - 1),
                h: ul[0].min(ur[0]),
            });
        }
        let speed = wave_speed(a, g).max(wave_speed(b, g));
        let fl = flux_unchecked(ul, g);
        let fr = flux_unchecked(ur, g);
        fluxes.push([
            0.5 * (fl[0] + fr[0]) - 0.5 * speed * (ur[0] - ul[0]),
            0.5 * (fl[1] + fr[1]) - 0.5 * speed * (ur[1] - ul[1]),
        ]);
    }

    let dx = params.grid.dx();
    let bottom = &params.topography;
    let sources = (0..n)
        .map(|i| {
            let bl = bottom[i.saturating_sub(1)];
            let br = bottom[(i + 1).min(n - 1)];
            [0.0, -g * data[2 * i] * (br - bl) / (2.0 * dx)]
        })
        .collect();
    Ok(Discretization { fluxes, sources })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Variant {
    Lf2,
    Relf,
    FlRelf(LimiterConfig),
    ForcedPhi(f64),
}

/// The standard scheme and its equilibrium-corrected variants.
pub struct SweOperator {
    params: SweParams,
    variant: Variant,
    equilibrium: Option<(Field, Discretization)>,
}

pub fn lf2_operator(params: SweParams) -> SweOperator {
    SweOperator {
        params,
        variant: Variant::Lf2,
        equilibrium: None,
    }
}

fn with_equilibrium(params: SweParams, eq_state: Field, variant: Variant) -> Result<SweOperator> {
    let d = discretize(&params, &eq_state)?;
    Ok(SweOperator {
        params,
        variant,
        equilibrium: Some((eq_state, d)),
    })
}

/// `-(F - F_eq)_{i+1/2} - (F - F_eq)_{i-1/2}) / dx + (R_i - R_eq_i)`.
pub fn relf_operator(params: SweParams, eq_state: Field) -> Result<SweOperator> {
    with_equilibrium(params, eq_state, Variant::Relf)
}

/// Equilibrium fluxes and source scaled by `phi(r_i)` in every cell.
pub fn fl_relf_operator(params: SweParams, eq_state: Field, alpha: f64) -> Result<SweOperator> {
    let config = LimiterConfig::new(alpha, LimiterConfig::default().epsilon)?;
    fl_relf_operator_with(params, eq_state, config)
}

pub fn fl_relf_operator_with(
    params: SweParams,
    eq_state: Field,
    config: LimiterConfig,
) -> Result<SweOperator> {
    with_equilibrium(params, eq_state, Variant::FlRelf(config))
}

/// FL-RELF with the limiter replaced by a constant, for consistency checks.
pub fn fl_relf_with_forced_phi(params: SweParams, eq_state: Field, phi: f64) -> Result<SweOperator> {
    with_equilibrium(params, eq_state, Variant::ForcedPhi(phi))
}

impl SweOperator {
    pub fn params(&self) -> &SweParams {
        &self.params
    }

    pub fn equilibrium(&self) -> Option<&Field> {
        self.equilibrium.as_ref().map(|(f, _)| f)
    }

    /// Interface fluxes and sources of the underlying scheme at `u`.
    pub fn discretize(&self, u: &Field) -> Result<Discretization> {
        discretize(&self.params, u)
    }

    /// Limiter values `phi_i` used by FL-RELF at `u` (ones for RELF, zeros for LF).
    pub fn limiter_values(&self, u: &Field) -> Result<Vec<f64>> {
        let d = discretize(&self.params, u)?;
        Ok(self.phis(&d))
    }

    fn phis(&self, d: &Discretization) -> Vec<f64> {
        let n = self.params.grid.n_cells();
        match (self.variant, &self.equilibrium) {
            (Variant::Lf2, _) | (_, None) => vec![0.0; n],
            (Variant::Relf, _) => vec![1.0; n],
            (Variant::ForcedPhi(p), _) => vec![p; n],
            (Variant::FlRelf(cfg), Some((_, e))) => (0..n)
                .map(|i| {
                    let (fp, fm) = (d.fluxes[i + 1], d.fluxes[i]);
                    let (ep, em) = (e.fluxes[i + 1], e.fluxes[i]);
                    let num = [fp[0] - fm[0], fp[1] - fm[1]];
                    let eq = [ep[0] - em[0], ep[1] - em[1]];
                    let norm = |f: [f64; 2]| f[0].abs() + f[1].abs();
                    let scale = norm(fp).max(norm(fm)) + norm(ep).max(norm(em)) + 1.0;
                    phi(indicator_system(num, eq, scale, &cfg), &cfg)
                })
                .collect(),
        }
    }
}

impl SemiDiscreteOperator for SweOperator {
    fn name(&self) -> &str {
        match self.variant {
            Variant::Lf2 => "swe-lf2",
            Variant::Relf => "swe-relf",
            Variant::FlRelf(_) | Variant::ForcedPhi(_) => "swe-fl-relf",
        }
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
        let d = discretize(&self.params, u)?;
        let n = self.params.grid.n_cells();
        let dx = self.params.grid.dx();
        let mut out = vec![0.0; 2 * n];
        match (&self.variant, &self.equilibrium) {
            (Variant::Lf2, _) | (_, None) => {
                for i in 0..n {
                    let (fp, fm, s) = (d.fluxes[i + 1], d.fluxes[i], d.sources[i]);
                    for c in 0..2 {
                        out[2 * i + c] = -(fp[c] - fm[c]) / dx + s[c];
                    }
                }
            }
            (Variant::Relf, Some((_, e))) => {
                for i in 0..n {
                    let (fp, fm, s) = (d.fluxes[i + 1], d.fluxes[i], d.sources[i]);
                    let (ep, em, se) = (e.fluxes[i + 1], e.fluxes[i], e.sources[i]);
                    for c in 0..2 {
                        out[2 * i + c] = -((fp[c] - ep[c]) - (fm[c] - em[c])) / dx + (s[c] - se[c]);
                    }
                }
            }
            (_, Some((_, e))) => {
                let phis = self.phis(&d);
                for i in 0..n {
                    let p = phis[i];
                    let (fp, fm, s) = (d.fluxes[i + 1], d.fluxes[i], d.sources[i]);
                    let (ep, em, se) = (e.fluxes[i + 1], e.fluxes[i], e.sources[i]);
                    for c in 0..2 {
                        out[2 * i + c] =
                            -((fp[c] - p * ep[c]) - (fm[c] - p * em[c])) / dx + (s[c] - p * se[c]);
                    }
                }
            }
        }
        Ok(Field::from_vec_unchecked(self.shape(), out))
    }
}

/// Lake at rest `(h, hv) = (1 - B, 0)`.
pub fn lake_at_rest_equilibrium(params: &SweParams) -> Result<Field> {
    if params.topography.iter().any(|&b| b >= 1.0) {
        return Err(Error::Domain("topography reaches the free surface"));
    }
    let data = params
        .topography
        .iter()
        .flat_map(|&b| [1.0 - b, 0.0])
        .collect();
    Field::from_vec(params.shape(), data)
}

/// Lake at rest with the surface raised by `eps` on `lo < x < hi`.
pub fn perturbed_lake(params: &SweParams, eps: f64, lo: f64, hi: f64) -> Result<Field> {
    let mut f = lake_at_rest_equilibrium(params)?;
    for i in 0..params.grid.n_cells() {
        let x = params.grid.center(i);
        if x > lo && x < hi {
            let h = f.get(i, 0);
            f.set(i, 0, h + eps);
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Subcritical,
    Supercritical,
}

impl Branch {
    fn label(self) -> &'static str {
        match self {
            Branch::Subcritical => "subcritical",
            Branch::Supercritical => "supercritical",
        }
    }
}

/// Specific energy `q^2 / (2 h^2) + g (h + B)`.
pub fn bernoulli(h: f64, q: f64, g: f64, b: f64) -> f64 {
    q * q / (2.0 * h * h) + g * (h + b)
}

/// Momentum function `q^2 / h + g h^2 / 2`, continuous across a stationary shock.
pub fn momentum_function(h: f64, q: f64, g: f64) -> f64 {
    q * q / h + 0.5 * g * h * h
}

/// Critical depth `(q^2 / g)^(1/3)`.
pub fn critical_depth(q: f64, g: f64) -> f64 {
    math::cbrt(q * q / g)
}

/// Root of `bernoulli(h) = energy` on the requested branch. Returns the
/// critical depth when the energy sits at (or rounds below) the minimum.
pub fn bernoulli_depth(energy: f64, q: f64, g: f64, b: f64, branch: Branch) -> Option<f64> {
    let hc = critical_depth(q, g);
    let f = |h: f64| bernoulli(h, q, g, b) - energy;
    if f(hc) >= 0.0 {
        return if f(hc) <= 1e-13 * energy.abs() {
            Some(hc)
        } else {
            None
        };
    }
    // f is convex with its minimum at hc, so Newton started on the outer
    // side of a root converges monotonically
    let mut h = match branch {
        Branch::Subcritical => (energy / g - b).max(2.0 * hc),
        Branch::Supercritical => 0.5 * hc.min(q.abs() / math::sqrt(2.0 * energy.abs()).max(1e-300)),
    };
    for _ in 0..200 {
        let fh = f(h);
        let d = -q * q / (h * h * h) + g;
        let next = h - fh / d;
        if !(next.is_finite() && next > 0.0) {
            return None;
        }
        // near the root the residual is rounding noise and the iterates may
        // cycle between neighbouring values; keep the better of the two
        if (next - h).abs() <= 1e-13 * next {
            return Some(if f(next).abs() < fh.abs() { next } else { h });
        }
        h = next;
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranscriticalEquilibrium {
    pub state: Field,
    pub critical_depth: f64,
    /// Energy of the branches upstream of the shock.
    pub energy_upstream: f64,
    /// Energy of the subcritical branch downstream of the shock.
    pub energy_downstream: f64,
    pub x_shock: f64,
    pub h_before_shock: f64,
    pub h_after_shock: f64,
    /// Branch sampled at each cell center.
    pub branches: Vec<Branch>,
    /// Cell straddling the shock. Its value is the cell average of the two
    /// branch profiles rather than a point value.
    pub shock_cell: Option<usize>,
}

/// Steady transcritical flow over the parabolic bump with a hydraulic jump
/// in its lee.
///
/// Upstream of the crest (`x = 10`, `B = 0.2`) the flow is subcritical with
/// the energy fixed by critical depth at the crest; past the crest it follows
/// the supercritical branch of that energy until the shock, after which it
/// is subcritical with the energy set by the outflow depth. The shock sits
/// where both sides carry the same momentum function.
pub fn transcritical_equilibrium(
    params: &SweParams,
    q: f64,
    h_out: f64,
) -> Result<TranscriticalEquilibrium> {
    let g = params.g;
    if !(q > 0.0) {
        return Err(Error::InvalidParameter {
            name: "q",
            reason: "must be positive",
        });
    }
    let hc = critical_depth(q, g);
    if !(h_out > hc) {
        return Err(Error::InvalidParameter {
            name: "h_out",
            reason: "must exceed the critical depth",
        });
    }
    let crest_x = 10.0;
    let crest_b = transcritical_bump(crest_x);
    let e_up = bernoulli(hc, q, g, crest_b);
    let e_down = bernoulli(h_out, q, g, 0.0);

    let jump = |x: f64| -> Option<f64> {
        let b = transcritical_bump(x);
        let before = bernoulli_depth(e_up, q, g, b, Branch::Supercritical)?;
        let after = bernoulli_depth(e_down, q, g, b, Branch::Subcritical)?;
        Some(momentum_function(before, q, g) - momentum_function(after, q, g))
    };
    let grid = params.grid;
    let j_hi = jump(grid.x_max()).ok_or(Error::NoShock("branches undefined at the outflow"))?;
    // close behind the crest the downstream energy may be too low for a
    // subcritical depth; move the bracket to where both branches exist
    let mut lo = crest_x + 1e-9;
    if jump(lo).is_none() {
        let (mut a, mut b) = (lo, grid.x_max());
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if jump(mid).is_some() {
                b = mid;
            } else {
                a = mid;
            }
        }
        lo = b;
    }
    let mut hi = grid.x_max();
    let j_lo = jump(lo).ok_or(Error::NoShock("branches undefined behind the crest"))?;
    if j_lo.signum() == j_hi.signum() {
        return Err(Error::NoShock("momentum jump does not change sign in the lee"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let jm = jump(mid).ok_or(Error::NoShock("branches undefined inside the bracket"))?;
        if jm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if jm.signum() == j_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_shock = 0.5 * (lo + hi);
    let b_s = transcritical_bump(x_shock);
    let h_before = bernoulli_depth(e_up, q, g, b_s, Branch::Supercritical)
        .ok_or(Error::NoShock("supercritical depth undefined at the shock"))?;
    let h_after = bernoulli_depth(e_down, q, g, b_s, Branch::Subcritical)
        .ok_or(Error::NoShock("subcritical depth undefined at the shock"))?;

    let n = grid.n_cells();
    let mut data = Vec::with_capacity(2 * n);
    let mut branches = Vec::with_capacity(n);
    for i in 0..n {
        let x = grid.center(i);
        let b = params.topography[i];
        let (energy, branch) = if x < crest_x {
            (e_up, Branch::Subcritical)
        } else if x < x_shock {
            (e_up, Branch::Supercritical)
        } else {
            (e_down, Branch::Subcritical)
        };
        let h = bernoulli_depth(energy, q, g, b, branch).ok_or(Error::NewtonFailure {
            cell: i,
            branch: branch.label(),
        })?;
        data.push(h);
        data.push(q);
        branches.push(branch);
    }
    let dx = grid.dx();
    let shock_cell = (0..n).find(|&i| {
        let c = grid.center(i);
        c - 0.5 * dx < x_shock && x_shock < c + 0.5 * dx
    });
    if let Some(k) = shock_cell {
        let c = grid.center(k);
        let before = branch_integral(c - 0.5 * dx, x_shock, e_up, q, g, Branch::Supercritical, k)?;
        let after = branch_integral(x_shock, c + 0.5 * dx, e_down, q, g, Branch::Subcritical, k)?;
        data[2 * k] = (before + after) / dx;
    }
    Ok(TranscriticalEquilibrium {
        state: Field::from_vec(params.shape(), data)?,
        critical_depth: hc,
        energy_upstream: e_up,
        energy_downstream: e_down,
        x_shock,
        h_before_shock: h_before,
        h_after_shock: h_after,
        branches,
        shock_cell,
    })
}

/// Three-point Gauss integral of a Bernoulli branch depth over `[a, b]`.
fn branch_integral(
    a: f64,
    b: f64,
    energy: f64,
    q: f64,
    g: f64,
    branch: Branch,
    cell: usize,
) -> Result<f64> {
    const NODES: [(f64, f64); 3] = [
        (-0.774_596_669_241_483_4, 5.0 / 9.0),
        (0.0, 8.0 / 9.0),
        (0.774_596_669_241_483_4, 5.0 / 9.0),
    ];
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = 0.0;
    for (z, w) in NODES {
        let x = mid + half * z;
        let h = bernoulli_depth(energy, q, g, transcritical_bump(x), branch).ok_or(
            Error::NewtonFailure {
                cell,
                branch: branch.label(),
            },
        )?;
        sum += w * h;
    }
    Ok(sum * half)
}

/// Still water `h = h0 - B` used to start the transcritical run.
pub fn still_water(params: &SweParams, level: f64) -> Result<Field> {
    let data = params
        .topography
        .iter()
        .flat_map(|&b| [level - b, 0.0])
        .collect();
    Field::from_vec(params.shape(), data)
}
