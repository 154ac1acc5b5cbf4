//! Entropy functionals, error norms, total variation and rate fitting.
//!
//! Entropies are reported as magnitudes so that every decay statement reads
//! "goes to zero from above". Log-based entropies skip cells where the
//! numerical solution is negative and report how many were skipped.

use alloc::format;

use crate::error::{Error, Result};
use crate::math;
use crate::mesh::Field;

/// One row of a diagnostics time series. `None` marks a quantity the model
/// does not define.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub entropy: Option<f64>,
    pub l1_error: f64,
    pub linf_error: f64,
    pub tv: Option<f64>,
    pub mass: f64,
    pub momentum: Option<f64>,
    pub energy: Option<f64>,
    pub neg_cells: Option<usize>,
    pub froude_max: Option<f64>,
}

/// A log-entropy value together with the number of excluded negative cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEntropy {
    pub value: f64,
    pub neg_cells: usize,
}

fn log_entropy(u: &Field, u_eq: &Field, cell_volume: f64) -> Result<LogEntropy> {
    u.check_shape(u_eq.shape())?;
    let mut sum = 0.0;
    let mut neg_cells = 0;
    for (cell, (&a, &b)) in u.as_slice().iter().zip(u_eq.as_slice()).enumerate() {
        if a < 0.0 {
            neg_cells += 1;
            continue;
        }
        if a == 0.0 {
            continue;
        }
        if !(b > 0.0) {
            return Err(Error::NonAdmissible(format!(
                "equilibrium is {b} at cell {cell} where the solution is positive"
            )));
        }
        if a != b {
            sum += a * math::ln(a / b);
        }
    }
    Ok(LogEntropy {
        value: (sum * cell_volume).abs(),
        neg_cells,
    })
}

/// `|int u log(u / u_eq)|` by midpoint quadrature.
pub fn relative_entropy_fp(u: &Field, u_eq: &Field, cell_volume: f64) -> Result<LogEntropy> {
    log_entropy(u, u_eq, cell_volume)
}

/// `|int f log(f / M)|` over the velocity plane.
pub fn relative_entropy_boltzmann(f: &Field, m: &Field, cell_area: f64) -> Result<LogEntropy> {
    log_entropy(f, m, cell_area)
}

/// `|int (u - u_eq) + 2/(m-1) (u^m - u_eq^m)|`, with negative values clamped
/// to zero inside the power.
pub fn relative_entropy_pme(u: &Field, u_eq: &Field, cell_area: f64, m: f64) -> Result<f64> {
    if !(m > 1.0) {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: "must be greater than one",
        });
    }
    u.check_shape(u_eq.shape())?;
    let c = 2.0 / (m - 1.0);
    let sum: f64 = u
        .as_slice()
        .iter()
        .zip(u_eq.as_slice())
        .map(|(&a, &b)| {
            if a == b {
                0.0
            } else {
                (a - b) + c * (math::powf(a.max(0.0), m) - math::powf(b.max(0.0), m))
            }
        })
        .sum();
    Ok((sum * cell_area).abs())
}

/// Volume-weighted `L1` error and the maximum pointwise error.
pub fn lp_errors(u: &Field, u_ref: &Field, cell_volume: f64) -> Result<(f64, f64)> {
    u.check_shape(u_ref.shape())?;
    let mut l1 = 0.0;
    let mut linf: f64 = 0.0;
    for (&a, &b) in u.as_slice().iter().zip(u_ref.as_slice()) {
        let d = (a - b).abs();
        l1 += d;
        linf = linf.max(d);
    }
    Ok((l1 * cell_volume, linf))
}

/// `sum |u_{i+1} - u_i|` over a sequence.
pub fn total_variation(u: &[f64]) -> f64 {
    u.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Decay rate `lambda` of a least-squares fit `value ~ C exp(-lambda t)` over
/// the samples with `t` inside `window` (inclusive).
pub fn fit_exponential_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let mut n = 0.0;
    let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for &(t, v) in series.iter().filter(|(t, _)| *t >= lo && *t <= hi) {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonAdmissible(format!(
                "value {v} at t = {t} cannot be log-fitted"
            )));
        }
        let y = math::ln(v);
        n += 1.0;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    if n < 3.0 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: "needs at least three samples",
        });
    }
    let denom = n * stt - st * st;
    if !(denom > 0.0) {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: "samples must span more than one time",
        });
    }
    Ok(-(n * sty - st * sy) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fokker_planck::{maxwellian, FpParams};
    use crate::mesh::{Grid1D, Shape};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn field(v: Vec<f64>) -> Field {
        Field::from_vec(Shape::new_1d(v.len(), 1), v).unwrap()
    }

    #[test]
    fn entropies_vanish_at_equilibrium() {
        let g = Grid1D::new(100, -5.0, 5.0).unwrap();
        let m = maxwellian(&FpParams::new(0.3, 1.2, g).unwrap(), 1.0).unwrap();
        assert_eq!(relative_entropy_fp(&m, &m, g.dx()).unwrap().value, 0.0);
        assert_eq!(relative_entropy_boltzmann(&m, &m, 0.1).unwrap().value, 0.0);
        assert_eq!(relative_entropy_pme(&m, &m, g.dx(), 5.0).unwrap(), 0.0);
    }

    #[test]
    fn doubled_state_entropy() {
        let g = Grid1D::new(100, -5.0, 5.0).unwrap();
        let m = maxwellian(&FpParams::new(0.0, 1.0, g).unwrap(), 1.0).unwrap();
        let e = relative_entropy_fp(&m.scale(2.0), &m, g.dx()).unwrap();
        let mass = m.sum() * g.dx();
        assert_relative_eq!(e.value, 2.0 * core::f64::consts::LN_2 * mass, max_relative = 1e-13);
        assert_eq!(e.neg_cells, 0);
    }

    #[test]
    fn two_gaussians_against_refined_quadrature() {
        let u_in = |x: f64| (-5.0 * (x + 2.5) * (x + 2.5)).exp() + (-5.0 * (x - 2.5) * (x - 2.5)).exp();
        let mx = |x: f64| (-x * x / 2.0).exp() / (2.0 * core::f64::consts::PI).sqrt();
        let g = Grid1D::new(100, -5.0, 5.0).unwrap();
        let e = relative_entropy_fp(&g.project(u_in).unwrap(), &g.project(mx).unwrap(), g.dx())
            .unwrap()
            .value;
        // Simpson's rule on 20000 panels
        let n = 20_000;
        let h = 10.0 / n as f64;
        let integrand = |x: f64| {
            let a = u_in(x);
            a * (a / mx(x)).ln()
        };
        let mut s = integrand(-5.0) + integrand(5.0);
        for k in 1..n {
            let x = -5.0 + k as f64 * h;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * integrand(x);
        }
        let reference = (s * h / 3.0).abs();
        assert!(e > 0.0 && e.is_finite());
        assert_relative_eq!(e, reference, max_relative = 1e-6);
    }

    #[test]
    fn negative_cells_are_excluded_and_counted() {
        let m = field(vec![1.0, 1.0, 1.0]);
        let f = field(vec![2.0, -0.5, 1.0]);
        let e = relative_entropy_boltzmann(&f, &m, 1.0).unwrap();
        assert_eq!(e.neg_cells, 1);
        assert_relative_eq!(e.value, 2.0 * core::f64::consts::LN_2, max_relative = 1e-15);
    }

    #[test]
    fn log_entropy_rejects_vanishing_equilibrium() {
        let m = field(vec![1.0, 0.0]);
        let f = field(vec![1.0, 0.5]);
        assert!(relative_entropy_fp(&f, &m, 1.0).is_err());
        // a zero solution cell is fine wherever the equilibrium vanishes
        let f = field(vec![1.0, 0.0]);
        assert_eq!(relative_entropy_fp(&f, &m, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn pme_entropy_of_empty_state() {
        let u_eq = field(vec![0.5, 1.0, 0.25, 0.0]);
        let zero = field(vec![0.0; 4]);
        let mass: f64 = u_eq.as_slice().iter().sum::<f64>() * 0.2;
        let int_m: f64 = u_eq.as_slice().iter().map(|v| v.powi(5)).sum::<f64>() * 0.2;
        let e = relative_entropy_pme(&zero, &u_eq, 0.2, 5.0).unwrap();
        assert_relative_eq!(e, mass + 0.5 * int_m, max_relative = 1e-15);

        // doubling: (2u - u) + 1/2 (32 u^5 - u^5) summed
        let e = relative_entropy_pme(&u_eq.scale(2.0), &u_eq, 0.2, 5.0).unwrap();
        assert_relative_eq!(e, mass + 15.5 * int_m, max_relative = 1e-14);
        assert!(relative_entropy_pme(&zero, &u_eq, 0.2, 1.0).is_err());
    }

    #[test]
    fn lp_error_cases() {
        let a = field(vec![1.0, 2.0, 3.0]);
        assert_eq!(lp_errors(&a, &a, 0.5).unwrap(), (0.0, 0.0));
        let b = field(vec![1.25, 2.25, 3.25]);
        assert_eq!(lp_errors(&a, &b, 0.5).unwrap(), (3.0 * 0.5 * 0.25, 0.25));
        let c = Field::zeros(Shape::new_1d(2, 1));
        assert!(lp_errors(&a, &c, 1.0).is_err());
    }

    #[test]
    fn lp_errors_match_second_implementation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(2..200);
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let vol = rng.gen_range(0.01..1.0);
            let (l1, linf) = lp_errors(&field(a.clone()), &field(b.clone()), vol).unwrap();
            let mut diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - y).abs() * vol).collect();
            diffs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let l1_ref: f64 = diffs.iter().sum();
            let linf_ref = diffs.last().unwrap() / vol;
            assert_relative_eq!(l1, l1_ref, max_relative = 1e-13);
            assert_relative_eq!(linf, linf_ref, max_relative = 1e-15);
        }
    }

    #[test]
    fn exponential_fits() {
        let s: Vec<(f64, f64)> = (0..=40).map(|k| {
            let t = k as f64 * 0.1;
            (t, (-2.0 * t).exp())
        }).collect();
        assert_relative_eq!(fit_exponential_rate(&s, (0.0, 4.0)).unwrap(), 2.0, max_relative = 1e-12);
        let s: Vec<(f64, f64)> = (0..=40).map(|k| {
            let t = k as f64 * 0.1;
            (t, 3.0 * (-0.5 * t).exp())
        }).collect();
        assert_relative_eq!(fit_exponential_rate(&s, (1.0, 4.0)).unwrap(), 0.5, max_relative = 1e-12);
        let scaled: Vec<(f64, f64)> = s.iter().map(|&(t, v)| (t, 7.5 * v)).collect();
        assert_relative_eq!(
            fit_exponential_rate(&scaled, (1.0, 4.0)).unwrap(),
            fit_exponential_rate(&s, (1.0, 4.0)).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn noisy_exponential_fit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let s: Vec<(f64, f64)> = (0..40)
                .map(|k| {
                    let t = 1.0 + 4.0 * k as f64 / 39.0;
                    (t, (-2.0 * t).exp() * (1.0 + rng.gen_range(-0.01..0.01)))
                })
                .collect();
            let lambda = fit_exponential_rate(&s, (1.0, 5.0)).unwrap();
            assert!((lambda - 2.0).abs() < 0.05, "{lambda}");
        }
    }

    #[test]
    fn fit_rejects_bad_input() {
        let s = [(0.0, 1.0), (1.0, 0.0), (2.0, 0.5)];
        assert!(fit_exponential_rate(&s, (0.0, 2.0)).is_err());
        let s = [(0.0, 1.0), (1.0, 0.5)];
        assert!(fit_exponential_rate(&s, (0.0, 2.0)).is_err());
    }

    #[test]
    fn total_variation_of_sequences() {
        assert_eq!(total_variation(&[1.0, 3.0, 2.0, 2.0, 5.0]), 6.0);
        assert_eq!(total_variation(&[4.0]), 0.0);
    }

    proptest::proptest! {
        #[test]
        fn lp_errors_form_a_metric(
            a in proptest::collection::vec(-5.0..5.0f64, 8),
            b in proptest::collection::vec(-5.0..5.0f64, 8),
            c in proptest::collection::vec(-5.0..5.0f64, 8),
        ) {
            let (fa, fb, fc) = (field(a), field(b), field(c));
            let ab = lp_errors(&fa, &fb, 0.3).unwrap();
            let ba = lp_errors(&fb, &fa, 0.3).unwrap();
            let bc = lp_errors(&fb, &fc, 0.3).unwrap();
            let ac = lp_errors(&fa, &fc, 0.3).unwrap();
            proptest::prop_assert!((ab.0 - ba.0).abs() <= 1e-14 && ab.1 == ba.1);
            proptest::prop_assert!(ac.0 <= ab.0 + bc.0 + 1e-14);
            proptest::prop_assert!(ac.1 <= ab.1 + bc.1 + 1e-14);
        }
    }
}
