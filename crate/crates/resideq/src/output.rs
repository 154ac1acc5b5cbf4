//! Diagnostics CSV, solution snapshots and the TVD report.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use resideq_core::advection::TvdReport;
use resideq_core::diagnostics::DiagnosticsRecord;
use resideq_core::Field;

use crate::runner::{Coords, RunError, Snapshot, Trajectory};

pub const DIAGNOSTICS_HEADER: [&str; 10] = [
    "time",
    "entropy",
    "l1_error",
    "linf_error",
    "tv",
    "mass",
    "momentum",
    "energy",
    "neg_cells",
    "froude_max",
];

/// 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

pub fn diagnostics_row(r: &DiagnosticsRecord) -> [String; 10] {
    [
        fmt_real(r.t),
        opt(r.entropy),
        fmt_real(r.l1_error),
        fmt_real(r.linf_error),
        opt(r.tv),
        fmt_real(r.mass),
        opt(r.momentum),
        opt(r.energy),
        r.neg_cells.map(|n| n.to_string()).unwrap_or_default(),
        opt(r.froude_max),
    ]
}

pub fn write_diagnostics<W: Write>(w: W, records: &[DiagnosticsRecord]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(DIAGNOSTICS_HEADER)?;
    for r in records {
        out.write_record(diagnostics_row(r))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_tvd<W: Write>(w: W, report: &TvdReport) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["case", "step", "tv", "increase", "checked"])?;
    for r in &report.records {
        out.write_record([
            r.case.clone(),
            r.step.to_string(),
            fmt_real(r.tv),
            fmt_real(r.increase),
            r.checked.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `solution_t<t>.dat` with `t` in shortest round-trip form.
pub fn snapshot_name(t: f64) -> String {
    format!("solution_t{t}.dat")
}

/// Text body of a snapshot: `x value` or `x h hv` per line in 1D, one
/// `ny x nx` block per component in 2D (blocks separated by a blank line).
pub fn format_snapshot(coords: &Coords, field: &Field) -> String {
    let comps = field.shape().components;
    let mut s = String::new();
    match coords {
        Coords::Line(x) => {
            for (i, xi) in x.iter().enumerate() {
                s.push_str(&fmt_real(*xi));
                for c in 0..comps {
                    s.push(' ');
                    s.push_str(&fmt_real(field.get(i, c)));
                }
                s.push('\n');
            }
        }
        Coords::Plane { x, y } => {
            for c in 0..comps {
                if c > 0 {
                    s.push('\n');
                }
                for j in 0..y.len() {
                    let row: Vec<String> = (0..x.len()).map(|i| fmt_real(field.get(j * x.len() + i, c))).collect();
                    let _ = writeln!(s, "{}", row.join(" "));
                }
            }
        }
    }
    s
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<fs::File, RunError> {
    fs::File::create(path).map_err(io_err(path))
}

pub fn prepare_dir(dir: &Path) -> Result<(), RunError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Writes `diagnostics.csv` and one file per snapshot; returns the paths.
pub fn write_trajectory(dir: &Path, tr: &Trajectory) -> Result<Vec<PathBuf>, RunError> {
    prepare_dir(dir)?;
    let csv_path = dir.join("diagnostics.csv");
    write_diagnostics(create(&csv_path)?, &tr.records).map_err(|source| RunError::Csv {
        path: csv_path.clone(),
        source,
    })?;
    let mut written = vec![csv_path];
    for Snapshot { t, field } in &tr.snapshots {
        let path = dir.join(snapshot_name(*t));
        create(&path)?
            .write_all(format_snapshot(&tr.coords, field).as_bytes())
            .map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_tvd_report(dir: &Path, report: &TvdReport) -> Result<PathBuf, RunError> {
    prepare_dir(dir)?;
    let path = dir.join("tvd.csv");
    write_tvd(create(&path)?, report).map_err(|source| RunError::Csv {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use resideq_core::Shape;

    #[test]
    fn empty_columns_for_undefined_quantities() {
        let r = DiagnosticsRecord {
            t: 0.5,
            l1_error: 1e-3,
            mass: 1.0,
            tv: Some(2.0),
            ..Default::default()
        };
        let mut buf = Vec::new();
        write_diagnostics(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), DIAGNOSTICS_HEADER.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "5.0000000000000000e-1,,1.0000000000000000e-3,0.0000000000000000e0,2.0000000000000000e0,1.0000000000000000e0,,,,"
        );
    }

    #[test]
    fn reals_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn snapshot_layouts() {
        assert_eq!(snapshot_name(0.5), "solution_t0.5.dat");
        assert_eq!(snapshot_name(10.0), "solution_t10.dat");

        let f = Field::from_vec(Shape::new_1d(2, 2), vec![1.0, 0.0, 2.0, 0.5]).unwrap();
        let s = format_snapshot(&Coords::Line(vec![0.25, 0.75]), &f);
        let rows: Vec<Vec<f64>> = s
            .lines()
            .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows, vec![vec![0.25, 1.0, 0.0], vec![0.75, 2.0, 0.5]]);

        let g = Field::from_vec(Shape::new_2d(3, 2, 1), (0..6).map(f64::from).collect()).unwrap();
        let s = format_snapshot(
            &Coords::Plane {
                x: vec![0.0, 1.0, 2.0],
                y: vec![0.0, 1.0],
            },
            &g,
        );
        let rows: Vec<Vec<f64>> = s
            .lines()
            .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows, vec![vec![0.0, 1.0, 2.0], vec![3.0, 4.0, 5.0]]);
    }
}
