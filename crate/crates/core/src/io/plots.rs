use std::path::{Path, PathBuf};

use crate::error::IoError;
use crate::io::trajdir::read_series;

pub const PLOT_DIR: &str = "plots";

fn column(header: &[String], name: &str) -> Option<usize> {
    header.iter().position(|h| h == name)
}

fn fmt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn write(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), IoError> {
    let map = |e: csv::Error| IoError::Csv(e);
    let mut w = csv::Writer::from_path(path).map_err(map)?;
    w.write_record(header).map_err(map)?;
    for r in rows {
        w.write_record(r).map_err(map)?;
    }
    w.flush().map_err(|e| IoError::file(path, e))
}

/// Writes `plots/radius.csv` (equivalent radius `sqrt(area / pi)` per
/// grain), `plots/mass.csv` and `plots/residual.csv` from `series.csv`.
pub fn export_plots(dir: &Path) -> Result<Vec<PathBuf>, IoError> {
    let (header, rows) = read_series(dir)?;
    let missing = |name: &str| IoError::Snapshot {
        path: dir.join(crate::io::trajdir::SERIES_FILE),
        message: format!("missing column `{name}`"),
    };
    let t = column(&header, "t").ok_or_else(|| missing("t"))?;
    let areas: Vec<(usize, String)> = header
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.strip_prefix("area_").map(|l| (i, l.to_string())))
        .collect();
    let out = dir.join(PLOT_DIR);
    std::fs::create_dir_all(&out).map_err(|e| IoError::file(&out, e))?;

    let mut rh = vec!["t".to_string()];
    rh.extend(areas.iter().map(|(_, l)| format!("radius_{l}")));
    let radius: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![fmt(r[t])];
            row.extend(
                areas
                    .iter()
                    .map(|(i, _)| fmt(r[*i].map(|a| (a.max(0.0) / std::f64::consts::PI).sqrt()))),
            );
            row
        })
        .collect();

    let pick = |names: &[&str]| -> Result<(Vec<String>, Vec<Vec<String>>), IoError> {
        let idx = names
            .iter()
            .map(|n| column(&header, n).ok_or_else(|| missing(n)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut h = vec!["t".to_string()];
        h.extend(names.iter().map(|s| s.to_string()));
        let body = rows
            .iter()
            .map(|r| {
                let mut row = vec![fmt(r[t])];
                row.extend(idx.iter().map(|&i| fmt(r[i])));
                row
            })
            .collect();
        Ok((h, body))
    };
    let (mh, mass) = pick(&["total_mass", "bounded_mass"])?;
    let (sh, residual) = pick(&["volume_residual", "mass_drop"])?;

    let files = [
        ("radius.csv", rh, radius),
        ("mass.csv", mh, mass),
        ("residual.csv", sh, residual),
    ];
    let mut written = Vec::new();
    for (name, h, body) in files {
        let p = out.join(name);
        write(&p, &h, &body)?;
        written.push(p);
    }
    Ok(written)
}
