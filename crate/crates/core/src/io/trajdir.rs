use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::geometry::{signed_areas, total_mass, Label};
use crate::io::snapshot::{read_snapshot, write_snapshot};
use crate::kernels::WeightOmega;
use crate::stepper::{
    EpochRecord, ErrorLedger, FlowState, Frame, Observer, RunSummary, Termination, Trajectory,
};

pub const CONFIG_FILE: &str = "config.copy";
pub const SERIES_FILE: &str = "series.csv";
pub const DEFORMATIONS_FILE: &str = "deformations.csv";
pub const EPOCHS_FILE: &str = "epochs.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
pub const REPORT_FILE: &str = "report.txt";
pub const SNAPSHOT_DIR: &str = "snapshots";

pub fn snapshot_path(dir: &Path, k: usize) -> PathBuf {
    dir.join(SNAPSHOT_DIR).join(format!("{k:06}.snap"))
}

fn csv_err(path: &Path, e: csv::Error) -> IoError {
    if matches!(e.kind(), csv::ErrorKind::Io(_)) {
        if let csv::ErrorKind::Io(io) = e.into_kind() {
            return IoError::file(path, io);
        }
        unreachable!()
    }
    IoError::Csv(e)
}

/// Streams a run into a trajectory directory.
pub struct TrajectoryWriter {
    dir: PathBuf,
    weight: WeightOmega,
    series: csv::Writer<File>,
    deformations: csv::Writer<File>,
    epochs: BufWriter<File>,
    labels: Vec<Label>,
    area0: Vec<f64>,
    flux: Vec<f64>,
}

impl TrajectoryWriter {
    /// Creates `dir` (which must be empty or absent) and writes the config
    /// copy. `n_labels` counts the exterior grain.
    pub fn create(
        dir: &Path,
        config_text: &str,
        n_labels: u32,
        weight: WeightOmega,
    ) -> Result<Self, IoError> {
        if dir.exists()
            && fs::read_dir(dir)
                .map_err(|e| IoError::file(dir, e))?
                .next()
                .is_some()
        {
            return Err(IoError::file(
                dir,
                std::io::Error::new(
                    std::io::ErrorKind::AlreadyExists,
                    "output directory is not empty",
                ),
            ));
        }
        let snaps = dir.join(SNAPSHOT_DIR);
        fs::create_dir_all(&snaps).map_err(|e| IoError::file(&snaps, e))?;
        let cfg = dir.join(CONFIG_FILE);
        fs::write(&cfg, config_text).map_err(|e| IoError::file(&cfg, e))?;
        let open = |name: &str| -> Result<File, IoError> {
            let p = dir.join(name);
            File::create(&p).map_err(|e| IoError::file(&p, e))
        };
        let labels: Vec<Label> = (1..n_labels).map(Label).collect();
        let mut series = csv::Writer::from_writer(open(SERIES_FILE)?);
        let mut header = vec!["t".to_string(), "total_mass".to_string()];
        header.extend(labels.iter().map(|l| format!("area_{}", l.0)));
        header.extend(
            [
                "max_h",
                "mass_drop",
                "volume_residual",
                "k",
                "dt",
                "bounded_mass",
                "moves",
                "max_grad_h",
                "curvature_energy",
            ]
            .map(String::from),
        );
        series
            .write_record(&header)
            .map_err(|e| csv_err(&dir.join(SERIES_FILE), e))?;
        let mut deformations = csv::Writer::from_writer(open(DEFORMATIONS_FILE)?);
        deformations
            .write_record([
                "epoch",
                "t",
                "kind",
                "anchor",
                "variant",
                "drop",
                "displacement",
                "max_volume_delta",
                "volume_budget",
                "mass_in_support_before",
                "mass_in_support_after",
                "admissible",
                "flagged",
            ])
            .map_err(|e| csv_err(&dir.join(DEFORMATIONS_FILE), e))?;
        let epochs = BufWriter::new(open(EPOCHS_FILE)?);
        let n = labels.len();
        Ok(Self {
            dir: dir.to_path_buf(),
            weight,
            series,
            deformations,
            epochs,
            labels,
            area0: vec![0.0; n],
            flux: vec![0.0; n],
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn residual(&self, areas: &[f64]) -> f64 {
        areas
            .iter()
            .zip(&self.area0)
            .zip(&self.flux)
            .map(|((a, a0), f)| (a - a0 - f).abs())
            .sum()
    }

    /// Flushes all streams and writes the run summary.
    pub fn finish<S: Serialize>(mut self, summary: &S) -> Result<(), IoError> {
        self.flush()?;
        let p = self.dir.join(SUMMARY_FILE);
        let text = serde_json::to_string_pretty(summary).expect("summary serializes");
        fs::write(&p, text + "\n").map_err(|e| IoError::file(&p, e))
    }

    fn flush(&mut self) -> Result<(), IoError> {
        self.series
            .flush()
            .map_err(|e| IoError::file(&self.dir.join(SERIES_FILE), e))?;
        self.deformations
            .flush()
            .map_err(|e| IoError::file(&self.dir.join(DEFORMATIONS_FILE), e))?;
        self.epochs
            .flush()
            .map_err(|e| IoError::file(&self.dir.join(EPOCHS_FILE), e))
    }
}

fn io_of(e: IoError) -> std::io::Error {
    match e {
        IoError::File { source, .. } => source,
        other => std::io::Error::other(other.to_string()),
    }
}

fn row_io(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e.to_string())
}

impl Observer for TrajectoryWriter {
    fn frame(&mut self, frame: &Frame) -> std::io::Result<()> {
        write_snapshot(&snapshot_path(&self.dir, frame.k), frame).map_err(io_of)?;
        if frame.k == 0 {
            let areas = signed_areas(&frame.net);
            self.area0 = self
                .labels
                .iter()
                .map(|l| areas.iter().find(|a| a.0 == *l).map_or(0.0, |a| a.1))
                .collect();
            let mut row = vec![
                frame.t.to_string(),
                total_mass(&frame.net, &self.weight).to_string(),
            ];
            row.extend(self.area0.iter().map(|a| a.to_string()));
            let bounded = crate::stepper::bounded_mass(&frame.net);
            row.extend(
                ["", "0", "0", "0", "", &bounded.to_string(), "0", "", ""].map(String::from),
            );
            self.series.write_record(&row).map_err(row_io)?;
        }
        Ok(())
    }

    fn epoch(&mut self, rec: &EpochRecord) -> std::io::Result<()> {
        let mut areas = vec![0.0; self.labels.len()];
        for g in &rec.grains {
            if let Some(i) = self.labels.iter().position(|l| *l == g.label) {
                areas[i] = g.area;
                self.flux[i] += g.flux;
            }
        }
        let mut row = vec![rec.t.to_string(), rec.mass_after.to_string()];
        row.extend(areas.iter().map(|a| a.to_string()));
        row.extend([
            rec.max_h.to_string(),
            rec.drop.to_string(),
            self.residual(&areas).to_string(),
            rec.k.to_string(),
            rec.dt.to_string(),
            rec.bounded_mass.to_string(),
            rec.moves.len().to_string(),
            rec.max_grad_h.to_string(),
            rec.curvature_energy.to_string(),
        ]);
        self.series.write_record(&row).map_err(row_io)?;
        for m in &rec.moves {
            let r = &m.report;
            self.deformations
                .serialize((
                    rec.k,
                    rec.t,
                    serde_json::to_value(m.kind)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default(),
                    m.anchor,
                    m.variant,
                    m.drop,
                    r.displacement,
                    r.max_volume_delta,
                    r.volume_budget,
                    r.mass_in_support_before,
                    r.mass_in_support_after,
                    r.admissible(),
                    false,
                ))
                .map_err(row_io)?;
        }
        for s in &rec.surgeries {
            let r = &s.report;
            self.deformations
                .serialize((
                    rec.k,
                    rec.t,
                    "surgery",
                    s.label.0 as usize,
                    0usize,
                    r.mass_drop,
                    r.displacement,
                    r.max_volume_delta,
                    r.volume_budget,
                    r.mass_in_support_before,
                    r.mass_in_support_after,
                    r.admissible(),
                    s.flagged,
                ))
                .map_err(row_io)?;
        }
        serde_json::to_writer(&mut self.epochs, rec).map_err(std::io::Error::other)?;
        self.epochs.write_all(b"\n")?;
        Ok(())
    }

    fn aborted(&mut self, state: &FlowState, reason: &str) -> Option<PathBuf> {
        let _ = self.flush();
        let p = self.dir.join(SNAPSHOT_DIR).join("aborted.snap");
        let frame = Frame {
            k: state.k,
            t: state.t,
            net: state.net.clone(),
        };
        match write_snapshot(&p, &frame) {
            Ok(()) => {
                log::error!("state before abort ({reason}) written to {}", p.display());
                Some(p)
            }
            Err(e) => {
                log::error!("could not write abort dump: {e}");
                None
            }
        }
    }
}

/// Persisted run outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoredSummary {
    pub run: RunSummary,
    /// Largest initial mass ratio `|V|(B_r(x)) / 2r` found by the density scan.
    pub initial_density: f64,
    pub density_ok: bool,
}

/// A trajectory directory read back from disk.
#[derive(Clone, Debug)]
pub struct StoredTrajectory {
    pub dir: PathBuf,
    pub config_text: String,
    pub trajectory: Trajectory,
    pub summary: Option<StoredSummary>,
}

impl StoredTrajectory {
    pub fn load(dir: &Path) -> Result<Self, IoError> {
        let cfg = dir.join(CONFIG_FILE);
        let config_text = fs::read_to_string(&cfg).map_err(|e| IoError::file(&cfg, e))?;
        let snaps = dir.join(SNAPSHOT_DIR);
        let mut paths: Vec<PathBuf> = fs::read_dir(&snaps)
            .map_err(|e| IoError::file(&snaps, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension().is_some_and(|x| x == "snap")
                    && p.file_stem()
                        .and_then(|s| s.to_str())
                        .is_some_and(|s| s.chars().all(|c| c.is_ascii_digit()))
            })
            .collect();
        paths.sort();
        let frames = paths
            .iter()
            .map(|p| read_snapshot(p))
            .collect::<Result<Vec<_>, _>>()?;
        let ep = dir.join(EPOCHS_FILE);
        let file = File::open(&ep).map_err(|e| IoError::file(&ep, e))?;
        let mut records = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| IoError::file(&ep, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: EpochRecord = serde_json::from_str(&line).map_err(|e| IoError::Snapshot {
                path: ep.clone(),
                message: format!("line {}: {e}", i + 1),
            })?;
            records.push(rec);
        }
        let sp = dir.join(SUMMARY_FILE);
        let summary: Option<StoredSummary> = match fs::read_to_string(&sp) {
            Ok(s) => Some(serde_json::from_str(&s).map_err(|e| IoError::Snapshot {
                path: sp.clone(),
                message: e.to_string(),
            })?),
            Err(_) => None,
        };
        let (termination, ledger) = match &summary {
            Some(s) => (Some(s.run.termination.clone()), s.run.ledger.clone()),
            None => (None, ErrorLedger::default()),
        };
        Ok(Self {
            dir: dir.to_path_buf(),
            config_text,
            trajectory: Trajectory {
                frames,
                records,
                termination,
                ledger,
            },
            summary,
        })
    }

    pub fn termination(&self) -> Option<&Termination> {
        self.trajectory.termination.as_ref()
    }
}

/// Reads `series.csv` as a header and rows of optional numbers.
pub fn read_series(dir: &Path) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>), IoError> {
    let p = dir.join(SERIES_FILE);
    let mut rdr = csv::Reader::from_path(&p).map_err(|e| csv_err(&p, e))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_err(&p, e))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(&p, e))?;
        rows.push(rec.iter().map(|s| s.parse::<f64>().ok()).collect());
    }
    Ok((header, rows))
}
